//! Loads a graph from JSON and compares it with a built-in family of the same size.

use twodesign::architectures::{EnsembleSpec, Family, SiteGraph};
use twodesign::engine::{design_depth, EngineConfig, ErrorKind};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    // three legs of length two around site 0, two of them joined at the tips
    let g = SiteGraph::from_json(r#"{"n": 7, "edges": [[0,1],[0,2],[0,3],[1,4],[2,5],[3,6],[5,6]]}"#)?;
    println!("{}", g.to_json()?);
    let cfg = EngineConfig::default();
    let custom = design_depth(&EnsembleSpec::graph(g, LocalDim::QUBIT)?, 0.01, ErrorKind::Multiplicative, &cfg)?;
    let tree = design_depth(&EnsembleSpec::family(Family::Tree { arity: 3 }, 7, LocalDim::QUBIT)?, 0.01, ErrorKind::Multiplicative, &cfg)?;
    println!("custom graph: {:.1} gates, complete ternary tree: {:.1} gates", custom.depth, tree.depth);
    Ok(())
}
