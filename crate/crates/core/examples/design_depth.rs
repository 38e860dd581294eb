//! Gates needed by several graph ensembles to reach a 0.01-approximate 2-design.

use twodesign::architectures::{EnsembleSpec, Family};
use twodesign::engine::{design_depth, EngineConfig, ErrorKind};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let n = 8;
    let cfg = EngineConfig::default();
    for fam in [Family::Complete, Family::Star, Family::Hourglass, Family::Circle, Family::Linear, Family::Bridge, Family::Lollipop] {
        let spec = EnsembleSpec::family(fam, n, LocalDim::QUBIT)?;
        let d = design_depth(&spec, 0.01, ErrorKind::Multiplicative, &cfg)?;
        let c = design_depth(&spec, 0.01, ErrorKind::Collisional, &cfg)?;
        println!("{fam:>10}: {:7.1} gates (anticoncentration {:6.1}), worst experiment {}", d.depth, c.depth, d.upper.argmax);
    }
    Ok(())
}
