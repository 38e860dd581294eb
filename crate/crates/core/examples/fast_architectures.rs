//! Layers needed by the matching-based architectures, averaged over sampled realizations.

use twodesign::analytics::{dalzell_bounds, DalzellKind};
use twodesign::architectures::{Boundary, EnsembleSpec};
use twodesign::engine::{design_depth, EngineConfig, ErrorKind};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let q = LocalDim::QUBIT;
    let eps = 0.01;
    let cfg = EngineConfig { realizations: 50, master_seed: 3, ..EngineConfig::default() };
    for n in [8, 10, 12] {
        let bound = dalzell_bounds(n, q, eps, DalzellKind::General)? / 2.0;
        let specs = [
            ("brickwork", EnsembleSpec::brickwork(n, Boundary::Open, q)?),
            ("pcg", EnsembleSpec::pcg(n, q)?),
            ("pb", EnsembleSpec::pb(n, q)?),
            ("pbfe", EnsembleSpec::pbfe(n, q)?),
        ];
        for (name, spec) in specs {
            let d = design_depth(&spec, eps, ErrorKind::Multiplicative, &cfg)?;
            println!(
                "n={n:>2} {name:>9}: {:5.2} layers (error {:.2e} +- {:.1e} at {}); general bound {bound:.2} gates/site",
                d.depth, d.upper.value, d.upper.std_err, d.upper.step
            );
        }
    }
    Ok(())
}
