//! Collision-probability depth versus full 2-design depth on periodic and open brickworks.

use twodesign::architectures::{Boundary, EnsembleSpec};
use twodesign::engine::{design_depth, EngineConfig, ErrorKind};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let cfg = EngineConfig::default();
    for eps in [1e-2, 1e-4] {
        for n in [8, 10, 12] {
            for boundary in [Boundary::Open, Boundary::Periodic] {
                let spec = EnsembleSpec::brickwork(n, boundary, LocalDim::QUBIT)?;
                let m = design_depth(&spec, eps, ErrorKind::Multiplicative, &cfg)?;
                let c = design_depth(&spec, eps, ErrorKind::Collisional, &cfg)?;
                println!("eps={eps:.0e} n={n:>2} {boundary:?}: design {:.3}, anticoncentration {:.3}", m.depth, c.depth);
            }
        }
    }
    Ok(())
}
