//! Multiplicative and collisional error of the open brickwork, layer by layer.

use twodesign::architectures::{Boundary, EnsembleSpec};
use twodesign::engine::{error_curve, EngineConfig};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let spec = EnsembleSpec::brickwork(10, Boundary::Open, LocalDim::QUBIT)?;
    let steps: Vec<usize> = (0..=24).step_by(2).collect();
    let curve = error_curve(&spec, &steps, &EngineConfig::default())?;
    println!("{:>5} {:>12} {:>12}  argmax", "depth", "mult", "coll");
    for p in &curve.points {
        println!("{:>5} {:>12.4e} {:>12.4e}  {}", p.step, p.mult_error, p.coll_error, p.argmax);
    }
    Ok(())
}
