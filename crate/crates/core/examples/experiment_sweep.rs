//! Error of every experiment class on the open brickwork; shows which product experiment is hardest.

use twodesign::architectures::{Boundary, EnsembleSpec};
use twodesign::engine::{experiment_sweep, EngineConfig};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let spec = EnsembleSpec::brickwork(8, Boundary::Open, LocalDim::QUBIT)?;
    let steps = [1, 5, 9, 13, 17];
    let sweep = experiment_sweep(&spec, &steps, &EngineConfig::default())?;
    println!("{} classes under the brickwork symmetries", sweep.classes.len());
    for (k, &s) in steps.iter().enumerate() {
        let top = &sweep.classes[sweep.argmax[k]];
        println!("depth {s:>2}: worst {} (orbit {}) error {:.4e}", top.representative, top.orbit_size, top.errors[k]);
    }
    Ok(())
}
