//! Closed-form brickwork depths and lower bounds next to the exact engine.

use twodesign::analytics::{
    dalzell_bounds, delta_gap, delta_gap_asymptote, design_depth_formula, leading_order_depth, BetaVariant, DalzellKind,
};
use twodesign::architectures::{Boundary, EnsembleSpec};
use twodesign::engine::{design_depth, EngineConfig, ErrorKind};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let q = LocalDim::QUBIT;
    let eps = 0.01;
    println!("{:>3} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}", "n", "engine", "formula", "leading", "lower", "gap", "gap_inf");
    for n in [8, 10, 12, 14] {
        let spec = EnsembleSpec::brickwork(n, Boundary::Open, q)?;
        let exact = design_depth(&spec, eps, ErrorKind::Multiplicative, &EngineConfig::default())?.depth;
        println!(
            "{n:>3} {exact:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
            design_depth_formula(n, q, eps, BetaVariant::EntangledBoundaries)?,
            leading_order_depth(n, q, eps)?,
            dalzell_bounds(n, q, eps, DalzellKind::Brickwork)?,
            delta_gap(n, q)?,
            delta_gap_asymptote(n),
        );
    }
    Ok(())
}
