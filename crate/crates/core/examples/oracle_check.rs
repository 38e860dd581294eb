//! Engine errors against Choi bisection and the sector formula on the dense moment operator.

use twodesign::architectures::{Boundary, EnsembleSpec, Family};
use twodesign::engine::{multiplicative_error, EngineConfig};
use twodesign::oracle::{choi_bisection, dense_global_haar, dense_spec_moment, psd_check, sector_error, sector_matrix};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let q = LocalDim::QUBIT;
    let n = 3;
    let haar = dense_global_haar(n, q)?;
    let hs = sector_matrix(&haar)?;
    let specs = [
        ("star", EnsembleSpec::family(Family::Star, n, q)?, 4),
        ("complete", EnsembleSpec::family(Family::Complete, n, q)?, 4),
        ("brickwork", EnsembleSpec::brickwork(n, Boundary::Open, q)?, 3),
    ];
    for (name, spec, s) in specs {
        let engine = multiplicative_error(&spec, s, &EngineConfig::default())?.value;
        let dense = dense_spec_moment(&spec, s)?;
        let sector = sector_error(&sector_matrix(&dense)?, &hs);
        let choi = choi_bisection(&dense, &haar, 1e-12)?;
        let psd = psd_check(&dense.matrix, 1e-10)?;
        println!(
            "{name:>9} s={s}: engine {engine:.10} sector {sector:.10} choi {:.10} ({:?}), min eigenvalue {:.1e}",
            choi.epsilon, choi.method, psd.min_eigenvalue
        );
    }
    Ok(())
}
