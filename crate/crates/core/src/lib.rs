//! Anticoncentration and unitary 2-design depths of random quantum circuit
//! architectures, computed in the permutation basis of the two-copy commutant.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --release --example error_curve         # errors per layer, open brickwork
//! cargo run --release --example design_depth        # gates to a 0.01 design on graph families
//! cargo run --release --example experiment_sweep    # which product experiment is hardest
//! cargo run --release --example anticoncentration   # collision depth vs design depth
//! cargo run --release --example fast_architectures  # PCG, PB, PBFE over sampled realizations
//! cargo run --release --example connections         # naive and greedy connected blocks
//! cargo run --release --example formulas            # closed forms and lower bounds
//! cargo run --release --example oracle_check        # engine against dense moment operators
//! cargo run --release --example custom_graph        # graphs from JSON
//! ```

pub mod analytics;
pub mod architectures;
pub mod cli;
pub mod connectivity;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod perm_algebra;

pub use error::{Error, Result};
