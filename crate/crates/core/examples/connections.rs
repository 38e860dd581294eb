//! Naive and greedy connected-block counts, against the coupon-collector estimate for the path.

use twodesign::architectures::{EnsembleSpec, Family};
use twodesign::connectivity::{coupon_collector_expectation, mean_connection_count};
use twodesign::perm_algebra::LocalDim;

fn main() -> twodesign::Result<()> {
    let n = 10;
    let s = 1000;
    println!("coupon collector (n-1)H_(n-1) = {:.2}", coupon_collector_expectation(n - 1)?);
    for fam in [Family::Linear, Family::Star, Family::Hourglass, Family::Bridge, Family::Lollipop] {
        let spec = EnsembleSpec::family(fam, n, LocalDim::QUBIT)?;
        let st = mean_connection_count(&spec, s, 2000, 1)?;
        println!(
            "{fam:>10}: gates per connection naive {:6.2}, greedy {:6.2}",
            st.naive_gates_per_connection(),
            st.greedy_gates_per_connection()
        );
    }
    Ok(())
}
