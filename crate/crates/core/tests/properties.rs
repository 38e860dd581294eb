use proptest::prelude::*;

use twodesign::analytics::{design_depth_formula, BetaVariant};
use twodesign::architectures::{Boundary, EnsembleSpec, Family, GateSequence, SiteGraph};
use twodesign::connectivity::{greedy_count, is_connected, mean_connection_count, naive_count};
use twodesign::engine::{collisional_error, interpolate_depth, multiplicative_error, quadratic_form, EngineConfig};
use twodesign::perm_algebra::{ExperimentVector, LocalDim, Parity};

const Q: LocalDim = LocalDim::QUBIT;

/// Random spanning tree plus extra edges, so the graph is connected.
fn connected_graph() -> impl Strategy<Value = SiteGraph> {
    (3usize..=7).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
        let extra = prop::collection::vec((0..n, 0..n), 0..6);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            for (i, j) in extra {
                let e = (i.min(j), i.max(j));
                if i != j && !edges.contains(&e) {
                    edges.push(e);
                }
            }
            SiteGraph::new(n, edges).unwrap()
        })
    })
}

fn gate_sequence(n: usize, max_len: usize) -> impl Strategy<Value = GateSequence> {
    prop::collection::vec((0..n, 1..n), 0..max_len)
        .prop_map(move |v| GateSequence::new(n, v.into_iter().map(|(i, d)| (i, (i + d) % n)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_quadratic_forms_never_increase(g in connected_graph(), mask in any::<u64>()) {
        let n = g.n();
        let spec = EnsembleSpec::graph(g, Q).unwrap();
        let a = ExperimentVector::from_mask(n, mask & ((1 << n) - 1)).unwrap();
        let cfg = EngineConfig::default();
        let mut prev = f64::INFINITY;
        for s in 0..25 {
            let qf = quadratic_form(&spec, &a, s, &cfg).unwrap().mean;
            prop_assert!(qf <= prev * (1.0 + 1e-12));
            prev = qf;
        }
    }

    #[test]
    fn collision_never_exceeds_maximum(g in connected_graph(), s in 0usize..30) {
        let spec = EnsembleSpec::graph(g, Q).unwrap();
        let cfg = EngineConfig::default();
        let m = multiplicative_error(&spec, s, &cfg).unwrap().value;
        let c = collisional_error(&spec, s, &cfg).unwrap().value;
        prop_assert!(c <= m + 1e-12);
        prop_assert!(m >= -1e-12);
    }

    #[test]
    fn symmetry_reduction_is_exact(g in connected_graph(), s in 0usize..20) {
        let spec = EnsembleSpec::graph(g, Q).unwrap();
        let with = multiplicative_error(&spec, s, &EngineConfig::default()).unwrap().value;
        let without = multiplicative_error(&spec, s, &EngineConfig { symmetry: false, ..EngineConfig::default() }).unwrap().value;
        prop_assert!((with - without).abs() <= 1e-12 * with.abs().max(1.0));
    }

    #[test]
    fn odd_brickwork_depths_never_increase(n in 4usize..=10, periodic in any::<bool>()) {
        let boundary = if periodic && n % 2 == 0 { Boundary::Periodic } else { Boundary::Open };
        let spec = EnsembleSpec::brickwork(n, boundary, Q).unwrap();
        let cfg = EngineConfig::default();
        let errs: Vec<f64> = (0..8).map(|k| multiplicative_error(&spec, 2 * k + 1, &cfg).unwrap().value).collect();
        prop_assert!(errs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn greedy_dominates_naive((n, seq) in (2usize..=8).prop_flat_map(|n| (Just(n), gate_sequence(n, 80)))) {
        let naive = naive_count(&seq, n);
        prop_assert!(greedy_count(&seq, n) >= naive);
        prop_assert!(naive * (n - 1) <= seq.len());
        prop_assert_eq!(naive >= 1, is_connected(&seq, n));
    }

    #[test]
    fn experiment_vector_parity(n in 1usize..=20, mask in any::<u64>()) {
        let a = ExperimentVector::from_mask(n, mask & ((1u64 << n) - 1)).unwrap();
        let parity = if a.weight() % 2 == 0 { Parity::Even } else { Parity::Odd };
        prop_assert_eq!(a.parity(), parity);
        prop_assert_eq!(a.bits().filter(|&b| b == 1).count() as u32, a.weight());
        let product: f64 = (0..n).map(|i| a.sign(i)).product();
        prop_assert_eq!(product < 0.0, a.weight() % 2 == 1);
    }

    #[test]
    fn interpolated_depth_is_bracketed(lo in 0usize..100, gap in 1usize..5, e_hi in 1e-6f64..0.5, ratio in 1.01f64..100.0, t in 0.0f64..1.0) {
        let e_lo = e_hi * ratio;
        let eps = (e_hi.ln() + t * (e_lo.ln() - e_hi.ln())).exp();
        let d = interpolate_depth(lo, e_lo, lo + gap, e_hi, eps);
        prop_assert!(d >= lo as f64 - 1e-9 && d <= (lo + gap) as f64 + 1e-9);
    }

    #[test]
    fn boundary_experiment_needs_more_depth(n in 4usize..400, eps in 1e-8f64..0.1) {
        let eb = design_depth_formula(n, Q, eps, BetaVariant::EntangledBoundaries).unwrap();
        let coll = design_depth_formula(n, Q, eps, BetaVariant::Collision).unwrap();
        prop_assert!(eb > coll);
    }
}

#[test]
fn connection_statistics_are_reproducible() {
    let spec = EnsembleSpec::family(Family::Lollipop, 8, Q).unwrap();
    let a = mean_connection_count(&spec, 200, 64, 3).unwrap();
    let b = mean_connection_count(&spec, 200, 64, 3).unwrap();
    assert_eq!(a, b);
    let c = mean_connection_count(&spec, 200, 64, 4).unwrap();
    assert_ne!(a, c);
}
