use twodesign::architectures::{Boundary, EnsembleSpec, Family, GateSequence, SiteGraph};
use twodesign::engine::{multiplicative_error, quadratic_form, EngineConfig};
use twodesign::oracle::{
    choi_bisection, dense_global_haar, dense_sequence_moment, dense_spec_moment, mc_haar_average, sector_error,
    sector_matrix, spectral_error, CommutantSpectrum,
};
use twodesign::perm_algebra::{haar_moment_diagonal, ExperimentVector, LocalDim};

const Q: LocalDim = LocalDim::QUBIT;

fn engine(spec: &EnsembleSpec, s: usize) -> f64 {
    multiplicative_error(spec, s, &EngineConfig::default()).unwrap().value
}

fn choi(spec: &EnsembleSpec, s: usize) -> f64 {
    let haar = dense_global_haar(spec.n, Q).unwrap();
    choi_bisection(&dense_spec_moment(spec, s).unwrap(), &haar, 1e-13).unwrap().epsilon
}

// Values obtained by Choi bisection on the dense moment operator.
#[test]
fn linear_three_sites_frozen() {
    let spec = EnsembleSpec::family(Family::Linear, 3, Q).unwrap();
    for (s, want) in [(1, 5.0), (2, 3.5), (3, 2.45), (4, 1.715)] {
        assert!((engine(&spec, s) - want).abs() < 1e-10, "s={s}");
        assert!((choi(&spec, s) - want).abs() < 1e-9, "s={s}");
    }
}

#[test]
fn brickwork_three_sites_depth_three() {
    let spec = EnsembleSpec::brickwork(3, Boundary::Open, Q).unwrap();
    assert!((engine(&spec, 3) - 0.8).abs() < 1e-10);
    assert!((choi(&spec, 3) - 0.8).abs() < 1e-9);
}

#[test]
fn two_site_graph_is_haar_after_one_gate() {
    let spec = EnsembleSpec::family(Family::Linear, 2, Q).unwrap();
    for s in 1..=3 {
        assert!(engine(&spec, s).abs() < 1e-12);
        assert!(choi(&spec, s).abs() < 1e-9);
    }
}

#[test]
fn custom_graph_matches_sector_formula() {
    let g = SiteGraph::new(3, vec![(0, 2), (1, 2)]).unwrap();
    let spec = EnsembleSpec::graph(g, Q).unwrap();
    let hs = sector_matrix(&dense_global_haar(3, Q).unwrap()).unwrap();
    for s in [1, 4, 7] {
        let sec = sector_error(&sector_matrix(&dense_spec_moment(&spec, s).unwrap()).unwrap(), &hs);
        let e = engine(&spec, s);
        assert!((e - sec).abs() <= 1e-8 * e.abs(), "s={s}: {e} vs {sec}");
    }
}

#[test]
fn spectral_reference_matches_engine_per_experiment() {
    let cfg = EngineConfig::default();
    for fam in [Family::Linear, Family::Complete] {
        let spec = EnsembleSpec::family(fam, 3, Q).unwrap();
        let spectrum = CommutantSpectrum::of_step(&spec).unwrap();
        assert!(spectrum.groups.iter().any(|g| (g.eigenvalue - 1.0).abs() < 1e-9));
        for mask in 0..8 {
            let a = ExperimentVector::from_mask(3, mask).unwrap();
            for s in [0, 2, 9] {
                let qf = quadratic_form(&spec, &a, s, &cfg).unwrap().mean;
                let e = qf / haar_moment_diagonal(3, Q, a.parity()).unwrap() - 1.0;
                let r = spectrum.error(&a, s).unwrap();
                assert!((e - r).abs() < 1e-9 * e.abs().max(1.0), "{fam} a={mask:03b} s={s}: {e} vs {r}");
            }
        }
    }
    let spec = EnsembleSpec::family(Family::Linear, 2, Q).unwrap();
    let a = ExperimentVector::from_mask(2, 0b11).unwrap();
    assert!(spectral_error(&spec, &a, 0).unwrap() > 0.0);
    assert!(CommutantSpectrum::of_step(&EnsembleSpec::brickwork(3, Boundary::Open, Q).unwrap()).is_err());
}

#[test]
fn monte_carlo_circuit_average_matches_dense() {
    let gates = GateSequence::new(2, vec![(0, 1)]).unwrap();
    let samples = 4000;
    let mc = mc_haar_average(&gates, 2, Q, samples, 9).unwrap();
    let dense = dense_sequence_moment(&gates, 2, Q).unwrap();
    let bound = 5.0 / (samples as f64).sqrt();
    let worst = (&mc.mean.matrix - &dense.matrix).amax();
    assert!(worst < bound, "{worst} vs {bound}");
    assert!(mc.max_imag < bound);
}

#[test]
fn oracle_rejects_large_systems() {
    let spec = EnsembleSpec::family(Family::Linear, 4, Q).unwrap();
    assert!(dense_spec_moment(&spec, 1).is_err());
}
