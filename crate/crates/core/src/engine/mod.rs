//! Errors, experiment sweeps and design depths of circuit ensembles.
//!
//! A step is one gate for graph ensembles and one layer for layered ones.

mod blocks;
mod evolve;
pub(crate) mod kernels;
mod symmetry;

use serde::Serialize;

pub use blocks::Partition;
pub use evolve::Estimate;
use evolve::Evolution;
pub use symmetry::{experiment_classes, symmetry_generators, ClassSet};

use crate::architectures::{Architecture, EnsembleSpec};
use crate::error::{Error, Result};
use crate::perm_algebra::{haar_moment_diagonal, ExperimentVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    /// The moment operator is PSD at this step, so the maximization is exact.
    Guaranteed,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Multiplicative,
    Collisional,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EngineConfig {
    /// Realizations averaged for sampled ensembles.
    pub realizations: usize,
    pub master_seed: u64,
    pub max_steps: usize,
    pub class_cap: usize,
    pub symmetry: bool,
    /// Classes below `prune_factor * epsilon` leave depth searches of graph ensembles, whose
    /// per-experiment errors never increase; at most 1 keeps results exact.
    pub prune_factor: Option<f64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            realizations: 100,
            master_seed: 0,
            max_steps: 100_000,
            class_cap: 1 << 17,
            symmetry: true,
            prune_factor: Some(1.0),
        }
    }
}

pub fn validity(spec: &EnsembleSpec, steps: usize) -> Validity {
    match spec.arch {
        Architecture::Graph { .. } | Architecture::Local | Architecture::Pcg => Validity::Guaranteed,
        Architecture::Brickwork { .. } | Architecture::Pb | Architecture::Pbfe { .. } => {
            if steps == 0 || steps % 2 == 1 {
                Validity::Guaranteed
            } else {
                Validity::Heuristic
            }
        }
    }
}

fn haar(spec: &EnsembleSpec, a: &ExperimentVector) -> f64 {
    haar_moment_diagonal(spec.n, spec.q, a.parity()).expect("n >= 1")
}

/// Relative excess `QF / Haar - 1` of one experiment.
fn relative(spec: &EnsembleSpec, a: &ExperimentVector, e: Estimate) -> Estimate {
    let h = haar(spec, a);
    Estimate { mean: e.mean / h - 1.0, std_err: e.std_err / h }
}

fn classes_for(spec: &EnsembleSpec, kind: ErrorKind, cfg: &EngineConfig) -> Result<ClassSet> {
    match kind {
        ErrorKind::Collisional => Ok(ClassSet::single(ExperimentVector::zeros(spec.n)?)),
        ErrorKind::Multiplicative => experiment_classes(spec, cfg.symmetry, cfg.class_cap),
    }
}

pub fn quadratic_form(spec: &EnsembleSpec, a: &ExperimentVector, steps: usize, cfg: &EngineConfig) -> Result<Estimate> {
    if a.n() != spec.n {
        return Err(Error::InvalidSpec(format!("experiment has {} sites, ensemble {}", a.n(), spec.n)));
    }
    let mut ev = Evolution::new(spec, vec![*a], cfg.realizations, cfg.master_seed)?;
    for _ in 0..steps {
        ev.advance()?;
    }
    Ok(ev.estimates()[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorPoint {
    pub step: usize,
    pub value: f64,
    pub std_err: f64,
    pub argmax: ExperimentVector,
    pub validity: Validity,
}

/// Values within this relative distance count as tied.
const TIE: f64 = 1e-12;

/// Largest error; ties go to the lowest weight, then the lowest mask.
fn best(spec: &EnsembleSpec, step: usize, reps: &[ExperimentVector], qfs: &[Estimate]) -> ErrorPoint {
    let mut out: Option<ErrorPoint> = None;
    for (a, e) in reps.iter().zip(qfs) {
        let r = relative(spec, a, *e);
        let wins = |o: &ErrorPoint| {
            let tol = TIE * o.value.abs().max(r.mean.abs());
            if (r.mean - o.value).abs() <= tol {
                (a.weight(), a.mask()) < (o.argmax.weight(), o.argmax.mask())
            } else {
                r.mean > o.value
            }
        };
        if out.as_ref().is_none_or(wins) {
            out = Some(ErrorPoint { step, value: r.mean, std_err: r.std_err, argmax: *a, validity: validity(spec, step) });
        }
    }
    out.expect("at least one experiment")
}

pub fn multiplicative_error(spec: &EnsembleSpec, steps: usize, cfg: &EngineConfig) -> Result<ErrorPoint> {
    point(spec, steps, ErrorKind::Multiplicative, cfg)
}

pub fn collisional_error(spec: &EnsembleSpec, steps: usize, cfg: &EngineConfig) -> Result<ErrorPoint> {
    point(spec, steps, ErrorKind::Collisional, cfg)
}

fn point(spec: &EnsembleSpec, steps: usize, kind: ErrorKind, cfg: &EngineConfig) -> Result<ErrorPoint> {
    let classes = classes_for(spec, kind, cfg)?;
    let mut ev = Evolution::new(spec, classes.reps.clone(), cfg.realizations, cfg.master_seed)?;
    for _ in 0..steps {
        ev.advance()?;
    }
    Ok(best(spec, steps, ev.reps(), &ev.estimates()))
}

/// Mean and standard error of the multiplicative error of a sampled ensemble.
pub fn sampled_error(spec: &EnsembleSpec, layers: usize, realizations: usize, master_seed: u64) -> Result<Estimate> {
    if !spec.is_sampled() {
        return Err(Error::InvalidSpec("sampled_error needs a matching-based ensemble".into()));
    }
    if realizations < 2 {
        return Err(Error::Config("sampled_error needs at least 2 realizations".into()));
    }
    let cfg = EngineConfig { realizations, master_seed, ..EngineConfig::default() };
    let p = multiplicative_error(spec, layers, &cfg)?;
    Ok(Estimate { mean: p.value, std_err: p.std_err })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub step: usize,
    pub mult_error: f64,
    pub mult_std_err: f64,
    pub coll_error: f64,
    pub coll_std_err: f64,
    pub argmax: ExperimentVector,
    pub validity: Validity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCurve {
    pub points: Vec<CurvePoint>,
}

impl ErrorCurve {
    pub fn steps(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.step).collect()
    }

    pub fn mult_error(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mult_error).collect()
    }

    pub fn coll_error(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.coll_error).collect()
    }
}

fn check_steps(steps: &[usize]) -> Result<()> {
    if steps.is_empty() || steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("step list must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// Drives `ev` through `steps`, calling `visit` with the estimates at each listed step.
fn walk(ev: &mut Evolution, steps: &[usize], mut visit: impl FnMut(usize, &[ExperimentVector], &[Estimate])) -> Result<()> {
    check_steps(steps)?;
    for &s in steps {
        while ev.step() < s {
            ev.advance()?;
        }
        visit(s, ev.reps(), &ev.estimates());
    }
    Ok(())
}

pub fn error_curve(spec: &EnsembleSpec, steps: &[usize], cfg: &EngineConfig) -> Result<ErrorCurve> {
    let classes = classes_for(spec, ErrorKind::Multiplicative, cfg)?;
    let mut ev = Evolution::new(spec, classes.reps.clone(), cfg.realizations, cfg.master_seed)?;
    let mut points = Vec::with_capacity(steps.len());
    walk(&mut ev, steps, |s, reps, qfs| {
        let m = best(spec, s, reps, qfs);
        debug_assert_eq!(reps[0].mask(), 0);
        let c = relative(spec, &reps[0], qfs[0]);
        points.push(CurvePoint {
            step: s,
            mult_error: m.value,
            mult_std_err: m.std_err,
            coll_error: c.mean,
            coll_std_err: c.std_err,
            argmax: m.argmax,
            validity: m.validity,
        });
    })?;
    Ok(ErrorCurve { points })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassTrajectory {
    pub representative: ExperimentVector,
    pub orbit_size: usize,
    pub errors: Vec<f64>,
    pub std_errs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub steps: Vec<usize>,
    pub classes: Vec<ClassTrajectory>,
    /// Index into `classes` of the largest error at each step.
    pub argmax: Vec<usize>,
}

pub fn experiment_sweep(spec: &EnsembleSpec, steps: &[usize], cfg: &EngineConfig) -> Result<SweepResult> {
    let set = classes_for(spec, ErrorKind::Multiplicative, cfg)?;
    let mut classes: Vec<ClassTrajectory> = set
        .reps
        .iter()
        .zip(&set.sizes)
        .map(|(a, &size)| ClassTrajectory { representative: *a, orbit_size: size, errors: Vec::new(), std_errs: Vec::new() })
        .collect();
    let mut argmax = Vec::new();
    let mut ev = Evolution::new(spec, set.reps.clone(), cfg.realizations, cfg.master_seed)?;
    walk(&mut ev, steps, |_, reps, qfs| {
        let mut top = 0;
        for (c, (a, e)) in reps.iter().zip(qfs).enumerate() {
            let r = relative(spec, a, *e);
            classes[c].errors.push(r.mean);
            classes[c].std_errs.push(r.std_err);
            if r.mean > classes[top].errors.last().copied().unwrap_or(f64::NEG_INFINITY) {
                top = c;
            }
        }
        argmax.push(top);
    })?;
    Ok(SweepResult { steps: steps.to_vec(), classes, argmax })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthResult {
    pub epsilon: f64,
    pub kind: ErrorKind,
    /// Step count interpolated linearly in `ln(error)`.
    pub depth: f64,
    /// Last step with error above `epsilon`.
    pub lower: ErrorPoint,
    /// First step with error at most `epsilon`.
    pub upper: ErrorPoint,
}

/// Step at which the log-linear interpolation between two brackets hits `eps`.
pub fn interpolate_depth(lo_step: usize, lo_err: f64, hi_step: usize, hi_err: f64, eps: f64) -> f64 {
    if hi_err <= 0.0 || lo_err <= hi_err {
        return hi_step as f64;
    }
    let frac = (lo_err.ln() - eps.ln()) / (lo_err.ln() - hi_err.ln());
    lo_step as f64 + frac * (hi_step - lo_step) as f64
}

pub fn design_depth(spec: &EnsembleSpec, epsilon: f64, kind: ErrorKind, cfg: &EngineConfig) -> Result<DepthResult> {
    let classes = classes_for(spec, kind, cfg)?;
    depth_search(spec, classes.reps, epsilon, kind, cfg)
}

/// Depth at which a single experiment's error reaches `epsilon`.
pub fn experiment_depth(spec: &EnsembleSpec, a: &ExperimentVector, epsilon: f64, cfg: &EngineConfig) -> Result<DepthResult> {
    depth_search(spec, vec![*a], epsilon, ErrorKind::Multiplicative, cfg)
}

fn depth_search(
    spec: &EnsembleSpec,
    reps: Vec<ExperimentVector>,
    epsilon: f64,
    kind: ErrorKind,
    cfg: &EngineConfig,
) -> Result<DepthResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    let mut ev = Evolution::new(spec, reps.clone(), cfg.realizations, cfg.master_seed)?;
    let mut prev = best(spec, 0, ev.reps(), &ev.estimates());
    if prev.value <= epsilon {
        return Err(Error::Config(format!("epsilon {epsilon} is not below the initial error {}", prev.value)));
    }
    // pruned classes with their error when they left; errors never increase afterwards
    let mut pruned: Vec<(ExperimentVector, f64)> = Vec::new();
    while ev.step() < cfg.max_steps {
        ev.advance()?;
        let step = ev.step();
        let qfs = ev.estimates();
        let cur = best(spec, step, ev.reps(), &qfs);
        if cur.value <= epsilon {
            let rivals: Vec<ExperimentVector> = pruned.iter().filter(|(_, v)| *v >= cur.value).map(|(a, _)| *a).collect();
            let upper = if rivals.is_empty() {
                cur
            } else {
                let mut reps = ev.reps().to_vec();
                let mut all = qfs.clone();
                let mut side = Evolution::new(spec, rivals, cfg.realizations, cfg.master_seed)?;
                for _ in 0..step {
                    side.advance()?;
                }
                reps.extend_from_slice(side.reps());
                all.extend(side.estimates());
                best(spec, step, &reps, &all)
            };
            let depth = interpolate_depth(prev.step, prev.value, upper.step, upper.value, epsilon);
            return Ok(DepthResult { epsilon, kind, depth, lower: prev, upper });
        }
        if let Some(f) = cfg.prune_factor {
            if !spec.is_layered() {
                let keep: Vec<bool> = ev
                    .reps()
                    .iter()
                    .zip(&qfs)
                    .map(|(a, e)| {
                        let r = relative(spec, a, *e).mean;
                        if r < f * epsilon {
                            pruned.push((*a, r));
                            false
                        } else {
                            true
                        }
                    })
                    .collect();
                ev.retain(&keep);
            }
        }
        prev = cur;
    }
    Err(Error::Unreached { epsilon, steps: cfg.max_steps, last_error: prev.value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architectures::{Boundary, Family};
    use crate::perm_algebra::LocalDim;

    const Q: LocalDim = LocalDim::QUBIT;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn zero_step_quadratic_forms() {
        let spec = EnsembleSpec::family(Family::Linear, 2, Q).unwrap();
        let qf = |bits: &[u8]| quadratic_form(&spec, &ExperimentVector::from_bits(bits).unwrap(), 0, &cfg()).unwrap().mean;
        assert!((qf(&[1, 1]) - 16.0).abs() < 1e-12);
        assert!((qf(&[0, 0]) - 16.0 / 9.0).abs() < 1e-12);
        assert!((qf(&[0, 0]) - 16.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn singles_only_two_sites() {
        let spec = EnsembleSpec::local(2, Q).unwrap();
        let m = multiplicative_error(&spec, 0, &cfg()).unwrap();
        assert!((m.value - 9.0).abs() < 1e-12);
        assert_eq!(m.argmax.to_string(), "11");
        let c = collisional_error(&spec, 0, &cfg()).unwrap();
        assert!((c.value - 1.0 / 9.0).abs() < 1e-12);
        let one = EnsembleSpec::local(1, Q).unwrap();
        assert!(multiplicative_error(&one, 0, &cfg()).unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn one_gate_is_haar_on_two_sites() {
        let spec = EnsembleSpec::family(Family::Complete, 2, Q).unwrap();
        assert!(multiplicative_error(&spec, 1, &cfg()).unwrap().value.abs() < 1e-12);
        assert!(collisional_error(&spec, 1, &cfg()).unwrap().value.abs() < 1e-12);
        let pcg = EnsembleSpec::pcg(2, Q).unwrap();
        let e = sampled_error(&pcg, 3, 4, 1).unwrap();
        assert!(e.mean.abs() < 1e-12 && e.std_err < 1e-12);
    }

    #[test]
    fn converges_to_haar_value() {
        let spec = EnsembleSpec::family(Family::Linear, 2, Q).unwrap();
        let qf = quadratic_form(&spec, &ExperimentVector::zeros(2).unwrap(), 40, &cfg()).unwrap();
        assert!((qf.mean - 1.6).abs() < 1e-12);
    }

    #[test]
    fn interpolation_example() {
        assert!((interpolate_depth(5, 0.02, 6, 0.005, 0.01) - 5.5).abs() < 1e-12);
    }

    #[test]
    fn depth_brackets() {
        let spec = EnsembleSpec::family(Family::Linear, 6, Q).unwrap();
        let d = design_depth(&spec, 0.01, ErrorKind::Multiplicative, &cfg()).unwrap();
        assert!(d.lower.value > 0.01 && d.upper.value <= 0.01);
        assert_eq!(d.lower.step + 1, d.upper.step);
        let full = multiplicative_error(&spec, d.upper.step, &cfg()).unwrap();
        assert!((full.value - d.upper.value).abs() < 1e-15);
        let no_prune = EngineConfig { prune_factor: None, ..cfg() };
        let d2 = design_depth(&spec, 0.01, ErrorKind::Multiplicative, &no_prune).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn unreachable_reports_last_error() {
        let spec = EnsembleSpec::family(Family::Linear, 6, Q).unwrap();
        let c = EngineConfig { max_steps: 3, ..cfg() };
        match design_depth(&spec, 0.01, ErrorKind::Multiplicative, &c) {
            Err(Error::Unreached { last_error, steps: 3, .. }) => assert!(last_error > 0.01),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn brickwork_block_basis_matches_graph_path() {
        // A brickwork layer on two sites is a single gate.
        let bw = EnsembleSpec::brickwork(2, Boundary::Open, Q).unwrap();
        let g = EnsembleSpec::family(Family::Linear, 2, Q).unwrap();
        for a in ["00", "01", "11"] {
            let a: ExperimentVector = a.parse().unwrap();
            let x = quadratic_form(&bw, &a, 3, &cfg()).unwrap().mean;
            let y = quadratic_form(&g, &a, 1, &cfg()).unwrap().mean;
            assert!((x - y).abs() < 1e-13);
        }
    }
}
