//! Step-by-step evolution of all boundary states of a set of experiments.

use nalgebra::DMatrix;

use super::blocks::Partition;
use super::kernels::{signed_sum, GraphKernel};
use crate::architectures::{brickwork_layers, Architecture, EnsembleSpec, LayerStream};
use crate::error::Result;
use crate::perm_algebra::{boundary_site_norm, boundary_state, ExperimentVector};

/// Mean and standard error of a Monte Carlo quantity (`std_err = 0` when exact).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn exact(mean: f64) -> Self {
        Estimate { mean, std_err: 0.0 }
    }

    fn from_samples(xs: &[f64]) -> Self {
        let k = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / k;
        if xs.len() < 2 {
            return Estimate::exact(mean);
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        Estimate { mean, std_err: (var / k).sqrt() }
    }
}

const CHUNK_BYTES: usize = 1 << 19;

struct Chunk {
    k: usize,
    data: Vec<f64>,
    scratch: Vec<f64>,
}

struct LayeredRun {
    stream: LayerStream,
    partition: Option<Partition>,
    state: DMatrix<f64>,
}

/// Transfer matrices of a fixed brickwork, keyed by the parity of the next layer.
struct BrickCache {
    odd: Partition,
    even: Partition,
    to_even: DMatrix<f64>,
    to_odd: DMatrix<f64>,
}

enum Inner {
    Local,
    Graph { kernel: GraphKernel, chunks: Vec<Chunk> },
    Layered { runs: Vec<LayeredRun>, brick: Option<BrickCache> },
}

pub(crate) struct Evolution {
    spec: EnsembleSpec,
    reps: Vec<ExperimentVector>,
    step: usize,
    inner: Inner,
}

fn chunk_width(n: usize) -> usize {
    (CHUNK_BYTES / 8 >> n).clamp(1, 64)
}

fn build_chunks(n: usize, columns: &[Vec<f64>]) -> Vec<Chunk> {
    let rows = 1usize << n;
    columns
        .chunks(chunk_width(n))
        .map(|cols| {
            let k = cols.len();
            let mut data = vec![0.0; rows * k];
            for (c, col) in cols.iter().enumerate() {
                for (idx, &x) in col.iter().enumerate() {
                    data[idx * k + c] = x;
                }
            }
            Chunk { k, scratch: vec![0.0; data.len()], data }
        })
        .collect()
}

impl Evolution {
    /// `realizations` and `seed` only matter for sampled ensembles.
    pub fn new(spec: &EnsembleSpec, reps: Vec<ExperimentVector>, realizations: usize, seed: u64) -> Result<Self> {
        let inner = match &spec.arch {
            Architecture::Local => Inner::Local,
            Architecture::Graph { graph } => {
                let cols = reps
                    .iter()
                    .map(|a| Ok(boundary_state(a, spec.q)?.into_coeffs()))
                    .collect::<Result<Vec<_>>>()?;
                Inner::Graph { kernel: GraphKernel::new(graph, spec.q), chunks: build_chunks(spec.n, &cols) }
            }
            arch => {
                let count = if spec.is_sampled() { realizations.max(1) } else { 1 };
                let runs = (0..count as u64)
                    .map(|r| {
                        Ok(LayeredRun {
                            stream: LayerStream::new(spec, seed, r)?,
                            partition: None,
                            state: DMatrix::zeros(0, 0),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let brick = match arch {
                    Architecture::Brickwork { boundary } => {
                        let (lo, le) = brickwork_layers(spec.n, *boundary)?;
                        let odd = Partition::from_layer(spec.n, &lo);
                        let even = Partition::from_layer(spec.n, &le);
                        Some(BrickCache {
                            to_even: odd.transfer_to(&even, spec.q),
                            to_odd: even.transfer_to(&odd, spec.q),
                            odd,
                            even,
                        })
                    }
                    _ => None,
                };
                Inner::Layered { runs, brick }
            }
        };
        Ok(Evolution { spec: spec.clone(), reps, step: 0, inner })
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn reps(&self) -> &[ExperimentVector] {
        &self.reps
    }

    pub fn advance(&mut self) -> Result<()> {
        self.step += 1;
        let (n, q) = (self.spec.n, self.spec.q);
        match &mut self.inner {
            Inner::Local => {}
            Inner::Graph { kernel, chunks } => {
                for ch in chunks.iter_mut() {
                    kernel.step(&ch.data, &mut ch.scratch, ch.k);
                    std::mem::swap(&mut ch.data, &mut ch.scratch);
                }
            }
            Inner::Layered { runs, brick } => {
                for run in runs.iter_mut() {
                    let layer = run.stream.next_layer()?;
                    let (next, t) = match (&run.partition, brick.as_ref()) {
                        (None, _) => {
                            let p = Partition::from_layer(n, &layer);
                            let mut s = DMatrix::zeros(p.dim(), self.reps.len());
                            for (c, a) in self.reps.iter().enumerate() {
                                s.column_mut(c).copy_from_slice(&p.initial_vector(a, q));
                            }
                            run.state = s;
                            run.partition = Some(p);
                            continue;
                        }
                        (Some(_), Some(b)) => {
                            if run.stream.depth() % 2 == 1 {
                                (b.odd.clone(), &b.to_odd)
                            } else {
                                (b.even.clone(), &b.to_even)
                            }
                        }
                        (Some(p), None) => {
                            let next = Partition::from_layer(n, &layer);
                            let t = p.transfer_to(&next, q);
                            run.state = &t * &run.state;
                            run.partition = Some(next);
                            continue;
                        }
                    };
                    run.state = t * &run.state;
                    run.partition = Some(next);
                }
            }
        }
        Ok(())
    }

    /// Quadratic form of every active experiment at the current step.
    pub fn estimates(&self) -> Vec<Estimate> {
        let q = self.spec.q;
        let initial = |a: &ExperimentVector| (0..a.n()).map(|i| boundary_site_norm(a.sign(i), q)).product::<f64>();
        match &self.inner {
            Inner::Local => self.reps.iter().map(|a| Estimate::exact(initial(a))).collect(),
            Inner::Graph { chunks, .. } => {
                let mut out = Vec::with_capacity(self.reps.len());
                let mut reps = self.reps.iter();
                for ch in chunks {
                    for c in 0..ch.k {
                        let a = reps.next().expect("one column per experiment");
                        out.push(Estimate::exact(signed_sum(&ch.data, ch.k, c, a.mask() as usize)));
                    }
                }
                out
            }
            Inner::Layered { runs, .. } => {
                if self.step == 0 {
                    return self.reps.iter().map(|a| Estimate::exact(initial(a))).collect();
                }
                let mut per_run = vec![0.0; runs.len()];
                self.reps
                    .iter()
                    .enumerate()
                    .map(|(c, a)| {
                        for (v, run) in per_run.iter_mut().zip(runs) {
                            let p = run.partition.as_ref().expect("advanced");
                            *v = signed_sum(run.state.column(c).as_slice(), 1, 0, p.sign_mask(a));
                        }
                        Estimate::from_samples(&per_run)
                    })
                    .collect()
            }
        }
    }

    /// Keeps only experiments with `keep[c]`.
    pub fn retain(&mut self, keep: &[bool]) {
        if keep.iter().all(|&k| k) {
            return;
        }
        let idx: Vec<usize> = (0..keep.len()).filter(|&c| keep[c]).collect();
        self.reps = idx.iter().map(|&c| self.reps[c]).collect();
        let n = self.spec.n;
        match &mut self.inner {
            Inner::Local => {}
            Inner::Graph { chunks, .. } => {
                let mut cols = Vec::with_capacity(idx.len());
                let mut c = 0;
                for ch in chunks.iter() {
                    for j in 0..ch.k {
                        if keep[c] {
                            cols.push(ch.data.iter().skip(j).step_by(ch.k).copied().collect::<Vec<f64>>());
                        }
                        c += 1;
                    }
                }
                *chunks = build_chunks(n, &cols);
            }
            Inner::Layered { runs, .. } => {
                for run in runs.iter_mut() {
                    if run.partition.is_some() {
                        run.state = run.state.select_columns(&idx);
                    }
                }
            }
        }
    }
}
