//! Brute-force reference computations on the full `q^{4n}`-dimensional space.
//!
//! A vectorized index is `((c0 * d + c1) * d + c2) * d + c3` for the copies
//! `(conj U, conj U, U, U)`, each `c_k` a base-`q` number with site `i` at
//! place `q^i`, and `d = q^n`.

mod choi;
mod haar;
mod spectral;

use nalgebra::{DMatrix, DVector};

pub use choi::{choi_bisection, choi_matrix, psd_check, ChoiMethod, ChoiReport, PsdReport};
pub use haar::{haar_unitary, mc_gate_transfer, mc_haar_average, McAverage, McTransfer};
pub use spectral::{spectral_error, CommutantSpectrum, EigenGroup};

use crate::architectures::{brickwork_layers, Architecture, EnsembleSpec, GateSequence, Pair};
use crate::error::{Error, Result};
use crate::perm_algebra::{weingarten_pair, LocalDim};

/// Largest vectorized dimension the oracle accepts.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub q: LocalDim,
    pub d: usize,
    pub dim: usize,
}

impl Layout {
    pub fn new(n: usize, q: LocalDim) -> Result<Self> {
        let d = (q.get() as usize).checked_pow(n as u32).unwrap_or(usize::MAX);
        let dim = d.checked_pow(4).unwrap_or(usize::MAX);
        if n == 0 || dim > MAX_DIM {
            return Err(Error::OracleCap { n, max: 3 });
        }
        Ok(Layout { n, q, d, dim })
    }

    fn qu(&self) -> usize {
        self.q.get() as usize
    }

    pub fn stride(&self, copy: usize, site: usize) -> usize {
        self.qu().pow(site as u32) * self.d.pow(3 - copy as u32)
    }

    pub fn digit(&self, idx: usize, copy: usize, site: usize) -> usize {
        idx / self.stride(copy, site) % self.qu()
    }

    /// Column of the normalized permutation state; bit `i` of `sigma` is swap on site `i`.
    pub fn perm_state(&self, sigma: usize) -> Vec<f64> {
        let norm = (self.qu() as f64).powi(-(self.n as i32));
        (0..self.dim)
            .map(|idx| {
                let ok = (0..self.n).all(|i| {
                    let x: Vec<usize> = (0..4).map(|k| self.digit(idx, k, i)).collect();
                    if sigma >> i & 1 == 0 {
                        x[2] == x[0] && x[3] == x[1]
                    } else {
                        x[2] == x[1] && x[3] == x[0]
                    }
                });
                if ok {
                    norm
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// `V`: all `2^n` normalized permutation states as columns.
    pub fn basis(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = (0..1usize << self.n).map(|s| DVector::from_vec(self.perm_state(s))).collect();
        DMatrix::from_columns(&cols)
    }
}

/// `(V, W)` with `W = V (V^T V)^{-1}` the dual cobasis.
pub fn basis_and_cobasis(layout: &Layout) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let v = layout.basis();
    let gram = v.tr_mul(&v);
    let inv = gram.try_inverse().ok_or_else(|| Error::Numerical("singular Gram matrix".into()))?;
    let w = &v * inv;
    Ok((v, w))
}

/// Haar moment on the sites in `sites`, fused into one system, applied to `v` in place.
pub fn apply_moment(v: &mut [f64], layout: &Layout, sites: &[usize]) -> Result<()> {
    let qu = layout.qu();
    let big_d = qu.pow(sites.len() as u32);
    let (wg_e, wg_s) = weingarten_pair(layout.q, big_d as u64)?;
    let offsets: Vec<Vec<usize>> = (0..4)
        .map(|k| {
            (0..big_d)
                .map(|x| sites.iter().enumerate().map(|(m, &s)| (x / qu.pow(m as u32) % qu) * layout.stride(k, s)).sum())
                .collect()
        })
        .collect();
    let zero = |idx: usize| (0..4).all(|k| sites.iter().all(|&s| layout.digit(idx, k, s) == 0));
    for base in (0..layout.dim).filter(|&b| zero(b)) {
        let at = |x0: usize, x1: usize, x2: usize, x3: usize| base + offsets[0][x0] + offsets[1][x1] + offsets[2][x2] + offsets[3][x3];
        let (mut oe, mut os) = (0.0, 0.0);
        for x0 in 0..big_d {
            for x1 in 0..big_d {
                oe += v[at(x0, x1, x0, x1)];
                os += v[at(x0, x1, x1, x0)];
            }
        }
        let ce = wg_e * oe + wg_s * os;
        let cs = wg_s * oe + wg_e * os;
        for x0 in 0..big_d {
            for x1 in 0..big_d {
                for x2 in 0..big_d {
                    for x3 in 0..big_d {
                        v[at(x0, x1, x2, x3)] = 0.0;
                    }
                }
            }
        }
        for x0 in 0..big_d {
            for x1 in 0..big_d {
                v[at(x0, x1, x0, x1)] += ce;
                v[at(x0, x1, x1, x0)] += cs;
            }
        }
    }
    Ok(())
}

/// Dense vectorized moment operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMoment {
    pub n: usize,
    pub q: LocalDim,
    pub matrix: DMatrix<f64>,
}

impl DenseMoment {
    pub fn layout(&self) -> Layout {
        Layout::new(self.n, self.q).expect("constructed under the cap")
    }

    fn from_columns(layout: &Layout, f: impl Fn(&mut [f64]) -> Result<()>) -> Result<Self> {
        let mut m = DMatrix::identity(layout.dim, layout.dim);
        for mut col in m.column_iter_mut() {
            f(col.as_mut_slice())?;
        }
        Ok(DenseMoment { n: layout.n, q: layout.q, matrix: m })
    }

    /// Max entrywise asymmetry.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for c in 0..m.ncols() {
            for r in 0..c {
                worst = worst.max((m[(r, c)] - m[(c, r)]).abs());
            }
        }
        worst
    }
}

pub fn dense_gate_moment(sites: Pair, n: usize, q: LocalDim) -> Result<DenseMoment> {
    let layout = Layout::new(n, q)?;
    crate::perm_algebra::check_pair(n, sites.0, sites.1)?;
    DenseMoment::from_columns(&layout, |v| apply_moment(v, &layout, &[sites.0, sites.1]))
}

pub fn dense_global_haar(n: usize, q: LocalDim) -> Result<DenseMoment> {
    let layout = Layout::new(n, q)?;
    let sites: Vec<usize> = (0..n).collect();
    DenseMoment::from_columns(&layout, |v| apply_moment(v, &layout, &sites))
}

pub fn dense_local_haar(n: usize, q: LocalDim) -> Result<DenseMoment> {
    let layout = Layout::new(n, q)?;
    DenseMoment::from_columns(&layout, |v| (0..n).try_for_each(|i| apply_moment(v, &layout, &[i])))
}

/// One ensemble step, applied to `v` in place.
fn apply_step(v: &mut [f64], layout: &Layout, spec: &EnsembleSpec, step: usize) -> Result<()> {
    match &spec.arch {
        Architecture::Local => Ok(()),
        Architecture::Graph { graph } => {
            let k = graph.edges().len() as f64;
            let mut acc = vec![0.0; v.len()];
            for &(i, j) in graph.edges() {
                let mut w = v.to_vec();
                apply_moment(&mut w, layout, &[i, j])?;
                acc.iter_mut().zip(&w).for_each(|(a, x)| *a += x / k);
            }
            v.copy_from_slice(&acc);
            Ok(())
        }
        Architecture::Brickwork { boundary } => {
            let (odd, even) = brickwork_layers(spec.n, *boundary)?;
            let layer = if step % 2 == 1 { odd } else { even };
            layer.pairs().iter().try_for_each(|&(i, j)| apply_moment(v, layout, &[i, j]))
        }
        _ => Err(Error::InvalidSpec("the dense oracle handles deterministic ensembles only".into())),
    }
}

/// Matrix of `X_steps ... X_1` on the commutant: `W^T X V`.
pub fn commutant_matrix(spec: &EnsembleSpec, steps: usize) -> Result<DMatrix<f64>> {
    let layout = Layout::new(spec.n, spec.q)?;
    let (v, w) = basis_and_cobasis(&layout)?;
    let mut y = v.clone();
    for mut col in y.column_iter_mut() {
        for t in 1..=steps {
            apply_step(col.as_mut_slice(), &layout, spec, t)?;
        }
    }
    Ok(w.tr_mul(&y))
}

/// `P_loc X_steps ... X_1 P_loc`: the circuit between layers of single-site Haar unitaries.
pub fn dense_spec_moment(spec: &EnsembleSpec, steps: usize) -> Result<DenseMoment> {
    let layout = Layout::new(spec.n, spec.q)?;
    let (v, w) = basis_and_cobasis(&layout)?;
    let k = commutant_matrix(spec, steps)?;
    let matrix = (&v * k) * w.transpose();
    Ok(DenseMoment { n: spec.n, q: spec.q, matrix })
}

/// Dense moment of a fixed gate sequence (no sampling over placements).
pub fn dense_sequence_moment(gates: &GateSequence, n: usize, q: LocalDim) -> Result<DenseMoment> {
    let layout = Layout::new(n, q)?;
    DenseMoment::from_columns(&layout, |v| gates.gates().iter().try_for_each(|&(i, j)| apply_moment(v, &layout, &[i, j])))
}

/// Eigenvalues and eigenvectors (columns) of the symmetric part of `m`.
///
/// The matrix is conjugated by a fixed random orthogonal matrix first: nalgebra's
/// implicit QR returns NaN on exactly block-decoupled inputs, which is what
/// moment operators are.
pub fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let n = m.nrows();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0e16);
    let q = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng)).qr().q();
    let sym = (m + m.transpose()) * 0.5;
    let rotated = q.tr_mul(&(sym * &q));
    let eig = ((&rotated + rotated.transpose()) * 0.5).symmetric_eigen();
    (eig.eigenvalues, q * eig.eigenvectors)
}

/// Coefficients `M` with `vec Phi = sum M[s,t] |s><t|` on the commutant.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMatrix {
    pub n: usize,
    pub m: DMatrix<f64>,
}

pub fn sector_matrix(dense: &DenseMoment) -> Result<SectorMatrix> {
    let layout = dense.layout();
    let (_, w) = basis_and_cobasis(&layout)?;
    let m = w.tr_mul(&(&dense.matrix * &w));
    Ok(SectorMatrix { n: dense.n, m })
}

/// `S(a,b) = sum M[s,t] a^s b^t` for all sign patterns `a, b` (bit set = `-1`).
pub fn sector_values(m: &SectorMatrix) -> DMatrix<f64> {
    let size = 1usize << m.n;
    let walsh = DMatrix::from_fn(size, size, |a, s| if (a & s).count_ones() % 2 == 0 { 1.0 } else { -1.0 });
    &walsh * &m.m * walsh.transpose()
}

/// Largest `|S_spec / S_haar - 1|` over sectors where the Haar value is nonzero.
pub fn sector_error(spec: &SectorMatrix, haar: &SectorMatrix) -> f64 {
    sector_error_split(spec, haar).0
}

/// `(all sectors, diagonal sectors, off-diagonal sectors)`
pub fn sector_error_split(spec: &SectorMatrix, haar: &SectorMatrix) -> (f64, f64, f64) {
    let s = sector_values(spec);
    let h = sector_values(haar);
    let scale = h.amax();
    let (mut diag, mut off) = (0.0f64, 0.0f64);
    for a in 0..s.nrows() {
        for b in 0..s.ncols() {
            if h[(a, b)].abs() <= 1e-12 * scale {
                continue;
            }
            let r = (s[(a, b)] / h[(a, b)] - 1.0).abs();
            if a == b {
                diag = diag.max(r);
            } else {
                off = off.max(r);
            }
        }
    }
    (diag.max(off), diag, off)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_are_projectors() {
        let q = LocalDim::QUBIT;
        let count = |m: &DenseMoment| {
            let (eig, _) = sym_eigen(&m.matrix);
            let ones = eig.iter().filter(|x| (*x - 1.0).abs() < 1e-10).count();
            let zeros = eig.iter().filter(|x| x.abs() < 1e-10).count();
            (ones, zeros)
        };
        // one gate on two sites is the global twirl: one invariant per permutation
        assert_eq!(count(&dense_gate_moment((0, 1), 2, q).unwrap()), (2, 254));
        assert_eq!(count(&dense_global_haar(2, q).unwrap()), (2, 254));
        assert_eq!(count(&dense_local_haar(2, q).unwrap()), (4, 252));
        assert!(Layout::new(1, LocalDim::QUBIT).is_ok());
        assert!(dense_gate_moment((0, 1), 1, LocalDim::QUBIT).is_err());
        assert!(Layout::new(4, LocalDim::QUBIT).is_err());
    }

    #[test]
    fn haar_sector_matrix_is_sparse() {
        let h = sector_matrix(&dense_global_haar(2, LocalDim::QUBIT).unwrap()).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                let uniform = |x: usize| x == 0 || x == 3;
                if !(uniform(s) && uniform(t)) {
                    assert!(h.m[(s, t)].abs() < 1e-12);
                }
            }
        }
    }
}
