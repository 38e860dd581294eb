//! Choi-matrix bounds by bisection, and PSD checks.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{DenseMoment, Layout};
use crate::error::{Error, Result};

/// Largest vectorized dimension for which the Choi matrix is materialized.
const DENSE_CHOI_MAX: usize = 256;
const MAX_ITER: usize = 200;

/// Realigned moment: `C[(u0,u1,v0,v1),(u2,u3,v2,v3)] = S[(u0,u1,u2,u3),(v0,v1,v2,v3)] / d^2`.
pub fn choi_matrix(dense: &DenseMoment) -> DMatrix<f64> {
    let l = dense.layout();
    let d2 = l.d * l.d;
    let scale = 1.0 / d2 as f64;
    let mut c = DMatrix::zeros(l.dim, l.dim);
    for col in 0..l.dim {
        let (chi, clo) = (col / d2, col % d2);
        for row in 0..l.dim {
            let (rhi, rlo) = (row / d2, row % d2);
            c[(rhi * d2 + chi, rlo * d2 + clo)] = dense.matrix[(row, col)] * scale;
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiMethod {
    /// Cholesky tests on the materialized Choi matrices.
    Dense,
    /// Block-scalar form on the local symmetric/antisymmetric sectors, verified by probes.
    Sectors,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoiReport {
    pub epsilon: f64,
    pub iterations: usize,
    pub method: ChoiMethod,
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn feasible(m: &DMatrix<f64>, slack: f64) -> bool {
    let mut s = m.clone();
    for i in 0..s.nrows() {
        s[(i, i)] += slack;
    }
    s.cholesky().is_some()
}

/// Smallest `eps` with `(1-eps) C_haar <= C <= (1+eps) C_haar`, to relative width `tol`.
pub fn choi_bisection(dense: &DenseMoment, haar: &DenseMoment, tol: f64) -> Result<ChoiReport> {
    if (dense.n, dense.q) != (haar.n, haar.q) {
        return Err(Error::InvalidDimension("Choi comparison of moments on different systems".into()));
    }
    if dense.layout().dim <= DENSE_CHOI_MAX {
        let ca = symmetrized(&choi_matrix(dense));
        let cb = symmetrized(&choi_matrix(haar));
        let slack = 1e-12 * cb.amax();
        let pass = |eps: f64| feasible(&(&cb * (1.0 + eps) - &ca), slack) && feasible(&(&ca - &cb * (1.0 - eps)), slack);
        let (epsilon, iterations) = bisect(pass, tol)?;
        Ok(ChoiReport { epsilon, iterations, method: ChoiMethod::Dense })
    } else {
        let la = sector_eigenvalues(dense)?;
        let lb = sector_eigenvalues(haar)?;
        let slack = 1e-12 * lb.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let pass = |eps: f64| {
            la.iter().zip(&lb).all(|(&a, &b)| (1.0 + eps) * b - a >= -slack && a - (1.0 - eps) * b >= -slack)
        };
        let (epsilon, iterations) = bisect(pass, tol)?;
        Ok(ChoiReport { epsilon, iterations, method: ChoiMethod::Sectors })
    }
}

fn bisect(pass: impl Fn(f64) -> bool, tol: f64) -> Result<(f64, usize)> {
    if pass(0.0) {
        return Ok((0.0, 0));
    }
    let mut hi = 1.0;
    let mut iterations = 0;
    while !pass(hi) {
        hi *= 2.0;
        iterations += 1;
        if hi > 1e12 {
            return Err(Error::Numerical("Choi bisection found no feasible upper bracket".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > tol * hi && iterations < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if pass(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok((hi, iterations))
}

/// One nonzero entry of a per-site projector `P_a (x) P_b` between Choi row and column digits.
struct SiteEntry {
    row: [usize; 4],
    col: [usize; 4],
    vals: [f64; 4],
}

fn swap_projector(x: (usize, usize), y: (usize, usize)) -> [f64; 2] {
    let same = (x == y) as u8 as f64;
    let crossed = (x.0 == y.1 && x.1 == y.0) as u8 as f64;
    [(same + crossed) / 2.0, (same - crossed) / 2.0]
}

fn site_entries(q: usize) -> Vec<SiteEntry> {
    let mut out = Vec::new();
    let partners = |a: usize, b: usize| if a == b { vec![(a, b)] } else { vec![(a, b), (b, a)] };
    for u0 in 0..q {
        for u1 in 0..q {
            for v0 in 0..q {
                for v1 in 0..q {
                    for &(u2, u3) in &partners(u0, u1) {
                        for &(v2, v3) in &partners(v0, v1) {
                            let pu = swap_projector((u2, u3), (u0, u1));
                            let pv = swap_projector((v2, v3), (v0, v1));
                            out.push(SiteEntry {
                                row: [u0, u1, v0, v1],
                                col: [u2, u3, v2, v3],
                                vals: [pu[0] * pv[0], pu[0] * pv[1], pu[1] * pv[0], pu[1] * pv[1]],
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Per-site sector `2a + b` (`a` output, `b` input; `0` symmetric) has trace `dims[a] * dims[b]`.
fn sector_traces(l: &Layout) -> Vec<f64> {
    let q = l.q.as_f64();
    let dims = [q * (q + 1.0) / 2.0, q * (q - 1.0) / 2.0];
    let site: Vec<f64> = (0..4).map(|s| dims[s >> 1] * dims[s & 1]).collect();
    (0..1usize << (2 * l.n)).map(|s| (0..l.n).map(|i| site[s >> (2 * i) & 3]).product()).collect()
}

/// `tr(C Pi_s) / tr(Pi_s)` for every local sector `s`, after checking that `C` is block scalar.
pub(crate) fn sector_eigenvalues(dense: &DenseMoment) -> Result<Vec<f64>> {
    let l = dense.layout();
    let entries = site_entries(l.q.get() as usize);
    let scale = 1.0 / (l.d * l.d) as f64;
    let sectors = 1usize << (2 * l.n);
    let mut acc = vec![0.0; sectors];
    // S row index uses (u0,u1,u2,u3), S column (v0,v1,v2,v3)
    let offsets = |e: &SiteEntry, i: usize| {
        let st = |k| l.stride(k, i);
        (
            e.row[0] * st(0) + e.row[1] * st(1) + e.col[0] * st(2) + e.col[1] * st(3),
            e.row[2] * st(0) + e.row[3] * st(1) + e.col[2] * st(2) + e.col[3] * st(3),
        )
    };
    let mut stack = vec![(0usize, 0usize, vec![1.0])];
    for i in 0..l.n - 1 {
        let mut next = Vec::with_capacity(stack.len() * entries.len());
        for (r, c, w) in &stack {
            for e in &entries {
                let (dr, dc) = offsets(e, i);
                let nw: Vec<f64> = e.vals.iter().flat_map(|v| w.iter().map(move |x| x * v)).collect();
                next.push((r + dr, c + dc, nw));
            }
        }
        stack = next;
    }
    let last = l.n - 1;
    let block = 1usize << (2 * last);
    for (r, c, w) in &stack {
        for e in &entries {
            let (dr, dc) = offsets(e, last);
            let x = dense.matrix[(r + dr, c + dc)] * scale;
            if x == 0.0 {
                continue;
            }
            for (t, v) in e.vals.iter().enumerate() {
                let xv = x * v;
                acc[t * block..(t + 1) * block].iter_mut().zip(w).for_each(|(a, wv)| *a += xv * wv);
            }
        }
    }
    let traces = sector_traces(&l);
    let lambda: Vec<f64> = acc.iter().zip(&traces).map(|(a, t)| a / t).collect();
    verify_block_scalar(dense, &lambda)?;
    Ok(lambda)
}

fn choi_matvec(dense: &DenseMoment, x: &[f64]) -> Vec<f64> {
    let l = dense.layout();
    let d2 = l.d * l.d;
    let scale = 1.0 / d2 as f64;
    let mut y = vec![0.0; l.dim];
    for col in 0..l.dim {
        let (chi, clo) = (col / d2, col % d2);
        let m = dense.matrix.column(col);
        for (row, &s) in m.iter().enumerate() {
            if s != 0.0 {
                y[row / d2 * d2 + chi] += s * scale * x[row % d2 * d2 + clo];
            }
        }
    }
    y
}

/// `P_+` or `P_-` on copies `(k, k+1)` of site `i`.
fn apply_swap_projector(l: &Layout, v: &mut [f64], i: usize, k: usize, anti: bool) {
    let (sa, sb) = (l.stride(k, i), l.stride(k + 1, i));
    let sign = if anti { -1.0 } else { 1.0 };
    let src = v.to_vec();
    for (idx, out) in v.iter_mut().enumerate() {
        let (a, b) = (idx / sa % l.qu(), idx / sb % l.qu());
        let swapped = idx - a * sa - b * sb + b * sa + a * sb;
        *out = 0.5 * (src[idx] + sign * src[swapped]);
    }
}

fn verify_block_scalar(dense: &DenseMoment, lambda: &[f64]) -> Result<()> {
    let l = dense.layout();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c01);
    for _ in 0..2 {
        let x: Vec<f64> = (0..l.dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let cx = choi_matvec(dense, &x);
        let mut rec = vec![0.0; l.dim];
        for (s, &lam) in lambda.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            let mut v = x.clone();
            for i in 0..l.n {
                let t = s >> (2 * i) & 3;
                apply_swap_projector(&l, &mut v, i, 0, t >> 1 == 1);
                apply_swap_projector(&l, &mut v, i, 2, t & 1 == 1);
            }
            rec.iter_mut().zip(&v).for_each(|(r, vi)| *r += lam * vi);
        }
        let norm = cx.iter().map(|a| a * a).sum::<f64>().sqrt();
        let diff = cx.iter().zip(&rec).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if diff > 1e-9 * norm + 1e-14 {
            return Err(Error::Numerical(format!("Choi matrix is not block scalar on local sectors (residual {diff:e})")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub asymmetry: f64,
}

const FULL_EIGEN_MAX: usize = 512;

/// Spectrum check of the symmetric part; `tol` is relative to the largest eigenvalue.
pub fn psd_check(m: &DMatrix<f64>, tol: f64) -> Result<PsdReport> {
    if !m.is_square() {
        return Err(Error::InvalidDimension("PSD check of a non-square matrix".into()));
    }
    let dim = m.nrows();
    let asymmetry = (m - m.transpose()).amax();
    let (lo, hi) = if dim <= FULL_EIGEN_MAX {
        full_range(&symmetrized(m))
    } else {
        randomized_range(m)?
    };
    let scale = hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE);
    Ok(PsdReport {
        is_psd: lo >= -tol * scale && asymmetry <= tol * scale,
        min_eigenvalue: lo,
        max_eigenvalue: hi,
        asymmetry,
    })
}

fn full_range(sym: &DMatrix<f64>) -> (f64, f64) {
    let (e, _) = super::sym_eigen(sym);
    (e.min(), e.max())
}

fn sym_mul(m: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    (m * x + m.tr_mul(x)) * 0.5
}

/// Range finder on the symmetric part; eigenvalues outside the captured range are zero.
fn randomized_range(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let dim = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x95d);
    let mut gauss = |r: usize, c: usize| DMatrix::from_fn(r, c, |_, _| StandardNormal.sample(&mut rng));
    let mut k = 16;
    while 2 * k < dim {
        let y = sym_mul(m, &gauss(dim, k));
        let q = y.qr().q();
        let b = q.tr_mul(&sym_mul(m, &q));
        let probe = sym_mul(m, &gauss(dim, 8));
        let resid = &probe - &q * q.tr_mul(&probe);
        if resid.norm() <= 1e-10 * probe.norm() + 1e-300 {
            let (lo, hi) = full_range(&symmetrized(&b));
            return Ok((lo.min(0.0), hi.max(0.0)));
        }
        k *= 2;
    }
    Ok(full_range(&symmetrized(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dense_global_haar, dense_local_haar};
    use crate::perm_algebra::LocalDim;

    #[test]
    fn haar_against_itself_is_zero() {
        let h = dense_global_haar(2, LocalDim::QUBIT).unwrap();
        assert_eq!(choi_bisection(&h, &h, 1e-12).unwrap().epsilon, 0.0);
    }

    #[test]
    fn sector_route_matches_dense_route() {
        let q = LocalDim::QUBIT;
        let a = dense_local_haar(2, q).unwrap();
        let h = dense_global_haar(2, q).unwrap();
        let dense = choi_bisection(&a, &h, 1e-12).unwrap().epsilon;
        let la = sector_eigenvalues(&a).unwrap();
        let lb = sector_eigenvalues(&h).unwrap();
        let slack = 1e-12;
        let (eps, _) = bisect(|e| la.iter().zip(&lb).all(|(&x, &y)| (1.0 + e) * y - x >= -slack && x - (1.0 - e) * y >= -slack), 1e-12).unwrap();
        assert!((dense - eps).abs() < 1e-8 * dense, "{dense} vs {eps}");
    }

    #[test]
    fn psd_detects_negative_direction() {
        let mut m = DMatrix::identity(4, 4);
        m[(3, 3)] = -0.5;
        let r = psd_check(&m, 1e-12).unwrap();
        assert!(!r.is_psd && (r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(psd_check(&DMatrix::identity(4, 4), 1e-12).unwrap().is_psd);
    }
}
