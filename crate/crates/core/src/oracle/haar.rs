//! Monte Carlo averages over Haar-random gates.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{DenseMoment, Layout};
use crate::architectures::GateSequence;
use crate::error::{Error, Result};
use crate::perm_algebra::LocalDim;

type C64 = Complex<f64>;

/// Ginibre matrix orthogonalized by QR, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn embed(gate: &DMatrix<C64>, n: usize, q: usize, (i, j): (usize, usize), full: &DMatrix<C64>) -> DMatrix<C64> {
    let d = q.pow(n as u32);
    let (pi, pj) = (q.pow(i as u32), q.pow(j as u32));
    let local = |x: usize| (x / pi % q) * q + x / pj % q;
    let rest = |x: usize| x - (x / pi % q) * pi - (x / pj % q) * pj;
    let g = DMatrix::from_fn(d, d, |r, c| if rest(r) == rest(c) { gate[(local(r), local(c))] } else { C64::new(0.0, 0.0) });
    g * full
}

fn circuit<R: Rng + ?Sized>(gates: &GateSequence, n: usize, q: usize, rng: &mut R) -> DMatrix<C64> {
    let d = q.pow(n as u32);
    gates.gates().iter().fold(DMatrix::identity(d, d), |u, &p| embed(&haar_unitary(q * q, rng), n, q, p, &u))
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    DMatrix::from_fn(ar * br, ac * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct McAverage {
    pub mean: DenseMoment,
    pub std_err: DMatrix<f64>,
    /// Largest imaginary part of the sample mean.
    pub max_imag: f64,
}

/// Sample mean of `conj U (x) conj U (x) U (x) U` for circuits of Haar-random gates.
pub fn mc_haar_average(gates: &GateSequence, n: usize, q: LocalDim, samples: usize, seed: u64) -> Result<McAverage> {
    let layout = Layout::new(n, q)?;
    if samples < 2 {
        return Err(Error::Config("Monte Carlo needs at least 2 samples".into()));
    }
    let qu = q.get() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = DMatrix::<f64>::zeros(layout.dim, layout.dim);
    let mut sq = DMatrix::<f64>::zeros(layout.dim, layout.dim);
    let mut im = DMatrix::<f64>::zeros(layout.dim, layout.dim);
    for _ in 0..samples {
        let u = circuit(gates, n, qu, &mut rng);
        let ub = u.map(|z| z.conj());
        let x = kron(&kron(&ub, &ub), &kron(&u, &u));
        for (k, z) in x.iter().enumerate() {
            sum[k] += z.re;
            sq[k] += z.re * z.re;
            im[k] += z.im;
        }
    }
    let k = samples as f64;
    let mean = &sum / k;
    let std_err = DMatrix::from_fn(layout.dim, layout.dim, |r, c| {
        let m = mean[(r, c)];
        ((sq[(r, c)] / k - m * m).max(0.0) / (k - 1.0)).sqrt()
    });
    Ok(McAverage { mean: DenseMoment { n, q, matrix: mean }, std_err, max_imag: im.amax() / k })
}

/// Two-site transfer matrix estimated from single Haar gates, in the `{II, IS, SI, SS}` layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McTransfer {
    pub samples: usize,
    pub mean: [[f64; 4]; 4],
    pub std_err: [[f64; 4]; 4],
}

pub fn mc_gate_transfer(q: LocalDim, samples: usize, seed: u64) -> Result<McTransfer> {
    if samples < 2 {
        return Err(Error::Config("Monte Carlo needs at least 2 samples".into()));
    }
    let qu = q.get() as usize;
    let big = qu * qu;
    let qf = q.as_f64();
    // label bits: 2 = site i swapped, 1 = site j swapped; local index x = x_i * q + x_j
    let digits = |x: usize| [x / qu, x % qu];
    let target = |label: usize, y0: usize, y1: usize| {
        let (a, b) = (digits(y0), digits(y1));
        let pick = |site: usize, bit: usize| if label & bit == 0 { (a[site], b[site]) } else { (b[site], a[site]) };
        let (i2, i3) = pick(0, 2);
        let (j2, j3) = pick(1, 1);
        (i2 * qu + j2, i3 * qu + j3)
    };
    let site_gram = DMatrix::from_row_slice(2, 2, &[1.0, 1.0 / qf, 1.0 / qf, 1.0]);
    let gram = site_gram.kronecker(&site_gram);
    let gram_inv = gram.try_inverse().ok_or_else(|| Error::Numerical("singular Gram matrix".into()))?;
    let norm = 1.0 / (qf * qf * qf * qf);
    // perm[s][y]: image of the two-copy index y = y0 * big + y1 under label s
    let perm: Vec<Vec<usize>> = (0..4)
        .map(|s| {
            (0..big * big)
                .map(|y| {
                    let (z2, z3) = target(s, y / big, y % big);
                    z2 * big + z3
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = DMatrix::<f64>::zeros(4, 4);
    let mut sq = DMatrix::<f64>::zeros(4, 4);
    for _ in 0..samples {
        let u = haar_unitary(big, &mut rng);
        let v = kron(&u, &u);
        let k = DMatrix::from_fn(4, 4, |s, t| {
            let mut acc = C64::new(0.0, 0.0);
            for (y, &ys) in perm[s].iter().enumerate() {
                for (x, &xt) in perm[t].iter().enumerate() {
                    acc += v[(y, x)].conj() * v[(ys, xt)];
                }
            }
            acc.re * norm
        });
        let m = &gram_inv * k;
        sum += &m;
        sq += m.component_mul(&m);
    }
    let k = samples as f64;
    let mut mean = [[0.0; 4]; 4];
    let mut std_err = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let m = sum[(r, c)] / k;
            mean[r][c] = m;
            std_err[r][c] = ((sq[(r, c)] / k - m * m).max(0.0) / (k - 1.0)).sqrt();
        }
    }
    Ok(McTransfer { samples, mean, std_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(4, &mut rng);
        let e = &u.adjoint() * &u - DMatrix::identity(4, 4);
        assert!(e.iter().all(|z| z.norm() < 1e-12));
    }
}
