//! Two-copy permutation-basis algebra.
//!
//! Every site carries the normalized pair `{|I>, |S>}` with overlap `1/q`.
//! A basis index stores site `i` in bit `i`: a clear bit is `I`, a set bit `S`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local Hilbert-space dimension, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct LocalDim(u32);

impl LocalDim {
    pub const QUBIT: LocalDim = LocalDim(2);

    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidDimension(format!("local dimension q={q} must be at least 2")));
        }
        Ok(LocalDim(q))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// `q^{-n}`
    pub fn inv_pow(self, n: usize) -> f64 {
        self.as_f64().powi(-(n as i32))
    }
}

impl Default for LocalDim {
    fn default() -> Self {
        LocalDim::QUBIT
    }
}

impl TryFrom<u32> for LocalDim {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        LocalDim::new(q)
    }
}

impl From<LocalDim> for u32 {
    fn from(q: LocalDim) -> u32 {
        q.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(weight: u32) -> Self {
        if weight % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Bit string `a` choosing a symmetric (`0`) or singlet (`1`) boundary per site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExperimentVector {
    n: usize,
    mask: u64,
}

impl ExperimentVector {
    pub const MAX_SITES: usize = 63;

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n == 0 || n > Self::MAX_SITES {
            return Err(Error::InvalidDimension(format!("experiment vectors need 1..=63 sites, got {n}")));
        }
        if mask >> n != 0 {
            return Err(Error::InvalidSite(format!("mask {mask:#x} has bits beyond n={n}")));
        }
        Ok(ExperimentVector { n, mask })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut mask = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << i,
                _ => return Err(Error::InvalidSite(format!("bit {i} is {b}, expected 0 or 1"))),
            }
        }
        Self::from_mask(bits.len(), mask)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    /// Singlets on the two end sites: `(1,0,...,0,1)`.
    pub fn entangled_boundaries(n: usize) -> Result<Self> {
        Self::from_mask(n, 1 | 1 << (n - 1).min(63))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn bit(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.weight())
    }

    /// `s_i = (-1)^{a_i}`
    pub fn sign(&self, i: usize) -> f64 {
        if self.bit(i) {
            -1.0
        } else {
            1.0
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.n).map(|i| u8::from(self.bit(i)))
    }
}

impl fmt::Display for ExperimentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for ExperimentVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Config(format!("experiment vector {s:?} must be a 0/1 string"))),
            })
            .collect::<Result<_>>()?;
        Self::from_bits(&bits)
    }
}

impl Serialize for ExperimentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Coefficients of a two-copy moment vector in the `{I,S}^n` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantState {
    n: usize,
    q: LocalDim,
    coeffs: Vec<f64>,
}

impl CommutantState {
    pub const MAX_SITES: usize = 30;

    pub fn zeros(n: usize, q: LocalDim) -> Result<Self> {
        if n == 0 || n > Self::MAX_SITES {
            return Err(Error::InvalidDimension(format!("state vectors need 1..=30 sites, got {n}")));
        }
        Ok(CommutantState { n, q, coeffs: vec![0.0; 1 << n] })
    }

    pub fn from_coeffs(n: usize, q: LocalDim, coeffs: Vec<f64>) -> Result<Self> {
        let mut s = Self::zeros(n, q)?;
        if coeffs.len() != s.coeffs.len() {
            return Err(Error::InvalidDimension(format!("expected {} coefficients, got {}", s.coeffs.len(), coeffs.len())));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numerical("non-finite coefficient".into()));
        }
        s.coeffs = coeffs;
        Ok(s)
    }

    /// The product state `|I...I>`.
    pub fn identity(n: usize, q: LocalDim) -> Result<Self> {
        let mut s = Self::zeros(n, q)?;
        s.coeffs[0] = 1.0;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> LocalDim {
        self.q
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Applies the Haar two-site gate transfer on `(i, j)` in place.
    pub fn apply_two_site(&mut self, i: usize, j: usize) -> Result<()> {
        check_pair(self.n, i, j)?;
        let c = gate_coupling(self.q);
        apply_pair_kernel(&mut self.coeffs, i, j, c);
        Ok(())
    }

    /// Projects onto the span of `|I^n>` and `|S^n>` (global Haar channel).
    pub fn apply_global_haar(&mut self) {
        let n = self.n;
        let inv_q = 1.0 / self.q.as_f64();
        let pows: Vec<f64> = (0..=n).map(|k| inv_q.powi(k as i32)).collect();
        let (mut ov_i, mut ov_s) = (0.0, 0.0);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let w = idx.count_ones() as usize;
            ov_i += c * pows[w];
            ov_s += c * pows[n - w];
        }
        let g = pows[n];
        let det = 1.0 - g * g;
        let c_i = (ov_i - g * ov_s) / det;
        let c_s = (ov_s - g * ov_i) / det;
        self.coeffs.fill(0.0);
        self.coeffs[0] = c_i;
        let last = self.coeffs.len() - 1;
        self.coeffs[last] += c_s;
    }

    /// `boundary_weights(a) . coeffs`, evaluated without materializing the weights.
    pub fn pair_with(&self, a: &ExperimentVector) -> f64 {
        let m = a.mask() as usize;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| if (idx & m).count_ones() % 2 == 0 { c } else { -c })
            .sum()
    }
}

pub(crate) fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::InvalidSite(format!("gate needs two distinct sites, got ({i},{j})")));
    }
    if i >= n || j >= n {
        return Err(Error::InvalidSite(format!("gate ({i},{j}) out of range for n={n}")));
    }
    Ok(())
}

/// Off-diagonal transfer amplitude `q/(q^2+1)`.
pub fn gate_coupling(q: LocalDim) -> f64 {
    let q = q.as_f64();
    q / (q * q + 1.0)
}

/// In-place gate transfer on one state vector.
pub(crate) fn apply_pair_kernel(coeffs: &mut [f64], i: usize, j: usize, c: f64) {
    let (bi, bj) = (1usize << i, 1usize << j);
    let both = bi | bj;
    for base in 0..coeffs.len() {
        if base & both != 0 {
            continue;
        }
        let mixed = coeffs[base | bj] + coeffs[base | bi];
        coeffs[base] += c * mixed;
        coeffs[base | both] += c * mixed;
        coeffs[base | bj] = 0.0;
        coeffs[base | bi] = 0.0;
    }
}

/// `(Wg(identity), Wg(swap))` for `t=2` on dimension `copies_dim`.
pub fn weingarten_pair(q: LocalDim, copies_dim: u64) -> Result<(f64, f64)> {
    if copies_dim < 2 {
        return Err(Error::InvalidDimension(format!("copies_dim={copies_dim} must be at least 2")));
    }
    let qq = u64::from(q.get());
    let mut d = copies_dim;
    while d % qq == 0 {
        d /= qq;
    }
    if d != 1 {
        return Err(Error::InvalidDimension(format!("copies_dim={copies_dim} is not a power of q={qq}")));
    }
    let d = copies_dim as f64;
    let denom = d * d - 1.0;
    Ok((1.0 / denom, -1.0 / (d * denom)))
}

/// Two-site transfer matrix over `{II, IS, SI, SS}` (first letter is site `i`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateTransfer {
    pub q: LocalDim,
    /// `m[row][col]`
    pub m: [[f64; 4]; 4],
}

impl GateTransfer {
    pub fn column(&self, col: usize) -> [f64; 4] {
        [self.m[0][col], self.m[1][col], self.m[2][col], self.m[3][col]]
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.m[r][c] * v[c]).sum();
        }
        out
    }

    pub fn compose(&self, other: &GateTransfer) -> GateTransfer {
        let mut m = [[0.0; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = (0..4).map(|k| self.m[r][k] * other.m[k][c]).sum();
            }
        }
        GateTransfer { q: self.q, m }
    }
}

pub fn gate_transfer(q: LocalDim) -> GateTransfer {
    let c = gate_coupling(q);
    GateTransfer {
        q,
        m: [
            [1.0, c, c, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, c, c, 1.0],
        ],
    }
}

/// Per-site `(I, S)` coefficients of `|I~> + s|S~>`.
pub fn boundary_site_pair(sign: f64, q: LocalDim) -> [f64; 2] {
    let inv = 1.0 / q.as_f64();
    let norm = 1.0 - inv * inv;
    [(1.0 - sign * inv) / norm, (sign - inv) / norm]
}

/// `<Psi(a)|Psi(a)>` restricted to one site.
pub fn boundary_site_norm(sign: f64, q: LocalDim) -> f64 {
    let inv = 1.0 / q.as_f64();
    (2.0 - 2.0 * sign * inv) / (1.0 - inv * inv)
}

pub fn boundary_state(a: &ExperimentVector, q: LocalDim) -> Result<CommutantState> {
    let mut state = CommutantState::zeros(a.n(), q)?;
    let pairs: Vec<[f64; 2]> = (0..a.n()).map(|i| boundary_site_pair(a.sign(i), q)).collect();
    for (idx, c) in state.coeffs.iter_mut().enumerate() {
        *c = pairs.iter().enumerate().map(|(i, p)| p[idx >> i & 1]).product();
    }
    Ok(state)
}

pub fn boundary_weights(a: &ExperimentVector) -> Vec<f64> {
    let m = a.mask() as usize;
    (0..1usize << a.n())
        .map(|idx| if (idx & m).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// `<Psi(a)|Haar|Psi(a)>` for an experiment of the given parity.
pub fn haar_moment_diagonal(n: usize, q: LocalDim, parity: Parity) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension("haar value needs n >= 1".into()));
    }
    let g = q.inv_pow(n);
    Ok(match parity {
        Parity::Even => 2.0 / (1.0 + g),
        Parity::Odd => 2.0 / (1.0 - g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn weingarten_fixtures() {
        let cases = [(2, 2, 1.0 / 3.0, -1.0 / 6.0), (2, 4, 1.0 / 15.0, -1.0 / 60.0), (3, 3, 1.0 / 8.0, -1.0 / 24.0)];
        for (q, d, wi, ws) in cases {
            let (a, b) = weingarten_pair(LocalDim::new(q).unwrap(), d).unwrap();
            assert!(close(a, wi) && close(b, ws), "q={q} D={d}");
        }
        assert!(weingarten_pair(LocalDim::QUBIT, 1).is_err());
        assert!(weingarten_pair(LocalDim::QUBIT, 6).is_err());
    }

    #[test]
    fn transfer_columns() {
        let g = gate_transfer(LocalDim::QUBIT);
        assert_eq!(g.column(0), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.column(3), [0.0, 0.0, 0.0, 1.0]);
        let is = g.column(1);
        assert!(close(is[0], 0.4) && is[1] == 0.0 && is[2] == 0.0 && close(is[3], 0.4));
        let gg = g.compose(&g);
        for r in 0..4 {
            for c in 0..4 {
                assert!((gg.m[r][c] - g.m[r][c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn boundary_fixtures() {
        let q = LocalDim::QUBIT;
        let p0 = boundary_site_pair(1.0, q);
        let p1 = boundary_site_pair(-1.0, q);
        assert!(close(p0[0], 2.0 / 3.0) && close(p0[1], 2.0 / 3.0));
        assert!(close(p1[0], 2.0) && close(p1[1], -2.0));
        let a = ExperimentVector::from_bits(&[0, 1]).unwrap();
        let s = boundary_state(&a, q).unwrap();
        // index bit 0 is site 0: order II, SI(site0=S), IS, SS
        let want = [4.0 / 3.0, 4.0 / 3.0, -4.0 / 3.0, -4.0 / 3.0];
        for (x, w) in s.coeffs().iter().zip(want) {
            assert!(close(*x, w));
        }
    }

    #[test]
    fn weights_fixtures() {
        let w = boundary_weights(&ExperimentVector::from_bits(&[1, 1]).unwrap());
        assert_eq!(w, vec![1.0, -1.0, -1.0, 1.0]);
        let w = boundary_weights(&ExperimentVector::from_bits(&[0, 0]).unwrap());
        assert_eq!(w, vec![1.0; 4]);
    }

    #[test]
    fn norm_of_singlet_pair() {
        let a = ExperimentVector::from_bits(&[1, 1]).unwrap();
        let s = boundary_state(&a, LocalDim::QUBIT).unwrap();
        assert!((s.pair_with(&a) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn haar_values() {
        let q = LocalDim::QUBIT;
        assert!(close(haar_moment_diagonal(2, q, Parity::Even).unwrap(), 1.6));
        assert!(close(haar_moment_diagonal(3, q, Parity::Odd).unwrap(), 16.0 / 7.0));
        assert!((haar_moment_diagonal(60, q, Parity::Odd).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gate_on_symmetric_pair_regression() {
        let a = ExperimentVector::zeros(2).unwrap();
        let mut s = boundary_state(&a, LocalDim::QUBIT).unwrap();
        s.apply_two_site(0, 1).unwrap();
        let want = [0.8, 0.0, 0.0, 0.8];
        for (x, w) in s.coeffs().iter().zip(want) {
            assert!(close(*x, w), "{:?}", s.coeffs());
        }
        assert!(close(s.pair_with(&a), 1.6));
    }

    #[test]
    fn global_haar_fixed_points() {
        let q = LocalDim::new(3).unwrap();
        let mut s = CommutantState::zeros(3, q).unwrap();
        s.coeffs_mut()[0] = 0.25;
        s.coeffs_mut()[7] = -1.5;
        let before = s.clone();
        s.apply_global_haar();
        for (x, y) in s.coeffs().iter().zip(before.coeffs()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_sites() {
        let mut s = CommutantState::identity(3, LocalDim::QUBIT).unwrap();
        assert!(s.apply_two_site(1, 1).is_err());
        assert!(s.apply_two_site(0, 3).is_err());
    }

    #[test]
    fn parse_experiment() {
        let a: ExperimentVector = "1001".parse().unwrap();
        assert_eq!(a, ExperimentVector::entangled_boundaries(4).unwrap());
        assert_eq!(a.to_string(), "1001");
        assert!("102".parse::<ExperimentVector>().is_err());
    }
}
