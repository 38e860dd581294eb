//! Closed-form depth formulas and bounds. Logarithms are natural.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm_algebra::LocalDim;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulaParams {
    pub n: usize,
    pub q: LocalDim,
    pub epsilon: f64,
}

impl FormulaParams {
    pub fn new(n: usize, q: LocalDim, epsilon: f64) -> Result<Self> {
        check_n(n)?;
        check_eps(epsilon)?;
        Ok(FormulaParams { n, q, epsilon })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidDimension(format!("brickwork formulas need n >= 3, got {n}")));
    }
    Ok(())
}

fn check_eps(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaVariant {
    /// Optimal experiment `(1,0,...,0,1)` of the open brickwork.
    EntangledBoundaries,
    /// The all-zero (collision probability) experiment.
    Collision,
}

pub fn brickwork_alpha(n: usize, q: LocalDim) -> Result<f64> {
    check_n(n)?;
    let q = q.as_f64();
    Ok(1.0 / ((q * q + 1.0) / (2.0 * q * (PI / n as f64).cos())).ln())
}

fn beta_numerator(n: usize, q: f64, variant: BetaVariant) -> f64 {
    let c2 = (2.0 * PI / n as f64).cos();
    match variant {
        BetaVariant::EntangledBoundaries => ((q * q + 1.0).powi(2) - 4.0 * q * q * c2).powi(2),
        BetaVariant::Collision => (q * q - 1.0).powi(4),
    }
}

pub fn brickwork_beta(n: usize, q: LocalDim, variant: BetaVariant) -> Result<f64> {
    let alpha = brickwork_alpha(n, q)?;
    let qf = q.as_f64();
    let nf = n as f64;
    let x = PI / nf;
    let cot2 = (x.cos() / x.sin()).powi(2);
    let q2 = qf * qf;
    let q4 = q2 * q2;
    let denom = nf * nf * (q4 * q4 - 2.0 * (q4 - 1.0) * q2 * (2.0 * x).cos() - 1.0) + nf * (4.0 * q4 * (4.0 * x).cos() - 4.0 * q4);
    let arg = 4.0 * cot2 * beta_numerator(n, qf, variant) / denom;
    if !(arg > 0.0 && arg.is_finite()) {
        return Err(Error::Numerical(format!("beta log argument {arg} at n={n}")));
    }
    Ok(1.0 + alpha * arg.ln())
}

/// `alpha (ln n - ln eps) + beta`
pub fn design_depth_formula(n: usize, q: LocalDim, epsilon: f64, variant: BetaVariant) -> Result<f64> {
    check_eps(epsilon)?;
    Ok(brickwork_alpha(n, q)? * ((n as f64).ln() - epsilon.ln()) + brickwork_beta(n, q, variant)?)
}

/// Large-`n` form `ln[(2/pi^2)((q^2-1)/q)(n/eps)] / ln((q^2+1)/2q)`.
pub fn leading_order_depth(n: usize, q: LocalDim, epsilon: f64) -> Result<f64> {
    check_n(n)?;
    check_eps(epsilon)?;
    let q = q.as_f64();
    let arg = 2.0 / (PI * PI) * (q * q - 1.0) / q * n as f64 / epsilon;
    Ok(arg.ln() / ((q * q + 1.0) / (2.0 * q)).ln())
}

/// Depth difference between the entangled-boundaries and collision formulas.
pub fn delta_gap(n: usize, q: LocalDim) -> Result<f64> {
    Ok(brickwork_beta(n, q, BetaVariant::EntangledBoundaries)? - brickwork_beta(n, q, BetaVariant::Collision)?)
}

/// `64 pi^2 / (9 ln(5/4) n^2)`, the large-`n` limit of [`delta_gap`] at `q = 2`.
pub fn delta_gap_asymptote(n: usize) -> f64 {
    64.0 * PI * PI / (9.0 * 1.25f64.ln() * (n * n) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DalzellKind {
    /// Lower bound on brickwork depth.
    Brickwork,
    /// `2s/n >= log_5(n/eps) - 0.801`, the printed relaxation at `q = 2`.
    General,
    /// `2s/n` bound before relaxation.
    GeneralExact,
    /// `ln(1+2 eps) <= 2 eps` relaxation of [`DalzellKind::GeneralExact`], any `q`.
    GeneralRelaxed,
}

/// `c = 3 e^10`, `A = 1/(8 c e)`
pub fn dalzell_log_a() -> f64 {
    -(8.0f64.ln() + 3.0f64.ln() + 10.0 + 1.0)
}

pub fn dalzell_bounds(n: usize, q: LocalDim, epsilon: f64, kind: DalzellKind) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidDimension("n must be positive".into()));
    }
    check_eps(epsilon)?;
    let ln_n = (n as f64).ln();
    let qf = q.as_f64();
    let ln_q2 = (qf * qf + 1.0).ln();
    Ok(match kind {
        DalzellKind::Brickwork => {
            (ln_n + dalzell_log_a() - (2.0 * (1.0 + epsilon)).ln().ln()) / ((qf * qf + 1.0) / (2.0 * qf)).ln()
        }
        DalzellKind::General => {
            if q != LocalDim::QUBIT {
                return Err(Error::Config("the printed general bound is stated for q=2 only".into()));
            }
            (n as f64 / epsilon).ln() / 5f64.ln() - 0.801
        }
        DalzellKind::GeneralExact => {
            let inner = (qf + 1.0) * (1.0 + 2.0 * epsilon).ln() / (qf + 1.0).ln();
            (ln_n - inner.ln()) / ln_q2
        }
        DalzellKind::GeneralRelaxed => {
            (ln_n - epsilon.ln() - (2.0 * (qf + 1.0) / (qf + 1.0).ln()).ln()) / ln_q2
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DisconnectionShape {
    /// Disconnected into `m` and `n - m` sites with probability `p`: returns an error lower bound.
    General { p: f64, m: usize },
    /// Two cliques joined by one edge: returns a gate-count lower bound.
    Bridge,
}

pub fn disconnection_bounds(n: usize, q: LocalDim, epsilon: f64, shape: DisconnectionShape) -> Result<f64> {
    match shape {
        DisconnectionShape::General { p, m } => {
            if m == 0 || m >= n {
                return Err(Error::Config(format!("cut size m={m} must satisfy 0 < m < n={n}")));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("probability p={p} outside [0,1]")));
            }
            let qf = q.as_f64();
            let (qm, qn) = (qf.powi(m as i32), qf.powi(n as i32));
            Ok(p * (qm + 1.0) * (qm + qn) / ((qm - 1.0) * (qn - qm)))
        }
        DisconnectionShape::Bridge => {
            check_eps(epsilon)?;
            if n < 3 {
                return Err(Error::InvalidDimension(format!("bridge bound needs n >= 3, got {n}")));
            }
            let nf = n as f64;
            Ok(nf * (nf - 2.0) / 4.0 * (1.0 / epsilon).ln())
        }
    }
}

/// Same quantity as the general disconnection bound, via split Haar values.
pub fn disconnection_error_split(n: usize, q: LocalDim, p: f64, m: usize) -> f64 {
    let x = q.inv_pow(m);
    let y = q.inv_pow(n - m);
    p * ((1.0 + x * y) / 2.0 * 2.0 / (1.0 - x) * 2.0 / (1.0 - y) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: LocalDim = LocalDim::QUBIT;

    #[test]
    fn alpha_values() {
        let a = brickwork_alpha(12, Q).unwrap();
        assert!((a - 3.878_798_659_884_827).abs() < 1e-12);
        assert!((a - 3.8782).abs() < 1e-3);
        assert!((brickwork_alpha(100_000, Q).unwrap() - 1.0 / 1.25f64.ln()).abs() < 1e-6);
        assert!(brickwork_alpha(2, Q).is_err());
    }

    #[test]
    fn leading_order_example() {
        assert!((leading_order_depth(12, Q, 0.01).unwrap() - 26.44).abs() < 0.01);
    }

    #[test]
    fn dalzell_examples() {
        assert!((dalzell_bounds(50, Q, 0.01, DalzellKind::General).unwrap() - 4.491).abs() < 1e-3);
        assert!((dalzell_log_a() + 14.178).abs() < 1e-3);
        // epsilon -> 0 constant
        let c = dalzell_log_a() - (2f64.ln()).ln();
        assert!((c + 13.81).abs() < 5e-3);
        assert!(dalzell_bounds(1_000_000, Q, 1e-9, DalzellKind::Brickwork).unwrap() < 1.0);
        assert!(dalzell_bounds(10_000_000, Q, 1e-9, DalzellKind::Brickwork).unwrap() > 0.0);
    }

    #[test]
    fn bridge_example() {
        let b = disconnection_bounds(12, Q, 0.01, DisconnectionShape::Bridge).unwrap();
        assert!((b - 30.0 * 100f64.ln()).abs() < 1e-12);
        assert!((b - 138.155).abs() < 1e-3);
    }
}
