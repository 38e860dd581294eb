//! Eigendecomposition of a single graph step restricted to the commutant.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{apply_step, basis_and_cobasis, sym_eigen, Layout};
use crate::architectures::{Architecture, EnsembleSpec};
use crate::error::{Error, Result};
use crate::perm_algebra::ExperimentVector;

#[derive(Debug, Clone, Serialize)]
pub struct EigenGroup {
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

/// Spectrum of the step in orthonormal commutant coordinates.
#[derive(Debug, Clone)]
pub struct CommutantSpectrum {
    pub n: usize,
    pub groups: Vec<EigenGroup>,
    vectors: Vec<DMatrix<f64>>,
    gram_inv_sqrt: DMatrix<f64>,
}

impl CommutantSpectrum {
    pub fn of_step(spec: &EnsembleSpec) -> Result<Self> {
        if !matches!(spec.arch, Architecture::Graph { .. } | Architecture::Local) {
            return Err(Error::InvalidSpec("spectral reference needs a time-independent step".into()));
        }
        let layout = Layout::new(spec.n, spec.q)?;
        let (v, _) = basis_and_cobasis(&layout)?;
        let mut xv = v.clone();
        for mut col in xv.column_iter_mut() {
            apply_step(col.as_mut_slice(), &layout, spec, 1)?;
        }
        let k = v.tr_mul(&xv);
        let (gl, gv) = sym_eigen(&v.tr_mul(&v));
        let gram_inv_sqrt = &gv * DMatrix::from_diagonal(&gl.map(|x| 1.0 / x.sqrt())) * gv.transpose();
        let s = &gram_inv_sqrt * k * &gram_inv_sqrt;
        let (values, vecs) = sym_eigen(&s);
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let scale = values.amax().max(f64::MIN_POSITIVE);
        let mut groups: Vec<EigenGroup> = Vec::new();
        let mut vectors: Vec<Vec<DVector<f64>>> = Vec::new();
        for i in order {
            let lam = values[i];
            let col = vecs.column(i).into_owned();
            match groups.last_mut() {
                Some(last) if (last.eigenvalue - lam).abs() <= 1e-9 * scale => {
                    last.multiplicity += 1;
                    vectors.last_mut().expect("paired").push(col);
                }
                _ => {
                    groups.push(EigenGroup { eigenvalue: lam, multiplicity: 1 });
                    vectors.push(vec![col]);
                }
            }
        }
        let vectors = vectors.iter().map(|vs| DMatrix::from_columns(vs)).collect();
        Ok(CommutantSpectrum { n: spec.n, groups, vectors, gram_inv_sqrt })
    }

    /// `||P_i Psi(a)||^2` for every eigenvalue group.
    pub fn weights(&self, a: &ExperimentVector) -> Vec<f64> {
        let w = DVector::from_fn(1 << self.n, |s, _| if (s as u64 & a.mask()).count_ones() % 2 == 0 { 1.0 } else { -1.0 });
        let y = &self.gram_inv_sqrt * w;
        self.vectors.iter().map(|p| p.tr_mul(&y).norm_squared()).collect()
    }

    /// `sum_{lambda != 1} lambda^s w_lambda / w_1`
    pub fn error(&self, a: &ExperimentVector, steps: usize) -> Result<f64> {
        let w = self.weights(a);
        let fixed = self
            .groups
            .iter()
            .position(|g| (g.eigenvalue - 1.0).abs() <= 1e-9)
            .ok_or_else(|| Error::Numerical("step has no unit eigenvalue".into()))?;
        let rest: f64 = self
            .groups
            .iter()
            .zip(&w)
            .enumerate()
            .filter(|(i, _)| *i != fixed)
            .map(|(_, (g, wi))| g.eigenvalue.powi(steps as i32) * wi)
            .sum();
        Ok(rest / w[fixed])
    }
}

pub fn spectral_error(spec: &EnsembleSpec, a: &ExperimentVector, steps: usize) -> Result<f64> {
    CommutantSpectrum::of_step(spec)?.error(a, steps)
}
