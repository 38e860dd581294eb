//! Reduced basis for layered circuits.
//!
//! After a layer acts, every gated pair sits in the span of `II` and `SS`, so
//! the state lives on one bit per block (gate pair or untouched site). Bit `b`
//! of a block index is the label of block `b`.

use nalgebra::DMatrix;

use crate::architectures::Layer;
use crate::perm_algebra::{boundary_site_pair, gate_transfer, ExperimentVector, GateTransfer, LocalDim};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    /// Site mask of each block.
    blocks: Vec<usize>,
    /// Gate sites `(i, j)` or `(i, i)` for an untouched site.
    sites: Vec<(usize, usize)>,
}

impl Partition {
    pub fn from_layer(n: usize, layer: &Layer) -> Self {
        let mut sites: Vec<(usize, usize)> = layer.pairs().to_vec();
        let mut covered = 0usize;
        for &(i, j) in layer.pairs() {
            covered |= 1 << i | 1 << j;
        }
        sites.extend((0..n).filter(|v| covered >> v & 1 == 0).map(|v| (v, v)));
        let blocks = sites.iter().map(|&(i, j)| 1 << i | 1 << j).collect();
        Partition { n, blocks, sites }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.blocks.len()
    }

    /// Block bits whose sign product under `a` is negative.
    pub fn sign_mask(&self, a: &ExperimentVector) -> usize {
        let am = a.mask() as usize;
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, &m)| (m & am).count_ones() % 2 == 1)
            .fold(0, |acc, (b, _)| acc | 1 << b)
    }

    /// Site labels of block state `x`.
    pub fn site_labels(&self, x: usize) -> usize {
        self.blocks.iter().enumerate().filter(|(b, _)| x >> b & 1 == 1).fold(0, |acc, (_, &m)| acc | m)
    }

    /// Block state after the layer acts on the boundary state of `a`.
    pub fn initial_vector(&self, a: &ExperimentVector, q: LocalDim) -> Vec<f64> {
        let g = gate_transfer(q);
        let factors: Vec<[f64; 2]> = self
            .sites
            .iter()
            .map(|&(i, j)| {
                let pi = boundary_site_pair(a.sign(i), q);
                if i == j {
                    return pi;
                }
                let pj = boundary_site_pair(a.sign(j), q);
                let out = g.apply([pi[0] * pj[0], pi[0] * pj[1], pi[1] * pj[0], pi[1] * pj[1]]);
                [out[0], out[3]]
            })
            .collect();
        kron(&factors)
    }

    /// Matrix of the layer defining `to`, acting on states of `self`.
    pub fn transfer_to(&self, to: &Partition, q: LocalDim) -> DMatrix<f64> {
        debug_assert_eq!(self.n, to.n);
        let g = gate_transfer(q);
        let mut t = DMatrix::zeros(to.dim(), self.dim());
        let mut factors = vec![[0.0; 2]; to.len()];
        for x in 0..self.dim() {
            let labels = self.site_labels(x);
            for (f, &(i, j)) in factors.iter_mut().zip(&to.sites) {
                *f = target_factor(&g, labels >> i & 1, labels >> j & 1, i == j);
            }
            t.column_mut(x).copy_from_slice(&kron(&factors));
        }
        t
    }
}

fn target_factor(g: &GateTransfer, li: usize, lj: usize, single: bool) -> [f64; 2] {
    if single {
        return if li == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
    }
    let col = li << 1 | lj;
    [g.m[0][col], g.m[3][col]]
}

/// Tensor product with factor `b` on bit `b`.
fn kron(factors: &[[f64; 2]]) -> Vec<f64> {
    let mut v = vec![0.0; 1 << factors.len()];
    v[0] = 1.0;
    for (b, f) in factors.iter().enumerate() {
        let half = 1 << b;
        for idx in 0..half {
            v[idx | half] = v[idx] * f[1];
            v[idx] *= f[0];
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architectures::brickwork_layers;
    use crate::architectures::Boundary;
    use crate::perm_algebra::boundary_state;

    fn embed(p: &Partition, v: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; 1 << n];
        for (x, &c) in v.iter().enumerate() {
            out[p.site_labels(x)] += c;
        }
        out
    }

    #[test]
    fn matches_site_basis_brickwork() {
        let q = LocalDim::QUBIT;
        for (n, bc) in [(5, Boundary::Open), (6, Boundary::Periodic), (6, Boundary::Open)] {
            let (odd, even) = brickwork_layers(n, bc).unwrap();
            let a = ExperimentVector::from_mask(n, 0b10011 & ((1 << n) - 1)).unwrap();
            let mut site = boundary_state(&a, q).unwrap();
            let po = Partition::from_layer(n, &odd);
            let pe = Partition::from_layer(n, &even);
            let mut block = po.initial_vector(&a, q);
            for &(i, j) in odd.pairs() {
                site.apply_two_site(i, j).unwrap();
            }
            let e = embed(&po, &block, n);
            for (x, y) in e.iter().zip(site.coeffs()) {
                assert!((x - y).abs() < 1e-13);
            }
            let t = po.transfer_to(&pe, q);
            block = (&t * nalgebra::DVector::from_vec(block)).as_slice().to_vec();
            for &(i, j) in even.pairs() {
                site.apply_two_site(i, j).unwrap();
            }
            let e = embed(&pe, &block, n);
            for (x, y) in e.iter().zip(site.coeffs()) {
                assert!((x - y).abs() < 1e-13, "n={n}");
            }
            let direct = site.pair_with(&a);
            let mask = pe.sign_mask(&a);
            let reduced: f64 = block
                .iter()
                .enumerate()
                .map(|(x, c)| if (x & mask).count_ones() % 2 == 0 { *c } else { -c })
                .sum();
            assert!((direct - reduced).abs() < 1e-12);
        }
    }
}
