//! Site-basis kernels acting on `k` interleaved state columns.
//!
//! Column `c` of row `idx` lives at `data[idx * k + c]`.

use crate::architectures::SiteGraph;
use crate::perm_algebra::{gate_coupling, LocalDim};

/// Edge-averaged gate transfer in gather form.
///
/// Row `idx` of the output reads `idx` itself and its hypercube neighbours
/// `idx ^ (1 << v)`; the neighbour weight counts edges `(v, w)` whose labels
/// agree at `idx`.
#[derive(Debug, Clone)]
pub struct GraphKernel {
    n: usize,
    nbrs: Vec<usize>,
    degree: Vec<u32>,
    coupling: f64,
    inv_edges: f64,
}

impl GraphKernel {
    pub fn new(g: &SiteGraph, q: LocalDim) -> Self {
        let n = g.n();
        let mut nbrs = vec![0usize; n];
        for &(i, j) in g.edges() {
            nbrs[i] |= 1 << j;
            nbrs[j] |= 1 << i;
        }
        let inv_edges = 1.0 / g.edges().len() as f64;
        GraphKernel {
            n,
            degree: nbrs.iter().map(|m| m.count_ones()).collect(),
            nbrs,
            coupling: gate_coupling(q) * inv_edges,
            inv_edges,
        }
    }

    pub fn step(&self, src: &[f64], dst: &mut [f64], k: usize) {
        debug_assert_eq!(src.len(), k << self.n);
        let mut weights = vec![0.0; self.n];
        for (idx, out) in dst.chunks_exact_mut(k).enumerate() {
            let mut unequal = 0;
            for (v, w) in weights.iter_mut().enumerate() {
                let same = if idx >> v & 1 == 1 { idx } else { !idx };
                let eq = (self.nbrs[v] & same).count_ones();
                unequal += self.degree[v] - eq;
                *w = f64::from(eq) * self.coupling;
            }
            let own = 1.0 - f64::from(unequal / 2) * self.inv_edges;
            let row = &src[idx * k..idx * k + k];
            for (o, x) in out.iter_mut().zip(row) {
                *o = own * x;
            }
            for (v, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let nb = (idx ^ 1 << v) * k;
                for (o, x) in out.iter_mut().zip(&src[nb..nb + k]) {
                    *o += w * x;
                }
            }
        }
    }
}

/// `sum_idx (-1)^{|idx & mask|} data[idx * k + col]`
pub fn signed_sum(data: &[f64], k: usize, col: usize, mask: usize) -> f64 {
    data.iter()
        .skip(col)
        .step_by(k)
        .enumerate()
        .map(|(idx, &x)| if (idx & mask).count_ones() % 2 == 0 { x } else { -x })
        .sum()
}
