//! Counting connected blocks in gate sequences.

use rayon::prelude::*;
use serde::Serialize;

use crate::architectures::{realization_rng, sample_graph_realization, Architecture, EnsembleSpec, GateSequence, Pair};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], components: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

fn spans(gates: &[Pair], n: usize) -> bool {
    let mut uf = UnionFind::new(n);
    gates.iter().for_each(|&(i, j)| uf.union(i, j));
    uf.components() <= 1
}

pub fn is_connected(gates: &GateSequence, n: usize) -> bool {
    spans(gates.gates(), n)
}

/// Blocks produced by a slicing algorithm.
///
/// `duplicated[k]` counts the leading gates of block `k` that are copies of
/// gates already applied in block `k-1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockDecomposition {
    pub blocks: Vec<GateSequence>,
    pub duplicated: Vec<usize>,
}

impl BlockDecomposition {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }
}

pub fn naive_decomposition(gates: &GateSequence, n: usize) -> BlockDecomposition {
    let mut out = BlockDecomposition::default();
    if n < 2 {
        return out;
    }
    let mut uf = UnionFind::new(n);
    let mut current = Vec::new();
    for &(i, j) in gates.gates() {
        current.push((i, j));
        uf.union(i, j);
        if uf.components() == 1 {
            out.blocks.push(GateSequence(std::mem::take(&mut current)));
            out.duplicated.push(0);
            uf = UnionFind::new(n);
        }
    }
    out
}

pub fn naive_count(gates: &GateSequence, n: usize) -> usize {
    naive_decomposition(gates, n).count()
}

/// Positions of gates with no later gate in `block` sharing a site.
fn last_layer(block: &[Pair], n: usize) -> Vec<usize> {
    let mut touched = vec![false; n];
    let mut out = Vec::new();
    for (k, &(i, j)) in block.iter().enumerate().rev() {
        if !touched[i] && !touched[j] {
            out.push(k);
        }
        touched[i] = true;
        touched[j] = true;
    }
    out
}

/// Slicing with commuting-gate carry-over and last-layer duplication.
pub fn greedy_decomposition(gates: &GateSequence, n: usize) -> BlockDecomposition {
    let mut out = BlockDecomposition::default();
    if n < 2 {
        return out;
    }
    let input = gates.gates();
    let mut pos = 0;
    let mut carry: Vec<Pair> = Vec::new();
    let mut carry_dup = 0;
    loop {
        let mut block = std::mem::take(&mut carry);
        let dup = carry_dup;
        let mut uf = UnionFind::new(n);
        block.iter().for_each(|&(i, j)| uf.union(i, j));
        let mut consumed = 0;
        while uf.components() > 1 || consumed == 0 {
            let Some(&(i, j)) = input.get(pos) else {
                return out;
            };
            block.push((i, j));
            uf.union(i, j);
            pos += 1;
            consumed += 1;
        }
        // Candidates in reverse order of appearance; never touch the duplicated prefix.
        let mut removed = Vec::new();
        for k in last_layer(&block, n) {
            if k < dup {
                continue;
            }
            let mut trial = block.clone();
            let g = trial.remove(k);
            if spans(&trial, n) {
                block = trial;
                removed.push(g);
            }
        }
        removed.reverse();
        let mut layer: Vec<Pair> = last_layer(&block, n).into_iter().map(|k| block[k]).collect();
        layer.reverse();
        carry_dup = layer.len();
        carry = layer;
        carry.extend(removed);
        out.blocks.push(GateSequence(block));
        out.duplicated.push(dup);
    }
}

pub fn greedy_count(gates: &GateSequence, n: usize) -> usize {
    greedy_decomposition(gates, n).count()
}

pub fn coupon_collector_expectation(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidDimension("coupon collector needs m >= 1".into()));
    }
    Ok(m as f64 * (1..=m).map(|k| 1.0 / k as f64).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionStats {
    pub n: usize,
    pub s: usize,
    pub naive_mean: f64,
    pub greedy_mean: f64,
    pub naive_se: f64,
    pub greedy_se: f64,
}

impl ConnectionStats {
    /// `s / naive_mean`, infinite when no block ever connects.
    pub fn naive_gates_per_connection(&self) -> f64 {
        self.s as f64 / self.naive_mean
    }

    pub fn greedy_gates_per_connection(&self) -> f64 {
        self.s as f64 / self.greedy_mean
    }
}

/// First `s` gates of one realization of `spec`.
pub fn sample_gates(spec: &EnsembleSpec, s: usize, seed: u64, index: u64) -> Result<GateSequence> {
    match &spec.arch {
        Architecture::Graph { graph } => {
            let mut rng = realization_rng(seed, index);
            Ok(sample_graph_realization(graph, s, &mut rng))
        }
        _ => {
            let mut gates = Vec::with_capacity(s);
            let per = spec.n / 2;
            let depth = s.div_ceil(per.max(1)) + 1;
            for layer in spec.layers(depth, seed, index)? {
                gates.extend_from_slice(layer.pairs());
                if gates.len() >= s {
                    break;
                }
            }
            gates.truncate(s);
            Ok(GateSequence(gates))
        }
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

pub fn mean_connection_count(spec: &EnsembleSpec, s: usize, samples: usize, seed: u64) -> Result<ConnectionStats> {
    if samples < 2 {
        return Err(Error::Config("connection statistics need at least 2 samples".into()));
    }
    let n = spec.n;
    let counts: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let gates = sample_gates(spec, s, seed, k)?;
            Ok((naive_count(&gates, n) as f64, greedy_count(&gates, n) as f64))
        })
        .collect::<Result<_>>()?;
    let (naive, greedy): (Vec<f64>, Vec<f64>) = counts.into_iter().unzip();
    let (naive_mean, naive_se) = mean_se(&naive);
    let (greedy_mean, greedy_se) = mean_se(&greedy);
    Ok(ConnectionStats { n, s, naive_mean, greedy_mean, naive_se, greedy_se })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(g: &[(usize, usize)]) -> GateSequence {
        GateSequence(g.to_vec())
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&seq(&[(0, 1), (1, 2), (2, 3)]), 4));
        assert!(!is_connected(&seq(&[(0, 1), (2, 3)]), 4));
        assert!(is_connected(&seq(&[]), 1));
    }

    #[test]
    fn naive_examples() {
        let g = seq(&[(0, 1), (1, 2), (2, 3), (0, 1), (1, 2), (2, 3)]);
        assert_eq!(naive_count(&g, 4), 2);
        assert_eq!(naive_count(&seq(&[(0, 1), (1, 2)]), 4), 0);
    }

    #[test]
    fn greedy_reuses_last_layer() {
        // a=0,b=1,c=2,d=3: [ab, ad, bc] then [ad] completes a second block.
        let g = seq(&[(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(naive_count(&g, 4), 1);
        let d = greedy_decomposition(&g, 4);
        assert_eq!(d.count(), 2);
        assert_eq!(d.duplicated, vec![0, 2]);
    }

    #[test]
    fn two_sites_one_block_per_gate() {
        let g = seq(&[(0, 1); 5]);
        assert_eq!(naive_count(&g, 2), 5);
        assert_eq!(greedy_count(&g, 2), 5);
    }

    #[test]
    fn coupon() {
        assert_eq!(coupon_collector_expectation(1).unwrap(), 1.0);
        assert_eq!(coupon_collector_expectation(2).unwrap(), 3.0);
        assert!((coupon_collector_expectation(7).unwrap() - 18.15).abs() < 0.01);
    }
}
