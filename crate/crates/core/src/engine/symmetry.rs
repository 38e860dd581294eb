//! Experiment classes under site relabelings that preserve the ensemble.

use std::collections::BTreeSet;

use crate::architectures::{brickwork_layers, Architecture, EnsembleSpec, Layer, Pair};
use crate::connectivity::UnionFind;
use crate::error::{Error, Result};
use crate::perm_algebra::ExperimentVector;

/// Orbit representatives (smallest mask) with orbit sizes, sorted by mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    pub reps: Vec<ExperimentVector>,
    pub sizes: Vec<usize>,
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn single(a: ExperimentVector) -> Self {
        ClassSet { reps: vec![a], sizes: vec![1] }
    }
}

fn edge_set(pairs: &[Pair], perm: &[usize]) -> BTreeSet<Pair> {
    pairs
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (perm[i], perm[j]);
            (a.min(b), a.max(b))
        })
        .collect()
}

fn preserves(pairs: &[Pair], perm: &[usize]) -> bool {
    let identity: Vec<usize> = (0..perm.len()).collect();
    edge_set(pairs, perm) == edge_set(pairs, &identity)
}

fn is_symmetry(spec: &EnsembleSpec, perm: &[usize]) -> bool {
    match &spec.arch {
        Architecture::Local | Architecture::Pcg | Architecture::Pb => true,
        Architecture::Graph { graph } => preserves(graph.edges(), perm),
        Architecture::Brickwork { boundary } => {
            let (odd, even) = brickwork_layers(spec.n, *boundary).expect("validated spec");
            preserves(odd.pairs(), perm) && preserves(even.pairs(), perm)
        }
        Architecture::Pbfe { fixed_even } => preserves(fixed_even.pairs(), perm),
    }
}

/// Candidate relabelings: transpositions, reflections, rotations and swaps of
/// matched pairs. Only verified symmetries are kept.
pub fn symmetry_generators(spec: &EnsembleSpec) -> Vec<Vec<usize>> {
    let n = spec.n;
    let mut gens = Vec::new();
    let mut joined = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, j);
            if joined.find(i) != joined.find(j) && is_symmetry(spec, &p) {
                joined.union(i, j);
                gens.push(p);
            }
        }
    }
    let mut cands: Vec<Vec<usize>> = Vec::new();
    for k in 1..n {
        cands.push((0..n).map(|i| (i + k) % n).collect());
    }
    for k in 0..n {
        cands.push((0..n).map(|i| (k + n - i) % n).collect());
    }
    if let Architecture::Pbfe { fixed_even } = &spec.arch {
        cands.extend(pair_swaps(n, fixed_even));
    }
    gens.extend(cands.into_iter().filter(|p| is_symmetry(spec, p)));
    gens
}

fn pair_swaps(n: usize, layer: &Layer) -> Vec<Vec<usize>> {
    let pairs = layer.pairs();
    pairs
        .windows(2)
        .map(|w| {
            let mut p: Vec<usize> = (0..n).collect();
            let ((a, b), (c, d)) = (w[0], w[1]);
            p.swap(a, c);
            p.swap(b, d);
            p
        })
        .collect()
}

fn permute_mask(mask: usize, perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, &t)| acc | 1 << t)
}

/// Classes of `{0,1}^n`; without symmetry every vector is its own class.
pub fn experiment_classes(spec: &EnsembleSpec, use_symmetry: bool, cap: usize) -> Result<ClassSet> {
    let n = spec.n;
    if n > 30 {
        return Err(Error::InvalidDimension(format!("n={n} too large for class enumeration")));
    }
    let total = 1usize << n;
    let gens = if use_symmetry { symmetry_generators(spec) } else { Vec::new() };
    let mut uf = UnionFind::new(total);
    for g in &gens {
        for m in 0..total {
            uf.union(m, permute_mask(m, g));
        }
    }
    if uf.components() > cap {
        return Err(Error::ClassLimit { classes: uf.components(), cap });
    }
    let mut rep_of_root = vec![usize::MAX; total];
    let mut reps = Vec::with_capacity(uf.components());
    let mut sizes = Vec::with_capacity(uf.components());
    let mut slot = vec![0usize; total];
    for m in 0..total {
        let r = uf.find(m);
        if rep_of_root[r] == usize::MAX {
            rep_of_root[r] = reps.len();
            reps.push(ExperimentVector::from_mask(n, m as u64)?);
            sizes.push(0);
        }
        slot[m] = rep_of_root[r];
        sizes[slot[m]] += 1;
    }
    Ok(ClassSet { reps, sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architectures::{Boundary, Family};
    use crate::perm_algebra::LocalDim;

    fn count(spec: &EnsembleSpec) -> usize {
        experiment_classes(spec, true, usize::MAX).unwrap().len()
    }

    #[test]
    fn class_counts() {
        let q = LocalDim::QUBIT;
        assert_eq!(count(&EnsembleSpec::family(Family::Complete, 8, q).unwrap()), 9);
        assert_eq!(count(&EnsembleSpec::pcg(8, q).unwrap()), 9);
        assert_eq!(count(&EnsembleSpec::family(Family::Star, 6, q).unwrap()), 12);
        // reversal on 6 sites: (64 + 8) / 2
        assert_eq!(count(&EnsembleSpec::family(Family::Linear, 6, q).unwrap()), 36);
        // dihedral necklaces of 6 beads
        assert_eq!(count(&EnsembleSpec::family(Family::Circle, 6, q).unwrap()), 13);
        assert_eq!(count(&EnsembleSpec::brickwork(6, Boundary::Open, q).unwrap()), 36);
        // pair types (k0, k1, k2) with k0 + k1 + k2 = 3
        assert_eq!(count(&EnsembleSpec::pbfe(6, q).unwrap()), 10);
        assert_eq!(count(&EnsembleSpec::family(Family::Lollipop, 12, q).unwrap()), 768);
    }

    #[test]
    fn cap_enforced() {
        let spec = EnsembleSpec::family(Family::Linear, 10, LocalDim::QUBIT).unwrap();
        assert!(matches!(experiment_classes(&spec, false, 100), Err(Error::ClassLimit { .. })));
    }
}
