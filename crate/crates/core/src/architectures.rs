//! Circuit ensembles: graph families, brickworks and matching-based layers.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connectivity::UnionFind;
use crate::error::{Error, Result};
use crate::engine::kernels::GraphKernel;
use crate::perm_algebra::{check_pair, CommutantState, LocalDim};

pub type Pair = (usize, usize);

fn normalized(p: Pair) -> Pair {
    (p.0.min(p.1), p.0.max(p.1))
}

/// A simple undirected graph on sites `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct SiteGraph {
    n: usize,
    edges: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for SiteGraph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        SiteGraph::new(raw.n, raw.edges.into_iter().map(|[i, j]| (i, j)).collect())
    }
}

impl From<SiteGraph> for RawGraph {
    fn from(g: SiteGraph) -> RawGraph {
        RawGraph { n: g.n, edges: g.edges.into_iter().map(|(i, j)| [i, j]).collect() }
    }
}

impl SiteGraph {
    /// Edges keep their given order, stored as `(min, max)`.
    pub fn new(n: usize, edges: Vec<Pair>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("graph needs at least one site".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            check_pair(n, e.0, e.1)?;
            let e = normalized(e);
            if !seen.insert(e) {
                return Err(Error::Construction { what: "graph".into(), reason: format!("duplicate edge {e:?}") });
            }
            out.push(e);
        }
        Ok(SiteGraph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Pair] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        self.edges.iter().for_each(|&(i, j)| uf.union(i, j));
        uf.components() == 1
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&normalized((i, j)))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    Linear,
    Circle,
    Complete,
    Star,
    Lollipop,
    Bridge,
    Hourglass,
    Tree { arity: usize },
    RandomRegular { degree: usize, seed: u64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Linear => "linear".to_string(),
            Family::Circle => "circle".to_string(),
            Family::Complete => "complete".to_string(),
            Family::Star => "star".to_string(),
            Family::Lollipop => "lollipop".to_string(),
            Family::Bridge => "bridge".to_string(),
            Family::Hourglass => "hourglass".to_string(),
            Family::Tree { arity } => format!("tree:{arity}"),
            Family::RandomRegular { degree, seed } => format!("random_regular:{degree}:{seed}"),
        };
        f.pad(&name)
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `name`, `tree[:k]`, `random_regular:d[:seed]`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let mut num = |default: Option<u64>| -> Result<u64> {
            match parts.next() {
                Some(p) => p.parse().map_err(|_| Error::Config(format!("bad family parameter {p:?} in {s:?}"))),
                None => default.ok_or_else(|| Error::Config(format!("family {s:?} needs a parameter"))),
            }
        };
        let fam = match name {
            "linear" => Family::Linear,
            "circle" => Family::Circle,
            "complete" => Family::Complete,
            "star" => Family::Star,
            "lollipop" => Family::Lollipop,
            "bridge" => Family::Bridge,
            "hourglass" => Family::Hourglass,
            "tree" => Family::Tree { arity: num(Some(2))? as usize },
            "random_regular" | "regular" => {
                let degree = num(None)? as usize;
                Family::RandomRegular { degree, seed: num(Some(0))? }
            }
            _ => return Err(Error::Config(format!("unknown graph family {s:?}"))),
        };
        if parts.next().is_some() {
            return Err(Error::Config(format!("too many parameters in family {s:?}")));
        }
        Ok(fam)
    }
}

fn clique(lo: usize, hi: usize, edges: &mut Vec<Pair>) {
    for i in lo..hi {
        for j in i + 1..hi {
            edges.push((i, j));
        }
    }
}

pub fn make_family(family: Family, n: usize) -> Result<SiteGraph> {
    if n < 2 {
        return Err(Error::Construction { what: family.to_string(), reason: format!("n={n} < 2") });
    }
    let half = n.div_ceil(2);
    let mut edges = Vec::new();
    match family {
        Family::Linear => edges.extend((0..n - 1).map(|i| (i, i + 1))),
        Family::Circle => {
            edges.extend((0..n - 1).map(|i| (i, i + 1)));
            if n > 2 {
                edges.push((0, n - 1));
            }
        }
        Family::Complete => clique(0, n, &mut edges),
        Family::Star => edges.extend((1..n).map(|i| (0, i))),
        Family::Lollipop => {
            clique(0, half, &mut edges);
            edges.extend((half - 1..n - 1).map(|i| (i, i + 1)));
        }
        Family::Bridge => {
            clique(0, half, &mut edges);
            clique(half, n, &mut edges);
            edges.push((half - 1, half));
        }
        Family::Hourglass => {
            clique(0, half, &mut edges);
            clique(half - 1, n, &mut edges);
        }
        Family::Tree { arity } => {
            if arity == 0 {
                return Err(Error::Construction { what: family.to_string(), reason: "arity must be positive".into() });
            }
            edges.extend((1..n).map(|i| ((i - 1) / arity, i)));
        }
        Family::RandomRegular { degree, seed } => return random_regular(n, degree, seed),
    }
    SiteGraph::new(n, edges)
}

fn random_regular(n: usize, d: usize, seed: u64) -> Result<SiteGraph> {
    const ATTEMPTS: usize = 100_000;
    let fail = |reason: String| Error::Construction { what: format!("random_regular:{d}"), reason };
    if d == 0 || d >= n {
        return Err(fail(format!("degree must satisfy 0 < d < n={n}")));
    }
    if d * n % 2 == 1 {
        return Err(fail(format!("d*n = {} is odd", d * n)));
    }
    if d == 1 && n > 2 {
        return Err(fail("a 1-regular graph on more than two sites is disconnected".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let e = normalized((pair[0], pair[1]));
            if e.0 == e.1 || !seen.insert(e) {
                continue 'attempt;
            }
        }
        let g = SiteGraph::new(n, seen.into_iter().collect())?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(fail(format!("no simple connected sample in {ATTEMPTS} attempts")))
}

/// Ordered list of gate placements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateSequence(pub Vec<Pair>);

impl GateSequence {
    pub fn new(n: usize, gates: Vec<Pair>) -> Result<Self> {
        for &(i, j) in &gates {
            check_pair(n, i, j)?;
        }
        Ok(GateSequence(gates))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gates(&self) -> &[Pair] {
        &self.0
    }
}

/// A set of pairwise-disjoint gates applied simultaneously.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layer {
    pairs: Vec<Pair>,
}

impl Layer {
    pub fn new(n: usize, pairs: Vec<Pair>) -> Result<Self> {
        let mut used = vec![false; n];
        let mut out = Vec::with_capacity(pairs.len());
        for p in pairs {
            check_pair(n, p.0, p.1)?;
            for s in [p.0, p.1] {
                if std::mem::replace(&mut used[s], true) {
                    return Err(Error::Construction { what: "layer".into(), reason: format!("site {s} used twice") });
                }
            }
            out.push(normalized(p));
        }
        out.sort_unstable();
        Ok(Layer { pairs: out })
    }

    pub fn empty() -> Self {
        Layer { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn is_perfect_matching(&self, n: usize) -> bool {
        2 * self.pairs.len() == n
    }

    /// `(0,1), (2,3), ...`
    pub fn standard_pairing(n: usize) -> Result<Self> {
        Layer::new(n, (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

pub fn brickwork_layers(n: usize, boundary: Boundary) -> Result<(Layer, Layer)> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("brickwork needs n >= 2, got {n}")));
    }
    if boundary == Boundary::Periodic && n % 2 == 1 {
        return Err(Error::InvalidSpec(format!("periodic brickwork needs even n, got {n}")));
    }
    let odd = Layer::standard_pairing(n)?;
    let mut even: Vec<Pair> = (1..n.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && n > 2 {
        even.push((n - 1, 0));
    }
    Ok((odd, Layer::new(n, even)?))
}

fn require_even(n: usize, what: &str) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidSpec(format!("{what} needs even n >= 2, got {n}")));
    }
    Ok(())
}

pub fn sample_pcg_layer<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Layer> {
    require_even(n, "a perfect matching")?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Layer::new(n, perm.chunks(2).map(|c| (c[0], c[1])).collect())
}

fn union_connected(n: usize, a: &Layer, b: &Layer) -> bool {
    let mut uf = UnionFind::new(n);
    a.pairs.iter().chain(&b.pairs).for_each(|&(i, j)| uf.union(i, j));
    uf.components() == 1
}

/// Uniform perfect matching whose union with `prev` connects all sites.
pub fn sample_pb_layer<R: Rng + ?Sized>(prev: &Layer, n: usize, rng: &mut R) -> Result<Layer> {
    require_even(n, "permuted brickwork")?;
    if !prev.is_perfect_matching(n) {
        return Err(Error::InvalidSpec("previous layer is not a perfect matching".into()));
    }
    loop {
        let layer = sample_pcg_layer(n, rng)?;
        if union_connected(n, prev, &layer) {
            return Ok(layer);
        }
    }
}

pub fn sample_pbfe_odd_layer<R: Rng + ?Sized>(fixed_even: &Layer, n: usize, rng: &mut R) -> Result<Layer> {
    sample_pb_layer(fixed_even, n, rng)
}

pub fn sample_graph_realization<R: Rng + ?Sized>(g: &SiteGraph, s: usize, rng: &mut R) -> GateSequence {
    if g.edges.is_empty() {
        return GateSequence::default();
    }
    GateSequence((0..s).map(|_| g.edges[rng.random_range(0..g.edges.len())]).collect())
}

/// Independent generator for realization `index` under `master_seed`.
pub fn realization_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Architecture {
    /// Gates drawn i.i.d. uniformly from the graph's edges; one step per gate.
    Graph { graph: SiteGraph },
    Brickwork { boundary: Boundary },
    /// Parallel complete graph: independent uniform perfect matchings.
    Pcg,
    /// Permuted brickwork: consecutive matchings jointly connected.
    Pb,
    /// Permuted brickwork with a fixed even layer.
    Pbfe { fixed_even: Layer },
    /// Independent single-site unitaries only; every step is trivial.
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub q: LocalDim,
    pub arch: Architecture,
}

impl EnsembleSpec {
    pub fn graph(graph: SiteGraph, q: LocalDim) -> Result<Self> {
        if graph.edges.is_empty() {
            return Err(Error::InvalidSpec("graph ensemble needs at least one edge".into()));
        }
        Ok(EnsembleSpec { n: graph.n, q, arch: Architecture::Graph { graph } })
    }

    pub fn family(family: Family, n: usize, q: LocalDim) -> Result<Self> {
        Self::graph(make_family(family, n)?, q)
    }

    pub fn brickwork(n: usize, boundary: Boundary, q: LocalDim) -> Result<Self> {
        brickwork_layers(n, boundary)?;
        Ok(EnsembleSpec { n, q, arch: Architecture::Brickwork { boundary } })
    }

    pub fn pcg(n: usize, q: LocalDim) -> Result<Self> {
        require_even(n, "PCG")?;
        Ok(EnsembleSpec { n, q, arch: Architecture::Pcg })
    }

    pub fn pb(n: usize, q: LocalDim) -> Result<Self> {
        require_even(n, "PB")?;
        Ok(EnsembleSpec { n, q, arch: Architecture::Pb })
    }

    pub fn pbfe(n: usize, q: LocalDim) -> Result<Self> {
        Self::pbfe_with(Layer::standard_pairing(n)?, n, q)
    }

    pub fn pbfe_with(fixed_even: Layer, n: usize, q: LocalDim) -> Result<Self> {
        require_even(n, "PBFE")?;
        if !fixed_even.is_perfect_matching(n) {
            return Err(Error::InvalidSpec("PBFE fixed layer must be a perfect matching".into()));
        }
        Ok(EnsembleSpec { n, q, arch: Architecture::Pbfe { fixed_even } })
    }

    /// Single-site Haar unitaries on `n` sites and nothing else.
    pub fn local(n: usize, q: LocalDim) -> Result<Self> {
        if n == 0 || n > CommutantState::MAX_SITES {
            return Err(Error::InvalidSpec(format!("unsupported site count {n}")));
        }
        Ok(EnsembleSpec { n, q, arch: Architecture::Local })
    }

    /// Whether evaluation averages over sampled realizations.
    pub fn is_sampled(&self) -> bool {
        matches!(self.arch, Architecture::Pcg | Architecture::Pb | Architecture::Pbfe { .. })
    }

    pub fn is_layered(&self) -> bool {
        !matches!(self.arch, Architecture::Graph { .. } | Architecture::Local)
    }

    /// Gates per step: 1 for graphs, the layer size for layered ensembles.
    pub fn gates_per_step(&self, step: usize) -> usize {
        match &self.arch {
            Architecture::Graph { .. } => 1,
            Architecture::Local => 0,
            Architecture::Brickwork { boundary } => {
                let (odd, even) = brickwork_layers(self.n, *boundary).expect("validated");
                if step % 2 == 1 { odd.pairs.len() } else { even.pairs.len() }
            }
            _ => self.n / 2,
        }
    }

    /// Layer sequence of one realization (deterministic for brickwork).
    pub fn layers(&self, depth: usize, master_seed: u64, realization: u64) -> Result<Vec<Layer>> {
        let mut stream = LayerStream::new(self, master_seed, realization)?;
        (0..depth).map(|_| stream.next_layer()).collect()
    }
}

/// Lazily generated layers of one realization of a layered ensemble.
#[derive(Debug, Clone)]
pub struct LayerStream {
    n: usize,
    arch: Architecture,
    rng: ChaCha8Rng,
    prev: Option<Layer>,
    t: usize,
}

impl LayerStream {
    pub fn new(spec: &EnsembleSpec, master_seed: u64, realization: u64) -> Result<Self> {
        if !spec.is_layered() {
            return Err(Error::InvalidSpec("graph and single-site ensembles are not layered".into()));
        }
        Ok(LayerStream {
            n: spec.n,
            arch: spec.arch.clone(),
            rng: realization_rng(master_seed, realization),
            prev: None,
            t: 0,
        })
    }

    /// Number of layers produced so far.
    pub fn depth(&self) -> usize {
        self.t
    }

    pub fn next_layer(&mut self) -> Result<Layer> {
        self.t += 1;
        let n = self.n;
        let layer = match &self.arch {
            Architecture::Brickwork { boundary } => {
                let (odd, even) = brickwork_layers(n, *boundary)?;
                if self.t % 2 == 1 { odd } else { even }
            }
            Architecture::Pcg => sample_pcg_layer(n, &mut self.rng)?,
            Architecture::Pb => match &self.prev {
                None => sample_pcg_layer(n, &mut self.rng)?,
                Some(prev) => sample_pb_layer(prev, n, &mut self.rng)?,
            },
            Architecture::Pbfe { fixed_even } => {
                if self.t % 2 == 1 {
                    sample_pbfe_odd_layer(fixed_even, n, &mut self.rng)?
                } else {
                    fixed_even.clone()
                }
            }
            Architecture::Graph { .. } | Architecture::Local => unreachable!("checked in new"),
        };
        self.prev = Some(layer.clone());
        Ok(layer)
    }
}

/// The edge-averaged single-gate moment operator of a graph.
#[derive(Debug, Clone)]
pub struct GraphStep {
    graph: SiteGraph,
    q: LocalDim,
}

pub fn graph_step_operator(g: &SiteGraph, q: LocalDim) -> Result<GraphStep> {
    if g.edges.is_empty() {
        return Err(Error::InvalidSpec("graph step needs at least one edge".into()));
    }
    Ok(GraphStep { graph: g.clone(), q })
}

impl GraphStep {
    pub fn graph(&self) -> &SiteGraph {
        &self.graph
    }

    pub fn apply(&self, state: &mut CommutantState) -> Result<()> {
        if state.n() != self.graph.n || state.q() != self.q {
            return Err(Error::InvalidSpec("state does not match the graph".into()));
        }
        let kernel = GraphKernel::new(&self.graph, self.q);
        let mut scratch = vec![0.0; state.coeffs().len()];
        kernel.step(state.coeffs_mut(), &mut scratch, 1);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        assert_eq!(make_family(Family::Linear, 4).unwrap().edges(), &[(0, 1), (1, 2), (2, 3)]);
        let b = make_family(Family::Bridge, 6).unwrap();
        assert_eq!(b.edges().len(), 7);
        assert!(b.has_edge(2, 3) && b.has_edge(0, 2) && b.has_edge(3, 5) && !b.has_edge(1, 4));
        assert_eq!(make_family(Family::Star, 5).unwrap().edges(), &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    }

    #[test]
    fn edge_counts() {
        for n in 2..=14 {
            assert_eq!(make_family(Family::Complete, n).unwrap().edges().len(), n * (n - 1) / 2);
            let c = n.div_ceil(2);
            assert_eq!(make_family(Family::Lollipop, n).unwrap().edges().len(), c * (c - 1) / 2 + n / 2);
            if n % 2 == 0 {
                assert_eq!(make_family(Family::Bridge, n).unwrap().edges().len(), n * n / 4 - n / 2 + 1);
            }
            let h = make_family(Family::Hourglass, n).unwrap();
            let k = n + 1 - c;
            assert_eq!(h.edges().len(), c * (c - 1) / 2 + k * (k - 1) / 2);
        }
    }

    #[test]
    fn all_families_connected() {
        let fams = [
            Family::Linear,
            Family::Circle,
            Family::Complete,
            Family::Star,
            Family::Lollipop,
            Family::Bridge,
            Family::Hourglass,
            Family::Tree { arity: 2 },
            Family::Tree { arity: 3 },
        ];
        for n in 2..=13 {
            for f in fams {
                assert!(make_family(f, n).unwrap().is_connected(), "{f} n={n}");
            }
        }
        for seed in 0..5 {
            let g = make_family(Family::RandomRegular { degree: 3, seed }, 12).unwrap();
            assert!(g.is_connected());
            let mut deg = [0; 12];
            for &(i, j) in g.edges() {
                deg[i] += 1;
                deg[j] += 1;
            }
            assert!(deg.iter().all(|&d| d == 3));
        }
    }

    #[test]
    fn random_regular_errors() {
        assert!(make_family(Family::RandomRegular { degree: 3, seed: 0 }, 5).is_err());
        assert!(make_family(Family::RandomRegular { degree: 6, seed: 0 }, 6).is_err());
    }

    #[test]
    fn brickwork_examples() {
        let (o, e) = brickwork_layers(4, Boundary::Open).unwrap();
        assert_eq!(o.pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(e.pairs(), &[(1, 2)]);
        let (_, e) = brickwork_layers(4, Boundary::Periodic).unwrap();
        assert_eq!(e.pairs(), &[(0, 3), (1, 2)]);
        let (_, e) = brickwork_layers(2, Boundary::Open).unwrap();
        assert!(e.pairs().is_empty());
        assert!(brickwork_layers(5, Boundary::Periodic).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("tree:3".parse::<Family>().unwrap(), Family::Tree { arity: 3 });
        assert_eq!("tree".parse::<Family>().unwrap(), Family::Tree { arity: 2 });
        assert_eq!(
            "random_regular:3:7".parse::<Family>().unwrap(),
            Family::RandomRegular { degree: 3, seed: 7 }
        );
        assert!("ring".parse::<Family>().is_err());
        assert!("random_regular".parse::<Family>().is_err());
    }

    #[test]
    fn graph_json() {
        let g = SiteGraph::from_json(r#"{"n":3,"edges":[[0,1],[2,1]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.to_json().unwrap(), r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        assert!(SiteGraph::from_json(r#"{"n":3,"edges":[[0,3]]}"#).is_err());
        assert!(SiteGraph::from_json(r#"{"n":3,"edges":[[1,1]]}"#).is_err());
        assert!(SiteGraph::from_json(r#"{"n":3,"edges":[[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn pb_small_cases() {
        let mut rng = realization_rng(1, 0);
        let prev = Layer::standard_pairing(2).unwrap();
        assert_eq!(sample_pb_layer(&prev, 2, &mut rng).unwrap(), prev);
        let prev = Layer::standard_pairing(4).unwrap();
        for _ in 0..200 {
            assert_ne!(sample_pb_layer(&prev, 4, &mut rng).unwrap(), prev);
        }
        assert!(sample_pcg_layer(5, &mut rng).is_err());
    }

    #[test]
    fn layered_specs_replay() {
        let spec = EnsembleSpec::pb(8, LocalDim::QUBIT).unwrap();
        assert_eq!(spec.layers(6, 9, 3).unwrap(), spec.layers(6, 9, 3).unwrap());
        assert_ne!(spec.layers(6, 9, 3).unwrap(), spec.layers(6, 9, 4).unwrap());
        let pbfe = EnsembleSpec::pbfe(6, LocalDim::QUBIT).unwrap();
        let ls = pbfe.layers(4, 0, 0).unwrap();
        assert_eq!(ls[1], Layer::standard_pairing(6).unwrap());
        assert_eq!(ls[3], ls[1]);
    }
}
