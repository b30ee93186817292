//! Cayley sum graphs `Γ(k x k, S)`: `x ~ y` iff `x + y ∈ S`.
//!
//! Vertices are the integers `u * q + v`. Adjacency is never stored as a
//! matrix; the neighbors of `x` are generated as `{s - x : s ∈ S}`. Subgraph
//! counts run on the loop-deleted view through the [`Graph`] trait, which
//! also covers sampled Erdős–Rényi graphs and small hand-built graphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::FiniteField;
use crate::sidon::{GroupPoint, SumSet};

/// Above this vertex count membership falls back to the hash set in `S`.
const BITMAP_LIMIT: u64 = 1 << 24;
/// Vertex limit for codegree scans (about `p = 127` for prime fields).
pub const MAX_SCAN_WORK: u64 = 1 << 32;
/// Vertex limit for exhaustive pattern enumeration.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 60;

/// Loopless simple graph interface used by the counting routines.
pub trait Graph {
    fn vertex_count(&self) -> usize;
    /// Calls `f` on every neighbor of `v` other than `v` itself.
    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize));
    fn adjacent(&self, u: usize, v: usize) -> bool;

    fn degree(&self, v: usize) -> usize {
        let mut d = 0;
        self.for_each_neighbor(v, &mut |_| d += 1);
        d
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_neighbor(v, &mut |w| out.push(w));
        out
    }

    fn edge_count(&self) -> u64 {
        let total: u64 = (0..self.vertex_count()).map(|v| self.degree(v) as u64).sum();
        total / 2
    }
}

/// The Cayley sum graph of a connection set.
#[derive(Debug, Clone)]
pub struct CayleySumGraph {
    set: SumSet,
    q: u32,
    bitmap: Option<Vec<u64>>,
}

/// Build the graph `Γ(k x k, S)`.
pub fn build(set: &SumSet) -> CayleySumGraph {
    let q = set.field().q();
    let n = u64::from(q) * u64::from(q);
    let bitmap = (n <= BITMAP_LIMIT).then(|| {
        let mut bits = vec![0u64; n.div_ceil(64) as usize];
        for pt in set.points() {
            let c = pt.encode(q);
            bits[(c / 64) as usize] |= 1 << (c % 64);
        }
        bits
    });
    CayleySumGraph {
        set: set.clone(),
        q,
        bitmap,
    }
}

impl CayleySumGraph {
    pub fn sum_set(&self) -> &SumSet {
        &self.set
    }

    pub fn field(&self) -> &FiniteField {
        self.set.field()
    }

    /// Number of vertices `q^2`.
    pub fn n(&self) -> u64 {
        u64::from(self.q) * u64::from(self.q)
    }

    /// Every vertex has this degree, counting a loop once.
    pub fn degree(&self) -> usize {
        self.set.len()
    }

    pub fn vertex(&self, x: u64) -> GroupPoint {
        GroupPoint::decode(x, self.q)
    }

    #[inline]
    fn contains_code(&self, code: u64) -> bool {
        match &self.bitmap {
            Some(bits) => bits[(code / 64) as usize] >> (code % 64) & 1 == 1,
            None => self.set.contains(GroupPoint::decode(code, self.q)),
        }
    }

    /// `x + y ∈ S`, loops included.
    pub fn adjacent_points(&self, x: GroupPoint, y: GroupPoint) -> bool {
        let s = x.add(y, self.field());
        self.contains_code(s.encode(self.q))
    }

    pub fn adjacent_codes(&self, x: u64, y: u64) -> bool {
        self.adjacent_points(self.vertex(x), self.vertex(y))
    }

    /// Row of the 0/1 adjacency matrix: `{s - x : s ∈ S}`, with `x` itself
    /// present iff `2x ∈ S`.
    pub fn neighbor_codes(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        let xp = self.vertex(x);
        let f = self.field();
        self.set.points().iter().map(move |&s| s.sub(xp, f).encode(self.q))
    }

    /// Loop-deleted view used for subgraph statistics.
    pub fn simple_view(&self) -> SimpleGraphView<'_> {
        SimpleGraphView { graph: self }
    }

    /// Dense 0/1 adjacency matrix (diagonal 1 where `2x ∈ S`).
    pub fn dense_adjacency(&self, max_n: u64) -> Result<Vec<f64>> {
        let n = self.n();
        if n > max_n {
            return Err(Error::SizeExceeded(format!(
                "dense adjacency for {n} vertices exceeds {max_n}"
            )));
        }
        let n = n as usize;
        let mut a = vec![0.0; n * n];
        for x in 0..n {
            for y in self.neighbor_codes(x as u64) {
                a[x * n + y as usize] = 1.0;
            }
        }
        Ok(a)
    }

    /// Edge list of the loop-deleted view as CSV `u,v` with `u < v`.
    pub fn edges_csv(&self) -> String {
        let mut out = String::from("u,v\n");
        for x in 0..self.n() {
            for y in self.neighbor_codes(x) {
                if x < y {
                    let _ = writeln!(out, "{x},{y}");
                }
            }
        }
        out
    }
}

/// `|{x : 2x ∈ S}|`.
pub fn loop_count(graph: &CayleySumGraph) -> u64 {
    let f = graph.field();
    if graph.n() <= BITMAP_LIMIT {
        (0..graph.n())
            .filter(|&x| {
                let p = graph.vertex(x);
                graph.contains_code(p.add(p, f).encode(graph.q))
            })
            .count() as u64
    } else if f.p() == 2 {
        // 2x = 0 for every x
        if graph.set.contains(GroupPoint::ZERO) {
            graph.n()
        } else {
            0
        }
    } else {
        // doubling is a bijection in odd characteristic
        graph.set.len() as u64
    }
}

/// The loop-deleted view of a Cayley sum graph.
#[derive(Debug, Clone, Copy)]
pub struct SimpleGraphView<'g> {
    graph: &'g CayleySumGraph,
}

impl SimpleGraphView<'_> {
    pub fn graph(&self) -> &CayleySumGraph {
        self.graph
    }

    pub fn loop_count(&self) -> u64 {
        0
    }
}

impl Graph for SimpleGraphView<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n() as usize
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        for w in self.graph.neighbor_codes(v as u64) {
            if w != v as u64 {
                f(w as usize);
            }
        }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.graph.adjacent_codes(u as u64, v as u64)
    }
}

/// A loopless graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Graph from an edge list; loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v && u < n && v < n {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        SimpleGraph { adj }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Copy any graph into adjacency-list form.
    pub fn from_graph(g: &dyn Graph) -> Self {
        let adj = (0..g.vertex_count())
            .map(|v| {
                let mut l = g.neighbors(v);
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        SimpleGraph { adj }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    /// Dense 0/1 adjacency matrix in row-major order.
    pub fn dense_adjacency(&self) -> Vec<f64> {
        let n = self.adj.len();
        let mut a = vec![0.0; n * n];
        for (u, l) in self.adj.iter().enumerate() {
            for &v in l {
                a[u * n + v] = 1.0;
            }
        }
        a
    }
}

impl Graph for SimpleGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        for &w in &self.adj[v] {
            f(w);
        }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }
}

/// A sampled `G(n, p)` graph together with its parameters.
#[derive(Debug, Clone)]
pub struct RandomGraph {
    pub n: usize,
    pub p_edge: f64,
    pub seed: u64,
    pub graph: SimpleGraph,
}

/// Sample `G(n, p_edge)`: every unordered pair independently, in the order
/// `(0,1), (0,2), ..., (1,2), ...`, from a ChaCha8 stream seeded by `seed`.
pub fn sample_er(n: usize, p_edge: f64, seed: u64) -> Result<RandomGraph> {
    if n > 4096 {
        return Err(Error::SizeExceeded(format!("G(n,p) limited to 4096 vertices, got {n}")));
    }
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::BadParameter(format!("edge probability {p_edge} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p_edge {
                edges.push((u, v));
            }
        }
    }
    Ok(RandomGraph {
        n,
        p_edge,
        seed,
        graph: SimpleGraph::from_edges(n, edges),
    })
}

/// Number of common neighbors of `u != v`.
pub fn codegree(g: &dyn Graph, u: usize, v: usize) -> usize {
    let mut c = 0;
    g.for_each_neighbor(u, &mut |w| {
        if w != v && g.adjacent(w, v) {
            c += 1;
        }
    });
    c
}

/// Aggregates of the codegree distribution over unordered vertex pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CodegreeStats {
    pub max_codegree: u64,
    /// `Σ C(codeg, 2)` over unordered pairs: twice the number of 4-cycles.
    pub pairs_choose2: u128,
    /// `Σ C(codeg, 3)`: the number of `K_{2,3}` subgraphs.
    pub pairs_choose3: u128,
}

impl CodegreeStats {
    pub fn c4(&self) -> u128 {
        self.pairs_choose2 / 2
    }

    pub fn k23(&self) -> u128 {
        self.pairs_choose3
    }
}

/// One pass over all paths of length two, accumulating per-pair codegrees
/// with an `O(n)` scratch array.
pub fn codegree_stats(g: &dyn Graph) -> Result<CodegreeStats> {
    let n = g.vertex_count();
    let max_deg = (0..n.min(64)).map(|v| g.degree(v)).max().unwrap_or(0) as u64;
    let work = n as u64 * max_deg * max_deg;
    if work > MAX_SCAN_WORK {
        return Err(Error::SizeExceeded(format!(
            "codegree scan needs about {work} steps, limit {MAX_SCAN_WORK}"
        )));
    }
    let mut count = vec![0u32; n];
    let mut touched = Vec::new();
    let mut stats = CodegreeStats::default();
    let mut nbrs = Vec::new();
    for u in 0..n {
        nbrs.clear();
        g.for_each_neighbor(u, &mut |w| nbrs.push(w));
        for &w in &nbrs {
            g.for_each_neighbor(w, &mut |v| {
                if v > u {
                    if count[v] == 0 {
                        touched.push(v);
                    }
                    count[v] += 1;
                }
            });
        }
        for &v in &touched {
            let c = u128::from(count[v]);
            stats.max_codegree = stats.max_codegree.max(c as u64);
            stats.pairs_choose2 += c * (c.saturating_sub(1)) / 2;
            stats.pairs_choose3 += c * c.saturating_sub(1) * c.saturating_sub(2) / 6;
            count[v] = 0;
        }
        touched.clear();
    }
    Ok(stats)
}

/// Number of `K_{2,3}` subgraphs.
pub fn count_k23(g: &dyn Graph) -> Result<u128> {
    Ok(codegree_stats(g)?.k23())
}

/// Number of 4-cycles.
pub fn count_c4(g: &dyn Graph) -> Result<u128> {
    Ok(codegree_stats(g)?.c4())
}

/// Small pattern graphs for [`brute_force_count`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    C4,
    K23,
}

impl Pattern {
    fn graph(self) -> (usize, Vec<(usize, usize)>) {
        match self {
            Pattern::C4 => (4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]),
            Pattern::K23 => (5, vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in permutations(k - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// Count copies of `pattern` by enumerating injective vertex maps and
/// dividing by the automorphism count of the pattern.
pub fn brute_force_count(g: &dyn Graph, pattern: Pattern) -> Result<u128> {
    let n = g.vertex_count();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::SizeExceeded(format!(
            "brute force limited to {MAX_BRUTE_FORCE_VERTICES} vertices, got {n}"
        )));
    }
    let (k, pedges) = pattern.graph();
    let has = |a: usize, b: usize| pedges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
    let automorphisms = permutations(k)
        .into_iter()
        .filter(|perm| pedges.iter().all(|&(a, b)| has(perm[a], perm[b])))
        .count() as u128;

    let mut adj = vec![false; n * n];
    for u in 0..n {
        for v in 0..n {
            adj[u * n + v] = g.adjacent(u, v);
        }
    }
    // pattern edges to earlier pattern vertices, checked as we extend
    let back: Vec<Vec<usize>> = (0..k)
        .map(|i| (0..i).filter(|&j| has(i, j)).collect())
        .collect();
    let mut assign = vec![usize::MAX; k];
    let mut used = vec![false; n];

    fn extend(
        depth: usize,
        n: usize,
        adj: &[bool],
        back: &[Vec<usize>],
        assign: &mut [usize],
        used: &mut [bool],
    ) -> u128 {
        if depth == assign.len() {
            return 1;
        }
        let mut total = 0;
        for v in 0..n {
            if used[v] || !back[depth].iter().all(|&j| adj[assign[j] * n + v]) {
                continue;
            }
            used[v] = true;
            assign[depth] = v;
            total += extend(depth + 1, n, adj, back, assign, used);
            used[v] = false;
        }
        total
    }

    let embeddings = extend(0, n, &adj, &back, &mut assign, &mut used);
    Ok(embeddings / automorphisms)
}

/// Shape of one connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "m", rename_all = "snake_case")]
pub enum ComponentClass {
    Complete(usize),
    CompleteBipartite(usize),
    Other(usize),
}

impl ComponentClass {
    pub fn size(&self) -> usize {
        match *self {
            ComponentClass::Complete(m) | ComponentClass::Other(m) => m,
            ComponentClass::CompleteBipartite(m) => 2 * m,
        }
    }

    fn label(&self) -> String {
        match self {
            ComponentClass::Complete(m) => format!("K_{m}"),
            ComponentClass::CompleteBipartite(m) => format!("K_{{{m},{m}}}"),
            ComponentClass::Other(m) => format!("other({m})"),
        }
    }
}

/// Connected components and their classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub component_count: usize,
    pub components: Vec<ComponentClass>,
}

impl StructureReport {
    /// Multiplicity of each class, e.g. `1×K_{3,3}+1×K_3`.
    pub fn summary(&self) -> String {
        let mut classes = self.components.clone();
        classes.sort_by_key(|c| match *c {
            ComponentClass::CompleteBipartite(m) => (0, m),
            ComponentClass::Complete(m) => (1, m),
            ComponentClass::Other(m) => (2, m),
        });
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < classes.len() {
            let j = classes[i..].iter().take_while(|c| **c == classes[i]).count();
            parts.push(format!("{}×{}", j, classes[i].label()));
            i += j;
        }
        parts.join("+")
    }

    pub fn count(&self, class: ComponentClass) -> usize {
        self.components.iter().filter(|&&c| c == class).count()
    }
}

/// Components by breadth-first search, classified by edge count and
/// two-coloring.
pub fn structure_report(g: &dyn Graph) -> Result<StructureReport> {
    let n = g.vertex_count();
    if n as u64 > 1 << 21 {
        return Err(Error::SizeExceeded(format!("structure report on {n} vertices")));
    }
    let mut color = vec![u8::MAX; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        queue.push_back(start);
        let (mut size, mut degree_sum, mut sides, mut bipartite) = (0usize, 0u64, [0usize; 2], true);
        while let Some(v) = queue.pop_front() {
            size += 1;
            sides[color[v] as usize] += 1;
            g.for_each_neighbor(v, &mut |w| {
                degree_sum += 1;
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    bipartite = false;
                }
            });
        }
        let edges = degree_sum / 2;
        let m = size as u64;
        let class = if edges == m * (m - 1) / 2 {
            ComponentClass::Complete(size)
        } else if bipartite && sides[0] == sides[1] && edges == (sides[0] * sides[1]) as u64 {
            ComponentClass::CompleteBipartite(sides[0])
        } else {
            ComponentClass::Other(size)
        };
        components.push(class);
    }
    Ok(StructureReport {
        component_count: components.len(),
        components,
    })
}

/// `n λ / d`: upper bound on the independence number of a `d`-regular graph
/// whose non-trivial eigenvalues are at most `λ` in absolute value.
pub fn hoffman_bound(n: u64, degree: u64, lambda_max_nontrivial: f64) -> f64 {
    if degree == 0 {
        return f64::INFINITY;
    }
    n as f64 * lambda_max_nontrivial / degree as f64
}

/// Randomized greedy maximal independent set.
pub fn greedy_independent_set(g: &dyn Graph, seed: u64) -> Vec<usize> {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut blocked = vec![false; n];
    let mut set = Vec::new();
    for v in order {
        if blocked[v] {
            continue;
        }
        set.push(v);
        blocked[v] = true;
        g.for_each_neighbor(v, &mut |w| blocked[w] = true);
    }
    set.sort_unstable();
    set
}

/// JSON summary of a graph.
#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: u64,
    pub degree: usize,
    pub loops: u64,
    pub c4: Option<u128>,
    pub k23: Option<u128>,
    pub components: Option<Vec<ComponentClass>>,
}
