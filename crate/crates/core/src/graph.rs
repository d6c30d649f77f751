//! Event graphs and exact clique, colouring and perfectness routines.

use std::fmt;
use std::ops::{Add, Sub};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// What an edge of an [`EventGraph`] means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Edge = the two events are exclusive / orthogonal.
    Orthogonality,
    /// Edge = the two events are NOT locally orthogonal.
    Winning,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Orthogonality => f.write_str("orthogonality"),
            Semantics::Winning => f.write_str("winning"),
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthogonality" => Ok(Semantics::Orthogonality),
            "winning" => Ok(Semantics::Winning),
            other => Err(Error::Parse(format!("unknown semantics {other:?}"))),
        }
    }
}

/// Vertex-count caps for the exact searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Cap for clique search, enumeration and colouring.
    pub max_vertices: usize,
    /// Cap for the exhaustive perfectness test.
    pub max_perfect_vertices: usize,
}

/// Environment variable overriding [`SearchLimits::max_vertices`].
pub const MAX_VERTICES_ENV: &str = "SHARPCUT_MAX_VERTICES";

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_vertices: 4096,
            max_perfect_vertices: 18,
        }
    }
}

impl SearchLimits {
    /// Defaults, with `max_vertices` taken from `SHARPCUT_MAX_VERTICES` when
    /// it is set to a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(n) = std::env::var(MAX_VERTICES_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            limits.max_vertices = n;
        }
        limits
    }

    /// Fails with a size-limit error when `n` exceeds `max_vertices`.
    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            Err(Error::SizeLimit {
                vertices: n,
                limit: self.max_vertices,
            })
        } else {
            Ok(())
        }
    }
}

/// Undirected simple graph over labelled events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventGraph {
    labels: Vec<String>,
    adj: Vec<FixedBitSet>,
    semantics: Semantics,
}

impl EventGraph {
    /// Builds a graph with an edge wherever `adjacent(i, j)` holds for
    /// `i < j`.
    pub fn from_fn(
        labels: Vec<String>,
        semantics: Semantics,
        mut adjacent: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let n = labels.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        EventGraph {
            labels,
            adj,
            semantics,
        }
    }

    pub fn from_edges(
        labels: Vec<String>,
        semantics: Semantics,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Shape(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::Shape(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(EventGraph {
            labels,
            adj,
            semantics,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn complement(&self, semantics: Semantics) -> EventGraph {
        EventGraph::from_fn(self.labels.clone(), semantics, |i, j| !self.is_adjacent(i, j))
    }

    /// Subgraph induced by `vertices` (kept in the given order).
    pub fn induced(&self, vertices: &[usize]) -> EventGraph {
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        EventGraph::from_fn(labels, self.semantics, |i, j| {
            self.is_adjacent(vertices[i], vertices[j])
        })
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.is_adjacent(u, v)))
    }

    /// Plain-text edge list: a header `<vertex count> <semantics>`, one
    /// `# <index> <label>` comment per vertex, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.semantics);
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("# {i} {l}\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::Parse(format!("line 1: bad header {header:?}")))?;
        let semantics: Semantics = parts
            .next()
            .ok_or_else(|| Error::Parse("line 1: missing semantics".into()))?
            .parse()?;
        let mut labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            if let Some(rest) = line.strip_prefix('#') {
                let mut it = rest.trim().splitn(2, ' ');
                if let (Some(idx), Some(label)) = (it.next().and_then(|s| s.parse::<usize>().ok()), it.next()) {
                    if idx < n {
                        labels[idx] = label.to_string();
                    }
                }
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|p| p.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad edge {line:?}")))?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("line {lineno}: expected two vertices")));
            }
            edges.push((nums[0], nums[1]));
        }
        EventGraph::from_edges(labels, semantics, edges)
    }
}

/// Vertex weights usable by the exact clique search.
pub trait Weight:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Default + fmt::Debug
{
    /// `self ≥ target`, exactly for integers and up to rounding for floats.
    fn reaches(self, target: Self) -> bool;

    /// `self > other`, exactly for integers and beyond rounding for floats.
    fn exceeds(self, other: Self) -> bool;
}

impl Weight for f64 {
    fn reaches(self, target: Self) -> bool {
        self >= target - 1e-12 * target.abs().max(1.0)
    }

    fn exceeds(self, other: Self) -> bool {
        self > other + 1e-12 * other.abs().max(1.0)
    }
}

impl Weight for i64 {
    fn reaches(self, target: Self) -> bool {
        self >= target
    }

    fn exceeds(self, other: Self) -> bool {
        self > other
    }
}

impl Weight for i128 {
    fn reaches(self, target: Self) -> bool {
        self >= target
    }

    fn exceeds(self, other: Self) -> bool {
        self > other
    }
}

/// A clique together with its total weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedClique<W> {
    pub value: W,
    /// Vertices in increasing order.
    pub vertices: Vec<usize>,
}

struct CliqueSearch<'a, W> {
    graph: &'a EventGraph,
    weights: &'a [W],
    /// vertex order used for colouring: heavier vertices first
    order: Vec<usize>,
    best: W,
    best_set: Vec<usize>,
    stop_at: Option<W>,
    done: bool,
}

impl<'a, W: Weight> CliqueSearch<'a, W> {
    fn new(graph: &'a EventGraph, weights: &'a [W]) -> Self {
        let mut order: Vec<usize> = (0..graph.len()).collect();
        order.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(graph.degree(b).cmp(&graph.degree(a)))
                .then(a.cmp(&b))
        });
        CliqueSearch {
            graph,
            weights,
            order,
            best: W::default(),
            best_set: Vec::new(),
            stop_at: None,
            done: false,
        }
    }

    fn record(&mut self, current: &[usize], weight: W) {
        if weight > self.best {
            self.best = weight;
            self.best_set = current.to_vec();
            if let Some(target) = self.stop_at {
                if weight.reaches(target) {
                    self.done = true;
                }
            }
        }
    }

    /// Greedy colouring of `cand` in `order`; returns vertices with the
    /// cumulative colour-class bound, lowest bound first.
    fn colour_bounds(&self, cand: &FixedBitSet) -> Vec<(usize, W)> {
        let mut uncoloured = cand.clone();
        let mut out = Vec::with_capacity(cand.count_ones(..));
        let mut bound = W::default();
        while !uncoloured.is_clear() {
            let mut available = uncoloured.clone();
            let mut class_max = W::default();
            let mut class = Vec::new();
            for &v in &self.order {
                if !available.contains(v) {
                    continue;
                }
                class.push(v);
                if self.weights[v] > class_max {
                    class_max = self.weights[v];
                }
                available.set(v, false);
                available.difference_with(&self.graph.adj[v]);
                uncoloured.set(v, false);
            }
            bound = bound + class_max;
            out.extend(class.into_iter().map(|v| (v, bound)));
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, weight: W, mut cand: FixedBitSet) {
        self.record(current, weight);
        if self.done {
            return;
        }
        let coloured = self.colour_bounds(&cand);
        for &(v, bound) in coloured.iter().rev() {
            // float ties within rounding are not worth exploring
            let hopeless = match self.stop_at {
                Some(target) => !(weight + bound).reaches(target),
                None => !(weight + bound).exceeds(self.best),
            };
            if hopeless {
                return;
            }
            let mut next = cand.clone();
            next.intersect_with(&self.graph.adj[v]);
            current.push(v);
            self.expand(current, weight + self.weights[v], next);
            current.pop();
            if self.done {
                return;
            }
            cand.set(v, false);
        }
    }

    fn run(mut self, cand: FixedBitSet) -> (W, Vec<usize>) {
        let mut current = Vec::new();
        self.expand(&mut current, W::default(), cand);
        let mut set = self.best_set;
        set.sort_unstable();
        (self.best, set)
    }
}

fn all_vertices(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

fn check_weights<W: Weight>(g: &EventGraph, weights: &[W]) -> Result<()> {
    if weights.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            found: weights.len(),
        });
    }
    if let Some(i) = weights.iter().position(|w| !(*w >= W::default())) {
        return Err(Error::Shape(format!("weight of vertex {i} is negative")));
    }
    Ok(())
}

/// Whether some clique inside `cand` has total weight reaching `target`.
fn clique_reaches<W: Weight>(g: &EventGraph, weights: &[W], cand: FixedBitSet, target: W) -> bool {
    if W::default().reaches(target) {
        return true;
    }
    let mut search = CliqueSearch::new(g, weights);
    search.stop_at = Some(target);
    let (best, _) = search.run(cand);
    best.reaches(target)
}

/// Exact maximum-weight clique by branch and bound with greedy-colouring
/// bounds. The empty clique (value 0) is allowed. Among optimal cliques the
/// one with the lexicographically smallest sorted vertex list is returned.
pub fn max_weight_clique<W: Weight>(
    g: &EventGraph,
    weights: &[W],
    limits: &SearchLimits,
) -> Result<WeightedClique<W>> {
    limits.check(g.len())?;
    check_weights(g, weights)?;
    let (best, _) = CliqueSearch::new(g, weights).run(all_vertices(g.len()));

    // lexicographically smallest optimal clique, vertex by vertex
    let mut chosen = Vec::new();
    let mut weight = W::default();
    let mut allowed = all_vertices(g.len());
    while !weight.reaches(best) {
        let mut extended = false;
        for v in allowed.ones() {
            let mut rest = allowed.clone();
            rest.intersect_with(&g.adj[v]);
            rest.set_range(..v + 1, false);
            let target = best - weight - weights[v];
            if clique_reaches(g, weights, rest.clone(), target) {
                chosen.push(v);
                weight = weight + weights[v];
                allowed = rest;
                extended = true;
                break;
            }
        }
        assert!(extended, "optimal clique must be reconstructible");
    }
    Ok(WeightedClique {
        value: weight,
        vertices: chosen,
    })
}

/// Size of the largest clique.
pub fn clique_number(g: &EventGraph, limits: &SearchLimits) -> Result<usize> {
    limits.check(g.len())?;
    let ones = vec![1i64; g.len()];
    let (best, _) = CliqueSearch::new(g, &ones).run(all_vertices(g.len()));
    Ok(best as usize)
}

/// All inclusion-maximal cliques, each sorted, in lexicographic order.
pub fn maximal_cliques(g: &EventGraph, limits: &SearchLimits) -> Result<Vec<Vec<usize>>> {
    limits.check(g.len())?;
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, all_vertices(g.len()), FixedBitSet::with_capacity(g.len()), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    g: &EventGraph,
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_clear() {
        if x.is_clear() {
            out.push(r.clone());
        }
        return;
    }
    // Tomita pivot: maximise |P ∩ N(u)| over u ∈ P ∪ X
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection(&g.adj[u]).count())
        .expect("P is nonempty");
    let mut todo = p.clone();
    todo.difference_with(&g.adj[pivot]);
    for v in todo.ones() {
        let mut np = p.clone();
        np.intersect_with(&g.adj[v]);
        let mut nx = x.clone();
        nx.intersect_with(&g.adj[v]);
        r.push(v);
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
}

/// Exact chromatic number by DSATUR branch and bound.
pub fn chromatic_number(g: &EventGraph, limits: &SearchLimits) -> Result<usize> {
    limits.check(g.len())?;
    let n = g.len();
    if n == 0 {
        return Ok(0);
    }
    let lower = clique_number(g, limits)?;
    let mut state = Dsatur {
        g,
        colours: vec![usize::MAX; n],
        best: n + 1,
        lower,
    };
    state.search(0, 0);
    Ok(state.best)
}

struct Dsatur<'a> {
    g: &'a EventGraph,
    colours: Vec<usize>,
    best: usize,
    lower: usize,
}

impl Dsatur<'_> {
    fn neighbour_colours(&self, v: usize) -> FixedBitSet {
        let mut used = FixedBitSet::with_capacity(self.g.len() + 1);
        for u in self.g.adj[v].ones() {
            let c = self.colours[u];
            if c != usize::MAX {
                used.insert(c);
            }
        }
        used
    }

    fn search(&mut self, coloured: usize, used: usize) {
        if self.best <= self.lower {
            return;
        }
        if used >= self.best {
            return;
        }
        if coloured == self.g.len() {
            self.best = used;
            return;
        }
        let (v, forbidden) = (0..self.g.len())
            .filter(|&v| self.colours[v] == usize::MAX)
            .map(|v| (v, self.neighbour_colours(v)))
            .max_by(|(a, sa), (b, sb)| {
                sa.count_ones(..)
                    .cmp(&sb.count_ones(..))
                    .then(self.g.degree(*a).cmp(&self.g.degree(*b)))
                    .then(b.cmp(a))
            })
            .expect("an uncoloured vertex exists");
        for c in 0..used {
            if !forbidden.contains(c) {
                self.colours[v] = c;
                self.search(coloured + 1, used);
                self.colours[v] = usize::MAX;
            }
        }
        if used + 1 < self.best {
            self.colours[v] = used;
            self.search(coloured + 1, used + 1);
            self.colours[v] = usize::MAX;
        }
    }
}

// Small-graph routines on u32 vertex masks, used by the perfectness test.

fn masks(g: &EventGraph) -> Vec<u32> {
    (0..g.len())
        .map(|v| g.adj[v].ones().fold(0u32, |m, u| m | (1 << u)))
        .collect()
}

fn mask_clique_number(adj: &[u32], cand: u32) -> u32 {
    fn go(adj: &[u32], cand: u32, size: u32, best: &mut u32) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        go(adj, cand & adj[v], size + 1, best);
        go(adj, cand & !(1 << v), size, best);
    }
    let mut best = 0;
    go(adj, cand, 0, &mut best);
    best
}

fn mask_colourable(adj: &[u32], set: u32, k: u32) -> bool {
    fn go(adj: &[u32], order: &[usize], idx: usize, colours: &mut [u32], k: u32, used: u32) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        // colour classes as vertex masks; try existing classes then one new
        for c in 0..used.min(k) {
            if colours[c as usize] & adj[v] == 0 {
                colours[c as usize] |= 1 << v;
                if go(adj, order, idx + 1, colours, k, used) {
                    return true;
                }
                colours[c as usize] &= !(1 << v);
            }
        }
        if used < k {
            colours[used as usize] |= 1 << v;
            if go(adj, order, idx + 1, colours, k, used + 1) {
                return true;
            }
            colours[used as usize] &= !(1 << v);
        }
        false
    }
    let mut order: Vec<usize> = (0..32).filter(|&v| set & (1 << v) != 0).collect();
    order.sort_by_key(|&v| std::cmp::Reverse((adj[v] & set).count_ones()));
    let mut colours = vec![0u32; k as usize];
    go(adj, &order, 0, &mut colours, k, 0)
}

/// Smallest vertex mask (in numeric order) whose induced subgraph has
/// chromatic number above its clique number, if any.
pub fn imperfection_witness(g: &EventGraph, limits: &SearchLimits) -> Result<Option<Vec<usize>>> {
    let n = g.len();
    if n > limits.max_perfect_vertices || n > 31 {
        return Err(Error::SizeLimit {
            vertices: n,
            limit: limits.max_perfect_vertices.min(31),
        });
    }
    let adj = masks(g);
    for set in 1u32..(1u32 << n) {
        let omega = mask_clique_number(&adj, set);
        if !mask_colourable(&adj, set, omega) {
            return Ok(Some((0..n).filter(|&v| set & (1 << v) != 0).collect()));
        }
    }
    Ok(None)
}

/// Whether every induced subgraph has chromatic number equal to its clique
/// number, checked exhaustively.
pub fn is_perfect(g: &EventGraph, limits: &SearchLimits) -> Result<bool> {
    Ok(imperfection_witness(g, limits)?.is_none())
}

/// Whether every connected component is complete.
pub fn is_disjoint_union_of_cliques(g: &EventGraph) -> bool {
    (0..g.len()).all(|v| {
        let mut closed = g.adj[v].clone();
        closed.insert(v);
        g.adj[v].ones().all(|u| {
            let mut other = g.adj[u].clone();
            other.insert(u);
            other == closed
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn cycle(n: usize) -> EventGraph {
        EventGraph::from_fn(labels(n), Semantics::Orthogonality, |i, j| {
            (j - i) == 1 || (i == 0 && j == n - 1)
        })
    }

    fn complete(n: usize) -> EventGraph {
        EventGraph::from_fn(labels(n), Semantics::Orthogonality, |_, _| true)
    }

    fn from_mask_bits(n: usize, bits: &[bool]) -> EventGraph {
        let mut k = 0;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if bits[k] {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        EventGraph::from_edges(labels(n), Semantics::Orthogonality, edges).unwrap()
    }

    fn brute_max_weight(g: &EventGraph, w: &[f64]) -> f64 {
        let n = g.len();
        let mut best = 0.0f64;
        for set in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&v| set & (1 << v) != 0).collect();
            if g.is_clique(&vs) {
                best = best.max(vs.iter().map(|&v| w[v]).sum());
            }
        }
        best
    }

    fn brute_maximal(g: &EventGraph) -> Vec<Vec<usize>> {
        let n = g.len();
        let mut out = Vec::new();
        for set in 1u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&v| set & (1 << v) != 0).collect();
            if !g.is_clique(&vs) {
                continue;
            }
            let extendable = (0..n)
                .filter(|v| set & (1 << v) == 0)
                .any(|v| vs.iter().all(|&u| g.is_adjacent(u, v)));
            if !extendable {
                out.push(vs);
            }
        }
        out.sort();
        out
    }

    /// Odd holes / antiholes by brute force over vertex subsets.
    fn has_odd_hole_or_antihole(g: &EventGraph) -> bool {
        let n = g.len();
        let comp = g.complement(Semantics::Orthogonality);
        let induces_cycle = |h: &EventGraph, vs: &[usize]| {
            if vs.iter().any(|&v| vs.iter().filter(|&&u| h.is_adjacent(u, v)).count() != 2) {
                return false;
            }
            // 2-regular: connected iff walking from vs[0] visits every vertex
            let mut seen = vec![vs[0]];
            let mut prev = usize::MAX;
            let mut cur = vs[0];
            loop {
                let next = *vs
                    .iter()
                    .find(|&&u| h.is_adjacent(cur, u) && u != prev)
                    .unwrap();
                if next == vs[0] {
                    break;
                }
                seen.push(next);
                prev = cur;
                cur = next;
            }
            seen.len() == vs.len()
        };
        for set in 0u32..(1 << n) {
            let k = set.count_ones();
            if k < 5 || k % 2 == 0 {
                continue;
            }
            let vs: Vec<usize> = (0..n).filter(|&v| set & (1 << v) != 0).collect();
            if induces_cycle(g, &vs) || induces_cycle(&comp, &vs) {
                return true;
            }
        }
        false
    }

    #[test]
    fn triangle_and_pentagon_cliques() {
        let lim = SearchLimits::default();
        assert_eq!(maximal_cliques(&complete(3), &lim).unwrap(), vec![vec![0, 1, 2]]);
        let c5 = maximal_cliques(&cycle(5), &lim).unwrap();
        assert_eq!(c5, vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]);
    }

    #[test]
    fn max_weight_trivial_cases() {
        let lim = SearchLimits::default();
        let g = cycle(5);
        let zero = max_weight_clique(&g, &[0.0; 5], &lim).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(zero.vertices.is_empty());
        let k = complete(4);
        let w = [0.1, 0.2, 0.3, 0.4];
        let all = max_weight_clique(&k, &w, &lim).unwrap();
        assert!((all.value - 1.0).abs() < 1e-15);
        assert_eq!(all.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let lim = SearchLimits::default();
        let g = cycle(5);
        let c = max_weight_clique(&g, &[1i64; 5], &lim).unwrap();
        assert_eq!(c.value, 2);
        assert_eq!(c.vertices, vec![0, 1]);
        // zero-weight extensions do not displace a shorter prefix
        let g = EventGraph::from_edges(labels(3), Semantics::Orthogonality, [(0, 2), (1, 2)]).unwrap();
        let c = max_weight_clique(&g, &[1i64, 1, 0], &lim).unwrap();
        assert_eq!(c.vertices, vec![0]);
    }

    #[test]
    fn limits_enforced() {
        let lim = SearchLimits {
            max_vertices: 4,
            max_perfect_vertices: 3,
        };
        assert!(matches!(
            max_weight_clique(&cycle(5), &[1.0; 5], &lim),
            Err(Error::SizeLimit { vertices: 5, limit: 4 })
        ));
        assert!(maximal_cliques(&cycle(5), &lim).unwrap_err().is_limit());
        assert!(is_perfect(&complete(4), &lim).unwrap_err().is_limit());
    }

    #[test]
    fn pentagon_invariants() {
        let lim = SearchLimits::default();
        let g = cycle(5);
        assert_eq!(clique_number(&g, &lim).unwrap(), 2);
        assert_eq!(chromatic_number(&g, &lim).unwrap(), 3);
        assert!(!is_perfect(&g, &lim).unwrap());
        assert_eq!(imperfection_witness(&g, &lim).unwrap(), Some(vec![0, 1, 2, 3, 4]));
    }

    #[test]
    fn disjoint_cliques_are_perfect() {
        let lim = SearchLimits::default();
        let g = EventGraph::from_edges(
            labels(6),
            Semantics::Winning,
            [(0, 1), (0, 2), (1, 2), (3, 4)],
        )
        .unwrap();
        assert!(is_disjoint_union_of_cliques(&g));
        assert!(is_perfect(&g, &lim).unwrap());
        let edgeless = EventGraph::from_edges(labels(4), Semantics::Winning, []).unwrap();
        assert!(is_disjoint_union_of_cliques(&edgeless));
        assert!(!is_disjoint_union_of_cliques(&cycle(4)));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = cycle(5);
        let text = g.to_edge_list();
        assert!(text.starts_with("5 orthogonality\n"));
        assert_eq!(EventGraph::from_edge_list(&text).unwrap(), g);
        assert!(EventGraph::from_edge_list("3 winning\n0 0\n").is_err());
        assert!(EventGraph::from_edge_list("3 winning\n0 x\n").is_err());
    }

    #[test]
    fn self_loops_rejected() {
        assert!(EventGraph::from_edges(labels(2), Semantics::Winning, [(1, 1)]).is_err());
    }

    #[test]
    fn chromatic_of_complete_and_bipartite() {
        let lim = SearchLimits::default();
        assert_eq!(chromatic_number(&complete(6), &lim).unwrap(), 6);
        assert_eq!(chromatic_number(&cycle(6), &lim).unwrap(), 2);
        assert_eq!(chromatic_number(&cycle(7), &lim).unwrap(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn max_weight_matches_subsets(
            n in 1usize..=12,
            bits in proptest::collection::vec(any::<bool>(), 66),
            w in proptest::collection::vec(0.0f64..1.0, 12),
        ) {
            let g = from_mask_bits(n, &bits);
            let got = max_weight_clique(&g, &w[..n], &SearchLimits::default()).unwrap();
            prop_assert!(g.is_clique(&got.vertices));
            let oracle = brute_max_weight(&g, &w[..n]);
            prop_assert!((got.value - oracle).abs() < 1e-12);
        }

        #[test]
        fn maximal_cliques_match_subsets(
            n in 1usize..=10,
            bits in proptest::collection::vec(any::<bool>(), 45),
        ) {
            let g = from_mask_bits(n, &bits);
            prop_assert_eq!(maximal_cliques(&g, &SearchLimits::default()).unwrap(), brute_maximal(&g));
        }

        #[test]
        fn perfectness_matches_strong_perfect_graph_theorem(
            n in 1usize..=9,
            bits in proptest::collection::vec(any::<bool>(), 36),
        ) {
            let g = from_mask_bits(n, &bits);
            prop_assert_eq!(is_perfect(&g, &SearchLimits::default()).unwrap(), !has_odd_hole_or_antihole(&g));
        }

        #[test]
        fn chromatic_at_least_clique(
            n in 1usize..=10,
            bits in proptest::collection::vec(any::<bool>(), 45),
        ) {
            let g = from_mask_bits(n, &bits);
            let lim = SearchLimits::default();
            let chi = chromatic_number(&g, &lim).unwrap();
            prop_assert!(chi >= clique_number(&g, &lim).unwrap());
            let adj = masks(&g);
            let all = (1u32 << n) - 1;
            prop_assert!(mask_colourable(&adj, all, chi as u32));
            prop_assert!(chi == 1 || !mask_colourable(&adj, all, chi as u32 - 1));
        }
    }
}
