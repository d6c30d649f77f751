//! Local-orthogonality and consistent-exclusivity event graphs, their
//! `L`-copy lifts, and the corresponding checks.

use serde::Serialize;

use crate::games::CorrelationBox;
use crate::graph::{self, EventGraph, SearchLimits, Semantics};
use crate::labels::{self, index_labels};
use crate::model::{pair, Effect, State};
use crate::linalg::{self as la, c, CVector};
use crate::{tolerance, Error, Result};

/// Parties with finite input and output alphabets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Scenario {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Scenario {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        if inputs.is_empty() || inputs.len() != outputs.len() {
            return Err(Error::ScenarioMismatch(format!(
                "{} input sizes for {} output sizes",
                inputs.len(),
                outputs.len()
            )));
        }
        if let Some(bad) = inputs
            .iter()
            .chain(&outputs)
            .find(|&&k| k == 0 || k > labels::MAX_SYMBOLS)
        {
            return Err(Error::ScenarioMismatch(format!(
                "alphabet size {bad} outside 1..={}",
                labels::MAX_SYMBOLS
            )));
        }
        Ok(Scenario { inputs, outputs })
    }

    /// `n` parties with binary inputs and outputs.
    pub fn binary(n: usize) -> Self {
        Scenario {
            inputs: vec![2; n],
            outputs: vec![2; n],
        }
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Number of input strings `x`.
    pub fn input_count(&self) -> usize {
        self.inputs.iter().product()
    }

    /// Number of output strings `y`.
    pub fn output_count(&self) -> usize {
        self.outputs.iter().product()
    }

    pub fn event_count(&self) -> usize {
        self.input_count() * self.output_count()
    }

    /// Per-party values of the `index`-th input string; party 0 is the most
    /// significant digit.
    pub fn input_tuple(&self, index: usize) -> Vec<usize> {
        digits(index, &self.inputs)
    }

    pub fn output_tuple(&self, index: usize) -> Vec<usize> {
        digits(index, &self.outputs)
    }

    pub fn input_index(&self, tuple: &[usize]) -> usize {
        undigits(tuple, &self.inputs)
    }

    pub fn output_index(&self, tuple: &[usize]) -> usize {
        undigits(tuple, &self.outputs)
    }

    pub fn input_string(&self, index: usize) -> String {
        labels::encode_string(&self.input_tuple(index))
    }

    pub fn output_string(&self, index: usize) -> String {
        labels::encode_string(&self.output_tuple(index))
    }

    /// Parses an input string, one symbol per party.
    pub fn parse_input(&self, s: &str) -> Result<usize> {
        parse_tuple(s, &self.inputs).map(|t| self.input_index(&t))
    }

    pub fn parse_output(&self, s: &str) -> Result<usize> {
        parse_tuple(s, &self.outputs).map(|t| self.output_index(&t))
    }

    /// Label `x|y` of an event.
    pub fn event_label(&self, x: usize, y: usize) -> String {
        format!("{}|{}", self.input_string(x), self.output_string(y))
    }

    /// Whether events `(x, y)` and `(x', y')` are locally orthogonal: some
    /// party has the same input but a different output.
    pub fn locally_orthogonal(&self, x: usize, y: usize, x2: usize, y2: usize) -> bool {
        let (xa, ya) = (self.input_tuple(x), self.output_tuple(y));
        let (xb, yb) = (self.input_tuple(x2), self.output_tuple(y2));
        (0..self.parties()).any(|i| xa[i] == xb[i] && ya[i] != yb[i])
    }
}

fn digits(mut index: usize, radix: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radix.len()];
    for (slot, &r) in out.iter_mut().zip(radix).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

fn undigits(tuple: &[usize], radix: &[usize]) -> usize {
    tuple.iter().zip(radix).fold(0, |acc, (&d, &r)| acc * r + d)
}

fn parse_tuple(s: &str, radix: &[usize]) -> Result<Vec<usize>> {
    let t = labels::decode_string(s)
        .ok_or_else(|| Error::ScenarioMismatch(format!("bad string {s:?}")))?;
    if t.len() != radix.len() || t.iter().zip(radix).any(|(&d, &r)| d >= r) {
        return Err(Error::ScenarioMismatch(format!(
            "string {s:?} does not fit alphabets {radix:?}"
        )));
    }
    Ok(t)
}

/// Graph over all events `(x, y)` with an edge between locally orthogonal
/// events. Vertex `x * |Y| + y`.
pub fn lo_graph(scenario: &Scenario) -> EventGraph {
    let ny = scenario.output_count();
    let labels = (0..scenario.event_count())
        .map(|e| scenario.event_label(e / ny, e % ny))
        .collect();
    EventGraph::from_fn(labels, Semantics::Orthogonality, |a, b| {
        scenario.locally_orthogonal(a / ny, a % ny, b / ny, b % ny)
    })
}

/// Exclusivity graph of projectors: edge iff `P_i P_j = 0`.
pub fn quantum_exclusivity_graph(effects: &[Effect]) -> Result<EventGraph> {
    let tol = tolerance();
    for (index, e) in effects.iter().enumerate() {
        let residual = e.projector_residual();
        if residual > tol {
            return Err(Error::NotProjector { index, residual });
        }
    }
    let mats: Vec<_> = effects.iter().map(Effect::matrix).collect();
    Ok(EventGraph::from_fn(
        index_labels(effects.len()),
        Semantics::Orthogonality,
        |i, j| crate::linalg::op_norm(&(&mats[i] * &mats[j])) <= tol,
    ))
}

/// Separator between coordinate labels of a lifted vertex.
pub const LIFT_SEPARATOR: &str = "&";

/// Graph on `L`-tuples of vertices with an edge iff some coordinate pair is
/// adjacent in `g`. Tuples are ordered lexicographically.
pub fn lift_graph(g: &EventGraph, level: usize, limits: &SearchLimits) -> Result<EventGraph> {
    if level == 0 {
        return Err(Error::InvalidLevel);
    }
    if g.semantics() != Semantics::Orthogonality {
        return Err(Error::Shape("only orthogonality graphs can be lifted".into()));
    }
    let n = g.len();
    let size = (n as u128).pow(level as u32);
    if size > limits.max_vertices as u128 {
        return Err(Error::SizeLimit {
            vertices: usize::try_from(size).unwrap_or(usize::MAX),
            limit: limits.max_vertices,
        });
    }
    if level == 1 {
        return Ok(g.clone());
    }
    let size = size as usize;
    let radix = vec![n; level];
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| digits(i, &radix)).collect();
    let labels = tuples
        .iter()
        .map(|t| {
            t.iter()
                .map(|&v| g.label(v))
                .collect::<Vec<_>>()
                .join(LIFT_SEPARATOR)
        })
        .collect();
    Ok(EventGraph::from_fn(labels, Semantics::Orthogonality, |a, b| {
        tuples[a]
            .iter()
            .zip(&tuples[b])
            .any(|(&u, &v)| g.is_adjacent(u, v))
    }))
}

/// Result of an LO or CE check at some hierarchy level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExclusivityCheck {
    pub level: usize,
    /// Largest total weight of a set of pairwise exclusive events.
    pub max_sum: f64,
    /// Labels of the maximising set.
    pub witness: Vec<String>,
    pub pass: bool,
    /// Vertices of the lifted graph after dropping zero-weight events.
    pub searched_vertices: usize,
}

/// Maximum product weight over cliques of the `level`-copy lift of `g`.
/// Zero-weight vertices are dropped before lifting.
pub fn check_weighted(
    g: &EventGraph,
    weights: &[f64],
    level: usize,
    limits: &SearchLimits,
) -> Result<ExclusivityCheck> {
    if level == 0 {
        return Err(Error::InvalidLevel);
    }
    if weights.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            found: weights.len(),
        });
    }
    let keep: Vec<usize> = (0..g.len()).filter(|&v| weights[v] > 0.0).collect();
    let sub = g.induced(&keep);
    let kept: Vec<f64> = keep.iter().map(|&v| weights[v]).collect();
    let searched = u32::try_from(level)
        .ok()
        .and_then(|l| keep.len().checked_pow(l))
        .unwrap_or(usize::MAX);
    limits.check(searched)?;
    let (max_sum, witness) = if level == 2 && keep.len() <= TwoCopySearch::MAX_BASE {
        let (value, pairs) = TwoCopySearch::new(&sub, &kept).run();
        let labels = pairs
            .iter()
            .map(|&(a, b)| format!("{}{LIFT_SEPARATOR}{}", sub.label(a), sub.label(b)))
            .collect();
        (value, labels)
    } else {
        let lifted = lift_graph(&sub, level, limits)?;
        let radix = vec![keep.len(); level];
        let lifted_weights: Vec<f64> = (0..lifted.len())
            .map(|i| digits(i, &radix).iter().map(|&v| kept[v]).product())
            .collect();
        let best = graph::max_weight_clique(&lifted, &lifted_weights, limits)?;
        let labels = best
            .vertices
            .iter()
            .map(|&v| lifted.label(v).to_string())
            .collect();
        (best.value, labels)
    };
    Ok(ExclusivityCheck {
        level,
        max_sum,
        witness,
        pass: max_sum <= 1.0 + tolerance(),
        searched_vertices: searched,
    })
}

/// Exact maximum of `Σ w(a) w(b)` over cliques of the two-copy lift of a
/// small graph.
///
/// A lifted clique is a family of fibers `F_a = {b : (a, b) ∈ C}`. Each
/// fiber is a clique of the base graph, and fibers over distinct
/// non-adjacent `a, a'` are disjoint and completely joined. Fibers are
/// chosen one base vertex at a time, heaviest first, and a branch is cut
/// when even the best fibers still allowed cannot beat the incumbent. The
/// bound groups the remaining base vertices into independent sets, whose
/// fibers together form a single clique.
struct TwoCopySearch {
    adj: Vec<u32>,
    weights: Vec<f64>,
    /// max-weight clique inside every vertex subset
    omega: Vec<f64>,
    order: Vec<usize>,
    fibers: Vec<u32>,
    best: f64,
    best_fibers: Vec<u32>,
}

impl TwoCopySearch {
    const MAX_BASE: usize = 20;

    fn new(g: &EventGraph, weights: &[f64]) -> Self {
        let k = g.len();
        assert!(k <= Self::MAX_BASE);
        let adj: Vec<u32> = (0..k)
            .map(|u| g.neighbors(u).ones().fold(0, |m, v| m | 1 << v))
            .collect();
        let mut omega = vec![0.0; 1 << k];
        for s in 1usize..1 << k {
            let v = s.trailing_zeros() as usize;
            let without = omega[s & !(1 << v)];
            let with = weights[v] + omega[s & adj[v] as usize & !(1 << v)];
            omega[s] = f64::max(without, with);
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        TwoCopySearch {
            adj,
            weights: weights.to_vec(),
            omega,
            order,
            fibers: vec![0; k],
            best: 0.0,
            best_fibers: vec![0; k],
        }
    }

    fn mask_weight(&self, mask: u32) -> f64 {
        ones(mask).map(|b| self.weights[b]).sum()
    }

    /// Upper bound on what positions `from..` can still add.
    fn bound(&self, from: usize, allowed: &[u32]) -> f64 {
        let mut left: Vec<usize> = (from..self.order.len()).filter(|&i| allowed[i] != 0).collect();
        let mut total = 0.0;
        while let Some(&first) = left.first() {
            // greedy independent set of base vertices among the rest
            let mut class = vec![first];
            for &i in &left[1..] {
                let a = self.order[i];
                if class.iter().all(|&j| self.adj[self.order[j]] & 1 << a == 0) {
                    class.push(i);
                }
            }
            left.retain(|i| !class.contains(i));
            let separate: f64 = class
                .iter()
                .map(|&i| self.weights[self.order[i]] * self.omega[allowed[i] as usize])
                .sum();
            let heaviest = class
                .iter()
                .map(|&i| self.weights[self.order[i]])
                .fold(0.0, f64::max);
            let union = class.iter().fold(0, |m, &i| m | allowed[i]);
            total += separate.min(heaviest * self.omega[union as usize]);
        }
        total
    }

    /// Cliques of the base graph inside `mask`, heaviest first, ending
    /// with the empty clique.
    fn cliques(&self, mask: u32) -> Vec<(u32, f64)> {
        fn grow(adj: &[u32], clique: u32, cand: u32, out: &mut Vec<u32>) {
            out.push(clique);
            let mut rest = cand;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grow(adj, clique | 1 << v, rest & adj[v], out);
            }
        }
        let mut all = Vec::new();
        grow(&self.adj, 0, mask, &mut all);
        let mut weighted: Vec<(u32, f64)> = all.into_iter().map(|c| (c, self.mask_weight(c))).collect();
        weighted.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        weighted
    }

    fn expand(&mut self, pos: usize, allowed: &[u32], value: f64) {
        if value > self.best + 1e-12 * self.best.max(1.0) {
            self.best = value;
            self.best_fibers.clone_from(&self.fibers);
        }
        let Some(&a) = self.order.get(pos) else {
            return;
        };
        let wa = self.weights[a];
        let full = allowed.len();
        for (fiber, fw) in self.cliques(allowed[pos]) {
            let mut next = allowed.to_vec();
            next[pos] = 0;
            if fiber != 0 {
                let joined = ones(fiber).fold(u32::MAX, |m, b| m & self.adj[b]) & !fiber;
                for (j, slot) in next.iter_mut().enumerate().take(full).skip(pos + 1) {
                    let other = self.order[j];
                    if self.adj[a] & 1 << other == 0 {
                        *slot &= joined;
                    }
                }
            }
            let gained = value + wa * fw;
            let potential = gained + self.bound(pos + 1, &next);
            if !(potential > self.best + 1e-12 * self.best.max(1.0)) {
                continue;
            }
            self.fibers[pos] = fiber;
            self.expand(pos + 1, &next, gained);
            self.fibers[pos] = 0;
        }
    }

    /// Best value and its clique as sorted `(a, b)` pairs.
    fn run(mut self) -> (f64, Vec<(usize, usize)>) {
        let k = self.order.len();
        let all = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        let allowed = vec![all; k];
        self.expand(0, &allowed, 0.0);
        let mut pairs: Vec<(usize, usize)> = self
            .best_fibers
            .iter()
            .enumerate()
            .flat_map(|(i, &f)| ones(f).map(move |b| (i, b)))
            .map(|(i, b)| (self.order[i], b))
            .collect();
        pairs.sort_unstable();
        let value = pairs.iter().map(|&(a, b)| self.weights[a] * self.weights[b]).sum();
        (value, pairs)
    }
}

fn ones(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&b| mask & 1 << b != 0)
}

/// Consistent-exclusivity check for projectors measured on `rho`, with
/// `p_L(y) = Π_i (m_{y_i}|ρ)` on the level-`L` lift.
pub fn check_ce(
    effects: &[Effect],
    rho: &State,
    level: usize,
    limits: &SearchLimits,
) -> Result<ExclusivityCheck> {
    let g = quantum_exclusivity_graph(effects)?;
    let weights = effects
        .iter()
        .map(|e| pair(e, rho).map(|p| p.value()))
        .collect::<Result<Vec<_>>>()?;
    check_weighted(&g, &weights, level, limits)
}

/// Local-orthogonality check for a box at hierarchy level `L`.
pub fn check_lo(
    bx: &CorrelationBox,
    scenario: &Scenario,
    level: usize,
    limits: &SearchLimits,
) -> Result<ExclusivityCheck> {
    if bx.scenario() != scenario {
        return Err(Error::ScenarioMismatch("box was defined for another scenario".into()));
    }
    let g = lo_graph(scenario);
    let ny = scenario.output_count();
    let weights: Vec<f64> = (0..g.len()).map(|e| bx.prob(e / ny, e % ny)).collect();
    check_weighted(&g, &weights, level, limits)
}

/// The five KCBS projectors on a qutrit. Cyclically consecutive ones are
/// orthogonal and `Σ_j ⟨0|P_j|0⟩ = √5`.
pub fn kcbs_projectors() -> Vec<Effect> {
    let cos2 = 1.0 / 5f64.sqrt();
    let (ct, st) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    (0..5)
        .map(|j| {
            let phi = 4.0 * std::f64::consts::PI * j as f64 / 5.0;
            let v = CVector::from_vec(vec![c(ct, 0.0), c(st * phi.cos(), 0.0), c(st * phi.sin(), 0.0)]);
            Effect::from_matrix(la::ket_bra(&v)).expect("rank-one projector")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::model::System;
    use proptest::prelude::*;

    fn pentagon() -> EventGraph {
        EventGraph::from_fn(index_labels(5), Semantics::Orthogonality, |i, j| j - i == 1 || (i, j) == (0, 4))
    }

    #[test]
    fn single_party_single_input() {
        let s = Scenario::new(vec![1], vec![2]).unwrap();
        let g = lo_graph(&s);
        assert_eq!(g.len(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn chsh_lo_graph() {
        let s = Scenario::binary(2);
        let g = lo_graph(&s);
        assert_eq!(g.len(), 16);
        let idx = |x: &str, y: &str| s.parse_input(x).unwrap() * 4 + s.parse_output(y).unwrap();
        assert!(g.is_adjacent(idx("00", "00"), idx("01", "10")));
        // inputs differ for both parties
        assert!(!g.is_adjacent(idx("00", "00"), idx("11", "11")));
        assert_eq!(g.label(idx("01", "10")), "01|10");
        // every event is orthogonal to 7 others
        assert!((0..16).all(|v| g.degree(v) == 7));
    }

    #[test]
    fn exclusivity_of_bases() {
        let basis: Vec<Effect> = (0..3)
            .map(|i| Effect::from_matrix(linalg::matrix_unit(3, i, i)).unwrap())
            .collect();
        let g = quantum_exclusivity_graph(&basis).unwrap();
        assert_eq!(g.edge_count(), 3);
        let twice = vec![basis[0].clone(), basis[0].clone()];
        assert_eq!(quantum_exclusivity_graph(&twice).unwrap().edge_count(), 0);
        let half = Effect::from_matrix(linalg::identity(2) * c(0.5, 0.0)).unwrap();
        assert!(matches!(quantum_exclusivity_graph(&[half]), Err(Error::NotProjector { .. })));
    }

    #[test]
    fn kcbs_is_pentagon() {
        let g = quantum_exclusivity_graph(&kcbs_projectors()).unwrap();
        assert_eq!(g, pentagon());
    }

    #[test]
    fn lift_levels() {
        let lim = SearchLimits::default();
        let g = pentagon();
        assert_eq!(lift_graph(&g, 1, &lim).unwrap(), g);
        assert!(matches!(lift_graph(&g, 0, &lim), Err(Error::InvalidLevel)));
        let l2 = lift_graph(&g, 2, &lim).unwrap();
        assert_eq!(l2.len(), 25);
        for v1 in 0..5 {
            for v2 in 0..5 {
                for w in 0..5 {
                    if v1 != v2 {
                        assert_eq!(l2.is_adjacent(v1 * 5 + w, v2 * 5 + w), g.is_adjacent(v1, v2));
                    }
                }
            }
        }
        let winning = g.complement(Semantics::Winning);
        assert!(lift_graph(&winning, 2, &lim).is_err());
        let small = SearchLimits { max_vertices: 24, ..lim };
        assert!(lift_graph(&g, 2, &small).unwrap_err().is_limit());
    }

    #[test]
    fn lifted_complete_graph_edge_count() {
        let lim = SearchLimits::default();
        for n in 2..=4 {
            let k = EventGraph::from_fn(index_labels(n), Semantics::Orthogonality, |_, _| true);
            let l2 = lift_graph(&k, 2, &lim).unwrap();
            // every pair of distinct tuples differs in an adjacent coordinate
            assert_eq!(l2.edge_count(), n * n * (n * n - 1) / 2);
        }
        // pentagon: count by brute force over pairs of tuples
        let g = pentagon();
        let l2 = lift_graph(&g, 2, &lim).unwrap();
        let mut count = 0;
        for a in 0..25 {
            for b in a + 1..25 {
                if g.is_adjacent(a / 5, b / 5) || g.is_adjacent(a % 5, b % 5) {
                    count += 1;
                }
            }
        }
        assert_eq!(l2.edge_count(), count);
        // each vertex: 25 − 1 − (non-adjacent-or-equal)² + 1 = 25 − 9 = 16
        assert_eq!(count, 25 * 16 / 2);
    }

    #[test]
    fn ce_complete_basis() {
        let lim = SearchLimits::default();
        let basis: Vec<Effect> = (0..3)
            .map(|i| Effect::from_matrix(linalg::matrix_unit(3, i, i)).unwrap())
            .collect();
        let rho = State::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0)]));
        let r = check_ce(&basis, &rho, 1, &lim).unwrap();
        assert!((r.max_sum - 1.0).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn kcbs_quantum_passes() {
        let lim = SearchLimits::default();
        let rho = State::basis(System::quantum(3), 0);
        let r = check_ce(&kcbs_projectors(), &rho, 1, &lim).unwrap();
        assert!((r.max_sum - 2.0 / 5f64.sqrt()).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn injected_half_pentagon() {
        let lim = SearchLimits::default();
        let g = pentagon();
        let r1 = check_weighted(&g, &[0.5; 5], 1, &lim).unwrap();
        assert!((r1.max_sum - 1.0).abs() < 1e-15);
        assert!(r1.pass);
        let r2 = check_weighted(&g, &[0.5; 5], 2, &lim).unwrap();
        assert!((r2.max_sum - 1.25).abs() < 1e-12);
        assert!(!r2.pass);
        assert_eq!(r2.witness.len(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn removing_vertices_never_increases(
            w in proptest::collection::vec(0.0f64..0.6, 5),
            drop in 0usize..5,
        ) {
            let lim = SearchLimits::default();
            let g = pentagon();
            let full = check_weighted(&g, &w, 2, &lim).unwrap().max_sum;
            let mut w2 = w.clone();
            w2[drop] = 0.0;
            let less = check_weighted(&g, &w2, 2, &lim).unwrap().max_sum;
            prop_assert!(less <= full + 1e-12);
            let mut w3 = w.clone();
            w3[drop] += 0.3;
            let more = check_weighted(&g, &w3, 2, &lim).unwrap().max_sum;
            prop_assert!(more + 1e-12 >= full);
        }

        #[test]
        fn two_copy_search_matches_lifted_clique_search(
            n in 1usize..7,
            edges in proptest::collection::vec(any::<bool>(), 21),
            w in proptest::collection::vec(prop_oneof![Just(0.0f64), 0.01f64..1.0], 6),
        ) {
            let lim = SearchLimits::default();
            let mut bits = edges.into_iter();
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if bits.next().unwrap() {
                        pairs.push((u, v));
                    }
                }
            }
            let g = EventGraph::from_edges(index_labels(n), Semantics::Orthogonality, pairs).unwrap();
            let w = &w[..n];
            let fast = check_weighted(&g, w, 2, &lim).unwrap();
            let lifted = lift_graph(&g, 2, &lim).unwrap();
            let lw: Vec<f64> = (0..n * n).map(|i| w[i / n] * w[i % n]).collect();
            let slow = graph::max_weight_clique(&lifted, &lw, &lim).unwrap();
            prop_assert!((fast.max_sum - slow.value).abs() <= 1e-12);
            let idx: Vec<usize> = fast
                .witness
                .iter()
                .map(|l| lifted.labels().iter().position(|m| m == l).unwrap())
                .collect();
            prop_assert!(lifted.is_clique(&idx));
            let total: f64 = idx.iter().map(|&i| lw[i]).sum();
            prop_assert!((total - fast.max_sum).abs() <= 1e-12);
        }
    }
}
