//! Nonlocal games, correlation boxes, winning graphs, classical values and
//! the local-orthogonality LP bound.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exclusivity::{check_lo, ExclusivityCheck, Scenario};
use crate::graph::{self, EventGraph, SearchLimits, Semantics};
use crate::linalg::{c, CVector};
use crate::lp;
use crate::model::{pair, product_measurement, Effect, Measurement, State, System};
use crate::{tolerance, Error, Result};

/// Largest number of deterministic strategies the brute-force oracle visits.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// A game: input prior `q(x)` and nonnegative payoff `ω(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Game {
    scenario: Scenario,
    prior: Vec<BigRational>,
    payoff: Vec<Vec<BigRational>>,
}

impl Game {
    /// `prior[x]` and `payoff[x][y]` are indexed by input and output string.
    pub fn new(scenario: Scenario, prior: Vec<BigRational>, payoff: Vec<Vec<BigRational>>) -> Result<Self> {
        let (nx, ny) = (scenario.input_count(), scenario.output_count());
        if prior.len() != nx || payoff.len() != nx || payoff.iter().any(|row| row.len() != ny) {
            return Err(Error::InvalidGame(format!(
                "expected {nx} inputs and {ny} outputs per input"
            )));
        }
        if let Some(x) = prior.iter().position(Signed::is_negative) {
            return Err(Error::InvalidGame(format!(
                "negative prior for input {}",
                scenario.input_string(x)
            )));
        }
        let total: BigRational = prior.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidGame(format!("prior sums to {total}, not 1")));
        }
        for (x, row) in payoff.iter().enumerate() {
            if let Some(y) = row.iter().position(Signed::is_negative) {
                return Err(Error::InvalidGame(format!(
                    "negative payoff for event {}",
                    scenario.event_label(x, y)
                )));
            }
        }
        Ok(Game {
            scenario,
            prior,
            payoff,
        })
    }

    /// Uniform prior and payoff 1 exactly on events where `wins(x, y)`.
    pub fn from_rule(scenario: Scenario, wins: impl Fn(&[usize], &[usize]) -> bool) -> Self {
        let nx = scenario.input_count();
        let ny = scenario.output_count();
        let q = BigRational::new(BigInt::one(), BigInt::from(nx));
        let payoff = (0..nx)
            .map(|x| {
                let xt = scenario.input_tuple(x);
                (0..ny)
                    .map(|y| {
                        if wins(&xt, &scenario.output_tuple(y)) {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Game {
            prior: vec![q; nx],
            scenario,
            payoff,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn prior(&self, x: usize) -> &BigRational {
        &self.prior[x]
    }

    pub fn payoff(&self, x: usize, y: usize) -> &BigRational {
        &self.payoff[x][y]
    }

    /// `q(x) ω(x, y)`.
    pub fn weight(&self, x: usize, y: usize) -> BigRational {
        &self.prior[x] * &self.payoff[x][y]
    }
}

/// The built-in games.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinGame {
    /// Win iff `y₁ ⊕ y₂ = x₁ x₂`.
    Chsh,
    /// Guess your neighbour's input: win iff `y_i = x_{i+1}` for every `i`.
    Gyni,
    /// Win iff every `y_i` equals the product of all inputs.
    GuessTheProduct,
    /// Win iff every `y_i` equals the parity of all inputs.
    GuessTheParity,
}

impl FromStr for BuiltinGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "chsh" => Ok(BuiltinGame::Chsh),
            "gyni" | "guess-your-neighbours-input" => Ok(BuiltinGame::Gyni),
            "product" | "guess-the-product" | "guesstheproduct" => Ok(BuiltinGame::GuessTheProduct),
            "parity" | "guess-the-parity" | "guesstheparity" => Ok(BuiltinGame::GuessTheParity),
            _ => Err(Error::UnknownBuiltin(s.to_string())),
        }
    }
}

/// Builds a built-in game on binary inputs and outputs with a uniform
/// prior. `parties` must be 2 for CHSH, at least 3 for GYNI and at least 2
/// for the guessing games.
pub fn builtin_game(kind: BuiltinGame, parties: usize) -> Result<Game> {
    let min = match kind {
        BuiltinGame::Chsh => 2,
        BuiltinGame::Gyni => 3,
        BuiltinGame::GuessTheProduct | BuiltinGame::GuessTheParity => 2,
    };
    if parties < min || (kind == BuiltinGame::Chsh && parties != 2) || parties > 12 {
        return Err(Error::InvalidGame(format!(
            "{kind:?} is not defined for {parties} parties"
        )));
    }
    let scenario = Scenario::binary(parties);
    let game = match kind {
        BuiltinGame::Chsh => Game::from_rule(scenario, |x, y| (y[0] ^ y[1]) == (x[0] & x[1])),
        BuiltinGame::Gyni => Game::from_rule(scenario, move |x, y| {
            (0..parties).all(|i| y[i] == x[(i + 1) % parties])
        }),
        BuiltinGame::GuessTheProduct => Game::from_rule(scenario, |x, y| {
            let prod = x.iter().product::<usize>();
            y.iter().all(|&yi| yi == prod)
        }),
        BuiltinGame::GuessTheParity => Game::from_rule(scenario, |x, y| {
            let parity = x.iter().fold(0, |a, b| a ^ b);
            y.iter().all(|&yi| yi == parity)
        }),
    };
    Ok(game)
}

/// A deterministic local strategy: for each party, the output for each of
/// its inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub outputs: Vec<Vec<usize>>,
}

impl Strategy {
    pub fn output_for(&self, scenario: &Scenario, x: usize) -> usize {
        let xt = scenario.input_tuple(x);
        let yt: Vec<usize> = xt
            .iter()
            .enumerate()
            .map(|(i, &xi)| self.outputs[i][xi])
            .collect();
        scenario.output_index(&yt)
    }

    /// Exact payoff `Σ_x q(x) ω(x, s(x))`.
    pub fn value(&self, game: &Game) -> BigRational {
        let s = game.scenario();
        (0..s.input_count())
            .map(|x| game.weight(x, self.output_for(s, x)))
            .sum()
    }
}

/// A conditional distribution `p(y|x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationBox {
    scenario: Scenario,
    p: Vec<Vec<f64>>,
}

impl CorrelationBox {
    /// Builds a box, checking normalisation and no-signalling.
    pub fn new(scenario: Scenario, p: Vec<Vec<f64>>) -> Result<Self> {
        let (nx, ny) = (scenario.input_count(), scenario.output_count());
        if p.len() != nx || p.iter().any(|row| row.len() != ny) {
            return Err(Error::InvalidBox(format!(
                "expected {nx} inputs and {ny} outputs per input"
            )));
        }
        let bx = CorrelationBox { scenario, p };
        let tol = tolerance();
        if let Some((x, y)) = bx.events().find(|&(x, y)| !(bx.p[x][y] >= -tol)) {
            return Err(Error::InvalidBox(format!(
                "negative probability at {}",
                bx.scenario.event_label(x, y)
            )));
        }
        let norm = bx.normalization_residual();
        if norm > tol {
            return Err(Error::InvalidBox(format!("normalization residual {norm:e}")));
        }
        let ns = bx.no_signalling_residual();
        if ns > tol {
            return Err(Error::InvalidBox(format!("no-signalling residual {ns:e}")));
        }
        Ok(bx)
    }

    pub fn from_fn(scenario: Scenario, f: impl Fn(&[usize], &[usize]) -> f64) -> Result<Self> {
        let p = (0..scenario.input_count())
            .map(|x| {
                let xt = scenario.input_tuple(x);
                (0..scenario.output_count())
                    .map(|y| f(&xt, &scenario.output_tuple(y)))
                    .collect()
            })
            .collect();
        Self::new(scenario, p)
    }

    pub fn deterministic(scenario: Scenario, strategy: &Strategy) -> Result<Self> {
        let p = (0..scenario.input_count())
            .map(|x| {
                let y = strategy.output_for(&scenario, x);
                (0..scenario.output_count())
                    .map(|k| if k == y { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        Self::new(scenario, p)
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let ny = scenario.output_count();
        let p = vec![vec![1.0 / ny as f64; ny]; scenario.input_count()];
        CorrelationBox { scenario, p }
    }

    /// The PR box: `p(y|x) = 1/2` when `y₁ ⊕ y₂ = x₁ x₂`.
    pub fn pr() -> Self {
        Self::from_fn(Scenario::binary(2), |x, y| {
            if (y[0] ^ y[1]) == (x[0] & x[1]) {
                0.5
            } else {
                0.0
            }
        })
        .expect("PR box is no-signalling")
    }

    /// The optimal quantum CHSH box from `(|00⟩ + |11⟩)/√2` with measurement
    /// angles `{0, π/2}` and `{π/4, −π/4}` in the X–Z plane.
    pub fn tsirelson() -> Self {
        use std::f64::consts::FRAC_PI_4;
        let phi = State::pure(&CVector::from_vec(vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]));
        let alice = [0.0, 2.0 * FRAC_PI_4];
        let bob = [FRAC_PI_4, -FRAC_PI_4];
        let p = (0..4)
            .map(|x| {
                let joint = product_measurement(&xz_measurement(alice[x / 2]), &xz_measurement(bob[x % 2]));
                joint
                    .iter()
                    .map(|(_, e)| pair(e, &phi).expect("dimensions agree").value())
                    .collect()
            })
            .collect();
        Self::new(Scenario::binary(2), p).expect("quantum boxes are no-signalling")
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.p[x][y]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    fn events(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let ny = self.scenario.output_count();
        (0..self.scenario.input_count()).flat_map(move |x| (0..ny).map(move |y| (x, y)))
    }

    pub fn normalization_residual(&self) -> f64 {
        self.p
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest change of any marginal `p(y_S | x)` under a change of the
    /// inputs outside `S`, over all nonempty proper party subsets `S`.
    pub fn no_signalling_residual(&self) -> f64 {
        let s = &self.scenario;
        let n = s.parties();
        let mut worst: f64 = 0.0;
        for subset in 1u32..(1u32 << n).saturating_sub(1) {
            let inside = |i: usize| subset & (1 << i) != 0;
            let marginal = |x: usize| {
                let mut m = std::collections::BTreeMap::<Vec<usize>, f64>::new();
                for y in 0..s.output_count() {
                    let yt = s.output_tuple(y);
                    let key: Vec<usize> = (0..n).filter(|&i| inside(i)).map(|i| yt[i]).collect();
                    *m.entry(key).or_default() += self.p[x][y];
                }
                m
            };
            for x in 0..s.input_count() {
                let mut reference = s.input_tuple(x);
                for (i, r) in reference.iter_mut().enumerate() {
                    if !inside(i) {
                        *r = 0;
                    }
                }
                let a = marginal(x);
                let b = marginal(s.input_index(&reference));
                for (k, v) in &a {
                    worst = worst.max((v - b[k]).abs());
                }
            }
        }
        worst
    }
}

/// Projective qubit measurement of `cos θ Z + sin θ X`; outcome `0` is the
/// `+1` eigenspace.
pub fn xz_measurement(theta: f64) -> Measurement {
    let plus = CVector::from_vec(vec![c((theta / 2.0).cos(), 0.0), c((theta / 2.0).sin(), 0.0)]);
    let minus = CVector::from_vec(vec![c(-(theta / 2.0).sin(), 0.0), c((theta / 2.0).cos(), 0.0)]);
    let effects = vec![
        Effect::from_matrix(crate::linalg::ket_bra(&plus)).expect("projector"),
        Effect::from_matrix(crate::linalg::ket_bra(&minus)).expect("projector"),
    ];
    Measurement::from_effects(System::qubit(), effects).expect("complete basis")
}

/// Built-in boxes for the CHSH scenario.
pub fn builtin_box(name: &str) -> Result<CorrelationBox> {
    match name.to_ascii_lowercase().as_str() {
        "pr" => Ok(CorrelationBox::pr()),
        "uniform" | "random" => Ok(CorrelationBox::uniform(Scenario::binary(2))),
        "tsirelson" => Ok(CorrelationBox::tsirelson()),
        "local" | "deterministic" => CorrelationBox::deterministic(
            Scenario::binary(2),
            &Strategy {
                outputs: vec![vec![0, 0], vec![0, 0]],
            },
        ),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Expected payoff `Σ q(x) ω(x, y) p(y|x)`.
pub fn payoff(game: &Game, bx: &CorrelationBox) -> Result<f64> {
    if game.scenario() != bx.scenario() {
        return Err(Error::ScenarioMismatch("game and box scenarios differ".into()));
    }
    let s = game.scenario();
    let mut total = 0.0;
    for x in 0..s.input_count() {
        for y in 0..s.output_count() {
            let w = game.weight(x, y);
            if !w.is_zero() {
                total += rational_to_f64(&w) * bx.prob(x, y);
            }
        }
    }
    Ok(total)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Events with nonzero weight, joined when NOT locally orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct WinningGraph {
    pub graph: EventGraph,
    /// `(x, y)` of each vertex.
    pub events: Vec<(usize, usize)>,
    /// `q(x) ω(x, y)` of each vertex.
    pub weights: Vec<BigRational>,
}

pub fn winning_graph(game: &Game) -> WinningGraph {
    let s = game.scenario();
    let mut events = Vec::new();
    let mut weights = Vec::new();
    for x in 0..s.input_count() {
        for y in 0..s.output_count() {
            let w = game.weight(x, y);
            if !w.is_zero() {
                events.push((x, y));
                weights.push(w);
            }
        }
    }
    let labels = events.iter().map(|&(x, y)| s.event_label(x, y)).collect();
    let graph = EventGraph::from_fn(labels, Semantics::Winning, |i, j| {
        let (a, b) = (events[i], events[j]);
        !s.locally_orthogonal(a.0, a.1, b.0, b.1)
    });
    WinningGraph {
        graph,
        events,
        weights,
    }
}

/// Integer weights `w · lcm(denominators)` when they fit in `i128`.
fn scaled_integer_weights(weights: &[BigRational]) -> Option<Vec<i128>> {
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<BigInt> = weights
        .iter()
        .map(|w| w.numer() * (&lcm / w.denom()))
        .collect();
    let total: BigInt = scaled.iter().sum();
    total.to_i128()?;
    scaled.iter().map(ToPrimitive::to_i128).collect()
}

/// Classical value with its witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalValue {
    pub value: BigRational,
    /// Winning-graph vertices of the maximising clique.
    pub clique: Vec<usize>,
    pub strategy: Strategy,
    /// Value found by enumerating deterministic strategies, when the
    /// strategy space is within [`BRUTE_FORCE_LIMIT`].
    pub brute_force: Option<BigRational>,
}

/// `ω_c` as the maximum-weight clique of the winning graph, cross-checked
/// against exhaustive enumeration of deterministic strategies.
pub fn classical_value(game: &Game, limits: &SearchLimits) -> Result<ClassicalValue> {
    let wg = winning_graph(game);
    let clique = match scaled_integer_weights(&wg.weights) {
        Some(ints) => graph::max_weight_clique(&wg.graph, &ints, limits)?.vertices,
        None => {
            let floats: Vec<f64> = wg.weights.iter().map(rational_to_f64).collect();
            graph::max_weight_clique(&wg.graph, &floats, limits)?.vertices
        }
    };
    let value: BigRational = clique.iter().map(|&v| wg.weights[v].clone()).sum();

    let s = game.scenario();
    let mut outputs: Vec<Vec<usize>> = s.inputs().iter().map(|&k| vec![0; k]).collect();
    for &v in &clique {
        let (x, y) = wg.events[v];
        let (xt, yt) = (s.input_tuple(x), s.output_tuple(y));
        for i in 0..s.parties() {
            outputs[i][xt[i]] = yt[i];
        }
    }
    let strategy = Strategy { outputs };
    let strategy_value = strategy.value(game);
    debug_assert!(strategy_value >= value);

    let brute_force = brute_force_classical_value(game, BRUTE_FORCE_LIMIT).map(|(v, _)| v);
    if let Some(bf) = &brute_force {
        if *bf != value {
            return Err(Error::InvalidGame(format!(
                "clique value {value} disagrees with strategy enumeration {bf}"
            )));
        }
    }
    Ok(ClassicalValue {
        value: strategy_value.max(value),
        clique,
        strategy,
        brute_force,
    })
}

/// Number of deterministic strategies `Π_i |Y_i|^{|X_i|}`.
pub fn strategy_count(s: &Scenario) -> u128 {
    s.inputs()
        .iter()
        .zip(s.outputs())
        .try_fold(1u128, |acc, (&nx, &ny)| {
            (ny as u128).checked_pow(nx as u32).and_then(|k| acc.checked_mul(k))
        })
        .unwrap_or(u128::MAX)
}

/// Exhaustive maximum over deterministic strategies, or `None` when there
/// are more than `limit` of them.
pub fn brute_force_classical_value(game: &Game, limit: u128) -> Option<(BigRational, Strategy)> {
    let s = game.scenario();
    if strategy_count(s) > limit {
        return None;
    }
    let nx = s.input_count();
    let ny = s.output_count();
    let all: Vec<BigRational> = (0..nx)
        .flat_map(|x| (0..ny).map(move |y| (x, y)))
        .map(|(x, y)| game.weight(x, y))
        .collect();
    let table = scaled_integer_weights(&all);
    let denom = all
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let input_tuples: Vec<Vec<usize>> = (0..nx).map(|x| s.input_tuple(x)).collect();

    let mut outputs: Vec<Vec<usize>> = s.inputs().iter().map(|&k| vec![0; k]).collect();
    let mut best: Option<(BigRational, Strategy)> = None;
    loop {
        let eval = |outputs: &[Vec<usize>]| -> BigRational {
            let ys = input_tuples.iter().map(|xt| {
                let yt: Vec<usize> = xt.iter().enumerate().map(|(i, &xi)| outputs[i][xi]).collect();
                s.output_index(&yt)
            });
            match &table {
                Some(t) => {
                    let sum: i128 = ys.enumerate().map(|(x, y)| t[x * ny + y]).sum();
                    BigRational::new(BigInt::from(sum), denom.clone())
                }
                None => ys.enumerate().map(|(x, y)| all[x * ny + y].clone()).sum(),
            }
        };
        let v = eval(&outputs);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((
                v,
                Strategy {
                    outputs: outputs.clone(),
                },
            ));
        }
        // odometer over (party, input) digits
        let mut advanced = false;
        'outer: for (i, row) in outputs.iter_mut().enumerate() {
            for slot in row.iter_mut() {
                *slot += 1;
                if *slot < s.outputs()[i] {
                    advanced = true;
                    break 'outer;
                }
                *slot = 0;
            }
        }
        if !advanced {
            break;
        }
    }
    best
}

/// Optimum of the LO relaxation LP with its dual certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct LoBound {
    pub value: BigRational,
    /// Optimal `p_e` per winning-graph vertex.
    pub primal: Vec<BigRational>,
    /// Maximal sets of pairwise locally orthogonal winning events.
    pub lo_sets: Vec<Vec<usize>>,
    /// Dual multiplier per LO set.
    pub dual: Vec<BigRational>,
}

impl LoBound {
    /// Checks primal and dual feasibility and equal objectives, exactly.
    pub fn certificate_holds(&self, wg: &WinningGraph) -> bool {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let primal_ok = self.primal.iter().all(|p| *p >= zero)
            && self
                .lo_sets
                .iter()
                .all(|set| set.iter().map(|&e| &self.primal[e]).sum::<BigRational>() <= one);
        let dual_ok = self.dual.iter().all(|y| *y >= zero)
            && (0..wg.weights.len()).all(|e| {
                let cover: BigRational = self
                    .lo_sets
                    .iter()
                    .zip(&self.dual)
                    .filter(|(set, _)| set.contains(&e))
                    .map(|(_, y)| y.clone())
                    .sum();
                cover >= wg.weights[e]
            });
        let primal_value: BigRational = self
            .primal
            .iter()
            .zip(&wg.weights)
            .map(|(p, w)| p * w)
            .sum();
        let dual_value: BigRational = self.dual.iter().sum();
        primal_ok && dual_ok && primal_value == self.value && dual_value == self.value
    }
}

/// Maximises `Σ_e w_e p_e` over `p ≥ 0` with `Σ_{e∈S} p_e ≤ 1` for every
/// maximal set `S` of pairwise locally orthogonal winning events (the
/// maximal independent sets of the winning graph).
pub fn lo_lp_value(game: &Game, limits: &SearchLimits) -> Result<LoBound> {
    let wg = winning_graph(game);
    lo_lp_value_of(&wg, limits)
}

pub fn lo_lp_value_of(wg: &WinningGraph, limits: &SearchLimits) -> Result<LoBound> {
    let orth = wg.graph.complement(Semantics::Orthogonality);
    let lo_sets = graph::maximal_cliques(&orth, limits)?;
    let n = wg.weights.len();
    let rows: Vec<Vec<BigRational>> = lo_sets
        .iter()
        .map(|set| {
            let mut row = vec![BigRational::zero(); n];
            for &e in set {
                row[e] = BigRational::one();
            }
            row
        })
        .collect();
    let rhs = vec![BigRational::one(); rows.len()];
    let sol = lp::maximize(&wg.weights, &rows, &rhs)?;
    Ok(LoBound {
        value: sol.value,
        primal: sol.primal,
        lo_sets,
        dual: sol.dual,
    })
}

pub use crate::graph::is_disjoint_union_of_cliques;

/// A rational with its floating-point approximation, for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalValue {
    pub exact: String,
    pub approx: f64,
}

impl From<&BigRational> for RationalValue {
    fn from(r: &BigRational) -> Self {
        RationalValue {
            exact: r.to_string(),
            approx: rational_to_f64(r),
        }
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ({})", self.approx, self.exact)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub clique_number: usize,
    pub chromatic_number: usize,
    /// `None` when the graph exceeds the perfectness-test limit.
    pub perfect: Option<bool>,
    pub disjoint_union_of_cliques: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxReport {
    pub name: String,
    pub payoff: f64,
    pub lo_check: ExclusivityCheck,
}

/// Everything known about a game and a set of boxes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GameReport {
    pub classical_value: RationalValue,
    pub classical_clique: Vec<String>,
    pub classical_strategy: Strategy,
    pub brute_force_value: Option<RationalValue>,
    pub lo_lp_value: RationalValue,
    pub lo_lp_certified: bool,
    pub graph: GraphInvariants,
    pub boxes: Vec<BoxReport>,
}

impl GameReport {
    /// True when every box passed its LO check.
    pub fn all_bounds_hold(&self) -> bool {
        self.boxes.iter().all(|b| b.lo_check.pass)
    }

    /// Aligned human-readable table, numbers rounded to 6 decimals.
    pub fn to_table(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut rows: Vec<(String, String)> = vec![
            ("classical value".into(), self.classical_value.to_string()),
            (
                "brute-force value".into(),
                self.brute_force_value
                    .as_ref()
                    .map_or("skipped".into(), ToString::to_string),
            ),
            ("classical clique".into(), self.classical_clique.join(" ")),
            ("LO LP value".into(), self.lo_lp_value.to_string()),
            ("LO LP certified".into(), yn(self.lo_lp_certified).into()),
            ("winning graph vertices".into(), self.graph.vertices.to_string()),
            ("winning graph edges".into(), self.graph.edges.to_string()),
            ("clique number".into(), self.graph.clique_number.to_string()),
            ("chromatic number".into(), self.graph.chromatic_number.to_string()),
            (
                "perfect".into(),
                self.graph.perfect.map_or("not checked (too large)".into(), |p| yn(p).into()),
            ),
            (
                "disjoint union of cliques".into(),
                yn(self.graph.disjoint_union_of_cliques).into(),
            ),
        ];
        for b in &self.boxes {
            rows.push((format!("box {} payoff", b.name), format!("{:.6}", b.payoff)));
            rows.push((
                format!("box {} LO level {}", b.name, b.lo_check.level),
                format!(
                    "{} (max sum {:.6})",
                    if b.lo_check.pass { "pass" } else { "FAIL" },
                    b.lo_check.max_sum
                ),
            ));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

/// Runs every analysis on a game and the given named boxes.
pub fn analyze(
    game: &Game,
    boxes: &[(String, CorrelationBox)],
    level: usize,
    limits: &SearchLimits,
) -> Result<GameReport> {
    let wg = winning_graph(game);
    let classical = classical_value(game, limits)?;
    let lo = lo_lp_value_of(&wg, limits)?;
    let perfect = match graph::is_perfect(&wg.graph, limits) {
        Ok(p) => Some(p),
        Err(e) if e.is_limit() => None,
        Err(e) => return Err(e),
    };
    let graph = GraphInvariants {
        vertices: wg.graph.len(),
        edges: wg.graph.edge_count(),
        clique_number: graph::clique_number(&wg.graph, limits)?,
        chromatic_number: graph::chromatic_number(&wg.graph, limits)?,
        perfect,
        disjoint_union_of_cliques: graph::is_disjoint_union_of_cliques(&wg.graph),
    };
    let boxes = boxes
        .iter()
        .map(|(name, bx)| {
            Ok(BoxReport {
                name: name.clone(),
                payoff: payoff(game, bx)?,
                lo_check: check_lo(bx, game.scenario(), level, limits)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GameReport {
        classical_value: (&classical.value).into(),
        classical_clique: classical
            .clique
            .iter()
            .map(|&v| wg.graph.label(v).to_string())
            .collect(),
        classical_strategy: classical.strategy,
        brute_force_value: classical.brute_force.as_ref().map(Into::into),
        lo_lp_certified: lo.certificate_holds(&wg),
        lo_lp_value: (&lo.value).into(),
        graph,
        boxes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn chsh() -> Game {
        builtin_game(BuiltinGame::Chsh, 2).unwrap()
    }

    #[test]
    fn chsh_structure() {
        let g = chsh();
        let winning: usize = (0..4)
            .map(|x| (0..4).filter(|&y| !g.payoff(x, y).is_zero()).count())
            .sum();
        assert_eq!(winning, 8);
        let wg = winning_graph(&g);
        assert_eq!(wg.graph.len(), 8);
        assert!(wg.weights.iter().all(|w| *w == r(1, 4)));
        assert!(!is_disjoint_union_of_cliques(&wg.graph));
    }

    #[test]
    fn builtin_name_and_range_errors() {
        assert!(matches!("nope".parse::<BuiltinGame>(), Err(Error::UnknownBuiltin(_))));
        assert_eq!("Guess-The-Parity".parse::<BuiltinGame>().unwrap(), BuiltinGame::GuessTheParity);
        assert!(builtin_game(BuiltinGame::Gyni, 2).is_err());
        assert!(builtin_game(BuiltinGame::Chsh, 3).is_err());
        assert!(builtin_game(BuiltinGame::GuessTheParity, 1).is_err());
        assert!(builtin_box("nope").is_err());
    }

    #[test]
    fn zero_payoff_game_has_empty_graph() {
        let g = Game::from_rule(Scenario::binary(2), |_, _| false);
        let wg = winning_graph(&g);
        assert!(wg.graph.is_empty());
        let cv = classical_value(&g, &SearchLimits::default()).unwrap();
        assert!(cv.value.is_zero());
        assert!(lo_lp_value(&g, &SearchLimits::default()).unwrap().value.is_zero());
    }

    #[test]
    fn trivial_single_party_game() {
        let s = Scenario::new(vec![1], vec![2]).unwrap();
        let g = Game::from_rule(s, |_, y| y[0] == 1);
        let cv = classical_value(&g, &SearchLimits::default()).unwrap();
        assert!(cv.value.is_one());
        assert_eq!(cv.strategy.outputs, vec![vec![1]]);
    }

    #[test]
    fn game_validation() {
        let s = Scenario::new(vec![1], vec![2]).unwrap();
        let bad_prior = Game::new(s.clone(), vec![r(1, 2)], vec![vec![r(1, 1), r(0, 1)]]);
        assert!(matches!(bad_prior, Err(Error::InvalidGame(_))));
        let negative = Game::new(s.clone(), vec![r(1, 1)], vec![vec![r(-1, 1), r(0, 1)]]);
        assert!(matches!(negative, Err(Error::InvalidGame(_))));
        let shape = Game::new(s, vec![r(1, 1)], vec![vec![r(1, 1)]]);
        assert!(shape.is_err());
    }

    #[test]
    fn boxes_validate() {
        assert!(CorrelationBox::pr().no_signalling_residual() < 1e-15);
        let t = CorrelationBox::tsirelson();
        assert!(t.no_signalling_residual() < 1e-12);
        // signalling box: Bob outputs Alice's input
        let sig = CorrelationBox::from_fn(Scenario::binary(2), |x, y| {
            if y[1] == x[0] && y[0] == 0 {
                1.0
            } else {
                0.0
            }
        });
        assert!(matches!(sig, Err(Error::InvalidBox(_))));
        let unnormalised = CorrelationBox::from_fn(Scenario::binary(2), |_, _| 0.3);
        assert!(matches!(unnormalised, Err(Error::InvalidBox(_))));
    }

    #[test]
    fn payoffs() {
        let g = chsh();
        assert!((payoff(&g, &CorrelationBox::pr()).unwrap() - 1.0).abs() < 1e-15);
        let local = builtin_box("local").unwrap();
        assert!((payoff(&g, &local).unwrap() - 0.75).abs() < 1e-15);
        let cos2 = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((payoff(&g, &CorrelationBox::tsirelson()).unwrap() - cos2).abs() < 1e-12);
        let uni = CorrelationBox::uniform(Scenario::binary(2));
        assert!((payoff(&g, &uni).unwrap() - 0.5).abs() < 1e-15);
        let other = CorrelationBox::uniform(Scenario::binary(3));
        assert!(payoff(&g, &other).is_err());
    }

    #[test]
    fn deterministic_payoff_matches_strategy_value() {
        let g = chsh();
        let s = Strategy {
            outputs: vec![vec![0, 1], vec![1, 1]],
        };
        let bx = CorrelationBox::deterministic(g.scenario().clone(), &s).unwrap();
        assert!((payoff(&g, &bx).unwrap() - rational_to_f64(&s.value(&g))).abs() < 1e-15);
    }

    #[test]
    fn chsh_classical_and_lp() {
        let lim = SearchLimits::default();
        let g = chsh();
        let cv = classical_value(&g, &lim).unwrap();
        assert_eq!(cv.value, r(3, 4));
        assert_eq!(cv.brute_force, Some(r(3, 4)));
        assert_eq!(cv.strategy.value(&g), r(3, 4));
        let lo = lo_lp_value(&g, &lim).unwrap();
        assert_eq!(lo.value, r(1, 1));
        let wg = winning_graph(&g);
        assert!(lo.certificate_holds(&wg));
    }

    #[test]
    fn scaled_weights_exact() {
        let w = vec![r(1, 4), r(1, 6), r(0, 1)];
        assert_eq!(scaled_integer_weights(&w), Some(vec![3, 2, 0]));
    }

    #[test]
    fn strategy_counts() {
        assert_eq!(strategy_count(&Scenario::binary(2)), 16);
        assert_eq!(strategy_count(&Scenario::new(vec![3, 2], vec![2, 3]).unwrap()), 8 * 9);
    }

    #[test]
    fn report_table_aligned() {
        let lim = SearchLimits::default();
        let rep = analyze(&chsh(), &[("pr".into(), CorrelationBox::pr())], 2, &lim).unwrap();
        assert!(!rep.all_bounds_hold());
        let table = rep.to_table();
        assert!(table.contains("classical value"));
        assert!(table.contains("0.750000 (3/4)"));
        let col = table.lines().next().unwrap().find("0.75").unwrap();
        assert!(table.lines().all(|l| l.len() > col));
    }
}
