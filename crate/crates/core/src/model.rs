//! Concrete quantum and classical models of states, effects and
//! measurements.
//!
//! Quantum data are `d × d` complex matrices; classical data are length-`d`
//! real vectors. When a classical operand is composed with a quantum one it
//! is embedded as a diagonal matrix, so the composite is quantum.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, c, CMatrix, CVector};
use crate::{tolerance, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Quantum,
    Classical,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Quantum => f.write_str("quantum"),
            Model::Classical => f.write_str("classical"),
        }
    }
}

/// A system type: the model together with its dimension (Hilbert-space
/// dimension or sample-space size).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct System {
    model: Model,
    dim: usize,
}

impl System {
    pub fn new(model: Model, dim: usize) -> Self {
        assert!(dim >= 1, "system dimension must be positive");
        System { model, dim }
    }

    pub fn quantum(dim: usize) -> Self {
        Self::new(Model::Quantum, dim)
    }

    pub fn classical(dim: usize) -> Self {
        Self::new(Model::Classical, dim)
    }

    pub fn qubit() -> Self {
        Self::quantum(2)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_quantum(&self) -> bool {
        self.model == Model::Quantum
    }

    /// The composite system `self ⊗ other`.
    pub fn compose(&self, other: &System) -> System {
        let model = if self.model == Model::Classical && other.model == Model::Classical {
            Model::Classical
        } else {
            Model::Quantum
        };
        System::new(model, self.dim * other.dim)
    }

    fn check_same(&self, other: &System) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(format!("{} vs {}", self.model, other.model)));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// Raw numerical data of a state or effect.
#[derive(Clone, Debug, PartialEq)]
pub enum Data {
    Matrix(CMatrix),
    Vector(Vec<f64>),
}

impl Data {
    /// Matrix form; classical vectors become diagonal matrices.
    pub fn to_matrix(&self) -> CMatrix {
        match self {
            Data::Matrix(m) => m.clone(),
            Data::Vector(v) => linalg::from_real_diagonal(v),
        }
    }

    fn check_shape(&self, system: &System) -> Result<()> {
        match (self, system.model) {
            (Data::Matrix(m), Model::Quantum) => {
                if m.nrows() != m.ncols() {
                    return Err(Error::Shape(format!(
                        "matrix is {}x{}, expected square",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                if m.nrows() != system.dim {
                    return Err(Error::DimensionMismatch {
                        expected: system.dim,
                        found: m.nrows(),
                    });
                }
                Ok(())
            }
            (Data::Vector(v), Model::Classical) => {
                if v.len() != system.dim {
                    return Err(Error::DimensionMismatch {
                        expected: system.dim,
                        found: v.len(),
                    });
                }
                Ok(())
            }
            (Data::Matrix(_), Model::Classical) => Err(Error::ModelMismatch(
                "matrix data for a classical system".into(),
            )),
            (Data::Vector(_), Model::Quantum) => Err(Error::ModelMismatch(
                "vector data for a quantum system".into(),
            )),
        }
    }

    fn kron(&self, other: &Data) -> Data {
        match (self, other) {
            (Data::Vector(a), Data::Vector(b)) => {
                Data::Vector(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect())
            }
            _ => Data::Matrix(linalg::kron(&self.to_matrix(), &other.to_matrix())),
        }
    }

    fn add(&self, other: &Data) -> Data {
        match (self, other) {
            (Data::Vector(a), Data::Vector(b)) => {
                Data::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Data::Matrix(a), Data::Matrix(b)) => Data::Matrix(a + b),
            _ => Data::Matrix(self.to_matrix() + other.to_matrix()),
        }
    }
}

/// The invariant a [`Violation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Hermitian,
    PositiveSemidefinite,
    UnitTrace,
    Normalization,
    Nonnegative,
    BelowUnit,
    Causality,
    SystemMismatch,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::Hermitian => "hermiticity",
            Invariant::PositiveSemidefinite => "positivity",
            Invariant::UnitTrace => "trace",
            Invariant::Normalization => "normalization",
            Invariant::Nonnegative => "nonnegativity",
            Invariant::BelowUnit => "effect bound",
            Invariant::Causality => "causality",
            Invariant::SystemMismatch => "system mismatch",
        };
        f.write_str(s)
    }
}

/// A failed invariant with its numerical residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl Violation {
    fn new(invariant: Invariant, residual: f64) -> Self {
        Violation {
            invariant,
            residual,
            location: None,
        }
    }

    fn at(mut self, location: &str) -> Self {
        self.location = Some(location.to_string());
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{} violation at {loc:?}, residual {:e}", self.invariant, self.residual),
            None => write!(f, "{} violation, residual {:e}", self.invariant, self.residual),
        }
    }
}

/// Types whose invariants can be checked.
pub trait Validate {
    /// Every violated invariant; empty when the object is valid.
    fn validate(&self) -> Vec<Violation>;
}

pub fn validate<T: Validate + ?Sized>(item: &T) -> Vec<Violation> {
    item.validate()
}

fn hermitian_checks(m: &CMatrix, out: &mut Vec<Violation>) -> Vec<f64> {
    let tol = tolerance();
    let herm = linalg::hermiticity_residual(m);
    if herm > tol {
        out.push(Violation::new(Invariant::Hermitian, herm));
    }
    let eig = linalg::hermitian_eigenvalues(m);
    if let Some(&min) = eig.first() {
        if min < -tol {
            out.push(Violation::new(Invariant::PositiveSemidefinite, -min));
        }
    }
    eig
}

/// A normalised state.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    system: System,
    data: Data,
}

impl State {
    /// Builds a state, rejecting data that violates any state invariant.
    pub fn new(system: System, data: Data) -> Result<Self> {
        let s = Self::unchecked(system, data)?;
        let violations = s.validate();
        if violations.is_empty() {
            Ok(s)
        } else {
            Err(Error::Invalid {
                what: "state",
                violations,
            })
        }
    }

    /// Builds a state after checking only the data shape.
    pub fn unchecked(system: System, data: Data) -> Result<Self> {
        data.check_shape(&system)?;
        Ok(State { system, data })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(System::quantum(m.nrows().max(1)), Data::Matrix(m))
    }

    pub fn from_probabilities(p: Vec<f64>) -> Result<Self> {
        Self::new(System::classical(p.len().max(1)), Data::Vector(p))
    }

    /// The pure state `|ψ⟩⟨ψ|` for a (not necessarily normalised) vector.
    pub fn pure(psi: &CVector) -> Self {
        State {
            system: System::quantum(psi.len()),
            data: Data::Matrix(linalg::projector_onto(psi)),
        }
    }

    pub fn basis(system: System, i: usize) -> Self {
        let data = match system.model {
            Model::Quantum => Data::Matrix(linalg::matrix_unit(system.dim, i, i)),
            Model::Classical => {
                let mut v = vec![0.0; system.dim];
                v[i] = 1.0;
                Data::Vector(v)
            }
        };
        State { system, data }
    }

    pub fn maximally_mixed(system: System) -> Self {
        let d = system.dim;
        let data = match system.model {
            Model::Quantum => Data::Matrix(linalg::identity(d) / c(d as f64, 0.0)),
            Model::Classical => Data::Vector(vec![1.0 / d as f64; d]),
        };
        State { system, data }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn data(&self) -> &Data {
        &self.data
    }

    pub fn matrix(&self) -> CMatrix {
        self.data.to_matrix()
    }

    pub fn tensor(&self, other: &State) -> State {
        State {
            system: self.system.compose(&other.system),
            data: self.data.kron(&other.data),
        }
    }
}

impl Validate for State {
    fn validate(&self) -> Vec<Violation> {
        let tol = tolerance();
        let mut out = Vec::new();
        match &self.data {
            Data::Matrix(m) => {
                hermitian_checks(m, &mut out);
                let tr = m.trace();
                let residual = (tr - c(1.0, 0.0)).norm();
                if residual > tol {
                    out.push(Violation::new(Invariant::UnitTrace, residual));
                }
            }
            Data::Vector(v) => {
                let min = v.iter().copied().fold(f64::INFINITY, f64::min);
                if min < -tol {
                    out.push(Violation::new(Invariant::Nonnegative, -min));
                }
                let residual = (v.iter().sum::<f64>() - 1.0).abs();
                if residual > tol {
                    out.push(Violation::new(Invariant::Normalization, residual));
                }
            }
        }
        out
    }
}

/// An effect: the element assigned to one outcome of a measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    system: System,
    data: Data,
}

impl Effect {
    pub fn new(system: System, data: Data) -> Result<Self> {
        let e = Self::unchecked(system, data)?;
        let violations = e.validate();
        if violations.is_empty() {
            Ok(e)
        } else {
            Err(Error::Invalid {
                what: "effect",
                violations,
            })
        }
    }

    pub fn unchecked(system: System, data: Data) -> Result<Self> {
        data.check_shape(&system)?;
        Ok(Effect { system, data })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(System::quantum(m.nrows().max(1)), Data::Matrix(m))
    }

    pub fn from_vector(v: Vec<f64>) -> Result<Self> {
        Self::new(System::classical(v.len().max(1)), Data::Vector(v))
    }

    /// The unit effect of `system`.
    pub fn unit(system: System) -> Self {
        let data = match system.model {
            Model::Quantum => Data::Matrix(linalg::identity(system.dim)),
            Model::Classical => Data::Vector(vec![1.0; system.dim]),
        };
        Effect { system, data }
    }

    pub fn zero(system: System) -> Self {
        let data = match system.model {
            Model::Quantum => Data::Matrix(linalg::zeros(system.dim)),
            Model::Classical => Data::Vector(vec![0.0; system.dim]),
        };
        Effect { system, data }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn data(&self) -> &Data {
        &self.data
    }

    pub fn matrix(&self) -> CMatrix {
        self.data.to_matrix()
    }

    pub fn tensor(&self, other: &Effect) -> Effect {
        Effect {
            system: self.system.compose(&other.system),
            data: self.data.kron(&other.data),
        }
    }

    /// `u − self`.
    pub fn complement(&self) -> Effect {
        let data = match &self.data {
            Data::Matrix(m) => Data::Matrix(linalg::identity(self.system.dim) - m),
            Data::Vector(v) => Data::Vector(v.iter().map(|x| 1.0 - x).collect()),
        };
        Effect {
            system: self.system,
            data,
        }
    }

    /// Residual of the projector identities `P² = P = P†` (classical:
    /// distance of each entry from {0, 1}).
    pub fn projector_residual(&self) -> f64 {
        match &self.data {
            Data::Matrix(m) => linalg::projector_residual(m),
            Data::Vector(v) => v
                .iter()
                .map(|x| (x * x - x).abs())
                .fold(0.0, f64::max),
        }
    }

    pub fn is_projector(&self) -> bool {
        self.projector_residual() <= tolerance()
    }

    /// Sum of effects on a common system.
    pub fn sum<'a>(system: System, effects: impl IntoIterator<Item = &'a Effect>) -> Effect {
        let mut acc = Effect::zero(system);
        for e in effects {
            acc.data = acc.data.add(&e.data);
        }
        acc
    }

    /// Operator-norm distance to another effect.
    pub fn distance(&self, other: &Effect) -> f64 {
        linalg::op_norm(&(self.matrix() - other.matrix()))
    }
}

impl Validate for Effect {
    fn validate(&self) -> Vec<Violation> {
        let tol = tolerance();
        let mut out = Vec::new();
        match &self.data {
            Data::Matrix(m) => {
                let eig = hermitian_checks(m, &mut out);
                if let Some(&max) = eig.last() {
                    if max > 1.0 + tol {
                        out.push(Violation::new(Invariant::BelowUnit, max - 1.0));
                    }
                }
            }
            Data::Vector(v) => {
                let min = v.iter().copied().fold(f64::INFINITY, f64::min);
                if min < -tol {
                    out.push(Violation::new(Invariant::Nonnegative, -min));
                }
                let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if max > 1.0 + tol {
                    out.push(Violation::new(Invariant::BelowUnit, max - 1.0));
                }
            }
        }
        out
    }
}

/// Tensor product of states or effects.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for State {
    fn tensor(&self, other: &Self) -> Self {
        State::tensor(self, other)
    }
}

impl Tensor for Effect {
    fn tensor(&self, other: &Self) -> Self {
        Effect::tensor(self, other)
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// The unit effect of a system.
pub fn unit(system: System) -> Effect {
    Effect::unit(system)
}

/// A probability; the raw value is kept for diagnostics, [`Probability::value`]
/// is clamped to `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub(crate) fn from_raw(p: f64) -> Self {
        Probability(p)
    }

    pub fn value(self) -> f64 {
        self.0.clamp(0.0, 1.0)
    }

    pub fn raw(self) -> f64 {
        self.0
    }

    /// True when the raw value lies in `[−τ, 1 + τ]`.
    pub fn in_range(self) -> bool {
        let tol = tolerance();
        self.0 >= -tol && self.0 <= 1.0 + tol
    }
}

/// `(effect | state)`: trace of the product (quantum) or dot product
/// (classical).
pub fn pair(effect: &Effect, state: &State) -> Result<Probability> {
    effect.system.check_same(&state.system)?;
    let p = match (&effect.data, &state.data) {
        (Data::Matrix(e), Data::Matrix(r)) => linalg::trace_product_re(e, r),
        (Data::Vector(e), Data::Vector(r)) => e.iter().zip(r).map(|(a, b)| a * b).sum(),
        _ => unreachable!("shape checked at construction"),
    };
    Ok(Probability(p))
}

/// A finite outcome-indexed family of effects summing to the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    system: System,
    effects: BTreeMap<String, Effect>,
}

impl Measurement {
    pub fn new<S: Into<String>>(
        system: System,
        effects: impl IntoIterator<Item = (S, Effect)>,
    ) -> Result<Self> {
        let m = Self::unchecked(system, effects)?;
        let violations = m.validate();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(Error::Invalid {
                what: "measurement",
                violations,
            })
        }
    }

    /// Builds a measurement checking only that every effect lives on `system`.
    pub fn unchecked<S: Into<String>>(
        system: System,
        effects: impl IntoIterator<Item = (S, Effect)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (label, e) in effects {
            e.system.check_same(&system)?;
            let label = label.into();
            if map.insert(label.clone(), e).is_some() {
                return Err(Error::Shape(format!("duplicate outcome {label:?}")));
            }
        }
        if map.is_empty() {
            return Err(Error::Shape("measurement has no outcomes".into()));
        }
        Ok(Measurement {
            system,
            effects: map,
        })
    }

    /// Measurement with outcomes labelled by zero-padded indices.
    pub fn from_effects(system: System, effects: Vec<Effect>) -> Result<Self> {
        let labels = crate::labels::index_labels(effects.len());
        Self::new(system, labels.into_iter().zip(effects))
    }

    /// The single-outcome measurement `{u}`.
    pub fn trivial(system: System) -> Self {
        Measurement {
            system,
            effects: BTreeMap::from([("0".to_string(), Effect::unit(system))]),
        }
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(system: System) -> Self {
        let d = system.dim;
        let effects = crate::labels::index_labels(d)
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                let data = match system.model {
                    Model::Quantum => Data::Matrix(linalg::matrix_unit(d, i, i)),
                    Model::Classical => {
                        let mut v = vec![0.0; d];
                        v[i] = 1.0;
                        Data::Vector(v)
                    }
                };
                (l, Effect { system, data })
            })
            .collect();
        Measurement { system, effects }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.effects.keys().map(String::as_str)
    }

    pub fn effect(&self, outcome: &str) -> Option<&Effect> {
        self.effects.get(outcome)
    }

    /// Effects in canonical (sorted label) order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Effect)> {
        self.effects.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn effects(&self) -> impl Iterator<Item = &Effect> {
        self.effects.values()
    }

    pub fn outcome_distribution(&self, state: &State) -> Result<BTreeMap<String, Probability>> {
        self.effects
            .iter()
            .map(|(l, e)| Ok((l.clone(), pair(e, state)?)))
            .collect()
    }

    /// True when every effect is a projector.
    pub fn is_projective(&self) -> bool {
        self.effects.values().all(Effect::is_projector)
    }

    /// Residual of `Σ_x m_x = u`.
    pub fn causality_residual(&self) -> f64 {
        let total = Effect::sum(self.system, self.effects.values());
        total.distance(&Effect::unit(self.system))
    }
}

impl Validate for Measurement {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (label, e) in &self.effects {
            out.extend(e.validate().into_iter().map(|v| v.at(label)));
        }
        let residual = self.causality_residual();
        if residual > tolerance() {
            out.push(Violation::new(Invariant::Causality, residual));
        }
        out
    }
}

/// Groups outcomes of `m` according to `partition` (old outcome → group
/// label) and sums the effects within each group.
pub fn coarse_grain(m: &Measurement, partition: &BTreeMap<String, String>) -> Result<Measurement> {
    if let Some(unknown) = partition.keys().find(|k| !m.effects.contains_key(*k)) {
        return Err(Error::UnknownOutcome(unknown.clone()));
    }
    let mut groups: BTreeMap<String, Vec<&Effect>> = BTreeMap::new();
    for (label, e) in &m.effects {
        let group = partition
            .get(label)
            .ok_or_else(|| Error::MissingOutcome(label.clone()))?;
        groups.entry(group.clone()).or_default().push(e);
    }
    let effects: BTreeMap<String, Effect> = groups
        .into_iter()
        .map(|(g, es)| (g, Effect::sum(m.system, es)))
        .collect();
    Ok(Measurement {
        system: m.system,
        effects,
    })
}

/// Label of the composite outcome `(x, y)`.
pub fn joint_label(x: &str, y: &str) -> String {
    format!("{x},{y}")
}

/// Parallel composition: outcome `(x, y)` has effect `m_x ⊗ n_y`.
pub fn product_measurement(m: &Measurement, n: &Measurement) -> Measurement {
    let system = m.system.compose(&n.system);
    let effects = m
        .effects
        .iter()
        .flat_map(|(x, mx)| {
            n.effects
                .iter()
                .map(move |(y, ny)| (joint_label(x, y), mx.tensor(ny)))
        })
        .collect();
    Measurement { system, effects }
}

/// `d²` pure states whose projectors span the `d × d` matrices:
/// `|i⟩`, `(|i⟩+|j⟩)/√2` and `(|i⟩+i|j⟩)/√2` for `i < j`.
pub fn spanning_states(d: usize) -> Vec<State> {
    let mut states = Vec::with_capacity(d * d);
    for i in 0..d {
        states.push(State::pure(&linalg::basis_vector(d, i)));
    }
    for i in 0..d {
        for j in i + 1..d {
            let ei = linalg::basis_vector(d, i);
            let ej = linalg::basis_vector(d, j);
            states.push(State::pure(&(&ei + &ej)));
            states.push(State::pure(&(&ei + &ej * c(0.0, 1.0))));
        }
    }
    states
}
