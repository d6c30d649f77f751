//! Non-demolition measurements (instruments) in the quantum model.
//!
//! Each outcome carries a completely positive map in operator-sum form,
//! `ρ ↦ Σ_k A_k ρ A_k†`. Effects transform in the Heisenberg picture as
//! `(e| ↦ Σ_k A_k† e A_k`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::labels::{index_label, index_labels};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::model::{Data, Effect, Measurement, Probability, State, System};
use crate::{tolerance, Error, Result};

/// A trace-nonincreasing map given by its operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformation {
    system: System,
    operators: Vec<CMatrix>,
}

impl Transformation {
    pub fn new(system: System, operators: Vec<CMatrix>) -> Result<Self> {
        if !system.is_quantum() {
            return Err(Error::NotQuantum);
        }
        if operators.is_empty() {
            return Err(Error::Shape("transformation needs at least one operator".into()));
        }
        for op in &operators {
            if op.nrows() != system.dim() || op.ncols() != system.dim() {
                return Err(Error::DimensionMismatch {
                    expected: system.dim(),
                    found: op.nrows().max(op.ncols()),
                });
            }
        }
        Ok(Transformation { system, operators })
    }

    /// `ρ ↦ A ρ A†`.
    pub fn conjugation(op: CMatrix) -> Self {
        Transformation {
            system: System::quantum(op.nrows()),
            operators: vec![op],
        }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `Σ_k A_k ρ A_k†` on a raw matrix.
    pub fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        self.operators
            .iter()
            .fold(linalg::zeros(self.system.dim()), |acc, a| acc + a * rho * a.adjoint())
    }

    /// Heisenberg action `Σ_k A_k† e A_k`.
    pub fn dual_matrix(&self, e: &CMatrix) -> CMatrix {
        self.operators
            .iter()
            .fold(linalg::zeros(self.system.dim()), |acc, a| acc + a.adjoint() * e * a)
    }

    /// `Σ_k A_k† A_k`.
    pub fn effect_matrix(&self) -> CMatrix {
        self.dual_matrix(&linalg::identity(self.system.dim()))
    }

    /// Sequential composition: `self` after `first`.
    pub fn after(&self, first: &Transformation) -> Transformation {
        let operators = self
            .operators
            .iter()
            .flat_map(|a| first.operators.iter().map(move |b| a * b))
            .collect();
        Transformation {
            system: self.system,
            operators,
        }
    }
}

/// An outcome-indexed family of transformations whose total is
/// trace-preserving.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    system: System,
    branches: BTreeMap<String, Transformation>,
}

impl Instrument {
    pub fn new<S: Into<String>>(
        system: System,
        branches: impl IntoIterator<Item = (S, Transformation)>,
    ) -> Result<Self> {
        if !system.is_quantum() {
            return Err(Error::NotQuantum);
        }
        let mut map = BTreeMap::new();
        for (label, t) in branches {
            if t.system != system {
                return Err(Error::DimensionMismatch {
                    expected: system.dim(),
                    found: t.system.dim(),
                });
            }
            let label = label.into();
            if map.insert(label.clone(), t).is_some() {
                return Err(Error::Shape(format!("duplicate outcome {label:?}")));
            }
        }
        if map.is_empty() {
            return Err(Error::Shape("instrument has no outcomes".into()));
        }
        let inst = Instrument {
            system,
            branches: map,
        };
        // trace preservation and effect validity
        induced_measurement(&inst)?;
        Ok(inst)
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &str> {
        self.branches.keys().map(String::as_str)
    }

    pub fn branch(&self, outcome: &str) -> Option<&Transformation> {
        self.branches.get(outcome)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Transformation)> {
        self.branches.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Heisenberg action of the total channel `Σ_x ℳ_x`.
    fn total_dual(&self, e: &CMatrix) -> CMatrix {
        self.branches
            .values()
            .fold(linalg::zeros(self.system.dim()), |acc, t| acc + t.dual_matrix(e))
    }
}

/// Outcome of a numerical identity check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    /// Largest operator-norm deviation encountered.
    pub residual: f64,
}

impl Check {
    fn from_residual(residual: f64) -> Self {
        Check {
            holds: residual <= tolerance(),
            residual,
        }
    }
}

/// The demolition measurement `m_x = Σ_k A_{x,k}† A_{x,k}`.
pub fn induced_measurement(instr: &Instrument) -> Result<Measurement> {
    let effects = instr
        .branches
        .iter()
        .map(|(l, t)| {
            Effect::unchecked(instr.system, Data::Matrix(t.effect_matrix())).map(|e| (l.clone(), e))
        })
        .collect::<Result<Vec<_>>>()?;
    Measurement::new(instr.system, effects)
}

/// Probability of outcome `x` and the normalised post-measurement state.
pub fn apply(instr: &Instrument, rho: &State, outcome: &str) -> Result<(Probability, State)> {
    if rho.system() != instr.system {
        return Err(Error::DimensionMismatch {
            expected: instr.system.dim(),
            found: rho.system().dim(),
        });
    }
    let branch = instr
        .branches
        .get(outcome)
        .ok_or_else(|| Error::UnknownOutcome(outcome.to_string()))?;
    let out = branch.apply_matrix(&rho.matrix());
    let p = out.trace().re;
    if p <= tolerance() {
        return Err(Error::ZeroProbability {
            outcome: outcome.to_string(),
            probability: p,
        });
    }
    let post = State::unchecked(instr.system, Data::Matrix(out / c(p, 0.0)))?;
    Ok((Probability::from_raw(p), post))
}

/// Repeatability: `(m_x| ℳ_x = (m_x|` for every outcome.
pub fn is_repeatable(instr: &Instrument) -> Check {
    let residual = instr
        .branches
        .values()
        .map(|t| {
            let m = t.effect_matrix();
            linalg::op_norm(&(t.dual_matrix(&m) - &m))
        })
        .fold(0.0, f64::max);
    Check::from_residual(residual)
}

/// Whether the instrument disturbs `n`: `holds` is true when some
/// `(n_y| ℳ ≠ (n_y|` for the total channel `ℳ = Σ_x ℳ_x`.
pub fn disturbs(instr: &Instrument, n: &Measurement) -> Result<Check> {
    if n.system() != instr.system {
        return Err(Error::DimensionMismatch {
            expected: instr.system.dim(),
            found: n.system().dim(),
        });
    }
    let residual = n
        .effects()
        .map(|e| {
            let m = e.matrix();
            linalg::op_norm(&(instr.total_dual(&m) - &m))
        })
        .fold(0.0, f64::max);
    Ok(Check {
        holds: residual > tolerance(),
        residual,
    })
}

/// Checks `(r_{xy}| ℳ_x = (r_{xy}|` for a refinement `r` of the induced
/// measurement; `grouping` maps each outcome of `r` to an outcome of the
/// instrument.
pub fn satisfies_refinement_identity(
    instr: &Instrument,
    refinement: &Measurement,
    grouping: &BTreeMap<String, String>,
) -> Result<Check> {
    if refinement.system() != instr.system {
        return Err(Error::DimensionMismatch {
            expected: instr.system.dim(),
            found: refinement.system().dim(),
        });
    }
    let mut sums: BTreeMap<&str, CMatrix> = instr
        .outcomes()
        .map(|x| (x, linalg::zeros(instr.system.dim())))
        .collect();
    for (y, r) in refinement.iter() {
        let x = grouping
            .get(y)
            .ok_or_else(|| Error::MissingOutcome(y.to_string()))?;
        let acc = sums
            .get_mut(x.as_str())
            .ok_or_else(|| Error::UnknownOutcome(x.clone()))?;
        *acc += r.matrix();
    }
    for (x, sum) in &sums {
        let m = instr.branches[*x].effect_matrix();
        let residual = linalg::op_norm(&(sum - m));
        if residual > tolerance() {
            return Err(Error::NotARefinement {
                outcome: x.to_string(),
                residual,
            });
        }
    }
    let residual = refinement
        .iter()
        .map(|(y, r)| {
            let t = &instr.branches[&grouping[y]];
            let m = r.matrix();
            linalg::op_norm(&(t.dual_matrix(&m) - &m))
        })
        .fold(0.0, f64::max);
    Ok(Check::from_residual(residual))
}

/// Which structural condition of the Lüders form failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SharpnessFailure {
    NonProjectiveEffect,
    NonOrthogonalEffects,
    BranchNotConjugation,
}

/// Structural Lüders test with its residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub sharp: bool,
    pub projector_residual: f64,
    pub orthogonality_residual: f64,
    pub branch_residual: f64,
    pub failure: Option<SharpnessFailure>,
}

/// Sharpness in the quantum model: every branch acts as `ρ ↦ P_x ρ P_x`
/// for mutually orthogonal projectors `P_x`.
pub fn sharpness(instr: &Instrument) -> Result<SharpnessReport> {
    if !instr.system.is_quantum() {
        return Err(Error::NotQuantum);
    }
    let tol = tolerance();
    let d = instr.system.dim();
    let effects: Vec<CMatrix> = instr.branches.values().map(Transformation::effect_matrix).collect();

    let projector_residual = effects
        .iter()
        .map(linalg::projector_residual)
        .fold(0.0, f64::max);

    let mut orthogonality_residual: f64 = 0.0;
    for (i, a) in effects.iter().enumerate() {
        for b in &effects[i + 1..] {
            orthogonality_residual = orthogonality_residual.max(linalg::op_norm(&(a * b)));
        }
    }

    let mut branch_residual: f64 = 0.0;
    for (t, p) in instr.branches.values().zip(&effects) {
        for i in 0..d {
            for j in 0..d {
                let unit = linalg::matrix_unit(d, i, j);
                let lhs = t.apply_matrix(&unit);
                let rhs = p * &unit * p;
                branch_residual = branch_residual.max(linalg::op_norm(&(lhs - rhs)));
            }
        }
    }

    let failure = if projector_residual > tol {
        Some(SharpnessFailure::NonProjectiveEffect)
    } else if orthogonality_residual > tol {
        Some(SharpnessFailure::NonOrthogonalEffects)
    } else if branch_residual > tol {
        Some(SharpnessFailure::BranchNotConjugation)
    } else {
        None
    };
    Ok(SharpnessReport {
        sharp: failure.is_none(),
        projector_residual,
        orthogonality_residual,
        branch_residual,
        failure,
    })
}

pub fn is_sharp(instr: &Instrument) -> Result<bool> {
    Ok(sharpness(instr)?.sharp)
}

fn check_projectors(effects: &[Effect]) -> Result<System> {
    let system = effects
        .first()
        .ok_or_else(|| Error::Shape("no effects given".into()))?
        .system();
    if !system.is_quantum() {
        return Err(Error::NotQuantum);
    }
    for (index, e) in effects.iter().enumerate() {
        if e.system() != system {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                found: e.system().dim(),
            });
        }
        let residual = e.projector_residual();
        if residual > tolerance() {
            return Err(Error::NotProjector { index, residual });
        }
    }
    for (i, a) in effects.iter().enumerate() {
        let am = a.matrix();
        for (j, b) in effects.iter().enumerate().skip(i + 1) {
            let residual = linalg::op_norm(&(&am * b.matrix()));
            if residual > tolerance() {
                return Err(Error::NotOrthogonal {
                    first: i,
                    second: j,
                    residual,
                });
            }
        }
    }
    Ok(system)
}

/// Lüders instrument `ρ ↦ P_x ρ P_x` of mutually orthogonal projectors.
/// A nonzero deficit `I − Σ P_x` is appended as one extra outcome.
pub fn luders(projectors: &[Effect]) -> Result<Instrument> {
    let system = check_projectors(projectors)?;
    let mut mats: Vec<CMatrix> = projectors.iter().map(Effect::matrix).collect();
    let deficit = linalg::identity(system.dim()) - mats.iter().sum::<CMatrix>();
    if linalg::op_norm(&deficit) > tolerance() {
        mats.push(deficit);
    }
    let n = mats.len();
    let branches = mats
        .into_iter()
        .enumerate()
        .map(|(i, p)| (index_label(i, n), Transformation::conjugation(p)));
    Instrument::new(system, branches)
}

/// Lüders instrument of a projective measurement, keeping its labels.
pub fn luders_of(m: &Measurement) -> Result<Instrument> {
    let effects: Vec<Effect> = m.effects().cloned().collect();
    check_projectors(&effects)?;
    Instrument::new(
        m.system(),
        m.iter()
            .map(|(l, e)| (l.to_string(), Transformation::conjugation(e.matrix()))),
    )
}

/// Measure-and-reprepare instrument: measure `m` and, on outcome `x`,
/// prepare `states[x]`. Branch operators are `|φ_{x,i}⟩⟨ψ_{x,k}|`-type
/// products `√σ_x-columns × √m_x-rows`.
pub fn measure_and_prepare(m: &Measurement, states: &BTreeMap<String, State>) -> Result<Instrument> {
    let system = m.system();
    if !system.is_quantum() {
        return Err(Error::NotQuantum);
    }
    let d = system.dim();
    let mut branches = Vec::new();
    for (x, e) in m.iter() {
        let sigma = states
            .get(x)
            .ok_or_else(|| Error::MissingOutcome(x.to_string()))?;
        let (s_vals, s_vecs) = linalg::hermitian_eigen(&sigma.matrix());
        let (m_vals, m_vecs) = linalg::hermitian_eigen(&e.matrix());
        let mut ops = Vec::new();
        for (i, &sv) in s_vals.iter().enumerate() {
            if sv <= 0.0 {
                continue;
            }
            let phi: CVector = s_vecs.column(i) * c(sv.sqrt(), 0.0);
            for (k, &mv) in m_vals.iter().enumerate() {
                if mv <= 0.0 {
                    continue;
                }
                let psi: CVector = m_vecs.column(k) * c(mv.sqrt(), 0.0);
                ops.push(&phi * psi.adjoint());
            }
        }
        if ops.is_empty() {
            ops.push(linalg::zeros(d));
        }
        branches.push((x.to_string(), Transformation::new(system, ops)?));
    }
    Instrument::new(system, branches)
}

/// The measurement `{m_k, m_l, u − m_k − m_l}` witnessing that two effects
/// are orthogonal.
pub fn orthogonality_witness(a: &Effect, b: &Effect) -> Result<Measurement> {
    let system = a.system();
    let rest = Effect::unchecked(system, Data::Matrix(linalg::identity(system.dim()) - a.matrix() - b.matrix()))?;
    Measurement::new(system, [("0", a.clone()), ("1", b.clone()), ("2", rest)])
}

/// Joint measurement of mutually orthogonal projectors `m_1..m_K` realised
/// by chaining the binary Lüders instruments `{m_k, u − m_k}`:
/// outcome `k ≤ K` applies `ℳ_0^{(k)} ℳ_1^{(k−1)} ··· ℳ_1^{(1)}`, outcome
/// `K+1` applies `ℳ_1^{(K)} ··· ℳ_1^{(1)}`.
pub fn joint_from_orthogonal(effects: &[Effect]) -> Result<(Instrument, Measurement)> {
    let system = check_projectors(effects)?;
    let d = system.dim();
    let k = effects.len();
    let labels = index_labels(k + 1);

    let mut branches = Vec::with_capacity(k + 1);
    // ℳ_1^{(k-1)} ··· ℳ_1^{(1)} accumulated as a single operator
    let mut rejected = Transformation::conjugation(linalg::identity(d));
    for (idx, e) in effects.iter().enumerate() {
        let accept = Transformation::conjugation(e.matrix());
        let reject = Transformation::conjugation(linalg::identity(d) - e.matrix());
        branches.push((labels[idx].clone(), accept.after(&rejected)));
        rejected = reject.after(&rejected);
    }
    branches.push((labels[k].clone(), rejected));

    let instrument = Instrument::new(system, branches)?;
    let measurement = induced_measurement(&instrument)?;
    Ok((instrument, measurement))
}

/// A projective measurement on system ⊗ ancilla with the ancilla prepared
/// in a fixed state.
#[derive(Clone, Debug, PartialEq)]
pub struct Dilation {
    pub ancilla: System,
    pub ancilla_state: State,
    pub measurement: Measurement,
}

/// One ancilla and ancilla state shared by a family of dilated
/// measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedDilation {
    pub ancilla: System,
    pub ancilla_state: State,
    pub family: Vec<Measurement>,
}

/// Naimark dilation: with `V = Σ_x √m_x ⊗ |x⟩` completed to a unitary `U`,
/// `M_x = U† (I ⊗ |x⟩⟨x|) U` and the ancilla starts in `|0⟩`.
pub fn naimark_dilate(m: &Measurement) -> Result<Dilation> {
    let system = m.system();
    if !system.is_quantum() {
        return Err(Error::NotQuantum);
    }
    let violations = crate::model::validate(m);
    if !violations.is_empty() {
        return Err(Error::Invalid {
            what: "measurement",
            violations,
        });
    }
    let d = system.dim();
    let n = m.len();
    let big = d * n;
    let roots: Vec<CMatrix> = m.effects().map(|e| linalg::psd_sqrt(&e.matrix())).collect();

    // columns V|i⟩ = Σ_x (√m_x |i⟩) ⊗ |x⟩, index (row, x) ↦ row * n + x
    let isometry_cols: Vec<CVector> = (0..d)
        .map(|i| {
            let mut v = CVector::zeros(big);
            for (x, r) in roots.iter().enumerate() {
                for row in 0..d {
                    v[row * n + x] = r[(row, i)];
                }
            }
            v
        })
        .collect();
    let extra = linalg::complete_orthonormal_basis(&isometry_cols, big);
    if extra.len() != big {
        return Err(Error::Shape("isometry completion failed".into()));
    }
    // U maps |i⟩⊗|0⟩ to V|i⟩ and the remaining basis vectors |i⟩⊗|a⟩, a ≥ 1,
    // to the completed columns in order.
    let mut u = CMatrix::zeros(big, big);
    let mut next_extra = d;
    for i in 0..d {
        for a in 0..n {
            let col = if a == 0 {
                &extra[i]
            } else {
                let v = &extra[next_extra];
                next_extra += 1;
                v
            };
            u.set_column(i * n + a, col);
        }
    }

    let dilated = System::quantum(big);
    let ancilla = System::quantum(n);
    let effects = m
        .outcomes()
        .enumerate()
        .map(|(x, label)| {
            let mut proj = linalg::zeros(n);
            proj[(x, x)] = c(1.0, 0.0);
            let lifted = linalg::kron(&linalg::identity(d), &proj);
            let mx = u.adjoint() * lifted * &u;
            Effect::unchecked(dilated, Data::Matrix(mx)).map(|e| (label.to_string(), e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dilation {
        ancilla,
        ancilla_state: State::basis(ancilla, 0),
        measurement: Measurement::new(dilated, effects)?,
    })
}

/// Embeds an operator on `A ⊗ B_slot` into `A ⊗ B_0 ⊗ ··· ⊗ B_{n−1}`,
/// acting as the identity on every other ancilla factor.
fn embed_on_slot(op: &CMatrix, d: usize, ancillas: &[usize], slot: usize) -> CMatrix {
    let total: usize = ancillas.iter().product();
    let big = d * total;
    let ds = ancillas[slot];
    let digits = |mut idx: usize| {
        let mut out = vec![0; ancillas.len()];
        for (k, &dim) in ancillas.iter().enumerate().rev() {
            out[k] = idx % dim;
            idx /= dim;
        }
        out
    };
    let anc_digits: Vec<Vec<usize>> = (0..total).map(digits).collect();
    let mut m = CMatrix::zeros(big, big);
    for (b, bd) in anc_digits.iter().enumerate() {
        for (b2, bd2) in anc_digits.iter().enumerate() {
            let others_match = bd
                .iter()
                .zip(bd2)
                .enumerate()
                .all(|(k, (x, y))| k == slot || x == y);
            if !others_match {
                continue;
            }
            for a in 0..d {
                for a2 in 0..d {
                    m[(a * total + b, a2 * total + b2)] = op[(a * ds + bd[slot], a2 * ds + bd2[slot])];
                }
            }
        }
    }
    m
}

/// Dilates every measurement of a family with one shared ancilla
/// `B = ⊗_x B_x` in the state `σ = ⊗_x σ_x`, using
/// `M_y^{(x)} = S_y^{(x)} ⊗ u_{¬x}`.
pub fn shared_ancilla_dilation(measurements: &[Measurement]) -> Result<SharedDilation> {
    let system = measurements
        .first()
        .ok_or_else(|| Error::Shape("no measurements given".into()))?
        .system();
    for m in measurements {
        if m.system() != system {
            return Err(Error::DimensionMismatch {
                expected: system.dim(),
                found: m.system().dim(),
            });
        }
    }
    let singles: Vec<Dilation> = measurements.iter().map(naimark_dilate).collect::<Result<_>>()?;
    let ancilla_dims: Vec<usize> = singles.iter().map(|s| s.ancilla.dim()).collect();
    let ancilla = System::quantum(ancilla_dims.iter().product());
    let ancilla_state = singles
        .iter()
        .skip(1)
        .fold(singles[0].ancilla_state.clone(), |acc, s| acc.tensor(&s.ancilla_state));
    let dilated = system.compose(&ancilla);
    let family = singles
        .iter()
        .enumerate()
        .map(|(slot, s)| {
            let effects = s
                .measurement
                .iter()
                .map(|(y, e)| {
                    let op = embed_on_slot(&e.matrix(), system.dim(), &ancilla_dims, slot);
                    Effect::unchecked(dilated, Data::Matrix(op)).map(|e| (y.to_string(), e))
                })
                .collect::<Result<Vec<_>>>()?;
            Measurement::new(dilated, effects)
        })
        .collect::<Result<_>>()?;
    Ok(SharedDilation {
        ancilla,
        ancilla_state,
        family,
    })
}

/// Largest `|(m_x|ρ) − (M_x|ρ ⊗ σ)|` over a spanning set of `d²` states.
pub fn dilation_deviation(m: &Measurement, dilated: &Measurement, ancilla_state: &State) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for rho in crate::model::spanning_states(m.system().dim()) {
        let joint = rho.tensor(ancilla_state);
        for (x, e) in m.iter() {
            let big = dilated
                .effect(x)
                .ok_or_else(|| Error::UnknownOutcome(x.to_string()))?;
            let p = crate::model::pair(e, &rho)?.raw();
            let q = crate::model::pair(big, &joint)?.raw();
            worst = worst.max((p - q).abs());
        }
    }
    Ok(worst)
}

/// Largest `‖P² − P‖` (or non-Hermiticity) over the effects of `m`.
pub fn max_projector_residual(m: &Measurement) -> f64 {
    m.effects().map(Effect::projector_residual).fold(0.0, f64::max)
}
