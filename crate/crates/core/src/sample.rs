//! Random states, measurements and refinements for property tests and
//! benchmarks.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::labels::index_label;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::model::{joint_label, Effect, Measurement, State, System};
use crate::Result;

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary via QR with the phase of `R`'s diagonal fixed.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Mixed state `G G† / tr(G G†)` from a square Ginibre matrix.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> State {
    let g = ginibre(d, d, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    State::from_matrix(rho / c(tr, 0.0)).expect("Ginibre states are valid")
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> State {
    let v = ginibre(d, 1, rng);
    let norm = v.norm();
    State::pure(&CVector::from_iterator(d, v.iter().map(|z| z / c(norm, 0.0))))
}

/// Projective measurement with `outcomes` nonzero projectors (clamped to
/// `1..=d`) built from a random orthonormal basis split into random blocks.
pub fn random_projective_measurement<R: Rng + ?Sized>(
    d: usize,
    outcomes: usize,
    rng: &mut R,
) -> Measurement {
    let k = outcomes.clamp(1, d);
    let u = random_unitary(d, rng);
    let mut owner: Vec<usize> = (0..d).map(|i| if i < k { i } else { rng.random_range(0..k) }).collect();
    owner.shuffle(rng);
    let effects = (0..k)
        .map(|x| {
            let mut p = linalg::zeros(d);
            for (i, _) in owner.iter().enumerate().filter(|(_, &o)| o == x) {
                let col: CVector = u.column(i).into_owned();
                p += linalg::ket_bra(&col);
            }
            Effect::from_matrix(p).expect("projector")
        })
        .collect();
    Measurement::from_effects(System::quantum(d), effects).expect("projectors sum to identity")
}

/// Generic full-rank POVM `S^{-1/2} G_x S^{-1/2}` with `S = Σ G_x`. Its
/// effects are almost surely not projectors when `outcomes ≥ 2`.
pub fn random_povm<R: Rng + ?Sized>(d: usize, outcomes: usize, rng: &mut R) -> Measurement {
    let gs: Vec<CMatrix> = (0..outcomes.max(1))
        .map(|_| {
            let g = ginibre(d, d, rng);
            &g * g.adjoint()
        })
        .collect();
    let total = gs.iter().fold(linalg::zeros(d), |acc, g| acc + g);
    let inv_sqrt = linalg::hermitian_map(&total, |l| 1.0 / l.sqrt());
    let effects = gs
        .iter()
        .map(|g| Effect::from_matrix(&inv_sqrt * g * &inv_sqrt).expect("positive effect"))
        .collect();
    Measurement::from_effects(System::quantum(d), effects).expect("normalised POVM")
}

/// Splits each effect `m_x` into `√m_x F_i √m_x` for a random POVM `F`
/// with one to three outcomes. Returns the refinement and the map from its
/// outcomes to those of `m`.
pub fn random_refinement<R: Rng + ?Sized>(
    m: &Measurement,
    rng: &mut R,
) -> Result<(Measurement, BTreeMap<String, String>)> {
    let d = m.system().dim();
    let mut effects = Vec::new();
    let mut grouping = BTreeMap::new();
    for (x, e) in m.iter() {
        // eigenvalues at rounding level would otherwise grow to ~1e-8 roots
        let root = linalg::hermitian_map(&e.matrix(), |l| if l > 1e-12 { l.sqrt() } else { 0.0 });
        let parts = rng.random_range(1..=3);
        let f = random_povm(d, parts, rng);
        for (i, fi) in f.effects().enumerate() {
            let label = joint_label(x, &index_label(i, parts));
            effects.push((label.clone(), Effect::from_matrix(&root * fi.matrix() * &root)?));
            grouping.insert(label, x.to_string());
        }
    }
    Ok((Measurement::new(m.system(), effects)?, grouping))
}

/// `k` mutually orthogonal nonzero projectors on `C^d` that need not sum to
/// the identity (`k ≤ d`).
pub fn random_orthogonal_projectors<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Vec<Effect> {
    let k = k.clamp(1, d);
    let m = random_projective_measurement(d, k + usize::from(k < d), rng);
    m.effects().take(k).cloned().collect()
}
