//! Operational measurement theory on finite-dimensional quantum and classical
//! models, and the exclusivity-graph machinery used to bound nonlocal games
//! and contextuality scenarios.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: states, effects, measurements, coarse-graining and parallel
//!   composition.
//! * [`instruments`]: non-demolition measurements, sharpness checks, the
//!   Lüders construction, joint measurements of orthogonal projectors and
//!   Naimark dilations.
//! * [`graph`]: exact clique, colouring and perfectness routines.
//! * [`exclusivity`]: local-orthogonality and consistent-exclusivity event
//!   graphs, their multi-copy lifts and the corresponding checks.
//! * [`games`]: nonlocal games, boxes, classical values and the LO linear
//!   programming bound.

use std::sync::atomic::{AtomicU64, Ordering};

pub mod error;
pub mod exclusivity;
pub mod games;
pub mod graph;
pub mod instruments;
pub mod io;
pub mod labels;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod sample;

pub use error::{Error, Result};

/// Default numerical tolerance for identity, projector and PSD checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current global tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Overrides the global tolerance. Intended for command-line use; library
/// code reads the value through [`tolerance`].
pub fn set_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}
