//! Mechanical verification of contextuality arguments: quantum pigeonhole and
//! Cheshire-cat pre/post-selection paradoxes, Kochen-Specker colorability
//! searches, magic-configuration parity proofs and qudit GHZ-graph paradoxes.
//!
//! The symbolic layer ([`weyl`], [`root`], [`graphs`]) is exact. Every dense
//! computation is generic over a [`Real`] scalar; the aliases below fix it to
//! `f64`, which is what the default tolerance of `1e-10` assumes.

pub mod error;
pub mod graphs;
pub mod ks;
pub mod linalg;
pub mod magic;
pub mod registry;
pub mod report;
pub mod root;
pub mod scalar;
pub mod scenarios;
pub mod state;
pub mod weyl;

pub use error::{Error, Result};
pub use root::Root;
pub use scalar::Real;
pub use state::Settings;
pub use weyl::{parse_weyl, MeasurementContext, WeylOperator};

/// Artifact version stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Matrix = linalg::CMatrix<f64>;
pub type State = state::StateVector<f64>;
pub type Projector = state::OutcomeProjector<f64>;
pub type RaySet = ks::RaySet<f64>;

pub type Matrix32 = linalg::CMatrix<f32>;
pub type State32 = state::StateVector<f32>;

/// Deterministic generator behind every randomized sweep.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
