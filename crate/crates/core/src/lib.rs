//! Approximate John ellipsoids of centrally symmetric polytopes.
//!
//! The maximum-volume inscribed ellipsoid of `{x : |<a_i, x>| <= 1}` is
//! encoded by nonnegative row weights `w` with `sum w_i = d` at the fixed
//! point `w_i = w_i * h_i(w)` of the weighted leverage-score map. This crate
//! provides:
//!
//! - an exact fixed-point iteration ([`exact_je`]) used as the deterministic
//!   oracle,
//! - a fast randomized iteration ([`dpje`]) built on leverage-score row
//!   sampling and Gaussian sketching, with an optional differentially
//!   private mode that perturbs each iterate with truncated Gaussian noise,
//! - the privacy machinery behind that mode: truncated Gaussian
//!   distribution ([`noise`]), moments accountant and noise calibration
//!   ([`accountant`]), and the closed-form Lipschitz bound with an
//!   empirical auditor ([`lipschitz`]).
//!
//! All numeric kernels are generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64`, which is what
//! the command-line tools use.

pub mod accountant;
pub mod dpje;
pub mod error;
pub mod exact_je;
pub mod lipschitz;
pub mod noise;
pub mod numerics;
pub mod polytope;
pub mod quad;
pub mod scalar;
pub mod sketch_sample;
pub mod stream;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default scalar for desk use.
pub type Scalar = f64;

pub type Polytope = polytope::PolytopeOf<Scalar>;
pub type NeighborPerturbation = polytope::NeighborPerturbation<Scalar>;
pub type SpectralStats = polytope::SpectralStats<Scalar>;
pub type WeightVector = numerics::WeightVector<Scalar>;
pub type QuadForm = numerics::QuadForm<Scalar>;
