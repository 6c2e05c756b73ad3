//! Scalar abstraction for the numeric kernels.
//!
//! Everything in this crate is written against [`Real`], so the solvers run
//! on `f32` or `f64` alike. The crate root re-exports `f64` aliases for the
//! common case.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::erf;

/// Floating-point scalar usable by the solvers: `f32` or `f64`.
///
/// Extends [`nalgebra::RealField`] with the Gaussian special functions the
/// distribution code needs.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Gauss error function.
    fn erf(self) -> Self;

    /// Inverse of the complementary error function.
    fn erfc_inv(self) -> Self;

    /// One draw from N(0, 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Shorthand for lossy conversion from `f64` literals.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts to any Real scalar")
    }

    /// Lossy view as `f64` (used for formatting and reports).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real scalar converts to f64")
    }

    /// Standard normal CDF.
    fn phi(self) -> Self {
        let half = Self::of(0.5);
        half * (Self::one() + (self / Self::of(std::f64::consts::SQRT_2)).erf())
    }

    /// Standard normal quantile (inverse CDF).
    fn phi_inv(self) -> Self {
        -Self::of(std::f64::consts::SQRT_2) * (Self::of(2.0) * self).erfc_inv()
    }
}

impl Real for f64 {
    fn erf(self) -> Self {
        libm::erf(self)
    }

    fn erfc_inv(self) -> Self {
        erf::erfc_inv(self)
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    fn erf(self) -> Self {
        libm::erf(self as f64) as f32
    }

    fn erfc_inv(self) -> Self {
        erf::erfc_inv(self as f64) as f32
    }

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
