//! Small dense complex linear algebra.
//!
//! Everything here works at dimension ≤ [`MAX_DIM`]. Zero tests and
//! approximate equalities go through a [`TolerancePolicy`].

mod eigen;
mod matrix;
mod spaces;

pub use eigen::{apply_function, hermitian_eig, spectral_projector, HermitianOperator, SpectralComponent};
pub use matrix::{inner, norm, normalize, scale, sub, ComplexMatrix, Vector, MAX_DIM};
pub use spaces::{image_subspace, in_subspace, ray_equal, Projector, ProjectivePoint, Ray, Subspace};

pub use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerances used for approximate comparisons and zero detection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    /// Slack for equalities: Hermiticity, idempotence, eigenvalue matching, ray overlap.
    pub eps: f64,
    /// A vector with norm at or below this is treated as annihilated.
    pub null_threshold: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eps: 1e-9,
            null_threshold: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn new(eps: f64, null_threshold: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite() && null_threshold > 0.0 && null_threshold.is_finite()) {
            return Err(Error::Validation(format!(
                "tolerances must be positive and finite (eps={eps}, null={null_threshold})"
            )));
        }
        Ok(TolerancePolicy {
            eps,
            null_threshold,
        })
    }

    #[inline]
    pub fn is_null(&self, v: &[Complex64]) -> bool {
        norm(v) <= self.null_threshold
    }
}
