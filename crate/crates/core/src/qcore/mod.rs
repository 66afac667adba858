//! q-arithmetic: Pochhammer symbols, basic hypergeometric series, the second
//! Jackson q-Bessel function and a registry of checkable q-identities.

mod bessel;
mod identities;
mod pochhammer;
mod series;
mod sum;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};

pub use bessel::jackson_q_bessel2;
pub(crate) use identities::lin_comb_coefficients;
pub use identities::{sample_identity_params, verify_identity, IdentityCase, IdentityId, IdentityParams};
pub use pochhammer::{poch, poch_inf, poch_inf_real, poch_real, q_number, q_pochhammer, Order};
pub use series::{basic_hypergeometric, phi01_real, ILL_CONDITIONED_RATIO};
pub use sum::{CompensatedSum, ComplexCompensatedSum};

/// Default relative tolerance for series and products.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Tolerance used internally where results feed further computation.
pub(crate) const TIGHT_TOL: f64 = 0.25 * f64::EPSILON;

/// The base `q` of all q-series, restricted to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QBase(q))
        } else {
            domain(format!("q must lie in (0,1), got {q}"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `q^x` for real `x`.
    #[inline]
    pub fn pow(self, x: f64) -> f64 {
        self.0.powf(x)
    }

    #[inline]
    pub fn powi(self, n: i32) -> f64 {
        self.0.powi(n)
    }

    /// The base `q^{1/2}`.
    pub fn sqrt(self) -> QBase {
        QBase(self.0.sqrt())
    }

    /// The base `q^2`.
    pub fn squared(self) -> QBase {
        QBase(self.0 * self.0)
    }
}

/// Value of a series or infinite product with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
    /// Largest term magnitude seen while summing; `max_term / |value|` is the
    /// cancellation ratio.
    pub max_term: f64,
}

impl SeriesResult {
    pub(crate) fn exact(value: Complex64, terms_used: usize) -> Self {
        SeriesResult { value, abs_error_estimate: 0.0, terms_used, converged: true, max_term: value.norm() }
    }

    /// Ratio of the largest summand to the result.
    pub fn cancellation_ratio(&self) -> f64 {
        let v = self.value.norm();
        if v == 0.0 {
            if self.max_term == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.max_term / v
        }
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.cancellation_ratio() > ILL_CONDITIONED_RATIO
    }

    /// Real part, after checking the imaginary part is roundoff.
    pub fn real(&self) -> Result<f64> {
        as_real(self.value)
    }
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Takes the real part of a value documented as real; complex inputs arise from
/// conjugate pairs, so the imaginary part must be below `1e-12 |z|`.
pub fn as_real(z: Complex64) -> Result<f64> {
    if z.im.abs() <= 1e-12 * z.norm() || z.im == 0.0 {
        Ok(z.re)
    } else {
        Err(crate::Error::Domain(format!("expected a real value, imaginary part {:e} of {:e}", z.im, z.norm())))
    }
}

/// Returns `Some(j)` when `x` equals `q^{-j}` for some `0 <= j <= max_j` up to
/// a few ulps.
pub fn negative_q_power_index(x: Complex64, q: QBase, max_j: usize) -> Option<usize> {
    if x.im.abs() > 1e-14 * x.norm() || x.re < 1.0 - 1e-12 {
        return None;
    }
    let mut qj = 1.0;
    for j in 0..=max_j {
        if (x.re * qj - 1.0).abs() <= 64.0 * f64::EPSILON {
            return Some(j);
        }
        qj *= q.value();
        if x.re * qj < 0.5 {
            break;
        }
    }
    None
}
