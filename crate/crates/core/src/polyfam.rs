//! Orthogonal polynomial families: Al-Salam--Chihara polynomials and their
//! continuous q-Laguerre and continuous big q-Hermite specialisations.
//!
//! Polynomials are evaluated by upward recurrence in double precision. All uses
//! are on the spectral support `x = cos θ ∈ [-1, 1]`; outside it the values
//! grow like `(2|x|)^n` and may overflow for large `n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::qcore::{negative_q_power_index, poch_inf, poch_inf_real, poch_real, QBase};

/// Parameters `(a, b; q)` of the Al-Salam--Chihara family, with `0 < |a| < 1`
/// and `|b| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AscParams {
    pub a: f64,
    pub b: f64,
    pub q: QBase,
}

impl AscParams {
    pub fn new(a: f64, b: f64, q: f64) -> Result<Self> {
        let q = QBase::new(q)?;
        if !(a.is_finite() && a != 0.0 && a.abs() < 1.0) {
            return domain(format!("a must satisfy 0 < |a| < 1, got {a}"));
        }
        if !(b.is_finite() && b.abs() < 1.0) {
            return domain(format!("b must satisfy |b| < 1, got {b}"));
        }
        let c = q.value() * b / a;
        if negative_q_power_index(Complex64::new(c, 0.0), q, 10_000).is_some() {
            return Err(crate::Error::Pole(format!("qb/a = {c} is a non-positive power of q")));
        }
        Ok(AscParams { a, b, q })
    }

    /// The same family with `a` and `b` exchanged; requires `b != 0`.
    pub fn swapped(&self) -> Result<Self> {
        AscParams::new(self.b, self.a, self.q.value())
    }

    /// Diagonal `β_n = (a+b) q^n` of the Jacobi matrix `J(a,b)`.
    pub fn beta(&self, n: usize) -> f64 {
        (self.a + self.b) * self.q.powi(n as i32)
    }

    /// Off-diagonal `α_n = sqrt((1 - q^{n+1})(1 - ab q^n))`.
    pub fn alpha(&self, n: usize) -> f64 {
        let qn = self.q.powi(n as i32);
        ((1.0 - qn * self.q.value()) * (1.0 - self.a * self.b * qn)).sqrt()
    }

    /// `(q, ab; q)_n`, the squared norm of `Q_n`.
    pub fn norm(&self, n: usize) -> f64 {
        poch_real(self.q.value(), self.q, n) * poch_real(self.a * self.b, self.q, n)
    }
}

/// `Q_0(x), …, Q_{nmax}(x)` by the three-term recurrence
/// `Q_{n+1} = (2x - (a+b)q^n) Q_n - (1-q^n)(1-ab q^{n-1}) Q_{n-1}`.
pub fn alsalam_chihara_all(nmax: usize, x: f64, p: &AscParams) -> Vec<f64> {
    let q = p.q.value();
    let ab = p.a * p.b;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut qn = 1.0;
    for n in 0..nmax {
        let back = if n == 0 { 0.0 } else { (1.0 - qn) * (1.0 - ab * qn / q) };
        let next = (2.0 * x - (p.a + p.b) * qn) * cur - back * prev;
        out.push(next);
        prev = cur;
        cur = next;
        qn *= q;
    }
    out
}

/// Al-Salam--Chihara polynomial `Q_n(x; a, b | q)`.
pub fn alsalam_chihara_q(n: usize, x: f64, p: &AscParams) -> f64 {
    alsalam_chihara_all(n, x, p)[n]
}

/// `φ_0(2x), …, φ_{nmax}(2x)` with `φ_n(2x) = Q_n(x) / sqrt((q,ab;q)_n)`.
pub fn orthonormal_phi_all(nmax: usize, x: f64, p: &AscParams) -> Vec<f64> {
    let mut qs = alsalam_chihara_all(nmax, x, p);
    let mut norm = 1.0;
    for (n, v) in qs.iter_mut().enumerate() {
        if n > 0 {
            let a = p.alpha(n - 1);
            norm *= a * a;
        }
        *v /= norm.sqrt();
    }
    qs
}

/// Orthonormal polynomial `φ_n(2x)` of the Jacobi matrix `J(a,b)`.
pub fn orthonormal_phi(n: usize, x: f64, p: &AscParams) -> f64 {
    orthonormal_phi_all(n, x, p)[n]
}

fn open_angle(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        domain(format!("theta must lie in (0, pi), got {theta}"))
    }
}

/// `|(e^{2iθ};q)_∞|²`, the factor that vanishes at both ends of `(0, π)`.
fn edge_factor(theta: f64, q: QBase) -> f64 {
    poch_inf(Complex64::from_polar(1.0, 2.0 * theta), q).norm_sqr()
}

/// Orthogonality density `dμ/dx` at `x = cos θ` for the Al-Salam--Chihara
/// polynomials.
pub fn asc_density(theta: f64, p: &AscParams) -> Result<f64> {
    open_angle(theta)?;
    Ok(asc_density_times_sin(theta, p) / theta.sin())
}

/// `dμ/dx(cos θ) · sin θ`, the integrand weight in θ.
pub(crate) fn asc_density_times_sin(theta: f64, p: &AscParams) -> f64 {
    let q = p.q;
    let e = Complex64::from_polar(1.0, theta);
    let c = poch_inf_real(q.value(), q) * poch_inf_real(p.a * p.b, q) / (2.0 * PI);
    let den = (poch_inf(p.a * e, q) * poch_inf(p.b * e, q)).norm_sqr();
    c * edge_factor(theta, q) / den
}

/// Normalisation of the continuous q-Laguerre polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LaguerreConvention {
    /// `P_n^{(α)}(x | q)`
    Bar,
    /// `P_n^{(α)}(x; q) = q^{-αn} P_n^{(α)}(x | q²)`
    Semicolon,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -1.0 {
        Ok(())
    } else {
        domain(format!("alpha must exceed -1, got {alpha}"))
    }
}

/// Al-Salam--Chihara parameters `(a, a q^{1/2})` with `a = q^{α/2 + 1/4}` of
/// the continuous q-Laguerre family.
pub fn qlaguerre_params(alpha: f64, q: QBase) -> Result<AscParams> {
    check_alpha(alpha)?;
    let a = q.pow(alpha / 2.0 + 0.25);
    AscParams::new(a, a * q.pow(0.5), q.value())
}

/// Continuous q-Laguerre polynomial in either normalisation.
pub fn continuous_q_laguerre(n: usize, x: f64, alpha: f64, q: QBase, convention: LaguerreConvention) -> Result<f64> {
    check_alpha(alpha)?;
    match convention {
        LaguerreConvention::Bar => {
            let p = qlaguerre_params(alpha, q)?;
            Ok(p.a.powi(n as i32) / poch_real(q.value(), q, n) * alsalam_chihara_q(n, x, &p))
        }
        LaguerreConvention::Semicolon => Ok(qlaguerre_semicolon_all(n, x, alpha, q)[n]),
    }
}

/// `P_0(x;q), …, P_{nmax}(x;q)` from their own recurrence
/// `2x P_n = q^{-1/2}(1-q^{2n+2}) P_{n+1} + q^{α+2n+1/2}(1+q) P_n + q^{1/2}(1-q^{2α+2n}) P_{n-1}`.
fn qlaguerre_semicolon_all(nmax: usize, x: f64, alpha: f64, q: QBase) -> Vec<f64> {
    let qv = q.value();
    let sq = qv.sqrt();
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..nmax {
        let q2n = qv.powi(2 * n as i32);
        let diag = q.pow(alpha + 0.5) * q2n * (1.0 + qv);
        let back = sq * (1.0 - q.pow(2.0 * alpha) * q2n);
        let next = sq * ((2.0 * x - diag) * cur - back * prev) / (1.0 - q2n * qv * qv);
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

/// Continuous big q-Hermite polynomial `H_n(x; a | q) = Q_n(x; a, 0 | q)`.
pub fn big_q_hermite(n: usize, x: f64, a: f64, q: QBase) -> Result<f64> {
    let p = AscParams::new(a, 0.0, q.value())?;
    Ok(alsalam_chihara_q(n, x, &p))
}

/// Orthogonality density of the continuous q-Laguerre polynomials,
/// `(q, a²q^{1/2}; q)_∞ / (2π sin θ) · |(e^{2iθ};q)_∞ / (a e^{iθ}; q^{1/2})_∞|²`
/// with `a = q^{α/2 + 1/4}`.
pub fn qlag_density(theta: f64, alpha: f64, q: QBase) -> Result<f64> {
    open_angle(theta)?;
    check_alpha(alpha)?;
    Ok(qlag_density_times_sin(theta, alpha, q) / theta.sin())
}

fn qlag_density_times_sin(theta: f64, alpha: f64, q: QBase) -> f64 {
    let a = q.pow(alpha / 2.0 + 0.25);
    let c = poch_inf_real(q.value(), q) * poch_inf_real(a * a * q.pow(0.5), q) / (2.0 * PI);
    let den = poch_inf(a * Complex64::from_polar(1.0, theta), q.sqrt()).norm_sqr();
    c * edge_factor(theta, q) / den
}

/// A polynomial family together with its orthogonality measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PolynomialFamily {
    AlSalamChihara(AscParams),
    ContinuousQLaguerre { alpha: f64, q: QBase },
    BigQHermite { a: f64, q: QBase },
}

impl PolynomialFamily {
    /// The underlying Al-Salam--Chihara parameters.
    pub fn asc_params(&self) -> Result<AscParams> {
        match *self {
            PolynomialFamily::AlSalamChihara(p) => Ok(p),
            PolynomialFamily::ContinuousQLaguerre { alpha, q } => qlaguerre_params(alpha, q),
            PolynomialFamily::BigQHermite { a, q } => AscParams::new(a, 0.0, q.value()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolynomialFamily::AlSalamChihara(_) => "al-salam-chihara",
            PolynomialFamily::ContinuousQLaguerre { .. } => "continuous-q-laguerre",
            PolynomialFamily::BigQHermite { .. } => "continuous-big-q-hermite",
        }
    }

    /// Density `dμ/dx(cos θ)`.
    pub fn density(&self, theta: f64) -> Result<f64> {
        open_angle(theta)?;
        Ok(self.density_times_sin(theta)? / theta.sin())
    }

    /// `dμ/dx(cos θ) sin θ`; extended by zero at the endpoints.
    pub fn density_times_sin(&self, theta: f64) -> Result<f64> {
        if theta <= 0.0 || theta >= PI {
            return Ok(0.0);
        }
        Ok(match *self {
            PolynomialFamily::ContinuousQLaguerre { alpha, q } => {
                check_alpha(alpha)?;
                qlag_density_times_sin(theta, alpha, q)
            }
            _ => asc_density_times_sin(theta, &self.asc_params()?),
        })
    }

    /// Orthonormal polynomials `φ_0(2x), …, φ_{nmax}(2x)`.
    pub fn phi_all(&self, nmax: usize, x: f64) -> Result<Vec<f64>> {
        Ok(orthonormal_phi_all(nmax, x, &self.asc_params()?))
    }
}
