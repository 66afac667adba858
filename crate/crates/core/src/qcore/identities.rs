//! Registry of q-identities checked by evaluating both sides independently.
//!
//! | id  | identity |
//! |-----|----------|
//! | A1  | `_0φ_0(-;-;q,z) = (z;q)_∞` |
//! | A2  | q-Pfaff--Kummer transformation of `_2φ_1` into `_2φ_2` |
//! | A3  | three-term transformation of `_2φ_1` |
//! | A4  | non-terminating q-Vandermonde sum with `b = 0` |
//! | A5  | product identity used for the multiplier `g` |
//! | A6  | reflection `(αq^{-m}, q^{m+1}/α; q)_∞ = (-α)^m q^{-m(m+1)/2} (α, q/α; q)_∞` |
//! | A7  | even/odd split of `(z;q)_∞` into two `_0φ_1` with base `q²` |
//! | A8  | `q^{-k²/2}(aq^{1/2};q)_k = (-a)^k (q^{1/2-k}/a;q)_∞/(q^{1/2}/a;q)_∞` |
//! | A9  | the `A`/`B` combination of two `_0φ_1` giving `q^{-k²/4}(q^{1/4}a;q^{1/2})_k` |
//! | A10 | three-term recurrence of `h_k` |
//! | A11 | q-difference equation of the second Jackson q-Bessel function |

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    basic_hypergeometric, jackson_q_bessel2, phi01_real, poch_inf, poch_inf_real, poch_real, QBase, SeriesResult,
    TIGHT_TOL,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::A1,
        IdentityId::A2,
        IdentityId::A3,
        IdentityId::A4,
        IdentityId::A5,
        IdentityId::A6,
        IdentityId::A7,
        IdentityId::A8,
        IdentityId::A9,
        IdentityId::A10,
        IdentityId::A11,
    ];

    pub fn description(self) -> &'static str {
        match self {
            IdentityId::A1 => "q-exponential: 0phi0(-;-;q,z) = (z;q)_inf",
            IdentityId::A2 => "q-Pfaff-Kummer transformation",
            IdentityId::A3 => "three-term 2phi1 transformation",
            IdentityId::A4 => "non-terminating q-Vandermonde, b = 0",
            IdentityId::A5 => "product identity behind the multiplier g",
            IdentityId::A6 => "q-Pochhammer reflection",
            IdentityId::A7 => "even/odd split of the q-exponential",
            IdentityId::A8 => "finite/infinite Pochhammer rewriting",
            IdentityId::A9 => "A/B combination of two 0phi1",
            IdentityId::A10 => "three-term recurrence of h_k",
            IdentityId::A11 => "q-difference equation of J_nu(x;q)",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown identity {s}")))
    }
}

/// Named real parameters of an identity instance. `q` is always present.
pub type IdentityParams = BTreeMap<String, f64>;

/// Outcome of evaluating one identity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCase {
    pub identity_id: IdentityId,
    pub parameters: IdentityParams,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, |lhs|, |rhs|)`
    pub residual: f64,
}

fn get(params: &IdentityParams, name: &str) -> Result<f64> {
    params.get(name).copied().ok_or_else(|| Error::Domain(format!("missing parameter {name}")))
}

fn get_index(params: &IdentityParams, name: &str) -> Result<i64> {
    let v = get(params, name)?;
    if v.fract() != 0.0 {
        return Err(Error::Domain(format!("{name} must be an integer, got {v}")));
    }
    Ok(v as i64)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Distance of `x` from the set `{q^j : j ∈ ℤ}` measured as `min_j |1 - x q^{-j}|`.
/// Small values mean some factor `1 - x q^{k}` is nearly zero.
fn q_lattice_gap(x: f64, q: QBase) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let t = x.ln() / q.value().ln();
    let j = t.round();
    (1.0 - x * q.pow(-j)).abs()
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

fn rel_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

fn complex_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm())
}

/// Evaluates identity `id` at `params`, computing each side through its own
/// code path, and returns the relative residual.
pub fn verify_identity(id: IdentityId, params: &IdentityParams, tol: f64) -> Result<IdentityCase> {
    let q = QBase::new(get(params, "q")?)?;
    let qv = q.value();
    let series_tol = tol.clamp(TIGHT_TOL, 1e-14);
    let phi = |num: &[Complex64], den: &[Complex64], z: Complex64| -> Result<Complex64> {
        basic_hypergeometric(num, den, q, z, series_tol).map(|r| r.value)
    };

    let (lhs, rhs, residual) = match id {
        IdentityId::A1 => {
            let z = Complex64::new(get(params, "z")?, params.get("z_im").copied().unwrap_or(0.0));
            let l = phi(&[], &[], z)?;
            let r = poch_inf(z, q);
            (l, r, complex_residual(l, r))
        }
        IdentityId::A2 => {
            let (a, b, cc, z) = (get(params, "a")?, get(params, "b")?, get(params, "c")?, get(params, "z")?);
            require(z.abs() < 1.0, || format!("A2 needs |z| < 1, got {z}"))?;
            require(b != 0.0, || "A2 needs b != 0".into())?;
            let l = phi(&[c(a), c(b)], &[c(cc)], c(z))?;
            let r = poch_inf(c(a * z), q) / poch_inf(c(z), q) * phi(&[c(a), c(cc / b)], &[c(cc), c(a * z)], c(b * z))?;
            (l, r, complex_residual(l, r))
        }
        IdentityId::A3 => {
            let (a, b, cc, z) = (get(params, "a")?, get(params, "b")?, get(params, "c")?, get(params, "z")?);
            require(z.abs() < 1.0 && z != 0.0, || format!("A3 needs 0 < |z| < 1, got {z}"))?;
            require((b * qv / cc).abs() < 1.0, || "A3 needs |bq/c| < 1".into())?;
            require(a != 0.0 && b != 0.0 && cc != 0.0, || "A3 needs a, b, c nonzero".into())?;
            let l = phi(&[c(a), c(b)], &[c(cc)], c(z))?;
            let pinf = |x: f64| poch_inf_real(x, q);
            let first = pinf(a * b * z / cc) * pinf(qv / cc) / (pinf(a * z / cc) * pinf(qv / a))
                * phi(&[c(cc / a), c(cc * qv / (a * b * z))], &[c(cc * qv / (a * z))], c(b * qv / cc))?;
            let second = qv / (a * z) * (pinf(b) * pinf(cc / a) * pinf(a * z / qv) * pinf(qv * qv / (a * z)))
                / (pinf(cc) * pinf(qv / a) * pinf(cc / (a * z)) * pinf(z))
                * phi(&[c(qv / b), c(z)], &[c(a * qv * z / cc)], c(b * qv / cc))?;
            let r = first - second;
            (l, r, complex_residual(l, r))
        }
        IdentityId::A4 => {
            let (a, cc) = (get(params, "a")?, get(params, "c")?);
            require(q_lattice_gap(cc, q) > 1e-6, || format!("A4 needs c off the q-lattice, got {cc}"))?;
            let l = poch_inf_real(a * qv / cc, q) / poch_inf_real(qv / cc, q) * phi(&[c(a), c(0.0)], &[c(cc)], c(qv))?
                + poch_inf_real(a, q) / poch_inf_real(cc / qv, q)
                    * phi(&[c(a * qv / cc), c(0.0)], &[c(qv * qv / cc)], c(qv))?;
            let r = c(1.0);
            (l, r, complex_residual(l, r))
        }
        IdentityId::A5 => {
            let (a, theta) = (get(params, "a")?, get(params, "theta")?);
            require(a != 0.0 && a.abs() < 1.0, || format!("A5 needs 0 < |a| < 1, got {a}"))?;
            let e = Complex64::from_polar(1.0, theta);
            let eb = e.conj();
            let (sq, q4) = (qv.sqrt(), qv.powf(0.25));
            let p = |x: Complex64| poch_inf(x, q);
            let l = p(a * sq * e) * p(a * sq * eb) * p(sq * e / a) * p(sq * eb / a)
                - q4 / a * p(a * e) * p(a * eb) * p(qv * e / a) * p(qv * eb / a);
            // right side regrouped as products in base q^{1/2}
            let h = q.sqrt();
            let ph = |x: Complex64| poch_inf(x, h);
            let r = p(c(sq)) * p(c(sq)) * ph(c(a * q4)) * ph(c(q4 / a)) * ph(-q4 * e) * ph(-q4 * eb);
            (l, r, complex_residual(l, r))
        }
        IdentityId::A6 => {
            let (alpha, m) = (get(params, "alpha")?, get_index(params, "m")?);
            require(alpha != 0.0, || "A6 needs alpha != 0".into())?;
            require(m >= 0, || format!("A6 needs m >= 0, got {m}"))?;
            let mi = m as i32;
            let l = poch_inf_real(alpha * q.powi(-mi), q) * poch_inf_real(q.powi(mi + 1) / alpha, q);
            let r = (-alpha).powi(mi)
                * q.pow(-(m * (m + 1)) as f64 / 2.0)
                * poch_inf_real(alpha, q)
                * poch_inf_real(qv / alpha, q);
            (c(l), c(r), rel_residual(l, r))
        }
        IdentityId::A7 => {
            let z = get(params, "z")?;
            let q2 = q.squared();
            let l = -z / (1.0 - qv) * phi01_real(qv.powi(3), q2, qv.powi(3) * z * z, series_tol)?.value.re
                + phi01_real(qv, q2, qv * z * z, series_tol)?.value.re;
            let r = poch_inf_real(z, q);
            (c(l), c(r), rel_residual(l, r))
        }
        IdentityId::A8 => {
            let (a, k) = (get(params, "a")?, get_index(params, "k")?);
            require(a != 0.0, || "A8 needs a != 0".into())?;
            require(k >= 0, || format!("A8 needs k >= 0, got {k}"))?;
            require(q_lattice_gap(qv.sqrt() / a, q) > 1e-6, || "A8 needs q^(1/2)/a off the q-lattice".into())?;
            let ki = k as i32;
            let kf = k as f64;
            let l = q.pow(-kf * kf / 2.0) * poch_real(a * qv.sqrt(), q, k as usize);
            let r = poch_inf_real(q.pow(0.5 - kf) / a, q) / poch_inf_real(qv.sqrt() / a, q) * (-a).powi(ki);
            (c(l), c(r), rel_residual(l, r))
        }
        IdentityId::A9 => {
            let (a, k) = (get(params, "a")?, get_index(params, "k")?);
            require(a != 0.0 && a.abs() < 1.0, || format!("A9 needs 0 < |a| < 1, got {a}"))?;
            require(k >= 0, || format!("A9 needs k >= 0, got {k}"))?;
            let h = q.sqrt();
            require(q_lattice_gap(qv.powf(0.25) / a, h) > 1e-6, || {
                "A9 needs q^(1/4)/a off the q^(1/2)-lattice".into()
            })?;
            let (a_coef, b_coef) = lin_comb_coefficients(a, q);
            let ki = k as i32;
            let kf = k as f64;
            let t1 = a_coef
                * (-a / qv.sqrt()).powi(ki)
                * phi01_real(qv.powf(1.5), q, q.pow(2.0 - kf) / (a * a), series_tol)?.value.re;
            let t2 = b_coef * (-a).powi(ki) * phi01_real(qv.sqrt(), q, q.pow(1.0 - kf) / (a * a), series_tol)?.value.re;
            let l = t1 + t2;
            let r = q.pow(-kf * kf / 4.0) * poch_real(qv.powf(0.25) * a, h, k as usize);
            (c(l), c(r), rel_residual(l, r))
        }
        IdentityId::A10 => {
            let (a, b, k) = (get(params, "a")?, get(params, "b")?, get_index(params, "k")?);
            require(a != 0.0 && a.abs() < 1.0 && b.abs() < 1.0, || "A10 needs 0 < |a| < 1, |b| < 1".into())?;
            let kf = k as f64;
            let h = |j: f64| -> Result<f64> {
                Ok(phi01_real(qv * b / a, q, q.pow(2.0 - j) / (a * a), series_tol)?.value.re)
            };
            let l = a * a * h(kf + 1.0)?;
            let r = a * (a + b) * h(kf)? - (a * b - q.pow(1.0 - kf)) * h(kf - 1.0)?;
            (c(l), c(r), rel_residual(l, r))
        }
        IdentityId::A11 => {
            let (nu, x) = (get(params, "nu")?, get(params, "x")?);
            require(x >= 0.0, || format!("A11 needs x >= 0, got {x}"))?;
            let sq = qv.sqrt();
            let l = jackson_q_bessel2(nu, x / sq, q)? + (1.0 + x * x / 4.0) * jackson_q_bessel2(nu, sq * x, q)?;
            let r = (q.pow(-nu / 2.0) + q.pow(nu / 2.0)) * jackson_q_bessel2(nu, x, q)?;
            (c(l), c(r), rel_residual(l, r))
        }
    };

    if !residual.is_finite() {
        return Err(Error::IllConditioned(format!("{id} residual is not finite at {params:?}")));
    }
    Ok(IdentityCase { identity_id: id, parameters: params.clone(), lhs: lhs.re, rhs: rhs.re, residual })
}

/// Coefficients `A`, `B` with `G(a;q) = A·H(a, a q^{1/2}) + B·H(a q^{1/2}, a)`.
pub(crate) fn lin_comb_coefficients(a: f64, q: QBase) -> (f64, f64) {
    let qv = q.value();
    let p = poch_inf_real(qv.powf(0.25) / a, q.sqrt());
    let a_coef = -qv.powf(0.25) / (a * (1.0 - qv.sqrt()) * p);
    (a_coef, 1.0 / p)
}

fn signed_magnitude<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Draws a parameter point inside the validity domain of `id`.
///
/// When `q` is `None` the base is drawn from `[0.15, 0.85]`. Points where a
/// product or series parameter comes within `1e-3` of a pole are rejected, and
/// for the two-term identities (A3, A4, A5, A9) so are points where the summands
/// (including those inside each series) cancel by more than a factor `1e4`,
/// which is where double precision stops resolving the `1e-10` residual target.
pub fn sample_identity_params<R: Rng>(id: IdentityId, q: Option<QBase>, rng: &mut R) -> IdentityParams {
    loop {
        let qv = match q {
            Some(q) => q.value(),
            None => rng.gen_range(0.15..0.85),
        };
        let qb = QBase::new(qv).expect("q in (0,1)");
        let mut p = IdentityParams::new();
        p.insert("q".into(), qv);
        let ok = match id {
            IdentityId::A1 => {
                p.insert("z".into(), rng.gen_range(-2.0..2.0));
                p.insert("z_im".into(), rng.gen_range(-1.0..1.0));
                true
            }
            IdentityId::A2 => {
                p.insert("a".into(), rng.gen_range(-0.9..0.9));
                p.insert("b".into(), signed_magnitude(rng, 0.05, 0.9));
                p.insert("c".into(), rng.gen_range(-0.9..0.9));
                p.insert("z".into(), rng.gen_range(-0.9..0.9));
                true
            }
            IdentityId::A3 => {
                let a = signed_magnitude(rng, 0.1, 0.9);
                let b = signed_magnitude(rng, 0.05, 0.9);
                let cc = signed_magnitude(rng, 0.2, 0.95);
                let z = signed_magnitude(rng, 0.1, 0.9);
                p.insert("a".into(), a);
                p.insert("b".into(), b);
                p.insert("c".into(), cc);
                p.insert("z".into(), z);
                let dens = [a * z / cc, qv / a, cc, cc / (a * z), z, cc * qv / (a * z), a * qv * z / cc];
                (b * qv / cc).abs() < 0.9 && dens.iter().all(|&x| q_lattice_gap(x, qb) > 1e-3)
            }
            IdentityId::A4 => {
                p.insert("a".into(), rng.gen_range(-0.9..0.9));
                let cc = if rng.gen_bool(0.5) { rng.gen_range(0.05..3.0) } else { -rng.gen_range(0.05..3.0) };
                p.insert("c".into(), cc);
                q_lattice_gap(cc, qb) > 1e-3
            }
            IdentityId::A5 => {
                p.insert("a".into(), signed_magnitude(rng, 0.1, 0.95));
                p.insert("theta".into(), rng.gen_range(0.05..PI - 0.05));
                true
            }
            IdentityId::A6 => {
                let alpha = signed_magnitude(rng, 0.1, 2.0);
                p.insert("alpha".into(), alpha);
                p.insert("m".into(), rng.gen_range(0..=15) as f64);
                q_lattice_gap(alpha, qb) > 1e-3
            }
            IdentityId::A7 => {
                p.insert("z".into(), rng.gen_range(-2.0..2.0));
                true
            }
            IdentityId::A8 => {
                let a = signed_magnitude(rng, 0.1, 0.95);
                p.insert("a".into(), a);
                p.insert("k".into(), rng.gen_range(0..=12) as f64);
                q_lattice_gap(qv.sqrt() / a, qb) > 1e-3
            }
            IdentityId::A9 => {
                let a = signed_magnitude(rng, 0.1, 0.95);
                p.insert("a".into(), a);
                p.insert("k".into(), rng.gen_range(0..=10) as f64);
                q_lattice_gap(qv.powf(0.25) / a, qb.sqrt()) > 1e-3
            }
            IdentityId::A10 => {
                let a = signed_magnitude(rng, 0.1, 0.95);
                let b = rng.gen_range(-0.9..0.9);
                p.insert("a".into(), a);
                p.insert("b".into(), b);
                p.insert("k".into(), rng.gen_range(-5..=10) as f64);
                q_lattice_gap(qv * b / a, qb) > 1e-3
            }
            IdentityId::A11 => {
                p.insert("nu".into(), rng.gen_range(-0.9..3.0));
                p.insert("x".into(), rng.gen_range(0.05..3.0));
                true
            }
        };
        if ok && well_conditioned(id, &p) {
            return p;
        }
    }
}

/// Cancellation guard for the identities whose computed side is a difference
/// of two terms.
fn well_conditioned(id: IdentityId, p: &IdentityParams) -> bool {
    const MAX_CANCELLATION: f64 = 1e4;
    let terms = match two_term_magnitudes(id, p) {
        Some(t) => t,
        None => return true,
    };
    match terms {
        Ok((t1, t2, total)) => (t1 + t2) <= MAX_CANCELLATION * total.abs().max(1.0),
        Err(_) => false,
    }
}

/// For the identities with a two-term side, returns the magnitudes
/// `|prefactor| · (largest series term)` of both terms and their signed sum.
fn two_term_magnitudes(id: IdentityId, p: &IdentityParams) -> Option<Result<(f64, f64, f64)>> {
    let q = QBase::new(p["q"]).ok()?;
    let qv = q.value();
    let tol = 1e-14;
    let phi = |num: &[Complex64], den: &[Complex64], z: f64| basic_hypergeometric(num, den, q, c(z), tol);
    // (signed value, magnitude bound)
    let term = |pre: f64, s: SeriesResult| (pre * s.value.re, pre.abs() * s.max_term.max(s.value.norm()));
    match id {
        IdentityId::A3 => Some((|| {
            let (a, b, cc, z) = (p["a"], p["b"], p["c"], p["z"]);
            let pinf = |x: f64| poch_inf_real(x, q);
            let (v1, m1) = term(
                pinf(a * b * z / cc) * pinf(qv / cc) / (pinf(a * z / cc) * pinf(qv / a)),
                phi(&[c(cc / a), c(cc * qv / (a * b * z))], &[c(cc * qv / (a * z))], b * qv / cc)?,
            );
            let (v2, m2) = term(
                qv / (a * z) * (pinf(b) * pinf(cc / a) * pinf(a * z / qv) * pinf(qv * qv / (a * z)))
                    / (pinf(cc) * pinf(qv / a) * pinf(cc / (a * z)) * pinf(z)),
                phi(&[c(qv / b), c(z)], &[c(a * qv * z / cc)], b * qv / cc)?,
            );
            Ok((m1, m2, v1 - v2))
        })()),
        IdentityId::A4 => Some((|| {
            let (a, cc) = (p["a"], p["c"]);
            let (v1, m1) =
                term(poch_inf_real(a * qv / cc, q) / poch_inf_real(qv / cc, q), phi(&[c(a), c(0.0)], &[c(cc)], qv)?);
            let (v2, m2) = term(
                poch_inf_real(a, q) / poch_inf_real(cc / qv, q),
                phi(&[c(a * qv / cc), c(0.0)], &[c(qv * qv / cc)], qv)?,
            );
            Ok((m1, m2, v1 + v2))
        })()),
        IdentityId::A5 => {
            let (a, theta) = (p["a"], p["theta"]);
            let e = Complex64::from_polar(1.0, theta);
            let eb = e.conj();
            let sq = qv.sqrt();
            let pr = |x: Complex64| poch_inf(x, q);
            let t1 = pr(a * sq * e) * pr(a * sq * eb) * pr(sq * e / a) * pr(sq * eb / a);
            let t2 = qv.powf(0.25) / a * pr(a * e) * pr(a * eb) * pr(qv * e / a) * pr(qv * eb / a);
            Some(Ok((t1.norm(), t2.norm(), (t1 - t2).re)))
        }
        IdentityId::A9 => Some((|| {
            let (a, k) = (p["a"], p["k"]);
            let (a_coef, b_coef) = lin_comb_coefficients(a, q);
            let ki = k as i32;
            let (v1, m1) =
                term(a_coef * (-a / qv.sqrt()).powi(ki), phi01_real(qv.powf(1.5), q, q.pow(2.0 - k) / (a * a), tol)?);
            let (v2, m2) = term(b_coef * (-a).powi(ki), phi01_real(qv.sqrt(), q, q.pow(1.0 - k) / (a * a), tol)?);
            Ok((m1, m2, v1 + v2))
        })()),
        _ => None,
    }
}
