use num_complex::Complex64;

use super::{negative_q_power_index, ComplexCompensatedSum, QBase, SeriesResult};
use crate::error::{Error, Result};

/// Cancellation ratio (largest term over result) beyond which a sum is
/// flagged as ill-conditioned.
pub const ILL_CONDITIONED_RATIO: f64 = 1e12;

const MAX_TERMS: usize = 100_000;
const MAX_POLE_INDEX: usize = 2_000;

/// The basic hypergeometric series `_pφ_r(num; den; q, z)`.
///
/// The n-th term is
/// `(num;q)_n / (den;q)_n · ((-1)^n q^{n(n-1)/2})^{1+r-p} · z^n / (q;q)_n`,
/// generated by its term ratio. Summation is compensated and stops once the
/// remaining tail, bounded by a geometric series whose ratio dominates every
/// later term ratio, drops below `tol · |partial sum|`.
pub fn basic_hypergeometric(
    num: &[Complex64],
    den: &[Complex64],
    q: QBase,
    z: Complex64,
    tol: f64,
) -> Result<SeriesResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    for b in den {
        if let Some(j) = negative_q_power_index(*b, q, MAX_POLE_INDEX) {
            return Err(Error::Pole(format!("denominator parameter {b} equals q^-{j}")));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    if z == Complex64::new(0.0, 0.0) {
        return Ok(SeriesResult::exact(one, 1));
    }

    // a numerator parameter q^{-j} cuts the series after j+1 terms
    let terminate_at = num.iter().filter_map(|a| negative_q_power_index(*a, q, MAX_POLE_INDEX)).min();

    let p = num.len() as i64;
    let r = den.len() as i64;
    let s = 1 + r - p;
    if terminate_at.is_none() {
        if s < 0 {
            return Err(Error::Divergence(format!("{p}phi{r} with nonzero argument has zero radius")));
        }
        if s == 0 && z.norm() >= 1.0 {
            return Err(Error::Divergence(format!("{p}phi{r} requires |z| < 1, got |z| = {}", z.norm())));
        }
    }

    let qv = q.value();
    let sign = if s.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let num_abs: Vec<f64> = num.iter().map(|a| a.norm()).collect();
    let den_abs: Vec<f64> = den.iter().map(|b| b.norm()).collect();

    let mut sum = ComplexCompensatedSum::new();
    let mut term = one;
    let mut max_term = 0.0f64;
    let mut qn: f64 = 1.0; // q^n
    let mut n = 0usize;
    loop {
        sum.add(term);
        let tnorm = term.norm();
        max_term = max_term.max(tnorm);
        let partial = sum.value().norm();

        if let Some(last) = terminate_at {
            if n == last {
                let rounding = f64::EPSILON * max_term;
                return Ok(finish(sum.value(), rounding, n + 1, tol, max_term));
            }
        } else {
            // bound on |t_{m+1}/t_m| for every m >= n
            let mut rho = z.norm() * qn.powi(s as i32) / (1.0 - qn * qv);
            let mut usable = true;
            for &a in &num_abs {
                rho *= 1.0 + a * qn;
            }
            for &b in &den_abs {
                let d = 1.0 - b * qn;
                if d <= 0.0 {
                    usable = false;
                    break;
                }
                rho /= d;
            }
            if usable && rho < 1.0 {
                let tail = tnorm * rho / (1.0 - rho);
                let floor = f64::EPSILON * max_term;
                if tail <= tol * partial || tail <= floor {
                    return Ok(finish(sum.value(), tail + floor, n + 1, tol, max_term));
                }
            }
        }

        if n + 1 >= MAX_TERMS {
            return Ok(finish(sum.value(), f64::INFINITY, n + 1, tol, max_term));
        }

        let mut ratio = z * sign * qn.powi(s as i32) / (1.0 - qn * qv);
        for a in num {
            ratio *= one - a * qn;
        }
        for b in den {
            let d = one - b * qn;
            if d.norm() == 0.0 {
                return Err(Error::Pole(format!("denominator parameter {b} vanishes at term {n}")));
            }
            ratio /= d;
        }
        term *= ratio;
        qn *= qv;
        n += 1;
        if !term.re.is_finite() || !term.im.is_finite() {
            return Err(Error::Divergence(format!("term {n} overflowed")));
        }
    }
}

fn finish(value: Complex64, err: f64, terms: usize, tol: f64, max_term: f64) -> SeriesResult {
    SeriesResult {
        value,
        abs_error_estimate: err,
        terms_used: terms,
        converged: err <= tol * value.norm().max(1.0),
        max_term,
    }
}

/// `_0φ_1(-; b; q, z)` for real arguments.
pub fn phi01_real(b: f64, q: QBase, z: f64, tol: f64) -> Result<SeriesResult> {
    basic_hypergeometric(&[], &[Complex64::new(b, 0.0)], q, Complex64::new(z, 0.0), tol)
}
