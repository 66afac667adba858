//! Double-double evaluation of `G(a;q) - A·H(a, a q^{1/2}) - B·H(a q^{1/2}, a)`.
//!
//! The two `H` terms are individually `|A|·‖H‖ ≈ 1e5` times larger than `G` for
//! moderate `a`, so a double-precision residual is dominated by rounding in the
//! entries. All three matrices and both coefficients are therefore evaluated in
//! double-double arithmetic and the difference is rounded once at the end.

use twofloat::TwoFloat;

use super::matrix::{DenseSymmetricMatrix, Provenance};
use crate::error::{domain, Result};
use crate::qcore::QBase;

type Dd = TwoFloat;

const DD_EPS: f64 = 1e-33;

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

/// `x / y` to double-double accuracy: the library quotient forms its
/// reciprocal residual without a fused multiply-add, so one Newton step on
/// `1/y` restores the low word.
fn div(x: Dd, y: Dd) -> Dd {
    let r0 = dd(1.0 / y.hi());
    let r = r0 + r0 * (dd(1.0) - y * r0);
    x * r
}

/// `(x; base)_n`.
fn poch(x: Dd, base: Dd, n: usize) -> Dd {
    let mut acc = dd(1.0);
    let mut p = dd(1.0);
    for _ in 0..n {
        acc *= dd(1.0) - x * p;
        p *= base;
    }
    acc
}

/// `(x; base)_∞`, stopped once factors differ from 1 by less than `1e-33`.
fn poch_inf(x: Dd, base: Dd) -> Dd {
    let mut acc = dd(1.0);
    let mut t = x;
    while t.abs().hi() > DD_EPS {
        acc *= dd(1.0) - t;
        t *= base;
    }
    acc
}

/// `h_k(a,b) = _0φ_1(-; qb/a; q, q^{2-k}/a^2)` for parameters where every term
/// is positive (`qb/a < 1`).
fn symbol(k: usize, a: Dd, b: Dd, q: Dd) -> Dd {
    let c = div(q * b, a);
    let z = div(q.powi(2), q.powi(k as i32) * a * a);
    let mut term = dd(1.0);
    let mut sum = dd(1.0);
    let mut qn = dd(1.0);
    for _ in 0..100_000 {
        let ratio = div(qn * qn * z, (dd(1.0) - c * qn) * (dd(1.0) - qn * q));
        term *= ratio;
        sum += term;
        qn *= q;
        if ratio.hi() < 1.0 && term.hi() < DD_EPS * sum.hi() {
            break;
        }
    }
    sum
}

fn h_entries(a: Dd, b: Dd, q: Dd, order: usize) -> Vec<Dd> {
    let ab = a * b;
    let w: Vec<Dd> = (0..order)
        .map(|n| {
            let norm = poch(q, q, n) * poch(ab, q, n);
            div((-a).powi(n as i32) * q.powi((n * n.saturating_sub(1) / 2) as i32), norm.sqrt())
        })
        .collect();
    let h: Vec<Dd> = (0..2 * order - 1).map(|k| symbol(k, a, b, q)).collect();
    let mut out = vec![dd(0.0); order * order];
    for m in 0..order {
        for n in 0..order {
            out[m * order + n] = w[m] * h[m + n] * w[n];
        }
    }
    out
}

/// Entrywise residual `G(a;q) - A·H(a, a q^{1/2}) - B·H(a q^{1/2}, a)` computed
/// in double-double arithmetic.
pub fn g_combination_residual(a: f64, q: QBase, order: usize) -> Result<DenseSymmetricMatrix> {
    if !(a.is_finite() && a != 0.0 && a.abs() < 1.0) {
        return domain(format!("a must satisfy 0 < |a| < 1, got {a}"));
    }
    if order == 0 {
        return domain("matrix order must be at least 1");
    }
    let qd = dd(q.value());
    let s2 = qd.sqrt();
    let s4 = s2.sqrt();
    let ad = dd(a);
    let p = poch_inf(div(s4, ad), s2);
    if p.hi() == 0.0 {
        return Err(crate::Error::Pole("(q^{1/4}/a; q^{1/2})_∞ vanishes".into()));
    }
    let coef_a = -div(s4, ad * (dd(1.0) - s2) * p);
    let coef_b = div(dd(1.0), p);

    let h1 = h_entries(ad, ad * s2, qd, order);
    let h2 = h_entries(ad * s2, ad, qd, order);
    let num: Vec<Dd> = (0..2 * order - 1).map(|k| poch(ad * s4, s2, k)).collect();
    let norm: Vec<Dd> = (0..order).map(|n| poch(qd, qd, n) * poch(ad * ad * s2, qd, n)).collect();

    let prov = Provenance::new("g-combination-residual", &[("a", a), ("q", q.value())]);
    DenseSymmetricMatrix::from_upper(order, prov, |m, n| {
        let d = (n - m) as i32;
        let g = div(s4.powi(d * d) * num[m + n], (norm[m] * norm[n]).sqrt());
        let i = m * order + n;
        Ok((g - coef_a * h1[i] - coef_b * h2[i]).hi())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_g, build_h, g_combination_coefficients};
    use crate::polyfam::AscParams;

    #[test]
    fn residual_vanishes_to_double_double_accuracy() {
        let q = QBase::new(0.5).unwrap();
        let r = g_combination_residual(0.5, q, 10).unwrap();
        assert!(r.max_abs() < 1e-20, "{}", r.max_abs());
        let r = g_combination_residual(-0.7, QBase::new(0.3).unwrap(), 8).unwrap();
        assert!(r.max_abs() < 1e-20, "{}", r.max_abs());
    }

    #[test]
    fn agrees_with_double_precision_route() {
        // with a small coefficient the plain double computation is accurate
        let (a, q) = (0.9, QBase::new(0.5).unwrap());
        let (ca, cb) = g_combination_coefficients(a, q);
        let g = build_g(a, q, 6).unwrap();
        let h1 = build_h(&AscParams::new(a, a * q.pow(0.5), 0.5).unwrap(), 6).unwrap();
        let h2 = build_h(&AscParams::new(a * q.pow(0.5), a, 0.5).unwrap(), 6).unwrap();
        let scale = ca.abs() * h1.max_abs() + cb.abs() * h2.max_abs();
        for i in 0..36 {
            let r = g.as_slice()[i] - ca * h1.as_slice()[i] - cb * h2.as_slice()[i];
            assert!(r.abs() < 1e-14 * scale, "{r}");
        }
    }

    #[test]
    fn division_is_double_double_accurate() {
        let x = div(dd(1.0), dd(3.0));
        assert!((x * dd(3.0) - dd(1.0)).hi().abs() < 1e-31);
        let y = div(dd(0.7) * dd(0.3), dd(0.11).sqrt());
        assert!((y * dd(0.11).sqrt() - dd(0.7) * dd(0.3)).hi().abs() < 1e-31);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(g_combination_residual(1.0, QBase::new(0.5).unwrap(), 3).is_err());
        assert!(g_combination_residual(0.5, QBase::new(0.5).unwrap(), 0).is_err());
    }
}
