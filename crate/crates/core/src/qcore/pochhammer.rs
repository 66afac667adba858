use num_complex::Complex64;

use super::{QBase, SeriesResult, TIGHT_TOL};

/// Length of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    Infinite,
}

/// The q-Pochhammer symbol `(a;q)_n`.
///
/// Finite orders are evaluated as the plain product. For `n = ∞` the product is
/// truncated at the first `K` with `|a| q^K < tol (1-q)/2`; since
/// `|log(1-x)| <= 2|x|` for `|x| <= 1/2`, the neglected factors change the
/// logarithm by at most `2|a|q^K/(1-q) < tol`, which is what
/// `abs_error_estimate` reports (scaled by `|value|`).
pub fn q_pochhammer(a: Complex64, q: QBase, n: Order, tol: f64) -> SeriesResult {
    match n {
        Order::Finite(n) => SeriesResult::exact(poch(a, q, n), n),
        Order::Infinite => {
            let qv = q.value();
            let tol = if tol > 0.0 { tol.min(1.0) } else { TIGHT_TOL };
            let cutoff = 0.5 * tol * (1.0 - qv);
            let mut prod = Complex64::new(1.0, 0.0);
            let mut aqj = a;
            let mut k = 0usize;
            while aqj.norm() >= cutoff {
                prod *= Complex64::new(1.0, 0.0) - aqj;
                aqj *= qv;
                k += 1;
            }
            let log_bound = 2.0 * aqj.norm() / (1.0 - qv);
            SeriesResult {
                value: prod,
                abs_error_estimate: prod.norm() * log_bound.exp_m1(),
                terms_used: k,
                converged: true,
                max_term: prod.norm(),
            }
        }
    }
}

/// `(a;q)_n` for finite `n`.
pub fn poch(a: Complex64, q: QBase, n: usize) -> Complex64 {
    let qv = q.value();
    (0..n).fold(Complex64::new(1.0, 0.0), |prod, j| prod * (Complex64::new(1.0, 0.0) - a * qv.powi(j as i32)))
}

/// `(a;q)_n` for real `a` and finite `n`.
pub fn poch_real(a: f64, q: QBase, n: usize) -> f64 {
    let qv = q.value();
    (0..n).fold(1.0, |prod, j| prod * (1.0 - a * qv.powi(j as i32)))
}

/// `(a;q)_∞` to full double precision.
pub fn poch_inf(a: Complex64, q: QBase) -> Complex64 {
    q_pochhammer(a, q, Order::Infinite, TIGHT_TOL).value
}

/// `(a;q)_∞` for real `a` to full double precision.
pub fn poch_inf_real(a: f64, q: QBase) -> f64 {
    let qv = q.value();
    let cutoff = 0.5 * TIGHT_TOL * (1.0 - qv);
    let mut prod = 1.0;
    let mut aqj = a;
    while aqj.abs() >= cutoff {
        prod *= 1.0 - aqj;
        aqj *= qv;
    }
    prod
}

/// Symmetric q-number `[alpha]_q = (q^{alpha/2} - q^{-alpha/2}) / (q^{1/2} - q^{-1/2})`.
pub fn q_number(alpha: f64, q: QBase) -> f64 {
    let num = q.pow(alpha / 2.0) - q.pow(-alpha / 2.0);
    let den = q.pow(0.5) - q.pow(-0.5);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn direct_infinite_product(a: f64, q: f64) -> f64 {
        // multiply until the factor deviates from 1 by less than 1e-17
        let mut p = 1.0;
        let mut j = 0;
        loop {
            let t = a * q.powi(j);
            if t.abs() < 1e-17 {
                return p;
            }
            p *= 1.0 - t;
            j += 1;
        }
    }

    #[test]
    fn empty_product_is_one() {
        let q = QBase::new(0.5).unwrap();
        let r = q_pochhammer(c(0.7), q, Order::Finite(0), 1e-12);
        assert_eq!(r.value, c(1.0));
        assert_eq!(r.abs_error_estimate, 0.0);
    }

    #[test]
    fn two_factor_product() {
        let q = QBase::new(0.5).unwrap();
        let r = q_pochhammer(c(0.5), q, Order::Finite(2), 1e-12);
        assert_eq!(r.value.re, 0.375);
    }

    #[test]
    fn infinite_product_half_half() {
        let q = QBase::new(0.5).unwrap();
        let oracle = direct_infinite_product(0.5, 0.5);
        assert!((oracle - 0.2887880951).abs() < 1e-10);
        let r = q_pochhammer(c(0.5), q, Order::Infinite, 1e-12);
        assert!(r.converged);
        assert_relative_eq!(r.value.re, oracle, max_relative = 1e-12);
        assert!(r.abs_error_estimate <= 1e-12 * r.value.norm().max(1.0));
        assert_relative_eq!(poch_inf_real(0.5, q), oracle, max_relative = 1e-15);
    }

    #[test]
    fn q_number_values() {
        for &qv in &[0.1, 0.5, 0.9] {
            let q = QBase::new(qv).unwrap();
            assert_relative_eq!(q_number(1.0, q), 1.0, max_relative = 1e-15);
        }
        let q = QBase::new(0.25).unwrap();
        assert_relative_eq!(q_number(2.0, q), 2.5, max_relative = 1e-14);
        let q = QBase::new(0.999).unwrap();
        assert!((q_number(3.7, q) - 3.7).abs() < 1e-2);
    }

    #[test]
    fn error_estimate_honours_tolerance() {
        for &qv in &[0.1, 0.5, 0.9, 0.99] {
            let q = QBase::new(qv).unwrap();
            for &tol in &[1e-6, 1e-10, 1e-14] {
                let r = q_pochhammer(c(0.8), q, Order::Infinite, tol);
                let exact = poch_inf_real(0.8, q);
                assert!(r.abs_error_estimate <= tol * r.value.norm().max(1.0));
                assert!((r.value.re - exact).abs() <= r.abs_error_estimate + 1e-14);
            }
        }
    }

    proptest! {
        #[test]
        fn finite_step(a in -2.0f64..2.0, qv in 0.05f64..0.95, n in 0usize..50) {
            let q = QBase::new(qv).unwrap();
            let lhs = poch_real(a, q, n + 1);
            let rhs = poch_real(a, q, n) * (1.0 - a * qv.powi(n as i32));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn infinite_splits(a in -0.95f64..0.95, qv in 0.05f64..0.9, n in 0usize..=30) {
            let q = QBase::new(qv).unwrap();
            let whole = poch_inf_real(a, q);
            let split = poch_real(a, q, n) * poch_inf_real(a * qv.powi(n as i32), q);
            prop_assert!((whole - split).abs() <= 1e-12 * whole.abs());
        }
    }
}
