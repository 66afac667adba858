use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::{DenseSymmetricMatrix, JacobiSpec, Provenance};
use crate::error::{domain, Error, Result};
use crate::polyfam::AscParams;
use crate::qcore::{phi01_real, CompensatedSum, QBase, SeriesResult, ILL_CONDITIONED_RATIO};

/// Relative tolerance used when evaluating Hankel symbols.
const SYMBOL_TOL: f64 = 1e-15;

/// Relative agreement required between series and recurrence on the overlap
/// window before the recurrence is trusted.
const CROSS_CHECK_TOL: f64 = 1e-9;

/// How the Hankel symbol `h_k` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HankelStrategy {
    /// Direct `_0φ_1` summation.
    Series,
    /// Forward three-term recurrence seeded by the series at `k = 1, 2`.
    Recurrence,
    /// Series for `k <= 2`, recurrence above, validated on `k ∈ {3, 4}`.
    Auto,
}

impl std::str::FromStr for HankelStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(HankelStrategy::Series),
            "recurrence" => Ok(HankelStrategy::Recurrence),
            "auto" => Ok(HankelStrategy::Auto),
            _ => domain(format!("unknown strategy {s:?}")),
        }
    }
}

fn asc_provenance(family: &str, p: &AscParams) -> Provenance {
    Provenance::new(family, &[("a", p.a), ("b", p.b), ("q", p.q.value())])
}

/// Weight `w_n = (-a)^n q^{n(n-1)/2} / sqrt((q,ab;q)_n)`.
pub fn hankel_weight_w(n: usize, p: &AscParams) -> f64 {
    let e = (n * n.saturating_sub(1)) as f64 / 2.0;
    (-p.a).powi(n as i32) * p.q.pow(e) / p.norm(n).sqrt()
}

fn series_h(k: i64, p: &AscParams) -> Result<f64> {
    let q = p.q;
    let z = q.pow((2 - k) as f64) / (p.a * p.a);
    let r = phi01_real(q.value() * p.b / p.a, q, z, SYMBOL_TOL)?;
    let v = r.real()?;
    if !v.is_finite() || !r.max_term.is_finite() {
        return Err(Error::IllConditioned(format!("h_{k} overflows double precision")));
    }
    if r.is_ill_conditioned() {
        return Err(Error::IllConditioned(format!("h_{k} series cancels by {:.1e}", r.cancellation_ratio())));
    }
    Ok(v)
}

/// One forward step: `h_{k+1}` from `h_{k-1}`, `h_k`.
fn recurrence_step(k: i64, h_prev: f64, h_cur: f64, p: &AscParams) -> f64 {
    let (a, b) = (p.a, p.b);
    (a * (a + b) * h_cur - (a * b - p.q.pow((1 - k) as f64)) * h_prev) / (a * a)
}

fn recurrence_from(kmax: usize, h1: f64, h2: f64, h0: f64, p: &AscParams) -> Vec<f64> {
    let mut h = vec![h0, h1, h2];
    h.truncate(kmax + 1);
    for k in 2..kmax {
        let next = recurrence_step(k as i64, h[k - 1], h[k], p);
        h.push(next);
    }
    h
}

fn relative_gap(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

/// Hankel symbols `h_0, …, h_{kmax}` with
/// `h_k = _0φ_1(-; qb/a; q, q^{2-k}/a^2)`.
///
/// These grow like `q^{-k^2/4}`; past `k ≈ 2 sqrt(1074 / |log2 q|)` they overflow,
/// which is why matrix assembly uses [`hankel_symbols_scaled`].
pub fn hankel_symbols(kmax: usize, p: &AscParams, strategy: HankelStrategy) -> Result<Vec<f64>> {
    let seeds = || -> Result<(f64, f64, f64)> {
        Ok((series_h(0, p)?, series_h(1, p)?, if kmax >= 2 { series_h(2, p)? } else { 0.0 }))
    };
    let out = match strategy {
        HankelStrategy::Series => (0..=kmax as i64).map(|k| series_h(k, p)).collect::<Result<Vec<_>>>()?,
        HankelStrategy::Recurrence => {
            let (h0, h1, h2) = seeds()?;
            recurrence_from(kmax, h1, h2, h0, p)
        }
        HankelStrategy::Auto => {
            let (h0, h1, h2) = seeds()?;
            let rec = recurrence_from(kmax.max(4), h1, h2, h0, p);
            let agrees = (3..=4).all(|k| match series_h(k as i64, p) {
                Ok(s) => relative_gap(s, rec[k]) <= CROSS_CHECK_TOL,
                Err(_) => true,
            });
            if agrees {
                rec[..=kmax].to_vec()
            } else {
                (0..=kmax as i64).map(|k| series_h(k, p)).collect::<Result<Vec<_>>>()?
            }
        }
    };
    if let Some(k) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::IllConditioned(format!("h_{k} overflows double precision")));
    }
    Ok(out)
}

/// Single Hankel symbol `h_k` for any integer `k`; negative `k` always uses the
/// series, whose argument is then small.
pub fn hankel_symbol_h(k: i64, p: &AscParams, strategy: HankelStrategy) -> Result<f64> {
    if k < 0 {
        series_h(k, p)
    } else {
        Ok(hankel_symbols(k as usize, p, strategy)?[k as usize])
    }
}

/// Scaled symbol `ĥ_k = (-a)^k q^{k^2/4 - k/2} h_k`, summed in the log domain.
///
/// Term `n` has magnitude `|a|^{k-2n} q^{j^2+j} / |(qb/a;q)_n (q;q)_n|` with
/// `j = n - k/2`, so the summands stay bounded for every `k`.
pub fn hankel_symbol_scaled(k: usize, p: &AscParams) -> Result<SeriesResult> {
    let q = p.q.value();
    let lnq = q.ln();
    let la = p.a.abs().ln();
    let c = q * p.b / p.a;
    let sign0 = if k % 2 == 1 && p.a > 0.0 { -1.0 } else { 1.0 };
    let half_k = k as f64 / 2.0;

    let mut sum = CompensatedSum::new();
    let mut abs_sum = 0.0;
    let mut max_term: f64 = 0.0;
    // log |(c;q)_n (q;q)_n| and its sign
    let mut log_den = 0.0;
    let mut den_sign = 1.0;
    let mut qn = 1.0;
    for n in 0..(k + 200_000) {
        let j = n as f64 - half_k;
        let log_mag = (k as f64 - 2.0 * n as f64) * la + (j * j + j) * lnq - log_den;
        let term = sign0 * den_sign * log_mag.exp();
        sum.add(term);
        abs_sum += term.abs();
        max_term = max_term.max(term.abs());

        // bound on all later term ratios
        let cq = c * qn;
        let f1 = 1.0 - cq;
        let f2 = 1.0 - qn * q;
        if cq < 1.0 && j + 1.0 > 0.0 {
            let rho = ((2.0 * j + 2.0) * lnq - 2.0 * la).exp() / ((1.0 - cq.max(0.0)) * f2);
            if rho < 1.0 {
                let tail = term.abs() * rho / (1.0 - rho);
                let v = sum.value();
                if tail <= SYMBOL_TOL * v.abs() || tail <= f64::EPSILON * max_term {
                    let result = SeriesResult {
                        value: num_complex::Complex64::new(v, 0.0),
                        abs_error_estimate: tail + f64::EPSILON * abs_sum,
                        terms_used: n + 1,
                        converged: true,
                        max_term,
                    };
                    return Ok(result);
                }
            }
        }
        log_den += f1.abs().ln() + f2.ln();
        if f1 < 0.0 {
            den_sign = -den_sign;
        }
        qn *= q;
    }
    Err(Error::Convergence(format!("scaled h_{k} did not converge")))
}

/// `ĥ_0, …, ĥ_{kmax}`. Each value is an independent series; a value whose
/// series cancels beyond the conditioning limit is replaced by the scaled
/// recurrence `ĥ_{k+1} = -(a+b) q^{(2k-1)/4} ĥ_k + (1 - ab q^{k-1}) ĥ_{k-1}`.
pub fn hankel_symbols_scaled(kmax: usize, p: &AscParams) -> Result<Vec<f64>> {
    let raw: Vec<SeriesResult> =
        (0..=kmax).into_par_iter().map(|k| hankel_symbol_scaled(k, p)).collect::<Result<Vec<_>>>()?;
    let mut out: Vec<f64> = Vec::with_capacity(kmax + 1);
    for (k, r) in raw.iter().enumerate() {
        if r.cancellation_ratio() <= ILL_CONDITIONED_RATIO {
            out.push(r.value.re);
        } else if k >= 2 {
            let km = (k - 1) as f64;
            let next = -(p.a + p.b) * p.q.pow((2.0 * km - 1.0) / 4.0) * out[k - 1]
                + (1.0 - p.a * p.b * p.q.pow(km - 1.0)) * out[k - 2];
            out.push(next);
        } else {
            return Err(Error::IllConditioned(format!("scaled h_{k} cancels by {:.1e}", r.cancellation_ratio())));
        }
    }
    Ok(out)
}

fn norms(p: &AscParams, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 1.0;
    for k in 0..n {
        out.push(acc);
        let a = p.alpha(k);
        acc *= a * a;
    }
    out
}

/// Truncation of `H(a,b)`, `H_{m,n} = w_m h_{m+n} w_n`, assembled from the
/// scaled symbols as `ĥ_{m+n} q^{(m-n)^2/4} / sqrt((q,ab;q)_m (q,ab;q)_n)`.
pub fn build_h(p: &AscParams, order: usize) -> Result<DenseSymmetricMatrix> {
    if order == 0 {
        return domain("matrix order must be at least 1");
    }
    let hs = hankel_symbols_scaled(2 * order - 2, p)?;
    let nm = norms(p, order);
    DenseSymmetricMatrix::from_upper(order, asc_provenance("asc", p), |m, n| {
        let d = (n - m) as f64;
        Ok(hs[m + n] * p.q.pow(d * d / 4.0) / (nm[m] * nm[n]).sqrt())
    })
}

/// Truncation of `H(a,b)` from unscaled symbols `w_m h_{m+n} w_n` with the given
/// strategy; limited to orders where `h_{2N-2}` fits in double precision.
pub fn build_h_with(p: &AscParams, order: usize, strategy: HankelStrategy) -> Result<DenseSymmetricMatrix> {
    if order == 0 {
        return domain("matrix order must be at least 1");
    }
    let hs = hankel_symbols(2 * order - 2, p, strategy)?;
    let w: Vec<f64> = (0..order).map(|n| hankel_weight_w(n, p)).collect();
    DenseSymmetricMatrix::from_upper(order, asc_provenance("asc", p), |m, n| Ok(w[m] * hs[m + n] * w[n]))
}

/// Jacobi generator of `J(a,b)`.
pub fn asc_jacobi_spec(p: &AscParams, order: usize) -> Result<JacobiSpec> {
    for n in 0..order {
        let r = (1.0 - p.q.powi(n as i32 + 1)) * (1.0 - p.a * p.b * p.q.powi(n as i32));
        if r <= 0.0 {
            return domain(format!("J(a,b) radicand at n={n} is {r}"));
        }
    }
    JacobiSpec::from_fn(order, |n| p.beta(n), |n| p.alpha(n))
}

/// Truncation of `J(a,b)`: `β_n = (a+b) q^n`, `α_n = sqrt((1-q^{n+1})(1-ab q^n))`.
pub fn build_j(p: &AscParams, order: usize) -> Result<DenseSymmetricMatrix> {
    asc_jacobi_spec(p, order)?.to_matrix(asc_provenance("asc-jacobi", p))
}

/// Running products `(x;q)_0, …, (x;q)_{n-1}`.
fn poch_prefix(x: f64, q: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 1.0;
    for k in 0..n {
        out.push(acc);
        acc *= 1.0 - x * q.powi(k as i32);
    }
    out
}

/// Truncation of `G(a;q)`,
/// `G_{m,n} = q^{(m-n)^2/4} (a q^{1/4}; q^{1/2})_{m+n} / sqrt((q, a^2 q^{1/2}; q)_m (q, a^2 q^{1/2}; q)_n)`.
pub fn build_g(a: f64, q: QBase, order: usize) -> Result<DenseSymmetricMatrix> {
    if !(a.is_finite() && a != 0.0 && a.abs() < 1.0) {
        return domain(format!("a must satisfy 0 < |a| < 1, got {a}"));
    }
    if order == 0 {
        return domain("matrix order must be at least 1");
    }
    let qv = q.value();
    let num = poch_prefix(a * qv.powf(0.25), qv.sqrt(), 2 * order - 1);
    let n1 = poch_prefix(qv, qv, order);
    let n2 = poch_prefix(a * a * qv.sqrt(), qv, order);
    let prov = Provenance::new("g", &[("a", a), ("q", qv)]);
    DenseSymmetricMatrix::from_upper(order, prov, |m, n| {
        let d = (n - m) as f64;
        Ok(q.pow(d * d / 4.0) * num[m + n] / (n1[m] * n2[m] * n1[n] * n2[n]).sqrt())
    })
}

/// Coefficients `(A, B)` of `G(a;q) = A·H(a, a q^{1/2}) + B·H(a q^{1/2}, a)`.
pub fn g_combination_coefficients(a: f64, q: QBase) -> (f64, f64) {
    crate::qcore::lin_comb_coefficients(a, q)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -1.0 {
        Ok(())
    } else {
        domain(format!("alpha must exceed -1, got {alpha}"))
    }
}

/// Truncation of `H~(α;q)`,
/// `H~_{m,n} = q^{(m-n)^2/2} (q^{α+1};q)_{m+n} / sqrt((q^2, q^{2α+2}; q^2)_m (q^2, q^{2α+2}; q^2)_n)`.
pub fn build_tilde_h(alpha: f64, q: QBase, order: usize) -> Result<DenseSymmetricMatrix> {
    check_alpha(alpha)?;
    if order == 0 {
        return domain("matrix order must be at least 1");
    }
    let qv = q.value();
    let q2 = qv * qv;
    let num = poch_prefix(q.pow(alpha + 1.0), qv, 2 * order - 1);
    let n1 = poch_prefix(q2, q2, order);
    let n2 = poch_prefix(q.pow(2.0 * alpha + 2.0), q2, order);
    let prov = Provenance::new("tildeh", &[("alpha", alpha), ("q", qv)]);
    DenseSymmetricMatrix::from_upper(order, prov, |m, n| {
        let d = (n - m) as f64;
        Ok(q.pow(d * d / 2.0) * num[m + n] / (n1[m] * n2[m] * n1[n] * n2[n]).sqrt())
    })
}

/// Entry of `H(a,b)` straight from the closed form with an independent series
/// call; used as an oracle.
#[cfg(test)]
fn h_entry_direct(m: usize, n: usize, p: &AscParams) -> Result<f64> {
    use crate::qcore::poch_real;
    let k = (m + n) as i64;
    let s = series_h(k, p)?;
    let e = (m * m.saturating_sub(1) + n * n.saturating_sub(1)) as f64 / 2.0;
    let norm = poch_real(p.q.value(), p.q, m)
        * poch_real(p.a * p.b, p.q, m)
        * poch_real(p.q.value(), p.q, n)
        * poch_real(p.a * p.b, p.q, n);
    Ok((-p.a).powi(k as i32) * p.q.pow(e) / norm.sqrt() * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::poch_inf_real;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn asc(a: f64, b: f64, q: f64) -> AscParams {
        AscParams::new(a, b, q).unwrap()
    }

    fn q(v: f64) -> QBase {
        QBase::new(v).unwrap()
    }

    #[test]
    fn weights() {
        let p = asc(0.4, 0.2, 0.5);
        assert_eq!(hankel_weight_w(0, &p), 1.0);
        assert_relative_eq!(
            hankel_weight_w(1, &p),
            -0.4 / ((1.0 - 0.5) * (1.0 - 0.08f64)).sqrt(),
            max_relative = 1e-15
        );
        let mut num = 1.0;
        let mut den = 1.0;
        for j in 0..5 {
            num *= -0.4 * 0.5f64.powi(j);
            den *= (1.0 - 0.5f64.powi(j + 1)) * (1.0 - 0.08 * 0.5f64.powi(j));
        }
        assert_relative_eq!(hankel_weight_w(5, &p), num / den.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn symbol_far_negative_index_is_one() {
        let p = asc(0.5, 0.3, 0.5);
        let h = hankel_symbol_h(-50, &p, HankelStrategy::Auto).unwrap();
        assert!((h - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symbol_recurrence_residual() {
        let p = asc(0.5, 0.3, 0.5);
        let h: Vec<f64> = (3..=5).map(|k| hankel_symbol_h(k, &p, HankelStrategy::Series).unwrap()).collect();
        let k = 4;
        let r = (p.a * p.b - p.q.pow(1.0 - k as f64)) * h[0] - p.a * (p.a + p.b) * h[1] + p.a * p.a * h[2];
        let scale = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(r.abs() < 1e-10 * scale, "residual {r}");
    }

    #[test]
    fn strategies_agree() {
        let p = asc(0.6, 0.1, 0.4);
        let s = hankel_symbols(8, &p, HankelStrategy::Series).unwrap();
        let r = hankel_symbols(8, &p, HankelStrategy::Recurrence).unwrap();
        let a = hankel_symbols(8, &p, HankelStrategy::Auto).unwrap();
        for k in 3..=8 {
            assert!(relative_gap(s[k], r[k]) < 1e-9, "k={k}");
            assert!(relative_gap(s[k], a[k]) < 1e-9, "k={k}");
        }
    }

    #[test]
    fn scaled_symbols_match_unscaled() {
        for p in [asc(0.3, 0.2, 0.5), asc(-0.5, 0.4, 0.6), asc(0.2, 0.0, 0.3), asc(0.1, 0.9, 0.5)] {
            let h = hankel_symbols(12, &p, HankelStrategy::Series).unwrap();
            let hs = hankel_symbols_scaled(12, &p).unwrap();
            for k in 0..=12 {
                let s = (-p.a).powi(k as i32) * p.q.pow(k as f64 * k as f64 / 4.0 - k as f64 / 2.0);
                assert!(relative_gap(s * h[k], hs[k]) < 1e-12, "k={k} {} {}", s * h[k], hs[k]);
            }
        }
    }

    #[test]
    fn scaled_recurrence_residual_large_k() {
        let p = asc(0.3, 0.2, 0.5);
        let hs = hankel_symbols_scaled(398, &p).unwrap();
        for k in [50usize, 200, 397] {
            let kf = k as f64;
            let r = hs[k + 1] + (p.a + p.b) * p.q.pow((2.0 * kf - 1.0) / 4.0) * hs[k]
                - (1.0 - p.a * p.b * p.q.pow(kf - 1.0)) * hs[k - 1];
            assert!(r.abs() < 1e-13, "k={k} r={r}");
        }
    }

    #[test]
    fn h_matrix_entries() {
        let p = asc(0.3, 0.2, 0.5);
        let h = build_h(&p, 4).unwrap();
        assert_relative_eq!(h.get(0, 0), hankel_symbol_h(0, &p, HankelStrategy::Series).unwrap(), max_relative = 1e-14);
        assert_eq!(h.get(1, 2).to_bits(), h.get(2, 1).to_bits());
        let direct = h_entry_direct(1, 2, &p).unwrap();
        assert!((h.get(1, 2) - direct).abs() < 1e-11);
    }

    #[test]
    fn h_strategies_agree_entrywise() {
        let p = asc(0.3, 0.2, 0.5);
        let base = build_h(&p, 10).unwrap();
        for s in [HankelStrategy::Series, HankelStrategy::Recurrence, HankelStrategy::Auto] {
            let m = build_h_with(&p, 10, s).unwrap();
            for (x, y) in base.as_slice().iter().zip(m.as_slice()) {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(1e-300) || (x - y).abs() < 1e-15, "{s:?}");
            }
        }
    }

    #[test]
    fn h_entries_bounded_by_norm() {
        for p in [asc(0.3, 0.2, 0.5), asc(-0.4, 0.3, 0.6)] {
            let qv = p.q.value();
            let a = p.a.abs();
            let norm = (poch_inf_real(-a, p.q) * poch_inf_real(-qv / a, p.q)).powi(2)
                / (poch_inf_real(p.a * p.b, p.q) * poch_inf_real(qv * p.b / p.a, p.q)).abs();
            let h = build_h(&p, 60).unwrap();
            assert!(h.max_abs() <= 1.1 * norm);
        }
    }

    #[test]
    fn jacobi_matrix() {
        let p = asc(0.4, -0.3, 0.6);
        let j = build_j(&p, 10).unwrap();
        assert_relative_eq!(j.get(0, 0), 0.1, max_relative = 1e-15);
        assert_eq!(j.get(7, 7), (0.4 - 0.3) * 0.6f64.powi(7));
        assert_eq!(j.get(7, 8), ((1.0 - 0.6f64.powi(8)) * (1.0 + 0.12 * 0.6f64.powi(7))).sqrt());
        let js = build_j(&asc(-0.3, 0.4, 0.6), 10).unwrap();
        assert_eq!(j.as_slice(), js.as_slice());
    }

    #[test]
    fn g_matrix() {
        let g = build_g(0.5, q(0.5), 8).unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        let th = build_tilde_h(0.5, q(0.5), 8).unwrap();
        let g2 = build_g(0.5f64.powf(1.0), q(0.25), 8).unwrap();
        for (x, y) in th.as_slice().iter().zip(g2.as_slice()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn g_is_combination_of_h() {
        let (a, qb) = (0.5, q(0.5));
        let (ca, cb) = g_combination_coefficients(a, qb);
        let n = 8;
        let g = build_g(a, qb, n).unwrap();
        let h1 = build_h(&AscParams::new(a, a * qb.pow(0.5), 0.5).unwrap(), n).unwrap();
        let h2 = build_h(&AscParams::new(a * qb.pow(0.5), a, 0.5).unwrap(), n).unwrap();
        // the two terms cancel by a factor ~1e5, so the bound is scale-relative
        for i in 0..n * n {
            let (t1, t2) = (ca * h1.as_slice()[i], cb * h2.as_slice()[i]);
            let r = g.as_slice()[i] - t1 - t2;
            assert!(r.abs() < 1e-14 * (t1.abs() + t2.abs()), "entry {i}: {r}");
        }
    }

    #[test]
    fn tilde_h_entry() {
        let th = build_tilde_h(0.0, q(0.5), 4).unwrap();
        assert_eq!(th.get(0, 0), 1.0);
        let qv: f64 = 0.5;
        let p = |x: f64, b: f64, n: i32| (0..n).fold(1.0, |acc, j| acc * (1.0 - x * b.powi(j)));
        let expected = qv.powf(0.5) * p(qv, qv, 5)
            / (p(qv * qv, qv * qv, 2) * p(qv * qv, qv * qv, 2) * p(qv * qv, qv * qv, 3) * p(qv * qv, qv * qv, 3))
                .sqrt();
        assert_relative_eq!(th.get(2, 3), expected, max_relative = 1e-13);
        assert!(build_tilde_h(-1.0, q(0.5), 4).is_err());
    }

    #[test]
    fn symbol_pole_is_reported() {
        assert!(matches!(AscParams::new(0.25, 0.5, 0.5), Err(Error::Pole(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn built_matrices_are_exactly_symmetric(
            a in prop_oneof![-0.9f64..-0.1, 0.1f64..0.9],
            b in -0.9f64..0.9,
            qv in 0.2f64..0.8,
        ) {
            prop_assume!(AscParams::new(a, b, qv).is_ok());
            let p = AscParams::new(a, b, qv).unwrap();
            if let Ok(h) = build_h(&p, 12) {
                for m in 0..12 {
                    for n in 0..12 {
                        prop_assert_eq!(h.get(m, n).to_bits(), h.get(n, m).to_bits());
                    }
                }
            }
        }
    }
}
