//! Eigendecomposition, commutation checks, closed-form multiplier functions and
//! the spectral interval / operator norm of the diagonalised Hankel matrices.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::operators::{build_g, build_h, build_tilde_h, g_combination_coefficients, DenseSymmetricMatrix};
use crate::polyfam::{AscParams, PolynomialFamily};
use crate::qcore::{as_real, poch_inf, poch_inf_real, QBase};

/// Orthonormality defect above which an eigendecomposition is rejected.
const ORTHONORMALITY_LIMIT: f64 = 1e-10;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `j` (entries `j, N+j, 2N+j, …` of this row-major array) is the
    /// eigenvector of `eigenvalues[j]`.
    pub eigenvectors: Vec<f64>,
    /// `max_j ‖M v_j - λ_j v_j‖ / ‖M‖₂`.
    pub max_residual: f64,
    /// `max |VᵀV - I|`.
    pub orthonormality_defect: f64,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        let n = self.order();
        (0..n).map(|i| self.eigenvectors[i * n + j]).collect()
    }
}

fn to_dmatrix(m: &DenseSymmetricMatrix) -> DMatrix<f64> {
    let n = m.order();
    DMatrix::from_row_slice(n, n, m.as_slice())
}

fn iteration_budget(n: usize) -> usize {
    1000 * n.max(10)
}

/// Full symmetric eigendecomposition; fails with `Convergence` when the
/// iteration budget is exhausted or the residual / orthonormality contracts
/// (`tol`, `1e-10`) are not met.
pub fn eig_symmetric(m: &DenseSymmetricMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = m.order();
    let eig = SymmetricEigen::try_new(to_dmatrix(m), f64::EPSILON, iteration_budget(n))
        .ok_or_else(|| Error::Convergence(format!("symmetric eigensolver did not converge at N={n}")))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &src) in idx.iter().enumerate() {
        for row in 0..n {
            eigenvectors[row * n + col] = eig.eigenvectors[(row, src)];
        }
    }

    let norm = eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut max_residual: f64 = 0.0;
    for j in 0..n {
        let mut r2 = 0.0;
        for i in 0..n {
            let mv: f64 = m.row(i).iter().enumerate().map(|(k, &a)| a * eigenvectors[k * n + j]).sum();
            let d = mv - eigenvalues[j] * eigenvectors[i * n + j];
            r2 += d * d;
        }
        max_residual = max_residual.max(r2.sqrt() / norm);
    }
    let mut orthonormality_defect: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            let dot: f64 = (0..n).map(|i| eigenvectors[i * n + a] * eigenvectors[i * n + b]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            orthonormality_defect = orthonormality_defect.max((dot - target).abs());
        }
    }
    if max_residual > tol {
        return Err(Error::Convergence(format!("eigen residual {max_residual:.2e} exceeds {tol:.2e}")));
    }
    if orthonormality_defect > ORTHONORMALITY_LIMIT {
        return Err(Error::Convergence(format!("eigenvector orthonormality defect {orthonormality_defect:.2e}")));
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors, max_residual, orthonormality_defect })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(m: &DenseSymmetricMatrix) -> Result<Vec<f64>> {
    let n = m.order();
    let eig = SymmetricEigen::try_new(to_dmatrix(m), f64::EPSILON, iteration_budget(n))
        .ok_or_else(|| Error::Convergence(format!("symmetric eigensolver did not converge at N={n}")))?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Largest `|(JM - MJ)_{m,n}|` over `0 <= m, n < N - margin`.
///
/// For tridiagonal `J` only the last row and column of the truncated product
/// miss a contribution, so `margin = 1` already excludes every truncation effect.
pub fn commutator_interior_max(j: &DenseSymmetricMatrix, m: &DenseSymmetricMatrix, margin: usize) -> Result<f64> {
    if margin == 0 {
        return domain("commutator margin must be at least 1");
    }
    let n = j.order();
    if m.order() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.order() });
    }
    // both factors are symmetric, so MJ = (JM)ᵀ
    let jm = j.matmul(m)?;
    let inner = n.saturating_sub(margin);
    let mut max: f64 = 0.0;
    for r in 0..inner {
        for c in (r + 1)..inner {
            max = max.max((jm[r * n + c] - jm[c * n + r]).abs());
        }
    }
    Ok(max)
}

fn open_angle(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < std::f64::consts::PI {
        Ok(())
    } else {
        domain(format!("theta must lie in (0, pi), got {theta}"))
    }
}

/// Multiplier of `H(a,b)`:
/// `h(cos θ) = (a e^{±iθ}, q e^{±iθ}/a; q)_∞ / (ab, qb/a; q)_∞`.
pub fn multiplier_h(theta: f64, p: &AscParams) -> Result<f64> {
    open_angle(theta)?;
    let q = p.q;
    let den = poch_inf_real(p.a * p.b, q) * poch_inf_real(q.value() * p.b / p.a, q);
    if den == 0.0 {
        return Err(Error::Pole("(ab, qb/a; q)_∞ vanishes".into()));
    }
    let e = Complex64::from_polar(1.0, theta);
    let num = poch_inf(p.a * e.conj(), q)
        * poch_inf(p.a * e, q)
        * poch_inf(q.value() * e.conj() / p.a, q)
        * poch_inf(q.value() * e / p.a, q);
    as_real(num / den)
}

/// Multiplier of `G(a;q)` in closed form:
/// `(q^{1/2};q)_∞ (-q^{1/4} e^{±iθ}; q^{1/2})_∞ / (-a q^{1/4}; q^{1/2})_∞`.
pub fn multiplier_g(theta: f64, a: f64, q: QBase) -> Result<f64> {
    open_angle(theta)?;
    if !(a.is_finite() && a != 0.0 && a.abs() < 1.0) {
        return domain(format!("a must satisfy 0 < |a| < 1, got {a}"));
    }
    let s = q.sqrt();
    let q4 = q.pow(0.25);
    let den = poch_inf_real(-a * q4, s);
    if den == 0.0 {
        return Err(Error::Pole("(-a q^{1/4}; q^{1/2})_∞ vanishes".into()));
    }
    let e = Complex64::from_polar(1.0, theta);
    let num = poch_inf(-q4 * e, s) * poch_inf(-q4 * e.conj(), s);
    Ok(poch_inf_real(q.pow(0.5), q) * as_real(num)? / den)
}

/// Multiplier of `G(a;q)` through `A·h(θ; a, a q^{1/2}) + B·h(θ; a q^{1/2}, a)`.
pub fn multiplier_g_combination(theta: f64, a: f64, q: QBase) -> Result<f64> {
    let (ca, cb) = g_combination_coefficients(a, q);
    let b = a * q.pow(0.5);
    let h1 = multiplier_h(theta, &AscParams::new(a, b, q.value())?)?;
    let h2 = multiplier_h(theta, &AscParams::new(b, a, q.value())?)?;
    Ok(ca * h1 + cb * h2)
}

/// Multiplier of `H~(α;q)`:
/// `(q;q^2)_∞ (-q^{1/2} e^{±iθ}; q)_∞ / (-q^{α+1}; q)_∞`, which equals
/// `multiplier_g(θ, q^{α+1/2}, q^2)`.
pub fn multiplier_tilde_h(theta: f64, alpha: f64, q: QBase) -> Result<f64> {
    open_angle(theta)?;
    if !(alpha.is_finite() && alpha > -1.0) {
        return domain(format!("alpha must exceed -1, got {alpha}"));
    }
    let e = Complex64::from_polar(1.0, theta);
    let s = q.pow(0.5);
    let num = poch_inf(-s * e, q) * poch_inf(-s * e.conj(), q);
    Ok(poch_inf_real(q.value(), q.squared()) * as_real(num)? / poch_inf_real(-q.pow(alpha + 1.0), q))
}

/// `Σ_{n<N} M_{0,n} φ_n(2 cos θ)`, which converges to the multiplier of `M`
/// when `M` commutes with the Jacobi matrix of `family`.
pub fn induced_multiplier(m: &DenseSymmetricMatrix, family: &PolynomialFamily, theta: f64) -> Result<f64> {
    open_angle(theta)?;
    let n = m.order();
    let phi = family.phi_all(n - 1, theta.cos())?;
    Ok(m.row(0).iter().zip(&phi).map(|(a, b)| a * b).sum())
}

/// Diagonalised family with a closed-form multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SpectralFamily {
    /// `H(a,b)`
    Asc(AscParams),
    /// `G(a;q)`
    G { a: f64, q: QBase },
    /// `H~(α;q)`
    TildeH { alpha: f64, q: QBase },
}

impl SpectralFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SpectralFamily::Asc(_) => "asc",
            SpectralFamily::G { .. } => "g",
            SpectralFamily::TildeH { .. } => "tildeh",
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            SpectralFamily::Asc(p) => vec![("a", p.a), ("b", p.b), ("q", p.q.value())],
            SpectralFamily::G { a, q } => vec![("a", a), ("q", q.value())],
            SpectralFamily::TildeH { alpha, q } => vec![("alpha", alpha), ("q", q.value())],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn build(&self, order: usize) -> Result<DenseSymmetricMatrix> {
        match *self {
            SpectralFamily::Asc(p) => build_h(&p, order),
            SpectralFamily::G { a, q } => build_g(a, q, order),
            SpectralFamily::TildeH { alpha, q } => build_tilde_h(alpha, q, order),
        }
    }

    pub fn multiplier(&self, theta: f64) -> Result<f64> {
        match *self {
            SpectralFamily::Asc(p) => multiplier_h(theta, &p),
            SpectralFamily::G { a, q } => multiplier_g(theta, a, q),
            SpectralFamily::TildeH { alpha, q } => multiplier_tilde_h(theta, alpha, q),
        }
    }

    /// Polynomial family whose Jacobi matrix commutes with the operator.
    pub fn polynomials(&self) -> Result<PolynomialFamily> {
        Ok(match *self {
            SpectralFamily::Asc(p) => PolynomialFamily::AlSalamChihara(p),
            SpectralFamily::G { a, q } => {
                PolynomialFamily::AlSalamChihara(AscParams::new(a, a * q.pow(0.5), q.value())?)
            }
            SpectralFamily::TildeH { alpha, q } => PolynomialFamily::ContinuousQLaguerre { alpha, q: q.squared() },
        })
    }

    /// Closed-form spectrum `[lo, hi]` (the essential range of the multiplier).
    pub fn interval(&self) -> Result<(f64, f64)> {
        let (x, y) = match *self {
            SpectralFamily::Asc(p) => {
                let q = p.q;
                let a = p.a.abs();
                let qa = q.value() / a;
                let den = poch_inf_real(p.a * p.b, q) * poch_inf_real(q.value() * p.b / p.a, q);
                if den == 0.0 {
                    return Err(Error::Pole("(ab, qb/a; q)_∞ vanishes".into()));
                }
                (
                    (poch_inf_real(a, q) * poch_inf_real(qa, q)).powi(2) / den,
                    (poch_inf_real(-a, q) * poch_inf_real(-qa, q)).powi(2) / den,
                )
            }
            SpectralFamily::G { a, q } => {
                let s = q.sqrt();
                let c = poch_inf_real(q.pow(0.5), q) / poch_inf_real(-a * q.pow(0.25), s);
                (c * poch_inf_real(q.pow(0.25), s).powi(2), c * poch_inf_real(-q.pow(0.25), s).powi(2))
            }
            SpectralFamily::TildeH { alpha, q } => {
                let c = poch_inf_real(q.value(), q.squared()) / poch_inf_real(-q.pow(alpha + 1.0), q);
                (c * poch_inf_real(q.pow(0.5), q).powi(2), c * poch_inf_real(-q.pow(0.5), q).powi(2))
            }
        };
        Ok((x.min(y), x.max(y)))
    }

    /// Closed-form operator norm.
    pub fn norm(&self) -> Result<f64> {
        Ok(match *self {
            SpectralFamily::Asc(p) => {
                let q = p.q;
                let a = p.a.abs();
                (poch_inf_real(-a, q) * poch_inf_real(-q.value() / a, q)).powi(2)
                    / (poch_inf_real(p.a * p.b, q) * poch_inf_real(q.value() * p.b / p.a, q)).abs()
            }
            SpectralFamily::G { .. } | SpectralFamily::TildeH { .. } => self.interval()?.1,
        })
    }
}

/// Spectrum of one truncation compared with the closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSpectrum {
    pub order: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `norm - max |λ|`
    pub gap_to_norm: f64,
    /// `min λ - lo`
    pub gap_to_lower: f64,
    pub inside_interval: bool,
    pub within_norm: bool,
}

/// Comparison of truncation spectra with the closed-form interval and norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub family: String,
    pub parameters: BTreeMap<String, f64>,
    pub interval: [f64; 2],
    pub norm: f64,
    /// Outer tolerance `1e-8 · min(width, 1)` applied to interval membership.
    pub tol_outer: f64,
    pub truncations: Vec<TruncationSpectrum>,
    /// Extremes move outward (non-strictly, slack `1e-12`) as `N` grows.
    pub monotone: bool,
    /// `norm == max(|lo|, |hi|)` to `1e-12` relative.
    pub norm_consistent: bool,
    pub passed: bool,
}

/// Eigenvalues of each truncation in `orders` checked against the closed form.
pub fn spectral_theorem_report(family: &SpectralFamily, orders: &[usize]) -> Result<SpectralReport> {
    if orders.is_empty() {
        return domain("at least one truncation order is required");
    }
    let (lo, hi) = family.interval()?;
    let norm = family.norm()?;
    let tol_outer = 1e-8 * (hi - lo).min(1.0);
    let mut sorted = orders.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let nmax = *sorted.last().unwrap_or(&1);
    let full = family.build(nmax)?;

    let mut truncations = Vec::with_capacity(sorted.len());
    for &n in &sorted {
        let ev = eigenvalues(&full.truncate(n)?)?;
        let (emin, emax) = (ev[0], ev[ev.len() - 1]);
        let max_abs = emin.abs().max(emax.abs());
        truncations.push(TruncationSpectrum {
            order: n,
            min_eigenvalue: emin,
            max_eigenvalue: emax,
            gap_to_norm: norm - max_abs,
            gap_to_lower: emin - lo,
            inside_interval: emin >= lo - tol_outer && emax <= hi + tol_outer,
            within_norm: max_abs <= norm + tol_outer,
        });
    }
    let monotone = truncations.windows(2).all(|w| {
        w[1].max_eigenvalue >= w[0].max_eigenvalue - 1e-12 && w[1].min_eigenvalue <= w[0].min_eigenvalue + 1e-12
    });
    let norm_consistent = (norm - lo.abs().max(hi.abs())).abs() <= 1e-12 * norm;
    let passed = monotone && norm_consistent && truncations.iter().all(|t| t.inside_interval && t.within_norm);
    Ok(SpectralReport {
        family: family.name().to_string(),
        parameters: family.parameters(),
        interval: [lo, hi],
        norm,
        tol_outer,
        truncations,
        monotone,
        norm_consistent,
        passed,
    })
}

/// Largest violation of Cauchy interlacing between the leading `N` and `N+1`
/// blocks of `m`, over `1 <= N < order`; values `<= 0` mean interlacing holds.
pub fn interlacing_violation(m: &DenseSymmetricMatrix) -> Result<f64> {
    let n = m.order();
    let mut prev = eigenvalues(&m.truncate(1)?)?;
    let mut worst = f64::NEG_INFINITY;
    for k in 2..=n {
        let cur = eigenvalues(&m.truncate(k)?)?;
        for (i, &mu) in prev.iter().enumerate() {
            worst = worst.max(cur[i] - mu).max(mu - cur[i + 1]);
        }
        prev = cur;
    }
    Ok(worst)
}
