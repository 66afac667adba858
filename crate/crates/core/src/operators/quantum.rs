use serde::Serialize;

use super::matrix::{DenseSymmetricMatrix, JacobiSpec, Provenance};
use crate::error::{domain, Error, Result};
use crate::qcore::{CompensatedSum, QBase};

/// Parameters of the quantum Hilbert matrix `ℋ_ν(q;ε)`, entries
/// `q^{ε(m+n)} / (1 - q^{m+n+ν})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumHilbertParams {
    pub nu: f64,
    pub q: QBase,
    pub eps: f64,
}

impl QuantumHilbertParams {
    pub fn new(nu: f64, q: f64, eps: f64) -> Result<Self> {
        let q = QBase::new(q)?;
        if !nu.is_finite() || (nu <= 0.0 && nu.fract() == 0.0) {
            return domain(format!("nu must not be a non-positive integer, got {nu}"));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return domain(format!("eps must be positive, got {eps}"));
        }
        Ok(QuantumHilbertParams { nu, q, eps })
    }

    /// The reciprocal quantum integers matrix `𝒢 = ℋ_1(q;1)`.
    pub fn gcal(q: f64) -> Result<Self> {
        Self::new(1.0, q, 1.0)
    }

    fn entry(&self, k: usize) -> Result<f64> {
        let d = 1.0 - self.q.pow(k as f64 + self.nu);
        if d == 0.0 {
            return domain(format!("1 - q^(k+nu) vanishes at k={k}"));
        }
        Ok(self.q.pow(self.eps * k as f64) / d)
    }
}

/// Truncation of `ℋ_ν(q;ε)`.
pub fn build_quantum_hilbert(p: &QuantumHilbertParams, order: usize) -> Result<DenseSymmetricMatrix> {
    let prov = Provenance::new("quantum-hilbert", &[("nu", p.nu), ("q", p.q.value()), ("eps", p.eps)]);
    hankel_from_symbol(p, order, prov)
}

fn hankel_from_symbol(p: &QuantumHilbertParams, order: usize, prov: Provenance) -> Result<DenseSymmetricMatrix> {
    let diag: Vec<f64> = (0..2 * order.max(1) - 1).map(|k| p.entry(k)).collect::<Result<_>>()?;
    DenseSymmetricMatrix::from_upper(order, prov, |m, n| Ok(diag[m + n]))
}

/// Truncation of `𝒢`, entries `q^{m+n} / (1 - q^{m+n+1})`.
pub fn build_gcal(q: QBase, order: usize) -> Result<DenseSymmetricMatrix> {
    hankel_from_symbol(&QuantumHilbertParams::gcal(q.value())?, order, Provenance::new("gcal", &[("q", q.value())]))
}

/// Diagonal sum of `ℋ_ν(q;ε)` with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEstimate {
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

impl TraceEstimate {
    pub fn value(&self) -> f64 {
        self.partial_sum
    }
}

/// `Σ_{n<N} q^{2εn} / (1 - q^{2n+ν})` together with the geometric bound
/// `q^{2εN} / ((1 - q^{2ε})(1 - q^{2N+ν}))` on the remainder (valid once
/// `2N + ν > 0`).
pub fn quantum_hilbert_trace(p: &QuantumHilbertParams, terms: usize) -> Result<TraceEstimate> {
    let mut sum = CompensatedSum::new();
    for n in 0..terms {
        sum.add(p.entry(2 * n)?);
    }
    let nf = terms as f64;
    let tail_bound = if 2.0 * nf + p.nu > 0.0 {
        p.q.pow(2.0 * p.eps * nf) / ((1.0 - p.q.pow(2.0 * p.eps)) * (1.0 - p.q.pow(2.0 * nf + p.nu)))
    } else {
        f64::INFINITY
    };
    Ok(TraceEstimate { partial_sum: sum.value(), tail_bound, terms })
}

/// Jacobi generator of `𝒥`: `α_n = -(q^{-(n+1)/2} - q^{(n+1)/2})^2`,
/// `β_n = -4 + (q^{-1/2} + q^{1/2})(q^{-n-1/2} + q^{n+1/2})`.
pub fn jcal_spec(q: QBase, order: usize) -> Result<JacobiSpec> {
    let s = q.pow(-0.5) + q.pow(0.5);
    JacobiSpec::from_fn(
        order,
        |n| -4.0 + s * (q.pow(-(n as f64) - 0.5) + q.pow(n as f64 + 0.5)),
        |n| {
            let e = (n as f64 + 1.0) / 2.0;
            -(q.pow(-e) - q.pow(e)).powi(2)
        },
    )
}

/// Truncation of `𝒥`.
pub fn build_jcal(q: QBase, order: usize) -> Result<DenseSymmetricMatrix> {
    jcal_spec(q, order)?.to_matrix(Provenance::new("jcal", &[("q", q.value())]))
}

/// `(𝒥^{-1})_{m,n} = Σ_{k >= max(m,n)} q^{k+1} / (1 - q^{k+1})^2`, summed until
/// the geometric tail bound drops below `tol` relative to the partial sum.
pub fn jcal_inverse_entry(m: usize, n: usize, q: QBase, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let qv = q.value();
    let start = m.max(n);
    let mut qk = q.powi(start as i32 + 1);
    let mut sum = CompensatedSum::new();
    for _ in 0..1_000_000 {
        let d = 1.0 - qk;
        sum.add(qk / (d * d));
        qk *= qv;
        let tail = qk / ((1.0 - qv) * (1.0 - qk).powi(2));
        if tail <= tol * sum.value() || qk == 0.0 {
            return Ok(sum.value());
        }
    }
    Err(Error::Convergence(format!("inverse entry ({m},{n}) did not converge")))
}

/// Matrix of inverse entries `(𝒥^{-1})_{m,n}` for `m, n < order`.
pub fn jcal_inverse_matrix(q: QBase, order: usize, tol: f64) -> Result<DenseSymmetricMatrix> {
    let col: Vec<f64> = (0..order).map(|k| jcal_inverse_entry(k, k, q, tol)).collect::<Result<_>>()?;
    DenseSymmetricMatrix::from_upper(order, Provenance::new("jcal-inverse", &[("q", q.value())]), |m, n| {
        Ok(col[m.max(n)])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(v: f64) -> QBase {
        QBase::new(v).unwrap()
    }

    #[test]
    fn params_validated() {
        assert!(QuantumHilbertParams::new(0.0, 0.5, 1.0).is_err());
        assert!(QuantumHilbertParams::new(-2.0, 0.5, 1.0).is_err());
        assert!(QuantumHilbertParams::new(1.0, 0.5, 0.0).is_err());
        assert!(QuantumHilbertParams::new(-1.5, 0.5, 0.5).is_ok());
    }

    #[test]
    fn entries() {
        let p = QuantumHilbertParams::new(1.0, 0.5, 0.5).unwrap();
        let m = build_quantum_hilbert(&p, 3).unwrap();
        assert_eq!(m.get(0, 0), 2.0);
        let g = build_gcal(q(0.5), 3).unwrap();
        assert_relative_eq!(g.get(1, 1), 2.0 / 7.0, max_relative = 1e-15);
        let g = build_gcal(q(0.5), 20).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                assert!(g.get(i, j) <= 0.5f64.powi((i + j) as i32) / 0.5);
            }
        }
    }

    #[test]
    fn trace_stable() {
        let p = QuantumHilbertParams::new(1.0, 0.5, 0.5).unwrap();
        let t60 = quantum_hilbert_trace(&p, 60).unwrap();
        let t80 = quantum_hilbert_trace(&p, 80).unwrap();
        assert!((t60.value() - t80.value()).abs() < 1e-12);
        assert!(t80.value() - t60.value() <= t60.tail_bound);
    }

    #[test]
    fn jcal_entries() {
        let j = build_jcal(q(0.25), 4).unwrap();
        assert_relative_eq!(j.get(0, 0), 2.25, max_relative = 1e-14);
        assert_relative_eq!(j.get(0, 1), -2.25, max_relative = 1e-14);
        let j = build_jcal(q(0.5), 80).unwrap();
        assert!(j.as_slice().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn jcal_diagonal_dominance_pattern() {
        // reported evidence only: β_n - |α_{n-1}| - |α_n| for the tested grid
        for qv in [0.3, 0.5, 0.7] {
            let s = jcal_spec(q(qv), 41).unwrap();
            for n in 1..40 {
                let margin = s.diagonal[n] - s.off_diagonal[n - 1].abs() - s.off_diagonal[n].abs();
                assert!(margin.is_finite());
            }
        }
    }

    #[test]
    fn inverse_entries() {
        let qv: f64 = 0.5;
        let v = jcal_inverse_entry(0, 0, q(qv), 1e-16).unwrap();
        let brute: f64 = (0..200)
            .map(|k| {
                let e = (k as f64 + 1.0) / 2.0;
                1.0 / (qv.powf(-e) - qv.powf(e)).powi(2)
            })
            .sum();
        assert!((v - brute).abs() < 1e-13);
        assert_eq!(
            jcal_inverse_entry(3, 7, q(qv), 1e-15).unwrap().to_bits(),
            jcal_inverse_entry(7, 3, q(qv), 1e-15).unwrap().to_bits()
        );
    }

    #[test]
    fn inverse_matrix_inverts_interior() {
        let n = 60;
        let j = build_jcal(q(0.5), n).unwrap();
        let m = jcal_inverse_matrix(q(0.5), n, 1e-16).unwrap();
        let prod = j.matmul(&m).unwrap();
        for r in 0..n - 2 {
            for c in 0..n - 2 {
                let d = if r == c { 1.0 } else { 0.0 };
                assert!((prod[r * n + c] - d).abs() < 1e-8, "({r},{c})");
            }
        }
    }
}
