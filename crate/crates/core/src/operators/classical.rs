use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::matrix::{DenseSymmetricMatrix, JacobiSpec, Provenance};
use crate::error::{domain, Result};

/// The classical (`q = 1`) matrices: the generalised Hilbert matrix
/// `1/(m+n+ν)`, the three-parameter matrix `B(a,b,c)` and the Jacobi matrix
/// commuting with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassicalBuilder {
    Hilbert { nu: f64 },
    B { a: f64, b: f64, c: f64 },
    BJacobi { a: f64, b: f64, c: f64 },
}

fn check_positive(a: f64, b: f64, c: f64) -> Result<()> {
    if [a, b, c].iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        domain(format!("B(a,b,c) requires a, b, c > 0, got ({a}, {b}, {c})"))
    }
}

/// Jacobi generator commuting with `B(a,b,c)`: diagonal
/// `n(n-1+c) + (n+a)(n+b)`, off-diagonal `-sqrt((n+1)(n+a)(n+b)(n+c))`.
pub fn b_jacobi_spec(a: f64, b: f64, c: f64, order: usize) -> Result<JacobiSpec> {
    check_positive(a, b, c)?;
    JacobiSpec::from_fn(
        order,
        |n| {
            let n = n as f64;
            n * (n - 1.0 + c) + (n + a) * (n + b)
        },
        |n| {
            let n = n as f64;
            -((n + 1.0) * (n + a) * (n + b) * (n + c)).sqrt()
        },
    )
}

/// Truncation of a classical matrix.
pub fn build_classical(builder: ClassicalBuilder, order: usize) -> Result<DenseSymmetricMatrix> {
    match builder {
        ClassicalBuilder::Hilbert { nu } => {
            if !nu.is_finite() || (nu <= 0.0 && nu.fract() == 0.0) {
                return domain(format!("nu must not be a non-positive integer, got {nu}"));
            }
            let prov = Provenance::new("hilbert", &[("nu", nu)]);
            DenseSymmetricMatrix::from_upper(order, prov, |m, n| {
                let d = (m + n) as f64 + nu;
                if d == 0.0 {
                    domain(format!("1/(m+n+nu) has a pole at ({m},{n})"))
                } else {
                    Ok(1.0 / d)
                }
            })
        }
        ClassicalBuilder::B { a, b, c } => {
            check_positive(a, b, c)?;
            // every Γ argument is positive, so all entries are positive and the
            // log-domain evaluation needs no sign bookkeeping
            let half_log_w = |n: usize| {
                let n = n as f64;
                0.5 * (ln_gamma(n + b) + ln_gamma(n + c) - ln_gamma(n + a) - ln_gamma(n + 1.0))
            };
            let w: Vec<f64> = (0..order).map(half_log_w).collect();
            let prov = Provenance::new("b", &[("a", a), ("b", b), ("c", c)]);
            DenseSymmetricMatrix::from_upper(order, prov, |m, n| {
                let k = (m + n) as f64;
                Ok((ln_gamma(k + a) - ln_gamma(k + b + c) + w[m] + w[n]).exp())
            })
        }
        ClassicalBuilder::BJacobi { a, b, c } => {
            b_jacobi_spec(a, b, c, order)?.to_matrix(Provenance::new("b-jacobi", &[("a", a), ("b", b), ("c", c)]))
        }
    }
}
