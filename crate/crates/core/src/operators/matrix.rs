use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which operator a matrix truncates and at which parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub parameters: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn new(family: impl Into<String>, parameters: &[(&str, f64)]) -> Self {
        Provenance { family: family.into(), parameters: parameters.iter().map(|&(k, v)| (k.to_string(), v)).collect() }
    }
}

/// Real symmetric `N×N` matrix stored row-major. Only the upper triangle is
/// ever computed; the lower triangle is an exact copy.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
    provenance: Provenance,
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    provenance: &'a Provenance,
    order: usize,
    entries: Vec<&'a [f64]>,
}

impl DenseSymmetricMatrix {
    /// Builds the matrix from an upper-triangle entry function `f(m, n)`,
    /// `m <= n`, rejecting non-finite entries.
    pub fn from_upper<F>(order: usize, provenance: Provenance, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<f64>,
    {
        if order == 0 {
            return Err(Error::Domain("matrix order must be at least 1".into()));
        }
        let mut entries = vec![0.0; order * order];
        for m in 0..order {
            for n in m..order {
                let v = f(m, n)?;
                if !v.is_finite() {
                    return Err(Error::IllConditioned(format!("{} entry ({m},{n}) is not finite", provenance.family)));
                }
                entries[m * order + n] = v;
                entries[n * order + m] = v;
            }
        }
        Ok(DenseSymmetricMatrix { order, entries, provenance })
    }

    /// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`.
    pub fn tridiagonal(diag: &[f64], off: &[f64], provenance: Provenance) -> Result<Self> {
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len().saturating_sub(1), found: off.len() });
        }
        Self::from_upper(diag.len(), provenance, |m, n| {
            Ok(if m == n {
                diag[m]
            } else if n == m + 1 {
                off[m]
            } else {
                0.0
            })
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m * self.order + n]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, m: usize) -> &[f64] {
        &self.entries[m * self.order..(m + 1) * self.order]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Leading `k×k` block.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: k });
        }
        Self::from_upper(k, self.provenance.clone(), |m, n| Ok(self.get(m, n)))
    }

    /// Copy with the symmetric pair `(m,n)`, `(n,m)` replaced by `value`.
    pub fn with_entry(&self, m: usize, n: usize, value: f64) -> Self {
        let mut out = self.clone();
        out.entries[m * self.order + n] = value;
        out.entries[n * self.order + m] = value;
        out
    }

    /// `self · other` as a plain row-major array.
    pub fn matmul(&self, other: &DenseSymmetricMatrix) -> Result<Vec<f64>> {
        if other.order != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: other.order });
        }
        let n = self.order;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let row = self.row(i);
            for (k, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let brow = other.row(k);
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(brow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// CSV grid, one matrix row per line. Values use the shortest decimal form
    /// that round-trips, or C99 hex floats when `hex` is set.
    pub fn to_csv(&self, hex: bool) -> String {
        let mut s = String::new();
        for m in 0..self.order {
            let line: Vec<String> =
                self.row(m).iter().map(|&v| if hex { hex_float(v) } else { format!("{v:?}") }).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    /// JSON object with provenance, order and nested entry rows.
    pub fn to_json(&self) -> Result<String> {
        let doc = MatrixJson {
            provenance: &self.provenance,
            order: self.order,
            entries: (0..self.order).map(|m| self.row(m)).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

/// C99 hexadecimal representation, e.g. `0x1.8p+1` for 3.
pub fn hex_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mut mantissa = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let mut digits = 13;
    while digits > 0 && mantissa & 0xf == 0 {
        mantissa >>= 4;
        digits -= 1;
    }
    let mut s = format!("{sign}0x{lead}");
    if digits > 0 {
        let _ = write!(s, ".{mantissa:0width$x}", width = digits);
    }
    let _ = write!(s, "p{exp:+}");
    s
}

/// Tridiagonal generator: `β_n` on the diagonal, `α_n` between `n` and `n+1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiSpec {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl JacobiSpec {
    /// Samples `β_0..β_{N-1}` and `α_0..α_{N-2}`; every `α_n` must be non-zero.
    pub fn from_fn<B, A>(order: usize, beta: B, alpha: A) -> Result<Self>
    where
        B: Fn(usize) -> f64,
        A: Fn(usize) -> f64,
    {
        let diagonal: Vec<f64> = (0..order).map(&beta).collect();
        let off_diagonal: Vec<f64> = (0..order.saturating_sub(1)).map(&alpha).collect();
        if let Some(n) = off_diagonal.iter().position(|&a| a == 0.0 || !a.is_finite()) {
            return Err(Error::Domain(format!("Jacobi off-diagonal α_{n} must be finite and non-zero")));
        }
        Ok(JacobiSpec { diagonal, off_diagonal })
    }

    pub fn to_matrix(&self, provenance: Provenance) -> Result<DenseSymmetricMatrix> {
        DenseSymmetricMatrix::tridiagonal(&self.diagonal, &self.off_diagonal, provenance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov() -> Provenance {
        Provenance::new("test", &[("x", 1.0)])
    }

    #[test]
    fn upper_triangle_is_mirrored() {
        let m = DenseSymmetricMatrix::from_upper(4, prov(), |i, j| Ok(1.0 / (1 + i + 2 * j) as f64)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j).to_bits(), m.get(j, i).to_bits());
            }
        }
        assert!(DenseSymmetricMatrix::from_upper(2, prov(), |_, _| Ok(f64::NAN)).is_err());
        assert!(DenseSymmetricMatrix::from_upper(0, prov(), |_, _| Ok(0.0)).is_err());
    }

    #[test]
    fn hex_float_format() {
        assert_eq!(hex_float(1.0), "0x1p+0");
        assert_eq!(hex_float(3.0), "0x1.8p+1");
        assert_eq!(hex_float(-0.375), "-0x1.8p-2");
        assert_eq!(hex_float(0.0), "0x0p+0");
        assert_eq!(hex_float(f64::MIN_POSITIVE / 2.0), "0x0.8p-1022");
        assert_eq!(hex_float(0.1), "0x1.999999999999ap-4");
    }

    #[test]
    fn csv_and_json_export() {
        let m = DenseSymmetricMatrix::tridiagonal(&[1.0, 2.0], &[0.5], prov()).unwrap();
        assert_eq!(m.to_csv(false), "1.0,0.5\n0.5,2.0\n");
        assert_eq!(m.to_csv(true), "0x1p+0,0x1p-1\n0x1p-1,0x1p+1\n");
        let v: serde_json::Value = serde_json::from_str(&m.to_json().unwrap()).unwrap();
        assert_eq!(v["order"], 2);
        assert_eq!(v["provenance"]["family"], "test");
        assert_eq!(v["entries"][1][1], 2.0);
    }

    #[test]
    fn matmul_small() {
        let a = DenseSymmetricMatrix::tridiagonal(&[1.0, 2.0], &[3.0], prov()).unwrap();
        assert_eq!(a.matmul(&a).unwrap(), vec![10.0, 9.0, 9.0, 13.0]);
        let b = DenseSymmetricMatrix::tridiagonal(&[1.0], &[], prov()).unwrap();
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn jacobi_spec_rejects_zero_off_diagonal() {
        assert!(JacobiSpec::from_fn(3, |_| 0.0, |n| n as f64).is_err());
        let s = JacobiSpec::from_fn(3, |n| n as f64, |n| (n + 1) as f64).unwrap();
        let m = s.to_matrix(prov()).unwrap();
        assert_eq!(m.get(1, 2), 2.0);
        assert_eq!(m.get(0, 2), 0.0);
    }
}
