use super::{phi01_real, poch_inf_real, QBase, TIGHT_TOL};
use crate::error::{Error, Result};

/// Second Jackson q-Bessel function
/// `J_ν(x;q) = (q^{ν+1};q)_∞/(q;q)_∞ · (x/2)^ν · _0φ_1(-; q^{ν+1}; q, -x² q^{ν+1}/4)`.
///
/// Defined for `x >= 0`; at `x = 0` the value is the limit (0 for `ν > 0`,
/// 1 for `ν = 0`).
pub fn jackson_q_bessel2(nu: f64, x: f64, q: QBase) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("x must be non-negative, got {x}")));
    }
    let qn1 = q.pow(nu + 1.0);
    let k = -(nu + 1.0);
    if k >= 0.0 && (k - k.round()).abs() < 1e-12 {
        return Err(Error::Pole(format!("q^(nu+1) = q^-{} for nu = {nu}", k.round())));
    }
    let prefactor = poch_inf_real(qn1, q) / poch_inf_real(q.value(), q);
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(prefactor)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain(format!("J_nu(0) is unbounded for nu = {nu} < 0")))
        };
    }
    let series = phi01_real(qn1, q, -x * x * qn1 / 4.0, TIGHT_TOL)?;
    Ok(prefactor * (x / 2.0).powf(nu) * series.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::poch_real;

    fn direct(nu: f64, x: f64, q: f64) -> f64 {
        let qb = QBase::new(q).unwrap();
        let qn1 = q.powf(nu + 1.0);
        let mut s = 0.0;
        for n in 0..60usize {
            let nf = n as f64;
            let z: f64 = -x * x * qn1 / 4.0;
            s += q.powf(nf * (nf - 1.0)) * z.powi(n as i32) / (poch_real(qn1, qb, n) * poch_real(q, qb, n));
        }
        poch_inf_real(qn1, qb) / poch_inf_real(q, qb) * (x / 2.0).powf(nu) * s
    }

    #[test]
    fn value_at_origin() {
        let q = QBase::new(0.5).unwrap();
        assert_eq!(jackson_q_bessel2(0.0, 0.0, q).unwrap(), 1.0);
        assert_eq!(jackson_q_bessel2(1.3, 0.0, q).unwrap(), 0.0);
    }

    #[test]
    fn matches_direct_series() {
        let q = QBase::new(0.5).unwrap();
        let v = jackson_q_bessel2(1.0, 0.3, q).unwrap();
        assert!(v > 0.0);
        assert!((v - direct(1.0, 0.3, 0.5)).abs() < 1e-12 * v.abs());
    }

    #[test]
    fn difference_equation() {
        let (nu, x) = (0.5, 0.4);
        let q = QBase::new(0.3).unwrap();
        let sq = q.pow(0.5);
        let r = jackson_q_bessel2(nu, x / sq, q).unwrap()
            - (q.pow(-nu / 2.0) + q.pow(nu / 2.0)) * jackson_q_bessel2(nu, x, q).unwrap()
            + (1.0 + x * x / 4.0) * jackson_q_bessel2(nu, sq * x, q).unwrap();
        assert!(r.abs() < 1e-11);
    }

    #[test]
    fn pole_rejected() {
        let q = QBase::new(0.5).unwrap();
        assert!(matches!(jackson_q_bessel2(-2.0, 0.5, q), Err(Error::Pole(_))));
    }
}
