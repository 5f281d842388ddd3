//! `L^p` norms and signed powers over finite probability spaces.

use crate::error::{Error, Result};

/// `φ_s(x) = sign(x)·|x|^s`
#[inline]
pub fn signed_pow(x: f64, s: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(s)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param("p", format!("norm exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// `(2^-n Σ |v|^p)^{1/p}` under the uniform measure; `p = ∞` gives the max.
pub fn lp_uniform(values: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    if values.is_empty() {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    let w = 1.0 / values.len() as f64;
    let s: f64 = values.iter().map(|v| v.abs().powf(p)).sum();
    Ok((s * w).powf(1.0 / p))
}

/// `(Σ μ(x)|v(x)|^p)^{1/p}`; `p = ∞` gives the max over the support of `μ`.
pub fn lp_weighted(values: &[f64], mu: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    if values.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            got: values.len(),
        });
    }
    if p.is_infinite() {
        return Ok(values
            .iter()
            .zip(mu)
            .filter(|(_, &m)| m > 0.0)
            .fold(0.0f64, |acc, (v, _)| acc.max(v.abs())));
    }
    let s: f64 = values.iter().zip(mu).map(|(v, m)| m * v.abs().powf(p)).sum();
    Ok(s.powf(1.0 / p))
}

/// `Σ μ(x) v(x)`
pub fn weighted_mean(values: &[f64], mu: &[f64]) -> f64 {
    values.iter().zip(mu).map(|(v, m)| v * m).sum()
}

pub fn uniform_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_norm_is_abs_value() {
        let v = vec![-3.0; 8];
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert!((lp_uniform(&v, p).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn half_cube_norms() {
        // (x1 + 1)/2 on one bit: values [1, 0]
        let v = [1.0, 0.0];
        assert!((lp_uniform(&v, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((lp_uniform(&v, 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_exponent() {
        assert!(lp_uniform(&[1.0], 0.5).is_err());
        assert!(lp_uniform(&[1.0], f64::NAN).is_err());
        assert!(lp_weighted(&[1.0], &[1.0], 0.99).is_err());
    }

    #[test]
    fn signed_pow_is_odd() {
        assert_eq!(signed_pow(-2.0, 3.0), -8.0);
        assert_eq!(signed_pow(0.0, 0.5), 0.0);
        assert!((signed_pow(-4.0, 0.5) + 2.0).abs() < 1e-15);
    }
}
