//! Moment inequalities for mean-zero random variables and the pointwise
//! Stroock–Varopoulos comparison.

use super::{check_p, check_p_not_two, params, CheckReport, DiscreteRV, POINTWISE_TOL, SWEEP_TOL};
use crate::error::{Error, Result};
use crate::norm::signed_pow;

/// `a^x · b^y` through logarithms so that large exponents near `p = 2`
/// cancel before overflowing.
fn mixed_power(a: f64, x: f64, b: f64, y: f64) -> f64 {
    (x * a.ln() + y * b.ln()).exp()
}

/// `A² + B² + A^{2/(2-p)} B^{(2p-2)/(p-2)} + B^{2/(2-p)} A^{(2p-2)/(p-2)}`
fn four_terms(a: f64, b: f64, p: f64) -> f64 {
    let e1 = 2.0 / (2.0 - p);
    let e2 = (2.0 * p - 2.0) / (p - 2.0);
    a * a + b * b + mixed_power(a, e1, b, e2) + mixed_power(b, e1, a, e2)
}

/// With `A = E X₊^{p/2}`, `B = E X₋^{p/2}`:
/// `A² + B² + A^{-2/(p-2)} B^{(2p-2)/(p-2)} + B^{-2/(p-2)} A^{(2p-2)/(p-2)} <= E|X|^p`.
pub fn check_split_moments(x: &DiscreteRV, p: f64) -> Result<CheckReport> {
    check_p_not_two(p)?;
    x.require_mean_zero()?;
    let a = x.positive_moment(p / 2.0);
    let b = x.negative_moment(p / 2.0);
    if a == 0.0 || b == 0.0 {
        return Err(Error::param("X", "variable is almost surely zero"));
    }
    let rhs = x.abs_moment(p);
    Ok(CheckReport::upper(
        "split-moments",
        params([("p", p.into()), ("atoms", x.atoms().len().into())]),
        four_terms(a, b, p),
        rhs,
        SWEEP_TOL * rhs.max(1.0),
    ))
}

/// `(a - b)² <= (p-2)²/(2p²-4p+4) · (a² + b² + a^{2/(2-p)} b^{(2p-2)/(p-2)} + b^{2/(2-p)} a^{(2p-2)/(p-2)})`
pub fn check_split_pointwise(a: f64, b: f64, p: f64) -> Result<CheckReport> {
    check_p_not_two(p)?;
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::param("a, b", format!("need positive inputs, got ({a}, {b})")));
    }
    let coeff = (p * p - 4.0 * p + 4.0) / (2.0 * p * p - 4.0 * p + 4.0);
    let rhs = coeff * four_terms(a, b, p);
    Ok(CheckReport::upper(
        "split-pointwise",
        params([("a", a.into()), ("b", b.into()), ("p", p.into())]),
        (a - b) * (a - b),
        rhs,
        SWEEP_TOL * rhs.max(1.0),
    ))
}

/// `(E X₊^{p/2} - E X₋^{p/2})² <= (1 - p²/(2(p²-2p+2))) · E|X|^p`
pub fn check_moment_gap(x: &DiscreteRV, p: f64) -> Result<CheckReport> {
    check_p(p)?;
    x.require_mean_zero()?;
    let gap = x.positive_moment(p / 2.0) - x.negative_moment(p / 2.0);
    let moment = x.abs_moment(p);
    let coeff = 1.0 - p * p / (2.0 * (p * p - 2.0 * p + 2.0));
    Ok(CheckReport::upper(
        "moment-gap",
        params([("p", p.into()), ("atoms", x.atoms().len().into())]),
        gap * gap,
        coeff * moment,
        SWEEP_TOL * moment.max(1.0),
    ))
}

/// `(φ_{p-1}(a) - φ_{p-1}(b))(a - b) >= 4(p-1)/p² · (φ_{p/2}(a) - φ_{p/2}(b))²`
pub fn check_stroock_varopoulos(a: f64, b: f64, p: f64) -> Result<CheckReport> {
    check_p(p)?;
    let lhs = (signed_pow(a, p - 1.0) - signed_pow(b, p - 1.0)) * (a - b);
    let d = signed_pow(a, p / 2.0) - signed_pow(b, p / 2.0);
    let rhs = 4.0 * (p - 1.0) / (p * p) * d * d;
    Ok(CheckReport::lower(
        "stroock-varopoulos",
        params([("a", a.into()), ("b", b.into()), ("p", p.into())]),
        lhs,
        rhs,
        POINTWISE_TOL * lhs.abs().max(1.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_equality_at_four() {
        let r = check_split_moments(&DiscreteRV::rademacher(), 4.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && r.rhs == 1.0 && r.pass);
        let g = check_moment_gap(&DiscreteRV::rademacher(), 4.0).unwrap();
        assert_eq!(g.lhs, 0.0);
        assert!((g.rhs - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pointwise_examples() {
        let r = check_split_pointwise(2.0, 1.0, 4.0).unwrap();
        // (1/5)(4 + 1 + 2^{-1} + 2^3)
        assert!((r.rhs - 2.7).abs() < 1e-12 && r.lhs == 1.0);
        assert!(check_split_pointwise(1.5, 1.5, 3.0).unwrap().pass);
        assert!(check_split_pointwise(0.0, 1.0, 3.0).is_err());
        assert!(check_split_pointwise(1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn stroock_varopoulos_examples() {
        let r = check_stroock_varopoulos(1.0, 0.0, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 0.75));
        let r = check_stroock_varopoulos(1.0, -1.0, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (4.0, 3.0));
        let r = check_stroock_varopoulos(0.3, -1.7, 2.0).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonzero_mean() {
        let x = DiscreteRV::new(vec![(1.0, 0.5), (0.0, 0.5)]).unwrap();
        assert_eq!(check_split_moments(&x, 3.0).unwrap_err().code(), "E_MEAN");
        assert_eq!(check_moment_gap(&x, 3.0).unwrap_err().code(), "E_MEAN");
    }
}
