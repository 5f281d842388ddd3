//! The sharp constant `κ(p) = inf_{u>1} (u^s + u^{-s}) / (u - u^{-1})`,
//! `s = p/(p-2)`, and the two-point distribution attaining it.

use serde::{Deserialize, Serialize};

use super::{check_p_not_two, params, CheckReport, DiscreteRV, SOLVER_TOL};
use crate::error::{Error, Result};
use crate::markov::MarkovGenerator;
use crate::norm::signed_pow;

/// `κ(p)` and the minimizing `u > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub p: f64,
    pub value: f64,
    pub u: f64,
}

/// With `y = ln u` the objective is `cosh(|s|y) / sinh(y)`, evaluated in a
/// form that stays finite for large `y`.
fn objective(a: f64, y: f64) -> f64 {
    ((a - 1.0) * y).exp() * (1.0 + (-2.0 * a * y).exp()) / -(-2.0 * y).exp_m1()
}

/// `d/dy ln(objective) = |s|·tanh(|s|y) - coth(y)`, strictly increasing.
fn log_slope(a: f64, y: f64) -> f64 {
    a * (a * y).tanh() - 1.0 / y.tanh()
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

pub fn kappa(p: f64) -> Result<Kappa> {
    check_p_not_two(p)?;
    let a = (p / (p - 2.0)).abs();
    // expanding geometric grid until the objective turns upward
    let mut ys = vec![1e-6];
    let mut vals = vec![objective(a, 1e-6)];
    let bracket = loop {
        let y = ys[ys.len() - 1] * 1.5;
        let v = objective(a, y);
        if !v.is_finite() {
            return Err(Error::Solver(format!(
                "κ({p}): objective overflowed at ln u = {y:e} before a bracket was found"
            )));
        }
        ys.push(y);
        vals.push(v);
        let i = ys.len() - 2;
        if vals[i + 1] > vals[i] {
            break (ys[i.saturating_sub(1)], ys[i + 1]);
        }
        if ys.len() > 400 {
            return Err(Error::Solver(format!("κ({p}): no bracket up to ln u = {y:e}")));
        }
    };
    let (mut lo, mut hi) = bracket;
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (objective(a, x1), objective(a, x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = objective(a, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = objective(a, x2);
        }
    }
    // the flat minimum leaves ln u accurate only to ~1e-8; finish on the
    // monotone log-derivative
    let (mut blo, mut bhi) = (lo * 0.5, hi * 2.0);
    let y = if log_slope(a, blo) < 0.0 && log_slope(a, bhi) > 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (blo + bhi);
            if mid <= blo || mid >= bhi {
                break;
            }
            if log_slope(a, mid) < 0.0 {
                blo = mid;
            } else {
                bhi = mid;
            }
        }
        0.5 * (blo + bhi)
    } else {
        0.5 * (lo + hi)
    };
    let value = objective(a, y);
    if !value.is_finite() {
        return Err(Error::Solver(format!("κ({p}): bracket [{lo:e}, {hi:e}] gave a non-finite value")));
    }
    Ok(Kappa { p, value, u: y.exp() })
}

/// The extremal mean-zero variable for `p`, with the two equality reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Extremal {
    pub kappa: Kappa,
    pub alpha: f64,
    pub beta: f64,
    pub x: DiscreteRV,
    pub reports: Vec<CheckReport>,
}

/// Builds `X` with `P(X = β) = α`, `P(X = -α) = β`,
/// `α = 1/(1 + v^{4/(p-2)})` at the minimizer `v` of `κ(p)`, and checks
/// `(κ² + 1)(E X₊^{p/2} - E X₋^{p/2})² = E|X|^p` together with
/// `E φ_{p/2}(f) L φ_{p/2}(f) = E|f|^p / (C(1 + κ^{-2}))` for `f(x) = x`
/// on the two-point generator `C^{-1}(I - E)`.
pub fn extremal_two_point(p: f64, c: f64) -> Result<Extremal> {
    let k = kappa(p)?;
    let alpha = 1.0 / (1.0 + k.u.powf(4.0 / (p - 2.0)));
    let beta = 1.0 - alpha;
    let x = DiscreteRV::new(vec![(beta, alpha), (-alpha, beta)])?;
    let gap = x.positive_moment(p / 2.0) - x.negative_moment(p / 2.0);
    let moment = x.abs_moment(p);
    let ps = params([
        ("p", p.into()),
        ("kappa", k.value.into()),
        ("v", k.u.into()),
        ("alpha", alpha.into()),
    ]);
    let two_point = CheckReport::relative_equality(
        "extremal-two-point",
        ps.clone(),
        (k.value * k.value + 1.0) * gap * gap,
        moment,
        SOLVER_TOL,
    );

    let gen = MarkovGenerator::extremal(alpha, beta, c)?;
    let f = gen.space().positions().to_vec();
    let phi: Vec<f64> = f.iter().map(|&v| signed_pow(v, p / 2.0)).collect();
    let energy = gen.dirichlet_form(&phi, &phi)?;
    let abs_p: f64 = f.iter().zip(gen.space().mu()).map(|(v, m)| m * v.abs().powf(p)).sum();
    let generator = CheckReport::relative_equality(
        "extremal-generator",
        {
            let mut q = ps;
            q.insert("C".into(), c.into());
            q
        },
        energy,
        abs_p / (c * (1.0 + k.value.powi(-2))),
        SOLVER_TOL,
    );
    Ok(Extremal {
        kappa: k,
        alpha,
        beta,
        x,
        reports: vec![two_point, generator],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((kappa(4.0).unwrap().value - 8f64.sqrt()).abs() < 1e-12);
        assert!((kappa(4.0 / 3.0).unwrap().value - 8f64.sqrt()).abs() < 1e-12);
        assert!((kappa(6.0).unwrap().value - 2.0).abs() < 1e-12);
        assert!((kappa(1.2).unwrap().value - 2.0).abs() < 1e-12);
        let v = (2f64.sqrt() + 6f64.sqrt()) / 2.0;
        assert!((kappa(4.0).unwrap().u - v).abs() < 1e-10);
    }

    #[test]
    fn rejects_two_and_bad_p() {
        assert!(kappa(2.0).is_err());
        assert!(kappa(1.0).is_err());
        assert!(kappa(f64::NAN).is_err());
    }

    #[test]
    fn extremal_at_four() {
        let e = extremal_two_point(4.0, 1.0).unwrap();
        assert!((e.alpha - 1.0 / (3.0 + 3f64.sqrt())).abs() < 1e-10);
        assert!(e.reports.iter().all(|r| r.pass), "{:?}", e.reports);
        assert!(e.x.mean().abs() < 1e-15);
    }

    #[test]
    fn extreme_exponents_converge() {
        for p in [1.01, 1.05, 1.99, 2.01, 3.0, 20.0, 100.0] {
            let k = kappa(p).unwrap();
            let s = (p / (p - 2.0)).abs();
            assert!(k.value >= s - 1e-12, "p={p}");
            assert!(k.u > 1.0);
        }
    }
}
