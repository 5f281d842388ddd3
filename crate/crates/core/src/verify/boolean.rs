//! Checks specific to the hypercube: Talagrand-type bounds for tail
//! functions, hypercontractivity, Beckner, edge isoperimetry, KKL ratios and
//! the empirical decay-exponent probe.

use serde::{Deserialize, Serialize};

use super::{check_p, params, CheckReport, POINTWISE_TOL, SWEEP_TOL};
use crate::cube::{BooleanKind, CubeFunction};
use crate::error::{Error, Result};
use crate::fourier::{heat, laplacian};
use crate::influence::{discrete_derivative, max_pivotal_probability, total_pivotal};
use crate::norm::uniform_mean;
use crate::tail::require_vanishing_below;

/// Both links of the chain
/// `E f² <= (3/k) Σ E(D_i f)² / max(1, ln(‖D_i f‖₂/‖D_i f‖_q))
///       <= 8 Σ E(D_i f)² / (k + ln(‖D_i f‖₂/‖D_i f‖₁))`,
/// `q = 1 + e^{-2/k}`, for `f` with every `f̂(S)`, `|S| < k`, zero.
/// Coordinates with `D_i f ≡ 0` contribute nothing.
pub fn check_talagrand_tail(f: &CubeFunction, k: usize) -> Result<[CheckReport; 2]> {
    if k == 0 {
        return Err(Error::param("k", "need k >= 1"));
    }
    require_vanishing_below(f, k)?;
    let energy = uniform_mean(&f.values().iter().map(|v| v * v).collect::<Vec<_>>());
    if energy == 0.0 {
        return Err(Error::param("f", "function is identically zero"));
    }
    let q = 1.0 + (-2.0 / k as f64).exp();
    let kf = k as f64;
    let (mut middle, mut right) = (0.0, 0.0);
    for i in 1..=f.n() {
        let d = discrete_derivative(f, i)?;
        let n2 = d.lp_norm(2.0)?;
        if n2 == 0.0 {
            continue;
        }
        let e = n2 * n2;
        middle += e / (n2 / d.lp_norm(q)?).ln().max(1.0);
        right += e / (kf + (n2 / d.lp_norm(1.0)?).ln());
    }
    middle *= 3.0 / kf;
    right *= 8.0;
    let ps = |link: &str| params([("k", k.into()), ("link", link.into()), ("n", f.n().into()), ("q", q.into())]);
    let tol = SWEEP_TOL * energy.max(1.0);
    Ok([
        CheckReport::upper("talagrand", ps("energy<=middle"), energy, middle, tol),
        CheckReport::upper("talagrand", ps("middle<=right"), middle, right, tol),
    ])
}

/// `‖P_t f‖₂ <= ‖f‖_{1+e^{-2t}}`
pub fn check_hypercontractivity(f: &CubeFunction, t: f64) -> Result<CheckReport> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("need t > 0, got {t}")));
    }
    let q = 1.0 + (-2.0 * t).exp();
    let rhs = f.lp_norm(q)?;
    Ok(CheckReport::upper(
        "hypercontractivity",
        params([("n", f.n().into()), ("q", q.into()), ("t", t.into())]),
        heat(f, t)?.lp_norm(2.0)?,
        rhs,
        SWEEP_TOL * rhs.max(1.0),
    ))
}

/// `(2 - p) E f·Lf >= E f² - (E|f|^p)^{2/p}` for `p ∈ [1, 2]`.
pub fn check_beckner(f: &CubeFunction, p: f64) -> Result<CheckReport> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::param("p", format!("need p in [1, 2], got {p}")));
    }
    let lf = laplacian(f);
    let energy: f64 = uniform_mean(&f.values().iter().zip(lf.values()).map(|(a, b)| a * b).collect::<Vec<_>>());
    let l2 = f.lp_norm(2.0)?;
    let lp = f.lp_norm(p)?;
    Ok(CheckReport::lower(
        "beckner",
        params([("n", f.n().into()), ("p", p.into())]),
        (2.0 - p) * energy,
        l2 * l2 - lp * lp,
        SWEEP_TOL * (l2 * l2).max(1.0),
    ))
}

/// `Σ_i P[f(x) != f(x ⊕ e_i)] >= (2/ln 2) · E f · ln(1/E f)` for
/// `{0,1}`-valued `f`. Constant `f` is reported as a degenerate pass.
pub fn check_harper(f: &CubeFunction) -> Result<CheckReport> {
    f.require_kind(&[BooleanKind::ZeroOne], "01")?;
    let mean = f.exact_mean().map(|d| d.to_f64()).unwrap_or_else(|| f.mean());
    let lhs = total_pivotal(f)?.to_f64();
    let ps = params([("mean", mean.into()), ("n", f.n().into())]);
    if mean == 0.0 || mean == 1.0 {
        return Ok(CheckReport::lower("harper", ps, lhs, 0.0, POINTWISE_TOL).with_note("degenerate: constant function"));
    }
    let rhs = 2.0 / std::f64::consts::LN_2 * mean * (1.0 / mean).ln();
    Ok(CheckReport::lower("harper", ps, lhs, rhs, POINTWISE_TOL))
}

/// `max_i pivotal_i(f) / (Var f · ln n / n)` for `±1`-valued `f`; reported
/// without a threshold.
pub fn check_kkl_ratio(f: &CubeFunction) -> Result<CheckReport> {
    f.require_kind(&[BooleanKind::PlusMinusOne], "pm1")?;
    let n = f.n();
    if n < 2 {
        return Err(Error::param("n", "need n >= 2 for ln n > 0"));
    }
    let mean = f.mean();
    let var = 1.0 - mean * mean;
    if var <= 0.0 {
        return Err(Error::param("f", "function is constant"));
    }
    let lhs = max_pivotal_probability(f)?.to_f64();
    let rhs = var * (n as f64).ln() / n as f64;
    Ok(
        CheckReport::informational("kkl-ratio", params([("n", n.into()), ("variance", var.into())]), lhs, rhs, "ratio lhs/rhs")
            .with_param("ratio", lhs / rhs),
    )
}

/// Largest `c` with `‖P_t f‖_p <= e^{-tkc} ‖f‖_p` over a family and a
/// time grid. Empirical only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayEstimate {
    pub p: f64,
    pub k: usize,
    pub c: f64,
    pub samples: usize,
    /// Family index and time at which the minimum was attained.
    pub worst: (usize, f64),
    pub note: String,
}

pub fn estimate_decay_exponent(family: &[CubeFunction], p: f64, k: usize, times: &[f64]) -> Result<DecayEstimate> {
    check_p(p)?;
    if k == 0 {
        return Err(Error::param("k", "need k >= 1"));
    }
    if times.is_empty() || times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::param("times", "need a nonempty grid of positive times"));
    }
    let mut best: Option<(f64, usize, f64)> = None;
    let mut samples = 0;
    for (idx, f) in family.iter().enumerate() {
        require_vanishing_below(f, k)?;
        let norm = f.lp_norm(p)?;
        if norm == 0.0 {
            continue;
        }
        for &t in times {
            let ratio = heat(f, t)?.lp_norm(p)? / norm;
            let c = -ratio.ln() / (t * k as f64);
            samples += 1;
            if best.is_none_or(|(b, _, _)| c < b) {
                best = Some((c, idx, t));
            }
        }
    }
    let (c, idx, t) = best.ok_or_else(|| Error::param("family", "no nonzero functions to fit"))?;
    Ok(DecayEstimate {
        p,
        k,
        c,
        samples,
        worst: (idx, t),
        note: "empirical fit over a finite family; not a proof".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::project_above;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn talagrand_closed_cases() {
        let d = CubeFunction::dictator(3, 1).unwrap();
        let [a, b] = check_talagrand_tail(&d, 1).unwrap();
        assert_eq!((a.lhs, a.rhs), (1.0, 3.0));
        assert!(a.pass && b.pass);
        for n in 1..=6 {
            let p = CubeFunction::parity(n).unwrap();
            let [a, b] = check_talagrand_tail(&p, n).unwrap();
            assert!((a.rhs - 3.0).abs() < 1e-12 && a.pass && b.pass);
        }
        assert_eq!(check_talagrand_tail(&d, 2).unwrap_err().code(), "E_TAIL");
    }

    #[test]
    fn talagrand_on_projected_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let n = rng.gen_range(2..=7);
            let k = rng.gen_range(1..=n.min(3));
            let f = CubeFunction::real(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let g = project_above(&f, k);
            let [a, b] = check_talagrand_tail(&g, k).unwrap();
            assert!(a.pass && b.pass, "{a}\n{b}");
        }
    }

    #[test]
    fn harper_equalities() {
        let half = CubeFunction::dictator(3, 1).unwrap().to_zero_one().unwrap();
        let r = check_harper(&half).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-12 && r.pass);
        let point = CubeFunction::from_predicate(4, BooleanKind::ZeroOne, |j| j == 0).unwrap();
        let r = check_harper(&point).unwrap();
        assert_eq!(r.lhs, 0.5);
        assert!((r.rhs - 0.5).abs() < 1e-12 && r.pass);
        let zero = CubeFunction::from_predicate(2, BooleanKind::ZeroOne, |_| false).unwrap();
        assert!(check_harper(&zero).unwrap().note.is_some());
    }

    #[test]
    fn kkl_dictator_ratio() {
        let d = CubeFunction::dictator(8, 3).unwrap();
        let r = check_kkl_ratio(&d).unwrap();
        assert!((r.ratio() - 8.0 / 8f64.ln()).abs() < 1e-12);
        assert!(check_kkl_ratio(&CubeFunction::constant(3, 1.0).unwrap().with_kind(BooleanKind::PlusMinusOne).unwrap()).is_err());
    }

    #[test]
    fn beckner_and_hypercontractivity_examples() {
        let d = CubeFunction::dictator(2, 1).unwrap();
        let r = check_beckner(&d, 1.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 0.0));
        let r = check_beckner(&d, 2.0).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.rhs.abs() < 1e-15);
        let f = CubeFunction::real(1, vec![1.1, 0.9]).unwrap();
        assert!(check_hypercontractivity(&f, 0.5f64.ln() / -2.0).unwrap().pass);
    }

    #[test]
    fn decay_exponent_of_characters() {
        let fam: Vec<_> = [0b0011usize, 0b0101, 0b1100]
            .iter()
            .map(|&s| CubeFunction::character(4, s).unwrap())
            .collect();
        let e = estimate_decay_exponent(&fam, 2.0, 2, &[0.1, 1.0]).unwrap();
        assert!((e.c - 1.0).abs() < 1e-12);
        assert!(estimate_decay_exponent(&[], 2.0, 2, &[0.1]).is_err());
    }
}
