//! Contraction and Poincaré-type checks for symmetric Markov semigroups.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{check_p, kappa, params, CheckReport, POINTWISE_TOL, SWEEP_TOL};
use crate::cube::{check_dim, CubeFunction};
use crate::error::{Error, Result};
use crate::fourier::{heat, laplacian};
use crate::markov::{MarkovGenerator, MarkovOperator};
use crate::norm::{lp_uniform, signed_pow, uniform_mean};
use crate::tail::require_vanishing_below;

/// A symmetric Markov semigroup on a finite space, seen through the
/// operations the checks need.
pub trait Semigroup: Sync {
    fn states(&self) -> usize;
    /// `E_μ f`
    fn expectation(&self, f: &[f64]) -> Result<f64>;
    fn norm(&self, f: &[f64], p: f64) -> Result<f64>;
    /// `P_t f`
    fn evolve(&self, t: f64, f: &[f64]) -> Result<Vec<f64>>;
    /// `L f`
    fn generate(&self, f: &[f64]) -> Result<Vec<f64>>;
    fn poincare_constant(&self) -> Result<f64>;
    fn label(&self) -> String;
}

/// The heat semigroup on `{-1,1}^n`, evaluated by the Walsh transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hypercube {
    n: usize,
}

impl Hypercube {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n)?;
        if n == 0 {
            return Err(Error::param("n", "the 0-cube has no spectral gap"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn wrap(&self, f: &[f64]) -> Result<CubeFunction> {
        CubeFunction::real(self.n, f.to_vec())
    }
}

impl Semigroup for Hypercube {
    fn states(&self) -> usize {
        1 << self.n
    }

    fn expectation(&self, f: &[f64]) -> Result<f64> {
        self.wrap(f).map(|g| uniform_mean(g.values()))
    }

    fn norm(&self, f: &[f64], p: f64) -> Result<f64> {
        self.wrap(f)?;
        lp_uniform(f, p)
    }

    fn evolve(&self, t: f64, f: &[f64]) -> Result<Vec<f64>> {
        Ok(heat(&self.wrap(f)?, t)?.into_values())
    }

    fn generate(&self, f: &[f64]) -> Result<Vec<f64>> {
        Ok(laplacian(&self.wrap(f)?).into_values())
    }

    fn poincare_constant(&self) -> Result<f64> {
        Ok(1.0)
    }

    fn label(&self) -> String {
        format!("hypercube-{}", self.n)
    }
}

impl Semigroup for MarkovGenerator {
    fn states(&self) -> usize {
        self.len()
    }

    fn expectation(&self, f: &[f64]) -> Result<f64> {
        self.mean(f)
    }

    fn norm(&self, f: &[f64], p: f64) -> Result<f64> {
        self.lp_norm(f, p)
    }

    fn evolve(&self, t: f64, f: &[f64]) -> Result<Vec<f64>> {
        self.semigroup_apply(t, f)
    }

    fn generate(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.apply(f)
    }

    fn poincare_constant(&self) -> Result<f64> {
        MarkovGenerator::poincare_constant(self)
    }

    fn label(&self) -> String {
        format!("generator-{}", self.len())
    }
}

fn require_mean_zero(sg: &dyn Semigroup, f: &[f64]) -> Result<()> {
    let mean = sg.expectation(f)?;
    let scale = f.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if mean.abs() > 1e-12 * scale {
        return Err(Error::NonZeroMean { mean });
    }
    Ok(())
}

fn inner(sg: &dyn Semigroup, f: &[f64], g: &[f64]) -> Result<f64> {
    let prod: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
    sg.expectation(&prod)
}

/// Which exponent the heat-smoothing bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatMode {
    /// `(2p-2) / ((p²-2p+2) C)`
    Base,
    /// `(4p-4) / (C p² (1 + κ(p)^{-2}))`
    Kappa,
}

impl HeatMode {
    pub fn as_str(self) -> &'static str {
        match self {
            HeatMode::Base => "base",
            HeatMode::Kappa => "kappa",
        }
    }
}

/// Decay rate `r` in `‖P_t f‖_p <= e^{-rt} ‖f‖_p` for Poincaré constant `c`.
pub fn heat_rate(p: f64, c: f64, mode: HeatMode) -> Result<f64> {
    check_p(p)?;
    Ok(match mode {
        HeatMode::Base => (2.0 * p - 2.0) / ((p * p - 2.0 * p + 2.0) * c),
        // κ(p) → ∞ as p → 2, where both exponents equal 1/C
        HeatMode::Kappa if p == 2.0 => 1.0 / c,
        HeatMode::Kappa => {
            let k = kappa(p)?.value;
            (4.0 * p - 4.0) / (c * p * p * (1.0 + k.powi(-2)))
        }
    })
}

/// `‖P_t f‖_p <= e^{-rt} ‖f‖_p` for mean-zero `f`.
pub fn check_heat_smoothing(sg: &dyn Semigroup, f: &[f64], p: f64, t: f64, mode: HeatMode) -> Result<CheckReport> {
    require_mean_zero(sg, f)?;
    let c = sg.poincare_constant()?;
    let rate = heat_rate(p, c, mode)?;
    let norm = sg.norm(f, p)?;
    let evolved = sg.evolve(t, f)?;
    Ok(CheckReport::upper(
        "heat-smoothing",
        params([
            ("C", c.into()),
            ("mode", mode.as_str().into()),
            ("p", p.into()),
            ("space", sg.label().into()),
            ("t", t.into()),
        ]),
        sg.norm(&evolved, p)?,
        (-rate * t).exp() * norm,
        SWEEP_TOL * norm.max(1.0),
    ))
}

/// `E φ_{p-1}(f)·Lf >= (2p-2)/((p²-2p+2) C) · E|f|^p` for mean-zero `f`.
pub fn check_lp_poincare(sg: &dyn Semigroup, f: &[f64], p: f64) -> Result<CheckReport> {
    check_p(p)?;
    require_mean_zero(sg, f)?;
    let c = sg.poincare_constant()?;
    let phi: Vec<f64> = f.iter().map(|&v| signed_pow(v, p - 1.0)).collect();
    let lf = sg.generate(f)?;
    let abs_p = sg.norm(f, p)?.powf(p);
    Ok(CheckReport::lower(
        "lp-poincare",
        params([("C", c.into()), ("p", p.into()), ("space", sg.label().into())]),
        inner(sg, &phi, &lf)?,
        (2.0 * p - 2.0) / ((p * p - 2.0 * p + 2.0) * c) * abs_p,
        SWEEP_TOL * abs_p.max(1.0),
    ))
}

/// `‖P_t f‖_p <= e^{-2tk·min((p-1)/p, 1/p)} ‖f‖_p` for `{-1,0,1}`-valued
/// `f` whose coefficients vanish on every `|S| < k`.
pub fn check_tail_contraction(f: &CubeFunction, k: usize, p: f64, t: f64) -> Result<CheckReport> {
    check_p(p)?;
    if let Some((index, &value)) = f.values().iter().enumerate().find(|(_, v)| !(**v == 0.0 || v.abs() == 1.0)) {
        return Err(Error::Range {
            index,
            value,
            kind: crate::cube::BooleanKind::PlusMinusZeroOne,
        });
    }
    if k == 0 {
        return Err(Error::param("k", "tail contraction needs k >= 1"));
    }
    require_vanishing_below(f, k)?;
    let rate = 2.0 * k as f64 * ((p - 1.0) / p).min(1.0 / p);
    let norm = f.lp_norm(p)?;
    Ok(CheckReport::upper(
        "tail-contraction",
        params([("k", k.into()), ("n", f.n().into()), ("p", p.into()), ("t", t.into())]),
        heat(f, t)?.lp_norm(p)?,
        (-rate * t).exp() * norm,
        SWEEP_TOL * norm.max(1.0),
    ))
}

/// `(p-2)² E|f|^p + 4(p-1) E φ_{p/2}(f)·P φ_{p/2}(f) >= p² E φ_{p-1}(f)·Pf`
pub fn check_weak_stroock_varopoulos(op: &MarkovOperator, f: &[f64], p: f64) -> Result<CheckReport> {
    check_p(p)?;
    let space = op.space();
    let half: Vec<f64> = f.iter().map(|&v| signed_pow(v, p / 2.0)).collect();
    let pm1: Vec<f64> = f.iter().map(|&v| signed_pow(v, p - 1.0)).collect();
    let abs_p = space.lp_norm(f, p)?.powf(p);
    let lhs = (p - 2.0).powi(2) * abs_p + 4.0 * (p - 1.0) * space.inner(&half, &op.apply(&half)?)?;
    let rhs = p * p * space.inner(&pm1, &op.apply(f)?)?;
    Ok(CheckReport::lower(
        "weak-stroock-varopoulos",
        params([("p", p.into()), ("states", op.len().into())]),
        lhs,
        rhs,
        SWEEP_TOL * (p * p * abs_p).max(1.0),
    ))
}

/// `‖P_{ε+t} - P_ε‖_{L²(μ)} <= 2t/ε`, the left side read off the spectrum.
pub fn check_semigroup_increment(l: &MarkovGenerator, eps: f64, t: f64) -> Result<CheckReport> {
    if !(eps > 0.0) || !(t > 0.0) {
        return Err(Error::param("eps, t", format!("need positive times, got ({eps}, {t})")));
    }
    let lhs = l
        .eigenvalues()
        .iter()
        .map(|&lam| {
            let lam = lam.max(0.0);
            ((-(eps + t) * lam).exp() - (-eps * lam).exp()).abs()
        })
        .fold(0.0f64, f64::max);
    Ok(CheckReport::upper(
        "semigroup-increment",
        params([("eps", eps.into()), ("states", l.len().into()), ("t", t.into())]),
        lhs,
        2.0 * t / eps,
        POINTWISE_TOL,
    ))
}

fn mean_zero_gap_checked(op: &MarkovOperator) -> Result<f64> {
    let eps = op.mean_zero_gap();
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::param("eps", format!("mean-zero gap {eps} is outside [0, 1)")));
    }
    Ok(eps)
}

fn conjugate_max(p: f64) -> f64 {
    p.max(p / (p - 1.0))
}

/// `‖Pg‖_p <= (1 - 2^{2-p*} ε)^{1/p*} ‖g‖_p` for mean-zero `g`, with
/// `p* = max(p, p')` and `ε = 1 - sup ‖Pg‖₂²/‖g‖₂²` over mean-zero `g`.
pub fn check_nazarov(op: &MarkovOperator, g: &[f64], p: f64) -> Result<CheckReport> {
    check_p(p)?;
    let space = op.space();
    let mean = space.mean(g)?;
    if mean.abs() > 1e-12 * g.iter().fold(1.0f64, |m, v| m.max(v.abs())) {
        return Err(Error::NonZeroMean { mean });
    }
    let eps = mean_zero_gap_checked(op)?;
    let ps = conjugate_max(p);
    let norm = space.lp_norm(g, p)?;
    Ok(CheckReport::upper(
        "nazarov",
        params([("eps", eps.into()), ("p", p.into()), ("states", op.len().into())]),
        space.lp_norm(&op.apply(g)?, p)?,
        (1.0 - 2f64.powf(2.0 - ps) * eps).powf(1.0 / ps) * norm,
        SWEEP_TOL * norm.max(1.0),
    ))
}

/// Builds `T f = (c·Pf, f - E f)` on `Ω × {0,1}` with weights `μ` and
/// `c²ε·μ`, and checks `‖T‖₁ <= c + 2c²ε`, `‖T‖_∞ <= max(c, 2)` and
/// `‖T‖₂ <= c`, where `c = (2^{1/(p-1)} - 2ε)^{-1}` for `p <= 2` and `2`
/// otherwise.
pub fn extension_operator_checks(op: &MarkovOperator, p: f64) -> Result<Vec<CheckReport>> {
    check_p(p)?;
    let eps = mean_zero_gap_checked(op)?;
    let c = if p <= 2.0 {
        1.0 / (2f64.powf(1.0 / (p - 1.0)) - 2.0 * eps)
    } else {
        2.0
    };
    let n = op.len();
    let mu = op.space().mu();
    let pm = op.matrix();
    let t = DMatrix::from_fn(2 * n, n, |r, x| {
        if r < n {
            c * pm[(r, x)]
        } else {
            (if r - n == x { 1.0 } else { 0.0 }) - mu[x]
        }
    });
    let weight = |r: usize| if r < n { mu[r] } else { c * c * eps * mu[r - n] };

    // extreme points of the weighted L¹ ball are normalized point masses
    let norm1 = (0..n)
        .map(|x| (0..2 * n).map(|r| weight(r) * t[(r, x)].abs()).sum::<f64>() / mu[x])
        .fold(0.0f64, f64::max);
    let norm_inf = (0..2 * n)
        .filter(|&r| weight(r) > 0.0)
        .map(|r| (0..n).map(|x| t[(r, x)].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let scaled = DMatrix::from_fn(2 * n, n, |r, x| weight(r).sqrt() * t[(r, x)] / mu[x].sqrt());
    let gram = scaled.transpose() * &scaled;
    let top = SymmetricEigen::new((&gram + gram.transpose()) * 0.5)
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &v| m.max(v));
    let norm2 = top.max(0.0).sqrt();

    let base = |which: &str| {
        params([
            ("c", c.into()),
            ("eps", eps.into()),
            ("norm", which.into()),
            ("p", p.into()),
            ("states", n.into()),
        ])
    };
    Ok(vec![
        CheckReport::upper("nazarov-extension", base("1"), norm1, c + 2.0 * c * c * eps, SWEEP_TOL),
        CheckReport::upper("nazarov-extension", base("inf"), norm_inf, c.max(2.0), SWEEP_TOL),
        CheckReport::upper("nazarov-extension", base("2"), norm2, c, SWEEP_TOL),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::FiniteSpace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dictator_equality_at_two() {
        let cube = Hypercube::new(3).unwrap();
        let f = CubeFunction::dictator(3, 2).unwrap();
        for t in [0.01, 0.5, 2.0] {
            for mode in [HeatMode::Base, HeatMode::Kappa] {
                let r = check_heat_smoothing(&cube, f.values(), 2.0, t, mode).unwrap();
                assert!((r.lhs - r.rhs).abs() < 1e-12, "{r}");
            }
        }
    }

    #[test]
    fn kappa_rate_at_four() {
        assert!((heat_rate(4.0, 1.0, HeatMode::Kappa).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((heat_rate(6.0, 1.0, HeatMode::Kappa).unwrap() - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn poincare_examples() {
        let cube = Hypercube::new(3).unwrap();
        let w = CubeFunction::character(3, 0b110).unwrap();
        let r = check_lp_poincare(&cube, w.values(), 2.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);
        let d = CubeFunction::dictator(3, 1).unwrap();
        let r = check_lp_poincare(&cube, d.values(), 4.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 0.6).abs() < 1e-12);
        let one = CubeFunction::constant(3, 1.0).unwrap();
        assert_eq!(check_lp_poincare(&cube, one.values(), 2.0).unwrap_err().code(), "E_MEAN");
    }

    #[test]
    fn tail_contraction_examples() {
        let w = CubeFunction::character(4, 0b0111).unwrap();
        let r = check_tail_contraction(&w, 3, 2.0, 0.3).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12);
        let r = check_tail_contraction(&w, 3, 4.0, 0.3).unwrap();
        assert!((r.lhs - (-0.9f64).exp()).abs() < 1e-12);
        assert!((r.rhs - (-0.45f64).exp()).abs() < 1e-12);
        assert_eq!(check_tail_contraction(&w, 4, 2.0, 0.3).unwrap_err().code(), "E_TAIL");
        let half = CubeFunction::real(1, vec![0.5, -0.5]).unwrap();
        assert_eq!(check_tail_contraction(&half, 1, 2.0, 0.3).unwrap_err().code(), "E_RANGE");
    }

    #[test]
    fn weak_sv_identity_is_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let space = FiniteSpace::new(vec![0.2, 0.3, 0.5], None, None).unwrap();
        let id = MarkovOperator::identity(space);
        let f: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for p in [1.3, 2.0, 3.7] {
            let r = check_weak_stroock_varopoulos(&id, &f, p).unwrap();
            assert!((r.lhs - r.rhs).abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn increment_on_hypercube() {
        let l = MarkovGenerator::hypercube(4).unwrap();
        let r = check_semigroup_increment(&l, 1.0, 0.1).unwrap();
        let oracle = (0..=4)
            .map(|k| ((-1.1 * k as f64).exp() - (-(k as f64)).exp()).abs())
            .fold(0.0, f64::max);
        assert!((r.lhs - oracle).abs() < 1e-12 && r.pass);
    }

    #[test]
    fn nazarov_identity_and_top_eigenfunction() {
        let l = MarkovGenerator::two_state(1.0).unwrap();
        let op = MarkovOperator::from_generator(&l, 0.4).unwrap();
        let g = vec![1.0, -1.0];
        let r = check_nazarov(&op, &g, 2.0).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12, "{r}");
        let id = MarkovOperator::identity(l.space().clone());
        let r = check_nazarov(&id, &g, 3.0).unwrap();
        assert_eq!(r.params["eps"], 0.0);
        assert!((r.lhs - r.rhs).abs() < 1e-12);
        for p in [1.5, 3.0] {
            assert!(extension_operator_checks(&op, p).unwrap().iter().all(|r| r.pass));
        }
    }
}
