//! Numerical certification of the contraction, Poincaré, influence and
//! interpolation inequalities.
//!
//! Each `check_*` evaluates both sides of one inequality and returns a
//! [`CheckReport`]; [`sweep`] runs seeded families of them in parallel.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

mod boolean;
mod kappa;
mod scalar;
mod semigroup;
pub mod sweep;

pub use boolean::{
    check_beckner, check_harper, check_hypercontractivity, check_kkl_ratio, check_talagrand_tail,
    estimate_decay_exponent, DecayEstimate,
};
pub use kappa::{extremal_two_point, kappa, Extremal, Kappa};
pub use scalar::{check_moment_gap, check_split_moments, check_split_pointwise, check_stroock_varopoulos};
pub use semigroup::{
    check_heat_smoothing, check_lp_poincare, check_nazarov, check_semigroup_increment, check_tail_contraction,
    check_weak_stroock_varopoulos, extension_operator_checks, heat_rate, HeatMode, Hypercube, Semigroup,
};
pub use sweep::{run_sweep, CheckId, SweepConfig, SweepOutcome};

/// Tolerance for pointwise algebraic identities.
pub const POINTWISE_TOL: f64 = 1e-12;
/// Tolerance for exhaustive function sweeps.
pub const SWEEP_TOL: f64 = 1e-10;
/// Tolerance for quantities produced by the 1-D minimizer.
pub const SOLVER_TOL: f64 = 1e-8;

/// Parameters recorded with a report, serialized in key order.
pub type Params = BTreeMap<String, Value>;

pub fn params<const N: usize>(pairs: [(&str, Value); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Outcome of one inequality evaluation. `slack >= -tol` is a pass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    fn from_slack(check_id: &str, params: Params, lhs: f64, rhs: f64, slack: f64, tol: f64) -> Self {
        Self {
            check_id: check_id.to_string(),
            params,
            lhs,
            rhs,
            slack,
            tol,
            pass: slack >= -tol,
            note: None,
        }
    }

    /// `lhs <= rhs`
    pub fn upper(check_id: &str, params: Params, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::from_slack(check_id, params, lhs, rhs, rhs - lhs, tol)
    }

    /// `lhs >= rhs`
    pub fn lower(check_id: &str, params: Params, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::from_slack(check_id, params, lhs, rhs, lhs - rhs, tol)
    }

    /// `|lhs - rhs| <= tol`
    pub fn equality(check_id: &str, params: Params, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::from_slack(check_id, params, lhs, rhs, -(lhs - rhs).abs(), tol)
    }

    /// `|lhs - rhs| <= tol·|rhs|`; slack is the negated relative error.
    pub fn relative_equality(check_id: &str, params: Params, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = rhs.abs().max(f64::MIN_POSITIVE);
        Self::from_slack(check_id, params, lhs, rhs, -(lhs - rhs).abs() / scale, tol)
    }

    /// A measurement with no threshold; always passes.
    pub fn informational(check_id: &str, params: Params, lhs: f64, rhs: f64, note: &str) -> Self {
        let mut r = Self::from_slack(check_id, params, lhs, rhs, 0.0, 0.0);
        r.note = Some(note.to_string());
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// `lhs / rhs`, the quantity of interest for informational reports.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} lhs={:.12e} rhs={:.12e} slack={:.3e} tol={:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.lhs,
            self.rhs,
            self.slack,
            self.tol
        )?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

/// A finitely supported real random variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteRV {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteRV {
    /// `atoms` are `(value, probability)`; probabilities must be positive
    /// and sum to 1 within `1e-12`.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::param("atoms", "need at least one atom"));
        }
        if let Some(&(v, q)) = atoms.iter().find(|(v, q)| !(*q > 0.0) || !v.is_finite()) {
            return Err(Error::param("atoms", format!("atom {v} has invalid probability {q}")));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::param("atoms", format!("probabilities sum to {total}")));
        }
        Ok(Self { atoms })
    }

    /// `P(X = 1) = P(X = -1) = 1/2`.
    pub fn rademacher() -> Self {
        Self {
            atoms: vec![(1.0, 0.5), (-1.0, 0.5)],
        }
    }

    /// Random mean-zero variable with `atoms` atoms: random weights and
    /// values, then the values are recentred.
    pub fn random_mean_zero<R: rand::Rng + ?Sized>(atoms: usize, rng: &mut R) -> Result<Self> {
        if atoms < 2 {
            return Err(Error::param("atoms", "a nonzero mean-zero variable needs two atoms"));
        }
        let raw: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut probs: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let drift = 1.0 - probs.iter().sum::<f64>();
        probs[0] += drift;
        let scale = rng.gen_range(0.1..5.0);
        let values: Vec<f64> = (0..atoms).map(|_| rng.gen_range(-scale..scale)).collect();
        let mean: f64 = values.iter().zip(&probs).map(|(v, q)| v * q).sum();
        Self::new(values.iter().map(|v| v - mean).zip(probs).collect())
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn expect(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(v, q)| q * g(v)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|v| v)
    }

    /// `E|X|^p`
    pub fn abs_moment(&self, p: f64) -> f64 {
        self.expect(|v| v.abs().powf(p))
    }

    /// `E X₊^s`
    pub fn positive_moment(&self, s: f64) -> f64 {
        self.expect(|v| v.max(0.0).powf(s))
    }

    /// `E X₋^s`
    pub fn negative_moment(&self, s: f64) -> f64 {
        self.expect(|v| (-v).max(0.0).powf(s))
    }

    pub(crate) fn require_mean_zero(&self) -> Result<()> {
        let scale = self.atoms.iter().fold(1.0f64, |m, a| m.max(a.0.abs()));
        let mean = self.mean();
        if mean.abs() > 1e-12 * scale {
            return Err(Error::NonZeroMean { mean });
        }
        Ok(())
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::param("p", format!("need 1 < p < ∞, got {p}")));
    }
    Ok(())
}

pub(crate) fn check_p_not_two(p: f64) -> Result<()> {
    check_p(p)?;
    if p == 2.0 {
        return Err(Error::param("p", "p = 2 is a singular case here"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn report_orientation() {
        let up = CheckReport::upper("x", Params::new(), 1.0, 2.0, 0.0);
        assert!(up.pass && up.slack == 1.0);
        let lo = CheckReport::lower("x", Params::new(), 1.0, 2.0, 1e-10);
        assert!(!lo.pass);
        let eq = CheckReport::equality("x", Params::new(), 1.0, 1.0 + 1e-13, 1e-12);
        assert!(eq.pass && eq.slack <= 0.0);
        let rel = CheckReport::relative_equality("x", Params::new(), 100.0, 100.0 + 1e-7, 1e-8);
        assert!(rel.pass);
    }

    #[test]
    fn discrete_rv_validation() {
        assert!(DiscreteRV::new(vec![(1.0, 0.5), (-1.0, 0.4)]).is_err());
        assert!(DiscreteRV::new(vec![(1.0, 0.0), (-1.0, 1.0)]).is_err());
        let r = DiscreteRV::rademacher();
        assert_eq!(r.mean(), 0.0);
        assert_eq!(r.positive_moment(2.0), 0.5);
        assert_eq!(r.abs_moment(4.0), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for atoms in 2..=6 {
            let x = DiscreteRV::random_mean_zero(atoms, &mut rng).unwrap();
            x.require_mean_zero().unwrap();
        }
    }
}
