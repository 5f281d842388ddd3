//! Dense real-valued functions on the discrete cube `{-1,1}^n`.
//!
//! Point convention (fixed everywhere in the crate): bit `i` of the point
//! index `j` is set iff `x_{i+1} = -1`. The `{0,1}` vector `(1 - x)/2` of a
//! point is therefore exactly the bit pattern of its index, and the character
//! `W_S` evaluates to `(-1)^{popcount(j & S)}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::norm;

/// Largest dimension accepted by exhaustive operations (`2^24` points).
pub const MAX_DIM: usize = 24;

/// The value range a function asserts. Boolean kinds are checked exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BooleanKind {
    #[serde(rename = "pm1")]
    PlusMinusOne,
    #[serde(rename = "01")]
    ZeroOne,
    #[serde(rename = "pm01")]
    PlusMinusZeroOne,
    #[serde(rename = "real")]
    Real,
}

impl BooleanKind {
    pub fn admits(self, v: f64) -> bool {
        match self {
            BooleanKind::PlusMinusOne => v == 1.0 || v == -1.0,
            BooleanKind::ZeroOne => v == 0.0 || v == 1.0,
            BooleanKind::PlusMinusZeroOne => v == 1.0 || v == -1.0 || v == 0.0,
            BooleanKind::Real => v.is_finite(),
        }
    }

    pub fn is_boolean(self) -> bool {
        self != BooleanKind::Real
    }

    pub fn tag(self) -> &'static str {
        match self {
            BooleanKind::PlusMinusOne => "pm1",
            BooleanKind::ZeroOne => "01",
            BooleanKind::PlusMinusZeroOne => "pm01",
            BooleanKind::Real => "real",
        }
    }
}

impl fmt::Display for BooleanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for BooleanKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pm1" => BooleanKind::PlusMinusOne,
            "01" => BooleanKind::ZeroOne,
            "pm01" => BooleanKind::PlusMinusZeroOne,
            "real" => BooleanKind::Real,
            other => return Err(Error::Format(format!("unknown function kind `{other}`"))),
        })
    }
}

/// Value of coordinate `x_i` (1-based) at point index `j`.
#[inline]
pub fn coordinate(j: usize, i: usize) -> f64 {
    if (j >> (i - 1)) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `W_S(j) = (-1)^{|j ∧ S|}`
#[inline]
pub fn character_sign(j: usize, s: usize) -> f64 {
    if (j & s).count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::Capacity {
            what: "cube dimension",
            requested: n,
            max: MAX_DIM,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
    kind: BooleanKind,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>, kind: BooleanKind) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !kind.admits(**v)) {
            return Err(Error::Range { index, value, kind });
        }
        Ok(CubeFunction { n, values, kind })
    }

    pub fn real(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(n, values, BooleanKind::Real)
    }

    pub fn from_fn(n: usize, kind: BooleanKind, f: impl Fn(usize) -> f64) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, (0..1usize << n).map(f).collect(), kind)
    }

    /// A two-valued function from a predicate: TRUE maps to 1, FALSE to -1
    /// (`pm1`) or 0 (`01`).
    pub fn from_predicate(n: usize, kind: BooleanKind, pred: impl Fn(usize) -> bool) -> Result<Self> {
        let low = match kind {
            BooleanKind::PlusMinusOne => -1.0,
            BooleanKind::ZeroOne => 0.0,
            _ => {
                return Err(Error::WrongKind {
                    expected: "pm1 or 01",
                    found: kind,
                })
            }
        };
        Self::from_fn(n, kind, |j| if pred(j) { 1.0 } else { low })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        let kind = if c == 1.0 || c == -1.0 {
            BooleanKind::PlusMinusOne
        } else if c == 0.0 {
            BooleanKind::ZeroOne
        } else {
            BooleanKind::Real
        };
        Self::from_fn(n, kind, |_| c)
    }

    /// The character `W_S` for a subset bitmask `S`.
    pub fn character(n: usize, s: usize) -> Result<Self> {
        check_dim(n)?;
        if s >> n != 0 {
            return Err(Error::param("S", format!("subset {s:#b} has bits beyond n = {n}")));
        }
        Self::from_fn(n, BooleanKind::PlusMinusOne, |j| character_sign(j, s))
    }

    /// `x_i` (1-based).
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Coordinate { i, n });
        }
        Self::character(n, 1 << (i - 1))
    }

    pub fn parity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Self::character(n, (1usize << n) - 1)
    }

    /// Majority with ties (even `n`) broken towards 1.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_predicate(n, BooleanKind::PlusMinusOne, |j| {
            2 * (j.count_ones() as usize) <= n
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn kind(&self) -> BooleanKind {
        self.kind
    }

    /// Retag with a different kind, re-validating the range.
    pub fn with_kind(self, kind: BooleanKind) -> Result<Self> {
        Self::new(self.n, self.values, kind)
    }

    /// Smallest Boolean kind admitting every value, or `Real`.
    pub fn infer_kind(values: &[f64]) -> BooleanKind {
        [
            BooleanKind::PlusMinusOne,
            BooleanKind::ZeroOne,
            BooleanKind::PlusMinusZeroOne,
        ]
        .into_iter()
        .find(|k| values.iter().all(|&v| k.admits(v)))
        .unwrap_or(BooleanKind::Real)
    }

    pub(crate) fn require_kind(&self, allowed: &[BooleanKind], expected: &'static str) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::WrongKind {
                expected,
                found: self.kind,
            })
        }
    }

    /// Integer values for Boolean-tagged functions.
    pub fn integer_values(&self) -> Option<Vec<i64>> {
        self.kind
            .is_boolean()
            .then(|| self.values.iter().map(|&v| v as i64).collect())
    }

    pub fn mean(&self) -> f64 {
        norm::uniform_mean(&self.values)
    }

    /// Exact mean of a Boolean-tagged function.
    pub fn exact_mean(&self) -> Option<Dyadic> {
        let ints = self.integer_values()?;
        let s: i64 = ints.iter().sum();
        Some(Dyadic::new(s, self.n as u32))
    }

    /// Exact `P[f = 1]` for Boolean-tagged functions.
    pub fn exact_probability_of_one(&self) -> Option<Dyadic> {
        self.kind.is_boolean().then(|| {
            let c = self.values.iter().filter(|&&v| v == 1.0).count();
            Dyadic::from_count(c as u64, self.n as u32)
        })
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        norm::lp_uniform(&self.values, p)
    }

    /// `{-1,1}` to `{0,1}` via `(1 + f)/2`.
    pub fn to_zero_one(&self) -> Result<Self> {
        self.require_kind(&[BooleanKind::PlusMinusOne], "pm1")?;
        Self::new(
            self.n,
            self.values.iter().map(|v| (1.0 + v) / 2.0).collect(),
            BooleanKind::ZeroOne,
        )
    }

    /// `{0,1}` to `{-1,1}` via `2f - 1`.
    pub fn to_plus_minus_one(&self) -> Result<Self> {
        self.require_kind(&[BooleanKind::ZeroOne], "01")?;
        Self::new(
            self.n,
            self.values.iter().map(|v| 2.0 * v - 1.0).collect(),
            BooleanKind::PlusMinusOne,
        )
    }

    pub(crate) fn from_parts_unchecked(n: usize, values: Vec<f64>, kind: BooleanKind) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        CubeFunction { n, values, kind }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_convention() {
        // j = 0b10: x1 = +1, x2 = -1
        assert_eq!(coordinate(0b10, 1), 1.0);
        assert_eq!(coordinate(0b10, 2), -1.0);
        let d = CubeFunction::dictator(1, 1).unwrap();
        assert_eq!(d.values(), &[1.0, -1.0]);
        let p = CubeFunction::parity(2).unwrap();
        assert_eq!(p.values(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn validates_range_and_length() {
        assert!(CubeFunction::new(1, vec![1.0, 0.0], BooleanKind::PlusMinusOne).is_err());
        assert!(CubeFunction::new(2, vec![1.0, 0.0], BooleanKind::Real).is_err());
        assert!(CubeFunction::new(1, vec![1.0, f64::NAN], BooleanKind::Real).is_err());
        assert!(CubeFunction::new(1, vec![-1.0, 0.0], BooleanKind::PlusMinusZeroOne).is_ok());
    }

    #[test]
    fn rejects_oversized_dimension() {
        let e = CubeFunction::from_fn(25, BooleanKind::Real, |_| 0.0).unwrap_err();
        assert_eq!(e.code(), "E_CAPACITY");
    }

    #[test]
    fn exact_mean_of_majority() {
        let m = CubeFunction::majority(3).unwrap();
        assert_eq!(m.exact_mean().unwrap(), Dyadic::zero());
        let and2 = CubeFunction::from_predicate(2, BooleanKind::PlusMinusOne, |j| j == 0).unwrap();
        assert_eq!(and2.exact_mean().unwrap().to_string(), "-1/2");
        assert_eq!(and2.exact_probability_of_one().unwrap().to_string(), "1/4");
    }

    #[test]
    fn kind_conversions() {
        let d = CubeFunction::dictator(2, 1).unwrap();
        let z = d.to_zero_one().unwrap();
        assert_eq!(z.values(), &[1.0, 0.0, 1.0, 0.0]);
        assert_eq!(z.to_plus_minus_one().unwrap(), d);
        assert_eq!(CubeFunction::infer_kind(&[0.0, 1.0, -1.0]), BooleanKind::PlusMinusZeroOne);
        assert_eq!(CubeFunction::infer_kind(&[0.5]), BooleanKind::Real);
    }
}
