//! Discrete derivatives and influences.
//!
//! Two normalizations are exposed. `pivotal_probability(f, i)` is
//! `P[f(x) != f(x ⊕ e_i)]` (deterministic flip); it satisfies
//! `Σ_i pivotal = Σ_S |S| f̂(S)²` for `±1`-valued `f` and is the quantity in
//! the edge-isoperimetric inequality. `influence(f, i)` resamples `x_i`
//! uniformly instead, which is exactly half the pivotal probability.

use crate::cube::{BooleanKind, CubeFunction};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

fn check_coordinate(f: &CubeFunction, i: usize) -> Result<()> {
    if i == 0 || i > f.n() {
        return Err(Error::Coordinate { i, n: f.n() });
    }
    Ok(())
}

/// `D_i f(x) = (f(x) - f(x with x_i negated)) / 2`, `i` 1-based.
pub fn discrete_derivative(f: &CubeFunction, i: usize) -> Result<CubeFunction> {
    check_coordinate(f, i)?;
    let bit = 1usize << (i - 1);
    let v = f.values();
    let values: Vec<f64> = (0..v.len()).map(|j| (v[j] - v[j ^ bit]) / 2.0).collect();
    let kind = match f.kind() {
        BooleanKind::PlusMinusOne => BooleanKind::PlusMinusZeroOne,
        _ => CubeFunction::infer_kind(&values),
    };
    CubeFunction::new(f.n(), values, kind)
}

/// Number of points `j` with `f(j) != f(j ⊕ e_i)`.
fn disagreeing_points(f: &CubeFunction, i: usize) -> u64 {
    let bit = 1usize << (i - 1);
    let v = f.values();
    (0..v.len())
        .filter(|&j| j & bit == 0 && v[j] != v[j ^ bit])
        .count() as u64
        * 2
}

fn require_boolean(f: &CubeFunction) -> Result<()> {
    f.require_kind(
        &[
            BooleanKind::PlusMinusOne,
            BooleanKind::ZeroOne,
            BooleanKind::PlusMinusZeroOne,
        ],
        "a Boolean-tagged function",
    )
}

/// `P[f(x) != f(x ⊕ e_i)]`, exact. Accepts any Boolean-tagged function.
pub fn pivotal_probability(f: &CubeFunction, i: usize) -> Result<Dyadic> {
    require_boolean(f)?;
    check_coordinate(f, i)?;
    Ok(Dyadic::from_count(disagreeing_points(f, i), f.n() as u32))
}

/// Pivotal probabilities of all coordinates, in coordinate order.
pub fn pivotal_probabilities(f: &CubeFunction) -> Result<Vec<Dyadic>> {
    require_boolean(f)?;
    Ok((1..=f.n())
        .map(|i| Dyadic::from_count(disagreeing_points(f, i), f.n() as u32))
        .collect())
}

pub fn max_pivotal_probability(f: &CubeFunction) -> Result<Dyadic> {
    Ok(pivotal_probabilities(f)?
        .into_iter()
        .max()
        .unwrap_or_else(Dyadic::zero))
}

/// `Σ_i P[f(x) != f(x ⊕ e_i)]` for any Boolean-tagged function.
pub fn total_pivotal(f: &CubeFunction) -> Result<Dyadic> {
    Ok(pivotal_probabilities(f)?
        .iter()
        .fold(Dyadic::zero(), |acc, p| acc + p))
}

/// Resampling influence `P[f(.., x_i, ..) != f(.., y, ..)]`, `y` uniform:
/// half the pivotal probability. `f` must be `±1`-valued.
pub fn influence(f: &CubeFunction, i: usize) -> Result<Dyadic> {
    f.require_kind(&[BooleanKind::PlusMinusOne], "pm1")?;
    Ok(pivotal_probability(f, i)?.half())
}

/// `Σ_i pivotal_probability(f, i)` for `±1`-valued `f`; equals
/// `Σ_S |S| f̂(S)²`.
pub fn total_influence(f: &CubeFunction) -> Result<Dyadic> {
    f.require_kind(&[BooleanKind::PlusMinusOne], "pm1")?;
    total_pivotal(f)
}
