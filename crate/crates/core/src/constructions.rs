//! Tribes-type Boolean functions built from code indicators, together with
//! exactly checked claims about their means, influences and tails.
//!
//! Block `i` of a composed function occupies the next `r_i` low-order bits
//! of the point index, so block 0 reads bits `0..r_0`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::codes::{sample_coset_leaders, search_code, shortest_code, LinearCode, DEFAULT_TRIALS};
use crate::cube::{BooleanKind, CubeFunction, MAX_DIM};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::influence::{max_pivotal_probability, total_pivotal};
use crate::tail::{tail_certificate, tail_level};

/// A claimed relation between a bound and an achieved value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(Dyadic),
    Real(f64),
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(d) => d.serialize(s),
            Quantity::Real(v) => v.serialize(s),
        }
    }
}

/// `achieved <relation> bound`
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub claim: String,
    pub relation: Relation,
    pub bound: Quantity,
    pub achieved: Quantity,
    pub holds: bool,
}

impl Claim {
    pub fn exact(claim: &str, relation: Relation, achieved: Dyadic, bound: Dyadic) -> Self {
        let holds = match relation {
            Relation::Le => achieved <= bound,
            Relation::Ge => achieved >= bound,
            Relation::Eq => achieved == bound,
        };
        Self {
            claim: claim.to_string(),
            relation,
            bound: Quantity::Exact(bound),
            achieved: Quantity::Exact(achieved),
            holds,
        }
    }

    pub fn real(claim: &str, relation: Relation, achieved: f64, bound: f64, tol: f64) -> Self {
        let holds = match relation {
            Relation::Le => achieved <= bound + tol,
            Relation::Ge => achieved >= bound - tol,
            Relation::Eq => (achieved - bound).abs() <= tol,
        };
        Self {
            claim: claim.to_string(),
            relation,
            bound: Quantity::Real(bound),
            achieved: Quantity::Real(achieved),
            holds,
        }
    }

    fn count(claim: &str, relation: Relation, achieved: usize, bound: usize) -> Self {
        Self::exact(claim, relation, Dyadic::from_int(achieved as i64), Dyadic::from_int(bound as i64))
    }
}

/// A constructed function with its parameters, measured quantities and claims.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionRecord {
    pub construction: String,
    #[serde(skip)]
    pub function: CubeFunction,
    pub parameters: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub codes: BTreeMap<String, LinearCode>,
    pub claims: Vec<Claim>,
}

impl ConstructionRecord {
    pub fn new(construction: &str, function: CubeFunction) -> Self {
        Self {
            construction: construction.to_string(),
            function,
            parameters: BTreeMap::new(),
            metrics: BTreeMap::new(),
            codes: BTreeMap::new(),
            claims: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    pub fn metric(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.metrics.insert(key.to_string(), v.into());
        self
    }

    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.claim == name)
    }
}

fn dyadic_value(d: &Dyadic) -> Value {
    Value::String(d.to_string())
}

fn check_bits(bits: usize) -> Result<()> {
    if bits > MAX_DIM {
        return Err(Error::Capacity {
            what: "total input bits",
            requested: bits,
            max: MAX_DIM,
        });
    }
    Ok(())
}

fn low_mask(r: usize) -> usize {
    (1usize << r) - 1
}

/// OR of `b` ANDs of `r` bits; TRUE is `1` and an AND is TRUE iff all of
/// its inputs are `+1`.
pub fn tribes(b: usize, r: usize) -> Result<CubeFunction> {
    if b == 0 || r == 0 {
        return Err(Error::param("b, r", "block count and width must be positive"));
    }
    check_bits(b.saturating_mul(r))?;
    let m = low_mask(r);
    CubeFunction::from_predicate(b * r, BooleanKind::PlusMinusOne, |j| {
        (0..b).any(|k| (j >> (k * r)) & m == 0)
    })
}

/// `1` iff all `r + 1` inputs are equal.
pub fn alleq(r: usize) -> Result<CubeFunction> {
    if r == 0 {
        return Err(Error::param("r", "must be positive"));
    }
    check_bits(r + 1)?;
    let all = low_mask(r + 1);
    CubeFunction::from_predicate(r + 1, BooleanKind::PlusMinusOne, |j| j == 0 || j == all)
}

/// Outer Boolean function applied to the TRUE/FALSE values of the blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Combiner {
    Or,
    And,
    Xor,
    /// Output equals the given (0-based) input.
    Projection(usize),
    /// Truth table indexed by the mask of TRUE inputs.
    Table(Vec<bool>),
}

impl Combiner {
    fn eval(&self, truth: u32, b: usize) -> bool {
        match self {
            Combiner::Or => truth != 0,
            Combiner::And => truth == low_mask(b) as u32,
            Combiner::Xor => truth.count_ones() % 2 == 1,
            Combiner::Projection(i) => truth >> i & 1 == 1,
            Combiner::Table(t) => t[truth as usize],
        }
    }
}

/// `F(g_1(block 1), ..., g_b(block b))` on disjoint blocks. Inputs must all
/// be `pm1` or all `01`; the output uses the same convention.
pub fn block_compose(combiner: &Combiner, gs: &[CubeFunction]) -> Result<CubeFunction> {
    let b = gs.len();
    if b == 0 {
        return Err(Error::param("gs", "at least one block is required"));
    }
    let kind = gs[0].kind();
    if !matches!(kind, BooleanKind::PlusMinusOne | BooleanKind::ZeroOne) {
        return Err(Error::WrongKind {
            expected: "pm1 or 01 blocks",
            found: kind,
        });
    }
    if let Some(g) = gs.iter().find(|g| g.kind() != kind) {
        return Err(Error::WrongKind {
            expected: "blocks sharing one value convention",
            found: g.kind(),
        });
    }
    match combiner {
        Combiner::Projection(i) if *i >= b => {
            return Err(Error::param("combiner", format!("projection onto input {i} of {b}")));
        }
        Combiner::Table(t) if t.len() != 1 << b => {
            return Err(Error::param("combiner", format!("truth table needs {} rows, got {}", 1 << b, t.len())));
        }
        _ => {}
    }
    let widths: Vec<usize> = gs.iter().map(CubeFunction::n).collect();
    let n: usize = widths.iter().sum();
    check_bits(n)?;
    let offsets: Vec<usize> = widths
        .iter()
        .scan(0, |acc, w| {
            let o = *acc;
            *acc += w;
            Some(o)
        })
        .collect();
    let low = if kind == BooleanKind::PlusMinusOne { -1.0 } else { 0.0 };
    let values: Vec<f64> = (0..1usize << n)
        .into_par_iter()
        .map(|j| {
            let truth = gs.iter().enumerate().fold(0u32, |acc, (i, g)| {
                let local = (j >> offsets[i]) & low_mask(widths[i]);
                if g.value(local) == 1.0 {
                    acc | (1 << i)
                } else {
                    acc
                }
            });
            if combiner.eval(truth, b) {
                1.0
            } else {
                low
            }
        })
        .collect();
    CubeFunction::new(n, values, kind)
}

/// `2(1 - (1 - p1)^b) - 1`, the mean of an OR of `b` independent copies.
pub fn or_mean(p1: &Dyadic, b: usize) -> Dyadic {
    let miss = Dyadic::one() - p1;
    Dyadic::from_int(1) - miss.pow(b as u32).mul_pow2(1)
}

/// Mean of `g_0 ∨ g_1 ∨ ... ∨ g_b` with `P[g_0 = 1] = q`, `P[g_i = 1] = p`.
pub fn or_mean_with_head(p: &Dyadic, q: &Dyadic, b: usize) -> Dyadic {
    let miss = (Dyadic::one() - q) * (Dyadic::one() - p).pow(b as u32);
    Dyadic::one() - miss.mul_pow2(1)
}

/// Rule for [`choose_b`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRule {
    /// Largest `b` whose OR still has mean `<= 0`.
    LargestNonPositive,
    /// `b` minimizing `|E f|`, ties to the smaller `b`.
    ClosestToZero,
}

/// Upper limit on the number of blocks scanned.
pub const MAX_BLOCKS: usize = 1 << 12;

pub fn choose_b(p1: &Dyadic, m: u32, rule: BlockRule) -> Result<usize> {
    if p1 <= &Dyadic::zero() || p1 > &Dyadic::pow2_neg(m) {
        return Err(Error::param("p1", format!("need 0 < p1 <= 2^-{m}, got {p1}")));
    }
    let miss = Dyadic::one() - p1;
    let mut power = miss.clone();
    let mut b = 1usize;
    // mean(b) = 1 - 2·miss^b, increasing in b
    let mean = |pw: &Dyadic| Dyadic::one() - pw.mul_pow2(1);
    while mean(&(&power * &miss)) <= Dyadic::zero() {
        power = &power * &miss;
        b += 1;
        if b > MAX_BLOCKS {
            return Err(Error::Capacity {
                what: "block count",
                requested: b,
                max: MAX_BLOCKS,
            });
        }
    }
    match rule {
        BlockRule::LargestNonPositive => Ok(b),
        BlockRule::ClosestToZero => {
            let here = mean(&power).abs();
            let next = mean(&(&power * &miss)).abs();
            Ok(if next < here { b + 1 } else { b })
        }
    }
}

/// Smallest `b >= 1` for which the OR with a head block of probability `q`
/// has nonnegative mean.
pub fn choose_b_with_head(p: &Dyadic, q: &Dyadic) -> Result<usize> {
    (1..=MAX_BLOCKS)
        .find(|&b| !or_mean_with_head(p, q, b).is_negative())
        .ok_or(Error::Capacity {
            what: "block count",
            requested: MAX_BLOCKS + 1,
            max: MAX_BLOCKS,
        })
}

fn exact_p1(g: &CubeFunction) -> Result<Dyadic> {
    g.require_kind(&[BooleanKind::PlusMinusOne], "pm1")?;
    Ok(g.exact_probability_of_one().expect("boolean kind"))
}

fn exact_mean(f: &CubeFunction) -> Dyadic {
    f.exact_mean().expect("boolean kind")
}

/// `g ∨ g ∨ ... ∨ g` over `b` disjoint blocks, with exact checks of the
/// mean formula, the pivotal bound `2 P[g = 1]` and tail preservation.
/// When `m` is given the bounds `P[g = 1] <= 2^{-m}` and
/// `max pivotal <= 2^{1-m}` are also claimed.
pub fn or_compose(g: &CubeFunction, b: usize, m: Option<u32>) -> Result<ConstructionRecord> {
    let p1 = exact_p1(g)?;
    if b == 0 {
        return Err(Error::param("b", "must be positive"));
    }
    check_bits(g.n().saturating_mul(b))?;
    let f = block_compose(&Combiner::Or, &vec![g.clone(); b])?;
    let mean = exact_mean(&f);
    let max_piv = max_pivotal_probability(&f)?;
    let g_tail = tail_level(g, false).unwrap_or(0);
    let f_tail = tail_level(&f, false).unwrap_or(0);

    let mut rec = ConstructionRecord::new("or-compose", f);
    rec.param("b", b).param("r", g.n());
    if let Some(m) = m {
        rec.param("m", m);
    }
    rec.metric("n", b * g.n())
        .metric("p1", dyadic_value(&p1))
        .metric("mean", dyadic_value(&mean))
        .metric("max_pivotal", dyadic_value(&max_piv))
        .metric("block_tail_k", g_tail)
        .metric("tail_k", f_tail);
    rec.claims.push(Claim::exact("or_mean_formula", Relation::Eq, mean, or_mean(&p1, b)));
    rec.claims.push(Claim::exact("max_pivotal_le_2p", Relation::Le, max_piv.clone(), p1.mul_pow2(1)));
    if let Some(m) = m {
        rec.claims.push(Claim::exact("p_le_2^-m", Relation::Le, p1.clone(), Dyadic::pow2_neg(m)));
        rec.claims.push(Claim::exact(
            "max_pivotal_le_2^(1-m)",
            Relation::Le,
            max_piv,
            Dyadic::pow2_neg(m).mul_pow2(1),
        ));
    }
    rec.claims.push(Claim::count("tail_preserved", Relation::Ge, f_tail, g_tail));
    Ok(rec)
}

/// OR of `b` copies of the `±1` indicator of `block`, whose tail level is
/// `w(block^⊥) - 1`.
pub fn coding_tribes(block: &LinearCode, b: usize) -> Result<ConstructionRecord> {
    check_bits(block.length().saturating_mul(b))?;
    let g = block.indicator()?;
    let codim = (block.length() - block.dim()) as u32;
    let mut rec = or_compose(&g, b, Some(codim))?;
    rec.construction = "coding-tribes".into();
    rec.codes.insert("block".into(), block.clone());
    let dual_w = block.dual().min_weight()?.map_or(block.length(), |w| w as usize);
    let f_tail = tail_level(&rec.function, false).unwrap_or(0);
    rec.metric("dual_min_weight", dual_w);
    rec.claims.push(Claim::count("tail_ge_dual_weight_minus_1", Relation::Ge, f_tail, dual_w - 1));
    Ok(rec)
}

/// A `{0,1}` sum of disjoint coset indicators of a base code.
#[derive(Clone, Debug)]
pub struct MeanAdjusted {
    pub function: CubeFunction,
    /// `P[base = 1] = 2^{-(n_target + d)}`.
    pub d: u32,
    pub shifts: Vec<u32>,
}

/// `h = Σ_i 1_{code + y_i}` over `t·2^d` distinct cosets, so that
/// `E h = t / 2^{n_target}` and `h ∈ L₊^{>n_target}`.
pub fn mean_adjust(n_target: u32, t: u64, code: &LinearCode, seed: u64) -> Result<MeanAdjusted> {
    if n_target >= 63 || t >= 1u64 << n_target {
        return Err(Error::param("t", format!("need 0 <= t < 2^{n_target}, got {t}")));
    }
    let codim = (code.length() - code.dim()) as u32;
    if codim < n_target {
        return Err(Error::Infeasible(format!(
            "base code has P[g = 1] = 2^-{codim}, above 2^-{n_target}"
        )));
    }
    let d = codim - n_target;
    let base = code.indicator01()?;
    let cert = tail_certificate(&base, (n_target as usize).min(code.length()), false)?;
    if !cert.member {
        return Err(Error::TailViolation {
            k: n_target as usize,
            max_violation: cert.max_violation,
        });
    }
    let count = usize::try_from(t << d).map_err(|_| Error::Infeasible("coset count overflow".into()))?;
    let shifts = sample_coset_leaders(code, count, seed)?;
    let words = code.codewords()?;
    let mut values = vec![0.0; 1usize << code.length()];
    for &y in &shifts {
        for &w in &words {
            values[(w ^ y) as usize] = 1.0;
        }
    }
    let function = CubeFunction::new(code.length(), values, BooleanKind::ZeroOne)?;
    Ok(MeanAdjusted { function, d, shifts })
}

/// Record form of [`mean_adjust`] with its exact mean and tail claims.
pub fn mean_adjust_record(n_target: u32, t: u64, code: &LinearCode, seed: u64) -> Result<ConstructionRecord> {
    let adj = mean_adjust(n_target, t, code, seed)?;
    let mean = exact_mean(&adj.function);
    let member = tail_certificate(&adj.function, (n_target as usize).min(code.length()), false)?.member;
    let mut rec = ConstructionRecord::new("mean-adjust", adj.function);
    rec.param("n_target", n_target).param("t", t).param("seed", seed);
    rec.codes.insert("base".into(), code.clone());
    rec.metric("d", adj.d)
        .metric("cosets", adj.shifts.len())
        .metric("mean", dyadic_value(&mean));
    rec.claims.push(Claim::exact(
        "mean_eq_t_over_2^n",
        Relation::Eq,
        mean,
        Dyadic::new(t as i64, n_target),
    ));
    rec.claims.push(Claim::count("tail_member", Relation::Eq, member as usize, 1));
    Ok(rec)
}

/// `g(x, y) = (f(x) - f(y)) / 2` on `2n` bits, `x` in the low half.
pub fn zero_mean_difference(f: &CubeFunction) -> Result<CubeFunction> {
    f.require_kind(&[BooleanKind::PlusMinusOne], "pm1")?;
    let n = f.n();
    check_bits(2 * n)?;
    let m = low_mask(n);
    CubeFunction::new(
        2 * n,
        (0..1usize << (2 * n))
            .map(|j| (f.value(j & m) - f.value(j >> n)) / 2.0)
            .collect(),
        BooleanKind::PlusMinusZeroOne,
    )
}

fn kkl_ratio(max_pivotal: f64, variance: f64, n: usize) -> f64 {
    max_pivotal / (variance * (n as f64).ln() / n as f64)
}

/// The zero-mean `±1` function `G(x, y) = f(x) - 2·1_{g_0 = 1}(x)·h(y)`.
///
/// `f = g_0 ∨ g_1 ∨ ... ∨ g_b` with `P[g_i = 1] = 2^{-m}`,
/// `P[g_0 = 1] = 4·2^{-m}`, every block a code indicator in `L₊^{>m}`, and
/// `b` the least count making `E f >= 0`. `h` is a mean-adjusted coset sum
/// with `2·E h = E f / P[g_0 = 1]`.
pub fn balanced_coding_tribes(m: u32, seed: u64) -> Result<ConstructionRecord> {
    if m < 3 {
        return Err(Error::param("m", "need m >= 3 so that P[g_0 = 1] = 2^{2-m} < 1"));
    }
    let w = m + 1;
    let (id1, c1) = shortest_code(m as usize, w, MAX_DIM, seed, DEFAULT_TRIALS)?;
    let (id0, c0) = shortest_code(m as usize - 2, w, MAX_DIM, seed.wrapping_add(1), DEFAULT_TRIALS)?;
    let d1 = c1.dual();
    let d0 = c0.dual();
    let p = Dyadic::pow2_neg(m);
    let q = Dyadic::pow2_neg(m - 2);
    let b = choose_b_with_head(&p, &q)?;
    let nx = d0.length() + b * d1.length();
    check_bits(nx)?;

    let g0 = d0.indicator()?;
    let g1 = d1.indicator()?;
    let mut blocks = vec![g0.clone()];
    blocks.extend(std::iter::repeat_n(g1, b));
    let f = block_compose(&Combiner::Or, &blocks)?;
    let mean_f = exact_mean(&f);

    // E h = E f / (2 q) = t / 2^e
    let mean_h = mean_f.mul_pow2(m as i64 - 3);
    if mean_h >= Dyadic::one() {
        return Err(Error::Infeasible(format!("E h = {mean_h} is not below 1")));
    }
    let e = mean_h.exponent();
    let n_target = e.max(m);
    let t = u64::try_from(mean_h.mul_pow2(n_target as i64).numerator().clone())
        .map_err(|_| Error::Infeasible("coset count overflow".into()))?;
    let (idh, ch) = shortest_code(n_target as usize, n_target + 1, MAX_DIM - nx, seed.wrapping_add(2), DEFAULT_TRIALS)
        .map_err(|e| match e {
            Error::SearchExhausted { .. } => Error::Capacity {
                what: "total input bits",
                requested: nx + n_target as usize + 1,
                max: MAX_DIM,
            },
            other => other,
        })?;
    let dh = ch.dual();
    let adj = mean_adjust(n_target, t, &dh, seed.wrapping_add(3))?;
    let h = adj.function;
    let ny = h.n();
    let n = nx + ny;
    check_bits(n)?;

    let g0_low = low_mask(d0.length());
    let fx = f.values();
    let values: Vec<f64> = (0..1usize << n)
        .into_par_iter()
        .map(|j| {
            let x = j & low_mask(nx);
            let y = j >> nx;
            let head = if g0.value(x & g0_low) == 1.0 { 1.0 } else { 0.0 };
            fx[x] - 2.0 * head * h.value(y)
        })
        .collect();
    let range_violations = values.iter().filter(|&&v| v != 1.0 && v != -1.0).count();
    let kind = if range_violations == 0 {
        BooleanKind::PlusMinusOne
    } else {
        BooleanKind::Real
    };
    let big_g = CubeFunction::new(n, values, kind)?;

    let mut rec = ConstructionRecord::new("balanced", big_g);
    rec.param("m", m).param("seed", seed).param("b", b);
    rec.codes.insert("head_dual".into(), c0.clone());
    rec.codes.insert("block_dual".into(), c1.clone());
    rec.codes.insert("h_dual".into(), ch.clone());
    rec.metric("code_ids", json!({"head": id0, "block": id1, "h": idh}))
        .metric("n", n)
        .metric("n_x", nx)
        .metric("n_y", ny)
        .metric("mean_f", dyadic_value(&mean_f))
        .metric("mean_h", dyadic_value(&mean_h))
        .metric("h_cosets", adj.shifts.len());
    rec.claims.push(Claim::count("range_pm1_violations", Relation::Eq, range_violations, 0));
    if range_violations > 0 {
        return Ok(rec);
    }
    let g = &rec.function;
    let mean = exact_mean(g);
    let tail_k = tail_level(g, true);
    let max_piv = max_pivotal_probability(g)?;
    let bound = q.mul_pow2(1);
    let ln_n_over_n = (n as f64).ln() / n as f64;
    let c_bound = bound.to_f64() / ln_n_over_n;
    let c_achieved = max_piv.to_f64() / ln_n_over_n;
    let kkl = kkl_ratio(max_piv.to_f64(), 1.0, n);
    rec.metric("mean", dyadic_value(&mean))
        .metric("tail_k", tail_k.map_or(Value::Null, Value::from))
        .metric("max_pivotal", dyadic_value(&max_piv))
        .metric("c_bound", c_bound)
        .metric("c_achieved", c_achieved)
        .metric("kkl_ratio", kkl);
    rec.claims.push(Claim::exact("mean_zero", Relation::Eq, mean, Dyadic::zero()));
    rec.claims.push(Claim::exact("mean_f_nonnegative", Relation::Ge, mean_f.clone(), Dyadic::zero()));
    rec.claims.push(Claim::exact("mean_f_le_2^-m", Relation::Le, mean_f, p));
    rec.claims.push(Claim::count("tail_level_ge_m", Relation::Ge, tail_k.unwrap_or(0), m as usize));
    rec.claims.push(Claim::exact("max_pivotal_le_2_head_p", Relation::Le, max_piv.clone(), bound));
    rec.claims.push(Claim::real(
        "max_pivotal_le_c_log_n_over_n",
        Relation::Le,
        max_piv.to_f64(),
        c_bound * ln_n_over_n,
        1e-12,
    ));
    Ok(rec)
}

/// `γ = max(4, 1/δ)` with `δ = w(C)/length`.
pub fn gamma_for(code: &LinearCode) -> Result<f64> {
    let w = code.min_weight()?.unwrap_or(code.length() as u32) as f64;
    Ok(f64::max(4.0, code.length() as f64 / w))
}

/// The `{0,1}` indicator of `C^⊥` on `4m` bits for a code `C` with
/// `dim C = 2m` and `w(C) >= m + 1`.
pub fn harper_witness(m: u32, seed: u64) -> Result<ConstructionRecord> {
    if m == 0 {
        return Err(Error::param("m", "must be positive"));
    }
    let len = 4 * m as usize;
    check_bits(len)?;
    let (id, code) = match m {
        2 => ("extended-hamming-8-4".to_string(), LinearCode::extended_hamming()),
        6 => ("golay-24-12".to_string(), LinearCode::golay()),
        _ => {
            let found = search_code(len, (2 * m as usize, 2 * m as usize), m + 1, seed, DEFAULT_TRIALS)?;
            (format!("search-{len}-{}-seed{seed}-trial{}", 2 * m, found.trial), found.code)
        }
    };
    let mut rec = harper_witness_from_code(&code, m)?;
    rec.param("seed", seed);
    rec.metric("code_id", id);
    Ok(rec)
}

/// Harper-ratio witness `1_{C^⊥}` for an explicit code `C`, with claims at
/// scale `m`.
pub fn harper_witness_from_code(code: &LinearCode, m: u32) -> Result<ConstructionRecord> {
    let n = code.length();
    let gamma = gamma_for(code)?;
    let f = code.dual().indicator01()?;
    let mean = exact_mean(&f);
    let pivotal = total_pivotal(&f)?;
    let resampling = pivotal.half();
    let tail_k = tail_level(&f, false).unwrap_or(0);
    let log2_inv = mean.as_neg_power_of_two().expect("code indicator mean is a power of two");
    let volume_log2 = &mean * &Dyadic::from_int(log2_inv as i64);

    let mut rec = ConstructionRecord::new("harper-witness", f);
    rec.param("m", m);
    rec.codes.insert("code".into(), code.clone());
    let ratio = |sum: &Dyadic, ln: bool| {
        let vol = volume_log2.to_f64() * if ln { std::f64::consts::LN_2 } else { 1.0 };
        sum.to_f64() / vol
    };
    rec.metric("n", n)
        .metric("gamma", gamma)
        .metric("mean", dyadic_value(&mean))
        .metric("sum_pivotal", dyadic_value(&pivotal))
        .metric("sum_influence", dyadic_value(&resampling))
        .metric("tail_k", tail_k)
        .metric("ratio_pivotal_log2", ratio(&pivotal, false))
        .metric("ratio_pivotal_ln", ratio(&pivotal, true))
        .metric("ratio_influence_log2", ratio(&resampling, false))
        .metric("ratio_influence_ln", ratio(&resampling, true));
    let gamma_d: Dyadic = Dyadic::from_int(gamma.floor() as i64);
    let gamma_exact = gamma.fract() == 0.0;
    rec.claims.push(Claim::exact("mean_le_2^-m", Relation::Le, mean.clone(), Dyadic::pow2_neg(m)));
    rec.claims.push(Claim::exact("mean_ge_2^-3m", Relation::Ge, mean.clone(), Dyadic::pow2_neg(3 * m)));
    rec.claims.push(Claim::count("tail_level_ge_m", Relation::Ge, tail_k, m as usize));
    rec.claims.push(Claim::exact(
        "sum_pivotal_le_2n_mean",
        Relation::Le,
        pivotal.clone(),
        &mean * &Dyadic::from_int(2 * n as i64),
    ));
    if gamma_exact {
        rec.claims.push(Claim::exact(
            "sum_influence_le_gamma_m_mean",
            Relation::Le,
            resampling,
            &(&mean * &gamma_d) * &Dyadic::from_int(m as i64),
        ));
        rec.claims.push(Claim::exact(
            "sum_pivotal_le_gamma_mean_log2",
            Relation::Le,
            pivotal.clone(),
            &volume_log2 * &gamma_d,
        ));
    } else {
        rec.claims.push(Claim::real(
            "sum_influence_le_gamma_m_mean",
            Relation::Le,
            resampling.to_f64(),
            mean.to_f64() * gamma * m as f64,
            1e-12,
        ));
        rec.claims.push(Claim::real(
            "sum_pivotal_le_gamma_mean_log2",
            Relation::Le,
            pivotal.to_f64(),
            volume_log2.to_f64() * gamma,
            1e-12,
        ));
    }
    Ok(rec)
}
