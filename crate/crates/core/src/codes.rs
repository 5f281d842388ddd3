//! Binary linear codes of length at most 24.
//!
//! A word `x ∈ {0,1}^n` is stored as a `u32` with bit `i` holding `x_{i+1}`.
//! Under `x_i = (1 - point_i)/2` this is exactly the hypercube point index,
//! so the indicator of a code is a lookup on point indices.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, BooleanKind, CubeFunction};
use crate::error::{Error, Result};

/// Largest dimension enumerated by [`LinearCode::min_weight`].
pub const MAX_ENUM_DIM: usize = 22;
/// Default number of random generator matrices tried by the searches.
pub const DEFAULT_TRIALS: u64 = 200_000;

/// A GF(2) linear code, kept in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    length: usize,
    rows: Vec<u32>,
}

fn mask(length: usize) -> u32 {
    if length == 32 {
        u32::MAX
    } else {
        (1u32 << length) - 1
    }
}

/// Reduced row-echelon form with pivots on the lowest set bits, ascending.
fn rref(mut rows: Vec<u32>) -> Vec<u32> {
    rows.retain(|&r| r != 0);
    let mut out: Vec<u32> = Vec::new();
    for r in rows {
        let mut v = r;
        for &b in &out {
            let pivot = b & b.wrapping_neg();
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let pivot = v & v.wrapping_neg();
        for b in out.iter_mut() {
            if *b & pivot != 0 {
                *b ^= v;
            }
        }
        out.push(v);
    }
    out.sort_by_key(|r| r.trailing_zeros());
    out
}

impl LinearCode {
    /// Span of `rows` in `{0,1}^length`.
    pub fn new(length: usize, rows: &[u32]) -> Result<Self> {
        check_dim(length)?;
        if let Some(&r) = rows.iter().find(|&&r| r & !mask(length) != 0) {
            return Err(Error::param(
                "generators",
                format!("row {r:#b} has bits beyond length {length}"),
            ));
        }
        Ok(Self {
            length,
            rows: rref(rows.to_vec()),
        })
    }

    /// Rows as ASCII bit strings, leftmost character = coordinate 1.
    pub fn from_bitstrings<S: AsRef<str>>(length: usize, rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| parse_word(s.as_ref(), length))
            .collect::<Result<Vec<_>>>()?;
        Self::new(length, &parsed)
    }

    pub fn zero(length: usize) -> Result<Self> {
        Self::new(length, &[])
    }

    pub fn full(length: usize) -> Result<Self> {
        Self::new(length, &(0..length).map(|i| 1u32 << i).collect::<Vec<_>>())
    }

    /// `{0^n, 1^n}`
    pub fn repetition(length: usize) -> Result<Self> {
        Self::new(length, &[mask(length)])
    }

    /// All words of even weight.
    pub fn even_weight(length: usize) -> Result<Self> {
        Self::new(length, &(1..length).map(|i| 1u32 | (1 << i)).collect::<Vec<_>>())
    }

    /// The self-dual `[8,4,4]` extended Hamming code.
    pub fn extended_hamming() -> Self {
        Self::from_bitstrings(8, &["11110000", "00111100", "00001111", "01010101"]).expect("valid code")
    }

    /// The `[7,4,3]` Hamming code.
    pub fn hamming() -> Self {
        Self::from_bitstrings(7, &["1000110", "0100101", "0010011", "0001111"]).expect("valid code")
    }

    /// The `[7,3,4]` simplex code, dual of [`LinearCode::hamming`].
    pub fn simplex() -> Self {
        Self::hamming().dual()
    }

    /// The `[24,12,8]` extended Golay code: the cyclic code generated by
    /// `x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1` with an overall parity bit.
    pub fn golay() -> Self {
        let g: u32 = 0b1100_0111_0101;
        let rows: Vec<u32> = (0..12)
            .map(|s| {
                let w = g << s;
                w | ((w.count_ones() & 1) << 23)
            })
            .collect();
        Self::new(24, &rows).expect("valid code")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Generator rows in reduced row-echelon form.
    pub fn generators(&self) -> &[u32] {
        &self.rows
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.rows.iter().map(|&r| format_word(r, self.length)).collect()
    }

    fn pivots(&self) -> u32 {
        self.rows.iter().fold(0, |acc, r| acc | (r & r.wrapping_neg()))
    }

    pub fn contains(&self, word: u32) -> bool {
        if word & !mask(self.length) != 0 {
            return false;
        }
        let mut v = word;
        for &r in &self.rows {
            if v & r & r.wrapping_neg() != 0 {
                v ^= r;
            }
        }
        v == 0
    }

    /// Nullspace of the generator matrix: one basis vector per free column.
    pub fn dual(&self) -> Self {
        let pivots = self.pivots();
        let rows: Vec<u32> = (0..self.length)
            .filter(|&c| pivots >> c & 1 == 0)
            .map(|c| {
                self.rows.iter().fold(1u32 << c, |acc, &r| {
                    if r >> c & 1 == 1 {
                        acc | (r & r.wrapping_neg())
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let d = Self {
            length: self.length,
            rows: rref(rows),
        };
        debug_assert_eq!(d.dim() + self.dim(), self.length);
        d
    }

    /// All `2^dim` codewords in Gray-code order.
    pub fn codewords(&self) -> Result<Vec<u32>> {
        self.check_enum()?;
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut w = 0u32;
        out.push(w);
        for i in 1u64..(1u64 << self.dim()) {
            w ^= self.rows[i.trailing_zeros() as usize];
            out.push(w);
        }
        Ok(out)
    }

    fn check_enum(&self) -> Result<()> {
        if self.dim() > MAX_ENUM_DIM {
            return Err(Error::Capacity {
                what: "code dimension for enumeration",
                requested: self.dim(),
                max: MAX_ENUM_DIM,
            });
        }
        Ok(())
    }

    /// Least weight of a nonzero codeword; `None` for the zero code.
    pub fn min_weight(&self) -> Result<Option<u32>> {
        self.check_enum()?;
        Ok(min_weight_of(&self.rows))
    }

    /// `±1` indicator: `1` on the image of the code, `-1` elsewhere.
    pub fn indicator(&self) -> Result<CubeFunction> {
        let words = self.codewords()?;
        let mut values = vec![-1.0; 1usize << self.length];
        for w in words {
            values[w as usize] = 1.0;
        }
        CubeFunction::new(self.length, values, BooleanKind::PlusMinusOne)
    }

    /// `{0,1}` indicator of the code.
    pub fn indicator01(&self) -> Result<CubeFunction> {
        self.indicator()?.to_zero_one()
    }

    /// Coset representatives supported on the non-pivot columns: exactly one
    /// per coset, `2^{length - dim}` in total, ascending.
    pub fn coset_leaders_free(&self) -> Vec<u32> {
        let free: Vec<u32> = (0..self.length as u32)
            .filter(|&c| self.pivots() >> c & 1 == 0)
            .collect();
        (0u32..(1u32 << free.len()))
            .map(|s| {
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| s >> i & 1 == 1)
                    .fold(0u32, |acc, (_, &c)| acc | (1 << c))
            })
            .collect()
    }
}

fn min_weight_of(rows: &[u32]) -> Option<u32> {
    if rows.is_empty() {
        return None;
    }
    let mut best = u32::MAX;
    let mut w = 0u32;
    for i in 1u64..(1u64 << rows.len()) {
        w ^= rows[i.trailing_zeros() as usize];
        best = best.min(w.count_ones());
        if best == 1 {
            break;
        }
    }
    Some(best)
}

fn parse_word(s: &str, length: usize) -> Result<u32> {
    if s.len() != length {
        return Err(Error::Format(format!(
            "codeword `{s}` has {} characters, expected {length}",
            s.len()
        )));
    }
    s.chars().enumerate().try_fold(0u32, |acc, (i, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << i)),
        _ => Err(Error::Format(format!("codeword `{s}` contains `{ch}`"))),
    })
}

pub fn format_word(w: u32, length: usize) -> String {
    (0..length).map(|i| if w >> i & 1 == 1 { '1' } else { '0' }).collect()
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("length", &self.length)
            .field("generators", &self.to_bitstrings())
            .finish()
    }
}

/// On-disk form: `{"length": n, "generators": ["0101..", ...]}`.
#[derive(Serialize, Deserialize)]
struct CodeFile {
    length: usize,
    generators: Vec<String>,
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CodeFile {
            length: self.length,
            generators: self.to_bitstrings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = CodeFile::deserialize(d)?;
        LinearCode::from_bitstrings(f.length, &f.generators).map_err(serde::de::Error::custom)
    }
}

/// `g_y(x) = g(y·x)`, i.e. index XOR with the point `y`.
pub fn coset_shift(g: &CubeFunction, y: usize) -> Result<CubeFunction> {
    if y >= g.len() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: (usize::BITS - y.leading_zeros()) as usize,
        });
    }
    let v = g.values();
    CubeFunction::new(g.n(), (0..v.len()).map(|j| v[j ^ y]).collect(), g.kind())
}

/// `w(C^⊥) > k`: whether the indicator of `C` lies in `L₊^{>k}`.
pub fn macwilliams_tail(code: &LinearCode, k: usize) -> Result<bool> {
    Ok(match code.dual().min_weight()? {
        None => true,
        Some(w) => w as usize > k,
    })
}

/// Outcome of a randomized code search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeSearch {
    pub code: LinearCode,
    pub min_weight: u32,
    /// Zero-based index of the accepted trial.
    pub trial: u64,
    pub seed: u64,
}

/// Seeded search for a code of the given length with `dim` in
/// `dim_range` and minimum weight at least `min_weight`. Trial `i` draws its
/// matrix from a ChaCha8 stream `(seed, i)`; the accepted trial is the
/// lowest-indexed success, independent of thread count.
pub fn search_code(
    length: usize,
    dim_range: (usize, usize),
    min_weight: u32,
    seed: u64,
    trials: u64,
) -> Result<CodeSearch> {
    check_dim(length)?;
    let (lo, hi) = dim_range;
    if lo > hi || hi > length {
        return Err(Error::param("dim", format!("empty dimension range {lo}..={hi} for length {length}")));
    }
    if hi > MAX_ENUM_DIM {
        return Err(Error::Capacity {
            what: "code dimension for enumeration",
            requested: hi,
            max: MAX_ENUM_DIM,
        });
    }
    let found = (0..trials).into_par_iter().find_first(|&i| {
        let mut rng = trial_rng(seed, i);
        let dim = rng.gen_range(lo..=hi);
        let rows: Vec<u32> = (0..dim).map(|_| rng.gen::<u32>() & mask(length)).collect();
        let reduced = rref(rows);
        reduced.len() == dim
            && reduced.len() >= lo
            && min_weight_of(&reduced).map_or(dim == 0, |w| w >= min_weight)
    });
    match found {
        Some(trial) => {
            let mut rng = trial_rng(seed, trial);
            let dim = rng.gen_range(lo..=hi);
            let rows: Vec<u32> = (0..dim).map(|_| rng.gen::<u32>() & mask(length)).collect();
            let code = LinearCode::new(length, &rows)?;
            let w = code.min_weight()?.unwrap_or(u32::MAX);
            Ok(CodeSearch {
                code,
                min_weight: w,
                trial,
                seed,
            })
        }
        None => Err(Error::SearchExhausted {
            trials,
            reason: format!("no [{length}, {lo}..={hi}] code with minimum weight >= {min_weight}"),
        }),
    }
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A code with `m'/4 <= dim <= 3m'/4` and `w >= δ m'`, plus the constant
/// `γ = max(4, 1/δ)` that downstream bounds are stated with.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoodCode {
    pub search: CodeSearch,
    pub delta: f64,
    pub gamma: f64,
}

pub fn good_code_search(mprime: usize, delta: f64, seed: u64, trials: u64) -> Result<GoodCode> {
    check_dim(mprime)?;
    if mprime == 0 {
        return Err(Error::param("mprime", "length must be positive"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param("delta", format!("must lie in (0, 1], got {delta}")));
    }
    let lo = mprime.div_ceil(4);
    let hi = 3 * mprime / 4;
    let w = (delta * mprime as f64 - 1e-12).ceil().max(1.0) as u32;
    let search = search_code(mprime, (lo, hi), w, seed, trials)?;
    Ok(GoodCode {
        search,
        delta,
        gamma: f64::max(4.0, 1.0 / delta),
    })
}

/// Griesmer lower bound on the length of a `[n, dim, w]` code.
pub fn griesmer_length(dim: usize, w: u32) -> usize {
    (0..dim).map(|i| (w as usize).div_ceil(1 << i)).sum()
}

/// A built-in code matching `(length, dim, w)`, if one is known.
fn builtin(length: usize, dim: usize, w: u32) -> Option<(&'static str, LinearCode)> {
    let candidates: Vec<(&'static str, LinearCode)> = vec![
        ("repetition", LinearCode::repetition(length).ok()?),
        ("simplex-7-3", LinearCode::simplex()),
        ("hamming-7-4", LinearCode::hamming()),
        ("extended-hamming-8-4", LinearCode::extended_hamming()),
    ];
    candidates.into_iter().find(|(_, c)| {
        c.length() == length && c.dim() == dim && c.min_weight().ok().flatten().is_some_and(|cw| cw >= w)
    })
}

/// Shortest code of dimension `dim` with minimum weight at least `w`,
/// scanning lengths upward from the Griesmer bound. Built-ins are preferred,
/// otherwise a seeded search is run per length.
pub fn shortest_code(dim: usize, w: u32, max_length: usize, seed: u64, trials: u64) -> Result<(String, LinearCode)> {
    let start = griesmer_length(dim, w).max(dim).max(1);
    for length in start..=max_length.min(crate::cube::MAX_DIM) {
        if let Some((name, c)) = builtin(length, dim, w) {
            return Ok((name.to_string(), c));
        }
        if let Ok(found) = search_code(length, (dim, dim), w, seed ^ length as u64, trials) {
            return Ok((format!("search-{length}-{dim}-seed{seed}-trial{}", found.trial), found.code));
        }
    }
    Err(Error::SearchExhausted {
        trials,
        reason: format!("no [n <= {max_length}, {dim}] code with minimum weight >= {w}"),
    })
}

/// Chooses `count` distinct coset representatives of `code` by seeded
/// sampling without replacement.
pub fn sample_coset_leaders(code: &LinearCode, count: usize, seed: u64) -> Result<Vec<u32>> {
    let leaders = code.coset_leaders_free();
    if count > leaders.len() {
        return Err(Error::Infeasible(format!(
            "{count} disjoint cosets requested but the code has only {}",
            leaders.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<u32> = sample(&mut rng, leaders.len(), count).into_iter().map(|i| leaders[i]).collect();
    picked.sort_unstable();
    Ok(picked)
}
