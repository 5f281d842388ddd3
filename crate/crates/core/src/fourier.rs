//! Walsh–Fourier transform on `{-1,1}^n` and the Fourier multipliers built on
//! it: the heat semigroup `P_t` and the number operator `L`.

use std::ops::{Add, Sub};

use rayon::prelude::*;

use crate::cube::{check_dim, BooleanKind, CubeFunction};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Below this length the butterfly runs single-threaded.
const PARALLEL_MIN_LEN: usize = 1 << 15;

/// Fourier coefficients `f̂(S)` indexed by subset bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: coeffs.len(),
            });
        }
        Ok(FourierSpectrum { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> f64 {
        self.coeffs[s]
    }

    /// `Σ_S f̂(S)²`
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `W_d = Σ_{|S| = d} f̂(S)²` for `d = 0..=n`.
    pub fn degree_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    /// `Σ_S |S| f̂(S)²`
    pub fn total_degree_weight(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| s.count_ones() as f64 * c * c)
            .sum()
    }

    /// Multiply each coefficient by `m(|S|)`.
    pub fn apply_degree_multiplier(&self, m: impl Fn(u32) -> f64) -> Self {
        let table: Vec<f64> = (0..=self.n as u32).map(&m).collect();
        FourierSpectrum {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(s, c)| c * table[s.count_ones() as usize])
                .collect(),
        }
    }

    /// The `count` coefficients of largest magnitude, ties by subset index.
    pub fn top(&self, count: usize) -> Vec<(usize, f64)> {
        let mut idx: Vec<usize> = (0..self.coeffs.len()).collect();
        idx.sort_by(|&a, &b| {
            self.coeffs[b]
                .abs()
                .total_cmp(&self.coeffs[a].abs())
                .then(a.cmp(&b))
        });
        idx.into_iter().take(count).map(|s| (s, self.coeffs[s])).collect()
    }
}

/// Unnormalized in-place Walsh–Hadamard butterfly: `a[S] <- Σ_j a[j] W_S(j)`.
pub(crate) fn butterfly<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Send + Sync,
{
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        let stage = |block: &mut [T]| {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        };
        if len >= PARALLEL_MIN_LEN {
            data.par_chunks_mut(2 * h).for_each(stage);
        } else {
            data.chunks_mut(2 * h).for_each(stage);
        }
        h *= 2;
    }
}

/// `f̂(S) = 2^-n Σ_x f(x) W_S(x)` in `O(n 2^n)`.
pub fn fwht(f: &CubeFunction) -> FourierSpectrum {
    let mut coeffs = f.values().to_vec();
    butterfly(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum { n: f.n(), coeffs }
}

/// `f(x) = Σ_S f̂(S) W_S(x)`; the result is tagged `Real`.
pub fn inverse_fwht(s: &FourierSpectrum) -> CubeFunction {
    let mut values = s.coeffs.clone();
    butterfly(&mut values);
    CubeFunction::from_parts_unchecked(s.n, values, BooleanKind::Real)
}

/// Integer sums `Σ_x f(x) W_S(x)` of a Boolean-tagged function, so that
/// `f̂(S) = sums[S] / 2^n` exactly.
pub fn integer_spectrum(f: &CubeFunction) -> Option<Vec<i64>> {
    let mut ints = f.integer_values()?;
    butterfly(&mut ints);
    Some(ints)
}

/// Exact coefficient `f̂(S)` of a Boolean-tagged function.
pub fn exact_coefficient(f: &CubeFunction, s: usize) -> Option<Dyadic> {
    let ints = f.integer_values()?;
    let sum: i64 = ints
        .iter()
        .enumerate()
        .map(|(j, v)| if (j & s).count_ones() & 1 == 1 { -v } else { *v })
        .sum();
    Some(Dyadic::new(sum, f.n() as u32))
}

fn apply_multiplier(f: &CubeFunction, m: impl Fn(u32) -> f64) -> CubeFunction {
    inverse_fwht(&fwht(f).apply_degree_multiplier(m))
}

/// Heat semigroup `P_t f = Σ e^{-t|S|} f̂(S) W_S`.
pub fn heat(f: &CubeFunction, t: f64) -> Result<CubeFunction> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::param("t", format!("time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(apply_multiplier(f, |d| (-t * f64::from(d)).exp()))
}

/// Number operator `L f = Σ |S| f̂(S) W_S`.
pub fn laplacian(f: &CubeFunction) -> CubeFunction {
    apply_multiplier(f, f64::from)
}

/// Zero every coefficient with `|S| < k`.
pub fn project_above(f: &CubeFunction, k: usize) -> CubeFunction {
    apply_multiplier(f, |d| if (d as usize) < k { 0.0 } else { 1.0 })
}
