//! Fourier analysis of Boolean functions in tail spaces.
//!
//! Points of `{-1,1}^n` are indexed by `j in 0..2^n`: bit `i` of `j` is set
//! iff `x_{i+1} = -1`. Subsets `S` are bitmasks in the same layout, so the
//! character `W_S` evaluates to `(-1)^{popcount(j & S)}` at point `j`.

// `!(x > 0.0)` style guards deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codes;
pub mod constructions;
pub mod cube;
pub mod dyadic;
pub mod error;
pub mod formats;
pub mod fourier;
pub mod influence;
pub mod markov;
pub mod norm;
pub mod tail;
pub mod verify;

pub use cube::{BooleanKind, CubeFunction, MAX_DIM};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use fourier::{fwht, heat, inverse_fwht, laplacian, FourierSpectrum};
pub use tail::{tail_certificate, tail_level, TailCertificate};
