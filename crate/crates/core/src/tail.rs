//! Tail-space membership certificates.
//!
//! `L^{>k}`: every `f̂(S)` with `|S| <= k` vanishes, including `S = ∅`.
//! `L₊^{>k}`: the same for `1 <= |S| <= k`; the mean is unconstrained.
//! Boolean-tagged functions are certified exactly from integer Walsh sums;
//! real-valued ones in floating point against [`FLOAT_TAIL_TOL`].

use serde::{Deserialize, Serialize};

use crate::cube::CubeFunction;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fourier::{fwht, integer_spectrum};

/// Largest |coefficient| still counted as zero for real-valued input.
pub const FLOAT_TAIL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCertificate {
    pub k: usize,
    /// `true` certifies `L^{>k}` (mean must vanish too), `false` certifies `L₊^{>k}`.
    pub include_constant: bool,
    pub exact: bool,
    pub member: bool,
    pub max_violation: f64,
    /// Exact value of `max_violation` when `exact`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_max_violation: Option<Dyadic>,
    /// A forbidden subset attaining the maximum violation, if nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

fn forbidden(s: usize, k: usize, include_constant: bool) -> bool {
    let d = s.count_ones() as usize;
    d <= k && (include_constant || d >= 1)
}

pub fn tail_certificate(f: &CubeFunction, k: usize, include_constant: bool) -> Result<TailCertificate> {
    if k > f.n() {
        return Err(Error::param("k", format!("tail level {k} exceeds n = {}", f.n())));
    }
    if let Some(sums) = integer_spectrum(f) {
        let (witness, worst) = sums
            .iter()
            .enumerate()
            .filter(|(s, _)| forbidden(*s, k, include_constant))
            .map(|(s, v)| (s, v.unsigned_abs()))
            .fold((None, 0u64), |(w, m), (s, a)| if a > m { (Some(s), a) } else { (w, m) });
        let exact = Dyadic::from_count(worst, f.n() as u32);
        Ok(TailCertificate {
            k,
            include_constant,
            exact: true,
            member: worst == 0,
            max_violation: exact.to_f64(),
            exact_max_violation: Some(exact),
            witness,
        })
    } else {
        let spec = fwht(f);
        let (witness, worst) = spec
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(s, _)| forbidden(*s, k, include_constant))
            .map(|(s, c)| (s, c.abs()))
            .fold((None, 0.0f64), |(w, m), (s, a)| if a > m { (Some(s), a) } else { (w, m) });
        Ok(TailCertificate {
            k,
            include_constant,
            exact: false,
            member: worst <= FLOAT_TAIL_TOL,
            max_violation: worst,
            exact_max_violation: None,
            witness: witness.filter(|_| worst > FLOAT_TAIL_TOL),
        })
    }
}

/// Largest `k` with `f` in the tail space, i.e. one less than the lowest
/// degree carrying weight. `None` when `include_constant` and the mean is
/// nonzero. A function with no weight in range reports `n`.
pub fn tail_level(f: &CubeFunction, include_constant: bool) -> Option<usize> {
    let n = f.n();
    let low = match integer_spectrum(f) {
        Some(sums) => sums
            .iter()
            .enumerate()
            .filter(|(s, v)| **v != 0 && (include_constant || *s != 0))
            .map(|(s, _)| s.count_ones() as usize)
            .min(),
        None => fwht(f)
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(s, c)| c.abs() > FLOAT_TAIL_TOL && (include_constant || *s != 0))
            .map(|(s, _)| s.count_ones() as usize)
            .min(),
    };
    match low {
        None => Some(n),
        Some(0) => None,
        Some(d) => Some(d - 1),
    }
}

/// Error unless every `f̂(S)` with `|S| < k` vanishes (constant included).
pub(crate) fn require_vanishing_below(f: &CubeFunction, k: usize) -> Result<TailCertificate> {
    if k == 0 {
        return tail_certificate(f, 0, false);
    }
    let cert = tail_certificate(f, k - 1, true)?;
    if !cert.member {
        return Err(Error::TailViolation {
            k: k - 1,
            max_violation: cert.max_violation,
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BooleanKind;
    use crate::fourier::project_above;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alleq(bits: usize) -> CubeFunction {
        let all = (1usize << bits) - 1;
        CubeFunction::from_predicate(bits, BooleanKind::PlusMinusOne, |j| j == 0 || j == all).unwrap()
    }

    #[test]
    fn alleq_is_in_plus_tail_one_not_two() {
        for r in 1..=5 {
            let f = alleq(r + 1);
            let c1 = tail_certificate(&f, 1, false).unwrap();
            assert!(c1.exact && c1.member);
            assert_eq!(c1.max_violation, 0.0);
            let c2 = tail_certificate(&f, 2, false).unwrap();
            assert!(!c2.member);
            assert_eq!(c2.witness.unwrap().count_ones(), 2);
            assert_eq!(tail_level(&f, false), Some(1));
            // mean 2^{1-r} - 1 vanishes only for r = 1
            assert_eq!(tail_certificate(&f, 0, true).unwrap().member, r == 1);
            assert_eq!(tail_level(&f, true), if r == 1 { Some(1) } else { None });
        }
    }

    #[test]
    fn parity_and_dictator() {
        let p = CubeFunction::parity(5).unwrap();
        assert!(tail_certificate(&p, 4, true).unwrap().member);
        assert!(!tail_certificate(&p, 5, true).unwrap().member);
        assert_eq!(tail_level(&p, true), Some(4));
        let d = CubeFunction::dictator(3, 2).unwrap();
        let c = tail_certificate(&d, 1, true).unwrap();
        assert!(!c.member);
        assert_eq!(c.exact_max_violation, Some(Dyadic::one()));
        assert_eq!(c.witness, Some(0b010));
    }

    #[test]
    fn rejects_level_above_dimension() {
        let p = CubeFunction::parity(2).unwrap();
        assert!(tail_certificate(&p, 3, true).is_err());
    }

    #[test]
    fn float_certificate_for_projected_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = CubeFunction::real(6, (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let g = project_above(&f, 3);
        let c = tail_certificate(&g, 2, true).unwrap();
        assert!(!c.exact && c.member);
        assert!(c.max_violation < 1e-14);
        assert_eq!(tail_level(&g, true), Some(2));
        assert!(require_vanishing_below(&g, 3).is_ok());
        assert_eq!(require_vanishing_below(&f, 1).unwrap_err().code(), "E_TAIL");
    }

    #[test]
    fn zero_function_has_full_level() {
        let z = CubeFunction::constant(4, 0.0).unwrap();
        assert_eq!(tail_level(&z, true), Some(4));
        let one = CubeFunction::constant(4, 1.0).unwrap();
        assert_eq!(tail_level(&one, false), Some(4));
    }
}
