//! Exact dyadic rationals `num / 2^exp`.
//!
//! Means, influences and Fourier coefficients of Boolean-valued functions on
//! `{-1,1}^n` are integer counts divided by a power of two, so every exact
//! claim in this crate is carried in this type. Values are kept normalized:
//! the numerator is odd unless the value is zero, in which case `exp == 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut num = num.into();
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(u64::from(exp)) as u32;
        num >>= tz as usize;
        Dyadic { num, exp: exp - tz }
    }

    pub fn zero() -> Self {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Self {
        Dyadic::new(1, 0)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^-k`
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic::new(1, k)
    }

    /// A count over the `2^n` points of the cube.
    pub fn from_count(count: u64, n: u32) -> Self {
        Dyadic::new(count, n)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Base-two logarithm of the denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::one() << self.exp as usize
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^shift` (shift may be negative).
    pub fn mul_pow2(&self, shift: i64) -> Self {
        if shift >= 0 {
            let s = shift as u64;
            if s <= u64::from(self.exp) {
                Dyadic::new(self.num.clone(), self.exp - s as u32)
            } else {
                let up = s - u64::from(self.exp);
                Dyadic::new(self.num.clone() << up as usize, 0)
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + (-shift) as u32)
        }
    }

    pub fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    pub fn pow(&self, e: u32) -> Self {
        Dyadic::new(num_traits::pow(self.num.clone(), e as usize), self.exp * e)
    }

    /// If the value is exactly `2^-k` for some `k >= 0`, return `k`.
    pub fn as_neg_power_of_two(&self) -> Option<u32> {
        (self.num.is_one()).then_some(self.exp)
    }

    /// Nearest `f64` (exact whenever the value is representable).
    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        let bits = self.num.bits();
        let (num, exp) = if bits > 64 {
            let s = bits - 64;
            (&self.num >> s as usize, i64::from(self.exp) - s as i64)
        } else {
            (self.num.clone(), i64::from(self.exp))
        };
        ldexp(num.to_f64().unwrap_or(f64::NAN), -exp)
    }

    /// Exact comparison against `a / b` with integers (b > 0).
    pub fn cmp_ratio(&self, a: &BigInt, b: &BigInt) -> Ordering {
        // num / 2^exp  vs  a / b   <=>   num * b  vs  a * 2^exp
        (&self.num * b).cmp(&(a << self.exp as usize))
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let exp = self.exp.max(other.exp);
        let a = &self.num << (exp - self.exp) as usize;
        let b = &other.num << (exp - other.exp) as usize;
        (a, b, exp)
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::new(a + b, exp)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::new(a - b, exp)
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    /// `num/den` with the denominator written out in decimal, e.g. `-3/32`, `0/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.denominator())
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `a`, `a/b` with `b` a power of two, and `a/2^k`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Format(format!("`{s}` is not a dyadic rational"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((a, b)) => (a.trim(), Some(b.trim())),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let exp = match den {
            None => 0,
            Some(d) => {
                if let Some(k) = d.strip_prefix("2^") {
                    k.parse::<u32>().map_err(|_| bad())?
                } else {
                    let d: BigInt = d.parse().map_err(|_| bad())?;
                    if d.sign() != Sign::Plus || (&d & (&d - 1u32)) != BigInt::zero() {
                        return Err(bad());
                    }
                    (d.bits() - 1) as u32
                }
            }
        };
        Ok(Dyadic::new(num, exp))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes_and_prints() {
        assert_eq!(Dyadic::new(4, 5).to_string(), "1/8");
        assert_eq!(Dyadic::new(0, 9).to_string(), "0/1");
        assert_eq!(Dyadic::new(-6, 1).to_string(), "-3/1");
        assert_eq!(d("3/2^5"), d("3/32"));
        assert_eq!(d("7"), Dyadic::from_int(7));
    }

    #[test]
    fn rejects_non_dyadic_denominators() {
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("1/0".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        let a = d("3/4");
        let b = d("1/8");
        assert_eq!(&a + &b, d("7/8"));
        assert_eq!(&b - &a, d("-5/8"));
        assert_eq!(&a * &b, d("3/32"));
        assert!(b < a);
        assert!(-&a < b);
        assert_eq!(a.pow(2), d("9/16"));
        assert_eq!(b.mul_pow2(3), Dyadic::one());
        assert_eq!(Dyadic::one().mul_pow2(2), Dyadic::from_int(4));
    }

    #[test]
    fn tribes_mean_arithmetic() {
        // 2(1 - (3/4)^2) - 1 = -1/8
        let q = d("3/4").pow(2);
        let mean = (Dyadic::one() - q).mul_pow2(1) - Dyadic::one();
        assert_eq!(mean, d("-1/8"));
    }

    #[test]
    fn to_f64_handles_large_exponents() {
        let tiny = Dyadic::pow2_neg(1100);
        assert_eq!(tiny.to_f64(), 0.0);
        let big = Dyadic::pow2_neg(30).pow(40); // 2^-1200
        assert!(big.to_f64() >= 0.0);
        let x = d("15/16").pow(200);
        let expect = (15.0f64 / 16.0).powi(200);
        assert!((x.to_f64() - expect).abs() <= 1e-15 * expect);
    }

    #[test]
    fn serde_uses_strings() {
        let v = serde_json::to_string(&d("-3/32")).unwrap();
        assert_eq!(v, "\"-3/32\"");
        let back: Dyadic = serde_json::from_str(&v).unwrap();
        assert_eq!(back, d("-3/32"));
    }
}
