//! Exact binary floating-point numbers `mantissa · 2^exponent` with explicit,
//! directed rounding. Every rounded operation takes the target precision in bits
//! and a [`Round`] direction; unrounded operations (`add`, `sub`, `mul`) are exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Rounding direction: toward −∞ or toward +∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// A dyadic rational `mant · 2^exp`. Normalized so that the mantissa is odd
/// (or the value is zero with exponent zero), which makes equality structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Bit length of the mantissa magnitude.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |x|)`; undefined (returns `i64::MIN`) for zero.
    pub fn magnitude_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.bits() as i64 + self.exp - 1
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Exact `self · 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let negative = self.is_negative();
        let mag = self.mant.magnitude();
        // Magnitude rounds up when we round a positive number up or a negative one down.
        let away = (dir == Round::Up) != negative;
        let q = round_magnitude(mag, shift, away);
        let mant = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// `self / other` rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Result<Dyadic> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let negative = self.is_negative() != other.is_negative();
        let ma = self.mant.magnitude();
        let mb = other.mant.magnitude();
        let k = (prec as i64 + 2 + mb.bits() as i64 - ma.bits() as i64).max(0);
        let num = ma << k as usize;
        let (mut q, r) = num.div_rem(mb);
        let away = (dir == Round::Up) != negative;
        if !r.is_zero() && away {
            q += 1u32;
        }
        let mant = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Ok(Dyadic::new(mant, self.exp - other.exp - k).round(prec, dir))
    }

    /// `p / q` for integers, rounded.
    pub fn from_ratio(p: &BigInt, q: &BigInt, prec: u32, dir: Round) -> Result<Dyadic> {
        Dyadic::from_bigint(p.clone()).div(&Dyadic::from_bigint(q.clone()), prec, dir)
    }

    pub fn from_rational(r: &Rational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(r.numer(), r.denom(), prec, dir).expect("rational denominators are positive")
    }

    /// Square root of a non-negative value, rounded.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Result<Dyadic> {
        if self.is_negative() {
            return Err(Error::domain("square root of a negative number"));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let m = self.mant.magnitude();
        let mut s = (2 * prec as i64 + 4 - m.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let scaled = m << s as usize;
        let mut r = scaled.sqrt();
        if dir == Round::Up && &r * &r != scaled {
            r += 1u32;
        }
        Ok(Dyadic::new(BigInt::from(r), (self.exp - s) / 2).round(prec, dir))
    }

    /// `self^n` for `self ≥ 0`, rounded at every step in direction `dir`.
    pub fn pow_nonneg(&self, n: u32, prec: u32, dir: Round) -> Dyadic {
        debug_assert!(!self.is_negative());
        let mut result = Dyadic::one();
        let mut base = self.round(prec, dir);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).round(prec, dir);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).round(prec, dir);
            }
        }
        result
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_bigint(&self.mant << self.exp as usize)
        } else {
            Rational::new_unchecked(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest-ish `f64`; for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits() as i64;
        let (m, e) = if bits > 60 {
            (&self.mant >> (bits - 60) as usize, self.exp + bits - 60)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0 * m.signum();
        }
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Truncate toward zero to `digits` decimal places, e.g. `3.14159 → "3.141"`.
    pub fn truncated_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let r = self.to_rational();
        let scaled = r.numer().abs() * &scale / r.denom();
        let sign = if self.is_negative() && !scaled.is_zero() {
            "-"
        } else {
            ""
        };
        let (int, frac) = scaled.div_rem(&scale);
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
        }
    }

    /// Bit-exact textual form `[-]0x<hex mantissa>p<exponent>`.
    pub fn to_hex(&self) -> String {
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}0x{}p{}", self.mant.magnitude().to_str_radix(16), self.exp)
    }

    pub fn from_hex(s: &str) -> Result<Dyadic> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let body = body.strip_prefix("0x").ok_or_else(|| err("missing 0x prefix"))?;
        let (mant, exp) = body.split_once('p').ok_or_else(|| err("missing binary exponent"))?;
        let m = BigUint::parse_bytes(mant.as_bytes(), 16).ok_or_else(|| err("bad hex mantissa"))?;
        let e: i64 = exp.parse().map_err(|_| err("bad exponent"))?;
        let m = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, m);
        Ok(Dyadic::new(m, e))
    }
}

fn round_magnitude(mag: &BigUint, shift: u64, away: bool) -> BigUint {
    let q = mag >> shift as usize;
    let exact = mag.trailing_zeros().is_none_or(|tz| tz >= shift);
    if away && !exact {
        q + 1u32
    } else {
        q
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ea, eb) = (self.magnitude_exp(), other.magnitude_exp());
        if ea != eb {
            let by_mag = ea.cmp(&eb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:e})", self.to_hex(), self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v).unwrap()
    }

    #[test]
    fn normalization_makes_equality_structural() {
        assert_eq!(Dyadic::new(BigInt::from(12), 0), Dyadic::new(BigInt::from(3), 2));
        assert_eq!(Dyadic::new(BigInt::zero(), 17), Dyadic::zero());
    }

    #[test]
    fn directed_rounding_brackets_value() {
        let third_lo = Dyadic::from_ratio(&1.into(), &3.into(), 20, Round::Down).unwrap();
        let third_hi = Dyadic::from_ratio(&1.into(), &3.into(), 20, Round::Up).unwrap();
        let third = Rational::new(1.into(), 3.into()).unwrap();
        assert!(third_lo.to_rational() < third);
        assert!(third_hi.to_rational() > third);
        let neg_lo = Dyadic::from_ratio(&(-1).into(), &3.into(), 20, Round::Down).unwrap();
        assert!(neg_lo.to_rational() < -third.clone());
        assert!(third_hi.sub(&third_lo) <= Dyadic::pow2(-20));
    }

    #[test]
    fn sqrt_is_directed() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Round::Down).unwrap();
        let hi = two.sqrt(64, Round::Up).unwrap();
        assert!(lo.mul(&lo) < two);
        assert!(hi.mul(&hi) > two);
        assert_eq!(Dyadic::from_int(9).sqrt(8, Round::Down).unwrap(), Dyadic::from_int(3));
    }

    #[test]
    fn hex_round_trip_and_compare() {
        for v in [0.0, 1.0, -3.75, 1e-300, 6.02e23] {
            let x = d(v);
            assert_eq!(Dyadic::from_hex(&x.to_hex()).unwrap(), x);
            assert_eq!(x.to_f64(), v);
        }
        assert!(d(-2.0) < d(-1.5));
        assert!(d(1e-10) < d(1.0));
        assert!(Dyadic::pow2(-20000) > Dyadic::zero());
    }

    #[test]
    fn truncated_decimal_truncates() {
        assert_eq!(d(2.71875).truncated_decimal(3), "2.718");
        assert_eq!(d(0.0625).truncated_decimal(3), "0.062");
        assert_eq!(d(-1.5).truncated_decimal(2), "-1.50");
    }
}
