use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::dyadic::{Dyadic, Round};
use crate::exactnum::Rational;

/// A closed interval `[lo, hi]` of dyadic endpoints guaranteed to contain an exact
/// real value. Arithmetic rounds `lo` toward −∞ and `hi` toward +∞ at
/// `precision_bits` significant bits, so every result contains the exact image
/// of its inputs.
#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("enclosure endpoints out of order: {lo} > {hi}")));
        }
        Ok(Enclosure { lo, hi, prec })
    }

    pub(crate) fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "{lo:?} > {hi:?}");
        Enclosure { lo, hi, prec }
    }

    /// A degenerate enclosure holding `x` exactly (no rounding is applied).
    pub fn point(x: Dyadic, prec: u32) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Enclosure::point(Dyadic::zero(), prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_int(v), prec)
    }

    /// Exact point enclosure of a finite `f64`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_f64(v).expect("finite f64"), prec)
    }

    /// Outward-rounded enclosure of a rational; exact when the rational is dyadic
    /// and fits in `prec` bits.
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    /// Same interval, new working precision. Lowering the precision rounds outward.
    pub fn with_precision(&self, prec: u32) -> Self {
        Enclosure {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        Dyadic::from_f64(v).is_some_and(|d| self.contains(&d))
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Enclosure {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// Every contained value is `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Every contained value is `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    /// `-1`, `+1` when the sign is certain, `0` otherwise.
    pub fn certain_sign(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Every value of `self` is strictly below every value of `other`.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Enclosure) -> bool {
        self.lo > other.hi
    }

    /// Upper bound on `|x|`.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `|x|` (zero when the enclosure contains zero).
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Enclosure {
        if self.is_nonnegative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Enclosure {
                lo: Dyadic::zero(),
                hi: self.mag(),
                prec: self.prec,
            }
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Enclosure {
        Enclosure {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn add_enc(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec.max(other.prec);
        Enclosure {
            lo: self.lo.add(&other.lo).round(p, Round::Down),
            hi: self.hi.add(&other.hi).round(p, Round::Up),
            prec: p,
        }
    }

    pub fn sub_enc(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec.max(other.prec);
        Enclosure {
            lo: self.lo.sub(&other.hi).round(p, Round::Down),
            hi: self.hi.sub(&other.lo).round(p, Round::Up),
            prec: p,
        }
    }

    pub fn mul_enc(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec.max(other.prec);
        if self.is_nonnegative() && other.is_nonnegative() {
            return Enclosure {
                lo: self.lo.mul(&other.lo).round(p, Round::Down),
                hi: self.hi.mul(&other.hi).round(p, Round::Up),
                prec: p,
            };
        }
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().expect("four products").round(p, Round::Down);
        let hi = products.iter().max().expect("four products").round(p, Round::Up);
        Enclosure { lo, hi, prec: p }
    }

    pub fn mul_rational(&self, r: &Rational) -> Enclosure {
        self.mul_enc(&Enclosure::from_rational(r, self.prec))
    }

    /// `x²`, tighter than `x · x` when the enclosure straddles zero.
    pub fn sqr(&self) -> Enclosure {
        let a = self.abs();
        Enclosure {
            lo: a.lo.mul(&a.lo).round(self.prec, Round::Down),
            hi: a.hi.mul(&a.hi).round(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    /// `x^n` with the exact range of the monomial over the interval.
    pub fn powi(&self, n: u32) -> Enclosure {
        if n == 0 {
            return Enclosure::from_int(1, self.prec);
        }
        let p = self.prec;
        if self.is_nonnegative() {
            return Enclosure {
                lo: self.lo.pow_nonneg(n, p, Round::Down),
                hi: self.hi.pow_nonneg(n, p, Round::Up),
                prec: p,
            };
        }
        if n.is_multiple_of(2) {
            let a = self.abs();
            return a.powi(n);
        }
        // odd power is monotone increasing
        let lo = self.lo.abs().pow_nonneg(n, p, Round::Up).neg();
        let hi = if self.hi.is_negative() {
            self.hi.abs().pow_nonneg(n, p, Round::Down).neg()
        } else {
            self.hi.pow_nonneg(n, p, Round::Up)
        };
        Enclosure { lo, hi, prec: p }
    }

    pub fn recip(&self) -> Result<Enclosure> {
        Enclosure::from_int(1, self.prec).div(self)
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec.max(other.prec);
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for (a, b) in cands {
            let d_lo = a.div(b, p, Round::Down)?;
            let d_hi = a.div(b, p, Round::Up)?;
            lo = Some(match lo {
                Some(l) if l <= d_lo => l,
                _ => d_lo,
            });
            hi = Some(match hi {
                Some(h) if h >= d_hi => h,
                _ => d_hi,
            });
        }
        Ok(Enclosure {
            lo: lo.expect("nonempty"),
            hi: hi.expect("nonempty"),
            prec: p,
        })
    }

    pub fn div_int(&self, n: i64) -> Result<Enclosure> {
        self.div(&Enclosure::from_int(n, self.prec))
    }

    pub fn sqrt(&self) -> Result<Enclosure> {
        if self.lo.is_negative() {
            return Err(Error::domain("square root of an enclosure with negative values"));
        }
        Ok(Enclosure {
            lo: self.lo.sqrt(self.prec, Round::Down)?,
            hi: self.hi.sqrt(self.prec, Round::Up)?,
            prec: self.prec,
        })
    }

    /// `[-r, r]`.
    pub fn symmetric(r: &Dyadic, prec: u32) -> Enclosure {
        let r = r.abs();
        Enclosure {
            lo: r.neg(),
            hi: r,
            prec,
        }
    }

    /// `self + [-r, r]`.
    pub fn widen(&self, r: &Dyadic) -> Enclosure {
        self.add_enc(&Enclosure::symmetric(r, self.prec))
    }

    pub fn to_hex_pair(&self) -> [String; 2] {
        [self.lo.to_hex(), self.hi.to_hex()]
    }

    pub fn from_hex_pair(lo: &str, hi: &str, prec: u32) -> Result<Enclosure> {
        Enclosure::new(Dyadic::from_hex(lo)?, Dyadic::from_hex(hi)?, prec)
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]@{}", self.lo.to_f64(), self.hi.to_f64(), self.prec)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// Serialized as `[lo_hex, hi_hex]`; the working precision travels separately.
impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_hex_pair().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Enclosure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        let lo = Dyadic::from_hex(&lo).map_err(serde::de::Error::custom)?;
        let hi = Dyadic::from_hex(&hi).map_err(serde::de::Error::custom)?;
        let prec = lo.bits().max(hi.bits()).max(64) as u32;
        Enclosure::new(lo, hi, prec).map_err(serde::de::Error::custom)
    }
}

macro_rules! enclosure_binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl $trait<&Enclosure> for &Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: &Enclosure) -> Enclosure {
                self.$impl(rhs)
            }
        }
        impl $trait<Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: Enclosure) -> Enclosure {
                self.$impl(&rhs)
            }
        }
        impl $trait<&Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: &Enclosure) -> Enclosure {
                self.$impl(rhs)
            }
        }
        impl $trait<Enclosure> for &Enclosure {
            type Output = Enclosure;
            fn $method(self, rhs: Enclosure) -> Enclosure {
                self.$impl(&rhs)
            }
        }
    };
}

enclosure_binop!(Add, add, add_enc);
enclosure_binop!(Sub, sub, sub_enc);
enclosure_binop!(Mul, mul, mul_enc);

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}
