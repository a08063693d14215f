//! Independent reference values for the integration tests.
//!
//! Everything here uses decimal fixed point with `DIGITS` digits on plain
//! `BigInt`s. π comes from Gauss's arctangent formula and `ln` from Halley
//! iteration on `exp`. None of it shares code with the library under test.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sinc_certify::{Enclosure, Rational};

pub const DIGITS: u32 = 230;

/// Decimal fixed-point number `value / 10^DIGITS`.
#[derive(Clone, Debug)]
pub struct Fixed(pub BigInt);

fn scale() -> BigInt {
    num_traits::pow(BigInt::from(10), DIGITS as usize)
}

impl Fixed {
    pub fn from_ratio(p: i64, q: i64) -> Fixed {
        Fixed(BigInt::from(p) * scale() / BigInt::from(q))
    }

    pub fn from_rational(r: &Rational) -> Fixed {
        Fixed(r.numer() * scale() / r.denom())
    }

    pub fn from_int(v: i64) -> Fixed {
        Fixed(BigInt::from(v) * scale())
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 * &o.0 / scale())
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 * scale() / &o.0)
    }

    pub fn div_int(&self, n: i64) -> Fixed {
        Fixed(&self.0 / BigInt::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.0.clone(), scale()).to_f64().unwrap()
    }
}

fn arctan_inv(n: i64) -> Fixed {
    // arctan(1/n) = Σ (−1)^k / ((2k+1) n^{2k+1})
    let n2 = BigInt::from(n * n);
    let mut power = scale() / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    Fixed(sum)
}

/// π = 48 arctan(1/18) + 32 arctan(1/57) − 20 arctan(1/239).
pub fn pi() -> Fixed {
    let a = arctan_inv(18).0 * 48;
    let b = arctan_inv(57).0 * 32;
    let c = arctan_inv(239).0 * 20;
    Fixed(a + b - c)
}

fn taylor(x: &Fixed, start: u32) -> Fixed {
    // Σ_{n ≡ start mod 2} (−1)^{(n−start)/2} x^n / n!
    let x2 = x.mul(x);
    let mut term = if start == 0 { Fixed::from_int(1) } else { x.clone() };
    let mut sum = term.clone();
    let mut n = start as i64;
    loop {
        term = term.mul(&x2).div_int((n + 1) * (n + 2));
        if term.is_zero() {
            return sum;
        }
        sum = Fixed(sum.0 - &term.0);
        term = Fixed(-term.0);
        n += 2;
    }
}

pub fn sin(x: &Fixed) -> Fixed {
    taylor(x, 1)
}

pub fn cos(x: &Fixed) -> Fixed {
    taylor(x, 0)
}

pub fn exp(z: &Fixed) -> Fixed {
    const HALVINGS: u32 = 24;
    let r = Fixed(&z.0 >> HALVINGS);
    let mut term = Fixed::from_int(1);
    let mut sum = term.clone();
    let mut n = 1;
    loop {
        term = term.mul(&r).div_int(n);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
        n += 1;
    }
    for _ in 0..HALVINGS {
        sum = sum.mul(&sum);
    }
    sum
}

/// Natural logarithm of a positive fixed-point value.
pub fn ln(y: &Fixed) -> Fixed {
    let guess = y.to_f64().ln();
    let mut z = Fixed(BigInt::from((guess * 1e15).round() as i64) * scale() / BigInt::from(1_000_000_000_000_000i64));
    for _ in 0..6 {
        let e = exp(&z);
        let step = y.sub(&e).div(&y.add(&e));
        z = Fixed(&z.0 + &step.0 * 2);
    }
    z
}

pub fn ln_sinc(x: &Fixed) -> Fixed {
    ln(&sin(x).div(x))
}

pub fn ln_cos_half(x: &Fixed) -> Fixed {
    ln(&cos(&x.div_int(2)))
}

/// Does `e` contain the reference value, up to the oracle's own error?
pub fn encloses(e: &Enclosure, v: &Fixed) -> bool {
    let slack = num_traits::pow(BigInt::from(10), 30);
    let lo = Rational::new(&v.0 - &slack, scale()).unwrap();
    let hi = Rational::new(&v.0 + &slack, scale()).unwrap();
    e.lo().to_rational() <= hi && e.hi().to_rational() >= lo
}

/// Bernoulli numbers `B_0 … B_n` from `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_by_recurrence(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut binom = BigInt::one(); // C(m+1, 0)
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        // binom is now C(m+1, m) = m + 1
        b.push(-acc / BigRational::from_integer(binom));
    }
    b
}

pub fn to_rational(r: &BigRational) -> Rational {
    Rational::new(r.numer().clone(), r.denom().clone()).unwrap()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `2^{2k−1} |B_2k| / (k (2k)!)`, the magnitude of the `x^{2k}` coefficient of `ln(sin x / x)`.
pub fn sinc_magnitude(b: &[BigRational], k: u32) -> Rational {
    let num = BigInt::one() << (2 * k - 1);
    let den = BigInt::from(k) * factorial(2 * k);
    let v = b[2 * k as usize].abs() * BigRational::new(num, den);
    to_rational(&v)
}
