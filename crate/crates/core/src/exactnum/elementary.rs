//! Rigorous enclosures of π, ln 2, sin, cos, ln and the two logarithmic series
//! `ln(sin x / x)` and `ln cos(x/2)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::bernoulli::bernoulli_abs;
use crate::exactnum::dyadic::{Dyadic, Round};
use crate::exactnum::{Enclosure, Rational};

/// Extra bits carried internally before the final outward rounding.
const GUARD_BITS: u32 = 40;

/// Largest series index used by the Bernoulli path (`B_{2k}`, `k ≤ 256`).
const MAX_SERIES_TERMS: u32 = 256;

type Cache = Mutex<HashMap<u32, Enclosure>>;

fn cached(cache: &'static OnceLock<Cache>, prec: u32, compute: impl FnOnce(u32) -> Enclosure) -> Enclosure {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("cache lock").get(&prec) {
        return v.clone();
    }
    let v = compute(prec);
    map.lock().expect("cache lock").entry(prec).or_insert(v).clone()
}

/// Enclosure of π of width at most `2^(4 - precision_bits)`, via Machin's formula
/// `π = 16 atan(1/5) − 4 atan(1/239)` with alternating-series remainders.
pub fn pi_enclosure(precision_bits: u32) -> Result<Enclosure> {
    if precision_bits < 16 {
        return Err(Error::domain(format!(
            "π needs at least 16 bits of precision, got {precision_bits}"
        )));
    }
    static CACHE: OnceLock<Cache> = OnceLock::new();
    Ok(cached(&CACHE, precision_bits, |p| {
        let w = p + GUARD_BITS;
        let a = atan_inv(5, w);
        let b = atan_inv(239, w);
        (a.mul_pow2(4) - b.mul_pow2(2)).with_precision(p)
    }))
}

/// `atan(1/n)` for an integer `n ≥ 2`.
fn atan_inv(n: u32, w: u32) -> Enclosure {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = n.clone();
    let mut sum = Enclosure::zero(w);
    let eps = Dyadic::pow2(-(w as i64) - 8);
    let mut k: u64 = 0;
    loop {
        let den = BigInt::from(2 * k + 1) * &power;
        let term = Enclosure::from_rational(&Rational::new(BigInt::from(1), den).expect("nonzero"), w);
        if term.hi() < &eps {
            // alternating series with decreasing terms: the remainder lies between 0 and the next term
            let tail = if k.is_multiple_of(2) {
                Enclosure::from_bounds(Dyadic::zero(), term.hi().clone(), w)
            } else {
                Enclosure::from_bounds(term.hi().neg(), Dyadic::zero(), w)
            };
            return sum + tail;
        }
        sum = if k.is_multiple_of(2) { sum + term } else { sum - term };
        power *= &n2;
        k += 1;
    }
}

/// Enclosure of ln 2 as `2 atanh(1/3)`.
pub fn ln2_enclosure(precision_bits: u32) -> Enclosure {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, precision_bits, |p| {
        let w = p + GUARD_BITS;
        let third = Enclosure::from_rational(&Rational::frac(1, 3), w);
        atanh_series(&third, w).mul_pow2(1).with_precision(p)
    })
}

/// `atanh z = Σ z^{2j+1}/(2j+1)` for `|z| ≤ 1/3`, remainder bounded by
/// `|z|^{2N+3} / ((2N+3)(1 − z²))`.
fn atanh_series(z: &Enclosure, w: u32) -> Enclosure {
    let z2 = z.sqr();
    let mut power = z.clone();
    let mut sum = Enclosure::zero(w);
    let eps_exp = -(w as i64) - 8;
    let mut j: i64 = 0;
    loop {
        let term = power.div_int(2 * j + 1).expect("nonzero");
        let mag = power.mag();
        if mag.is_zero() || mag.magnitude_exp() < eps_exp {
            // 1/(1 − z²) ≤ 9/8 for |z| ≤ 1/3
            let bound = mag.mul(&Dyadic::from_int(9)).mul_pow2(-3);
            return sum.widen(&bound);
        }
        sum = sum + term;
        power = &power * &z2;
        j += 1;
    }
}

/// Natural logarithm of a positive dyadic point.
fn ln_point(x: &Dyadic, w: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::domain("logarithm of a non-positive number"));
    }
    let mut k = x.magnitude_exp();
    let mut r = x.mul_pow2(-k);
    if r > Dyadic::from_int(3).mul_pow2(-1) {
        k += 1;
        r = r.mul_pow2(-1);
    }
    // r ∈ [3/4, 3/2], so z = (r−1)/(r+1) ∈ [−1/7, 1/5]
    let re = Enclosure::point(r, w);
    let one = Enclosure::from_int(1, w);
    let z = (&re - &one).div(&(&re + &one))?;
    let ln_r = atanh_series(&z, w).mul_pow2(1);
    if k == 0 {
        return Ok(ln_r);
    }
    let extra = 64 - (k.unsigned_abs().leading_zeros());
    let ln2 = ln2_enclosure(w + extra);
    Ok(&(&ln2 * &Enclosure::from_int(k, w + extra)) + &ln_r)
}

/// Natural logarithm; the argument must be certainly positive.
pub fn ln(x: &Enclosure) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::domain(format!("logarithm needs a positive argument, got {x:?}")));
    }
    let p = x.precision_bits();
    let w = p + GUARD_BITS;
    let lo = ln_point(x.lo(), w)?;
    if x.is_point() {
        return Ok(lo.with_precision(p));
    }
    let hi = ln_point(x.hi(), w)?;
    Ok(Enclosure::from_bounds(lo.lo().clone(), hi.hi().clone(), w).with_precision(p))
}

const MAX_TRIG_ARGUMENT: i64 = 8;

fn check_trig_argument(x: &Enclosure) -> Result<()> {
    if x.mag() > Dyadic::from_int(MAX_TRIG_ARGUMENT) {
        return Err(Error::domain(format!(
            "trigonometric argument {x:?} outside the supported range |x| ≤ {MAX_TRIG_ARGUMENT}"
        )));
    }
    Ok(())
}

/// Taylor sum `Σ_{k≥0} (−1)^k x^{2k+offset}/(2k+offset)!`, `offset ∈ {0, 1}`, with the
/// Lagrange remainder bounded by the magnitude of the first omitted term.
fn trig_taylor(x: &Enclosure, offset: i64, w: u32) -> Enclosure {
    let x = x.with_precision(w);
    let x2 = x.sqr();
    let mut term = if offset == 1 {
        x.clone()
    } else {
        Enclosure::from_int(1, w)
    };
    let mut sum = Enclosure::zero(w);
    let scale = x.mag().magnitude_exp().min(0);
    let eps_exp = scale - w as i64 - 8;
    let mut k: i64 = 0;
    loop {
        let mag = term.mag();
        if mag.is_zero() || (mag.magnitude_exp() < eps_exp && k > 0) {
            return sum.widen(&mag);
        }
        sum = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        let n = 2 * k + offset;
        term = (&term * &x2).div_int((n + 1) * (n + 2)).expect("nonzero");
        k += 1;
    }
}

pub fn sin(x: &Enclosure) -> Result<Enclosure> {
    check_trig_argument(x)?;
    let p = x.precision_bits();
    Ok(trig_taylor(x, 1, p + GUARD_BITS).with_precision(p))
}

pub fn cos(x: &Enclosure) -> Result<Enclosure> {
    check_trig_argument(x)?;
    let p = x.precision_bits();
    Ok(trig_taylor(x, 0, p + GUARD_BITS).with_precision(p))
}

/// `ζ(2) = π²/6 ≤ 329/200`.
pub(crate) fn zeta2_upper() -> Rational {
    Rational::frac(329, 200)
}

/// Which coefficient stream a Bernoulli series sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LogSeries {
    /// `ln(sin x/x) = −Σ 2^{2k−1}|B_2k|/(k(2k)!) x^{2k}`
    LnSinc,
    /// `−ln cos(x/2) = Σ (2^{2k}−1)|B_2k|/(2k(2k)!) x^{2k}`
    NegLnCosHalf,
}

/// Magnitude of the `k`-th coefficient of either series; both are at most `ζ(2k)/(k π^{2k})`.
fn log_series_coeff_abs(series: LogSeries, k: u32) -> Result<Rational> {
    let b = bernoulli_abs(k)?;
    let fact = factorial(2 * k);
    let r = match series {
        LogSeries::LnSinc => {
            let num = BigInt::from(1) << (2 * k - 1);
            Rational::from_bigint(num) * b * Rational::new(BigInt::from(1), BigInt::from(k) * fact)?
        }
        LogSeries::NegLnCosHalf => {
            let num = (BigInt::from(1) << (2 * k)) - 1;
            Rational::from_bigint(num) * b * Rational::new(BigInt::from(1), BigInt::from(2 * k) * fact)?
        }
    };
    Ok(r)
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

/// Upper bound on `Σ_{k>n} ζ(2k)/k · r^k` for `r = (x/π)² < 1`:
/// `ζ(2)/(n+1) · r^{n+1} / (1 − r)`.
pub(crate) fn geometric_tail(n: u32, ratio: &Enclosure) -> Result<Dyadic> {
    let w = ratio.precision_bits();
    let r_hi = Enclosure::point(ratio.hi().clone(), w);
    let one = Enclosure::from_int(1, w);
    if !r_hi.certainly_lt(&one) {
        return Err(Error::domain("series ratio not certainly below 1"));
    }
    let zeta = Enclosure::from_rational(&zeta2_upper(), w);
    let t = (&zeta * &r_hi.powi(n + 1))
        .div(&(&one - &r_hi))?
        .div_int(n as i64 + 1)?;
    Ok(t.hi().clone())
}

/// Number of series terms so that the geometric tail is below `2^-w` (estimated in f64).
fn terms_needed(ratio: f64, w: u32) -> u32 {
    let target = -(w as f64 + 8.0) * std::f64::consts::LN_2;
    let mut n = 1u32;
    while n < 100_000 {
        let log_tail = 0.5 + (n as f64 + 1.0) * ratio.ln() - (1.0 - ratio).ln() - ((n + 1) as f64).ln();
        if log_tail < target {
            return n;
        }
        n += 1;
    }
    n
}

/// Sum of a positive-coefficient log series at a dyadic point with a rigorous tail.
/// Returns `None` when the Bernoulli path would need more than `MAX_SERIES_TERMS` terms.
fn log_series_point(series: LogSeries, x: &Dyadic, w: u32) -> Result<Option<Enclosure>> {
    let pi = pi_enclosure(w)?;
    let xe = Enclosure::point(x.clone(), w);
    let ratio = xe.sqr().div(&pi.sqr())?;
    let n = terms_needed(ratio.hi().to_f64(), w);
    if n > MAX_SERIES_TERMS {
        return Ok(None);
    }
    let x2 = xe.sqr();
    let mut power = x2.clone();
    let mut sum = Enclosure::zero(w);
    for k in 1..=n {
        let c = Enclosure::from_rational(&log_series_coeff_abs(series, k)?, w);
        sum = &sum + &(&c * &power);
        power = &power * &x2;
    }
    let tail = geometric_tail(n, &ratio)?;
    Ok(Some(Enclosure::from_bounds(
        sum.lo().clone(),
        sum.hi().add(&tail).round(w, Round::Up),
        w,
    )))
}

fn check_open_zero_pi(x: &Enclosure, what: &str) -> Result<()> {
    let pi = pi_enclosure(x.precision_bits().max(64))?;
    if !x.lo().is_positive() || x.hi() >= pi.lo() {
        return Err(Error::domain(format!(
            "{what} needs an argument strictly inside (0, π), got {x:?}"
        )));
    }
    Ok(())
}

/// Whether the Bernoulli series is used (argument at most π/4).
fn use_series(x: &Dyadic, w: u32) -> Result<bool> {
    let pi = pi_enclosure(w)?;
    Ok(x.mul_pow2(2) < *pi.lo())
}

fn ln_sinc_point(x: &Dyadic, w: u32) -> Result<Enclosure> {
    if use_series(x, w)? {
        if let Some(s) = log_series_point(LogSeries::LnSinc, x, w)? {
            return Ok(-s);
        }
    }
    ln_sinc_direct(x, w)
}

/// `ln(sin x) − ln x` from the Taylor enclosure of sin.
pub(crate) fn ln_sinc_direct(x: &Dyadic, w: u32) -> Result<Enclosure> {
    let xe = Enclosure::point(x.clone(), w);
    let s = sin(&xe)?;
    ln(&s.div(&xe)?)
}

fn neg_ln_cos_half_point(x: &Dyadic, w: u32) -> Result<Enclosure> {
    if use_series(x, w)? {
        if let Some(s) = log_series_point(LogSeries::NegLnCosHalf, x, w)? {
            return Ok(s);
        }
    }
    ln_cos_half_direct(x, w).map(|v| -v)
}

pub(crate) fn ln_cos_half_direct(x: &Dyadic, w: u32) -> Result<Enclosure> {
    let half = Enclosure::point(x.mul_pow2(-1), w);
    ln(&cos(&half)?)
}

/// Evaluate a function that is decreasing on `(0, π)` at both endpoints.
fn decreasing_on(x: &Enclosure, f: impl Fn(&Dyadic, u32) -> Result<Enclosure>) -> Result<Enclosure> {
    let p = x.precision_bits();
    let w = p + GUARD_BITS;
    let at_lo = f(x.lo(), w)?;
    if x.is_point() {
        return Ok(at_lo.with_precision(p));
    }
    let at_hi = f(x.hi(), w)?;
    Ok(Enclosure::from_bounds(at_hi.lo().clone(), at_lo.hi().clone(), w).with_precision(p))
}

/// Enclosure of `ln(sin x / x)` for `x` strictly inside `(0, π)`.
///
/// Small arguments sum the Bernoulli series with the tail bound
/// `ζ(2)/(N+1) · (x/π)^{2N+2} / (1 − (x/π)²)`; larger ones go through the
/// Taylor enclosure of sin and the atanh logarithm. The function is decreasing,
/// so interval arguments are evaluated at their endpoints.
pub fn ln_sinc_value(x: &Enclosure) -> Result<Enclosure> {
    check_open_zero_pi(x, "ln(sin x / x)")?;
    decreasing_on(x, ln_sinc_point)
}

/// Enclosure of `ln cos(x/2)` for `x` strictly inside `(0, π)`.
pub fn ln_cos_half_value(x: &Enclosure) -> Result<Enclosure> {
    check_open_zero_pi(x, "ln cos(x/2)")?;
    decreasing_on(x, |d, w| neg_ln_cos_half_point(d, w).map(|v| -v))
}
