//! Certificate that `f_a` has exactly one zero in `(0, π)`.
//!
//! With `m = 𝔪(a)`, the zero is unique when `f_a^{(j)} < 0` on a right
//! neighbourhood of 0 and `f_a^{(j)}(π−) > 0` for `j < m`, and every derivative of
//! order `≥ m` is non-negative. The last part follows from the series: all `E_k` with
//! `k > m` are non-negative. The first two parts are checked here.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{cos, pi_enclosure, sin, Enclosure, Rational};
use crate::series::{e_coeff, frak_m};

use super::roots::eval_f_a_reflected;
use super::sign::{Sign, Status};

/// How many extra exact series terms are summed before the geometric tail bound.
const EXACT_TERMS: u32 = 60;

/// How many times `η` is halved when an endpoint sign is undecided.
const ETA_HALVINGS: u32 = 5;

/// How many positive coefficients past `𝔪(a)` are checked exactly.
const POSITIVE_CHECKS: u32 = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniqueZeroCertificate {
    #[serde(serialize_with = "as_string")]
    pub a: Rational,
    pub m: u32,
    /// Near-zero conditions hold on `(0, delta]`.
    #[serde(serialize_with = "as_string")]
    pub delta: Rational,
    /// Endpoint conditions are evaluated at `π − eta`.
    #[serde(serialize_with = "as_string")]
    pub eta: Rational,
    pub near_zero_signs: Vec<Sign>,
    pub endpoint_signs: Vec<Sign>,
    #[serde(skip)]
    pub endpoint_values: Vec<Enclosure>,
    pub higher_derivative_basis: String,
    pub status: Status,
}

fn as_string<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl UniqueZeroCertificate {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// `n (n−1) ⋯ (n−j+1)`
fn falling(n: u32, j: u32) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// Certifies `f_a^{(j)} < 0` on `(0, δ]` by exact dominance of the leading term
/// `E_{k0} (2k0)_j x^{2k0−j}` over the rest of the differentiated series.
fn near_zero_negative(a: &Rational, j: u32, delta: &Rational) -> Result<bool> {
    let k0 = 1.max(j.div_ceil(2));
    let lead = e_coeff(a, k0)? * Rational::from_bigint(falling(2 * k0, j));
    if !lead.is_negative() {
        return Ok(false);
    }
    let d2 = delta * delta;
    let big_k = k0 + EXACT_TERMS;
    let mut rest = Rational::zero();
    let mut power = d2.clone();
    for k in k0 + 1..=big_k {
        rest = rest + (e_coeff(a, k)? * Rational::from_bigint(falling(2 * k, j))).abs() * &power;
        power = &power * &d2;
    }
    // |E_k| ≤ |ln-sinc coefficient| ≤ (329/200) / (k 9^k) for 3/2 ≤ a < 2
    let k1 = big_k + 1;
    let nine = Rational::from_integer(9);
    let bound = Rational::frac(329, 200)
        * Rational::new(
            1.into(),
            BigInt::from(k1) * num_traits::pow(BigInt::from(9), k1 as usize),
        )?;
    let first_tail = bound * Rational::from_bigint(falling(2 * k1, j)) * &power;
    let growth = Rational::new(BigInt::from(2 * k1 + 1), BigInt::from(2 * k1 + 1 - j))?;
    let ratio = (&growth * &growth) * &d2 * nine.recip()?;
    if ratio >= Rational::one() {
        return Ok(false);
    }
    let tail = first_tail.checked_div(&(Rational::one() - ratio))?;
    Ok(rest + tail < lead.abs())
}

/// Integer polynomial as coefficient vector, lowest degree first.
type IntPoly = Vec<BigInt>;

fn poly_derivative(p: &IntPoly) -> IntPoly {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// `(1 + s²) · p` with sign `sgn`.
fn times_one_plus_square(p: &IntPoly, sgn: i32) -> IntPoly {
    let mut out = vec![BigInt::zero(); p.len() + 2];
    for (i, c) in p.iter().enumerate() {
        out[i] += c * sgn;
        out[i + 2] += c * sgn;
    }
    out
}

fn eval_int_poly(p: &IntPoly, s: &Enclosure) -> Enclosure {
    let prec = s.precision_bits();
    let mut acc = Enclosure::zero(prec);
    for c in p.iter().rev() {
        acc = &(&acc * s) + &Enclosure::from_rational(&Rational::from_bigint(c.clone()), prec);
    }
    acc
}

/// `f_a^{(j)}(π − η)` for `j ≥ 1`, from
/// `f_a' = a (cot x − 1/x) + tan(x/2)`, `cot^{(n)} = P_n(cot)` with
/// `P_{n+1} = −(1 + c²) P_n'`, and `(tan(x/2))^{(n)} = 2^{−n} Q_n(tan(x/2))` with
/// `Q_{n+1} = (1 + t²) Q_n'`. At `x = π − η`: `cot x = −cot η`, `tan(x/2) = cot(η/2)`.
fn endpoint_derivative(a: &Rational, j: u32, eta: &Enclosure) -> Result<Enclosure> {
    let prec = eta.precision_bits();
    let n = j - 1;
    let mut p: IntPoly = vec![BigInt::zero(), BigInt::one()];
    let mut q: IntPoly = vec![BigInt::zero(), BigInt::one()];
    for _ in 0..n {
        p = times_one_plus_square(&poly_derivative(&p), -1);
        q = times_one_plus_square(&poly_derivative(&q), 1);
    }
    let cot_x = -cos(eta)?.div(&sin(eta)?)?;
    let half = eta.mul_pow2(-1);
    let tan_half = cos(&half)?.div(&sin(&half)?)?;
    let x = &pi_enclosure(prec)? - eta;
    // (1/x)^{(n)} = (−1)^n n! / x^{n+1}
    let fact: BigInt = (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let signed = if n.is_multiple_of(2) { fact } else { -fact };
    let recip_term = Enclosure::from_rational(&Rational::from_bigint(signed), prec).div(&x.powi(n + 1))?;
    let cot_part = &eval_int_poly(&p, &cot_x) - &recip_term;
    let tan_part = eval_int_poly(&q, &tan_half).mul_pow2(-(n as i64));
    Ok(&cot_part.mul_rational(a) + &tan_part)
}

fn endpoint_value(a: &Rational, j: u32, eta: &Enclosure) -> Result<Enclosure> {
    if j == 0 {
        eval_f_a_reflected(a, eta)
    } else {
        endpoint_derivative(a, j, eta)
    }
}

/// Checks condition 1) for every order below `m`; `Err(j)` names the first failure.
fn near_zero_part(a: &Rational, m: u32, delta: &Rational) -> Result<std::result::Result<Vec<Sign>, u32>> {
    for j in 0..m {
        if !near_zero_negative(a, j, delta)? {
            return Ok(Err(j));
        }
    }
    Ok(Ok(vec![Sign::Negative; m as usize]))
}

/// Endpoint values at the accepted `η`.
struct Endpoint {
    eta: Enclosure,
    values: Vec<Enclosure>,
}

/// Checks condition 2), halving `η` up to `halvings` times. On failure returns the
/// failing order and the last `η` tried.
fn endpoint_part(
    a: &Rational,
    m: u32,
    eta: &Enclosure,
    halvings: u32,
) -> Result<std::result::Result<Endpoint, (u32, Enclosure)>> {
    let mut eta = eta.clone();
    let mut left = halvings;
    'retry: loop {
        let mut values = Vec::with_capacity(m as usize);
        for j in 0..m {
            let v = endpoint_value(a, j, &eta)?;
            if !v.is_positive() {
                if left == 0 {
                    return Ok(Err((j, eta)));
                }
                left -= 1;
                eta = eta.mul_pow2(-1);
                continue 'retry;
            }
            values.push(v);
        }
        return Ok(Ok(Endpoint { eta, values }));
    }
}

fn assemble(
    a: &Rational,
    m: u32,
    delta: Rational,
    near_zero_signs: Vec<Sign>,
    end: Endpoint,
) -> Result<UniqueZeroCertificate> {
    for k in m + 1..=m + POSITIVE_CHECKS {
        if e_coeff(a, k)?.is_negative() {
            return Err(Error::Certification {
                index: None,
                reason: format!("series coefficient E_{k} is negative"),
            });
        }
    }
    Ok(UniqueZeroCertificate {
        a: a.clone(),
        m,
        delta,
        eta: end.eta.hi().to_rational(),
        endpoint_signs: vec![Sign::Positive; end.values.len()],
        near_zero_signs,
        endpoint_values: end.values,
        higher_derivative_basis: format!(
            "E_k ≥ 0 for every k > {m} because (2 − a)·4^k ≥ 2 there; checked exactly for k = {}..={}",
            m + 1,
            m + POSITIVE_CHECKS
        ),
        status: Status::Proven,
    })
}

fn near_zero_error(j: u32, delta: &Rational) -> Error {
    Error::Certification {
        index: Some(j as usize),
        reason: format!("derivative {j} not certified negative on (0, {delta}]"),
    }
}

fn endpoint_error(j: u32, eta: &Enclosure) -> Error {
    Error::Certification {
        index: Some(j as usize),
        reason: format!(
            "derivative {j} not certified positive at π − η for η down to {:e}",
            eta.hi().to_f64()
        ),
    }
}

/// Certifies conditions 1) and 2) for `3/2 ≤ a < 2` with the given `δ` and initial `η`.
///
/// `δ` is taken from the upper end of `delta`. `η` is halved up to five times
/// while an endpoint sign stays undecided or negative.
pub fn unique_zero_certificate(a: &Rational, delta: &Enclosure, eta: &Enclosure) -> Result<UniqueZeroCertificate> {
    let m = frak_m(a)?;
    let delta_r = delta.hi().to_rational();
    if !delta_r.is_positive() || !eta.lo().is_positive() {
        return Err(Error::domain("δ and η must be positive"));
    }
    let prec = eta.precision_bits().max(crate::DEFAULT_PRECISION);
    let pi = pi_enclosure(prec)?;
    if !Enclosure::from_rational(&delta_r, prec).certainly_lt(&(&pi - eta)) {
        return Err(Error::domain("δ must lie left of π − η"));
    }
    let signs = near_zero_part(a, m, &delta_r)?.map_err(|j| near_zero_error(j, &delta_r))?;
    let end = endpoint_part(a, m, &eta.with_precision(prec), ETA_HALVINGS)?.map_err(|(j, e)| endpoint_error(j, &e))?;
    assemble(a, m, delta_r, signs, end)
}

/// [`unique_zero_certificate`] with `δ` found by halving from `1/8` and `η`
/// searched automatically.
///
/// `η` starts at `1/100` with the usual five halvings. For `a` close to 2 the
/// zero `x_a` lies within `exp(−c/(2 − a))` of π, so the search then moves on
/// to `η = 2^{−e}` with `e` doubling from 16.
pub fn unique_zero_certificate_auto(a: &Rational) -> Result<UniqueZeroCertificate> {
    let prec = crate::DEFAULT_PRECISION;
    let m = frak_m(a)?;
    let mut delta = Rational::frac(1, 8);
    let signs = loop {
        match near_zero_part(a, m, &delta)? {
            Ok(s) => break s,
            Err(j) if delta.denom().bits() > 256 => return Err(near_zero_error(j, &delta)),
            Err(_) => delta = delta * Rational::frac(1, 2),
        }
    };
    let mut attempt = endpoint_part(
        a,
        m,
        &Enclosure::from_rational(&Rational::frac(1, 100), prec),
        ETA_HALVINGS,
    )?;
    let mut e: i64 = 16;
    while let Err((j, eta)) = attempt {
        if e > 1 << 20 {
            return Err(endpoint_error(j, &eta));
        }
        attempt = endpoint_part(a, m, &Enclosure::point(crate::Dyadic::pow2(-e), prec), 0)?;
        e *= 2;
    }
    assemble(a, m, delta, signs, attempt.expect("loop exits on success"))
}
