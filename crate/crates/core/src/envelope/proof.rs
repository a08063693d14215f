//! The two proof polynomials for the polynomial-exponent double inequality.
//!
//! With `G_i(x) = p_i(x) ln(sin x / x) − 2 ln cos(x/2)`:
//!
//! * `H₁` bounds `G₁` from above. It combines the truncation of `ln(sin x/x)`
//!   (an upper bound, since every coefficient is negative) weighted by `p₁ > 0`
//!   with twice the endpoint-defect upper bound of `−ln cos(x/2)`.
//! * `H₂` bounds `G₂` from below. It combines the endpoint-defect lower bound of
//!   `ln(sin x/x)` weighted by `p₂` with twice the truncation of `−ln cos(x/2)`.

use crate::error::{Error, Result};
use crate::exactnum::{ln_cos_half_value, ln_sinc_value, pi_enclosure, Enclosure, Rational};
use crate::series::{ExponentParameter, QuadraticCoeff, SeriesSpec};

use super::wd::{remainder, truncation, Remainder};
use super::{check_validity_endpoint, EnvelopePolynomial, PolyBuilder, Side};

fn add_weighted_exact(
    b: &mut PolyBuilder,
    weight: &ExponentParameter,
    terms: &[(u32, Rational)],
    prec: u32,
) -> Result<()> {
    let (p0, p2) = match weight {
        ExponentParameter::Polynomial { p0, p2 } => (p0, Some(p2)),
        ExponentParameter::Constant(a) => (a, None),
    };
    for (k, coeff) in terms {
        b.add_exact(2 * k, p0 * coeff);
        match p2 {
            Some(QuadraticCoeff::Rational(q)) => b.add_exact(2 * k + 2, q * coeff),
            Some(q @ QuadraticCoeff::OverPiSquared(_)) => {
                b.add_enclosed(2 * k + 2, q.enclosure(prec)?.mul_rational(coeff))
            }
            None => {}
        }
    }
    Ok(())
}

fn add_weighted_remainder(b: &mut PolyBuilder, weight: &ExponentParameter, rem: &Remainder, prec: u32) -> Result<()> {
    add_weighted_exact(b, weight, &rem.exact, prec)?;
    let power = 2 * rem.m;
    match weight {
        ExponentParameter::Constant(a) => b.add_enclosed(power, rem.top.mul_rational(a)),
        ExponentParameter::Polynomial { p0, p2 } => {
            b.add_enclosed(power, rem.top.mul_rational(p0));
            b.add_enclosed(power + 2, &p2.enclosure(prec)? * &rem.top);
        }
    }
    Ok(())
}

fn check_params(m: u32, n: u32, c: &Enclosure, what: &str) -> Result<u32> {
    if m < 2 || n < 2 {
        return Err(Error::domain(format!("{what} needs orders ≥ 2, got ({m}, {n})")));
    }
    let prec = c.precision_bits().max(64);
    check_validity_endpoint(c, &pi_enclosure(prec)?, what)?;
    Ok(prec)
}

fn twice(terms: Vec<(u32, Rational)>) -> Vec<(u32, Rational)> {
    let two = Rational::from_integer(2);
    terms.into_iter().map(|(k, r)| (k, &two * &r)).collect()
}

/// Upper envelope `H₁` of `G₁` on `(0, c1)`, of degree `2·max(m1 + 1, n1)`.
pub fn build_h1(m1: u32, n1: u32, c1: &Enclosure) -> Result<EnvelopePolynomial> {
    let prec = check_params(m1, n1, c1, "H1")?;
    let mut b = PolyBuilder::new(prec);
    let sinc = truncation(&SeriesSpec::ln_sinc(), m1)?;
    add_weighted_exact(&mut b, &ExponentParameter::p1(), &sinc, prec)?;
    let rem = remainder(&SeriesSpec::neg_ln_cos_half(), c1, n1, 1, prec)?;
    let two = ExponentParameter::Constant(Rational::from_integer(2));
    add_weighted_remainder(&mut b, &two, &rem, prec)?;
    b.build("G1", Side::Upper, c1.with_precision(prec))
}

/// Lower envelope `H₂` of `G₂` on `(0, c2)`, of degree `2·max(m2 + 1, n2)`.
pub fn build_h2(m2: u32, n2: u32, c2: &Enclosure) -> Result<EnvelopePolynomial> {
    let prec = check_params(m2, n2, c2, "H2")?;
    let mut b = PolyBuilder::new(prec);
    let rem = remainder(&SeriesSpec::ln_sinc(), c2, m2, -1, prec)?;
    add_weighted_remainder(&mut b, &ExponentParameter::p2(), &rem, prec)?;
    let cos = twice(truncation(&SeriesSpec::neg_ln_cos_half(), n2)?);
    for (k, r) in cos {
        b.add_exact(2 * k, r);
    }
    b.build("G2", Side::Lower, c2.with_precision(prec))
}

fn g_value(weight: &ExponentParameter, x: &Enclosure) -> Result<Enclosure> {
    let p = weight.eval(x)?;
    let s = &p * &ln_sinc_value(x)?;
    Ok(&s - &ln_cos_half_value(x)?.mul_pow2(1))
}

/// Pointwise `G₁(x) = p₁(x) ln(sin x/x) − 2 ln cos(x/2)`.
pub fn g1_value(x: &Enclosure) -> Result<Enclosure> {
    g_value(&ExponentParameter::p1(), x)
}

/// Pointwise `G₂(x) = p₂(x) ln(sin x/x) − 2 ln cos(x/2)`.
pub fn g2_value(x: &Enclosure) -> Result<Enclosure> {
    g_value(&ExponentParameter::p2(), x)
}
