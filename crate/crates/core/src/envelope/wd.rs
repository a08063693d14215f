//! Envelopes for even series with finitely many coefficients of the minority sign.
//!
//! If `g(x) = Σ C_k x^{2k}` has non-negative coefficients then `(g(x) − T_{m−1}(x)) / x^{2m}`
//! is increasing on `(0, c)`, which yields for every `x ∈ (0, c)`
//!
//! ```text
//! T_n(x)  ≤  g(x)  ≤  T_{m−1}(x) + (x/c)^{2m} (g(c) − T_{m−1}(c)).
//! ```
//!
//! Finitely many negative coefficients are split off first. Once `n` and `m`
//! exceed their indices they re-enter both sides unchanged, so the same two
//! formulas apply to the full series. All-negative series are handled by negation,
//! which swaps the sides.

use crate::error::{Error, Result};
use crate::exactnum::{Enclosure, Rational};
use crate::series::{frak_m, SeriesSpec, SignPattern};

use super::{check_validity_endpoint, EnvelopePolynomial, PolyBuilder, Side};

/// Maximum number of precision doublings before giving up on an endpoint defect.
pub(crate) const MAX_RETRIES: u32 = 4;

/// Exact truncation `Σ_{k=1}^{n} C_k x^{2k}` as `(k, C_k)` pairs.
pub(crate) fn truncation(spec: &SeriesSpec, n: u32) -> Result<Vec<(u32, Rational)>> {
    (1..=n).map(|k| Ok((k, spec.coefficient(k)?))).collect()
}

/// Remainder-side data: the exact part `T_{m−1}` and the enclosure of
/// `(f(c) − T_{m−1}(c)) / c^{2m}`, which multiplies `x^{2m}`.
pub(crate) struct Remainder {
    pub(crate) exact: Vec<(u32, Rational)>,
    pub(crate) m: u32,
    pub(crate) top: Enclosure,
}

/// Builds the remainder data at `prec`, requiring the endpoint defect to have the
/// certified sign `sign` (the sign of the tail coefficients). Precision is doubled
/// while the defect straddles zero.
pub(crate) fn remainder(spec: &SeriesSpec, c: &Enclosure, m: u32, sign: i32, prec: u32) -> Result<Remainder> {
    if m == 0 {
        return Err(Error::domain("remainder order m must be at least 1"));
    }
    let exact = truncation(spec, m - 1)?;
    let mut p = prec;
    for _ in 0..=MAX_RETRIES {
        let cc = c.with_precision(p);
        let c2 = cc.sqr();
        let mut partial = Enclosure::zero(p);
        let mut power = c2.clone();
        for (_, coeff) in &exact {
            partial = &partial + &power.mul_rational(coeff);
            power = &power * &c2;
        }
        let defect = &spec.value(&cc)? - &partial;
        if defect.certain_sign() == sign {
            let top = defect.div(&power)?.with_precision(prec.max(p));
            return Ok(Remainder { exact, m, top });
        }
        p *= 2;
    }
    Err(Error::Inconclusive(format!(
        "endpoint defect of {} at order {m} not certified after {MAX_RETRIES} precision doublings",
        spec.name()
    )))
}

fn dominant_sign(spec: &SeriesSpec) -> (i32, Vec<u32>) {
    match spec.sign_pattern() {
        SignPattern::MostlyNonNegative(j) => (1, j),
        SignPattern::MostlyNonPositive(j) => (-1, j),
    }
}

/// Lower and upper envelopes of `spec` on `(0, c)`: truncation at order `n` on one
/// side and the endpoint-defect polynomial of order `m` on the other.
pub fn wd_envelopes(
    spec: &SeriesSpec,
    c: &Enclosure,
    n: u32,
    m: u32,
) -> Result<(EnvelopePolynomial, EnvelopePolynomial)> {
    let prec = c.precision_bits().max(64);
    check_validity_endpoint(c, &spec.radius(prec)?, &spec.name())?;
    let (sign, exceptional) = dominant_sign(spec);
    if let Some(&jmax) = exceptional.iter().max() {
        if n <= jmax || m <= jmax {
            return Err(Error::domain(format!(
                "orders n = {n}, m = {m} must exceed the largest exceptional index {jmax}"
            )));
        }
    }
    if m == 0 {
        return Err(Error::domain("remainder order m must be at least 1"));
    }

    let mut trunc = PolyBuilder::new(prec);
    for (k, coeff) in truncation(spec, n)? {
        trunc.add_exact(2 * k, coeff);
    }
    let rem = remainder(spec, c, m, sign, prec)?;
    let mut rest = PolyBuilder::new(prec);
    for (k, coeff) in rem.exact {
        rest.add_exact(2 * k, coeff);
    }
    rest.add_enclosed(2 * rem.m, rem.top);

    let name = spec.name();
    let c = c.with_precision(prec);
    if sign > 0 {
        Ok((
            trunc.build(&name, Side::Lower, c.clone())?,
            rest.build(&name, Side::Upper, c)?,
        ))
    } else {
        Ok((
            rest.build(&name, Side::Lower, c.clone())?,
            trunc.build(&name, Side::Upper, c)?,
        ))
    }
}

/// The pair `(P_L, P_R)` with `P_L < f_a < P_R` on `(0, c)` for `3/2 < a < 2`,
/// built at order `n > 𝔪(a) + 1`.
pub fn natural_extension_bounds(
    a: &Rational,
    n: u32,
    c: &Enclosure,
) -> Result<(EnvelopePolynomial, EnvelopePolynomial)> {
    if a <= &Rational::frac(3, 2) || a >= &Rational::from_integer(2) {
        return Err(Error::domain(format!(
            "natural-extension bounds need 3/2 < a < 2, got {a}"
        )));
    }
    let m = frak_m(a)?;
    if n <= m + 1 {
        return Err(Error::domain(format!("order n = {n} must exceed 𝔪(a) + 1 = {}", m + 1)));
    }
    wd_envelopes(&SeriesSpec::f_a(a.clone())?, c, n, n)
}
