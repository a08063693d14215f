//! Root isolation for `f_a` and for envelope polynomials.

use serde::{Deserialize, Serialize};

use crate::envelope::{horner, natural_extension_bounds, EnvelopePolynomial};
use crate::error::{Error, Result};
use crate::exactnum::{ln, ln_cos_half_value, ln_sinc_value, pi_enclosure, sin, Dyadic, Enclosure, Rational, Round};
use crate::series::frak_m;

use super::sign::Sign;

/// Bracket `[lo, hi]` with certified opposite signs at its ends.
#[derive(Clone, Debug, PartialEq)]
pub struct RootEnclosure {
    /// Exponent for `f_a` roots; `None` for polynomial roots.
    pub a: Option<Rational>,
    pub lo: Enclosure,
    pub hi: Enclosure,
    pub sign_left: Sign,
    pub sign_right: Sign,
    /// Requested absolute tolerance.
    pub tol: f64,
    /// Number of rigorous function evaluations spent.
    pub evals: usize,
}

impl RootEnclosure {
    /// Upper bound on `hi − lo`.
    pub fn width(&self) -> Dyadic {
        self.hi.hi().sub(self.lo.lo())
    }

    /// Midpoint of the hull, for display.
    pub fn mid(&self) -> Dyadic {
        self.lo.lo().add(self.hi.hi()).mul_pow2(-1)
    }

    /// `true` when every point of `self` lies at or below every point of `other`.
    pub fn lies_left_of(&self, other: &RootEnclosure) -> bool {
        self.hi.hi() <= other.lo.lo()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = RootDocument {
            a: self.a.as_ref().map(Rational::to_string),
            lo: self.lo.to_hex_pair(),
            hi: self.hi.to_hex_pair(),
            lo_decimal: self.lo.lo().truncated_decimal(12),
            hi_decimal: self.hi.hi().truncated_decimal(12),
            precision_bits: Some(self.lo.precision_bits()),
            tol: self.tol,
            evals: self.evals,
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<RootEnclosure> {
        let doc: RootDocument = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let pair = |v: &[String; 2]| {
            let lo = Dyadic::from_hex(&v[0])?;
            let hi = Dyadic::from_hex(&v[1])?;
            let prec = doc.precision_bits.unwrap_or(lo.bits().max(hi.bits()).max(64) as u32);
            Enclosure::new(lo, hi, prec)
        };
        Ok(RootEnclosure {
            a: doc.a.as_deref().map(str::parse).transpose()?,
            lo: pair(&doc.lo)?,
            hi: pair(&doc.hi)?,
            sign_left: Sign::Negative,
            sign_right: Sign::Positive,
            tol: doc.tol,
            evals: doc.evals,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RootDocument {
    a: Option<String>,
    lo: [String; 2],
    hi: [String; 2],
    lo_decimal: String,
    hi_decimal: String,
    #[serde(default)]
    precision_bits: Option<u32>,
    tol: f64,
    evals: usize,
}

fn check_a_gt_one(a: &Rational) -> Result<()> {
    if a <= &Rational::one() {
        return Err(Error::domain(format!("exponent a must exceed 1, got {a}")));
    }
    Ok(())
}

fn check_open_range(a: &Rational, what: &str) -> Result<()> {
    if a <= &Rational::frac(3, 2) || a >= &Rational::from_integer(2) {
        return Err(Error::domain(format!("{what} needs 3/2 < a < 2, got {a}")));
    }
    Ok(())
}

/// `f_a(x) = a ln(sin x / x) − 2 ln cos(x/2)` for `x` strictly inside `(0, π)`.
pub fn eval_f_a(a: &Rational, x: &Enclosure) -> Result<Enclosure> {
    check_a_gt_one(a)?;
    let s = ln_sinc_value(x)?.mul_rational(a);
    Ok(&s - &ln_cos_half_value(x)?.mul_pow2(1))
}

/// `f_a(π − u) = a (ln sin u − ln(π − u)) − 2 ln sin(u/2)` for small `u > 0`;
/// this keeps full relative accuracy when `x` is extremely close to π.
pub fn eval_f_a_reflected(a: &Rational, u: &Enclosure) -> Result<Enclosure> {
    check_a_gt_one(a)?;
    let p = u.precision_bits();
    let pi = pi_enclosure(p + 8)?;
    if !u.lo().is_positive() || !u.certainly_lt(&pi) {
        return Err(Error::domain("reflected argument must lie strictly inside (0, π)"));
    }
    let x = &pi - u;
    let first = &ln(&sin(u)?)? - &ln(&x)?;
    let second = ln(&sin(&u.mul_pow2(-1))?)?.mul_pow2(1);
    Ok(&first.mul_rational(a) - &second)
}

/// `m_a = π √(2(a − 3/2))` for `3/2 < a < 2`.
pub fn m_a(a: &Rational, precision_bits: u32) -> Result<Enclosure> {
    check_open_range(a, "m_a")?;
    let p = precision_bits.max(16) + 8;
    let eps = a - &Rational::frac(3, 2);
    let root = Enclosure::from_rational(&(eps * Rational::from_integer(2)), p).sqrt()?;
    Ok((&pi_enclosure(p)? * &root).with_precision(precision_bits.max(16)))
}

/// Options for [`find_x_a_with`].
#[derive(Clone, Debug)]
pub struct XaOptions {
    pub precision_bits: u32,
    /// Try the envelope roots of `P_L`, `P_R` as the initial bracket.
    pub seed_with_envelopes: bool,
}

impl Default for XaOptions {
    fn default() -> Self {
        XaOptions {
            precision_bits: crate::DEFAULT_PRECISION,
            seed_with_envelopes: true,
        }
    }
}

/// Bracket of width `≤ abs_tol` around the unique zero `x_a` of `f_a` in `(0, π)`.
pub fn find_x_a(a: &Rational, abs_tol: f64) -> Result<RootEnclosure> {
    find_x_a_with(a, abs_tol, &XaOptions::default())
}

struct Evaluator<'a> {
    a: &'a Rational,
    prec: u32,
    evals: usize,
}

impl Evaluator<'_> {
    /// Sign of `f_a` at the dyadic point `x`, retrying at up to 4× precision.
    fn sign_at(&mut self, x: &Dyadic) -> Result<Option<Sign>> {
        let mut p = self.prec;
        for _ in 0..3 {
            self.evals += 1;
            let v = eval_f_a(self.a, &Enclosure::point(x.clone(), p))?;
            if let Some(s) = Sign::of(&v) {
                return Ok(Some(s));
            }
            p *= 2;
        }
        Ok(None)
    }

    /// Sign of `f_a(π − u)`.
    fn sign_reflected(&mut self, u: &Dyadic) -> Result<Option<Sign>> {
        let mut p = self.prec;
        for _ in 0..3 {
            self.evals += 1;
            let v = eval_f_a_reflected(self.a, &Enclosure::point(u.clone(), p))?;
            if let Some(s) = Sign::of(&v) {
                return Ok(Some(s));
            }
            p *= 2;
        }
        Ok(None)
    }
}

fn tol_dyadic(tol: f64) -> Result<Dyadic> {
    if tol.is_nan() || tol <= 0.0 || tol.is_infinite() {
        return Err(Error::domain(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    // round down so the requested tolerance is never exceeded
    Ok(Dyadic::from_f64(tol).expect("finite").round(53, Round::Down))
}

/// Bisection on a bracket whose left end has sign `left_sign` and whose right end
/// has the opposite sign, down to width `tol`. With `geometric` set, brackets that
/// span several binades are split at a power of two instead of the midpoint.
fn bisect(
    mut lo: Dyadic,
    mut hi: Dyadic,
    tol: &Dyadic,
    geometric: bool,
    mut sign: impl FnMut(&Dyadic) -> Result<Option<Sign>>,
    left_sign: Sign,
) -> Result<(Dyadic, Dyadic)> {
    while hi.sub(&lo) > *tol {
        let mid = if geometric && lo.is_positive() && hi.magnitude_exp() - lo.magnitude_exp() > 2 {
            Dyadic::pow2((hi.magnitude_exp() + lo.magnitude_exp()) / 2)
        } else {
            lo.add(&hi).mul_pow2(-1)
        };
        match sign(&mid)? {
            Some(s) if s == left_sign => lo = mid,
            Some(_) => hi = mid,
            None => {
                // the zero sits within rounding noise of `mid`: close in from both sides
                let q = tol.mul_pow2(-2);
                let l = mid.sub(&q);
                let r = mid.add(&q);
                match (sign(&l)?, sign(&r)?) {
                    (Some(sl), Some(sr)) if sl == left_sign && sr != left_sign => return Ok((l, r)),
                    _ => {
                        return Err(Error::Inconclusive(format!(
                            "sign undecided near {}",
                            mid.truncated_decimal(20)
                        )))
                    }
                }
            }
        }
    }
    Ok((lo, hi))
}

/// As [`find_x_a`], with explicit precision and seeding choice.
pub fn find_x_a_with(a: &Rational, abs_tol: f64, opts: &XaOptions) -> Result<RootEnclosure> {
    check_open_range(a, "x_a")?;
    let prec = opts.precision_bits.max(64);
    let tol = tol_dyadic(abs_tol)?;
    if tol.magnitude_exp() < -(prec as i64) / 2 {
        return Err(Error::domain(format!(
            "tolerance {abs_tol:e} is below 2^(−precision/2) at {prec} bits"
        )));
    }
    let mut ev = Evaluator { a, prec, evals: 0 };
    let pi = pi_enclosure(prec)?;
    let finish = |lo: Enclosure, hi: Enclosure, evals: usize| RootEnclosure {
        a: Some(a.clone()),
        lo,
        hi,
        sign_left: Sign::Negative,
        sign_right: Sign::Positive,
        tol: abs_tol,
        evals,
    };

    let mut bracket = None;
    if opts.seed_with_envelopes {
        bracket = envelope_seed(a, prec, &mut ev)?;
    }
    if bracket.is_none() {
        bracket = coarse_scan(&pi, prec, &mut ev)?;
    }
    if let Some((lo, hi)) = bracket {
        let (lo, hi) = bisect(lo, hi, &tol, false, |x| ev.sign_at(x), Sign::Negative)?;
        return Ok(finish(Enclosure::point(lo, prec), Enclosure::point(hi, prec), ev.evals));
    }

    // Zero within π/64 of π: search in u = π − x, where f_a(π − u) > 0 for small u.
    let mut u_hi = pi.mid().mul_pow2(-6).round(64, Round::Down);
    if ev.sign_reflected(&u_hi)? != Some(Sign::Negative) {
        return Err(Error::NoSignChange(format!(
            "f_a(π − u) not certified negative at u ≈ π/64 for a = {a}"
        )));
    }
    let mut e: i64 = 6;
    let u_lo = loop {
        let u = Dyadic::pow2(-e);
        match ev.sign_reflected(&u)? {
            Some(Sign::Positive) => break u,
            Some(Sign::Negative) => u_hi = u,
            None => return Err(Error::Inconclusive(format!("sign of f_a(π − 2^-{e}) undecided"))),
        }
        if e > 1 << 22 {
            return Err(Error::NoSignChange(format!(
                "no positive value of f_a near π for a = {a}"
            )));
        }
        e *= 2;
    };
    // in u the sign is positive on the left, negative on the right
    // half the tolerance leaves room for the width of the π enclosure
    let (ul, uh) = bisect(
        u_lo,
        u_hi,
        &tol.mul_pow2(-1),
        true,
        |u| ev.sign_reflected(u),
        Sign::Positive,
    )?;
    let p = prec + 8;
    let pi = pi_enclosure(p)?;
    let lo = (&pi - &Enclosure::point(uh, p)).with_precision(prec);
    let hi = (&pi - &Enclosure::point(ul, p)).with_precision(prec);
    Ok(finish(lo, hi, ev.evals))
}

/// First sign change of `f_a` on the grid `iπ/64`, as a dyadic bracket.
fn coarse_scan(pi: &Enclosure, prec: u32, ev: &mut Evaluator) -> Result<Option<(Dyadic, Dyadic)>> {
    let step = pi.mid().mul_pow2(-6).round(64, Round::Down);
    let mut prev: Option<Dyadic> = None;
    for i in 1..64 {
        let x = step.mul(&Dyadic::from_int(i)).round(64.max(prec), Round::Down);
        match ev.sign_at(&x)? {
            Some(Sign::Positive) => {
                let lo = match prev {
                    Some(p) => p,
                    None => first_negative_point(&x, ev)?,
                };
                return Ok(Some((lo, x)));
            }
            Some(Sign::Negative) => prev = Some(x),
            None => prev = None,
        }
    }
    Ok(None)
}

/// A point left of `x` where `f_a` is certainly negative (it is, near zero).
fn first_negative_point(x: &Dyadic, ev: &mut Evaluator) -> Result<Dyadic> {
    let mut y = x.mul_pow2(-1);
    for _ in 0..200 {
        if ev.sign_at(&y)? == Some(Sign::Negative) {
            return Ok(y);
        }
        y = y.mul_pow2(-1);
    }
    Err(Error::NoSignChange("f_a not certified negative near zero".into()))
}

/// Initial bracket `[root(P_R), root(P_L)]`, if both envelope roots exist below 3.1
/// and `f_a` has the expected signs there.
fn envelope_seed(a: &Rational, prec: u32, ev: &mut Evaluator) -> Result<Option<(Dyadic, Dyadic)>> {
    let m = frak_m(a)?;
    let c = Enclosure::from_rational(&Rational::frac(31, 10), prec);
    let Ok((pl, pr)) = natural_extension_bounds(a, m + 6, &c) else {
        return Ok(None);
    };
    let tol = 1e-3;
    let (Ok(Some(rl)), Ok(Some(rr))) = (
        smallest_positive_root(&pl, &c, tol),
        smallest_positive_root(&pr, &c, tol),
    ) else {
        return Ok(None);
    };
    let lo = rr.lo.lo().clone();
    let hi = rl.hi.hi().clone();
    if ev.sign_at(&lo)? == Some(Sign::Negative) && ev.sign_at(&hi)? == Some(Sign::Positive) {
        return Ok(Some((lo, hi)));
    }
    Ok(None)
}

/// Bracket on the smallest positive root of `poly` in `(0, upper]`, or `None` when
/// the polynomial is certified negative on the whole range.
///
/// The polynomial must be negative near zero. The range is scanned left to right;
/// every piece before the returned bracket is certified negative.
pub fn smallest_positive_root(poly: &EnvelopePolynomial, upper: &Enclosure, tol: f64) -> Result<Option<RootEnclosure>> {
    let tol_d = tol_dyadic(tol)?;
    let prec = poly.precision_bits().max(64);
    let coeffs: Vec<Enclosure> = poly.t_coefficients();
    let deriv: Vec<Enclosure> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_enc(&Enclosure::from_int(i as i64, prec)))
        .collect();
    let lead = coeffs.iter().position(|c| !c.is_exact_zero());
    let Some(j) = lead else {
        return Err(Error::domain("zero polynomial has no isolated roots"));
    };
    if !coeffs[j].is_negative() {
        return Err(Error::domain("polynomial is not certified negative near zero"));
    }
    // start from a point where negativity already holds
    let end = upper.hi().clone();
    let eval_range = |lo: &Dyadic, hi: &Dyadic| {
        let t = Enclosure::from_bounds(
            lo.mul(lo).round(prec, Round::Down),
            hi.mul(hi).round(prec, Round::Up),
            prec,
        );
        let direct = horner(&coeffs, &t);
        let tm = Enclosure::point(t.mid(), prec);
        let mv = &horner(&coeffs, &tm) + &(&horner(&deriv, &t) * &(&t - &tm));
        direct.intersect(&mv).unwrap_or(direct)
    };
    let eval_pt = |x: &Dyadic| horner(&coeffs, &Enclosure::point(x.clone(), prec).sqr());
    let mut evals = 0usize;

    let mut delta = end.clone();
    loop {
        evals += 1;
        // on (0, δ] the value equals t^j (c_j + …); the bracket [0, δ²] covers it
        let t = Enclosure::from_bounds(Dyadic::zero(), delta.mul(&delta).round(prec, Round::Up), prec);
        let quotient = horner(&coeffs[j..], &t);
        if quotient.is_negative() {
            break;
        }
        delta = delta.mul_pow2(-1);
        if delta.magnitude_exp() < -4096 {
            return Err(Error::Inconclusive("no negative neighbourhood of zero found".into()));
        }
    }

    let mut stack = vec![(delta, end)];
    while let Some((lo, hi)) = stack.pop() {
        if lo >= hi {
            continue;
        }
        evals += 1;
        let v = eval_range(&lo, &hi);
        if v.is_negative() {
            continue;
        }
        if hi.sub(&lo) <= tol_d {
            evals += 1;
            match Sign::of(&eval_pt(&hi)) {
                Some(Sign::Positive) => {
                    return Ok(Some(RootEnclosure {
                        a: None,
                        lo: Enclosure::point(lo, prec),
                        hi: Enclosure::point(hi, prec),
                        sign_left: Sign::Negative,
                        sign_right: Sign::Positive,
                        tol,
                        evals,
                    }))
                }
                _ => {
                    return Err(Error::Inconclusive(format!(
                        "cannot separate a root near {} at tolerance {tol:e}",
                        lo.truncated_decimal(12)
                    )))
                }
            }
        }
        let mid = lo.add(&hi).mul_pow2(-1);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    Ok(None)
}
