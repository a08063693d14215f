//! End-to-end machine proofs of the sinc inequalities.
//!
//! Each `prove_*` function returns a [`TheoremReport`] listing the individual
//! checks, any sign certificates together with the polynomials they certify,
//! and an overall status.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::envelope::{build_h1, build_h2, g1_value, g2_value, wd_envelopes, EnvelopePolynomial};
use crate::error::{Error, Result};
use crate::exactnum::{ln_sinc_value, pi_enclosure, Enclosure, Rational};
use crate::series::{e_coeff, ExponentParameter, SeriesSpec};

use super::roots::{eval_f_a, m_a};
use super::sign::{certify_sign_with, SignCertificate, SignOptions, Status};
use super::Sign;

/// Precision ceiling for pointwise decisions that keep doubling until decided.
const POINTWISE_MAX_BITS: u32 = 8192;

/// Shared knobs for the proof pipelines.
#[derive(Clone, Debug)]
pub struct ProofConfig {
    pub precision_bits: u32,
    /// Highest precision an inconclusive step may climb to.
    pub max_precision_bits: u32,
    pub max_depth: u32,
    /// Number of pointwise sample checks.
    pub samples: usize,
    pub parallel: bool,
}

impl Default for ProofConfig {
    fn default() -> Self {
        ProofConfig {
            precision_bits: crate::DEFAULT_PRECISION,
            max_precision_bits: 1024,
            max_depth: super::DEFAULT_MAX_DEPTH,
            samples: 25,
            parallel: true,
        }
    }
}

/// A single named step of a proof.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: &str, status: Status, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            status,
            detail: detail.into(),
        }
    }

    fn from_bool(name: &str, ok: bool, detail: impl Into<String>) -> Check {
        Check::new(name, if ok { Status::Proven } else { Status::Refuted }, detail)
    }
}

/// A sign certificate and the polynomial it speaks about, kept together so the
/// certificate can be replayed later.
#[derive(Clone, Debug)]
pub struct CertifiedPolynomial {
    pub polynomial: EnvelopePolynomial,
    pub certificate: SignCertificate,
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub theorem: u8,
    pub statement: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub certificates: Vec<CertifiedPolynomial>,
}

impl TheoremReport {
    fn new(theorem: u8, statement: &str, checks: Vec<Check>, certificates: Vec<CertifiedPolynomial>) -> Self {
        let status = checks
            .iter()
            .map(|c| c.status)
            .chain(certificates.iter().map(|c| c.certificate.status))
            .fold(Status::Proven, Status::and);
        TheoremReport {
            theorem,
            statement: statement.to_string(),
            status,
            checks,
            certificates,
        }
    }

    pub fn to_json_value(&self, with_leaves: bool) -> Result<Value> {
        let certificates = self
            .certificates
            .iter()
            .map(|c| {
                serde_json::from_str::<Value>(&c.certificate.to_json(with_leaves)?)
                    .map_err(|e| Error::Serialization(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "status": c.status, "detail": c.detail }))
            .collect();
        Ok(json!({
            "theorem": self.theorem,
            "statement": self.statement,
            "status": self.status,
            "checks": checks,
            "certificates": certificates,
        }))
    }

    pub fn to_json(&self, with_leaves: bool) -> Result<String> {
        serde_json::to_string_pretty(&self.to_json_value(with_leaves)?).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Replays every certificate at `factor` times its precision and reports
    /// whether all proven ones stay proven and none turns into a refutation.
    pub fn replay_all(&self, factor: u32) -> Result<bool> {
        for c in &self.certificates {
            let replayed = c
                .certificate
                .replay(&c.polynomial, c.certificate.precision_bits * factor)?;
            if replayed.status == Status::Refuted {
                return Ok(false);
            }
            if c.certificate.status == Status::Proven && replayed.status != Status::Proven {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Evenly spaced rational points `lo + i (hi − lo)/(n + 1)` for `i = 1..=n`.
pub fn interior_points(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    let step = (hi - lo) * Rational::new(1.into(), (n as i64 + 1).into()).expect("n + 1 > 0");
    (1..=n as i64)
        .map(|i| lo + &(&step * &Rational::from_integer(i)))
        .collect()
}

/// Evaluates `f` at doubling precision until its sign is decided.
fn decide_sign<F>(start_bits: u32, mut f: F) -> Result<Option<(Sign, Enclosure)>>
where
    F: FnMut(u32) -> Result<Enclosure>,
{
    let mut p = start_bits.max(64);
    loop {
        let v = f(p)?;
        if let Some(s) = Sign::of(&v) {
            return Ok(Some((s, v)));
        }
        if p >= POINTWISE_MAX_BITS {
            return Ok(None);
        }
        p *= 2;
    }
}

fn sample_sign_check<F>(name: &str, points: &[Rational], want: Sign, start_bits: u32, f: F) -> Result<Check>
where
    F: Fn(&Enclosure) -> Result<Enclosure>,
{
    let mut undecided = 0;
    for x in points {
        match decide_sign(start_bits, |p| f(&Enclosure::from_rational(x, p)))? {
            Some((s, _)) if s == want => {}
            Some(_) => return Ok(Check::new(name, Status::Refuted, format!("wrong sign at x = {x}"))),
            None => undecided += 1,
        }
    }
    let status = if undecided == 0 {
        Status::Proven
    } else {
        Status::Inconclusive
    };
    Ok(Check::new(
        name,
        status,
        format!(
            "{} of {} sample points certified {}",
            points.len() - undecided,
            points.len(),
            want
        ),
    ))
}

fn certify_with_ladder<B>(
    build: B,
    lo: &Rational,
    hi: &Rational,
    claimed: Sign,
    cfg: &ProofConfig,
) -> Result<CertifiedPolynomial>
where
    B: Fn(u32) -> Result<EnvelopePolynomial>,
{
    let mut p = cfg.precision_bits.max(64);
    loop {
        let polynomial = build(p)?;
        let opts = SignOptions {
            max_depth: cfg.max_depth,
            precision_bits: Some(p),
            max_precision_bits: p,
            parallel: cfg.parallel,
        };
        let certificate = certify_sign_with(
            &polynomial,
            &Enclosure::from_rational(lo, p),
            &Enclosure::from_rational(hi, p),
            claimed,
            &opts,
        )?;
        if certificate.status != Status::Inconclusive || p * 2 > cfg.max_precision_bits {
            return Ok(CertifiedPolynomial {
                polynomial,
                certificate,
            });
        }
        p *= 2;
    }
}

/// `(sin x/x)^{3/2} > cos²(x/2)` on `(0, π)`, i.e. `f_{3/2} > 0`.
///
/// Every coefficient of `f_{3/2}` is non-negative (`E_1 = 0`, `E_k > 0` for `k ≥ 2`
/// since `4^k/2 > 2`), so each truncation `T_n` bounds `f_{3/2}` from below on the
/// whole of `(0, π)`. The proof certifies `T_8 > 0` and adds pointwise checks.
pub fn prove_theorem4(cfg: &ProofConfig) -> Result<TheoremReport> {
    let a = Rational::frac(3, 2);
    let e1 = e_coeff(&a, 1)?;
    let mut checks = vec![Check::from_bool("E_1 = 0", e1.is_zero(), format!("E_1 = {e1}"))];
    let bad: Vec<u32> = (2..=50)
        .filter(|&k| !e_coeff(&a, k).map(|e| e.is_positive()).unwrap_or(false))
        .collect();
    checks.push(Check::from_bool(
        "E_k > 0 for 2 ≤ k ≤ 50",
        bad.is_empty(),
        if bad.is_empty() {
            "exact rational check".to_string()
        } else {
            format!("fails at k = {bad:?}")
        },
    ));

    let c = Rational::frac(314159, 100000);
    let spec = SeriesSpec::f_a(a.clone())?;
    let lower = certify_with_ladder(
        |p| {
            Ok(wd_envelopes(&spec, &Enclosure::from_rational(&c, p), 8, 8)?
                .0
                .with_target("T8(f_3/2)"))
        },
        &Rational::zero(),
        &c,
        Sign::Positive,
        cfg,
    )?;
    let points = interior_points(&Rational::frac(1, 100), &Rational::frac(313, 100), cfg.samples.max(1));
    checks.push(sample_sign_check(
        "f_3/2(x) > 0 pointwise",
        &points,
        Sign::Positive,
        cfg.precision_bits,
        |x| eval_f_a(&a, x),
    )?);
    Ok(TheoremReport::new(
        4,
        "(sin x / x)^(3/2) > cos^2(x/2) for every x in (0, pi)",
        checks,
        vec![lower],
    ))
}

/// `(sin x/x)^a ≤ cos²(x/2)` on `(0, π)` for `a ≥ 2`.
///
/// Since `sin x/x ∈ (0, 1)` the left side decreases in `a`, and at `a = 2`
/// the claim reduces to `sin(x/2) ≤ x/2`. With `y = x/2 ∈ (0, π/2)` the
/// alternating Taylor bound gives `y − sin y ≥ y³ (1/6 − y²/120)`, so it suffices
/// that `1/6 − y²/120 > 0`, which is checked on `samples` subintervals.
pub fn prove_theorem5(samples: usize, cfg: &ProofConfig) -> Result<TheoremReport> {
    if samples == 0 {
        return Err(Error::domain("theorem 5 needs at least one subinterval"));
    }
    let p = cfg.precision_bits.max(64);
    let half_pi = pi_enclosure(p)?.mul_pow2(-1);
    let sixth = Enclosure::from_rational(&Rational::frac(1, 6), p);
    let mut failed = Vec::new();
    for i in 0..samples {
        // subinterval [i, i+1] · (π/2)/samples, only its right end matters
        let hi = half_pi.mul_rational(&Rational::new(((i + 1) as i64).into(), (samples as i64).into())?);
        let factor = &sixth - &hi.sqr().mul_rational(&Rational::frac(1, 120));
        if !factor.is_positive() {
            failed.push(i);
        }
    }
    let mut checks = vec![Check::from_bool(
        "sin(y) < y on (0, pi/2)",
        failed.is_empty(),
        format!(
            "1/6 - y^2/120 > 0 certified on {} of {samples} subintervals",
            samples - failed.len()
        ),
    )];
    let pi_hi = Rational::frac(314, 100);
    let points = interior_points(&Rational::zero(), &pi_hi, samples.min(cfg.samples.max(1)));
    checks.push(sample_sign_check(
        "f_2(x) < 0 pointwise",
        &points,
        Sign::Negative,
        p,
        |x| eval_f_a(&Rational::from_integer(2), x),
    )?);
    let three = Rational::from_integer(3);
    checks.push(sample_sign_check(
        "f_3(x) < f_2(x) pointwise",
        &points,
        Sign::Negative,
        p,
        |x| Ok(&eval_f_a(&three, x)? - &eval_f_a(&Rational::from_integer(2), x)?),
    )?);
    Ok(TheoremReport::new(
        5,
        "(sin x / x)^a <= cos^2(x/2) for every a >= 2 and x in (0, pi)",
        checks,
        Vec::new(),
    ))
}

/// The polynomial-exponent double inequality on `(0, 3.1)`.
pub fn prove_theorem7(cfg: &ProofConfig) -> Result<TheoremReport> {
    prove_theorem7_on(&Rational::frac(31, 10), cfg)
}

/// [`prove_theorem7`] restricted to `(0, hi)` with `hi ≤ 3.1`; the envelopes
/// are still built with endpoint `3.1`.
pub fn prove_theorem7_on(hi: &Rational, cfg: &ProofConfig) -> Result<TheoremReport> {
    let c = Rational::frac(31, 10);
    if !hi.is_positive() || hi > &c {
        return Err(Error::domain(format!("interval end must lie in (0, 3.1], got {hi}")));
    }
    let zero = Rational::zero();
    let h1 = certify_with_ladder(
        |p| build_h1(25, 10, &Enclosure::from_rational(&c, p)),
        &zero,
        hi,
        Sign::Negative,
        cfg,
    )?;
    let h2 = certify_with_ladder(
        |p| build_h2(13, 27, &Enclosure::from_rational(&c, p)),
        &zero,
        hi,
        Sign::Positive,
        cfg,
    )?;
    let points = interior_points(&zero, hi, cfg.samples.max(1));
    let checks = vec![
        sample_sign_check(
            "G1(x) < 0 pointwise",
            &points,
            Sign::Negative,
            cfg.precision_bits,
            g1_value,
        )?,
        sample_sign_check(
            "G2(x) > 0 pointwise",
            &points,
            Sign::Positive,
            cfg.precision_bits,
            g2_value,
        )?,
    ];
    Ok(TheoremReport::new(
        7,
        &format!("(sin x / x)^(3/2 + x^2/(2 pi^2)) < cos^2(x/2) < (sin x / x)^(3/2 + x^2/80) for every x in (0, {hi})"),
        checks,
        vec![h1, h2],
    ))
}

/// Compares `x` with `m_a = π √(2(a − 3/2))` by comparing `x²` with `2π²(a − 3/2)`.
pub fn compare_with_m_a(a: &Rational, x: &Rational) -> Result<Ordering> {
    m_a(a, 64)?;
    let eps2 = (a - &Rational::frac(3, 2)) * Rational::from_integer(2);
    let x2 = x * x;
    let mut p = 64;
    while p <= POINTWISE_MAX_BITS {
        let pi = pi_enclosure(p)?;
        let rhs = pi.sqr().mul_rational(&eps2);
        let lhs = Enclosure::from_rational(&x2, p);
        if lhs.certainly_lt(&rhs) {
            return Ok(Ordering::Less);
        }
        if lhs.certainly_gt(&rhs) {
            return Ok(Ordering::Greater);
        }
        p *= 2;
    }
    Err(Error::Inconclusive(format!("cannot separate x = {x} from m_a")))
}

/// Compares `p₁(x) = 3/2 + x²/(2π²)` with `a`, evaluating `p₁` directly.
pub fn compare_p1_with(a: &Rational, x: &Rational) -> Result<Ordering> {
    let mut p = 64;
    while p <= POINTWISE_MAX_BITS {
        let v = ExponentParameter::p1().eval(&Enclosure::from_rational(x, p))?;
        let a_enc = Enclosure::from_rational(a, p);
        if v.certainly_lt(&a_enc) {
            return Ok(Ordering::Less);
        }
        if v.certainly_gt(&a_enc) {
            return Ok(Ordering::Greater);
        }
        p *= 2;
    }
    Err(Error::Inconclusive(format!("cannot separate p1({x}) from {a}")))
}

/// Pointwise certificate of the chain
/// `(sin x/x)^a < (sin x/x)^{p₁(x)} < cos²(x/2)` at a rational `x ∈ (0, m_a)`,
/// in logarithmic form `a L < p₁(x) L < 2 ln cos(x/2)` with `L = ln(sin x/x) < 0`.
pub fn theorem8_point(a: &Rational, x: &Rational, start_bits: u32) -> Result<Status> {
    if !x.is_positive() || compare_with_m_a(a, x)? != Ordering::Less {
        return Err(Error::domain(format!("sample x = {x} must lie in (0, m_a)")));
    }
    // a L < p₁ L  ⟺  (p₁ − a) L > 0
    let first = decide_sign(start_bits, |p| {
        let xe = Enclosure::from_rational(x, p);
        let diff = &ExponentParameter::p1().eval(&xe)? - &Enclosure::from_rational(a, p);
        Ok(&diff * &ln_sinc_value(&xe)?)
    })?;
    let second = decide_sign(start_bits, |p| g1_value(&Enclosure::from_rational(x, p)))?;
    Ok(match (first, second) {
        (Some((Sign::Positive, _)), Some((Sign::Negative, _))) => Status::Proven,
        (Some(_), Some(_)) => Status::Refuted,
        _ => Status::Inconclusive,
    })
}

/// Constant versus polynomial exponent on `(0, m_a)` for `3/2 < a < 2`.
pub fn prove_theorem8(a: &Rational, samples: usize, cfg: &ProofConfig) -> Result<TheoremReport> {
    let m = m_a(a, cfg.precision_bits.max(64))?;
    let upper = m.lo().to_rational();
    let points = interior_points(&Rational::zero(), &upper, samples.max(1));

    let mut structural_ok = true;
    let mut chain = Status::Proven;
    for x in &points {
        // x < m_a ⟺ p₁(x) < a, both sides decided independently
        let below = compare_with_m_a(a, x)? == Ordering::Less;
        let p1_below = compare_p1_with(a, x)? == Ordering::Less;
        structural_ok &= below == p1_below;
        chain = chain.and(theorem8_point(a, x, cfg.precision_bits)?);
    }
    // the equivalence must also fail to the right of m_a
    let beyond = &upper + &Rational::frac(1, 1000);
    structural_ok &=
        compare_with_m_a(a, &beyond)? == Ordering::Greater && compare_p1_with(a, &beyond)? == Ordering::Greater;

    let checks = vec![
        Check::from_bool(
            "x < m_a <=> p1(x) < a",
            structural_ok,
            format!("checked at {} points below m_a and one above", points.len()),
        ),
        Check::new(
            "(sin x/x)^a < (sin x/x)^p1(x) < cos^2(x/2) pointwise",
            chain,
            format!(
                "{} sample points in (0, m_a), m_a = {}",
                points.len(),
                m.mid().truncated_decimal(6)
            ),
        ),
    ];
    Ok(TheoremReport::new(
        8,
        &format!("(sin x / x)^a < (sin x / x)^(3/2 + x^2/(2 pi^2)) < cos^2(x/2) for a = {a} and x in (0, m_a)"),
        checks,
        Vec::new(),
    ))
}
