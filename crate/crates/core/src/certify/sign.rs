//! Sign certificates for even polynomials on intervals.
//!
//! Work happens in `t = x²`. Near `x = 0` the lowest non-vanishing coefficient
//! `c_j` decides the sign on `(0, δ]` once `Σ_{i>j} |c_i| δ^{2(i−j)} < mig(c_j)`.
//! The rest of the interval is covered by bisection: each piece is evaluated by
//! Horner intersected with the mean-value form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::envelope::{horner, EnvelopePolynomial};
use crate::error::{Error, Result};
use crate::exactnum::{Dyadic, Enclosure, Round};

/// Default subdivision depth limit.
pub const DEFAULT_MAX_DEPTH: u32 = 48;

/// Depth below which the two halves of a split are processed in parallel.
const PARALLEL_DEPTH: u32 = 6;

/// Largest `e` tried for the near-zero radius `δ = 2^{−e}`.
const MAX_DELTA_EXPONENT: i64 = 4096;

/// A strict sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Positive => 1,
        }
    }

    pub fn of(e: &Enclosure) -> Option<Sign> {
        match e.certain_sign() {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Negative => write!(f, "NEGATIVE"),
            Sign::Positive => write!(f, "POSITIVE"),
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "negative" | "neg" | "-" | "<0" => Ok(Sign::Negative),
            "positive" | "pos" | "+" | ">0" => Ok(Sign::Positive),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected NEGATIVE or POSITIVE".into(),
            }),
        }
    }
}

/// Outcome of a certification attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Proven,
    Refuted,
    Inconclusive,
}

impl Status {
    /// CLI exit code: 0 proven, 1 refuted, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Proven => 0,
            Status::Refuted => 1,
            Status::Inconclusive => 2,
        }
    }

    /// Conjunction: any refutation wins, then any inconclusive part.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Proven,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Proven => write!(f, "PROVEN"),
            Status::Refuted => write!(f, "REFUTED"),
            Status::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// How a leaf was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafKind {
    /// `(0, hi]`: the value enclosure bounds `P(x)/x^{2j}` for the leading index `j`.
    NearZero { leading_power: u32 },
    /// `[lo, hi]`: the value enclosure bounds `P` itself.
    Bisection,
}

/// One piece of the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub value: Enclosure,
    pub kind: LeafKind,
}

/// Record that a polynomial keeps a fixed sign on an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCertificate {
    pub target: String,
    pub interval: (Enclosure, Enclosure),
    pub claimed_sign: Sign,
    pub status: Status,
    pub precision_bits: u32,
    pub max_depth: u32,
    pub leaves: Vec<Leaf>,
    /// A point where the value is certainly of the opposite sign (`REFUTED` only).
    pub witness: Option<Dyadic>,
    /// Human-readable diagnostic for `INCONCLUSIVE` outcomes.
    pub note: Option<String>,
}

impl SignCertificate {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// JSON document; the leaf list is included only when `with_leaves` is set.
    pub fn to_json(&self, with_leaves: bool) -> Result<String> {
        serde_json::to_string_pretty(&self.document(with_leaves)).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub(crate) fn document(&self, with_leaves: bool) -> CertificateDocument {
        CertificateDocument {
            target: self.target.clone(),
            interval: [self.interval.0.to_hex_pair(), self.interval.1.to_hex_pair()],
            claimed_sign: self.claimed_sign,
            status: self.status,
            precision_bits: self.precision_bits,
            leaf_count: self.leaves.len(),
            leaves: with_leaves.then(|| {
                self.leaves
                    .iter()
                    .map(|l| LeafDocument {
                        lo: l.lo.to_hex(),
                        hi: l.hi.to_hex(),
                        value: l.value.to_hex_pair(),
                        kind: l.kind,
                    })
                    .collect()
            }),
            witness: self.witness.as_ref().map(Dyadic::to_hex),
            note: self.note.clone(),
        }
    }

    /// Parses a document produced by [`SignCertificate::to_json`].
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CertificateDocument = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let p = doc.precision_bits;
        let pair = |v: &[String; 2]| Enclosure::from_hex_pair(&v[0], &v[1], p);
        let leaves = doc
            .leaves
            .unwrap_or_default()
            .iter()
            .map(|l| {
                Ok(Leaf {
                    lo: Dyadic::from_hex(&l.lo)?,
                    hi: Dyadic::from_hex(&l.hi)?,
                    value: pair(&l.value)?,
                    kind: l.kind,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignCertificate {
            target: doc.target,
            interval: (pair(&doc.interval[0])?, pair(&doc.interval[1])?),
            claimed_sign: doc.claimed_sign,
            status: doc.status,
            precision_bits: p,
            max_depth: DEFAULT_MAX_DEPTH,
            leaves,
            witness: doc.witness.as_deref().map(Dyadic::from_hex).transpose()?,
            note: doc.note,
        })
    }

    /// Re-derives every leaf at `precision_bits` and checks it is still strictly on
    /// the claimed side. Returns the replayed certificate; a `PROVEN` input stays
    /// `PROVEN` unless the original was unsound.
    pub fn replay(&self, poly: &EnvelopePolynomial, precision_bits: u32) -> Result<SignCertificate> {
        let mut out = self.clone();
        out.precision_bits = precision_bits;
        if self.status != Status::Proven {
            return Ok(out);
        }
        let coeffs = coefficients_at(poly, precision_bits);
        let deriv = derivative(&coeffs);
        let mut leaves = Vec::with_capacity(self.leaves.len());
        for leaf in &self.leaves {
            let value = match leaf.kind {
                LeafKind::NearZero { leading_power } => {
                    near_zero_quotient(&coeffs, (leading_power / 2) as usize, &leaf.hi, precision_bits)
                }
                LeafKind::Bisection => eval_on(&coeffs, &deriv, &leaf.lo, &leaf.hi, precision_bits),
            };
            if Sign::of(&value) != Some(self.claimed_sign) {
                out.status = match Sign::of(&value) {
                    Some(_) => Status::Refuted,
                    None => Status::Inconclusive,
                };
                out.note = Some(format!(
                    "leaf [{}, {}] no longer decides at {precision_bits} bits",
                    leaf.lo, leaf.hi
                ));
            }
            leaves.push(Leaf { value, ..leaf.clone() });
        }
        out.leaves = leaves;
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct LeafDocument {
    lo: String,
    hi: String,
    value: [String; 2],
    kind: LeafKind,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CertificateDocument {
    target: String,
    interval: [[String; 2]; 2],
    claimed_sign: Sign,
    status: Status,
    precision_bits: u32,
    leaf_count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    leaves: Option<Vec<LeafDocument>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    note: Option<String>,
}

/// Tuning knobs for [`certify_sign_with`].
#[derive(Clone, Debug)]
pub struct SignOptions {
    pub max_depth: u32,
    /// Evaluation precision; `None` uses the polynomial's own precision.
    pub precision_bits: Option<u32>,
    /// Highest precision the ladder may climb to after an inconclusive run.
    pub max_precision_bits: u32,
    pub parallel: bool,
}

impl Default for SignOptions {
    fn default() -> Self {
        SignOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            precision_bits: None,
            max_precision_bits: 1024,
            parallel: true,
        }
    }
}

/// Certifies `sign(poly) = claimed` on `[lo, hi]` (open at 0 when `lo` is zero),
/// with default options.
pub fn certify_sign(
    poly: &EnvelopePolynomial,
    lo: &Enclosure,
    hi: &Enclosure,
    claimed: Sign,
    max_depth: u32,
) -> Result<SignCertificate> {
    certify_sign_with(
        poly,
        lo,
        hi,
        claimed,
        &SignOptions {
            max_depth,
            ..SignOptions::default()
        },
    )
}

/// Certification with a precision ladder: an inconclusive run is retried at
/// doubled precision until `max_precision_bits`.
pub fn certify_sign_with(
    poly: &EnvelopePolynomial,
    lo: &Enclosure,
    hi: &Enclosure,
    claimed: Sign,
    opts: &SignOptions,
) -> Result<SignCertificate> {
    if opts.max_depth == 0 {
        return Err(Error::domain("max_depth must be at least 1"));
    }
    if lo.lo().is_negative() {
        return Err(Error::domain("sign certificates cover subintervals of [0, ∞)"));
    }
    if lo.lo() > hi.hi() {
        return Err(Error::domain("empty interval"));
    }
    if hi.lo() > poly.validity().hi() {
        return Err(Error::domain(format!(
            "interval end {} exceeds the validity endpoint {}",
            hi.lo().truncated_decimal(6),
            poly.validity().hi().truncated_decimal(6)
        )));
    }
    let mut prec = opts.precision_bits.unwrap_or(poly.precision_bits()).max(64);
    loop {
        let cert = run(poly, lo, hi, claimed, opts, prec);
        if cert.status != Status::Inconclusive || prec * 2 > opts.max_precision_bits.max(prec) {
            return Ok(cert);
        }
        prec *= 2;
    }
}

fn coefficients_at(poly: &EnvelopePolynomial, prec: u32) -> Vec<Enclosure> {
    poly.t_coefficients()
        .into_iter()
        .map(|c| c.with_precision(prec.max(c.precision_bits())))
        .collect()
}

fn derivative(coeffs: &[Enclosure]) -> Vec<Enclosure> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_enc(&Enclosure::from_int(i as i64, c.precision_bits())))
        .collect()
}

/// Enclosure of `P` over `x ∈ [lo, hi]` (`lo ≥ 0`): Horner on `T = [lo², hi²]`
/// intersected with the mean-value form around the midpoint of `T`.
fn eval_on(coeffs: &[Enclosure], deriv: &[Enclosure], lo: &Dyadic, hi: &Dyadic, prec: u32) -> Enclosure {
    let t = Enclosure::from_bounds(
        lo.mul(lo).round(prec, Round::Down),
        hi.mul(hi).round(prec, Round::Up),
        prec,
    );
    let direct = horner(coeffs, &t);
    if t.is_point() {
        return direct;
    }
    let tm = Enclosure::point(t.mid(), prec);
    let mv = &horner(coeffs, &tm) + &(&horner(deriv, &t) * &(&t - &tm));
    direct.intersect(&mv).unwrap_or(direct)
}

fn eval_point(coeffs: &[Enclosure], x: &Dyadic, prec: u32) -> Enclosure {
    let t = Enclosure::point(x.clone(), prec).sqr();
    horner(coeffs, &t)
}

/// Enclosure of `P(t)/t^j` over `t ∈ (0, δ²]` from the dominance bound.
fn near_zero_quotient(coeffs: &[Enclosure], j: usize, delta: &Dyadic, prec: u32) -> Enclosure {
    let t = delta.mul(delta);
    let mut tail = Dyadic::zero();
    let mut power = t.clone();
    for c in &coeffs[j + 1..] {
        tail = tail.add(&c.mag().mul(&power)).round(prec, Round::Up);
        power = power.mul(&t).round(prec, Round::Up);
    }
    coeffs[j].widen(&tail)
}

struct Search<'a> {
    coeffs: &'a [Enclosure],
    deriv: Vec<Enclosure>,
    claimed: Sign,
    prec: u32,
    max_depth: u32,
    parallel: bool,
}

enum Outcome {
    Proven(Vec<Leaf>),
    Refuted(Dyadic),
    Inconclusive(String),
}

impl Search<'_> {
    fn eval(&self, lo: &Dyadic, hi: &Dyadic) -> Enclosure {
        eval_on(self.coeffs, &self.deriv, lo, hi, self.prec)
    }

    fn bisect(&self, lo: Dyadic, hi: Dyadic, depth: u32) -> Outcome {
        let value = self.eval(&lo, &hi);
        match Sign::of(&value) {
            Some(s) if s == self.claimed => {
                return Outcome::Proven(vec![Leaf {
                    lo,
                    hi,
                    value,
                    kind: LeafKind::Bisection,
                }]);
            }
            Some(_) => return Outcome::Refuted(lo.add(&hi).mul_pow2(-1)),
            None => {}
        }
        let mid = lo.add(&hi).mul_pow2(-1);
        if depth >= self.max_depth {
            let v = eval_point(self.coeffs, &mid, self.prec);
            if Sign::of(&v) == Some(self.claimed.opposite()) {
                return Outcome::Refuted(mid);
            }
            return Outcome::Inconclusive(format!(
                "undecided on [{}, {}] at depth {depth}, {} bits",
                lo.truncated_decimal(12),
                hi.truncated_decimal(12),
                self.prec
            ));
        }
        let (left, right) = if self.parallel && depth < PARALLEL_DEPTH {
            rayon::join(
                || self.bisect(lo.clone(), mid.clone(), depth + 1),
                || self.bisect(mid.clone(), hi.clone(), depth + 1),
            )
        } else {
            let left = self.bisect(lo.clone(), mid.clone(), depth + 1);
            if matches!(left, Outcome::Refuted(_)) {
                return left;
            }
            (left, self.bisect(mid, hi, depth + 1))
        };
        match (left, right) {
            (Outcome::Refuted(w), _) | (_, Outcome::Refuted(w)) => Outcome::Refuted(w),
            (Outcome::Inconclusive(n), _) | (_, Outcome::Inconclusive(n)) => Outcome::Inconclusive(n),
            (Outcome::Proven(mut a), Outcome::Proven(b)) => {
                a.extend(b);
                Outcome::Proven(a)
            }
        }
    }
}

/// Lowest index `j` whose coefficient is not an exact zero.
fn leading_index(coeffs: &[Enclosure]) -> Option<usize> {
    coeffs.iter().position(|c| !c.is_exact_zero())
}

/// Largest `δ = 2^{−e} ≤ cap` on which the leading term dominates.
fn dominance_radius(coeffs: &[Enclosure], j: usize, cap: &Dyadic, prec: u32) -> Option<Dyadic> {
    let lead = coeffs[j].mig();
    if lead.is_zero() {
        return None;
    }
    let mut e = -cap.magnitude_exp();
    if Dyadic::pow2(-e) > *cap {
        e += 1;
    }
    while e <= MAX_DELTA_EXPONENT {
        let delta = Dyadic::pow2(-e);
        let q = near_zero_quotient(coeffs, j, &delta, prec);
        if Sign::of(&q).is_some() {
            return Some(delta);
        }
        e += 1;
    }
    None
}

fn run(
    poly: &EnvelopePolynomial,
    lo: &Enclosure,
    hi: &Enclosure,
    claimed: Sign,
    opts: &SignOptions,
    prec: u32,
) -> SignCertificate {
    let coeffs = coefficients_at(poly, prec);
    let mut cert = SignCertificate {
        target: poly.target().to_string(),
        interval: (lo.clone(), hi.clone()),
        claimed_sign: claimed,
        status: Status::Inconclusive,
        precision_bits: prec,
        max_depth: opts.max_depth,
        leaves: Vec::new(),
        witness: None,
        note: None,
    };
    let end = hi.hi().clone();
    let mut start = lo.lo().clone();
    if start.is_zero() {
        let Some(j) = leading_index(&coeffs) else {
            cert.note = Some("polynomial is identically zero".into());
            return cert;
        };
        let Some(delta) = dominance_radius(&coeffs, j, &end, prec) else {
            cert.note = Some(format!("leading coefficient of x^{} does not exclude zero", 2 * j));
            return cert;
        };
        let value = near_zero_quotient(&coeffs, j, &delta, prec);
        let sign = Sign::of(&value).expect("dominance radius decides the sign");
        if sign != claimed {
            cert.status = Status::Refuted;
            cert.witness = Some(delta);
            return cert;
        }
        cert.leaves.push(Leaf {
            lo: Dyadic::zero(),
            hi: delta.clone(),
            value,
            kind: LeafKind::NearZero {
                leading_power: 2 * j as u32,
            },
        });
        start = delta;
    }
    if start < end {
        let search = Search {
            deriv: derivative(&coeffs),
            coeffs: &coeffs,
            claimed,
            prec,
            max_depth: opts.max_depth,
            parallel: opts.parallel,
        };
        match search.bisect(start, end, 0) {
            Outcome::Proven(leaves) => cert.leaves.extend(leaves),
            Outcome::Refuted(w) => {
                cert.status = Status::Refuted;
                cert.witness = Some(w);
                cert.leaves.clear();
                return cert;
            }
            Outcome::Inconclusive(note) => {
                cert.note = Some(note);
                cert.leaves.clear();
                return cert;
            }
        }
    }
    cert.status = Status::Proven;
    cert
}
