//! Certified polynomial envelopes.
//!
//! An [`EnvelopePolynomial`] is an even polynomial with enclosure coefficients
//! together with the function it bounds, the side it bounds from, and the
//! validity interval `(0, c)`.

mod builder;
mod proof;
mod wd;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Enclosure;

pub use proof::{build_h1, build_h2, g1_value, g2_value};
pub use wd::{natural_extension_bounds, wd_envelopes};

pub(crate) use builder::PolyBuilder;

/// Which side of the target an envelope bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    /// `poly(x) ≤ target(x)` on the validity interval.
    Lower,
    /// `poly(x) ≥ target(x)` on the validity interval.
    Upper,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lower => write!(f, "LOWER"),
            Side::Upper => write!(f, "UPPER"),
        }
    }
}

/// Even polynomial `Σ c_j x^{p_j}` with strictly increasing even powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopePolynomial {
    target: String,
    side: Side,
    validity_c: Enclosure,
    precision_bits: u32,
    terms: Vec<(u32, Enclosure)>,
}

impl EnvelopePolynomial {
    pub fn new(
        target: impl Into<String>,
        side: Side,
        validity_c: Enclosure,
        precision_bits: u32,
        terms: Vec<(u32, Enclosure)>,
    ) -> Result<Self> {
        if !validity_c.is_positive() {
            return Err(Error::domain("validity endpoint c must be positive"));
        }
        for (i, (power, _)) in terms.iter().enumerate() {
            if power % 2 != 0 {
                return Err(Error::domain(format!("power {power} is odd")));
            }
            if i > 0 && terms[i - 1].0 >= *power {
                return Err(Error::domain("powers must be strictly increasing"));
            }
        }
        Ok(EnvelopePolynomial {
            target: target.into(),
            side,
            validity_c,
            precision_bits,
            terms,
        })
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn validity(&self) -> &Enclosure {
        &self.validity_c
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn terms(&self) -> &[(u32, Enclosure)] {
        &self.terms
    }

    /// Coefficient of `x^power`, if that term is present.
    pub fn coefficient(&self, power: u32) -> Option<&Enclosure> {
        self.terms.iter().find(|(p, _)| *p == power).map(|(_, c)| c)
    }

    /// Highest power present (0 for the empty polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |(p, _)| *p)
    }

    /// Dense coefficients in `t = x²`: entry `j` multiplies `t^j`.
    pub fn t_coefficients(&self) -> Vec<Enclosure> {
        let p = self.precision_bits;
        let mut dense = vec![Enclosure::zero(p); (self.degree() / 2 + 1) as usize];
        for (power, c) in &self.terms {
            dense[(power / 2) as usize] = c.clone();
        }
        dense
    }

    /// Horner evaluation in `t = x²`.
    pub fn eval(&self, x: &Enclosure) -> Enclosure {
        let p = x.precision_bits().max(self.precision_bits);
        self.eval_t(&x.with_precision(p).sqr())
    }

    /// Evaluation at `t = x²` directly.
    pub fn eval_t(&self, t: &Enclosure) -> Enclosure {
        horner(&self.t_coefficients(), t)
    }

    /// Copy with a different target label.
    pub fn with_target(mut self, target: impl Into<String>) -> Self {
        self.target = target.into();
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Outward-rounded Horner scheme for dense coefficients `c_0 + c_1 t + …`.
pub(crate) fn horner(coeffs: &[Enclosure], t: &Enclosure) -> Enclosure {
    let mut acc = match coeffs.last() {
        Some(c) => c.clone(),
        None => return Enclosure::zero(t.precision_bits()),
    };
    for c in coeffs.iter().rev().skip(1) {
        acc = &(&acc * t) + c;
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct EnvelopeDocument {
    target: String,
    side: Side,
    validity_c: [String; 2],
    precision_bits: u32,
    terms: Vec<(u32, String, String)>,
}

impl Serialize for EnvelopePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EnvelopeDocument {
            target: self.target.clone(),
            side: self.side,
            validity_c: self.validity_c.to_hex_pair(),
            precision_bits: self.precision_bits,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| {
                    let [lo, hi] = c.to_hex_pair();
                    (*p, lo, hi)
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EnvelopePolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = EnvelopeDocument::deserialize(d)?;
        let p = doc.precision_bits;
        let c = Enclosure::from_hex_pair(&doc.validity_c[0], &doc.validity_c[1], p).map_err(D::Error::custom)?;
        let terms = doc
            .terms
            .iter()
            .map(|(power, lo, hi)| Enclosure::from_hex_pair(lo, hi, p).map(|e| (*power, e)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        EnvelopePolynomial::new(doc.target, doc.side, c, p, terms).map_err(D::Error::custom)
    }
}

impl fmt::Display for EnvelopePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} envelope on (0, {}), {} bits",
            self.target,
            self.side,
            self.validity_c.mid().truncated_decimal(6),
            self.precision_bits
        )?;
        for (p, c) in &self.terms {
            writeln!(f, "  x^{p:<3} {}", fmt_coeff(c))?;
        }
        Ok(())
    }
}

fn fmt_coeff(c: &Enclosure) -> String {
    if c.is_point() {
        return format!("{:e}", c.lo().to_f64());
    }
    let rad = c.width().mul_pow2(-1);
    format!("{:e} ± {:.1e}", c.mid().to_f64(), rad.to_f64().max(f64::MIN_POSITIVE))
}

/// Certainly `0 < c < limit`.
pub(crate) fn check_validity_endpoint(c: &Enclosure, limit: &Enclosure, what: &str) -> Result<()> {
    if !c.lo().is_positive() || !c.certainly_lt(limit) {
        return Err(Error::domain(format!(
            "{what}: validity endpoint {c:?} must lie strictly inside (0, {})",
            limit.hi().truncated_decimal(6)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_unsorted_powers() {
        let c = Enclosure::from_int(1, 64);
        let one = Enclosure::from_int(1, 64);
        assert!(EnvelopePolynomial::new("p", Side::Lower, c.clone(), 64, vec![(3, one.clone())]).is_err());
        assert!(EnvelopePolynomial::new("p", Side::Lower, c, 64, vec![(4, one.clone()), (2, one)]).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let c = Enclosure::from_f64(0.7, 128);
        let coeff = Enclosure::from_int(1, 128).div(&Enclosure::from_int(3, 128)).unwrap();
        let p = EnvelopePolynomial::new(
            "demo",
            Side::Upper,
            c,
            128,
            vec![(2, coeff), (6, Enclosure::from_int(-2, 128))],
        )
        .unwrap();
        let back = EnvelopePolynomial::from_json(&p.to_json().unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn horner_matches_direct_sum() {
        let c = Enclosure::from_int(2, 64);
        let p = EnvelopePolynomial::new(
            "q",
            Side::Lower,
            c,
            64,
            vec![(0, Enclosure::from_int(-1, 64)), (2, Enclosure::from_int(1, 64))],
        )
        .unwrap();
        assert!(p.eval(&Enclosure::from_int(1, 64)).is_exact_zero());
        assert!(p.eval(&Enclosure::from_int(3, 64)).contains_f64(8.0));
    }
}
