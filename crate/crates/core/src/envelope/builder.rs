use std::collections::BTreeMap;

use crate::error::Result;
use crate::exactnum::{Enclosure, Rational};

use super::{EnvelopePolynomial, Side};

/// Accumulates polynomial terms keeping an exact rational part separate from the
/// enclosed part, so that cancellations among rational contributions are exact
/// and show up as point-zero coefficients.
#[derive(Debug, Clone)]
pub(crate) struct PolyBuilder {
    prec: u32,
    exact: BTreeMap<u32, Rational>,
    enclosed: BTreeMap<u32, Enclosure>,
}

impl PolyBuilder {
    pub(crate) fn new(prec: u32) -> Self {
        PolyBuilder {
            prec,
            exact: BTreeMap::new(),
            enclosed: BTreeMap::new(),
        }
    }

    pub(crate) fn add_exact(&mut self, power: u32, value: Rational) {
        let slot = self.exact.entry(power).or_insert_with(Rational::zero);
        *slot = &*slot + &value;
    }

    pub(crate) fn add_enclosed(&mut self, power: u32, value: Enclosure) {
        let p = self.prec;
        let slot = self.enclosed.entry(power).or_insert_with(|| Enclosure::zero(p));
        *slot = &*slot + &value;
    }

    pub(crate) fn build(self, target: impl Into<String>, side: Side, c: Enclosure) -> Result<EnvelopePolynomial> {
        let mut powers: Vec<u32> = self.exact.keys().chain(self.enclosed.keys()).copied().collect();
        powers.sort_unstable();
        powers.dedup();
        let terms = powers
            .into_iter()
            .map(|power| {
                let exact = self
                    .exact
                    .get(&power)
                    .map(|r| Enclosure::from_rational(r, self.prec))
                    .unwrap_or_else(|| Enclosure::zero(self.prec));
                let value = match self.enclosed.get(&power) {
                    Some(e) => &exact + e,
                    None => exact,
                };
                (power, value)
            })
            .collect();
        EnvelopePolynomial::new(target, side, c, self.prec, terms)
    }
}
