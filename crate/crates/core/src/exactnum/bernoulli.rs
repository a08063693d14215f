use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Default largest even index served by [`bernoulli`].
pub const DEFAULT_MAX_INDEX: u32 = 512;

/// Exact table of `B_2, B_4, …, B_{2n}`.
///
/// Built from the tangent numbers `T_k`, which satisfy an integer-only
/// recurrence; `B_{2k} = (-1)^{k-1} · 2k · T_k / (4^k (4^k - 1))`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    max_two_k: u32,
    values: Vec<Rational>,
}

impl BernoulliTable {
    pub fn with_max(max_two_k: u32) -> Result<Self> {
        if max_two_k < 2 || !max_two_k.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "Bernoulli table bound must be an even integer ≥ 2, got {max_two_k}"
            )));
        }
        let n = (max_two_k / 2) as usize;
        let tangent = tangent_numbers(n);
        let values = (1..=n)
            .map(|k| {
                let four_k = BigInt::one() << (2 * k);
                let num = BigInt::from(2 * k) * &tangent[k - 1];
                let den = &four_k * (&four_k - 1u32);
                let b = Rational::new(num, den).expect("positive denominator");
                if k % 2 == 0 {
                    -b
                } else {
                    b
                }
            })
            .collect();
        Ok(BernoulliTable { max_two_k, values })
    }

    pub fn max_index(&self) -> u32 {
        self.max_two_k
    }

    /// `B_{two_k}` for even `two_k` in `2..=max_index`.
    pub fn get(&self, two_k: u32) -> Result<&Rational> {
        if two_k == 0 || !two_k.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "Bernoulli index must be even and positive, got {two_k}"
            )));
        }
        if two_k > self.max_two_k {
            return Err(Error::domain(format!(
                "Bernoulli index {two_k} exceeds the configured maximum {}",
                self.max_two_k
            )));
        }
        Ok(&self.values[(two_k / 2 - 1) as usize])
    }
}

/// Tangent numbers `T_1..T_n` (`tan x = Σ T_k x^{2k-1}/(2k-1)!`).
fn tangent_numbers(n: usize) -> Vec<BigInt> {
    let mut t: Vec<BigInt> = vec![BigInt::from(0); n];
    if n == 0 {
        return t;
    }
    t[0] = BigInt::one();
    for k in 1..n {
        t[k] = BigInt::from(k) * &t[k - 1];
    }
    for k in 1..n {
        for j in k..n {
            t[j] = BigInt::from(j - k) * &t[j - 1] + BigInt::from(j - k + 2) * &t[j];
        }
    }
    t
}

fn default_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::with_max(DEFAULT_MAX_INDEX).expect("valid bound"))
}

/// Exact `B_{two_k}` from the shared, lazily built table (`two_k ≤ 512`).
pub fn bernoulli(two_k: u32) -> Result<Rational> {
    default_table().get(two_k).cloned()
}

/// `|B_{2k}|`.
pub(crate) fn bernoulli_abs(k: u32) -> Result<Rational> {
    bernoulli(2 * k).map(|b| b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert_eq!(bernoulli(2).unwrap(), Rational::frac(1, 6));
        assert_eq!(bernoulli(4).unwrap(), Rational::frac(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), Rational::frac(1, 42));
        assert_eq!(bernoulli(12).unwrap(), Rational::frac(-691, 2730));
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(bernoulli(0).is_err());
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(514).is_err());
        assert!(BernoulliTable::with_max(7).is_err());
    }

    #[test]
    fn small_table_agrees_with_default() {
        let t = BernoulliTable::with_max(40).unwrap();
        for two_k in (2..=40).step_by(2) {
            assert_eq!(t.get(two_k).unwrap(), &bernoulli(two_k).unwrap());
        }
    }

    #[test]
    fn concurrent_reads_are_identical() {
        let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(|| bernoulli(200).unwrap())).collect();
        let values: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }
}
