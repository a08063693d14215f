//! Exact power-series coefficients.
//!
//! Three base streams are available, each as coefficients of `x^{2k}`, `k ≥ 1`:
//!
//! * `ln(sin x / x) = Σ s_k x^{2k}` with `s_k = −2^{2k−1}|B_{2k}| / (k (2k)!)`,
//! * `ln cos x = Σ l_k x^{2k}` with `l_k = −2^{2k−1}(2^{2k}−1)|B_{2k}| / (k (2k)!)`,
//! * `−ln cos(x/2) = Σ q_k x^{2k}` with `q_k = −l_k / 4^k`.
//!
//! The combination `f_a(x) = a ln(sin x / x) − 2 ln cos(x/2)` has coefficients
//! `E_k = ((2−a)4^k − 2)|B_{2k}| / (2k (2k)!)`, whose sign pattern is governed by
//! the thresholds `α_k = 2 − 2/4^k`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::{
    bernoulli_abs, factorial, geometric_tail, ln_cos_half_value, ln_sinc_value, pi_enclosure, Dyadic, Enclosure,
    Rational,
};

/// Largest coefficient index supported by the shared Bernoulli table.
pub const MAX_COEFF_INDEX: u32 = 256;

fn check_index(k: u32) -> Result<()> {
    if k == 0 || k > MAX_COEFF_INDEX {
        return Err(Error::domain(format!(
            "coefficient index must lie in 1..={MAX_COEFF_INDEX}, got {k}"
        )));
    }
    Ok(())
}

/// `|B_2k| / (2k)!`
fn scaled_bernoulli(k: u32) -> Result<Rational> {
    let b = bernoulli_abs(k)?;
    Ok(b * Rational::new(BigInt::from(1), factorial(2 * k))?)
}

fn pow4(k: u32) -> BigInt {
    BigInt::from(1) << (2 * k)
}

/// Coefficient of `x^{2k}` in `ln(sin x / x)`.
pub fn ln_sinc_coeff(k: u32) -> Result<Rational> {
    check_index(k)?;
    let num = BigInt::from(1) << (2 * k - 1);
    let r = Rational::from_bigint(num) * scaled_bernoulli(k)? * Rational::new(1.into(), k.into())?;
    Ok(-r)
}

/// Coefficient of `x^{2k}` in `ln cos x`.
pub fn ln_cos_coeff(k: u32) -> Result<Rational> {
    check_index(k)?;
    let num = (BigInt::from(1) << (2 * k - 1)) * (pow4(k) - 1);
    let r = Rational::from_bigint(num) * scaled_bernoulli(k)? * Rational::new(1.into(), k.into())?;
    Ok(-r)
}

/// Coefficient of `x^{2k}` in `−ln cos(x/2)`, always positive.
pub fn neg_ln_cos_half_coeff(k: u32) -> Result<Rational> {
    check_index(k)?;
    let num = pow4(k) - 1;
    let r = Rational::from_bigint(num) * scaled_bernoulli(k)? * Rational::new(1.into(), (2 * k).into())?;
    Ok(r)
}

fn check_exponent(a: &Rational) -> Result<()> {
    if a <= &Rational::one() {
        return Err(Error::domain(format!("exponent a must exceed 1, got {a}")));
    }
    Ok(())
}

/// Coefficient `E_k(a)` of `x^{2k}` in `a ln(sin x/x) − 2 ln cos(x/2)`.
pub fn e_coeff(a: &Rational, k: u32) -> Result<Rational> {
    check_exponent(a)?;
    check_index(k)?;
    let two = Rational::from_integer(2);
    let factor = (&two - a) * Rational::from_bigint(pow4(k)) - two;
    Ok(factor * scaled_bernoulli(k)? * Rational::new(1.into(), (2 * k).into())?)
}

/// `α_k = 2 − 2/4^k`.
pub fn alpha(k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::domain("α_k needs k ≥ 1"));
    }
    Ok(Rational::from_integer(2) - Rational::new(2.into(), pow4(k))?)
}

/// Number of non-positive leading coefficients: the `k` with `α_k < a ≤ α_{k+1}`,
/// and `0` at `a = 3/2`. Defined for `3/2 ≤ a < 2`.
pub fn frak_m(a: &Rational) -> Result<u32> {
    let three_halves = Rational::frac(3, 2);
    if a < &three_halves || a >= &Rational::from_integer(2) {
        return Err(Error::domain(format!("𝔪(a) is defined for 3/2 ≤ a < 2, got {a}")));
    }
    if a == &three_halves {
        return Ok(0);
    }
    let mut k = 1;
    while a > &alpha(k + 1)? {
        k += 1;
    }
    Ok(k)
}

/// Which function a [`SeriesSpec`] expands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// `ln(sin x / x)`, radius π.
    LnSinc,
    /// `ln cos x`, radius π/2.
    LnCos,
    /// `−ln cos(x/2)`, radius π.
    NegLnCosHalf,
    /// `f_a(x) = a ln(sin x / x) − 2 ln cos(x/2)`, radius π.
    Fa(Rational),
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesKind::LnSinc => write!(f, "ln_sinc"),
            SeriesKind::LnCos => write!(f, "ln_cos"),
            SeriesKind::NegLnCosHalf => write!(f, "neg_ln_cos_half"),
            SeriesKind::Fa(a) => write!(f, "f_a({a})"),
        }
    }
}

/// Coarse sign structure of a coefficient stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignPattern {
    /// Every coefficient is non-negative except those at the listed indices.
    MostlyNonNegative(Vec<u32>),
    /// Every coefficient is non-positive except those at the listed indices.
    MostlyNonPositive(Vec<u32>),
}

/// An even power series `Σ_{k≥1} C_k x^{2k}` with exact coefficients and a
/// rigorous tail majorant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    kind: SeriesKind,
}

impl SeriesSpec {
    pub fn ln_sinc() -> Self {
        SeriesSpec {
            kind: SeriesKind::LnSinc,
        }
    }

    pub fn ln_cos() -> Self {
        SeriesSpec {
            kind: SeriesKind::LnCos,
        }
    }

    pub fn neg_ln_cos_half() -> Self {
        SeriesSpec {
            kind: SeriesKind::NegLnCosHalf,
        }
    }

    pub fn f_a(a: Rational) -> Result<Self> {
        check_exponent(&a)?;
        Ok(SeriesSpec {
            kind: SeriesKind::Fa(a),
        })
    }

    pub fn kind(&self) -> &SeriesKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    /// Exact coefficient of `x^{2k}`.
    pub fn coefficient(&self, k: u32) -> Result<Rational> {
        match &self.kind {
            SeriesKind::LnSinc => ln_sinc_coeff(k),
            SeriesKind::LnCos => ln_cos_coeff(k),
            SeriesKind::NegLnCosHalf => neg_ln_cos_half_coeff(k),
            SeriesKind::Fa(a) => e_coeff(a, k),
        }
    }

    /// Radius of convergence: π/2 for `ln cos x`, π otherwise.
    pub fn radius(&self, precision_bits: u32) -> Result<Enclosure> {
        let pi = pi_enclosure(precision_bits)?;
        Ok(match self.kind {
            SeriesKind::LnCos => pi.mul_pow2(-1),
            _ => pi,
        })
    }

    /// Rigorous value of the summed function at `x` (strictly inside the radius).
    pub fn value(&self, x: &Enclosure) -> Result<Enclosure> {
        match &self.kind {
            SeriesKind::LnSinc => ln_sinc_value(x),
            SeriesKind::NegLnCosHalf => Ok(-ln_cos_half_value(x)?),
            SeriesKind::LnCos => ln_cos_half_value(&x.mul_pow2(1)),
            SeriesKind::Fa(a) => {
                let s = ln_sinc_value(x)?.mul_rational(a);
                let c = ln_cos_half_value(x)?.mul_pow2(1);
                Ok(&s - &c)
            }
        }
    }

    /// Indices where the sign departs from the dominant one.
    pub fn sign_pattern(&self) -> SignPattern {
        match &self.kind {
            SeriesKind::LnSinc | SeriesKind::LnCos => SignPattern::MostlyNonPositive(Vec::new()),
            SeriesKind::NegLnCosHalf => SignPattern::MostlyNonNegative(Vec::new()),
            SeriesKind::Fa(a) => {
                let two = Rational::from_integer(2);
                if a >= &two {
                    return SignPattern::MostlyNonPositive(Vec::new());
                }
                // E_k ≤ 0 exactly when a ≥ α_k, and α_k increases to 2
                let mut j = Vec::new();
                let mut k = 1;
                while a >= &alpha(k).expect("k ≥ 1") {
                    j.push(k);
                    k += 1;
                }
                SignPattern::MostlyNonNegative(j)
            }
        }
    }

    /// Upper bound on `|Σ_{k>n} C_k x^{2k}|`, returned as the enclosure `[0, bound]`.
    ///
    /// Every stream is dominated by `γ·ζ(2k)/(k ρ^{2k})` with `ρ` the radius:
    /// `γ = 1` for `ln(sin x/x)` and `−ln cos(x/2)`, `γ = 1` for `ln cos x` after
    /// rescaling by 2, and `γ = |2 − a| + 2·4^{−(n+1)}` for `f_a`. The sum of the
    /// majorants is at most `γ ζ(2)/(n+1) · r^{n+1}/(1 − r)` with `r = (x/ρ)²`.
    pub fn tail_bound(&self, n: u32, x: &Enclosure) -> Result<Enclosure> {
        let w = x.precision_bits().max(64) + 32;
        let radius = self.radius(w)?;
        let ratio = x.with_precision(w).abs().div(&radius)?.sqr();
        let base = geometric_tail(n, &ratio)?;
        let gamma = match &self.kind {
            SeriesKind::Fa(a) => {
                let two = Rational::from_integer(2);
                (&two - a).abs() + Rational::new(2.into(), pow4(n + 1))?
            }
            _ => Rational::one(),
        };
        let bound = Enclosure::point(base, w).mul_rational(&gamma);
        Ok(Enclosure::new(Dyadic::zero(), bound.hi().clone(), w)?.with_precision(x.precision_bits()))
    }
}

/// `x²` coefficient of a polynomial exponent, possibly a rational multiple of `1/π²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadraticCoeff {
    Rational(Rational),
    OverPiSquared(Rational),
}

impl QuadraticCoeff {
    pub fn enclosure(&self, precision_bits: u32) -> Result<Enclosure> {
        match self {
            QuadraticCoeff::Rational(r) => Ok(Enclosure::from_rational(r, precision_bits)),
            QuadraticCoeff::OverPiSquared(r) => {
                let pi2 = pi_enclosure(precision_bits + 8)?.sqr();
                Ok(Enclosure::from_rational(r, precision_bits + 8)
                    .div(&pi2)?
                    .with_precision(precision_bits))
            }
        }
    }

    fn is_nonnegative(&self) -> bool {
        match self {
            QuadraticCoeff::Rational(r) | QuadraticCoeff::OverPiSquared(r) => !r.is_negative(),
        }
    }
}

/// Exponent used in `(sin x/x)^p`: either a constant `a > 1` or `p(x) = p₀ + p₂x²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentParameter {
    Constant(Rational),
    Polynomial { p0: Rational, p2: QuadraticCoeff },
}

impl ExponentParameter {
    pub fn constant(a: Rational) -> Result<Self> {
        check_exponent(&a)?;
        Ok(ExponentParameter::Constant(a))
    }

    pub fn polynomial(p0: Rational, p2: QuadraticCoeff) -> Result<Self> {
        if !p0.is_positive() || !p2.is_nonnegative() {
            return Err(Error::domain("polynomial exponent needs p₀ > 0 and p₂ ≥ 0"));
        }
        Ok(ExponentParameter::Polynomial { p0, p2 })
    }

    /// `p₁(x) = 3/2 + x²/(2π²)`.
    pub fn p1() -> Self {
        ExponentParameter::Polynomial {
            p0: Rational::frac(3, 2),
            p2: QuadraticCoeff::OverPiSquared(Rational::frac(1, 2)),
        }
    }

    /// `p₂(x) = 3/2 + x²/80`.
    pub fn p2() -> Self {
        ExponentParameter::Polynomial {
            p0: Rational::frac(3, 2),
            p2: QuadraticCoeff::Rational(Rational::frac(1, 80)),
        }
    }

    /// Value of the exponent at `x`.
    pub fn eval(&self, x: &Enclosure) -> Result<Enclosure> {
        let p = x.precision_bits();
        match self {
            ExponentParameter::Constant(a) => Ok(Enclosure::from_rational(a, p)),
            ExponentParameter::Polynomial { p0, p2 } => {
                Ok(&Enclosure::from_rational(p0, p) + &(&p2.enclosure(p)? * &x.sqr()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        assert_eq!(ln_sinc_coeff(1).unwrap(), Rational::frac(-1, 6));
        assert_eq!(ln_sinc_coeff(3).unwrap(), Rational::frac(-1, 2835));
        assert_eq!(ln_cos_coeff(3).unwrap(), Rational::frac(-1, 45));
        assert_eq!(neg_ln_cos_half_coeff(1).unwrap(), Rational::frac(1, 8));
        assert!(ln_sinc_coeff(0).is_err());
        assert!(e_coeff(&Rational::one(), 1).is_err());
    }

    #[test]
    fn frak_m_examples() {
        assert_eq!(frak_m(&Rational::frac(3, 2)).unwrap(), 0);
        assert_eq!(frak_m(&Rational::frac(8, 5)).unwrap(), 1);
        assert_eq!(frak_m(&Rational::frac(15, 8)).unwrap(), 1);
        assert_eq!(frak_m(&Rational::frac(19, 10)).unwrap(), 2);
        assert!(frak_m(&Rational::from_integer(2)).is_err());
        assert!(frak_m(&Rational::frac(7, 5)).is_err());
    }

    #[test]
    fn sign_pattern_matches_frak_m() {
        let spec = SeriesSpec::f_a(Rational::frac(19, 10)).unwrap();
        assert_eq!(spec.sign_pattern(), SignPattern::MostlyNonNegative(vec![1, 2]));
        let spec = SeriesSpec::f_a(Rational::frac(3, 2)).unwrap();
        assert_eq!(spec.sign_pattern(), SignPattern::MostlyNonNegative(vec![1]));
        let spec = SeriesSpec::f_a(Rational::from_integer(3)).unwrap();
        assert_eq!(spec.sign_pattern(), SignPattern::MostlyNonPositive(vec![]));
    }

    #[test]
    fn p1_coefficient_is_one_over_two_pi_squared() {
        let c = ExponentParameter::p1();
        let v = c.eval(&Enclosure::from_int(1, 128)).unwrap();
        assert!(v.contains_f64(1.5 + 1.0 / (2.0 * std::f64::consts::PI.powi(2))) || v.width().to_f64() < 1e-30);
        assert!((v.mid().to_f64() - 1.5506605918211689).abs() < 1e-15);
    }
}
