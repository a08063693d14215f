//! Verified numerics for exponential inequalities involving the sinc function.
//!
//! The crate re-proves, by rigorous computation, a family of inequalities of the form
//! `(sin x / x)^a ≤ cos²(x/2)` on subintervals of `(0, π)`:
//!
//! * [`exactnum`] supplies exact rationals, Bernoulli numbers and outward-rounded
//!   [`Enclosure`]s of π, `ln(sin x / x)` and `ln cos(x/2)`.
//! * [`series`] holds the exact power-series coefficients and the sign pattern of
//!   `f_a(x) = a ln(sin x / x) − 2 ln cos(x/2)`.
//! * [`envelope`] builds certified polynomial lower/upper bounds (Wu–Debnath style
//!   envelopes) including the proof polynomials `H1`, `H2`, `P_L`, `P_R`.
//! * [`certify`] decides polynomial signs on intervals, isolates roots, and runs the
//!   end-to-end proofs together with the `x_a` / `m_a` table.
//!
//! ```
//! use sinc_certify::exactnum::{pi_enclosure, Enclosure};
//! use sinc_certify::exactnum::ln_sinc_value;
//!
//! let pi = pi_enclosure(128).unwrap();
//! assert!((pi.mid().to_f64() - std::f64::consts::PI).abs() < 1e-15);
//! assert!(pi.width().to_f64() < 1e-35);
//!
//! let x = Enclosure::from_f64(1.0, 128);
//! let v = ln_sinc_value(&x).unwrap();
//! assert!((v.mid().to_f64() + 0.17260374626909167).abs() < 1e-15);
//! ```

pub mod certify;
pub mod envelope;
mod error;
pub mod exactnum;
pub mod series;

pub use error::{Error, Result};
pub use exactnum::{Dyadic, Enclosure, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/enclosures.md")]
    mod enclosures {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/envelopes.md")]
    mod envelopes {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/table1.md")]
    mod table1 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
