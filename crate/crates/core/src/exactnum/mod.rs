//! Exact rationals, Bernoulli numbers and outward-rounded enclosures of the
//! transcendental values the rest of the crate consumes.

mod bernoulli;
mod dyadic;
mod elementary;
mod enclosure;
mod rational;

pub use bernoulli::{bernoulli, BernoulliTable, DEFAULT_MAX_INDEX};
pub use dyadic::{Dyadic, Round};
pub use elementary::{cos, ln, ln2_enclosure, ln_cos_half_value, ln_sinc_value, pi_enclosure, sin};
pub use enclosure::Enclosure;
pub use rational::Rational;

pub(crate) use bernoulli::bernoulli_abs;
pub(crate) use elementary::{factorial, geometric_tail};
