//! Exact arithmetic for real quadratic irrationals and their continued
//! fractions, with certified-interval evaluation of approximation constants.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] — arbitrary-precision quadratic surds `(a + b*sqrt(d))/c`,
//!   generic over the underlying integer type.
//! * [`interval`] — closed rational intervals used as certificates: every
//!   approximate quantity in this crate is reported as an interval that
//!   provably contains the exact value.
//! * [`cf`] — continued fractions: eventually periodic expansions, digit
//!   streams, convergents, exact digit-wise images under fractional linear
//!   maps, and two-sided mirror ratios.
//! * [`spectrum`] — the approximation constant of a real number relative to
//!   the orbit of a quadratic surd, estimated with certified enclosures.
//! * [`hurwitz`] — closed forms for Hurwitz-type constants of the family
//!   `beta_{u,v}` built from the golden ratio and the surds `tau_{u,v}`.
//! * [`halls_ray`] — constructive witnesses for prescribed approximation
//!   constants, produced by a back-and-forth digit exchange between a number
//!   and its image under a fractional linear map, then verified digit by
//!   digit with certified intervals.
//!
//! The default scalar is [`num_bigint::BigInt`]; the aliases [`Int`], [`Rat`]
//! and [`Surd`] fix that choice at the crate root. Machine integers such as
//! `i64` also satisfy [`exact::SurdInt`] and are handy in tests, but they
//! overflow quickly: everything user-facing sticks to `BigInt`.

pub mod cf;
pub mod exact;
pub mod halls_ray;
pub mod hurwitz;
pub mod interval;
pub mod spectrum;

/// Default exact integer scalar.
pub type Int = num_bigint::BigInt;

/// Default exact rational scalar.
pub type Rat = num_rational::Ratio<Int>;

/// Quadratic surd over the default scalar.
pub type Surd = exact::QuadraticSurd<Int>;

pub use interval::CertifiedInterval;
