//! Exact big-rational verification of the scalar identities behind the
//! shuffle relation.

pub mod binom;
pub mod certificate;
pub mod identities;
pub mod poly;
pub mod recurrence;

pub use num_rational::BigRational;
