//! Interval Garside structures for the complex braid groups B(e,e,n).
//!
//! The crate works bottom-up from exact arithmetic in the reflection group
//! G(e,e,n) ([`group`]) to reduced words ([`words`]), the intervals
//! [1, λ^k] and their lattices ([`interval`]), the Garside monoid with its
//! normal forms ([`garside`]), and low-degree integral homology
//! ([`homology`]).

pub mod error;
pub mod garside;
pub mod group;
pub mod homology;
pub mod interval;
pub mod words;

pub use error::{Error, Result};
pub use group::{
    enumerate_group, generator_matrix, identity, lambda_power, ElementJson, GroupElement,
    GroupParams, Generator, Word, DEFAULT_GROUP_CAP,
};
pub use garside::{Garside, NormalForm};
pub use homology::{h2_formula, AbelianGroup, Method};
pub use interval::{Interval, LatticeReport, LatticeViolation, Side};
