//! Exact laboratory for intersecting families: bitmap set families, p-biased
//! measures and influences, shadow and cross-intersection bounds, and
//! symmetry-reduced extremal search.

pub mod binom;
pub mod construction;
pub mod corpus;
pub mod cross;
pub mod error;
pub mod family;
pub mod family_io;
pub mod measure;
pub mod measure_checks;
pub mod rational;
pub mod search;
pub mod shadows;
pub mod suite;
pub mod verdict;

pub use construction::{construct, Construction};
pub use error::{LabError, Result};
pub use family::{GroundSet, Mask, SetFamily};
pub use rational::ExactRational;
pub use verdict::{CheckOutcome, Verdict};
