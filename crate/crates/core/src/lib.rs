//! Generalized sphere-packing upper bounds for binary subblock-constrained
//! codes: constant subblock-composition codes (CSCCs) and subblock
//! energy-constrained codes (SECCs).
//!
//! The covering linear program over all words is reduced to one variable per
//! orbit of the subblock automorphism group and solved in exact rational
//! arithmetic. Closed forms, optimality certificates, asymptotic rate
//! formulas, and brute-force oracles are provided alongside.

pub mod asymptotics;
pub mod combinatorics;
pub mod cscc;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod orbits;
pub mod profile;
pub mod secc;
mod clique;
mod scalar;
mod simplex;

pub use error::{Error, Result};
pub use oracle::Family;
pub use profile::WeightProfile;
