//! Exact-arithmetic construction and E(s²) certification of two-level
//! supersaturated designs.
//!
//! Designs are built by Wu's method: a two-level orthogonal array with `n`
//! runs and `n-1`, `n-2` or `n-3` columns is augmented with (some of) its
//! two-column interactions. The crate then evaluates the resulting design
//! exactly:
//!
//! * [`design`] builds Hadamard matrices (Sylvester and Paley), Hadamard
//!   designs, column deletions and interaction columns, and reads/writes the
//!   design CSV format.
//! * [`spectral`] computes J-characteristics, distance distributions,
//!   Krawtchouk polynomials and generalized wordlength patterns, together with
//!   the closed-form J sums for arrays derived from a saturated one.
//! * [`wu`] assembles the four supersaturated design families.
//! * [`es2`] evaluates E(s²), the Das et al. lower bound and optimality
//!   verdicts.
//! * [`verify`] runs the exhaustive lemma and theorem verification suites.
//!
//! ```
//! use ssdopt::design::{hadamard_design, Construction};
//! use ssdopt::wu::{build_full, StartingArray};
//! use ssdopt::es2::verdict;
//!
//! let h = hadamard_design(12, Construction::Paley).unwrap();
//! let build = build_full(&StartingArray::saturated(h)).unwrap();
//! let report = verdict(&build).unwrap();
//! assert_eq!(report.m, 66);
//! assert!(report.optimal);
//! assert_eq!(report.es2.to_string(), "144/13");
//! ```

pub mod design;
pub mod error;
pub mod es2;
pub mod rational;
pub mod spectral;
pub mod verify;
pub mod wu;

pub use error::{Error, Result};
pub use rational::Rational;
