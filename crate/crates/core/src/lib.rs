//! Exact integer calculus of constructible functions on stratification
//! posets: Euler characteristics, intersection-homology Euler
//! characteristics, and the stratified multiplicative identities relating
//! them under proper pushforward.
//!
//! The building blocks:
//!
//! * [`poset`] — finite stratification posets with per-stratum complex
//!   dimension and χ_c weight;
//! * [`matrix`] — unipotent triangular matrices over a poset, inverted
//!   exactly over the integers;
//! * [`constructible`] — integer functions on strata with exact change of
//!   basis among the open, closed, and hat families;
//! * [`ic`] — link systems, the ic basis, and the coefficient calculus of
//!   the free module on ic classes;
//! * [`pushforward`] — proper maps as fiberwise χ_c kernels, plus
//!   verification of every multiplicative identity;
//! * [`hom`] — evaluation of arbitrary homomorphisms, hat transforms, and
//!   the universal class-level checks;
//! * [`random`] — seeded generators for property testing and fuzzing.
//!
//! Everything is immutable after construction and all arithmetic is checked
//! `i64`: results are exact or they are an [`Error::Overflow`].
//!
//! ```
//! use std::sync::Arc;
//! use stratachi_core::poset::{StratPoset, StratumId};
//! use stratachi_core::constructible::ConstrFn;
//!
//! let node = StratumId::new("node").unwrap();
//! let smooth = StratumId::new("smooth").unwrap();
//! let space = Arc::new(StratPoset::build(
//!     vec![(node.clone(), 0, 1), (smooth.clone(), 1, 0)],
//!     &[(node, smooth)],
//!     None,
//! ).unwrap());
//! // χ of the nodal cubic: one point plus a twice-punctured sphere.
//! assert_eq!(ConstrFn::constant(&space, 1).euler().unwrap(), 1);
//! ```

// Index loops here are poset-position loops; the index feeds order queries.
#![allow(clippy::needless_range_loop)]

pub mod constructible;
pub mod error;
pub mod hom;
pub mod ic;
pub mod matrix;
pub mod poset;
pub mod pushforward;
pub mod random;
pub mod report;

pub use constructible::{Basis, BasisCoefficients, ConstrFn};
pub use error::{Error, Result};
pub use hom::{ClosureSym, FormalClass, GroupValue, HomSpec, IcHomSpec, IcSym};
pub use ic::{KClass, LinkData, LinkSystem};
pub use matrix::TriangularMatrix;
pub use poset::{Space, StratPoset, Stratum, StratumId};
pub use pushforward::ProperMapKernel;
pub use report::{Formula, FormulaReport, ReportTerm, ReportValue};
