//! Exact equivariant Poincaré series for GIT quotients of hypersurfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`] holds the truncated power-series ring over `Q` and the
//!   standard series (classifying spaces, projective spaces).
//! * [`weights`] enumerates monomials and their torus weights and does the
//!   type-A Weyl-chamber bookkeeping.
//! * [`strata`] finds the Kirwan index vectors by exact nearest-point search.
//! * [`kirwan`] turns strata into equivariant series and carries the blowup
//!   and blow-down ledgers.
//! * [`worksheet`] is a small declarative format that strings those steps
//!   together and checks them against stored expectations.
//!
//! ```
//! use gitcoh::kirwan::{equivariant_ss_series, CodimMode};
//!
//! let binary_quartics = equivariant_ss_series(2, 4, 12, CodimMode::RootCount).unwrap();
//! assert_eq!(binary_quartics.even_ints().unwrap(), vec![1, 1, 1, 0, 1, 0, 1]);
//! ```

pub mod kirwan;
pub mod series;
pub mod strata;
pub mod weights;
pub mod worksheet;

pub use series::{Rational, TruncatedSeries};
