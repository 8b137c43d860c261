//! Monodromy invariants of hypersurface singularities, computed two ways.
//!
//! The resolution side ([`resolve`], [`formulas`]) evaluates A'Campo-type
//! closed formulas and the motivic contact-locus formula from an embedded
//! resolution. The arc side ([`jets`]) counts truncated arcs over prime
//! fields by pruned depth-first search and recovers Euler characteristics by
//! exact interpolation. [`verify`] compares the two.

pub mod cli;
pub mod formulas;
pub mod gring;
pub mod jets;
pub mod poly;
pub mod resolve;
pub mod verify;

pub use formulas::CoverMode;
pub use gring::{LaurentL, RationalT, ZetaFactorization};
pub use jets::CountTable;
pub use poly::{Jet, MultiPoly, TruncSeries};
pub use resolve::ResolutionData;
pub use verify::VerificationReport;
