//! Embedded resolution of plane-curve germs and the resolution data format.

mod blowup;
mod data;
mod reduce;

use thiserror::Error;

pub use blowup::{resolve_germ, resolve_plane_curve, resolve_with, ResolveOptions};
pub use data::{Chart, Divisor, ResolutionData, Stratum};
pub use reduce::squarefree_part;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("the polynomial does not vanish at the origin")]
    NotVanishingAtOrigin,
    #[error("the zero polynomial has no resolution")]
    ZeroPolynomial,
    #[error("resolution is only implemented in 1 or 2 variables, got {0}")]
    UnsupportedDimension(usize),
    #[error("required blowup center is not a rational point: {0}")]
    NonRationalCenter(String),
    #[error("more than {0} blowups needed")]
    MaxBlowupsExceeded(usize),
    #[error("extra center s = {point} on E{id} is not a free point")]
    InvalidExtraCenter { id: u32, point: String },
    #[error("internal chart check failed: {0}")]
    ChartCheck(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

/// Loads and validates user-supplied resolution data.
pub fn load_resolution(json: &[u8]) -> Result<ResolutionData, ResolveError> {
    ResolutionData::from_json(json)
}
