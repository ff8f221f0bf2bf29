//! Decide, certify and disprove conformal rigidity of finite connected graphs.

pub mod certify;
pub mod error;
pub mod graphcore;
pub mod pipeline;
pub mod repr;
pub mod sdpfeas;
pub mod spectra;
pub mod symmetry;

pub use error::{Error, Result};
