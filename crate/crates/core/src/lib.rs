//! Fractional Laplacians, their extension problems and the rank-two
//! scattering matrix on periodic grids.
//!
//! Every operator has at least two independent realizations (Fourier
//! multiplier, extension profile, physical-space kernel, boundary fit) so
//! that each can serve as an oracle for the others.

pub mod error;
pub mod expansion;
pub mod extension;
pub mod grid;
pub mod hyperbolic;
pub mod quad;
pub mod scattering;
pub mod specfun;

pub use error::{Error, Result};
pub use expansion::{ExpansionQuad, FitOutcome, HeightSample};
pub use extension::ExtensionField;
pub use grid::{FracParams, GridFunction, ProductParams};
pub use hyperbolic::{HalfSpacePoint, LimitBehavior};
pub use scattering::{CovarianceReport, ScatteringQuad};
pub use specfun::{HypTriple, NormalizationConstants, RootDatum};
