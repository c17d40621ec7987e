//! Affine composition sum operators on spaces of analytic functions with
//! logarithmic and pole singularities, and the seeded construction of their
//! singular fixed points.

pub mod affine;
pub mod cso;
pub mod error;
pub mod fixpoint;
pub mod golden;
pub mod numeric;
pub mod series;
pub mod singular;

pub use affine::AffineMap;
pub use cso::{AffineCso, ContractionReport, CsoTerm};
pub use error::{Error, ErrorClass, Result};
pub use numeric::{branch_distance, Complex};
pub use series::DiscSeries;
pub use singular::{SingularFunction, SingularKind, SingularTerm};
