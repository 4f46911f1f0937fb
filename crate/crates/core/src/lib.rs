//! Selberg zeta functions of compact hyperbolic surfaces.
//!
//! Two independent pipelines live here. The analytic one enumerates a
//! cocompact Fuchsian group, extracts its primitive length spectrum and
//! evaluates the zeta function and its logarithmic derivative in the region
//! of absolute convergence; the divisor of the continued function is built
//! structurally from the genus and the Laplace spectrum. The algebraic one
//! tabulates the dimensions of the group cohomology of the principal series
//! hyperfunction vectors. The two meet in the identity
//! `ord_λ Z = -χ'(Γ, V^{-ω})`, which [`cohomology::check_patterson`] verifies
//! as an exact integer equality.

pub mod cohomology;
pub mod complex;
pub mod contour;
pub mod divisor;
pub mod error;
pub mod fuchsian;
pub mod hyperbolic;
pub mod precision;
pub mod spectral_terms;
pub mod zeta;

pub use complex::BigComplex;
pub use error::{Error, Result};
pub use precision::Precision;
