//! Series arithmetic, Gamma function expansions, Taylor arithmetic and
//! adaptive cubature.

pub mod cubature;
pub mod gamma;
pub mod series;
pub mod taylor;

pub use cubature::{integrate, integrate_scalar, CubatureOptions, CubatureResult, Integrand};
pub use gamma::{digamma, gamma_series, ln_gamma, polygamma, EULER_GAMMA};
pub use series::{Affine, QSeries, Series, Q};
pub use taylor::Taylor;
