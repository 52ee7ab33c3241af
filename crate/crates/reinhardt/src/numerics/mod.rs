//! Quadrature, log-space arithmetic, special functions and limit extrapolation.

pub mod chebyshev;
pub mod extrapolate;
pub mod logvalue;
pub mod quad;
pub mod special;

pub use extrapolate::{extrapolate_limit, extrapolate_limit_at, Extrapolation};
pub use logvalue::{log_add, log_sum_exp, logit, sigmoid, softplus, LogValue};
pub use quad::{integrate, integrate_log_peaked, integrate_with_breaks, LogQuadrature, QuadConfig, Quadrature, Scheme};
pub use special::{bessel_i0, log_bessel_i0, log_beta, log_factorial, log_gamma};
