//! Coefficient grids, the Laplace coefficient map and weighted Bergman norms.

pub mod bracket;
pub mod coeffs;
pub mod norms;
pub mod weights;

pub use bracket::{isomorphism_bracket, theory_bounds, BracketReport};
pub use coeffs::{CoefficientGrid, Side};
pub use norms::{
    bergman_model_series, bergman_nu_norm_sq, hardy_model_series, hardy_norm_sq, invert_laplace, laplace_map, log_nu_monomial, log_radial_gamma,
    Contribution, Convention, NormReport, NuWeight,
};
pub use weights::{bergman_omega_norm_sq, exp_norm_sq, log_omega_monomial};
