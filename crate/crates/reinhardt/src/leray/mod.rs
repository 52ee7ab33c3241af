//! Rank-one Leray norms and their asymptotics.

pub mod moments;
pub mod norms;

pub use moments::{log_moment, moment_peak, moment_table, moment_table_of, MomentKind, MomentTable};
pub use norms::{
    axis_limit_probe, boundedness_report, leray_norm_grid, log_gamma_coefficient, log_leray_norm_sq, ray_limit_predictor, ray_sequence,
    AxisProbe, BoundednessReport, LerayEntry, LerayNormGrid, RayReport, Verdict,
};
