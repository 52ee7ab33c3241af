//! Numerical checks of the comparison inequalities, the weight equivalence
//! and the L¹-ball counterexample.

pub mod comparison;
pub mod counterexample;
pub mod weights;

pub use comparison::{comparison_constants, egg_comparison_constant, exponent_bounds, verify_comparison_lemma, ComparisonReport, F_omega};
pub use counterexample::{l1ball_counterexample, ln_hardy_term, CounterexampleReport, TailLaw, TailLaws};
pub use weights::{verify_weight_equivalence, WeightEquivalenceReport};
