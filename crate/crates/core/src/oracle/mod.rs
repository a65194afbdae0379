//! Brute-force oracles: definitional complaints, attainable sets,
//! adversarial profiles and strategic analyses under list caps.

mod adversarial;
mod attainable;
mod complaint;
mod consistency;
pub mod corpus;
mod incentives;
mod strategy;

pub use adversarial::adversarial_profile;
pub use attainable::{attainable_set, audit_theorem2, AttainableSet, OutcomeTable, Theorem2Audit};
pub use complaint::{definitional_complaint, enumerate_stable, enumerate_stable_within};
pub use consistency::{audit_top_top_consistency, top_top_violations, TopTopViolation};
pub use incentives::{
    check_maxmin_optimal, dominant_strategies_brute, has_dominant_strategy, has_safe_strategy, maxmin_worst,
    safe_strategies_brute, strictness_witness, DominantVerdict, MaxminReport,
};
pub use strategy::{enumerate_profiles, profile_count, Budget, ProfileIter, StrategySpace};
