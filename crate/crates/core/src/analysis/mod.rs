//! Experiment-level procedures: growth probes along word families, the
//! greedy norm-growth search, exact vanishing checks, pattern-independence
//! evidence, and the convexity inequality property test.

mod greedy;
mod growth;
mod independence;
mod ucheck;
mod vanish;

pub use greedy::{greedy_search, GreedyReport, GreedyStep};
pub use growth::{
    growth_probe, series_pow_steps, series_slope, GrowthFamily, GrowthPoint, GrowthSeries,
    BOUND_TOL, GAP_FLOOR,
};
pub use independence::{independence_matrix, single_pattern_growth, IndependenceReport};
pub use ucheck::{uc_inequality_test, UcCheckReport};
pub use vanish::{vanishing_check, VanishReport, EXHAUSTIVE_LEN};
