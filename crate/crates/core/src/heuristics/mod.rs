//! Baselines and pattern-restricted local search.

mod kmeanspp;
mod ls0;
mod ls1;
mod swap;

pub use kmeanspp::{kmeanspp_baseline, kmeanspp_seed};
pub use ls0::{local_search_ls0, ls0_baseline, LocalSearchParams};
pub use ls1::{local_search_ls1, PatternSource};


use crate::error::Result;
use crate::groups::{GroupSystem, Requirements};
use crate::metric::MetricInstance;
use crate::solution::Solution;

/// Restarts used by the LS0 and k-means++ baselines.
pub const BASELINE_RESTARTS: u64 = 5;

/// Output of a heuristic run.
#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicResult {
    /// Facility ids, ascending.
    pub facilities: Vec<usize>,
    pub cost: f64,
    /// Accepted improving moves.
    pub iterations: usize,
    /// Cost after the start and after every accepted move.
    pub trace: Vec<f64>,
    /// The run stopped at the iteration cap rather than a local optimum.
    pub hit_cap: bool,
    /// Fewer than `k` distinct facilities were reachable and the set was padded.
    pub padded: bool,
}

impl HeuristicResult {
    pub fn to_solution(
        &self,
        instance: &MetricInstance,
        groups: &GroupSystem,
        req: &Requirements,
        algorithm: &str,
        budget: usize,
    ) -> Result<Solution> {
        let mut sol = Solution::evaluate(instance, groups, req, self.facilities.clone(), algorithm, budget)?;
        if self.padded {
            sol = sol.with_flag("padded");
        }
        if self.hit_cap {
            sol = sol.with_flag("iteration-cap");
        }
        Ok(sol)
    }
}

/// Keeps the cheaper of two results; ties keep `a`.
pub fn cheaper(a: HeuristicResult, b: HeuristicResult) -> HeuristicResult {
    if b.cost < a.cost { b } else { a }
}
