//! Feasibility engines: exhaustive pattern search, the multicover DP, and
//! LP relaxation with randomized rounding.

mod dp;
mod extract;
mod lp;
mod patterns;
mod simplex;

pub use dp::{dp_feasible, dp_state_count, dp_table, DpOutcome, UNREACHABLE};
pub use extract::{pattern_to_solution, select_facilities};
pub use lp::{
    lp_round, lp_solve_fractional, lp_solve_with_costs, round_once, satisfies_relaxation, LpOutcome,
    LP_TOLERANCE,
};
pub use patterns::{enumerate_feasible_patterns, first_feasible_pattern, ConstraintPattern, MultisetIter};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::groups::{FacilityClass, Requirements};
use crate::registry::Registry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Verdict {
    /// Class multiplicities of a requirement-satisfying selection of size `<= k`.
    Feasible(Vec<u32>),
    Infeasible,
    /// The engine gave up without a decision (LP rounding only).
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub verdict: Verdict,
    /// DP states per layer, when the engine is the DP.
    pub state_count: Option<u128>,
    /// Rounding attempts consumed, when the engine is the LP.
    pub attempts: Option<usize>,
}

impl FeasibilityReport {
    fn plain(verdict: Verdict) -> Self {
        FeasibilityReport { verdict, state_count: None, attempts: None }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Feasible(_))
    }

    pub fn picks(&self) -> Option<&[u32]> {
        match &self.verdict {
            Verdict::Feasible(p) => Some(p),
            _ => None,
        }
    }
}

pub trait FeasibilityEngine: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, classes: &[FacilityClass], req: &Requirements, seed: u64) -> Result<FeasibilityReport>;
}

/// First feasible pattern in canonical order, streamed in parallel batches.
#[derive(Clone, Debug)]
pub struct ExhaustiveSearch {
    pub batch: usize,
}

impl Default for ExhaustiveSearch {
    fn default() -> Self {
        ExhaustiveSearch { batch: 4096 }
    }
}

impl FeasibilityEngine for ExhaustiveSearch {
    fn name(&self) -> &'static str {
        "es"
    }

    fn solve(&self, classes: &[FacilityClass], req: &Requirements, _seed: u64) -> Result<FeasibilityReport> {
        Ok(FeasibilityReport::plain(match first_feasible_pattern(classes, req, self.batch) {
            Some(p) => Verdict::Feasible(p.multiplicities),
            None => Verdict::Infeasible,
        }))
    }
}

#[derive(Clone, Debug, Default)]
pub struct DynamicProgram;

impl FeasibilityEngine for DynamicProgram {
    fn name(&self) -> &'static str {
        "dp"
    }

    fn solve(&self, classes: &[FacilityClass], req: &Requirements, _seed: u64) -> Result<FeasibilityReport> {
        let out = dp_feasible(classes, req)?;
        let verdict = match out.picks {
            Some(p) => Verdict::Feasible(p),
            None => Verdict::Infeasible,
        };
        Ok(FeasibilityReport { verdict, state_count: Some(out.state_count), attempts: None })
    }
}

/// Rounds an LP point up to `attempts` times. The second half of the budget
/// re-solves the LP with a fresh random objective before every attempt.
#[derive(Clone, Debug)]
pub struct LpRounding {
    pub attempts: usize,
}

impl Default for LpRounding {
    fn default() -> Self {
        LpRounding { attempts: 100 }
    }
}

impl FeasibilityEngine for LpRounding {
    fn name(&self) -> &'static str {
        "lp"
    }

    fn solve(&self, classes: &[FacilityClass], req: &Requirements, seed: u64) -> Result<FeasibilityReport> {
        let LpOutcome::Feasible(mut x) = lp_solve_fractional(classes, req) else {
            return Ok(FeasibilityReport::plain(Verdict::Infeasible));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 0..self.attempts {
            if attempt >= self.attempts / 2 {
                let costs: Vec<f64> = (0..classes.len()).map(|_| rng.random::<f64>()).collect();
                if let LpOutcome::Feasible(y) = lp_solve_with_costs(classes, req, &costs) {
                    x = y;
                }
            }
            if let Some(picks) = lp_round(&x, classes, req, &mut rng) {
                return Ok(FeasibilityReport {
                    verdict: Verdict::Feasible(picks),
                    state_count: None,
                    attempts: Some(attempt + 1),
                });
            }
        }
        Ok(FeasibilityReport {
            verdict: Verdict::Inconclusive(format!("LP rounding failed after {} attempts", self.attempts)),
            state_count: None,
            attempts: Some(self.attempts),
        })
    }
}

/// Engines under their CLI names: `es`, `dp`, `lp`.
pub fn feasibility_registry() -> Registry<dyn FeasibilityEngine> {
    let mut reg: Registry<dyn FeasibilityEngine> = Registry::new("feasibility engine");
    reg.register("es", Box::new(ExhaustiveSearch::default()))
        .register("dp", Box::new(DynamicProgram))
        .register("lp", Box::new(LpRounding::default()));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Signature;

    fn class(bits: &str, freq: usize) -> FacilityClass {
        FacilityClass {
            signature: Signature::parse(bits).unwrap(),
            members: (0..freq).collect(),
        }
    }

    #[test]
    fn engines_agree_on_small_cases() {
        let reg = feasibility_registry();
        let classes = vec![class("01", 1), class("10", 2), class("11", 1)];
        for (r, k, want) in [(vec![2, 2], 3, true), (vec![2, 2], 2, false), (vec![0, 0], 1, true)] {
            let req = Requirements::new(r, k).unwrap();
            for name in ["es", "dp"] {
                let rep = reg.get(name).unwrap().solve(&classes, &req, 1).unwrap();
                assert_eq!(rep.is_feasible(), want, "{name}");
            }
            let lp = reg.get("lp").unwrap().solve(&classes, &req, 1).unwrap();
            if want {
                assert!(lp.is_feasible() || matches!(lp.verdict, Verdict::Inconclusive(_)));
            } else {
                assert_eq!(lp.verdict, Verdict::Infeasible);
            }
        }
    }

    #[test]
    fn dp_reports_state_count_and_lp_attempts() {
        let classes = vec![class("11", 3)];
        let req = Requirements::new(vec![1, 1], 1).unwrap();
        let dp = DynamicProgram.solve(&classes, &req, 0).unwrap();
        assert_eq!(dp.state_count, Some(4));
        let lp = LpRounding::default().solve(&classes, &req, 0).unwrap();
        assert_eq!(lp.verdict, Verdict::Feasible(vec![1]));
        assert_eq!(lp.attempts, Some(1));
    }

    #[test]
    fn unknown_engine_lists_names() {
        let err = feasibility_registry().get("sat").err().unwrap().to_string();
        assert!(err.contains("es, dp, lp"), "{err}");
    }
}
