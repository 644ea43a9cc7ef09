use serde::Serialize;

use crate::error::Result;
use crate::groups::{coverage, GroupSystem, Requirements};
use crate::metric::{cost_unchecked, MetricInstance};

/// A facility selection together with everything needed to audit it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    /// Facility ids, ascending and distinct.
    pub facilities: Vec<usize>,
    /// Full-client cost; `+inf` for the empty selection.
    pub cost: f64,
    pub coverage: Vec<u32>,
    pub algorithm: String,
    /// Size budget of the producing algorithm (`k`, `2k` or `3k`).
    pub budget: usize,
    /// Coverage meets `r` and the size fits the budget.
    pub feasible: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl Solution {
    /// Sorts and deduplicates `facilities`, then computes cost, coverage and feasibility.
    pub fn evaluate(
        instance: &MetricInstance,
        groups: &GroupSystem,
        req: &Requirements,
        mut facilities: Vec<usize>,
        algorithm: &str,
        budget: usize,
    ) -> Result<Self> {
        facilities.sort_unstable();
        facilities.dedup();
        instance.check_facilities(&facilities)?;
        let coverage = coverage(&facilities, groups)?;
        let cost = if facilities.is_empty() {
            f64::INFINITY
        } else {
            cost_unchecked(instance, &facilities, None)
        };
        let feasible = req.satisfied_by(&coverage) && facilities.len() <= budget;
        Ok(Solution {
            facilities,
            cost,
            coverage,
            algorithm: algorithm.to_string(),
            budget,
            feasible,
            flags: Vec::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.facilities.len()
    }

    pub fn with_flag(mut self, flag: impl Into<String>) -> Self {
        self.flags.push(flag.into());
        self
    }
}
