//! Turning class multiplicities into concrete facility selections.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{FacilityClass, GroupSystem, Requirements};
use crate::metric::MetricInstance;
use crate::solution::Solution;

/// Draws `picks[c]` distinct members from each class `c`, uniformly at random.
pub fn select_facilities(picks: &[u32], classes: &[FacilityClass], seed: u64) -> Result<Vec<usize>> {
    if picks.len() != classes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} multiplicities for {} classes",
            picks.len(),
            classes.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(picks.iter().map(|&m| m as usize).sum());
    for (i, (&m, class)) in picks.iter().zip(classes).enumerate() {
        if m as usize > class.frequency() {
            return Err(Error::FrequencyViolated { class: i, used: m, frequency: class.frequency() });
        }
        out.extend(
            sample(&mut rng, class.frequency(), m as usize)
                .into_iter()
                .map(|j| class.members[j]),
        );
    }
    out.sort_unstable();
    Ok(out)
}

/// Materializes a multiplicity vector as a budget-`k` solution.
pub fn pattern_to_solution(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    picks: &[u32],
    classes: &[FacilityClass],
    seed: u64,
) -> Result<Solution> {
    let facilities = select_facilities(picks, classes, seed)?;
    Solution::evaluate(instance, groups, req, facilities, "pattern", req.k)
}
