//! Local search inside constraint patterns (LS1): every position of the
//! solution belongs to a class and may only swap with members of that class.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feasibility::{dp_feasible, enumerate_feasible_patterns};
use crate::groups::{partition_classes, FacilityClass, GroupSystem, Requirements};
use crate::metric::{cost_unchecked, MetricInstance};
use crate::seed::derive_seed;

use super::ls0::LocalSearchParams;
use super::swap::best_single_swap;
use super::HeuristicResult;

/// Where LS1 takes its patterns from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PatternSource {
    /// Every feasible pattern, by exhaustive enumeration.
    #[default]
    Es,
    /// The single pattern found by the DP, padded to `k`.
    Dp,
    /// Same as `Es`.
    All,
}

impl std::str::FromStr for PatternSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "es" => Ok(PatternSource::Es),
            "dp" => Ok(PatternSource::Dp),
            "all" => Ok(PatternSource::All),
            _ => Err(Error::InvalidParameter(format!("unknown pattern source '{s}' (es, dp, all)"))),
        }
    }
}

/// Tops `picks` up to `k` with the lowest-index classes that have spare members.
fn pad_to_k(mut picks: Vec<u32>, classes: &[FacilityClass], k: usize) -> Vec<u32> {
    let mut size: usize = picks.iter().map(|&m| m as usize).sum();
    for (m, class) in picks.iter_mut().zip(classes) {
        while size < k && (*m as usize) < class.frequency() {
            *m += 1;
            size += 1;
        }
    }
    picks
}

fn run_pattern(
    instance: &MetricInstance,
    classes: &[FacilityClass],
    class_of: &[usize],
    picks: &[u32],
    params: &LocalSearchParams,
    seed: u64,
) -> HeuristicResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = Vec::new();
    let mut slot_class = Vec::new();
    for (c, (&m, class)) in picks.iter().zip(classes).enumerate() {
        for i in sample(&mut rng, class.frequency(), m as usize) {
            set.push(class.members[i]);
            slot_class.push(c);
        }
    }
    let k = set.len();
    let factor = 1.0 - params.eps_ls / k as f64;
    let mut cost = cost_unchecked(instance, &set, None);
    let mut trace = vec![cost];
    let mut hit_cap = true;
    for _ in 0..params.max_iterations {
        let swap = best_single_swap(instance, &set, |p, f| class_of[f] == slot_class[p]);
        let Some(s) = swap.filter(|s| s.cost <= factor * cost) else {
            hit_cap = false;
            break;
        };
        let mut next = set.clone();
        next[s.position] = s.incoming;
        let actual = cost_unchecked(instance, &next, None);
        if actual >= cost {
            hit_cap = false;
            break;
        }
        set = next;
        cost = actual;
        trace.push(cost);
    }
    set.sort_unstable();
    HeuristicResult { facilities: set, cost, iterations: trace.len() - 1, trace, hit_cap, padded: false }
}

/// Runs LS1 from every pattern of `source` and keeps the cheapest result
/// (ties go to the earlier pattern).
pub fn local_search_ls1(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    seed: u64,
    source: PatternSource,
    params: &LocalSearchParams,
) -> Result<HeuristicResult> {
    if groups.num_facilities() != instance.num_facilities() {
        return Err(Error::InvalidInstance("group system and instance disagree on |F|".into()));
    }
    req.validate(groups)?;
    let classes = partition_classes(groups);
    let mut class_of = vec![0usize; instance.num_facilities()];
    for (c, class) in classes.iter().enumerate() {
        for &f in &class.members {
            class_of[f] = c;
        }
    }
    let patterns: Vec<Vec<u32>> = match source {
        PatternSource::Es | PatternSource::All => enumerate_feasible_patterns(&classes, req)
            .into_iter()
            .map(|p| p.multiplicities)
            .collect(),
        PatternSource::Dp => dp_feasible(&classes, req)?
            .picks
            .map(|p| vec![pad_to_k(p, &classes, req.k)])
            .unwrap_or_default(),
    };
    if patterns.is_empty() {
        return Err(Error::Infeasible);
    }
    let runs: Vec<HeuristicResult> = patterns
        .par_iter()
        .enumerate()
        .map(|(i, picks)| run_pattern(instance, &classes, &class_of, picks, params, derive_seed(seed, i as u64)))
        .collect();
    Ok(runs
        .into_iter()
        .reduce(|a, b| if b.cost < a.cost { b } else { a })
        .expect("nonempty"))
}
