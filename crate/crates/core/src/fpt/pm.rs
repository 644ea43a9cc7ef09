//! k-median with one facility from each of k pools (k-Med-k-PM), solved by
//! enumerating leader/radius guesses and maximizing `improv` per guess.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::coreset::WeightedClientSet;
use crate::error::{Error, Result};
use crate::metric::{cost_unchecked, MetricInstance, Objective};

use super::extension::{FictitiousExtension, ImprovOracle};
use super::grid::{candidate_set, Radius, RadiusGrid};
use super::submodular::CandidateSelector;

/// Largest number of guesses the enumeration will walk.
pub const GUESS_CAP: u128 = 100_000_000;

/// k pools of facility ids. Pools copied from one class share members;
/// the pool index acts as the copy tag.
#[derive(Clone, Debug)]
pub struct PartitionInstance<'a> {
    pub instance: &'a MetricInstance,
    pub pools: Vec<Vec<usize>>,
    pub clients: &'a WeightedClientSet,
}

/// Which leader/radius pairs are tried for each pool.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GuessSpace {
    /// For every facility of the pool: its nearest client as leader and the
    /// bucket of that distance as radius.
    #[default]
    Anchored,
    /// Every client as leader with every nonempty bucket.
    Full,
}

impl std::str::FromStr for GuessSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchored" => Ok(GuessSpace::Anchored),
            "full" => Ok(GuessSpace::Full),
            _ => Err(Error::InvalidParameter(format!("unknown guess space '{s}' (anchored, full)"))),
        }
    }
}

/// A candidate set with its radius.
#[derive(Clone, Debug, PartialEq)]
pub struct PoolGuess {
    pub leader: usize,
    pub radius: Radius,
    pub lambda: f64,
    pub candidates: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KpmOutcome {
    /// Selected facilities, ascending.
    pub facilities: Vec<usize>,
    /// Cost over the weighted client set.
    pub client_cost: f64,
    pub eta: f64,
    pub guesses: u128,
}

/// `η = e ε' / 2` for median, `e ε' / 16` for means.
pub fn eta_for(objective: Objective, eps_prime: f64) -> f64 {
    match objective {
        Objective::Median => std::f64::consts::E * eps_prime / 2.0,
        Objective::Means => std::f64::consts::E * eps_prime / 16.0,
    }
}

/// Smallest positive client/facility distance over the pools, or 1.
pub fn grid_unit(pinst: &PartitionInstance) -> f64 {
    let facilities: BTreeSet<usize> = pinst.pools.iter().flatten().copied().collect();
    let mut unit = f64::INFINITY;
    for &c in &pinst.clients.clients {
        for &f in &facilities {
            let d = pinst.instance.dist(c, f);
            if d > 0.0 && d < unit {
                unit = d;
            }
        }
    }
    if unit.is_finite() { unit } else { 1.0 }
}

/// Distinct `(Π, radius)` options of one pool, in a fixed order.
pub fn pool_guesses(pinst: &PartitionInstance, pool: &[usize], grid: &RadiusGrid, space: GuessSpace) -> Vec<PoolGuess> {
    let inst = pinst.instance;
    let mut pairs: Vec<(usize, Radius)> = Vec::new();
    match space {
        GuessSpace::Anchored => {
            for &f in pool {
                let mut best: Option<(usize, f64)> = None;
                for &c in &pinst.clients.clients {
                    let d = inst.dist(c, f);
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((c, d));
                    }
                }
                if let Some((c, d)) = best {
                    pairs.push((c, grid.bucket(d)));
                }
            }
        }
        GuessSpace::Full => {
            for &c in &pinst.clients.clients {
                let mut radii = BTreeSet::new();
                for &f in pool {
                    let d = inst.dist(c, f);
                    radii.insert(grid.bucket(d));
                    if d <= grid.unit {
                        radii.insert(Radius::Exp(0));
                    }
                }
                pairs.extend(radii.into_iter().map(|r| (c, r)));
            }
        }
    }
    let mut out: Vec<PoolGuess> = Vec::new();
    for (leader, radius) in pairs {
        let candidates = candidate_set(inst, pool, leader, radius, grid);
        if candidates.is_empty() || out.iter().any(|g| g.radius == radius && g.candidates == candidates) {
            continue;
        }
        out.push(PoolGuess { leader, radius, lambda: grid.lambda(radius), candidates });
    }
    out.sort_by(|a, b| a.radius.cmp(&b.radius).then_with(|| a.candidates.cmp(&b.candidates)));
    out
}

/// Runs the guess enumeration and returns the cheapest selection (by cost
/// over the weighted clients; ties go to the earliest guess).
///
/// A guess is skipped when `cost(C', ∪Π_j)` already exceeds the best cost
/// found, since every one-per-pool selection lies inside `∪Π_j`.
pub fn solve_kmed_kpm(
    pinst: &PartitionInstance,
    eps_prime: f64,
    selector: &dyn CandidateSelector,
    space: GuessSpace,
) -> Result<KpmOutcome> {
    if eps_prime.is_nan() || eps_prime <= 0.0 {
        return Err(Error::InvalidParameter(format!("eps' must be positive, got {eps_prime}")));
    }
    if pinst.pools.is_empty() || pinst.pools.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidInstance("every pool needs at least one facility".into()));
    }
    let instance = pinst.instance;
    let eta = eta_for(instance.objective(), eps_prime);
    let grid = RadiusGrid::new(eta, grid_unit(pinst))?;
    let options: Vec<Vec<PoolGuess>> = pinst
        .pools
        .iter()
        .map(|pool| pool_guesses(pinst, pool, &grid, space))
        .collect();
    let total = options
        .iter()
        .fold(1u128, |acc, o| acc.saturating_mul(o.len() as u128));
    if total > GUESS_CAP {
        return Err(Error::CapExceeded {
            what: "leader/radius guesses",
            size: total,
            cap: GUESS_CAP,
            hint: " (use the anchored guess space)",
        });
    }

    let incumbent = AtomicU64::new(f64::INFINITY.to_bits());
    let clients = pinst.clients;
    let evaluate = |index: usize| -> Result<Option<(f64, usize, Vec<usize>)>> {
        let mut rest = index;
        let mut picked: Vec<&PoolGuess> = vec![&options[0][0]; options.len()];
        for j in (0..options.len()).rev() {
            picked[j] = &options[j][rest % options[j].len()];
            rest /= options[j].len();
        }
        let mut union: Vec<usize> = picked.iter().flat_map(|g| g.candidates.iter().copied()).collect();
        union.sort_unstable();
        union.dedup();
        let bound = cost_unchecked(instance, &union, Some(clients));
        if bound > f64::from_bits(incumbent.load(AtomicOrdering::Relaxed)) {
            return Ok(None);
        }
        let ext = FictitiousExtension::new(
            picked.iter().map(|g| g.candidates.clone()).collect(),
            picked.iter().map(|g| g.lambda).collect(),
        );
        let oracle = selector
            .uses_improv()
            .then(|| ImprovOracle::new(&ext, instance, clients));
        let Some(mut set) = selector.select(&ext.candidates, oracle.as_ref())? else {
            return Ok(None);
        };
        set.sort_unstable();
        let cost = cost_unchecked(instance, &set, Some(clients));
        incumbent.fetch_min(cost.to_bits(), AtomicOrdering::Relaxed);
        Ok(Some((cost, index, set)))
    };
    let better = |a: &(f64, usize, Vec<usize>), b: &(f64, usize, Vec<usize>)| {
        a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)) == Ordering::Less
    };
    type Best = Option<(f64, usize, Vec<usize>)>;
    let best: Best = (0..total as usize)
        .into_par_iter()
        .try_fold(
            || None,
            |acc: Best, index| -> Result<Best> {
                Ok(match (acc, evaluate(index)?) {
                    (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
                    (a, b) => a.or(b),
                })
            },
        )
        .try_reduce(
            || None,
            |a, b| -> Result<Best> {
                Ok(match (a, b) {
                    (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
                    (a, b) => a.or(b),
                })
            },
        )?;
    let (client_cost, _, facilities) =
        best.ok_or_else(|| Error::InvalidInstance("no guess admits distinct representatives".into()))?;
    Ok(KpmOutcome { facilities, client_cost, eta, guesses: total })
}
