//! Bicriteria composition, the half-ball picker and best-of-pools extraction.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{select_facilities, DynamicProgram, FeasibilityEngine, Verdict};
use crate::groups::{coverage, partition_classes, GroupSystem, Requirements};
use crate::heuristics::{kmeanspp_baseline, ls0_baseline};
use crate::metric::{cost_unchecked, MetricInstance};
use crate::seed::derive_seed;
use crate::solution::Solution;

/// Unconstrained clustering used for the first half of the bicriteria union.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusteringAlg {
    #[default]
    Ls0,
    Kmpp,
}

impl std::str::FromStr for ClusteringAlg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ls0" => Ok(ClusteringAlg::Ls0),
            "kmpp" => Ok(ClusteringAlg::Kmpp),
            _ => Err(Error::InvalidParameter(format!("unknown clustering '{s}' (ls0, kmpp)"))),
        }
    }
}

impl ClusteringAlg {
    /// Five-restart baseline run of this algorithm.
    pub fn baseline(self, instance: &MetricInstance, k: usize, seed: u64) -> Result<(Vec<usize>, f64)> {
        let r = match self {
            ClusteringAlg::Ls0 => ls0_baseline(instance, k, seed)?,
            ClusteringAlg::Kmpp => kmeanspp_baseline(instance, k, seed)?,
        };
        Ok((r.facilities, r.cost))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BicriteriaOutcome {
    pub solution: Solution,
    pub cluster: Vec<usize>,
    pub cluster_cost: f64,
    /// Facilities added to meet the requirements (empty when the clustering
    /// part already does).
    pub feasible_part: Vec<usize>,
    /// Engine that produced `feasible_part`, if any ran.
    pub engine: Option<String>,
    /// `cost(S) / cost(S_cluster)`.
    pub zeta_star: f64,
    pub k_star: usize,
}

/// `cost / baseline`, with `0 / 0 = 1`.
pub fn cost_ratio(cost: f64, baseline: f64) -> f64 {
    if baseline > 0.0 {
        cost / baseline
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `S = S_cluster ∪ S_feas`: at most `2k` facilities, meets `r`, and costs no
/// more than the clustering part. An inconclusive engine falls back to the DP.
pub fn bicriteria_2k(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    clustering: ClusteringAlg,
    engine: &dyn FeasibilityEngine,
    seed: u64,
) -> Result<BicriteriaOutcome> {
    req.validate(groups)?;
    let (cluster, cluster_cost) = clustering.baseline(instance, req.k, seed)?;
    let mut feasible_part = Vec::new();
    let mut used = None;
    if !req.satisfied_by(&coverage(&cluster, groups)?) {
        let classes = partition_classes(groups);
        let mut report = engine.solve(&classes, req, seed)?;
        used = Some(engine.name().to_string());
        if let Verdict::Inconclusive(_) = report.verdict {
            report = DynamicProgram.solve(&classes, req, seed)?;
            used = Some(format!("{}->dp", engine.name()));
        }
        match report.verdict {
            Verdict::Feasible(picks) => {
                feasible_part = select_facilities(&picks, &classes, derive_seed(seed, u64::MAX))?;
            }
            Verdict::Infeasible => return Err(Error::Infeasible),
            Verdict::Inconclusive(msg) => return Err(Error::InvalidInstance(msg)),
        }
    }
    let mut all = cluster.clone();
    all.extend_from_slice(&feasible_part);
    let solution = Solution::evaluate(instance, groups, req, all, "bicriteria", 2 * req.k)?;
    assert!(solution.cost <= cluster_cost, "union must not cost more than its clustering part");
    let zeta_star = cost_ratio(solution.cost, cluster_cost);
    let k_star = solution.size();
    Ok(BicriteriaOutcome { solution, cluster, cluster_cost, feasible_part, engine: used, zeta_star, k_star })
}

/// Tolerance on `| ||p - c|| - λ |` for half-ball inputs.
pub const SPHERE_TOLERANCE: f64 = 1e-6;

/// Picks up to three of `points` (all on the sphere of radius `radius`
/// around `center`): the first point, then the first point with negative
/// inner product to it, then the first point negative to both (inner
/// products relative to `center`). Returns point indices.
pub fn halfball_pick_3(points: &[Vec<f64>], center: &[f64], radius: f64) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no facilities on the sphere".into()));
    }
    let rel: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            if p.len() != center.len() {
                return Err(Error::InvalidParameter("dimension mismatch".into()));
            }
            Ok(p.iter().zip(center).map(|(a, b)| a - b).collect())
        })
        .collect::<Result<_>>()?;
    for (i, v) in rel.iter().enumerate() {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - radius).abs() > SPHERE_TOLERANCE {
            return Err(Error::InvalidParameter(format!("point {i} is off the sphere by {}", norm - radius)));
        }
    }
    let dot = |a: usize, b: usize| rel[a].iter().zip(&rel[b]).map(|(x, y)| x * y).sum::<f64>();
    let mut picks = vec![0];
    if let Some(second) = (0..rel.len()).find(|&i| dot(i, 0) < 0.0) {
        picks.push(second);
        if let Some(third) = (0..rel.len()).find(|&i| dot(i, 0) < 0.0 && dot(i, second) < 0.0) {
            picks.push(third);
        }
    }
    Ok(picks)
}

/// Default cap on the number of one-per-pool combinations.
pub const BEST_K_CAP: u128 = 10_000_000;

/// Cheapest one-per-pool combination of distinct facilities that meets `r`;
/// if none does, the cheapest combination overall, flagged `unconstrained`.
/// Ties go to the first combination in pool order.
pub fn best_k_of_mk(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    pools: &[Vec<usize>],
    cap: u128,
) -> Result<Solution> {
    if pools.is_empty() || pools.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidParameter("pools must be nonempty".into()));
    }
    for pool in pools {
        instance.check_facilities(pool)?;
    }
    let total = pools.iter().fold(1u128, |a, p| a.saturating_mul(p.len() as u128));
    if total > cap {
        return Err(Error::CapExceeded { what: "pool combinations", size: total, cap, hint: "" });
    }
    type Pick = Option<(f64, usize, Vec<usize>)>;
    let pick_min = |a: Pick, b: Pick| match (a, b) {
        (Some(a), Some(b)) => Some(if b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)).is_lt() { b } else { a }),
        (a, b) => a.or(b),
    };
    let (feasible, any) = (0..total as usize)
        .into_par_iter()
        .filter_map(|index| {
            let mut rest = index;
            let mut combo = vec![0; pools.len()];
            for j in (0..pools.len()).rev() {
                combo[j] = pools[j][rest % pools[j].len()];
                rest /= pools[j].len();
            }
            let mut set = combo.clone();
            set.sort_unstable();
            set.dedup();
            if set.len() < combo.len() {
                return None;
            }
            let cost = cost_unchecked(instance, &set, None);
            let ok = req.satisfied_by(&coverage(&set, groups).ok()?);
            Some((ok, (cost, index, set)))
        })
        .fold(
            || (None, None),
            |(f, a): (Pick, Pick), (ok, item)| {
                let f = if ok { pick_min(f, Some(item.clone())) } else { f };
                (f, pick_min(a, Some(item)))
            },
        )
        .reduce(|| (None, None), |x, y| (pick_min(x.0, y.0), pick_min(x.1, y.1)));
    let k = pools.len();
    match (feasible, any) {
        (Some((_, _, set)), _) => Solution::evaluate(instance, groups, req, set, "best-k-of-mk", k),
        (None, Some((_, _, set))) => {
            Ok(Solution::evaluate(instance, groups, req, set, "best-k-of-mk", k)?.with_flag("unconstrained"))
        }
        (None, None) => Err(Error::InvalidInstance("pools admit no distinct combination".into())),
    }
}
