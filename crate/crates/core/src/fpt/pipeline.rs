//! Div-k-Med / Div-k-Means by pattern enumeration: one k-Med-k-PM instance
//! per feasible constraint pattern, solved over a coreset.

use crate::coreset::{build_coreset_with, passthrough, CoresetConfig, WeightedClientSet};
use crate::error::{Error, Result};
use crate::feasibility::enumerate_feasible_patterns;
use crate::groups::{partition_classes, GroupSystem, Requirements};
use crate::metric::{cost_unchecked, MetricInstance};
use crate::solution::Solution;

use super::pm::{solve_kmed_kpm, GuessSpace, PartitionInstance};
use super::submodular::{selector_registry, ArbitrarySelector, CandidateSelector};

#[derive(Clone, Debug, PartialEq)]
pub enum CoresetMode {
    Sample(CoresetConfig),
    Passthrough,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FptConfig {
    /// Selector name: `exact` or `greedy`.
    pub mode: String,
    pub guess_space: GuessSpace,
    pub coreset: CoresetMode,
    pub delta: f64,
    pub seed: u64,
}

impl Default for FptConfig {
    fn default() -> Self {
        FptConfig {
            mode: "exact".into(),
            guess_space: GuessSpace::Anchored,
            coreset: CoresetMode::Sample(CoresetConfig::default()),
            delta: 0.1,
            seed: 0,
        }
    }
}

fn client_set(instance: &MetricInstance, k: usize, eps: f64, config: &FptConfig) -> Result<WeightedClientSet> {
    match &config.coreset {
        CoresetMode::Passthrough => Ok(passthrough(instance)),
        CoresetMode::Sample(cfg) => build_coreset_with(instance, k, eps / 16.0, config.delta, config.seed, cfg),
    }
}

fn run(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    eps: f64,
    selector: &dyn CandidateSelector,
    config: &FptConfig,
    tag: &str,
) -> Result<Solution> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon = {eps} outside (0, 1/2]")));
    }
    if groups.num_facilities() != instance.num_facilities() {
        return Err(Error::InvalidInstance("group system and instance disagree on |F|".into()));
    }
    req.validate(groups)?;
    let classes = partition_classes(groups);
    let patterns = enumerate_feasible_patterns(&classes, req);
    if patterns.is_empty() {
        return Err(Error::Infeasible);
    }
    let clients = client_set(instance, req.k, eps, config)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for pattern in &patterns {
        let pools = pattern
            .class_sequence()
            .into_iter()
            .map(|c| classes[c].members.clone())
            .collect();
        let pinst = PartitionInstance { instance, pools, clients: &clients };
        let out = solve_kmed_kpm(&pinst, eps / 4.0, selector, config.guess_space)?;
        let full = cost_unchecked(instance, &out.facilities, None);
        if best.as_ref().is_none_or(|(b, _)| full < *b) {
            best = Some((full, out.facilities));
        }
    }
    let (_, facilities) = best.expect("at least one pattern");
    let sol = Solution::evaluate(instance, groups, req, facilities, tag, req.k)?;
    debug_assert!(sol.feasible && sol.size() == req.k);
    Ok(sol)
}

/// Pattern enumeration with `improv` maximization (`config.mode`), coreset
/// distortion `ε/16` and partition accuracy `ε/4`.
pub fn solve_divkmed_fpt(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    eps: f64,
    config: &FptConfig,
) -> Result<Solution> {
    let registry = selector_registry();
    let selector = registry.get(&config.mode)?;
    run(instance, groups, req, eps, selector, config, &format!("fpt-{}", config.mode))
}

/// The same pipeline with a lowest-id pick from every candidate set.
pub fn solve_divkmed_3apx(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    eps: f64,
    config: &FptConfig,
) -> Result<Solution> {
    run(instance, groups, req, eps, &ArbitrarySelector, config, "fpt3")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Signature;
    use crate::metric::Objective;

    fn passthrough_config(mode: &str) -> FptConfig {
        FptConfig { mode: mode.into(), coreset: CoresetMode::Passthrough, ..FptConfig::default() }
    }

    #[test]
    fn every_point_its_own_center() {
        let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Median).unwrap();
        let groups = GroupSystem::new(1, vec![Signature(1); 5]).unwrap();
        let req = Requirements::new(vec![0], 5).unwrap();
        let sol = solve_divkmed_3apx(&inst, &groups, &req, 0.5, &passthrough_config("exact")).unwrap();
        assert_eq!(sol.cost, 0.0);
        assert_eq!(sol.size(), 5);
    }

    #[test]
    fn infeasible_requirements_error() {
        let pts: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Median).unwrap();
        let sigs = ["10", "10", "10", "01"].iter().map(|b| Signature::parse(b).unwrap()).collect();
        let groups = GroupSystem::new(2, sigs).unwrap();
        let req = Requirements::new(vec![0, 2], 2).unwrap();
        let err = solve_divkmed_fpt(&inst, &groups, &req, 0.5, &FptConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Infeasible));
    }

    #[test]
    fn output_meets_requirements_with_k_facilities() {
        let pts: Vec<Vec<f64>> = (0..8).map(|i| vec![(i % 4) as f64, (i / 4) as f64 * 3.0]).collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Median).unwrap();
        let sigs = ["10", "10", "01", "11", "00", "01", "10", "00"]
            .iter()
            .map(|b| Signature::parse(b).unwrap())
            .collect();
        let groups = GroupSystem::new(2, sigs).unwrap();
        let req = Requirements::new(vec![1, 2], 3).unwrap();
        for mode in ["exact", "greedy"] {
            let sol = solve_divkmed_fpt(&inst, &groups, &req, 0.5, &passthrough_config(mode)).unwrap();
            assert!(sol.feasible);
            assert_eq!(sol.size(), 3);
            assert_eq!(sol.algorithm, format!("fpt-{mode}"));
        }
        assert!(solve_divkmed_fpt(&inst, &groups, &req, 0.75, &FptConfig::default()).is_err());
    }
}
