//! Runtime-selectable solvers and the ζ* / k* reporting scheme.

use serde::Serialize;

use crate::compose::{bicriteria_2k, cost_ratio, ClusteringAlg};
use crate::error::Result;
use crate::feasibility::feasibility_registry;
use crate::fpt::{solve_divkmed_3apx, solve_divkmed_fpt, CoresetMode, FptConfig, GuessSpace};
use crate::groups::{GroupSystem, Requirements};
use crate::heuristics::{
    cheaper, kmeanspp_baseline, local_search_ls0, local_search_ls1, LocalSearchParams, PatternSource,
    BASELINE_RESTARTS,
};
use crate::metric::{MetricInstance, Objective};
use crate::registry::Registry;
use crate::seed::derive_seed;
use crate::solution::Solution;

/// Knobs shared by all solvers; each reads the ones it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub epsilon: f64,
    pub seed: u64,
    /// `exact` or `greedy` improv maximization.
    pub fpt_mode: String,
    pub guess_space: GuessSpace,
    pub coreset: CoresetMode,
    /// Feasibility engine for the bicriteria union.
    pub engine: String,
    /// Clustering half of the bicriteria union; `None` uses the objective's baseline.
    pub clustering: Option<ClusteringAlg>,
    pub pattern_source: PatternSource,
    pub local_search: LocalSearchParams,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            epsilon: 0.5,
            seed: 0,
            fpt_mode: "exact".into(),
            guess_space: GuessSpace::Anchored,
            coreset: FptConfig::default().coreset,
            engine: "dp".into(),
            clustering: None,
            pattern_source: PatternSource::Es,
            local_search: LocalSearchParams::default(),
        }
    }
}

impl SolveConfig {
    fn fpt(&self) -> FptConfig {
        FptConfig {
            mode: self.fpt_mode.clone(),
            guess_space: self.guess_space,
            coreset: self.coreset.clone(),
            delta: 0.1,
            seed: self.seed,
        }
    }
}

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, instance: &MetricInstance, groups: &GroupSystem, req: &Requirements, cfg: &SolveConfig) -> Result<Solution>;
}

/// Baseline clustering of an objective: LS0 for median, k-means++ for means.
pub fn baseline_for(objective: Objective) -> ClusteringAlg {
    match objective {
        Objective::Median => ClusteringAlg::Ls0,
        Objective::Means => ClusteringAlg::Kmpp,
    }
}

struct Fpt;
struct Fpt3;
struct Ls1;
struct Bicriteria;
struct Ls0;
struct Kmpp;

impl Solver for Fpt {
    fn name(&self) -> &'static str {
        "fpt"
    }
    fn solve(&self, i: &MetricInstance, g: &GroupSystem, r: &Requirements, cfg: &SolveConfig) -> Result<Solution> {
        solve_divkmed_fpt(i, g, r, cfg.epsilon, &cfg.fpt())
    }
}

impl Solver for Fpt3 {
    fn name(&self) -> &'static str {
        "fpt3"
    }
    fn solve(&self, i: &MetricInstance, g: &GroupSystem, r: &Requirements, cfg: &SolveConfig) -> Result<Solution> {
        solve_divkmed_3apx(i, g, r, cfg.epsilon, &cfg.fpt())
    }
}

impl Solver for Ls1 {
    fn name(&self) -> &'static str {
        "ls1"
    }
    fn solve(&self, i: &MetricInstance, g: &GroupSystem, r: &Requirements, cfg: &SolveConfig) -> Result<Solution> {
        local_search_ls1(i, g, r, cfg.seed, cfg.pattern_source, &cfg.local_search)?.to_solution(i, g, r, "ls1", r.k)
    }
}

impl Solver for Bicriteria {
    fn name(&self) -> &'static str {
        "bicriteria"
    }
    fn solve(&self, i: &MetricInstance, g: &GroupSystem, r: &Requirements, cfg: &SolveConfig) -> Result<Solution> {
        let engines = feasibility_registry();
        let clustering = cfg.clustering.unwrap_or(baseline_for(i.objective()));
        let out = bicriteria_2k(i, g, r, clustering, engines.get(&cfg.engine)?, cfg.seed)?;
        let mut sol = out.solution;
        if let Some(engine) = out.engine {
            sol = sol.with_flag(format!("engine={engine}"));
        }
        Ok(sol)
    }
}

impl Solver for Ls0 {
    fn name(&self) -> &'static str {
        "ls0"
    }
    fn solve(&self, i: &MetricInstance, g: &GroupSystem, r: &Requirements, cfg: &SolveConfig) -> Result<Solution> {
        let mut best = None;
        for run in 0..BASELINE_RESTARTS {
            let res = local_search_ls0(i, r.k, &cfg.local_search, derive_seed(cfg.seed, run))?;
            best = Some(match best {
                Some(b) => cheaper(b, res),
                None => res,
            });
        }
        best.expect("restarts").to_solution(i, g, r, "ls0", r.k)
    }
}

impl Solver for Kmpp {
    fn name(&self) -> &'static str {
        "kmpp"
    }
    fn solve(&self, i: &MetricInstance, g: &GroupSystem, r: &Requirements, cfg: &SolveConfig) -> Result<Solution> {
        kmeanspp_baseline(i, r.k, cfg.seed)?.to_solution(i, g, r, "kmpp", r.k)
    }
}

/// Solvers under their CLI names.
pub fn solver_registry() -> Registry<dyn Solver> {
    let mut reg: Registry<dyn Solver> = Registry::new("algorithm");
    reg.register("fpt", Box::new(Fpt))
        .register("fpt3", Box::new(Fpt3))
        .register("ls1", Box::new(Ls1))
        .register("bicriteria", Box::new(Bicriteria))
        .register("ls0", Box::new(Ls0))
        .register("kmpp", Box::new(Kmpp));
    reg
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub solution: Solution,
    /// Cost of the unconstrained baseline with the same seed.
    pub baseline_cost: f64,
    /// `cost / baseline_cost`.
    pub zeta_star: f64,
    /// Number of facilities returned.
    pub k_star: usize,
}

/// Runs the named solver and reports its cost against the baseline.
pub fn run_solver(
    name: &str,
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    cfg: &SolveConfig,
) -> Result<SolveReport> {
    let registry = solver_registry();
    let solution = registry.get(name)?.solve(instance, groups, req, cfg)?;
    let (_, baseline_cost) = baseline_for(instance.objective()).baseline(instance, req.k, cfg.seed)?;
    Ok(SolveReport {
        zeta_star: cost_ratio(solution.cost, baseline_cost),
        k_star: solution.size(),
        baseline_cost,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Signature;

    #[test]
    fn every_registered_solver_runs() {
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![(i % 5) as f64, (i / 5) as f64]).collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Median).unwrap();
        let sigs = ["10", "01", "11", "00", "10", "01", "00", "10", "01", "11"]
            .iter()
            .map(|b| Signature::parse(b).unwrap())
            .collect();
        let groups = GroupSystem::new(2, sigs).unwrap();
        let req = Requirements::new(vec![1, 2], 3).unwrap();
        let cfg = SolveConfig { coreset: CoresetMode::Passthrough, ..SolveConfig::default() };
        for name in solver_registry().names() {
            let rep = run_solver(name, &inst, &groups, &req, &cfg).unwrap();
            assert!(rep.k_star <= 2 * req.k, "{name}");
            if name == "bicriteria" {
                assert!(rep.zeta_star <= 1.0);
            }
            if !matches!(name, "ls0" | "kmpp") {
                assert!(req.satisfied_by(&rep.solution.coverage), "{name}");
            }
        }
        assert!(run_solver("nope", &inst, &groups, &req, &cfg).is_err());
    }
}
