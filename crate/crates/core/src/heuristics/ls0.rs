//! Unconstrained swap local search (LS0, LS0(p)).

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{cost_unchecked, MetricInstance};
use crate::seed::derive_seed;

use super::swap::best_single_swap;
use super::{cheaper, HeuristicResult, BASELINE_RESTARTS};

#[derive(Clone, Debug, PartialEq)]
pub struct LocalSearchParams {
    /// A move is accepted only if it lowers the cost to `(1 - eps_ls / k)` of its value.
    pub eps_ls: f64,
    /// Largest number of facilities exchanged in one move.
    pub swap_size: usize,
    pub max_iterations: usize,
}

impl Default for LocalSearchParams {
    fn default() -> Self {
        LocalSearchParams { eps_ls: 0.01, swap_size: 1, max_iterations: 100_000 }
    }
}

pub(crate) fn combinations(items: &[usize], q: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], q: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < q - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, q, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, q, 0, &mut Vec::with_capacity(q), &mut out);
    out
}

/// Best move exchanging `q >= 2` facilities, by direct evaluation.
fn best_multi_swap(instance: &MetricInstance, set: &[usize], q: usize) -> Option<(f64, Vec<usize>)> {
    let outside: Vec<usize> = (0..instance.num_facilities()).filter(|f| !set.contains(f)).collect();
    let removals = combinations(set, q);
    let additions = combinations(&outside, q);
    additions
        .par_iter()
        .flat_map_iter(|add| {
            removals.iter().map(move |rem| {
                let mut next: Vec<usize> = set.iter().copied().filter(|f| !rem.contains(f)).collect();
                next.extend_from_slice(add);
                next.sort_unstable();
                (cost_unchecked(instance, &next, None), next)
            })
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
}

/// Swap local search from a uniform random `k`-subset.
pub fn local_search_ls0(
    instance: &MetricInstance,
    k: usize,
    params: &LocalSearchParams,
    seed: u64,
) -> Result<HeuristicResult> {
    let nf = instance.num_facilities();
    if k == 0 || k > nf {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={nf}")));
    }
    if params.swap_size == 0 {
        return Err(Error::InvalidParameter("swap size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set: Vec<usize> = sample(&mut rng, nf, k).into_vec();
    set.sort_unstable();
    let mut cost = cost_unchecked(instance, &set, None);
    let mut trace = vec![cost];
    let factor = 1.0 - params.eps_ls / k as f64;
    let mut hit_cap = true;
    for _ in 0..params.max_iterations {
        let mut best: Option<(f64, Vec<usize>)> = best_single_swap(instance, &set, |_, _| true).map(|s| {
            let mut next = set.clone();
            next[s.position] = s.incoming;
            next.sort_unstable();
            (s.cost, next)
        });
        for q in 2..=params.swap_size.min(k) {
            if let Some(m) = best_multi_swap(instance, &set, q) {
                if best.as_ref().is_none_or(|b| m.0 < b.0) {
                    best = Some(m);
                }
            }
        }
        let Some((predicted, next)) = best else {
            hit_cap = false;
            break;
        };
        if predicted > factor * cost {
            hit_cap = false;
            break;
        }
        let actual = cost_unchecked(instance, &next, None);
        if actual >= cost {
            hit_cap = false;
            break;
        }
        set = next;
        cost = actual;
        trace.push(cost);
    }
    Ok(HeuristicResult {
        facilities: set,
        cost,
        iterations: trace.len() - 1,
        trace,
        hit_cap,
        padded: false,
    })
}

/// Cheapest of [`BASELINE_RESTARTS`] single-swap runs with derived seeds.
pub fn ls0_baseline(instance: &MetricInstance, k: usize, seed: u64) -> Result<HeuristicResult> {
    let params = LocalSearchParams::default();
    let mut best: Option<HeuristicResult> = None;
    for r in 0..BASELINE_RESTARTS {
        let run = local_search_ls0(instance, k, &params, derive_seed(seed, r))?;
        best = Some(match best {
            Some(b) => cheaper(b, run),
            None => run,
        });
    }
    Ok(best.expect("at least one restart"))
}
