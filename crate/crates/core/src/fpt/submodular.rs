//! Choosing one facility per candidate set `Π_j`.
//!
//! Candidate sets of duplicated pools may overlap; every selector returns
//! distinct facilities, i.e. a system of distinct representatives. The
//! feasible selections are the bases of a transversal matroid.

use crate::coreset::WeightedClientSet;
use crate::error::{Error, Result};
use crate::metric::MetricInstance;
use crate::registry::Registry;

use super::extension::{FictitiousExtension, ImprovOracle};

/// Default cap on `Π_j |Π_j|` for exact enumeration.
pub const EXACT_PRODUCT_CAP: u128 = 1_000_000;

pub trait CandidateSelector: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether [`select`](Self::select) reads the `improv` oracle.
    fn uses_improv(&self) -> bool {
        true
    }

    /// One distinct facility per candidate set, listed in pool order, or
    /// `None` when no system of distinct representatives exists.
    fn select(&self, candidates: &[Vec<usize>], oracle: Option<&ImprovOracle>) -> Result<Option<Vec<usize>>>;
}

fn need<'a>(oracle: Option<&'a ImprovOracle>, who: &str) -> Result<&'a ImprovOracle> {
    oracle.ok_or_else(|| Error::InvalidParameter(format!("{who} selector needs the improv oracle")))
}

fn columns(candidates: &[Vec<usize>], oracle: &ImprovOracle) -> Vec<Vec<usize>> {
    candidates
        .iter()
        .map(|pi| {
            pi.iter()
                .map(|&f| oracle.column(f).expect("candidate missing from oracle"))
                .collect()
        })
        .collect()
}

/// Maximizer of `improv` over all one-per-set selections.
#[derive(Clone, Debug)]
pub struct ExactSelector {
    pub cap: u128,
}

impl Default for ExactSelector {
    fn default() -> Self {
        ExactSelector { cap: EXACT_PRODUCT_CAP }
    }
}

struct ExactSearch<'a> {
    oracle: &'a ImprovOracle,
    cols: Vec<Vec<usize>>,
    /// Per-depth running maxima of the gains.
    levels: Vec<Vec<f64>>,
    chosen: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl ExactSearch<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.cols.len() {
            let value: f64 = self.levels[depth].iter().sum();
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.chosen.clone()));
            }
            return;
        }
        for i in 0..self.cols[depth].len() {
            let col = self.cols[depth][i];
            if self.chosen.contains(&col) {
                continue;
            }
            let (lower, upper) = self.levels.split_at_mut(depth + 1);
            for (row, (next, &prev)) in upper[0].iter_mut().zip(&lower[depth]).enumerate() {
                *next = prev.max(self.oracle.gain(row, col));
            }
            self.chosen.push(col);
            self.run(depth + 1);
            self.chosen.pop();
        }
    }
}

impl CandidateSelector for ExactSelector {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn select(&self, candidates: &[Vec<usize>], oracle: Option<&ImprovOracle>) -> Result<Option<Vec<usize>>> {
        let oracle = need(oracle, "exact")?;
        let product = candidates
            .iter()
            .fold(1u128, |acc, pi| acc.saturating_mul(pi.len() as u128));
        if product > self.cap {
            return Err(Error::CapExceeded {
                what: "candidate product",
                size: product,
                cap: self.cap,
                hint: " (use greedy mode)",
            });
        }
        let mut search = ExactSearch {
            oracle,
            cols: columns(candidates, oracle),
            levels: vec![vec![0.0; oracle.num_clients()]; candidates.len() + 1],
            chosen: Vec::with_capacity(candidates.len()),
            best: None,
        };
        search.run(0);
        Ok(search
            .best
            .map(|(_, cols)| cols.into_iter().map(|c| oracle.facilities[c]).collect()))
    }
}

/// Matches `items` into distinct sets (`member(item, set)` tells whether an
/// item may represent a set). Returns the set of each item when every item
/// can be matched.
pub(crate) fn match_into_sets(items: &[usize], member: impl Fn(usize, usize) -> bool, sets: usize) -> Option<Vec<usize>> {
    fn augment(
        i: usize,
        items: &[usize],
        member: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for s in 0..owner.len() {
            if !seen[s] && member(items[i], s) {
                seen[s] = true;
                if owner[s].is_none_or(|o| augment(o, items, member, seen, owner)) {
                    owner[s] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; sets];
    for i in 0..items.len() {
        let mut seen = vec![false; sets];
        if !augment(i, items, &member, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut set_of = vec![0; items.len()];
    for (s, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            set_of[*i] = s;
        }
    }
    Some(set_of)
}

/// Greedy over the transversal matroid: each round adds the facility with
/// the largest marginal gain that can still be matched to a distinct set.
/// With disjoint sets this is "best gain among the unused pools".
#[derive(Clone, Debug, Default)]
pub struct GreedySelector;

impl CandidateSelector for GreedySelector {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn select(&self, candidates: &[Vec<usize>], oracle: Option<&ImprovOracle>) -> Result<Option<Vec<usize>>> {
        let oracle = need(oracle, "greedy")?;
        let k = candidates.len();
        let member = |f: usize, s: usize| candidates[s].contains(&f);
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        let mut current = vec![0.0; oracle.num_clients()];
        while chosen.len() < k {
            let mut best: Option<(usize, f64)> = None;
            for (col, &f) in oracle.facilities.iter().enumerate() {
                if chosen.contains(&f) {
                    continue;
                }
                let gain: f64 = current
                    .iter()
                    .enumerate()
                    .map(|(row, &cur)| (oracle.gain(row, col) - cur).max(0.0))
                    .sum();
                if best.is_some_and(|(_, g)| gain <= g) {
                    continue;
                }
                chosen.push(f);
                if match_into_sets(&chosen, member, k).is_some() {
                    best = Some((col, gain));
                }
                chosen.pop();
            }
            let Some((col, _)) = best else { return Ok(None) };
            for (row, cur) in current.iter_mut().enumerate() {
                *cur = cur.max(oracle.gain(row, col));
            }
            chosen.push(oracle.facilities[col]);
        }
        let set_of = match_into_sets(&chosen, member, k).expect("greedy keeps independence");
        let mut per_pool = vec![0; k];
        for (f, s) in chosen.into_iter().zip(set_of) {
            per_pool[s] = f;
        }
        Ok(Some(per_pool))
    }
}

/// Lowest-id representatives, found by backtracking in pool order.
#[derive(Clone, Debug, Default)]
pub struct ArbitrarySelector;

impl CandidateSelector for ArbitrarySelector {
    fn name(&self) -> &'static str {
        "arbitrary"
    }

    fn uses_improv(&self) -> bool {
        false
    }

    fn select(&self, candidates: &[Vec<usize>], _oracle: Option<&ImprovOracle>) -> Result<Option<Vec<usize>>> {
        fn pick(candidates: &[Vec<usize>], depth: usize, chosen: &mut Vec<usize>) -> bool {
            if depth == candidates.len() {
                return true;
            }
            let mut options = candidates[depth].clone();
            options.sort_unstable();
            for f in options {
                if !chosen.contains(&f) {
                    chosen.push(f);
                    if pick(candidates, depth + 1, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        let mut chosen = Vec::with_capacity(candidates.len());
        Ok(pick(candidates, 0, &mut chosen).then_some(chosen))
    }
}

/// Selectors under their names: `exact`, `greedy`, `arbitrary`.
pub fn selector_registry() -> Registry<dyn CandidateSelector> {
    let mut reg: Registry<dyn CandidateSelector> = Registry::new("selector");
    reg.register("exact", Box::new(ExactSelector::default()))
        .register("greedy", Box::new(GreedySelector))
        .register("arbitrary", Box::new(ArbitrarySelector));
    reg
}

/// Maximizes `improv` one-per-set with the given selector; returns the
/// selection (pool order) and its `improv` value.
pub fn maximize_improv(
    ext: &FictitiousExtension,
    instance: &MetricInstance,
    clients: &WeightedClientSet,
    selector: &dyn CandidateSelector,
) -> Result<Option<(Vec<usize>, f64)>> {
    if ext.candidates.iter().any(|pi| pi.is_empty()) {
        return Ok(None);
    }
    let oracle = ImprovOracle::new(ext, instance, clients);
    Ok(selector
        .select(&ext.candidates, Some(&oracle))?
        .map(|s| {
            let v = oracle.value(&s);
            (s, v)
        }))
}
