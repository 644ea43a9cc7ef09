//! Brute-force ground truth for desk-scale instances. Nothing here reuses the
//! solvers' enumeration code; only the cost function is shared.

use rayon::prelude::*;

use crate::coreset::WeightedClientSet;
use crate::error::{Error, Result};
use crate::fpt::FictitiousExtension;
use crate::groups::{FacilityClass, GroupSystem, Requirements};
use crate::metric::{evaluate_cost, MetricInstance};
use crate::solution::Solution;

/// Default cap on enumerated subsets / multisets / selections.
pub const ORACLE_CAP: u128 = 10_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn covers(set: &[usize], groups: &GroupSystem, req: &Requirements) -> bool {
    (0..groups.t()).all(|g| {
        let hits = set.iter().filter(|&&f| (groups.signature(f).0 >> g) & 1 == 1).count();
        hits >= req.r[g] as usize
    })
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum-cost requirement-satisfying `k`-subset by full enumeration;
/// `None` exactly when no `k`-subset satisfies the requirements.
pub fn exact_divkmed(
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    cap: u128,
) -> Result<Option<Solution>> {
    let n = instance.num_facilities();
    let k = req.k;
    let count = binomial(n, k);
    if count > cap {
        return Err(Error::CapExceeded { what: "k-subsets", size: count, cap, hint: "" });
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} with {n} facilities")));
    }
    // Split the search by the smallest element.
    let best = (0..=n - k)
        .into_par_iter()
        .map(|first| -> Result<Option<(f64, Vec<usize>)>> {
            let mut best: Option<(f64, Vec<usize>)> = None;
            let mut rest: Vec<usize> = (0..k - 1).collect();
            let m = n - first - 1;
            loop {
                let set: Vec<usize> = std::iter::once(first).chain(rest.iter().map(|&i| first + 1 + i)).collect();
                if covers(&set, groups, req) {
                    let cost = evaluate_cost(instance, &set, None)?;
                    if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                        best = Some((cost, set));
                    }
                }
                if k == 1 || !next_combination(&mut rest, m) {
                    break;
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(f64, Vec<usize>)>, x| match acc {
            Some(a) if a.0 <= x.0 => Some(a),
            _ => Some(x),
        });
    match best {
        Some((_, set)) => Ok(Some(Solution::evaluate(instance, groups, req, set, "oracle", k)?)),
        None => Ok(None),
    }
}

/// All `k`-multisets of classes within the frequency caps whose signature
/// sum meets `r`, as multiplicity vectors.
pub fn exact_feasible_multisets(classes: &[FacilityClass], req: &Requirements, cap: u128) -> Result<Vec<Vec<u32>>> {
    let k = req.k;
    if classes.is_empty() {
        return Ok(Vec::new());
    }
    let bounds: Vec<usize> = classes.iter().map(|c| c.members.len().min(k)).collect();
    let boxed = bounds.iter().fold(1u128, |a, &b| a.saturating_mul(b as u128 + 1));
    if boxed > cap {
        return Err(Error::CapExceeded { what: "multiplicity box", size: boxed, cap, hint: "" });
    }
    let mut out = Vec::new();
    let mut m = vec![0usize; classes.len()];
    loop {
        if m.iter().sum::<usize>() == k {
            let ok = (0..req.r.len()).all(|g| {
                let total: usize = m
                    .iter()
                    .zip(classes)
                    .filter(|(_, c)| (c.signature.0 >> g) & 1 == 1)
                    .map(|(&x, _)| x)
                    .sum();
                total >= req.r[g] as usize
            });
            if ok {
                out.push(m.iter().map(|&x| x as u32).collect());
            }
        }
        let mut i = 0;
        loop {
            if i == m.len() {
                return Ok(out);
            }
            if m[i] < bounds[i] {
                m[i] += 1;
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// True maximizer of `cost(C', F') - cost(C', F' ∪ S)` over selections with
/// one distinct facility per candidate set, evaluated straight from the
/// extended distances. Ties keep the first selection in pool order.
pub fn exact_submodular_max(
    ext: &FictitiousExtension,
    instance: &MetricInstance,
    clients: &WeightedClientSet,
    cap: u128,
) -> Result<Option<(Vec<usize>, f64)>> {
    let sizes: Vec<usize> = ext.candidates.iter().map(|p| p.len()).collect();
    let product = sizes.iter().fold(1u128, |a, &b| a.saturating_mul(b as u128));
    if product > cap {
        return Err(Error::CapExceeded { what: "candidate product", size: product, cap, hint: "" });
    }
    if product == 0 {
        return Ok(None);
    }
    let z = instance.objective();
    let fict: Vec<f64> = clients
        .clients
        .iter()
        .map(|&c| (0..ext.k()).map(|j| ext.to_client(instance, j, c)).fold(f64::INFINITY, f64::min))
        .collect();
    let base: f64 = clients.weights.iter().zip(&fict).map(|(w, &d)| w * z.apply(d)).sum();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut idx = vec![0usize; sizes.len()];
    loop {
        let sel: Vec<usize> = idx.iter().enumerate().map(|(j, &i)| ext.candidates[j][i]).collect();
        let mut uniq = sel.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() == sel.len() {
            let with: f64 = clients
                .clients
                .iter()
                .zip(&clients.weights)
                .zip(&fict)
                .map(|((&c, w), &df)| {
                    let d = sel.iter().map(|&f| instance.dist(c, f)).fold(df, f64::min);
                    w * z.apply(d)
                })
                .sum();
            let value = base - with;
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((sel, value));
            }
        }
        let mut j = sizes.len();
        loop {
            if j == 0 {
                return Ok(best);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < sizes[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}
