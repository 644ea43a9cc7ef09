//! k-means++ seeding over weighted clients (KM baseline).

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{cost_unchecked, MetricInstance};
use crate::seed::derive_seed;

use super::{cheaper, HeuristicResult, BASELINE_RESTARTS};

/// D² sampling: the first client is drawn proportionally to its weight, each
/// later one proportionally to `w_c d(c, S)²`; every drawn client opens its
/// nearest facility. When no unopened facility can be reached this way the
/// set is padded with the lowest unused ids.
pub fn kmeanspp_seed(instance: &MetricInstance, k: usize, seed: u64) -> Result<HeuristicResult> {
    let nf = instance.num_facilities();
    if k == 0 || k > nf {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={nf}")));
    }
    let all: Vec<usize> = (0..nf).collect();
    let n = instance.num_clients();
    let w = instance.weights();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open: Vec<usize> = Vec::with_capacity(k);
    let mut d2 = vec![f64::INFINITY; n];
    let mut mass: Vec<f64> = w.to_vec();
    let mut padded = false;
    while open.len() < k {
        let Ok(dist) = WeightedIndex::new(&mass) else {
            padded = true;
            break;
        };
        let c = dist.sample(&mut rng);
        let (f, _) = instance.nearest(c, &all).expect("facilities are nonempty");
        if open.contains(&f) {
            mass[c] = 0.0;
            continue;
        }
        open.push(f);
        for (i, (d, m)) in d2.iter_mut().zip(mass.iter_mut()).enumerate() {
            let x = instance.dist(i, f);
            *d = d.min(x * x);
            *m = w[i] * *d;
        }
    }
    if padded {
        open.extend((0..nf).filter(|f| !open.contains(f)).take(k - open.len()).collect::<Vec<_>>());
    }
    open.sort_unstable();
    let cost = cost_unchecked(instance, &open, None);
    Ok(HeuristicResult {
        facilities: open,
        cost,
        iterations: 0,
        trace: vec![cost],
        hit_cap: false,
        padded,
    })
}

/// Cheapest of [`BASELINE_RESTARTS`] seedings with derived seeds.
pub fn kmeanspp_baseline(instance: &MetricInstance, k: usize, seed: u64) -> Result<HeuristicResult> {
    let mut best: Option<HeuristicResult> = None;
    for r in 0..BASELINE_RESTARTS {
        let run = kmeanspp_seed(instance, k, derive_seed(seed, r))?;
        best = Some(match best {
            Some(b) => cheaper(b, run),
            None => run,
        });
    }
    Ok(best.expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Objective;

    #[test]
    fn single_center_is_a_point_of_the_data() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Means).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let r = kmeanspp_seed(&inst, 1, seed).unwrap();
            assert_eq!(r.facilities.len(), 1);
            seen.insert(r.facilities[0]);
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn identical_points_pad_and_cost_zero() {
        let pts = vec![vec![1.0, 1.0]; 5];
        let inst = MetricInstance::euclidean(&pts, Objective::Means).unwrap();
        let r = kmeanspp_seed(&inst, 3, 9).unwrap();
        assert_eq!(r.facilities.len(), 3);
        assert_eq!(r.cost, 0.0);
        assert!(r.padded);
    }

    #[test]
    fn distinct_centers_without_padding() {
        let pts: Vec<Vec<f64>> = (0..30).map(|i| vec![(i / 10) as f64 * 5.0 + (i % 10) as f64 * 0.01]).collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Means).unwrap();
        let r = kmeanspp_baseline(&inst, 3, 2).unwrap();
        assert!(!r.padded);
        let blobs: std::collections::BTreeSet<usize> = r.facilities.iter().map(|f| f / 10).collect();
        assert_eq!(blobs.len(), 3);
    }
}
