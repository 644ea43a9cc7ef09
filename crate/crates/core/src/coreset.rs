//! Sensitivity-sampling coresets.
//!
//! A bicriteria set of `2k` client centers is seeded by `D^z` sampling; each
//! client's sensitivity is `w_c d(c,A)^z / cost_z(A) + w_c / W(cluster(c))`.
//! `m` clients are then drawn with probability proportional to sensitivity and
//! reweighted by `Σs / (m s(c)) · w_c`; repeated draws are merged.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{MetricInstance, Objective, Space};

/// Weighted subset of an instance's clients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedClientSet {
    /// Client ids, ascending and distinct.
    pub clients: Vec<usize>,
    pub weights: Vec<f64>,
    pub nu: f64,
    pub delta: f64,
    pub seed: u64,
}

impl WeightedClientSet {
    pub fn len(&self) -> usize {
        self.clients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clients.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.clients.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Every client with its own weight; costs over it equal full costs exactly.
pub fn passthrough(instance: &MetricInstance) -> WeightedClientSet {
    WeightedClientSet {
        clients: (0..instance.num_clients()).collect(),
        weights: instance.weights().to_vec(),
        nu: 0.0,
        delta: 0.0,
        seed: 0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoresetConfig {
    pub c0: f64,
}

impl Default for CoresetConfig {
    fn default() -> Self {
        CoresetConfig { c0: 20.0 }
    }
}

/// Dimension term of the size bound: the coordinate dimension, or
/// `ceil(log2 |U|)` for explicit matrices.
pub fn size_dimension(instance: &MetricInstance) -> usize {
    match instance.space() {
        Space::Euclidean { dim, .. } => *dim,
        Space::Matrix { n, .. } => ((*n as f64).log2().ceil() as usize).max(1),
    }
}

/// `ceil(c0 k D / ν²)` for median, `ceil(c0 k D³ / ν⁴)` for means.
pub fn coreset_size(instance: &MetricInstance, k: usize, nu: f64, config: &CoresetConfig) -> usize {
    let d = size_dimension(instance) as f64;
    let m = match instance.objective() {
        Objective::Median => config.c0 * k as f64 * d / (nu * nu),
        Objective::Means => config.c0 * k as f64 * d.powi(3) / nu.powi(4),
    };
    if m >= usize::MAX as f64 { usize::MAX } else { m.ceil() as usize }
}

pub fn build_coreset(instance: &MetricInstance, k: usize, nu: f64, delta: f64, seed: u64) -> Result<WeightedClientSet> {
    build_coreset_with(instance, k, nu, delta, seed, &CoresetConfig::default())
}

pub fn build_coreset_with(
    instance: &MetricInstance,
    k: usize,
    nu: f64,
    delta: f64,
    seed: u64,
    config: &CoresetConfig,
) -> Result<WeightedClientSet> {
    if !(nu > 0.0 && nu <= 0.5) {
        return Err(Error::InvalidParameter(format!("nu = {nu} outside (0, 1/2]")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1/2)")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let n = instance.num_clients();
    let m = coreset_size(instance, k, nu, config);
    if m >= n {
        return Ok(WeightedClientSet { nu, delta, seed, ..passthrough(instance) });
    }

    let z = instance.objective();
    let w = instance.weights();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // D^z seeding of 2k centers among the clients.
    let mut assign = vec![0usize; n];
    let mut dz = vec![f64::INFINITY; n];
    let first = WeightedIndex::new(w).expect("weights are positive").sample(&mut rng);
    let mut centers = vec![first];
    let absorb = |center: usize, idx: usize, assign: &mut [usize], dz: &mut [f64]| {
        for c in 0..n {
            let d = z.apply(instance.client_dist(c, center));
            if d < dz[c] {
                dz[c] = d;
                assign[c] = idx;
            }
        }
    };
    absorb(first, 0, &mut assign, &mut dz);
    while centers.len() < 2 * k {
        let mass: Vec<f64> = (0..n).map(|c| w[c] * dz[c]).collect();
        let Ok(dist) = WeightedIndex::new(&mass) else { break };
        let next = dist.sample(&mut rng);
        centers.push(next);
        absorb(next, centers.len() - 1, &mut assign, &mut dz);
    }

    let cost: f64 = (0..n).map(|c| w[c] * dz[c]).sum();
    let mut cluster_weight = vec![0.0; centers.len()];
    for c in 0..n {
        cluster_weight[assign[c]] += w[c];
    }
    let sens: Vec<f64> = (0..n)
        .map(|c| {
            let spread = if cost > 0.0 { w[c] * dz[c] / cost } else { 0.0 };
            spread + w[c] / cluster_weight[assign[c]]
        })
        .collect();
    let total: f64 = sens.iter().sum();
    let dist = WeightedIndex::new(&sens).expect("sensitivities are positive");
    let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
    for _ in 0..m {
        let c = dist.sample(&mut rng);
        *merged.entry(c).or_insert(0.0) += total / (m as f64 * sens[c]) * w[c];
    }
    let (clients, weights) = merged.into_iter().unzip();
    Ok(WeightedClientSet { clients, weights, nu, delta, seed })
}
