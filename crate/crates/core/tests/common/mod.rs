#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divclust::coreset::WeightedClientSet;
use divclust::fpt::FictitiousExtension;
use divclust::{GroupSystem, MetricInstance, Objective, Signature, Space};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in the unit square; the first `nf` are facilities, the
/// next `nc` clients.
pub fn split_instance(rng: &mut ChaCha8Rng, nf: usize, nc: usize, objective: Objective) -> MetricInstance {
    let pts: Vec<Vec<f64>> = (0..nf + nc).map(|_| vec![rng.random(), rng.random()]).collect();
    let space = Space::euclidean(&pts).unwrap();
    MetricInstance::new(space, (nf..nf + nc).collect(), (0..nf).collect(), objective).unwrap()
}

/// Each facility joins each of the `t` groups independently with probability `p`.
pub fn random_groups(rng: &mut ChaCha8Rng, nf: usize, t: usize, p: f64) -> GroupSystem {
    let sigs = (0..nf)
        .map(|_| {
            let mut bits = 0u64;
            for g in 0..t {
                if rng.random_bool(p) {
                    bits |= 1 << g;
                }
            }
            Signature(bits)
        })
        .collect();
    GroupSystem::new(t, sigs).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

/// Candidate sets the way the solver builds them: a leader client, a radius
/// reaching at least one pool member, and every pool member inside it.
pub fn ball_extension(rng: &mut ChaCha8Rng, instance: &MetricInstance, pools: &[Vec<usize>]) -> FictitiousExtension {
    let mut candidates = Vec::new();
    let mut lambdas = Vec::new();
    for pool in pools {
        let leader = rng.random_range(0..instance.num_clients());
        let anchor = pool[rng.random_range(0..pool.len())];
        let lambda = instance.dist(leader, anchor) * rng.random_range(1.0..1.6);
        let members: Vec<usize> = pool.iter().copied().filter(|&f| instance.dist(leader, f) <= lambda).collect();
        candidates.push(members);
        lambdas.push(lambda);
    }
    FictitiousExtension::new(candidates, lambdas)
}

/// `cost(C', F') - cost(C', F' ∪ S)` straight from the definition.
pub fn brute_improv(
    ext: &FictitiousExtension,
    instance: &MetricInstance,
    clients: &WeightedClientSet,
    set: &[usize],
) -> f64 {
    let z = instance.objective();
    let mut before = 0.0;
    let mut after = 0.0;
    for (&c, &w) in clients.clients.iter().zip(&clients.weights) {
        let mut d = f64::INFINITY;
        for j in 0..ext.k() {
            let lam = 2.0 * ext.lambdas[j];
            for &f in &ext.candidates[j] {
                d = d.min(lam + instance.dist(c, f));
            }
        }
        before += w * z.apply(d);
        for &f in set {
            d = d.min(instance.dist(c, f));
        }
        after += w * z.apply(d);
    }
    before - after
}
