//! Synthetic Gaussian-blob instances with overlapping groups.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::io::GroupsFile;

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticParams {
    pub n: usize,
    pub dim: usize,
    pub blobs: usize,
    pub t: usize,
    pub k: usize,
    /// Requirement vector written to the groups file; zeros when `None`.
    pub r: Option<Vec<u32>>,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams { n: 1000, dim: 2, blobs: 4, t: 4, k: 4, r: None, sigma: 0.05, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticInstance {
    pub points: Vec<Vec<f64>>,
    pub groups: GroupsFile,
}

/// Blob centers are uniform in the unit box; points are split evenly across
/// blobs (earlier blobs take the remainder) with Gaussian noise `σ`. Each
/// point joins `g ~ U[1, max(1, ⌊t/2⌋)]` distinct groups.
pub fn generate_synthetic(p: &SyntheticParams) -> Result<SyntheticInstance> {
    if p.t < 2 {
        return Err(Error::InvalidParameter("t must be at least 2".into()));
    }
    if p.n < p.k || p.k == 0 {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {}, n = {}", p.k, p.n)));
    }
    if p.dim == 0 || p.blobs == 0 || p.t > crate::groups::MAX_GROUPS {
        return Err(Error::InvalidParameter("dim, blobs must be positive and t <= 64".into()));
    }
    if !(p.sigma >= 0.0 && p.sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma = {}", p.sigma)));
    }
    let r = p.r.clone().unwrap_or_else(|| vec![0; p.t]);
    if r.len() != p.t {
        return Err(Error::InvalidParameter(format!("r has {} entries for t = {}", r.len(), p.t)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let centers: Vec<Vec<f64>> = (0..p.blobs)
        .map(|_| (0..p.dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let noise = Normal::new(0.0, p.sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let base = p.n / p.blobs;
    let extra = p.n % p.blobs;
    let mut points = Vec::with_capacity(p.n);
    for (b, center) in centers.iter().enumerate() {
        let size = base + usize::from(b < extra);
        for _ in 0..size {
            points.push(center.iter().map(|&c| c + noise.sample(&mut rng)).collect());
        }
    }
    let max_g = (p.t / 2).max(1);
    let mut groups = vec![Vec::new(); p.t];
    for i in 0..p.n {
        let g = rng.random_range(1..=max_g);
        let mut chosen = sample(&mut rng, p.t, g).into_vec();
        chosen.sort_unstable();
        for gid in chosen {
            groups[gid].push(i);
        }
    }
    Ok(SyntheticInstance { points, groups: GroupsFile { t: p.t, groups, r, k: p.k } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let p = SyntheticParams { n: 200, seed: 5, ..SyntheticParams::default() };
        assert_eq!(generate_synthetic(&p).unwrap(), generate_synthetic(&p).unwrap());
        let q = SyntheticParams { seed: 6, ..p.clone() };
        assert_ne!(generate_synthetic(&p).unwrap(), generate_synthetic(&q).unwrap());
    }

    #[test]
    fn two_groups_means_exactly_one_each() {
        let p = SyntheticParams { n: 300, t: 2, ..SyntheticParams::default() };
        let inst = generate_synthetic(&p).unwrap();
        let mut count = vec![0; 300];
        for g in &inst.groups.groups {
            for &i in g {
                count[i] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1));
    }

    #[test]
    fn membership_range_for_six_groups() {
        let p = SyntheticParams { n: 1000, t: 6, ..SyntheticParams::default() };
        let inst = generate_synthetic(&p).unwrap();
        let mut count = vec![0usize; 1000];
        for g in &inst.groups.groups {
            for &i in g {
                count[i] += 1;
            }
        }
        let seen: std::collections::BTreeSet<usize> = count.into_iter().collect();
        assert_eq!(seen, [1, 2, 3].into_iter().collect());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_synthetic(&SyntheticParams { t: 1, ..SyntheticParams::default() }).is_err());
        assert!(generate_synthetic(&SyntheticParams { n: 3, k: 4, ..SyntheticParams::default() }).is_err());
    }
}
