//! Metric instances: clients, facilities, client weights and a distance oracle.
//!
//! Clients and facilities are separate id spaces (`0..num_clients()` and
//! `0..num_facilities()`) that index into a shared set of points, so the two
//! may alias the same coordinates. The means objective keeps the metric `d`
//! and squares it only when a cost is evaluated.

use serde::{Deserialize, Serialize};

use crate::coreset::WeightedClientSet;
use crate::error::{Error, Result};

/// Default upper bound on `|C| + |F|` for which client/facility distances are cached.
pub const DEFAULT_CACHE_THRESHOLD: usize = 4096;

/// Absolute slack (scaled by the largest entry) allowed when validating explicit matrices.
pub const MATRIX_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Median,
    Means,
}

impl Objective {
    /// Per-client contribution of a distance `d`.
    #[inline]
    pub fn apply(self, d: f64) -> f64 {
        match self {
            Objective::Median => d,
            Objective::Means => d * d,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Median => "median",
            Objective::Means => "means",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(Objective::Median),
            "means" => Ok(Objective::Means),
            other => Err(Error::InvalidParameter(format!(
                "objective must be 'median' or 'means', got '{other}'"
            ))),
        }
    }
}

/// Where distances come from.
#[derive(Clone, Debug)]
pub enum Space {
    /// Row-major coordinates, `dim` values per point; distances are L2.
    Euclidean { dim: usize, coords: Vec<f64> },
    /// Explicit symmetric `n x n` matrix, row-major.
    Matrix { n: usize, data: Vec<f64> },
}

impl Space {
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::InvalidInstance("points must have at least one coordinate".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInstance(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInstance(format!("point {i} has a non-finite coordinate")));
            }
            coords.extend_from_slice(p);
        }
        Ok(Space::Euclidean { dim, coords })
    }

    /// Builds an explicit-matrix space after checking symmetry, the zero
    /// diagonal, nonnegativity and the triangle inequality.
    pub fn matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        let max = data.iter().cloned().fold(0.0_f64, f64::max);
        let tol = MATRIX_TOLERANCE * max.max(1.0);
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidInstance(format!("matrix diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let d = data[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "matrix entry ({i},{j}) = {d} is not a nonnegative real"
                    )));
                }
                if (d - data[j * n + i]).abs() > tol {
                    return Err(Error::InvalidInstance(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        for m in 0..n {
            for i in 0..n {
                let d_im = data[i * n + m];
                for j in 0..n {
                    if data[i * n + j] > d_im + data[m * n + j] + tol {
                        return Err(Error::InvalidInstance(format!(
                            "triangle inequality violated: d({i},{j}) > d({i},{m}) + d({m},{j})"
                        )));
                    }
                }
            }
        }
        Ok(Space::Matrix { n, data })
    }

    pub fn len(&self) -> usize {
        match self {
            Space::Euclidean { dim, coords } => coords.len() / dim,
            Space::Matrix { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        match self {
            Space::Euclidean { dim, coords } => {
                let pa = &coords[a * dim..(a + 1) * dim];
                let pb = &coords[b * dim..(b + 1) * dim];
                pa.iter()
                    .zip(pb)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
            Space::Matrix { n, data } => data[a * n + b],
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            Space::Euclidean { dim, .. } => Some(*dim),
            Space::Matrix { .. } => None,
        }
    }

    pub fn coords(&self, point: usize) -> Option<&[f64]> {
        match self {
            Space::Euclidean { dim, coords } => Some(&coords[point * dim..(point + 1) * dim]),
            Space::Matrix { .. } => None,
        }
    }
}

/// A clustering instance `(U, d, C, F, w)` together with its objective.
#[derive(Clone, Debug)]
pub struct MetricInstance {
    space: Space,
    clients: Vec<usize>,
    facilities: Vec<usize>,
    weights: Vec<f64>,
    objective: Objective,
    cache_threshold: usize,
    cache: Option<Vec<f64>>,
}

impl MetricInstance {
    /// General constructor: `clients` and `facilities` are point indices into `space`.
    pub fn new(
        space: Space,
        clients: Vec<usize>,
        facilities: Vec<usize>,
        objective: Objective,
    ) -> Result<Self> {
        let n = space.len();
        if clients.is_empty() {
            return Err(Error::InvalidInstance("no clients".into()));
        }
        if facilities.is_empty() {
            return Err(Error::InvalidInstance("no facilities".into()));
        }
        if let Some(&p) = clients.iter().chain(&facilities).find(|&&p| p >= n) {
            return Err(Error::UnknownId { kind: "point", id: p });
        }
        let weights = vec![1.0; clients.len()];
        let mut inst = MetricInstance {
            space,
            clients,
            facilities,
            weights,
            objective,
            cache_threshold: DEFAULT_CACHE_THRESHOLD,
            cache: None,
        };
        inst.rebuild_cache();
        Ok(inst)
    }

    /// Every point is both a client and a facility (`U = C = F`).
    pub fn aliased(space: Space, objective: Objective) -> Result<Self> {
        let ids: Vec<usize> = (0..space.len()).collect();
        Self::new(space, ids.clone(), ids, objective)
    }

    pub fn euclidean(points: &[Vec<f64>], objective: Objective) -> Result<Self> {
        Self::aliased(Space::euclidean(points)?, objective)
    }

    pub fn from_matrix(rows: &[Vec<f64>], objective: Objective) -> Result<Self> {
        Self::aliased(Space::matrix(rows)?, objective)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.clients.len() {
            return Err(Error::InvalidInstance(format!(
                "{} weights for {} clients",
                weights.len(),
                self.clients.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidInstance("client weights must be positive and finite".into()));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    /// Changes the size below which client/facility distances are precomputed.
    pub fn with_cache_threshold(mut self, threshold: usize) -> Self {
        self.cache_threshold = threshold;
        self.rebuild_cache();
        self
    }

    fn rebuild_cache(&mut self) {
        self.cache = None;
        if self.clients.len() + self.facilities.len() <= self.cache_threshold {
            let nf = self.facilities.len();
            let mut m = vec![0.0; self.clients.len() * nf];
            for (c, &pc) in self.clients.iter().enumerate() {
                for (f, &pf) in self.facilities.iter().enumerate() {
                    m[c * nf + f] = self.space.dist(pc, pf);
                }
            }
            self.cache = Some(m);
        }
    }

    /// Copy of this instance backed by an explicit matrix over its points.
    pub fn to_explicit(&self) -> Self {
        let n = self.space.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.space.dist(i, j);
            }
        }
        MetricInstance {
            space: Space::Matrix { n, data },
            clients: self.clients.clone(),
            facilities: self.facilities.clone(),
            weights: self.weights.clone(),
            objective: self.objective,
            cache_threshold: self.cache_threshold,
            cache: self.cache.clone(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn num_clients(&self) -> usize {
        self.clients.len()
    }

    pub fn num_facilities(&self) -> usize {
        self.facilities.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn client_point(&self, c: usize) -> usize {
        self.clients[c]
    }

    pub fn facility_point(&self, f: usize) -> usize {
        self.facilities[f]
    }

    /// `d(c, f)` for client `c` and facility `f`.
    #[inline]
    pub fn dist(&self, c: usize, f: usize) -> f64 {
        match &self.cache {
            Some(m) => m[c * self.facilities.len() + f],
            None => self.space.dist(self.clients[c], self.facilities[f]),
        }
    }

    #[inline]
    pub fn facility_dist(&self, f: usize, g: usize) -> f64 {
        self.space.dist(self.facilities[f], self.facilities[g])
    }

    #[inline]
    pub fn client_dist(&self, a: usize, b: usize) -> f64 {
        self.space.dist(self.clients[a], self.clients[b])
    }

    pub fn facility_coords(&self, f: usize) -> Option<&[f64]> {
        self.space.coords(self.facilities[f])
    }

    /// Closest facility of `set` to client `c`; ties go to the lowest facility id.
    pub fn nearest(&self, c: usize, set: &[usize]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &f in set {
            let d = self.dist(c, f);
            match best {
                Some((bf, bd)) if d > bd || (d == bd && f > bf) => {}
                _ => best = Some((f, d)),
            }
        }
        best
    }

    /// Ratio of the largest to the smallest positive client/facility distance.
    /// Reported only; nothing assumes it is polynomially bounded.
    pub fn aspect_ratio(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        for c in 0..self.num_clients() {
            for f in 0..self.num_facilities() {
                let d = self.dist(c, f);
                if d > 0.0 {
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
        }
        if hi == 0.0 { 1.0 } else { hi / lo }
    }

    pub(crate) fn check_facilities(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&f| f >= self.num_facilities()) {
            Some(&f) => Err(Error::UnknownId { kind: "facility", id: f }),
            None => Ok(()),
        }
    }
}

/// `Σ_c w_c · d(c,S)` (median) or `Σ_c w_c · d(c,S)²` (means).
///
/// With `clients` given, the sum runs over that weighted subset instead of the
/// instance's own clients and weights.
pub fn evaluate_cost(
    instance: &MetricInstance,
    set: &[usize],
    clients: Option<&WeightedClientSet>,
) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySolution);
    }
    instance.check_facilities(set)?;
    if let Some(ws) = clients {
        if let Some(&c) = ws.clients.iter().find(|&&c| c >= instance.num_clients()) {
            return Err(Error::UnknownId { kind: "client", id: c });
        }
    }
    Ok(cost_unchecked(instance, set, clients))
}

pub(crate) fn cost_unchecked(
    instance: &MetricInstance,
    set: &[usize],
    clients: Option<&WeightedClientSet>,
) -> f64 {
    let obj = instance.objective();
    let min_dist = |c: usize| {
        set.iter()
            .map(|&f| instance.dist(c, f))
            .fold(f64::INFINITY, f64::min)
    };
    match clients {
        Some(ws) => ws
            .clients
            .iter()
            .zip(&ws.weights)
            .map(|(&c, &w)| w * obj.apply(min_dist(c)))
            .sum(),
        None => instance
            .weights()
            .iter()
            .enumerate()
            .map(|(c, &w)| w * obj.apply(min_dist(c)))
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64], objective: Objective) -> MetricInstance {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        MetricInstance::euclidean(&pts, objective).unwrap()
    }

    #[test]
    fn zero_distance_cost() {
        let inst = line(&[0.0], Objective::Median);
        assert_eq!(evaluate_cost(&inst, &[0], None).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_line() {
        // clients {0,1,3}, facility at 1
        let space = Space::euclidean(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let inst = MetricInstance::new(space, vec![0, 1, 2], vec![1], Objective::Median).unwrap();
        assert_eq!(evaluate_cost(&inst, &[0], None).unwrap(), 3.0);
        let inst = inst.with_objective(Objective::Means);
        assert_eq!(evaluate_cost(&inst, &[0], None).unwrap(), 5.0);
    }

    #[test]
    fn doubling_weights_doubles_cost() {
        let inst = line(&[0.0, 0.4, 1.7, 2.2, 5.0], Objective::Median);
        let base = evaluate_cost(&inst, &[1, 3], None).unwrap();
        let doubled = inst.clone().with_weights(vec![2.0; 5]).unwrap();
        assert_eq!(evaluate_cost(&doubled, &[1, 3], None).unwrap(), 2.0 * base);
    }

    #[test]
    fn empty_and_unknown_sets_are_errors() {
        let inst = line(&[0.0, 1.0], Objective::Median);
        assert!(matches!(evaluate_cost(&inst, &[], None), Err(Error::EmptySolution)));
        assert!(matches!(
            evaluate_cost(&inst, &[7], None),
            Err(Error::UnknownId { kind: "facility", id: 7 })
        ));
    }

    #[test]
    fn matrix_validation() {
        assert!(Space::matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]]).is_ok());
        assert!(Space::matrix(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(Space::matrix(&[vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        // d(0,2) = 5 > d(0,1) + d(1,2) = 2
        let bad = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        assert!(Space::matrix(&bad).is_err());
        // squared distances of a line are not metric; the loader must say so
        let sq = vec![
            vec![0.0, 1.0, 4.0],
            vec![1.0, 0.0, 1.0],
            vec![4.0, 1.0, 0.0],
        ];
        assert!(Space::matrix(&sq).is_err());
    }

    #[test]
    fn explicit_copy_agrees() {
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()])
            .collect();
        let inst = MetricInstance::euclidean(&pts, Objective::Means).unwrap();
        let exp = inst.to_explicit();
        for set in [vec![0], vec![1, 5, 9], vec![2, 3, 4, 11]] {
            let a = evaluate_cost(&inst, &set, None).unwrap();
            let b = evaluate_cost(&exp, &set, None).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
        }
    }

    #[test]
    fn uncached_matches_cached() {
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, (i * i) as f64 * 0.1]).collect();
        let cached = MetricInstance::euclidean(&pts, Objective::Median).unwrap();
        let uncached = cached.clone().with_cache_threshold(0);
        let set = [3, 7, 15];
        assert_eq!(
            evaluate_cost(&cached, &set, None).unwrap(),
            evaluate_cost(&uncached, &set, None).unwrap()
        );
    }

    #[test]
    fn nearest_breaks_ties_by_lowest_id() {
        let inst = line(&[0.0, -1.0, 1.0], Objective::Median);
        assert_eq!(inst.nearest(0, &[2, 1]), Some((1, 1.0)));
    }
}
