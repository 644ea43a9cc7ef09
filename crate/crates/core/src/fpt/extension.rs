//! Fictitious facilities and the `improv` objective.

use crate::coreset::WeightedClientSet;
use crate::metric::MetricInstance;

/// A point of the extended metric: an original point of the space or the
/// fictitious facility `F'_j` of pool `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Point(usize),
    Fictitious(usize),
}

/// Candidate sets `Π_j` with radii `λ_j`. `F'_j` sits at distance
/// `2λ_j + min_{f ∈ Π_j} d(f, v)` from every point `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct FictitiousExtension {
    pub candidates: Vec<Vec<usize>>,
    pub lambdas: Vec<f64>,
}

impl FictitiousExtension {
    pub fn new(candidates: Vec<Vec<usize>>, lambdas: Vec<f64>) -> Self {
        assert_eq!(candidates.len(), lambdas.len());
        FictitiousExtension { candidates, lambdas }
    }

    pub fn k(&self) -> usize {
        self.candidates.len()
    }

    /// Sorted, distinct union of the candidate sets.
    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.candidates.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// `d(F'_j, c)` for a client `c`.
    pub fn to_client(&self, instance: &MetricInstance, j: usize, c: usize) -> f64 {
        2.0 * self.lambdas[j]
            + self.candidates[j]
                .iter()
                .map(|&f| instance.dist(c, f))
                .fold(f64::INFINITY, f64::min)
    }

    /// `d(F'_j, f)` for a facility `f`.
    pub fn to_facility(&self, instance: &MetricInstance, j: usize, f: usize) -> f64 {
        2.0 * self.lambdas[j]
            + self.candidates[j]
                .iter()
                .map(|&g| instance.facility_dist(g, f))
                .fold(f64::INFINITY, f64::min)
    }

    /// Distance between two nodes of the extended metric.
    pub fn node_dist(&self, instance: &MetricInstance, a: Node, b: Node) -> f64 {
        let space = instance.space();
        let to_point = |j: usize, p: usize| {
            2.0 * self.lambdas[j]
                + self.candidates[j]
                    .iter()
                    .map(|&g| space.dist(instance.facility_point(g), p))
                    .fold(f64::INFINITY, f64::min)
        };
        match (a, b) {
            (Node::Point(p), Node::Point(q)) => space.dist(p, q),
            (Node::Fictitious(j), Node::Point(p)) | (Node::Point(p), Node::Fictitious(j)) => to_point(j, p),
            (Node::Fictitious(i), Node::Fictitious(j)) if i == j => 0.0,
            (Node::Fictitious(i), Node::Fictitious(j)) => {
                let mut gap = f64::INFINITY;
                for &f in &self.candidates[i] {
                    for &g in &self.candidates[j] {
                        gap = gap.min(instance.facility_dist(f, g));
                    }
                }
                2.0 * self.lambdas[i] + 2.0 * self.lambdas[j] + gap
            }
        }
    }

    /// `cost(C', F')`.
    pub fn fictitious_cost(&self, instance: &MetricInstance, clients: &WeightedClientSet) -> f64 {
        let z = instance.objective();
        clients
            .iter()
            .map(|(c, w)| w * z.apply(self.base_distance(instance, c)))
            .sum()
    }

    /// `d(c, F')`.
    pub fn base_distance(&self, instance: &MetricInstance, c: usize) -> f64 {
        (0..self.k())
            .map(|j| self.to_client(instance, j, c))
            .fold(f64::INFINITY, f64::min)
    }

    /// `improv(S) = cost(C', F') - cost(C', F' ∪ S)`.
    pub fn improv(&self, instance: &MetricInstance, clients: &WeightedClientSet, set: &[usize]) -> f64 {
        ImprovOracle::new(self, instance, clients).value(set)
    }
}

/// Precomputed per-client gains `w_c ((d(c,F')^z - d(c,f)^z)_+)` over the
/// candidate union, so `improv(S) = Σ_c max_{f ∈ S} gain[c][f]`.
#[derive(Clone, Debug)]
pub struct ImprovOracle {
    /// Sorted candidate union; column order of `gain`.
    pub facilities: Vec<usize>,
    gain: Vec<f64>,
    clients: usize,
    base_cost: f64,
}

impl ImprovOracle {
    pub fn new(ext: &FictitiousExtension, instance: &MetricInstance, clients: &WeightedClientSet) -> Self {
        let z = instance.objective();
        let facilities = ext.union();
        let nf = facilities.len();
        let mut gain = vec![0.0; clients.len() * nf];
        let mut base_cost = 0.0;
        for (row, (c, w)) in clients.iter().enumerate() {
            let base = z.apply(ext.base_distance(instance, c));
            base_cost += w * base;
            for (col, &f) in facilities.iter().enumerate() {
                let g = base - z.apply(instance.dist(c, f));
                if g > 0.0 {
                    gain[row * nf + col] = w * g;
                }
            }
        }
        ImprovOracle { facilities, gain, clients: clients.len(), base_cost }
    }

    pub fn num_clients(&self) -> usize {
        self.clients
    }

    /// `cost(C', F')`.
    pub fn base_cost(&self) -> f64 {
        self.base_cost
    }

    /// Column of facility `f`, if it is a candidate.
    pub fn column(&self, f: usize) -> Option<usize> {
        self.facilities.binary_search(&f).ok()
    }

    #[inline]
    pub fn gain(&self, row: usize, col: usize) -> f64 {
        self.gain[row * self.facilities.len() + col]
    }

    /// `improv` of a set of columns.
    pub fn value_of_columns(&self, cols: &[usize]) -> f64 {
        (0..self.clients)
            .map(|row| cols.iter().map(|&c| self.gain(row, c)).fold(0.0, f64::max))
            .sum()
    }

    /// `improv` of a set of facility ids; ids outside the candidates add nothing.
    pub fn value(&self, set: &[usize]) -> f64 {
        let cols: Vec<usize> = set.iter().filter_map(|&f| self.column(f)).collect();
        self.value_of_columns(&cols)
    }
}
