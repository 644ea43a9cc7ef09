//! Single-swap evaluation with nearest / second-nearest distances.
//!
//! For a set `S`, client `c` with nearest `d1` (at position `i`) and second
//! nearest `d2`, and a candidate `f` at distance `df` (all raised to `z`):
//! `cost(S - S[i] + f) = Σ_c w_c min(df, d1) + Σ_{c: near(c) = i} w_c (min(df, d2) - min(df, d1))`.

use rayon::prelude::*;

use crate::metric::MetricInstance;

pub(crate) struct Assignment {
    d1: Vec<f64>,
    d2: Vec<f64>,
    near: Vec<usize>,
}

impl Assignment {
    pub(crate) fn new(instance: &MetricInstance, set: &[usize]) -> Self {
        let z = instance.objective();
        let n = instance.num_clients();
        let mut d1 = vec![f64::INFINITY; n];
        let mut d2 = vec![f64::INFINITY; n];
        let mut near = vec![0usize; n];
        for c in 0..n {
            for (pos, &f) in set.iter().enumerate() {
                let d = z.apply(instance.dist(c, f));
                if d < d1[c] {
                    d2[c] = d1[c];
                    d1[c] = d;
                    near[c] = pos;
                } else if d < d2[c] {
                    d2[c] = d;
                }
            }
        }
        Assignment { d1, d2, near }
    }
}

/// A swap replacing `set[position]` by `incoming`, with its predicted cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Swap {
    pub cost: f64,
    pub position: usize,
    pub incoming: usize,
}

/// Cheapest single swap allowed by `allowed(position, incoming)`; ties go to
/// the lowest incoming id, then the lowest outgoing id.
pub(crate) fn best_single_swap(
    instance: &MetricInstance,
    set: &[usize],
    allowed: impl Fn(usize, usize) -> bool + Sync,
) -> Option<Swap> {
    let a = Assignment::new(instance, set);
    let z = instance.objective();
    let w = instance.weights();
    let k = set.len();
    (0..instance.num_facilities())
        .into_par_iter()
        .filter(|f| !set.contains(f))
        .filter_map(|f| {
            let positions: Vec<usize> = (0..k).filter(|&p| allowed(p, f)).collect();
            if positions.is_empty() {
                return None;
            }
            let mut base = 0.0;
            let mut delta = vec![0.0; k];
            for c in 0..instance.num_clients() {
                let df = z.apply(instance.dist(c, f));
                let keep = df.min(a.d1[c]);
                base += w[c] * keep;
                delta[a.near[c]] += w[c] * (df.min(a.d2[c]) - keep);
            }
            positions
                .into_iter()
                .map(|p| Swap { cost: base + delta[p], position: p, incoming: f })
                .min_by(|x, y| x.cost.total_cmp(&y.cost).then(set[x.position].cmp(&set[y.position])))
        })
        .min_by(|x, y| {
            x.cost
                .total_cmp(&y.cost)
                .then(x.incoming.cmp(&y.incoming))
                .then(set[x.position].cmp(&set[y.position]))
        })
}
