//! Exhaustive enumeration of constraint patterns (k-multisets of classes).

use rayon::prelude::*;
use serde::Serialize;

use crate::groups::{add_signature, FacilityClass, Requirements};

/// A k-multiset of classes, stored as one multiplicity per class index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConstraintPattern {
    pub multiplicities: Vec<u32>,
    /// `Σ γ` over the multiset.
    pub aggregate: Vec<u32>,
}

impl ConstraintPattern {
    pub fn from_multiplicities(classes: &[FacilityClass], t: usize, multiplicities: Vec<u32>) -> Self {
        let aggregate = aggregate_of(classes, t, &multiplicities);
        ConstraintPattern { multiplicities, aggregate }
    }

    pub fn size(&self) -> usize {
        self.multiplicities.iter().map(|&m| m as usize).sum()
    }

    pub fn is_feasible(&self, req: &Requirements) -> bool {
        req.satisfied_by(&self.aggregate)
    }

    /// Class indices with repetition, in increasing class order.
    pub fn class_sequence(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(c, &m)| std::iter::repeat_n(c, m as usize))
            .collect()
    }
}

pub(crate) fn aggregate_of(classes: &[FacilityClass], t: usize, mult: &[u32]) -> Vec<u32> {
    let mut agg = vec![0u32; t];
    for (class, &m) in classes.iter().zip(mult) {
        for _ in 0..m {
            add_signature(&mut agg, class.signature);
        }
    }
    agg
}

/// Every k-multiset of classes whose multiplicities respect
/// `min(frequency, k)`, in canonical order (earlier classes first, higher
/// multiplicity first).
pub struct MultisetIter {
    caps: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl MultisetIter {
    pub fn new(classes: &[FacilityClass], k: usize) -> Self {
        let caps: Vec<u32> = classes
            .iter()
            .map(|c| c.frequency().min(k) as u32)
            .collect();
        let mut first = vec![0u32; caps.len()];
        let filled = fill_greedy(&caps, &mut first, 0, k as u32);
        MultisetIter { caps, current: filled.then_some(first) }
    }
}

/// Puts `amount` units into `mult[from..]` as early as the caps allow.
fn fill_greedy(caps: &[u32], mult: &mut [u32], from: usize, mut amount: u32) -> bool {
    for i in from..caps.len() {
        let take = caps[i].min(amount);
        mult[i] = take;
        amount -= take;
    }
    amount == 0
}

impl Iterator for MultisetIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let n = out.len();
        let mut next = out.clone();
        // Lower the rightmost position whose suffix can absorb one more unit.
        let mut suffix_sum = 0u32;
        let mut suffix_cap = 0u32;
        for i in (0..n).rev() {
            if i + 1 < n {
                suffix_sum += next[i + 1];
                suffix_cap += self.caps[i + 1];
            }
            if i + 1 < n && next[i] > 0 && suffix_cap > suffix_sum {
                next[i] -= 1;
                fill_greedy(&self.caps, &mut next, i + 1, suffix_sum + 1);
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All feasible constraint patterns, in canonical order.
pub fn enumerate_feasible_patterns(classes: &[FacilityClass], req: &Requirements) -> Vec<ConstraintPattern> {
    let t = req.t();
    MultisetIter::new(classes, req.k)
        .map(|m| ConstraintPattern::from_multiplicities(classes, t, m))
        .filter(|p| p.is_feasible(req))
        .collect()
}

/// Streams multisets in batches of `batch` and returns the first feasible
/// one in canonical order.
pub fn first_feasible_pattern(
    classes: &[FacilityClass],
    req: &Requirements,
    batch: usize,
) -> Option<ConstraintPattern> {
    let t = req.t();
    let mut iter = MultisetIter::new(classes, req.k);
    loop {
        let chunk: Vec<Vec<u32>> = iter.by_ref().take(batch.max(1)).collect();
        if chunk.is_empty() {
            return None;
        }
        let hit = chunk
            .par_iter()
            .position_first(|m| req.satisfied_by(&aggregate_of(classes, t, m)));
        if let Some(i) = hit {
            let m = chunk.into_iter().nth(i).expect("index from position_first");
            return Some(ConstraintPattern::from_multiplicities(classes, t, m));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Signature;

    fn class(bits: &str, freq: usize) -> FacilityClass {
        FacilityClass {
            signature: Signature::parse(bits).unwrap(),
            members: (0..freq).collect(),
        }
    }

    fn sigs(classes: &[FacilityClass], p: &ConstraintPattern, t: usize) -> Vec<String> {
        p.class_sequence()
            .into_iter()
            .map(|c| classes[c].signature.display(t).to_string())
            .collect()
    }

    #[test]
    fn three_class_example_has_four_patterns() {
        let classes = vec![class("11", 2), class("10", 2), class("01", 2)];
        let req = Requirements::new(vec![1, 1], 2).unwrap();
        let pats = enumerate_feasible_patterns(&classes, &req);
        let mut got: Vec<Vec<String>> = pats.iter().map(|p| sigs(&classes, p, 2)).collect();
        got.iter_mut().for_each(|v| v.sort());
        got.sort();
        let mut want: Vec<Vec<String>> = vec![
            vec!["11".into(), "11".into()],
            vec!["10".into(), "11".into()],
            vec!["01".into(), "11".into()],
            vec!["01".into(), "10".into()],
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn vacuous_requirement_lists_all_multisets() {
        // m = 4 classes, k = 3: C(4+3-1, 3) = 20
        let classes: Vec<_> = ["00", "01", "10", "11"].iter().map(|b| class(b, 5)).collect();
        let req = Requirements::new(vec![0, 0], 3).unwrap();
        assert_eq!(enumerate_feasible_patterns(&classes, &req).len(), 20);
    }

    #[test]
    fn frequency_cap_forces_infeasibility() {
        let classes = vec![class("1", 1)];
        let req = Requirements::new(vec![2], 2).unwrap();
        assert!(enumerate_feasible_patterns(&classes, &req).is_empty());
        assert!(first_feasible_pattern(&classes, &req, 4).is_none());
    }

    #[test]
    fn iterator_respects_caps_and_is_exhaustive() {
        let classes = vec![class("1", 1), class("0", 3), class("1", 2)];
        let all: Vec<Vec<u32>> = MultisetIter::new(&classes, 3).collect();
        // brute force over the box of caps
        let mut brute = Vec::new();
        for a in 0..=1u32 {
            for b in 0..=3u32 {
                for c in 0..=2u32 {
                    if a + b + c == 3 {
                        brute.push(vec![a, b, c]);
                    }
                }
            }
        }
        let mut sorted = all.clone();
        sorted.sort();
        brute.sort();
        assert_eq!(sorted, brute);
        // canonical order is strictly decreasing lexicographically
        assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn first_feasible_matches_full_enumeration() {
        let classes = vec![class("100", 3), class("010", 1), class("011", 2), class("101", 1)];
        let req = Requirements::new(vec![2, 1, 2], 3).unwrap();
        let all = enumerate_feasible_patterns(&classes, &req);
        for batch in [1, 2, 7, 100] {
            assert_eq!(first_feasible_pattern(&classes, &req, batch).as_ref(), all.first());
        }
    }
}
