//! Set-multicover dynamic program over capped requirement vectors.
//!
//! Every class is copied `min(frequency, k)` times; layer `i` of the table
//! holds, for each state `η ∈ Π_g {0..r[g]}`, the fewest copies among the
//! first `i` that reach `η` (coordinates of `η - γ` are clamped at zero).
//! Only two layers are live at a time; a one-bit-per-state log records
//! whether copy `i` was taken, which is enough to walk back a solution.

use crate::error::{Error, Result};
use crate::groups::{FacilityClass, Requirements};

/// Marker for unreachable states.
pub const UNREACHABLE: u16 = u16::MAX;

/// Largest number of back-pointer bits the DP will allocate.
const MAX_LOG_BITS: u128 = 1 << 34;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOutcome {
    pub feasible: bool,
    /// Multiplicity per class of a minimum-size pick list, when feasible.
    pub picks: Option<Vec<u32>>,
    pub state_count: u128,
}

/// Number of states per layer, `Π_i (r[i] + 1)`.
pub fn dp_state_count(req: &Requirements) -> u128 {
    req.r.iter().map(|&r| r as u128 + 1).product()
}

struct Layout {
    strides: Vec<usize>,
    radix: Vec<u32>,
    states: usize,
    /// Class index of each copy.
    items: Vec<usize>,
}

impl Layout {
    fn new(classes: &[FacilityClass], req: &Requirements) -> Result<Self> {
        let count = dp_state_count(req);
        let items: Vec<usize> = classes
            .iter()
            .enumerate()
            .flat_map(|(c, class)| std::iter::repeat_n(c, class.frequency().min(req.k)))
            .collect();
        let bits = count.saturating_mul(items.len() as u128);
        if bits > MAX_LOG_BITS {
            return Err(Error::CapExceeded {
                what: "DP table (copies x states)",
                size: bits,
                cap: MAX_LOG_BITS,
                hint: "",
            });
        }
        if req.k >= UNREACHABLE as usize {
            return Err(Error::InvalidParameter(format!("k = {} too large for the DP", req.k)));
        }
        let mut strides = Vec::with_capacity(req.t());
        let mut acc = 1usize;
        for &r in &req.r {
            strides.push(acc);
            acc *= r as usize + 1;
        }
        Ok(Layout { strides, radix: req.r.clone(), states: acc, items })
    }

    /// Predecessor of `state` when a copy with signature `sig` is taken.
    fn prev(&self, state: usize, sig: u64) -> usize {
        let mut p = state;
        for (g, (&stride, &r)) in self.strides.iter().zip(&self.radix).enumerate() {
            if (sig >> g) & 1 == 1 && !(state / stride).is_multiple_of(r as usize + 1) {
                p -= stride;
            }
        }
        p
    }

    /// One DP step: `next[η] = min(cur[η], 1 + cur[η - γ])`.
    /// Calls `took(state)` for every state where the copy strictly helps.
    fn step(&self, cur: &[u16], next: &mut [u16], sig: u64, mut took: impl FnMut(usize)) {
        // Digits of the current state, advanced like an odometer.
        let mut digits = vec![0u32; self.radix.len()];
        let sig_groups: Vec<usize> = (0..self.radix.len())
            .filter(|&g| (sig >> g) & 1 == 1)
            .collect();
        for state in 0..self.states {
            let mut p = state;
            for &g in &sig_groups {
                if digits[g] > 0 {
                    p -= self.strides[g];
                }
            }
            let keep = cur[state];
            let via = cur[p].saturating_add(1);
            if via < keep {
                next[state] = via;
                took(state);
            } else {
                next[state] = keep;
            }
            for (d, &r) in digits.iter_mut().zip(&self.radix) {
                if *d < r {
                    *d += 1;
                    break;
                }
                *d = 0;
            }
        }
    }
}

/// Decides feasibility and, when feasible, returns a minimum-count pick list.
pub fn dp_feasible(classes: &[FacilityClass], req: &Requirements) -> Result<DpOutcome> {
    let layout = Layout::new(classes, req)?;
    let states = layout.states;
    let words = states.div_ceil(64);
    let mut log = vec![0u64; words * layout.items.len()];

    let mut cur = vec![UNREACHABLE; states];
    cur[0] = 0;
    let mut next = vec![UNREACHABLE; states];
    for (i, &c) in layout.items.iter().enumerate() {
        let row = &mut log[i * words..(i + 1) * words];
        layout.step(&cur, &mut next, classes[c].signature.0, |s| row[s / 64] |= 1 << (s % 64));
        std::mem::swap(&mut cur, &mut next);
    }

    let target = states - 1;
    let best = cur[target];
    let state_count = dp_state_count(req);
    if best == UNREACHABLE || best as usize > req.k {
        return Ok(DpOutcome { feasible: false, picks: None, state_count });
    }
    let mut picks = vec![0u32; classes.len()];
    let mut state = target;
    for (i, &c) in layout.items.iter().enumerate().rev() {
        if log[i * words + state / 64] >> (state % 64) & 1 == 1 {
            picks[c] += 1;
            state = layout.prev(state, classes[c].signature.0);
        }
    }
    debug_assert_eq!(state, 0);
    debug_assert_eq!(picks.iter().sum::<u32>(), best as u32);
    Ok(DpOutcome { feasible: true, picks: Some(picks), state_count })
}

/// The full layered table `A[i][η]` for `i = 0..=|E'|`. Meant for inspecting
/// small instances; memory grows with copies × states.
pub fn dp_table(classes: &[FacilityClass], req: &Requirements) -> Result<Vec<Vec<u16>>> {
    let layout = Layout::new(classes, req)?;
    let mut layers = Vec::with_capacity(layout.items.len() + 1);
    let mut first = vec![UNREACHABLE; layout.states];
    first[0] = 0;
    layers.push(first);
    for &c in &layout.items {
        let mut next = vec![UNREACHABLE; layout.states];
        layout.step(layers.last().expect("nonempty"), &mut next, classes[c].signature.0, |_| {});
        layers.push(next);
    }
    Ok(layers)
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

    #[test]
    fn state_count_examples() {
        assert_eq!(dp_state_count(&Requirements::new(vec![3, 3, 2, 1], 6).unwrap()), 96);
        assert_eq!(dp_state_count(&Requirements::new(vec![0; 5], 1).unwrap()), 1);
        assert_eq!(dp_state_count(&Requirements::new(vec![1; 7], 1).unwrap()), 128);
    }

    #[test]
    fn four_facility_example_needs_three_picks() {
        let classes = vec![class("01", 1), class("10", 2), class("11", 1)];
        let req = Requirements::new(vec![2, 2], 3).unwrap();
        let out = dp_feasible(&classes, &req).unwrap();
        assert!(out.feasible);
        let picks = out.picks.unwrap();
        assert_eq!(picks.iter().sum::<u32>(), 3);
        assert!(picks.iter().zip(&classes).all(|(&m, c)| m as usize <= c.frequency()));
        // with k = 2 the same instance is infeasible
        let req2 = Requirements::new(vec![2, 2], 2).unwrap();
        assert!(!dp_feasible(&classes, &req2).unwrap().feasible);
    }

    #[test]
    fn zero_requirement_is_trivially_feasible() {
        let classes = vec![class("01", 1)];
        let out = dp_feasible(&classes, &Requirements::new(vec![0, 0], 1).unwrap()).unwrap();
        assert!(out.feasible);
        assert_eq!(out.picks, Some(vec![0]));
        assert_eq!(out.state_count, 1);
    }

    #[test]
    fn single_copy_cannot_cover_twice() {
        let classes = vec![class("1", 1)];
        let out = dp_feasible(&classes, &Requirements::new(vec![2], 5).unwrap()).unwrap();
        assert!(!out.feasible);
        assert!(out.picks.is_none());
    }

    #[test]
    fn table_is_monotone_and_anchored() {
        let classes = vec![class("110", 2), class("011", 1), class("100", 3), class("001", 2)];
        let req = Requirements::new(vec![2, 1, 2], 4).unwrap();
        let table = dp_table(&classes, &req).unwrap();
        for w in table.windows(2) {
            assert!(w[1].iter().zip(&w[0]).all(|(b, a)| b <= a));
        }
        assert!(table.iter().all(|layer| layer[0] == 0));
        let last = table.last().unwrap();
        let out = dp_feasible(&classes, &req).unwrap();
        assert_eq!(out.feasible, (*last.last().unwrap() as usize) <= req.k);
    }
}
