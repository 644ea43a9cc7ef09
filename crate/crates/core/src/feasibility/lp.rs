//! LP relaxation of the class-multiplicity problem and randomized rounding.
//!
//! The relaxation is `Σ_E x_E γ_E >= r`, `Σ_E x_E <= k`, `0 <= x_E <= f(E)`
//! with an arbitrary linear objective (zero by default).

use rand::Rng;

use super::patterns::aggregate_of;
use super::simplex::{minimize, Cmp, LpResult, Row};
use crate::groups::{FacilityClass, Requirements};

/// Constraint slack tolerated when checking a fractional point.
pub const LP_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<f64>),
    Infeasible,
}

/// Any feasible point of the relaxation (objective identically zero).
pub fn lp_solve_fractional(classes: &[FacilityClass], req: &Requirements) -> LpOutcome {
    lp_solve_with_costs(classes, req, &vec![0.0; classes.len()])
}

/// Feasible point minimizing `costs · x`.
pub fn lp_solve_with_costs(classes: &[FacilityClass], req: &Requirements, costs: &[f64]) -> LpOutcome {
    let n = classes.len();
    let mut rows = Vec::with_capacity(req.t() + 1 + n);
    for (g, &r) in req.r.iter().enumerate() {
        let coeffs = classes
            .iter()
            .map(|c| if c.signature.contains(g) { 1.0 } else { 0.0 })
            .collect();
        rows.push(Row { coeffs, cmp: Cmp::Ge, rhs: r as f64 });
    }
    rows.push(Row { coeffs: vec![1.0; n], cmp: Cmp::Le, rhs: req.k as f64 });
    for (i, c) in classes.iter().enumerate() {
        let mut coeffs = vec![0.0; n];
        coeffs[i] = 1.0;
        rows.push(Row { coeffs, cmp: Cmp::Le, rhs: c.frequency() as f64 });
    }
    match minimize(costs, &rows) {
        LpResult::Optimal(mut x) => {
            for v in x.iter_mut() {
                let near = v.round();
                if (*v - near).abs() < 1e-9 {
                    *v = near;
                }
            }
            debug_assert!(satisfies_relaxation(classes, req, &x));
            LpOutcome::Feasible(x)
        }
        // The zero vector bounds every objective we pass, so "unbounded"
        // only shows up for a malformed system; treat it as no solution.
        LpResult::Infeasible | LpResult::Unbounded => LpOutcome::Infeasible,
    }
}

/// Checks a fractional point against the relaxation at [`LP_TOLERANCE`].
pub fn satisfies_relaxation(classes: &[FacilityClass], req: &Requirements, x: &[f64]) -> bool {
    let total: f64 = x.iter().sum();
    if total > req.k as f64 + LP_TOLERANCE {
        return false;
    }
    if x
        .iter()
        .zip(classes)
        .any(|(&v, c)| v < -LP_TOLERANCE || v > c.frequency() as f64 + LP_TOLERANCE)
    {
        return false;
    }
    req.r.iter().enumerate().all(|(g, &r)| {
        let cov: f64 = x
            .iter()
            .zip(classes)
            .filter(|(_, c)| c.signature.contains(g))
            .map(|(&v, _)| v)
            .sum();
        cov >= r as f64 - LP_TOLERANCE
    })
}

/// Rounds each entry independently: `⌊x⌋` with probability `1 - (x - ⌊x⌋)`,
/// otherwise `⌈x⌉`.
pub fn round_once<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> Vec<u32> {
    x.iter()
        .map(|&v| {
            let v = v.max(0.0);
            let lo = v.floor();
            let frac = v - lo;
            if frac > 0.0 && rng.random::<f64>() < frac {
                lo as u32 + 1
            } else {
                lo as u32
            }
        })
        .collect()
}

/// One rounding attempt; returns the multiplicities only if they cover `r`
/// within the budget `k`.
pub fn lp_round<R: Rng + ?Sized>(
    x: &[f64],
    classes: &[FacilityClass],
    req: &Requirements,
    rng: &mut R,
) -> Option<Vec<u32>> {
    let rounded = round_once(x, rng);
    let size: u32 = rounded.iter().sum();
    if size as usize > req.k {
        return None;
    }
    if rounded
        .iter()
        .zip(classes)
        .any(|(&m, c)| m as usize > c.frequency())
    {
        return None;
    }
    req.satisfied_by(&aggregate_of(classes, req.t(), &rounded))
        .then_some(rounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Signature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn class(bits: &str, freq: usize) -> FacilityClass {
        FacilityClass {
            signature: Signature::parse(bits).unwrap(),
            members: (0..freq).collect(),
        }
    }

    #[test]
    fn single_variable_lp() {
        let classes = vec![class("11", 5)];
        let req = Requirements::new(vec![2, 2], 2).unwrap();
        assert_eq!(lp_solve_fractional(&classes, &req), LpOutcome::Feasible(vec![2.0]));
    }

    #[test]
    fn zero_requirement_gives_origin() {
        let classes = vec![class("10", 3), class("01", 3)];
        let req = Requirements::new(vec![0, 0], 2).unwrap();
        assert_eq!(lp_solve_fractional(&classes, &req), LpOutcome::Feasible(vec![0.0, 0.0]));
    }

    #[test]
    fn frequency_bound_makes_lp_infeasible() {
        let classes = vec![class("1", 1)];
        let req = Requirements::new(vec![2], 2).unwrap();
        assert_eq!(lp_solve_fractional(&classes, &req), LpOutcome::Infeasible);
    }

    #[test]
    fn random_objective_points_stay_feasible() {
        let classes = vec![class("110", 2), class("011", 2), class("101", 2), class("100", 1)];
        let req = Requirements::new(vec![2, 1, 2], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let costs: Vec<f64> = (0..classes.len()).map(|_| rng.random()).collect();
            let LpOutcome::Feasible(x) = lp_solve_with_costs(&classes, &req, &costs) else {
                panic!("feasible LP reported infeasible")
            };
            assert!(satisfies_relaxation(&classes, &req, &x));
        }
    }

    #[test]
    fn integer_points_round_to_themselves() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(round_once(&[2.0, 0.0, 1.0], &mut rng), vec![2, 0, 1]);
        }
        let classes = vec![class("11", 3)];
        let req = Requirements::new(vec![2, 2], 2).unwrap();
        assert_eq!(lp_round(&[2.0], &classes, &req, &mut rng), Some(vec![2]));
    }

    #[test]
    fn fractional_entry_follows_bernoulli_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws = 100_000;
        let mut sum = 0u64;
        let mut ups = 0u64;
        for _ in 0..draws {
            let v = round_once(&[2.3], &mut rng)[0];
            assert!(v == 2 || v == 3);
            sum += v as u64;
            ups += (v == 3) as u64;
        }
        let mean = sum as f64 / draws as f64;
        assert!((mean - 2.3).abs() < 0.01, "{mean}");
        assert!((ups as f64 / draws as f64 - 0.3).abs() < 0.01);
    }
}
