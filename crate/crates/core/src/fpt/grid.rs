//! The radius grid `[a]_η` and per-leader candidate sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::MetricInstance;

/// Smallest nonnegative `e` with `(1 + η)^e >= a`.
pub fn discretize(a: f64, eta: f64) -> Result<u32> {
    if a.is_nan() || a < 1.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("discretize needs a >= 1, got {a}")));
    }
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    let base = 1.0 + eta;
    let mut e = (a.ln() / base.ln()).ceil().max(0.0) as i32;
    while base.powi(e) < a {
        e += 1;
    }
    while e > 0 && base.powi(e - 1) >= a {
        e -= 1;
    }
    Ok(e as u32)
}

/// A radius guess: exactly zero, or the bucket `e` of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Radius {
    Zero,
    Exp(u32),
}

/// Geometric grid `unit · (1 + η)^e`. Bucket `Exp(0)` holds every distance up
/// to `unit`; `Exp(e)` for `e >= 1` holds `d` with `[d / unit]_η = e`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusGrid {
    pub eta: f64,
    pub unit: f64,
}

impl RadiusGrid {
    pub fn new(eta: f64, unit: f64) -> Result<Self> {
        if eta.is_nan() || eta <= 0.0 || unit.is_nan() || unit <= 0.0 || !unit.is_finite() {
            return Err(Error::InvalidParameter(format!("bad grid: eta = {eta}, unit = {unit}")));
        }
        Ok(RadiusGrid { eta, unit })
    }

    /// Finest bucket holding `d`.
    pub fn bucket(&self, d: f64) -> Radius {
        if d == 0.0 {
            Radius::Zero
        } else if d <= self.unit {
            Radius::Exp(0)
        } else {
            Radius::Exp(discretize(d / self.unit, self.eta).expect("d / unit > 1"))
        }
    }

    /// Whether a distance `d` falls in `radius`.
    pub fn contains(&self, radius: Radius, d: f64) -> bool {
        match radius {
            Radius::Zero => d == 0.0,
            Radius::Exp(0) => d <= self.unit,
            r => self.bucket(d) == r,
        }
    }

    pub fn lambda(&self, radius: Radius) -> f64 {
        match radius {
            Radius::Zero => 0.0,
            Radius::Exp(e) => self.unit * (1.0 + self.eta).powi(e as i32),
        }
    }
}

/// `Π = {f ∈ pool : d(f, leader) in radius}`, in pool order.
pub fn candidate_set(
    instance: &MetricInstance,
    pool: &[usize],
    leader: usize,
    radius: Radius,
    grid: &RadiusGrid,
) -> Vec<usize> {
    pool.iter()
        .copied()
        .filter(|&f| grid.contains(radius, instance.dist(leader, f)))
        .collect()
}
