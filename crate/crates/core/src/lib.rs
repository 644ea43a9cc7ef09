//! Diversity-aware k-median and k-means.
//!
//! Facilities carry group memberships and a solution must contain at least
//! `r[i]` facilities of group `i`. The crate provides three feasibility
//! engines, a pattern-enumeration approximation over coresets, local-search
//! and k-means++ baselines, a bicriteria union, and brute-force oracles.
//! Interchangeable pieces (feasibility engines, improv selectors, solvers)
//! are trait objects held in name-keyed [`registry::Registry`] values.

pub mod compose;
pub mod coreset;
pub mod error;
pub mod feasibility;
pub mod fpt;
pub mod groups;
pub mod heuristics;
pub mod io;
pub mod metric;
pub mod oracle;
pub mod registry;
pub mod seed;
pub mod solution;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use groups::{coverage, partition_classes, FacilityClass, GroupSystem, Requirements, Signature};
pub use metric::{evaluate_cost, MetricInstance, Objective, Space};
pub use solution::Solution;
