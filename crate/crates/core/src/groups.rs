//! Facility groups, lower-bound requirements and the signature partition.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum supported number of groups (signatures are packed into a `u64`).
pub const MAX_GROUPS: usize = 64;

/// Characteristic vector of a facility: bit `i` is set iff it belongs to group `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature(pub u64);

impl Signature {
    #[inline]
    pub fn contains(self, group: usize) -> bool {
        (self.0 >> group) & 1 == 1
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// Parses a `0/1` string where character `i` is group `i`.
    pub fn parse(bits: &str) -> Result<Self> {
        let mut v = 0u64;
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '1' if i < MAX_GROUPS => v |= 1 << i,
                '0' => {}
                _ => return Err(Error::Parse(format!("bad signature '{bits}'"))),
            }
        }
        Ok(Signature(v))
    }

    /// Canonical order over `t` groups: lexicographic on the `0/1` string.
    pub fn lex_cmp(self, other: Signature, t: usize) -> Ordering {
        for i in 0..t {
            match (self.contains(i), other.contains(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        Ordering::Equal
    }

    pub fn display(self, t: usize) -> SignatureDisplay {
        SignatureDisplay(self, t)
    }
}

pub struct SignatureDisplay(Signature, usize);

impl fmt::Display for SignatureDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.1 {
            f.write_str(if self.0.contains(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `t` groups over the facility set, stored as one signature per facility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSystem {
    t: usize,
    membership: Vec<Signature>,
}

impl GroupSystem {
    pub fn new(t: usize, membership: Vec<Signature>) -> Result<Self> {
        if t == 0 || t > MAX_GROUPS {
            return Err(Error::InvalidInstance(format!(
                "group count t = {t} must lie in 1..={MAX_GROUPS}"
            )));
        }
        let mask = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
        if let Some(f) = membership.iter().position(|s| s.0 & !mask != 0) {
            return Err(Error::InvalidInstance(format!(
                "facility {f} has membership bits beyond t = {t}"
            )));
        }
        Ok(GroupSystem { t, membership })
    }

    /// Builds memberships from explicit member lists, one per group.
    pub fn from_groups(t: usize, num_facilities: usize, groups: &[Vec<usize>]) -> Result<Self> {
        if groups.len() != t {
            return Err(Error::InvalidInstance(format!(
                "declared t = {t} but {} groups given",
                groups.len()
            )));
        }
        let mut membership = vec![Signature(0); num_facilities];
        for (g, members) in groups.iter().enumerate() {
            for &f in members {
                let slot = membership
                    .get_mut(f)
                    .ok_or(Error::UnknownId { kind: "facility", id: f })?;
                slot.0 |= 1 << g;
            }
        }
        Self::new(t, membership)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_facilities(&self) -> usize {
        self.membership.len()
    }

    pub fn signature(&self, f: usize) -> Signature {
        self.membership[f]
    }

    pub fn membership(&self) -> &[Signature] {
        &self.membership
    }

    /// Member lists, one per group, in increasing facility order.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        (0..self.t)
            .map(|g| {
                (0..self.membership.len())
                    .filter(|&f| self.membership[f].contains(g))
                    .collect()
            })
            .collect()
    }
}

/// Lower bounds `r` per group and the solution budget `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirements {
    pub r: Vec<u32>,
    pub k: usize,
}

impl Requirements {
    pub fn new(r: Vec<u32>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("budget k must be positive".into()));
        }
        if let Some(i) = r.iter().position(|&ri| ri as usize > k) {
            return Err(Error::InvalidInstance(format!(
                "requirement r[{i}] = {} exceeds k = {k}",
                r[i]
            )));
        }
        Ok(Requirements { r, k })
    }

    /// Checks the requirements against a group system.
    pub fn validate(&self, groups: &GroupSystem) -> Result<()> {
        if self.r.len() != groups.t() {
            return Err(Error::InvalidInstance(format!(
                "{} requirements for t = {} groups",
                self.r.len(),
                groups.t()
            )));
        }
        if self.k > groups.num_facilities() {
            return Err(Error::InvalidInstance(format!(
                "k = {} exceeds |F| = {}",
                self.k,
                groups.num_facilities()
            )));
        }
        Ok(())
    }

    pub fn t(&self) -> usize {
        self.r.len()
    }

    /// `max_i r[i]`.
    pub fn max(&self) -> u32 {
        self.r.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(|&x| x == 0)
    }

    /// Elementwise `coverage >= r`.
    pub fn satisfied_by(&self, coverage: &[u32]) -> bool {
        coverage.len() == self.r.len() && coverage.iter().zip(&self.r).all(|(c, r)| c >= r)
    }
}

/// All facilities sharing one signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacilityClass {
    pub signature: Signature,
    pub members: Vec<usize>,
}

impl FacilityClass {
    pub fn frequency(&self) -> usize {
        self.members.len()
    }
}

/// Splits the facilities into classes of equal signature, sorted
/// lexicographically by signature so the output does not depend on facility
/// order. Members are listed in increasing id order.
pub fn partition_classes(groups: &GroupSystem) -> Vec<FacilityClass> {
    let mut by_sig: std::collections::HashMap<Signature, Vec<usize>> = Default::default();
    for (f, &sig) in groups.membership().iter().enumerate() {
        by_sig.entry(sig).or_default().push(f);
    }
    let mut classes: Vec<FacilityClass> = by_sig
        .into_iter()
        .map(|(signature, members)| FacilityClass { signature, members })
        .collect();
    let t = groups.t();
    classes.sort_by(|a, b| a.signature.lex_cmp(b.signature, t));
    classes
}

/// Per-group counts `|S ∩ G_i|`.
pub fn coverage(set: &[usize], groups: &GroupSystem) -> Result<Vec<u32>> {
    let mut cov = vec![0u32; groups.t()];
    for &f in set {
        if f >= groups.num_facilities() {
            return Err(Error::UnknownId { kind: "facility", id: f });
        }
        add_signature(&mut cov, groups.signature(f));
    }
    Ok(cov)
}

#[inline]
pub(crate) fn add_signature(acc: &mut [u32], sig: Signature) {
    for (i, slot) in acc.iter_mut().enumerate() {
        *slot += (sig.0 >> i & 1) as u32;
    }
}
