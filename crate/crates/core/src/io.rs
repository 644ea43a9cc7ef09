//! File formats: points CSV (`id,x1,...,xD`), distance matrices (`n` then
//! `n` rows), the groups/requirements JSON, and JSON-line result records.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupSystem, Requirements};

pub fn parse_points_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty points file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"id") || cols.len() < 2 {
        return Err(Error::Parse(format!("points header must be id,x1,...,xD; got '{header}'")));
    }
    let dim = cols.len() - 1;
    let mut points = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != dim + 1 {
            return Err(Error::Parse(format!("row {row}: expected {} fields, got {}", dim + 1, fields.len())));
        }
        let id: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("row {row}: bad id '{}'", fields[0])))?;
        if id != row {
            return Err(Error::Parse(format!("row {row}: ids must be 0..n in order, got {id}")));
        }
        let coords = fields[1..]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("row {row}: bad number '{s}'"))))
            .collect::<Result<Vec<f64>>>()?;
        points.push(coords);
    }
    Ok(points)
}

pub fn format_points_csv(points: &[Vec<f64>]) -> String {
    let dim = points.first().map_or(0, Vec::len);
    let mut out = String::from("id");
    for d in 1..=dim {
        write!(out, ",x{d}").expect("write to string");
    }
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        write!(out, "{i}").expect("write to string");
        for x in p {
            write!(out, ",{x}").expect("write to string");
        }
        out.push('\n');
    }
    out
}

/// First line `n`, then `n` rows of `n` numbers separated by whitespace or commas.
pub fn parse_dist_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::Parse("first line must be n".into()))?;
    let rows = lines
        .take(n)
        .enumerate()
        .map(|(i, line)| {
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("row {i}: bad number '{s}'"))))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {i}: expected {n} entries, got {}", row.len())));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, got {}", rows.len())));
    }
    Ok(rows)
}

/// Groups and requirements as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupsFile {
    pub t: usize,
    pub groups: Vec<Vec<usize>>,
    pub r: Vec<u32>,
    pub k: usize,
}

impl GroupsFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("groups file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn build(&self, num_facilities: usize) -> Result<(GroupSystem, Requirements)> {
        if self.groups.len() != self.t {
            return Err(Error::Parse(format!("t = {} but {} groups listed", self.t, self.groups.len())));
        }
        let groups = GroupSystem::from_groups(self.t, num_facilities, &self.groups)?;
        let req = Requirements::new(self.r.clone(), self.k)?;
        req.validate(&groups)?;
        Ok((groups, req))
    }
}

/// Scales every coordinate column to unit Euclidean norm (zero columns stay zero).
pub fn normalize_unit_norm(points: &mut [Vec<f64>]) {
    let dim = points.first().map_or(0, Vec::len);
    for d in 0..dim {
        let norm = points.iter().map(|p| p[d] * p[d]).sum::<f64>().sqrt();
        if norm > 0.0 {
            for p in points.iter_mut() {
                p[d] /= norm;
            }
        }
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// One line of `solve` / `bench` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub alg: String,
    pub cost: f64,
    pub k_star: usize,
    pub zeta_star: f64,
    pub coverage: Vec<u32>,
    pub facilities: Vec<usize>,
    pub runtime_ms: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
}
