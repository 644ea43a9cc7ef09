//! Dense two-phase simplex with Bland's rule, for the small covering LPs
//! built by the LP engine (a few dozen columns at most).

const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Cmp {
    Le,
    Ge,
}

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub coeffs: Vec<f64>,
    pub cmp: Cmp,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpResult {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, obj: &mut [f64]) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r != row {
                let f = line[col];
                if f != 0.0 {
                    for (v, pv) in line.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let f = obj[col];
        if f != 0.0 {
            for (v, pv) in obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes the objective whose reduced costs are in `obj` (last entry is
    /// minus the current value). Columns with `allowed[j] == false` never enter.
    fn run(&mut self, obj: &mut [f64], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| allowed[j] && obj[j] < -EPS);
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for (r, line) in self.t.iter().enumerate() {
                let a = line[col];
                if a > EPS {
                    let ratio = line[self.cols] / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS
                                || (ratio <= lratio + EPS && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col, obj),
                None => return false,
            }
        }
    }
}

/// Minimizes `objective · x` subject to `rows` and `x >= 0`.
pub(crate) fn minimize(objective: &[f64], rows: &[Row]) -> LpResult {
    let n = objective.len();
    let m = rows.len();
    // Normalize to nonnegative right-hand sides.
    let rows: Vec<Row> = rows
        .iter()
        .map(|r| {
            if r.rhs < 0.0 {
                Row {
                    coeffs: r.coeffs.iter().map(|v| -v).collect(),
                    cmp: if r.cmp == Cmp::Le { Cmp::Ge } else { Cmp::Le },
                    rhs: -r.rhs,
                }
            } else {
                r.clone()
            }
        })
        .collect();
    let n_slack = m;
    let n_art = rows.iter().filter(|r| r.cmp == Cmp::Ge).count();
    let cols = n + n_slack + n_art;
    let mut t = vec![vec![0.0; cols + 1]; m];
    let mut basis = vec![0usize; m];
    let mut art = n + n_slack;
    for (i, row) in rows.iter().enumerate() {
        t[i][..n].copy_from_slice(&row.coeffs);
        t[i][cols] = row.rhs;
        match row.cmp {
            Cmp::Le => {
                t[i][n + i] = 1.0;
                basis[i] = n + i;
            }
            Cmp::Ge => {
                t[i][n + i] = -1.0;
                t[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            }
        }
    }
    let mut tab = Tableau { t, basis, cols };
    let is_art = |j: usize| j >= n + n_slack;

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![0.0; cols + 1];
    obj[n + n_slack..cols].fill(1.0);
    for r in 0..m {
        if is_art(tab.basis[r]) {
            for (o, v) in obj.iter_mut().zip(&tab.t[r]) {
                *o -= v;
            }
        }
    }
    let all = vec![true; cols];
    tab.run(&mut obj, &all);
    if -obj[cols] > 1e-7 {
        return LpResult::Infeasible;
    }
    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if is_art(tab.basis[r]) {
            if let Some(col) = (0..n + n_slack).find(|&j| tab.t[r][j].abs() > EPS) {
                let mut dummy = vec![0.0; cols + 1];
                tab.pivot(r, col, &mut dummy);
            }
        }
    }

    // Phase 2.
    let mut obj = vec![0.0; cols + 1];
    obj[..n].copy_from_slice(objective);
    for r in 0..m {
        let b = tab.basis[r];
        let cb = obj[b];
        if cb != 0.0 {
            let line = tab.t[r].clone();
            for (o, v) in obj.iter_mut().zip(&line) {
                *o -= cb * v;
            }
        }
    }
    let allowed: Vec<bool> = (0..cols).map(|j| !is_art(j)).collect();
    if !tab.run(&mut obj, &allowed) {
        return LpResult::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[r][cols].max(0.0);
        }
    }
    LpResult::Optimal(x)
}
