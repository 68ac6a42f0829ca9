//! Two-phase dense-tableau simplex with Bland's rule.
//!
//! Input problems are in equality standard form with nonnegative variables.
//! Phase 1 drives one artificial variable per row to zero; phase 2 optimizes
//! the real objective. Bland's smallest-index rule makes the pivot sequence
//! deterministic and cycle-free; tiny instances make speed irrelevant.

use super::{LpError, LpProblem, Sense};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Entries with absolute value at or below this never serve as pivots.
    pub pivot_tol: f64,
    /// Residual phase-1 objective above this means infeasible.
    pub feas_tol: f64,
    /// Pivot cap; exceeding it signals a numerical pathology.
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: 1e-9,
            feas_tol: 1e-8,
            max_pivots: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LpStatus::Optimal => f.write_str("optimal"),
            LpStatus::Infeasible => f.write_str("infeasible"),
            LpStatus::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// A basic solution. `values` and `basis` are meaningful only when the
/// status is `Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    pub basis: Vec<usize>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    obj: f64,
    basis: Vec<usize>,
    pivots: usize,
    opts: SimplexOptions,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let factor = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= factor;
        }
        self.rhs[r] /= factor;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f == 0.0 {
                continue;
            }
            for j in 0..self.rows[i].len() {
                self.rows[i][j] -= f * self.rows[r][j];
            }
            self.rows[i][c] = 0.0;
            self.rhs[i] -= f * self.rhs[r];
        }
        let f = self.cost[c];
        if f != 0.0 {
            self.obj += f * self.rhs[r];
            for j in 0..self.cost.len() {
                self.cost[j] -= f * self.rows[r][j];
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimizes the current cost row. Bland: entering column is the smallest
    /// index with a negative reduced cost; the leaving row breaks ratio ties
    /// by the smallest basic variable index.
    fn run_phase(&mut self) -> Result<PhaseOutcome, LpError> {
        loop {
            let entering = (0..self.cost.len()).find(|&j| self.cost[j] < -self.opts.pivot_tol);
            let Some(c) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a <= self.opts.pivot_tol {
                    continue;
                }
                let ratio = self.rhs[i] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - self.opts.pivot_tol
                            || ((ratio - br).abs() <= self.opts.pivot_tol
                                && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(PhaseOutcome::Unbounded);
            };
            if self.pivots >= self.opts.max_pivots {
                return Err(LpError::IterationLimit { pivots: self.pivots });
            }
            self.pivot(r, c);
        }
    }
}

pub fn simplex_solve(lp: &LpProblem) -> Result<LpSolution, LpError> {
    simplex_solve_with(lp, &SimplexOptions::default())
}

pub fn simplex_solve_with(lp: &LpProblem, opts: &SimplexOptions) -> Result<LpSolution, LpError> {
    let n = lp.num_vars();
    let m = lp.num_rows();

    // internal sense is minimization
    let internal_cost: Vec<f64> = match lp.sense {
        Sense::Minimize => lp.objective.clone(),
        Sense::Maximize => lp.objective.iter().map(|c| -c).collect(),
    };

    // rows with artificial columns appended; rhs normalized nonnegative
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = lp.rhs[i] < 0.0;
        let mut row: Vec<f64> = lp.rows[i]
            .iter()
            .map(|&a| if flip { -a } else { a })
            .collect();
        row.extend(std::iter::repeat(0.0).take(m));
        row[n + i] = 1.0;
        rows.push(row);
        rhs.push(if flip { -lp.rhs[i] } else { lp.rhs[i] });
    }

    // phase-1 cost: sum of artificials, in reduced form w.r.t. the
    // artificial basis
    let mut cost = vec![0.0; n + m];
    let mut obj = 0.0;
    for i in 0..m {
        for j in 0..n {
            cost[j] -= rows[i][j];
        }
        obj += rhs[i];
    }

    let mut t = Tableau {
        rows,
        rhs,
        cost,
        obj,
        basis: (n..n + m).collect(),
        pivots: 0,
        opts: *opts,
    };

    match t.run_phase()? {
        PhaseOutcome::Optimal => {}
        PhaseOutcome::Unbounded => {
            return Err(LpError::Numerical("phase 1 reported unbounded".into()))
        }
    }
    if t.obj > opts.feas_tol {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            objective: f64::NAN,
            values: Vec::new(),
            basis: Vec::new(),
            pivots: t.pivots,
        });
    }

    // drive remaining artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.basis.len() {
        if t.basis[i] < n {
            i += 1;
            continue;
        }
        let col = (0..n).find(|&j| t.rows[i][j].abs() > opts.pivot_tol && !t.basis.contains(&j));
        match col {
            Some(c) => {
                t.pivot(i, c);
                i += 1;
            }
            None => {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
            }
        }
    }

    // strip artificial columns and install the real objective
    for row in &mut t.rows {
        row.truncate(n);
    }
    t.cost = internal_cost.clone();
    t.obj = 0.0;
    for (i, &b) in t.basis.iter().enumerate() {
        let cb = internal_cost[b];
        if cb == 0.0 {
            continue;
        }
        t.obj += cb * t.rhs[i];
        for j in 0..n {
            t.cost[j] -= cb * t.rows[i][j];
        }
    }

    match t.run_phase()? {
        PhaseOutcome::Unbounded => Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::NAN,
            values: Vec::new(),
            basis: Vec::new(),
            pivots: t.pivots,
        }),
        PhaseOutcome::Optimal => {
            let mut values = vec![0.0; n];
            for (i, &b) in t.basis.iter().enumerate() {
                values[b] = t.rhs[i].max(0.0);
            }
            let objective = match lp.sense {
                Sense::Minimize => t.obj,
                Sense::Maximize => -t.obj,
            };
            Ok(LpSolution {
                status: LpStatus::Optimal,
                objective,
                values,
                basis: t.basis.clone(),
                pivots: t.pivots,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::VarLabel;

    fn problem(sense: Sense, objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> LpProblem {
        let labels = (0..objective.len()).map(|j| VarLabel::Slack { row: j }).collect();
        LpProblem { sense, objective, rows, rhs, labels }
    }

    #[test]
    fn maximizes_a_pinned_variable() {
        let lp = problem(Sense::Maximize, vec![1.0], vec![vec![1.0]], vec![1.0]);
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!((sol.values[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_with_nonnegative_variable_is_infeasible() {
        let lp = problem(Sense::Maximize, vec![1.0], vec![vec![1.0]], vec![-1.0]);
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded_problems() {
        // max x - y s.t. x - y = 0
        let lp = problem(Sense::Maximize, vec![1.0, -1.0], vec![vec![1.0, -1.0]], vec![0.0]);
        let sol = simplex_solve(&lp).unwrap();
        // x - y = 0 pins the objective at 0, so extend: max x s.t. x - y = 0
        let lp2 = problem(Sense::Maximize, vec![1.0, 0.0], vec![vec![1.0, -1.0]], vec![0.0]);
        let sol2 = simplex_solve(&lp2).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol2.status, LpStatus::Unbounded);
    }

    #[test]
    fn solves_a_small_equality_program() {
        // max 3x + 2y s.t. x + y + s1 = 4, x + 3y + s2 = 6
        let lp = problem(
            Sense::Maximize,
            vec![3.0, 2.0, 0.0, 0.0],
            vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
            vec![4.0, 6.0],
        );
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 12.0).abs() < 1e-9);
        assert!((sol.values[0] - 4.0).abs() < 1e-9);
        assert!(sol.values[1].abs() < 1e-9);
    }

    #[test]
    fn handles_redundant_rows() {
        // x = 1 stated twice
        let lp = problem(
            Sense::Minimize,
            vec![1.0],
            vec![vec![1.0], vec![1.0]],
            vec![1.0, 1.0],
        );
        let sol = simplex_solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pivot_counts_are_reproducible() {
        let lp = problem(
            Sense::Maximize,
            vec![3.0, 2.0, 0.0, 0.0],
            vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
            vec![4.0, 6.0],
        );
        let a = simplex_solve(&lp).unwrap();
        let b = simplex_solve(&lp).unwrap();
        assert_eq!(a.pivots, b.pivots);
        assert_eq!(a.basis, b.basis);
    }
}
