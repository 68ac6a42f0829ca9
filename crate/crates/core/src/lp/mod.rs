//! Per-initial-state linear programs for undiscounted multichain SMDPs.
//!
//! For a fixed initial state the dual program carries one long-run frequency
//! variable `x_sa` and one deviation variable `y_sa` per state-action pair
//! plus a scalar `t`; its optimal basic solutions encode an optimal pure
//! stationary policy for that initial state. Solving it once per initial
//! state and stacking the extracted policies yields the optimal pure
//! semi-stationary strategy. The primal (gain/bias form) is built too so the
//! two optima can be checked against each other.

mod simplex;

pub use simplex::{simplex_solve, simplex_solve_with, LpSolution, LpStatus, SimplexOptions};

use crate::eval::PureStationaryPolicy;
use crate::game::SemiStationaryStrategy;
use crate::rational::to_f64;
use crate::reduction::Smdp;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Threshold below which a variable is treated as zero when classifying
/// states for strategy extraction.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("pivot limit reached after {pivots} pivots; numerical pathology suspected")]
    IterationLimit { pivots: usize },
    #[error("internal numerical error: {0}")]
    Numerical(String),
    #[error("linear program for initial state {initial_state} terminated {status}")]
    UnexpectedStatus { initial_state: usize, status: LpStatus },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Column label carrying the variable's role. Free variables of the primal
/// are split into nonnegative differences, tagged by `negative`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarLabel {
    X { state: usize, action: usize },
    Y { state: usize, action: usize },
    T,
    V { negative: bool },
    G { state: usize, negative: bool },
    H { state: usize, negative: bool },
    Slack { row: usize },
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarLabel::X { state, action } => write!(f, "x[{state},{action}]"),
            VarLabel::Y { state, action } => write!(f, "y[{state},{action}]"),
            VarLabel::T => write!(f, "t"),
            VarLabel::V { negative } => write!(f, "v{}", if *negative { "-" } else { "+" }),
            VarLabel::G { state, negative } => {
                write!(f, "g[{state}]{}", if *negative { "-" } else { "+" })
            }
            VarLabel::H { state, negative } => {
                write!(f, "h[{state}]{}", if *negative { "-" } else { "+" })
            }
            VarLabel::Slack { row } => write!(f, "sl[{row}]"),
        }
    }
}

/// Equality-standard-form linear program: all variables nonnegative,
/// `rows * vars = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub labels: Vec<VarLabel>,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn column(&self, label: VarLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Plain-text equation listing for debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        out.push_str(&format!("{} {}\n", sense, row_to_string(&self.objective, &self.labels)));
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("  {} = {}\n", row_to_string(row, &self.labels), self.rhs[i]));
        }
        out
    }
}

fn row_to_string(coeffs: &[f64], labels: &[VarLabel]) -> String {
    let mut parts = Vec::new();
    for (c, l) in coeffs.iter().zip(labels) {
        if *c == 0.0 {
            continue;
        }
        if parts.is_empty() {
            if *c == 1.0 {
                parts.push(format!("{l}"));
            } else if *c == -1.0 {
                parts.push(format!("-{l}"));
            } else {
                parts.push(format!("{c}*{l}"));
            }
        } else if *c == 1.0 {
            parts.push(format!("+ {l}"));
        } else if *c == -1.0 {
            parts.push(format!("- {l}"));
        } else if *c < 0.0 {
            parts.push(format!("- {}*{l}", -c));
        } else {
            parts.push(format!("+ {c}*{l}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// Column indices of the dual program: all `x_sa` in state-major order, then
/// all `y_sa`, then `t`.
struct DualIndex {
    x_offset: Vec<usize>,
    pairs: usize,
}

impl DualIndex {
    fn new(smdp: &Smdp) -> Self {
        let mut x_offset = Vec::with_capacity(smdp.num_states());
        let mut next = 0;
        for st in smdp.states() {
            x_offset.push(next);
            next += st.actions.len();
        }
        DualIndex { x_offset, pairs: next }
    }

    fn x(&self, s: usize, a: usize) -> usize {
        self.x_offset[s - 1] + (a - 1)
    }

    fn y(&self, s: usize, a: usize) -> usize {
        self.pairs + self.x(s, a)
    }

    fn t(&self) -> usize {
        2 * self.pairs
    }
}

/// Builds the dual program for one initial state: balance rows for every
/// state, reachability rows (with `-t` on the initial state's row), and the
/// sojourn-time normalization. `2z + 1` equality rows over `2K + 1`
/// nonnegative variables.
pub fn build_dlp(smdp: &Smdp, initial_state: usize) -> LpProblem {
    let z = smdp.num_states();
    let idx = DualIndex::new(smdp);
    let ncols = 2 * idx.pairs + 1;

    let mut labels = Vec::with_capacity(ncols);
    for st in smdp.states() {
        for a in &st.actions {
            labels.push(VarLabel::X { state: st.id, action: a.id });
        }
    }
    for st in smdp.states() {
        for a in &st.actions {
            labels.push(VarLabel::Y { state: st.id, action: a.id });
        }
    }
    labels.push(VarLabel::T);

    let mut objective = vec![0.0; ncols];
    for st in smdp.states() {
        for a in &st.actions {
            objective[idx.x(st.id, a.id)] = to_f64(&a.reward);
        }
    }

    let mut rows = Vec::with_capacity(2 * z + 1);
    let mut rhs = Vec::with_capacity(2 * z + 1);

    // balance rows: sum_(s,a) (delta(s, s2) - q(s2 | s, a)) x_sa = 0
    for s2 in 1..=z {
        let mut row = vec![0.0; ncols];
        for st in smdp.states() {
            for a in &st.actions {
                let delta = if st.id == s2 { 1.0 } else { 0.0 };
                row[idx.x(st.id, a.id)] = delta - to_f64(&a.transitions[s2 - 1]);
            }
        }
        rows.push(row);
        rhs.push(0.0);
    }

    // reachability rows: sum_a x_(s2,a) + sum_(s,a) (delta - q) y_sa = 0,
    // with -t on the initial state's row
    for s2 in 1..=z {
        let mut row = vec![0.0; ncols];
        for a in &smdp.state(s2).actions {
            row[idx.x(s2, a.id)] = 1.0;
        }
        for st in smdp.states() {
            for a in &st.actions {
                let delta = if st.id == s2 { 1.0 } else { 0.0 };
                row[idx.y(st.id, a.id)] = delta - to_f64(&a.transitions[s2 - 1]);
            }
        }
        if s2 == initial_state {
            row[idx.t()] = -1.0;
        }
        rows.push(row);
        rhs.push(0.0);
    }

    // normalization: sum tau(s,a) x_sa = 1
    let mut row = vec![0.0; ncols];
    for st in smdp.states() {
        for a in &st.actions {
            row[idx.x(st.id, a.id)] = to_f64(&a.sojourn);
        }
    }
    rows.push(row);
    rhs.push(1.0);

    LpProblem { sense: Sense::Maximize, objective, rows, rhs, labels }
}

/// Builds the primal (gain/bias) program for one initial state. Inequalities
/// get nonnegative slacks; the free variables `v`, `g_s`, `h_s` are split
/// into nonnegative differences.
pub fn build_primal(smdp: &Smdp, initial_state: usize) -> LpProblem {
    let z = smdp.num_states();
    let pairs = smdp.state_action_pairs();
    let nrows = 2 * pairs + 1;
    let free_cols = 2 * (1 + 2 * z);
    let ncols = free_cols + nrows;

    let v_col = |negative: bool| negative as usize;
    let g_col = |s: usize, negative: bool| 2 + 2 * (s - 1) + negative as usize;
    let h_col = |s: usize, negative: bool| 2 + 2 * z + 2 * (s - 1) + negative as usize;
    let slack_col = |r: usize| free_cols + r;

    let mut labels = Vec::with_capacity(ncols);
    labels.push(VarLabel::V { negative: false });
    labels.push(VarLabel::V { negative: true });
    for s in 1..=z {
        labels.push(VarLabel::G { state: s, negative: false });
        labels.push(VarLabel::G { state: s, negative: true });
    }
    for s in 1..=z {
        labels.push(VarLabel::H { state: s, negative: false });
        labels.push(VarLabel::H { state: s, negative: true });
    }
    for r in 0..nrows {
        labels.push(VarLabel::Slack { row: r });
    }
    debug_assert_eq!(labels.len(), ncols);

    let mut objective = vec![0.0; ncols];
    objective[v_col(false)] = 1.0;
    objective[v_col(true)] = -1.0;

    let mut rows = Vec::with_capacity(nrows);
    let mut rhs = Vec::with_capacity(nrows);
    let set_free = |row: &mut Vec<f64>, pos: usize, neg: usize, coeff: f64| {
        row[pos] += coeff;
        row[neg] -= coeff;
    };

    // gain rows: g_s - sum q(s2|s,a) g_s2 >= 0
    let mut row_no = 0;
    for st in smdp.states() {
        for a in &st.actions {
            let mut row = vec![0.0; ncols];
            for s2 in 1..=z {
                let delta = if st.id == s2 { 1.0 } else { 0.0 };
                let coeff = delta - to_f64(&a.transitions[s2 - 1]);
                if coeff != 0.0 {
                    set_free(&mut row, g_col(s2, false), g_col(s2, true), coeff);
                }
            }
            row[slack_col(row_no)] = -1.0;
            rows.push(row);
            rhs.push(0.0);
            row_no += 1;
        }
    }

    // bias rows: g_s + h_s + v tau(s,a) - sum q(s2|s,a) h_s2 >= r(s,a)
    for st in smdp.states() {
        for a in &st.actions {
            let mut row = vec![0.0; ncols];
            set_free(&mut row, g_col(st.id, false), g_col(st.id, true), 1.0);
            set_free(&mut row, v_col(false), v_col(true), to_f64(&a.sojourn));
            for s2 in 1..=z {
                let delta = if st.id == s2 { 1.0 } else { 0.0 };
                let coeff = delta - to_f64(&a.transitions[s2 - 1]);
                if coeff != 0.0 {
                    set_free(&mut row, h_col(s2, false), h_col(s2, true), coeff);
                }
            }
            row[slack_col(row_no)] = -1.0;
            rows.push(row);
            rhs.push(to_f64(&a.reward));
            row_no += 1;
        }
    }

    // the initial state's gain is capped at zero: g_s1 <= 0
    let mut row = vec![0.0; ncols];
    set_free(&mut row, g_col(initial_state, false), g_col(initial_state, true), 1.0);
    row[slack_col(row_no)] = 1.0;
    rows.push(row);
    rhs.push(0.0);

    LpProblem { sense: Sense::Minimize, objective, rows, rhs, labels }
}

/// Applies the extraction rule to a basic optimal dual solution: states with
/// positive `x` mass take their positive-`x` action, states with positive
/// `y` mass take their positive-`y` action, and the rest default to the
/// smallest action id. Ties among positive entries break to the smallest id.
pub fn extract_strategy(lp: &LpProblem, sol: &LpSolution, smdp: &Smdp) -> PureStationaryPolicy {
    let value = |label: VarLabel| -> f64 {
        lp.column(label).map_or(0.0, |j| sol.values.get(j).copied().unwrap_or(0.0))
    };
    let mut actions = Vec::with_capacity(smdp.num_states());
    for st in smdp.states() {
        let pick = |kind: &dyn Fn(usize) -> VarLabel| -> Option<usize> {
            let sum: f64 = st.actions.iter().map(|a| value(kind(a.id))).sum();
            if sum > POSITIVITY_TOL {
                let first = st
                    .actions
                    .iter()
                    .find(|a| value(kind(a.id)) > POSITIVITY_TOL)
                    .map(|a| a.id);
                first.or_else(|| {
                    // positive sum of sub-threshold entries; take the largest
                    st.actions
                        .iter()
                        .max_by(|a, b| value(kind(a.id)).total_cmp(&value(kind(b.id))))
                        .map(|a| a.id)
                })
            } else {
                None
            }
        };
        let s = st.id;
        let x_pick = pick(&|a| VarLabel::X { state: s, action: a });
        let y_pick = pick(&|a| VarLabel::Y { state: s, action: a });
        actions.push(x_pick.or(y_pick).unwrap_or(1));
    }
    PureStationaryPolicy::new(actions)
}

/// Solution of the per-initial-state pipeline: one extracted stationary row
/// per initial state, the dual objective per initial state, and the pivot
/// count of each solve.
#[derive(Debug, Clone)]
pub struct SemiStationarySolution {
    pub strategy: SemiStationaryStrategy,
    pub values: Vec<f64>,
    pub pivots: Vec<usize>,
}

/// Builds, solves, and extracts the dual program for every initial state.
pub fn solve_semi_stationary(smdp: &Smdp) -> Result<SemiStationarySolution, LpError> {
    solve_semi_stationary_parallel(smdp, 1)
}

/// As `solve_semi_stationary`, fanning the independent per-initial-state
/// solves out over at most `threads` worker threads. Results are assembled
/// in initial-state order, so the outcome does not depend on scheduling.
pub fn solve_semi_stationary_parallel(
    smdp: &Smdp,
    threads: usize,
) -> Result<SemiStationarySolution, LpError> {
    let z = smdp.num_states();
    let solve_one = |s1: usize| -> Result<(PureStationaryPolicy, f64, usize), LpError> {
        let lp = build_dlp(smdp, s1);
        let sol = simplex_solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(LpError::UnexpectedStatus { initial_state: s1, status: sol.status });
        }
        let policy = extract_strategy(&lp, &sol, smdp);
        Ok((policy, sol.objective, sol.pivots))
    };

    let results: Vec<Result<(PureStationaryPolicy, f64, usize), LpError>> = if threads <= 1 || z <= 1
    {
        (1..=z).map(solve_one).collect()
    } else {
        let workers = threads.min(z);
        let next = std::sync::atomic::AtomicUsize::new(1);
        let results: Vec<std::sync::Mutex<Option<_>>> =
            (0..z).map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let s1 = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if s1 > z {
                        break;
                    }
                    *results[s1 - 1].lock().unwrap() = Some(solve_one(s1));
                });
            }
        });
        results
            .into_iter()
            .map(|cell| cell.into_inner().unwrap().expect("worker filled every slot"))
            .collect()
    };

    let mut rows = BTreeMap::new();
    let mut values = Vec::with_capacity(z);
    let mut pivots = Vec::with_capacity(z);
    for (s1, result) in (1..=z).zip(results) {
        let (policy, objective, pivot_count) = result?;
        rows.insert(s1, policy);
        values.push(objective);
        pivots.push(pivot_count);
    }
    Ok(SemiStationarySolution { strategy: SemiStationaryStrategy::new(rows), values, pivots })
}
