//! Solver and verification toolkit for N-player non-cooperative
//! perfect-information semi-Markov games under the limiting ratio average
//! payoff.
//!
//! The pipeline reduces a game to a single-controller semi-Markov decision
//! process, solves one linear program per initial state to obtain a pure
//! semi-stationary strategy and its value vector, and lifts the result back
//! to a per-player profile. Verification tools cross-check the solver:
//! an exact complete-enumeration oracle, an exact Cesaro-limit evaluator,
//! a best-response deviation checker, and a Monte Carlo simulator.
//!
//! Game data is exact rational throughout; only the LP solver works in
//! floating point.

pub mod cli;
pub mod eval;
pub mod game;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod ratmat;
pub mod rational;
pub mod reduction;
pub mod sim;

#[cfg(test)]
pub(crate) mod testutil;

pub use eval::{build_chain, build_chain_for_profile, eval_policy, eval_profile, ChainData, Criterion, PureStationaryPolicy};
pub use game::{
    induced_smdp, validate, ActionSpec, AssumptionBounds, GameInstance, RewardMode,
    SemiStationaryStrategy, StateSpec, StrategyProfile, ValidationReport,
};
pub use lp::{
    build_dlp, build_primal, extract_strategy, simplex_solve, solve_semi_stationary, LpProblem,
    LpSolution, LpStatus,
};
pub use oracle::{
    best_response_value, enumerate_policies, oracle_solve, verify_nash, DeviationReport,
    EnumerationResult, VerifyMode,
};
pub use ratmat::{cesaro_limit, char_poly, unit_multiplicity, Polynomial, RationalMatrix};
pub use rational::{format_rational, parse_rational, Rational};
pub use reduction::{lift_strategy, reduce, Smdp};
pub use sim::{simulate_payoff, SimConfig, SimEstimate};
