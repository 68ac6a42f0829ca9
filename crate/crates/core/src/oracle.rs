//! Exact complete-enumeration solver and Nash-deviation verification.
//!
//! Enumeration evaluates every pure stationary policy with the exact Cesaro
//! evaluator and takes per-initial-state maxima; it is the independent check
//! on the LP path, not the production solver. The deviation checker fixes
//! all but one player and compares the profile's payoff against the best
//! response found by enumeration on the induced process.
//!
//! Two verification modes exist because the equilibrium notion accumulates a
//! player's own reward over the whole trajectory, while the reduction
//! optimizes the owner-spliced reward; the modes coincide for one player but
//! not in general, so both are reported rather than silently equated.

use crate::eval::{build_chain_for_profile, chain_values, eval_policy, EvalError, PureStationaryPolicy};
use crate::game::{induced_smdp, GameError, GameInstance, RewardMode, SemiStationaryStrategy, StrategyProfile};
use crate::rational::Rational;
use crate::reduction::Smdp;
use num::BigUint;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default bound on the number of policies an enumeration may visit.
pub const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{count} pure stationary policies exceed the cap of {cap}")]
    CapExceeded { count: BigUint, cap: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Exact number of pure stationary policies of the process.
pub fn policy_count(smdp: &Smdp) -> BigUint {
    smdp.states()
        .iter()
        .map(|st| BigUint::from(st.actions.len()))
        .product()
}

/// All pure stationary policies in lexicographic order (first state varies
/// slowest), or `CapExceeded` with the exact count.
pub fn enumerate_policies(smdp: &Smdp, cap: u64) -> Result<Vec<PureStationaryPolicy>, OracleError> {
    let count = policy_count(smdp);
    if count > BigUint::from(cap) {
        return Err(OracleError::CapExceeded { count, cap });
    }
    let z = smdp.num_states();
    let mut out = Vec::new();
    let mut current = vec![1usize; z];
    loop {
        out.push(PureStationaryPolicy::new(current.clone()));
        // odometer increment, last state fastest
        let mut pos = z;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if current[pos] < smdp.num_actions(pos + 1) {
                current[pos] += 1;
                for later in current.iter_mut().skip(pos + 1) {
                    *later = 1;
                }
                break;
            }
        }
    }
}

/// Full enumeration result: the policy table with exact value vectors, the
/// per-initial-state maxima with their argmax sets, and the assembled
/// optimal semi-stationary strategy (first argmax in lexicographic order).
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult {
    pub policies: Vec<PureStationaryPolicy>,
    pub values: Vec<Vec<Rational>>,
    pub best_values: Vec<Rational>,
    pub argmax: Vec<Vec<usize>>,
    pub strategy: SemiStationaryStrategy,
}

/// Evaluates every pure stationary policy exactly and takes exact maxima.
pub fn oracle_solve(smdp: &Smdp, cap: u64) -> Result<EnumerationResult, OracleError> {
    let policies = enumerate_policies(smdp, cap)?;
    let values: Vec<Vec<Rational>> = policies
        .iter()
        .map(|f| eval_policy(smdp, f))
        .collect::<Result<_, _>>()?;
    let z = smdp.num_states();
    let mut best_values = Vec::with_capacity(z);
    let mut argmax = Vec::with_capacity(z);
    let mut rows = BTreeMap::new();
    for s in 0..z {
        let best = values
            .iter()
            .map(|v| &v[s])
            .max()
            .expect("at least one policy")
            .clone();
        let winners: Vec<usize> = (0..policies.len()).filter(|&k| values[k][s] == best).collect();
        rows.insert(s + 1, policies[winners[0]].clone());
        best_values.push(best);
        argmax.push(winners);
    }
    Ok(EnumerationResult {
        policies,
        values,
        best_values,
        argmax,
        strategy: SemiStationaryStrategy::new(rows),
    })
}

/// Best payoff player `player` can reach at `initial_state` by a pure
/// stationary deviation, everyone else held to `others`, with a witness.
pub fn best_response_value(
    game: &GameInstance,
    player: usize,
    others: &StrategyProfile,
    initial_state: usize,
    reward_mode: RewardMode,
    cap: u64,
) -> Result<(Rational, PureStationaryPolicy), OracleError> {
    let induced = induced_smdp(game, player, others, initial_state, reward_mode)?;
    let result = oracle_solve(&induced, cap)?;
    let s = initial_state - 1;
    let winner = result.argmax[s][0];
    Ok((result.best_values[s].clone(), result.policies[winner].clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Compare owner-spliced payoffs, the criterion the reduction optimizes.
    Lemma,
    /// Compare each player's own accumulated reward.
    Definition3,
}

impl VerifyMode {
    pub fn reward_mode(self) -> RewardMode {
        match self {
            VerifyMode::Lemma => RewardMode::Spliced,
            VerifyMode::Definition3 => RewardMode::Own,
        }
    }
}

impl std::fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyMode::Lemma => f.write_str("lemma"),
            VerifyMode::Definition3 => f.write_str("definition3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationRow {
    pub player: usize,
    pub initial_state: usize,
    pub equilibrium: Rational,
    pub best_response: Rational,
    pub improving: bool,
    /// Deviating policy when improving; actions are meaningful on the
    /// player's own states and 1 elsewhere.
    pub witness: Option<PureStationaryPolicy>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub mode: VerifyMode,
    pub rows: Vec<DeviationRow>,
}

impl DeviationReport {
    pub fn no_improvement(&self) -> bool {
        self.rows.iter().all(|r| !r.improving)
    }
}

/// Checks the profile against every unilateral pure stationary deviation,
/// per player and per initial state. A deviation is improving when it beats
/// the profile's payoff by more than `tol`.
pub fn verify_nash(
    game: &GameInstance,
    profile: &StrategyProfile,
    mode: VerifyMode,
    tol: &Rational,
    cap: u64,
) -> Result<DeviationReport, OracleError> {
    let z = game.num_states();
    let n = game.num_players();
    let mut rows = Vec::with_capacity(n * z);
    for player in 1..=n {
        for s1 in 1..=z {
            let joint = profile.joint_row(game, s1)?;
            let chain = build_chain_for_profile(game, &joint)?;
            let values = chain_values(&chain)?;
            let equilibrium = match mode {
                VerifyMode::Lemma => values[n][s1 - 1].clone(),
                VerifyMode::Definition3 => values[player - 1][s1 - 1].clone(),
            };
            let (best_response, witness) =
                best_response_value(game, player, profile, s1, mode.reward_mode(), cap)?;
            let improving = best_response > &equilibrium + tol;
            rows.push(DeviationRow {
                player,
                initial_state: s1,
                equilibrium,
                best_response,
                improving,
                witness: improving.then_some(witness),
            });
        }
    }
    Ok(DeviationReport { mode, rows })
}
