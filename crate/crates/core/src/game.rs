//! Domain types for N-player perfect-information semi-Markov games.
//!
//! Every state is owned by exactly one player; the other players are dummies
//! there and hold no explicit action sets. All numeric data is exact
//! rational. Instances are immutable after construction and all operations
//! here are pure, so they can be shared freely across threads.

use crate::eval::PureStationaryPolicy;
use crate::rational::{format_rational, Rational};
use crate::reduction::{Smdp, SmdpAction, SmdpState};
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// One action of the owner at a state: a reward per player, a dense
/// transition row, and the expected sojourn time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub id: usize,
    pub rewards: Vec<Rational>,
    pub transitions: Vec<Rational>,
    pub sojourn: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    pub id: usize,
    pub owner: usize,
    pub actions: Vec<ActionSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    num_players: usize,
    states: Vec<StateSpec>,
}

impl GameInstance {
    pub fn new(num_players: usize, states: Vec<StateSpec>) -> Self {
        GameInstance { num_players, states }
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[StateSpec] {
        &self.states
    }

    /// State lookup by 1-based id.
    pub fn state(&self, s: usize) -> &StateSpec {
        &self.states[s - 1]
    }

    pub fn owner(&self, s: usize) -> usize {
        self.states[s - 1].owner
    }

    pub fn state_action_pairs(&self) -> usize {
        self.states.iter().map(|st| st.actions.len()).sum()
    }
}

/// Bounds for the sojourn-time assumption: `eps <= tau(s, a) <= m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionBounds {
    pub eps: Rational,
    pub m: Rational,
}

impl Default for AssumptionBounds {
    fn default() -> Self {
        AssumptionBounds {
            eps: crate::rational::ratio(1, 1_000_000_000),
            m: crate::rational::integer(1_000_000_000),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Structure,
    StateIds,
    Ownership,
    Actions,
    ActionIds,
    RewardArity,
    Stochasticity,
    SojournBounds,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Structure => "structure",
            Rule::StateIds => "state-ids",
            Rule::Ownership => "ownership",
            Rule::Actions => "actions",
            Rule::ActionIds => "action-ids",
            Rule::RewardArity => "reward-arity",
            Rule::Stochasticity => "stochasticity",
            Rule::SojournBounds => "sojourn-bounds",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    pub location: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.location, self.rule, self.message)
    }
}

/// Outcome of instance validation; `ok()` holds exactly when no rule was
/// violated. Violations are data, not failures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    fn push(&mut self, location: String, rule: Rule, message: String) {
        self.violations.push(Violation { location, rule, message });
    }
}

/// Checks ownership, stochasticity, id numbering, reward arity, and the
/// sojourn-time bounds. Reports every violation found.
pub fn validate(game: &GameInstance, bounds: &AssumptionBounds) -> ValidationReport {
    let mut report = ValidationReport::default();
    let z = game.num_states();
    let n = game.num_players();
    if n < 1 {
        report.push("game".into(), Rule::Structure, "at least one player is required".into());
    }
    if z == 0 {
        report.push("game".into(), Rule::Structure, "at least one state is required".into());
    }
    for (k, st) in game.states().iter().enumerate() {
        let loc_state = format!("state {}", st.id);
        if st.id != k + 1 {
            report.push(
                loc_state.clone(),
                Rule::StateIds,
                format!("state ids must be consecutive from 1; found {} at position {}", st.id, k + 1),
            );
        }
        if st.owner < 1 || st.owner > n {
            report.push(
                loc_state.clone(),
                Rule::Ownership,
                format!("owner {} is not a player in 1..={}", st.owner, n),
            );
        }
        if st.actions.is_empty() {
            report.push(loc_state.clone(), Rule::Actions, "state has no actions".into());
        }
        for (j, action) in st.actions.iter().enumerate() {
            let loc = format!("state {} action {}", st.id, action.id);
            if action.id != j + 1 {
                report.push(
                    loc.clone(),
                    Rule::ActionIds,
                    format!("action ids must be consecutive from 1; found {} at position {}", action.id, j + 1),
                );
            }
            if action.rewards.len() != n {
                report.push(
                    loc.clone(),
                    Rule::RewardArity,
                    format!("expected {} rewards, found {}", n, action.rewards.len()),
                );
            }
            if action.transitions.len() != z {
                report.push(
                    loc.clone(),
                    Rule::Structure,
                    format!("transition row has {} entries for {} states", action.transitions.len(), z),
                );
            } else {
                let mut sum = Rational::zero();
                for (t, p) in action.transitions.iter().enumerate() {
                    if p.is_negative() {
                        report.push(
                            loc.clone(),
                            Rule::Stochasticity,
                            format!("negative probability {} for target state {}", format_rational(p), t + 1),
                        );
                    }
                    sum += p;
                }
                if !sum.is_one() {
                    report.push(
                        loc.clone(),
                        Rule::Stochasticity,
                        format!("transition probabilities sum to {}, not 1", format_rational(&sum)),
                    );
                }
            }
            if action.sojourn < bounds.eps || action.sojourn > bounds.m {
                report.push(
                    loc,
                    Rule::SojournBounds,
                    format!(
                        "expected sojourn time {} outside [{}, {}]",
                        format_rational(&action.sojourn),
                        format_rational(&bounds.eps),
                        format_rational(&bounds.m)
                    ),
                );
            }
        }
    }
    report
}

/// Initial-state-indexed pure stationary rows: one action per state, chosen
/// once per initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiStationaryStrategy {
    rows: BTreeMap<usize, PureStationaryPolicy>,
}

impl SemiStationaryStrategy {
    pub fn new(rows: BTreeMap<usize, PureStationaryPolicy>) -> Self {
        SemiStationaryStrategy { rows }
    }

    pub fn rows(&self) -> &BTreeMap<usize, PureStationaryPolicy> {
        &self.rows
    }

    pub fn row(&self, initial_state: usize) -> Option<&PureStationaryPolicy> {
        self.rows.get(&initial_state)
    }
}

/// One semi-stationary strategy per player, indexed `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    strategies: Vec<SemiStationaryStrategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<SemiStationaryStrategy>) -> Self {
        StrategyProfile { strategies }
    }

    pub fn num_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[SemiStationaryStrategy] {
        &self.strategies
    }

    pub fn strategy(&self, player: usize) -> Option<&SemiStationaryStrategy> {
        self.strategies.get(player - 1)
    }

    /// The joint stationary row for an initial state: at every state, the
    /// owner's chosen action.
    pub fn joint_row(
        &self,
        game: &GameInstance,
        initial_state: usize,
    ) -> Result<PureStationaryPolicy, GameError> {
        let mut actions = Vec::with_capacity(game.num_states());
        for st in game.states() {
            let action = self.assigned_action(st, initial_state)?;
            actions.push(action);
        }
        Ok(PureStationaryPolicy::new(actions))
    }

    fn assigned_action(&self, st: &StateSpec, initial_state: usize) -> Result<usize, GameError> {
        let strat = self
            .strategies
            .get(st.owner - 1)
            .ok_or(GameError::MissingAssignment { player: st.owner, initial_state, state: st.id })?;
        let row = strat
            .row(initial_state)
            .ok_or(GameError::MissingAssignment { player: st.owner, initial_state, state: st.id })?;
        if row.len() < st.id {
            return Err(GameError::MissingAssignment { player: st.owner, initial_state, state: st.id });
        }
        let action = row.action(st.id);
        if action < 1 || action > st.actions.len() {
            return Err(GameError::InvalidAction { player: st.owner, state: st.id, action });
        }
        Ok(action)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("player {player} has no action assigned at state {state} for initial state {initial_state}")]
    MissingAssignment { player: usize, initial_state: usize, state: usize },
    #[error("player {player} assigns invalid action {action} at state {state}")]
    InvalidAction { player: usize, state: usize, action: usize },
}

/// Which reward the induced decision process carries at states the player
/// does not own: the player's own reward, or the owner-spliced reward used by
/// the game-to-SMDP reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewardMode {
    Own,
    Spliced,
}

/// Fixes every player except `player` to the profile's row for
/// `initial_state` and returns the resulting single-controller process.
/// The player keeps its full action sets on the states it owns; every other
/// state collapses to the single fixed action (re-labelled id 1).
pub fn induced_smdp(
    game: &GameInstance,
    player: usize,
    others: &StrategyProfile,
    initial_state: usize,
    reward_mode: RewardMode,
) -> Result<Smdp, GameError> {
    let mut states = Vec::with_capacity(game.num_states());
    for st in game.states() {
        let actions = if st.owner == player {
            st.actions
                .iter()
                .map(|a| SmdpAction {
                    id: a.id,
                    reward: a.rewards[player - 1].clone(),
                    transitions: a.transitions.clone(),
                    sojourn: a.sojourn.clone(),
                })
                .collect()
        } else {
            let fixed = others.assigned_action(st, initial_state)?;
            let a = &st.actions[fixed - 1];
            let reward = match reward_mode {
                RewardMode::Own => a.rewards[player - 1].clone(),
                RewardMode::Spliced => a.rewards[st.owner - 1].clone(),
            };
            vec![SmdpAction {
                id: 1,
                reward,
                transitions: a.transitions.clone(),
                sojourn: a.sojourn.clone(),
            }]
        };
        states.push(SmdpState { id: st.id, actions });
    }
    Ok(Smdp::new(states))
}
