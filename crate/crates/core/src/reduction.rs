//! Reduction of a perfect-information game to a single-controller
//! semi-Markov decision process, and the lifting of solved strategies back
//! to per-player profiles.
//!
//! At every state only the owner has a real choice, so the game collapses to
//! an SMDP over the same state space: the action set at each state is the
//! owner's, the kernel and sojourn times carry over unchanged, and the reward
//! is spliced from the owners (`r_hat(s, a) = r_owner(s)(s, a)`).

use crate::game::{GameInstance, SemiStationaryStrategy, StrategyProfile};
use crate::rational::Rational;

/// One action of an SMDP: scalar reward, dense transition row, sojourn time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmdpAction {
    pub id: usize,
    pub reward: Rational,
    pub transitions: Vec<Rational>,
    pub sojourn: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmdpState {
    pub id: usize,
    pub actions: Vec<SmdpAction>,
}

/// Single-controller semi-Markov decision process with states `1..=z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smdp {
    states: Vec<SmdpState>,
}

impl Smdp {
    pub fn new(states: Vec<SmdpState>) -> Self {
        Smdp { states }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[SmdpState] {
        &self.states
    }

    /// State lookup by 1-based id.
    pub fn state(&self, s: usize) -> &SmdpState {
        &self.states[s - 1]
    }

    /// Action lookup by 1-based state and action ids.
    pub fn action(&self, s: usize, a: usize) -> &SmdpAction {
        &self.states[s - 1].actions[a - 1]
    }

    pub fn num_actions(&self, s: usize) -> usize {
        self.states[s - 1].actions.len()
    }

    /// Total number of state-action pairs.
    pub fn state_action_pairs(&self) -> usize {
        self.states.iter().map(|st| st.actions.len()).sum()
    }
}

/// Collapses a game to its induced SMDP with owner-spliced rewards.
pub fn reduce(game: &GameInstance) -> Smdp {
    let states = game
        .states()
        .iter()
        .map(|st| SmdpState {
            id: st.id,
            actions: st
                .actions
                .iter()
                .map(|a| SmdpAction {
                    id: a.id,
                    reward: a.rewards[st.owner - 1].clone(),
                    transitions: a.transitions.clone(),
                    sojourn: a.sojourn.clone(),
                })
                .collect(),
        })
        .collect();
    Smdp::new(states)
}

/// Lifts an SMDP semi-stationary strategy to a per-player profile: player `i`
/// copies the strategy on the states it owns and plays the single dummy
/// action (id 1) everywhere else.
pub fn lift_strategy(fhat: &SemiStationaryStrategy, game: &GameInstance) -> StrategyProfile {
    let strategies = (1..=game.num_players())
        .map(|player| {
            let rows = fhat
                .rows()
                .iter()
                .map(|(&s1, policy)| {
                    let actions = game
                        .states()
                        .iter()
                        .map(|st| if st.owner == player { policy.action(st.id) } else { 1 })
                        .collect();
                    (s1, crate::eval::PureStationaryPolicy::new(actions))
                })
                .collect();
            SemiStationaryStrategy::new(rows)
        })
        .collect();
    StrategyProfile::new(strategies)
}
