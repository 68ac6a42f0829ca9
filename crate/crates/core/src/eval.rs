//! Analytic payoff evaluation of pure stationary strategies.
//!
//! The limiting ratio average payoff of a stationary row is the
//! component-wise ratio `[Q* r](s) / [Q* tau](s)` where `Q*` is the Cesaro
//! limit of the one-step kernel. Everything here is exact rational; decimal
//! rounding happens only at display time.

use crate::game::{GameError, GameInstance, StrategyProfile};
use crate::ratmat::{cesaro_limit, RationalMatrix, RatmatError};
use crate::rational::Rational;
use crate::reduction::Smdp;
use num::traits::Signed;
use thiserror::Error;

/// One action per state, 1-based ids, indexed by state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureStationaryPolicy {
    actions: Vec<usize>,
}

impl PureStationaryPolicy {
    pub fn new(actions: Vec<usize>) -> Self {
        PureStationaryPolicy { actions }
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Action at a 1-based state id.
    pub fn action(&self, s: usize) -> usize {
        self.actions[s - 1]
    }
}

impl std::fmt::Display for PureStationaryPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.actions.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Which reward stream a chain carries: one per player for game chains, plus
/// the owner-spliced stream; a plain SMDP has only the spliced stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Player(usize),
    Spliced,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Criterion::Player(i) => write!(f, "player {i}"),
            Criterion::Spliced => write!(f, "spliced"),
        }
    }
}

/// The Markov chain induced by a stationary row: kernel, one reward vector
/// per criterion, and the sojourn-time vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainData {
    pub q: RationalMatrix,
    pub criteria: Vec<Criterion>,
    pub rewards: Vec<Vec<Rational>>,
    pub sojourns: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("policy assigns invalid action {action} at state {state}")]
    InvalidPolicy { state: usize, action: usize },
    #[error("policy length {len} does not match state count {states}")]
    PolicyLength { len: usize, states: usize },
    #[error("zero accumulated sojourn time at state {state}; sojourn bounds violated")]
    ZeroDenominator { state: usize },
    #[error(transparent)]
    Ratmat(#[from] RatmatError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Reads the chain induced on an SMDP by a pure stationary policy.
pub fn build_chain(smdp: &Smdp, policy: &PureStationaryPolicy) -> Result<ChainData, EvalError> {
    let z = smdp.num_states();
    if policy.len() != z {
        return Err(EvalError::PolicyLength { len: policy.len(), states: z });
    }
    let mut rows = Vec::with_capacity(z);
    let mut rewards = Vec::with_capacity(z);
    let mut sojourns = Vec::with_capacity(z);
    for s in 1..=z {
        let a = policy.action(s);
        if a < 1 || a > smdp.num_actions(s) {
            return Err(EvalError::InvalidPolicy { state: s, action: a });
        }
        let action = smdp.action(s, a);
        rows.push(action.transitions.clone());
        rewards.push(action.reward.clone());
        sojourns.push(action.sojourn.clone());
    }
    Ok(ChainData {
        q: RationalMatrix::from_rows(rows),
        criteria: vec![Criterion::Spliced],
        rewards: vec![rewards],
        sojourns,
    })
}

/// Reads the chain induced on a game by a joint stationary row; carries one
/// reward vector per player plus the owner-spliced vector.
pub fn build_chain_for_profile(
    game: &GameInstance,
    joint: &PureStationaryPolicy,
) -> Result<ChainData, EvalError> {
    let z = game.num_states();
    let n = game.num_players();
    if joint.len() != z {
        return Err(EvalError::PolicyLength { len: joint.len(), states: z });
    }
    let mut rows = Vec::with_capacity(z);
    let mut player_rewards = vec![Vec::with_capacity(z); n];
    let mut spliced = Vec::with_capacity(z);
    let mut sojourns = Vec::with_capacity(z);
    for st in game.states() {
        let a = joint.action(st.id);
        if a < 1 || a > st.actions.len() {
            return Err(EvalError::InvalidPolicy { state: st.id, action: a });
        }
        let action = &st.actions[a - 1];
        rows.push(action.transitions.clone());
        for (i, stream) in player_rewards.iter_mut().enumerate() {
            stream.push(action.rewards[i].clone());
        }
        spliced.push(action.rewards[st.owner - 1].clone());
        sojourns.push(action.sojourn.clone());
    }
    let mut criteria: Vec<Criterion> = (1..=n).map(Criterion::Player).collect();
    criteria.push(Criterion::Spliced);
    player_rewards.push(spliced);
    Ok(ChainData {
        q: RationalMatrix::from_rows(rows),
        criteria,
        rewards: player_rewards,
        sojourns,
    })
}

/// Per-criterion, per-state values of a chain. The denominator `[Q* tau](s)`
/// is provably positive when sojourn times respect their lower bound.
pub fn chain_values(chain: &ChainData) -> Result<Vec<Vec<Rational>>, EvalError> {
    let star = cesaro_limit(&chain.q)?;
    let denom = star.mul_vec(&chain.sojourns);
    for (s, d) in denom.iter().enumerate() {
        if !d.is_positive() {
            return Err(EvalError::ZeroDenominator { state: s + 1 });
        }
    }
    Ok(chain
        .rewards
        .iter()
        .map(|r| {
            star.mul_vec(r)
                .into_iter()
                .zip(&denom)
                .map(|(num, den)| num / den)
                .collect()
        })
        .collect())
}

/// Exact value vector of a pure stationary policy on an SMDP.
pub fn eval_policy(smdp: &Smdp, policy: &PureStationaryPolicy) -> Result<Vec<Rational>, EvalError> {
    let chain = build_chain(smdp, policy)?;
    Ok(chain_values(&chain)?.pop().expect("one criterion"))
}

/// Per-player payoffs of a profile from one initial state, exact.
pub fn eval_profile(
    game: &GameInstance,
    profile: &StrategyProfile,
    initial_state: usize,
) -> Result<Vec<Rational>, EvalError> {
    let joint = profile.joint_row(game, initial_state)?;
    let chain = build_chain_for_profile(game, &joint)?;
    let values = chain_values(&chain)?;
    Ok(values[..game.num_players()]
        .iter()
        .map(|v| v[initial_state - 1].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{SemiStationaryStrategy, StrategyProfile};
    use crate::rational::{integer, ratio, to_f64};
    use crate::reduction::reduce;
    use crate::testutil::{five_state_game, five_state_smdp, single_state_game};
    use num::traits::Zero;
    use std::collections::BTreeMap;

    fn policy(actions: &[usize]) -> PureStationaryPolicy {
        PureStationaryPolicy::new(actions.to_vec())
    }

    #[test]
    fn chain_reads_sojourns_and_rewards_off_the_actions() {
        let smdp = five_state_smdp();
        let all_first = policy(&[1, 1, 1, 1, 1]);
        let chain = build_chain(&smdp, &all_first).unwrap();
        assert_eq!(
            chain.sojourns,
            vec![integer(4), integer(2), integer(2), integer(5), integer(3)]
        );
        let mixed = policy(&[2, 2, 1, 1, 1]);
        let chain = build_chain(&smdp, &mixed).unwrap();
        assert_eq!(
            chain.rewards[0],
            vec![integer(9), integer(3), integer(7), integer(15), integer(5)]
        );
    }

    #[test]
    fn single_state_chain_is_one_by_one() {
        let game = single_state_game(integer(5), integer(2));
        let smdp = reduce(&game);
        let chain = build_chain(&smdp, &policy(&[1])).unwrap();
        assert_eq!(chain.q.dim(), 1);
        assert_eq!(eval_policy(&smdp, &policy(&[1])).unwrap(), vec![ratio(5, 2)]);
    }

    #[test]
    fn value_vector_of_the_all_first_row() {
        let smdp = five_state_smdp();
        let phi = eval_policy(&smdp, &policy(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(
            phi,
            vec![ratio(13, 4), integer(2), ratio(21, 8), ratio(13, 4), ratio(21, 8)]
        );
    }

    #[test]
    fn value_vector_of_the_optimal_row() {
        let smdp = five_state_smdp();
        let phi = eval_policy(&smdp, &policy(&[2, 2, 1, 1, 1])).unwrap();
        assert_eq!(
            phi,
            vec![ratio(24, 7), ratio(15, 8), ratio(180, 67), ratio(24, 7), ratio(180, 67)]
        );
    }

    #[test]
    fn profile_values_on_the_two_state_cycle() {
        let game = five_state_game();
        let mut p1_rows = BTreeMap::new();
        p1_rows.insert(1, policy(&[2, 1, 1, 1, 1]));
        let mut p2_rows = BTreeMap::new();
        p2_rows.insert(1, policy(&[1, 1, 1, 1, 1]));
        let profile = StrategyProfile::new(vec![
            SemiStationaryStrategy::new(p1_rows),
            SemiStationaryStrategy::new(p2_rows),
        ]);
        let values = eval_profile(&game, &profile, 1).unwrap();
        // cycle 1 -> 4 -> 1: r1 contributions 9 + 6, r2 contributions 1 + 15,
        // times 2 + 5
        assert_eq!(values, vec![ratio(15, 7), ratio(16, 7)]);
    }

    #[test]
    fn single_player_profile_matches_policy_evaluation() {
        let game = single_state_game(integer(5), integer(2));
        let mut rows = BTreeMap::new();
        rows.insert(1, policy(&[1]));
        let profile = StrategyProfile::new(vec![SemiStationaryStrategy::new(rows)]);
        let via_profile = eval_profile(&game, &profile, 1).unwrap();
        let via_policy = eval_policy(&reduce(&game), &policy(&[1])).unwrap();
        assert_eq!(via_profile[0], via_policy[0]);
    }

    #[test]
    fn invalid_policy_is_rejected() {
        let smdp = five_state_smdp();
        assert_eq!(
            eval_policy(&smdp, &policy(&[1, 1, 1, 1, 2])).unwrap_err(),
            EvalError::InvalidPolicy { state: 5, action: 2 }
        );
        assert_eq!(
            eval_policy(&smdp, &policy(&[1, 1])).unwrap_err(),
            EvalError::PolicyLength { len: 2, states: 5 }
        );
    }

    #[test]
    fn scaling_rewards_scales_values_exactly() {
        let smdp = five_state_smdp();
        let c = ratio(7, 3);
        let mut scaled = smdp.clone();
        let states: Vec<_> = scaled
            .states()
            .iter()
            .map(|st| {
                let mut st = st.clone();
                for a in &mut st.actions {
                    a.reward = &a.reward * &c;
                }
                st
            })
            .collect();
        scaled = crate::reduction::Smdp::new(states);
        for actions in [[1, 1, 1, 1, 1], [2, 2, 1, 1, 1], [2, 1, 2, 2, 1]] {
            let f = policy(&actions);
            let base = eval_policy(&smdp, &f).unwrap();
            let lifted = eval_policy(&scaled, &f).unwrap();
            for (b, l) in base.iter().zip(&lifted) {
                assert_eq!(l, &(b * &c));
            }
        }
    }

    /// Averaged-power evaluation: ratio of `(1/n) sum Q^m r` to the same
    /// average of sojourns, in floating point.
    fn averaged_power_value(chain: &ChainData, steps: usize) -> Vec<f64> {
        let z = chain.q.dim();
        let q: Vec<Vec<f64>> = (0..z)
            .map(|i| (0..z).map(|j| to_f64(chain.q.get(i, j))).collect())
            .collect();
        let r0: Vec<f64> = chain.rewards[0].iter().map(to_f64).collect();
        let t0: Vec<f64> = chain.sojourns.iter().map(to_f64).collect();
        let mut r_cur = r0.clone();
        let mut t_cur = t0.clone();
        let mut r_acc = vec![0.0; z];
        let mut t_acc = vec![0.0; z];
        for _ in 0..steps {
            for i in 0..z {
                r_acc[i] += r_cur[i];
                t_acc[i] += t_cur[i];
            }
            let step = |v: &[f64]| -> Vec<f64> {
                (0..z)
                    .map(|i| (0..z).map(|j| q[i][j] * v[j]).sum())
                    .collect()
            };
            r_cur = step(&r_cur);
            t_cur = step(&t_cur);
        }
        (0..z).map(|i| r_acc[i] / t_acc[i]).collect()
    }

    #[test]
    fn exact_values_agree_with_averaged_powers() {
        let smdp = five_state_smdp();
        for actions in [[1, 1, 1, 1, 1], [2, 2, 1, 1, 1], [2, 1, 1, 2, 1], [2, 1, 2, 2, 1]] {
            let f = policy(&actions);
            let chain = build_chain(&smdp, &f).unwrap();
            let exact = eval_policy(&smdp, &f).unwrap();
            let approx = averaged_power_value(&chain, 100_000);
            for (e, a) in exact.iter().zip(&approx) {
                assert!((to_f64(e) - a).abs() < 1e-3, "exact {e} vs averaged {a}");
            }
        }
    }

    #[test]
    fn values_stay_between_reward_rate_bounds() {
        let smdp = five_state_smdp();
        let mut lo: Option<crate::rational::Rational> = None;
        let mut hi: Option<crate::rational::Rational> = None;
        for st in smdp.states() {
            for a in &st.actions {
                let rate = &a.reward / &a.sojourn;
                lo = Some(lo.map_or(rate.clone(), |l| l.min(rate.clone())));
                hi = Some(hi.map_or(rate.clone(), |h| h.max(rate)));
            }
        }
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        for actions in [[1, 1, 1, 1, 1], [2, 2, 1, 1, 1], [1, 2, 2, 1, 1]] {
            for v in eval_policy(&smdp, &policy(&actions)).unwrap() {
                assert!(v >= lo && v <= hi);
            }
        }
        assert!(!lo.is_zero() || !hi.is_zero());
    }
}
