//! JSON wire formats: game instances, reduced processes, and strategy files.
//!
//! Rationals travel as strings (`"1/3"`, `"1.6"`, `"4"`); state and action
//! ids are positive integers. Transition maps omit zero entries and emit in
//! key order, so re-serializing a parsed instance is deterministic.

use crate::eval::PureStationaryPolicy;
use crate::game::{ActionSpec, GameInstance, SemiStationaryStrategy, StateSpec, StrategyProfile};
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};
use crate::reduction::{Smdp, SmdpAction, SmdpState};
use num::traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("bad state reference `{0}`: expected an integer in 1..={1}")]
    BadStateRef(String, usize),
    #[error("strategy row for initial state {initial_state} addresses unknown state {state}")]
    BadStrategyRow { initial_state: usize, state: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameDto {
    pub players: usize,
    pub states: Vec<StateDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDto {
    pub id: usize,
    pub owner: usize,
    pub actions: Vec<ActionDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDto {
    pub id: usize,
    pub rewards: Vec<String>,
    pub transitions: BTreeMap<String, String>,
    pub sojourn: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmdpDto {
    pub states: Vec<SmdpStateDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmdpStateDto {
    pub id: usize,
    pub actions: Vec<SmdpActionDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmdpActionDto {
    pub id: usize,
    pub reward: String,
    pub transitions: BTreeMap<String, String>,
    pub sojourn: String,
}

/// One player's semi-stationary strategy: `rows[initial_state][state]` is
/// the chosen action id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyDto {
    pub player: usize,
    pub rows: BTreeMap<String, BTreeMap<String, usize>>,
}

fn dense_row(
    map: &BTreeMap<String, String>,
    num_states: usize,
) -> Result<Vec<Rational>, IoError> {
    let mut row = vec![Rational::zero(); num_states];
    for (key, value) in map {
        let state: usize = key
            .parse()
            .ok()
            .filter(|&s| s >= 1 && s <= num_states)
            .ok_or_else(|| IoError::BadStateRef(key.clone(), num_states))?;
        row[state - 1] = parse_rational(value)?;
    }
    Ok(row)
}

fn sparse_row(row: &[Rational]) -> BTreeMap<String, String> {
    row.iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| ((j + 1).to_string(), format_rational(p)))
        .collect()
}

pub fn game_from_dto(dto: &GameDto) -> Result<GameInstance, IoError> {
    let z = dto.states.len();
    let states = dto
        .states
        .iter()
        .map(|st| {
            let actions = st
                .actions
                .iter()
                .map(|a| {
                    Ok(ActionSpec {
                        id: a.id,
                        rewards: a
                            .rewards
                            .iter()
                            .map(|r| parse_rational(r))
                            .collect::<Result<_, _>>()?,
                        transitions: dense_row(&a.transitions, z)?,
                        sojourn: parse_rational(&a.sojourn)?,
                    })
                })
                .collect::<Result<_, IoError>>()?;
            Ok(StateSpec { id: st.id, owner: st.owner, actions })
        })
        .collect::<Result<_, IoError>>()?;
    Ok(GameInstance::new(dto.players, states))
}

pub fn game_to_dto(game: &GameInstance) -> GameDto {
    GameDto {
        players: game.num_players(),
        states: game
            .states()
            .iter()
            .map(|st| StateDto {
                id: st.id,
                owner: st.owner,
                actions: st
                    .actions
                    .iter()
                    .map(|a| ActionDto {
                        id: a.id,
                        rewards: a.rewards.iter().map(format_rational).collect(),
                        transitions: sparse_row(&a.transitions),
                        sojourn: format_rational(&a.sojourn),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn parse_game(json: &str) -> Result<GameInstance, IoError> {
    let dto: GameDto = serde_json::from_str(json)?;
    game_from_dto(&dto)
}

pub fn game_to_json(game: &GameInstance) -> String {
    serde_json::to_string_pretty(&game_to_dto(game)).expect("game serialization cannot fail")
}

pub fn smdp_to_dto(smdp: &Smdp) -> SmdpDto {
    SmdpDto {
        states: smdp
            .states()
            .iter()
            .map(|st| SmdpStateDto {
                id: st.id,
                actions: st
                    .actions
                    .iter()
                    .map(|a| SmdpActionDto {
                        id: a.id,
                        reward: format_rational(&a.reward),
                        transitions: sparse_row(&a.transitions),
                        sojourn: format_rational(&a.sojourn),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn smdp_from_dto(dto: &SmdpDto) -> Result<Smdp, IoError> {
    let z = dto.states.len();
    let states = dto
        .states
        .iter()
        .map(|st| {
            let actions = st
                .actions
                .iter()
                .map(|a| {
                    Ok(SmdpAction {
                        id: a.id,
                        reward: parse_rational(&a.reward)?,
                        transitions: dense_row(&a.transitions, z)?,
                        sojourn: parse_rational(&a.sojourn)?,
                    })
                })
                .collect::<Result<_, IoError>>()?;
            Ok(SmdpState { id: st.id, actions })
        })
        .collect::<Result<_, IoError>>()?;
    Ok(Smdp::new(states))
}

pub fn smdp_to_json(smdp: &Smdp) -> String {
    serde_json::to_string_pretty(&smdp_to_dto(smdp)).expect("smdp serialization cannot fail")
}

pub fn parse_smdp(json: &str) -> Result<Smdp, IoError> {
    let dto: SmdpDto = serde_json::from_str(json)?;
    smdp_from_dto(&dto)
}

pub fn strategy_to_dto(strategy: &SemiStationaryStrategy, player: usize) -> StrategyDto {
    StrategyDto {
        player,
        rows: strategy
            .rows()
            .iter()
            .map(|(s1, policy)| {
                let row = policy
                    .actions()
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| ((i + 1).to_string(), a))
                    .collect();
                (s1.to_string(), row)
            })
            .collect(),
    }
}

pub fn strategy_from_dto(dto: &StrategyDto, num_states: usize) -> Result<SemiStationaryStrategy, IoError> {
    let mut rows = BTreeMap::new();
    for (key, row) in &dto.rows {
        let s1: usize = key
            .parse()
            .ok()
            .filter(|&s| s >= 1 && s <= num_states)
            .ok_or_else(|| IoError::BadStateRef(key.clone(), num_states))?;
        let mut actions = vec![0usize; num_states];
        for (state_key, &action) in row {
            let state: usize = state_key
                .parse()
                .ok()
                .filter(|&s| s >= 1 && s <= num_states)
                .ok_or_else(|| IoError::BadStrategyRow { initial_state: s1, state: 0 })?;
            actions[state - 1] = action;
        }
        rows.insert(s1, PureStationaryPolicy::new(actions));
    }
    Ok(SemiStationaryStrategy::new(rows))
}

/// Serializes a whole profile as an array of per-player strategy objects.
pub fn profile_to_json(profile: &StrategyProfile) -> String {
    let dtos: Vec<StrategyDto> = profile
        .strategies()
        .iter()
        .enumerate()
        .map(|(i, s)| strategy_to_dto(s, i + 1))
        .collect();
    serde_json::to_string_pretty(&dtos).expect("strategy serialization cannot fail")
}

/// Accepts either a single strategy object or an array of them; entries are
/// placed by their `player` field.
pub fn profile_from_json(json: &str, num_players: usize, num_states: usize) -> Result<StrategyProfile, IoError> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    let dtos: Vec<StrategyDto> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    let empty = SemiStationaryStrategy::new(BTreeMap::new());
    let mut strategies = vec![empty; num_players];
    for dto in &dtos {
        if dto.player < 1 || dto.player > num_players {
            return Err(IoError::BadStateRef(format!("player {}", dto.player), num_players));
        }
        strategies[dto.player - 1] = strategy_from_dto(dto, num_states)?;
    }
    Ok(StrategyProfile::new(strategies))
}
