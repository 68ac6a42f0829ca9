//! Shared fixtures for the integration suites: the committed sample
//! instance and a seeded generator of random games with exact rational data.

#![allow(dead_code)]

use pisolve::game::{ActionSpec, GameInstance, StateSpec};
use pisolve::rational::{integer, ratio, Rational};
use pisolve::reduction::{reduce, Smdp};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn five_state_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/five_state.json")
}

pub fn load_five_state() -> GameInstance {
    let text = std::fs::read_to_string(five_state_path()).expect("sample instance exists");
    pisolve::io::parse_game(&text).expect("sample instance parses")
}

pub fn five_state_smdp() -> Smdp {
    reduce(&load_five_state())
}

/// Random game with up to `max_states` states (at least 2), up to 3 actions
/// per state, and up to 3 players. Transition rows are exact rationals that
/// sum to 1; rewards may be negative; sojourn times lie in [1/2, 8].
pub fn random_game_sized(seed: u64, max_states: usize) -> GameInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = rng.random_range(2..=max_states);
    let players = rng.random_range(1..=3);
    let states = (1..=z)
        .map(|id| {
            let owner = rng.random_range(1..=players);
            let num_actions = rng.random_range(1..=3);
            let actions = (1..=num_actions)
                .map(|aid| {
                    let rewards: Vec<Rational> =
                        (0..players).map(|_| integer(rng.random_range(-5..=10))).collect();
                    let support = rng.random_range(1..=3.min(z));
                    let targets = rand::seq::index::sample(&mut rng, z, support);
                    let weights: Vec<i64> =
                        (0..support).map(|_| rng.random_range(1..=4)).collect();
                    let total: i64 = weights.iter().sum();
                    let mut transitions = vec![integer(0); z];
                    for (t, w) in targets.iter().zip(&weights) {
                        transitions[t] = ratio(*w, total);
                    }
                    ActionSpec {
                        id: aid,
                        rewards,
                        transitions,
                        sojourn: ratio(rng.random_range(1..=8), rng.random_range(1..=2)),
                    }
                })
                .collect();
            StateSpec { id, owner, actions }
        })
        .collect();
    GameInstance::new(players, states)
}

pub fn random_game(seed: u64) -> GameInstance {
    random_game_sized(seed, 6)
}

pub fn random_smdp(seed: u64) -> Smdp {
    reduce(&random_game(seed))
}
