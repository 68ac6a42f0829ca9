//! Cross-module invariants on seeded random instances.

mod common;

use common::{random_game, random_game_sized};
use pisolve::eval::{eval_policy, PureStationaryPolicy};
use pisolve::game::{
    induced_smdp, validate, AssumptionBounds, GameInstance, RewardMode, SemiStationaryStrategy,
    StrategyProfile,
};
use pisolve::reduction::{lift_strategy, reduce};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[test]
fn random_instances_validate_cleanly() {
    for seed in 0..100 {
        let game = random_game(seed);
        let report = validate(&game, &AssumptionBounds::default());
        assert!(report.ok(), "seed {seed}: {:?}", report.violations());
    }
}

fn random_semi_stationary(game: &GameInstance, seed: u64) -> SemiStationaryStrategy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (1..=game.num_states())
        .map(|s1| {
            let actions = game
                .states()
                .iter()
                .map(|st| rng.random_range(1..=st.actions.len()))
                .collect();
            (s1, PureStationaryPolicy::new(actions))
        })
        .collect::<BTreeMap<_, _>>();
    SemiStationaryStrategy::new(rows)
}

/// Evaluating a strategy on the reduced process agrees exactly with the
/// spliced-reward evaluation of its lifted profile on the game.
#[test]
fn lifting_preserves_spliced_values_exactly() {
    for seed in 0..40 {
        let game = random_game(seed);
        let smdp = reduce(&game);
        let fhat = random_semi_stationary(&game, seed ^ 0xabcd);
        let profile = lift_strategy(&fhat, &game);
        for s1 in 1..=game.num_states() {
            let joint = profile.joint_row(&game, s1).unwrap();
            assert_eq!(joint, *fhat.row(s1).unwrap(), "seed {seed} s1={s1}");
            let via_smdp = eval_policy(&smdp, fhat.row(s1).unwrap()).unwrap();
            let chain = pisolve::eval::build_chain_for_profile(&game, &joint).unwrap();
            let values = pisolve::eval::chain_values(&chain).unwrap();
            let spliced = &values[game.num_players()];
            assert_eq!(&via_smdp, spliced, "seed {seed} s1={s1}");
        }
    }
}

/// With one player the induced process equals the reduction bit for bit in
/// both reward modes.
#[test]
fn single_player_induced_process_equals_reduction() {
    for seed in 0..40 {
        let game = {
            let g = random_game_sized(seed, 5);
            let states = g
                .states()
                .iter()
                .map(|st| pisolve::game::StateSpec {
                    id: st.id,
                    owner: 1,
                    actions: st
                        .actions
                        .iter()
                        .map(|a| pisolve::game::ActionSpec {
                            id: a.id,
                            rewards: vec![a.rewards[0].clone()],
                            transitions: a.transitions.clone(),
                            sojourn: a.sojourn.clone(),
                        })
                        .collect(),
                })
                .collect();
            GameInstance::new(1, states)
        };
        let profile = StrategyProfile::new(vec![random_semi_stationary(&game, seed)]);
        let reduced = reduce(&game);
        for mode in [RewardMode::Own, RewardMode::Spliced] {
            let induced = induced_smdp(&game, 1, &profile, 1, mode).unwrap();
            assert_eq!(induced, reduced, "seed {seed}");
        }
    }
}
