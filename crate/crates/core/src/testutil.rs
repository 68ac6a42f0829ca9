//! Fixtures shared by the unit tests.

use crate::game::{ActionSpec, GameInstance, StateSpec};
use crate::rational::{integer, ratio, Rational};
use crate::reduction::{reduce, Smdp};

fn action(id: usize, rewards: [i64; 2], transitions: [(i64, i64); 5], sojourn: Rational) -> ActionSpec {
    ActionSpec {
        id,
        rewards: rewards.iter().map(|&r| integer(r)).collect(),
        transitions: transitions.iter().map(|&(n, d)| ratio(n, d)).collect(),
        sojourn,
    }
}

/// Five-state two-player sample game: player 1 owns states 1, 2, 5 with two
/// actions at 1 and 2; player 2 owns states 3 and 4 with two actions each.
pub fn five_state_game() -> GameInstance {
    let states = vec![
        StateSpec {
            id: 1,
            owner: 1,
            actions: vec![
                action(1, [13, 2], [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1)], integer(4)),
                action(2, [9, 1], [(0, 1), (0, 1), (0, 1), (1, 1), (0, 1)], integer(2)),
            ],
        },
        StateSpec {
            id: 2,
            owner: 1,
            actions: vec![
                action(1, [4, 2], [(0, 1), (1, 1), (0, 1), (0, 1), (0, 1)], integer(2)),
                action(2, [3, 1], [(0, 1), (1, 1), (0, 1), (0, 1), (0, 1)], ratio(8, 5)),
            ],
        },
        StateSpec {
            id: 3,
            owner: 2,
            actions: vec![
                action(1, [4, 7], [(1, 3), (2, 3), (0, 1), (0, 1), (0, 1)], integer(2)),
                action(2, [1, 3], [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1)], ratio(3, 2)),
            ],
        },
        StateSpec {
            id: 4,
            owner: 2,
            actions: vec![
                action(1, [6, 15], [(1, 1), (0, 1), (0, 1), (0, 1), (0, 1)], integer(5)),
                action(2, [7, 0], [(0, 1), (0, 1), (0, 1), (0, 1), (1, 1)], integer(1)),
            ],
        },
        StateSpec {
            id: 5,
            owner: 1,
            actions: vec![action(
                1,
                [5, 2],
                [(0, 1), (0, 1), (1, 1), (0, 1), (0, 1)],
                integer(3),
            )],
        },
    ];
    GameInstance::new(2, states)
}

pub fn five_state_smdp() -> Smdp {
    reduce(&five_state_game())
}

/// One-player, one-state, one-action game with the given reward and sojourn.
pub fn single_state_game(reward: Rational, sojourn: Rational) -> GameInstance {
    GameInstance::new(
        1,
        vec![StateSpec {
            id: 1,
            owner: 1,
            actions: vec![ActionSpec {
                id: 1,
                rewards: vec![reward],
                transitions: vec![integer(1)],
                sojourn,
            }],
        }],
    )
}
