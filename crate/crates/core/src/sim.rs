//! Monte Carlo estimation of the limiting ratio average payoff.
//!
//! Transitions are sampled from the chain kernel; the sojourn contribution
//! of each step is the deterministic expected time of the chosen action
//! (the payoff's denominator is an expectation of expected sojourn times, so
//! means suffice and full sojourn distributions are not needed). Estimates
//! are ratios of reward totals to time totals, pooled across replications so
//! that multichain processes converge to the ratio of expectations.
//!
//! Streams come from ChaCha8 seeded with `seed + replication_index`, so a
//! configuration reproduces its estimate exactly.

use crate::eval::ChainData;
use crate::rational::to_f64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Transitions per replication.
    pub steps: u64,
    pub seed: u64,
    /// 1-based initial state.
    pub initial_state: usize,
    /// Independent trajectories pooled into one estimate.
    pub replications: u32,
}

impl SimConfig {
    pub fn new(steps: u64, seed: u64, initial_state: usize) -> Self {
        SimConfig { steps, seed, initial_state, replications: 1 }
    }
}

/// Pooled estimates, one per reward criterion of the chain, plus the sample
/// standard error of per-replication ratios when there are at least two
/// replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub estimates: Vec<f64>,
    pub std_errors: Option<Vec<f64>>,
}

pub fn simulate_payoff(chain: &ChainData, cfg: &SimConfig) -> SimEstimate {
    assert!(cfg.steps >= 1, "at least one step is required");
    assert!(cfg.replications >= 1, "at least one replication is required");
    let z = chain.q.dim();
    assert!(cfg.initial_state >= 1 && cfg.initial_state <= z, "initial state out of range");

    let kernel: Vec<Vec<f64>> = (0..z)
        .map(|i| (0..z).map(|j| to_f64(chain.q.get(i, j))).collect())
        .collect();
    let rewards: Vec<Vec<f64>> = chain
        .rewards
        .iter()
        .map(|r| r.iter().map(to_f64).collect())
        .collect();
    let sojourns: Vec<f64> = chain.sojourns.iter().map(to_f64).collect();
    let criteria = rewards.len();

    let mut total_reward = vec![0.0; criteria];
    let mut total_time = 0.0;
    let mut per_rep_ratios: Vec<Vec<f64>> = vec![Vec::new(); criteria];

    for rep in 0..cfg.replications {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(rep as u64));
        let mut state = cfg.initial_state - 1;
        let mut rep_reward = vec![0.0; criteria];
        let mut rep_time = 0.0;
        for _ in 0..cfg.steps {
            for (k, r) in rewards.iter().enumerate() {
                rep_reward[k] += r[state];
            }
            rep_time += sojourns[state];
            let u: f64 = rng.random();
            let row = &kernel[state];
            let mut acc = 0.0;
            let mut next = z - 1; // fall through to the last state on rounding
            for (j, p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    next = j;
                    break;
                }
            }
            state = next;
        }
        for k in 0..criteria {
            total_reward[k] += rep_reward[k];
            per_rep_ratios[k].push(rep_reward[k] / rep_time);
        }
        total_time += rep_time;
    }

    let estimates = total_reward.iter().map(|r| r / total_time).collect();
    let std_errors = if cfg.replications >= 2 {
        Some(
            per_rep_ratios
                .iter()
                .map(|ratios| {
                    let n = ratios.len() as f64;
                    let mean = ratios.iter().sum::<f64>() / n;
                    let var =
                        ratios.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
                    (var / n).sqrt()
                })
                .collect(),
        )
    } else {
        None
    };
    SimEstimate { estimates, std_errors }
}
