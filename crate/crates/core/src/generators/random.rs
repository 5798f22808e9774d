use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{GameBuilder, GameGraph, Player};

/// Seeded random game: each state gets one to three edges to distinct
/// targets with weights drawn from `[−W, W]`. States are player 2 with
/// probability `p2_fraction`.
pub fn random_game(states: usize, dim: usize, max_weight: i64, p2_fraction: f64, seed: u64) -> GameGraph {
    let n = states.max(1);
    let k = dim.max(1);
    let w = max_weight.max(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GameBuilder::new(k);
    for i in 0..n {
        let owner = if rng.gen_bool(p2_fraction.clamp(0.0, 1.0)) {
            Player::Two
        } else {
            Player::One
        };
        b.state(format!("s{i}"), owner);
    }
    for s in 0..n {
        let degree = rng.gen_range(1..=n.min(3));
        for t in sample(&mut rng, n, degree).into_vec() {
            let weight: Vec<i64> = (0..k).map(|_| rng.gen_range(-w..=w)).collect();
            b.auto_edge(s, t, weight);
        }
    }
    b.build(0).expect("every state has an edge")
}
