//! Shared instances for the benchmarks.

use mwgames::generators::{from_3sat, random_cnf, random_game};
use mwgames::GameGraph;

/// Seeded random games with `states` states, weights in `[-2, 2]` and half
/// of the states owned by player 2.
pub fn game_family(states: usize, dim: usize, count: u64) -> Vec<GameGraph> {
    (0..count).map(|seed| random_game(states, dim, 2, 0.5, seed)).collect()
}

/// Energy games reduced from random 3-CNF formulas.
pub fn sat_family(vars: usize, clauses: usize, count: u64) -> Vec<GameGraph> {
    (0..count).map(|seed| from_3sat(&random_cnf(vars, clauses, seed))).collect()
}
