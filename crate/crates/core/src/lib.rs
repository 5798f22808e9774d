//! Exact solvers for multi-dimensional energy and mean-payoff games.
//!
//! Games are finite two-player arenas whose edges carry integer weight
//! vectors. Player 1 wants every dimension to stay nonnegative (energy) or to
//! have a nonnegative long-run average (mean payoff, with liminf or limsup);
//! player 2 opposes. Every decision is exact: linear programs run over
//! rationals and every answer comes with a certificate that can be re-checked.

pub mod certificates;
pub mod error;
pub mod game;
pub mod generators;
pub mod graph;
pub mod lp;
pub mod multi;
pub mod multicycle;
pub mod rational;
pub mod single;

pub use error::{Error, Result};
pub use game::{
    attractor, energy_level, lasso_mean_payoff, parse_game, restrict, scc_decomposition, serialize_game,
    shift_weights, Edge, EdgeId, GameBuilder, GameGraph, LassoPlay, ObjectiveKind, ObjectiveSpec, PlayPrefix,
    Player, State, StateId, StateSet, WeightVector,
};
pub use graph::{Arc, Digraph};
pub use lp::{solve_feasibility, support_edges, FeasibilityResult, LinearConstraintSystem, Relation};
pub use rational::Rational;
pub use multi::{
    default_cap, solve_energy_unknown_credit, solve_finite_memory_mp, solve_memoryless_player1, solve_mp_inf,
    solve_mp_infsup, solve_mp_sup_region, reachable_multicycle, solve_one_player_mp_inf, Certificate, SolveOptions, SolveReport, SolveStats,
};
pub use single::{max_mean_cycle, solve_single_mp_sup};
