//! Instance generators: the reference fixtures, the two hardness
//! reductions, seeded random games and brute-force ground truth.

mod fixtures;
mod oracles;
mod paths;
mod random;
mod sat;

pub use fixtures::{fixture, FIXTURES};
pub use oracles::{closed_walk_oracle, mp_sup_oracle, WalkVerdict};
pub use paths::{brute_force_disjoint_paths, from_disjoint_paths, parse_edge_list, random_digraph, EdgeList};
pub use random::random_game;
pub use sat::{brute_force_sat, from_3sat, parse_dimacs, random_cnf, to_dimacs, CnfFormula};
