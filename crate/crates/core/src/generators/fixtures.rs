use crate::error::{Error, Result};
use crate::game::{GameBuilder, GameGraph, Player};

pub const FIXTURES: [&str; 3] = ["fig1", "fig3", "barrier"];

/// A named reference arena.
pub fn fixture(name: &str) -> Result<GameGraph> {
    match name {
        "fig1" => {
            // Player 2 picks a side; from the right side player 1 returns
            // along one of two opposite edges.
            let mut b = GameBuilder::new(2);
            let s0 = b.state("s0", Player::Two);
            let s1 = b.state("s1", Player::One);
            let s2 = b.state("s2", Player::One);
            b.edge("left", s0, s1, [-2, 0]);
            b.edge("right", s0, s2, [0, 0]);
            b.edge("stay", s1, s1, [0, 0]);
            b.edge("a", s2, s0, [-1, 1]);
            b.edge("b", s2, s0, [1, -1]);
            b.build(s0)
        }
        "fig3" => {
            let mut b = GameBuilder::new(2);
            let a = b.state("sa", Player::One);
            let c = b.state("sb", Player::One);
            b.edge("la", a, a, [2, 0]);
            b.edge("ab", a, c, [0, 0]);
            b.edge("lb", c, c, [0, 2]);
            b.edge("ba", c, a, [0, 0]);
            b.build(a)
        }
        "barrier" => {
            // Opposite loops cancel, but switching between them costs 5 in
            // the third dimension each way.
            let mut b = GameBuilder::new(3);
            let u = b.state("u", Player::One);
            let v = b.state("v", Player::One);
            b.edge("uv", u, v, [0, 0, 5]);
            b.edge("vu", v, u, [0, 0, 5]);
            b.edge("lu", u, u, [1, -1, 0]);
            b.edge("lv", v, v, [-1, 1, 0]);
            b.build(u)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown fixture `{other}` (expected one of {})",
            FIXTURES.join(", ")
        ))),
    }
}
