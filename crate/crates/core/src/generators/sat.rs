use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameBuilder, GameGraph, Player};

/// 3-CNF formula; literal `i` is `x_i`, `-i` its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::InvalidArgument(format!("literal {l} outside 1..={vars}")));
                }
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = (assignment >> (l.unsigned_abs() - 1)) & 1 == 1;
                v == (l > 0)
            })
        })
    }
}

/// Dimension of a literal: `x_i` at `2(i−1)`, its complement right after.
fn literal_dim(l: i32) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

fn literal_name(l: i32) -> String {
    if l > 0 {
        format!("x{l}")
    } else {
        format!("nx{}", -l)
    }
}

/// Player 1 picks a clause, player 2 one of its literals, and the literal
/// returns to the start with `+1` on its own dimension and `−1` on its
/// complement's.
pub fn from_3sat(phi: &CnfFormula) -> GameGraph {
    let k = 2 * phi.vars.max(1);
    let mut b = GameBuilder::new(k);
    let init = b.state("init", Player::One);
    let mut literal_states = std::collections::BTreeMap::new();
    let mut clause_states = Vec::new();
    for j in 0..phi.clauses.len() {
        clause_states.push(b.state(format!("c{}", j + 1), Player::Two));
    }
    for c in &phi.clauses {
        for &l in c {
            literal_states.entry(l).or_insert_with(|| b.state(literal_name(l), Player::One));
        }
    }
    for (j, c) in phi.clauses.iter().enumerate() {
        let cs = clause_states[j];
        b.edge(format!("pick{}", j + 1), init, cs, vec![0; k]);
        let mut used = Vec::new();
        for &l in c {
            if !used.contains(&l) {
                used.push(l);
                b.edge(format!("c{}_{}", j + 1, literal_name(l)), cs, literal_states[&l], vec![0; k]);
            }
        }
    }
    for (&l, &s) in &literal_states {
        let mut w = vec![0; k];
        w[literal_dim(l)] = 1;
        w[literal_dim(-l)] = -1;
        b.edge(format!("ret_{}", literal_name(l)), s, init, w);
    }
    if phi.clauses.is_empty() {
        b.edge("idle", init, init, vec![0; k]);
    }
    b.build(init).expect("construction is well formed")
}

/// Exhaustive satisfiability check.
pub fn brute_force_sat(phi: &CnfFormula) -> Result<bool> {
    if phi.vars > 20 {
        return Err(Error::TooLarge(format!("{} variables (limit 20)", phi.vars)));
    }
    Ok((0..1u64 << phi.vars).any(|a| phi.satisfied_by(a)))
}

/// Seeded formula with exactly `vars` variables and `clauses` clauses.
pub fn random_cnf(vars: usize, clauses: usize, seed: u64) -> CnfFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..clauses)
        .map(|_| {
            let mut c = [0i32; 3];
            for l in &mut c {
                let v = rng.gen_range(1..=vars.max(1)) as i32;
                *l = if rng.gen_bool(0.5) { v } else { -v };
            }
            c
        })
        .collect();
    CnfFormula {
        vars: vars.max(1),
        clauses,
    }
}

/// DIMACS CNF. Clauses shorter than three literals repeat their last one.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let syntax = |message: String| Error::Syntax {
            line: n + 1,
            column: 1,
            message,
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(syntax("expected `p cnf <vars> <clauses>`".into()));
            }
            let v = parts[2].parse().map_err(|_| syntax("bad variable count".into()))?;
            let c = parts[3].parse().map_err(|_| syntax("bad clause count".into()))?;
            header = Some((v, c));
            continue;
        }
        if header.is_none() {
            return Err(syntax("clause before the `p cnf` header".into()));
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| syntax(format!("bad literal `{tok}`")))?;
            if l != 0 {
                current.push(l);
                continue;
            }
            let c = match current.len() {
                0 => return Err(syntax("empty clause".into())),
                1 => [current[0]; 3],
                2 => [current[0], current[1], current[1]],
                3 => [current[0], current[1], current[2]],
                _ => return Err(syntax("clauses must have at most three literals".into())),
            };
            clauses.push(c);
            current.clear();
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::InvalidArgument("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(Error::InvalidArgument("last clause is not terminated by 0".into()));
    }
    if count != clauses.len() {
        return Err(Error::InvalidArgument(format!(
            "header announces {count} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(vars, clauses)
}

pub fn to_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.vars, phi.clauses.len());
    for c in &phi.clauses {
        out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
    }
    out
}
