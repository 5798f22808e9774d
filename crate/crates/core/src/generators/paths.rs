use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameBuilder, GameGraph, Player};

/// Plain directed graph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Edge-list text: a `vertices <n>` line, then one `<u> <v>` per line.
pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut vertices = None;
    let mut edges = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let syntax = |message: &str| Error::Syntax {
            line: n + 1,
            column: 1,
            message: message.into(),
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match (vertices, parts.as_slice()) {
            (None, ["vertices", n]) => vertices = Some(n.parse().map_err(|_| syntax("bad vertex count"))?),
            (None, _) => return Err(syntax("expected `vertices <n>`")),
            (Some(count), [u, v]) => {
                let u: usize = u.parse().map_err(|_| syntax("bad vertex"))?;
                let v: usize = v.parse().map_err(|_| syntax("bad vertex"))?;
                if u >= count || v >= count {
                    return Err(syntax("vertex out of range"));
                }
                edges.push((u, v));
            }
            (Some(_), _) => return Err(syntax("expected `<u> <v>`")),
        }
    }
    Ok(EdgeList {
        vertices: vertices.ok_or_else(|| Error::InvalidArgument("empty edge list".into()))?,
        edges,
    })
}

fn check_terminals(graph: &EdgeList, t: [usize; 4]) -> Result<()> {
    for (i, &a) in t.iter().enumerate() {
        if a >= graph.vertices {
            return Err(Error::InvalidArgument(format!("terminal {a} is not a vertex")));
        }
        if t[..i].contains(&a) {
            return Err(Error::InvalidArgument("terminals must be distinct".into()));
        }
    }
    Ok(())
}

/// One-player game in which a memoryless strategy from `w` wins energy
/// with unknown credit iff the graph has vertex-disjoint paths `w→x` and
/// `y→z`. Original edges weigh `(−1,−1)`; `(x,y)` weighs `(n,−1)` and
/// `(z,w)` weighs `(−1,n)`. With `unit` the two heavy edges become chains
/// of `n` edges with entries in `{−1,0,1}`.
pub fn from_disjoint_paths(graph: &EdgeList, w: usize, x: usize, y: usize, z: usize, unit: bool) -> Result<GameGraph> {
    check_terminals(graph, [w, x, y, z])?;
    let n = graph.vertices as i64;
    let mut b = GameBuilder::new(2);
    let v: Vec<usize> = (0..graph.vertices).map(|i| b.state(format!("v{i}"), Player::One)).collect();
    let mut out = vec![false; graph.vertices];
    let mut seen = std::collections::HashSet::new();
    for &(a, c) in &graph.edges {
        if seen.insert((a, c)) {
            b.edge(format!("e{a}_{c}"), v[a], v[c], [-1, -1]);
            out[a] = true;
        }
    }
    let heavy = |b: &mut GameBuilder, name: &str, from: usize, to: usize, gain: usize| {
        let big = |step: usize| -> [i64; 2] {
            let mut w = [0, 0];
            w[gain] = if unit { 1 } else { n };
            w[1 - gain] = if step == 0 { -1 } else { 0 };
            w
        };
        if !unit {
            b.edge(name, from, to, big(0));
            return;
        }
        let mut cur = from;
        for step in 0..n as usize {
            let next = if step + 1 == n as usize { to } else { b.state(format!("{name}_{}", step + 1), Player::One) };
            b.edge(format!("{name}{step}"), cur, next, big(step));
            cur = next;
        }
    };
    heavy(&mut b, "hxy", v[x], v[y], 0);
    heavy(&mut b, "hzw", v[z], v[w], 1);
    out[x] = true;
    out[z] = true;
    for (i, &has) in out.iter().enumerate() {
        if !has {
            // Dead ends keep the arena sink-free without helping player 1.
            b.edge(format!("sink{i}"), v[i], v[i], [-1, -1]);
        }
    }
    b.build(v[w])
}

/// Exhaustive search for vertex-disjoint simple paths `w→x` and `y→z`.
pub fn brute_force_disjoint_paths(graph: &EdgeList, w: usize, x: usize, y: usize, z: usize) -> Result<bool> {
    if graph.vertices > 12 {
        return Err(Error::TooLarge(format!("{} vertices (limit 12)", graph.vertices)));
    }
    check_terminals(graph, [w, x, y, z])?;
    let mut succ = vec![Vec::new(); graph.vertices];
    for &(a, c) in &graph.edges {
        succ[a].push(c);
    }
    // Simple paths from `from` to `to` avoiding `blocked`; `visit` returns
    // true to stop.
    fn paths(succ: &[Vec<usize>], at: usize, to: usize, used: &mut u32, visit: &mut dyn FnMut(u32) -> bool) -> bool {
        if at == to {
            return visit(*used);
        }
        for &c in &succ[at] {
            if *used & (1 << c) == 0 {
                *used |= 1 << c;
                let stop = paths(succ, c, to, used, visit);
                *used &= !(1 << c);
                if stop {
                    return true;
                }
            }
        }
        false
    }
    let mut first = 1u32 << w | 1 << y | 1 << z;
    Ok(paths(&succ, w, x, &mut first, &mut |taken| {
        let mut second = (taken & !(1 << y | 1 << z)) | 1 << y;
        paths(&succ, y, z, &mut second, &mut |_| true)
    }))
}

/// Seeded digraph without self-loops, each ordered pair an edge with
/// probability `density`.
pub fn random_digraph(vertices: usize, density: f64, seed: u64) -> EdgeList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..vertices {
        for c in 0..vertices {
            if a != c && rng.gen_bool(density) {
                edges.push((a, c));
            }
        }
    }
    EdgeList { vertices, edges }
}
