use num_traits::Zero;

use super::{Edge, EdgeId, GameGraph, Player, State, StateId, StateSet, WeightVector};
use crate::error::{Error, Result};
use crate::rational::{to_i64, Rational};

/// Rescales every dimension so that threshold `a/b` becomes 0: `w ↦ b·w − a`.
pub fn shift_weights(g: &GameGraph, thresholds: &[Rational]) -> Result<GameGraph> {
    if thresholds.len() != g.dim() {
        return Err(Error::InvalidArgument(format!(
            "{} thresholds for a {}-dimensional game",
            thresholds.len(),
            g.dim()
        )));
    }
    let mut scale = Vec::with_capacity(g.dim());
    for t in thresholds {
        if t.denom().is_zero() {
            return Err(Error::ZeroDenominator);
        }
        scale.push((to_i64(t.denom())?, to_i64(t.numer())?));
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let weight = e
                .weight
                .iter()
                .zip(&scale)
                .map(|(&w, &(b, a))| b.checked_mul(w).and_then(|x| x.checked_sub(a)).ok_or(Error::Overflow))
                .collect::<Result<Vec<i64>>>()?;
            Ok(Edge {
                weight: WeightVector(weight),
                ..e.clone()
            })
        })
        .collect::<Result<Vec<Edge>>>()?;
    GameGraph::new(g.dim(), g.states().to_vec(), edges, g.initial())
}

/// Induced subgame on `keep`. Every kept state needs a successor inside
/// `keep`. The initial state is kept if possible, otherwise the first kept state.
pub fn restrict(g: &GameGraph, keep: &StateSet) -> Result<GameGraph> {
    let first = *keep
        .iter()
        .next()
        .ok_or_else(|| Error::InvalidArgument("cannot restrict to the empty set".into()))?;
    let mut local = vec![usize::MAX; g.state_count()];
    let mut states: Vec<State> = Vec::new();
    for &s in keep {
        if s >= g.state_count() {
            return Err(Error::UnknownState(format!("#{s}")));
        }
        local[s] = states.len();
        states.push(g.state(s).clone());
    }
    let mut edges = Vec::new();
    for e in g.edges() {
        if local[e.src] != usize::MAX && local[e.dst] != usize::MAX {
            edges.push(Edge {
                src: local[e.src],
                dst: local[e.dst],
                ..e.clone()
            });
        }
    }
    let initial = if keep.contains(&g.initial()) {
        local[g.initial()]
    } else {
        local[first]
    };
    GameGraph::new(g.dim(), states, edges, initial).map_err(|err| match err {
        Error::SinkState(name) => Error::Restriction(name),
        other => other,
    })
}

/// States from which `player` forces a visit to `target`, computed inside
/// the `active` states (all if `None`); edges leaving `active` are ignored.
pub fn attractor_mask(g: &GameGraph, player: Player, target: &[bool], active: Option<&[bool]>) -> Vec<bool> {
    let n = g.state_count();
    let is_active = |s: StateId| active.is_none_or(|a| a[s]);
    let mut attr: Vec<bool> = (0..n).map(|s| target[s] && is_active(s)).collect();
    // For opponent states: number of active successors not yet attracted.
    let mut remaining: Vec<usize> = (0..n)
        .map(|s| g.out_edges(s).iter().filter(|&&e| is_active(g.edge(e).dst)).count())
        .collect();
    let mut preds: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if is_active(e.src) && is_active(e.dst) {
            preds[e.dst].push(i);
        }
    }
    let mut stack: Vec<StateId> = (0..n).filter(|&s| attr[s]).collect();
    while let Some(t) = stack.pop() {
        for &e in &preds[t] {
            let s = g.edge(e).src;
            if attr[s] {
                continue;
            }
            let pulled = if g.owner(s) == player {
                true
            } else {
                remaining[s] -= 1;
                remaining[s] == 0
            };
            if pulled {
                attr[s] = true;
                stack.push(s);
            }
        }
    }
    attr
}

pub fn attractor(g: &GameGraph, player: Player, target: &StateSet) -> Result<StateSet> {
    let mut mask = vec![false; g.state_count()];
    for &s in target {
        if s >= g.state_count() {
            return Err(Error::UnknownState(format!("#{s}")));
        }
        mask[s] = true;
    }
    let attr = attractor_mask(g, player, &mask, None);
    Ok((0..g.state_count()).filter(|&s| attr[s]).collect())
}

/// Maximal SCCs of the graph view, sinks first.
pub fn scc_decomposition(g: &GameGraph) -> Vec<Vec<StateId>> {
    g.digraph().sccs()
}

/// A finite path through the arena.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayPrefix {
    pub states: Vec<StateId>,
    pub edges: Vec<EdgeId>,
}

impl PlayPrefix {
    pub fn single(s: StateId) -> Self {
        PlayPrefix {
            states: vec![s],
            edges: Vec::new(),
        }
    }

    /// Follows the listed edges from their first source.
    pub fn from_edges(g: &GameGraph, edges: &[EdgeId]) -> Result<Self> {
        let first = edges
            .first()
            .ok_or_else(|| Error::InvalidPlay("no edges".into()))?;
        let mut states = vec![g.edge(*first).src];
        for &e in edges {
            states.push(g.edge(e).dst);
        }
        let p = PlayPrefix {
            states,
            edges: edges.to_vec(),
        };
        p.validate(g)?;
        Ok(p)
    }

    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::InvalidPlay("empty prefix".into()));
        }
        if self.edges.len() + 1 != self.states.len() {
            return Err(Error::InvalidPlay("edge count must be one less than state count".into()));
        }
        if let Some(&s) = self.states.iter().find(|&&s| s >= g.state_count()) {
            return Err(Error::UnknownState(format!("#{s}")));
        }
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= g.edges().len() {
                return Err(Error::UnknownEdge(format!("#{e}")));
            }
            let edge = g.edge(e);
            if edge.src != self.states[i] || edge.dst != self.states[i + 1] {
                return Err(Error::InvalidPlay(format!(
                    "edge `{}` does not lead from `{}` to `{}`",
                    edge.id,
                    g.state_name(self.states[i]),
                    g.state_name(self.states[i + 1])
                )));
            }
        }
        Ok(())
    }

    pub fn first(&self) -> StateId {
        self.states[0]
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("prefix is nonempty")
    }
}

/// Sum of the traversed weights.
pub fn energy_level(g: &GameGraph, p: &PlayPrefix) -> Result<WeightVector> {
    p.validate(g)?;
    let mut sum = vec![0i64; g.dim()];
    for &e in &p.edges {
        for (acc, &w) in sum.iter_mut().zip(g.edge(e).weight.iter()) {
            *acc = acc.checked_add(w).ok_or(Error::Overflow)?;
        }
    }
    Ok(WeightVector(sum))
}

/// An ultimately periodic play: `stem` then `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoPlay {
    pub stem: PlayPrefix,
    pub cycle: PlayPrefix,
}

impl LassoPlay {
    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        self.stem.validate(g)?;
        self.cycle.validate(g)?;
        if self.cycle.edges.is_empty() {
            return Err(Error::InvalidPlay("loop has no edges".into()));
        }
        if self.cycle.first() != self.cycle.last() {
            return Err(Error::InvalidPlay("loop is not closed".into()));
        }
        if self.stem.last() != self.cycle.first() {
            return Err(Error::InvalidPlay("stem does not end where the loop starts".into()));
        }
        Ok(())
    }

    /// Builds the play `stem · cycle^ω` from state sequences, taking the first
    /// declared edge between consecutive states. The flag reports whether
    /// some step had several candidate edges.
    pub fn from_states(g: &GameGraph, stem: &[StateId], cycle: &[StateId]) -> Result<(LassoPlay, bool)> {
        if cycle.is_empty() {
            return Err(Error::InvalidPlay("loop has no states".into()));
        }
        let mut ambiguous = false;
        let mut step = |a: StateId, b: StateId| -> Result<EdgeId> {
            let mut found = g.out_edges(a).iter().filter(|&&e| g.edge(e).dst == b);
            let e = *found.next().ok_or_else(|| {
                Error::InvalidPlay(format!("no edge from `{}` to `{}`", g.state_name(a), g.state_name(b)))
            })?;
            ambiguous |= found.next().is_some();
            Ok(e)
        };
        let mut stem_states: Vec<StateId> = stem.to_vec();
        stem_states.push(cycle[0]);
        let mut stem_edges = Vec::new();
        for w in stem_states.windows(2) {
            stem_edges.push(step(w[0], w[1])?);
        }
        let mut loop_states = cycle.to_vec();
        loop_states.push(cycle[0]);
        let mut loop_edges = Vec::new();
        for w in loop_states.windows(2) {
            loop_edges.push(step(w[0], w[1])?);
        }
        let lasso = LassoPlay {
            stem: PlayPrefix {
                states: stem_states,
                edges: stem_edges,
            },
            cycle: PlayPrefix {
                states: loop_states,
                edges: loop_edges,
            },
        };
        lasso.validate(g)?;
        Ok((lasso, ambiguous))
    }
}

/// Mean weight of the loop per dimension; the stem does not matter.
pub fn lasso_mean_payoff(g: &GameGraph, p: &LassoPlay) -> Result<Vec<Rational>> {
    p.validate(g)?;
    let total = energy_level(g, &p.cycle)?;
    let len = p.cycle.edges.len() as i64;
    Ok(total.iter().map(|&w| Rational::new(w.into(), len.into())).collect())
}
