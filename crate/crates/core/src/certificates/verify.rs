use super::{product_graph, CreditVector, MemorylessStrategy, MooreStrategy, ProductGraph};
use crate::error::{Error, Result};
use crate::game::{GameGraph, ObjectiveKind, ObjectiveSpec, PlayPrefix, Player, StateId};
use crate::multi::one_player;

/// Does the player-2 strategy `l2` refute player 1 from `s0`? The game must
/// already be threshold-normalized.
pub fn verify_p2_certificate(g: &GameGraph, l2: &MemorylessStrategy, s0: StateId, objective: &ObjectiveSpec) -> Result<bool> {
    if l2.owner != Player::Two {
        return Err(Error::MalformedStrategy("certificate must belong to player 2".into()));
    }
    let p = product_graph(g, l2, s0)?;
    let d = &p.graph;
    let obj = objective.normalized();
    obj.validate()?;
    let all: Vec<usize> = (0..g.dim()).collect();
    let wins = match obj.kind {
        ObjectiveKind::EnergyUnknownCredit | ObjectiveKind::FiniteMemoryMP => one_player::energy_mask(d)[p.start],
        ObjectiveKind::MPInf => one_player::mp_inf_mask(d, &all)[p.start],
        ObjectiveKind::MPInfSup => {
            let inf: Vec<usize> = obj.inf_dims.iter().copied().collect();
            let sup: Vec<usize> = obj.sup_dims.iter().copied().collect();
            one_player::inf_sup_mask(d, &inf, &sup)[p.start]
        }
        ObjectiveKind::MPSup => {
            return Err(Error::Unsupported(
                "player-2 refutations of mp-sup are checked through the region solver".into(),
            ))
        }
    };
    Ok(!wins)
}

/// Score of a player-1 machine with the prefixes that make the credit tight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredStrategy {
    pub credit: CreditVector,
    /// Per dimension with positive credit: a play consistent with the
    /// strategy whose energy in that dimension reaches `−credit`.
    pub tight: Vec<Option<PlayPrefix>>,
}

/// Shortest walks from the start in one dimension; `None` on a reachable
/// negative cycle.
fn shortest_walks(p: &ProductGraph, dim: usize) -> Option<(Vec<Option<i64>>, Vec<Option<usize>>)> {
    let n = p.graph.node_count();
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    dist[p.start] = Some(0);
    for round in 0..=n {
        let mut changed = false;
        for (ix, a) in p.graph.arcs().iter().enumerate() {
            let Some(du) = dist[a.src] else { continue };
            let cand = du + a.weight[dim];
            if dist[a.dst].is_none_or(|dv| cand < dv) {
                dist[a.dst] = Some(cand);
                parent[a.dst] = Some(ix);
                changed = true;
            }
        }
        if !changed {
            return Some((dist, parent));
        }
        if round == n {
            break;
        }
    }
    None
}

pub fn score_p1_detailed(g: &GameGraph, strat: &MooreStrategy, s0: StateId) -> Result<Option<ScoredStrategy>> {
    if strat.owner != Player::One {
        return Err(Error::MalformedStrategy("strategy must belong to player 1".into()));
    }
    let p = product_graph(g, strat, s0)?;
    let mut credit = Vec::with_capacity(g.dim());
    let mut tight = Vec::with_capacity(g.dim());
    for dim in 0..g.dim() {
        let Some((dist, parent)) = shortest_walks(&p, dim) else {
            return Ok(None);
        };
        let (argmin, low) = dist
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (v, d)))
            .min_by_key(|&(_, d)| d)
            .expect("start is reachable");
        credit.push((-low).max(0) as u64);
        if low < 0 {
            let mut edges = Vec::new();
            let mut v = argmin;
            while let Some(a) = parent[v] {
                edges.push(p.edge_of[a]);
                v = p.graph.arc(a).src;
            }
            edges.reverse();
            tight.push(Some(PlayPrefix::from_edges(g, &edges)?));
        } else {
            tight.push(None);
        }
    }
    Ok(Some(ScoredStrategy {
        credit: CreditVector(credit),
        tight,
    }))
}

/// Least credit with which the machine keeps every energy nonnegative from
/// `s0`, or `None` if some reachable cycle is negative in some dimension.
pub fn score_p1_finite_strategy(g: &GameGraph, strat: &MooreStrategy, s0: StateId) -> Result<Option<CreditVector>> {
    Ok(score_p1_detailed(g, strat, s0)?.map(|s| s.credit))
}

#[cfg(test)]
mod tests {
    use super::super::tests::fig1;
    use super::*;
    use crate::game::energy_level;
    use crate::generators::{from_3sat, CnfFormula};

    fn alternating(first: usize) -> MooreStrategy {
        // Edges 3 and 4 leave s2; memory m plays edge 3 + m.
        let other = 7 - first;
        let (m0, m1) = (first, other);
        let mut update = vec![vec![0; 5], vec![1; 5]];
        update[0][m0] = 1;
        update[1][m1] = 0;
        MooreStrategy {
            owner: Player::One,
            memory: 2,
            initial: 0,
            next: vec![vec![None, Some(2), Some(m0)], vec![None, Some(2), Some(m1)]],
            update,
        }
    }

    #[test]
    fn figure_one_credits() {
        let g = fig1();
        assert_eq!(score_p1_finite_strategy(&g, &alternating(4), 0).unwrap(), Some(CreditVector(vec![2, 1])));
        assert_eq!(score_p1_finite_strategy(&g, &alternating(3), 0).unwrap(), Some(CreditVector(vec![3, 0])));
    }

    #[test]
    fn tight_prefixes_refute_smaller_credit() {
        let g = fig1();
        let s = score_p1_detailed(&g, &alternating(4), 0).unwrap().unwrap();
        for (dim, p) in s.tight.iter().enumerate() {
            let p = p.as_ref().unwrap();
            let level = energy_level(&g, p).unwrap();
            assert_eq!(level[dim], -(s.credit.0[dim] as i64));
        }
    }

    #[test]
    fn negative_loop_has_no_credit() {
        let mut b = crate::game::GameBuilder::new(1);
        let s = b.state("s", Player::One);
        b.edge("e", s, s, [-1]);
        let g = b.build(s).unwrap();
        let m = MooreStrategy {
            owner: Player::One,
            memory: 1,
            initial: 0,
            next: vec![vec![Some(0)]],
            update: vec![vec![0]],
        };
        assert_eq!(score_p1_finite_strategy(&g, &m, 0).unwrap(), None);
    }

    #[test]
    fn p2_certificates() {
        let g = fig1();
        let energy = ObjectiveSpec::new(ObjectiveKind::EnergyUnknownCredit, 2);
        let left = MemorylessStrategy {
            owner: Player::Two,
            choice: [(0, 0)].into_iter().collect(),
        };
        assert!(!verify_p2_certificate(&g, &left, 0, &energy).unwrap());
        let sup = ObjectiveSpec::new(ObjectiveKind::MPSup, 2);
        assert!(matches!(verify_p2_certificate(&g, &left, 0, &sup), Err(Error::Unsupported(_))));

        let phi = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        let g = from_3sat(&phi);
        let clause = g.state_id("c1").unwrap();
        let to_x1 = g.out_edges(clause)[0];
        let l2 = MemorylessStrategy {
            owner: Player::Two,
            choice: [(clause, to_x1)].into_iter().collect(),
        };
        let energy = ObjectiveSpec::new(ObjectiveKind::EnergyUnknownCredit, g.dim());
        assert!(verify_p2_certificate(&g, &l2, g.initial(), &energy).unwrap());
    }

    #[test]
    fn zero_loop_is_never_refuted() {
        let mut b = crate::game::GameBuilder::new(2);
        let s = b.state("s", Player::Two);
        let t = b.state("t", Player::One);
        b.edge("st", s, t, [-3, 1]);
        b.edge("tt", t, t, [0, 0]);
        let g = b.build(s).unwrap();
        let l2 = MemorylessStrategy {
            owner: Player::Two,
            choice: [(0, 0)].into_iter().collect(),
        };
        let energy = ObjectiveSpec::new(ObjectiveKind::EnergyUnknownCredit, 2);
        assert!(!verify_p2_certificate(&g, &l2, 0, &energy).unwrap());
    }
}
