use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::{MooreStrategy, StrategyError};
use crate::arena::{Arena, ObjectiveKind, Player, SpGame, Vertex};
use crate::graph;
use crate::objectives::{complement_priorities, level_graph, LassoPlay};
use crate::payoff::{pareto_max, Antichain, Payoff};
use crate::zerosum::conj_parity_path_exists;

/// Product of an arena with a Moore machine; node 0 is the initial node.
#[derive(Clone, Debug)]
pub struct Product {
    /// (arena vertex, memory after reading it)
    pub nodes: Vec<(Vertex, usize)>,
    pub succ: Vec<Vec<usize>>,
}

impl Product {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.nodes[i].0
    }

    fn vertices(&self) -> Vec<Vertex> {
        self.nodes.iter().map(|n| n.0).collect()
    }
}

/// Plays consistent with `strategy`, as the reachable part of arena × memory.
pub fn product(game: &SpGame, strategy: &MooreStrategy) -> Result<Product, StrategyError> {
    arena_product(game.arena(), strategy)
}

pub(crate) fn arena_product(arena: &Arena, strategy: &MooreStrategy) -> Result<Product, StrategyError> {
    strategy.check(arena)?;
    let v0 = arena.initial();
    let m0 = strategy
        .update(strategy.initial(), v0)
        .ok_or(StrategyError::MissingUpdate {
            state: strategy.initial(),
            vertex: v0,
        })?;
    let mut index: HashMap<(Vertex, usize), usize> = HashMap::from([((v0, m0), 0)]);
    let mut nodes = vec![(v0, m0)];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (v, m) = nodes[i];
        let moves: Vec<Vertex> = match arena.owner(v) {
            Player::Zero => vec![strategy.output(m, v).ok_or(StrategyError::MissingOutput { state: m, vertex: v })?],
            Player::One => arena.successors(v).to_vec(),
        };
        let mut out = Vec::with_capacity(moves.len());
        for u in moves {
            let mu = strategy.update(m, u).ok_or(StrategyError::MissingUpdate { state: m, vertex: u })?;
            let j = *index.entry((u, mu)).or_insert_with(|| {
                nodes.push((u, mu));
                succ.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            out.push(j);
        }
        succ[i] = out;
    }
    Ok(Product { nodes, succ })
}

/// Pareto-optimal payoffs of the consistent plays, each with one witness.
#[derive(Clone, Debug, Serialize)]
pub struct ParetoReport {
    pub antichain: Antichain,
    /// One witness per element of `antichain`, in the same order.
    pub witnesses: Vec<LassoPlay>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub is_solution: bool,
    pub pareto_set: Antichain,
    pub witnesses: Vec<(Payoff, LassoPlay)>,
    /// Consistent play with a Pareto-optimal payoff that Player 0 loses.
    pub counterexample: Option<LassoPlay>,
}

pub fn pareto_under_strategy(game: &SpGame, strategy: &MooreStrategy) -> Result<ParetoReport, StrategyError> {
    let prod = product(game, strategy)?;
    Ok(graph_pareto(game, &prod.vertices(), &prod.succ))
}

pub fn verify_strategy(game: &SpGame, strategy: &MooreStrategy) -> Result<VerificationReport, StrategyError> {
    let prod = product(game, strategy)?;
    let verts = prod.vertices();
    let pareto = graph_pareto(game, &verts, &prod.succ);
    let counterexample = pareto.antichain.iter().find_map(|p| graph_lost_play(game, &verts, &prod.succ, p));
    Ok(VerificationReport {
        is_solution: counterexample.is_none(),
        witnesses: pareto.antichain.iter().copied().zip(pareto.witnesses).collect(),
        pareto_set: pareto.antichain,
        counterexample,
    })
}

/// Pareto analysis of the infinite paths from node 0 of a graph whose nodes
/// are labelled by arena vertices.
pub(crate) fn graph_pareto(game: &SpGame, verts: &[Vertex], succ: &[Vec<usize>]) -> ParetoReport {
    let t = game.t();
    let mut found: Vec<(Payoff, LassoPlay)> = Vec::new();
    match game.kind() {
        ObjectiveKind::Reachability => {
            let marks = game.reach_marks().expect("reachability game");
            let levels = level_graph(succ, &|i| marks[verts[i]], 0);
            let cyclic = levels.cyclic_nodes();
            let achievable = levels.achievable_payoffs(t);
            let antichain = pareto_max(&achievable);
            for p in antichain.iter() {
                let lasso = level_lasso(&levels.nodes, &levels.succ, &cyclic, |m| m >> 1 == p.bits())
                    .expect("achievable payoff has a lasso");
                found.push((*p, project(&lasso, verts, |n| levels.nodes[n].0)));
            }
        }
        ObjectiveKind::Parity => {
            let maps = game.priority_maps();
            let node_maps: Vec<Vec<u32>> = maps.iter().map(|c| verts.iter().map(|&v| c[v]).collect()).collect();
            for (q, l) in parity_maxima(succ, &node_maps[1..], &[], 0) {
                found.push((q, project(&l, verts, |n| n)));
            }
            found.sort_by(|a, b| a.0.cmp(&b.0));
        }
    }
    let antichain = Antichain::new(found.iter().map(|x| x.0).collect()).expect("maximal payoffs form an antichain");
    ParetoReport {
        antichain,
        witnesses: found.into_iter().map(|x| x.1).collect(),
    }
}

/// A path from node 0 with payoff exactly `p` that Player 0 loses.
pub(crate) fn graph_lost_play(game: &SpGame, verts: &[Vertex], succ: &[Vec<usize>], p: &Payoff) -> Option<LassoPlay> {
    match game.kind() {
        ObjectiveKind::Reachability => {
            let marks = game.reach_marks().expect("reachability game");
            let levels = level_graph(succ, &|i| marks[verts[i]], 0);
            let cyclic = levels.cyclic_nodes();
            let lasso = level_lasso(&levels.nodes, &levels.succ, &cyclic, |m| m == p.bits() << 1)?;
            Some(project(&lasso, verts, |n| levels.nodes[n].0))
        }
        ObjectiveKind::Parity => {
            let maps = game.priority_maps();
            let node_maps: Vec<Vec<u32>> = maps.iter().map(|c| verts.iter().map(|&v| c[v]).collect()).collect();
            let mut exact = exact_maps(&node_maps, p);
            exact.push(complement_priorities(&node_maps[0]));
            let l = conj_parity_path_exists(succ, &exact, 0)?;
            Some(project(&l, verts, |n| n))
        }
    }
}

/// Follower maps forcing payoff exactly `p` (the leader map is skipped).
/// Maximal payoffs over `objectives` among paths from `from` that also
/// satisfy every map in `side`, each with a witness lasso over node ids.
pub(crate) fn parity_maxima(succ: &[Vec<usize>], objectives: &[Vec<u32>], side: &[Vec<u32>], from: usize) -> Vec<(Payoff, LassoPlay)> {
    let mut search = Maxima {
        succ,
        objectives,
        side,
        from,
        seen: HashSet::new(),
        found: Vec::new(),
    };
    search.run(0);
    search.found
}

struct Maxima<'a> {
    succ: &'a [Vec<usize>],
    objectives: &'a [Vec<u32>],
    side: &'a [Vec<u32>],
    from: usize,
    seen: HashSet<u64>,
    found: Vec<(Payoff, LassoPlay)>,
}

impl Maxima<'_> {
    fn path(&self, required: u64) -> Option<LassoPlay> {
        let maps: Vec<Vec<u32>> = (0..self.objectives.len())
            .filter(|&i| required >> i & 1 == 1)
            .map(|i| self.objectives[i].clone())
            .chain(self.side.iter().cloned())
            .collect();
        conj_parity_path_exists(self.succ, &maps, self.from)
    }

    fn payoff_of(&self, l: &LassoPlay) -> u64 {
        let mut bits = 0;
        for (i, c) in self.objectives.iter().enumerate() {
            if l.cycle.iter().map(|&v| c[v]).min().is_some_and(|m| m % 2 == 0) {
                bits |= 1 << i;
            }
        }
        bits
    }

    /// Finds every maximal payoff containing `required`.
    fn run(&mut self, required: u64) {
        if !self.seen.insert(required) {
            return;
        }
        let covering = self.found.iter().position(|(p, _)| required & p.bits() == required);
        let m = match covering {
            Some(k) => self.found[k].0.bits(),
            None => {
                let Some(mut l) = self.path(required) else {
                    return;
                };
                let mut bits = self.payoff_of(&l);
                for i in 0..self.objectives.len() {
                    if bits >> i & 1 == 0 {
                        if let Some(better) = self.path(bits | 1 << i) {
                            bits = self.payoff_of(&better);
                            l = better;
                        }
                    }
                }
                self.found.push((Payoff::from_bits(self.objectives.len(), bits), l));
                bits
            }
        };
        // any other maximum containing `required` has a bit outside `m`
        for i in 0..self.objectives.len() {
            if m >> i & 1 == 0 && self.path(required | 1 << i).is_some() {
                self.run(required | 1 << i);
            }
        }
    }
}

pub(crate) fn exact_maps(node_maps: &[Vec<u32>], p: &Payoff) -> Vec<Vec<u32>> {
    (0..p.width())
        .map(|i| {
            if p.get(i) {
                node_maps[i + 1].clone()
            } else {
                complement_priorities(&node_maps[i + 1])
            }
        })
        .collect()
}

/// Shortest lasso in a level graph ending in a cycle at a node whose marks satisfy `accept`.
fn level_lasso(
    nodes: &[(usize, u64)],
    succ: &[Vec<usize>],
    cyclic: &[bool],
    accept: impl Fn(u64) -> bool,
) -> Option<LassoPlay> {
    let alive = vec![true; nodes.len()];
    let path = graph::bfs_path(succ, 0, &alive, |i| cyclic[i] && accept(nodes[i].1))?;
    let entry = *path.last().expect("non-empty path");
    let cycle = graph::shortest_cycle(succ, entry, &alive).expect("cyclic node");
    Some(LassoPlay::new(path[..path.len() - 1].to_vec(), cycle))
}

fn project(l: &LassoPlay, verts: &[Vertex], base: impl Fn(usize) -> usize) -> LassoPlay {
    let map = |xs: &[usize]| xs.iter().map(|&n| verts[base(n)]).collect::<Vec<_>>();
    normalize(LassoPlay::new(map(&l.prefix), map(&l.cycle)))
}

/// Shortest representation of the same infinite play.
pub fn normalize(mut l: LassoPlay) -> LassoPlay {
    let n = l.cycle.len();
    if let Some(d) = (1..=n).find(|&d| n % d == 0 && (0..n).all(|i| l.cycle[i] == l.cycle[i % d])) {
        l.cycle.truncate(d);
    }
    while let Some(&last) = l.prefix.last() {
        if last != *l.cycle.last().expect("non-empty cycle") {
            break;
        }
        l.prefix.pop();
        l.cycle.rotate_right(1);
    }
    l
}
