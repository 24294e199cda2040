use std::collections::{HashMap, VecDeque};

use super::verify::{graph_lost_play, graph_pareto, parity_maxima};
use super::MooreStrategy;
use crate::arena::{Arena, ObjectiveKind, Player, SpGame, Vertex};
use crate::formula::BooleanFormula;
use crate::graph;
use crate::objectives::{complement_priorities, level_graph};
use crate::payoff::Payoff;
use crate::zerosum::{buchi, solve_emerson_lei, GameGraph};

/// Searches Moore machines with at most `memory_bound` states for a
/// solution, smallest machines first.
///
/// Only table entries met by consistent plays are chosen, states are
/// numbered in order of first use, and a branch is cut as soon as a lost
/// play that nothing can still dominate is fixed. `None` only means that no
/// machine within the bound works.
pub fn brute_force_solve(game: &SpGame, memory_bound: usize) -> Option<MooreStrategy> {
    let mut search = Search::new(game);
    (1..=memory_bound.max(1)).find_map(|m| search.run(m))
}

enum Need {
    Update(usize, Vertex),
    Output(usize, Vertex),
}

struct Partial {
    verts: Vec<Vertex>,
    succ: Vec<Vec<usize>>,
    open: Vec<bool>,
    /// Arena successors of an open node not yet tied to a product node.
    extra: Vec<Vec<Vertex>>,
    need: Option<Need>,
}

struct Search<'a> {
    game: &'a SpGame,
    bound: usize,
    used: usize,
    table: MooreStrategy,
    /// Some Player-0 vertex with a real choice is reachable from here.
    matters: Vec<bool>,
    /// Per vertex, what plays from it can collect: mark sets for
    /// reachability, payoff bits of won plays for parity.
    ach: Vec<Vec<u64>>,
    marks: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(game: &'a SpGame) -> Search<'a> {
        let arena = game.arena();
        let n = arena.len();
        let all = vec![true; n];
        let choosers: Vec<bool> = arena
            .vertices()
            .map(|v| arena.owner(v) == Player::Zero && arena.successors(v).len() > 1)
            .collect();
        let matters = arena
            .vertices()
            .map(|v| {
                let r = graph::reachable(arena.adjacency(), v, &all);
                (0..n).any(|u| r[u] && choosers[u])
            })
            .collect();
        let (marks, ach) = match game.kind() {
            ObjectiveKind::Reachability => {
                let marks = game.reach_marks().expect("reachability game");
                let ach = arena
                    .vertices()
                    .map(|v| {
                        let levels = level_graph(arena.adjacency(), &|u| marks[u], v);
                        let cyclic = levels.cyclic_nodes();
                        let mut out: Vec<u64> = (0..levels.nodes.len()).filter(|&k| cyclic[k]).map(|k| levels.nodes[k].1).collect();
                        out.sort_unstable();
                        out.dedup();
                        out
                    })
                    .collect();
                (marks, ach)
            }
            ObjectiveKind::Parity => {
                let maps: Vec<Vec<u32>> = game.priority_maps().iter().map(|c| c.to_vec()).collect();
                let ach = arena
                    .vertices()
                    .map(|v| {
                        parity_maxima(arena.adjacency(), &maps[1..], &maps[..1], v)
                            .iter()
                            .map(|(q, _)| q.bits())
                            .collect()
                    })
                    .collect();
                (Vec::new(), ach)
            }
        };
        Search {
            game,
            bound: 1,
            used: 1,
            table: MooreStrategy::new(1, 0, n),
            matters,
            ach,
            marks,
        }
    }

    fn run(&mut self, bound: usize) -> Option<MooreStrategy> {
        self.bound = bound;
        self.used = 1;
        self.table = MooreStrategy::new(bound, 0, self.game.arena().len());
        if self.dfs() {
            Some(self.table.trimmed())
        } else {
            None
        }
    }

    fn dfs(&mut self) -> bool {
        let mut part = self.explore();
        let Some(need) = part.need.take() else {
            let report = graph_pareto(self.game, &part.verts, &part.succ);
            return report
                .antichain
                .iter()
                .all(|p| graph_lost_play(self.game, &part.verts, &part.succ, p).is_none());
        };
        if self.doomed(&part) {
            return false;
        }
        let arena = self.game.arena();
        match need {
            Need::Output(s, v) => {
                for &u in arena.successors(v) {
                    self.table.set_output(s, v, u);
                    if self.dfs() {
                        return true;
                    }
                }
                self.table.clear_output(s, v);
            }
            Need::Update(s, u) => {
                let options: Vec<usize> = if self.matters[u] {
                    (0..(self.used + 1).min(self.bound)).collect()
                } else {
                    vec![s]
                };
                for next in options {
                    let fresh = next == self.used;
                    if fresh {
                        self.used += 1;
                    }
                    self.table.set_update(s, u, next);
                    if self.dfs() {
                        return true;
                    }
                    if fresh {
                        self.used -= 1;
                    }
                }
                self.table.clear_update(s, u);
            }
        }
        false
    }

    /// Reachable part of the product under the current partial table.
    fn explore(&self) -> Partial {
        let arena = self.game.arena();
        let v0 = arena.initial();
        let init = self.table.initial();
        let Some(m0) = self.table.update(init, v0) else {
            return Partial {
                verts: Vec::new(),
                succ: Vec::new(),
                open: Vec::new(),
                extra: Vec::new(),
                need: Some(Need::Update(init, v0)),
            };
        };
        let mut index: HashMap<(Vertex, usize), usize> = HashMap::from([((v0, m0), 0)]);
        let mut nodes = vec![(v0, m0)];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
        let mut open = vec![false];
        let mut extra: Vec<Vec<Vertex>> = vec![Vec::new()];
        let mut need = None;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (v, m) = nodes[i];
            let moves: Vec<Vertex> = match arena.owner(v) {
                Player::Zero => match self.table.output(m, v) {
                    Some(u) => vec![u],
                    None => {
                        open[i] = true;
                        extra[i] = arena.successors(v).to_vec();
                        need.get_or_insert(Need::Output(m, v));
                        continue;
                    }
                },
                Player::One => arena.successors(v).to_vec(),
            };
            for u in moves {
                let Some(mu) = self.table.update(m, u) else {
                    open[i] = true;
                    extra[i].push(u);
                    need.get_or_insert(Need::Update(m, u));
                    continue;
                };
                let j = *index.entry((u, mu)).or_insert_with(|| {
                    nodes.push((u, mu));
                    succ.push(Vec::new());
                    open.push(false);
                    extra.push(Vec::new());
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                succ[i].push(j);
            }
        }
        Partial {
            verts: nodes.iter().map(|n| n.0).collect(),
            succ,
            open,
            extra,
            need,
        }
    }

    /// Player 1 can force, whatever the rest of the table, a lost play whose
    /// payoff no present or future won play can strictly exceed. Such a play
    /// is either Pareto-optimal or below a Pareto-optimal lost play.
    fn doomed(&self, part: &Partial) -> bool {
        if part.verts.is_empty() {
            return false;
        }
        let arena = self.game.arena();
        let n = arena.len();
        let base = part.verts.len();
        // product nodes, then one node per arena vertex for the free continuation
        let mut succ: Vec<Vec<usize>> = part.succ.clone();
        for (i, extra) in part.extra.iter().enumerate() {
            succ[i].extend(extra.iter().map(|&u| base + u));
        }
        succ.extend(arena.adjacency().iter().map(|l| l.iter().map(|&u| base + u).collect::<Vec<_>>()));
        let verts: Vec<Vertex> = part.verts.iter().copied().chain(0..n).collect();
        match self.game.kind() {
            ObjectiveKind::Reachability => self.doomed_reach(part, &succ, &verts),
            ObjectiveKind::Parity => self.doomed_parity(part, &succ, &verts),
        }
    }

    fn doomed_reach(&self, part: &Partial, succ: &[Vec<usize>], verts: &[Vertex]) -> bool {
        let marks = &self.marks;
        let fixed = level_graph(&part.succ, &|i| marks[part.verts[i]], 0);
        let cyclic = fixed.cyclic_nodes();
        let mut hopes: Vec<u64> = Vec::new();
        for (k, &(node, acc)) in fixed.nodes.iter().enumerate() {
            if cyclic[k] && acc & 1 == 1 {
                hopes.push(acc >> 1);
            }
            if part.open[node] {
                hopes.extend(self.ach[part.verts[node]].iter().map(|&a| acc | a).filter(|&a| a & 1 == 1).map(|a| a >> 1));
            }
        }
        hopes.sort_unstable();
        hopes.dedup();
        let undominated = |p: u64| !hopes.iter().any(|&q| q & p == p && q != p);
        let levels = level_graph(succ, &|i| marks[verts[i]], 0);
        let owner: Vec<Player> = levels.nodes.iter().map(|&(i, _)| self.game.arena().owner(verts[i]).opponent()).collect();
        let target: Vec<bool> = levels.nodes.iter().map(|&(_, acc)| acc & 1 == 0 && undominated(acc >> 1)).collect();
        if !target.iter().any(|&x| x) {
            return false;
        }
        let g = GameGraph::new(&owner, &levels.succ);
        buchi(&g, &target).wins(0)
    }

    fn doomed_parity(&self, part: &Partial, succ: &[Vec<usize>], verts: &[Vertex]) -> bool {
        let t = self.game.t();
        let maps = self.game.priority_maps();
        let node_maps: Vec<Vec<u32>> = maps.iter().map(|c| part.verts.iter().map(|&v| c[v]).collect()).collect();
        let mut hopes: Vec<u64> = parity_maxima(&part.succ, &node_maps[1..], &node_maps[..1], 0)
            .iter()
            .map(|(q, _)| q.bits())
            .collect();
        for i in (0..part.verts.len()).filter(|&i| part.open[i]) {
            hopes.extend(&self.ach[part.verts[i]]);
        }
        hopes.sort_unstable();
        hopes.dedup();
        // edges already present survive any completion of the table
        let lost = parity_maxima(&part.succ, &node_maps[1..], &[complement_priorities(&node_maps[0])], 0);
        if lost.iter().any(|(q, _)| !hopes.iter().any(|&h| h & q.bits() == q.bits() && h != q.bits())) {
            return true;
        }
        if t > 4 {
            return false;
        }
        let undominated: Vec<Payoff> = Payoff::all(t)
            .filter(|p| !hopes.iter().any(|&q| q & p.bits() == p.bits() && q != p.bits()))
            .collect();
        if undominated.is_empty() {
            return false;
        }
        // one variable per (objective, priority) pair
        let top = maps.iter().flat_map(|c| c.iter().copied()).max().unwrap_or(0) as usize + 1;
        let var = |i: usize, j: u32| BooleanFormula::var(i * top + j as usize);
        let parity = |i: usize| {
            BooleanFormula::or((0..top as u32).step_by(2).map(|j| {
                BooleanFormula::and(std::iter::once(var(i, j)).chain((1..j).step_by(2).map(|o| BooleanFormula::not(var(i, o)))))
            }))
        };
        let payoff = |q: &Payoff| {
            BooleanFormula::and((0..t).map(|i| if q.get(i) { parity(i + 1) } else { BooleanFormula::not(parity(i + 1)) }))
        };
        let formula = BooleanFormula::and([BooleanFormula::not(parity(0)), BooleanFormula::or(undominated.iter().map(payoff))]);
        let sets: Vec<Vec<bool>> = (0..maps.len() * top)
            .map(|x| verts.iter().map(|&v| maps[x / top][v] as usize == x % top).collect())
            .collect();
        let owner: Vec<Player> = verts.iter().map(|&v| self.game.arena().owner(v).opponent()).collect();
        let arena = Arena::new_unchecked(owner, succ.to_vec(), 0);
        solve_emerson_lei(&arena, &formula, &sets).map(|r| r.wins(0)).unwrap_or(false)
    }
}
