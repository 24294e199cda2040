//! Objectives, lasso plays and feasible-payoff analysis.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{Arena, ObjectiveKind, SpGame, Vertex};
use crate::graph;
use crate::payoff::{ExtendedPayoff, Payoff, PayoffError, MAX_WIDTH};
use crate::zerosum::conj_parity_path_exists;

/// A reachability target set (membership per vertex) or a parity priority map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    Reach(Vec<bool>),
    Parity(Vec<u32>),
}

impl Objective {
    pub fn reach(n: usize, targets: &[Vertex]) -> Objective {
        let mut t = vec![false; n];
        for &v in targets {
            t[v] = true;
        }
        Objective::Reach(t)
    }

    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::Reach(_) => ObjectiveKind::Reachability,
            Objective::Parity(_) => ObjectiveKind::Parity,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Objective::Reach(t) => t.len(),
            Objective::Parity(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn targets(&self) -> Vec<Vertex> {
        match self {
            Objective::Reach(t) => (0..t.len()).filter(|&v| t[v]).collect(),
            Objective::Parity(_) => Vec::new(),
        }
    }

    /// Largest even priority, if any.
    pub fn max_even_priority(&self) -> Option<u32> {
        match self {
            Objective::Parity(c) => c.iter().copied().filter(|p| p % 2 == 0).max(),
            Objective::Reach(_) => None,
        }
    }

    pub fn eval(&self, play: &LassoPlay) -> bool {
        match self {
            Objective::Reach(t) => play.prefix.iter().chain(&play.cycle).any(|&v| t[v]),
            Objective::Parity(c) => play.cycle.iter().map(|&v| c[v]).min().is_some_and(|m| m % 2 == 0),
        }
    }
}

/// Shifts every priority by one; the result accepts exactly the rejected plays.
pub fn complement_priorities(c: &[u32]) -> Vec<u32> {
    c.iter().map(|p| p + 1).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LassoError {
    #[error("lasso cycle is empty")]
    EmptyCycle,
    #[error("lasso does not start at the initial vertex")]
    WrongStart,
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("no edge {0}->{1}")]
    MissingEdge(Vertex, Vertex),
}

/// Ultimately periodic play `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LassoPlay {
    pub prefix: Vec<Vertex>,
    pub cycle: Vec<Vertex>,
}

impl LassoPlay {
    pub fn new(prefix: Vec<Vertex>, cycle: Vec<Vertex>) -> LassoPlay {
        LassoPlay { prefix, cycle }
    }

    pub fn check(&self, arena: &Arena) -> Result<(), LassoError> {
        if self.cycle.is_empty() {
            return Err(LassoError::EmptyCycle);
        }
        if let Some(&v) = self.prefix.iter().chain(&self.cycle).find(|&&v| v >= arena.len()) {
            return Err(LassoError::OutOfRange(v));
        }
        let first = self.prefix.first().unwrap_or(&self.cycle[0]);
        if *first != arena.initial() {
            return Err(LassoError::WrongStart);
        }
        let seq: Vec<Vertex> = self
            .prefix
            .iter()
            .chain(&self.cycle)
            .chain(std::iter::once(&self.cycle[0]))
            .copied()
            .collect();
        for w in seq.windows(2) {
            if !arena.has_edge(w[0], w[1]) {
                return Err(LassoError::MissingEdge(w[0], w[1]));
            }
        }
        Ok(())
    }

    /// Vertex at position `i` of the infinite play.
    pub fn at(&self, i: usize) -> Vertex {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Length of prefix plus one cycle.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Renders as `prefix ( cycle )^w` with vertex names.
    pub fn display<'a>(&'a self, arena: &'a Arena) -> LassoDisplay<'a> {
        LassoDisplay { play: self, arena }
    }
}

pub struct LassoDisplay<'a> {
    play: &'a LassoPlay,
    arena: &'a Arena,
}

impl fmt::Display for LassoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.play.prefix {
            write!(f, "{} ", self.arena.name(v))?;
        }
        write!(f, "(")?;
        for (i, &v) in self.play.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.arena.name(v))?;
        }
        write!(f, ")^w")
    }
}

pub fn eval(obj: &Objective, play: &LassoPlay) -> bool {
    obj.eval(play)
}

pub fn extended_payoff(game: &SpGame, play: &LassoPlay) -> ExtendedPayoff {
    let won = game.leader_objective().eval(play);
    let values: Vec<bool> = game.follower_objectives().iter().map(|o| o.eval(play)).collect();
    ExtendedPayoff::new(won, Payoff::from_slice(&values))
}

/// Payoffs of all plays of the game, in canonical order.
pub fn feasible_payoffs(game: &SpGame) -> Result<Vec<Payoff>, PayoffError> {
    let t = game.t();
    if t > MAX_WIDTH {
        return Err(PayoffError::TooWide(t));
    }
    let mut out = match game.kind() {
        ObjectiveKind::Reachability => {
            let marks = game.reach_marks().ok_or(PayoffError::TooWide(t))?;
            let levels = reach_level_graph(game.arena(), &marks, game.arena().initial());
            levels.achievable_payoffs(t)
        }
        ObjectiveKind::Parity => {
            let arena = game.arena();
            let maps = game.priority_maps();
            let mut found = Vec::new();
            for p in Payoff::all(t) {
                let exact: Vec<Vec<u32>> = (0..t)
                    .map(|i| {
                        if p.get(i) {
                            maps[i + 1].to_vec()
                        } else {
                            complement_priorities(maps[i + 1])
                        }
                    })
                    .collect();
                if conj_parity_path_exists(arena.adjacency(), &exact, arena.initial()).is_some() {
                    found.push(p);
                }
            }
            found
        }
    };
    out.sort();
    Ok(out)
}

/// Product of a graph with accumulated reachability marks.
pub(crate) struct LevelGraph {
    /// (base node, packed marks)
    pub nodes: Vec<(usize, u64)>,
    pub succ: Vec<Vec<usize>>,
}

impl LevelGraph {
    /// Nodes lying on a cycle whose nodes all carry the same marks.
    pub fn cyclic_nodes(&self) -> Vec<bool> {
        let alive = vec![true; self.nodes.len()];
        let mut cyclic = vec![false; self.nodes.len()];
        // marks only grow, so every cycle stays inside one level
        for comp in graph::sccs(&self.succ, &alive) {
            if graph::is_cyclic(&self.succ, &comp) {
                for v in comp {
                    cyclic[v] = true;
                }
            }
        }
        cyclic
    }

    pub fn achievable_payoffs(&self, t: usize) -> Vec<Payoff> {
        let cyclic = self.cyclic_nodes();
        let mut out: Vec<Payoff> = (0..self.nodes.len())
            .filter(|&i| cyclic[i])
            .map(|i| Payoff::from_bits(t, self.nodes[i].1 >> 1))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Explores (v, marks) from `start`, where marks accumulate `marks[v]`.
pub(crate) fn reach_level_graph(arena: &Arena, marks: &[u64], start: Vertex) -> LevelGraph {
    level_graph(arena.adjacency(), &|v| marks[v], start)
}

pub(crate) fn level_graph(succ: &[Vec<usize>], mark: &dyn Fn(usize) -> u64, start: usize) -> LevelGraph {
    let mut index: HashMap<(usize, u64), usize> = HashMap::new();
    let mut nodes = vec![(start, mark(start))];
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    index.insert(nodes[0], 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (v, bits) = nodes[i];
        for &u in &succ[v] {
            let key = (u, bits | mark(u));
            let j = *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                out.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            out[i].push(j);
        }
    }
    LevelGraph { nodes, succ: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Player;

    fn single(all_targets: bool) -> SpGame {
        let a = Arena::new(vec![Player::Zero], vec![vec![0]], 0).unwrap();
        SpGame::new(
            a,
            Objective::Reach(vec![true]),
            vec![Objective::Reach(vec![all_targets]); 2],
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_feasible() {
        assert_eq!(feasible_payoffs(&single(true)).unwrap(), vec![Payoff::top(2)]);
        assert_eq!(feasible_payoffs(&single(false)).unwrap(), vec![Payoff::zero(2)]);
    }

    #[test]
    fn parity_eval() {
        let play = LassoPlay::new(vec![0], vec![1, 2]);
        assert!(Objective::Parity(vec![0; 3]).eval(&play));
        assert!(!Objective::Parity(vec![0, 1, 2]).eval(&play));
        assert!(Objective::Parity(vec![1, 3, 2]).eval(&play));
        assert!(!Objective::Parity(complement_priorities(&[1, 3, 2])).eval(&play));
    }

    #[test]
    fn lasso_checks() {
        let a = Arena::new(vec![Player::Zero; 2], vec![vec![1], vec![0, 1]], 0).unwrap();
        assert!(LassoPlay::new(vec![0], vec![1]).check(&a).is_ok());
        assert!(LassoPlay::new(vec![], vec![0, 1]).check(&a).is_ok());
        assert_eq!(LassoPlay::new(vec![0], vec![0]).check(&a), Err(LassoError::MissingEdge(0, 0)));
        assert_eq!(LassoPlay::new(vec![1], vec![1]).check(&a), Err(LassoError::WrongStart));
        assert_eq!(LassoPlay::new(vec![0], vec![]).check(&a), Err(LassoError::EmptyCycle));
        assert_eq!(LassoPlay::new(vec![0, 1], vec![0, 1]).at(5), 1);
        assert_eq!(LassoPlay::new(vec![0], vec![1]).display(&a).to_string(), "v0 (v1)^w");
    }
}
