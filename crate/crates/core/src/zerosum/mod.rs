//! Zero-sum solvers: attractors, Büchi, parity, Emerson-Lei and
//! path existence for conjunctions of parity conditions.

mod emerson_lei;
mod parity;
mod paths;

use thiserror::Error;

use crate::arena::{Arena, Player, Vertex};
use crate::formula::BooleanFormula;

pub use emerson_lei::{solve_emerson_lei, ElStrategy, ZielonkaTree};
pub use parity::solve_parity;
pub use paths::{conj_parity_path_exists, conj_parity_path_exists_in};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroSumObjective {
    Buchi(Vec<bool>),
    Parity(Vec<u32>),
    EmersonLei {
        formula: BooleanFormula,
        sets: Vec<Vec<bool>>,
    },
}

/// Arena whose `Player::Zero` vertices belong to the protagonist.
#[derive(Clone, Debug)]
pub struct ZeroSumGame {
    pub arena: Arena,
    pub objective: ZeroSumObjective,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("formula variable {0} has no vertex set")]
    UnboundVariable(usize),
    #[error("objective sets must cover {expected} vertices, found {found}")]
    SetSize { expected: usize, found: usize },
    #[error("too many relevant formula variables ({0})")]
    TooManyVariables(usize),
    #[error("wrong objective for this solver")]
    WrongObjective,
}

#[derive(Clone, Debug)]
pub enum ZeroSumStrategy {
    /// Chosen successor per vertex; set on protagonist vertices of the region.
    Memoryless(Vec<Option<Vertex>>),
    FiniteMemory(ElStrategy),
}

impl ZeroSumStrategy {
    pub fn initial_memory(&self) -> usize {
        match self {
            ZeroSumStrategy::Memoryless(_) => 0,
            ZeroSumStrategy::FiniteMemory(s) => s.initial_memory(),
        }
    }

    /// Memory after reading `v` in memory `m`.
    pub fn update(&self, m: usize, v: Vertex) -> usize {
        match self {
            ZeroSumStrategy::Memoryless(_) => 0,
            ZeroSumStrategy::FiniteMemory(s) => s.update(m, v),
        }
    }

    /// Successor chosen at `v` when the memory (after reading `v`) is `m`.
    pub fn choose(&self, m: usize, v: Vertex) -> Option<Vertex> {
        match self {
            ZeroSumStrategy::Memoryless(c) => c[v],
            ZeroSumStrategy::FiniteMemory(s) => s.choose(m, v),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub protagonist_region: Vec<bool>,
    pub strategy: ZeroSumStrategy,
    /// Antagonist choices on its region, when the solver produces them.
    pub antagonist: Option<Vec<Option<Vertex>>>,
}

impl SolveResult {
    pub fn wins(&self, v: Vertex) -> bool {
        self.protagonist_region[v]
    }
}

pub fn solve(game: &ZeroSumGame) -> Result<SolveResult, SolveError> {
    match &game.objective {
        ZeroSumObjective::Buchi(b) => solve_buchi(&game.arena, b),
        ZeroSumObjective::Parity(c) => solve_parity(&game.arena, c),
        ZeroSumObjective::EmersonLei { formula, sets } => solve_emerson_lei(&game.arena, formula, sets),
    }
}

/// Adjacency view used by the solvers, so product graphs need not be `Arena`s.
pub(crate) struct GameGraph<'a> {
    pub owner: &'a [Player],
    pub succ: &'a [Vec<usize>],
    pub pred: Vec<Vec<usize>>,
}

impl<'a> GameGraph<'a> {
    pub fn new(owner: &'a [Player], succ: &'a [Vec<usize>]) -> GameGraph<'a> {
        let mut pred = vec![Vec::new(); succ.len()];
        for (v, list) in succ.iter().enumerate() {
            for &u in list {
                pred[u].push(v);
            }
        }
        GameGraph { owner, succ, pred }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    /// Attractor for `player` to `target` inside the subgame `alive`, with
    /// the attracting move of every `player` vertex added (not in target).
    pub fn attractor(&self, alive: &[bool], player: Player, target: &[bool]) -> (Vec<bool>, Vec<Option<usize>>) {
        let n = self.len();
        let mut inside = vec![false; n];
        let mut choice = vec![None; n];
        let mut count = vec![0usize; n];
        let mut queue = std::collections::VecDeque::new();
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            if target[v] {
                inside[v] = true;
                queue.push_back(v);
            } else {
                count[v] = self.succ[v].iter().filter(|&&u| alive[u]).count();
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.pred[v] {
                if !alive[u] || inside[u] {
                    continue;
                }
                let add = if self.owner[u] == player {
                    true
                } else {
                    count[u] -= 1;
                    count[u] == 0
                };
                if add {
                    if self.owner[u] == player {
                        choice[u] = self.succ[u].iter().copied().find(|&s| alive[s] && inside[s]);
                    }
                    inside[u] = true;
                    queue.push_back(u);
                }
            }
        }
        (inside, choice)
    }
}

/// Vertices from which `player` can force a visit to `target`.
pub fn attractor(arena: &Arena, player: Player, target: &[bool]) -> Vec<bool> {
    let g = GameGraph::new(arena.owners(), arena.adjacency());
    g.attractor(&vec![true; arena.len()], player, target).0
}

pub fn solve_buchi(arena: &Arena, accepting: &[bool]) -> Result<SolveResult, SolveError> {
    if accepting.len() != arena.len() {
        return Err(SolveError::SetSize {
            expected: arena.len(),
            found: accepting.len(),
        });
    }
    let g = GameGraph::new(arena.owners(), arena.adjacency());
    Ok(buchi(&g, accepting))
}

pub(crate) fn buchi(g: &GameGraph<'_>, accepting: &[bool]) -> SolveResult {
    let n = g.len();
    let mut alive = vec![true; n];
    loop {
        let target: Vec<bool> = (0..n).map(|v| alive[v] && accepting[v]).collect();
        let (reach, _) = g.attractor(&alive, Player::Zero, &target);
        let trap: Vec<bool> = (0..n).map(|v| alive[v] && !reach[v]).collect();
        if !trap.iter().any(|&x| x) {
            break;
        }
        let (lost, _) = g.attractor(&alive, Player::One, &trap);
        for v in 0..n {
            if lost[v] {
                alive[v] = false;
            }
        }
    }
    let target: Vec<bool> = (0..n).map(|v| alive[v] && accepting[v]).collect();
    let (_, attract) = g.attractor(&alive, Player::Zero, &target);
    let mut choice = vec![None; n];
    for v in 0..n {
        if !alive[v] || g.owner[v] != Player::Zero {
            continue;
        }
        choice[v] = if target[v] {
            g.succ[v].iter().copied().find(|&u| alive[u])
        } else {
            attract[v]
        };
    }
    SolveResult {
        protagonist_region: alive,
        strategy: ZeroSumStrategy::Memoryless(choice),
        antagonist: None,
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use rand::SeedableRng;

    fn chain() -> Arena {
        Arena::new(vec![Player::Zero; 3], vec![vec![1], vec![2], vec![2]], 0).unwrap()
    }

    #[test]
    fn attractor_examples() {
        let a = chain();
        assert_eq!(attractor(&a, Player::Zero, &[true; 3]), vec![true; 3]);
        assert_eq!(attractor(&a, Player::Zero, &[false; 3]), vec![false; 3]);
        assert_eq!(attractor(&a, Player::Zero, &[false, false, true]), vec![true; 3]);
    }

    #[test]
    fn attractor_is_monotone_and_idempotent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_arena(&mut rng, 7, 3);
            let target: Vec<bool> = (0..7).map(|_| rand::Rng::gen_bool(&mut rng, 0.3)).collect();
            for p in [Player::Zero, Player::One] {
                let at = attractor(&a, p, &target);
                assert!((0..7).all(|v| !target[v] || at[v]));
                assert_eq!(attractor(&a, p, &at), at);
            }
        }
    }

    #[test]
    fn buchi_single_vertex() {
        let a = Arena::new(vec![Player::Zero], vec![vec![0]], 0).unwrap();
        assert!(solve_buchi(&a, &[true]).unwrap().wins(0));
        assert!(!solve_buchi(&a, &[false]).unwrap().wins(0));
    }

    #[test]
    fn buchi_matches_memoryless_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let a = random_arena(&mut rng, 6, 2);
            let b: Vec<bool> = (0..6).map(|_| rand::Rng::gen_bool(&mut rng, 0.3)).collect();
            let res = solve_buchi(&a, &b).unwrap();
            let s0s = memoryless_strategies(&a, Player::Zero);
            let s1s = memoryless_strategies(&a, Player::One);
            for v in a.vertices() {
                let oracle = s0s.iter().any(|s0| {
                    s1s.iter().all(|s1| {
                        let (_, cycle) = play_lasso(&a, s0, s1, v);
                        cycle.iter().any(|&u| b[u])
                    })
                });
                assert_eq!(res.wins(v), oracle);
                if res.wins(v) {
                    let ZeroSumStrategy::Memoryless(s0) = &res.strategy else { unreachable!() };
                    for s1 in &s1s {
                        let (_, cycle) = play_lasso(&a, s0, s1, v);
                        assert!(cycle.iter().any(|&u| b[u]));
                    }
                }
            }
        }
    }
}
