use std::collections::{HashMap, VecDeque};

use super::{verify_strategy, MooreStrategy, SpsError, StrategyError};
use crate::arena::{binarize, Binarized, Player, SpGame, Vertex};
use crate::cpgame::{build_cp, CpGame, CpVertex};
use crate::objectives::feasible_payoffs;
use crate::payoff::{enumerate_antichains, Antichain};
use crate::zerosum::{solve, SolveResult, ZeroSumGame, ZeroSumStrategy};

/// Outcome of [`solve_sps`].
#[derive(Clone, Debug)]
pub struct SpsSolution {
    pub solvable: bool,
    pub strategy: Option<MooreStrategy>,
    pub pareto: Option<Antichain>,
    /// Antichains tried, the winning one included.
    pub antichains_tried: usize,
}

/// Turns a winning Prover strategy of a C-P game into a Player-0 strategy
/// of the game the C-P game was built from.
///
/// Memory states are the reachable pairs (Prover vertex, Prover memory),
/// plus one state standing before the initial vertex.
pub fn extract_solution(game: &SpGame, cp: &CpGame, prover: &ZeroSumStrategy) -> Result<MooreStrategy, SpsError> {
    let arena = game.arena();
    let n = arena.len();
    let cp_arena = &cp.arena;
    let start = cp.start();
    let m_start = prover.update(prover.initial_memory(), start);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut intern = |key: (usize, usize), keys: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(key).or_insert_with(|| {
            keys.push(key);
            queue.push_back(keys.len());
            keys.len()
        })
    };
    let mut queue = VecDeque::new();
    // state 0 is the pre-state
    let first = intern((start, m_start), &mut keys, &mut queue);
    let mut updates: Vec<(usize, Vertex, usize)> = vec![(0, arena.initial(), first)];
    let mut outputs: Vec<(usize, Vertex, Vertex)> = Vec::new();
    while let Some(s) = queue.pop_front() {
        let (x, m) = keys[s - 1];
        let v = cp.states[x].base.vertex();
        let choice = prover.choose(m, x).ok_or(SpsError::LosingProver)?;
        match arena.owner(v) {
            Player::Zero => {
                let u = cp.states[choice].base.vertex();
                outputs.push((s, v, u));
                let next = intern((choice, prover.update(m, choice)), &mut keys, &mut queue);
                updates.push((s, u, next));
            }
            Player::One => {
                let mc = prover.update(m, choice);
                for (k, &y) in cp_arena.successors(choice).iter().enumerate() {
                    let u = arena.successors(v)[k];
                    debug_assert_eq!(cp.states[y].base.vertex(), u);
                    let next = intern((y, prover.update(mc, y)), &mut keys, &mut queue);
                    updates.push((s, u, next));
                }
            }
        }
    }
    let mut out = MooreStrategy::new(keys.len() + 1, 0, n);
    for (s, v, next) in updates {
        out.set_update(s, v, next);
    }
    for (s, v, u) in outputs {
        out.set_output(s, v, u);
    }
    Ok(out.minimized())
}

/// Carries a strategy of the binarized game back to the original game by
/// running the machine through each tree of fresh vertices.
///
/// A state of the result is a pair (machine state, last original vertex).
pub fn project_binarized(bin: &Binarized, original: &SpGame, strategy: &MooreStrategy) -> Result<MooreStrategy, StrategyError> {
    if bin.added() == 0 {
        return Ok(strategy.clone());
    }
    let a = original.arena();
    let n = a.len();
    let mut index: HashMap<(usize, Vertex), usize> = HashMap::new();
    let mut order: Vec<(usize, Vertex)> = Vec::new();
    let mut updates: Vec<(usize, Vertex, usize)> = Vec::new();
    let mut outputs: Vec<(usize, Vertex, Vertex)> = Vec::new();
    let mut intern = |key: (usize, Vertex), order: &mut Vec<(usize, Vertex)>| -> usize {
        *index.entry(key).or_insert_with(|| {
            order.push(key);
            order.len()
        })
    };
    // state 0 stands before the initial vertex
    let v0 = a.initial();
    let m0 = strategy.update(strategy.initial(), v0).ok_or(StrategyError::MissingUpdate {
        state: strategy.initial(),
        vertex: v0,
    })?;
    let first = intern((m0, v0), &mut order);
    updates.push((0, v0, first));
    let mut i = 0;
    while i < order.len() {
        let (s, v) = order[i];
        let id = i + 1;
        if a.owner(v) == Player::Zero {
            if let Some((u, next)) = follow_outputs(bin, strategy, s, v) {
                outputs.push((id, v, u));
                let j = intern((next, u), &mut order);
                updates.push((id, u, j));
            }
        } else {
            for &u in a.successors(v) {
                if let Some(next) = run_path(bin, strategy, s, v, u) {
                    let j = intern((next, u), &mut order);
                    updates.push((id, u, j));
                }
            }
        }
        i += 1;
    }
    let mut out = MooreStrategy::new(order.len() + 1, 0, n);
    for (s, v, next) in updates {
        out.set_update(s, v, next);
    }
    for (s, v, u) in outputs {
        out.set_output(s, v, u);
    }
    Ok(out.minimized())
}

/// Follows the machine's outputs from original vertex `v` through fresh
/// vertices; returns the original vertex reached and the memory after it.
fn follow_outputs(bin: &Binarized, strategy: &MooreStrategy, s: usize, v: Vertex) -> Option<(Vertex, usize)> {
    let mut cur = v;
    let mut m = s;
    loop {
        let next = strategy.output(m, cur)?;
        m = strategy.update(m, next)?;
        if next < bin.original_len {
            return Some((next, m));
        }
        cur = next;
    }
}

/// Memory after walking the tree path from `v` to its original successor `u`.
fn run_path(bin: &Binarized, strategy: &MooreStrategy, s: usize, v: Vertex, u: Vertex) -> Option<usize> {
    let mut m = s;
    for x in tree_path(bin, v, u)? {
        m = strategy.update(m, x)?;
    }
    Some(m)
}

/// Vertices after `v` on the binarized path from `v` to `u`, `u` included.
fn tree_path(bin: &Binarized, v: Vertex, u: Vertex) -> Option<Vec<Vertex>> {
    let b = bin.game.arena();
    let mut stack: Vec<(Vertex, Vec<Vertex>)> = vec![(v, Vec::new())];
    while let Some((x, path)) = stack.pop() {
        for &y in b.successors(x) {
            let mut p = path.clone();
            p.push(y);
            if y == u {
                return Some(p);
            }
            if y >= bin.original_len && bin.origin[y] == v {
                stack.push((y, p));
            }
        }
    }
    None
}

fn solved_from_start(cp: &CpGame) -> Result<Option<SolveResult>, SpsError> {
    let zs = ZeroSumGame {
        arena: cp.arena.clone(),
        objective: cp.objective.clone(),
    };
    let res = solve(&zs)?;
    Ok(if res.wins(cp.start()) { Some(res) } else { None })
}

/// Decides the problem: binarizes, tries every antichain of feasible
/// payoffs in canonical order and returns a verified strategy for the first
/// antichain the Prover wins.
pub fn solve_sps(game: &SpGame) -> Result<SpsSolution, SpsError> {
    let bin = binarize(game);
    let feasible = feasible_payoffs(&bin.game)?;
    let mut tried = 0;
    for p in enumerate_antichains(&feasible) {
        if p.is_empty() {
            continue;
        }
        tried += 1;
        let cp = build_cp(&bin.game, &p)?;
        let Some(res) = solved_from_start(&cp)? else {
            continue;
        };
        let on_bin = extract_solution(&bin.game, &cp, &res.strategy)?;
        let strategy = project_binarized(&bin, game, &on_bin)?;
        let report = verify_strategy(game, &strategy)?;
        if !report.is_solution || report.pareto_set != p {
            return Err(SpsError::ExtractionFailed(p.to_string()));
        }
        return Ok(SpsSolution {
            solvable: true,
            strategy: Some(strategy),
            pareto: Some(p),
            antichains_tried: tried,
        });
    }
    Ok(SpsSolution {
        solvable: false,
        strategy: None,
        pareto: None,
        antichains_tried: tried,
    })
}

/// The Prover's moves along the extracted strategy, for highlighting.
pub fn prover_choices(cp: &CpGame, res: &SolveResult) -> Vec<Option<usize>> {
    // memoryless view at the initial memory; exact for Büchi games
    let m0 = res.strategy.initial_memory();
    (0..cp.len())
        .map(|x| match cp.states[x].base {
            CpVertex::Prover { .. } if res.wins(x) => res.strategy.choose(res.strategy.update(m0, x), x),
            _ => None,
        })
        .collect()
}
