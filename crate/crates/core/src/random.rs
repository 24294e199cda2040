//! Seeded random instances for differential testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arena::{Arena, Player, SpGame};
use crate::objectives::Objective;

/// Arena on `n` vertices with 1 to `max_degree` distinct successors each.
pub fn random_arena(rng: &mut impl Rng, n: usize, max_degree: usize) -> Arena {
    let owners = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Zero } else { Player::One })
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let succ = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=max_degree.clamp(1, n));
            let mut list: Vec<usize> = all.choose_multiple(rng, d).copied().collect();
            list.sort_unstable();
            list
        })
        .collect();
    Arena::new(owners, succ, 0).expect("every vertex has a successor")
}

/// Tree-shaped arena with out-degree at most 2: every vertex but the root
/// hangs below an earlier vertex. A leaf loops on itself, or with
/// probability `back` returns to one of its ancestors.
pub fn random_tree_arena(rng: &mut impl Rng, n: usize, back: f64) -> Arena {
    let owners = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Zero } else { Player::One })
        .collect();
    let mut parent = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| succ[u].len() < 2).collect();
        let p = *open.choose(rng).expect("a binary tree always has a free slot");
        parent[v] = p;
        succ[p].push(v);
    }
    for v in 0..n {
        if succ[v].is_empty() {
            let mut ancestors = vec![v];
            let mut u = v;
            while u != 0 {
                u = parent[u];
                ancestors.push(u);
            }
            let target = if rng.gen_bool(back) { *ancestors.choose(rng).expect("non-empty") } else { v };
            succ[v].push(target);
        }
    }
    Arena::new(owners, succ, 0).expect("every vertex has a successor")
}

/// Reachability objectives on `arena`: `t` for Player 1 and one for Player
/// 0, each vertex other than the initial one joining each target set with
/// probability `density`.
pub fn reach_game_on(rng: &mut impl Rng, arena: Arena, t: usize, density: f64) -> SpGame {
    let n = arena.len();
    let v0 = arena.initial();
    let mut objective = || Objective::Reach((0..n).map(|v| v != v0 && rng.gen_bool(density)).collect());
    let leader = objective();
    let followers = (0..t).map(|_| objective()).collect();
    SpGame::new(arena, leader, followers).expect("well-formed random game")
}

/// Parity objectives on `arena` with priorities in `0..=max_priority`.
pub fn parity_game_on(rng: &mut impl Rng, arena: Arena, t: usize, max_priority: u32) -> SpGame {
    let n = arena.len();
    let mut objective = || Objective::Parity((0..n).map(|_| rng.gen_range(0..=max_priority)).collect());
    let leader = objective();
    let followers = (0..t).map(|_| objective()).collect();
    SpGame::new(arena, leader, followers).expect("well-formed random game")
}

/// Reachability game with `t` follower objectives; each vertex joins each
/// target set with probability `density`.
pub fn random_reach_game(rng: &mut impl Rng, n: usize, t: usize, max_degree: usize, density: f64) -> SpGame {
    let arena = random_arena(rng, n, max_degree);
    reach_game_on(rng, arena, t, density)
}

/// Parity game with `t` follower objectives and priorities in `0..=max_priority`.
pub fn random_parity_game(rng: &mut impl Rng, n: usize, t: usize, max_degree: usize, max_priority: u32) -> SpGame {
    let arena = random_arena(rng, n, max_degree);
    parity_game_on(rng, arena, t, max_priority)
}
