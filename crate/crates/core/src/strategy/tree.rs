use super::SpsError;
use crate::arena::{is_tree_arena, ObjectiveKind, Player, SpGame, Vertex};
use crate::payoff::{pareto_max, ExtendedPayoff, Payoff};

/// Solves a reachability game on a tree arena by trying every memoryless
/// choice of Player 0 and checking the leaves it leaves reachable.
pub fn tree_solve(game: &SpGame) -> Result<(bool, Option<Vec<Option<Vertex>>>), SpsError> {
    let arena = game.arena();
    if !is_tree_arena(arena) {
        return Err(SpsError::NotATree);
    }
    if game.kind() != ObjectiveKind::Reachability {
        return Err(SpsError::WrongKind(ObjectiveKind::Reachability));
    }
    let marks = game.reach_marks().ok_or(SpsError::TooManyObjectives(game.t()))?;
    let choosers: Vec<Vertex> = arena
        .vertices()
        .filter(|&v| arena.owner(v) == Player::Zero && arena.successors(v).iter().any(|&u| u != v))
        .collect();
    let mut pick = vec![0usize; choosers.len()];
    loop {
        let mut choice: Vec<Option<Vertex>> = arena
            .vertices()
            .map(|v| (arena.owner(v) == Player::Zero).then(|| arena.successors(v)[0]))
            .collect();
        for (k, &v) in choosers.iter().enumerate() {
            choice[v] = Some(arena.successors(v)[pick[k]]);
        }
        if is_solution(game, &marks, &choice) {
            return Ok((true, Some(choice)));
        }
        // next choice vector, odometer style
        let mut k = 0;
        loop {
            if k == choosers.len() {
                return Ok((false, None));
            }
            pick[k] += 1;
            if pick[k] < arena.successors(choosers[k]).len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

fn is_solution(game: &SpGame, marks: &[u64], choice: &[Option<Vertex>]) -> bool {
    let arena = game.arena();
    let t = game.t();
    let mut leaves: Vec<ExtendedPayoff> = Vec::new();
    let mut stack = vec![(arena.initial(), marks[arena.initial()])];
    while let Some((v, acc)) = stack.pop() {
        let succ = arena.successors(v);
        if succ == [v] {
            leaves.push(ExtendedPayoff::unpack(t, acc));
            continue;
        }
        let next: Vec<Vertex> = match arena.owner(v) {
            Player::Zero => vec![choice[v].expect("choice at Player-0 vertex")],
            Player::One => succ.to_vec(),
        };
        for u in next {
            stack.push((u, acc | marks[u]));
        }
    }
    let payoffs: Vec<Payoff> = leaves.iter().map(|e| e.payoff).collect();
    let best = pareto_max(&payoffs);
    leaves.iter().all(|e| e.won || !best.contains(&e.payoff))
}
