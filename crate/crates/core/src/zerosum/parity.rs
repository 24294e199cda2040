//! Zielonka's recursive algorithm for min-parity games (even minimum wins).

use crate::arena::{Arena, Player};

use super::{GameGraph, SolveError, SolveResult, ZeroSumStrategy};

pub fn solve_parity(arena: &Arena, priorities: &[u32]) -> Result<SolveResult, SolveError> {
    if priorities.len() != arena.len() {
        return Err(SolveError::SetSize {
            expected: arena.len(),
            found: priorities.len(),
        });
    }
    let g = GameGraph::new(arena.owners(), arena.adjacency());
    Ok(parity(&g, priorities))
}

pub(crate) fn parity(g: &GameGraph<'_>, priorities: &[u32]) -> SolveResult {
    let n = g.len();
    let mut choice = vec![None; n];
    let alive = vec![true; n];
    let win0 = zielonka(g, priorities, &alive, &mut choice);
    let mut protagonist = vec![None; n];
    let mut antagonist = vec![None; n];
    for v in 0..n {
        match (g.owner[v], win0[v]) {
            (Player::Zero, true) => protagonist[v] = choice[v],
            (Player::One, false) => antagonist[v] = choice[v],
            _ => {}
        }
    }
    SolveResult {
        protagonist_region: win0,
        strategy: ZeroSumStrategy::Memoryless(protagonist),
        antagonist: Some(antagonist),
    }
}

fn winner_of(priority: u32) -> Player {
    if priority % 2 == 0 {
        Player::Zero
    } else {
        Player::One
    }
}

/// Solves the subgame `alive`; returns Player 0's region there and records
/// each vertex owner's choice inside its own winning region.
fn zielonka(g: &GameGraph<'_>, c: &[u32], alive: &[bool], choice: &mut [Option<usize>]) -> Vec<bool> {
    let n = g.len();
    let Some(d) = (0..n).filter(|&v| alive[v]).map(|v| c[v]).min() else {
        return vec![false; n];
    };
    let p = winner_of(d);
    let top: Vec<bool> = (0..n).map(|v| alive[v] && c[v] == d).collect();
    let (a, attract) = g.attractor(alive, p, &top);
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
    let sub0 = zielonka(g, c, &rest, choice);
    let opp_wins_somewhere = (0..n).any(|v| rest[v] && (sub0[v] != (p == Player::Zero)));
    if !opp_wins_somewhere {
        for v in 0..n {
            if !a[v] || g.owner[v] != p {
                continue;
            }
            choice[v] = if top[v] {
                g.succ[v].iter().copied().find(|&u| alive[u])
            } else {
                attract[v]
            };
        }
        return if p == Player::Zero {
            alive.to_vec()
        } else {
            vec![false; n]
        };
    }
    let opp = p.opponent();
    let opp_region: Vec<bool> = (0..n)
        .map(|v| rest[v] && (sub0[v] == (opp == Player::Zero)))
        .collect();
    let (b, attract_opp) = g.attractor(alive, opp, &opp_region);
    for v in 0..n {
        if b[v] && !opp_region[v] && g.owner[v] == opp {
            choice[v] = attract_opp[v];
        }
    }
    let remaining: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
    let sub = zielonka(g, c, &remaining, choice);
    (0..n)
        .map(|v| {
            if b[v] {
                opp == Player::Zero
            } else {
                remaining[v] && sub[v]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerosum::testutil::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn constant_priorities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = random_arena(&mut rng, 5, 2);
        assert!(solve_parity(&a, &[0; 5]).unwrap().protagonist_region.iter().all(|&x| x));
        assert!(solve_parity(&a, &[1; 5]).unwrap().protagonist_region.iter().all(|&x| !x));
    }

    fn parity_ok(c: &[u32], cycle: &[usize]) -> bool {
        cycle.iter().map(|&v| c[v]).min().unwrap() % 2 == 0
    }

    #[test]
    fn matches_memoryless_enumeration_and_strategies_are_sound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for round in 0..300 {
            let a = random_arena(&mut rng, 6, 2);
            let max_p = if round % 2 == 0 { 2 } else { 4 };
            let c: Vec<u32> = (0..6).map(|_| rng.gen_range(0..max_p)).collect();
            let res = solve_parity(&a, &c).unwrap();
            let s0s = memoryless_strategies(&a, Player::Zero);
            let s1s = memoryless_strategies(&a, Player::One);
            let ZeroSumStrategy::Memoryless(mine) = &res.strategy else { unreachable!() };
            let theirs = res.antagonist.as_ref().unwrap();
            for v in a.vertices() {
                let oracle = s0s
                    .iter()
                    .any(|s0| s1s.iter().all(|s1| parity_ok(&c, &play_lasso(&a, s0, s1, v).1)));
                assert_eq!(res.wins(v), oracle, "round {round} vertex {v}");
                if res.wins(v) {
                    for s1 in &s1s {
                        assert!(parity_ok(&c, &play_lasso(&a, mine, s1, v).1));
                    }
                } else {
                    for s0 in &s0s {
                        assert!(!parity_ok(&c, &play_lasso(&a, s0, theirs, v).1));
                    }
                }
            }
        }
    }
}
