#![allow(dead_code)]

use rand::Rng;
use spsynth::reductions::{Cnf, ScInstance, SscInstance};
use spsynth::{Arena, MooreStrategy, Objective, Player, SpGame};

/// The eight-vertex reachability game where Player 0 needs memory.
pub fn memory_game() -> SpGame {
    use Player::{One, Zero};
    let owners = vec![One, Zero, One, Zero, Zero, One, Zero, Zero];
    let succ = vec![vec![1, 2], vec![1], vec![3, 4], vec![5, 7], vec![4], vec![3, 6], vec![6], vec![7]];
    let names = (0..8).map(|i| format!("v{i}")).collect();
    let arena = Arena::new(owners, succ, 0).unwrap().with_names(names).unwrap();
    let r = |t: &[usize]| Objective::reach(8, t);
    SpGame::new(arena, r(&[6, 7]), vec![r(&[4, 7]), r(&[3]), r(&[1, 6])]).unwrap()
}

/// Memoryless strategy moving from v3 to `target`.
pub fn always(game: &SpGame, target: usize) -> MooreStrategy {
    let a = game.arena();
    let choice: Vec<Option<usize>> = a
        .vertices()
        .map(|v| match a.owner(v) {
            Player::Zero if v == 3 => Some(target),
            Player::Zero => Some(a.successors(v)[0]),
            Player::One => None,
        })
        .collect();
    MooreStrategy::memoryless(a, &choice)
}

/// v5 on the first visit to v3, v7 afterwards.
pub fn switching(game: &SpGame) -> MooreStrategy {
    let n = game.arena().len();
    let mut m = MooreStrategy::new(2, 0, n);
    for v in 0..n {
        m.set_update(0, v, if v == 5 { 1 } else { 0 });
        m.set_update(1, v, 1);
    }
    for (v, u) in [(1, 1), (4, 4), (6, 6), (7, 7)] {
        m.set_output(0, v, u);
        m.set_output(1, v, u);
    }
    m.set_output(0, 3, 5);
    m.set_output(1, 3, 7);
    m
}

/// Set cover with n, m <= 5 and k <= 3.
pub fn random_sc(rng: &mut impl Rng) -> ScInstance {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=5);
    let k = rng.gen_range(1..=m.min(3));
    let subsets = (0..m).map(|_| (1..=n).filter(|_| rng.gen_bool(0.4)).collect()).collect();
    ScInstance::new(n, subsets, k).unwrap()
}

/// Multisets of at most `max` clauses from `pool`.
pub fn clause_sets(pool: &[Vec<i32>], max: usize) -> Vec<Vec<Vec<i32>>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(Vec<Vec<i32>>, usize)> = vec![(vec![], 0)];
    for _ in 0..max {
        let mut next = vec![];
        for (set, from) in &frontier {
            for (i, c) in pool.iter().enumerate().skip(*from) {
                let mut s = set.clone();
                s.push(c.clone());
                out.push(s.clone());
                next.push((s, i));
            }
        }
        frontier = next;
    }
    out
}

/// Non-tautological clauses over the variables `1..=vars`.
pub fn clause_pool(vars: i32) -> Vec<Vec<i32>> {
    let mut pool = vec![vec![]];
    for v in 1..=vars {
        pool = pool
            .into_iter()
            .flat_map(|c: Vec<i32>| {
                [None, Some(v), Some(-v)].into_iter().map(move |l| {
                    let mut c = c.clone();
                    c.extend(l);
                    c
                })
            })
            .collect();
    }
    pool.retain(|c| !c.is_empty());
    pool
}

pub fn micro_ssc(phi: &[Vec<i32>], psi: &[Vec<i32>], k: u64) -> SscInstance {
    SscInstance::new(Cnf::new(1, 0, phi.to_vec()).unwrap(), Cnf::new(1, 1, psi.to_vec()).unwrap(), k).unwrap()
}
