//! The ten acceptance criteria, one line each.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{always, clause_pool, clause_sets, memory_game, micro_ssc, random_sc, switching};
use spsynth::io::parse_game;
use spsynth::random::{parity_game_on, random_arena, random_parity_game, random_reach_game, random_tree_arena, reach_game_on};
use spsynth::reductions::{
    build_qk, sc_to_sps, solve_sc_bruteforce, solve_ssc_bruteforce, ssc_to_parity_sps, ssc_to_reach_sps,
};
use spsynth::strategy::{compact_witness, elementary, project_binarized, region_decompose, tree_solve};
use spsynth::zerosum::{solve_buchi, solve_emerson_lei, solve_parity};
use spsynth::{
    binarize, brute_force_solve, extended_payoff, feasible_payoffs, pareto_max, pareto_under_strategy, solve_sps, verify_strategy, Antichain, Arena,
    BooleanFormula, LassoPlay, Payoff, Player, SpGame,
};

type Outcome = Result<String, String>;

fn check(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn payoff(bits: &[u8]) -> Payoff {
    Payoff::from_slice(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
}

fn antichain(list: &[&[u8]]) -> Antichain {
    Antichain::new(list.iter().map(|b| payoff(b)).collect()).unwrap()
}

fn example_end_to_end() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/memory.game.json")).map_err(|e| e.to_string())?;
    let game = parse_game(&text).map_err(|e| e.to_string())?;
    let sol = solve_sps(&game).map_err(|e| e.to_string())?;
    check(sol.solvable, || "reported unsolvable".into())?;
    let want = antichain(&[&[0, 1, 1], &[1, 1, 0]]);
    check(sol.pareto.as_ref() == Some(&want), || format!("pareto {:?}", sol.pareto))?;
    let report = verify_strategy(&game, sol.strategy.as_ref().unwrap()).map_err(|e| e.to_string())?;
    check(report.is_solution, || "extracted strategy fails".into())?;
    for (target, lost) in [(5, payoff(&[1, 0, 0])), (7, payoff(&[0, 0, 1]))] {
        let r = verify_strategy(&game, &always(&game, target)).map_err(|e| e.to_string())?;
        let ce = r.counterexample.ok_or_else(|| format!("always-v{target} accepted"))?;
        let got = extended_payoff(&game, &ce);
        check(!got.won && got.payoff == lost, || format!("always-v{target} counterexample {}", got.payoff))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("pareto {want}, {} memory states, {elapsed:.0?}", sol.strategy.unwrap().states()))
}

fn pareto_fixtures() -> Outcome {
    let game = memory_game();
    let a = pareto_under_strategy(&game, &always(&game, 5)).map_err(|e| e.to_string())?.antichain;
    let b = pareto_under_strategy(&game, &switching(&game)).map_err(|e| e.to_string())?.antichain;
    check(a == antichain(&[&[1, 0, 0], &[0, 1, 1]]), || format!("always-v5 gives {a}"))?;
    check(b == antichain(&[&[0, 1, 1], &[1, 1, 0]]), || format!("switching gives {b}"))?;
    Ok(format!("{a} and {b}"))
}

/// Tree-shaped game whose plays have at least two Pareto-optimal payoffs;
/// plain random arenas rarely have more than one.
fn rich_game(rng: &mut ChaCha8Rng, parity: bool) -> SpGame {
    loop {
        let game = if parity {
            let arena = { let n = rng.gen_range(3..=6); random_tree_arena(rng, n, 0.25) };
            let t = rng.gen_range(1..=2);
            parity_game_on(rng, arena, t, 3)
        } else {
            let arena = { let n = rng.gen_range(3..=8); random_tree_arena(rng, n, 0.25) };
            let t = rng.gen_range(2..=3);
            reach_game_on(rng, arena, t, 0.3)
        };
        if pareto_max(&feasible_payoffs(&game).expect("small game")).len() >= 2 {
            return game;
        }
    }
}

/// Positive reachability games with their verified witnesses, for the
/// compaction check.
type Witnessed = Vec<(SpGame, Vec<LassoPlay>)>;

fn reach_oracle(witnessed: &mut Witnessed) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut yes, mut no, mut wide) = (0, 0, 0);
    for i in 0..500 {
        let game = if i % 2 == 0 {
            let n = rng.gen_range(2..=8);
            let t = rng.gen_range(1..=3);
            random_reach_game(&mut rng, n, t, 2, 0.25)
        } else {
            rich_game(&mut rng, false)
        };
        let sol = solve_sps(&game).map_err(|e| format!("game {i}: {e}"))?;
        match sol.strategy {
            Some(s) => {
                let report = verify_strategy(&game, &s).map_err(|e| e.to_string())?;
                check(report.is_solution, || format!("game {i}: extracted strategy fails"))?;
                check(brute_force_solve(&game, s.states()).is_some(), || format!("game {i}: brute force misses a solution"))?;
                wide += (report.witnesses.len() > 1) as usize;
                witnessed.push((game, report.witnesses.into_iter().map(|(_, w)| w).collect()));
                yes += 1;
            }
            None => {
                check(brute_force_solve(&game, 3).is_none(), || format!("game {i}: brute force finds a solution"))?;
                no += 1;
            }
        }
    }
    check(wide > 0, || "no solution with two Pareto payoffs".into())?;
    Ok(format!("500 games, {yes} solvable ({wide} with |P| > 1), {no} not, {:.1?}", start.elapsed()))
}

fn parity_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut yes, mut no, mut wide) = (0, 0, 0);
    for i in 0..200 {
        let game = if i % 2 == 0 {
            let n = rng.gen_range(2..=6);
            let t = rng.gen_range(1..=2);
            random_parity_game(&mut rng, n, t, 3, 3)
        } else {
            rich_game(&mut rng, true)
        };
        let sol = solve_sps(&game).map_err(|e| format!("game {i}: {e}"))?;
        match sol.strategy {
            Some(s) => {
                let report = verify_strategy(&game, &s).map_err(|e| e.to_string())?;
                check(report.is_solution, || format!("game {i}: extracted strategy fails"))?;
                wide += (report.pareto_set.len() > 1) as usize;
                yes += 1;
            }
            None => {
                check(brute_force_solve(&game, 4).is_none(), || format!("game {i}: brute force finds a solution"))?;
                no += 1;
            }
        }
    }
    check(wide > 0, || "no solution with two Pareto payoffs".into())?;
    Ok(format!("200 games, {yes} solvable ({wide} with |P| > 1), {no} not, {:.1?}", start.elapsed()))
}

fn set_cover_differential() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut yes = 0;
    for _ in 0..250 {
        let inst = random_sc(&mut rng);
        let game = sc_to_sps(&inst).map_err(|e| e.to_string())?;
        let size = inst.n + inst.k * (inst.m() + 1) + 3;
        check(game.arena().len() == size, || format!("{inst:?}: {} vertices", game.arena().len()))?;
        let want = solve_sc_bruteforce(&inst).map_err(|e| e.to_string())?;
        let got = tree_solve(&game).map_err(|e| e.to_string())?.0;
        check(got == want, || format!("{inst:?}: game says {got}"))?;
        yes += want as usize;
    }
    Ok(format!("250 instances, {yes} coverable"))
}

fn succinct_differential() -> Outcome {
    let x_pool = clause_pool(1);
    let xy_pool = clause_pool(2);
    let mut counts = [0usize; 2];
    for (parity, max) in [(false, 2), (true, 1)] {
        for phi in clause_sets(&x_pool, max) {
            for psi in clause_sets(&xy_pool, max) {
                for k in 1..=2u64 {
                    let inst = micro_ssc(&phi, &psi, k);
                    let game = if parity { ssc_to_parity_sps(&inst) } else { ssc_to_reach_sps(&inst) };
                    let game = game.map_err(|e| e.to_string())?;
                    let want = solve_ssc_bruteforce(&inst).map_err(|e| e.to_string())?;
                    let got = brute_force_solve(&game, 2 * k as usize + 2).is_some();
                    check(got == want, || format!("phi {phi:?} psi {psi:?} k {k} parity {parity}: game says {got}"))?;
                    counts[parity as usize] += 1;
                }
            }
        }
    }
    Ok(format!("{} reachability and {} parity instances", counts[0], counts[1]))
}

fn gadget_law() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=64u64 {
        let q = build_qk(k).map_err(|e| e.to_string())?;
        check(q.path_count() == k as u128, || format!("Q_{k} has {} paths", q.path_count()))?;
        let bits = (64 - k.leading_zeros()) as usize;
        check(q.len() <= 2 * bits * bits, || format!("Q_{k} has {} vertices", q.len()))?;
        worst = worst.max(q.len() as f64 / (bits * bits) as f64);
    }
    Ok(format!("k = 1..64, vertices at most {worst:.2}(log k + 1)^2"))
}

fn binarize_preservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bound = 2;
    let (mut yes, mut grown) = (0, 0);
    for i in 0..300 {
        let n = rng.gen_range(1..=6);
        let t = rng.gen_range(1..=2);
        let game = if i % 2 == 0 {
            random_reach_game(&mut rng, n, t, n, 0.3)
        } else {
            random_parity_game(&mut rng, n, t, n, 3)
        };
        let bin = binarize(&game);
        let b = bin.game.arena();
        check(b.len() <= n * n && b.max_out_degree() <= 2, || format!("game {i}: {} vertices", b.len()))?;
        grown += (bin.added() > 0) as usize;
        let before = brute_force_solve(&game, bound);
        let after = brute_force_solve(&bin.game, bound);
        check(before.is_none() || after.is_some(), || format!("game {i}: lost by binarizing"))?;
        if let Some(s) = after {
            let back = project_binarized(&bin, &game, &s).map_err(|e| e.to_string())?;
            let ok = verify_strategy(&game, &back).map_err(|e| e.to_string())?.is_solution;
            check(ok, || format!("game {i}: projected strategy fails"))?;
            check(brute_force_solve(&game, back.states()).is_some(), || format!("game {i}: original unsolved"))?;
            yes += 1;
        }
    }
    Ok(format!("300 games ({grown} grown), {yes} solvable on both sides"))
}

fn random_zero_sum(rng: &mut ChaCha8Rng) -> (Arena, Vec<bool>) {
    let n = rng.gen_range(1..=8);
    let arena = random_arena(rng, n, 3);
    let b = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    (arena, b)
}

fn solver_cross_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..500 {
        let (arena, b) = random_zero_sum(&mut rng);
        let n = arena.len();
        let buchi = solve_buchi(&arena, &b).map_err(|e| e.to_string())?.protagonist_region;
        let prio: Vec<u32> = b.iter().map(|&x| if x { 0 } else { 1 }).collect();
        let parity = solve_parity(&arena, &prio).map_err(|e| e.to_string())?.protagonist_region;
        let el = solve_emerson_lei(&arena, &BooleanFormula::var(0), &[b.clone()]).map_err(|e| e.to_string())?.protagonist_region;
        check(buchi == parity && parity == el, || format!("game {i}: solvers disagree"))?;
        // the opponent, playing the complemented condition, wins exactly the rest
        let owners: Vec<Player> = arena.owners().iter().map(|p| p.opponent()).collect();
        let dual = Arena::new(owners, arena.adjacency().to_vec(), arena.initial()).map_err(|e| e.to_string())?;
        let shifted: Vec<u32> = prio.iter().map(|p| p + 1).collect();
        let other = solve_parity(&dual, &shifted).map_err(|e| e.to_string())?.protagonist_region;
        let co = solve_emerson_lei(&dual, &BooleanFormula::not(BooleanFormula::var(0)), &[b]).map_err(|e| e.to_string())?.protagonist_region;
        check((0..n).all(|v| buchi[v] != other[v] && other[v] == co[v]), || format!("game {i}: regions overlap or leave gaps"))?;
    }
    Ok("500 games, three encodings agree, regions partition V".into())
}

fn compaction_law(witnessed: &Witnessed) -> Outcome {
    let mut count = 0;
    for (i, (game, witnesses)) in witnessed.iter().enumerate() {
        let bound = (game.t() + 2) * witnesses.len();
        for w in witnesses {
            let sections = region_decompose(w, witnesses, game).map_err(|e| format!("game {i}: {e}"))?;
            check(sections.len() <= bound, || format!("game {i}: {} regions", sections.len()))?;
            let compact = compact_witness(w, &sections).map_err(|e| format!("game {i}: {e}"))?;
            compact.check(game.arena()).map_err(|e| format!("game {i}: {e}"))?;
            check(extended_payoff(game, &compact) == extended_payoff(game, w), || format!("game {i}: payoff changed"))?;
            let (_, internal) = sections.split_last().expect("non-empty");
            let pieces: usize = internal.iter().map(|s| elementary(&s.path).len()).sum();
            check(compact.prefix.len() >= pieces, || format!("game {i}: prefix too short"))?;
            for s in internal {
                let e = elementary(&s.path);
                let distinct = e.iter().collect::<std::collections::HashSet<_>>().len();
                check(distinct == e.len() && e.first() == s.path.first() && e.last() == s.path.last(), || {
                    format!("game {i}: section not elementary")
                })?;
                check(compact.prefix.windows(e.len()).any(|win| win == e.as_slice()), || format!("game {i}: section missing"))?;
            }
            check(compact.cycle.len() <= game.arena().len(), || format!("game {i}: long cycle"))?;
            count += 1;
        }
    }
    check(count > 0, || "no witnesses to compact".into())?;
    Ok(format!("{count} witnesses from {} games", witnessed.len()))
}

#[test]
fn acceptance() {
    let mut witnessed = Witnessed::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 example end to end", example_end_to_end()),
        ("2 pareto fixtures", pareto_fixtures()),
        ("3 reachability oracle", reach_oracle(&mut witnessed)),
        ("4 parity oracle", parity_oracle()),
        ("5 set cover differential", set_cover_differential()),
        ("6 succinct cover differential", succinct_differential()),
        ("7 gadget law", gadget_law()),
        ("8 binarize preservation", binarize_preservation()),
        ("9 solver cross-checks", solver_cross_checks()),
        ("10 compaction law", compaction_law(&witnessed)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} criteria failed");
}
