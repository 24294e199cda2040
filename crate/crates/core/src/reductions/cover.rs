use serde::{Deserialize, Serialize};

use super::{any_subset, binomial, Builder, ReductionError, MAX_ENUMERATION};
use crate::arena::{Player, SpGame};
use crate::objectives::Objective;

/// Elements `1..=n`, `m` subsets of them and a budget `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScInstance {
    pub n: usize,
    pub subsets: Vec<Vec<usize>>,
    pub k: usize,
}

impl ScInstance {
    pub fn new(n: usize, subsets: Vec<Vec<usize>>, k: usize) -> Result<ScInstance, ReductionError> {
        let inst = ScInstance { n, subsets, k };
        inst.validate()?;
        Ok(inst)
    }

    pub fn m(&self) -> usize {
        self.subsets.len()
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.k == 0 || self.k > self.m() {
            return Err(ReductionError::Invalid(format!("budget {} outside 1..={}", self.k, self.m())));
        }
        if let Some(e) = self.subsets.iter().flatten().find(|&&e| e == 0 || e > self.n) {
            return Err(ReductionError::Invalid(format!("element {e} outside 1..={}", self.n)));
        }
        Ok(())
    }
}

/// Some `k` subset indices (repeats allowed) cover every element. Repeating
/// an index never helps, so only sets of `k` distinct indices are tried.
pub fn solve_sc_bruteforce(inst: &ScInstance) -> Result<bool, ReductionError> {
    inst.validate()?;
    if inst.n > 128 {
        return Err(ReductionError::TooLarge(format!("{} elements", inst.n)));
    }
    if binomial(inst.m() as u64, inst.k as u64) > MAX_ENUMERATION {
        return Err(ReductionError::TooLarge(format!("{} choose {}", inst.m(), inst.k)));
    }
    let masks: Vec<u128> = inst
        .subsets
        .iter()
        .map(|s| s.iter().fold(0u128, |acc, &e| acc | 1 << (e - 1)))
        .collect();
    let all: u128 = if inst.n == 128 { u128::MAX } else { (1u128 << inst.n) - 1 };
    Ok(any_subset(inst.m(), inst.k, |pick| pick.iter().fold(0, |acc, &i| acc | masks[i]) == all))
}

/// Tree game with `n + k(m+1) + 3` vertices: Player 1 either shows one
/// element (lost for Player 0) or lets Player 0 pick a subset at one of `k`
/// choice vertices (won). Objective `i` is reached at element `i` and at
/// every subset containing it; the last objective marks the choice branch.
pub fn sc_to_sps(inst: &ScInstance) -> Result<SpGame, ReductionError> {
    inst.validate()?;
    let mut b = Builder::new();
    let v0 = b.add("v0", Player::One);
    let v1 = b.add("v1", Player::One);
    let v2 = b.add("v2", Player::One);
    b.edge(v0, v1);
    b.edge(v0, v2);
    let elements: Vec<usize> = (1..=inst.n).map(|e| b.add(format!("e{e}"), Player::Zero)).collect();
    for &e in &elements {
        b.edge(v1, e);
        b.edge(e, e);
    }
    // subset leaves per choice vertex, as (vertex, subset index)
    let mut leaves = Vec::new();
    for j in 1..=inst.k {
        let c = b.add(format!("c{j}"), Player::Zero);
        b.edge(v2, c);
        for s in 0..inst.m() {
            let leaf = b.add(format!("c{j}.S{}", s + 1), Player::Zero);
            b.edge(c, leaf);
            b.edge(leaf, leaf);
            leaves.push((leaf, s));
        }
    }
    let n = b.len();
    let mut followers: Vec<Objective> = (1..=inst.n)
        .map(|e| {
            let mut targets = vec![elements[e - 1]];
            targets.extend(leaves.iter().filter(|&&(_, s)| inst.subsets[s].contains(&e)).map(|&(v, _)| v));
            Objective::reach(n, &targets)
        })
        .collect();
    followers.push(Objective::reach(n, &[v2]));
    let arena = b.arena(v0)?;
    Ok(SpGame::new(arena, Objective::reach(n, &[v2]), followers)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cover_cases() {
        let yes = ScInstance::new(2, vec![vec![1], vec![2], vec![1, 2]], 1).unwrap();
        assert!(solve_sc_bruteforce(&yes).unwrap());
        let no = ScInstance::new(2, vec![vec![1], vec![2]], 1).unwrap();
        assert!(!solve_sc_bruteforce(&no).unwrap());
        assert!(ScInstance::new(2, vec![vec![3]], 1).is_err());
        assert!(ScInstance::new(2, vec![vec![1]], 2).is_err());
    }

    #[test]
    fn reduced_size() {
        let inst = ScInstance::new(2, vec![vec![1], vec![2], vec![1, 2]], 1).unwrap();
        let g = sc_to_sps(&inst).unwrap();
        assert_eq!(g.arena().len(), 9);
        assert_eq!(g.t(), 3);
    }
}
