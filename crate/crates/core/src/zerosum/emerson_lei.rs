//! Emerson-Lei games via the Zielonka tree of the winning condition.
//!
//! The tree yields a deterministic parity automaton whose states are tree
//! leaves; the game is solved on the product of the arena with that automaton.

use std::collections::{HashMap, VecDeque};

use crate::arena::{Arena, Player, Vertex};
use crate::formula::BooleanFormula;

use super::parity::parity;
use super::{GameGraph, SolveError, SolveResult, ZeroSumStrategy};

const MAX_RELEVANT_VARS: usize = 22;
const MAX_TREE_NODES: usize = 200_000;

#[derive(Clone, Debug)]
struct TreeNode {
    /// Subset of the relevant variables, as a compressed mask.
    label: u32,
    depth: u32,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// Zielonka tree of a formula restricted to a set of relevant variables;
/// all other variables are treated as false.
#[derive(Clone, Debug)]
pub struct ZielonkaTree {
    vars: Vec<usize>,
    nodes: Vec<TreeNode>,
    root_winning: bool,
}

impl ZielonkaTree {
    pub fn build(formula: &BooleanFormula, relevant: &[usize]) -> Result<ZielonkaTree, SolveError> {
        let k = relevant.len();
        if k > MAX_RELEVANT_VARS {
            return Err(SolveError::TooManyVariables(k));
        }
        let table: Vec<bool> = (0..1u32 << k)
            .map(|s| formula.eval(&|i| relevant.iter().position(|&r| r == i).is_some_and(|j| s >> j & 1 == 1)))
            .collect();
        let full = ((1u64 << k) - 1) as u32;
        let mut nodes = vec![TreeNode {
            label: full,
            depth: 0,
            parent: None,
            children: Vec::new(),
        }];
        let mut up = vec![false; 1 << k];
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let label = nodes[id].label;
            let children = maximal_flips(&table, label, &mut up);
            for child in children {
                if nodes.len() >= MAX_TREE_NODES {
                    return Err(SolveError::TooManyVariables(k));
                }
                let cid = nodes.len();
                nodes.push(TreeNode {
                    label: child,
                    depth: nodes[id].depth + 1,
                    parent: Some(id),
                    children: Vec::new(),
                });
                nodes[id].children.push(cid);
                queue.push_back(cid);
            }
        }
        Ok(ZielonkaTree {
            vars: relevant.to_vec(),
            nodes,
            root_winning: table[full as usize],
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn root_winning(&self) -> bool {
        self.root_winning
    }

    /// Compresses a set of variables (given as a predicate) into the tree's alphabet.
    pub fn letter(&self, holds: impl Fn(usize) -> bool) -> u32 {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, &v)| holds(v))
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }

    pub fn leftmost_leaf(&self, mut node: usize) -> usize {
        while let Some(&c) = self.nodes[node].children.first() {
            node = c;
        }
        node
    }

    /// One automaton step from `leaf` reading `letter`: next leaf and priority.
    pub fn step(&self, leaf: usize, letter: u32) -> (usize, u32) {
        let mut node = leaf;
        let mut below: Option<usize> = None;
        while letter & !self.nodes[node].label != 0 {
            below = Some(node);
            node = self.nodes[node].parent.expect("the root label contains every letter");
        }
        let priority = self.nodes[node].depth + u32::from(!self.root_winning);
        let next = match below {
            None => leaf,
            Some(child) => {
                let siblings = &self.nodes[node].children;
                let pos = siblings.iter().position(|&c| c == child).expect("child of its parent");
                self.leftmost_leaf(siblings[(pos + 1) % siblings.len()])
            }
        };
        (next, priority)
    }
}

/// Maximal strict subsets of `label` whose status differs from `label`'s.
fn maximal_flips(table: &[bool], label: u32, up: &mut [bool]) -> Vec<u32> {
    let want = !table[label as usize];
    let mut out = Vec::new();
    if label == 0 {
        return out;
    }
    let mut s = (label - 1) & label;
    loop {
        // up[s]: some strict superset of s, strictly inside label, has the flipped status
        let mut flag = false;
        let mut missing = label & !s;
        while missing != 0 {
            let bit = missing & missing.wrapping_neg();
            missing &= missing - 1;
            let sup = s | bit;
            if sup != label && (table[sup as usize] == want || up[sup as usize]) {
                flag = true;
                break;
            }
        }
        up[s as usize] = flag;
        if table[s as usize] == want && !flag {
            out.push(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & label;
    }
    out
}

/// Protagonist strategy on the product of the arena with the tree automaton.
#[derive(Clone, Debug)]
pub struct ElStrategy {
    tree: ZielonkaTree,
    letters: Vec<u32>,
    stride: usize,
    index: HashMap<(Vertex, usize, u32), usize>,
    nodes: Vec<(Vertex, usize, u32)>,
    choice: Vec<Option<usize>>,
}

impl ElStrategy {
    pub fn initial_memory(&self) -> usize {
        self.tree.leftmost_leaf(0) * self.stride
    }

    pub fn update(&self, m: usize, v: Vertex) -> usize {
        let (leaf, prio) = self.tree.step(m / self.stride, self.letters[v]);
        leaf * self.stride + prio as usize
    }

    pub fn choose(&self, m: usize, v: Vertex) -> Option<Vertex> {
        let key = (v, m / self.stride, (m % self.stride) as u32);
        let node = *self.index.get(&key)?;
        self.choice[node].map(|c| self.nodes[c].0)
    }

    pub fn tree(&self) -> &ZielonkaTree {
        &self.tree
    }

    pub fn product_size(&self) -> usize {
        self.nodes.len()
    }
}

pub fn solve_emerson_lei(arena: &Arena, formula: &BooleanFormula, sets: &[Vec<bool>]) -> Result<SolveResult, SolveError> {
    if let Some(v) = formula.max_var() {
        if v >= sets.len() {
            return Err(SolveError::UnboundVariable(v));
        }
    }
    for s in sets {
        if s.len() != arena.len() {
            return Err(SolveError::SetSize {
                expected: arena.len(),
                found: s.len(),
            });
        }
    }
    // variables whose set is empty are constantly false
    let relevant: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].iter().any(|&x| x)).collect();
    let f = formula.substitute(&|i| (!relevant.contains(&i)).then_some(false));
    let tree = ZielonkaTree::build(&f, &relevant)?;
    let letters: Vec<u32> = arena.vertices().map(|v| tree.letter(|i| sets[i][v])).collect();
    let stride = tree.depth() as usize + 2;

    let mut index: HashMap<(Vertex, usize, u32), usize> = HashMap::new();
    let mut nodes: Vec<(Vertex, usize, u32)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |key: (Vertex, usize, u32), nodes: &mut Vec<_>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(key).or_insert_with(|| {
            nodes.push(key);
            queue.push_back(nodes.len() - 1);
            nodes.len() - 1
        })
    };
    let l0 = tree.leftmost_leaf(0);
    let starts: Vec<usize> = arena
        .vertices()
        .map(|v| {
            let (leaf, prio) = tree.step(l0, letters[v]);
            intern((v, leaf, prio), &mut nodes, &mut queue)
        })
        .collect();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (v, leaf, _) = nodes[i];
        let mut out = Vec::with_capacity(arena.successors(v).len());
        for &u in arena.successors(v) {
            let (l2, p2) = tree.step(leaf, letters[u]);
            out.push(intern((u, l2, p2), &mut nodes, &mut queue));
        }
        if succ.len() <= i {
            succ.resize(i + 1, Vec::new());
        }
        succ[i] = out;
    }
    succ.resize(nodes.len(), Vec::new());
    let owners: Vec<Player> = nodes.iter().map(|&(v, _, _)| arena.owner(v)).collect();
    let priorities: Vec<u32> = nodes.iter().map(|&(_, _, p)| p).collect();
    let g = GameGraph::new(&owners, &succ);
    let res = parity(&g, &priorities);
    let region: Vec<bool> = starts.iter().map(|&s| res.protagonist_region[s]).collect();
    let ZeroSumStrategy::Memoryless(choice) = res.strategy else {
        unreachable!("parity strategies are memoryless")
    };
    Ok(SolveResult {
        protagonist_region: region,
        strategy: ZeroSumStrategy::FiniteMemory(ElStrategy {
            tree,
            letters,
            stride,
            index,
            nodes,
            choice,
        }),
        antagonist: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerosum::solve_buchi;
    use crate::zerosum::testutil::*;
    use rand::{Rng, SeedableRng};
    use BooleanFormula as F;

    #[test]
    fn parity_formula_tree_is_a_chain() {
        // x0 | (x2 & !x1) over three priority sets
        let f = F::or([F::var(0), F::and([F::var(2), F::not(F::var(1))])]);
        let tree = ZielonkaTree::build(&f, &[0, 1, 2]).unwrap();
        assert!(tree.root_winning());
        assert_eq!(tree.leaf_count(), 1);
        // the empty letter (odd priority above every even one) adds a level
        assert_eq!(tree.depth(), 3);
    }

    #[test]
    fn buchi_formula_agrees_with_buchi_solver() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let a = random_arena(&mut rng, 7, 3);
            let b: Vec<bool> = (0..7).map(|_| rng.gen_bool(0.3)).collect();
            let el = solve_emerson_lei(&a, &F::var(0), std::slice::from_ref(&b)).unwrap();
            let bu = solve_buchi(&a, &b).unwrap();
            assert_eq!(el.protagonist_region, bu.protagonist_region);
        }
    }

    #[test]
    fn negated_full_set_loses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let a = random_arena(&mut rng, 5, 2);
        let res = solve_emerson_lei(&a, &F::not(F::var(0)), &[vec![true; 5]]).unwrap();
        assert!(res.protagonist_region.iter().all(|&w| !w));
    }

    #[test]
    fn unbound_variable() {
        let a = Arena::new(vec![Player::Zero], vec![vec![0]], 0).unwrap();
        assert!(matches!(
            solve_emerson_lei(&a, &F::var(3), &[vec![true]]),
            Err(SolveError::UnboundVariable(3))
        ));
    }

    #[test]
    fn cycle_in_first_set_avoiding_second() {
        // 0 -> {1, 2}; 1 <-> 0 region in T1 only; 2 self-loop in both sets
        let a = Arena::new(vec![Player::Zero; 3], vec![vec![1, 2], vec![0], vec![2]], 0).unwrap();
        let t1 = vec![true, true, true];
        let t2 = vec![false, false, true];
        let f = F::and([F::var(0), F::not(F::var(1))]);
        let res = solve_emerson_lei(&a, &f, &[t1, t2]).unwrap();
        assert_eq!(res.protagonist_region, vec![true, true, false]);
    }

    /// Plays the finite-memory strategy against every memoryless antagonist
    /// and checks the resulting lasso on the product of vertices and memory.
    pub(crate) fn check_strategy(a: &Arena, res: &SolveResult, accept: &dyn Fn(&[usize]) -> bool) {
        for s1 in memoryless_strategies(a, Player::One) {
            for v in a.vertices().filter(|&v| res.wins(v)) {
                let mut m = res.strategy.update(res.strategy.initial_memory(), v);
                let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
                let mut seq = vec![(v, m)];
                let mut cur = v;
                loop {
                    seen.insert((cur, m), seq.len() - 1);
                    let next = match a.owner(cur) {
                        Player::Zero => res.strategy.choose(m, cur).expect("strategy defined on region"),
                        Player::One => s1[cur].unwrap(),
                    };
                    m = res.strategy.update(m, next);
                    cur = next;
                    if let Some(&pos) = seen.get(&(cur, m)) {
                        let cycle: Vec<usize> = seq[pos..].iter().map(|x| x.0).collect();
                        assert!(accept(&cycle));
                        break;
                    }
                    seq.push((cur, m));
                }
            }
        }
    }

    #[test]
    fn random_formulas_strategies_are_sound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..150 {
            let a = random_arena(&mut rng, 5, 2);
            let sets: Vec<Vec<bool>> = (0..3).map(|_| (0..5).map(|_| rng.gen_bool(0.4)).collect()).collect();
            let lit = |i: usize, neg: bool| if neg { F::not(F::var(i)) } else { F::var(i) };
            let f = F::or([
                F::and([lit(0, rng.gen_bool(0.5)), lit(1, rng.gen_bool(0.5))]),
                F::and([lit(2, rng.gen_bool(0.5)), lit(0, rng.gen_bool(0.5))]),
            ]);
            let res = solve_emerson_lei(&a, &f, &sets).unwrap();
            let accept = |cycle: &[usize]| f.eval(&|i| cycle.iter().any(|&v| sets[i][v]));
            check_strategy(&a, &res, &accept);
        }
    }
}
