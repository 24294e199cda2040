//! Game arenas, Stackelberg-Pareto games and the two-successor normal form.

use std::borrow::Cow;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::objectives::Objective;

pub type Vertex = usize;

/// Owner of a vertex. In zero-sum games `Zero` is the protagonist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Zero,
    One,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Zero => 0,
            Player::One => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index())
    }
}

/// A single well-formedness problem found by [`Arena::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    Sink(Vertex),
    EdgeOutOfRange { from: Vertex, to: Vertex },
    DuplicateSuccessor { from: Vertex, to: Vertex },
    InitialOutOfRange(Vertex),
    LengthMismatch { owners: usize, successors: usize },
    NameCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "arena has no vertices"),
            Violation::Sink(v) => write!(f, "sink at {v}"),
            Violation::EdgeOutOfRange { from, to } => {
                write!(f, "edge {from}->{to} leaves the vertex range")
            }
            Violation::DuplicateSuccessor { from, to } => {
                write!(f, "duplicate successor {to} of {from}")
            }
            Violation::InitialOutOfRange(v) => write!(f, "initial vertex {v} out of range"),
            Violation::LengthMismatch { owners, successors } => write!(
                f,
                "{owners} owners given for {successors} successor lists"
            ),
            Violation::NameCount { expected, found } => {
                write!(f, "expected {expected} vertex names, found {found}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid arena: {}", join_violations(.0))]
pub struct ArenaError(pub Vec<Violation>);

fn join_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Owned-vertex digraph with an initial vertex. Successor order is significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    owners: Vec<Player>,
    succ: Vec<Vec<Vertex>>,
    initial: Vertex,
    names: Option<Vec<String>>,
}

impl Arena {
    pub fn new(owners: Vec<Player>, succ: Vec<Vec<Vertex>>, initial: Vertex) -> Result<Arena, ArenaError> {
        let arena = Arena::new_unchecked(owners, succ, initial);
        arena.validate()?;
        Ok(arena)
    }

    /// Builds an arena without checking it. Call [`Arena::validate`] before use.
    pub fn new_unchecked(owners: Vec<Player>, succ: Vec<Vec<Vertex>>, initial: Vertex) -> Arena {
        Arena {
            owners,
            succ,
            initial,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Arena, ArenaError> {
        if names.len() != self.owners.len() {
            return Err(ArenaError(vec![Violation::NameCount {
                expected: self.owners.len(),
                found: names.len(),
            }]));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ArenaError> {
        let mut out = Vec::new();
        let n = self.owners.len();
        if n == 0 {
            out.push(Violation::NoVertices);
        }
        if self.succ.len() != n {
            out.push(Violation::LengthMismatch {
                owners: n,
                successors: self.succ.len(),
            });
        }
        for (v, list) in self.succ.iter().enumerate() {
            if list.is_empty() {
                out.push(Violation::Sink(v));
            }
            for (i, &u) in list.iter().enumerate() {
                if u >= n {
                    out.push(Violation::EdgeOutOfRange { from: v, to: u });
                } else if list[..i].contains(&u) {
                    out.push(Violation::DuplicateSuccessor { from: v, to: u });
                }
            }
        }
        if self.initial >= n && n > 0 {
            out.push(Violation::InitialOutOfRange(self.initial));
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                out.push(Violation::NameCount {
                    expected: n,
                    found: names.len(),
                });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(ArenaError(out))
        }
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.owners.len()
    }

    pub fn owner(&self, v: Vertex) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.succ[v]
    }

    pub fn adjacency(&self) -> &[Vec<Vertex>] {
        &self.succ
    }

    pub fn initial(&self) -> Vertex {
        self.initial
    }

    pub fn set_initial(&mut self, v: Vertex) {
        self.initial = v;
    }

    pub fn has_edge(&self, from: Vertex, to: Vertex) -> bool {
        self.succ[from].contains(&to)
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn max_out_degree(&self) -> usize {
        self.succ.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn name(&self, v: Vertex) -> Cow<'_, str> {
        match &self.names {
            Some(names) => Cow::Borrowed(names[v].as_str()),
            None => Cow::Owned(format!("v{v}")),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.vertices().map(|v| self.name(v).into_owned()).collect()
    }

    pub fn has_custom_names(&self) -> bool {
        self.names.is_some()
    }

    pub fn find(&self, name: &str) -> Option<Vertex> {
        match &self.names {
            Some(names) => names.iter().position(|n| n == name),
            None => name
                .strip_prefix('v')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&v| v < self.len()),
        }
    }

    pub fn predecessors(&self) -> Vec<Vec<Vertex>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, list) in self.succ.iter().enumerate() {
            for &u in list {
                pred[u].push(v);
            }
        }
        pred
    }

    /// Vertices reachable from `from`, including `from`.
    pub fn reachable_from(&self, from: Vertex) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &self.succ[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

/// True iff the arena is a tree rooted at the initial vertex whose leaves have
/// exactly one successor, themselves.
pub fn is_tree_arena(arena: &Arena) -> bool {
    let n = arena.len();
    let mut indeg = vec![0usize; n];
    for v in arena.vertices() {
        let succ = arena.successors(v);
        if succ.contains(&v) {
            if succ.len() != 1 {
                return false;
            }
            continue;
        }
        for &u in succ {
            indeg[u] += 1;
        }
    }
    if indeg[arena.initial()] != 0 {
        return false;
    }
    let root = arena.initial();
    if arena.vertices().any(|v| v != root && indeg[v] != 1) {
        return false;
    }
    arena.reachable_from(root).into_iter().all(|r| r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObjectiveKind {
    Reachability,
    Parity,
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::Reachability => write!(f, "reach"),
            ObjectiveKind::Parity => write!(f, "parity"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error("a game needs at least one Player-1 objective")]
    NoObjectives,
    #[error("objective {index} is not a {expected} objective")]
    MixedKinds { index: usize, expected: ObjectiveKind },
    #[error("objective {index} covers {found} vertices, arena has {expected}")]
    ObjectiveSize {
        index: usize,
        expected: usize,
        found: usize,
    },
}

/// Arena plus the Player-0 objective and `t` Player-1 objectives of one kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpGame {
    arena: Arena,
    kind: ObjectiveKind,
    objectives: Vec<Objective>,
}

impl SpGame {
    pub fn new(arena: Arena, leader: Objective, followers: Vec<Objective>) -> Result<SpGame, GameError> {
        arena.validate()?;
        if followers.is_empty() {
            return Err(GameError::NoObjectives);
        }
        let kind = leader.kind();
        let mut objectives = Vec::with_capacity(followers.len() + 1);
        objectives.push(leader);
        objectives.extend(followers);
        for (index, obj) in objectives.iter().enumerate() {
            if obj.kind() != kind {
                return Err(GameError::MixedKinds { index, expected: kind });
            }
            if obj.len() != arena.len() {
                return Err(GameError::ObjectiveSize {
                    index,
                    expected: arena.len(),
                    found: obj.len(),
                });
            }
        }
        Ok(SpGame {
            arena,
            kind,
            objectives,
        })
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    /// Number of Player-1 objectives.
    pub fn t(&self) -> usize {
        self.objectives.len() - 1
    }

    /// Objective `i`, where 0 is Player 0's objective.
    pub fn objective(&self, i: usize) -> &Objective {
        &self.objectives[i]
    }

    pub fn objectives(&self) -> &[Objective] {
        &self.objectives
    }

    pub fn leader_objective(&self) -> &Objective {
        &self.objectives[0]
    }

    pub fn follower_objectives(&self) -> &[Objective] {
        &self.objectives[1..]
    }

    /// Priority maps of a parity game, index 0 first.
    pub fn priority_maps(&self) -> Vec<&[u32]> {
        self.objectives
            .iter()
            .filter_map(|o| match o {
                Objective::Parity(c) => Some(c.as_slice()),
                Objective::Reach(_) => None,
            })
            .collect()
    }

    /// For reachability games: bit 0 is set iff the vertex is in T0, bit i iff it is in Ti.
    pub fn reach_marks(&self) -> Option<Vec<u64>> {
        if self.kind != ObjectiveKind::Reachability || self.objectives.len() > 64 {
            return None;
        }
        let mut marks = vec![0u64; self.arena.len()];
        for (i, obj) in self.objectives.iter().enumerate() {
            if let Objective::Reach(targets) = obj {
                for (v, &hit) in targets.iter().enumerate() {
                    if hit {
                        marks[v] |= 1 << i;
                    }
                }
            }
        }
        Some(marks)
    }
}

/// Result of [`binarize`]: original vertices keep their ids, fresh vertices follow.
#[derive(Clone, Debug)]
pub struct Binarized {
    pub game: SpGame,
    /// For every vertex of the new game, the original vertex whose tree it belongs to.
    pub origin: Vec<Vertex>,
    pub original_len: usize,
}

impl Binarized {
    pub fn added(&self) -> usize {
        self.game.arena().len() - self.original_len
    }
}

/// Rewrites every vertex with more than two successors into a binary tree of
/// fresh vertices owned by the same player.
pub fn binarize(game: &SpGame) -> Binarized {
    let arena = game.arena();
    let n = arena.len();
    let mut owners = arena.owners().to_vec();
    let mut succ: Vec<Vec<Vertex>> = arena.adjacency().to_vec();
    let mut origin: Vec<Vertex> = (0..n).collect();
    let mut names = arena.names();

    fn build(
        leaves: &[Vertex],
        root: Vertex,
        owners: &mut Vec<Player>,
        succ: &mut Vec<Vec<Vertex>>,
        origin: &mut Vec<Vertex>,
        names: &mut Vec<String>,
        counter: &mut usize,
    ) -> Vertex {
        if leaves.len() == 1 {
            return leaves[0];
        }
        let id = owners.len();
        owners.push(owners[root]);
        succ.push(Vec::new());
        origin.push(root);
        names.push(format!("{}#{}", names[root], *counter));
        *counter += 1;
        let mid = leaves.len().div_ceil(2);
        let l = build(&leaves[..mid], root, owners, succ, origin, names, counter);
        let r = build(&leaves[mid..], root, owners, succ, origin, names, counter);
        succ[id] = vec![l, r];
        id
    }

    for v in 0..n {
        let list = arena.successors(v).to_vec();
        if list.len() <= 2 {
            continue;
        }
        let mut counter = 0;
        let new_succ = if let Some(pos) = list.iter().position(|&u| u == v) {
            let rest: Vec<Vertex> = list.iter().copied().filter(|&u| u != v).collect();
            let sub = build(&rest, v, &mut owners, &mut succ, &mut origin, &mut names, &mut counter);
            if pos == 0 {
                vec![v, sub]
            } else {
                vec![sub, v]
            }
        } else {
            let mid = list.len().div_ceil(2);
            let l = build(&list[..mid], v, &mut owners, &mut succ, &mut origin, &mut names, &mut counter);
            let r = build(&list[mid..], v, &mut owners, &mut succ, &mut origin, &mut names, &mut counter);
            vec![l, r]
        };
        succ[v] = new_succ;
    }

    let total = owners.len();
    let mut new_arena = Arena::new_unchecked(owners, succ, arena.initial());
    if arena.has_custom_names() || total > n {
        new_arena = new_arena
            .with_names(names)
            .expect("one name per vertex");
    }
    let objectives: Vec<Objective> = game
        .objectives()
        .iter()
        .map(|obj| match obj {
            Objective::Reach(t) => {
                let mut t = t.clone();
                t.resize(total, false);
                Objective::Reach(t)
            }
            Objective::Parity(c) => Objective::Parity(origin.iter().map(|&o| c[o]).collect()),
        })
        .collect();
    let mut objectives = objectives.into_iter();
    let leader = objectives.next().expect("leader objective");
    let game = SpGame::new(new_arena, leader, objectives.collect()).expect("binarization keeps games valid");
    Binarized {
        game,
        origin,
        original_len: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arena(owners: &[u8], succ: &[&[Vertex]]) -> Arena {
        let owners = owners
            .iter()
            .map(|&o| if o == 0 { Player::Zero } else { Player::One })
            .collect();
        Arena::new_unchecked(owners, succ.iter().map(|s| s.to_vec()).collect(), 0)
    }

    #[test]
    fn self_loop_is_minimal_arena() {
        assert!(arena(&[0], &[&[0]]).validate().is_ok());
    }

    #[test]
    fn sink_is_reported() {
        let err = arena(&[0, 1], &[&[1], &[]]).validate().unwrap_err();
        assert_eq!(err.0, vec![Violation::Sink(1)]);
        assert!(err.to_string().contains("sink at 1"));
    }

    #[test]
    fn range_and_duplicate_errors() {
        let mut a = arena(&[0, 0], &[&[1, 1], &[5]]);
        a.set_initial(3);
        let err = a.validate().unwrap_err();
        assert!(err.0.contains(&Violation::DuplicateSuccessor { from: 0, to: 1 }));
        assert!(err.0.contains(&Violation::EdgeOutOfRange { from: 1, to: 5 }));
        assert!(err.0.contains(&Violation::InitialOutOfRange(3)));
    }

    #[test]
    fn tree_detection() {
        assert!(is_tree_arena(&arena(&[1, 0, 0], &[&[1, 2], &[1], &[2]])));
        // leaf with an extra edge
        assert!(!is_tree_arena(&arena(&[1, 0, 0], &[&[1, 2], &[1, 2], &[2]])));
        // shared child
        assert!(!is_tree_arena(&arena(&[1, 1, 0], &[&[1, 2], &[2], &[2]])));
        // unreachable vertex
        assert!(!is_tree_arena(&arena(&[0, 0, 0], &[&[1], &[1], &[2]])));
    }

    fn reach_game(a: Arena) -> SpGame {
        let n = a.len();
        SpGame::new(
            a,
            Objective::Reach(vec![false; n]),
            vec![Objective::Reach(vec![true; n])],
        )
        .unwrap()
    }

    #[test]
    fn binarize_keeps_small_arenas() {
        let g = reach_game(arena(&[1, 0, 0], &[&[1, 2], &[1], &[2]]));
        let b = binarize(&g);
        assert_eq!(b.added(), 0);
        assert_eq!(b.game.arena().adjacency(), g.arena().adjacency());
    }

    #[test]
    fn binarize_four_successors() {
        let g = reach_game(arena(&[1, 0, 0, 0, 0], &[&[1, 2, 3, 4], &[1], &[2], &[3], &[4]]));
        let b = binarize(&g);
        // v plus two fresh vertices form the complete tree over 4 leaves
        assert_eq!(b.added(), 2);
        let a = b.game.arena();
        assert_eq!(a.successors(0), &[5, 6]);
        assert_eq!(a.successors(5), &[1, 2]);
        assert_eq!(a.successors(6), &[3, 4]);
        assert_eq!(a.owner(5), Player::One);
        match b.game.objective(1) {
            Objective::Reach(t) => assert!(!t[5] && !t[6] && t[0]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn binarize_self_loop() {
        let g = reach_game(arena(&[0, 0, 0, 0], &[&[0, 1, 2, 3], &[1], &[2], &[3]]));
        let b = binarize(&g);
        let a = b.game.arena();
        assert_eq!(a.successors(0)[0], 0);
        let sub = a.successors(0)[1];
        assert_eq!(sub, 4);
        assert_eq!(a.successors(4), &[5, 3]);
        assert_eq!(a.successors(5), &[1, 2]);
        assert!(a.len() <= 16);
    }

    #[test]
    fn binarize_quadratic_bound() {
        for n in 2..9 {
            let succ: Vec<Vec<Vertex>> = (0..n).map(|_| (0..n).collect()).collect();
            let a = Arena::new(vec![Player::One; n], succ, 0).unwrap();
            let b = binarize(&reach_game(a));
            assert!(b.game.arena().len() <= n * n);
            assert!(b.game.arena().max_out_degree() <= 2);
        }
    }
}
