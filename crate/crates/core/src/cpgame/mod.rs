//! Challenger-Prover games, one per announced antichain.
//!
//! The Prover announces the Pareto set `P` and, at every Player-1 vertex,
//! splits the payoffs still owed a witness between the left and the right
//! successor. The Challenger picks which branch to follow.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::arena::{Arena, ObjectiveKind, Player, SpGame, Vertex};
use crate::formula::BooleanFormula;
use crate::payoff::{Antichain, Payoff, MAX_WIDTH};
use crate::zerosum::ZeroSumObjective;

/// Subset of the announced antichain, bit `i` for its `i`-th element.
pub type WSet = u32;

/// Largest antichain the construction accepts.
pub const MAX_ANTICHAIN: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CpError {
    #[error("vertex {0} has more than two successors; binarize the game first")]
    NotBinarized(Vertex),
    #[error("the announced antichain is empty")]
    EmptyAntichain,
    #[error("antichain of {0} payoffs is too large")]
    AntichainTooLarge(usize),
    #[error("antichain width {found} does not match the game's {expected} objectives")]
    WidthMismatch { expected: usize, found: usize },
    #[error("expected a {0} game")]
    WrongKind(ObjectiveKind),
    #[error("too many objectives ({0})")]
    TooManyObjectives(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CpVertex {
    Prover { v: Vertex, w: WSet },
    Challenger { v: Vertex, left: WSet, right: WSet },
}

impl CpVertex {
    pub fn vertex(&self) -> Vertex {
        match *self {
            CpVertex::Prover { v, .. } | CpVertex::Challenger { v, .. } => v,
        }
    }

    pub fn is_prover(&self) -> bool {
        matches!(self, CpVertex::Prover { .. })
    }
}

/// A C-P vertex plus packed accumulated marks (bit 0 = Player 0 won, bit
/// `i` = objective `i` reached); marks stay 0 in the parity construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CpState {
    pub base: CpVertex,
    pub marks: u64,
}

/// Atom of the parity-case formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Prover vertices whose arena vertex has priority `priority` under objective `objective`.
    Priority { objective: usize, priority: u32 },
    /// Prover vertices with W = {P[index]}.
    Single(usize),
    /// Prover vertices with W = ∅.
    Empty,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Priority { objective, priority } => write!(f, "c{objective}={priority}"),
            Atom::Single(i) => write!(f, "W={{p{i}}}"),
            Atom::Empty => write!(f, "W=0"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParityFormula {
    pub formula: BooleanFormula,
    pub atoms: Vec<Atom>,
}

/// A constructed per-antichain zero-sum game; `Player::Zero` is the Prover.
#[derive(Clone, Debug)]
pub struct CpGame {
    pub antichain: Antichain,
    pub states: Vec<CpState>,
    pub arena: Arena,
    pub objective: ZeroSumObjective,
    /// Atom per Emerson-Lei set, empty in the reachability case.
    pub atoms: Vec<Atom>,
}

impl CpGame {
    pub fn start(&self) -> usize {
        self.arena.initial()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn accepting(&self) -> Option<&[bool]> {
        match &self.objective {
            ZeroSumObjective::Buchi(b) => Some(b),
            _ => None,
        }
    }

    /// Human-readable label of a C-P state.
    pub fn label(&self, i: usize, game: &SpGame) -> String {
        let names = |w: WSet| {
            let parts: Vec<String> = (0..self.antichain.len())
                .filter(|j| w >> j & 1 == 1)
                .map(|j| self.antichain.elems()[j].to_string())
                .collect();
            format!("{{{}}}", parts.join(","))
        };
        let s = &self.states[i];
        let v = game.arena().name(s.base.vertex());
        let base = match s.base {
            CpVertex::Prover { w, .. } => format!("{v},{}", names(w)),
            CpVertex::Challenger { left, right, .. } => format!("{v},{}|{}", names(left), names(right)),
        };
        if game.kind() == ObjectiveKind::Reachability {
            let ext = crate::payoff::ExtendedPayoff::unpack(game.t(), s.marks);
            format!("{base},{ext}")
        } else {
            base
        }
    }
}

fn check_inputs(game: &SpGame, p: &Antichain, kind: ObjectiveKind) -> Result<(), CpError> {
    if game.kind() != kind {
        return Err(CpError::WrongKind(kind));
    }
    if game.t() > MAX_WIDTH {
        return Err(CpError::TooManyObjectives(game.t()));
    }
    if let Some(v) = game.arena().vertices().find(|&v| game.arena().successors(v).len() > 2) {
        return Err(CpError::NotBinarized(v));
    }
    if p.is_empty() {
        return Err(CpError::EmptyAntichain);
    }
    if p.len() > MAX_ANTICHAIN {
        return Err(CpError::AntichainTooLarge(p.len()));
    }
    if let Some(q) = p.iter().find(|q| q.width() != game.t()) {
        return Err(CpError::WidthMismatch {
            expected: game.t(),
            found: q.width(),
        });
    }
    Ok(())
}

/// Reachable C-P states from the Prover start; `marks` is `None` for parity.
fn explore(game: &SpGame, p: &Antichain, marks: Option<&[u64]>) -> (Vec<CpState>, Vec<Vec<usize>>) {
    let arena = game.arena();
    let mark = |v: Vertex| marks.map_or(0, |m| m[v]);
    let full: WSet = ((1u64 << p.len()) - 1) as WSet;
    let v0 = arena.initial();
    let start = CpState {
        base: CpVertex::Prover { v: v0, w: full },
        marks: mark(v0),
    };
    let mut index: HashMap<CpState, usize> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = states[i];
        let mut next: Vec<CpState> = Vec::new();
        match s.base {
            CpVertex::Prover { v, w } => match arena.owner(v) {
                Player::Zero => {
                    for &u in arena.successors(v) {
                        next.push(CpState {
                            base: CpVertex::Prover { v: u, w },
                            marks: s.marks | mark(u),
                        });
                    }
                }
                Player::One => {
                    if arena.successors(v).len() == 1 {
                        next.push(CpState {
                            base: CpVertex::Challenger { v, left: w, right: 0 },
                            marks: s.marks,
                        });
                    } else {
                        // every ordered partition (left, right) of w
                        let mut left: WSet = 0;
                        loop {
                            next.push(CpState {
                                base: CpVertex::Challenger {
                                    v,
                                    left,
                                    right: w & !left,
                                },
                                marks: s.marks,
                            });
                            if left == w {
                                break;
                            }
                            left = (left.wrapping_sub(w)) & w;
                        }
                    }
                }
            },
            CpVertex::Challenger { v, left, right } => {
                for (k, &u) in arena.successors(v).iter().enumerate() {
                    let part = if k == 0 { left } else { right };
                    next.push(CpState {
                        base: CpVertex::Prover { v: u, w: part },
                        marks: s.marks | mark(u),
                    });
                }
            }
        }
        let mut out = Vec::with_capacity(next.len());
        for n in next {
            let j = *index.entry(n).or_insert_with(|| {
                states.push(n);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            out.push(j);
        }
        if succ.len() <= i {
            succ.resize(i + 1, Vec::new());
        }
        succ[i] = out;
    }
    succ.resize(states.len(), Vec::new());
    (states, succ)
}

fn cp_arena(states: &[CpState], succ: Vec<Vec<usize>>) -> Arena {
    let owners = states
        .iter()
        .map(|s| if s.base.is_prover() { Player::Zero } else { Player::One })
        .collect();
    Arena::new(owners, succ, 0).expect("C-P arenas have no sinks")
}

/// Büchi C-P game for a reachability game and an announced antichain.
pub fn build_reach_cp(game: &SpGame, p: &Antichain) -> Result<CpGame, CpError> {
    check_inputs(game, p, ObjectiveKind::Reachability)?;
    let marks = game.reach_marks().ok_or(CpError::TooManyObjectives(game.t()))?;
    let (states, succ) = explore(game, p, Some(&marks));
    let t = game.t();
    let accepting: Vec<bool> = states
        .iter()
        .map(|s| match s.base {
            CpVertex::Prover { w, .. } => {
                let won = s.marks & 1 == 1;
                let pay = Payoff::from_bits(t, s.marks >> 1);
                let single = w.count_ones() == 1 && p.elems()[w.trailing_zeros() as usize] == pay && won;
                let empty_in_p = w == 0 && p.contains(&pay) && won;
                let empty_below = w == 0 && p.strictly_dominates(&pay);
                single || empty_in_p || empty_below
            }
            CpVertex::Challenger { .. } => false,
        })
        .collect();
    Ok(CpGame {
        antichain: p.clone(),
        arena: cp_arena(&states, succ),
        states,
        objective: ZeroSumObjective::Buchi(accepting),
        atoms: Vec::new(),
    })
}

/// The winning condition of the parity-case C-P game for a fixed antichain.
pub fn build_parity_formula(game: &SpGame, p: &Antichain) -> Result<ParityFormula, CpError> {
    if game.kind() != ObjectiveKind::Parity {
        return Err(CpError::WrongKind(ObjectiveKind::Parity));
    }
    if p.is_empty() {
        return Err(CpError::EmptyAntichain);
    }
    let t = game.t();
    if t > 24 {
        return Err(CpError::TooManyObjectives(t));
    }
    let mut atoms: Vec<Atom> = Vec::new();
    let mut var = |a: Atom| -> BooleanFormula {
        let i = atoms.iter().position(|&x| x == a).unwrap_or_else(|| {
            atoms.push(a);
            atoms.len() - 1
        });
        BooleanFormula::var(i)
    };
    let parity: Vec<BooleanFormula> = (0..=t)
        .map(|i| {
            let Some(d) = game.objective(i).max_even_priority() else {
                return BooleanFormula::Const(false);
            };
            let terms: Vec<BooleanFormula> = (0..=d)
                .step_by(2)
                .map(|j| {
                    let mut parts = vec![var(Atom::Priority { objective: i, priority: j })];
                    for odd in (1..j).step_by(2) {
                        parts.push(BooleanFormula::not(var(Atom::Priority {
                            objective: i,
                            priority: odd,
                        })));
                    }
                    BooleanFormula::and(parts)
                })
                .collect();
            BooleanFormula::or(terms)
        })
        .collect();
    let payoff = |q: &Payoff| {
        BooleanFormula::and((0..t).map(|i| {
            if q.get(i) {
                parity[i + 1].clone()
            } else {
                BooleanFormula::not(parity[i + 1].clone())
            }
        }))
    };
    let empty = var(Atom::Empty);
    let mut cond1 = Vec::new();
    let mut cond2 = Vec::new();
    for (i, q) in p.iter().enumerate() {
        cond1.push(BooleanFormula::and([var(Atom::Single(i)), payoff(q), parity[0].clone()]));
        cond2.push(BooleanFormula::and([empty.clone(), payoff(q), parity[0].clone()]));
    }
    let cond3: Vec<BooleanFormula> = Payoff::all(t)
        .filter(|q| p.strictly_dominates(q))
        .map(|q| BooleanFormula::and([empty.clone(), payoff(&q)]))
        .collect();
    let formula = BooleanFormula::or([
        BooleanFormula::or(cond1),
        BooleanFormula::or(cond2),
        BooleanFormula::or(cond3),
    ]);
    Ok(ParityFormula { formula, atoms })
}

/// Emerson-Lei C-P game for a parity game and an announced antichain.
pub fn build_parity_cp(game: &SpGame, p: &Antichain) -> Result<CpGame, CpError> {
    check_inputs(game, p, ObjectiveKind::Parity)?;
    let ParityFormula { formula, atoms } = build_parity_formula(game, p)?;
    let (states, succ) = explore(game, p, None);
    let maps = game.priority_maps();
    let sets: Vec<Vec<bool>> = atoms
        .iter()
        .map(|atom| {
            states
                .iter()
                .map(|s| match (s.base, *atom) {
                    (CpVertex::Prover { v, .. }, Atom::Priority { objective, priority }) => maps[objective][v] == priority,
                    (CpVertex::Prover { w, .. }, Atom::Single(i)) => w == 1 << i,
                    (CpVertex::Prover { w, .. }, Atom::Empty) => w == 0,
                    (CpVertex::Challenger { .. }, _) => false,
                })
                .collect()
        })
        .collect();
    Ok(CpGame {
        antichain: p.clone(),
        arena: cp_arena(&states, succ),
        states,
        objective: ZeroSumObjective::EmersonLei { formula, sets },
        atoms,
    })
}

pub fn build_cp(game: &SpGame, p: &Antichain) -> Result<CpGame, CpError> {
    match game.kind() {
        ObjectiveKind::Reachability => build_reach_cp(game, p),
        ObjectiveKind::Parity => build_parity_cp(game, p),
    }
}
