//! Hardness reductions and the brute-force deciders they are tested against.
//!
//! Set cover reduces to reachability games on trees; succinct set cover
//! (sets described by CNF formulas) reduces to reachability and to parity
//! games; succinct dominating set reduces to succinct set cover.

mod cnf;
mod cover;
mod gadget;
mod succinct;

use thiserror::Error;

use crate::arena::{GameError, Player, Vertex};

pub use cnf::{cnf_models, Cnf, Literal, Valuation};
pub use cover::{sc_to_sps, solve_sc_bruteforce, ScInstance};
pub use gadget::{build_qk, count_paths, Qk};
pub use succinct::{
    sds_to_ssc, solve_sds_bruteforce, solve_ssc_bruteforce, ssc_to_parity_sps, ssc_to_reach_sps, SdsInstance, SscInstance,
};

/// Enumeration limit shared by the brute-force deciders.
pub const MAX_ENUMERATION: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("literal {literal} refers to no variable (have {vars})")]
    LiteralOutOfRange { literal: Literal, vars: usize },
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("expected {expected} fixed Y values, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Vertices, edges and per-vertex labels of an arena under construction.
struct Builder {
    names: Vec<String>,
    owners: Vec<Player>,
    succ: Vec<Vec<Vertex>>,
}

impl Builder {
    fn new() -> Builder {
        Builder {
            names: Vec::new(),
            owners: Vec::new(),
            succ: Vec::new(),
        }
    }

    fn add(&mut self, name: impl Into<String>, owner: Player) -> Vertex {
        self.names.push(name.into());
        self.owners.push(owner);
        self.succ.push(Vec::new());
        self.names.len() - 1
    }

    fn edge(&mut self, from: Vertex, to: Vertex) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    fn len(&self) -> usize {
        self.names.len()
    }

    fn arena(self, initial: Vertex) -> Result<crate::arena::Arena, ReductionError> {
        let arena = crate::arena::Arena::new(self.owners, self.succ, initial).map_err(GameError::from)?;
        Ok(arena.with_names(self.names).map_err(GameError::from)?)
    }
}

/// Number of size-`k` subsets of an `n`-set, saturating.
fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until
/// it returns true.
fn any_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        if visit(&pick) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
            return false;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}
