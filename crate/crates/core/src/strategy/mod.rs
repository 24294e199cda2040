//! Finite-memory strategies of Player 0: verification, extraction from
//! Prover wins, the top-level solver and reference solvers.

mod brute;
mod extract;
mod moore;
mod regions;
mod tree;
mod verify;

use thiserror::Error;

use crate::arena::{ObjectiveKind, Vertex};
use crate::cpgame::CpError;
use crate::payoff::PayoffError;
use crate::zerosum::SolveError;

pub use brute::brute_force_solve;
pub use extract::{extract_solution, project_binarized, prover_choices, solve_sps, SpsSolution};
pub use moore::MooreStrategy;
pub use regions::{compact_witness, elementary, region_decompose, Region, RegionError, Section};
pub use tree::tree_solve;
pub use verify::{normalize, pareto_under_strategy, product, verify_strategy, ParetoReport, Product, VerificationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("strategy covers {found} vertices, the arena has {expected}")]
    VertexCount { expected: usize, found: usize },
    #[error("update ({state}, {vertex}) leads to unknown state {next}")]
    StateOutOfRange { state: usize, vertex: Vertex, next: usize },
    #[error("no update for state {state} at vertex {vertex}")]
    MissingUpdate { state: usize, vertex: Vertex },
    #[error("no move for state {state} at vertex {vertex}")]
    MissingOutput { state: usize, vertex: Vertex },
    #[error("move at Player-1 vertex {vertex} (state {state})")]
    OutputAtPlayerOne { state: usize, vertex: Vertex },
    #[error("state {state}: {from}->{to} is not an edge")]
    NotAnEdge { state: usize, from: Vertex, to: Vertex },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpsError {
    #[error(transparent)]
    Cp(#[from] CpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Payoff(#[from] PayoffError),
    #[error("the Prover strategy has no move at a reachable vertex")]
    LosingProver,
    #[error("extracted strategy for {0} failed verification")]
    ExtractionFailed(String),
    #[error("the arena is not a tree")]
    NotATree,
    #[error("expected a {0} game")]
    WrongKind(ObjectiveKind),
    #[error("too many objectives ({0})")]
    TooManyObjectives(usize),
}
