//! Stackelberg-Pareto synthesis on finite game graphs.
//!
//! A leader (Player 0) with one objective commits to a strategy; a follower
//! (Player 1) with `t` objectives answers with any Pareto-optimal play. The
//! crate decides whether the leader can win against all such answers, builds
//! finite-memory certificates, verifies candidate strategies and generates
//! the classical hardness reductions for the problem.

pub mod arena;
pub mod cpgame;
pub mod formula;
mod graph;
pub mod io;
pub mod objectives;
pub mod payoff;
pub mod random;
pub mod reductions;
pub mod strategy;
pub mod zerosum;

pub use arena::{binarize, is_tree_arena, Arena, Binarized, ObjectiveKind, Player, SpGame, Vertex};
pub use formula::BooleanFormula;
pub use objectives::{extended_payoff, feasible_payoffs, LassoPlay, Objective};
pub use strategy::{brute_force_solve, solve_sps, verify_strategy, pareto_under_strategy, MooreStrategy};
pub use payoff::{enumerate_antichains, is_antichain, pareto_max, Antichain, ExtendedPayoff, Payoff, PayoffOrdering};
