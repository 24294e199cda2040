//! Game and strategy documents, instance text formats and DOT export.

mod dot;
mod game;
mod instances;
mod strategy;

use thiserror::Error;

use crate::arena::GameError;
use crate::reductions::ReductionError;
use crate::strategy::StrategyError;

pub use dot::{export_cp_dot, export_game_dot, export_product_dot};
pub use game::{parse_game, serialize_game};
pub use instances::{
    parse_cnf_instance, parse_sc, serialize_sc, serialize_sds, serialize_ssc, CnfInstance,
};
pub use strategy::{parse_strategy, serialize_strategy};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document: {0}")]
    Semantic(String),
    #[error("invalid game: {0}")]
    Game(#[from] GameError),
    #[error("invalid strategy: {0}")]
    Strategy(#[from] StrategyError),
    #[error("invalid instance: {0}")]
    Instance(#[from] ReductionError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> IoError {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = match message.rfind(" at line ") {
            Some(cut) => message[..cut].to_string(),
            None => message,
        };
        IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

/// One JSON value per line inside a bracketed list.
fn write_list<T: serde::Serialize>(out: &mut String, key: &str, items: &[T], last: bool) {
    out.push_str(&format!("  \"{key}\": ["));
    if items.is_empty() {
        out.push(']');
    } else {
        out.push('\n');
        for (i, item) in items.iter().enumerate() {
            out.push_str("    ");
            out.push_str(&serde_json::to_string(item).expect("plain data serializes"));
            if i + 1 < items.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}
