use serde::{Deserialize, Serialize};

use super::{write_list, IoError};
use crate::arena::Arena;
use crate::strategy::MooreStrategy;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategyDocument {
    states: usize,
    initial: usize,
    update: Vec<(usize, String, usize)>,
    output: Vec<(usize, String, String)>,
}

/// Reads a strategy document; vertex names resolve against `arena`.
pub fn parse_strategy(text: &str, arena: &Arena) -> Result<MooreStrategy, IoError> {
    let doc: StrategyDocument = serde_json::from_str(text)?;
    if doc.states == 0 || doc.initial >= doc.states {
        return Err(IoError::Semantic(format!("initial state {} not below {} states", doc.initial, doc.states)));
    }
    let vertex = |name: &str| {
        arena
            .find(name)
            .ok_or_else(|| IoError::Semantic(format!("strategy refers to unknown vertex {name:?}")))
    };
    let state = |s: usize| {
        if s < doc.states {
            Ok(s)
        } else {
            Err(IoError::Semantic(format!("state {s} out of range")))
        }
    };
    let mut m = MooreStrategy::new(doc.states, doc.initial, arena.len());
    for (s, v, next) in &doc.update {
        let (s, v, next) = (state(*s)?, vertex(v)?, state(*next)?);
        if m.update(s, v).is_some() {
            return Err(IoError::Semantic(format!("update ({s}, {}) given twice", arena.name(v))));
        }
        m.set_update(s, v, next);
    }
    for (s, v, u) in &doc.output {
        let (s, v, u) = (state(*s)?, vertex(v)?, vertex(u)?);
        if m.output(s, v).is_some() {
            return Err(IoError::Semantic(format!("output ({s}, {}) given twice", arena.name(v))));
        }
        m.set_output(s, v, u);
    }
    m.check(arena)?;
    Ok(m)
}

/// Canonical document with entries ordered by state, then vertex.
pub fn serialize_strategy(strategy: &MooreStrategy, arena: &Arena) -> String {
    let names = arena.names();
    let update: Vec<(usize, &str, usize)> = strategy.update_entries().map(|(s, v, n)| (s, names[v].as_str(), n)).collect();
    let output: Vec<(usize, &str, &str)> = strategy
        .output_entries()
        .map(|(s, v, u)| (s, names[v].as_str(), names[u].as_str()))
        .collect();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"states\": {},\n", strategy.states()));
    out.push_str(&format!("  \"initial\": {},\n", strategy.initial()));
    write_list(&mut out, "update", &update, false);
    write_list(&mut out, "output", &output, true);
    out.push_str("}\n");
    out
}
