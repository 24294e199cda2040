use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{write_list, IoError};
use crate::arena::{Arena, GameError, ObjectiveKind, Player, SpGame, Vertex};
use crate::objectives::Objective;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDocument {
    kind: String,
    vertices: Vec<VertexEntry>,
    edges: Vec<(String, String)>,
    initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objectives: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: String,
    owner: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    priorities: Option<Vec<u32>>,
}

/// Reads a game document. Edge order fixes successor order.
pub fn parse_game(text: &str) -> Result<SpGame, IoError> {
    let doc: GameDocument = serde_json::from_str(text)?;
    let kind = match doc.kind.as_str() {
        "reach" => ObjectiveKind::Reachability,
        "parity" => ObjectiveKind::Parity,
        other => return Err(IoError::Semantic(format!("unknown kind {other:?}, expected \"reach\" or \"parity\""))),
    };
    let mut index: HashMap<&str, Vertex> = HashMap::new();
    let mut owners = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            return Err(IoError::Semantic(format!("vertex {:?} declared twice", v.id)));
        }
        owners.push(match v.owner {
            0 => Player::Zero,
            1 => Player::One,
            o => return Err(IoError::Semantic(format!("vertex {:?} has owner {o}, expected 0 or 1", v.id))),
        });
    }
    let lookup = |id: &str, what: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| IoError::Semantic(format!("{what} refers to undeclared vertex {id:?}")))
    };
    let mut succ: Vec<Vec<Vertex>> = vec![Vec::new(); owners.len()];
    for (a, b) in &doc.edges {
        let from = lookup(a, "edge")?;
        let to = lookup(b, "edge")?;
        succ[from].push(to);
    }
    let initial = lookup(&doc.initial, "initial")?;
    let n = owners.len();
    let objectives: Vec<Objective> = match kind {
        ObjectiveKind::Reachability => {
            if doc.vertices.iter().any(|v| v.priorities.is_some()) {
                return Err(IoError::Semantic("priorities given in a reachability game".into()));
            }
            let lists = doc
                .objectives
                .as_ref()
                .ok_or_else(|| IoError::Semantic("reachability game without objectives".into()))?;
            let mut out = Vec::with_capacity(lists.len());
            for list in lists {
                let targets = list.iter().map(|id| lookup(id, "objective")).collect::<Result<Vec<_>, _>>()?;
                out.push(Objective::reach(n, &targets));
            }
            out
        }
        ObjectiveKind::Parity => {
            if doc.objectives.is_some() {
                return Err(IoError::Semantic("parity games carry priorities on vertices, not objective lists".into()));
            }
            let width = doc.vertices.first().and_then(|v| v.priorities.as_ref()).map_or(0, Vec::len);
            for v in &doc.vertices {
                match &v.priorities {
                    Some(p) if p.len() == width => {}
                    _ => {
                        return Err(IoError::Semantic(format!("vertex {:?} needs {width} priorities", v.id)));
                    }
                }
            }
            (0..width)
                .map(|i| Objective::Parity(doc.vertices.iter().map(|v| v.priorities.as_ref().expect("checked")[i]).collect()))
                .collect()
        }
    };
    if objectives.is_empty() {
        return Err(IoError::Semantic("the objective of Player 0 is missing".into()));
    }
    let names = doc.vertices.into_iter().map(|v| v.id).collect();
    let arena = Arena::new(owners, succ, initial)
        .and_then(|a| a.with_names(names))
        .map_err(GameError::from)?;
    let mut objectives = objectives.into_iter();
    let leader = objectives.next().expect("non-empty");
    Ok(SpGame::new(arena, leader, objectives.collect())?)
}

/// Canonical document: vertices in index order, edges grouped by source,
/// targets in vertex order.
pub fn serialize_game(game: &SpGame) -> String {
    let arena = game.arena();
    let names = arena.names();
    let parity = game.kind() == ObjectiveKind::Parity;
    let maps = game.priority_maps();
    let vertices: Vec<VertexEntry> = arena
        .vertices()
        .map(|v| VertexEntry {
            id: names[v].clone(),
            owner: arena.owner(v).index() as u8,
            priorities: parity.then(|| maps.iter().map(|c| c[v]).collect()),
        })
        .collect();
    let edges: Vec<(&str, &str)> = arena
        .vertices()
        .flat_map(|v| arena.successors(v).iter().map(move |&u| (v, u)))
        .map(|(v, u)| (names[v].as_str(), names[u].as_str()))
        .collect();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"kind\": {},\n", serde_json::to_string(if parity { "parity" } else { "reach" }).expect("string")));
    write_list(&mut out, "vertices", &vertices, false);
    write_list(&mut out, "edges", &edges, false);
    let initial = serde_json::to_string(&names[arena.initial()]).expect("string");
    if parity {
        out.push_str(&format!("  \"initial\": {initial}\n"));
    } else {
        out.push_str(&format!("  \"initial\": {initial},\n"));
        let lists: Vec<Vec<&str>> = game
            .objectives()
            .iter()
            .map(|o| o.targets().into_iter().map(|v| names[v].as_str()).collect())
            .collect();
        write_list(&mut out, "objectives", &lists, true);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
  "kind": "reach",
  "vertices": [
    {"id":"a","owner":0},
    {"id":"b","owner":1}
  ],
  "edges": [
    ["a","b"],
    ["b","b"]
  ],
  "initial": "a",
  "objectives": [
    ["b"],
    []
  ]
}
"#;

    #[test]
    fn tiny_round_trip() {
        let g = parse_game(TINY).unwrap();
        assert_eq!(g.t(), 1);
        let text = serialize_game(&g);
        assert_eq!(parse_game(&text).unwrap(), g);
        assert_eq!(serialize_game(&parse_game(&text).unwrap()), text);
    }

    #[test]
    fn undeclared_edge_target() {
        let bad = TINY.replace(r#"["b","b"]"#, r#"["b","c"]"#);
        match parse_game(&bad) {
            Err(IoError::Semantic(m)) => assert!(m.contains("\"c\"")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_position() {
        match parse_game("{\n  \"kind\": reach\n}") {
            Err(IoError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
