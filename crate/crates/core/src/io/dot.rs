use std::collections::BTreeSet;
use std::fmt::Write;

use crate::arena::{ObjectiveKind, Player, SpGame, Vertex};
use crate::cpgame::CpGame;
use crate::objectives::LassoPlay;
use crate::strategy::{prover_choices, Product, VerificationReport};
use crate::zerosum::SolveResult;

fn shape(p: Player) -> &'static str {
    match p {
        Player::Zero => "ellipse",
        Player::One => "box",
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The arena with objective memberships as node attributes; `bold` edges
/// are drawn thick.
pub fn export_game_dot(game: &SpGame, bold: &[(Vertex, Vertex)]) -> String {
    let arena = game.arena();
    let mut out = String::from("digraph game {\n");
    for v in arena.vertices() {
        let name = arena.name(v);
        let mut attrs = vec![format!("shape={}", shape(arena.owner(v)))];
        match game.kind() {
            ObjectiveKind::Reachability => {
                let hits: Vec<String> = (0..=game.t()).filter(|&i| game.objective(i).targets().contains(&v)).map(|i| i.to_string()).collect();
                if !hits.is_empty() {
                    attrs.push(format!("objectives={}", quote(&hits.join(","))));
                }
                attrs.push(format!("label={}", quote(&name)));
            }
            ObjectiveKind::Parity => {
                let prio: Vec<String> = game.priority_maps().iter().map(|c| c[v].to_string()).collect();
                attrs.push(format!("priorities={}", quote(&prio.join(","))));
                attrs.push(format!("label={}", quote(&format!("{name} ({})", prio.join(",")))));
            }
        }
        if v == arena.initial() {
            attrs.push("initial=true".into());
        }
        let _ = writeln!(out, "  {} [{}];", quote(&name), attrs.join(", "));
    }
    for v in arena.vertices() {
        for &u in arena.successors(v) {
            let style = if bold.contains(&(v, u)) { " [style=bold]" } else { "" };
            let _ = writeln!(out, "  {} -> {}{style};", quote(&arena.name(v)), quote(&arena.name(u)));
        }
    }
    out.push_str("}\n");
    out
}

/// The C-P game; `buchi` marks accepting vertices, `winning` the Prover's
/// region, and the Prover's chosen moves are bold.
pub fn export_cp_dot(cp: &CpGame, game: &SpGame, result: Option<&SolveResult>) -> String {
    let choices = result.map(|r| prover_choices(cp, r));
    let accepting = cp.accepting();
    let mut out = String::from("digraph cp {\n");
    for i in 0..cp.len() {
        let mut attrs = vec![
            format!("shape={}", shape(cp.arena.owner(i))),
            format!("label={}", quote(&cp.label(i, game))),
        ];
        if accepting.is_some_and(|b| b[i]) {
            attrs.push("buchi=true".into());
        }
        if result.is_some_and(|r| r.wins(i)) {
            attrs.push("winning=true".into());
        }
        if i == cp.start() {
            attrs.push("initial=true".into());
        }
        let _ = writeln!(out, "  n{i} [{}];", attrs.join(", "));
    }
    for i in 0..cp.len() {
        for &j in cp.arena.successors(i) {
            let chosen = choices.as_ref().is_some_and(|c| c[i] == Some(j));
            let style = if chosen { " [style=bold]" } else { "" };
            let _ = writeln!(out, "  n{i} -> n{j}{style};");
        }
    }
    out.push_str("}\n");
    out
}

/// Product edges followed by a lasso.
fn traversed(product: &Product, play: &LassoPlay) -> BTreeSet<(usize, usize)> {
    let mut edges = BTreeSet::new();
    let mut at = 0;
    // enough steps to close the cycle in the product as well
    let steps = play.prefix.len() + play.cycle.len() * (product.len() + 1);
    for k in 1..steps {
        let v = play.at(k);
        let Some(&next) = product.succ[at].iter().find(|&&j| product.vertex(j) == v) else {
            break;
        };
        edges.insert((at, next));
        at = next;
    }
    edges
}

/// Arena × memory with witness edges bold and counterexample edges red.
pub fn export_product_dot(game: &SpGame, product: &Product, report: &VerificationReport) -> String {
    let arena = game.arena();
    let witness: BTreeSet<(usize, usize)> = report.witnesses.iter().flat_map(|(_, w)| traversed(product, w)).collect();
    let counter = report.counterexample.as_ref().map(|c| traversed(product, c)).unwrap_or_default();
    let mut out = String::from("digraph product {\n");
    for (i, &(v, m)) in product.nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [shape={}, label={}];",
            shape(arena.owner(v)),
            quote(&format!("{}/{m}", arena.name(v)))
        );
    }
    for (i, list) in product.succ.iter().enumerate() {
        for &j in list {
            let mut attrs = Vec::new();
            if witness.contains(&(i, j)) {
                attrs.push("style=bold");
            }
            if counter.contains(&(i, j)) {
                attrs.push("color=red");
            }
            let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
            let _ = writeln!(out, "  n{i} -> n{j}{attrs};");
        }
    }
    out.push_str("}\n");
    out
}
