use serde::Serialize;
use thiserror::Error;

use crate::arena::{ObjectiveKind, SpGame, Vertex};
use crate::objectives::LassoPlay;
use crate::payoff::ExtendedPayoff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("the witness is not among the given witnesses")]
    UnknownWitness,
    #[error("the witness set contains the same play twice")]
    DuplicateWitness,
    #[error("compaction needs a reachability game")]
    NotReachability,
}

/// Progress of a history plus the witnesses it is still a prefix of.
/// `progress` is absent for parity games, where it carries no information.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub progress: Option<ExtendedPayoff>,
    /// Indices into the witness list.
    pub witnesses: Vec<usize>,
}

/// A maximal stretch of a witness with constant region. The last section
/// of a decomposition is infinite: `path` followed by `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub region: Region,
    pub path: Vec<Vertex>,
    pub cycle: Option<Vec<Vertex>>,
}

/// Splits `witness` into maximal constant-region sections.
pub fn region_decompose(witness: &LassoPlay, all_witnesses: &[LassoPlay], game: &SpGame) -> Result<Vec<Section>, RegionError> {
    let me = all_witnesses.iter().position(|w| w == witness).ok_or(RegionError::UnknownWitness)?;
    let horizon = agreement_horizon(all_witnesses).max(witness.span());
    for (i, a) in all_witnesses.iter().enumerate() {
        for b in &all_witnesses[i + 1..] {
            if (0..horizon).all(|k| a.at(k) == b.at(k)) {
                return Err(RegionError::DuplicateWitness);
            }
        }
    }
    let marks = match game.kind() {
        ObjectiveKind::Reachability => game.reach_marks(),
        ObjectiveKind::Parity => None,
    };
    let t = game.t();
    let mut alive: Vec<usize> = (0..all_witnesses.len()).collect();
    let mut acc = 0u64;
    let mut regions: Vec<Region> = Vec::with_capacity(horizon);
    for k in 0..horizon {
        let v = witness.at(k);
        alive.retain(|&j| all_witnesses[j].at(k) == v);
        debug_assert!(alive.contains(&me));
        if let Some(m) = &marks {
            acc |= m[v];
        }
        regions.push(Region {
            progress: marks.as_ref().map(|_| ExtendedPayoff::unpack(t, acc)),
            witnesses: alive.clone(),
        });
    }
    let mut sections: Vec<Section> = Vec::new();
    let mut start = 0;
    for k in 1..=horizon {
        if k == horizon || regions[k] != regions[start] {
            sections.push(Section {
                region: regions[start].clone(),
                path: (start..k).map(|i| witness.at(i)).collect(),
                cycle: None,
            });
            start = k;
        }
    }
    // the last section runs forever
    let last = sections.last_mut().expect("horizon is positive");
    let from = horizon - last.path.len();
    let (path, cycle) = suffix(witness, from);
    last.path = path;
    last.cycle = Some(cycle);
    Ok(sections)
}

/// Positions after which two distinct witnesses are known to have split.
fn agreement_horizon(ws: &[LassoPlay]) -> usize {
    let prefix = ws.iter().map(|w| w.prefix.len()).max().unwrap_or(0);
    let cycle = ws.iter().map(|w| w.cycle.len()).max().unwrap_or(1);
    prefix + 2 * cycle + 1
}

/// The play from position `from` on, as a finite path and a cycle.
fn suffix(l: &LassoPlay, from: usize) -> (Vec<Vertex>, Vec<Vertex>) {
    if from < l.prefix.len() {
        (l.prefix[from..].to_vec(), l.cycle.clone())
    } else {
        let mut c = l.cycle.clone();
        let shift = (from - l.prefix.len()) % c.len();
        c.rotate_left(shift);
        (Vec::new(), c)
    }
}

/// Removes cycles inside every section, keeping each section's endpoints,
/// and folds the last section into its first repetition.
pub fn compact_witness(witness: &LassoPlay, sections: &[Section]) -> Result<LassoPlay, RegionError> {
    if sections.iter().any(|s| s.region.progress.is_none()) {
        return Err(RegionError::NotReachability);
    }
    let first = sections[0].path.first().or(sections[0].cycle.as_ref().and_then(|c| c.first()));
    debug_assert_eq!(first, Some(&witness.at(0)));
    let mut prefix: Vec<Vertex> = Vec::new();
    let (last, internal) = sections.split_last().expect("non-empty decomposition");
    for s in internal {
        prefix.extend(elementary(&s.path));
    }
    let cycle = last.cycle.clone().unwrap_or_default();
    let mut walk = last.path.clone();
    walk.extend(&cycle);
    walk.extend(&cycle);
    walk.extend(&cycle);
    let mut seen: Vec<Vertex> = Vec::new();
    for &v in &walk {
        if let Some(pos) = seen.iter().position(|&x| x == v) {
            prefix.extend(&seen[..pos]);
            return Ok(LassoPlay::new(prefix, seen[pos..].to_vec()));
        }
        seen.push(v);
    }
    unreachable!("an infinite suffix repeats a vertex")
}

/// First-revisit cycle elimination.
pub fn elementary(path: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::new();
    for &v in path {
        if let Some(pos) = out.iter().position(|&x| x == v) {
            out.truncate(pos + 1);
        } else {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cycle_elimination() {
        assert_eq!(elementary(&[0, 1, 2, 1, 3]), vec![0, 1, 3]);
        assert_eq!(elementary(&[0, 1, 2]), vec![0, 1, 2]);
        assert_eq!(elementary(&[4, 1, 2, 1, 2, 4, 5]), vec![4, 5]);
    }
}
