//! Existence of an infinite path satisfying several parity conditions at once.

use crate::graph;
use crate::objectives::LassoPlay;

/// Some infinite path from `from` satisfies every priority map (min-even).
/// Returns a witness lasso over node ids.
pub fn conj_parity_path_exists(succ: &[Vec<usize>], maps: &[Vec<u32>], from: usize) -> Option<LassoPlay> {
    conj_parity_path_exists_in(succ, maps, from, &vec![true; succ.len()])
}

/// As [`conj_parity_path_exists`], restricted to nodes marked `alive`.
pub fn conj_parity_path_exists_in(succ: &[Vec<usize>], maps: &[Vec<u32>], from: usize, alive: &[bool]) -> Option<LassoPlay> {
    let reach = graph::reachable(succ, from, alive);
    let mut good: Vec<Vec<usize>> = Vec::new();
    refine(succ, maps, &reach, &mut good);
    if good.is_empty() {
        return None;
    }
    let mut owner = vec![usize::MAX; succ.len()];
    for (i, comp) in good.iter().enumerate() {
        for &v in comp {
            owner[v] = i;
        }
    }
    let path = graph::bfs_path(succ, from, &reach, |v| owner[v] != usize::MAX)?;
    let entry = *path.last().expect("non-empty path");
    let cycle = graph::covering_cycle(succ, &good[owner[entry]], entry);
    Some(LassoPlay::new(path[..path.len() - 1].to_vec(), cycle))
}

fn refine(succ: &[Vec<usize>], maps: &[Vec<u32>], alive: &[bool], good: &mut Vec<Vec<usize>>) {
    for comp in graph::sccs(succ, alive) {
        if !graph::is_cyclic(succ, &comp) {
            continue;
        }
        let mut remove = Vec::new();
        for c in maps {
            let min = comp.iter().map(|&v| c[v]).min().expect("non-empty component");
            if min % 2 == 1 {
                remove.extend(comp.iter().copied().filter(|&v| c[v] == min));
            }
        }
        if remove.is_empty() {
            good.push(comp);
            continue;
        }
        let mut sub = vec![false; succ.len()];
        for &v in &comp {
            sub[v] = true;
        }
        for v in remove {
            sub[v] = false;
        }
        refine(succ, maps, &sub, good);
    }
}
