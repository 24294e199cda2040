//! Small digraph helpers shared by the solvers: SCCs, BFS paths, tours.

use std::collections::VecDeque;

/// Strongly connected components of the subgraph induced by `alive`,
/// in reverse topological order (sinks first).
pub fn sccs(succ: &[Vec<usize>], alive: &[bool]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0usize;
    // (vertex, position in successor list)
    let mut work: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if !alive[root] || index[root] != usize::MAX {
            continue;
        }
        work.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos < succ[v].len() {
                let u = succ[v][*pos];
                *pos += 1;
                if !alive[u] {
                    continue;
                }
                if index[u] == usize::MAX {
                    index[u] = next;
                    low[u] = next;
                    next += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    work.push((u, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// An SCC is cyclic if it has two vertices or a self-loop.
pub fn is_cyclic(succ: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

pub fn reachable(succ: &[Vec<usize>], from: usize, alive: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    if !alive[from] {
        return seen;
    }
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &u in &succ[v] {
            if alive[u] && !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Shortest path (vertex list, both ends included) from `from` to any vertex
/// satisfying `goal`, using only `alive` vertices. Successors are explored in
/// list order so ties go to earlier successors.
pub fn bfs_path(
    succ: &[Vec<usize>],
    from: usize,
    alive: &[bool],
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    if !alive[from] {
        return None;
    }
    let mut parent = vec![usize::MAX; succ.len()];
    let mut seen = vec![false; succ.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &u in &succ[v] {
            if alive[u] && !seen[u] {
                seen[u] = true;
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Shortest non-empty cycle through `v` inside `alive`, returned without the
/// repeated endpoint (so `[v]` for a self-loop).
pub fn shortest_cycle(succ: &[Vec<usize>], v: usize, alive: &[bool]) -> Option<Vec<usize>> {
    if succ[v].contains(&v) {
        return Some(vec![v]);
    }
    let mut best: Option<Vec<usize>> = None;
    for &u in &succ[v] {
        if !alive[u] {
            continue;
        }
        if let Some(path) = bfs_path(succ, u, alive, |x| x == v) {
            let mut cycle = vec![v];
            cycle.extend_from_slice(&path[..path.len() - 1]);
            if best.as_ref().map_or(true, |b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    best
}

/// A closed walk inside one cyclic SCC that visits every vertex of it,
/// starting and ending at `start` (endpoint not repeated).
pub fn covering_cycle(succ: &[Vec<usize>], comp: &[usize], start: usize) -> Vec<usize> {
    let mut alive = vec![false; succ.len()];
    for &v in comp {
        alive[v] = true;
    }
    if comp.len() == 1 {
        return vec![start];
    }
    let mut walk = vec![start];
    let mut cur = start;
    let mut visited = vec![false; succ.len()];
    visited[start] = true;
    loop {
        let target = comp.iter().copied().find(|&v| !visited[v]);
        let path = match target {
            Some(t) => bfs_path(succ, cur, &alive, |x| x == t),
            None => {
                let back = shortest_cycle_to(succ, cur, start, &alive);
                walk.extend_from_slice(&back[1..back.len() - 1]);
                return walk;
            }
        }
        .expect("strongly connected");
        for &v in &path[1..] {
            visited[v] = true;
        }
        walk.extend_from_slice(&path[1..]);
        cur = *path.last().expect("non-empty path");
    }
}

// Path from cur back to start of length >= 1, both ends included.
fn shortest_cycle_to(succ: &[Vec<usize>], cur: usize, start: usize, alive: &[bool]) -> Vec<usize> {
    if cur != start {
        return bfs_path(succ, cur, alive, |x| x == start).expect("strongly connected");
    }
    let mut cycle = shortest_cycle(succ, start, alive).expect("cyclic component");
    cycle.push(start);
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_basic() {
        let succ = vec![vec![1], vec![2], vec![0, 3], vec![3], vec![4]];
        let alive = vec![true; 5];
        let comps = sccs(&succ, &alive);
        assert_eq!(comps.len(), 3);
        assert!(comps.contains(&vec![0, 1, 2]));
        assert!(is_cyclic(&succ, &[3]));
        assert!(!is_cyclic(&vec![vec![1], vec![1]], &[0]));
    }

    #[test]
    fn covering_cycle_visits_all() {
        let succ = vec![vec![1], vec![2, 0], vec![0]];
        let walk = covering_cycle(&succ, &[0, 1, 2], 0);
        assert_eq!(walk, vec![0, 1, 2]);
        let walk = covering_cycle(&succ, &[0, 1, 2], 1);
        for w in walk.windows(2) {
            assert!(succ[w[0]].contains(&w[1]));
        }
        assert!(succ[*walk.last().unwrap()].contains(&walk[0]));
        for v in 0..3 {
            assert!(walk.contains(&v));
        }
    }
}
