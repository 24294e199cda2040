use super::{Builder, ReductionError};
use crate::arena::{Arena, Player, Vertex};

/// Player-1 fragment with exactly `k` distinct paths from `alpha` to `beta`.
///
/// Bit 0 of `k` is a direct edge; every higher set bit `i` is a chain of `i`
/// diamonds between `alpha` and `beta`. `beta` has no successors here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qk {
    pub k: u64,
    pub names: Vec<String>,
    pub succ: Vec<Vec<Vertex>>,
    pub alpha: Vertex,
    pub beta: Vertex,
}

pub fn build_qk(k: u64) -> Result<Qk, ReductionError> {
    if k == 0 {
        return Err(ReductionError::Invalid("Q_k needs k >= 1".into()));
    }
    let mut names = vec!["alpha".to_string(), "beta".to_string()];
    let mut succ: Vec<Vec<Vertex>> = vec![Vec::new(), Vec::new()];
    let (alpha, beta) = (0, 1);
    let add = |name: String, names: &mut Vec<String>, succ: &mut Vec<Vec<Vertex>>| {
        names.push(name);
        succ.push(Vec::new());
        names.len() - 1
    };
    for bit in 0..64 {
        if k >> bit & 1 == 0 {
            continue;
        }
        if bit == 0 {
            succ[alpha].push(beta);
            continue;
        }
        let mut cur = add(format!("q{bit}.0"), &mut names, &mut succ);
        succ[alpha].push(cur);
        for d in 0..bit {
            let up = add(format!("q{bit}.{d}u"), &mut names, &mut succ);
            let down = add(format!("q{bit}.{d}d"), &mut names, &mut succ);
            let next = add(format!("q{bit}.{}", d + 1), &mut names, &mut succ);
            succ[cur].extend([up, down]);
            succ[up].push(next);
            succ[down].push(next);
            cur = next;
        }
        succ[cur].push(beta);
    }
    Ok(Qk {
        k,
        names,
        succ,
        alpha,
        beta,
    })
}

impl Qk {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// Number of distinct `alpha`-`beta` paths, counted on the DAG.
    pub fn path_count(&self) -> u128 {
        count_paths(&self.succ, self.alpha, self.beta)
    }

    /// The fragment as an arena: all Player 1, `beta` looping on itself.
    pub fn arena(&self) -> Arena {
        let mut succ = self.succ.clone();
        succ[self.beta].push(self.beta);
        Arena::new(vec![Player::One; self.len()], succ, self.alpha)
            .and_then(|a| a.with_names(self.names.clone()))
            .expect("gadget is a valid arena")
    }

    /// Copies the fragment into `b`; returns the new `alpha` and `beta`.
    pub(super) fn embed(&self, b: &mut Builder, prefix: &str) -> (Vertex, Vertex) {
        let base = b.len();
        for name in &self.names {
            b.add(format!("{prefix}{name}"), Player::One);
        }
        for (v, s) in self.succ.iter().enumerate() {
            for &u in s {
                b.edge(base + v, base + u);
            }
        }
        (base + self.alpha, base + self.beta)
    }
}

/// Paths from `from` to `to` in a graph whose part reachable from `from`,
/// self-loops aside, is acyclic.
pub fn count_paths(succ: &[Vec<Vertex>], from: Vertex, to: Vertex) -> u128 {
    fn go(succ: &[Vec<Vertex>], v: Vertex, to: Vertex, memo: &mut Vec<Option<u128>>) -> u128 {
        if v == to {
            return 1;
        }
        if let Some(c) = memo[v] {
            return c;
        }
        memo[v] = Some(0);
        let c = succ[v].iter().filter(|&&u| u != v).map(|&u| go(succ, u, to, memo)).sum();
        memo[v] = Some(c);
        c
    }
    go(succ, from, to, &mut vec![None; succ.len()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_paths() {
        let q = build_qk(11).unwrap();
        assert_eq!(q.path_count(), 11);
        // direct edge, one diamond, three diamonds
        assert_eq!(q.len(), 2 + 4 + 10);
        assert_eq!(q.arena().len(), q.len());
    }

    #[test]
    fn one_is_a_single_edge() {
        let q = build_qk(1).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.succ[q.alpha], vec![q.beta]);
        assert!(build_qk(0).is_err());
    }
}
