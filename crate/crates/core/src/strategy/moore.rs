use serde::{Deserialize, Serialize};

use super::StrategyError;
use crate::arena::{Arena, Player, Vertex};

/// Finite-memory strategy of Player 0.
///
/// The memory is updated on every visited vertex, the initial vertex
/// included: after the history `v0 .. vk` the memory is
/// `update(..update(initial, v0).., vk)`, and at a Player-0 vertex `vk` the
/// move is `output(m, vk)` for that memory `m`. Tables are partial; only
/// entries met by consistent plays need to be present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreStrategy {
    states: usize,
    initial: usize,
    vertices: usize,
    update: Vec<Option<u32>>,
    output: Vec<Option<u32>>,
}

impl MooreStrategy {
    pub fn new(states: usize, initial: usize, vertices: usize) -> MooreStrategy {
        assert!(initial < states.max(1));
        MooreStrategy {
            states: states.max(1),
            initial,
            vertices,
            update: vec![None; states.max(1) * vertices],
            output: vec![None; states.max(1) * vertices],
        }
    }

    /// One-state machine playing `choice[v]` at every Player-0 vertex `v`.
    pub fn memoryless(arena: &Arena, choice: &[Option<Vertex>]) -> MooreStrategy {
        let mut m = MooreStrategy::new(1, 0, arena.len());
        for v in arena.vertices() {
            m.set_update(0, v, 0);
            if arena.owner(v) == Player::Zero {
                if let Some(u) = choice[v] {
                    m.set_output(0, v, u);
                }
            }
        }
        m
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn update(&self, s: usize, v: Vertex) -> Option<usize> {
        self.update[s * self.vertices + v].map(|x| x as usize)
    }

    pub fn output(&self, s: usize, v: Vertex) -> Option<Vertex> {
        self.output[s * self.vertices + v].map(|x| x as usize)
    }

    pub fn set_update(&mut self, s: usize, v: Vertex, next: usize) {
        self.update[s * self.vertices + v] = Some(next as u32);
    }

    pub fn set_output(&mut self, s: usize, v: Vertex, u: Vertex) {
        self.output[s * self.vertices + v] = Some(u as u32);
    }

    pub(crate) fn clear_update(&mut self, s: usize, v: Vertex) {
        self.update[s * self.vertices + v] = None;
    }

    pub(crate) fn clear_output(&mut self, s: usize, v: Vertex) {
        self.output[s * self.vertices + v] = None;
    }

    /// All defined update entries as `(state, vertex, next)`.
    pub fn update_entries(&self) -> impl Iterator<Item = (usize, Vertex, usize)> + '_ {
        self.update.iter().enumerate().filter_map(move |(i, x)| x.map(|s| (i / self.vertices, i % self.vertices, s as usize)))
    }

    /// All defined output entries as `(state, vertex, successor)`.
    pub fn output_entries(&self) -> impl Iterator<Item = (usize, Vertex, Vertex)> + '_ {
        self.output.iter().enumerate().filter_map(move |(i, x)| x.map(|u| (i / self.vertices, i % self.vertices, u as usize)))
    }

    /// Table ranges and output edges; totality is checked lazily by [`super::product`].
    pub fn check(&self, arena: &Arena) -> Result<(), StrategyError> {
        if self.vertices != arena.len() {
            return Err(StrategyError::VertexCount {
                expected: arena.len(),
                found: self.vertices,
            });
        }
        for (s, v, next) in self.update_entries() {
            if next >= self.states {
                return Err(StrategyError::StateOutOfRange { state: s, vertex: v, next });
            }
        }
        for (s, v, u) in self.output_entries() {
            if arena.owner(v) != Player::Zero {
                return Err(StrategyError::OutputAtPlayerOne { state: s, vertex: v });
            }
            if u >= arena.len() || !arena.has_edge(v, u) {
                return Err(StrategyError::NotAnEdge { state: s, from: v, to: u });
            }
        }
        Ok(())
    }

    /// Keeps the states reachable from the initial state through defined
    /// updates, renumbered in order of discovery.
    pub fn trimmed(&self) -> MooreStrategy {
        let mut index = vec![usize::MAX; self.states];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for v in 0..self.vertices {
                if let Some(n) = self.update(s, v) {
                    if index[n] == usize::MAX {
                        index[n] = order.len();
                        order.push(n);
                    }
                }
            }
            i += 1;
        }
        let mut out = MooreStrategy::new(order.len(), 0, self.vertices);
        for (new, &old) in order.iter().enumerate() {
            for v in 0..self.vertices {
                if let Some(n) = self.update(old, v) {
                    out.set_update(new, v, index[n]);
                }
                if let Some(u) = self.output(old, v) {
                    out.set_output(new, v, u);
                }
            }
        }
        out
    }

    /// Merges states with identical behaviour (Moore partition refinement,
    /// an undefined entry counting as a value of its own).
    pub fn minimized(&self) -> MooreStrategy {
        let m = self.trimmed();
        let n = m.vertices;
        let mut class: Vec<usize> = {
            let mut keys: Vec<Vec<Option<u32>>> = Vec::new();
            (0..m.states)
                .map(|s| {
                    let key: Vec<Option<u32>> = (0..n)
                        .map(|v| m.output[s * n + v])
                        .chain((0..n).map(|v| m.update[s * n + v].map(|_| 0)))
                        .collect();
                    keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                        keys.push(key);
                        keys.len() - 1
                    })
                })
                .collect()
        };
        loop {
            let mut keys: Vec<(usize, Vec<Option<usize>>)> = Vec::new();
            let next: Vec<usize> = (0..m.states)
                .map(|s| {
                    let key = (class[s], (0..n).map(|v| m.update(s, v).map(|x| class[x])).collect());
                    keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                        keys.push(key);
                        keys.len() - 1
                    })
                })
                .collect();
            let before = class.iter().max().map_or(0, |x| x + 1);
            let after = keys.len();
            class = next;
            if after == before {
                break;
            }
        }
        let count = class.iter().max().map_or(0, |x| x + 1);
        let mut out = MooreStrategy::new(count, class[m.initial], n);
        for s in 0..m.states {
            for v in 0..n {
                if let Some(x) = m.update(s, v) {
                    out.set_update(class[s], v, class[x]);
                }
                if let Some(u) = m.output(s, v) {
                    out.set_output(class[s], v, u);
                }
            }
        }
        out.trimmed()
    }
}
