//! Payoff vectors, their partial order, antichains and the reachability payoff update.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{ObjectiveKind, SpGame, Vertex};
use crate::objectives::Objective;

/// Largest supported number of Player-1 objectives.
pub const MAX_WIDTH: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PayoffError {
    #[error("payoff widths differ ({0} vs {1})")]
    WidthMismatch(usize, usize),
    #[error("payoff width {0} exceeds the supported maximum of {MAX_WIDTH}")]
    TooWide(usize),
    #[error("payoffs {0} and {1} are comparable")]
    NotAntichain(Payoff, Payoff),
    #[error("payoff update needs a reachability game")]
    NotReachability,
}

/// Bit vector of width `t`; bit `i` holds objective `i + 1`.
///
/// The derived order (width, then bit pattern read as an integer) is the
/// canonical iteration order; the componentwise order is exposed through
/// [`PartialOrd`]-style helpers instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Payoff {
    width: u8,
    bits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayoffOrdering {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl Payoff {
    pub fn zero(width: usize) -> Payoff {
        assert!(width <= MAX_WIDTH, "payoff width {width} too large");
        Payoff {
            width: width as u8,
            bits: 0,
        }
    }

    pub fn top(width: usize) -> Payoff {
        Payoff::from_bits(width, (1u64 << width) - 1)
    }

    pub fn from_bits(width: usize, bits: u64) -> Payoff {
        assert!(width <= MAX_WIDTH, "payoff width {width} too large");
        debug_assert!(bits >> width == 0, "bits outside width");
        Payoff {
            width: width as u8,
            bits,
        }
    }

    /// Builds a payoff from component values, first component first.
    pub fn from_slice(values: &[bool]) -> Payoff {
        let mut p = Payoff::zero(values.len());
        for (i, &b) in values.iter().enumerate() {
            p.set(i, b);
        }
        p
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Component `i` (0-based, so `get(0)` is objective 1).
    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.width());
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn compare(&self, other: &Payoff) -> Result<PayoffOrdering, PayoffError> {
        if self.width != other.width {
            return Err(PayoffError::WidthMismatch(self.width(), other.width()));
        }
        Ok(compare_bits(self.bits, other.bits))
    }

    /// Componentwise `self ≤ other`; widths must agree.
    pub fn is_le(&self, other: &Payoff) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.bits & !other.bits == 0
    }

    /// Componentwise `self < other`.
    pub fn is_lt(&self, other: &Payoff) -> bool {
        self.is_le(other) && self.bits != other.bits
    }

    /// Every payoff of this width, in canonical order.
    pub fn all(width: usize) -> impl Iterator<Item = Payoff> {
        (0..1u64 << width).map(move |b| Payoff::from_bits(width, b))
    }
}

pub(crate) fn compare_bits(a: u64, b: u64) -> PayoffOrdering {
    if a == b {
        PayoffOrdering::Equal
    } else if a & !b == 0 {
        PayoffOrdering::Less
    } else if b & !a == 0 {
        PayoffOrdering::Greater
    } else {
        PayoffOrdering::Incomparable
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.width() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

/// Player-0 bit together with the Player-1 payoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedPayoff {
    pub won: bool,
    pub payoff: Payoff,
}

impl ExtendedPayoff {
    pub fn new(won: bool, payoff: Payoff) -> ExtendedPayoff {
        ExtendedPayoff { won, payoff }
    }

    /// Packs into one word: bit 0 is `won`, bit `i` is objective `i`.
    pub fn packed(&self) -> u64 {
        self.won as u64 | self.payoff.bits() << 1
    }

    pub fn unpack(width: usize, packed: u64) -> ExtendedPayoff {
        ExtendedPayoff {
            won: packed & 1 == 1,
            payoff: Payoff::from_bits(width, packed >> 1),
        }
    }
}

impl fmt::Display for ExtendedPayoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.won as u8, self.payoff)
    }
}

/// Pairwise incomparable payoffs, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Antichain {
    elems: Vec<Payoff>,
}

impl Antichain {
    pub fn new(mut elems: Vec<Payoff>) -> Result<Antichain, PayoffError> {
        elems.sort();
        elems.dedup();
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                match a.compare(b)? {
                    PayoffOrdering::Incomparable => {}
                    _ => return Err(PayoffError::NotAntichain(*a, *b)),
                }
            }
        }
        Ok(Antichain { elems })
    }

    pub fn empty() -> Antichain {
        Antichain { elems: Vec::new() }
    }

    pub fn elems(&self) -> &[Payoff] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, p: &Payoff) -> bool {
        self.elems.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &Payoff) -> Option<usize> {
        self.elems.binary_search(p).ok()
    }

    /// True iff some element is strictly above `p`.
    pub fn strictly_dominates(&self, p: &Payoff) -> bool {
        self.elems.iter().any(|q| p.is_lt(q))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Payoff> {
        self.elems.iter()
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a Antichain {
    type Item = &'a Payoff;
    type IntoIter = std::slice::Iter<'a, Payoff>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// The maximal elements of `payoffs`.
pub fn pareto_max(payoffs: &[Payoff]) -> Antichain {
    let mut elems: Vec<Payoff> = payoffs
        .iter()
        .filter(|p| !payoffs.iter().any(|q| p.is_lt(q)))
        .copied()
        .collect();
    elems.sort();
    elems.dedup();
    Antichain { elems }
}

pub fn is_antichain(payoffs: &[Payoff]) -> bool {
    payoffs.iter().enumerate().all(|(i, a)| {
        payoffs[i + 1..]
            .iter()
            .all(|b| compare_bits(a.bits, b.bits) == PayoffOrdering::Incomparable)
    })
}

/// Every non-empty antichain over `ground`, by cardinality and then
/// lexicographically over the canonically sorted ground set.
pub fn enumerate_antichains(ground: &[Payoff]) -> AntichainIter {
    let mut ground = ground.to_vec();
    ground.sort();
    ground.dedup();
    AntichainIter {
        ground,
        size: 0,
        level: Vec::new().into_iter(),
    }
}

pub struct AntichainIter {
    ground: Vec<Payoff>,
    size: usize,
    level: std::vec::IntoIter<Antichain>,
}

impl AntichainIter {
    fn fill_level(&mut self) -> bool {
        self.size += 1;
        if self.size > self.ground.len() {
            return false;
        }
        let mut found = Vec::new();
        let mut current = Vec::with_capacity(self.size);
        extend(&self.ground, 0, self.size, &mut current, &mut found);
        let empty = found.is_empty();
        self.level = found.into_iter();
        !empty
    }
}

fn extend(ground: &[Payoff], start: usize, size: usize, current: &mut Vec<Payoff>, out: &mut Vec<Antichain>) {
    if current.len() == size {
        out.push(Antichain {
            elems: current.clone(),
        });
        return;
    }
    let missing = size - current.len();
    for i in start..ground.len() {
        if ground.len() - i < missing {
            break;
        }
        let p = ground[i];
        if current
            .iter()
            .all(|q| compare_bits(q.bits, p.bits) == PayoffOrdering::Incomparable)
        {
            current.push(p);
            extend(ground, i + 1, size, current, out);
            current.pop();
        }
    }
}

impl Iterator for AntichainIter {
    type Item = Antichain;

    fn next(&mut self) -> Option<Antichain> {
        loop {
            if let Some(a) = self.level.next() {
                return Some(a);
            }
            // no antichain of size k means none of size k + 1
            if !self.fill_level() {
                return None;
            }
        }
    }
}

/// Reachability payoff update: marks visiting `v`.
pub fn upd(won: bool, payoff: Payoff, v: Vertex, game: &SpGame) -> Result<ExtendedPayoff, PayoffError> {
    if game.kind() != ObjectiveKind::Reachability {
        return Err(PayoffError::NotReachability);
    }
    if game.t() != payoff.width() {
        return Err(PayoffError::WidthMismatch(game.t(), payoff.width()));
    }
    let hit = |i: usize| matches!(game.objective(i), Objective::Reach(t) if t[v]);
    let mut p = payoff;
    for i in 0..game.t() {
        if hit(i + 1) {
            p.set(i, true);
        }
    }
    Ok(ExtendedPayoff::new(won || hit(0), p))
}
