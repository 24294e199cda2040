//! Boolean formulas over "set visited infinitely often" atoms.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BooleanFormula {
    Const(bool),
    Var(usize),
    Not(Box<BooleanFormula>),
    And(Vec<BooleanFormula>),
    Or(Vec<BooleanFormula>),
}

impl BooleanFormula {
    pub fn var(i: usize) -> BooleanFormula {
        BooleanFormula::Var(i)
    }

    pub fn not(f: BooleanFormula) -> BooleanFormula {
        match f {
            BooleanFormula::Const(b) => BooleanFormula::Const(!b),
            BooleanFormula::Not(inner) => *inner,
            other => BooleanFormula::Not(Box::new(other)),
        }
    }

    /// Conjunction with constant folding and flattening.
    pub fn and(parts: impl IntoIterator<Item = BooleanFormula>) -> BooleanFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                BooleanFormula::Const(true) => {}
                BooleanFormula::Const(false) => return BooleanFormula::Const(false),
                BooleanFormula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BooleanFormula::Const(true),
            1 => out.pop().expect("one element"),
            _ => BooleanFormula::And(out),
        }
    }

    /// Disjunction with constant folding and flattening.
    pub fn or(parts: impl IntoIterator<Item = BooleanFormula>) -> BooleanFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                BooleanFormula::Const(false) => {}
                BooleanFormula::Const(true) => return BooleanFormula::Const(true),
                BooleanFormula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BooleanFormula::Const(false),
            1 => out.pop().expect("one element"),
            _ => BooleanFormula::Or(out),
        }
    }

    pub fn eval(&self, val: &dyn Fn(usize) -> bool) -> bool {
        match self {
            BooleanFormula::Const(b) => *b,
            BooleanFormula::Var(i) => val(*i),
            BooleanFormula::Not(f) => !f.eval(val),
            BooleanFormula::And(fs) => fs.iter().all(|f| f.eval(val)),
            BooleanFormula::Or(fs) => fs.iter().any(|f| f.eval(val)),
        }
    }

    /// Evaluates with variable `i` set iff bit `i` of `mask` is set.
    pub fn eval_mask(&self, mask: u64) -> bool {
        self.eval(&|i| i < 64 && mask >> i & 1 == 1)
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            BooleanFormula::Const(_) => None,
            BooleanFormula::Var(i) => Some(*i),
            BooleanFormula::Not(f) => f.max_var(),
            BooleanFormula::And(fs) | BooleanFormula::Or(fs) => fs.iter().filter_map(|f| f.max_var()).max(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            BooleanFormula::Const(_) | BooleanFormula::Var(_) => 1,
            BooleanFormula::Not(f) => 1 + f.size(),
            BooleanFormula::And(fs) | BooleanFormula::Or(fs) => 1 + fs.iter().map(|f| f.size()).sum::<usize>(),
        }
    }

    /// Replaces variables by constants where `fix` says so.
    pub fn substitute(&self, fix: &dyn Fn(usize) -> Option<bool>) -> BooleanFormula {
        match self {
            BooleanFormula::Const(b) => BooleanFormula::Const(*b),
            BooleanFormula::Var(i) => match fix(*i) {
                Some(b) => BooleanFormula::Const(b),
                None => BooleanFormula::Var(*i),
            },
            BooleanFormula::Not(f) => BooleanFormula::not(f.substitute(fix)),
            BooleanFormula::And(fs) => BooleanFormula::and(fs.iter().map(|f| f.substitute(fix))),
            BooleanFormula::Or(fs) => BooleanFormula::or(fs.iter().map(|f| f.substitute(fix))),
        }
    }
}

impl fmt::Display for BooleanFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, fs: &[BooleanFormula], op: &str) -> fmt::Result {
            write!(f, "(")?;
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        }
        match self {
            BooleanFormula::Const(b) => write!(f, "{b}"),
            BooleanFormula::Var(i) => write!(f, "x{i}"),
            BooleanFormula::Not(g) => write!(f, "!{g}"),
            BooleanFormula::And(fs) => join(f, fs, "&"),
            BooleanFormula::Or(fs) => join(f, fs, "|"),
        }
    }
}
