use serde::{Deserialize, Serialize};

use super::{ReductionError, MAX_ENUMERATION};

/// Signed 1-based variable index: X variables come first, then Y.
pub type Literal = i32;

/// Truth values of a block of variables, in index order.
pub type Valuation = Vec<bool>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_x: usize,
    pub num_y: usize,
    pub clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn new(num_x: usize, num_y: usize, clauses: Vec<Vec<Literal>>) -> Result<Cnf, ReductionError> {
        let f = Cnf { num_x, num_y, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn vars(&self) -> usize {
        self.num_x + self.num_y
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        for (i, c) in self.clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(ReductionError::EmptyClause(i));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > self.vars() {
                    return Err(ReductionError::LiteralOutOfRange {
                        literal: l,
                        vars: self.vars(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Truth of a literal under X and Y values.
    pub fn literal_value(&self, l: Literal, x: &[bool], y: &[bool]) -> bool {
        let v = l.unsigned_abs() as usize - 1;
        let value = if v < self.num_x { x[v] } else { y[v - self.num_x] };
        value == (l > 0)
    }

    pub fn eval(&self, x: &[bool], y: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| self.literal_value(l, x, y)))
    }
}

/// All X valuations satisfying `f`, with Y fixed to `fixed_y` when `f` has
/// Y variables. Valuations come in increasing binary order, x1 most
/// significant.
pub fn cnf_models(f: &Cnf, fixed_y: Option<&[bool]>) -> Result<Vec<Valuation>, ReductionError> {
    f.validate()?;
    let y: &[bool] = match fixed_y {
        Some(y) if y.len() == f.num_y => y,
        None if f.num_y == 0 => &[],
        other => {
            return Err(ReductionError::WidthMismatch {
                expected: f.num_y,
                found: other.map_or(0, |y| y.len()),
            })
        }
    };
    Ok(valuations(f.num_x)?.filter(|x| f.eval(x, y)).collect())
}

/// Every valuation of `n` variables in increasing binary order.
pub(crate) fn valuations(n: usize) -> Result<impl Iterator<Item = Valuation>, ReductionError> {
    if n >= 64 || 1u64 << n > MAX_ENUMERATION {
        return Err(ReductionError::TooLarge(format!("2^{n} valuations")));
    }
    Ok((0..1u64 << n).map(move |bits| (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_formula_has_every_model() {
        let f = Cnf::new(2, 0, vec![]).unwrap();
        assert_eq!(cnf_models(&f, None).unwrap().len(), 4);
    }

    #[test]
    fn width_and_range_errors() {
        assert!(Cnf::new(1, 0, vec![vec![2]]).is_err());
        assert!(Cnf::new(1, 0, vec![vec![]]).is_err());
        let f = Cnf::new(1, 1, vec![vec![1, 2]]).unwrap();
        assert!(cnf_models(&f, None).is_err());
        assert_eq!(cnf_models(&f, Some(&[false])).unwrap(), vec![vec![true]]);
    }
}
