//! Line-based instance formats.
//!
//! Set cover:
//!
//! ```text
//! c comment
//! elements 3
//! budget 2
//! set 1 2
//! set 3
//! ```
//!
//! CNF instances use DIMACS clauses (signed variables, each clause ended by
//! `0`) after an extended problem line. `p ssc NX NY K NPHI NPSI` is followed
//! by the clauses of phi and then those of psi; variables `1..=NX` are X and
//! `NX+1..=NX+NY` are Y. `p sds N K NCLAUSES` is followed by the clauses of
//! theta over X = `1..=N` and Y = `N+1..=2N`.

use super::IoError;
use crate::reductions::{Cnf, Literal, ScInstance, SdsInstance, SscInstance};

/// A parsed CNF instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CnfInstance {
    Ssc(SscInstance),
    Sds(SdsInstance),
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn syntax(tok: &Token, message: impl Into<String>) -> IoError {
    IoError::Syntax {
        line: tok.line,
        column: tok.column,
        message: message.into(),
    }
}

/// Non-comment lines split into tokens with 1-based positions.
fn lines(text: &str) -> Vec<Vec<Token<'_>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim_start();
            !l.is_empty() && !l.starts_with('c') && !l.starts_with('%')
        })
        .map(|(i, l)| {
            let mut out = Vec::new();
            let mut start = None;
            for (j, ch) in l.char_indices().chain(std::iter::once((l.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (true, Some(s)) => {
                        out.push(Token {
                            text: &l[s..j],
                            line: i + 1,
                            column: s + 1,
                        });
                        start = None;
                    }
                    (false, None) => start = Some(j),
                    _ => {}
                }
            }
            out
        })
        .collect()
}

fn number<T: std::str::FromStr>(tok: &Token) -> Result<T, IoError> {
    tok.text.parse().map_err(|_| syntax(tok, format!("expected a number, found {:?}", tok.text)))
}

pub fn parse_sc(text: &str) -> Result<ScInstance, IoError> {
    let mut n = None;
    let mut k = None;
    let mut subsets = Vec::new();
    for line in lines(text) {
        let head = &line[0];
        match head.text {
            "elements" | "budget" => {
                if line.len() != 2 {
                    return Err(syntax(head, format!("{} takes one number", head.text)));
                }
                let value: usize = number(&line[1])?;
                let slot = if head.text == "elements" { &mut n } else { &mut k };
                if slot.replace(value).is_some() {
                    return Err(syntax(head, format!("{} given twice", head.text)));
                }
            }
            "set" => subsets.push(line[1..].iter().map(number).collect::<Result<Vec<usize>, _>>()?),
            other => return Err(syntax(head, format!("unknown directive {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| IoError::Semantic("missing `elements` line".into()))?;
    let k = k.ok_or_else(|| IoError::Semantic("missing `budget` line".into()))?;
    Ok(ScInstance::new(n, subsets, k)?)
}

pub fn serialize_sc(inst: &ScInstance) -> String {
    let mut out = format!("elements {}\nbudget {}\n", inst.n, inst.k);
    for s in &inst.subsets {
        out.push_str("set");
        for e in s {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_cnf_instance(text: &str) -> Result<CnfInstance, IoError> {
    let all = lines(text);
    let Some((header, body)) = all.split_first() else {
        return Err(IoError::Semantic("empty instance".into()));
    };
    if header[0].text != "p" || header.len() < 2 {
        return Err(syntax(&header[0], "expected a `p ssc` or `p sds` problem line"));
    }
    let fields = |count: usize| -> Result<Vec<u64>, IoError> {
        if header.len() != count + 2 {
            return Err(syntax(&header[1], format!("`p {}` takes {count} numbers", header[1].text)));
        }
        header[2..].iter().map(number).collect()
    };
    let mut tokens = body.iter().flatten();
    let mut clauses = |count: u64| -> Result<Vec<Vec<Literal>>, IoError> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        while (out.len() as u64) < count {
            let Some(tok) = tokens.next() else {
                return Err(IoError::Semantic(format!("expected {count} clauses, found {}", out.len())));
            };
            match number::<Literal>(tok)? {
                0 => out.push(std::mem::take(&mut current)),
                l => current.push(l),
            }
        }
        Ok(out)
    };
    let inst = match header[1].text {
        "ssc" => {
            let f = fields(5)?;
            let (nx, ny) = (f[0] as usize, f[1] as usize);
            let phi = Cnf::new(nx, 0, clauses(f[3])?)?;
            let psi = Cnf::new(nx, ny, clauses(f[4])?)?;
            CnfInstance::Ssc(SscInstance::new(phi, psi, f[2])?)
        }
        "sds" => {
            let f = fields(3)?;
            let n = f[0] as usize;
            CnfInstance::Sds(SdsInstance::new(Cnf::new(n, n, clauses(f[2])?)?, f[1])?)
        }
        other => return Err(syntax(&header[1], format!("unknown problem {other:?}"))),
    };
    if let Some(tok) = tokens.next() {
        return Err(syntax(tok, "text after the last clause"));
    }
    Ok(inst)
}

fn write_clauses(out: &mut String, clauses: &[Vec<Literal>]) {
    for c in clauses {
        for l in c {
            out.push_str(&format!("{l} "));
        }
        out.push_str("0\n");
    }
}

pub fn serialize_ssc(inst: &SscInstance) -> String {
    let mut out = format!(
        "p ssc {} {} {} {} {}\n",
        inst.num_x(),
        inst.num_y(),
        inst.k,
        inst.phi.clauses.len(),
        inst.psi.clauses.len()
    );
    write_clauses(&mut out, &inst.phi.clauses);
    write_clauses(&mut out, &inst.psi.clauses);
    out
}

pub fn serialize_sds(inst: &SdsInstance) -> String {
    let mut out = format!("p sds {} {} {}\n", inst.theta.num_x, inst.k, inst.theta.clauses.len());
    write_clauses(&mut out, &inst.theta.clauses);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sc_round_trip() {
        let inst = parse_sc("c tiny\nelements 3\nbudget 2\nset 1 2\nset 3\nset\n").unwrap();
        assert_eq!(inst.subsets, vec![vec![1, 2], vec![3], vec![]]);
        assert_eq!(parse_sc(&serialize_sc(&inst)).unwrap(), inst);
    }

    #[test]
    fn sc_errors() {
        assert!(matches!(parse_sc("elements 2\nbudget x\n"), Err(IoError::Syntax { line: 2, column: 8, .. })));
        assert!(matches!(parse_sc("elements 2\nbudget 1\nset 3\n"), Err(IoError::Instance(_))));
    }

    #[test]
    fn cnf_round_trip() {
        let text = "c example\np ssc 2 1 1 1 2\n1 2 0\n-1 3 0\n2 0\n";
        let CnfInstance::Ssc(inst) = parse_cnf_instance(text).unwrap() else {
            panic!("not ssc")
        };
        assert_eq!(inst.psi.clauses, vec![vec![-1, 3], vec![2]]);
        assert_eq!(parse_cnf_instance(&serialize_ssc(&inst)).unwrap(), CnfInstance::Ssc(inst));
        let sds = parse_cnf_instance("p sds 1 1 1\n1 2 0\n").unwrap();
        let CnfInstance::Sds(s) = &sds else { panic!("not sds") };
        assert_eq!(parse_cnf_instance(&serialize_sds(s)).unwrap(), sds);
        assert!(parse_cnf_instance("p ssc 1 0 1 1 0\n1 0 2 0\n").is_err());
    }
}
