use serde::{Deserialize, Serialize};

use super::cnf::valuations;
use super::gadget::build_qk;
use super::{any_subset, binomial, Builder, Cnf, Literal, ReductionError, MAX_ENUMERATION};
use crate::arena::{Player, SpGame, Vertex};
use crate::objectives::Objective;

/// Largest clause count accepted when distributing a disjunction of CNFs.
pub const MAX_DISTRIBUTED_CLAUSES: usize = 1 << 16;

/// Largest Y width for which the parity reduction builds one loop per
/// Y valuation.
pub const MAX_PARITY_Y: usize = 10;

/// Is every model of `phi` a model of `psi` under one of `k` Y valuations?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SscInstance {
    pub phi: Cnf,
    pub psi: Cnf,
    pub k: u64,
}

impl SscInstance {
    pub fn new(phi: Cnf, psi: Cnf, k: u64) -> Result<SscInstance, ReductionError> {
        let inst = SscInstance { phi, psi, k };
        inst.validate()?;
        Ok(inst)
    }

    pub fn num_x(&self) -> usize {
        self.phi.num_x
    }

    pub fn num_y(&self) -> usize {
        self.psi.num_y
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        self.phi.validate()?;
        self.psi.validate()?;
        if self.phi.num_y != 0 {
            return Err(ReductionError::Invalid("phi must not use Y variables".into()));
        }
        if self.psi.num_x != self.phi.num_x {
            return Err(ReductionError::Invalid(format!(
                "phi has {} X variables, psi has {}",
                self.phi.num_x, self.psi.num_x
            )));
        }
        if self.k == 0 {
            return Err(ReductionError::Invalid("budget must be positive".into()));
        }
        Ok(())
    }
}

/// Graph on the valuations of `n` variables, `a` adjacent to `b` when
/// `theta(a, b)` or `theta(b, a)` holds; asks for `k` vertices whose
/// neighbourhoods cover every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdsInstance {
    pub theta: Cnf,
    pub k: u64,
}

impl SdsInstance {
    pub fn new(theta: Cnf, k: u64) -> Result<SdsInstance, ReductionError> {
        let inst = SdsInstance { theta, k };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        self.theta.validate()?;
        if self.theta.num_x != self.theta.num_y {
            return Err(ReductionError::Invalid("theta needs as many X as Y variables".into()));
        }
        if self.k == 0 {
            return Err(ReductionError::Invalid("budget must be positive".into()));
        }
        Ok(())
    }
}

type Bits = Vec<u64>;

fn bitset(len: usize, members: impl Iterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; len.div_ceil(64)];
    for i in members {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

/// Some `k` of the sets cover `0..len`. Larger budgets than sets are capped.
fn k_cover(len: usize, sets: &[Bits], k: u64) -> Result<bool, ReductionError> {
    if len == 0 {
        return Ok(true);
    }
    let k = k.min(sets.len() as u64);
    if binomial(sets.len() as u64, k) > MAX_ENUMERATION {
        return Err(ReductionError::TooLarge(format!("{} choose {k}", sets.len())));
    }
    let full = bitset(len, 0..len);
    Ok(any_subset(sets.len(), k as usize, |pick| {
        let mut acc = vec![0u64; full.len()];
        for &i in pick {
            for (a, s) in acc.iter_mut().zip(&sets[i]) {
                *a |= s;
            }
        }
        acc == full
    }))
}

/// Decides an instance by trying every set of `k` Y valuations. Repeated
/// valuations never help, so distinct ones suffice.
pub fn solve_ssc_bruteforce(inst: &SscInstance) -> Result<bool, ReductionError> {
    inst.validate()?;
    let models: Vec<Vec<bool>> = valuations(inst.num_x())?.filter(|x| inst.phi.eval(x, &[])).collect();
    let sets: Vec<Bits> = valuations(inst.num_y())?
        .map(|y| bitset(models.len(), (0..models.len()).filter(|&i| inst.psi.eval(&models[i], &y))))
        .collect();
    k_cover(models.len(), &sets, inst.k)
}

/// Decides an instance on the explicit graph.
pub fn solve_sds_bruteforce(inst: &SdsInstance) -> Result<bool, ReductionError> {
    inst.validate()?;
    let verts: Vec<Vec<bool>> = valuations(inst.theta.num_x)?.collect();
    let adjacent = |a: &[bool], b: &[bool]| inst.theta.eval(a, b) || inst.theta.eval(b, a);
    let sets: Vec<Bits> = verts
        .iter()
        .map(|a| bitset(verts.len(), (0..verts.len()).filter(|&j| adjacent(a, &verts[j]))))
        .collect();
    k_cover(verts.len(), &sets, inst.k)
}

/// Empty `phi` over X, `psi` a CNF of `theta(X, Y) or theta(Y, X)` built by
/// distributing clause pairs, same budget. Repeated literals and clauses
/// are dropped, and so are tautological clauses.
pub fn sds_to_ssc(inst: &SdsInstance) -> Result<SscInstance, ReductionError> {
    inst.validate()?;
    let n = inst.theta.num_x as Literal;
    let swap = |l: Literal| {
        let v = l.abs();
        let w = if v <= n { v + n } else { v - n };
        w * l.signum()
    };
    let count = inst.theta.clauses.len() * inst.theta.clauses.len();
    if count > MAX_DISTRIBUTED_CLAUSES {
        return Err(ReductionError::TooLarge(format!("{count} distributed clauses")));
    }
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for a in &inst.theta.clauses {
        for b in &inst.theta.clauses {
            let mut c: Vec<Literal> = Vec::new();
            for l in a.iter().copied().chain(b.iter().map(|&l| swap(l))) {
                if !c.contains(&l) {
                    c.push(l);
                }
            }
            if c.iter().any(|&l| c.contains(&-l)) {
                continue;
            }
            let mut key = c.clone();
            key.sort_unstable();
            if clauses.iter().any(|d| {
                let mut e = d.clone();
                e.sort_unstable();
                e == key
            }) {
                continue;
            }
            clauses.push(c);
        }
    }
    let nx = inst.theta.num_x;
    SscInstance::new(Cnf::new(nx, 0, Vec::new())?, Cnf::new(nx, nx, clauses)?, inst.k)
}

fn literal_name(l: Literal, num_x: usize) -> String {
    let v = l.unsigned_abs() as usize;
    let sign = if l < 0 { "!" } else { "" };
    if v <= num_x {
        format!("{sign}x{v}")
    } else {
        format!("{sign}y{}", v - num_x)
    }
}

/// A chain of binary choices over `vars`: each choice vertex leads to the
/// positive and the negative literal vertex, both of which lead on to the
/// next choice. Returns the entry, the literal vertices and the last two
/// literal vertices, which are left without successors.
struct Chain {
    entry: Vertex,
    literals: Vec<(Literal, Vertex)>,
    exits: Vec<Vertex>,
}

fn chain(b: &mut Builder, prefix: &str, vars: &[usize], num_x: usize, owner: Player, entry: Option<Vertex>) -> Chain {
    let mut literals = Vec::new();
    let mut first = entry;
    let mut pending: Vec<Vertex> = Vec::new();
    for (i, &v) in vars.iter().enumerate() {
        let choice = match (i, entry) {
            (0, Some(e)) => e,
            _ => b.add(format!("{prefix}c{}", literal_name(v as Literal, num_x)), owner),
        };
        first.get_or_insert(choice);
        for &p in &pending {
            b.edge(p, choice);
        }
        pending.clear();
        for l in [v as Literal, -(v as Literal)] {
            let u = b.add(format!("{prefix}{}", literal_name(l, num_x)), owner);
            b.edge(choice, u);
            literals.push((l, u));
            pending.push(u);
        }
    }
    Chain {
        entry: first.expect("at least one variable"),
        literals,
        exits: pending,
    }
}

/// Reachability game that Player 0 can solve exactly when the instance is
/// positive.
///
/// Player 1 may show an X valuation (lost for Player 0), show an X valuation
/// after naming one clause of `phi` (won), or walk one of `k` paths after
/// which Player 0 fixes Y and Player 1 fixes X (won). Objectives: the
/// branch marker, then `x1, !x1, .., xm, !xm`, then one per clause of `phi`,
/// then one per clause of `psi`. Player 0 wins by reaching the branch
/// marker. Without clauses in `phi` the clause-naming branch is left out.
pub fn ssc_to_reach_sps(inst: &SscInstance) -> Result<SpGame, ReductionError> {
    inst.validate()?;
    let (m, ny) = (inst.num_x(), inst.num_y());
    if m == 0 {
        return Err(ReductionError::Invalid("the reductions need at least one X variable".into()));
    }
    let xs: Vec<usize> = (1..=m).collect();
    let ys: Vec<usize> = (m + 1..=m + ny).collect();
    let p = inst.phi.clauses.len();
    let mut b = Builder::new();
    let v0 = b.add("v0", Player::One);

    // shows a valuation and stops
    let v1 = b.add("v1", Player::One);
    b.edge(v0, v1);
    let g1 = chain(&mut b, "g1.", &xs, m, Player::One, Some(v1));
    for &e in &g1.exits {
        b.edge(e, e);
    }

    // names a clause that will count as falsified, then shows a valuation
    let mut named = Vec::new();
    let mut v2 = None;
    if p > 0 {
        let hub = b.add("v2", Player::One);
        b.edge(v0, hub);
        named = (1..=p).map(|j| b.add(format!("i{j}"), Player::One)).collect();
        let g2 = chain(&mut b, "g2.", &xs, m, Player::One, None);
        for &i in &named {
            b.edge(hub, i);
            b.edge(i, g2.entry);
        }
        for &e in &g2.exits {
            b.edge(e, e);
        }
        v2 = Some((hub, g2));
    }

    // k histories, then Player 0 picks Y and Player 1 picks X
    let qk = build_qk(inst.k)?;
    let (alpha, beta) = qk.embed(&mut b, "q.");
    b.edge(v0, alpha);
    let v3 = b.add("v3", Player::Zero);
    b.edge(beta, v3);
    let gy = (!ys.is_empty()).then(|| chain(&mut b, "g3.", &ys, m, Player::Zero, Some(v3)));
    let gx = chain(&mut b, "g3.", &xs, m, Player::One, None);
    match &gy {
        Some(gy) => {
            for &e in &gy.exits {
                b.edge(e, gx.entry);
            }
        }
        None => b.edge(v3, gx.entry),
    }
    for &e in &gx.exits {
        b.edge(e, e);
    }

    let n = b.len();
    let marker: Vec<Vertex> = v2.iter().map(|(h, _)| *h).chain([v3]).collect();
    let g3_literals: Vec<(Literal, Vertex)> = gy.iter().flat_map(|c| c.literals.clone()).chain(gx.literals.clone()).collect();
    let mut followers = vec![Objective::reach(n, &marker)];
    for &v in &xs {
        for l in [v as Literal, -(v as Literal)] {
            let targets: Vec<Vertex> = g1
                .literals
                .iter()
                .chain(v2.iter().flat_map(|(_, g2)| g2.literals.iter()))
                .chain(gx.literals.iter())
                .filter(|&&(x, _)| x == l)
                .map(|&(_, u)| u)
                .collect();
            followers.push(Objective::reach(n, &targets));
        }
    }
    for (j, clause) in inst.phi.clauses.iter().enumerate() {
        let mut targets: Vec<Vertex> = g1
            .literals
            .iter()
            .chain(gx.literals.iter())
            .filter(|&&(l, _)| clause.contains(&l))
            .map(|&(_, u)| u)
            .collect();
        targets.extend(named.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &u)| u));
        followers.push(Objective::reach(n, &targets));
    }
    for clause in &inst.psi.clauses {
        let mut targets: Vec<Vertex> = g3_literals.iter().filter(|&&(l, _)| clause.contains(&l)).map(|&(_, u)| u).collect();
        targets.push(v1);
        targets.extend(v2.iter().map(|(h, _)| *h));
        followers.push(Objective::reach(n, &targets));
    }
    let arena = b.arena(v0)?;
    Ok(SpGame::new(arena, Objective::reach(n, &marker), followers)?)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Transient,
    /// the valuation loop that Player 0 loses
    Shown,
    /// the clause- or variable-naming loop
    Named,
    /// the committed loops after the `k` histories
    Committed,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Plain,
    Literal(Literal),
    Hub,
    NamesClause(usize),
    NamesVariable(usize),
    /// Player 0's pick of occurrence `.1` in clause `.0` of `psi`
    Picks(usize, usize),
}

/// Parity game that Player 0 can solve exactly when the instance is
/// positive.
///
/// Player 1 either repeats an X valuation after which Player 0 points at a
/// literal of every clause of `psi` (lost for Player 0), or repeats an X
/// valuation after naming a clause of `phi` or a variable (won), or walks
/// one of `k` paths after which Player 0 commits to a Y valuation by
/// entering that valuation's loop, where Player 1 repeats an X valuation
/// (won). Objectives: the branch marker, `x1, !x1, .., xm, !xm`, then one
/// per literal occurrence of each clause of `phi`, then of `psi`. All
/// priorities are in `1..=3`.
pub fn ssc_to_parity_sps(inst: &SscInstance) -> Result<SpGame, ReductionError> {
    inst.validate()?;
    let (m, ny) = (inst.num_x(), inst.num_y());
    if m == 0 {
        return Err(ReductionError::Invalid("the reductions need at least one X variable".into()));
    }
    if ny > MAX_PARITY_Y {
        return Err(ReductionError::TooLarge(format!("{ny} Y variables")));
    }
    let xs: Vec<usize> = (1..=m).collect();
    let mut b = Builder::new();
    let mut tags: Vec<(Region, Role)> = Vec::new();
    let tag = |b: &Builder, tags: &mut Vec<(Region, Role)>, region: Region, role: Role| {
        tags.resize(b.len(), (region, role));
    };
    let v0 = b.add("v0", Player::One);
    tag(&b, &mut tags, Region::Transient, Role::Plain);

    let v1 = b.add("v1", Player::One);
    b.edge(v0, v1);
    tag(&b, &mut tags, Region::Shown, Role::Plain);
    let g1 = chain(&mut b, "g1.", &xs, m, Player::One, Some(v1));
    tag(&b, &mut tags, Region::Shown, Role::Plain);
    for &(l, u) in &g1.literals {
        tags[u] = (Region::Shown, Role::Literal(l));
    }
    let mut pending = g1.exits.clone();
    for (j, clause) in inst.psi.clauses.iter().enumerate() {
        let pick = b.add(format!("d{}", j + 1), Player::Zero);
        tag(&b, &mut tags, Region::Shown, Role::Plain);
        for &p in &pending {
            b.edge(p, pick);
        }
        pending.clear();
        for (o, &l) in clause.iter().enumerate() {
            let u = b.add(format!("d{}.{}.{}", j + 1, o + 1, literal_name(l, m)), Player::Zero);
            tag(&b, &mut tags, Region::Shown, Role::Picks(j, o));
            b.edge(pick, u);
            pending.push(u);
        }
    }
    for &p in &pending {
        b.edge(p, v1);
    }

    let hub = b.add("v2", Player::One);
    b.edge(v0, hub);
    tag(&b, &mut tags, Region::Named, Role::Hub);
    let mut branches = Vec::new();
    for j in 0..inst.phi.clauses.len() {
        branches.push(b.add(format!("i{}", j + 1), Player::One));
        tag(&b, &mut tags, Region::Named, Role::NamesClause(j));
    }
    for &v in &xs {
        branches.push(b.add(format!("u{v}"), Player::One));
        tag(&b, &mut tags, Region::Named, Role::NamesVariable(v));
    }
    let g2 = chain(&mut b, "g2.", &xs, m, Player::One, None);
    tag(&b, &mut tags, Region::Named, Role::Plain);
    for &(l, u) in &g2.literals {
        tags[u] = (Region::Named, Role::Literal(l));
    }
    for &u in &branches {
        b.edge(hub, u);
        b.edge(u, g2.entry);
    }
    for &e in &g2.exits {
        b.edge(e, hub);
    }

    let qk = build_qk(inst.k)?;
    let (alpha, beta) = qk.embed(&mut b, "q.");
    b.edge(v0, alpha);
    let v3 = b.add("v3", Player::Zero);
    b.edge(beta, v3);
    tag(&b, &mut tags, Region::Transient, Role::Plain);
    for y in valuations(ny)? {
        let label: String = y.iter().map(|&v| if v { '1' } else { '0' }).collect();
        let prefix = format!("g3.{label}.");
        let gx = chain(&mut b, &prefix, &xs, m, Player::One, None);
        tag(&b, &mut tags, Region::Committed, Role::Plain);
        for &(l, u) in &gx.literals {
            tags[u] = (Region::Committed, Role::Literal(l));
        }
        b.edge(v3, gx.entry);
        let mut pending = gx.exits.clone();
        for (i, &value) in y.iter().enumerate() {
            let l = (m + i + 1) as Literal * if value { 1 } else { -1 };
            let u = b.add(format!("{prefix}{}", literal_name(l, m)), Player::One);
            tag(&b, &mut tags, Region::Committed, Role::Literal(l));
            for &p in &pending {
                b.edge(p, u);
            }
            pending = vec![u];
        }
        for &p in &pending {
            b.edge(p, gx.entry);
        }
    }

    let n = b.len();
    let marker = |region: Region, _: Role| match region {
        Region::Shown => 1,
        _ => 2,
    };
    let literal = |target: Literal| {
        move |role: Role| match role {
            Role::Literal(l) if l == target => Some(2),
            Role::Literal(l) if l == -target => Some(1),
            _ => None,
        }
    };
    let mut maps: Vec<Vec<u32>> = Vec::new();
    let build = |f: &dyn Fn(Region, Role) -> u32| -> Vec<u32> { tags.iter().map(|&(r, o)| f(r, o)).collect() };
    maps.push(build(&marker));
    for &v in &xs {
        for target in [v as Literal, -(v as Literal)] {
            maps.push(build(&|region, role| match (region, role) {
                (Region::Named, Role::NamesVariable(u)) if u == v => 1,
                _ => literal(target)(role).unwrap_or(3),
            }));
        }
    }
    for (j, clause) in inst.phi.clauses.iter().enumerate() {
        for &target in clause {
            maps.push(build(&|region, role| match (region, role) {
                (Region::Shown | Region::Committed, _) => literal(target)(role).unwrap_or(3),
                (Region::Named, Role::NamesClause(i)) => {
                    if i == j {
                        1
                    } else {
                        2
                    }
                }
                (Region::Named, Role::NamesVariable(_)) => 2,
                _ => 3,
            }));
        }
    }
    for (j, clause) in inst.psi.clauses.iter().enumerate() {
        for (o, &target) in clause.iter().enumerate() {
            maps.push(build(&|region, role| match (region, role) {
                (Region::Shown, Role::Picks(i, p)) if i == j && p == o => 2,
                (Region::Named, Role::Hub) => 2,
                (Region::Committed, _) => literal(target)(role).unwrap_or(3),
                _ => 3,
            }));
        }
    }
    debug_assert!(maps.iter().all(|c| c.len() == n));
    let leader = Objective::Parity(maps[0].clone());
    let arena = b.arena(v0)?;
    Ok(SpGame::new(arena, leader, maps.into_iter().map(Objective::Parity).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SscInstance {
        let phi = Cnf::new(3, 0, vec![vec![1, -2], vec![2, 3]]).unwrap();
        let psi = Cnf::new(3, 2, vec![vec![4, 5], vec![1, 5], vec![2, 3, 4]]).unwrap();
        SscInstance::new(phi, psi, 1).unwrap()
    }

    #[test]
    fn example_is_covered_by_one_valuation() {
        assert!(solve_ssc_bruteforce(&example()).unwrap());
    }

    #[test]
    fn objective_counts() {
        let inst = example();
        assert_eq!(ssc_to_reach_sps(&inst).unwrap().t(), 1 + 6 + 2 + 3);
        assert_eq!(ssc_to_parity_sps(&inst).unwrap().t(), 1 + 6 + 4 + 7);
    }

    #[test]
    fn single_clause_distribution() {
        let theta = Cnf::new(1, 1, vec![vec![1, 2]]).unwrap();
        let ssc = sds_to_ssc(&SdsInstance::new(theta, 1).unwrap()).unwrap();
        assert_eq!(ssc.psi.clauses, vec![vec![1, 2]]);
        assert!(ssc.phi.clauses.is_empty());
    }
}
