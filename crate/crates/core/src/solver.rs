//! Orientability search: backtracking over the signs of the non-collinear
//! triples with unit propagation of the three-term Grassmann–Plücker
//! conditions.
//!
//! Every constraint comes from one pivot `x` and four elements
//! `a < b < c < d`. Its terms are `[xab][xcd]`, `-[xac][xbd]` and
//! `[xad][xbc]`. Terms containing a collinear triple vanish, so a compiled
//! constraint keeps only its nonzero terms:
//!
//! * two terms: they must have opposite signs (a parity condition on four
//!   signs);
//! * three terms: they must not all be equal.
//!
//! A single surviving term can never be satisfied.

use std::time::Duration;

use web_time::Instant;

use serde::{Deserialize, Serialize};

use crate::chirotope::{for_each_five_subset, is_chirotope, Chirotope, Sign};
use crate::matroid::Rank3Matroid;
use crate::triples;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarOrder {
    /// Variable completing the most partially decided constraints first;
    /// ties go to the lexicographically smallest triple.
    MostConstrained,
    /// Lexicographically smallest unassigned triple.
    Lexicographic,
}

/// Which sign symmetries are factored out before the search starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Only negation: one basis is fixed to `+`.
    Negation,
    /// All reorientations: up to `n` bases with independent supports
    /// (over GF(2)) are fixed to `+`.
    Reorientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum number of branching decisions.
    pub budget: u64,
    pub order: VarOrder,
    pub symmetry: Symmetry,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { budget: 10_000_000, order: VarOrder::MostConstrained, symmetry: Symmetry::Reorientation }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Orientable(Chirotope),
    NonOrientable,
    BudgetExceeded,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Orientable(_) => "Orientable",
            Outcome::NonOrientable => "NonOrientable",
            Outcome::BudgetExceeded => "BudgetExceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientabilityResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug)]
struct Term {
    coef: i8,
    vars: [u32; 2],
}

#[derive(Clone, Debug)]
struct Constraint {
    terms: [Term; 3],
    len: u8,
}

enum Status {
    Ok,
    Conflict,
    Force(u32, i8),
}

struct Solver {
    n_vars: usize,
    constraints: Vec<Constraint>,
    watches: Vec<Vec<u32>>,
    /// For each variable, the other variable of every term it occurs in.
    partners: Vec<Vec<u32>>,
    /// Number of terms whose partner variable is assigned.
    score: Vec<u32>,
    value: Vec<i8>,
    trail: Vec<u32>,
    qhead: usize,
    free: Vec<bool>,
    stats: SearchStats,
    options: SolverOptions,
}

enum Search {
    Found,
    Exhausted,
    Budget,
}

impl Solver {
    /// `None` when some constraint has exactly one nonzero term.
    fn new(m: &Rank3Matroid, options: SolverOptions) -> Option<Self> {
        let n = m.n();
        let n_vars = triples::count(n);
        let free: Vec<bool> = (0..n_vars).map(|i| !m.is_dependent_index(i)).collect();
        let mut constraints = Vec::new();
        let mut trivially_false = false;
        let var_of = |a: usize, b: usize, c: usize| -> (u32, i8) {
            let (t, parity) = triples::sort_with_parity(a, b, c);
            (triples::rank(n, t[0], t[1], t[2]) as u32, parity)
        };
        for_each_five_subset(n, |s| {
            for pivot in 0..5 {
                let x = s[pivot];
                let mut r = [0usize; 4];
                let mut i = 0;
                for (j, &e) in s.iter().enumerate() {
                    if j != pivot {
                        r[i] = e;
                        i += 1;
                    }
                }
                let [a, b, c, d] = r;
                let raw = [
                    (1i8, var_of(x, a, b), var_of(x, c, d)),
                    (-1i8, var_of(x, a, c), var_of(x, b, d)),
                    (1i8, var_of(x, a, d), var_of(x, b, c)),
                ];
                let mut terms = [Term { coef: 0, vars: [0, 0] }; 3];
                let mut len = 0usize;
                for (coef, (u, pu), (v, pv)) in raw {
                    if free[u as usize] && free[v as usize] {
                        terms[len] = Term { coef: coef * pu * pv, vars: [u, v] };
                        len += 1;
                    }
                }
                match len {
                    0 => {}
                    1 => trivially_false = true,
                    _ => constraints.push(Constraint { terms, len: len as u8 }),
                }
            }
        });
        if trivially_false {
            return None;
        }
        let mut watches = vec![Vec::new(); n_vars];
        let mut partners = vec![Vec::new(); n_vars];
        for (ci, c) in constraints.iter().enumerate() {
            for t in &c.terms[..c.len as usize] {
                for &v in &t.vars {
                    watches[v as usize].push(ci as u32);
                }
                partners[t.vars[0] as usize].push(t.vars[1]);
                partners[t.vars[1] as usize].push(t.vars[0]);
            }
        }
        Some(Solver {
            n_vars,
            constraints,
            watches,
            partners,
            score: vec![0; n_vars],
            value: vec![0; n_vars],
            trail: Vec::with_capacity(n_vars),
            qhead: 0,
            free,
            stats: SearchStats::default(),
            options,
        })
    }

    fn assign(&mut self, var: u32, val: i8) {
        debug_assert_eq!(self.value[var as usize], 0);
        self.value[var as usize] = val;
        self.trail.push(var);
        for &p in &self.partners[var as usize] {
            self.score[p as usize] += 1;
        }
    }

    fn undo_to(&mut self, mark: usize) {
        for &v in &self.trail[mark..] {
            self.value[v as usize] = 0;
            for &p in &self.partners[v as usize] {
                self.score[p as usize] -= 1;
            }
        }
        self.trail.truncate(mark);
        self.qhead = self.qhead.min(mark);
    }

    fn check(&self, c: &Constraint) -> Status {
        // per term: Some(sign) if decided, else the unassigned variable when
        // exactly one is open
        let mut known = [0i8; 3];
        let mut open_var = [u32::MAX; 3];
        let mut open_partner = [0i8; 3];
        let len = c.len as usize;
        for (i, t) in c.terms[..len].iter().enumerate() {
            let (x, y) = (self.value[t.vars[0] as usize], self.value[t.vars[1] as usize]);
            match (x, y) {
                (0, 0) => {}
                (0, s) => {
                    open_var[i] = t.vars[0];
                    open_partner[i] = t.coef * s;
                }
                (s, 0) => {
                    open_var[i] = t.vars[1];
                    open_partner[i] = t.coef * s;
                }
                (s, r) => known[i] = t.coef * s * r,
            }
        }
        if len == 2 {
            match (known[0], known[1]) {
                (0, 0) => Status::Ok,
                (a, 0) => {
                    if open_var[1] == u32::MAX {
                        Status::Ok
                    } else {
                        // term 1 must equal -a
                        Status::Force(open_var[1], -a * open_partner[1])
                    }
                }
                (0, b) => {
                    if open_var[0] == u32::MAX {
                        Status::Ok
                    } else {
                        Status::Force(open_var[0], -b * open_partner[0])
                    }
                }
                (a, b) => {
                    if a == -b {
                        Status::Ok
                    } else {
                        Status::Conflict
                    }
                }
            }
        } else {
            let decided = known.iter().filter(|&&s| s != 0).count();
            match decided {
                3 => {
                    if known[0] == known[1] && known[1] == known[2] {
                        Status::Conflict
                    } else {
                        Status::Ok
                    }
                }
                2 => {
                    let (i, j, open) = match (known[0], known[1], known[2]) {
                        (0, _, _) => (1, 2, 0),
                        (_, 0, _) => (0, 2, 1),
                        _ => (0, 1, 2),
                    };
                    if known[i] != known[j] || open_var[open] == u32::MAX {
                        Status::Ok
                    } else {
                        Status::Force(open_var[open], -known[i] * open_partner[open])
                    }
                }
                _ => Status::Ok,
            }
        }
    }

    /// Propagates every pending assignment; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let var = self.trail[self.qhead] as usize;
            self.qhead += 1;
            for wi in 0..self.watches[var].len() {
                let ci = self.watches[var][wi] as usize;
                match self.check(&self.constraints[ci]) {
                    Status::Ok => {}
                    Status::Conflict => return false,
                    Status::Force(v, s) => {
                        self.stats.propagations += 1;
                        self.assign(v, s);
                    }
                }
            }
        }
        true
    }

    fn pick(&self) -> Option<u32> {
        let mut open = (0..self.n_vars).filter(|&v| self.free[v] && self.value[v] == 0);
        match self.options.order {
            VarOrder::Lexicographic => open.next().map(|v| v as u32),
            VarOrder::MostConstrained => {
                let mut best: Option<(u32, u32)> = None;
                for v in open {
                    let score = self.score[v];
                    if best.is_none_or(|(s, _)| score > s) {
                        best = Some((score, v as u32));
                    }
                }
                best.map(|(_, v)| v)
            }
        }
    }

    fn search(&mut self) -> Search {
        if !self.propagate() {
            return Search::Exhausted;
        }
        let Some(var) = self.pick() else {
            return Search::Found;
        };
        if self.stats.nodes >= self.options.budget {
            return Search::Budget;
        }
        self.stats.nodes += 1;
        for val in [1i8, -1] {
            let mark = self.trail.len();
            self.assign(var, val);
            match self.search() {
                Search::Found => return Search::Found,
                Search::Budget => return Search::Budget,
                Search::Exhausted => self.undo_to(mark),
            }
        }
        Search::Exhausted
    }

    fn witness(&self, n: usize) -> Chirotope {
        let signs = self.value.iter().map(|&v| Sign::from_i8(v)).collect();
        Chirotope::new(n, signs).expect("one sign per triple")
    }
}

/// Bases whose signs may be fixed to `+` without losing solutions.
///
/// Reorienting a set `A` multiplies the sign of `t` by `(-1)^|t ∩ A|`, so a
/// family of bases can be normalized at once exactly when their supports are
/// linearly independent over GF(2). Bases are taken greedily in
/// lexicographic order.
fn symmetry_fixes(n: usize, free: &[bool], symmetry: Symmetry) -> Vec<u32> {
    let mut bases = triples::iter(n).enumerate().filter(|&(i, _)| free[i]);
    if symmetry == Symmetry::Negation {
        return bases.next().map(|(i, _)| i as u32).into_iter().collect();
    }
    let words = n.div_ceil(64);
    // reduced rows keyed by their leading bit
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut fixed = Vec::new();
    for (i, t) in bases {
        if rows.len() == n {
            break;
        }
        let mut v = vec![0u64; words];
        for e in t {
            v[e / 64] |= 1 << (e % 64);
        }
        for (lead, r) in &rows {
            if v[lead / 64] >> (lead % 64) & 1 == 1 {
                v.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
            }
        }
        let Some(lead) = (0..n).find(|&e| v[e / 64] >> (e % 64) & 1 == 1) else {
            continue;
        };
        for (_, r) in rows.iter_mut() {
            if r[lead / 64] >> (lead % 64) & 1 == 1 {
                r.iter_mut().zip(&v).for_each(|(a, b)| *a ^= b);
            }
        }
        rows.push((lead, v));
        fixed.push(i as u32);
    }
    fixed
}

/// Searches for a chirotope with zero set exactly the collinear triples of
/// `m`. Sign symmetries are broken according to `options.symmetry` before
/// the search; both choices return the same verdict.
///
/// `Orientable` witnesses are re-checked with [`is_chirotope`];
/// `NonOrientable` is only returned after the search space is exhausted.
pub fn orientability(m: &Rank3Matroid, options: SolverOptions) -> OrientabilityResult {
    let start = Instant::now();
    let n = m.n();
    let finish = |outcome, mut stats: SearchStats| {
        stats.elapsed = start.elapsed();
        OrientabilityResult { outcome, stats }
    };
    let Some(mut solver) = Solver::new(m, options) else {
        return finish(Outcome::NonOrientable, SearchStats::default());
    };
    let fixed = symmetry_fixes(n, &solver.free, options.symmetry);
    if fixed.is_empty() {
        // every triple collinear: only the zero map, which is excluded
        return finish(Outcome::NonOrientable, solver.stats);
    }
    for v in fixed {
        solver.assign(v, 1);
    }
    let outcome = match solver.search() {
        Search::Found => {
            let chi = solver.witness(n);
            let report = is_chirotope(&chi, m).expect("sizes agree");
            assert!(report.valid, "solver produced an invalid witness: {report}");
            Outcome::Orientable(chi)
        }
        Search::Exhausted => Outcome::NonOrientable,
        Search::Budget => Outcome::BudgetExceeded,
    };
    finish(outcome, solver.stats)
}
