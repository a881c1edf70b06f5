//! Isomorph-free generation of all n_k configurations.
//!
//! A configuration is written as an incidence matrix with one row per line and
//! one column per point, rows read as bit strings with column 0 most
//! significant. Every isomorphism class has exactly one matrix that is
//! lexicographically largest (comparing rows top to bottom) over all row and
//! column permutations, and every prefix of rows of that matrix is again the
//! largest arrangement of those rows. The generator therefore adds one line
//! at a time and keeps a partial matrix only if it is maximal; no two
//! accepted matrices are isomorphic and every class is reached.
//!
//! [`enumerate_naive`] is an independent and much slower oracle for small
//! parameters.

use std::collections::{BTreeMap, HashSet};
use std::time::Duration;

use web_time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::eulergate::{feasibility_gate, Verdict};
use crate::incidence::{generalize, Configuration};
use crate::solver::{orientability, OrientabilityResult, Outcome, SolverOptions};

/// Largest `n * k` enumerated without an explicit override.
pub const DEFAULT_CEILING: usize = 68;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Worker threads; `None` uses the global rayon pool. Ignored without
    /// the `parallel` feature.
    pub workers: Option<usize>,
    /// Number of lines placed before the search is split into subtrees.
    pub split_depth: Option<usize>,
    /// Allows `n * k` above [`DEFAULT_CEILING`].
    pub allow_large: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub configuration: Configuration,
    pub code: CanonicalCode,
    pub orientability: Option<OrientabilityResult>,
}

#[inline]
fn bit(col: usize) -> u64 {
    1u64 << (63 - col)
}

/// Mask of positions `offset..offset + len`.
#[inline]
fn span(offset: usize, len: usize) -> u64 {
    if len == 0 {
        0
    } else {
        (u64::MAX >> offset) & !(u64::MAX.checked_shr((offset + len) as u32).unwrap_or(0))
    }
}

#[derive(Clone, Debug)]
struct Partial {
    n: usize,
    k: usize,
    rows: Vec<u64>,
    degree: Vec<u8>,
    /// `joined[p]`: points already on a common line with `p`.
    joined: Vec<u64>,
}

impl Partial {
    fn new(n: usize, k: usize) -> Self {
        Partial { n, k, rows: Vec::with_capacity(n), degree: vec![0; n], joined: vec![0; n] }
    }

    fn push(&mut self, row: u64) {
        self.rows.push(row);
        let mut r = row;
        while r != 0 {
            let p = r.leading_zeros() as usize;
            r &= !bit(p);
            self.degree[p] += 1;
            self.joined[p] |= row & !bit(p);
        }
    }

    fn pop(&mut self) {
        let row = self.rows.pop().expect("non-empty");
        let mut r = row;
        while r != 0 {
            let p = r.leading_zeros() as usize;
            r &= !bit(p);
            self.degree[p] -= 1;
            self.joined[p] &= !(row & !bit(p));
        }
    }

    fn is_complete(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Whether every deficient point still has room for its missing lines.
    fn completable(&self) -> bool {
        let all = span(0, self.n);
        for p in 0..self.n {
            let missing = self.k - self.degree[p] as usize;
            if missing == 0 {
                continue;
            }
            // candidates: deficient points not yet joined to p
            let mut cand = all & !self.joined[p] & !bit(p);
            let mut count = 0usize;
            while cand != 0 {
                let q = cand.leading_zeros() as usize;
                cand &= !bit(q);
                if (self.degree[q] as usize) < self.k {
                    count += 1;
                }
            }
            if count < missing * (self.k - 1) {
                return false;
            }
        }
        true
    }

    /// Candidate next rows: they contain the smallest deficient point, keep
    /// the columns sorted, and are smaller than the previous row.
    fn candidates(&self, out: &mut Vec<u64>) {
        out.clear();
        let Some(lead) = (0..self.n).find(|&p| (self.degree[p] as usize) < self.k) else {
            return;
        };
        // same_as_next[c]: columns c and c + 1 agree on every placed row
        let mut same_as_next = vec![false; self.n];
        for c in 0..self.n.saturating_sub(1) {
            same_as_next[c] = self.rows.iter().all(|&r| (r & bit(c) == 0) == (r & bit(c + 1) == 0));
        }
        if lead > 0 && same_as_next[lead - 1] {
            return;
        }
        let limit = self.rows.last().copied().unwrap_or(u64::MAX);
        let mut chosen = vec![lead];
        self.extend_row(lead, bit(lead), self.joined[lead], &same_as_next, limit, &mut chosen, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_row(
        &self,
        last: usize,
        row: u64,
        blocked: u64,
        same_as_next: &[bool],
        limit: u64,
        chosen: &mut Vec<usize>,
        out: &mut Vec<u64>,
    ) {
        if chosen.len() == self.k {
            if row < limit {
                out.push(row);
            }
            return;
        }
        let remaining = self.k - chosen.len();
        for c in last + 1..=self.n - remaining {
            // skipping column c - 1 while taking c would unsort equal columns
            if c - 1 > last && same_as_next[c - 1] {
                continue;
            }
            if blocked & bit(c) != 0 || self.degree[c] as usize >= self.k {
                continue;
            }
            chosen.push(c);
            self.extend_row(c, row | bit(c), blocked | self.joined[c], same_as_next, limit, chosen, out);
            chosen.pop();
        }
    }

    /// Whether no arrangement of the placed rows is lexicographically larger.
    fn is_maximal(&self) -> bool {
        let m = self.rows.len();
        if m == 0 {
            return true;
        }
        let cells = vec![(0usize, self.n, span(0, self.n))];
        !self.beats(0, u64::MAX >> (64 - m), &cells)
    }

    /// Searches for a row arrangement that exceeds `rows` at some depth.
    /// `cells` are (position offset, size, original-column mask) in position
    /// order.
    fn beats(&self, depth: usize, unused: u64, cells: &[(usize, usize, u64)]) -> bool {
        let m = self.rows.len();
        if depth == m {
            return false;
        }
        let target = self.rows[depth];
        let mut rest = unused;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let row = self.rows[i];
            let mut order = std::cmp::Ordering::Equal;
            for &(off, size, mask) in cells {
                let have = (row & mask).count_ones();
                let want = (target & span(off, size)).count_ones();
                if have != want {
                    order = have.cmp(&want);
                    break;
                }
            }
            match order {
                std::cmp::Ordering::Greater => return true,
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => {
                    let mut next = Vec::with_capacity(cells.len() + self.k);
                    for &(off, size, mask) in cells {
                        let ones = row & mask;
                        let c = ones.count_ones() as usize;
                        if c > 0 {
                            next.push((off, c, ones));
                        }
                        if c < size {
                            next.push((off + c, size - c, mask & !row));
                        }
                    }
                    if self.beats(depth + 1, unused & !(1u64 << i), &next) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn to_configuration(&self) -> Configuration {
        let lines = self.rows.iter().map(|&r| (0..self.n).filter(|&p| r & bit(p) != 0).collect()).collect();
        Configuration::from_valid_parts(self.n, self.k, lines)
    }

    /// Depth-first search below this node; pushes complete configurations.
    fn search(&mut self, stats: &mut u64, out: &mut Vec<Configuration>) {
        *stats += 1;
        if self.is_complete() {
            out.push(self.to_configuration());
            return;
        }
        let mut cands = Vec::new();
        self.candidates(&mut cands);
        for row in cands {
            self.push(row);
            if self.completable() && self.is_maximal() {
                self.search(stats, out);
            }
            self.pop();
        }
    }

    /// All maximal partial matrices with `depth` rows below this node.
    fn frontier(&mut self, depth: usize, out: &mut Vec<Partial>) {
        if self.rows.len() == depth || self.is_complete() {
            out.push(self.clone());
            return;
        }
        let mut cands = Vec::new();
        self.candidates(&mut cands);
        for row in cands {
            self.push(row);
            if self.completable() && self.is_maximal() {
                self.frontier(depth, out);
            }
            self.pop();
        }
    }
}

fn check_parameters(n: usize, k: usize, allow_large: bool) -> Result<()> {
    if k < 3 {
        return Err(Error::Parameters(format!("k must be at least 3, got {k}")));
    }
    if n > 64 {
        return Err(Error::ResourceGuard(format!("n = {n} exceeds the 64-point limit")));
    }
    if n * k > DEFAULT_CEILING && !allow_large {
        return Err(Error::ResourceGuard(format!(
            "n*k = {} exceeds the ceiling {DEFAULT_CEILING}; pass the override to run anyway",
            n * k
        )));
    }
    Ok(())
}

/// Raw output of the generator: one maximal incidence matrix per class, in
/// generation order.
fn generate(n: usize, k: usize, options: &EnumerateOptions) -> Vec<Configuration> {
    if n < k * (k - 1) + 1 {
        // a point and its k lines already cover k(k-1)+1 points
        return Vec::new();
    }
    let depth = options.split_depth.unwrap_or(k + 3).min(n);
    let mut root = Partial::new(n, k);
    let mut frontier = Vec::new();
    root.frontier(depth, &mut frontier);
    let run = |frontier: Vec<Partial>| -> Vec<Configuration> {
        #[cfg(feature = "parallel")]
        let subtrees = frontier.into_par_iter();
        #[cfg(not(feature = "parallel"))]
        let subtrees = frontier.into_iter();
        subtrees
            .map(|mut p| {
                let mut out = Vec::new();
                let mut nodes = 0u64;
                p.search(&mut nodes, &mut out);
                out
            })
            .flatten()
            .collect()
    };
    with_workers(options.workers, || run(frontier))
}

/// Runs `f` on a dedicated pool when a worker count is given.
#[cfg(feature = "parallel")]
fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build().expect("thread pool").install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers<R>(_workers: Option<usize>, f: impl FnOnce() -> R) -> R {
    f()
}

/// One representative per isomorphism class of n_k configurations, sorted
/// by canonical code.
pub fn enumerate_configurations(n: usize, k: usize, options: &EnumerateOptions) -> Result<Vec<CensusEntry>> {
    check_parameters(n, k, options.allow_large)?;
    let mut by_code: BTreeMap<CanonicalCode, Configuration> = BTreeMap::new();
    for c in generate(n, k, options) {
        let code = canonical_code(&c);
        if by_code.contains_key(&code) {
            // maximality testing should make this unreachable
            eprintln!("warning: duplicate class {code} dropped during enumeration");
            continue;
        }
        by_code.insert(code, c);
    }
    Ok(by_code
        .into_iter()
        .map(|(code, configuration)| CensusEntry { configuration, code, orientability: None })
        .collect())
}

/// Upper limit on `n` accepted by [`enumerate_naive`] for this `k`.
pub fn naive_cap(k: usize) -> usize {
    match k {
        3 => 12,
        4 => 14,
        _ => k * (k - 1) + 1,
    }
}

/// Slow reference enumeration: depth-first search over lexicographically
/// increasing line sets, followed by deduplication with a plain backtracking
/// isomorphism test.
///
/// The lines through point 0 are fixed to `{0, 1..k}`, `{0, k..2k-1}`, ...;
/// any configuration can be relabeled into that shape.
pub fn enumerate_naive(n: usize, k: usize) -> Result<Vec<Configuration>> {
    if k < 3 {
        return Err(Error::Parameters(format!("k must be at least 3, got {k}")));
    }
    if n > naive_cap(k) {
        return Err(Error::ResourceGuard(format!(
            "the naive enumerator is capped at n = {} for k = {k}",
            naive_cap(k)
        )));
    }
    if n < k * (k - 1) + 1 {
        return Ok(Vec::new());
    }
    let mut state =
        NaiveState { n, k, lines: Vec::new(), degree: vec![0; n], paired: vec![vec![false; n]; n], found: Vec::new() };
    for j in 0..k {
        let line: Vec<usize> = std::iter::once(0).chain((1..k).map(|i| 1 + j * (k - 1) + i - 1)).collect();
        state.add(&line);
    }
    state.dfs();
    let mut reps: Vec<Configuration> = Vec::new();
    for c in state.found {
        if !reps.iter().any(|r| naive_isomorphic(r, &c)) {
            reps.push(c);
        }
    }
    Ok(reps)
}

struct NaiveState {
    n: usize,
    k: usize,
    lines: Vec<Vec<usize>>,
    degree: Vec<usize>,
    paired: Vec<Vec<bool>>,
    found: Vec<Configuration>,
}

impl NaiveState {
    fn add(&mut self, line: &[usize]) {
        for (i, &a) in line.iter().enumerate() {
            self.degree[a] += 1;
            for &b in &line[i + 1..] {
                self.paired[a][b] = true;
                self.paired[b][a] = true;
            }
        }
        self.lines.push(line.to_vec());
    }

    fn remove(&mut self) {
        let line = self.lines.pop().expect("non-empty");
        for (i, &a) in line.iter().enumerate() {
            self.degree[a] -= 1;
            for &b in &line[i + 1..] {
                self.paired[a][b] = false;
                self.paired[b][a] = false;
            }
        }
    }

    fn dfs(&mut self) {
        let Some(first) = (0..self.n).find(|&p| self.degree[p] < self.k) else {
            if self.lines.len() == self.n {
                self.found.push(Configuration::from_valid_parts(self.n, self.k, self.lines.clone()));
            }
            return;
        };
        let mut line = vec![first];
        self.choose(&mut line);
    }

    fn choose(&mut self, line: &mut Vec<usize>) {
        if line.len() == self.k {
            if self.lines.last().is_some_and(|last| line.as_slice() <= last.as_slice()) {
                return;
            }
            let l = line.clone();
            self.add(&l);
            self.dfs();
            self.remove();
            return;
        }
        let start = *line.last().expect("non-empty") + 1;
        for p in start..self.n {
            if self.degree[p] >= self.k || line.iter().any(|&q| self.paired[q][p]) {
                continue;
            }
            line.push(p);
            self.choose(line);
            line.pop();
        }
    }
}

/// Backtracking search for a point bijection mapping the lines of `a` onto
/// those of `b`; no refinement, only pairwise consistency.
pub fn naive_isomorphic(a: &Configuration, b: &Configuration) -> bool {
    if a.n() != b.n() || a.k() != b.k() {
        return false;
    }
    let n = a.n();
    let line_of_pair = |c: &Configuration| {
        let mut m = vec![vec![usize::MAX; n]; n];
        for (li, line) in c.lines().iter().enumerate() {
            for &p in line {
                for &q in line {
                    if p != q {
                        m[p][q] = li;
                    }
                }
            }
        }
        m
    };
    let la = line_of_pair(a);
    let lb = line_of_pair(b);
    let target: HashSet<&Vec<usize>> = b.lines().iter().collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        p: usize,
        n: usize,
        la: &[Vec<usize>],
        lb: &[Vec<usize>],
        map: &mut [usize],
        used: &mut [bool],
        a: &Configuration,
        target: &HashSet<&Vec<usize>>,
    ) -> bool {
        if p == n {
            return a.lines().iter().all(|l| {
                let mut img: Vec<usize> = l.iter().map(|&x| map[x]).collect();
                img.sort_unstable();
                target.contains(&img)
            });
        }
        for t in 0..n {
            if used[t] {
                continue;
            }
            // joined pairs must stay joined, and pairs on a common line of a
            // must map onto a common line of b
            let ok = (0..p).all(|q| {
                let joined_a = la[q][p] != usize::MAX;
                let joined_b = lb[map[q]][t] != usize::MAX;
                joined_a == joined_b
            }) && (0..p).all(|q| {
                (0..q).all(|r| {
                    let same_a = la[q][p] != usize::MAX && la[q][p] == la[r][p] && la[r][q] == la[q][p];
                    let same_b = lb[map[q]][t] != usize::MAX
                        && lb[map[q]][t] == lb[map[r]][t]
                        && lb[map[r]][map[q]] == lb[map[q]][t];
                    same_a == same_b
                })
            });
            if !ok {
                continue;
            }
            map[p] = t;
            used[t] = true;
            if go(p + 1, n, la, lb, map, used, a, target) {
                return true;
            }
            used[t] = false;
            map[p] = usize::MAX;
        }
        false
    }
    go(0, n, &la, &lb, &mut map, &mut used, a, &target)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub classes: usize,
    pub orientable: usize,
    pub non_orientable: usize,
    pub budget_exceeded: usize,
    pub gate: Option<Verdict>,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

/// Enumerates the n_k census and runs the orientability search on the
/// general-position matroid of every class. Budget exhaustion is recorded
/// per entry and never aborts the batch.
pub fn classify_orientability(
    n: usize,
    k: usize,
    solver: SolverOptions,
    options: &EnumerateOptions,
) -> Result<(Vec<CensusEntry>, ClassificationSummary)> {
    let start = Instant::now();
    let mut entries = enumerate_configurations(n, k, options)?;
    let classify = |entries: &mut Vec<CensusEntry>| {
        #[cfg(feature = "parallel")]
        let each = entries.par_iter_mut();
        #[cfg(not(feature = "parallel"))]
        let each = entries.iter_mut();
        each.for_each(|e| {
            e.orientability = Some(orientability(&generalize(&e.configuration), solver));
        });
    };
    with_workers(options.workers, || classify(&mut entries));
    let mut summary = ClassificationSummary { classes: entries.len(), ..Default::default() };
    for e in &entries {
        match e.orientability.as_ref().map(|r| &r.outcome) {
            Some(Outcome::Orientable(_)) => summary.orientable += 1,
            Some(Outcome::NonOrientable) => summary.non_orientable += 1,
            _ => summary.budget_exceeded += 1,
        }
    }
    summary.gate = feasibility_gate(n as i64, k as i64).ok().map(|g| g.verdict);
    summary.elapsed = start.elapsed();
    Ok((entries, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{fano, mobius_kantor};

    #[test]
    fn span_masks() {
        assert_eq!(span(0, 0), 0);
        assert_eq!(span(0, 1), 1 << 63);
        assert_eq!(span(1, 2), (1 << 62) | (1 << 61));
        assert_eq!(span(0, 64), u64::MAX);
    }

    #[test]
    fn fano_is_the_only_7_3() {
        let census = enumerate_configurations(7, 3, &EnumerateOptions::default()).unwrap();
        assert_eq!(census.len(), 1);
        assert_eq!(census[0].code, canonical_code(&fano()));
    }

    #[test]
    fn mobius_kantor_is_the_only_8_3() {
        let census = enumerate_configurations(8, 3, &EnumerateOptions::default()).unwrap();
        assert_eq!(census.len(), 1);
        assert_eq!(census[0].code, canonical_code(&mobius_kantor()));
    }

    #[test]
    fn nothing_below_the_projective_plane_size() {
        assert!(enumerate_configurations(12, 4, &EnumerateOptions::default()).unwrap().is_empty());
        assert!(enumerate_naive(12, 4).unwrap().is_empty());
        assert!(enumerate_configurations(6, 3, &EnumerateOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn resource_guard() {
        assert!(matches!(enumerate_configurations(18, 4, &EnumerateOptions::default()), Err(Error::ResourceGuard(_))));
        assert!(matches!(enumerate_naive(13, 3), Err(Error::ResourceGuard(_))));
        assert!(enumerate_configurations(10, 2, &EnumerateOptions::default()).is_err());
    }

    #[test]
    fn naive_isomorphism_matches_relabeling() {
        let c = mobius_kantor();
        let r = c.relabel(&[7, 6, 5, 4, 3, 2, 1, 0]).unwrap();
        assert!(naive_isomorphic(&c, &r));
        assert!(!naive_isomorphic(&c, &fano()));
    }
}
