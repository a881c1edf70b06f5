//! n_k configurations: data model, validation, polarity and the Levi graph.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::Rank3Matroid;

/// Unvalidated configuration data as read from a file.
///
/// Indices are kept signed so that negative or otherwise out-of-range values
/// survive parsing and can be reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawConfiguration {
    pub n: i64,
    pub k: i64,
    pub lines: Vec<Vec<i64>>,
}

impl RawConfiguration {
    /// Parses either the JSON form `{"n":..,"k":..,"lines":[[..],..]}` or the
    /// plain-text form (header `n k`, then one line of indices per
    /// configuration line). Blank lines and `#` comments are ignored in the
    /// text form.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return Ok(serde_json::from_str(trimmed)?);
        }
        let mut rows = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = rows.next().ok_or_else(|| Error::Parse("empty configuration file".into()))?;
        let head = parse_ints(header)?;
        if head.len() != 2 {
            return Err(Error::Parse(format!("header must be `n k`, found {header:?}")));
        }
        let lines = rows.map(parse_ints).collect::<Result<Vec<_>>>()?;
        Ok(RawConfiguration { n: head[0], k: head[1], lines })
    }
}

fn parse_ints(row: &str) -> Result<Vec<i64>> {
    row.split_whitespace().map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))).collect()
}

/// One violated rule found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
    pub indices: Vec<i64>,
}

impl Violation {
    pub fn new(rule: &str, detail: impl Into<String>, indices: Vec<i64>) -> Self {
        Violation { rule: rule.to_string(), detail: detail.into(), indices }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.detail)
    }
}

/// Outcome of a validation pass. `valid` is true exactly when there are no
/// violations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { valid: violations.is_empty(), violations }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return write!(f, "valid");
        }
        writeln!(f, "invalid ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Checks every defining property of an n_k configuration.
///
/// Structural problems (out-of-range indices, wrong line count, ...) are
/// reported as violations rather than errors.
pub fn validate(raw: &RawConfiguration) -> ValidationReport {
    let mut out = Vec::new();
    let (n, k) = (raw.n, raw.k);
    if n <= 0 {
        out.push(Violation::new("n-positive", format!("n must be positive, got {n}"), vec![n]));
    }
    if k < 3 {
        out.push(Violation::new("k-min", format!("k must be at least 3, got {k}"), vec![k]));
    }
    if n > 0 && raw.lines.len() as i64 != n {
        out.push(Violation::new(
            "line-count",
            format!("expected {n} lines, found {}", raw.lines.len()),
            vec![raw.lines.len() as i64],
        ));
    }

    let mut degree: BTreeMap<i64, i64> = BTreeMap::new();
    let mut pairs: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut seen_lines: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (li, line) in raw.lines.iter().enumerate() {
        if line.len() as i64 != k {
            out.push(Violation::new(
                "line-size",
                format!("line {li} has {} points, expected {k}", line.len()),
                vec![li as i64],
            ));
        }
        let mut sorted = line.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                out.push(Violation::new(
                    "repeated-point",
                    format!("line {li} lists point {} twice", w[0]),
                    vec![li as i64, w[0]],
                ));
            }
        }
        sorted.dedup();
        for &p in &sorted {
            if p < 0 || p >= n {
                out.push(Violation::new(
                    "index-range",
                    format!("line {li} contains point {p} outside [0, {n})"),
                    vec![li as i64, p],
                ));
            } else {
                *degree.entry(p).or_default() += 1;
            }
        }
        for a in 0..sorted.len() {
            for b in a + 1..sorted.len() {
                let key = (sorted[a], sorted[b]);
                if let Some(&other) = pairs.get(&key) {
                    out.push(Violation::new(
                        "pair-repeated",
                        format!("pair {{{}, {}}} on two lines ({other} and {li})", key.0, key.1),
                        vec![key.0, key.1, other as i64, li as i64],
                    ));
                } else {
                    pairs.insert(key, li);
                }
            }
        }
        if let Some(&other) = seen_lines.get(&sorted) {
            out.push(Violation::new(
                "duplicate-line",
                format!("lines {other} and {li} are identical"),
                vec![other as i64, li as i64],
            ));
        } else {
            seen_lines.insert(sorted, li);
        }
    }
    if n > 0 && k >= 1 {
        for p in 0..n {
            let d = degree.get(&p).copied().unwrap_or(0);
            if d != k {
                out.push(Violation::new(
                    "point-degree",
                    format!("point {p} lies on {d} lines, expected {k}"),
                    vec![p, d],
                ));
            }
        }
    }
    ValidationReport::from_violations(out)
}

/// A validated n_k configuration.
///
/// Points are `0..n`; each line is a strictly increasing list of `k` points and
/// the line list is sorted lexicographically, so structural equality is
/// meaningful before any isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Configuration {
    n: usize,
    k: usize,
    lines: Vec<Vec<usize>>,
}

impl Configuration {
    /// Normalizes and validates.
    pub fn new(n: usize, k: usize, lines: Vec<Vec<usize>>) -> Result<Self> {
        let raw = RawConfiguration {
            n: n as i64,
            k: k as i64,
            lines: lines.iter().map(|l| l.iter().map(|&p| p as i64).collect()).collect(),
        };
        let report = validate(&raw);
        if !report.valid {
            return Err(Error::InvalidConfiguration(report.to_string()));
        }
        Ok(Self::from_valid_parts(n, k, lines))
    }

    /// Skips validation; the caller guarantees the configuration axioms.
    pub(crate) fn from_valid_parts(n: usize, k: usize, mut lines: Vec<Vec<usize>>) -> Self {
        for l in &mut lines {
            l.sort_unstable();
        }
        lines.sort_unstable();
        debug_assert!(
            validate(&RawConfiguration {
                n: n as i64,
                k: k as i64,
                lines: lines.iter().map(|l| l.iter().map(|&p| p as i64).collect()).collect(),
            })
            .valid
        );
        Configuration { n, k, lines }
    }

    pub fn from_raw(raw: &RawConfiguration) -> Result<Self> {
        let report = validate(raw);
        if !report.valid {
            return Err(Error::InvalidConfiguration(report.to_string()));
        }
        let lines = raw.lines.iter().map(|l| l.iter().map(|&p| p as usize).collect()).collect();
        Ok(Self::from_valid_parts(raw.n as usize, raw.k as usize, lines))
    }

    /// Parses either accepted file form and validates.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfiguration::parse(text)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Indices of the lines through every point, in increasing order.
    pub fn point_lines(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(self.k); self.n];
        for (li, line) in self.lines.iter().enumerate() {
            for &p in line {
                out[p].push(li);
            }
        }
        out
    }

    /// Applies the point relabeling `p -> perm[p]` and renormalizes.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parameters("relabeling is not a permutation".into()));
            }
        }
        let lines = self.lines.iter().map(|l| l.iter().map(|&p| perm[p]).collect()).collect();
        Ok(Self::from_valid_parts(self.n, self.k, lines))
    }

    pub fn to_raw(&self) -> RawConfiguration {
        RawConfiguration {
            n: self.n as i64,
            k: self.k as i64,
            lines: self.lines.iter().map(|l| l.iter().map(|&p| p as i64).collect()).collect(),
        }
    }

    /// Canonical JSON file form: one line per configuration line.
    pub fn to_json(&self) -> String {
        let mut s = format!("{{\"n\": {}, \"k\": {}, \"lines\": [\n", self.n, self.k);
        for (i, line) in self.lines.iter().enumerate() {
            let body: Vec<String> = line.iter().map(|p| p.to_string()).collect();
            s.push_str(&format!("  [{}]", body.join(", ")));
            s.push_str(if i + 1 < self.lines.len() { ",\n" } else { "\n" });
        }
        s.push_str("]}\n");
        s
    }

    /// Plain-text file form.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.k);
        for line in &self.lines {
            let body: Vec<String> = line.iter().map(|p| p.to_string()).collect();
            s.push_str(&body.join(" "));
            s.push('\n');
        }
        s
    }

    /// Total number of point-line incidences (`n * k`).
    pub fn incidence_count(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConfiguration::deserialize(d)?;
        Configuration::from_raw(&raw).map_err(serde::de::Error::custom)
    }
}

/// Polar configuration: the points are the lines of `c`, and line `j` is the
/// set of lines of `c` through point `j`.
pub fn dualize(c: &Configuration) -> Configuration {
    Configuration::from_valid_parts(c.n, c.k, c.point_lines())
}

/// The general-position rank-3 matroid of `c`: a triple is dependent exactly
/// when it lies on a line of `c`.
pub fn generalize(c: &Configuration) -> Rank3Matroid {
    let mut triples = Vec::with_capacity(c.n * c.k * (c.k - 1) * (c.k - 2) / 6);
    for line in &c.lines {
        for a in 0..line.len() {
            for b in a + 1..line.len() {
                for d in b + 1..line.len() {
                    triples.push([line[a], line[b], line[d]]);
                }
            }
        }
    }
    Rank3Matroid::from_sorted_triples_unchecked(c.n, triples)
}

/// Bipartite point/line incidence graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviGraph {
    /// `point_adj[p]` lists the lines through point `p`.
    pub point_adj: Vec<Vec<usize>>,
    /// `line_adj[l]` lists the points on line `l`.
    pub line_adj: Vec<Vec<usize>>,
}

impl LeviGraph {
    pub fn vertex_count(&self) -> usize {
        self.point_adj.len() + self.line_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.point_adj.iter().map(Vec::len).sum()
    }

    /// `Some(d)` if every vertex on both sides has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.point_adj.first()?.len();
        let all = self.point_adj.iter().chain(&self.line_adj).all(|a| a.len() == d);
        all.then_some(d)
    }

    /// Vertices `0..n_points` are points, the rest are lines.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let np = self.point_adj.len();
        let (list, offset) = if v < np { (&self.point_adj[v], np) } else { (&self.line_adj[v - np], 0) };
        list.iter().map(move |&u| u + offset)
    }

    /// Length of the shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let nv = self.vertex_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; nv];
        let mut parent = vec![usize::MAX; nv];
        for s in 0..nv {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

pub fn levi_graph(c: &Configuration) -> LeviGraph {
    LeviGraph { point_adj: c.point_lines(), line_adj: c.lines.clone() }
}

/// The Fano plane, the unique 7_3 configuration.
pub fn fano() -> Configuration {
    Configuration::from_valid_parts(
        7,
        3,
        vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6], vec![1, 3, 5], vec![1, 4, 6], vec![2, 3, 6], vec![2, 4, 5]],
    )
}

/// The Möbius–Kantor 8_3 configuration.
pub fn mobius_kantor() -> Configuration {
    // lines {i, i+1, i+3} mod 8
    let lines = (0..8).map(|i| vec![i, (i + 1) % 8, (i + 3) % 8]).collect();
    Configuration::from_valid_parts(8, 3, lines)
}

/// The Pappus 9_3 configuration, labeled to match [`pappus_points`].
pub fn pappus() -> Configuration {
    Configuration::from_valid_parts(
        9,
        3,
        vec![
            vec![0, 1, 2],
            vec![3, 4, 5],
            vec![6, 7, 8],
            vec![0, 4, 8],
            vec![0, 5, 7],
            vec![1, 3, 8],
            vec![1, 5, 6],
            vec![2, 3, 7],
            vec![2, 4, 6],
        ],
    )
}

/// Rational coordinates `(x, y)` realizing [`pappus`].
///
/// Points 0..3 lie on `y = 0`, 3..6 on `y = 2`, and 6..9 are the three
/// cross-joins, which are collinear.
pub fn pappus_points() -> Vec<(num_rational::BigRational, num_rational::BigRational)> {
    use num_rational::BigRational as Q;
    let q = |a: i64, b: i64| Q::new(a.into(), b.into());
    vec![
        (q(0, 1), q(0, 1)),
        (q(1, 1), q(0, 1)),
        (q(3, 1), q(0, 1)),
        (q(0, 1), q(2, 1)),
        (q(3, 1), q(2, 1)),
        (q(4, 1), q(2, 1)),
        // 6 = (1,5)∩(2,4), 7 = (0,5)∩(2,3), 8 = (0,4)∩(1,3)
        (q(3, 1), q(4, 3)),
        (q(12, 7), q(6, 7)),
        (q(3, 4), q(1, 2)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(n: i64, k: i64, lines: &[&[i64]]) -> RawConfiguration {
        RawConfiguration { n, k, lines: lines.iter().map(|l| l.to_vec()).collect() }
    }

    #[test]
    fn fano_is_valid() {
        let report = validate(&fano().to_raw());
        assert!(report.valid, "{report}");
    }

    #[test]
    fn shared_pair_is_rejected() {
        let report = validate(&raw(4, 3, &[&[0, 1, 2], &[0, 1, 3]]));
        assert!(!report.valid);
        assert!(report.has_rule("pair-repeated"));
        let v = report.violations.iter().find(|v| v.rule == "pair-repeated").unwrap();
        assert!(v.detail.contains("pair {0, 1} on two lines"), "{}", v.detail);
    }

    #[test]
    fn empty_is_rejected() {
        let report = validate(&raw(0, 3, &[]));
        assert!(!report.valid);
        assert!(report.has_rule("n-positive"));
    }

    #[test]
    fn structural_problems_are_reported() {
        let report = validate(&raw(3, 3, &[&[0, 1, 7], &[-1, 1, 1]]));
        assert!(report.has_rule("line-count"));
        assert!(report.has_rule("index-range"));
        assert!(report.has_rule("repeated-point"));
        assert!(report.has_rule("point-degree"));
    }

    #[test]
    fn parses_text_and_json() {
        let c = Configuration::parse("7 3\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n").unwrap();
        assert_eq!(c, fano());
        let again = Configuration::parse(&c.to_json()).unwrap();
        assert_eq!(again, c);
        assert_eq!(Configuration::parse(&c.to_text()).unwrap(), c);
        assert!(Configuration::parse("7 3\n0 1 x\n").is_err());
    }

    #[test]
    fn lines_are_normalized_on_ingest() {
        let c = Configuration::new(
            7,
            3,
            vec![
                vec![5, 4, 2],
                vec![6, 0, 5],
                vec![0, 1, 2],
                vec![3, 4, 0],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
            ],
        )
        .unwrap();
        assert_eq!(c, fano());
    }

    #[test]
    fn small_named_configurations_are_valid() {
        for c in [mobius_kantor(), pappus()] {
            assert!(validate(&c.to_raw()).valid);
        }
    }

    #[test]
    fn pappus_coordinates_match_lines() {
        let pts = pappus_points();
        let c = pappus();
        for i in 0..9 {
            for j in i + 1..9 {
                for k in j + 1..9 {
                    let (a, b, d) = (&pts[i], &pts[j], &pts[k]);
                    let det = (b.0.clone() - a.0.clone()) * (d.1.clone() - a.1.clone())
                        - (b.1.clone() - a.1.clone()) * (d.0.clone() - a.0.clone());
                    let on_line = c.lines().iter().any(|l| l == &vec![i, j, k]);
                    assert_eq!(det == num_rational::BigRational::from_integer(0.into()), on_line, "{i} {j} {k}");
                }
            }
        }
    }

    #[test]
    fn fano_levi_graph() {
        let g = levi_graph(&fano());
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edge_count(), 21);
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.girth(), Some(6));
    }

    #[test]
    fn generalize_fano_keeps_lines() {
        let m = generalize(&fano());
        assert_eq!(m.collinear().len(), 7);
        for line in fano().lines() {
            assert!(m.is_collinear(line[0], line[1], line[2]));
        }
    }

    #[test]
    fn dualize_preserves_validity() {
        for c in [fano(), mobius_kantor(), pappus()] {
            let d = dualize(&c);
            assert!(validate(&d.to_raw()).valid);
            assert_eq!((d.n(), d.k()), (c.n(), c.k()));
        }
    }
}
