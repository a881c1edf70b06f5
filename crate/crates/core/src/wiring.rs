//! Pseudoline arrangements as wiring diagrams with multi-crossings.
//!
//! Wires are named by their starting position `0..n`. An event `(p, s)`
//! reverses the `s` wires currently at positions `p..p+s`: it is a point
//! where exactly `s` pseudolines meet. In a valid diagram every pair of wires
//! swaps exactly once, so the sweep ends in the reversed order.
//!
//! The sweep line plays the role of the line at infinity; it is not a wire.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chirotope::{Chirotope, Sign};
use crate::error::{Error, Result};
use crate::eulergate::EulerCounts;
use crate::incidence::{Configuration, ValidationReport, Violation};
use crate::triples;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub pos: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringDiagram {
    pub n: usize,
    pub events: Vec<Event>,
    /// Optional correspondence wire -> configuration line, used by
    /// [`WiringDiagram::realizes`].
    pub wire_map: Option<Vec<usize>>,
}

impl WiringDiagram {
    pub fn new(n: usize, events: Vec<Event>) -> Self {
        WiringDiagram { n, events, wire_map: None }
    }

    pub fn from_pairs(n: usize, events: &[(usize, usize)]) -> Self {
        Self::new(n, events.iter().map(|&(pos, size)| Event { pos, size }).collect())
    }

    /// File form: `n m`, then `m` lines `p s`, then optionally a line
    /// `map w0 w1 ...` giving the configuration line of every wire.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = rows.next().ok_or_else(|| Error::Parse("empty wiring file".into()))?;
        let head = ints(header)?;
        let [n, m] = head[..] else {
            return Err(Error::Parse(format!("header must be `n m`, found {header:?}")));
        };
        let mut events = Vec::with_capacity(m);
        for _ in 0..m {
            let row =
                rows.next().ok_or_else(|| Error::Parse(format!("expected {m} events, found {}", events.len())))?;
            match ints(row)?[..] {
                [pos, size] => events.push(Event { pos, size }),
                _ => return Err(Error::Parse(format!("event must be `p s`, found {row:?}"))),
            }
        }
        let mut wire_map = None;
        if let Some(row) = rows.next() {
            let rest =
                row.strip_prefix("map").ok_or_else(|| Error::Parse(format!("unexpected trailing line {row:?}")))?;
            let mut map = ints(rest)?;
            for row in rows {
                map.extend(ints(row)?);
            }
            if map.len() != n {
                return Err(Error::Parse(format!("wire map has {} entries, expected {n}", map.len())));
            }
            wire_map = Some(map);
        }
        Ok(WiringDiagram { n, events, wire_map })
    }

    pub fn to_file_string(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.events.len());
        for e in &self.events {
            let _ = writeln!(s, "{} {}", e.pos, e.size);
        }
        if let Some(map) = &self.wire_map {
            let body: Vec<String> = map.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(s, "map {}", body.join(" "));
        }
        s
    }

    /// Checks the structural invariants and the allowable-sequence property.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut swaps = vec![vec![0u32; n]; n];
        for (i, e) in self.events.iter().enumerate() {
            if e.size < 2 {
                out.push(Violation::new(
                    "event-size",
                    format!("event {i} has size {}, need at least 2", e.size),
                    vec![i as i64],
                ));
                continue;
            }
            if e.pos + e.size > n {
                out.push(Violation::new(
                    "event-range",
                    format!("event {i} covers positions {}..{} of {n}", e.pos, e.pos + e.size),
                    vec![i as i64],
                ));
                continue;
            }
            let block = &mut order[e.pos..e.pos + e.size];
            for a in 0..block.len() {
                for b in a + 1..block.len() {
                    swaps[block[a]][block[b]] += 1;
                    swaps[block[b]][block[a]] += 1;
                }
            }
            block.reverse();
        }
        for a in 0..n {
            for b in a + 1..n {
                if swaps[a][b] != 1 {
                    out.push(Violation::new(
                        "pair-crossings",
                        format!("wires {a} and {b} cross {} times", swaps[a][b]),
                        vec![a as i64, b as i64, swaps[a][b] as i64],
                    ));
                }
            }
        }
        if out.is_empty() && order.iter().rev().copied().ne(0..n) {
            out.push(Violation::new("final-order", "sweep does not end reversed", vec![]));
        }
        if let Some(map) = &self.wire_map {
            if map.len() != n {
                out.push(Violation::new("wire-map", "wire map has the wrong length", vec![map.len() as i64]));
            }
        }
        ValidationReport::from_violations(out)
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidWiring(report.to_string()))
        }
    }

    /// Wires taking part in every event, in sweep order.
    pub fn event_wires(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.n).collect();
        self.events
            .iter()
            .map(|e| {
                let block = &mut order[e.pos..e.pos + e.size];
                let wires = block.to_vec();
                block.reverse();
                wires
            })
            .collect()
    }

    /// Vertex, edge and cell counts of the arrangement on the sphere: every
    /// crossing appears twice, and every wire becomes a great circle cut into
    /// twice as many edges as it has crossings.
    pub fn cell_counts(&self) -> Result<EulerCounts> {
        self.require_valid()?;
        let f0 = 2 * self.events.len() as i64;
        let f1 = 2 * self.events.iter().map(|e| e.size as i64).sum::<i64>();
        Ok(EulerCounts::from_vertices_edges(f0, f1))
    }

    /// Rank-3 chirotope of the arrangement on the wires: for wires
    /// `i < j < k`, `+` when `i` and `j` cross before `j` and `k`, `-` when
    /// after, and `0` when all three meet in one event.
    pub fn chirotope(&self) -> Result<Chirotope> {
        self.require_valid()?;
        let n = self.n;
        let mut time = vec![vec![0usize; n]; n];
        for (t, wires) in self.event_wires().iter().enumerate() {
            for &a in wires {
                for &b in wires {
                    time[a][b] = t;
                }
            }
        }
        let signs = triples::iter(n)
            .map(|[i, j, k]| match time[i][j].cmp(&time[j][k]) {
                std::cmp::Ordering::Less => Sign::Pos,
                std::cmp::Ordering::Greater => Sign::Neg,
                std::cmp::Ordering::Equal => Sign::Zero,
            })
            .collect();
        Chirotope::new(n, signs)
    }

    /// Checks that the events of size at least 3 are exactly the given
    /// points, each described by the set of lines through it, and returns
    /// the event index of every point. Wires are translated to lines with the
    /// wire map (identity when absent).
    pub fn realizes_structure(&self, points: &[Vec<usize>]) -> Result<Option<Vec<usize>>> {
        self.require_valid()?;
        let map: Vec<usize> = self.wire_map.clone().unwrap_or_else(|| (0..self.n).collect());
        let mut by_lines: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        for (pi, lines) in points.iter().enumerate() {
            by_lines.insert(lines.iter().copied().collect(), pi);
        }
        if by_lines.len() != points.len() {
            return Ok(None);
        }
        let mut event_of = vec![usize::MAX; points.len()];
        for (ei, wires) in self.event_wires().into_iter().enumerate() {
            let lines: BTreeSet<usize> = wires.iter().map(|&w| map[w]).collect();
            match by_lines.get(&lines) {
                Some(&pi) if event_of[pi] == usize::MAX => event_of[pi] = ei,
                Some(_) => return Ok(None),
                None if wires.len() == 2 => {}
                None => return Ok(None),
            }
        }
        Ok(event_of.iter().all(|&e| e != usize::MAX).then_some(event_of))
    }

    /// Whether the diagram, read through its wire map, has exactly the
    /// incidences of `c`: one event per point, through exactly that point's
    /// lines, and simple crossings otherwise.
    pub fn realizes(&self, c: &Configuration) -> Result<Option<Vec<usize>>> {
        if self.n != c.n() {
            return Err(Error::SizeMismatch { expected: c.n(), found: self.n });
        }
        if let Some(map) = &self.wire_map {
            let distinct: BTreeSet<usize> = map.iter().copied().collect();
            if distinct.len() != self.n || map.iter().any(|&l| l >= c.n()) {
                return Err(Error::InvalidWiring("wire map is not a bijection onto the lines".into()));
            }
        }
        self.realizes_structure(&c.point_lines())
    }

    /// Allowable sequence of a planar point set: wires are the points sorted
    /// by `(x, y)`, and the sweep rotates the projection direction through a
    /// half turn; collinear points reverse together. Returns the diagram and
    /// the point at every starting position.
    pub fn from_points(points: &[(BigRational, BigRational)]) -> Result<(WiringDiagram, Vec<usize>)> {
        let n = points.len();
        for i in 0..n {
            for j in i + 1..n {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        let mut start: Vec<usize> = (0..n).collect();
        start.sort_by(|&a, &b| points[a].cmp(&points[b]));
        let pts: Vec<&(BigRational, BigRational)> = start.iter().map(|&i| &points[i]).collect();

        // direction classes: finite slopes ascending, vertical last
        #[derive(PartialEq, Eq, PartialOrd, Ord)]
        enum Dir {
            Slope(BigRational),
            Vertical,
        }
        let mut classes: BTreeMap<Dir, Vec<(usize, usize)>> = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                // pts is sorted, so dx >= 0 and dx == 0 implies dy > 0
                let dx = &pts[b].0 - &pts[a].0;
                let dy = &pts[b].1 - &pts[a].1;
                let dir = if dx.is_zero() { Dir::Vertical } else { Dir::Slope(dy / dx) };
                classes.entry(dir).or_default().push((a, b));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let mut events = Vec::new();
        for (dir, pairs) in classes {
            // group wires on a common line of this direction by intercept
            let mut groups: BTreeMap<BigRational, BTreeSet<usize>> = BTreeMap::new();
            for (a, b) in pairs {
                let key = match &dir {
                    Dir::Vertical => pts[a].0.clone(),
                    Dir::Slope(s) => &pts[a].1 - s * &pts[a].0,
                };
                let g = groups.entry(key).or_default();
                g.insert(a);
                g.insert(b);
            }
            let mut blocks: Vec<(usize, usize)> = Vec::new();
            for wires in groups.values() {
                let positions: Vec<usize> =
                    wires.iter().map(|&w| order.iter().position(|&o| o == w).expect("wire")).collect();
                let lo = *positions.iter().min().expect("non-empty");
                let hi = *positions.iter().max().expect("non-empty");
                if hi + 1 - lo != wires.len() {
                    return Err(Error::InvalidWiring("collinear block is not contiguous".into()));
                }
                blocks.push((lo, wires.len()));
            }
            blocks.sort_unstable();
            for (pos, size) in blocks {
                order[pos..pos + size].reverse();
                events.push(Event { pos, size });
            }
        }
        Ok((WiringDiagram::new(n, events), start))
    }

    /// Deterministic SVG drawing: wires as polylines through evenly spaced
    /// event columns, each crossing as one shared node, events of size
    /// `highlight` (default: the largest size above 2) filled in red.
    pub fn render_svg(&self, highlight: Option<usize>) -> Result<String> {
        self.require_valid()?;
        let n = self.n;
        let m = self.events.len();
        let highlight =
            highlight.or_else(|| self.events.iter().map(|e| e.size).filter(|&s| s > 2).max()).unwrap_or(usize::MAX);
        let (dx, dy, margin) = (40.0f64, 28.0f64, 40.0f64);
        let width = 2.0 * margin + dx * (m as f64 + 1.0);
        let height = 2.0 * margin + dy * (n.max(1) as f64 - 1.0);
        let y_of = |pos: f64| margin + dy * pos;

        let mut order: Vec<usize> = (0..n).collect();
        let mut paths: Vec<Vec<(f64, f64)>> = (0..n).map(|w| vec![(margin, y_of(w as f64))]).collect();
        let mut nodes = Vec::with_capacity(m);
        for (i, e) in self.events.iter().enumerate() {
            let x = margin + dx * (i as f64 + 1.0);
            let center = y_of(e.pos as f64 + (e.size as f64 - 1.0) / 2.0);
            for &w in &order[e.pos..e.pos + e.size] {
                paths[w].push((x, center));
            }
            order[e.pos..e.pos + e.size].reverse();
            nodes.push((x, center, e.size));
        }
        for (pos, &w) in order.iter().enumerate() {
            paths[w].push((width - margin, y_of(pos as f64)));
        }

        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
        );
        let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        for (w, path) in paths.iter().enumerate() {
            let pts: Vec<String> = path.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
            let hue = (w * 360) / n.max(1);
            let _ = writeln!(
                s,
                "<polyline class=\"wire\" data-wire=\"{w}\" fill=\"none\" stroke=\"hsl({hue},60%,40%)\" stroke-width=\"2\" points=\"{}\"/>",
                pts.join(" ")
            );
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{w}</text>",
                margin - 8.0,
                y_of(w as f64) + 4.0
            );
        }
        for (x, y, size) in nodes {
            let (r, fill) = if size == highlight { (6.0, "#d62728") } else { (3.5, "#333333") };
            let _ = writeln!(
                s,
                "<circle class=\"crossing\" data-size=\"{size}\" cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{r}\" fill=\"{fill}\"/>"
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}

/// Free-function form of [`WiringDiagram::validate`].
pub fn validate_wiring(w: &WiringDiagram) -> ValidationReport {
    w.validate()
}

/// Free-function form of [`WiringDiagram::chirotope`].
pub fn chirotope_of_wiring(w: &WiringDiagram) -> Result<Chirotope> {
    w.chirotope()
}

fn ints(row: &str) -> Result<Vec<usize>> {
    row.split_whitespace().map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))).collect()
}
