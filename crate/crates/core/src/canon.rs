//! Canonical labeling of configurations by partition refinement with
//! individualization on the Levi graph.
//!
//! Points and lines start in two different cells, so relabelings never swap
//! the two sides; polarity is handled separately through
//! [`dualize`](crate::incidence::dualize).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::incidence::Configuration;

/// Relabeling-invariant byte string: equal codes exactly for isomorphic
/// configurations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if !s.len().is_multiple_of(2) {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalCode)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

struct Levi {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Levi {
    fn new(c: &Configuration) -> Self {
        let n = c.n();
        let mut adj = vec![Vec::new(); 2 * n];
        for (li, line) in c.lines().iter().enumerate() {
            for &p in line {
                adj[p].push(n + li);
                adj[n + li].push(p);
            }
        }
        Levi { n, adj }
    }

    fn size(&self) -> usize {
        self.adj.len()
    }
}

/// Refines `color` to the coarsest equitable coloring finer than it.
///
/// Colors are cell start positions in the ordered partition, so the number of
/// vertices with color `< c` equals `c` for every color `c` in use.
fn refine(g: &Levi, color: &mut [usize]) {
    let nv = g.size();
    let mut order: Vec<usize> = (0..nv).collect();
    let mut sigs: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); nv];
    let mut cells = count_cells(color);
    loop {
        for v in 0..nv {
            let mut nb: Vec<usize> = g.adj[v].iter().map(|&u| color[u]).collect();
            nb.sort_unstable();
            sigs[v] = (color[v], nb);
        }
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut start = 0;
        for i in 0..nv {
            if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                start = i;
            }
            color[order[i]] = start;
        }
        let now = count_cells(color);
        if now == cells {
            break;
        }
        cells = now;
    }
}

fn count_cells(color: &[usize]) -> usize {
    let mut seen = vec![false; color.len()];
    color.iter().filter(|&&c| !std::mem::replace(&mut seen[c], true)).count()
}

/// Smallest non-singleton cell, first by size then by position.
fn target_cell(color: &[usize]) -> Option<Vec<usize>> {
    let nv = color.len();
    let mut size = vec![0usize; nv];
    for &c in color {
        size[c] += 1;
    }
    let best = (0..nv).filter(|&c| size[c] > 1).min_by_key(|&c| (size[c], c))?;
    Some((0..nv).filter(|&v| color[v] == best).collect())
}

fn individualize(color: &[usize], v: usize) -> Vec<usize> {
    let c = color[v];
    color.iter().enumerate().map(|(u, &cu)| if cu == c && u != v { c + 1 } else { cu }).collect()
}

fn leaf_code(g: &Levi, k: usize, color: &[usize]) -> Vec<u8> {
    let n = g.n;
    let row_bytes = n.div_ceil(8);
    let mut out = Vec::with_capacity(3 + n * row_bytes);
    out.extend_from_slice(&(n as u16).to_be_bytes());
    out.push(k as u8);
    let mut rows = vec![vec![0u8; row_bytes]; n];
    for li in 0..n {
        let r = color[n + li] - n;
        for &p in &g.adj[n + li] {
            let q = color[p];
            rows[r][q / 8] |= 0x80 >> (q % 8);
        }
    }
    for r in rows {
        out.extend(r);
    }
    out
}

struct Search<'a> {
    g: &'a Levi,
    k: usize,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, color: Vec<usize>, prefix: &mut Vec<usize>) {
        let Some(cell) = target_cell(&color) else {
            self.leaf(color);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(prefix, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = individualize(&color, v);
            refine(self.g, &mut child);
            prefix.push(v);
            self.visit(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, color: Vec<usize>) {
        let code = leaf_code(self.g, self.k, &color);
        match &self.best {
            None => self.best = Some((code, color)),
            Some((best, best_color)) => match code.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((code, color)),
                std::cmp::Ordering::Equal => {
                    // both labelings give the same structure: v -> w with
                    // best_color[w] == color[v] is an automorphism
                    let mut inv = vec![0; color.len()];
                    for (w, &c) in best_color.iter().enumerate() {
                        inv[c] = w;
                    }
                    let gamma: Vec<usize> = color.iter().map(|&c| inv[c]).collect();
                    if gamma.iter().enumerate().any(|(v, &w)| v != w) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Whether `v` shares an orbit with an explored vertex under the
    /// automorphisms found so far that fix `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let nv = self.g.size();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if prefix.iter().any(|&u| gamma[u] != u) {
                continue;
            }
            any = true;
            for x in 0..nv {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }
}

/// Canonical code together with the canonical labeling of the points:
/// `labels[p]` is the canonical index of point `p`, and `line_labels[l]` that
/// of line `l`.
pub struct CanonicalForm {
    pub code: CanonicalCode,
    pub labels: Vec<usize>,
    pub line_labels: Vec<usize>,
}

pub fn canonical_form(c: &Configuration) -> CanonicalForm {
    let g = Levi::new(c);
    let n = c.n();
    let mut color: Vec<usize> = (0..2 * n).map(|v| if v < n { 0 } else { n }).collect();
    refine(&g, &mut color);
    let mut search = Search { g: &g, k: c.k(), best: None, automorphisms: Vec::new() };
    search.visit(color, &mut Vec::new());
    let (code, color) = search.best.expect("search tree has at least one leaf");
    CanonicalForm {
        code: CanonicalCode(code),
        labels: color[..n].to_vec(),
        line_labels: color[n..].iter().map(|&c| c - n).collect(),
    }
}

pub fn canonical_code(c: &Configuration) -> CanonicalCode {
    canonical_form(c).code
}

/// Relabels `c` into its canonical form.
pub fn canonical_configuration(c: &Configuration) -> Configuration {
    let form = canonical_form(c);
    c.relabel(&form.labels).expect("labels form a permutation")
}

/// Returns a point permutation mapping the lines of `a` onto those of `b`,
/// verified by relabeling, or `None` if the configurations are not
/// isomorphic.
pub fn are_isomorphic(a: &Configuration, b: &Configuration) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.k() != b.k() {
        return None;
    }
    let fa = canonical_form(a);
    let fb = canonical_form(b);
    if fa.code != fb.code {
        return None;
    }
    let mut inv_b = vec![0; b.n()];
    for (p, &l) in fb.labels.iter().enumerate() {
        inv_b[l] = p;
    }
    let witness: Vec<usize> = fa.labels.iter().map(|&l| inv_b[l]).collect();
    let mapped = a.relabel(&witness).ok()?;
    (mapped == *b).then_some(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{dualize, fano, mobius_kantor, pappus};

    fn reversed(n: usize) -> Vec<usize> {
        (0..n).rev().collect()
    }

    #[test]
    fn code_invariant_under_relabeling() {
        for c in [fano(), mobius_kantor(), pappus()] {
            let r = c.relabel(&reversed(c.n())).unwrap();
            assert_eq!(canonical_code(&c), canonical_code(&r));
        }
    }

    #[test]
    fn witness_is_verified() {
        let c = pappus();
        let perm = vec![3, 1, 4, 0, 5, 8, 2, 6, 7];
        let r = c.relabel(&perm).unwrap();
        let w = are_isomorphic(&c, &r).unwrap();
        assert_eq!(c.relabel(&w).unwrap(), r);
    }

    #[test]
    fn fano_and_mobius_kantor_differ() {
        assert!(are_isomorphic(&fano(), &mobius_kantor()).is_none());
        assert_ne!(canonical_code(&fano()), canonical_code(&mobius_kantor()));
    }

    #[test]
    fn fano_is_self_dual() {
        assert!(are_isomorphic(&fano(), &dualize(&fano())).is_some());
    }

    #[test]
    fn hex_round_trip() {
        let code = canonical_code(&pappus());
        assert_eq!(CanonicalCode::from_hex(&code.to_hex()), Some(code));
        assert_eq!(CanonicalCode::from_hex("abc"), None);
    }

    #[test]
    fn canonical_configuration_is_a_fixed_point() {
        let c = canonical_configuration(&mobius_kantor());
        assert_eq!(canonical_configuration(&c), c);
    }
}
