//! Slow, independent reference implementations used to cross-check the
//! library. None of these call into the code they are checking.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nkconf::{Configuration, Rank3Matroid};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn triple_list(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// One term of a three-term relation: triple indices and the sign of the
/// permutations that sorted them.
#[derive(Clone, Copy)]
struct Product {
    coef: i8,
    a: usize,
    b: usize,
}

/// Plain depth-first search over sign vectors in lexicographic triple order.
/// Only negation is factored out (first basis is `+`); a relation is checked
/// once its last triple has been assigned. No propagation.
pub fn naive_orientable(m: &Rank3Matroid) -> bool {
    let n = m.n();
    let list = triple_list(n);
    let index: BTreeMap<[usize; 3], usize> = list.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let signed = |x: usize, y: usize, z: usize| -> (usize, i8) {
        let mut t = [x, y, z];
        let mut s = 1;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    s = -s;
                }
            }
        }
        (index[&t], s)
    };
    let mut checks: Vec<Vec<[Product; 3]>> = vec![Vec::new(); list.len()];
    for s in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if [a, b, c, d].contains(&s) {
                            continue;
                        }
                        let mk = |coef: i8, p: (usize, usize), q: (usize, usize)| -> Product {
                            let (ta, sa) = signed(s, p.0, p.1);
                            let (tb, sb) = signed(s, q.0, q.1);
                            Product { coef: coef * sa * sb, a: ta, b: tb }
                        };
                        let rel = [mk(1, (a, b), (c, d)), mk(-1, (a, c), (b, d)), mk(1, (a, d), (b, c))];
                        let last = rel.iter().map(|p| p.a.max(p.b)).max().unwrap();
                        checks[last].push(rel);
                    }
                }
            }
        }
    }
    let mut sign = vec![0i8; list.len()];
    let free: Vec<bool> = list.iter().map(|&[a, b, c]| !m.is_collinear(a, b, c)).collect();
    let Some(first) = free.iter().position(|&f| f) else {
        return false;
    };

    fn ok(rels: &[[Product; 3]], sign: &[i8]) -> bool {
        rels.iter().all(|rel| {
            let v: Vec<i8> = rel.iter().map(|p| p.coef * sign[p.a] * sign[p.b]).collect();
            v.iter().all(|&x| x == 0) || (v.contains(&1) && v.contains(&-1))
        })
    }

    fn dfs(t: usize, first: usize, free: &[bool], sign: &mut [i8], checks: &[Vec<[Product; 3]>]) -> bool {
        if t == sign.len() {
            return true;
        }
        let choices: &[i8] = if !free[t] {
            &[0]
        } else if t == first {
            &[1]
        } else {
            &[1, -1]
        };
        for &c in choices {
            sign[t] = c;
            if ok(&checks[t], sign) && dfs(t + 1, first, free, sign, checks) {
                return true;
            }
        }
        sign[t] = 0;
        false
    }

    dfs(0, first, &free, &mut sign, &checks)
}

/// Coefficients of the Poincaré polynomial from the Möbius function of the
/// lattice of flats, built from closures of point sets.
pub fn mobius_poincare(c: &Configuration) -> Vec<u64> {
    let n = c.n();
    let lines: Vec<BTreeSet<usize>> = c.lines().iter().map(|l| l.iter().copied().collect()).collect();
    let closure = |s: &BTreeSet<usize>| -> BTreeSet<usize> {
        match s.len() {
            0 | 1 => s.clone(),
            2 => lines.iter().find(|l| s.is_subset(l)).cloned().unwrap_or_else(|| s.clone()),
            _ => {
                if lines.iter().any(|l| s.is_subset(l)) {
                    lines.iter().find(|l| s.is_subset(l)).unwrap().clone()
                } else {
                    (0..n).collect()
                }
            }
        }
    };
    // flats with their rank
    let mut flats: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    flats.insert(BTreeSet::new(), 0);
    for a in 0..n {
        flats.insert([a].into(), 1);
        for b in a + 1..n {
            flats.insert(closure(&[a, b].into()), 2);
        }
    }
    flats.insert((0..n).collect(), 3);
    let mut order: Vec<(&BTreeSet<usize>, usize)> = flats.iter().map(|(f, &r)| (f, r)).collect();
    order.sort_by_key(|&(f, r)| (r, f.len()));
    let mut mu: BTreeMap<&BTreeSet<usize>, i64> = BTreeMap::new();
    let mut coeffs = vec![0u64; 4];
    for (i, &(f, r)) in order.iter().enumerate() {
        let m = if f.is_empty() {
            1
        } else {
            -order[..i].iter().filter(|(g, _)| g.is_subset(f) && *g != f).map(|(g, _)| mu[g]).sum::<i64>()
        };
        mu.insert(f, m);
        coeffs[r] += m.unsigned_abs();
    }
    coeffs.truncate(3);
    coeffs
}

/// Isomorphism by searching point permutations, assigning images in order
/// and rejecting as soon as a fully mapped line is not a line of `b`.
pub fn brute_isomorphic(a: &Configuration, b: &Configuration) -> bool {
    if a.n() != b.n() || a.k() != b.k() {
        return false;
    }
    let n = a.n();
    let target: BTreeSet<Vec<usize>> = b.lines().iter().cloned().collect();
    // lines of `a` grouped by their largest point
    let mut closing: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); n];
    for l in a.lines() {
        closing[*l.iter().max().unwrap()].push(l);
    }

    fn extend(
        p: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        closing: &[Vec<&Vec<usize>>],
        target: &BTreeSet<Vec<usize>>,
    ) -> bool {
        if p == used.len() {
            return true;
        }
        for img in 0..used.len() {
            if used[img] {
                continue;
            }
            perm.push(img);
            let fits = closing[p].iter().all(|l| {
                let mut m: Vec<usize> = l.iter().map(|&x| perm[x]).collect();
                m.sort_unstable();
                target.contains(&m)
            });
            if fits {
                used[img] = true;
                if extend(p + 1, perm, used, closing, target) {
                    return true;
                }
                used[img] = false;
            }
            perm.pop();
        }
        false
    }

    extend(0, &mut Vec::with_capacity(n), &mut vec![false; n], &closing, &target)
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Distinct points with small rational coordinates; collinear triples are
/// likely for small `spread`.
pub fn random_points(count: usize, spread: i64, rng: &mut impl Rng) -> Vec<(BigRational, BigRational)> {
    let mut out: Vec<(BigRational, BigRational)> = Vec::new();
    while out.len() < count {
        let mut q = || BigRational::new(rng.gen_range(-spread..=spread).into(), rng.gen_range(1..=3i64).into());
        let p = (q(), q());
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn data(name: &str) -> String {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}
