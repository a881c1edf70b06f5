//! Simple rank-3 matroids given by their dependent triples, and the
//! Poincaré polynomial of a general-position configuration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::Configuration;
use crate::triples;

/// A simple rank-3 matroid on `0..n`: every triple not listed as collinear is
/// a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank3Matroid {
    n: usize,
    collinear: Vec<[usize; 3]>,
    dependent: Vec<bool>,
}

impl Rank3Matroid {
    /// Builds a matroid from its collinear triples, checking that triples
    /// sharing a pair close up into lines.
    pub fn new(n: usize, triples_in: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for t in triples_in {
            let (s, _) = triples::sort_with_parity(t[0], t[1], t[2]);
            if s[0] == s[1] || s[1] == s[2] || s[2] >= n {
                return Err(Error::Parameters(format!("bad triple {t:?} for n = {n}")));
            }
            set.insert(s);
        }
        let m = Self::from_sorted_triples_unchecked(n, set.into_iter().collect());
        m.check_closure()?;
        Ok(m)
    }

    pub(crate) fn from_sorted_triples_unchecked(n: usize, mut collinear: Vec<[usize; 3]>) -> Self {
        collinear.sort_unstable();
        collinear.dedup();
        let mut dependent = vec![false; triples::count(n)];
        for t in &collinear {
            dependent[triples::rank(n, t[0], t[1], t[2])] = true;
        }
        Rank3Matroid { n, collinear, dependent }
    }

    /// The free matroid: no three points collinear.
    pub fn free(n: usize) -> Self {
        Self::from_sorted_triples_unchecked(n, Vec::new())
    }

    fn check_closure(&self) -> Result<()> {
        for line in self.lines() {
            for a in 0..line.len() {
                for b in a + 1..line.len() {
                    for c in b + 1..line.len() {
                        if !self.is_collinear(line[a], line[b], line[c]) {
                            return Err(Error::Parameters(format!(
                                "collinear triples do not close up: {:?} should be collinear",
                                [line[a], line[b], line[c]]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted list of dependent triples.
    pub fn collinear(&self) -> &[[usize; 3]] {
        &self.collinear
    }

    /// Any order of distinct arguments is accepted.
    pub fn is_collinear(&self, a: usize, b: usize, c: usize) -> bool {
        let (t, _) = triples::sort_with_parity(a, b, c);
        self.dependent[triples::rank(self.n, t[0], t[1], t[2])]
    }

    /// Lookup by lexicographic triple index.
    pub fn is_dependent_index(&self, index: usize) -> bool {
        self.dependent[index]
    }

    /// Maximal sets of three or more collinear points, sorted.
    pub fn lines(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in &self.collinear {
            let mut line: Vec<usize> =
                (0..self.n).filter(|&p| p == t[0] || p == t[1] || self.is_collinear_pair_with(t[0], t[1], p)).collect();
            line.sort_unstable();
            out.insert(line);
        }
        out.into_iter().collect()
    }

    fn is_collinear_pair_with(&self, a: usize, b: usize, p: usize) -> bool {
        p != a && p != b && self.is_collinear(a, b, p)
    }

    /// Applies `p -> perm[p]` to the ground set.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let triples =
            self.collinear.iter().map(|t| triples::sort_with_parity(perm[t[0]], perm[t[1]], perm[t[2]]).0).collect();
        Self::from_sorted_triples_unchecked(self.n, triples)
    }
}

/// Coefficients of `b0 + b1 t + b2 t^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincarePolynomial {
    pub b0: u64,
    pub b1: u64,
    pub b2: u64,
}

/// Poincaré polynomial of the line arrangement of `c` in general position:
/// the `n` k-fold points contribute `k - 1` each and every remaining pair of
/// lines meets in a simple crossing.
pub fn poincare_polynomial(c: &Configuration) -> Result<PoincarePolynomial> {
    let (n, k) = (c.n() as u64, c.k() as u64);
    let pairs = n * (n - 1) / 2;
    let covered = n * k * (k - 1) / 2;
    if pairs < covered {
        return Err(Error::InvalidConfiguration(format!("{covered} covered pairs exceed the {pairs} available")));
    }
    Ok(PoincarePolynomial { b0: 1, b1: n, b2: n * (k - 1) + (pairs - covered) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{fano, generalize};

    #[test]
    fn closure_is_enforced() {
        assert!(Rank3Matroid::new(5, [[0, 1, 2], [0, 1, 3]]).is_err());
        assert!(Rank3Matroid::new(5, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).is_ok());
        assert!(Rank3Matroid::new(3, [[0, 0, 1]]).is_err());
    }

    #[test]
    fn lines_of_fano_matroid() {
        let m = generalize(&fano());
        assert_eq!(m.lines(), fano().lines().to_vec());
    }

    #[test]
    fn fano_polynomial() {
        // 7 triple points, no simple crossings
        let p = poincare_polynomial(&fano()).unwrap();
        assert_eq!(p, PoincarePolynomial { b0: 1, b1: 7, b2: 14 });
    }
}
