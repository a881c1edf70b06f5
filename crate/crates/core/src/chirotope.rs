//! Rank-3 chirotopes: storage, the three-term Grassmann–Plücker check,
//! construction from exact coordinates, and reorientation.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{ValidationReport, Violation};
use crate::matroid::Rank3Matroid;
use crate::triples;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(i8)]
pub enum Sign {
    Neg = -1,
    Zero = 0,
    Pos = 1,
}

impl Sign {
    pub fn from_i8(v: i8) -> Sign {
        match v.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }

    pub fn to_i8(self) -> i8 {
        self as i8
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign::from_i8(-self.to_i8())
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i8(self.to_i8() * rhs.to_i8())
    }
}

/// Alternating sign map on ordered triples, stored on sorted triples in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chirotope {
    n: usize,
    signs: Vec<Sign>,
}

impl Chirotope {
    /// `signs` must have one entry per sorted triple, in lexicographic order.
    pub fn new(n: usize, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != triples::count(n) {
            return Err(Error::SizeMismatch { expected: triples::count(n), found: signs.len() });
        }
        Ok(Chirotope { n, signs })
    }

    pub fn zero(n: usize) -> Self {
        Chirotope { n, signs: vec![Sign::Zero; triples::count(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign of an ordered triple; repeated elements give zero.
    pub fn get(&self, a: usize, b: usize, c: usize) -> Sign {
        if a == b || b == c || a == c {
            return Sign::Zero;
        }
        let (t, parity) = triples::sort_with_parity(a, b, c);
        let s = self.signs[triples::rank(self.n, t[0], t[1], t[2])];
        if parity < 0 {
            -s
        } else {
            s
        }
    }

    /// Sets the sign of an ordered triple, storing it with the alternating rule.
    pub fn set(&mut self, a: usize, b: usize, c: usize, s: Sign) {
        let (t, parity) = triples::sort_with_parity(a, b, c);
        self.signs[triples::rank(self.n, t[0], t[1], t[2])] = if parity < 0 { -s } else { s };
    }

    pub fn is_identically_zero(&self) -> bool {
        self.signs.iter().all(|&s| s == Sign::Zero)
    }

    /// Matroid whose dependent triples are the zeros of this map.
    pub fn underlying_matroid(&self) -> Result<Rank3Matroid> {
        let zeros = triples::iter(self.n).zip(&self.signs).filter(|(_, &s)| s == Sign::Zero).map(|(t, _)| t);
        Rank3Matroid::new(self.n, zeros)
    }

    /// `chi'(perm[a], perm[b], perm[c]) = chi(a, b, c)`.
    pub fn relabel(&self, perm: &[usize]) -> Chirotope {
        let mut out = Chirotope::zero(self.n);
        for ([a, b, c], &s) in triples::iter(self.n).zip(&self.signs) {
            out.set(perm[a], perm[b], perm[c], s);
        }
        out
    }

    pub fn negated(&self) -> Chirotope {
        Chirotope { n: self.n, signs: self.signs.iter().map(|&s| -s).collect() }
    }

    /// File form: `n` on the first line, then one character per sorted triple.
    pub fn to_file_string(&self) -> String {
        let body: String = self.signs.iter().map(|s| s.to_char()).collect();
        format!("{}\n{}\n", self.n, body)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = rows
            .next()
            .ok_or_else(|| Error::Parse("empty chirotope file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("chirotope size: {e}")))?;
        let body: String = rows.collect();
        let signs = body
            .chars()
            .map(|c| Sign::from_char(c).ok_or_else(|| Error::Parse(format!("bad sign character {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Chirotope::new(n, signs)
    }
}

impl fmt::Display for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

const MAX_REPORTED: usize = 20;

/// Checks for one pivot `x` and four further elements `a < b < c < d` that
/// the terms `chi(xab)chi(xcd)`, `-chi(xac)chi(xbd)`, `chi(xad)chi(xbc)` are
/// all zero or include both signs.
pub fn three_term_ok(chi: &Chirotope, x: usize, [a, b, c, d]: [usize; 4]) -> bool {
    let t1 = chi.get(x, a, b) * chi.get(x, c, d);
    let t2 = -(chi.get(x, a, c) * chi.get(x, b, d));
    let t3 = chi.get(x, a, d) * chi.get(x, b, c);
    let terms = [t1, t2, t3];
    let pos = terms.contains(&Sign::Pos);
    let neg = terms.contains(&Sign::Neg);
    pos == neg
}

/// Verifies that `chi` is a chirotope whose zero set is the set of collinear
/// triples of `m`.
pub fn is_chirotope(chi: &Chirotope, m: &Rank3Matroid) -> Result<ValidationReport> {
    if chi.n() != m.n() {
        return Err(Error::SizeMismatch { expected: m.n(), found: chi.n() });
    }
    let n = chi.n();
    let mut out = Vec::new();
    if chi.is_identically_zero() {
        out.push(Violation::new("identically-zero", "chirotope is identically zero", vec![]));
    }
    for (idx, [a, b, c]) in triples::iter(n).enumerate() {
        let zero = chi.signs[idx] == Sign::Zero;
        if zero != m.is_dependent_index(idx) && out.len() < MAX_REPORTED {
            let detail = if zero {
                format!("triple {{{a}, {b}, {c}}} is zero but not collinear")
            } else {
                format!("triple {{{a}, {b}, {c}}} is collinear but has nonzero sign")
            };
            out.push(Violation::new("zero-set", detail, vec![a as i64, b as i64, c as i64]));
        }
    }
    let mut gp_failures = 0usize;
    for_each_five_subset(n, |s| {
        for pivot in 0..5 {
            let x = s[pivot];
            let mut rest = [0usize; 4];
            let mut r = 0;
            for (i, &e) in s.iter().enumerate() {
                if i != pivot {
                    rest[r] = e;
                    r += 1;
                }
            }
            if !three_term_ok(chi, x, rest) {
                gp_failures += 1;
                if out.len() < MAX_REPORTED {
                    out.push(Violation::new(
                        "grassmann-plucker",
                        format!("three-term relation fails for pivot {x} and {rest:?}"),
                        std::iter::once(x).chain(rest).map(|e| e as i64).collect(),
                    ));
                }
            }
        }
    });
    if gp_failures > 0 && out.len() >= MAX_REPORTED {
        out.push(Violation::new(
            "grassmann-plucker",
            format!("{gp_failures} three-term failures in total"),
            vec![gp_failures as i64],
        ));
    }
    Ok(ValidationReport::from_violations(out))
}

pub(crate) fn for_each_five_subset(n: usize, mut f: impl FnMut([usize; 5])) {
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for e in d + 1..n {
                        f([a, b, c, d, e]);
                    }
                }
            }
        }
    }
}

/// Reads a points file: one point per line as two exact rationals
/// (`3`, `-2/7`), blank lines and `#` comments ignored.
pub fn parse_points(text: &str) -> Result<Vec<(BigRational, BigRational)>> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = fields[..] else {
            return Err(Error::Parse(format!("line {}: expected two coordinates", lineno + 1)));
        };
        let coord = |f: &str| {
            f.parse::<BigRational>().map_err(|_| Error::Parse(format!("line {}: bad rational {f:?}", lineno + 1)))
        };
        points.push((coord(x)?, coord(y)?));
    }
    Ok(points)
}

/// Inverse of [`parse_points`].
pub fn format_points(points: &[(BigRational, BigRational)]) -> String {
    points.iter().map(|(x, y)| format!("{x} {y}\n")).collect()
}

/// Orientation of the point triples of a planar point set: the sign of
/// `det [x_i y_i 1; x_j y_j 1; x_k y_k 1]`, computed exactly.
pub fn chirotope_from_points(points: &[(BigRational, BigRational)]) -> Result<Chirotope> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Parameters(format!("need at least 3 points, got {n}")));
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoint(i, j));
            }
        }
    }
    let signs = triples::iter(n).map(|[i, j, k]| orientation(&points[i], &points[j], &points[k])).collect();
    Chirotope::new(n, signs)
}

pub(crate) fn orientation(
    p: &(BigRational, BigRational),
    q: &(BigRational, BigRational),
    r: &(BigRational, BigRational),
) -> Sign {
    let det = (&q.0 - &p.0) * (&r.1 - &p.1) - (&q.1 - &p.1) * (&r.0 - &p.0);
    if det.is_zero() {
        Sign::Zero
    } else if det.is_positive() {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Multiplies every triple by `-1` once for each of its elements in
/// `flip_set`.
pub fn reorient(chi: &Chirotope, flip_set: &[usize]) -> Chirotope {
    let mut flip = vec![false; chi.n];
    for &e in flip_set {
        flip[e] = true;
    }
    let signs = triples::iter(chi.n)
        .zip(&chi.signs)
        .map(|(t, &s)| {
            let odd = t.iter().filter(|&&e| flip[e]).count() % 2 == 1;
            if odd {
                -s
            } else {
                s
            }
        })
        .collect();
    Chirotope { n: chi.n, signs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    fn square() -> Vec<(BigRational, BigRational)> {
        vec![(q(0), q(0)), (q(1), q(0)), (q(0), q(1)), (q(1), q(1))]
    }

    #[test]
    fn unit_triangle_is_positive() {
        let chi = chirotope_from_points(&[(q(0), q(0)), (q(1), q(0)), (q(0), q(1))]).unwrap();
        assert_eq!(chi.get(0, 1, 2), Sign::Pos);
        assert_eq!(chi.get(1, 0, 2), Sign::Neg);
        assert_eq!(chi.get(2, 0, 1), Sign::Pos);
    }

    #[test]
    fn points_file_round_trip() {
        let pts = parse_points("# square\n0 0\n1/2 -3\n\n4 7/3\n").unwrap();
        assert_eq!(pts[1], (BigRational::new(1.into(), 2.into()), q(-3)));
        assert_eq!(parse_points(&format_points(&pts)).unwrap(), pts);
        assert!(parse_points("1 2 3\n").is_err());
        assert!(parse_points("1 x\n").is_err());
    }

    #[test]
    fn collinear_points_give_zero() {
        let chi = chirotope_from_points(&[(q(0), q(0)), (q(1), q(1)), (q(2), q(2))]).unwrap();
        assert_eq!(chi.get(0, 1, 2), Sign::Zero);
    }

    #[test]
    fn duplicates_rejected() {
        let err = chirotope_from_points(&[(q(0), q(0)), (q(1), q(1)), (q(0), q(0))]);
        assert!(matches!(err, Err(Error::DuplicatePoint(0, 2))));
    }

    #[test]
    fn square_is_valid_for_free_matroid() {
        let chi = chirotope_from_points(&square()).unwrap();
        let report = is_chirotope(&chi, &Rank3Matroid::free(4)).unwrap();
        assert!(report.valid, "{report}");
    }

    #[test]
    fn all_zero_is_rejected() {
        let chi = Chirotope::zero(5);
        let report = is_chirotope(&chi, &Rank3Matroid::free(5)).unwrap();
        assert!(report.has_rule("identically-zero"));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let chi = Chirotope::zero(5);
        assert!(is_chirotope(&chi, &Rank3Matroid::free(6)).is_err());
    }

    #[test]
    fn file_round_trip() {
        let chi = chirotope_from_points(&square()).unwrap();
        let text = chi.to_file_string();
        assert_eq!(text, "4\n+-+-\n".replace("+-+-", &chi.to_string()));
        assert_eq!(Chirotope::parse(&text).unwrap(), chi);
        assert!(Chirotope::parse("4\n++\n").is_err());
        assert!(Chirotope::parse("3\nx\n").is_err());
    }

    #[test]
    fn reorient_extremes() {
        let chi = chirotope_from_points(&square()).unwrap();
        assert_eq!(reorient(&chi, &[]), chi);
        assert_eq!(reorient(&chi, &[0, 1, 2, 3]), chi.negated());
    }

    #[test]
    fn relabel_is_consistent_with_get() {
        let chi = chirotope_from_points(&square()).unwrap();
        let perm = [2, 0, 3, 1];
        let r = chi.relabel(&perm);
        for [a, b, c] in triples::iter(4) {
            assert_eq!(r.get(perm[a], perm[b], perm[c]), chi.get(a, b, c));
        }
    }
}
