//! Cell counts of a hypothetical pseudoline realization on the sphere and the
//! resulting necessary condition for n_k configurations.
//!
//! A general-position realization of an n_k configuration has `n` k-fold
//! crossings and `C(n,2) - n C(k,2)` simple crossings. On the sphere (the
//! double cover of the projective plane) every crossing appears twice, every
//! pseudoline becomes a great circle, and Euler's formula gives the number of
//! cells. Since no two pseudolines bound a digon, every cell has at least
//! three sides, hence `3 f2 <= 2 f1`. That inequality fails exactly when
//! `n <= k^2 + k - 5`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex, edge and cell counts on the sphere, plus `2 f1 - 3 f2`.
///
/// Values are signed: for `n < k(k-1) + 1` the closed forms go negative,
/// which simply means no configuration with these parameters exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCounts {
    pub f0: i64,
    pub f1: i64,
    pub f2: i64,
    pub digon_slack: i64,
}

impl EulerCounts {
    /// Completes `(f0, f1)` with Euler's formula.
    pub fn from_vertices_edges(f0: i64, f1: i64) -> Self {
        let f2 = f1 - f0 + 2;
        EulerCounts { f0, f1, f2, digon_slack: 2 * f1 - 3 * f2 }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f0 - self.f1 + self.f2
    }

    /// `3 f2 <= 2 f1`.
    pub fn digon_free_possible(&self) -> bool {
        self.digon_slack >= 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// No realization, not even with pseudolines.
    Impossible,
    /// The counting argument does not exclude a realization.
    Unresolved,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Impossible => "Impossible",
            Verdict::Unresolved => "Unresolved",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateVerdict {
    pub verdict: Verdict,
    /// `-n^2 - 5n + n k^2 + n k + 6`; positive means impossible.
    pub expression_value: i64,
    /// `k^2 + k - 5`: the largest excluded `n`.
    pub threshold: i64,
}

fn check(n: i64, k: i64) -> Result<()> {
    if k < 3 {
        return Err(Error::Parameters(format!("k must be at least 3, got {k}")));
    }
    if n < 1 {
        return Err(Error::Parameters(format!("n must be at least 1, got {n}")));
    }
    // keeps every intermediate product well inside i64
    if n > 1 << 20 || k > 1 << 10 {
        return Err(Error::Parameters(format!("(n, k) = ({n}, {k}) is out of range")));
    }
    Ok(())
}

pub fn euler_counts(n: i64, k: i64) -> Result<EulerCounts> {
    check(n, k)?;
    let f0 = n * (n - k * (k - 1) + 1);
    let f1 = 2 * n * (n - k * k + 2 * k - 1);
    Ok(EulerCounts::from_vertices_edges(f0, f1))
}

/// Value of `-n^2 - 5n + n k^2 + n k + 6`.
pub fn gate_expression(n: i64, k: i64) -> i64 {
    -n * n - 5 * n + n * k * k + n * k + 6
}

pub fn feasibility_gate(n: i64, k: i64) -> Result<GateVerdict> {
    check(n, k)?;
    let expression_value = gate_expression(n, k);
    let verdict = if expression_value > 0 { Verdict::Impossible } else { Verdict::Unresolved };
    Ok(GateVerdict { verdict, expression_value, threshold: k * k + k - 5 })
}

/// Smallest `n` that passes the gate for this `k`.
pub fn min_gate_passing_n(k: i64) -> Result<i64> {
    check(1, k)?;
    Ok(k * k + k - 4)
}
