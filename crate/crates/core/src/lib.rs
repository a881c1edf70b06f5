//! Combinatorial n_k point-line configurations and the tools needed to decide
//! whether they can be drawn with pseudolines.
//!
//! The crate is organised around a handful of objects:
//!
//! * [`Configuration`]: an n_k incidence structure (n points, n lines, every
//!   point on k lines, every line through k points, two lines meeting at most
//!   once), together with validation, polarity and the Levi graph.
//! * [`eulergate`]: the cell-counting argument for a hypothetical pseudoline
//!   realization on the sphere, giving the necessary condition `n > k^2 + k - 5`.
//! * [`Rank3Matroid`], [`CanonicalCode`] and the Poincaré polynomial.
//! * [`Chirotope`] and the sign-propagating [`orientability`] search.
//! * [`enumerate`]: isomorph-free generation of all n_k configurations.
//! * [`WiringDiagram`]: pseudoline arrangements as sweeps with multi-crossings.

pub mod canon;
pub mod chirotope;
pub mod enumerate;
pub mod error;
pub mod eulergate;
pub mod incidence;
pub mod matroid;
pub mod solver;
pub mod triples;
pub mod wiring;

pub use canon::{
    are_isomorphic, canonical_code, canonical_configuration, canonical_form, CanonicalCode, CanonicalForm,
};
pub use chirotope::{
    chirotope_from_points, format_points, is_chirotope, parse_points, reorient, three_term_ok, Chirotope, Sign,
};
pub use enumerate::{
    classify_orientability, enumerate_configurations, enumerate_naive, naive_isomorphic, CensusEntry,
    ClassificationSummary, EnumerateOptions,
};
pub use error::{Error, Result};
pub use eulergate::{
    euler_counts, feasibility_gate, gate_expression, min_gate_passing_n, EulerCounts, GateVerdict, Verdict,
};
pub use incidence::{
    dualize, fano, generalize, levi_graph, mobius_kantor, pappus, pappus_points, validate, Configuration, LeviGraph,
    RawConfiguration, ValidationReport, Violation,
};
pub use matroid::{poincare_polynomial, PoincarePolynomial, Rank3Matroid};
pub use solver::{orientability, OrientabilityResult, Outcome, SearchStats, SolverOptions, Symmetry, VarOrder};
pub use wiring::{chirotope_of_wiring, validate_wiring, Event, WiringDiagram};
