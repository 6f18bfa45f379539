//! Exact combinatorics of tropicalization over a valued field: tropical
//! hypersurfaces and initial forms, Gamma-admissible fans and the special
//! fibers of their toric models, tilted semigroups, metrized complexes and
//! finite refinement towers.
//!
//! Conventions: min-plus throughout, so `trop(f)(v) = min_u (val(a_u) + <u, v>)`.
//! Value groups are `(1/d) Z`. All arithmetic is exact.

pub mod checks;
pub mod degeneration;
pub mod error;
pub mod exactnum;
pub mod linalg;
pub mod oracle;
pub mod polyhedra;
pub mod tilted;
pub mod tropical;
pub mod valpoly;

pub use error::{Error, Result};
pub use exactnum::{is_gamma_rational, pairing, LatticeVector, QVector, Rat, ValueGroup};
