//! Hypergraphs defined by quadratic residues of symmetric polynomials over
//! finite fields of odd order, with exact counting and bound checks.

pub mod admissible;
pub mod bounds;
pub mod campaign;
pub mod error;
pub mod ff;
pub mod hypergraph;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use ff::{CharVariant, Field, FieldElement};
pub use poly::{parse_poly, MultiPoly, UniPoly};
pub use report::{CheckRecord, CountReport};
