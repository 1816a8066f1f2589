//! Exact linear algebra over prime fields and the rationals, and limits and
//! colimits of finite poset diagrams of vector spaces.

pub mod diagram;
pub mod field;
pub mod hom;
pub mod matrix;

pub use diagram::{diagram_colimit, diagram_limit, validate_diagram, Colimit, Limit, PosetDiagram, Violation};
pub use field::{FieldSpec, Scalar};
pub use hom::{find_isomorphism, hom_basis, is_natural, Morphism};
pub use matrix::Matrix;
