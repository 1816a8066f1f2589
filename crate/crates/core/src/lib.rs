//! Multiparameter persistence modules over the extended grid `Z̄ⁿ`.
//!
//! A finitely determined module over `Zⁿ` is stored by its values on a box
//! `[a,b]` and read everywhere else through the convex projection. Adding the
//! infinitary points `−∞` turns such a module into a finitely presented one;
//! this crate decides determinacy by finite sets, builds encodings, births and
//! deaths, and constructs and verifies explicit finite presentations.

pub mod determinacy;
pub mod error;
pub mod extgrid;
pub mod format;
pub mod grid_module;
pub mod linalg;
pub mod presentation;
pub mod random;

pub use determinacy::{DeterminacyReport, Method};
pub use error::{Error, Result};
pub use extgrid::{ExtCoord, ExtPoint, GridBox, PointSet};
pub use grid_module::{ExtendedView, GridModule};
pub use linalg::{FieldSpec, Matrix, PosetDiagram, Scalar};
pub use presentation::{BirthDeathReport, Presentation};

/// Default margin around the box for critical grids.
pub const DEFAULT_MARGIN: i64 = 1;
