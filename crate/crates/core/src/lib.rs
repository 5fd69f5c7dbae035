//! Locally deterministic tape machines, evaluated two ways.
//!
//! A [`machine::Machine`] is given by a local rule and updates a tape
//! directly. The same update can be recovered without consulting the rule:
//! [`machine::shape_category`] precomputes, once per machine, every small
//! generator together with the windows that explain it, and
//! [`kan_eval::evaluate`] glues the generators whose windows occur in the
//! input ([`colimit::glue`]). The remaining modules check the laws this
//! relies on at bounded scale.

pub mod cli;
pub mod colimit;
pub mod fincat;
pub mod kan_eval;
pub mod machine;
pub mod tape;

pub use colimit::{density_check, glue, GlueError, GlueResult, TapeDiagram};
pub use fincat::{FinCatPresentation, TapeSubcategory};
pub use kan_eval::{equivalence_sweep, evaluate, explain};
pub use machine::{shape_category, Machine, MachineSpec, ShapeCategory};
pub use tape::{Alphabet, Occurrence, TapeString};
