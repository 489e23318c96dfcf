//! Synchronous linear constraint system games over Z_p.
//!
//! The crate covers linear algebra over prime fields, the per-row solution
//! sets `S_i` of a system `A x = b`, the syncLCS game and its classical
//! strategies, the solution group presentation, the graph `G_{A,b}` with
//! the graph isomorphism game, and matrix-level certification of the
//! correspondences between their algebras.

pub mod cli;
pub mod error;
pub mod examples;
pub mod game;
pub mod graph;
pub mod group;
pub mod limits;
pub mod report;
pub mod star;
pub mod system;
pub mod zp;

pub use error::{Error, Result};
pub use limits::Limits;
pub use system::LinearSystem;
pub use zp::{FieldElem, ZpMatrix, ZpVector};
