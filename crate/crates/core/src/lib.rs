//! Query families for combinatorial group testing with smart elements.
//!
//! Elements of `[n]` see the answers to the queries that contain them and
//! may pool what they see. This crate represents query families, decides
//! which knowledge requirements (Models 1–4) a family meets, builds the
//! known solving families, searches small cases exhaustively, and simulates
//! adaptive questioners.

pub mod adaptive;
pub mod audit;
pub mod bitset;
pub mod constructions;
pub mod error;
pub mod exact_cover;
pub mod family;
pub mod knowledge;
pub mod search;

pub use bitset::ElementSet;
pub use error::{Error, Result};
pub use family::{Family, IndexedDual};
pub use knowledge::{ModelSpec, Verdict};
