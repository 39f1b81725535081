//! Deterministic generators for the explicit solving families.
//!
//! Every generator returns members with sorted elements, listed in sorted
//! order, so output is reproducible byte for byte.

mod binary;
mod pbd;
mod steiner;
mod ternary;

pub use binary::{binary_separating, sperner_code_family, sperner_code_length};
pub use pbd::{extend_model4_solution, model4_n8_family, pbd34, pbd345};
pub use steiner::{model4_sts_minus_matching, resolvable_sts, steiner_triple_system, sts_bose, sts_skolem, Resolvable};
pub use ternary::{model3prime_bound, model3prime_family, TernaryProfile};
