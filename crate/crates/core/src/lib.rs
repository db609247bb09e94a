//! Index pairings for C*-algebras of Cantor minimal systems.
//!
//! The crate is layered bottom-up: symbolic words and points, the dynamics
//! acting on them, K-theory of the associated algebras, the golden-mean AF
//! embedding, and finally the Fredholm modules and crossed-product triples
//! whose pairings are evaluated by several independent routes.

pub mod af_embedding;
pub mod crossed_product;
pub mod dynamics;
pub mod fredholm;
pub mod k_theory;
pub mod linalg;
pub mod parallel;
pub mod symbolic;

/// Library version written into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
