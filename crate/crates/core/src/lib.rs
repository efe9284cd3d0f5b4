//! Exact computation in wreath products `A ≀ B` and free solvable groups
//! `S_{r,d}`: word metrics, Fox calculus, Magnus embeddings, conjugacy
//! decision with verified conjugators, and an experiment harness for
//! conjugator lengths.

pub mod conjugacy;
pub mod error;
pub mod fox;
pub mod lab;
pub mod group;
pub mod literal;
pub mod magnus;
pub mod metric;
pub mod perm3;
pub mod word;
pub mod wreath;

pub use error::{Error, Result};
pub use group::{Element, Group};
pub use metric::Caps;
pub use word::ReducedWord;
