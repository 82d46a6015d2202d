//! Small-cancellation checks for presentations over free products, the
//! associated cubical presentations, and finite wallspaces with their dual
//! cube complexes.

pub mod cube;
pub mod cubical;
pub mod error;
pub mod pieces;
pub mod presentation;
pub mod pride;
pub mod snf;
pub mod wallspace;
pub mod word;

pub use error::{Error, Result};
