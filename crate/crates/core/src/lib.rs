//! Belief merging under unknown source reliability.

pub mod cli;
pub mod distance;
pub mod error;
pub mod formula;
pub mod geometry;
pub mod instancegen;
pub mod io;
pub mod lp;
pub mod maxcons;
pub mod merge;
pub mod postulates;
pub mod weights;

pub use error::{Error, Result};
