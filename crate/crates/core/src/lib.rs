pub mod analysis;
pub mod cli;
pub mod error;
pub mod exact_ball;
pub mod families;
pub mod lattice;
pub mod search;

pub use error::{Error, Result};
