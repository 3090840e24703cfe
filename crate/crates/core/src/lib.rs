pub mod cli;
pub mod coloring;
pub mod error;
pub mod format;
pub mod geometry;
pub mod net;
pub mod oracle;
pub mod slope_game;
pub mod weaksim;

pub use error::{Error, Result};
