//! File formats, JSON configuration and the command-line front end for
//! [`anycam_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod imageio;
pub mod lutfile;
pub mod pfm;
pub mod ply;

pub use error::{CliError, Result};
