//! File formats, reports and the command-line front end for
//! [`cantorstab_core`].

pub mod cli;
pub mod doc;
pub mod error;
pub mod family_file;
pub mod output;

pub use error::{CliError, ExitCode};
