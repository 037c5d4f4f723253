//! Configuration, file formats, parallel scan drivers and CSV/JSON output
//! for `qsubrad-core`. The `qsubrad` binary is a thin shell over [`run`].

pub mod config;
pub mod error;
pub mod formats;
pub mod output;
pub mod run;

pub use config::RunConfig;
pub use error::CliError;
pub use output::Table;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
