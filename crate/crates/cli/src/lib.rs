//! Command-line front end: every data set the core library can produce is
//! reachable through one subcommand, written as CSV or JSON.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use thiserror::Error;

pub use args::{parse_args, Cli};
pub use config::{Command, ConfigFile, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Config(String),
    #[error("cannot write {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{0}")]
    Stdout(String),
    #[error(transparent)]
    Tetra(#[from] spinfoam_core::tetrahedron::TetraError),
    #[error(transparent)]
    Geometry(#[from] spinfoam_core::geometry::GeometryError),
    #[error(transparent)]
    Amplitude(#[from] spinfoam_core::amplitude::AmplitudeError),
    #[error(transparent)]
    Tomography(#[from] spinfoam_core::tomography::TomographyError),
}

/// Runs one command and writes its output.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let text = render(config)?;
    match &config.output_path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io { path: path.clone(), message: e.to_string() }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::Stdout(e.to_string()))
        }
    }
}

/// The text `run` would write.
pub fn render(config: &RunConfig) -> Result<String, CliError> {
    config.validate()?;
    let output = commands::execute(config)?;
    Ok(match config.format {
        Format::Csv => output.to_csv(),
        Format::Json => output.to_json(config.command.name()),
    })
}
