use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{Command, ConfigFile, Format, RunConfig};
use crate::CliError;

/// Quantum tetrahedra, vertex amplitudes and a tomography rehearsal.
///
/// Angles accept plain radians or multiples of pi: `0.3`, `pi/5`, `3pi/2`.
#[derive(Debug, Parser)]
#[command(name = "spinfoam", version)]
pub struct Cli {
    /// Command to run; may instead come from `--config`.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Polar angle θ (repeatable, pairs with `--phi`).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Vec<String>,
    /// Azimuth φ (repeatable, pairs with `--theta`).
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Vec<String>,
    /// Number of θ samples for `sweep`.
    #[arg(long)]
    pub grid_theta: Option<String>,
    /// Number of φ samples for `sweep`.
    #[arg(long)]
    pub grid_phi: Option<String>,
    /// Named states, comma separated (A0..E1).
    #[arg(long)]
    pub states: Vec<String>,
    /// Dihedral sign convention: interior or normals.
    #[arg(long)]
    pub convention: Option<String>,
    /// Seed for restarts and noise.
    #[arg(long)]
    pub seed: Option<String>,

    /// Four face areas for `reconstruct`, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub areas: Option<String>,
    /// cos θ12 for `reconstruct`.
    #[arg(long, allow_hyphen_values = true)]
    pub cos12: Option<String>,
    /// cos θ13 for `reconstruct`.
    #[arg(long, allow_hyphen_values = true)]
    pub cos13: Option<String>,

    /// Five named states, one per node, for `amplitude`.
    #[arg(long)]
    pub nodes: Option<String>,
    /// Slot convention: lexicographic, cyclic or cyclic-reversed.
    #[arg(long)]
    pub slots: Option<String>,
    /// Named state placed on nodes 1-4.
    #[arg(long)]
    pub regular: Option<String>,
    /// Contraction route: sequential, bruteforce or table.
    #[arg(long)]
    pub route: Option<String>,

    /// Depolarizing probability for `experiment`.
    #[arg(long)]
    pub depolarizing: Option<String>,
    /// Standard deviation of the per-qubit z-rotation error (radians).
    #[arg(long)]
    pub rotation_sd: Option<String>,
    /// Pseudo-pure polarization.
    #[arg(long)]
    pub epsilon: Option<String>,

    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file of `key = value` parameters; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    fn flag_parameters(&self) -> Vec<(&'static str, Vec<String>)> {
        let one = |v: &Option<String>| v.iter().cloned().collect::<Vec<_>>();
        vec![
            ("theta", self.theta.clone()),
            ("phi", self.phi.clone()),
            ("grid-theta", one(&self.grid_theta)),
            ("grid-phi", one(&self.grid_phi)),
            ("states", self.states.clone()),
            ("convention", one(&self.convention)),
            ("seed", one(&self.seed)),
            ("areas", one(&self.areas)),
            ("cos12", one(&self.cos12)),
            ("cos13", one(&self.cos13)),
            ("nodes", one(&self.nodes)),
            ("slots", one(&self.slots)),
            ("regular", one(&self.regular)),
            ("route", one(&self.route)),
            ("depolarizing", one(&self.depolarizing)),
            ("rotation-sd", one(&self.rotation_sd)),
            ("epsilon", one(&self.epsilon)),
        ]
    }

    /// Merges flags over the optional config file.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let command = self
            .command
            .or(file.command)
            .ok_or_else(|| CliError::Config("no command given (pass one or set `command` in the config file)".into()))?;
        let mut parameters = file.parameters;
        for (key, values) in self.flag_parameters() {
            if !values.is_empty() {
                parameters.insert(key.to_string(), values);
            }
        }
        Ok(RunConfig {
            command,
            parameters,
            output_path: self.out.or(file.output_path),
            format: self.format.or(file.format).unwrap_or_default(),
        })
    }
}

/// Parses argv; clap errors (other than help/version) are returned as
/// their first line.
pub fn parse_args<I, T>(args: I) -> Result<Result<RunConfig, CliError>, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args).map(Cli::into_config)
}
