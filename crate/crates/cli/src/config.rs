//! Run configuration: a command, a flat key-value parameter map, an output
//! path and a format. Parameters come from flags, a TOML file, or both
//! (flags win).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Dihedral-angle expectations for Bloch points.
    Tetra,
    /// Total dihedral fluctuation.
    Fluct,
    /// Classical tetrahedron from areas and dihedral cosines.
    Reconstruct,
    /// Vertex amplitude for chosen node states.
    Amplitude,
    /// Amplitude over a (θ, φ) grid for node 5.
    Sweep,
    /// The ten-state amplitude table with its fitted scale.
    Table1,
    /// Coordinates and fluctuations of the named states.
    Table2,
    /// Noisy preparation, tomography and scoring.
    Experiment,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Tetra => "tetra",
            Command::Fluct => "fluct",
            Command::Reconstruct => "reconstruct",
            Command::Amplitude => "amplitude",
            Command::Sweep => "sweep",
            Command::Table1 => "table1",
            Command::Table2 => "table2",
            Command::Experiment => "experiment",
        }
    }

    /// Parameter keys the command understands.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Tetra => &["theta", "phi", "states", "convention"],
            Command::Fluct => &["theta", "phi", "states"],
            Command::Reconstruct => &["theta", "phi", "states", "areas", "cos12", "cos13", "convention", "seed"],
            Command::Amplitude => &["theta", "phi", "states", "nodes", "slots", "regular", "route"],
            Command::Sweep => &["grid-theta", "grid-phi", "slots", "regular"],
            Command::Table1 => &["slots", "regular"],
            Command::Table2 => &[],
            Command::Experiment => {
                &["theta", "phi", "states", "seed", "depolarizing", "rotation-sd", "nu", "jcoup", "epsilon"]
            }
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Command as ValueEnum>::from_str(s, true).map_err(|_| CliError::Config(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true).map_err(|_| CliError::Config(format!("unknown format `{s}` (csv or json)")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Every value is kept as text; list-valued keys hold several entries.
    pub parameters: BTreeMap<String, Vec<String>>,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// Contents of a config file before flags are merged in.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub parameters: BTreeMap<String, Vec<String>>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

fn normalise_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

fn flatten(value: &toml::Value, key: &str, out: &mut Vec<String>) -> Result<(), CliError> {
    match value {
        toml::Value::String(s) => out.push(s.clone()),
        toml::Value::Integer(i) => out.push(i.to_string()),
        toml::Value::Float(x) => out.push(format!("{x:?}")),
        toml::Value::Boolean(b) => out.push(b.to_string()),
        toml::Value::Array(items) => {
            for item in items {
                flatten(item, key, out)?;
            }
        }
        _ => return Err(CliError::Config(format!("config key `{key}` must be a scalar or an array"))),
    }
    Ok(())
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            CliError::Config(format!("config file: {}", e.message()))
        })?;
        let mut file = ConfigFile::default();
        for (raw_key, value) in &table {
            let key = normalise_key(raw_key);
            let mut values = Vec::new();
            flatten(value, &key, &mut values)?;
            let single = || -> Result<String, CliError> {
                match values.as_slice() {
                    [v] => Ok(v.clone()),
                    _ => Err(CliError::Config(format!("config key `{key}` takes a single value"))),
                }
            };
            match key.as_str() {
                "command" => file.command = Some(single()?.parse()?),
                "format" => file.format = Some(single()?.parse()?),
                "out" | "output" => file.output_path = Some(PathBuf::from(single()?)),
                _ => {
                    file.parameters.insert(key, values);
                }
            }
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse(&text)
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self { command, parameters: BTreeMap::new(), output_path: None, format: Format::Csv }
    }

    /// Appends one value under `key`.
    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.parameters.entry(normalise_key(key)).or_default().push(value.into());
        self
    }

    pub fn with_format(mut self, format: Format) -> Self {
        self.format = format;
        self
    }

    pub fn with_output(mut self, path: impl Into<PathBuf>) -> Self {
        self.output_path = Some(path.into());
        self
    }

    /// Rejects keys the command does not understand.
    pub fn validate(&self) -> Result<(), CliError> {
        let known = self.command.keys();
        for key in self.parameters.keys() {
            if !known.contains(&key.as_str()) {
                return Err(CliError::Config(format!("parameter `{key}` is not used by `{}`", self.command)));
            }
        }
        Ok(())
    }

    /// All values under `key`, with comma-separated entries split.
    pub fn list(&self, key: &str) -> Vec<String> {
        self.parameters
            .get(key)
            .map(|vs| vs.iter().flat_map(|v| v.split(',')).map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
            .unwrap_or_default()
    }

    pub fn single(&self, key: &str) -> Result<Option<String>, CliError> {
        let mut values = self.list(key);
        match values.len() {
            0 => Ok(None),
            1 => Ok(values.pop()),
            n => Err(CliError::Config(format!("`{key}` takes one value, got {n}"))),
        }
    }

    pub fn angles(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.list(key).iter().map(|s| parse_angle(s).map_err(|e| CliError::Config(format!("`{key}`: {e}")))).collect()
    }

    pub fn numbers(&self, key: &str) -> Result<Vec<f64>, CliError> {
        self.list(key)
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("`{key}`: `{s}` is not a number"))))
            .collect()
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.single(key)?
            .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("`{key}`: `{s}` is not a number"))))
            .transpose()
    }

    pub fn integer<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.single(key)?
            .map(|s| s.parse::<T>().map_err(|_| CliError::Config(format!("`{key}`: `{s}` is not a valid integer"))))
            .transpose()
    }
}

/// Parses `0.3`, `pi`, `-pi/4`, `3pi/2`, `3*pi/2`, `0.5pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{text}` is not an angle");
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let coeff = match s[..at].trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &s[at + 2..];
    let divisor = match rest {
        "" => 1.0,
        _ => rest.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if divisor == 0.0 {
        return Err(bad());
    }
    Ok(coeff * std::f64::consts::PI / divisor)
}
