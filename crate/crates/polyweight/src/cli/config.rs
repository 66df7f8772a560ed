//! Experiment configuration and its `key = value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bernstein,
    Remez,
    Nikolskii,
    Decay,
    EquivK,
    Counterexample,
    Markov,
    Mrs,
    WeightInfo,
    Staircase,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Bernstein,
        Command::Remez,
        Command::Nikolskii,
        Command::Decay,
        Command::EquivK,
        Command::Counterexample,
        Command::Markov,
        Command::Mrs,
        Command::WeightInfo,
        Command::Staircase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bernstein => "bernstein",
            Command::Remez => "remez",
            Command::Nikolskii => "nikolskii",
            Command::Decay => "decay",
            Command::EquivK => "equiv-k",
            Command::Counterexample => "counterexample",
            Command::Markov => "markov",
            Command::Mrs => "mrs",
            Command::WeightInfo => "weight-info",
            Command::Staircase => "staircase",
        }
    }

    /// Degrees used when the config gives none.
    pub fn default_n(self) -> Vec<u64> {
        match self {
            Command::Bernstein | Command::Nikolskii => vec![4, 8, 16, 32],
            Command::Remez => vec![8, 16, 32, 64],
            Command::Decay => vec![64, 1024],
            Command::EquivK => vec![32],
            Command::Counterexample => vec![2, 3, 4],
            Command::Markov => vec![2, 3, 4, 5, 6, 7, 8],
            Command::Mrs => vec![100, 1000, 10_000, 100_000],
            Command::WeightInfo => (3..=15).map(|j| 1u64 << j).collect(),
            Command::Staircase => vec![5, 6, 7],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Everything that determines a run; the seed fixes every random choice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub weight: String,
    pub n: Vec<u64>,
    pub p: f64,
    pub q: f64,
    /// Constant to check against, where the command has one.
    pub c: Option<f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
    pub samples: usize,
    pub k_max: u64,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        let p = match command {
            Command::Bernstein | Command::Nikolskii => 2.0,
            _ => f64::INFINITY,
        };
        ExperimentConfig {
            command,
            weight: "one".into(),
            n: command.default_n(),
            p,
            q: f64::INFINITY,
            c: None,
            alpha: 1.0,
            gamma: 0.05,
            tol: 1e-9,
            seed: 0,
            restarts: 16,
            samples: if command == Command::Staircase { 4 } else { 32 },
            k_max: 64,
            csv: None,
            json: None,
            svg: None,
        }
    }
}

/// Parses `4,8,16`, `3..6` (inclusive) or a mix of both.
pub fn parse_n_list(text: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start `{a}`"))?;
                let b: u64 = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end `{b}`"))?;
                if b < a {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("bad degree `{part}`"))?),
        }
    }
    if out.is_empty() {
        return Err("empty degree list".into());
    }
    Ok(out)
}

fn join(n: &[u64]) -> String {
    n.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command = {}", self.command)?;
        writeln!(f, "weight = {}", self.weight)?;
        writeln!(f, "n = {}", join(&self.n))?;
        writeln!(f, "p = {:?}", self.p)?;
        writeln!(f, "q = {:?}", self.q)?;
        if let Some(c) = self.c {
            writeln!(f, "c = {c:?}")?;
        }
        writeln!(f, "alpha = {:?}", self.alpha)?;
        writeln!(f, "gamma = {:?}", self.gamma)?;
        writeln!(f, "tol = {:?}", self.tol)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "restarts = {}", self.restarts)?;
        writeln!(f, "samples = {}", self.samples)?;
        writeln!(f, "k_max = {}", self.k_max)?;
        for (key, path) in [("csv", &self.csv), ("json", &self.json), ("svg", &self.svg)] {
            if let Some(path) = path {
                writeln!(f, "{key} = {}", path.display())?;
            }
        }
        Ok(())
    }
}

fn value<T: FromStr>(text: &str, line: usize, column: usize) -> Result<T, CliError> {
    text.parse().map_err(|_| CliError::Config {
        line,
        column,
        message: format!("cannot parse `{text}`"),
    })
}

impl FromStr for ExperimentConfig {
    type Err = CliError;

    /// Blank lines and `#` comments are skipped; `command` must come first.
    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut config: Option<ExperimentConfig> = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, rest) = raw.split_once('=').ok_or_else(|| CliError::Config {
                line,
                column: 1,
                message: "expected `key = value`".into(),
            })?;
            let column = key.len() + 2 + (rest.len() - rest.trim_start().len());
            let (key, val) = (key.trim(), rest.trim());
            let bad = |message: String| CliError::Config {
                line,
                column,
                message,
            };
            let Some(cfg) = config.as_mut() else {
                if key != "command" {
                    return Err(CliError::Config {
                        line,
                        column: 1,
                        message: "`command` must come first".into(),
                    });
                }
                config = Some(ExperimentConfig::new(val.parse().map_err(bad)?));
                continue;
            };
            match key {
                "weight" => cfg.weight = val.to_string(),
                "n" => cfg.n = parse_n_list(val).map_err(bad)?,
                "p" => cfg.p = value(val, line, column)?,
                "q" => cfg.q = value(val, line, column)?,
                "c" => cfg.c = Some(value(val, line, column)?),
                "alpha" => cfg.alpha = value(val, line, column)?,
                "gamma" => cfg.gamma = value(val, line, column)?,
                "tol" => cfg.tol = value(val, line, column)?,
                "seed" => cfg.seed = value(val, line, column)?,
                "restarts" => cfg.restarts = value(val, line, column)?,
                "samples" => cfg.samples = value(val, line, column)?,
                "k_max" => cfg.k_max = value(val, line, column)?,
                "csv" => cfg.csv = Some(val.into()),
                "json" => cfg.json = Some(val.into()),
                "svg" => cfg.svg = Some(val.into()),
                "command" => {
                    return Err(CliError::Config {
                        line,
                        column: 1,
                        message: "duplicate `command`".into(),
                    })
                }
                other => {
                    return Err(CliError::Config {
                        line,
                        column: 1,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        config.ok_or(CliError::Config {
            line: 1,
            column: 1,
            message: "missing `command`".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut cfg = ExperimentConfig::new(Command::Counterexample);
        cfg.weight = "omega(exppow:1,sin)".into();
        cfg.n = vec![3, 4, 5, 6];
        cfg.p = 0.1 + 0.2;
        cfg.c = Some(1e-300);
        cfg.json = Some("out/report.json".into());
        let again: ExperimentConfig = cfg.to_string().parse().unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_string(), cfg.to_string());
    }

    #[test]
    fn degree_lists() {
        assert_eq!(parse_n_list("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_n_list("4, 8,10..11").unwrap(), vec![4, 8, 10, 11]);
        assert!(parse_n_list("6..3").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match "command = decay\nn = 4\np =  two".parse::<ExperimentConfig>() {
            Err(CliError::Config { line, column, .. }) => assert_eq!((line, column), (3, 6)),
            other => panic!("{other:?}"),
        }
        assert!("weight = one".parse::<ExperimentConfig>().is_err());
        assert!("command = nope".parse::<ExperimentConfig>().is_err());
    }
}
