//! Run configuration: command-line flags layered over an optional flat
//! `key = value` file, layered over built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "bsgraph", version, about = "Spectral gaps of periodic quantum graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Flat `key = value` file; keys are the long flag names without dashes.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Classify a delta lattice as having no, finitely many or infinitely many gaps.
    Analyze,
    /// List the gaps of a delta lattice up to a momentum cut-off.
    Gaps,
    /// Couplings giving exactly N gaps on the golden-mean lattice.
    Window,
    /// Build an edge ratio with prescribed gap behaviour.
    Construct,
    /// Scan a unit cell for bands and gaps with the secular function.
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Every setting is optional here so that flags and file can be merged.
#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// Edge length a.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Edge length b; defaults to a/theta.
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Exact ratio a/b, e.g. `(1+1*sqrt(5))/2` or `7/3`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Delta coupling strength.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Momentum cut-off.
    #[arg(long, global = true)]
    pub kmax: Option<f64>,
    /// Witness search horizon in m.
    #[arg(long, global = true)]
    pub mhorizon: Option<u64>,
    /// Number of gaps for `window`.
    #[arg(long = "N", global = true)]
    pub n: Option<u64>,
    /// Prefix parameter for `construct`.
    #[arg(long, global = true)]
    pub t: Option<u32>,
    /// Construction scheme: t, 1t or tt.
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    /// Seed irrational for `construct`.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Unit cell file in the `bsgraph.cell.v1` format.
    #[arg(long, global = true, value_name = "PATH")]
    pub cell: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Largest binary precision of the certification ladder.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Lower end of the scan range.
    #[arg(long, global = true)]
    pub kmin: Option<f64>,
    /// Scan step in k.
    #[arg(long, global = true)]
    pub kstep: Option<f64>,
    /// Quasimomentum grid points per component.
    #[arg(long = "theta-res", global = true)]
    pub theta_res: Option<usize>,
    /// Smallest min |F| accepted as a gap.
    #[arg(long = "gap-margin", global = true)]
    pub gap_margin: Option<f64>,
    /// |F| below this counts as a zero.
    #[arg(long = "band-tol", global = true)]
    pub band_tol: Option<f64>,
}

/// Parses only the options, used to read a config file with the same rules
/// as the command line.
#[derive(Debug, Parser)]
#[command(no_binary_name = true)]
struct FileOptions {
    #[command(flatten)]
    options: Options,
}

macro_rules! merge_fields {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        Options { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Options {
    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Options) -> Options {
        merge_fields!(self, lower; a, b, theta, alpha, kmax, mhorizon, n, t, scheme, beta, cell, format, out,
            precision, kmin, kstep, theta_res, gap_margin, band_tol)
    }

    /// Reads a config file. Blank lines and `#` comments are ignored.
    pub fn from_file(path: &Path) -> Result<Options, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut argv = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key = value, got {line:?}", path.display(), no + 1))
            })?;
            argv.push(format!("--{}", key.trim()));
            argv.push(value.trim().to_string());
        }
        let parsed = FileOptions::try_parse_from(&argv)
            .map_err(|e| CliError::Config(format!("{}: {}", path.display(), first_line(&e.to_string()))))?;
        let mut options = parsed.options;
        // Paths in the file are relative to the file.
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut options.cell, &mut options.out].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(options)
    }
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string()
}

impl Cli {
    /// Flags over file over defaults; defaults are applied per command.
    pub fn resolved_options(&self) -> Result<Options, CliError> {
        let file = match &self.config {
            Some(path) => Options::from_file(path)?,
            None => Options::default(),
        };
        Ok(self.options.clone().over(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let flags = Options { alpha: Some(2.0), ..Default::default() };
        let file = Options { alpha: Some(-1.0), kmax: Some(50.0), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.alpha, Some(2.0));
        assert_eq!(merged.kmax, Some(50.0));
        assert_eq!(merged.a, None);
    }

    #[test]
    fn file_keys_use_flag_names() {
        let dir = std::env::temp_dir().join(format!("bsgraph-config-unit-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\ntheta = (1+1*sqrt(5))/2\nalpha = -4.35  # inline\nN = 3\ntheta-res = 8\ncell = c.cell\n").unwrap();
        let o = Options::from_file(&path).unwrap();
        assert_eq!(o.theta.as_deref(), Some("(1+1*sqrt(5))/2"));
        assert_eq!(o.alpha, Some(-4.35));
        assert_eq!(o.n, Some(3));
        assert_eq!(o.theta_res, Some(8));
        assert_eq!(o.cell, Some(dir.join("c.cell")));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
