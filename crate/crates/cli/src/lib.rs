//! `owc`: analysis, sweeps and self-checks for optical wireless links from
//! TOML configuration files. See [`config`] for the file grammar.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use owc_core::analysis::compat::compat_report;
use owc_core::special_math::QuadratureSpec;

pub mod config;
pub mod evaluate;
pub mod output;
pub mod presets;
pub mod selftest;

use config::{Config, ConfigError, Overrides};
use evaluate::{evaluate_point, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "owc", version, about = "Optical wireless link analysis")]
pub struct Cli {
    /// Monte Carlo seed; overrides the config file.
    #[arg(long, global = true, env = "OWC_SEED")]
    pub seed: Option<u64>,
    /// Monte Carlo worker threads; overrides the config file.
    #[arg(long, global = true, env = "OWC_WORKERS")]
    pub workers: Option<usize>,
    /// Monte Carlo sample count; enables Monte Carlo when the config has no [mc] section.
    #[arg(long, global = true)]
    pub mc_samples: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every configured method at a single point.
    Analyze {
        config: PathBuf,
        /// Write the CSV here instead of after the table on stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// One CSV row per (point, method, metric).
    Sweep {
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Identity, normalization and Monte Carlo checks.
    Selftest {
        /// Force every tolerance to zero.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Published versus derived closed forms at the configured point, as JSON.
    Compat { config: PathBuf },
    /// List the built-in presets.
    Presets,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            workers: self.workers,
            mc_samples: self.mc_samples,
        }
    }
}

fn load(path: &Path, o: Overrides) -> Result<Config, i32> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        EXIT_CONFIG
    })?;
    Config::parse(&text, o).map_err(|e: ConfigError| {
        eprintln!("{}: {e}", path.display());
        EXIT_CONFIG
    })
}

fn all_rows(cfg: &Config) -> Vec<Row> {
    let axis = cfg.axis.map(|a| a.name()).unwrap_or("point");
    cfg.points
        .iter()
        .flat_map(|p| {
            evaluate_point(
                p,
                axis,
                &cfg.methods,
                &cfg.metrics,
                cfg.zeta,
                cfg.mc.as_ref(),
            )
        })
        .collect()
}

fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> i32 {
    let result = match path {
        Some(p) => fs::File::create(p).and_then(|mut file| f(&mut file)),
        None => f(&mut std::io::stdout().lock()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("write failed: {e}");
            EXIT_NUMERICAL
        }
    }
}

fn csv_io(rows: &[Row], w: &mut dyn Write) -> std::io::Result<()> {
    output::write_csv(rows, w).map_err(std::io::Error::other)
}

fn analyze(cli: &Cli, path: &Path, csv: Option<&Path>) -> i32 {
    let cfg = match load(path, cli.overrides()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let rows = all_rows(&Config {
        points: cfg.points[..1].to_vec(),
        ..cfg
    });
    let mut code = write_to(None, |w| output::write_table(&rows, w));
    if code == EXIT_OK {
        code = match csv {
            Some(p) => write_to(Some(p), |w| csv_io(&rows, w)),
            None => write_to(None, |w| {
                writeln!(w)?;
                csv_io(&rows, w)
            }),
        };
    }
    if let Some(failed) = rows.iter().find(|r| !r.is_ok()) {
        eprintln!(
            "numerical failure in method `{}`: {}",
            failed.method,
            failed.error.as_deref().unwrap_or_default()
        );
        return EXIT_NUMERICAL;
    }
    code
}

fn sweep(cli: &Cli, path: &Path, out: Option<&Path>) -> i32 {
    let cfg = match load(path, cli.overrides()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let rows = all_rows(&cfg);
    let code = write_to(out, |w| csv_io(&rows, w));
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", rows.len());
        return EXIT_PARTIAL;
    }
    code
}

fn compat(cli: &Cli, path: &Path) -> i32 {
    let cfg = match load(path, cli.overrides()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let p = &cfg.points[0];
    let Some(g) = p.pointing else {
        eprintln!("{}: compat needs a [pointing] geometry", path.display());
        return EXIT_CONFIG;
    };
    match compat_report(&p.ew, &g, &p.link, cfg.zeta, &QuadratureSpec::default()) {
        Ok(report) => write_to(None, |w| {
            serde_json::to_writer_pretty(&mut *w, &report).map_err(std::io::Error::other)?;
            writeln!(w)
        }),
        Err(e) => {
            eprintln!("compat report failed: {e}");
            EXIT_NUMERICAL
        }
    }
}

fn selftest(cli: &Cli, inject_fault: bool) -> i32 {
    let workers = cli.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let report = selftest::run(inject_fault, workers.max(1));
    let code = write_to(None, |w| {
        serde_json::to_writer_pretty(&mut *w, &report).map_err(std::io::Error::other)?;
        writeln!(w)
    });
    if report.passed {
        code
    } else {
        EXIT_SELFTEST
    }
}

fn list_presets() -> i32 {
    write_to(None, |w| {
        for name in presets::PRESET_NAMES {
            let p = presets::preset(name).expect("listed preset exists");
            writeln!(
                w,
                "{name:<22} Cn2 label {:.0e}  V = {} m  alpha = {} beta = {} eta = {:.5}  mu = {} m",
                p.cn2_label, p.visibility_m, p.ew.alpha, p.ew.beta, p.ew.eta, p.mu_x_m
            )?;
        }
        Ok(())
    })
}

/// Execute a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match &cli.command {
        Command::Analyze { config, csv } => analyze(&cli, config, csv.as_deref()),
        Command::Sweep { config, output } => sweep(&cli, config, output.as_deref()),
        Command::Selftest { inject_fault } => selftest(&cli, *inject_fault),
        Command::Compat { config } => compat(&cli, config),
        Command::Presets => list_presets(),
    }
}
