//! Command-line front end: parses a run description, evaluates it over the
//! requested sweep and writes CSV or JSON tables.

// `!(x > 0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use rayon::prelude::*;

use onebit::QuadratureSpec;

pub use args::{Cli, Command, FigureId, Format, Params, Quantity};
pub use commands::{expand, Point, TableCommand};
pub use error::CliError;
pub use figures::{figure, Series};
pub use table::{Column, Table};

/// What a successful or partially successful run produced.
#[derive(Debug)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    /// Sweep points that failed numerically; their rows are missing.
    pub failures: Vec<(usize, CliError)>,
}

fn meta_for(command: &str, params: &Params, base: &Point) -> Vec<(String, String)> {
    let mut m = vec![
        ("command".to_string(), command.to_string()),
        ("k".into(), base.k.to_string()),
        ("snr_db".into(), base.snr_db.to_string()),
    ];
    match (base.rho, base.doppler_hz, base.delay_s) {
        (Some(r), _, _) => m.push(("rho".into(), r.to_string())),
        (None, Some(fd), Some(tau)) => {
            m.push(("doppler_hz".into(), fd.to_string()));
            m.push(("delay_s".into(), tau.to_string()));
        }
        _ => m.push(("rho".into(), "default".into())),
    }
    m.push((
        "alpha".into(),
        base.alpha.map_or("default".into(), |a| a.to_string()),
    ));
    m.push(("rate_nats".into(), base.rate_nats.to_string()));
    m.push(("power_mode".into(), base.power_mode.to_string()));
    m.push(("n_blocks".into(), base.n_blocks.to_string()));
    m.push(("seed".into(), base.seed.to_string()));
    if let Some(s) = params.scheme {
        m.push(("scheme".into(), s.to_string()));
    }
    if let Some(q) = params.quantity {
        m.push(("quantity".into(), q.as_str().to_string()));
    }
    if !params.sweep.is_empty() {
        let s: Vec<String> = params.sweep.iter().map(|s| s.to_string()).collect();
        m.push(("sweep".into(), s.join(";")));
    }
    m
}

/// Figures have their own defaults, so only explicit overrides are echoed.
fn figure_meta(id: FigureId, curve: &str, params: &Params) -> Vec<(String, String)> {
    let mut m = vec![
        ("command".to_string(), "figure".to_string()),
        ("figure".into(), id.as_str().to_string()),
        ("curve".into(), curve.to_string()),
    ];
    let given = [
        ("k", params.k.map(|k| k.to_string())),
        ("snr_db", params.snr_db.map(|x| x.to_string())),
        ("rate_bits", params.rate_bits.map(|x| x.to_string())),
        ("rate_nats", params.rate_nats.map(|x| x.to_string())),
    ];
    for (key, value) in given {
        if let Some(v) = value {
            m.push((key.into(), v));
        }
    }
    if !params.sweep.is_empty() {
        let s: Vec<String> = params.sweep.iter().map(|s| s.to_string()).collect();
        m.push(("sweep".into(), s.join(";")));
    }
    m
}

fn table_command(command: &Command) -> Result<TableCommand, CliError> {
    Ok(match command {
        Command::Ergodic(_) => TableCommand::Ergodic,
        Command::Wideband(_) => TableCommand::Wideband,
        Command::Outage(_) => TableCommand::Outage,
        Command::Dmt(p) => TableCommand::Dmt(
            p.scheme
                .ok_or_else(|| CliError::usage("dmt needs --scheme"))?,
        ),
        Command::Simulate(p) => TableCommand::Simulate(p.quantity.unwrap_or(Quantity::Ergodic)),
        Command::Figure { .. } => unreachable!("figures are not single tables"),
    })
}

/// Evaluates a table command over its sweep. Points run in parallel; rows
/// come out in sweep order. Parameter errors abort the run, numerical
/// failures drop the point and are reported in the returned list.
pub fn build_table(command: &Command) -> Result<(Table, Vec<(usize, CliError)>), CliError> {
    let params = command.params();
    let cmd = table_command(command)?;
    let base = Point::from_params(params);
    let points = expand(&base, params)?;
    let q = QuadratureSpec::default();
    let results: Vec<_> = points.par_iter().map(|p| cmd.eval(p, &q)).collect();

    let mut table = Table::new(cmd.columns());
    table.meta = meta_for(command.name(), params, &base);
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rows) => table.rows.extend(rows),
            Err(e @ CliError::Numerical(_)) => failures.push((i, e)),
            Err(e) => return Err(e),
        }
    }
    if !failures.is_empty() {
        let idx: Vec<String> = failures.iter().map(|(i, _)| i.to_string()).collect();
        table.push_meta("status", "partial");
        table.push_meta("failed_points", idx.join(";"));
    }
    Ok((table, failures))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let params = cli.command.params();
    if let Command::Figure { id, params } = &cli.command {
        let dir = params
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(id.as_str()));
        fs::create_dir_all(&dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let mut written = Vec::new();
        for series in figure(*id, params)? {
            let mut table = series.table;
            table.meta = figure_meta(*id, &series.name, params);
            let path = dir.join(format!("{}.{}", series.name, params.format.extension()));
            write_file(&path, &table.encode(params.format))?;
            written.push(path);
        }
        return Ok(Outcome {
            written,
            failures: Vec::new(),
        });
    }

    let (table, failures) = build_table(&cli.command)?;
    let text = table.encode(params.format);
    let written = match &params.out {
        Some(path) => {
            write_file(path, &text)?;
            vec![path.clone()]
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
            Vec::new()
        }
    };
    Ok(Outcome { written, failures })
}

/// Parses `args`, runs, reports on stderr and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(outcome) if outcome.failures.is_empty() => 0,
        Ok(outcome) => {
            for (i, e) in &outcome.failures {
                eprintln!("onebit: sweep point {i}: {e}");
            }
            3
        }
        Err(e) => {
            eprintln!("onebit: {e}");
            e.exit_code()
        }
    }
}
