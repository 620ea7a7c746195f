//! `sho-delta` command line.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::greens::{g_grid, GreensError, GreensGrid, GreensValue};
use crate::io::{num, opt_num, sibling, write_csv, write_file, write_json, Format, IoError, RunManifest};
use crate::oracle::{oracle_spectrum, OracleConfig, OracleError, OracleMode, DEFAULT_TAIL_MODES};
use crate::spectra::{solve_spectrum, sweep_one_delta, wavefunction_for_level, SpectraError, SpectrumResult};
use crate::tables::{compute_table, render_table, ComputedTable, TableId, TABLE_LAMBDAS};
use crate::units::{DeltaSpike, Epsilon};
use crate::verify::{run_suite, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 usage (including unwritable paths),
    /// 3 numeric or domain failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<GreensError> for CliError {
    fn from(e: GreensError) -> Self {
        match e {
            GreensError::InvalidInput(m) => CliError::Usage(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::InvalidInput(m) => CliError::Usage(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::InvalidConfig(m) => CliError::Usage(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sho-delta", version, about = "Green's functions and bound states of the harmonic oscillator with delta spikes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the bare (or single-spike dressed) Green's function on a square grid.
    G0Grid(GridArgs),
    /// Lowest levels for one or two spikes.
    Spectrum(SpectrumArgs),
    /// Sample a normalized eigenfunction.
    Wavefunction(WavefunctionArgs),
    /// Regenerate a table or figure data set.
    Reproduce(ReproduceArgs),
    /// Run invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 5.0)]
    pub range: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Spike as `a,lambda`.
    #[arg(long, allow_hyphen_values = true)]
    pub spike: Option<DeltaSpike>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleModeArg {
    Folded,
    Truncated,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Spike as `a,lambda`; give once or twice.
    #[arg(long = "spike", required = true, allow_hyphen_values = true)]
    pub spikes: Vec<DeltaSpike>,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    /// Also diagonalize the matrix oracle and report per-level deltas.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 200)]
    pub oracle_basis: usize,
    #[arg(long, value_enum, default_value_t = OracleModeArg::Folded)]
    pub oracle_mode: OracleModeArg,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[arg(long = "spike", required = true, allow_hyphen_values = true)]
    pub spikes: Vec<DeltaSpike>,
    #[arg(long, default_value_t = 0)]
    pub level: usize,
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    /// Samples cover [−range, range].
    #[arg(long, default_value_t = 4.0)]
    pub range: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Artifact {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub table: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub figure: Option<u8>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[command(flatten)]
    pub artifact: Artifact,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::G0Grid(a) => cmd_g0_grid(&a),
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Wavefunction(a) => cmd_wavefunction(&a),
        Command::Reproduce(a) => cmd_reproduce(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn epsilon(value: f64) -> Result<Epsilon, CliError> {
    Epsilon::new(value).map_err(|e| CliError::Usage(e.to_string()))
}

fn spike_strings(spikes: &[DeltaSpike]) -> Vec<String> {
    spikes.iter().map(|s| format!("{},{}", s.position(), s.strength())).collect()
}

fn grid_rows(values: &[GreensValue]) -> Vec<Vec<String>> {
    values.iter().map(|v| vec![num(v.xi), num(v.upsilon), num(v.value)]).collect()
}

#[derive(Serialize)]
struct GridJson<'a> {
    axis: &'a [f64],
    grid: Vec<[f64; 3]>,
    diagonal: Vec<[f64; 3]>,
    antidiagonal: Vec<[f64; 3]>,
}

fn triples(values: &[GreensValue]) -> Vec<[f64; 3]> {
    values.iter().map(|v| [v.xi, v.upsilon, v.value]).collect()
}

/// Writes a grid and its sections; returns the written paths.
fn write_grid(grid: &GreensGrid, out: &Path, format: Format, manifest: &mut RunManifest) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let header = ["xi", "upsilon", "g"];
            write_csv(out, &header, &grid_rows(&grid.values))?;
            manifest.output(out);
            for (suffix, section) in [("diag.csv", &grid.diagonal), ("antidiag.csv", &grid.antidiagonal)] {
                let path = sibling(out, suffix);
                write_csv(&path, &header, &grid_rows(section))?;
                manifest.output(&path);
            }
        }
        Format::Json => {
            manifest.output(out);
            let data = GridJson {
                axis: &grid.axis,
                grid: triples(&grid.values),
                diagonal: triples(&grid.diagonal),
                antidiagonal: triples(&grid.antidiagonal),
            };
            write_json(out, manifest, &data)?;
        }
    }
    Ok(())
}

pub fn cmd_g0_grid(a: &GridArgs) -> Result<(), CliError> {
    let eps = epsilon(a.epsilon)?;
    let grid = g_grid(a.range, a.points, eps, a.spike)?;
    let mut manifest = RunManifest::new("g0-grid");
    manifest
        .param("epsilon", a.epsilon)
        .param("range", a.range)
        .param("points", a.points)
        .param("spike", a.spike.map(|s| spike_strings(&[s])[0].clone()))
        .param("format", a.format);
    write_grid(&grid, &a.out, a.format, &mut manifest)?;
    manifest.write_beside(&a.out)?;
    Ok(())
}

fn oracle_config(a: &SpectrumArgs) -> OracleConfig {
    match a.oracle_mode {
        OracleModeArg::Folded => OracleConfig {
            mode: OracleMode::Folded {
                tail_modes: DEFAULT_TAIL_MODES,
            },
            ..OracleConfig::folded(a.oracle_basis)
        },
        OracleModeArg::Truncated => OracleConfig::truncated(a.oracle_basis),
    }
}

fn sorted(spikes: &[DeltaSpike]) -> Vec<DeltaSpike> {
    let mut s = spikes.to_vec();
    s.sort_by(|x, y| x.position().total_cmp(&y.position()));
    s
}

#[derive(Serialize)]
struct LevelJson {
    n: usize,
    epsilon_minus_half: f64,
    beta: Option<f64>,
    oracle_delta: Option<f64>,
}

fn spectrum_rows(result: &SpectrumResult) -> Vec<LevelJson> {
    result
        .levels
        .iter()
        .enumerate()
        .map(|(k, l)| LevelJson {
            n: l.n,
            epsilon_minus_half: l.epsilon_minus_half(),
            beta: l.beta,
            oracle_delta: result.oracle_delta.as_ref().map(|d| d[k]),
        })
        .collect()
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), CliError> {
    if a.spikes.is_empty() || a.spikes.len() > 2 {
        return Err(CliError::Usage(format!("expected 1 or 2 --spike, got {}", a.spikes.len())));
    }
    if a.levels == 0 {
        return Err(CliError::Usage("--levels must be >= 1".into()));
    }
    let spikes = sorted(&a.spikes);
    let mut result = solve_spectrum(&spikes, a.levels)?;
    let mut manifest = RunManifest::new("spectrum");
    manifest
        .param("spikes", spike_strings(&spikes))
        .param("levels", a.levels)
        .param("oracle", a.oracle)
        .param("format", a.format);
    if a.oracle {
        let cfg = oracle_config(a);
        let oracle = oracle_spectrum(&spikes, a.levels, &cfg)?;
        let deltas: Vec<f64> = result
            .levels
            .iter()
            .zip(&oracle)
            .map(|(l, o)| (l.epsilon.value() - o).abs())
            .collect();
        manifest
            .param("oracle_basis", cfg.basis_size)
            .param("oracle_mode", format!("{:?}", a.oracle_mode).to_lowercase())
            .check("max_oracle_delta", deltas.iter().copied().fold(0.0, f64::max))
            .check("expected_accuracy", cfg.expected_accuracy);
        result.oracle_delta = Some(deltas);
    }
    let rows = spectrum_rows(&result);
    manifest.output(&a.out);
    match a.format {
        Format::Csv => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), num(r.epsilon_minus_half), opt_num(r.beta), opt_num(r.oracle_delta)])
                .collect();
            write_csv(&a.out, &["n", "epsilon_minus_half", "beta", "oracle_delta"], &records)?;
        }
        Format::Json => write_json(&a.out, &manifest, &rows)?,
    }
    manifest.write_beside(&a.out)?;
    Ok(())
}

pub fn cmd_wavefunction(a: &WavefunctionArgs) -> Result<(), CliError> {
    if a.spikes.is_empty() || a.spikes.len() > 2 {
        return Err(CliError::Usage(format!("expected 1 or 2 --spike, got {}", a.spikes.len())));
    }
    let spikes = sorted(&a.spikes);
    let result = solve_spectrum(&spikes, a.level + 1)?;
    let wf = wavefunction_for_level(&result, a.level)?;
    let samples = wf.samples(a.range, a.samples)?;
    let norm = wf.norm_integral()?;
    let mut manifest = RunManifest::new("wavefunction");
    manifest
        .param("spikes", spike_strings(&spikes))
        .param("level", a.level)
        .param("samples", a.samples)
        .param("range", a.range)
        .param("format", a.format)
        .check("epsilon_minus_half", wf.epsilon().nu())
        .check("norm_integral", norm)
        .check("norm_constant", wf.norm())
        .check("x_max", wf.x_max());
    if let Some(b) = wf.beta() {
        manifest.check("beta", b);
    }
    manifest.output(&a.out);
    match a.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = samples.iter().map(|&(x, v)| vec![num(x), num(v), num(v * v)]).collect();
            write_csv(&a.out, &["xi", "v", "v_sq"], &rows)?;
        }
        Format::Json => {
            let data: Vec<[f64; 3]> = samples.iter().map(|&(x, v)| [x, v, v * v]).collect();
            write_json(&a.out, &manifest, &data)?;
        }
    }
    manifest.write_beside(&a.out)?;
    Ok(())
}

fn write_table(table: &ComputedTable, dir: &Path) -> Result<(), CliError> {
    let n = table.id.number();
    let csv_path = dir.join(format!("table{n}.csv"));
    let txt_path = dir.join(format!("table{n}.txt"));
    let rows: Vec<Vec<String>> = table
        .entries
        .iter()
        .map(|e| {
            vec![
                num(e.lambda),
                e.n.to_string(),
                num(e.epsilon_minus_half),
                num(e.printed),
                num(e.abs_diff),
                opt_num(e.beta),
                e.erratum.to_string(),
            ]
        })
        .collect();
    write_csv(
        &csv_path,
        &["lambda", "n", "epsilon_minus_half", "printed", "abs_diff", "beta", "erratum"],
        &rows,
    )?;
    write_file(&txt_path, render_table(table).as_bytes())?;
    let mut manifest = RunManifest::new("reproduce");
    manifest.param("table", n).param("lambdas", TABLE_LAMBDAS);
    manifest
        .check("max_abs_diff_vs_reference", table.worst_diff())
        .check("odd_level_max_offset", table.odd_level_offsets.iter().copied().fold(0.0, f64::max));
    if let Some(b) = table.worst_beta_deviation() {
        manifest.check("max_beta_deviation", b);
    }
    manifest.output(&csv_path);
    manifest.output(&txt_path);
    manifest.write_beside(&csv_path)?;
    Ok(())
}

fn figure_grids(n: u8, dir: &Path) -> Result<(), CliError> {
    let eps = epsilon(2.1)?;
    let runs: Vec<(String, f64, Option<DeltaSpike>)> = match n {
        1 => vec![("fig1_range5".into(), 5.0, None), ("fig1_range10".into(), 10.0, None)],
        _ => [-1.0, 1.0]
            .iter()
            .map(|&l| {
                let s = DeltaSpike::new(0.0, l).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((format!("fig2_lambda{l}"), 5.0, Some(s)))
            })
            .collect::<Result<_, CliError>>()?,
    };
    for (stem, range, spike) in runs {
        let out = dir.join(format!("{stem}.csv"));
        let grid = g_grid(range, 201, eps, spike)?;
        let mut manifest = RunManifest::new("reproduce");
        manifest
            .param("figure", n)
            .param("epsilon", 2.1)
            .param("range", range)
            .param("points", 201)
            .param("spike", spike.map(|s| spike_strings(&[s])[0].clone()));
        write_grid(&grid, &out, Format::Csv, &mut manifest)?;
        manifest.write_beside(&out)?;
    }
    Ok(())
}

fn figure_branches(dir: &Path) -> Result<(), CliError> {
    let strengths: Vec<f64> = (-150..=150).map(|k| k as f64 / 100.0).collect();
    let rows = sweep_one_delta(0.0, &strengths, 11)?;
    let (decrease, gap) = crate::spectra::branch_diagnostics(&rows);
    let mut header = vec!["lambda".to_string()];
    header.extend((0..11).map(|n| format!("n{n}")));
    let records: Vec<Vec<String>> = strengths
        .iter()
        .zip(&rows)
        .map(|(l, row)| std::iter::once(num(*l)).chain(row.iter().map(|v| num(*v))).collect())
        .collect();
    let out = dir.join("fig3.csv");
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&out, &header_refs, &records)?;
    let mut manifest = RunManifest::new("reproduce");
    manifest
        .param("figure", 3)
        .param("position", 0.0)
        .param("lambda_min", -1.5)
        .param("lambda_max", 1.5)
        .param("lambda_step", 0.01)
        .param("levels", 11)
        .check("worst_decrease", decrease)
        .check("min_gap", gap);
    manifest.output(&out);
    manifest.write_beside(&out)?;
    Ok(())
}

fn figure_wavefunctions(n: u8, dir: &Path) -> Result<(), CliError> {
    let range = 4.0;
    let samples = 401;
    let mut records = Vec::new();
    let mut manifest = RunManifest::new("reproduce");
    manifest
        .param("figure", n)
        .param("lambdas", [-0.5, 0.0, 0.5])
        .param("levels", [0, 1, 2, 3])
        .param("range", range)
        .param("samples", samples);
    for lambda in [-0.5, 0.0, 0.5] {
        let mk = |a: f64| DeltaSpike::new(a, lambda).map_err(|e| CliError::Usage(e.to_string()));
        let spikes = if n == 4 { vec![mk(0.5)?] } else { vec![mk(-0.5)?, mk(0.5)?] };
        let result = solve_spectrum(&spikes, 4)?;
        for level in 0..4 {
            let wf = wavefunction_for_level(&result, level)?;
            manifest.check(&format!("norm_lambda{lambda}_n{level}"), wf.norm_integral()?);
            for (x, v) in wf.samples(range, samples)? {
                records.push(vec![level.to_string(), num(lambda), num(x), num(v), num(v * v)]);
            }
        }
    }
    let out = dir.join(format!("fig{n}.csv"));
    write_csv(&out, &["n", "lambda", "xi", "v", "v_sq"], &records)?;
    manifest.output(&out);
    manifest.write_beside(&out)?;
    Ok(())
}

pub fn cmd_reproduce(a: &ReproduceArgs) -> Result<(), CliError> {
    if let Some(t) = a.artifact.table {
        let id = TableId::from_number(t).ok_or_else(|| CliError::Usage(format!("no table {t}")))?;
        let table = compute_table(id)?;
        write_table(&table, &a.out_dir)?;
        print!("{}", render_table(&table));
        return Ok(());
    }
    match a.artifact.figure {
        Some(n @ (1 | 2)) => figure_grids(n, &a.out_dir),
        Some(3) => figure_branches(&a.out_dir),
        Some(n @ (4 | 5)) => figure_wavefunctions(n, &a.out_dir),
        other => Err(CliError::Usage(format!("no figure {other:?}"))),
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let checks = run_suite(a.suite);
    let mut failed = 0;
    for c in &checks {
        println!("{c}");
        if !c.passed() {
            failed += 1;
        }
    }
    println!("{} checks, {failed} failed", checks.len());
    if failed > 0 {
        Err(CliError::VerifyFailed {
            failed,
            total: checks.len(),
        })
    } else {
        Ok(())
    }
}
