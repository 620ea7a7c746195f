//! Invariant suites behind `sho-delta verify`, and the measurements they are
//! built from.

use std::fmt;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

use crate::greens::{
    g0_eval, g0_residue, g0_residue_limit, g_delta_eval, g_grid, nearest_bare_pole, GreensError,
};
use crate::numerics::{finite_diff, one_sided_diff, DiffOrder, Side};
use crate::oracle::{
    build_hamiltonian, oracle_eigen, oracle_spectrum, parity_sector_eigenvalues, spectral_sum_green, OracleConfig,
    OracleError,
};
use crate::specfun::{
    gamma, hermite_nu, sho_eigenfunction, sin_pi, wronskian_analytic, wronskian_numeric, HermiteOrder, SpecfunError,
};
use crate::spectra::{
    branch_diagnostics, solve_spectrum, sweep_one_delta, wavefunction_for_level, PiecewiseWavefunction, SpectraError,
};
use crate::tables::{compute_table, erratum_for, TableId, TABLE_LAMBDAS, TABLE_TOL};
use crate::units::{DeltaSpike, Epsilon};

const SEED: u64 = 0x5eed_0f_de17a;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Greens(#[from] GreensError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Specfun,
    Greens,
    Spectra,
    Oracle,
    All,
}

/// A measured quantity and the bound it must not exceed (or, with
/// `at_least`, fall below).
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub label: String,
    pub value: f64,
    pub limit: f64,
    pub at_least: bool,
}

impl Metric {
    pub fn at_most(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            value,
            limit,
            at_least: false,
        }
    }

    pub fn at_least(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            value,
            limit,
            at_least: true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.at_least {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.at_least { ">=" } else { "<=" };
        write!(f, "{} = {:.3e} ({op} {:.1e})", self.label, self.value, self.limit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub metrics: Vec<Metric>,
    pub seconds: f64,
    /// Set when the check could not run at all.
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.metrics.iter().all(Metric::passed)
    }

    fn run(name: &str, f: impl FnOnce() -> Result<Vec<Metric>, VerifyError>) -> Self {
        let start = Instant::now();
        let (metrics, error) = match f() {
            Ok(m) => (m, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        Self {
            name: name.to_string(),
            metrics,
            seconds: start.elapsed().as_secs_f64(),
            error,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} [{:.1}s]", self.name, self.seconds)?;
        if let Some(e) = &self.error {
            write!(f, ": error: {e}")?;
        }
        for m in &self.metrics {
            write!(f, "; {m}")?;
        }
        Ok(())
    }
}

fn eps(v: f64) -> Epsilon {
    Epsilon::new(v).expect("finite")
}

fn spike(a: f64, l: f64) -> DeltaSpike {
    DeltaSpike::new(a, l).expect("finite")
}

fn random_non_pole(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    loop {
        let e: f64 = rng.gen_range(lo..hi);
        let nu = e - 0.5;
        if nu < -0.45 || (nu - nu.round()).abs() > 0.05 {
            return e;
        }
    }
}

// --- specfun ---------------------------------------------------------------

/// Worst relative gap between the numeric and closed-form Wronskian over
/// ν ∈ {0.3, 0.7, 2.1, 4.9} and five y each.
pub fn wronskian_identity() -> Result<f64, VerifyError> {
    let mut worst = 0.0_f64;
    for nu in [0.3, 0.7, 2.1, 4.9] {
        let e = Epsilon::from_nu(nu).expect("finite");
        let w = wronskian_analytic(e);
        for y in [-2.0, -0.7, 0.0, 1.1, 2.5] {
            worst = worst.max(((wronskian_numeric(e, y)? - w) / w).abs());
        }
    }
    Ok(worst)
}

fn recurrence_residual(rng: &mut StdRng, samples: usize) -> Result<f64, VerifyError> {
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let nu: f64 = rng.gen_range(-1.0..6.0);
        let x: f64 = rng.gen_range(-3.0..3.0);
        let h = |v: f64| hermite_nu(HermiteOrder::new(v).expect("finite"), x);
        let (up, mid, down) = (h(nu + 1.0)?, h(nu)?, h(nu - 1.0)?);
        let scale = up.abs() + (2.0 * x * mid).abs() + (2.0 * nu * down).abs();
        worst = worst.max((up - 2.0 * x * mid + 2.0 * nu * down).abs() / scale.max(1e-300));
    }
    Ok(worst)
}

fn integer_parity() -> Result<f64, VerifyError> {
    let mut worst = 0.0_f64;
    for n in 0..=10 {
        let order = HermiteOrder::new(n as f64)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for x in [0.3, 1.7, 4.2] {
            let (p, m) = (hermite_nu(order, x)?, hermite_nu(order, -x)?);
            worst = worst.max((m - sign * p).abs() / p.abs().max(1.0));
        }
    }
    Ok(worst)
}

fn gamma_reflection() -> Result<f64, VerifyError> {
    let mut worst = 0.0_f64;
    for z in [0.1, 0.37, 0.5, 0.83, 1.4, 2.6, -0.3, -1.7] {
        let lhs = gamma(z)? * gamma(1.0 - z)?;
        let rhs = std::f64::consts::PI / sin_pi(z);
        worst = worst.max(((lhs - rhs) / rhs).abs());
    }
    Ok(worst)
}

pub fn specfun_suite() -> Vec<Check> {
    vec![
        Check::run("specfun: Wronskian constancy", || {
            Ok(vec![Metric::at_most("max rel error", wronskian_identity()?, 1e-8)])
        }),
        Check::run("specfun: three-term recurrence", || {
            let mut rng = StdRng::seed_from_u64(SEED);
            Ok(vec![Metric::at_most("max rel residual", recurrence_residual(&mut rng, 100)?, 1e-11)])
        }),
        Check::run("specfun: integer-order parity", || {
            Ok(vec![Metric::at_most("max rel error", integer_parity()?, 1e-13)])
        }),
        Check::run("specfun: gamma reflection", || {
            Ok(vec![Metric::at_most("max rel error", gamma_reflection()?, 1e-13)])
        }),
    ]
}

// --- greens ----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensMetrics {
    pub symmetry_rel: f64,
    pub diagonal_jump_err: f64,
    pub ode_residual: f64,
    pub residue_err: f64,
    pub dressed_symmetry_rel: f64,
    pub dressed_jump_err: f64,
    /// Smallest one-sided slope difference of the dressed ξ = υ section at 0.
    pub kink_min: f64,
}

pub fn greens_metrics() -> Result<GreensMetrics, VerifyError> {
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    let h = 1e-3;

    let mut symmetry_rel = 0.0_f64;
    for _ in 0..100 {
        let (xi, up): (f64, f64) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let e = eps(random_non_pole(&mut rng, -1.0, 6.0));
        let g = g0_eval(xi, up, e)?;
        let scale = g.abs().max(1e-300);
        symmetry_rel = symmetry_rel
            .max((g - g0_eval(up, xi, e)?).abs() / scale)
            .max((g - g0_eval(-xi, -up, e)?).abs() / scale);
    }

    let mut diagonal_jump_err = 0.0_f64;
    for _ in 0..10 {
        let up: f64 = rng.gen_range(-2.5..2.5);
        let e = eps(random_non_pole(&mut rng, -0.4, 4.0));
        let f = |x: f64| g0_eval(x, up, e).unwrap_or(f64::NAN);
        let jump = one_sided_diff(f, up, Side::Right, h) - one_sided_diff(f, up, Side::Left, h);
        diagonal_jump_err = diagonal_jump_err.max((jump + 2.0).abs());
    }

    let mut ode_residual = 0.0_f64;
    let mut count = 0;
    while count < 20 {
        let (xi, up): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if (xi - up).abs() < 0.1 {
            continue;
        }
        count += 1;
        let e = random_non_pole(&mut rng, -0.4, 4.0);
        let f = |x: f64| g0_eval(x, up, eps(e)).unwrap_or(f64::NAN);
        let d2 = finite_diff(f, xi, DiffOrder::Second, h);
        ode_residual = ode_residual.max((d2 - (xi * xi - 2.0 * e) * f(xi)).abs());
    }

    let mut residue_err = 0.0_f64;
    for n in 0..3 {
        for (xi, up) in [(0.5, -0.4), (0.0, 0.0), (1.2, 0.3)] {
            residue_err = residue_err.max((g0_residue(n, xi, up) - g0_residue_limit(n, xi, up)?).abs());
        }
    }

    let mut dressed_symmetry_rel = 0.0_f64;
    let mut dressed_jump_err = 0.0_f64;
    for _ in 0..20 {
        let s = spike(rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        let e = eps(random_non_pole(&mut rng, -0.4, 4.0));
        let (xi, up): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (Ok(g), Ok(t)) = (g_delta_eval(xi, up, e, s), g_delta_eval(up, xi, e, s)) else {
            continue;
        };
        dressed_symmetry_rel = dressed_symmetry_rel.max((g - t).abs() / g.abs().max(1e-12));
        if (up - s.position()).abs() < 0.05 {
            continue;
        }
        let g_a = g_delta_eval(s.position(), up, e, s)?;
        if g_a.abs() > 1e3 {
            continue;
        }
        let f = |x: f64| g_delta_eval(x, up, e, s).unwrap_or(f64::NAN);
        let a = s.position();
        let jump = one_sided_diff(f, a, Side::Right, h) - one_sided_diff(f, a, Side::Left, h);
        dressed_jump_err = dressed_jump_err.max((jump - 2.0 * s.strength() * g_a).abs());
    }

    let mut kink_min = f64::INFINITY;
    for l in [-1.0, 1.0] {
        let s = spike(0.0, l);
        let f = |x: f64| g_delta_eval(x, x, eps(2.1), s).unwrap_or(f64::NAN);
        let d = (one_sided_diff(f, 0.0, Side::Right, h) - one_sided_diff(f, 0.0, Side::Left, h)).abs();
        kink_min = kink_min.min(d);
    }

    Ok(GreensMetrics {
        symmetry_rel,
        diagonal_jump_err,
        ode_residual,
        residue_err,
        dressed_symmetry_rel,
        dressed_jump_err,
        kink_min,
    })
}

/// Largest mirror mismatch of the two sections of the ε = 2.1 grid.
pub fn grid_mirror_error(range: f64, points: usize) -> Result<f64, VerifyError> {
    let grid = g_grid(range, points, eps(2.1), None)?;
    let n = grid.n_points();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for section in [&grid.diagonal, &grid.antidiagonal] {
            let (a, b) = (section[i].value, section[n - 1 - i].value);
            worst = worst.max((a - b).abs() / a.abs().max(1e-300));
        }
    }
    Ok(worst)
}

/// |g(0.4, 0.6; 1.3) − 150-mode spectral sum| for a spike {0.5, −0.5}.
pub fn spectral_sum_error() -> Result<f64, VerifyError> {
    let s = spike(0.5, -0.5);
    let direct = g_delta_eval(0.4, 0.6, eps(1.3), s)?;
    let sum = spectral_sum_green(0.4, 0.6, 1.3, &[s], 150, &OracleConfig::truncated(200))?;
    Ok((direct - sum).abs())
}

pub fn greens_suite() -> Vec<Check> {
    let metrics = greens_metrics();
    let from = |name: &str, pick: &dyn Fn(&GreensMetrics) -> Vec<Metric>| match &metrics {
        Ok(m) => Check {
            name: name.to_string(),
            metrics: pick(m),
            seconds: 0.0,
            error: None,
        },
        Err(e) => Check {
            name: name.to_string(),
            metrics: Vec::new(),
            seconds: 0.0,
            error: Some(e.to_string()),
        },
    };
    vec![
        from("greens: symmetry", &|m| {
            vec![
                Metric::at_most("bare rel", m.symmetry_rel, 1e-12),
                Metric::at_most("dressed rel", m.dressed_symmetry_rel, 1e-10),
            ]
        }),
        from("greens: diagonal derivative jump", &|m| {
            vec![Metric::at_most("|jump + 2|", m.diagonal_jump_err, 1e-6)]
        }),
        from("greens: off-diagonal ODE", &|m| vec![Metric::at_most("residual", m.ode_residual, 1e-5)]),
        from("greens: residue limit", &|m| vec![Metric::at_most("|closed - limit|", m.residue_err, 1e-6)]),
        from("greens: dressed jump at spike", &|m| {
            vec![Metric::at_most("|jump - 2 lambda g|", m.dressed_jump_err, 1e-5)]
        }),
        from("greens: origin kink", &|m| vec![Metric::at_least("min slope gap", m.kink_min, 1e-5)]),
        Check::run("greens: grid sections mirror-symmetric", || {
            Ok(vec![Metric::at_most("rel mismatch", grid_mirror_error(5.0, 201)?, 1e-12)])
        }),
        Check::run("greens: spectral sum (150 modes)", || {
            Ok(vec![Metric::at_most("abs error", spectral_sum_error()?, 1e-4)])
        }),
    ]
}

// --- spectra ---------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct TableMetrics {
    /// Worst |computed − printed| over entries without an erratum.
    pub printed_diff: f64,
    /// Worst |computed − corrected| over entries with an erratum.
    pub erratum_diff: Option<f64>,
    /// Worst |computed − printed| over entries with an erratum (expected large).
    pub erratum_printed_diff: Option<f64>,
    pub odd_level_offset: Option<f64>,
    pub beta_deviation: Option<f64>,
    pub seconds: f64,
}

pub fn table_metrics(id: TableId) -> Result<TableMetrics, VerifyError> {
    let start = Instant::now();
    let table = compute_table(id)?;
    let mut printed_diff = 0.0_f64;
    let mut erratum_diff: Option<f64> = None;
    let mut erratum_printed_diff: Option<f64> = None;
    for (k, e) in table.entries.iter().enumerate() {
        match erratum_for(id, k / 6, k % 6) {
            Some(err) => {
                let d = (e.epsilon_minus_half - err.corrected).abs();
                erratum_diff = Some(erratum_diff.unwrap_or(0.0).max(d));
                erratum_printed_diff = Some(erratum_printed_diff.unwrap_or(0.0).max(e.abs_diff));
            }
            None => printed_diff = printed_diff.max(e.abs_diff),
        }
    }
    Ok(TableMetrics {
        printed_diff,
        erratum_diff,
        erratum_printed_diff,
        odd_level_offset: (!table.odd_level_offsets.is_empty())
            .then(|| table.odd_level_offsets.iter().copied().fold(0.0, f64::max)),
        beta_deviation: table.worst_beta_deviation(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Configurations of the three tables.
pub fn table_configurations() -> Vec<(TableId, f64, Vec<DeltaSpike>)> {
    TableId::ALL
        .iter()
        .flat_map(|&id| TABLE_LAMBDAS.iter().map(move |&l| (id, l, id.spikes(l))))
        .collect()
}

/// Worst |ε_root − ε_oracle| over the lowest six levels of every table
/// configuration, per table.
pub fn oracle_deltas(cfg: &OracleConfig) -> Result<Vec<(TableId, f64, f64)>, VerifyError> {
    table_configurations()
        .into_iter()
        .map(|(id, lambda, spikes)| {
            let roots = solve_spectrum(&spikes, 6)?.epsilons();
            let oracle = oracle_spectrum(&spikes, 6, cfg)?;
            let worst = roots.iter().zip(&oracle).map(|(r, o)| (r - o).abs()).fold(0.0, f64::max);
            Ok((id, lambda, worst))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WavefunctionMetrics {
    pub continuity: f64,
    pub jump: f64,
    pub norm: f64,
    pub orthogonality: f64,
    pub free_overlap: f64,
    pub tail: f64,
}

fn wavefunction_configs() -> Vec<Vec<DeltaSpike>> {
    vec![
        vec![spike(0.5, -0.5)],
        vec![spike(0.0, -1.0)],
        vec![spike(0.5, 1.0)],
        vec![spike(-0.5, -0.5), spike(0.5, -0.5)],
        vec![spike(-0.3, 0.7), spike(0.9, -0.4)],
    ]
}

fn fd_jump(wf: &PiecewiseWavefunction, s: &DeltaSpike) -> f64 {
    let a = s.position();
    let h = 1e-3;
    let f = |x: f64| wf.value(x);
    one_sided_diff(f, a, Side::Right, h) - one_sided_diff(f, a, Side::Left, h) - 2.0 * s.strength() * wf.value(a)
}

/// Worst violations of the eigenfunction contracts over five configurations
/// (four levels each) plus the uncoupled limit.
pub fn wavefunction_metrics() -> Result<WavefunctionMetrics, VerifyError> {
    let per_config: Vec<WavefunctionMetrics> = wavefunction_configs()
        .par_iter()
        .map(|spikes| -> Result<WavefunctionMetrics, VerifyError> {
            let result = solve_spectrum(spikes, 4)?;
            let wfs: Vec<PiecewiseWavefunction> = (0..4)
                .map(|n| wavefunction_for_level(&result, n))
                .collect::<Result<_, _>>()?;
            let mut m = WavefunctionMetrics::default();
            for (n, wf) in wfs.iter().enumerate() {
                for c in wf.continuity_residuals()? {
                    m.continuity = m.continuity.max(c.abs());
                }
                for s in wf.spikes() {
                    m.jump = m.jump.max(fd_jump(wf, s).abs());
                }
                m.norm = m.norm.max((wf.norm_integral()? - 1.0).abs());
                m.tail = m.tail.max(wf.value(wf.x_max()).abs()).max(wf.value(-wf.x_max()).abs());
                for other in &wfs[..n] {
                    m.orthogonality = m.orthogonality.max(wf.overlap(other)?.abs());
                }
            }
            Ok(m)
        })
        .collect::<Result<_, _>>()?;
    let mut m = per_config.iter().fold(WavefunctionMetrics::default(), |acc, c| WavefunctionMetrics {
        continuity: acc.continuity.max(c.continuity),
        jump: acc.jump.max(c.jump),
        norm: acc.norm.max(c.norm),
        orthogonality: acc.orthogonality.max(c.orthogonality),
        free_overlap: 0.0,
        tail: acc.tail.max(c.tail),
    });
    for spikes in [vec![spike(0.3, 0.0)], vec![spike(-0.4, 0.0), spike(0.6, 0.0)]] {
        let result = solve_spectrum(&spikes, 4)?;
        for n in 0..4 {
            let wf = wavefunction_for_level(&result, n)?;
            let sign = sho_eigenfunction(n, -wf.x_max() + 1.0).signum();
            let ov = wf.overlap_with(|x| sign * sho_eigenfunction(n, x))?;
            m.free_overlap = m.free_overlap.max((ov - 1.0).abs());
        }
    }
    Ok(m)
}

/// (worst decrease, smallest gap) of ε_n(λ), n = 0..=10, at a centred spike
/// for λ ∈ [−1.5, 1.5] sampled at `step`.
pub fn branch_metrics(step: f64) -> Result<(f64, f64), VerifyError> {
    let count = (3.0 / step).round() as i64;
    let strengths: Vec<f64> = (0..=count).map(|k| -1.5 + k as f64 * step).collect();
    let rows = sweep_one_delta(0.0, &strengths, 11)?;
    Ok(branch_diagnostics(&rows))
}

fn uncoupled_recovery() -> Result<f64, VerifyError> {
    let mut worst = 0.0_f64;
    for spikes in [vec![spike(0.8, 0.0)], vec![spike(-1.1, 0.0), spike(0.4, 0.0)]] {
        for (n, v) in solve_spectrum(&spikes, 6)?.epsilons_minus_half().iter().enumerate() {
            worst = worst.max((v - n as f64).abs());
        }
    }
    Ok(worst)
}

fn pole_condition_gap() -> Result<f64, VerifyError> {
    let mut worst = 0.0_f64;
    for s in [spike(0.5, -1.0), spike(0.5, 1.0), spike(-0.8, 0.6)] {
        for level in solve_spectrum(&[s], 4)?.levels {
            if nearest_bare_pole(level.epsilon).is_some() {
                continue;
            }
            let f = |x: f64| 1.0 / s.strength() + g0_eval(s.position(), s.position(), eps(x)).unwrap_or(f64::NAN);
            let x = level.epsilon.value();
            let slope = finite_diff(f, x, DiffOrder::First, 1e-5);
            worst = worst.max((f(x) / slope).abs());
        }
    }
    Ok(worst)
}

pub fn spectra_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    for id in TableId::ALL {
        checks.push(Check::run(&format!("spectra: table {} goldens", id.number()), || {
            let m = table_metrics(id)?;
            let mut out = vec![Metric::at_most("max |computed - printed|", m.printed_diff, TABLE_TOL)];
            if let Some(d) = m.erratum_diff {
                out.push(Metric::at_most("erratum cell |computed - corrected|", d, TABLE_TOL));
            }
            if let Some(d) = m.odd_level_offset {
                out.push(Metric::at_most("odd levels |eps - 1/2 - n|", d, 1e-9));
            }
            if let Some(d) = m.beta_deviation {
                out.push(Metric::at_most("| |beta| - 1 |", d, 1e-8));
            }
            Ok(out)
        }));
    }
    checks.push(Check::run("spectra: oracle deltas", || {
        let cfg = OracleConfig::default();
        let worst = oracle_deltas(&cfg)?.iter().map(|d| d.2).fold(0.0, f64::max);
        Ok(vec![Metric::at_most("max |root - oracle|", worst, cfg.expected_accuracy)])
    }));
    checks.push(Check::run("spectra: uncoupled recovery", || {
        Ok(vec![Metric::at_most("max |eps - 1/2 - n|", uncoupled_recovery()?, 1e-10)])
    }));
    checks.push(Check::run("spectra: pole condition equals characteristic roots", || {
        Ok(vec![Metric::at_most("max root shift", pole_condition_gap()?, 1e-10)])
    }));
    checks.push(Check::run("spectra: wavefunction contracts", || {
        let m = wavefunction_metrics()?;
        Ok(vec![
            Metric::at_most("continuity", m.continuity, 1e-10),
            Metric::at_most("jump", m.jump, 1e-6),
            Metric::at_most("|norm - 1|", m.norm, 1e-8),
            Metric::at_most("orthogonality", m.orthogonality, 1e-6),
            Metric::at_most("|free overlap - 1|", m.free_overlap, 1e-9),
            Metric::at_most("tail", m.tail, 1e-10),
        ])
    }));
    checks.push(Check::run("spectra: branches monotone and non-crossing (step 0.1)", || {
        let (dec, gap) = branch_metrics(0.1)?;
        Ok(vec![Metric::at_most("worst decrease", dec, 1e-9), Metric::at_least("min gap", gap, 1e-6)])
    }));
    checks
}

// --- oracle ----------------------------------------------------------------

pub fn oracle_suite() -> Vec<Check> {
    vec![
        Check::run("oracle: free oscillator exact", || {
            let levels = oracle_spectrum(&[], 6, &OracleConfig::truncated(50))?;
            let worst = levels
                .iter()
                .enumerate()
                .map(|(n, e)| (e - n as f64 - 0.5).abs())
                .fold(0.0, f64::max);
            Ok(vec![Metric::at_most("max |eps - n - 1/2|", worst, 0.0)])
        }),
        Check::run("oracle: centred spike parity decoupling", || {
            let h = build_hamiltonian(&[spike(0.0, -1.0)], &OracleConfig::truncated(60));
            let mut worst = 0.0_f64;
            for i in 0..60 {
                for j in 0..60 {
                    if (i + j) % 2 == 1 {
                        worst = worst.max(h[(i, j)].abs());
                    }
                }
            }
            Ok(vec![Metric::at_most("max even-odd element", worst, 0.0)])
        }),
        Check::run("oracle: parity sectors union", || {
            let spikes = [spike(-0.5, -1.0), spike(0.5, -1.0)];
            let cfg = OracleConfig::truncated(80);
            let full = oracle_eigen(&spikes, &cfg)?.values;
            let (even, odd) = parity_sector_eigenvalues(&spikes, &cfg)?;
            let mut union: Vec<f64> = even.into_iter().chain(odd).collect();
            union.sort_by(f64::total_cmp);
            let worst = full.iter().zip(&union).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok(vec![Metric::at_most("max |full - union|", worst, 1e-10)])
        }),
        Check::run("oracle: truncation convergence 50/100/200", || {
            let spikes = [spike(0.5, -1.0)];
            let at = |n: usize| oracle_spectrum(&spikes, 6, &OracleConfig::folded(n));
            let (e50, e100, e200) = (at(50)?, at(100)?, at(200)?);
            let mut d100 = 0.0_f64;
            let mut non_monotone = 0.0_f64;
            for k in 0..6 {
                let a = (e50[k] - e200[k]).abs();
                let b = (e100[k] - e200[k]).abs();
                d100 = d100.max(b);
                non_monotone = non_monotone.max(b - a);
            }
            Ok(vec![
                Metric::at_most("max |eps(100) - eps(200)|", d100, OracleConfig::default().expected_accuracy),
                Metric::at_most("growth of difference", non_monotone, 1e-12),
            ])
        }),
    ]
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Specfun => specfun_suite(),
        Suite::Greens => greens_suite(),
        Suite::Spectra => spectra_suite(),
        Suite::Oracle => oracle_suite(),
        Suite::All => {
            let mut all = specfun_suite();
            all.extend(greens_suite());
            all.extend(spectra_suite());
            all.extend(oracle_suite());
            all
        }
    }
}
