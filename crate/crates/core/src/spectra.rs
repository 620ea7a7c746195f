//! Bound states of the oscillator with one or two delta spikes: the
//! characteristic functions, their roots, and normalized piecewise
//! eigenfunctions.

use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{bracket_scan, brent_root, integrate_piecewise, NumericsError, RootReport};
use crate::specfun::{hermite_envelope, hermite_envelope_prime, wronskian_analytic, HermiteOrder, SpecfunError};
use crate::units::{DeltaSpike, Epsilon};

/// Lower end of the default ε scan window.
pub const DEFAULT_SCAN_LO: f64 = -3.0;
/// The window ends at `n_levels − 1 + DEFAULT_SCAN_MARGIN`.
pub const DEFAULT_SCAN_MARGIN: f64 = 1.6;
pub const DEFAULT_SCAN_STEP: f64 = 0.02;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// Jump-condition violation above which a wavefunction is rejected.
pub const EIGEN_CHECK_TOL: f64 = 1e-5;

/// Absolute quadrature tolerance for overlaps.
pub const OVERLAP_TOL: f64 = 1e-11;

/// Below this distance of ν from an integer the cross Wronskian ratio in the
/// two-spike determinant is interpolated instead of divided out.
const PHI_INTERP_RADIUS: f64 = 1e-4;
const PHI_INTERP_STEP: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("found {found} of {requested} levels in the scan window [{lo}, {hi}]")]
    ScanIncomplete {
        found: usize,
        requested: usize,
        lo: f64,
        hi: f64,
    },
    #[error("epsilon = {epsilon} is not an eigenvalue (matching residual {residual:e})")]
    NotAnEigenvalue { epsilon: f64, residual: f64 },
    #[error("degenerate middle region at epsilon = {epsilon}: both matching equations vanish")]
    DegenerateRegion { epsilon: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Scan window and root tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub root_tol: f64,
}

impl ScanConfig {
    /// The default window for `n_levels` levels. The lower end moves below
    /// −3 only for attraction strong enough to bind deeper than that.
    pub fn for_levels(n_levels: usize, spikes: &[DeltaSpike]) -> Self {
        let attraction: f64 = spikes.iter().map(|s| (-s.strength()).max(0.0)).sum();
        let lo = DEFAULT_SCAN_LO.min(-0.5 * attraction * attraction - 1.0);
        Self {
            lo,
            hi: n_levels.saturating_sub(1) as f64 + DEFAULT_SCAN_MARGIN,
            step: DEFAULT_SCAN_STEP,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub epsilon: Epsilon,
    /// Middle-region mixing coefficient (two spikes only).
    pub beta: Option<f64>,
    pub root: RootReport,
}

impl Level {
    pub fn epsilon_minus_half(&self) -> f64 {
        self.epsilon.nu()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub spikes: Vec<DeltaSpike>,
    pub scan: ScanConfig,
    pub levels: Vec<Level>,
    /// |ε_transcendental − ε_oracle| per level, when cross-checked.
    pub oracle_delta: Option<Vec<f64>>,
}

impl SpectrumResult {
    pub fn epsilons(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.epsilon.value()).collect()
    }

    pub fn epsilons_minus_half(&self) -> Vec<f64> {
        self.levels.iter().map(Level::epsilon_minus_half).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Envelopes {
    lt: f64,
    gt: f64,
    lt_prime: f64,
    gt_prime: f64,
}

/// f_<(y), f_>(y) and their derivatives, with f_>(x) = e^{−x²/2} H_ν(x) and
/// f_<(x) = f_>(−x).
fn envelopes(nu: HermiteOrder, y: f64) -> Result<Envelopes, SpecfunError> {
    Ok(Envelopes {
        lt: hermite_envelope(nu, -y)?,
        gt: hermite_envelope(nu, y)?,
        lt_prime: -hermite_envelope_prime(nu, -y)?,
        gt_prime: hermite_envelope_prime(nu, y)?,
    })
}

/// F(ε) = 2^{ε+1/2}√π/Γ(1/2−ε) + 2λ e^{−a²} H_ν(−a) H_ν(a); entire in ε.
pub fn char_one_delta(eps: Epsilon, spike: DeltaSpike) -> Result<f64, SpectraError> {
    let nu = HermiteOrder::from_epsilon(eps);
    let a = spike.position();
    let product = hermite_envelope(nu, -a)? * hermite_envelope(nu, a)?;
    Ok(-wronskian_analytic(eps) + 2.0 * spike.strength() * product)
}

fn check_levels(n_levels: usize) -> Result<(), SpectraError> {
    if n_levels == 0 {
        return Err(SpectraError::InvalidInput("n_levels must be >= 1".into()));
    }
    Ok(())
}

fn find_roots<F>(f: F, n_levels: usize, scan: ScanConfig) -> Result<Vec<RootReport>, SpectraError>
where
    F: Fn(f64) -> Result<f64, SpectraError> + Sync,
{
    let brackets = bracket_scan(&f, scan.lo, scan.hi, scan.step)?;
    let mut roots = Vec::with_capacity(n_levels);
    for b in brackets.iter().take(n_levels) {
        let mut report = brent_root(&f, b, scan.root_tol)?;
        polish(&f, &mut report);
        roots.push(report);
    }
    if roots.len() < n_levels {
        return Err(SpectraError::ScanIncomplete {
            found: roots.len(),
            requested: n_levels,
            lo: scan.lo,
            hi: scan.hi,
        });
    }
    Ok(roots)
}

/// Newton steps with a central-difference slope, kept only while they shrink
/// |F| and stay inside the bracket.
fn polish<F>(f: &F, report: &mut RootReport)
where
    F: Fn(f64) -> Result<f64, SpectraError>,
{
    let (lo, hi) = (report.bracket.lo(), report.bracket.hi());
    for _ in 0..4 {
        let x = report.root;
        if report.residual == 0.0 {
            return;
        }
        let h = 1e-6 * x.abs().max(1.0);
        let (Ok(fp), Ok(fm)) = (f(x + h), f(x - h)) else { return };
        let slope = (fp - fm) / (2.0 * h);
        if !(slope.is_finite() && slope != 0.0) {
            return;
        }
        let next = x - report.residual / slope;
        if !(next >= lo && next <= hi) || next == x {
            return;
        }
        match f(next) {
            Ok(v) if v.abs() < report.residual.abs() => {
                report.root = next;
                report.residual = v;
            }
            _ => return,
        }
    }
}

fn eps_at(x: f64) -> Result<Epsilon, SpectraError> {
    Epsilon::new(x).map_err(|e| SpectraError::InvalidInput(e.to_string()))
}

pub fn solve_one_delta(spike: DeltaSpike, n_levels: usize) -> Result<SpectrumResult, SpectraError> {
    solve_one_delta_with(spike, n_levels, ScanConfig::for_levels(n_levels, &[spike]))
}

/// The lowest `n_levels` roots of [`char_one_delta`] in the scan window.
pub fn solve_one_delta_with(
    spike: DeltaSpike,
    n_levels: usize,
    scan: ScanConfig,
) -> Result<SpectrumResult, SpectraError> {
    check_levels(n_levels)?;
    let roots = find_roots(|e| char_one_delta(eps_at(e)?, spike), n_levels, scan)?;
    let levels = roots
        .into_iter()
        .enumerate()
        .map(|(n, root)| {
            Ok(Level {
                n,
                epsilon: eps_at(root.root)?,
                beta: None,
                root,
            })
        })
        .collect::<Result<_, SpectraError>>()?;
    Ok(SpectrumResult {
        spikes: vec![spike],
        scan,
        levels,
        oracle_delta: None,
    })
}

fn check_order(s1: &DeltaSpike, s2: &DeltaSpike) -> Result<(), SpectraError> {
    if s1.position() < s2.position() {
        Ok(())
    } else {
        Err(SpectraError::InvalidInput(format!(
            "spike positions must be strictly increasing, got {} and {}",
            s1.position(),
            s2.position()
        )))
    }
}

fn phi_direct(nu: HermiteOrder, eps: Epsilon, y1: f64, y2: f64) -> Result<f64, SpecfunError> {
    let lt1 = hermite_envelope(nu, -y1)?;
    let gt1 = hermite_envelope(nu, y1)?;
    let lt2 = hermite_envelope(nu, -y2)?;
    let gt2 = hermite_envelope(nu, y2)?;
    Ok((lt1 * gt2 - gt1 * lt2) / wronskian_analytic(eps))
}

/// φ = [f_<(y1) f_>(y2) − f_>(y1) f_<(y2)] / W, an entire function of ε.
fn cross_ratio(eps: Epsilon, y1: f64, y2: f64) -> Result<f64, SpectraError> {
    let nu = eps.nu();
    let n = nu.round();
    if n >= 0.0 && (nu - n).abs() < PHI_INTERP_RADIUS {
        let offsets = [-2.0, -1.0, 1.0, 2.0].map(|k| k * PHI_INTERP_STEP);
        let s = nu - n;
        let mut acc = 0.0;
        for (k, &ok) in offsets.iter().enumerate() {
            let node = eps_at(n + 0.5 + ok)?;
            let value = phi_direct(HermiteOrder::from_epsilon(node), node, y1, y2)?;
            let weight: f64 = offsets
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &oj)| (s - oj) / (ok - oj))
                .product();
            acc += weight * value;
        }
        return Ok(acc);
    }
    Ok(phi_direct(HermiteOrder::from_epsilon(eps), eps, y1, y2)?)
}

/// The two jump conditions as linear equations in the middle-region
/// coefficients (c_<, c_>) with f_∥ ∝ c_< f_< + c_> f_>: (A, p) from the
/// spike at y1 and (q, B) from the spike at y2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDeltaMatching {
    pub a: f64,
    pub p: f64,
    pub q: f64,
    pub b: f64,
}

impl TwoDeltaMatching {
    /// β₁ = p/A from the spike at y1.
    pub fn beta1(&self) -> f64 {
        self.p / self.a
    }

    /// β₂ = B/q from the spike at y2.
    pub fn beta2(&self) -> f64 {
        self.b / self.q
    }
}

pub fn two_delta_matching(eps: Epsilon, s1: DeltaSpike, s2: DeltaSpike) -> Result<TwoDeltaMatching, SpectraError> {
    check_order(&s1, &s2)?;
    let nu = HermiteOrder::from_epsilon(eps);
    let w = wronskian_analytic(eps);
    let (l1, l2) = (s1.strength(), s2.strength());
    let lt1 = hermite_envelope(nu, -s1.position())?;
    let gt1 = hermite_envelope(nu, s1.position())?;
    let lt2 = hermite_envelope(nu, -s2.position())?;
    let gt2 = hermite_envelope(nu, s2.position())?;
    Ok(TwoDeltaMatching {
        a: w - 2.0 * l1 * lt1 * gt1,
        p: 2.0 * l1 * lt1 * lt1,
        q: 2.0 * l2 * gt2 * gt2,
        b: w - 2.0 * l2 * lt2 * gt2,
    })
}

/// Residual β₁(ε) − β₂(ε) of the two matching equations, and β₁.
pub fn char_two_delta(eps: Epsilon, s1: DeltaSpike, s2: DeltaSpike) -> Result<(f64, f64), SpectraError> {
    const COEFF_FLOOR: f64 = 1e-13;
    let m = two_delta_matching(eps, s1, s2)?;
    if m.a.abs() < COEFF_FLOOR || m.q.abs() < COEFF_FLOOR {
        return Err(SpectraError::DegenerateRegion { epsilon: eps.value() });
    }
    let beta1 = m.beta1();
    Ok((beta1 - m.beta2(), beta1))
}

/// (pq − AB)/W, the pole-free form of β₁ = β₂:
/// −W + 2λ₁f_<(y1)f_>(y1) + 2λ₂f_<(y2)f_>(y2) + 4λ₁λ₂ f_<(y1) f_>(y2) φ.
/// Reduces to [`char_one_delta`] when either strength vanishes.
pub fn two_delta_determinant(eps: Epsilon, s1: DeltaSpike, s2: DeltaSpike) -> Result<f64, SpectraError> {
    check_order(&s1, &s2)?;
    let nu = HermiteOrder::from_epsilon(eps);
    let (y1, y2) = (s1.position(), s2.position());
    let (l1, l2) = (s1.strength(), s2.strength());
    let lt1 = hermite_envelope(nu, -y1)?;
    let gt1 = hermite_envelope(nu, y1)?;
    let lt2 = hermite_envelope(nu, -y2)?;
    let gt2 = hermite_envelope(nu, y2)?;
    let mut f = -wronskian_analytic(eps) + 2.0 * l1 * lt1 * gt1 + 2.0 * l2 * lt2 * gt2;
    if l1 != 0.0 && l2 != 0.0 {
        f += 4.0 * l1 * l2 * lt1 * gt2 * cross_ratio(eps, y1, y2)?;
    }
    Ok(f)
}

/// Middle-region coefficients (c_<, c_>) at an eigenvalue, from whichever
/// matching equation is better conditioned.
fn middle_coefficients(eps: Epsilon, s1: DeltaSpike, s2: DeltaSpike) -> Result<(f64, f64), SpectraError> {
    let m = two_delta_matching(eps, s1, s2)?;
    let first = (m.a, m.p);
    let second = (m.q, m.b);
    let n1 = first.0.hypot(first.1);
    let n2 = second.0.hypot(second.1);
    let uncoupled = s1.strength() == 0.0 && s2.strength() == 0.0;
    if uncoupled || n1.max(n2) < 1e-300 {
        let n = eps.nu().round();
        if (eps.nu() - n).abs() > 1e-6 || n < 0.0 {
            return Err(SpectraError::DegenerateRegion { epsilon: eps.value() });
        }
        let parity = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok((1.0, parity));
    }
    Ok(if n1 >= n2 { first } else { second })
}

pub fn solve_two_delta(s1: DeltaSpike, s2: DeltaSpike, n_levels: usize) -> Result<SpectrumResult, SpectraError> {
    solve_two_delta_with(s1, s2, n_levels, ScanConfig::for_levels(n_levels, &[s1, s2]))
}

/// The lowest `n_levels` roots of [`two_delta_determinant`], with β per level.
pub fn solve_two_delta_with(
    s1: DeltaSpike,
    s2: DeltaSpike,
    n_levels: usize,
    scan: ScanConfig,
) -> Result<SpectrumResult, SpectraError> {
    check_levels(n_levels)?;
    check_order(&s1, &s2)?;
    let roots = find_roots(|e| two_delta_determinant(eps_at(e)?, s1, s2), n_levels, scan)?;
    let levels = roots
        .into_iter()
        .enumerate()
        .map(|(n, root)| {
            let eps = eps_at(root.root)?;
            let (c_lt, c_gt) = middle_coefficients(eps, s1, s2)?;
            Ok(Level {
                n,
                epsilon: eps,
                beta: Some(c_gt / c_lt),
                root,
            })
        })
        .collect::<Result<_, SpectraError>>()?;
    Ok(SpectrumResult {
        spikes: vec![s1, s2],
        scan,
        levels,
        oracle_delta: None,
    })
}

/// Dispatches to the one- or two-spike solver; spikes are sorted by position.
pub fn solve_spectrum(spikes: &[DeltaSpike], n_levels: usize) -> Result<SpectrumResult, SpectraError> {
    match spikes {
        [s] => solve_one_delta(*s, n_levels),
        [a, b] => {
            let (s1, s2) = if a.position() <= b.position() { (*a, *b) } else { (*b, *a) };
            solve_two_delta(s1, s2, n_levels)
        }
        _ => Err(SpectraError::InvalidInput(format!(
            "expected 1 or 2 spikes, got {}",
            spikes.len()
        ))),
    }
}

/// ε_n(λ) for a single spike over a list of strengths, solved in parallel.
/// Row k holds the `n_levels` values ε_n − 1/2 at `strengths[k]`.
pub fn sweep_one_delta(position: f64, strengths: &[f64], n_levels: usize) -> Result<Vec<Vec<f64>>, SpectraError> {
    strengths
        .par_iter()
        .map(|&l| {
            let spike = DeltaSpike::new(position, l).map_err(|e| SpectraError::InvalidInput(e.to_string()))?;
            Ok(solve_one_delta(spike, n_levels)?.epsilons_minus_half())
        })
        .collect()
}

/// Closed-form piecewise eigenfunction. Region k (between consecutive spikes)
/// holds v = N (c_< f_< + c_> f_>); the outer regions use only the decaying
/// solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseWavefunction {
    spikes: Vec<DeltaSpike>,
    epsilon: Epsilon,
    beta: Option<f64>,
    regions: Vec<(f64, f64)>,
    norm: f64,
    x_max: f64,
}

/// Extent of the normalization domain: max(8, |a|+8, √(2ε+1)+7).
pub fn normalization_extent(spikes: &[DeltaSpike], eps: Epsilon) -> f64 {
    let reach = spikes.iter().map(|s| s.position().abs()).fold(0.0, f64::max);
    let turning = (2.0 * eps.value() + 1.0).max(0.0).sqrt();
    8.0_f64.max(reach + 8.0).max(turning + 7.0)
}

/// Below this ratio |f| / |f′| of the outer solution at a spike, its
/// coefficient comes from the jump condition instead of continuity.
const NODE_RATIO: f64 = 1e-3;

/// Coefficient of the outer solution beyond a spike. Continuity is imposed
/// exactly unless the outer solution (nearly) vanishes at the spike. `value`
/// and `slope` are the inner-region function there, `outer` and
/// `outer_prime` the outer solution, and `jump` is 2λ on the right of the
/// inner region and −2λ on its left.
fn outer_coefficient(value: f64, slope: f64, outer: f64, outer_prime: f64, jump: f64) -> f64 {
    if outer.abs() >= NODE_RATIO * outer_prime.abs() {
        value / outer
    } else {
        (slope + jump * value) / outer_prime
    }
}

impl PiecewiseWavefunction {
    fn build(spikes: Vec<DeltaSpike>, epsilon: Epsilon, beta: Option<f64>, raw: Vec<(f64, f64)>) -> Result<Self, SpectraError> {
        let scale = raw
            .iter()
            .flat_map(|&(a, b)| [a.abs(), b.abs()])
            .fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(SpectraError::DegenerateRegion { epsilon: epsilon.value() });
        }
        let mut sign = 1.0;
        if raw[0].0 < 0.0 {
            sign = -1.0;
        }
        let regions = raw.iter().map(|&(a, b)| (sign * a / scale, sign * b / scale)).collect();
        let x_max = normalization_extent(&spikes, epsilon);
        let mut wf = Self {
            spikes,
            epsilon,
            beta,
            regions,
            norm: 1.0,
            x_max,
        };
        let integral = wf.norm_integral()?;
        if !(integral > 0.0) {
            return Err(SpectraError::DegenerateRegion { epsilon: epsilon.value() });
        }
        wf.norm = integral.sqrt().recip();
        let residual = wf
            .jump_residuals()?
            .into_iter()
            .chain(wf.continuity_residuals()?)
            .fold(0.0_f64, |m, r| m.max(r.abs()));
        if !(residual <= EIGEN_CHECK_TOL) {
            return Err(SpectraError::NotAnEigenvalue {
                epsilon: epsilon.value(),
                residual,
            });
        }
        Ok(wf)
    }

    pub fn spikes(&self) -> &[DeltaSpike] {
        &self.spikes
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Normalization constant N applied to the region coefficients.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Half-width of the normalization domain.
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Unnormalized (c_<, c_>) per region, left to right.
    pub fn regions(&self) -> &[(f64, f64)] {
        &self.regions
    }

    fn region_of(&self, x: f64) -> usize {
        self.spikes.iter().filter(|s| s.position() < x).count()
    }

    fn region_value(&self, region: usize, x: f64) -> Result<f64, SpecfunError> {
        let nu = HermiteOrder::from_epsilon(self.epsilon);
        let (c_lt, c_gt) = self.regions[region];
        let mut v = 0.0;
        if c_lt != 0.0 {
            v += c_lt * hermite_envelope(nu, -x)?;
        }
        if c_gt != 0.0 {
            v += c_gt * hermite_envelope(nu, x)?;
        }
        Ok(self.norm * v)
    }

    fn region_slope(&self, region: usize, x: f64) -> Result<f64, SpecfunError> {
        let nu = HermiteOrder::from_epsilon(self.epsilon);
        let (c_lt, c_gt) = self.regions[region];
        let mut d = 0.0;
        if c_lt != 0.0 {
            d -= c_lt * hermite_envelope_prime(nu, -x)?;
        }
        if c_gt != 0.0 {
            d += c_gt * hermite_envelope_prime(nu, x)?;
        }
        Ok(self.norm * d)
    }

    pub fn try_value(&self, x: f64) -> Result<f64, SpectraError> {
        Ok(self.region_value(self.region_of(x), x)?)
    }

    /// v(x); NaN if the special functions fail at `x`.
    pub fn value(&self, x: f64) -> f64 {
        self.try_value(x).unwrap_or(f64::NAN)
    }

    /// dv/dx away from the spikes; at a spike, the limit from the right.
    pub fn derivative(&self, x: f64) -> Result<f64, SpectraError> {
        let region = self.spikes.iter().filter(|s| s.position() <= x).count();
        Ok(self.region_slope(region, x)?)
    }

    /// v′(a⁺) − v′(a⁻) − 2λ v(a) at each spike.
    pub fn jump_residuals(&self) -> Result<Vec<f64>, SpectraError> {
        self.spikes
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let a = s.position();
                let left = self.region_slope(k, a)?;
                let right = self.region_slope(k + 1, a)?;
                let v = self.region_value(k, a)?;
                Ok(right - left - 2.0 * s.strength() * v)
            })
            .collect()
    }

    /// v(a⁺) − v(a⁻) at each spike.
    pub fn continuity_residuals(&self) -> Result<Vec<f64>, SpectraError> {
        self.spikes
            .iter()
            .enumerate()
            .map(|(k, s)| Ok(self.region_value(k + 1, s.position())? - self.region_value(k, s.position())?))
            .collect()
    }

    fn breaks(&self) -> Vec<f64> {
        self.spikes.iter().map(DeltaSpike::position).collect()
    }

    /// ∫ v² over [−x_max, x_max].
    pub fn norm_integral(&self) -> Result<f64, SpectraError> {
        let f = |x: f64| {
            let v = self.value(x);
            v * v
        };
        let n = 400;
        let h = 2.0 * self.x_max / n as f64;
        let rough: f64 = (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * f(-self.x_max + i as f64 * h)
            })
            .sum::<f64>()
            * h;
        if !rough.is_finite() {
            return Err(SpectraError::NotAnEigenvalue {
                epsilon: self.epsilon.value(),
                residual: f64::INFINITY,
            });
        }
        let tol = (1e-11 * rough).max(1e-300);
        Ok(integrate_piecewise(f, -self.x_max, self.x_max, &self.breaks(), tol)?)
    }

    /// ⟨self, other⟩ over the wider of the two domains.
    pub fn overlap(&self, other: &PiecewiseWavefunction) -> Result<f64, SpectraError> {
        let x_max = self.x_max.max(other.x_max);
        let mut breaks = self.breaks();
        breaks.extend(other.breaks());
        let f = |x: f64| self.value(x) * other.value(x);
        Ok(integrate_piecewise(f, -x_max, x_max, &breaks, OVERLAP_TOL)?)
    }

    /// Overlap with an arbitrary function on this wavefunction's domain.
    pub fn overlap_with(&self, g: impl Fn(f64) -> f64) -> Result<f64, SpectraError> {
        let f = |x: f64| self.value(x) * g(x);
        Ok(integrate_piecewise(f, -self.x_max, self.x_max, &self.breaks(), OVERLAP_TOL)?)
    }

    /// `count` uniform samples (ξ, v) on [−range, range].
    pub fn samples(&self, range: f64, count: usize) -> Result<Vec<(f64, f64)>, SpectraError> {
        if count < 2 || !(range > 0.0) {
            return Err(SpectraError::InvalidInput("need count >= 2 and range > 0".into()));
        }
        let h = 2.0 * range / (count - 1) as f64;
        (0..count)
            .map(|i| {
                let x = if i == count - 1 { range } else { -range + i as f64 * h };
                Ok((x, self.try_value(x)?))
            })
            .collect()
    }
}

/// Normalized eigenfunction for one spike at the eigenvalue `eps_n`.
pub fn wavefunction_one_delta(spike: DeltaSpike, eps_n: Epsilon) -> Result<PiecewiseWavefunction, SpectraError> {
    let nu = HermiteOrder::from_epsilon(eps_n);
    let e = envelopes(nu, spike.position())?;
    let jump = 2.0 * spike.strength();
    // null vectors of continuity L f_< = R f_> and jump R f_>' − L f_<' = 2λ R f_>
    let from_continuity = (e.gt, e.lt);
    let from_jump = (e.gt_prime - jump * e.gt, e.lt_prime);
    let n_c = from_continuity.0.hypot(from_continuity.1);
    let n_j = from_jump.0.hypot(from_jump.1);
    let (left, right) = if n_c >= NODE_RATIO * n_j { from_continuity } else { from_jump };
    PiecewiseWavefunction::build(vec![spike], eps_n, None, vec![(left, 0.0), (0.0, right)])
}

/// Normalized eigenfunction for two spikes at the eigenvalue `eps_n` with
/// middle-region mixing `beta` (f_∥ = f_< + β f_>; infinite β means f_>).
pub fn wavefunction_two_delta(
    s1: DeltaSpike,
    s2: DeltaSpike,
    eps_n: Epsilon,
    beta: f64,
) -> Result<PiecewiseWavefunction, SpectraError> {
    check_order(&s1, &s2)?;
    let nu = HermiteOrder::from_epsilon(eps_n);
    let (c_lt, c_gt) = if beta.is_finite() { (1.0, beta) } else { (0.0, 1.0) };
    let e1 = envelopes(nu, s1.position())?;
    let e2 = envelopes(nu, s2.position())?;
    let m1 = c_lt * e1.lt + c_gt * e1.gt;
    let m1_prime = c_lt * e1.lt_prime + c_gt * e1.gt_prime;
    let m2 = c_lt * e2.lt + c_gt * e2.gt;
    let m2_prime = c_lt * e2.lt_prime + c_gt * e2.gt_prime;
    let left = outer_coefficient(m1, m1_prime, e1.lt, e1.lt_prime, -2.0 * s1.strength());
    let right = outer_coefficient(m2, m2_prime, e2.gt, e2.gt_prime, 2.0 * s2.strength());
    PiecewiseWavefunction::build(
        vec![s1, s2],
        eps_n,
        Some(beta),
        vec![(left, 0.0), (c_lt, c_gt), (0.0, right)],
    )
}

/// Eigenfunction of a solved level.
pub fn wavefunction_for_level(result: &SpectrumResult, n: usize) -> Result<PiecewiseWavefunction, SpectraError> {
    let level = result
        .levels
        .get(n)
        .ok_or_else(|| SpectraError::InvalidInput(format!("level {n} not in result")))?;
    match result.spikes.as_slice() {
        [s] => wavefunction_one_delta(*s, level.epsilon),
        [s1, s2] => wavefunction_two_delta(*s1, *s2, level.epsilon, level.beta.unwrap_or(f64::NAN)),
        _ => Err(SpectraError::InvalidInput("expected 1 or 2 spikes".into())),
    }
}

/// Worst violations of the Fig.-3 branch properties over a sweep: the largest
/// decrease of any ε_n between consecutive strengths, and the smallest gap
/// ε_{n+1} − ε_n at any strength.
pub fn branch_diagnostics(rows: &[Vec<f64>]) -> (f64, f64) {
    let mut worst_decrease = 0.0_f64;
    let mut min_gap = f64::INFINITY;
    for (k, row) in rows.iter().enumerate() {
        for pair in row.windows(2) {
            min_gap = min_gap.min(pair[1] - pair[0]);
        }
        if k > 0 {
            for (prev, cur) in rows[k - 1].iter().zip(row) {
                worst_decrease = worst_decrease.max(prev - cur);
            }
        }
    }
    (worst_decrease, min_gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spike(a: f64, l: f64) -> DeltaSpike {
        DeltaSpike::new(a, l).unwrap()
    }

    #[test]
    fn free_oscillator_levels() {
        let r = solve_one_delta(spike(0.37, 0.0), 6).unwrap();
        for (n, v) in r.epsilons_minus_half().iter().enumerate() {
            assert!((v - n as f64).abs() < 1e-10, "{n}: {v}");
        }
        for n in 0..6 {
            let f = char_one_delta(Epsilon::new(n as f64 + 0.5).unwrap(), spike(0.2, 0.0)).unwrap();
            assert!(f.abs() < 1e-12);
        }
    }

    #[test]
    fn determinant_reduces_to_one_spike() {
        let e = Epsilon::new(1.37).unwrap();
        let one = char_one_delta(e, spike(0.3, -0.8)).unwrap();
        let two = two_delta_determinant(e, spike(-0.6, 0.0), spike(0.3, -0.8)).unwrap();
        assert!((one - two).abs() < 1e-14 * one.abs().max(1.0));
    }

    #[test]
    fn cross_ratio_through_integers() {
        let cases = [
            (3e-5, 0.206498940766834738),
            (2e-4, 0.206454880998837804),
            (1.0001e-4, 0.206480795578021424),
            (0.9999e-4, 0.206480800761552652),
        ];
        for (d, want) in cases {
            let got = cross_ratio(Epsilon::new(2.5 + d).unwrap(), -0.5, 0.7).unwrap();
            assert!((got - want).abs() < 1e-11, "{d}: {got} vs {want}");
        }
    }

    #[test]
    fn rejects_unordered_spikes() {
        assert!(solve_two_delta(spike(0.5, 1.0), spike(-0.5, 1.0), 2).is_err());
        assert!(solve_one_delta(spike(0.0, 1.0), 0).is_err());
    }

    #[test]
    fn branch_diagnostics_detects_violations() {
        let rows = vec![vec![0.0, 1.0], vec![0.1, 0.9], vec![0.05, 1.2]];
        let (dec, gap) = branch_diagnostics(&rows);
        assert!((dec - 0.1).abs() < 1e-15);
        assert!((gap - 0.8).abs() < 1e-15);
    }
}
