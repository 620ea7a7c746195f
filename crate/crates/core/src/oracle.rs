//! Matrix verifier: the oscillator plus delta spikes in the oscillator
//! eigenbasis, diagonalized with Jacobi rotations.
//!
//! Two modes. `Truncated` diagonalizes the plain `basis_size` block. `Folded`
//! keeps the same block but folds the modes beyond it back in exactly (for
//! the rank-k spike coupling) through an energy-dependent effective
//! Hamiltonian: modes `basis_size..tail_modes` are summed explicitly and the
//! rest through their large-n asymptotic form. Each level is then a fixed
//! point ε = eig_k(H_eff(ε)).

use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{jacobi_eigen, jacobi_eigenvalues, CompensatedSum, Matrix, NumericsError, SymmetricEigen};
use crate::specfun::{sho_eigenfunction, sho_eigenfunctions};
use crate::units::DeltaSpike;

pub const DEFAULT_BASIS_SIZE: usize = 200;
pub const DEFAULT_EXPECTED_ACCURACY: f64 = 5e-4;
pub const DEFAULT_TAIL_MODES: usize = 200_000;

const FOLD_MAX_ITER: usize = 60;
const FOLD_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("fixed-point iteration for level {level} did not settle after {iterations} steps")]
    NonConvergence { level: usize, iterations: usize },
    #[error("singular spike coupling matrix at epsilon = {0}")]
    Singular(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Truncated,
    Folded { tail_modes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub basis_size: usize,
    /// Documented per-level error bound for the lowest six levels at
    /// |λ| ≤ 1.5, |a| ≤ 1.
    pub expected_accuracy: f64,
    pub mode: OracleMode,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            basis_size: DEFAULT_BASIS_SIZE,
            expected_accuracy: DEFAULT_EXPECTED_ACCURACY,
            mode: OracleMode::Folded {
                tail_modes: DEFAULT_TAIL_MODES,
            },
        }
    }
}

impl OracleConfig {
    /// Plain truncation at `basis_size`.
    pub fn truncated(basis_size: usize) -> Self {
        Self {
            basis_size,
            mode: OracleMode::Truncated,
            ..Self::default()
        }
    }

    pub fn folded(basis_size: usize) -> Self {
        Self {
            basis_size,
            ..Self::default()
        }
    }

    fn validate(&self, n_levels: usize) -> Result<(), OracleError> {
        if self.basis_size == 0 {
            return Err(OracleError::InvalidConfig("basis_size must be >= 1".into()));
        }
        if self.basis_size < 4 * n_levels {
            return Err(OracleError::InvalidConfig(format!(
                "basis_size {} < 4 x {n_levels} requested levels",
                self.basis_size
            )));
        }
        if let OracleMode::Folded { tail_modes } = self.mode {
            if tail_modes <= self.basis_size {
                return Err(OracleError::InvalidConfig(format!(
                    "tail_modes {tail_modes} must exceed basis_size {}",
                    self.basis_size
                )));
            }
        }
        if !(self.expected_accuracy > 0.0) {
            return Err(OracleError::InvalidConfig("expected_accuracy must be > 0".into()));
        }
        Ok(())
    }
}

/// Dimensionless u_n(ξ).
pub fn sho_basis(n: usize, xi: f64) -> f64 {
    sho_eigenfunction(n, xi)
}

/// H_mn = (n + 1/2) δ_mn + Σᵢ λᵢ u_m(aᵢ) u_n(aᵢ) on the first `basis_size` modes.
pub fn build_hamiltonian(spikes: &[DeltaSpike], cfg: &OracleConfig) -> Matrix {
    let n = cfg.basis_size;
    let columns: Vec<Vec<f64>> = spikes.iter().map(|s| sho_eigenfunctions(n, s.position())).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            (0..n)
                .map(|k| {
                    let diag = if m == k { m as f64 + 0.5 } else { 0.0 };
                    diag + spikes
                        .iter()
                        .zip(&columns)
                        .map(|(s, u)| s.strength() * u[m] * u[k])
                        .sum::<f64>()
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(&rows).expect("square by construction")
}

/// Eigen-decomposition of the truncated Hamiltonian.
pub fn oracle_eigen(spikes: &[DeltaSpike], cfg: &OracleConfig) -> Result<SymmetricEigen, OracleError> {
    cfg.validate(0)?;
    Ok(jacobi_eigen(&build_hamiltonian(spikes, cfg))?)
}

fn c_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c_inv(a: (f64, f64)) -> (f64, f64) {
    let d = a.0 * a.0 + a.1 * a.1;
    (a.0 / d, -a.1 / d)
}

/// Si(x) = ∫₀ˣ sin t / t dt: power series up to |x| = 2, continued fraction
/// for E₁(ix) beyond.
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return 0.0;
    }
    let value = if ax <= 2.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = CompensatedSum::new();
        sum.add(ax);
        for k in 1..60 {
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let contribution = term / (2.0 * kf + 1.0);
            sum.add(contribution);
            if contribution.abs() < 1e-18 * sum.value().abs() {
                break;
            }
        }
        sum.value()
    } else {
        let tiny = 1e-300;
        let mut b = (1.0, ax);
        let mut c = (1.0 / tiny, 0.0);
        let mut d = c_inv(b);
        let mut h = d;
        for i in 2..200 {
            let a = -((i - 1) as f64).powi(2);
            b.0 += 2.0;
            d = c_inv((a * d.0 + b.0, a * d.1 + b.1));
            let ci = c_inv(c);
            c = (b.0 + a * ci.0, b.1 + a * ci.1);
            let del = c_mul(c, d);
            h = c_mul(h, del);
            if (del.0 - 1.0).abs() + del.1.abs() < 1e-16 {
                break;
            }
        }
        let h = c_mul((ax.cos(), -ax.sin()), h);
        std::f64::consts::FRAC_PI_2 + h.1
    };
    value.copysign(x)
}

/// Σ_{n ≥ M} u_n(a) u_n(b) / n from the large-n form of the product, as a
/// function of d = |a − b|.
fn asymptotic_tail(tail_start: usize, d: f64) -> f64 {
    let s = (2.0 * tail_start as f64).sqrt();
    let two_over_pi = std::f64::consts::FRAC_2_PI;
    if d == 0.0 {
        return two_over_pi / s;
    }
    let x = s * d;
    two_over_pi * (x.cos() / s - d * (std::f64::consts::FRAC_PI_2 - sine_integral(x)))
}

/// Pre-tabulated data for the folded effective Hamiltonian.
struct Folding {
    lambdas: Vec<f64>,
    /// u_n(aᵢ) for n < basis_size.
    inner: Vec<Vec<f64>>,
    /// u_n(aᵢ) for basis_size ≤ n < tail_modes.
    outer: Vec<Vec<f64>>,
    basis_size: usize,
    tails: Vec<Vec<f64>>,
}

impl Folding {
    fn new(spikes: &[DeltaSpike], basis_size: usize, tail_modes: usize) -> Self {
        let full: Vec<Vec<f64>> = spikes
            .par_iter()
            .map(|s| sho_eigenfunctions(tail_modes, s.position()))
            .collect();
        let inner = full.iter().map(|u| u[..basis_size].to_vec()).collect();
        let outer = full.iter().map(|u| u[basis_size..].to_vec()).collect();
        let tails = spikes
            .iter()
            .map(|si| {
                spikes
                    .iter()
                    .map(|sj| asymptotic_tail(tail_modes, (si.position() - sj.position()).abs()))
                    .collect()
            })
            .collect();
        Self {
            lambdas: spikes.iter().map(DeltaSpike::strength).collect(),
            inner,
            outer,
            basis_size,
            tails,
        }
    }

    /// S_ij(ε) = Σ_{n ≥ basis_size} u_n(aᵢ) u_n(aⱼ) / (n + 1/2 − ε).
    fn outer_resolvent(&self, eps: f64) -> Vec<Vec<f64>> {
        let k = self.lambdas.len();
        let mut s = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in i..k {
                let mut acc = CompensatedSum::new();
                for (m, (ui, uj)) in self.outer[i].iter().zip(&self.outer[j]).enumerate() {
                    let n = (self.basis_size + m) as f64;
                    acc.add(ui * uj / (n + 0.5 - eps));
                }
                acc.add(self.tails[i][j]);
                s[i][j] = acc.value();
                s[j][i] = s[i][j];
            }
        }
        s
    }

    /// K = Λ − Λ S (I + Λ S)⁻¹ Λ, the dressed coupling seen by the inner block.
    fn coupling(&self, eps: f64) -> Result<Vec<Vec<f64>>, OracleError> {
        let k = self.lambdas.len();
        let s = self.outer_resolvent(eps);
        let lam = &self.lambdas;
        // M = I + Λ S; solve M X = Λ (diagonal right-hand side), then K = Λ − Λ S X.
        let m: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 } + lam[i] * s[i][j]).collect())
            .collect();
        let rhs: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { lam[i] } else { 0.0 }).collect())
            .collect();
        let x = solve_small(m, rhs).ok_or(OracleError::Singular(eps))?;
        Ok((0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let diag = if i == j { lam[i] } else { 0.0 };
                        let corr: f64 = (0..k).map(|l| s[i][l] * x[l][j]).sum();
                        diag - lam[i] * corr
                    })
                    .collect()
            })
            .collect())
    }

    fn effective_hamiltonian(&self, eps: f64) -> Result<Matrix, OracleError> {
        let kmat = self.coupling(eps)?;
        let n = self.basis_size;
        let k = self.lambdas.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|p| {
                (0..n)
                    .map(|q| {
                        let mut v = if p == q { p as f64 + 0.5 } else { 0.0 };
                        for i in 0..k {
                            for j in 0..k {
                                v += self.inner[i][p] * kmat[i][j] * self.inner[j][q];
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(Matrix::from_rows(&rows)?)
    }
}

/// Gaussian elimination with partial pivoting for a small dense system
/// A X = B; `None` if A is singular.
fn solve_small(mut a: Vec<Vec<f64>>, mut b: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            for c in 0..b[row].len() {
                b[row][c] -= f * b[col][c];
            }
        }
    }
    for col in (0..n).rev() {
        for c in 0..b[col].len() {
            let mut v = b[col][c];
            for k in col + 1..n {
                v -= a[col][k] * b[k][c];
            }
            b[col][c] = v / a[col][col];
        }
    }
    Some(b)
}

/// Lowest `n_levels` eigenvalues ε, ascending.
pub fn oracle_spectrum(spikes: &[DeltaSpike], n_levels: usize, cfg: &OracleConfig) -> Result<Vec<f64>, OracleError> {
    cfg.validate(n_levels)?;
    let truncated = jacobi_eigenvalues(&build_hamiltonian(spikes, cfg))?;
    let start = &truncated[..n_levels];
    let tail_modes = match cfg.mode {
        OracleMode::Truncated => return Ok(start.to_vec()),
        OracleMode::Folded { tail_modes } => tail_modes,
    };
    if spikes.is_empty() {
        return Ok(start.to_vec());
    }
    let folding = Folding::new(spikes, cfg.basis_size, tail_modes);
    start
        .par_iter()
        .enumerate()
        .map(|(level, &guess)| {
            let mut eps = guess;
            for _ in 0..FOLD_MAX_ITER {
                let next = jacobi_eigenvalues(&folding.effective_hamiltonian(eps)?)?[level];
                let done = (next - eps).abs() <= FOLD_TOL * eps.abs().max(1.0);
                eps = next;
                if done {
                    return Ok(eps);
                }
            }
            Err(OracleError::NonConvergence {
                level,
                iterations: FOLD_MAX_ITER,
            })
        })
        .collect()
}

/// Spectral sum Σ_{k < modes} ψ_k(ξ) ψ_k(υ) / (ε_k − ε) from the truncated
/// eigenvectors.
pub fn spectral_sum_green(
    xi: f64,
    upsilon: f64,
    eps: f64,
    spikes: &[DeltaSpike],
    modes: usize,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    if modes > cfg.basis_size {
        return Err(OracleError::InvalidConfig(format!(
            "modes {modes} exceed basis_size {}",
            cfg.basis_size
        )));
    }
    let eig = oracle_eigen(spikes, cfg)?;
    let ux = sho_eigenfunctions(cfg.basis_size, xi);
    let uy = sho_eigenfunctions(cfg.basis_size, upsilon);
    let mut acc = CompensatedSum::new();
    for k in 0..modes {
        let v = eig.vectors.column(k);
        let px: f64 = v.iter().zip(&ux).map(|(c, u)| c * u).sum();
        let py: f64 = v.iter().zip(&uy).map(|(c, u)| c * u).sum();
        acc.add(px * py / (eig.values[k] - eps));
    }
    Ok(acc.value())
}

/// Orthogonal decomposition of a symmetric, parity-invariant configuration:
/// eigenvalues of the even-index and odd-index blocks of the truncated matrix.
pub fn parity_sector_eigenvalues(spikes: &[DeltaSpike], cfg: &OracleConfig) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
    let h = build_hamiltonian(spikes, cfg);
    let block = |parity: usize| -> Result<Vec<f64>, OracleError> {
        let idx: Vec<usize> = (parity..cfg.basis_size).step_by(2).collect();
        let sub = Matrix::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])]);
        Ok(jacobi_eigenvalues(&sub)?)
    };
    Ok((block(0)?, block(1)?))
}
