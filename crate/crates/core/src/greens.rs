//! Dimensionless Green's functions of the oscillator, bare and dressed by a
//! single delta spike.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::specfun::{hermite_envelope, sho_eigenfunction, wronskian_analytic, HermiteOrder, SpecfunError};
use crate::units::{DeltaSpike, Epsilon};

/// Energies closer than this to some n + 1/2 are treated as bare poles.
pub const POLE_GUARD: f64 = 1e-9;

/// Dressed poles: |1/λ + g₀(a,a)| below this.
pub const DRESSED_POLE_GUARD: f64 = 1e-12;

/// Offsets used by [`g0_residue_limit`].
pub const RESIDUE_OFFSETS: (f64, f64) = (1e-3, 1e-4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleKind {
    Bare,
    Dressed,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreensError {
    #[error("epsilon = {epsilon} is at a {kind:?} pole{}", level.map(|n| format!(" (n = {n})")).unwrap_or_default())]
    AtPole {
        epsilon: f64,
        kind: PoleKind,
        level: Option<usize>,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// One sample of g = (αħ²/m) G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreensValue {
    pub xi: f64,
    pub upsilon: f64,
    pub epsilon: Epsilon,
    pub value: f64,
}

/// The index n of the bare pole ε = n + 1/2 within [`POLE_GUARD`], if any.
pub fn nearest_bare_pole(eps: Epsilon) -> Option<usize> {
    let n = eps.nu().round();
    (n >= 0.0 && (eps.nu() - n).abs() < POLE_GUARD).then_some(n as usize)
}

fn check_finite(xi: f64, upsilon: f64) -> Result<(), GreensError> {
    if xi.is_finite() && upsilon.is_finite() {
        Ok(())
    } else {
        Err(GreensError::InvalidInput(format!("coordinates must be finite, got ({xi}, {upsilon})")))
    }
}

/// −2 f_<(min) f_>(max) / W without the pole guard.
fn g0_unguarded(xi: f64, upsilon: f64, eps: Epsilon) -> Result<f64, GreensError> {
    let nu = HermiteOrder::from_epsilon(eps);
    let (lo, hi) = if xi <= upsilon { (xi, upsilon) } else { (upsilon, xi) };
    let f_lt = hermite_envelope(nu, -lo)?;
    let f_gt = hermite_envelope(nu, hi)?;
    Ok(-2.0 * f_lt * f_gt / wronskian_analytic(eps))
}

/// g₀(ξ, υ; ε) = Γ(1/2−ε)/(2^{ε−1/2}√π) · e^{−(ξ²+υ²)/2} H_ν(−min) H_ν(max).
pub fn g0_eval(xi: f64, upsilon: f64, eps: Epsilon) -> Result<f64, GreensError> {
    check_finite(xi, upsilon)?;
    if let Some(n) = nearest_bare_pole(eps) {
        return Err(GreensError::AtPole {
            epsilon: eps.value(),
            kind: PoleKind::Bare,
            level: Some(n),
        });
    }
    g0_unguarded(xi, upsilon, eps)
}

/// Closed-form residue u_n(ξ) u_n(υ) of g₀ at ε = n + 1/2.
pub fn g0_residue(n: usize, xi: f64, upsilon: f64) -> f64 {
    sho_eigenfunction(n, xi) * sho_eigenfunction(n, upsilon)
}

/// The residue as a numerical limit: (ε_n − ε) g₀ at ε = ε_n − δ for both
/// [`RESIDUE_OFFSETS`], combined by Richardson extrapolation.
pub fn g0_residue_limit(n: usize, xi: f64, upsilon: f64) -> Result<f64, GreensError> {
    check_finite(xi, upsilon)?;
    let eps_n = n as f64 + 0.5;
    let at = |delta: f64| -> Result<f64, GreensError> {
        let eps = Epsilon::new(eps_n - delta).map_err(|e| GreensError::InvalidInput(e.to_string()))?;
        Ok(delta * g0_unguarded(xi, upsilon, eps)?)
    };
    let (coarse, fine) = RESIDUE_OFFSETS;
    let r_coarse = at(coarse)?;
    let r_fine = at(fine)?;
    let ratio = coarse / fine;
    Ok((ratio * r_fine - r_coarse) / (ratio - 1.0))
}

/// 1/λ + g₀(a, a; ε); its zeros are the dressed poles.
pub fn dressed_denominator(eps: Epsilon, spike: DeltaSpike) -> Result<f64, GreensError> {
    let a = spike.position();
    Ok(1.0 / spike.strength() + g0_eval(a, a, eps)?)
}

/// g = g₀(ξ,υ) − g₀(ξ,a) g₀(a,υ) / (1/λ + g₀(a,a)).
pub fn g_delta_eval(xi: f64, upsilon: f64, eps: Epsilon, spike: DeltaSpike) -> Result<f64, GreensError> {
    let bare = g0_eval(xi, upsilon, eps)?;
    if spike.strength() == 0.0 {
        return Ok(bare);
    }
    let a = spike.position();
    let denom = dressed_denominator(eps, spike)?;
    if denom.abs() < DRESSED_POLE_GUARD {
        return Err(GreensError::AtPole {
            epsilon: eps.value(),
            kind: PoleKind::Dressed,
            level: None,
        });
    }
    Ok(bare - g0_eval(xi, a, eps)? * g0_eval(a, upsilon, eps)? / denom)
}

/// Samples on the square [−range, range]² plus the sections ξ = υ and ξ = −υ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreensGrid {
    pub axis: Vec<f64>,
    /// Row-major: ξ = axis[i], υ = axis[j] at index i·n + j.
    pub values: Vec<GreensValue>,
    pub diagonal: Vec<GreensValue>,
    pub antidiagonal: Vec<GreensValue>,
}

impl GreensGrid {
    pub fn n_points(&self) -> usize {
        self.axis.len()
    }

    pub fn at(&self, i: usize, j: usize) -> &GreensValue {
        &self.values[i * self.axis.len() + j]
    }
}

fn eval_point(xi: f64, upsilon: f64, eps: Epsilon, spike: Option<DeltaSpike>) -> Result<GreensValue, GreensError> {
    let value = match spike {
        Some(s) => g_delta_eval(xi, upsilon, eps, s)?,
        None => g0_eval(xi, upsilon, eps)?,
    };
    Ok(GreensValue {
        xi,
        upsilon,
        epsilon: eps,
        value,
    })
}

/// Evaluates g₀ (or g with `spike`) on an `n_points × n_points` grid.
pub fn g_grid(
    range: f64,
    n_points: usize,
    eps: Epsilon,
    spike: Option<DeltaSpike>,
) -> Result<GreensGrid, GreensError> {
    if !(range > 0.0) || !range.is_finite() {
        return Err(GreensError::InvalidInput(format!("range must be > 0, got {range}")));
    }
    if n_points < 2 {
        return Err(GreensError::InvalidInput(format!("need at least 2 points, got {n_points}")));
    }
    let step = 2.0 * range / (n_points - 1) as f64;
    let axis: Vec<f64> = (0..n_points)
        .map(|i| {
            if i == n_points - 1 {
                range
            } else {
                -range + i as f64 * step
            }
        })
        .collect();
    let rows: Vec<Result<Vec<GreensValue>, GreensError>> = axis
        .par_iter()
        .map(|&xi| axis.iter().map(|&up| eval_point(xi, up, eps, spike)).collect())
        .collect();
    let mut values = Vec::with_capacity(n_points * n_points);
    for row in rows {
        values.extend(row?);
    }
    let diagonal = (0..n_points).map(|i| values[i * n_points + i]).collect();
    let antidiagonal = (0..n_points)
        .map(|i| values[i * n_points + (n_points - 1 - i)])
        .collect();
    Ok(GreensGrid {
        axis,
        values,
        diagonal,
        antidiagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn symmetry_example() {
        let a = g0_eval(0.3, -0.2, eps(2.1)).unwrap();
        let b = g0_eval(-0.2, 0.3, eps(2.1)).unwrap();
        let c = g0_eval(-0.3, 0.2, eps(2.1)).unwrap();
        assert_eq!(a, b);
        assert!((a - c).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn pole_guard() {
        assert!(matches!(
            g0_eval(0.0, 0.0, eps(2.5 + 1e-10)),
            Err(GreensError::AtPole {
                kind: PoleKind::Bare,
                level: Some(2),
                ..
            })
        ));
        assert!(g0_eval(0.0, 0.0, eps(2.5 + 1e-8)).is_ok());
        // no poles below the ground state
        assert!(g0_eval(0.0, 0.0, eps(-0.5)).is_ok());
    }

    #[test]
    fn residue_examples() {
        assert!((g0_residue(0, 0.0, 0.0) - 0.5641895835).abs() < 1e-10);
        assert_eq!(g0_residue(1, 0.0, 0.7), 0.0);
        let closed = g0_residue(2, 0.5, -0.4);
        let limit = g0_residue_limit(2, 0.5, -0.4).unwrap();
        assert!((closed - limit).abs() < 1e-6, "{closed} vs {limit}");
    }

    #[test]
    fn damped_tail_ordering() {
        let e = eps(2.1);
        assert!(g0_eval(3.0, 3.0, e).unwrap().abs() > g0_eval(6.0, 6.0, e).unwrap().abs());
        assert!(g0_eval(0.0, 5.0, e).unwrap().abs() < 1e-2 * g0_eval(5.0, 5.0, e).unwrap().abs());
    }

    #[test]
    fn weak_spike_limit() {
        let s = DeltaSpike::new(0.3, 1e-12).unwrap();
        let g = g_delta_eval(0.4, -0.9, eps(1.3), s).unwrap();
        let g0 = g0_eval(0.4, -0.9, eps(1.3)).unwrap();
        assert!((g - g0).abs() < 1e-9);
    }

    #[test]
    fn two_point_grid() {
        let g = g_grid(1.0, 2, eps(2.1), None).unwrap();
        assert_eq!(g.values.len(), 4);
        assert_eq!(g.axis, vec![-1.0, 1.0]);
        assert!(g_grid(1.0, 1, eps(2.1), None).is_err());
        assert!(g_grid(0.0, 3, eps(2.1), None).is_err());
    }
}
