//! Dimensionless quantities shared by every module.
//!
//! Positions are ξ = αx with α = √(mω/ħ), energies are ε = E/(ħω) and a
//! spike `g δ(x − x₀)` has strength λ = g m / (α ħ²).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitsError {
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
}

fn finite(name: &'static str, value: f64) -> Result<f64, UnitsError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(UnitsError::NotFinite { name, value })
    }
}

/// Dimensionless energy ε = E/(ħω).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self, UnitsError> {
        finite("epsilon", value).map(Self)
    }

    /// ε from the Hermite order ν = ε − 1/2.
    pub fn from_nu(nu: f64) -> Result<Self, UnitsError> {
        Self::new(nu + 0.5)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn nu(self) -> f64 {
        self.0 - 0.5
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = UnitsError;
    fn try_from(v: f64) -> Result<Self, UnitsError> {
        Self::new(v)
    }
}

impl From<Epsilon> for f64 {
    fn from(e: Epsilon) -> f64 {
        e.0
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A delta potential λ δ(ξ − a) in dimensionless units. Negative strength is
/// attractive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaSpike {
    position: f64,
    strength: f64,
}

impl DeltaSpike {
    pub fn new(position: f64, strength: f64) -> Result<Self, UnitsError> {
        Ok(Self {
            position: finite("spike position", position)?,
            strength: finite("spike strength", strength)?,
        })
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

impl std::str::FromStr for DeltaSpike {
    type Err = String;

    /// Parses `a,lambda`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, l) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `position,strength`, got `{s}`"))?;
        let a: f64 = a.trim().parse().map_err(|e| format!("bad spike position `{a}`: {e}"))?;
        let l: f64 = l.trim().parse().map_err(|e| format!("bad spike strength `{l}`: {e}"))?;
        DeltaSpike::new(a, l).map_err(|e| e.to_string())
    }
}

/// Physical constants of an oscillator, for converting dimensionful input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorUnits {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorUnits {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self, UnitsError> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(finite(name, v)? > 0.0) {
                return Err(UnitsError::NotPositive { name, value: v });
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    /// α = √(mω/ħ).
    pub fn alpha(&self) -> f64 {
        (self.mass * self.omega / self.hbar).sqrt()
    }

    pub fn position(&self, x: f64) -> f64 {
        self.alpha() * x
    }

    pub fn epsilon(&self, energy: f64) -> Result<Epsilon, UnitsError> {
        Epsilon::new(energy / (self.hbar * self.omega))
    }

    pub fn energy(&self, eps: Epsilon) -> f64 {
        eps.value() * self.hbar * self.omega
    }

    /// λ for a physical `g δ(x − x₀)`.
    pub fn coupling(&self, g: f64) -> f64 {
        g * self.mass / (self.alpha() * self.hbar * self.hbar)
    }

    pub fn spike(&self, x0: f64, g: f64) -> Result<DeltaSpike, UnitsError> {
        DeltaSpike::new(self.position(x0), self.coupling(g))
    }

    /// Converts a dimensionless Green's function g back to G = m g / (α ħ²).
    pub fn greens(&self, g: f64) -> f64 {
        g * self.mass / (self.alpha() * self.hbar * self.hbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_rejects_non_finite() {
        assert!(Epsilon::new(f64::NAN).is_err());
        assert_eq!(Epsilon::new(2.5).unwrap().nu(), 2.0);
    }

    #[test]
    fn spike_parses() {
        let s: DeltaSpike = "0.5,-1".parse().unwrap();
        assert_eq!((s.position(), s.strength()), (0.5, -1.0));
        assert!("0.5".parse::<DeltaSpike>().is_err());
    }

    #[test]
    fn unit_round_trip() {
        let u = OscillatorUnits::new(2.0, 3.0, 0.5).unwrap();
        let e = u.epsilon(4.2).unwrap();
        assert!((u.energy(e) - 4.2).abs() < 1e-14);
        let unit = OscillatorUnits::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(unit.coupling(0.7), 0.7);
        assert!(OscillatorUnits::new(-1.0, 1.0, 1.0).is_err());
    }
}
