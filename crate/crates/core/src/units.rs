//! Unit conventions and elementary dispersion relations.
//!
//! The whole crate works in `ħ = 1`, `2m = 1`. With that choice the incident
//! energy and wavenumber are related by `E = k²`, a barrier of strength `V`
//! carries the (generally complex) decay constant `κ = sqrt(V − E)`, and the
//! free-particle velocity is `v = ħk/m = 2k`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced Planck constant in the fixed unit system.
pub const HBAR: f64 = 1.0;

/// Twice the particle mass in the fixed unit system.
pub const TWO_M: f64 = 1.0;

/// Incident energy, restricted to positive finite values so the lead
/// wavenumber `k = sqrt(E)` is real and positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Energy(f64);

impl Energy {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!(
                "energy must be finite and positive, got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Lead wavenumber `k = sqrt(E)`.
    pub fn wavenumber(self) -> f64 {
        self.0.sqrt()
    }
}

/// Wavenumber of the free lead, `k = sqrt(E)`.
pub fn wavenumber(energy: Energy) -> f64 {
    energy.wavenumber()
}

/// Free-particle velocity `v = ħk/m = 2k`.
pub fn velocity(energy: Energy) -> f64 {
    2.0 * energy.wavenumber()
}

/// Decay constant `κ = sqrt(V − E)` as a principal-branch complex value.
///
/// Real and positive under the barrier (`V > E`), purely imaginary with
/// positive imaginary part above it (`V < E`), zero at the top (`V = E`).
/// Built from real square roots so the real/imaginary parts are exact,
/// not polluted by `atan2` rounding.
pub fn kappa(strength: f64, energy: Energy) -> Complex64 {
    let gap = strength - energy.value();
    if gap >= 0.0 {
        Complex64::new(gap.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-gap).sqrt())
    }
}

/// Quantities rescaled into the reporting convention: strengths in units of
/// the incident energy, widths in units of the inverse wavenumber, times in
/// units of the inverse energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reported {
    /// `V / E`
    pub strength: f64,
    /// `k · w`
    pub width: f64,
    /// `E · τ`
    pub phase_time: f64,
}

/// Rescale raw engine values for reporting. The identity map when `E = 1`.
pub fn normalize_report(strength: f64, width: f64, phase_time: f64, energy: Energy) -> Reported {
    let e = energy.value();
    Reported {
        strength: strength / e,
        width: energy.wavenumber() * width,
        phase_time: e * phase_time,
    }
}
