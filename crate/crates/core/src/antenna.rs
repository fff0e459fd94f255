//! Transmitter/receiver antenna systems and their power gain patterns.
//!
//! Only peak gains are known for the three reference systems, so the patterns
//! are cos-power shapes whose exponent is chosen so that the gain averages to
//! one over the sphere:
//!
//! * isotropic: `1` everywhere
//! * omni: `G cos^n(elevation)`, azimuth independent
//! * horn: `max(G cos^m(off-boresight), floor)` in front, `floor` behind

use nalgebra::{Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Horn gain behind the aperture plane (-40 dB).
pub const HORN_BACK_LOBE: f64 = 1e-4;
const EXPONENT_TOL: f64 = 1e-6;
const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AntennaKind {
    Isotropic,
    Omni,
    Horn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaSystem {
    /// Preset name (`system1`...) used in output headers.
    pub name: String,
    pub kind: AntennaKind,
    pub tx_power_dbm: f64,
    /// Peak gain, identical at both link ends.
    pub peak_gain_dbi: f64,
    pub boresight: Unit<Vector3<f64>>,
    pub pattern_exponent: f64,
}

impl AntennaSystem {
    pub fn new(name: &str, kind: AntennaKind, tx_power_dbm: f64, peak_gain_dbi: f64) -> Result<Self> {
        let peak = 10f64.powf(peak_gain_dbi / 10.0);
        let pattern_exponent = match kind {
            AntennaKind::Isotropic => {
                if peak_gain_dbi != 0.0 {
                    return Err(Error::Geometry(format!(
                        "isotropic antenna must have 0 dBi peak gain, got {peak_gain_dbi}"
                    )));
                }
                0.0
            }
            AntennaKind::Omni => solve_omni_exponent(peak)?,
            AntennaKind::Horn => solve_horn_exponent(peak)?,
        };
        if !tx_power_dbm.is_finite() {
            return Err(Error::Geometry(format!("transmit power {tx_power_dbm} dBm is not finite")));
        }
        Ok(AntennaSystem {
            name: name.to_string(),
            kind,
            tx_power_dbm,
            peak_gain_dbi,
            boresight: Vector3::x_axis(),
            pattern_exponent,
        })
    }

    /// Same system pointed along `boresight`.
    pub fn pointed(&self, boresight: Unit<Vector3<f64>>) -> Self {
        AntennaSystem {
            boresight,
            ..self.clone()
        }
    }

    pub fn peak_gain(&self) -> f64 {
        match self.kind {
            AntennaKind::Isotropic => 1.0,
            _ => 10f64.powf(self.peak_gain_dbi / 10.0),
        }
    }

    pub fn tx_power_watts(&self) -> f64 {
        10f64.powf((self.tx_power_dbm - 30.0) / 10.0)
    }

    /// Linear power gain towards `direction`, which must be a unit vector.
    pub fn gain(&self, direction: &Vector3<f64>) -> Result<f64> {
        let norm = direction.norm();
        if !((norm - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::NonUnitDirection(norm));
        }
        Ok(self.gain_towards(&Unit::new_unchecked(*direction)))
    }

    pub fn gain_towards(&self, direction: &Unit<Vector3<f64>>) -> f64 {
        match self.kind {
            AntennaKind::Isotropic => 1.0,
            AntennaKind::Omni => {
                let cos2 = (1.0 - direction.z * direction.z).max(0.0);
                self.peak_gain() * cos2.powf(0.5 * self.pattern_exponent)
            }
            AntennaKind::Horn => {
                let c = direction.dot(&self.boresight);
                if c <= 0.0 {
                    HORN_BACK_LOBE
                } else {
                    (self.peak_gain() * c.powf(self.pattern_exponent)).max(HORN_BACK_LOBE)
                }
            }
        }
    }
}

/// The three reference systems: isotropic 20 dBm, omni 8.5 dBi at 20 dBm,
/// horn 20.8 dBi at 10 dBm.
pub fn system_preset(name: &str) -> Result<AntennaSystem> {
    match name {
        "system1" => AntennaSystem::new(name, AntennaKind::Isotropic, 20.0, 0.0),
        "system2" => AntennaSystem::new(name, AntennaKind::Omni, 20.0, 8.5),
        "system3" => AntennaSystem::new(name, AntennaKind::Horn, 10.0, 20.8),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

pub const PRESET_NAMES: [&str; 3] = ["system1", "system2", "system3"];

/// Sphere-averaged gain of the horn pattern with exponent `m`.
pub fn horn_sphere_average(peak: f64, m: f64) -> f64 {
    // In mu = cos(theta): G mu^m down to the crossover mu0, floor below it.
    let mu0 = if m > 0.0 {
        (HORN_BACK_LOBE / peak).powf(1.0 / m).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let main = peak * (1.0 - mu0.powf(m + 1.0)) / (m + 1.0);
    0.5 * (main + HORN_BACK_LOBE * (1.0 + mu0))
}

/// Sphere-averaged gain of `G cos^n(elevation)`.
pub fn omni_sphere_average(peak: f64, n: f64) -> f64 {
    // Simpson's rule on the integral of cos^(n+1) over [0, pi/2].
    const STEPS: usize = 4096;
    let h = std::f64::consts::FRAC_PI_2 / STEPS as f64;
    let f = |e: f64| e.cos().max(0.0).powf(n + 1.0);
    let mut sum = f(0.0) + f(std::f64::consts::FRAC_PI_2);
    for i in 1..STEPS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    peak * sum * h / 3.0
}

/// Bisection for the exponent making `average(x) = 1`; `average` must be
/// decreasing in `x`.
fn solve_exponent(average: impl Fn(f64) -> f64, peak: f64) -> Result<f64> {
    if !(average(0.0) >= 1.0) {
        return Err(Error::Geometry(format!(
            "peak gain {:.3} dBi is too low for a normalized pattern",
            10.0 * peak.log10()
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while average(hi) > 1.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Geometry("pattern exponent does not converge".to_string()));
        }
    }
    while hi - lo > EXPONENT_TOL {
        let mid = 0.5 * (lo + hi);
        if average(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn solve_horn_exponent(peak: f64) -> Result<f64> {
    solve_exponent(|m| horn_sphere_average(peak, m), peak)
}

pub fn solve_omni_exponent(peak: f64) -> Result<f64> {
    solve_exponent(|n| omni_sphere_average(peak, n), peak)
}
