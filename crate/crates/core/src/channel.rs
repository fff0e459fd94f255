//! Narrowband received power, impulse response, power delay profile and
//! receiver sweeps over traced paths.

use nalgebra::{Point3, Unit, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::antenna::AntennaSystem;
use crate::error::{Error, Result};
use crate::scene::Environment;
use crate::tracer::{enumerate_paths, PathContribution, TraceSettings, SPEED_OF_LIGHT};

/// Indoor atmospheric attenuation near 60 GHz, dB/m. Off unless requested.
pub const ATMOSPHERIC_LOSS_DB_PER_M: f64 = 0.00116;

/// Reported instead of a power when no ray reaches the receiver.
pub const NO_COVERAGE: f64 = f64::NEG_INFINITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierConfig {
    pub frequency: f64,
    pub atmospheric_loss_db_per_m: f64,
}

impl CarrierConfig {
    pub fn new(frequency: f64) -> Self {
        CarrierConfig {
            frequency,
            atmospheric_loss_db_per_m: 0.0,
        }
    }

    pub fn with_atmospheric_loss(mut self, on: bool) -> Self {
        self.atmospheric_loss_db_per_m = if on { ATMOSPHERIC_LOSS_DB_PER_M } else { 0.0 };
        self
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTap {
    pub delay: f64,
    /// Complex amplitude in sqrt(W).
    pub amplitude: Complex64,
    /// `|amplitude|^2`, W.
    pub power: f64,
}

/// Unit-power amplitude of one ray: antenna field gains, reflection and
/// transmission products, spreading and carrier phase.
fn path_amplitude(
    path: &PathContribution,
    tx: &AntennaSystem,
    rx: &AntennaSystem,
    carrier: &CarrierConfig,
) -> Complex64 {
    let a_t = tx.gain_towards(&path.departure_dir);
    let a_r = rx.gain_towards(&Unit::new_unchecked(-path.arrival_dir.into_inner()));
    let d = path.length;
    let atmosphere = 10f64.powf(-carrier.atmospheric_loss_db_per_m * d / 20.0);
    let spreading = carrier.wavelength() / (4.0 * PI) / d;
    let phase = Complex64::from_polar(1.0, -carrier.wavenumber() * d);
    (a_t * a_r).sqrt() * spreading * atmosphere * path.reflection_product * path.transmission_product * phase
}

fn watts_to_dbm(w: f64) -> f64 {
    if w > 0.0 {
        10.0 * w.log10() + 30.0
    } else {
        NO_COVERAGE
    }
}

/// Coherent multi-ray received power in dBm, or [`NO_COVERAGE`] for an empty
/// path list. Transmit power is taken from `tx`.
pub fn received_power(
    paths: &[PathContribution],
    tx: &AntennaSystem,
    rx: &AntennaSystem,
    carrier: &CarrierConfig,
) -> f64 {
    if paths.is_empty() {
        return NO_COVERAGE;
    }
    let field: Complex64 = paths.iter().map(|p| path_amplitude(p, tx, rx, carrier)).sum();
    watts_to_dbm(tx.tx_power_watts() * field.norm_sqr())
}

/// One tap per path, in path order.
pub fn impulse_response(
    paths: &[PathContribution],
    tx: &AntennaSystem,
    rx: &AntennaSystem,
    carrier: &CarrierConfig,
) -> Vec<ChannelTap> {
    let scale = tx.tx_power_watts().sqrt();
    paths
        .iter()
        .map(|p| {
            let amplitude = path_amplitude(p, tx, rx, carrier) * scale;
            ChannelTap {
                delay: p.delay,
                amplitude,
                power: amplitude.norm_sqr(),
            }
        })
        .collect()
}

/// Received power (dBm) of the coherent sum of `taps`.
pub fn coherent_power_dbm(taps: &[ChannelTap]) -> f64 {
    let field: Complex64 = taps.iter().map(|t| t.amplitude).sum();
    watts_to_dbm(field.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdpTap {
    pub delay: f64,
    /// Power relative to the strongest tap.
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    pub taps: Vec<PdpTap>,
    /// Zero for an unbinned profile.
    pub bin_width: f64,
    pub first_arrival: f64,
}

/// Normalized profile. With `bin_width > 0` powers are summed in bins of that
/// width starting at the first arrival; each bin sits at its leading edge.
pub fn power_delay_profile(taps: &[ChannelTap], bin_width: f64) -> Result<PowerDelayProfile> {
    if taps.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let first_arrival = taps.iter().map(|t| t.delay).fold(f64::INFINITY, f64::min);
    let mut out: Vec<PdpTap> = if bin_width > 0.0 {
        let mut bins: BTreeMap<u64, f64> = BTreeMap::new();
        for t in taps {
            let idx = ((t.delay - first_arrival) / bin_width).floor() as u64;
            *bins.entry(idx).or_insert(0.0) += t.power;
        }
        bins.into_iter()
            .map(|(i, power)| PdpTap {
                delay: first_arrival + i as f64 * bin_width,
                power,
            })
            .collect()
    } else {
        taps.iter()
            .map(|t| PdpTap {
                delay: t.delay,
                power: t.power,
            })
            .collect()
    };
    out.sort_by(|a, b| a.delay.total_cmp(&b.delay));
    let peak = out.iter().map(|t| t.power).fold(0.0, f64::max);
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::EmptyProfile);
    }
    for t in &mut out {
        t.power /= peak;
    }
    Ok(PowerDelayProfile {
        taps: out,
        bin_width: bin_width.max(0.0),
        first_arrival,
    })
}

fn total_power(pdp: &PowerDelayProfile) -> f64 {
    pdp.taps.iter().map(|t| t.power).sum()
}

/// Power-weighted mean of `tau - first_arrival`.
pub fn mean_excess_delay(pdp: &PowerDelayProfile) -> f64 {
    let total = total_power(pdp);
    pdp.taps
        .iter()
        .map(|t| t.power * (t.delay - pdp.first_arrival))
        .sum::<f64>()
        / total
}

/// Square root of the second central moment of the profile.
pub fn rms_delay_spread(pdp: &PowerDelayProfile) -> f64 {
    let total = total_power(pdp);
    // Centered two-pass form: exact zero for a single delay, shift invariant.
    let mean = pdp.first_arrival + mean_excess_delay(pdp);
    let var = pdp
        .taps
        .iter()
        .map(|t| t.power * (t.delay - mean).powi(2))
        .sum::<f64>()
        / total;
    var.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayAggregation {
    /// Spread of the average of all per-position profiles on the excess-delay axis.
    #[default]
    AveragedProfile,
    /// Mean of the per-position spreads.
    MeanOfPositions,
    /// Median of the per-position spreads.
    MedianOfPositions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub n_samples: usize,
    /// First receiver station along the centerline (m).
    pub rx_start: f64,
    pub rx_height: f64,
    pub tx: Point3<f64>,
    pub trace: TraceSettings,
    /// Override the along-axis transmitter pointing.
    pub tx_boresight: Option<Unit<Vector3<f64>>>,
    /// Override the receiver pointing (default: back along the local axis).
    pub rx_boresight: Option<Unit<Vector3<f64>>>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            n_samples: 1024,
            rx_start: 1.0,
            rx_height: 1.5,
            tx: Point3::new(0.0, 0.0, 2.0),
            trace: TraceSettings::default(),
            tx_boresight: None,
            rx_boresight: None,
            workers: None,
        }
    }
}

impl SweepSettings {
    /// Evenly spaced stations from `rx_start` to the end of the centerline.
    pub fn stations(&self, env: &Environment) -> Result<Vec<f64>> {
        let n = self.n_samples;
        if n < 2 {
            return Err(Error::SampleCount(n));
        }
        let end = env.axis_length();
        if !(self.rx_start >= 0.0 && self.rx_start < end) {
            return Err(Error::SweepRange(format!(
                "rx_start {} must lie in [0, {end})",
                self.rx_start
            )));
        }
        let step = (end - self.rx_start) / (n - 1) as f64;
        Ok((0..n)
            .map(|i| if i == n - 1 { end } else { self.rx_start + i as f64 * step })
            .collect())
    }

    pub fn receiver_at(&self, env: &Environment, s: f64) -> Point3<f64> {
        env.station(s).point + Vector3::new(0.0, 0.0, self.rx_height)
    }

    /// Transmitter and receiver antennas for a receiver at station `s`.
    pub fn orient(&self, env: &Environment, system: &AntennaSystem, s: f64) -> (AntennaSystem, AntennaSystem) {
        let tx_axis = self
            .tx_boresight
            .unwrap_or_else(|| env.station(env.axial_position(&self.tx)).tangent);
        let rx_axis = self
            .rx_boresight
            .unwrap_or_else(|| -env.station(s).tangent);
        (system.pointed(tx_axis), system.pointed(rx_axis))
    }
}

/// Everything computed at one receiver station.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionResult {
    pub distance: f64,
    pub paths: Vec<PathContribution>,
    /// Received power per system, dBm or [`NO_COVERAGE`].
    pub powers_dbm: Vec<f64>,
    /// Impulse response per system.
    pub taps: Vec<Vec<ChannelTap>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSample {
    pub distance: f64,
    pub powers_dbm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub environment: String,
    pub frequency: f64,
    pub system_names: Vec<String>,
    pub samples: Vec<SweepSample>,
}

impl SweepResult {
    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    /// Median power of `system` over samples within `half_width` of `center`.
    /// Blocked samples count as minus infinity.
    pub fn sliding_median(&self, system: usize, center: f64, half_width: f64) -> Option<f64> {
        let window: Vec<f64> = self
            .samples
            .iter()
            .filter(|s| (s.distance - center).abs() <= half_width)
            .map(|s| s.powers_dbm[system])
            .collect();
        median(window)
    }

    /// Median of one system's column over the whole sweep.
    pub fn sweep_median(&self, system: usize) -> Option<f64> {
        median(self.samples.iter().map(|s| s.powers_dbm[system]).collect())
    }
}

pub fn median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

fn run_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::ThreadPool(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Traces and evaluates every station of the sweep. Stations are processed in
/// parallel and merged in index order.
pub fn evaluate_sweep(
    env: &Environment,
    systems: &[AntennaSystem],
    carrier: &CarrierConfig,
    settings: &SweepSettings,
) -> Result<Vec<PositionResult>> {
    let stations = settings.stations(env)?;
    let trace = TraceSettings {
        frequency: carrier.frequency,
        ..settings.trace
    };
    run_pool(settings.workers, || {
        stations
            .par_iter()
            .map(|&s| {
                let rx = settings.receiver_at(env, s);
                let paths = enumerate_paths(env, &settings.tx, &rx, &trace)?;
                let mut powers_dbm = Vec::with_capacity(systems.len());
                let mut taps = Vec::with_capacity(systems.len());
                for sys in systems {
                    let (a_tx, a_rx) = settings.orient(env, sys, s);
                    powers_dbm.push(received_power(&paths, &a_tx, &a_rx, carrier));
                    taps.push(impulse_response(&paths, &a_tx, &a_rx, carrier));
                }
                Ok(PositionResult {
                    distance: s,
                    paths,
                    powers_dbm,
                    taps,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?
}

/// Received-power sweep along the duct centerline for each system.
pub fn sweep_receiver(
    env: &Environment,
    systems: &[AntennaSystem],
    carrier: &CarrierConfig,
    settings: &SweepSettings,
) -> Result<SweepResult> {
    let positions = evaluate_sweep(env, systems, carrier, settings)?;
    Ok(SweepResult {
        environment: env.name.clone(),
        frequency: carrier.frequency,
        system_names: systems.iter().map(|s| s.name.clone()).collect(),
        samples: positions
            .into_iter()
            .map(|p| SweepSample {
                distance: p.distance,
                powers_dbm: p.powers_dbm,
            })
            .collect(),
    })
}

/// Aggregated RMS delay spread (s) of one system over evaluated positions.
/// Positions without coverage are skipped; `None` if none are covered.
pub fn aggregate_delay_spread(
    positions: &[PositionResult],
    system: usize,
    aggregation: DelayAggregation,
    bin_width: f64,
) -> Option<f64> {
    let covered = positions
        .iter()
        .map(|p| &p.taps[system])
        .filter(|t| t.iter().any(|t| t.power > 0.0));
    match aggregation {
        DelayAggregation::AveragedProfile => {
            let n = positions.len() as f64;
            let pooled: Vec<ChannelTap> = covered
                .flat_map(|taps| {
                    let first = taps.iter().map(|t| t.delay).fold(f64::INFINITY, f64::min);
                    taps.iter().map(move |t| ChannelTap {
                        delay: t.delay - first,
                        amplitude: t.amplitude,
                        power: t.power / n,
                    })
                })
                .collect();
            power_delay_profile(&pooled, bin_width).ok().map(|p| rms_delay_spread(&p))
        }
        DelayAggregation::MeanOfPositions | DelayAggregation::MedianOfPositions => {
            let spreads: Vec<f64> = covered
                .filter_map(|t| power_delay_profile(t, bin_width).ok())
                .map(|p| rms_delay_spread(&p))
                .collect();
            if spreads.is_empty() {
                return None;
            }
            if aggregation == DelayAggregation::MeanOfPositions {
                Some(spreads.iter().sum::<f64>() / spreads.len() as f64)
            } else {
                median(spreads)
            }
        }
    }
}

/// Normalized power delay profile of `system` with the receiver at station `s`.
pub fn profile_at(
    env: &Environment,
    system: &AntennaSystem,
    carrier: &CarrierConfig,
    settings: &SweepSettings,
    s: f64,
    bin_width: f64,
) -> Result<PowerDelayProfile> {
    let rx = settings.receiver_at(env, s);
    let trace = TraceSettings {
        frequency: carrier.frequency,
        ..settings.trace
    };
    let paths = enumerate_paths(env, &settings.tx, &rx, &trace)?;
    let (a_tx, a_rx) = settings.orient(env, system, s);
    power_delay_profile(&impulse_response(&paths, &a_tx, &a_rx, carrier), bin_width)
}

/// RMS delay spreads for one environment: rows are systems, columns frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySpreadTable {
    pub environment: String,
    pub system_names: Vec<String>,
    pub frequencies: Vec<f64>,
    /// Seconds; NaN where no position had coverage.
    pub cells: Vec<Vec<f64>>,
}

impl DelaySpreadTable {
    pub fn cell_ns(&self, system: usize, frequency: usize) -> f64 {
        self.cells[system][frequency] * 1e9
    }
}

pub fn delay_spread_table(
    envs: &[Environment],
    systems: &[AntennaSystem],
    frequencies: &[f64],
    settings: &SweepSettings,
    aggregation: DelayAggregation,
    bin_width: f64,
) -> Result<Vec<DelaySpreadTable>> {
    envs.iter()
        .map(|env| {
            let mut cells = vec![vec![f64::NAN; frequencies.len()]; systems.len()];
            for (j, &f) in frequencies.iter().enumerate() {
                let positions = evaluate_sweep(env, systems, &CarrierConfig::new(f), settings)?;
                for (i, row) in cells.iter_mut().enumerate() {
                    row[j] = aggregate_delay_spread(&positions, i, aggregation, bin_width).unwrap_or(f64::NAN);
                }
            }
            Ok(DelaySpreadTable {
                environment: env.name.clone(),
                system_names: systems.iter().map(|s| s.name.clone()).collect(),
                frequencies: frequencies.to_vec(),
                cells,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::system_preset;
    use approx::assert_abs_diff_eq;

    fn tap(delay_ns: f64, power: f64) -> ChannelTap {
        ChannelTap {
            delay: delay_ns * 1e-9,
            amplitude: Complex64::new(power.sqrt(), 0.0),
            power,
        }
    }

    #[test]
    fn carrier_relations() {
        let c = CarrierConfig::new(60e9);
        assert!((c.wavelength() * c.frequency / SPEED_OF_LIGHT - 1.0).abs() < 1e-12);
        assert_abs_diff_eq!(c.wavenumber(), 2.0 * PI / c.wavelength(), epsilon = 1e-12);
        assert_abs_diff_eq!(c.wavelength(), 0.0049965, epsilon = 1e-7);
    }

    #[test]
    fn pdp_single_and_tie() {
        let p = power_delay_profile(&[tap(3.0, 0.2)], 0.0).unwrap();
        assert_eq!(p.taps.len(), 1);
        assert_eq!(p.taps[0].power, 1.0);
        assert_eq!(p.taps[0].delay, p.first_arrival);
        assert_eq!(rms_delay_spread(&p), 0.0);
        assert_eq!(mean_excess_delay(&p), 0.0);
        let p = power_delay_profile(&[tap(1.0, 0.5), tap(2.0, 0.5)], 0.0).unwrap();
        assert!(p.taps.iter().all(|t| t.power == 1.0));
    }

    #[test]
    fn pdp_binning() {
        let p = power_delay_profile(&[tap(1.0, 0.25), tap(1.2, 0.5)], 0.5e-9).unwrap();
        assert_eq!(p.taps.len(), 1);
        assert_abs_diff_eq!(p.taps[0].delay, 1e-9, epsilon = 1e-24);
        assert_eq!(p.taps[0].power, 1.0);
        let p = power_delay_profile(&[tap(1.0, 0.25), tap(1.2, 0.5), tap(2.0, 1.5)], 0.5e-9).unwrap();
        assert_eq!(p.taps.len(), 2);
        assert_abs_diff_eq!(p.taps[0].power, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn pdp_errors() {
        assert!(matches!(power_delay_profile(&[], 0.0), Err(Error::EmptyProfile)));
        assert!(matches!(power_delay_profile(&[tap(1.0, 0.0)], 0.0), Err(Error::EmptyProfile)));
    }

    #[test]
    fn two_tap_moments() {
        let p = power_delay_profile(&[tap(0.0, 1.0), tap(2.0, 1.0)], 0.0).unwrap();
        assert_abs_diff_eq!(rms_delay_spread(&p), 1e-9, epsilon = 1e-21);
        assert_abs_diff_eq!(mean_excess_delay(&p), 1e-9, epsilon = 1e-21);
        let shifted = power_delay_profile(&[tap(5.0, 1.0), tap(7.0, 1.0)], 0.0).unwrap();
        assert_abs_diff_eq!(rms_delay_spread(&shifted), 1e-9, epsilon = 1e-21);
    }

    #[test]
    fn empty_paths_have_no_coverage() {
        let iso = system_preset("system1").unwrap();
        assert_eq!(received_power(&[], &iso, &iso, &CarrierConfig::new(60e9)), NO_COVERAGE);
    }

    #[test]
    fn stations_span_the_duct() {
        let env = crate::scene::build_straight_tunnel();
        let s = SweepSettings::default().stations(&env).unwrap();
        assert_eq!(s.len(), 1024);
        assert_eq!(s[0], 1.0);
        assert_eq!(*s.last().unwrap(), 44.0);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        let bad = SweepSettings {
            n_samples: 1,
            ..Default::default()
        };
        assert!(matches!(bad.stations(&env), Err(Error::SampleCount(1))));
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(vec![]), None);
        assert_eq!(median(vec![f64::NEG_INFINITY, 1.0, 2.0]), Some(1.0));
    }
}
