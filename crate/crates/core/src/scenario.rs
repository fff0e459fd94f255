//! Scenario files: a strict TOML schema describing one simulation run.
//!
//! Every key is optional; an empty document reproduces the reference setup
//! (straight tunnel, all three antenna systems, 60/70/80 GHz, 1024 samples).
//! Unknown keys are errors, and every error names the offending key path.

use nalgebra::{Point3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::antenna::{system_preset, AntennaSystem, PRESET_NAMES};
use crate::channel::{CarrierConfig, DelayAggregation, SweepSettings};
use crate::error::{Error, Result};
use crate::scene::{
    BentTunnelParams, DuctParams, Environment, Material, ObstacleSlab, WallMaterials, AXIS_LENGTH,
};
use crate::tracer::{Polarization, TraceSettings};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub frequencies_hz: Vec<f64>,
    pub environment: EnvironmentConfig,
    pub systems: Vec<SystemConfig>,
    pub sweep: SweepConfig,
    pub physics: PhysicsConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            frequencies_hz: vec![60e9, 70e9, 80e9],
            environment: EnvironmentConfig::default(),
            systems: PRESET_NAMES
                .iter()
                .map(|p| SystemConfig {
                    preset: p.to_string(),
                    tx_power_dbm: None,
                    peak_gain_dbi: None,
                })
                .collect(),
            sweep: SweepConfig::default(),
            physics: PhysicsConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvironmentKind {
    PlainCorridor,
    ObstacleCorridor,
    #[default]
    StraightTunnel,
    BentTunnel,
    FreeSpace,
}

impl EnvironmentKind {
    pub const ALL: [EnvironmentKind; 5] = [
        EnvironmentKind::PlainCorridor,
        EnvironmentKind::ObstacleCorridor,
        EnvironmentKind::StraightTunnel,
        EnvironmentKind::BentTunnel,
        EnvironmentKind::FreeSpace,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnvironmentKind::PlainCorridor => "plain_corridor",
            EnvironmentKind::ObstacleCorridor => "obstacle_corridor",
            EnvironmentKind::StraightTunnel => "straight_tunnel",
            EnvironmentKind::BentTunnel => "bent_tunnel",
            EnvironmentKind::FreeSpace => "free_space",
        }
    }
}

impl std::fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EnvironmentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        EnvironmentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = EnvironmentKind::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown environment `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallMode {
    /// One effective material for both side walls.
    #[default]
    Blended,
    /// Brick on the left, plasterboard on the right unless overridden.
    Split,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub kind: EnvironmentKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bend_angle_deg: Option<f64>,
    pub wall_mode: WallMode,
    pub materials: MaterialsConfig,
    /// Replaces the builder's obstacle list when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstacles: Option<Vec<ObstacleConfig>>,
}

/// Partial override of a builder material.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductivity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_conductor: Option<bool>,
}

impl MaterialConfig {
    fn apply(&self, mut base: Material) -> Material {
        if let Some(e) = self.eps_r {
            base.eps_r = e;
        }
        if let Some(s) = self.conductivity {
            base.conductivity = s;
        }
        if let Some(c) = self.is_conductor {
            base.is_conductor = c;
        }
        base
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialsConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walls: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_wall: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right_wall: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ceiling: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wood: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<MaterialConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glass: Option<MaterialConfig>,
}

impl MaterialsConfig {
    fn entries(&self) -> [(&'static str, &Option<MaterialConfig>); 8] {
        [
            ("walls", &self.walls),
            ("left_wall", &self.left_wall),
            ("right_wall", &self.right_wall),
            ("floor", &self.floor),
            ("ceiling", &self.ceiling),
            ("wood", &self.wood),
            ("lift", &self.lift),
            ("glass", &self.glass),
        ]
    }
}

fn overridden(o: &Option<MaterialConfig>, base: Material) -> Material {
    match o {
        Some(c) => c.apply(base),
        None => base,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleConfig {
    pub name: String,
    /// Distance of the near face along the centerline (m).
    pub position: f64,
    #[serde(default = "default_thickness")]
    pub thickness: f64,
    /// `wood`, `lift`, `glass` (subject to the `materials` overrides),
    /// `concrete`, `brick`, `plasterboard` or `marble`.
    pub material: String,
}

fn default_thickness() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub preset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_gain_dbi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n_samples: usize,
    pub rx_start: f64,
    pub rx_height: f64,
    pub tx_position: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_boresight: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_boresight: Option<[f64; 3]>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_samples: 1024,
            rx_start: 1.0,
            rx_height: 1.5,
            tx_position: [0.0, 0.0, 2.0],
            tx_boresight: None,
            rx_boresight: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsConfig {
    pub polarization: Polarization,
    pub atmospheric_loss: bool,
    /// Complex permittivity from the material conductivities.
    pub lossy: bool,
    pub max_order: usize,
    pub delay_aggregation: DelayAggregation,
    /// PDP bin width; 0 keeps every path as its own tap.
    pub pdp_bin_width_ns: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        PhysicsConfig {
            polarization: Polarization::Te,
            atmospheric_loss: false,
            lossy: false,
            max_order: 2,
            delay_aggregation: DelayAggregation::AveragedProfile,
            pdp_bin_width_ns: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
    /// Receiver distances (m) for PDP dumps.
    pub pdp_positions: Vec<f64>,
    pub plot: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: "out".to_string(),
            pdp_positions: vec![10.0],
            plot: true,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| Error::scenario("<document>", e.to_string()))?;
    let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<document>".to_string() } else { path };
        Error::scenario(path, e.into_inner().message().to_string())
    })?;
    config.validate()?;
    Ok(config)
}

fn check(ok: bool, path: impl Into<String>, message: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::scenario(path, message))
    }
}

fn positive(v: f64, path: &str) -> Result<()> {
    check(v.is_finite() && v > 0.0, path, format!("{v} must be a positive number"))
}

fn finite(v: &[f64], path: &str) -> Result<()> {
    check(v.iter().all(|x| x.is_finite()), path, "values must be finite")
}

fn check_material(m: &MaterialConfig, path: &str) -> Result<()> {
    if let Some(e) = m.eps_r {
        check(e.is_finite() && e >= 1.0, format!("{path}.eps_r"), format!("relative permittivity {e} must be >= 1"))?;
    }
    if let Some(s) = m.conductivity {
        check(s.is_finite() && s >= 0.0, format!("{path}.conductivity"), format!("conductivity {s} must be >= 0"))?;
    }
    Ok(())
}

fn unit(v: [f64; 3], path: &str) -> Result<Unit<Vector3<f64>>> {
    let v = Vector3::from(v);
    check(v.iter().all(|x| x.is_finite()) && v.norm() > 1e-12, path, "boresight must be a finite non-zero vector")?;
    Ok(Unit::new_normalize(v))
}

impl ScenarioConfig {
    /// Physical-range checks beyond what the schema enforces.
    pub fn validate(&self) -> Result<()> {
        check(!self.frequencies_hz.is_empty(), "frequencies_hz", "at least one frequency is required")?;
        for (i, &f) in self.frequencies_hz.iter().enumerate() {
            positive(f, &format!("frequencies_hz[{i}]"))?;
        }

        let env = &self.environment;
        for (key, v) in [("length", env.length), ("width", env.width), ("height", env.height)] {
            if let Some(v) = v {
                positive(v, &format!("environment.{key}"))?;
            }
        }
        if let Some(a) = env.bend_angle_deg {
            check(a > 0.0 && a < 90.0, "environment.bend_angle_deg", format!("bend angle {a} deg must lie in (0, 90)"))?;
        }
        for (key, m) in env.materials.entries() {
            if let Some(m) = m {
                check_material(m, &format!("environment.materials.{key}"))?;
            }
        }
        if let Some(obstacles) = &env.obstacles {
            check(
                env.kind != EnvironmentKind::FreeSpace || obstacles.is_empty(),
                "environment.obstacles",
                "free space cannot hold obstacles",
            )?;
            for (i, o) in obstacles.iter().enumerate() {
                let path = format!("environment.obstacles[{i}]");
                check(o.position.is_finite() && o.position >= 0.0, format!("{path}.position"), "position must be >= 0")?;
                positive(o.thickness, &format!("{path}.thickness"))?;
                self.obstacle_material(&o.material)
                    .ok_or_else(|| Error::scenario(format!("{path}.material"), format!("unknown material `{}`", o.material)))?;
            }
        }

        check(!self.systems.is_empty(), "systems", "at least one antenna system is required")?;
        for (i, s) in self.systems.iter().enumerate() {
            if self.systems[..i].iter().any(|o| o.preset == s.preset) {
                return Err(Error::scenario(format!("systems[{i}].preset"), format!("duplicate system `{}`", s.preset)));
            }
        }
        self.antenna_systems()?;

        let sw = &self.sweep;
        check(sw.n_samples >= 2, "sweep.n_samples", format!("n_samples {} must be >= 2", sw.n_samples))?;
        check(sw.rx_start.is_finite() && sw.rx_start >= 0.0, "sweep.rx_start", "rx_start must be >= 0")?;
        finite(&[sw.rx_height], "sweep.rx_height")?;
        finite(&sw.tx_position, "sweep.tx_position")?;
        if let Some(b) = sw.tx_boresight {
            unit(b, "sweep.tx_boresight")?;
        }
        if let Some(b) = sw.rx_boresight {
            unit(b, "sweep.rx_boresight")?;
        }

        let ph = &self.physics;
        check(ph.max_order <= 2, "physics.max_order", format!("max_order {} must be 0, 1 or 2", ph.max_order))?;
        check(
            ph.pdp_bin_width_ns.is_finite() && ph.pdp_bin_width_ns >= 0.0,
            "physics.pdp_bin_width_ns",
            "bin width must be >= 0",
        )?;

        for (i, &d) in self.output.pdp_positions.iter().enumerate() {
            positive(d, &format!("output.pdp_positions[{i}]"))?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config always serializes")
    }

    fn obstacle_material(&self, name: &str) -> Option<Material> {
        let m = &self.environment.materials;
        Some(match name {
            "wood" => overridden(&m.wood, Material::wood()),
            "lift" => overridden(&m.lift, Material::lift_metal()),
            "glass" => overridden(&m.glass, Material::glass()),
            "concrete" => Material::concrete(),
            "brick" => Material::brick(),
            "plasterboard" => Material::plasterboard(),
            "marble" => Material::marble(),
            _ => return None,
        })
    }

    fn walls(&self, base: Material) -> WallMaterials {
        let m = &self.environment.materials;
        match self.environment.wall_mode {
            WallMode::Blended => WallMaterials::Blended(overridden(&m.walls, base)),
            WallMode::Split => WallMaterials::Split {
                left: overridden(&m.left_wall, overridden(&m.walls, Material::brick())),
                right: overridden(&m.right_wall, overridden(&m.walls, Material::plasterboard())),
            },
        }
    }

    fn obstacles(&self, defaults: Vec<ObstacleSlab>) -> Vec<ObstacleSlab> {
        match &self.environment.obstacles {
            None => defaults
                .into_iter()
                .map(|mut o| {
                    let key = match o.material.name.as_str() {
                        n if n.starts_with("wood") => "wood",
                        n if n.starts_with("glass") => "glass",
                        _ => "lift",
                    };
                    o.material = self.obstacle_material(key).unwrap_or(o.material);
                    o
                })
                .collect(),
            Some(list) => list
                .iter()
                .filter_map(|o| {
                    let m = self.obstacle_material(&o.material)?;
                    Some(ObstacleSlab::new(&o.name, o.position, o.thickness, m))
                })
                .collect(),
        }
    }

    /// Builds the configured scene and checks it for geometric consistency.
    pub fn build_environment(&self) -> Result<Environment> {
        let e = &self.environment;
        let m = &e.materials;
        let env = match e.kind {
            EnvironmentKind::FreeSpace => {
                return Ok(Environment::free_space(e.length.unwrap_or(AXIS_LENGTH)));
            }
            EnvironmentKind::BentTunnel => {
                let d = BentTunnelParams::default();
                let mut env = BentTunnelParams {
                    length: e.length.unwrap_or(d.length),
                    width: e.width.unwrap_or(d.width),
                    height: e.height.unwrap_or(d.height),
                    bend_angle_deg: e.bend_angle_deg.unwrap_or(d.bend_angle_deg),
                    walls: self.walls(Material::concrete()),
                    floor: overridden(&m.floor, d.floor),
                    ceiling: overridden(&m.ceiling, d.ceiling),
                }
                .build()?;
                env.obstacles = self.obstacles(Vec::new());
                env
            }
            kind => {
                let d = match kind {
                    EnvironmentKind::PlainCorridor => DuctParams::plain_corridor(),
                    EnvironmentKind::ObstacleCorridor => DuctParams::obstacle_corridor(),
                    _ => DuctParams::straight_tunnel(),
                };
                let base_wall = match &d.walls {
                    WallMaterials::Blended(w) => w.clone(),
                    WallMaterials::Split { left, .. } => left.clone(),
                };
                DuctParams {
                    length: e.length.unwrap_or(d.length),
                    width: e.width.unwrap_or(d.width),
                    height: e.height.unwrap_or(d.height),
                    walls: self.walls(base_wall),
                    floor: overridden(&m.floor, d.floor.clone()),
                    ceiling: overridden(&m.ceiling, d.ceiling.clone()),
                    obstacles: self.obstacles(d.obstacles.clone()),
                    name: d.name,
                }
                .build()
            }
        };
        let report = env.validate();
        if report.is_empty() {
            Ok(env)
        } else {
            Err(Error::Geometry(report.to_string()))
        }
    }

    pub fn antenna_systems(&self) -> Result<Vec<AntennaSystem>> {
        self.systems
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let preset = system_preset(&s.preset)
                    .map_err(|e| Error::scenario(format!("systems[{i}].preset"), e.to_string()))?;
                AntennaSystem::new(
                    &preset.name,
                    preset.kind,
                    s.tx_power_dbm.unwrap_or(preset.tx_power_dbm),
                    s.peak_gain_dbi.unwrap_or(preset.peak_gain_dbi),
                )
                .map_err(|e| Error::scenario(format!("systems[{i}]"), e.to_string()))
            })
            .collect()
    }

    pub fn sweep_settings(&self) -> SweepSettings {
        let sw = &self.sweep;
        let ph = &self.physics;
        SweepSettings {
            n_samples: sw.n_samples,
            rx_start: sw.rx_start,
            rx_height: sw.rx_height,
            tx: Point3::from(sw.tx_position),
            trace: TraceSettings {
                max_order: ph.max_order,
                polarization: ph.polarization,
                frequency: self.frequencies_hz.first().copied().unwrap_or(60e9),
                lossy: ph.lossy,
            },
            tx_boresight: sw.tx_boresight.map(|b| Unit::new_normalize(Vector3::from(b))),
            rx_boresight: sw.rx_boresight.map(|b| Unit::new_normalize(Vector3::from(b))),
            workers: None,
        }
    }

    pub fn carrier(&self, frequency: f64) -> CarrierConfig {
        CarrierConfig::new(frequency).with_atmospheric_loss(self.physics.atmospheric_loss)
    }

    pub fn pdp_bin_width(&self) -> f64 {
        self.physics.pdp_bin_width_ns * 1e-9
    }
}
