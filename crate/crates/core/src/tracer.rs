//! Image-method path enumeration up to second-order specular reflection.

use nalgebra::{Point3, Unit, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::scene::{Environment, Material, ObstacleSlab, Surface};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Barycentric slack when testing whether a reflection point lies on its facet.
pub const SURFACE_SLACK: f64 = 1e-9;
const SEGMENT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// Electric field perpendicular to the plane of incidence.
    #[default]
    #[serde(alias = "te_perpendicular")]
    Te,
    /// Electric field parallel to the plane of incidence.
    #[serde(alias = "tm_parallel")]
    Tm,
}

impl std::str::FromStr for Polarization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "te" => Ok(Polarization::Te),
            "tm" => Ok(Polarization::Tm),
            other => Err(format!("unknown polarization `{other}` (expected te or tm)")),
        }
    }
}

/// Lossless Fresnel reflection coefficient at an air/dielectric interface.
pub fn fresnel_reflection(eps_r: f64, theta: f64, pol: Polarization) -> Result<f64> {
    if !(eps_r >= 1.0) {
        return Err(Error::Permittivity(eps_r));
    }
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(Error::IncidenceAngle(theta));
    }
    let c = theta.cos();
    // eps - sin^2 written as (eps - 1) + cos^2: exact zero contrast at eps = 1.
    let root = ((eps_r - 1.0) + c * c).sqrt();
    Ok(match pol {
        Polarization::Te => (c - root) / (c + root),
        Polarization::Tm => (eps_r * c - root) / (eps_r * c + root),
    })
}

fn complex_fresnel(eps: Complex64, theta: f64, pol: Polarization) -> Complex64 {
    let c = theta.cos();
    let root = ((eps - 1.0) + c * c).sqrt();
    match pol {
        Polarization::Te => (c - root) / (c + root),
        Polarization::Tm => (eps * c - root) / (eps * c + root),
    }
}

/// Reflection coefficient of `material` at `theta`. Conductors reflect with
/// unit magnitude; `lossy` adds the conductivity term to the permittivity.
pub fn reflection_coefficient(
    material: &Material,
    theta: f64,
    pol: Polarization,
    frequency: f64,
    lossy: bool,
) -> Complex64 {
    if material.is_conductor {
        return match pol {
            Polarization::Te => Complex64::new(-1.0, 0.0),
            Polarization::Tm => Complex64::new(1.0, 0.0),
        };
    }
    let theta = theta.clamp(0.0, FRAC_PI_2);
    if lossy && material.conductivity > 0.0 {
        let omega = 2.0 * std::f64::consts::PI * frequency;
        let eps = Complex64::new(material.eps_r, -material.conductivity / (omega * VACUUM_PERMITTIVITY));
        complex_fresnel(eps, theta, pol)
    } else {
        complex_fresnel(Complex64::new(material.eps_r.max(1.0), 0.0), theta, pol)
    }
}

/// Amplitude transmission through `slab` at incidence `theta`, two interfaces
/// and the in-slab phase, no internal multiple reflections. Conductors block.
pub fn slab_transmission(slab: &ObstacleSlab, theta: f64, frequency: f64, pol: Polarization) -> Complex64 {
    let m = &slab.material;
    if m.is_conductor {
        return Complex64::new(0.0, 0.0);
    }
    let eps = m.eps_r.max(1.0);
    let theta = theta.clamp(0.0, FRAC_PI_2 - 1e-12);
    let r = fresnel_reflection(eps, theta, pol).unwrap_or(-1.0);
    let sin_t = theta.sin() / eps.sqrt();
    let path_in_slab = slab.thickness / (1.0 - sin_t * sin_t).sqrt();
    let k_slab = 2.0 * std::f64::consts::PI * frequency / SPEED_OF_LIGHT * eps.sqrt();
    Complex64::from_polar(1.0 - r * r, -k_slab * path_in_slab)
}

/// Reflection of `p` across the infinite plane of `surface`.
pub fn mirror_point(p: &Point3<f64>, surface: &Surface) -> Point3<f64> {
    p - surface.normal() * (2.0 * surface.signed_distance(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bounce {
    /// Index into `Environment::surfaces`.
    pub surface: usize,
    pub point: Point3<f64>,
    /// Angle from the surface normal, radians.
    pub incidence_angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathContribution {
    pub order: usize,
    /// Tx, reflection points, Rx.
    pub vertices: Vec<Point3<f64>>,
    pub length: f64,
    pub delay: f64,
    pub bounces: Vec<Bounce>,
    pub reflection_product: Complex64,
    pub transmission_product: Complex64,
    /// Propagation direction leaving the transmitter.
    pub departure_dir: Unit<Vector3<f64>>,
    /// Propagation direction arriving at the receiver.
    pub arrival_dir: Unit<Vector3<f64>>,
}

impl PathContribution {
    /// Surface names joined by `+`, or `direct`.
    pub fn label(&self, env: &Environment) -> String {
        if self.bounces.is_empty() {
            return "direct".to_string();
        }
        self.bounces
            .iter()
            .map(|b| env.surfaces[b.surface].name.as_str())
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn surface_indices(&self) -> Vec<usize> {
        self.bounces.iter().map(|b| b.surface).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSettings {
    pub max_order: usize,
    pub polarization: Polarization,
    /// Carrier frequency (Hz); sets slab phase and lossy permittivity.
    pub frequency: f64,
    /// Include conductivity in the reflection coefficients.
    pub lossy: bool,
}

impl Default for TraceSettings {
    fn default() -> Self {
        TraceSettings {
            max_order: 2,
            polarization: Polarization::Te,
            frequency: 60e9,
            lossy: false,
        }
    }
}

/// Per-segment lengths and per-bounce incidence angles.
pub fn path_geometry(path: &PathContribution) -> (Vec<f64>, Vec<f64>) {
    let lengths = path.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let angles = path.bounces.iter().map(|b| b.incidence_angle).collect();
    (lengths, angles)
}

fn incidence_angle(incoming: &Vector3<f64>, surface: &Surface) -> f64 {
    let c = (incoming.normalize().dot(surface.normal())).abs().min(1.0);
    c.acos().min(FRAC_PI_2 - f64::EPSILON)
}

/// True when a surface other than those in `skip` cuts the open segment `a -> b`.
fn occluded(env: &Environment, a: &Point3<f64>, b: &Point3<f64>, skip: &[usize]) -> bool {
    env.surfaces.iter().enumerate().any(|(i, s)| {
        if skip.contains(&i) {
            return false;
        }
        let da = s.signed_distance(a);
        let db = s.signed_distance(b);
        if da * db > 0.0 {
            return false;
        }
        match s.line_parameter(a, b) {
            Some(t) if t > SEGMENT_EPS && t < 1.0 - SEGMENT_EPS => s.contains(&(a + (b - a) * t), 0.0),
            _ => false,
        }
    })
}

struct Candidate {
    vertices: Vec<Point3<f64>>,
    surfaces: Vec<usize>,
}

fn first_order(env: &Environment, tx: &Point3<f64>, rx: &Point3<f64>, s: usize) -> Option<Candidate> {
    let surf = &env.surfaces[s];
    if surf.signed_distance(tx) <= 0.0 || surf.signed_distance(rx) <= 0.0 {
        return None;
    }
    let image = mirror_point(tx, surf);
    let t = surf.line_parameter(&image, rx)?;
    if !(t > 0.0 && t < 1.0) {
        return None;
    }
    let p = image + (rx - image) * t;
    if !surf.contains(&p, SURFACE_SLACK) {
        return None;
    }
    Some(Candidate {
        vertices: vec![*tx, p, *rx],
        surfaces: vec![s],
    })
}

fn second_order(
    env: &Environment,
    tx: &Point3<f64>,
    rx: &Point3<f64>,
    s1: usize,
    s2: usize,
) -> Option<Candidate> {
    let (a, b) = (&env.surfaces[s1], &env.surfaces[s2]);
    if a.signed_distance(tx) <= 0.0 || b.signed_distance(rx) <= 0.0 {
        return None;
    }
    let i1 = mirror_point(tx, a);
    let i2 = mirror_point(&i1, b);
    if b.signed_distance(&i2) >= 0.0 {
        return None;
    }
    let t2 = b.line_parameter(&i2, rx)?;
    if !(t2 > 0.0 && t2 < 1.0) {
        return None;
    }
    let p2 = i2 + (rx - i2) * t2;
    if !b.contains(&p2, SURFACE_SLACK) || a.signed_distance(&p2) <= 0.0 {
        return None;
    }
    let t1 = a.line_parameter(&i1, &p2)?;
    if !(t1 > 0.0 && t1 < 1.0) {
        return None;
    }
    let p1 = i1 + (p2 - i1) * t1;
    if !a.contains(&p1, SURFACE_SLACK) || b.signed_distance(&p1) <= 0.0 {
        return None;
    }
    Some(Candidate {
        vertices: vec![*tx, p1, p2, *rx],
        surfaces: vec![s1, s2],
    })
}

fn finish(env: &Environment, c: Candidate, settings: &TraceSettings) -> Option<PathContribution> {
    let n = c.vertices.len();
    for k in 0..n - 1 {
        let mut skip = Vec::with_capacity(2);
        if k > 0 {
            skip.push(c.surfaces[k - 1]);
        }
        if k < c.surfaces.len() {
            skip.push(c.surfaces[k]);
        }
        if occluded(env, &c.vertices[k], &c.vertices[k + 1], &skip) {
            return None;
        }
    }

    let mut transmission = Complex64::new(1.0, 0.0);
    for w in c.vertices.windows(2) {
        for slab in &env.obstacles {
            if env.segment_crosses(slab, &w[0], &w[1]) {
                if slab.material.is_conductor {
                    return None;
                }
                let normal = env.obstacle_station(slab).tangent;
                let theta = (w[1] - w[0]).normalize().dot(&normal).abs().min(1.0).acos();
                transmission *= slab_transmission(slab, theta, settings.frequency, settings.polarization);
            }
        }
    }

    let mut reflection = Complex64::new(1.0, 0.0);
    let mut bounces = Vec::with_capacity(c.surfaces.len());
    for (k, &s) in c.surfaces.iter().enumerate() {
        let surf = &env.surfaces[s];
        let incoming = c.vertices[k + 1] - c.vertices[k];
        let theta = incidence_angle(&incoming, surf);
        reflection *= reflection_coefficient(
            &surf.material,
            theta,
            settings.polarization,
            settings.frequency,
            settings.lossy,
        );
        bounces.push(Bounce {
            surface: s,
            point: c.vertices[k + 1],
            incidence_angle: theta,
        });
    }

    let length: f64 = c.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    Some(PathContribution {
        order: c.surfaces.len(),
        departure_dir: Unit::new_normalize(c.vertices[1] - c.vertices[0]),
        arrival_dir: Unit::new_normalize(c.vertices[n - 1] - c.vertices[n - 2]),
        vertices: c.vertices,
        length,
        delay: length / SPEED_OF_LIGHT,
        bounces,
        reflection_product: reflection,
        transmission_product: transmission,
    })
}

/// All unblocked direct, single- and double-reflection paths from `tx` to
/// `rx`, sorted by `(order, delay)`.
pub fn enumerate_paths(
    env: &Environment,
    tx: &Point3<f64>,
    rx: &Point3<f64>,
    settings: &TraceSettings,
) -> Result<Vec<PathContribution>> {
    if settings.max_order > 2 {
        return Err(Error::MaxOrder(settings.max_order));
    }
    for (what, p) in [("transmitter", tx), ("receiver", rx)] {
        if !p.iter().all(|c| c.is_finite()) || !env.contains_point(p) {
            return Err(Error::OutsideDuct {
                what,
                x: p.x,
                y: p.y,
                z: p.z,
            });
        }
    }

    let n = env.surfaces.len();
    let mut candidates = vec![Candidate {
        vertices: vec![*tx, *rx],
        surfaces: Vec::new(),
    }];
    if settings.max_order >= 1 {
        candidates.extend((0..n).filter_map(|s| first_order(env, tx, rx, s)));
    }
    if settings.max_order >= 2 {
        for s1 in 0..n {
            for s2 in (0..n).filter(|&s2| s2 != s1) {
                candidates.extend(second_order(env, tx, rx, s1, s2));
            }
        }
    }

    let mut paths: Vec<PathContribution> = candidates
        .into_iter()
        .filter(|c| (c.vertices[1] - c.vertices[0]).norm() > 0.0)
        .filter_map(|c| finish(env, c, settings))
        .collect();
    paths.sort_by(|a, b| a.order.cmp(&b.order).then(a.delay.total_cmp(&b.delay)));
    Ok(paths)
}
