//! Indoor propagation environments built from finite planar reflectors.
//!
//! Every environment is a duct running along a horizontal centerline polyline
//! that starts at the origin. The floor sits at `z = 0`, the ceiling at
//! `z = height`, and the left wall is on the `+lateral` side of the axis
//! (`+y` for the first straight run). Surface normals point into the duct.
//!
//! Obstacles (doors, the lift) are transverse slabs that span the whole
//! cross-section. They never reflect; the tracer applies their transmission
//! to every ray segment that crosses them.

use nalgebra::{Point2, Point3, Unit, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis length shared by all four reference environments.
pub const AXIS_LENGTH: f64 = 44.0;

const ORTHOGONALITY_TOL: f64 = 1e-9;
const NORMAL_TOL: f64 = 1e-12;
const ON_AXIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Relative permittivity.
    pub eps_r: f64,
    /// Conductivity in S/m. Only used when lossy reflection is requested.
    pub conductivity: f64,
    /// Metallic surface: reflection magnitude 1 and no transmission.
    pub is_conductor: bool,
}

impl Material {
    pub fn dielectric(name: &str, eps_r: f64) -> Self {
        Material {
            name: name.to_string(),
            eps_r,
            conductivity: 0.0,
            is_conductor: false,
        }
    }

    pub fn conductor(name: &str) -> Self {
        Material {
            name: name.to_string(),
            eps_r: 1.0,
            conductivity: 0.0,
            is_conductor: true,
        }
    }

    pub fn brick() -> Self {
        Self::dielectric("brick", 4.44)
    }

    pub fn plasterboard() -> Self {
        Self::dielectric("plasterboard", 5.0)
    }

    /// Single effective wall material: arithmetic mean of brick and plasterboard.
    pub fn brick_plasterboard() -> Self {
        Self::dielectric("brick+plasterboard", 0.5 * (4.44 + 5.0))
    }

    pub fn marble() -> Self {
        Self::dielectric("marble", 4.0)
    }

    /// Furred aluminum ceiling, taken at its listed permittivity of 1.0.
    pub fn furred_ceiling() -> Self {
        Self::dielectric("aluminum ceiling", 1.0)
    }

    pub fn concrete() -> Self {
        Self::dielectric("concrete", 5.0)
    }

    pub fn wood() -> Self {
        Self::dielectric("wood", 3.3)
    }

    pub fn glass() -> Self {
        Self::dielectric("glass", 6.0)
    }

    pub fn lift_metal() -> Self {
        Self::conductor("lift")
    }
}

/// Finite planar rectangle `origin + a*edge_u + b*edge_v`, `a, b` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub name: String,
    pub origin: Point3<f64>,
    pub edge_u: Vector3<f64>,
    pub edge_v: Vector3<f64>,
    pub material: Material,
    pub outward_normal: Unit<Vector3<f64>>,
}

impl Surface {
    /// The normal is `edge_u x edge_v`, so edge order fixes the reflecting side.
    pub fn new(
        name: &str,
        origin: Point3<f64>,
        edge_u: Vector3<f64>,
        edge_v: Vector3<f64>,
        material: Material,
    ) -> Self {
        Surface {
            name: name.to_string(),
            origin,
            edge_u,
            edge_v,
            material,
            outward_normal: Unit::new_normalize(edge_u.cross(&edge_v)),
        }
    }

    pub fn normal(&self) -> &Vector3<f64> {
        self.outward_normal.as_ref()
    }

    /// Positive on the reflecting (interior) side.
    pub fn signed_distance(&self, p: &Point3<f64>) -> f64 {
        (p - self.origin).dot(self.normal())
    }

    /// Rectangle coordinates of the projection of `p`.
    pub fn local_coords(&self, p: &Point3<f64>) -> (f64, f64) {
        let d = p - self.origin;
        (
            d.dot(&self.edge_u) / self.edge_u.norm_squared(),
            d.dot(&self.edge_v) / self.edge_v.norm_squared(),
        )
    }

    pub fn contains(&self, p: &Point3<f64>, slack: f64) -> bool {
        let (a, b) = self.local_coords(p);
        (-slack..=1.0 + slack).contains(&a) && (-slack..=1.0 + slack).contains(&b)
    }

    pub fn centroid(&self) -> Point3<f64> {
        self.origin + 0.5 * (self.edge_u + self.edge_v)
    }

    /// Parameter `t` where the line `a + t (b - a)` meets the surface plane.
    pub fn line_parameter(&self, a: &Point3<f64>, b: &Point3<f64>) -> Option<f64> {
        let da = self.signed_distance(a);
        let db = self.signed_distance(b);
        let denom = da - db;
        if denom.abs() < f64::EPSILON * (da.abs() + db.abs()).max(1e-300) {
            return None;
        }
        Some(da / denom)
    }
}

/// Transverse slab spanning the full duct cross-section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleSlab {
    pub name: String,
    /// Start of the slab, measured along the centerline (m).
    pub position: f64,
    pub thickness: f64,
    pub material: Material,
}

impl ObstacleSlab {
    pub fn new(name: &str, position: f64, thickness: f64, material: Material) -> Self {
        ObstacleSlab {
            name: name.to_string(),
            position,
            thickness,
            material,
        }
    }

    pub fn mid_position(&self) -> f64 {
        self.position + 0.5 * self.thickness
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection {
    pub width: f64,
    pub height: f64,
}

/// Local frame of the duct at one centerline station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Station {
    /// Centerline point at floor level.
    pub point: Point3<f64>,
    pub tangent: Unit<Vector3<f64>>,
    /// Horizontal unit vector towards the left wall.
    pub lateral: Unit<Vector3<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub name: String,
    pub surfaces: Vec<Surface>,
    pub obstacles: Vec<ObstacleSlab>,
    /// Horizontal centerline, starting at the transmitter end.
    pub centerline: Vec<Point2<f64>>,
    /// `None` for an unbounded free-space scene.
    pub cross_section: Option<CrossSection>,
}

impl Environment {
    /// Surface-free scene: only the line-of-sight ray exists.
    pub fn free_space(length: f64) -> Self {
        Environment {
            name: "free_space".to_string(),
            surfaces: Vec::new(),
            obstacles: Vec::new(),
            centerline: vec![Point2::origin(), Point2::new(length, 0.0)],
            cross_section: None,
        }
    }

    pub fn axis_length(&self) -> f64 {
        self.centerline
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }

    fn segment_direction(&self, i: usize) -> Vector2<f64> {
        (self.centerline[i + 1] - self.centerline[i]).normalize()
    }

    /// Frame at arc length `s`, clamped to the centerline ends.
    pub fn station(&self, s: f64) -> Station {
        let n = self.centerline.len() - 1;
        let mut remaining = s.max(0.0);
        for i in 0..n {
            let a = self.centerline[i];
            let len = (self.centerline[i + 1] - a).norm();
            if remaining <= len || i == n - 1 {
                let dir = self.segment_direction(i);
                let p = a + dir * remaining.min(len);
                return Station {
                    point: Point3::new(p.x, p.y, 0.0),
                    tangent: Unit::new_unchecked(Vector3::new(dir.x, dir.y, 0.0)),
                    lateral: Unit::new_unchecked(Vector3::new(-dir.y, dir.x, 0.0)),
                };
            }
            remaining -= len;
        }
        unreachable!("centerline has at least one segment")
    }

    /// Mitered plane normal at centerline vertex `i` (bisector of the adjoining runs).
    fn joint_normal(&self, i: usize) -> Vector2<f64> {
        let n = self.centerline.len() - 1;
        if i == 0 {
            self.segment_direction(0)
        } else if i == n {
            self.segment_direction(n - 1)
        } else {
            (self.segment_direction(i - 1) + self.segment_direction(i)).normalize()
        }
    }

    /// Index of the duct section holding the horizontal position of `p`, with
    /// its arc length at the section start.
    fn section_of(&self, p: &Point3<f64>, lateral_limit: Option<f64>) -> Option<(usize, f64)> {
        let q = Point2::new(p.x, p.y);
        let mut start = 0.0;
        for i in 0..self.centerline.len() - 1 {
            let a = self.centerline[i];
            let b = self.centerline[i + 1];
            let dir = self.segment_direction(i);
            let after_start = (q - a).dot(&self.joint_normal(i)) >= -ON_AXIS_TOL;
            let before_end = (q - b).dot(&self.joint_normal(i + 1)) <= ON_AXIS_TOL;
            let lateral = (q - a).perp(&dir).abs();
            let within = lateral_limit.is_none_or(|w| lateral < w);
            if after_start && before_end && within {
                return Some((i, start));
            }
            start += (b - a).norm();
        }
        None
    }

    /// Strictly inside the cross-section; the open ends are inclusive.
    pub fn contains_point(&self, p: &Point3<f64>) -> bool {
        match self.cross_section {
            None => true,
            Some(cs) => {
                p.z > 0.0 && p.z < cs.height && self.section_of(p, Some(0.5 * cs.width)).is_some()
            }
        }
    }

    /// Arc length of the centerline point nearest to `p` (horizontal projection).
    pub fn axial_position(&self, p: &Point3<f64>) -> f64 {
        let q = Point2::new(p.x, p.y);
        let mut best = (f64::INFINITY, 0.0);
        let mut start = 0.0;
        for w in self.centerline.windows(2) {
            let seg = w[1] - w[0];
            let len = seg.norm();
            let t = ((q - w[0]).dot(&seg) / (len * len)).clamp(0.0, 1.0);
            let d = (w[0] + seg * t - q).norm();
            if d < best.0 {
                best = (d, start + t * len);
            }
            start += len;
        }
        best.1
    }

    pub fn obstacle_station(&self, slab: &ObstacleSlab) -> Station {
        self.station(slab.mid_position())
    }

    /// Whether the open segment `a -> b` passes through `slab`'s mid-plane
    /// inside the duct cross-section.
    pub fn segment_crosses(&self, slab: &ObstacleSlab, a: &Point3<f64>, b: &Point3<f64>) -> bool {
        let st = self.obstacle_station(slab);
        let da = (a - st.point).dot(&st.tangent);
        let db = (b - st.point).dot(&st.tangent);
        if da * db >= 0.0 {
            return false;
        }
        let t = da / (da - db);
        let hit = a + (b - a) * t;
        match self.cross_section {
            None => true,
            Some(cs) => {
                let lateral = (hit - st.point).dot(&st.lateral);
                lateral.abs() <= 0.5 * cs.width && hit.z >= 0.0 && hit.z <= cs.height
            }
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_environment(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn mentions(&self, subject: &str) -> bool {
        self.violations.iter().any(|v| v.subject == subject)
    }

    fn push(&mut self, subject: &str, message: String) {
        self.violations.push(Violation {
            subject: subject.to_string(),
            message,
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok: no violations");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.subject, v.message)?;
        }
        Ok(())
    }
}

fn check_material(report: &mut ValidationReport, subject: &str, m: &Material) {
    if !(m.eps_r >= 1.0) || !m.eps_r.is_finite() {
        report.push(subject, format!("relative permittivity {} < 1", m.eps_r));
    }
    if !(m.conductivity >= 0.0) || !m.conductivity.is_finite() {
        report.push(subject, format!("negative conductivity {}", m.conductivity));
    }
}

/// Lists every violated surface, slab and duct invariant.
pub fn validate_environment(env: &Environment) -> ValidationReport {
    let mut report = ValidationReport::default();

    if env.centerline.len() < 2 || env.axis_length() <= 0.0 || !env.axis_length().is_finite() {
        report.push(&env.name, "centerline must have positive length".to_string());
        return report;
    }

    for s in &env.surfaces {
        let u = s.edge_u;
        let v = s.edge_v;
        if u.norm() == 0.0 || v.norm() == 0.0 || !u.iter().chain(v.iter()).all(|c| c.is_finite()) {
            report.push(&s.name, "degenerate edge vector".to_string());
            continue;
        }
        if u.dot(&v).abs() > ORTHOGONALITY_TOL {
            report.push(&s.name, format!("edges not orthogonal (u.v = {:.3e} m^2)", u.dot(&v)));
        }
        let n = s.normal();
        if (n.norm() - 1.0).abs() > NORMAL_TOL {
            report.push(&s.name, format!("normal not unit (|n| = {})", n.norm()));
        }
        if n.dot(&u).abs() / u.norm() > ORTHOGONALITY_TOL
            || n.dot(&v).abs() / v.norm() > ORTHOGONALITY_TOL
        {
            report.push(&s.name, "normal not perpendicular to edges".to_string());
        }
        check_material(&mut report, &s.name, &s.material);
        if let Some(cs) = env.cross_section {
            let c = s.centroid();
            let axial = env.axial_position(&c);
            let target = env.station(axial).point + Vector3::new(0.0, 0.0, 0.5 * cs.height);
            if n.dot(&(target - c)) <= 0.0 {
                report.push(&s.name, "normal does not face the duct interior".to_string());
            }
        }
    }

    let length = env.axis_length();
    for slab in &env.obstacles {
        if !(slab.thickness > 0.0) {
            report.push(&slab.name, format!("thickness {} must be positive", slab.thickness));
        }
        if !(slab.position >= 0.0 && slab.position + slab.thickness <= length) {
            report.push(&slab.name, "slab lies outside the duct".to_string());
        }
        check_material(&mut report, &slab.name, &slab.material);
    }
    for (i, a) in env.obstacles.iter().enumerate() {
        for b in &env.obstacles[i + 1..] {
            let overlap = a.position < b.position + b.thickness && b.position < a.position + a.thickness;
            if overlap {
                let msg = format!("slabs `{}` and `{}` overlap", a.name, b.name);
                report.push(&a.name, msg.clone());
                report.push(&b.name, msg);
            }
        }
    }

    if let Some(cs) = env.cross_section {
        if env.surfaces.len() < 4 {
            report.push(&env.name, format!("only {} surfaces, need at least 4", env.surfaces.len()));
        }
        check_closed_duct(env, cs, &mut report);
    }
    report
}

/// Casts transverse rays from the axis at sample stations; each direction must
/// hit exactly one surface.
fn check_closed_duct(env: &Environment, cs: CrossSection, report: &mut ValidationReport) {
    let length = env.axis_length();
    let samples = ((length / 0.5).ceil() as usize).clamp(1, 100_000);
    for k in 0..samples {
        let s = (k as f64 + 0.5) * length / samples as f64;
        let st = env.station(s);
        let origin = st.point + Vector3::new(0.0, 0.0, 0.5 * cs.height);
        let dirs = [
            ("left", st.lateral.into_inner()),
            ("right", -st.lateral.into_inner()),
            ("up", Vector3::z()),
            ("down", -Vector3::z()),
        ];
        for (label, dir) in dirs {
            let hits = env
                .surfaces
                .iter()
                .filter(|surf| ray_hits(surf, &origin, &dir))
                .count();
            if hits != 1 {
                report.push(
                    &env.name,
                    format!("transverse ray `{label}` at s = {s:.2} m hits {hits} surfaces"),
                );
                return;
            }
        }
    }
}

fn ray_hits(surf: &Surface, origin: &Point3<f64>, dir: &Vector3<f64>) -> bool {
    let denom = dir.dot(surf.normal());
    if denom.abs() < 1e-12 {
        return false;
    }
    let t = -surf.signed_distance(origin) / denom;
    t > 0.0 && surf.contains(&(origin + dir * t), 1e-9)
}

/// Vertical wall along the horizontal segment `a -> b`, facing `interior`.
fn wall(name: &str, a: Point2<f64>, b: Point2<f64>, height: f64, material: Material, interior: Point2<f64>) -> Surface {
    let origin = Point3::new(a.x, a.y, 0.0);
    let along = Vector3::new(b.x - a.x, b.y - a.y, 0.0);
    let up = Vector3::new(0.0, 0.0, height);
    let inward = Vector3::new(interior.x - a.x, interior.y - a.y, 0.0);
    if along.cross(&up).dot(&inward) > 0.0 {
        Surface::new(name, origin, along, up, material)
    } else {
        Surface::new(name, origin, up, along, material)
    }
}

/// Horizontal rectangle `[x0, x1] x [y0, y1]` at height `z`, normal `+z` if `facing_up`.
fn slab_plane(name: &str, x: (f64, f64), y: (f64, f64), z: f64, material: Material, facing_up: bool) -> Surface {
    let origin = Point3::new(x.0, y.0, z);
    let ex = Vector3::new(x.1 - x.0, 0.0, 0.0);
    let ey = Vector3::new(0.0, y.1 - y.0, 0.0);
    if facing_up {
        Surface::new(name, origin, ex, ey, material)
    } else {
        Surface::new(name, origin, ey, ex, material)
    }
}

/// Side-wall material assignment for the corridors.
#[derive(Debug, Clone, PartialEq)]
pub enum WallMaterials {
    /// Both walls share one effective material.
    Blended(Material),
    Split { left: Material, right: Material },
}

impl Default for WallMaterials {
    fn default() -> Self {
        WallMaterials::Blended(Material::brick_plasterboard())
    }
}

impl WallMaterials {
    fn left(&self) -> Material {
        match self {
            WallMaterials::Blended(m) => m.clone(),
            WallMaterials::Split { left, .. } => left.clone(),
        }
    }

    fn right(&self) -> Material {
        match self {
            WallMaterials::Blended(m) => m.clone(),
            WallMaterials::Split { right, .. } => right.clone(),
        }
    }
}

/// Straight rectangular duct.
#[derive(Debug, Clone, PartialEq)]
pub struct DuctParams {
    pub name: String,
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub walls: WallMaterials,
    pub floor: Material,
    pub ceiling: Material,
    pub obstacles: Vec<ObstacleSlab>,
}

impl DuctParams {
    pub fn plain_corridor() -> Self {
        DuctParams {
            name: "plain_corridor".to_string(),
            length: AXIS_LENGTH,
            width: 2.20,
            height: 2.75,
            walls: WallMaterials::default(),
            floor: Material::marble(),
            ceiling: Material::furred_ceiling(),
            obstacles: Vec::new(),
        }
    }

    pub fn obstacle_corridor() -> Self {
        DuctParams {
            name: "obstacle_corridor".to_string(),
            obstacles: default_obstacles(),
            ..Self::plain_corridor()
        }
    }

    pub fn straight_tunnel() -> Self {
        DuctParams {
            name: "straight_tunnel".to_string(),
            length: AXIS_LENGTH,
            width: 2.5,
            height: 2.5,
            walls: WallMaterials::Blended(Material::concrete()),
            floor: Material::concrete(),
            ceiling: Material::concrete(),
            obstacles: Vec::new(),
        }
    }

    pub fn build(&self) -> Environment {
        let (l, hw, h) = (self.length, 0.5 * self.width, self.height);
        let mid = Point2::new(0.5 * l, 0.0);
        let surfaces = vec![
            slab_plane("floor", (0.0, l), (-hw, hw), 0.0, self.floor.clone(), true),
            slab_plane("ceiling", (0.0, l), (-hw, hw), h, self.ceiling.clone(), false),
            wall("left wall", Point2::new(0.0, hw), Point2::new(l, hw), h, self.walls.left(), mid),
            wall("right wall", Point2::new(0.0, -hw), Point2::new(l, -hw), h, self.walls.right(), mid),
        ];
        Environment {
            name: self.name.clone(),
            surfaces,
            obstacles: self.obstacles.clone(),
            centerline: vec![Point2::origin(), Point2::new(l, 0.0)],
            cross_section: Some(CrossSection {
                width: self.width,
                height: h,
            }),
        }
    }
}

/// Wood door at 10 m, lift at 20 m, glass door at 30 m, each 0.1 m thick.
pub fn default_obstacles() -> Vec<ObstacleSlab> {
    vec![
        ObstacleSlab::new("wooden door", 10.0, 0.1, Material::wood()),
        ObstacleSlab::new("lift", 20.0, 0.1, Material::lift_metal()),
        ObstacleSlab::new("glass door", 30.0, 0.1, Material::glass()),
    ]
}

/// Two straight runs of equal length joined by a mitered elbow that turns
/// towards the left wall.
#[derive(Debug, Clone, PartialEq)]
pub struct BentTunnelParams {
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub bend_angle_deg: f64,
    pub walls: WallMaterials,
    pub floor: Material,
    pub ceiling: Material,
}

impl Default for BentTunnelParams {
    fn default() -> Self {
        BentTunnelParams {
            length: AXIS_LENGTH,
            width: 2.5,
            height: 2.5,
            bend_angle_deg: 45.0,
            walls: WallMaterials::Blended(Material::concrete()),
            floor: Material::concrete(),
            ceiling: Material::concrete(),
        }
    }
}

impl BentTunnelParams {
    pub fn build(&self) -> Result<Environment> {
        if !(self.bend_angle_deg > 0.0 && self.bend_angle_deg < 90.0) {
            return Err(Error::BendAngle(self.bend_angle_deg));
        }
        if !(self.length > 0.0 && self.width > 0.0 && self.height > 0.0)
            || !(self.length.is_finite() && self.width.is_finite() && self.height.is_finite())
        {
            return Err(Error::Geometry("bent tunnel dimensions must be positive".to_string()));
        }
        let alpha = self.bend_angle_deg.to_radians();
        let half = 0.5 * self.length;
        let hw = 0.5 * self.width;
        let h = self.height;

        let start = Point2::origin();
        let joint = Point2::new(half, 0.0);
        let dir2 = Vector2::new(alpha.cos(), alpha.sin());
        let end = joint + dir2 * half;
        let left1 = Vector2::new(0.0, 1.0);
        let left2 = Vector2::new(-alpha.sin(), alpha.cos());
        // Miter corners sit on the bisector of the two lateral directions.
        let miter = (left1 + left2).normalize() * (hw / (0.5 * alpha).cos());
        let inner = joint + miter;
        let outer = joint - miter;

        let mid1 = Point2::new(0.5 * half, 0.0);
        let mid2 = joint + dir2 * (0.5 * half);
        let corners = [
            start + left1 * hw,
            start - left1 * hw,
            inner,
            outer,
            end + left2 * hw,
            end - left2 * hw,
        ];
        let xs = corners.iter().map(|p| p.x);
        let ys = corners.iter().map(|p| p.y);
        let x = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
        let y = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));

        // Floor and ceiling are single planes covering the footprint; the
        // walls bound the duct, so reflections outside it are never reached.
        let surfaces = vec![
            slab_plane("floor", x, y, 0.0, self.floor.clone(), true),
            slab_plane("ceiling", x, y, h, self.ceiling.clone(), false),
            wall("left wall 1", start + left1 * hw, inner, h, self.walls.left(), mid1),
            wall("right wall 1", start - left1 * hw, outer, h, self.walls.right(), mid1),
            wall("left wall 2", inner, end + left2 * hw, h, self.walls.left(), mid2),
            wall("right wall 2", outer, end - left2 * hw, h, self.walls.right(), mid2),
        ];
        Ok(Environment {
            name: "bent_tunnel".to_string(),
            surfaces,
            obstacles: Vec::new(),
            centerline: vec![start, joint, end],
            cross_section: Some(CrossSection {
                width: self.width,
                height: h,
            }),
        })
    }
}

pub fn build_plain_corridor() -> Environment {
    DuctParams::plain_corridor().build()
}

pub fn build_obstacle_corridor() -> Environment {
    DuctParams::obstacle_corridor().build()
}

pub fn build_straight_tunnel() -> Environment {
    DuctParams::straight_tunnel().build()
}

pub fn build_bent_tunnel(bend_angle_deg: f64) -> Result<Environment> {
    BentTunnelParams {
        bend_angle_deg,
        ..Default::default()
    }
    .build()
}
