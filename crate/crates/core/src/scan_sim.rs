//! Synthetic single-revolution 2D lidar scans of polyline tunnel geometry.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::types::{Point2, PointCloud};

/// Half of the corridor width used by the built-in scenarios, in meters.
pub const CORRIDOR_HALF_WIDTH: f64 = 2.5;
/// Length of every built-in wall run; longer than the default max range.
pub const WALL_LENGTH: f64 = 40.0;

pub const SCENARIO_NAMES: [&str; 6] = ["straight", "L", "T", "X", "five-way", "dead-end"];

/// A wall face between two distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    a: Point2,
    b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "segment endpoints must be finite: {a:?} - {b:?}"
            )));
        }
        if a == b {
            return Err(Error::InvalidGeometry(format!(
                "zero-length segment at ({}, {})",
                a.x, a.y
            )));
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    /// Euclidean distance from `p` to the closest point of the segment.
    pub fn distance_to(&self, p: Point2) -> f64 {
        let e = self.b - self.a;
        let t = ((p - self.a).dot(e) / e.dot(e)).clamp(0.0, 1.0);
        p.dist(self.a + e * t)
    }

    fn transformed(&self, angle: f64, offset: Point2) -> Segment {
        Segment {
            a: self.a.rotated(angle) + offset,
            b: self.b.rotated(angle) + offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    name: String,
    walls: Vec<Segment>,
}

impl Environment {
    pub fn new(name: impl Into<String>, walls: Vec<Segment>) -> Result<Self> {
        if walls.is_empty() {
            return Err(Error::InvalidGeometry(
                "environment has no walls".to_string(),
            ));
        }
        Ok(Environment {
            name: name.into(),
            walls,
        })
    }

    /// Builds an environment from connected vertex chains.
    pub fn from_polylines(name: impl Into<String>, chains: &[Vec<Point2>]) -> Result<Self> {
        let mut walls = Vec::new();
        for chain in chains {
            for pair in chain.windows(2) {
                walls.push(Segment::new(pair[0], pair[1])?);
            }
        }
        Self::new(name, walls)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn walls(&self) -> &[Segment] {
        &self.walls
    }

    /// Rotation by `angle` about the origin followed by translation.
    pub fn rigid_transform(&self, angle: f64, offset: Point2) -> Environment {
        Environment {
            name: self.name.clone(),
            walls: self
                .walls
                .iter()
                .map(|w| w.transformed(angle, offset))
                .collect(),
        }
    }
}

/// Sensor position and heading in the environment frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub position: Point2,
    /// Radians, counter-clockwise from the environment +x axis.
    pub heading: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LidarConfig {
    pub num_beams: usize,
    /// Meters. Beams without a hit at or below this range return nothing.
    pub max_range: f64,
    /// Body-frame angle of beam 0, radians.
    pub angle_start: f64,
    /// Standard deviation of Gaussian noise added to each range, meters.
    pub noise_stddev: f64,
    pub sensor_pose: Pose,
}

impl Default for LidarConfig {
    fn default() -> Self {
        LidarConfig {
            num_beams: 360,
            max_range: 15.0,
            angle_start: 0.0,
            noise_stddev: 0.0,
            sensor_pose: Pose::default(),
        }
    }
}

impl LidarConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_beams == 0 {
            return Err(Error::param("num_beams", "num_beams must be at least 1"));
        }
        if !(self.max_range > 0.0 && self.max_range.is_finite()) {
            return Err(Error::param(
                "max_range",
                format!("max_range must be positive, got {}", self.max_range),
            ));
        }
        if !(self.noise_stddev >= 0.0 && self.noise_stddev.is_finite()) {
            return Err(Error::param(
                "noise_stddev",
                format!(
                    "noise_stddev must be non-negative, got {}",
                    self.noise_stddev
                ),
            ));
        }
        if !self.angle_start.is_finite()
            || !self.sensor_pose.heading.is_finite()
            || !self.sensor_pose.position.is_finite()
        {
            return Err(Error::param("sensor_pose", "sensor pose must be finite"));
        }
        Ok(())
    }

    /// Body-frame angle of beam `i`.
    pub fn beam_angle(&self, i: usize) -> f64 {
        self.angle_start + i as f64 * TAU / self.num_beams as f64
    }
}

/// Distance along a unit-length ray to the first point of `seg`, if any.
pub fn ray_segment_intersect(origin: Point2, direction: Point2, seg: &Segment) -> Option<f64> {
    let edge = seg.b - seg.a;
    let w = seg.a - origin;
    let denom = direction.cross(edge);
    let scale = edge.norm();

    if denom.abs() <= 1e-12 * scale {
        // Parallel. Only a collinear segment can be hit.
        if w.cross(direction).abs() > 1e-12 * (1.0 + w.norm()) {
            return None;
        }
        let ta = w.dot(direction);
        let tb = (seg.b - origin).dot(direction);
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        return if hi < 0.0 { None } else { Some(lo.max(0.0)) };
    }

    let t = w.cross(edge) / denom;
    let s = w.cross(direction) / denom;
    const SLACK: f64 = 1e-12;
    if t >= 0.0 && (-SLACK..=1.0 + SLACK).contains(&s) {
        Some(t)
    } else {
        None
    }
}

/// Casts one revolution and returns the hits in the sensor body frame,
/// ordered by beam index. Beams without a hit within `max_range` are dropped.
pub fn cast_scan(env: &Environment, cfg: &LidarConfig, rng_seed: u64) -> Result<PointCloud> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let noise = if cfg.noise_stddev > 0.0 {
        Some(Normal::new(0.0, cfg.noise_stddev).expect("validated stddev"))
    } else {
        None
    };

    let pose = cfg.sensor_pose;
    let mut points = Vec::with_capacity(cfg.num_beams);
    for i in 0..cfg.num_beams {
        let body_angle = cfg.beam_angle(i);
        let world_dir = Point2::from_angle(pose.heading + body_angle);
        let nearest = env
            .walls
            .iter()
            .filter_map(|w| ray_segment_intersect(pose.position, world_dir, w))
            .fold(f64::INFINITY, f64::min);
        if nearest > cfg.max_range {
            continue;
        }
        let mut range = nearest;
        if let Some(n) = &noise {
            range = (range + n.sample(&mut rng)).max(0.0);
        }
        points.push(Point2::from_angle(body_angle) * range);
    }
    PointCloud::new(points)
}

/// Returns a built-in environment and its ground-truth junction count.
///
/// Names are matched case-insensitively. Every junction is built from
/// corridors of width `2 * CORRIDOR_HALF_WIDTH` meeting at the origin; each
/// wall face between two adjacent openings is one junction.
pub fn builtin_scenario(name: &str) -> Result<(Environment, usize)> {
    let canonical = SCENARIO_NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))?;
    let (env, expected) = match *canonical {
        "straight" => (star_junction("straight", &[0.0, 180.0])?, 2),
        "L" => (star_junction("L", &[90.0, 180.0])?, 2),
        "T" => (star_junction("T", &[0.0, 90.0, 180.0])?, 3),
        "X" => (star_junction("X", &[0.0, 90.0, 180.0, 270.0])?, 4),
        "five-way" => (
            star_junction("five-way", &[90.0, 162.0, 234.0, 306.0, 18.0])?,
            5,
        ),
        "dead-end" => (dead_end()?, 1),
        _ => unreachable!(),
    };
    Ok((env, expected))
}

/// Corridors radiating from the origin along the given headings (degrees).
/// Neighboring corridors share one bent wall whose corner sits on the
/// bisector between them.
fn star_junction(name: &str, branch_degrees: &[f64]) -> Result<Environment> {
    let mut headings: Vec<f64> = branch_degrees
        .iter()
        .map(|d| d.to_radians().rem_euclid(TAU))
        .collect();
    headings.sort_by(f64::total_cmp);

    let mut chains = Vec::with_capacity(headings.len());
    for (i, &from) in headings.iter().enumerate() {
        let to = if i + 1 < headings.len() {
            headings[i + 1]
        } else {
            headings[0] + TAU
        };
        let gap = to - from;
        debug_assert!(gap > 0.0 && gap < TAU);
        let corner =
            Point2::from_angle(from + gap / 2.0) * (CORRIDOR_HALF_WIDTH / (gap / 2.0).sin());
        chains.push(vec![
            corner + Point2::from_angle(from) * WALL_LENGTH,
            corner,
            corner + Point2::from_angle(to) * WALL_LENGTH,
        ]);
    }
    Environment::from_polylines(name, &chains)
}

/// A corridor running toward -x that ends in a wall 3 m ahead of the sensor.
fn dead_end() -> Result<Environment> {
    let w = CORRIDOR_HALF_WIDTH;
    let end = 3.0;
    Environment::from_polylines(
        "dead-end",
        &[vec![
            Point2::new(-WALL_LENGTH, w),
            Point2::new(end, w),
            Point2::new(end, -w),
            Point2::new(-WALL_LENGTH, -w),
        ]],
    )
}
