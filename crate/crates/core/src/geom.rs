//! Planar primitives: points, the concentric annulus, angular domains,
//! strips and their intersections with origin-centred circles.
//!
//! Everything is expressed in a frame whose origin is the common centre of
//! the two circles.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("inner radius r must be positive, got {0}")]
    NonPositiveInner(f64),
    #[error("annulus requires r < R, got r = {r}, R = {big_r}")]
    InnerNotSmaller { r: f64, big_r: f64 },
    #[error("sweep must lie in [0, pi], got {0}")]
    SweepOutOfRange(f64),
    #[error("alpha must lie in [0, 2 epsilon] = [0, {max}], got {alpha}")]
    AlphaOutOfRange { alpha: f64, max: f64 },
    #[error("chirality must be +1 or -1, got {0}")]
    BadChirality(i32),
    #[error("strip offsets must satisfy offset_low <= offset_high, got [{low}, {high}]")]
    InvertedStrip { low: f64, high: f64 },
    #[error("wedge offsets [{from}, {to}] must satisfy -epsilon <= from <= to <= epsilon (epsilon = {epsilon})")]
    WedgeOutOfRange { from: f64, to: f64, epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PointXY {
    pub x: f64,
    pub y: f64,
}

impl PointXY {
    pub const ORIGIN: Self = Self { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    /// Unit vector at `angle`.
    pub fn unit(angle: f64) -> Self {
        Self::from_polar(1.0, angle)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for PointXY {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PointXY {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PointXY {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<PointXY> for f64 {
    type Output = PointXY;
    fn mul(self, p: PointXY) -> PointXY {
        PointXY::new(self * p.x, self * p.y)
    }
}

/// Reduce an angle to `[0, 2 pi)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed angle in `(-pi, pi]` that rotates `from` onto `to`.
pub fn signed_angle(from: PointXY, to: PointXY) -> f64 {
    from.cross(to).atan2(from.dot(to))
}

/// `arccos(d / rho)` for `rho >= |d|`, evaluated as an `atan2` so that the
/// square-root behaviour near `rho = |d|` keeps full relative precision.
pub fn arccos_ratio(d: f64, rho: f64) -> f64 {
    arccos_ratio_gap(d, rho, rho - d.abs())
}

/// [`arccos_ratio`] with `gap = rho - |d|` supplied by the caller.
pub fn arccos_ratio_gap(d: f64, rho: f64, gap: f64) -> f64 {
    let h = (gap.max(0.0) * (rho + d.abs())).sqrt();
    h.atan2(d)
}

/// Two concentric circles: the inner circle `k` of radius `r` bounding the
/// disc `T`, and the outer circle `K` of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusConfig {
    r: f64,
    #[serde(rename = "R")]
    big_r: f64,
    epsilon: f64,
}

impl AnnulusConfig {
    pub fn new(r: f64, big_r: f64) -> Result<Self, GeomError> {
        if !(r.is_finite() && big_r.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        if r <= 0.0 {
            return Err(GeomError::NonPositiveInner(r));
        }
        if r >= big_r {
            return Err(GeomError::InnerNotSmaller { r, big_r });
        }
        Ok(Self {
            r,
            big_r,
            epsilon: (r / big_r).asin(),
        })
    }

    pub fn inner_radius(&self) -> f64 {
        self.r
    }

    pub fn outer_radius(&self) -> f64 {
        self.big_r
    }

    /// Half the view angle, `arcsin(r / R)`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Angle under which `k` is seen from any point of `K`.
    pub fn view_angle(&self) -> f64 {
        2.0 * self.epsilon
    }

    /// Point of `K` at polar angle `theta`.
    pub fn point_on_outer(&self, theta: f64) -> PointXY {
        PointXY::from_polar(self.big_r, theta)
    }
}

pub fn view_angle(config: &AnnulusConfig) -> f64 {
    config.view_angle()
}

/// Closed half-plane `{ p : <n, p> >= offset }` with `n` the unit normal at
/// `normal_angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal_angle: f64,
    pub normal: PointXY,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal_angle: f64, offset: f64) -> Self {
        Self {
            normal_angle,
            normal: PointXY::unit(normal_angle),
            offset,
        }
    }

    /// Half-plane with the given normal whose boundary line passes through `point`.
    pub fn through(normal_angle: f64, point: PointXY) -> Self {
        let normal = PointXY::unit(normal_angle);
        Self {
            normal_angle,
            normal,
            offset: normal.dot(point),
        }
    }

    pub fn margin(&self, p: PointXY) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: PointXY) -> bool {
        self.margin(p) >= 0.0
    }

    /// Angles of the circle of `radius` about the origin lying in the half-plane.
    pub fn arc(&self, radius: f64) -> ArcIntervalSet {
        let ratio = self.offset / radius;
        if ratio <= -1.0 {
            ArcIntervalSet::full()
        } else if ratio > 1.0 {
            ArcIntervalSet::empty()
        } else {
            let half = ratio.acos();
            ArcIntervalSet::arc(self.normal_angle - half, 2.0 * half)
        }
    }
}

/// Closed convex wedge with apex `vertex`, made of the directions swept
/// counterclockwise from `start_angle` through `sweep` radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularDomain {
    pub vertex: PointXY,
    pub start_angle: f64,
    pub sweep: f64,
}

impl AngularDomain {
    pub fn new(vertex: PointXY, start_angle: f64, sweep: f64) -> Result<Self, GeomError> {
        if !vertex.is_finite() || !start_angle.is_finite() || !sweep.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if !(0.0..=PI).contains(&sweep) {
            return Err(GeomError::SweepOutOfRange(sweep));
        }
        Ok(Self {
            vertex,
            start_angle,
            sweep,
        })
    }

    /// Wedge spanned by two ray directions from `vertex`, whichever order
    /// gives the convex (at most pi) opening.
    pub fn from_rays(vertex: PointXY, first: PointXY, second: PointXY) -> Self {
        let a = first.angle();
        let turn = signed_angle(first, second);
        if turn >= 0.0 {
            Self {
                vertex,
                start_angle: a,
                sweep: turn,
            }
        } else {
            Self {
                vertex,
                start_angle: a + turn,
                sweep: -turn,
            }
        }
    }

    pub fn end_angle(&self) -> f64 {
        self.start_angle + self.sweep
    }

    pub fn start_direction(&self) -> PointXY {
        PointXY::unit(self.start_angle)
    }

    pub fn end_direction(&self) -> PointXY {
        PointXY::unit(self.end_angle())
    }

    /// Bounding half-planes. Below a half-turn a third half-plane (normal
    /// along the bisector) pins the wedge to the forward side of its apex,
    /// which matters only in the degenerate ray case.
    pub fn half_planes(&self) -> Vec<HalfPlane> {
        let first = HalfPlane::through(self.start_angle + PI / 2.0, self.vertex);
        if self.sweep >= PI {
            return vec![first];
        }
        vec![
            first,
            HalfPlane::through(self.end_angle() - PI / 2.0, self.vertex),
            HalfPlane::through(self.start_angle + self.sweep / 2.0, self.vertex),
        ]
    }

    pub fn contains(&self, p: PointXY) -> bool {
        self.half_planes().iter().all(|h| h.contains(p))
    }

    /// Smallest half-plane margin of `p`: non-negative inside, and minus
    /// the distance past the violated boundary line outside.
    pub fn margin(&self, p: PointXY) -> f64 {
        self.half_planes().iter().map(|h| h.margin(p)).fold(f64::INFINITY, f64::min)
    }

    /// Membership allowing boundary slack `tol` (plane units).
    pub fn contains_approx(&self, p: PointXY, tol: f64) -> bool {
        self.margin(p) >= -tol
    }

    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            vertex: self.vertex.rotated(angle),
            start_angle: self.start_angle + angle,
            sweep: self.sweep,
        }
    }

    pub fn arc_intersection(&self, radius: f64) -> ArcIntervalSet {
        arc_intersection(self, radius)
    }
}

pub fn contains(domain: &AngularDomain, p: PointXY) -> bool {
    domain.contains(p)
}

/// Angles `theta` with `(radius cos theta, radius sin theta)` inside the wedge.
pub fn arc_intersection(domain: &AngularDomain, radius: f64) -> ArcIntervalSet {
    domain
        .half_planes()
        .iter()
        .fold(ArcIntervalSet::full(), |acc, h| acc.intersect(&h.arc(radius)))
}

/// Regular angular domain with one bounding halfline tangent to `k`.
///
/// The vertex is `A = R (cos theta, sin theta)`. With chirality `+1` the
/// tangent halfline is the counterclockwise boundary and the second
/// halfline is rotated clockwise from it by `alpha`; chirality `-1` mirrors
/// this.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularDomain {
    pub config: AnnulusConfig,
    pub vertex_angle: f64,
    pub chirality: i8,
    pub alpha: f64,
}

impl RegularDomain {
    pub fn new(config: AnnulusConfig, vertex_angle: f64, chirality: i32, alpha: f64) -> Result<Self, GeomError> {
        if !vertex_angle.is_finite() || !alpha.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let chirality = match chirality {
            1 => 1,
            -1 => -1,
            other => return Err(GeomError::BadChirality(other)),
        };
        let max = config.view_angle();
        let slack = 4.0 * f64::EPSILON * max.max(1.0);
        if alpha < -slack || alpha > max + slack {
            return Err(GeomError::AlphaOutOfRange { alpha, max });
        }
        Ok(Self {
            config,
            vertex_angle,
            chirality,
            alpha: alpha.clamp(0.0, max),
        })
    }

    pub fn vertex(&self) -> PointXY {
        self.config.point_on_outer(self.vertex_angle)
    }

    /// Direction from the vertex towards the centre.
    pub fn inward_angle(&self) -> f64 {
        self.vertex_angle + PI
    }

    fn sign(&self) -> f64 {
        f64::from(self.chirality)
    }

    pub fn tangent_angle(&self) -> f64 {
        self.inward_angle() + self.sign() * self.config.epsilon()
    }

    pub fn second_angle(&self) -> f64 {
        self.inward_angle() + self.sign() * (self.config.epsilon() - self.alpha)
    }

    /// Point where the tangent halfline touches `k`.
    pub fn tangent_point(&self) -> PointXY {
        let c = &self.config;
        self.vertex() + (c.outer_radius() * c.epsilon().cos()) * PointXY::unit(self.tangent_angle())
    }

    /// `d = R sin(epsilon - alpha)`, positive iff the centre is outside.
    pub fn signed_distance(&self) -> f64 {
        self.config.outer_radius() * (self.config.epsilon() - self.alpha).sin()
    }

    pub fn as_wedge(&self) -> RegularWedge {
        let e = self.config.epsilon();
        let (from, to) = if self.chirality > 0 {
            (e - self.alpha, e)
        } else {
            (-e, -e + self.alpha)
        };
        RegularWedge {
            config: self.config,
            vertex_angle: self.vertex_angle,
            from,
            to,
        }
    }

    pub fn to_angular(&self) -> AngularDomain {
        self.as_wedge().to_angular()
    }

    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            vertex_angle: self.vertex_angle + angle,
            ..*self
        }
    }
}

pub fn make_regular(config: AnnulusConfig, vertex_angle: f64, chirality: i32, alpha: f64) -> Result<RegularDomain, GeomError> {
    RegularDomain::new(config, vertex_angle, chirality, alpha)
}

pub fn signed_distance(domain: &RegularDomain) -> f64 {
    domain.signed_distance()
}

/// General regular domain: vertex on `K`, bounding directions at offsets
/// `from <= to` (radians, counterclockwise positive) from the inward
/// direction, both within `[-epsilon, epsilon]` so that both halflines meet
/// `k`. A tangent-anchored [`RegularDomain`] is the case where one offset
/// equals `+-epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularWedge {
    pub config: AnnulusConfig,
    pub vertex_angle: f64,
    pub from: f64,
    pub to: f64,
}

impl RegularWedge {
    pub fn new(config: AnnulusConfig, vertex_angle: f64, from: f64, to: f64) -> Result<Self, GeomError> {
        let e = config.epsilon();
        let slack = 1e-12 * e.max(1.0);
        if !(from.is_finite() && to.is_finite() && vertex_angle.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        if from > to || from < -e - slack || to > e + slack {
            return Err(GeomError::WedgeOutOfRange { from, to, epsilon: e });
        }
        Ok(Self {
            config,
            vertex_angle,
            from: from.clamp(-e, e),
            to: to.clamp(-e, e),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.to - self.from
    }

    pub fn vertex(&self) -> PointXY {
        self.config.point_on_outer(self.vertex_angle)
    }

    pub fn to_angular(&self) -> AngularDomain {
        AngularDomain {
            vertex: self.vertex(),
            start_angle: self.vertex_angle + PI + self.from,
            sweep: self.alpha(),
        }
    }

    /// Split as `outer \ inner` of two tangent-anchored domains sharing the
    /// counterclockwise tangent halfline.
    pub fn as_difference(&self) -> (RegularDomain, RegularDomain) {
        let e = self.config.epsilon();
        let outer = RegularDomain {
            config: self.config,
            vertex_angle: self.vertex_angle,
            chirality: 1,
            alpha: e - self.from,
        };
        let inner = RegularDomain {
            alpha: e - self.to,
            ..outer
        };
        (outer, inner)
    }
}

/// Closed strip `{ p : offset_low <= <n, p> <= offset_high }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub normal_angle: f64,
    pub offset_low: f64,
    pub offset_high: f64,
}

impl Strip {
    pub fn new(normal_angle: f64, offset_low: f64, offset_high: f64) -> Result<Self, GeomError> {
        if !(normal_angle.is_finite() && offset_low.is_finite() && offset_high.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        if offset_low > offset_high {
            return Err(GeomError::InvertedStrip {
                low: offset_low,
                high: offset_high,
            });
        }
        Ok(Self {
            normal_angle,
            offset_low,
            offset_high,
        })
    }

    pub fn width(&self) -> f64 {
        self.offset_high - self.offset_low
    }

    pub fn normal(&self) -> PointXY {
        PointXY::unit(self.normal_angle)
    }

    pub fn half_planes(&self) -> [HalfPlane; 2] {
        [
            HalfPlane::new(self.normal_angle, self.offset_low),
            HalfPlane::new(self.normal_angle + PI, -self.offset_high),
        ]
    }

    pub fn contains(&self, p: PointXY) -> bool {
        let s = self.normal().dot(p);
        self.offset_low <= s && s <= self.offset_high
    }

    pub fn margin(&self, p: PointXY) -> f64 {
        let s = self.normal().dot(p);
        (s - self.offset_low).min(self.offset_high - s)
    }

    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            normal_angle: self.normal_angle + angle,
            ..*self
        }
    }

    pub fn arc_intersection(&self, radius: f64) -> ArcIntervalSet {
        strip_arc_intersection(self, radius)
    }
}

pub fn strip_arc_intersection(strip: &Strip, radius: f64) -> ArcIntervalSet {
    let [lo, hi] = strip.half_planes();
    lo.arc(radius).intersect(&hi.arc(radius))
}

/// Sorted, pairwise disjoint closed angle intervals inside `[0, 2 pi]`.
///
/// An interval may touch `2 pi`; the seam between `2 pi` and `0` is
/// treated as connected by [`ArcIntervalSet::gaps`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ArcIntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl ArcIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, TAU)],
        }
    }

    /// The arc starting at `start` of the given `length` (wrap-aware).
    pub fn arc(start: f64, length: f64) -> Self {
        if length >= TAU {
            return Self::full();
        }
        let length = length.max(0.0);
        let lo = normalize_angle(start);
        let hi = lo + length;
        if hi <= TAU {
            Self {
                intervals: vec![(lo, hi)],
            }
        } else {
            Self {
                intervals: vec![(0.0, hi - TAU), (lo, TAU)],
            }
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum::<f64>().min(TAU)
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        let a = normalize_angle(angle);
        self.intervals.iter().any(|&(lo, hi)| lo <= a && a <= hi) || (a == 0.0 && self.intervals.last().is_some_and(|&(_, hi)| hi >= TAU))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = self.intervals[i];
            let (b0, b1) = other.intervals[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { intervals: out }
    }

    /// Union, merging intervals separated by at most `tol` radians.
    pub fn union(&self, other: &Self, tol: f64) -> Self {
        let mut all: Vec<(f64, f64)> = self.intervals.iter().chain(other.intervals.iter()).copied().collect();
        Self::merge(&mut all, tol)
    }

    pub fn union_all<'a, I>(sets: I, tol: f64) -> Self
    where
        I: IntoIterator<Item = &'a ArcIntervalSet>,
    {
        let mut all: Vec<(f64, f64)> = sets.into_iter().flat_map(|s| s.intervals.iter().copied()).collect();
        Self::merge(&mut all, tol)
    }

    fn merge(all: &mut [(f64, f64)], tol: f64) -> Self {
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(all.len());
        for &(lo, hi) in all.iter() {
            match out.last_mut() {
                Some(last) if lo <= last.1 + tol => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    /// Uncovered gaps longer than `tol`, as `(start, length)`, with the
    /// seam at `0 = 2 pi` joined.
    pub fn gaps(&self, tol: f64) -> Vec<(f64, f64)> {
        let Some(&(first_lo, _)) = self.intervals.first() else {
            return vec![(0.0, TAU)];
        };
        let mut gaps: Vec<(f64, f64)> = self
            .intervals
            .windows(2)
            .map(|w| (w[0].1, w[1].0 - w[0].1))
            .filter(|&(_, len)| len > tol)
            .collect();
        let last_hi = self.intervals.last().map(|i| i.1).unwrap_or(0.0);
        let wrap = (TAU - last_hi).max(0.0) + first_lo;
        if wrap > tol {
            gaps.push((normalize_angle(last_hi), wrap));
        }
        gaps
    }

    pub fn is_full(&self, tol: f64) -> bool {
        self.gaps(tol).is_empty()
    }

    pub fn rotated(&self, angle: f64) -> Self {
        let parts: Vec<Self> = self.intervals.iter().map(|&(lo, hi)| Self::arc(lo + angle, hi - lo)).collect();
        Self::union_all(parts.iter(), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn view_angle_examples() {
        let c = AnnulusConfig::new(1.0, 2.0).unwrap();
        assert!(close(view_angle(&c), PI / 3.0, 1e-15));
        let c = AnnulusConfig::new(1.0, 2f64.sqrt()).unwrap();
        assert!(close(view_angle(&c), PI / 2.0, 1e-15));
        let c = AnnulusConfig::new(1.0, 1000.0).unwrap();
        assert!(close(view_angle(&c), 2.0 * 0.001f64.asin(), 1e-18));
        assert!(close(view_angle(&c), 0.002, 1e-9));
    }

    #[test]
    fn config_validation() {
        assert!(matches!(AnnulusConfig::new(2.0, 1.0), Err(GeomError::InnerNotSmaller { .. })));
        assert!(matches!(AnnulusConfig::new(1.0, 1.0), Err(GeomError::InnerNotSmaller { .. })));
        assert!(matches!(AnnulusConfig::new(0.0, 1.0), Err(GeomError::NonPositiveInner(_))));
        assert!(AnnulusConfig::new(f64::NAN, 1.0).is_err());
        let c = AnnulusConfig::new(0.3, 7.0).unwrap();
        assert!(close(c.epsilon().sin() * c.outer_radius(), c.inner_radius(), 1e-15));
    }

    #[test]
    fn regular_domain_extremes() {
        let c = AnnulusConfig::new(1.0, 2.0).unwrap();
        let d0 = make_regular(c, 0.3, 1, 0.0).unwrap();
        assert!(close(d0.signed_distance(), 1.0, 1e-15));
        assert_eq!(d0.to_angular().sweep, 0.0);
        let half = make_regular(c, 0.3, -1, c.epsilon()).unwrap();
        assert!(close(half.signed_distance(), 0.0, 1e-15));
        assert!(half.to_angular().contains_approx(PointXY::ORIGIN, 1e-12));
        let full = make_regular(c, 0.3, 1, c.view_angle()).unwrap();
        assert!(close(full.signed_distance(), -1.0, 1e-15));
        let dom = full.to_angular();
        for i in 0..64 {
            let p = PointXY::from_polar(0.999, i as f64 * TAU / 64.0);
            assert!(dom.contains(p));
        }
    }

    #[test]
    fn make_regular_rejects_out_of_range() {
        let c = AnnulusConfig::new(1.0, 2.0).unwrap();
        assert!(matches!(make_regular(c, 0.0, 1, -0.01), Err(GeomError::AlphaOutOfRange { .. })));
        assert!(matches!(make_regular(c, 0.0, 1, 1.1), Err(GeomError::AlphaOutOfRange { .. })));
        assert!(matches!(make_regular(c, 0.0, 0, 0.1), Err(GeomError::BadChirality(0))));
    }

    #[test]
    fn signed_distance_matches_line_geometry() {
        let c = AnnulusConfig::new(1.0, 2.0).unwrap();
        for chirality in [1, -1] {
            let d = make_regular(c, 1.1, chirality, 0.3).unwrap();
            let a = d.vertex();
            let u = PointXY::unit(d.second_angle());
            // distance of O from the line through A along u
            let dist = (PointXY::ORIGIN - a).cross(u).abs();
            let sign = if d.to_angular().contains(PointXY::ORIGIN) { -1.0 } else { 1.0 };
            assert!(close(sign * dist, 2.0 * (PI / 6.0 - 0.3).sin(), 1e-12));
            assert!(close(d.signed_distance(), 2.0 * (PI / 6.0 - 0.3).sin(), 1e-15));
        }
    }

    #[test]
    fn tangent_halfline_touches_inner_circle() {
        let c = AnnulusConfig::new(0.7, 3.0).unwrap();
        let d = make_regular(c, -0.4, -1, 0.2).unwrap();
        let q = d.tangent_point();
        assert!(close(q.norm(), 0.7, 1e-12));
        // radius at Q is perpendicular to the tangent direction
        assert!(close(q.dot(PointXY::unit(d.tangent_angle())), 0.0, 1e-12));
    }

    #[test]
    fn containment_examples() {
        let d = AngularDomain::new(PointXY::ORIGIN, 0.0, PI / 2.0).unwrap();
        assert!(d.contains(PointXY::new(1.0, 1.0)));
        assert!(!d.contains(PointXY::new(-1.0, 0.5)));
        assert!(d.contains(d.vertex));
        let ray = AngularDomain::new(PointXY::new(1.0, 2.0), 0.7, 0.0).unwrap();
        assert!(ray.contains(ray.vertex));
        assert!(!ray.contains(ray.vertex - PointXY::unit(0.7)));
        assert!(AngularDomain::new(PointXY::ORIGIN, 0.0, 3.5).is_err());
    }

    #[test]
    fn arc_intersection_examples() {
        let quadrant = AngularDomain::new(PointXY::ORIGIN, 0.0, PI / 2.0).unwrap();
        let arcs = arc_intersection(&quadrant, 1.0);
        assert_eq!(arcs.intervals().len(), 1);
        let (lo, hi) = arcs.intervals()[0];
        assert!(close(lo, 0.0, 1e-15) && close(hi, PI / 2.0, 1e-15));

        let away = AngularDomain::new(PointXY::new(2.0, 0.0), -0.3, 0.6).unwrap();
        assert!(arc_intersection(&away, 1.0).is_empty());

        let c = AnnulusConfig::new(1.0, 2.0).unwrap();
        let full = make_regular(c, 0.0, 1, c.view_angle()).unwrap().to_angular();
        assert!(arc_intersection(&full, 0.5).is_full(1e-12));
    }

    #[test]
    fn strip_arc_examples() {
        let s = Strip::new(0.0, -0.5, 0.5).unwrap();
        let arcs = strip_arc_intersection(&s, 1.0);
        let iv = arcs.intervals();
        assert_eq!(iv.len(), 2);
        assert!(close(iv[0].0, PI / 3.0, 1e-12) && close(iv[0].1, 2.0 * PI / 3.0, 1e-12));
        assert!(close(iv[1].0, 4.0 * PI / 3.0, 1e-12) && close(iv[1].1, 5.0 * PI / 3.0, 1e-12));
        assert!(strip_arc_intersection(&Strip::new(0.0, -2.0, 2.0).unwrap(), 1.0).is_full(0.0));
        assert!(strip_arc_intersection(&Strip::new(0.0, 1.5, 2.0).unwrap(), 1.0).is_empty());
        assert!(matches!(Strip::new(0.0, 1.0, 0.0), Err(GeomError::InvertedStrip { .. })));
    }

    #[test]
    fn gaps_join_across_seam() {
        let set = ArcIntervalSet::arc(1.0, 4.0);
        let gaps = set.gaps(0.0);
        assert_eq!(gaps.len(), 1);
        assert!(close(gaps[0].0, 5.0, 1e-15));
        assert!(close(gaps[0].1, TAU - 4.0, 1e-14));
        let wrap = ArcIntervalSet::arc(-0.5, 1.0);
        assert_eq!(wrap.intervals().len(), 2);
        assert!(wrap.contains_angle(0.0) && wrap.contains_angle(TAU - 0.25));
        assert!(close(wrap.total_length(), 1.0, 1e-15));
        assert_eq!(ArcIntervalSet::empty().gaps(0.0), vec![(0.0, TAU)]);
    }

    #[test]
    fn union_merges_hairline_seams() {
        let a = ArcIntervalSet::arc(0.0, 1.0);
        let b = ArcIntervalSet::arc(1.0 + 5e-13, TAU - 1.0 - 5e-13);
        assert!(a.union(&b, 1e-12).is_full(1e-12));
        let c = ArcIntervalSet::arc(1.0 + 1e-6, TAU - 1.0 - 1e-6);
        assert!(!a.union(&c, 1e-12).is_full(1e-12));
    }

    fn regular_strategy() -> impl Strategy<Value = RegularDomain> {
        (0.05f64..5.0, 1.05f64..20.0, -PI..PI, any::<bool>(), 0.0f64..1.0).prop_map(|(r, ratio, theta, ccw, frac)| {
            let c = AnnulusConfig::new(r, r * ratio).unwrap();
            make_regular(c, theta, if ccw { 1 } else { -1 }, frac * c.view_angle()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn both_halflines_meet_inner_disc(d in regular_strategy()) {
            let c = d.config;
            let a = d.vertex();
            for angle in [d.tangent_angle(), d.second_angle()] {
                let u = PointXY::unit(angle);
                // closest point of the halfline to O
                let s = (-a.dot(u)).max(0.0);
                let closest = a + s * u;
                prop_assert!(closest.norm() <= c.inner_radius() * (1.0 + 1e-12));
            }
        }

        #[test]
        fn signed_distance_round_trip(d in regular_strategy()) {
            let c = d.config;
            let expected = c.outer_radius() * (c.epsilon() - d.alpha).sin();
            prop_assert!((d.signed_distance() - expected).abs() <= 1e-12);
            prop_assert!(d.signed_distance().abs() <= c.inner_radius() * (1.0 + 1e-12));
        }

        #[test]
        fn regular_arc_length_is_segment_formula(d in regular_strategy(), frac in 0.0f64..1.0) {
            let c = d.config;
            let dist = d.signed_distance();
            let rho = dist.abs() + frac * (c.inner_radius() - dist.abs());
            prop_assume!(rho > 1e-9);
            let len = arc_intersection(&d.to_angular(), rho).total_length();
            prop_assert!((len - 2.0 * (dist / rho).min(1.0).acos()).abs() <= 1e-9, "len {} vs {}", len, 2.0 * (dist / rho).acos());
        }

        #[test]
        fn contains_agrees_with_arc_membership(
            vx in -3.0f64..3.0, vy in -3.0f64..3.0, start in -PI..PI, sweep in 0.0f64..PI,
            rho in 0.01f64..4.0, theta in 0.0f64..TAU,
        ) {
            let d = AngularDomain::new(PointXY::new(vx, vy), start, sweep).unwrap();
            let p = PointXY::from_polar(rho, theta);
            let arcs = arc_intersection(&d, rho);
            // skip samples within rounding distance of the boundary
            let margin = d.half_planes().iter().map(|h| h.margin(p).abs()).fold(f64::INFINITY, f64::min);
            prop_assume!(margin > 1e-9);
            prop_assert_eq!(d.contains(p), arcs.contains_angle(theta));
        }

        #[test]
        fn strip_contains_agrees_with_arcs(phi in -PI..PI, lo in -2.0f64..2.0, w in 0.0f64..2.0, rho in 0.01f64..3.0, theta in 0.0f64..TAU) {
            let s = Strip::new(phi, lo, lo + w).unwrap();
            let p = PointXY::from_polar(rho, theta);
            let t = s.normal().dot(p);
            prop_assume!((t - s.offset_low).abs() > 1e-9 && (t - s.offset_high).abs() > 1e-9);
            prop_assert_eq!(s.contains(p), strip_arc_intersection(&s, rho).contains_angle(theta));
        }
    }
}
