//! Coverage of the disc `T` by wedges and strips.
//!
//! Coverage is decided per radius, exactly: the circle of radius `rho` is
//! covered iff the union of the arc sets cut out of it by every wedge and
//! strip is the whole circle. Radii are sampled on a grid concentrated
//! towards `rho = r`. The check is therefore exact on each sampled circle
//! and a sampled certificate across radii.

use crate::geom::{signed_angle, AngularDomain, AnnulusConfig, ArcIntervalSet, GeomError, HalfPlane, PointXY, RegularWedge, Strip};
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

/// Default number of sampled radii.
pub const DEFAULT_RADIAL_STEPS: usize = 512;
/// Seam tolerance (radians) used when merging arcs.
pub const SEAM_TOLERANCE: f64 = 1e-12;
/// Minimum distance (relative to the scene scale) by which a witness must
/// lie outside every covering set.
pub const WITNESS_CLEARANCE: f64 = 1e-12;
/// Boundary samples used to verify a regularization.
pub const CONTAINMENT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverageError {
    #[error("at least 2 radial steps are required, got {0}")]
    TooFewRadii(usize),
    #[error("vertex at distance {distance} lies strictly inside the inner circle (r = {r}); no tangent construction exists")]
    VertexInsideInner { distance: f64, r: f64 },
    #[error("vertex at distance {distance} lies outside the outer circle (R = {big_r})")]
    VertexOutsideOuter { distance: f64, big_r: f64 },
    #[error("strip bounding line at offset {offset} misses the disc of radius {r}")]
    LineMissesDisc { offset: f64, r: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub covered: bool,
    pub witness: Option<PointXY>,
    pub radii_checked: usize,
    /// Smallest verified gap length (radians) at the failing radius; zero
    /// when covered.
    pub min_slack: f64,
}

/// Sampled radii, descending from `r` to `1e-6 r`, geometrically spaced in
/// the distance `r - rho`.
pub fn radial_grid(r: f64, steps: usize) -> Vec<f64> {
    let near = 1e-6 * r;
    let far = r - 1e-6 * r;
    let mut grid = Vec::with_capacity(steps);
    grid.push(r);
    let inner = steps.saturating_sub(1);
    for i in 0..inner {
        let frac = if inner > 1 { i as f64 / (inner - 1) as f64 } else { 1.0 };
        let gap = near * (far / near).powf(frac);
        grid.push(r - gap);
    }
    grid
}

pub fn check_coverage(config: &AnnulusConfig, domains: &[AngularDomain], strips: &[Strip], radial_steps: usize) -> Result<CoverageReport, CoverageError> {
    check_disc_coverage(config.inner_radius(), domains, strips, radial_steps)
}

/// Coverage of the closed disc of radius `r` about the origin.
pub fn check_disc_coverage(r: f64, domains: &[AngularDomain], strips: &[Strip], radial_steps: usize) -> Result<CoverageReport, CoverageError> {
    if radial_steps < 2 {
        return Err(CoverageError::TooFewRadii(radial_steps));
    }
    // Witnesses must clear every boundary line by this much; tangencies put
    // rounding-sized gaps on the circle that are not real.
    let scale = domains.iter().map(|d| d.vertex.norm()).fold(r.max(1.0), f64::max);
    let clearance = WITNESS_CLEARANCE * scale;
    let clearly_outside = |p: PointXY| {
        domains.iter().all(|d| d.margin(p) < -clearance) && strips.iter().all(|s| s.margin(p) < -clearance)
    };

    if clearly_outside(PointXY::ORIGIN) {
        return Ok(CoverageReport {
            covered: false,
            witness: Some(PointXY::ORIGIN),
            radii_checked: 0,
            min_slack: 0.0,
        });
    }

    let grid = radial_grid(r, radial_steps);
    for (i, &rho) in grid.iter().enumerate() {
        let arcs: Vec<ArcIntervalSet> = domains
            .iter()
            .map(|d| d.arc_intersection(rho))
            .chain(strips.iter().map(|s| s.arc_intersection(rho)))
            .collect();
        let union = ArcIntervalSet::union_all(arcs.iter(), SEAM_TOLERANCE);
        let mut gaps = union.gaps(SEAM_TOLERANCE);
        if gaps.is_empty() {
            continue;
        }
        gaps.sort_by(|a, b| b.1.total_cmp(&a.1));
        // a gap counts only if its midpoint really is uncovered
        let verified: Vec<(PointXY, f64)> = gaps
            .iter()
            .map(|&(start, len)| (PointXY::from_polar(rho, start + 0.5 * len), len))
            .filter(|&(p, _)| p.norm() <= r && clearly_outside(p))
            .collect();
        if let Some(&(witness, _)) = verified.first() {
            let min_slack = verified.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
            return Ok(CoverageReport {
                covered: false,
                witness: Some(witness),
                radii_checked: i + 1,
                min_slack,
            });
        }
    }
    Ok(CoverageReport {
        covered: true,
        witness: None,
        radii_checked: grid.len(),
        min_slack: 0.0,
    })
}

/// Offsets `(from, to)`, relative to the direction from `vertex` to the
/// centre, of the smallest wedge at `vertex` containing the intersection of
/// the half-planes with the disc of radius `r`. `None` when that
/// intersection is empty.
///
/// The extreme directions of a convex region bounded by segments and arcs
/// of the circle are attained at tangency points of the circle or at
/// corners, so a finite candidate set suffices.
pub fn enclosing_offsets(vertex: PointXY, half_planes: &[HalfPlane], r: f64) -> Option<(f64, f64)> {
    let dist = vertex.norm();
    let scale = dist.max(r).max(1.0);
    let tol = 1e-12 * scale;
    let inside = |p: PointXY| p.norm() <= r * (1.0 + 1e-12) && half_planes.iter().all(|h| h.margin(p) >= -tol);

    let mut candidates = Vec::new();
    if dist >= r {
        let half = (r / dist).min(1.0).asin();
        let reach = ((dist - r) * (dist + r)).max(0.0).sqrt();
        let inward = (-vertex).angle();
        candidates.push(vertex + reach * PointXY::unit(inward + half));
        candidates.push(vertex + reach * PointXY::unit(inward - half));
    }
    for h in half_planes {
        let c = h.offset;
        if c.abs() <= r {
            let foot = c * h.normal;
            let along = PointXY::new(-h.normal.y, h.normal.x);
            let reach = ((r - c.abs()) * (r + c.abs())).sqrt();
            candidates.push(foot + reach * along);
            candidates.push(foot - reach * along);
        }
    }
    for (i, a) in half_planes.iter().enumerate() {
        for b in &half_planes[i + 1..] {
            let det = a.normal.cross(b.normal);
            if det.abs() > 1e-14 {
                let x = (a.offset * b.normal.y - b.offset * a.normal.y) / det;
                let y = (a.normal.x * b.offset - b.normal.x * a.offset) / det;
                candidates.push(PointXY::new(x, y));
            }
        }
    }

    let base = -vertex;
    candidates
        .into_iter()
        .filter(|&p| inside(p))
        .filter_map(|p| {
            let v = p - vertex;
            (v.norm() > tol).then(|| signed_angle(base, v))
        })
        .fold(None, |acc: Option<(f64, f64)>, a| match acc {
            None => Some((a, a)),
            Some((lo, hi)) => Some((lo.min(a), hi.max(a))),
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizationResult {
    pub original: AngularDomain,
    pub regular: RegularWedge,
    /// `regular.alpha() / original.sweep`; `1` when both are zero.
    pub angle_ratio: f64,
    pub containment_verified: bool,
}

/// Smallest regular wedge containing `domain cap T`, with vertex where the
/// domain's bisector, followed backwards from the vertex, meets `K`.
///
/// Translating a wedge backwards along a direction inside its own cone
/// yields a wedge of the same angle containing the original, so the result
/// never has a larger angle than `domain`.
pub fn regularize(config: &AnnulusConfig, domain: &AngularDomain) -> Result<RegularizationResult, CoverageError> {
    let r = config.inner_radius();
    let big_r = config.outer_radius();
    let dist = domain.vertex.norm();
    if dist < r * (1.0 - 1e-12) {
        return Err(CoverageError::VertexInsideInner { distance: dist, r });
    }
    if dist > big_r * (1.0 + 1e-12) {
        return Err(CoverageError::VertexOutsideOuter { distance: dist, big_r });
    }
    let u = PointXY::unit(domain.start_angle + 0.5 * domain.sweep);
    let along = domain.vertex.dot(u);
    let back = along + (along * along + (big_r - dist) * (big_r + dist)).max(0.0).sqrt();
    let vertex_angle = (domain.vertex - back * u).angle();
    let apex = config.point_on_outer(vertex_angle);
    let planes = domain.half_planes();
    let e = config.epsilon();
    let (from, to) = enclosing_offsets(apex, &planes, r).unwrap_or((0.0, 0.0));
    let regular = RegularWedge::new(*config, vertex_angle, from.clamp(-e, e), to.clamp(-e, e))?;

    let angle_ratio = if domain.sweep > 0.0 {
        regular.alpha() / domain.sweep
    } else if regular.alpha() == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let containment_verified = verify_containment(domain, &regular.to_angular(), r, CONTAINMENT_SAMPLES);
    Ok(RegularizationResult {
        original: *domain,
        regular,
        angle_ratio,
        containment_verified,
    })
}

/// Checks that boundary samples of `inner cap T` lie in `outer`.
fn verify_containment(inner: &AngularDomain, outer: &AngularDomain, r: f64, samples: usize) -> bool {
    let tol = 1e-9 * outer.vertex.norm().max(r).max(1.0);
    let planes = inner.half_planes();
    let arc_samples = samples / 2;
    let per_line = (samples - arc_samples) / planes.len().max(1);

    let on_arc = (0..arc_samples).map(|j| PointXY::from_polar(r, TAU * j as f64 / arc_samples as f64));
    let on_lines = planes.iter().flat_map(|h| {
        let c = h.offset;
        let foot = c * h.normal;
        let along = PointXY::new(-h.normal.y, h.normal.x);
        let reach = if c.abs() <= r { ((r - c.abs()) * (r + c.abs())).sqrt() } else { 0.0 };
        let count = if c.abs() <= r { per_line } else { 0 };
        (0..count).map(move |j| {
            let s = if count > 1 { -1.0 + 2.0 * j as f64 / (count - 1) as f64 } else { 0.0 };
            foot + (s * reach) * along
        })
    });
    on_arc
        .chain(on_lines)
        .chain(std::iter::once(inner.vertex))
        .filter(|&p| p.norm() <= r * (1.0 + 1e-12) && inner.contains_approx(p, 1e-12))
        .all(|p| outer.contains_approx(p, tol))
}

/// The two wedges covering a strip inside `K`, before and after
/// regularization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripDecomposition {
    pub strip: Strip,
    /// Chord endpoints `[A, B, C, D]`: `A, B` on the low line, `C, D` on the
    /// high line, with `A` and `D` at the same end.
    pub chord_points: [PointXY; 4],
    /// Wedges `ABD` (apex `B`) and `BDC` (apex `D`).
    pub wedges: [AngularDomain; 2],
    pub regularized: [RegularizationResult; 2],
}

impl StripDecomposition {
    pub fn angles(&self) -> [f64; 2] {
        [self.wedges[0].sweep, self.wedges[1].sweep]
    }
}

pub fn strip_to_regular_domains(config: &AnnulusConfig, strip: &Strip) -> Result<StripDecomposition, CoverageError> {
    let r = config.inner_radius();
    let big_r = config.outer_radius();
    for offset in [strip.offset_low, strip.offset_high] {
        if offset.abs() > r {
            return Err(CoverageError::LineMissesDisc { offset, r });
        }
    }
    let n = strip.normal();
    let u = PointXY::new(-n.y, n.x);
    let chord = |c: f64| ((big_r - c.abs()) * (big_r + c.abs())).sqrt();
    let (c1, c2) = (strip.offset_low, strip.offset_high);
    let a = c1 * n + chord(c1) * u;
    let b = c1 * n - chord(c1) * u;
    let d = c2 * n + chord(c2) * u;
    let c = c2 * n - chord(c2) * u;

    let abd = AngularDomain::from_rays(b, a - b, d - b);
    let bdc = AngularDomain::from_rays(d, b - d, c - d);
    Ok(StripDecomposition {
        strip: *strip,
        chord_points: [a, b, c, d],
        wedges: [abd, bdc],
        regularized: [regularize(config, &abd)?, regularize(config, &bdc)?],
    })
}
