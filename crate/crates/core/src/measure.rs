//! The rotation-invariant singular measure on the disc `T`.
//!
//! `mu(S)` is the integral over `S` of the radial density
//!
//! ```text
//! f(rho) = 1/pi * 1/(R^2 - rho^2) * sqrt((R^2 - r^2) / (r^2 - rho^2))
//! ```
//!
//! which is normalised so that a regular angular domain of angle `alpha`
//! has measure exactly `alpha`, and `mu(T)` is the view angle `2 epsilon`.
//! Every closed form here has a quadrature counterpart computed from the
//! density alone; the quadrature side never calls the closed forms.

use crate::geom::{arccos_ratio_gap, AngularDomain, AnnulusConfig, ArcIntervalSet, RegularDomain, RegularWedge, Strip};
use crate::numerics::{integrate_gaps, IntegrationError, QuadratureOptions, SingularityHint};
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("density is defined for 0 <= rho < r = {r}, got rho = {rho}")]
    DensityDomain { rho: f64, r: f64 },
    #[error("antiderivative needs |t| <= rho <= r = {r} with |t| < r, got rho = {rho}, t = {t}")]
    AntiderivativeDomain { rho: f64, t: f64, r: f64 },
    #[error("radial profile integral needs |t| < r = {r}, got t = {t}")]
    ProfileDomain { t: f64, r: f64 },
    #[error(transparent)]
    Quadrature(#[from] IntegrationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
}

impl MeasureResult {
    fn closed(value: f64) -> Self {
        Self {
            value,
            method: Method::ClosedForm,
            error_estimate: 0.0,
        }
    }

    fn quadrature(value: f64, error_estimate: f64) -> Self {
        Self {
            value,
            method: Method::Quadrature,
            error_estimate,
        }
    }
}

/// One constituent of a [`RadialProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Disc,
    Domain(AngularDomain),
    Strip(Strip),
}

impl Piece {
    fn arcs_at(&self, rho: f64) -> ArcIntervalSet {
        match self {
            Piece::Disc => ArcIntervalSet::full(),
            Piece::Domain(d) => d.arc_intersection(rho),
            Piece::Strip(s) => s.arc_intersection(rho),
        }
    }

    fn rotated(&self, angle: f64) -> Self {
        match self {
            Piece::Disc => Piece::Disc,
            Piece::Domain(d) => Piece::Domain(d.rotated(angle)),
            Piece::Strip(s) => Piece::Strip(s.rotated(angle)),
        }
    }
}

/// A region of `T` given as a union of wedges and strips, read through its
/// angular cross-section at each radius.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RadialProfile {
    pieces: Vec<Piece>,
}

impl RadialProfile {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full_disc() -> Self {
        Self { pieces: vec![Piece::Disc] }
    }

    pub fn from_domain(domain: AngularDomain) -> Self {
        Self {
            pieces: vec![Piece::Domain(domain)],
        }
    }

    pub fn from_strip(strip: Strip) -> Self {
        Self {
            pieces: vec![Piece::Strip(strip)],
        }
    }

    pub fn with(mut self, piece: Piece) -> Self {
        self.pieces.push(piece);
        self
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn arcs_at(&self, rho: f64) -> ArcIntervalSet {
        let sets: Vec<ArcIntervalSet> = self.pieces.iter().map(|p| p.arcs_at(rho)).collect();
        ArcIntervalSet::union_all(sets.iter(), 0.0)
    }

    pub fn rotated(&self, angle: f64) -> Self {
        Self {
            pieces: self.pieces.iter().map(|p| p.rotated(angle)).collect(),
        }
    }

    /// Radii in `(0, limit)` where the cross-section changes shape: the
    /// distances of all boundary lines from the centre and of their
    /// pairwise intersections.
    pub fn breakpoints(&self, limit: f64) -> Vec<f64> {
        let lines: Vec<(crate::geom::PointXY, f64)> = self
            .pieces
            .iter()
            .flat_map(|p| match p {
                Piece::Disc => Vec::new(),
                Piece::Domain(d) => d.half_planes().iter().map(|h| (h.normal, h.offset)).collect(),
                Piece::Strip(s) => s.half_planes().iter().map(|h| (h.normal, h.offset)).collect(),
            })
            .collect();
        let mut out: Vec<f64> = lines.iter().map(|&(_, c)| c.abs()).collect();
        for (i, &(n1, c1)) in lines.iter().enumerate() {
            for &(n2, c2) in &lines[i + 1..] {
                let det = n1.cross(n2);
                if det.abs() > 1e-14 {
                    let x = (c1 * n2.y - c2 * n1.y) / det;
                    let y = (n1.x * c2 - n2.x * c1) / det;
                    out.push(x.hypot(y));
                }
            }
        }
        // Knots closer than this to each other or to the ends would create
        // intervals whose substituted nodes round onto the singular endpoint.
        let spacing = 1e-9 * limit;
        out.retain(|&b| b.is_finite() && b > spacing && b < limit - spacing);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= spacing);
        out
    }
}

/// Measure operations for one annulus configuration.
#[derive(Debug, Clone, Copy)]
pub struct Measure {
    config: AnnulusConfig,
    options: QuadratureOptions,
}

impl Measure {
    pub fn new(config: AnnulusConfig) -> Self {
        Self {
            config,
            options: QuadratureOptions::with_tolerance(1e-12),
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.options.tolerance = tolerance;
        self
    }

    pub fn config(&self) -> &AnnulusConfig {
        &self.config
    }

    fn radii(&self) -> (f64, f64) {
        (self.config.inner_radius(), self.config.outer_radius())
    }

    /// Density without domain checks; valid for `0 <= rho < r`.
    fn density_unchecked(&self, rho: f64) -> f64 {
        self.density_gap(rho, self.config.inner_radius() - rho)
    }

    /// Density at `rho` given `gap = r - rho` directly.
    fn density_gap(&self, rho: f64, gap: f64) -> f64 {
        let (r, big_r) = self.radii();
        let outer = (big_r - rho) * (big_r + rho);
        let inner = gap * (r + rho);
        let tail = (big_r - r) * (big_r + r);
        (tail / inner).sqrt() / (PI * outer)
    }

    pub fn density(&self, rho: f64) -> Result<f64, MeasureError> {
        let r = self.config.inner_radius();
        if !(0.0..r).contains(&rho) {
            return Err(MeasureError::DensityDomain { rho, r });
        }
        Ok(self.density_unchecked(rho))
    }

    /// Antiderivative in `rho` of `2 f(rho) rho / sqrt(rho^2 - t^2)`,
    /// vanishing at `rho = |t|`. At `rho = r` the analytic limit
    /// `1 / sqrt(R^2 - t^2)` is returned.
    pub fn antiderivative(&self, rho: f64, t: f64) -> Result<f64, MeasureError> {
        let (r, big_r) = self.radii();
        let a = t.abs();
        if !(a < r && a <= rho && rho <= r) {
            return Err(MeasureError::AntiderivativeDomain { rho, t, r });
        }
        let scale = 1.0 / ((big_r - a) * (big_r + a)).sqrt();
        if rho == r {
            return Ok(scale);
        }
        let first = ((big_r - r) * (big_r + r)) / ((big_r - a) * (big_r + a));
        let second = ((rho - a) * (rho + a)) / ((r - rho) * (r + rho));
        Ok(2.0 / PI * scale * (first * second).sqrt().atan())
    }

    /// `int_{|t|}^r 2 f(rho) rho / sqrt(rho^2 - t^2) d rho`.
    pub fn radial_profile_integral(&self, t: f64, method: Method) -> Result<MeasureResult, MeasureError> {
        let (r, big_r) = self.radii();
        let a = t.abs();
        if !(a < r) {
            return Err(MeasureError::ProfileDomain { t, r });
        }
        match method {
            Method::ClosedForm => Ok(MeasureResult::closed(1.0 / ((big_r - a) * (big_r + a)).sqrt())),
            Method::Quadrature => {
                let g = |rho: f64, from_t: f64, to_r: f64| 2.0 * self.density_gap(rho, to_r) * rho / (from_t * (rho + a)).sqrt();
                let q = integrate_gaps(g, a, r, SingularityHint::BOTH, &self.options)?;
                Ok(MeasureResult::quadrature(q.value, q.error_estimate))
            }
        }
    }

    /// Measure of `D cap T` for a tangent-anchored regular domain.
    pub fn mu_regular(&self, domain: &RegularDomain, method: Method) -> Result<MeasureResult, MeasureError> {
        let (r, big_r) = self.radii();
        let eps = self.config.epsilon();
        let t = domain.signed_distance().clamp(-r, r);
        match method {
            Method::ClosedForm => Ok(MeasureResult::closed(eps - (t / big_r).clamp(-1.0, 1.0).asin())),
            Method::Quadrature => {
                let segment = |rho: f64, from_t: f64, to_r: f64| 2.0 * self.density_gap(rho, to_r) * rho * arccos_ratio_gap(t, rho, from_t);
                let upper = integrate_gaps(segment, t.abs(), r, SingularityHint::BOTH, &self.options)?;
                let mut value = upper.value;
                let mut err = upper.error_estimate;
                if t < 0.0 {
                    // circles of radius below |t| lie entirely inside the domain
                    let margin = r - t.abs();
                    let disc = |rho: f64, _: f64, to_t: f64| TAU * self.density_gap(rho, margin + to_t) * rho;
                    let core = integrate_gaps(disc, 0.0, t.abs(), SingularityHint::UPPER, &self.options)?;
                    value += core.value;
                    err += core.error_estimate;
                }
                Ok(MeasureResult::quadrature(value, err))
            }
        }
    }

    /// Measure of `W cap T` for a general regular wedge, through the
    /// difference of two tangent-anchored domains.
    pub fn mu_wedge(&self, wedge: &RegularWedge, method: Method) -> Result<MeasureResult, MeasureError> {
        let (outer, inner) = wedge.as_difference();
        let a = self.mu_regular(&outer, method)?;
        let b = self.mu_regular(&inner, method)?;
        Ok(MeasureResult {
            value: (a.value - b.value).max(0.0),
            method,
            error_estimate: a.error_estimate + b.error_estimate,
        })
    }

    /// `mu(S)` for a region given by its radial profile, by integrating
    /// `f(rho) rho |S_rho|` over `(0, r)`, split at the profile's breakpoints.
    pub fn mu_region(&self, profile: &RadialProfile, radial_tol: f64) -> Result<MeasureResult, MeasureError> {
        let r = self.config.inner_radius();
        if profile.pieces().is_empty() {
            return Ok(MeasureResult::quadrature(0.0, 0.0));
        }
        let mut knots = vec![0.0];
        knots.extend(profile.breakpoints(r));
        knots.push(r);
        let options = QuadratureOptions {
            tolerance: radial_tol / (knots.len() - 1) as f64,
            ..self.options
        };
        let mut value = 0.0;
        let mut err = 0.0;
        for w in knots.windows(2) {
            let last = w[1] == r;
            let g = |rho: f64, _: f64, to_b: f64| {
                let gap = if last { to_b } else { r - rho };
                self.density_gap(rho, gap) * rho * profile.arcs_at(rho).total_length()
            };
            let q = integrate_gaps(g, w[0], w[1], SingularityHint::BOTH, &options)?;
            value += q.value;
            err += q.error_estimate;
        }
        Ok(MeasureResult::quadrature(value.max(0.0), err))
    }

    /// `mu(T)`, the view angle.
    pub fn mu_disc(&self) -> f64 {
        self.config.view_angle()
    }

    pub fn mu_disc_quadrature(&self) -> Result<MeasureResult, MeasureError> {
        self.mu_region(&RadialProfile::full_disc(), self.options.tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_regular, PointXY};
    use crate::numerics::integrate;
    use proptest::prelude::*;

    fn unit_two() -> Measure {
        Measure::new(AnnulusConfig::new(1.0, 2.0).unwrap())
    }

    #[test]
    fn density_examples() {
        let m = unit_two();
        assert!((m.density(0.0).unwrap() - 3f64.sqrt() / (4.0 * PI)).abs() < 1e-15);
        assert!((m.density(0.0).unwrap() - 0.137_832_22).abs() < 1e-8);
        assert!((m.density(0.5).unwrap() - 2.0 / (3.75 * PI)).abs() < 1e-15);
        assert!((m.density(0.5).unwrap() - 0.169_765).abs() < 1e-6);
        assert!(matches!(m.density(1.0), Err(MeasureError::DensityDomain { .. })));
        assert!(m.density(-0.1).is_err());
        assert!(m.density(1.0 - 1e-9).unwrap() > 1e3);
    }

    #[test]
    fn density_strictly_increasing() {
        let m = Measure::new(AnnulusConfig::new(0.8, 1.3).unwrap());
        let values: Vec<f64> = (0..1000).map(|i| m.density(0.8 * i as f64 / 1000.0).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn antiderivative_examples() {
        let m = unit_two();
        for t in [-0.7, 0.0, 0.3, 0.95] {
            assert_eq!(m.antiderivative(f64::abs(t), t).unwrap(), 0.0);
        }
        assert!((m.antiderivative(1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((m.antiderivative(1.0 - 1e-12, 0.0).unwrap() - 0.5).abs() < 1e-6);

        // quadrature of 2 f(rho) on [0, 0.6] (t = 0 removes the sqrt factor)
        let oracle = integrate(|rho| 2.0 * m.density(rho).unwrap(), 0.0, 0.6, 1e-13, SingularityHint::NONE).unwrap();
        assert!((m.antiderivative(0.6, 0.0).unwrap() - oracle.value).abs() < 1e-9);

        assert!(m.antiderivative(0.2, 0.3).is_err());
        assert!(m.antiderivative(1.1, 0.3).is_err());
        assert!(m.antiderivative(1.0, 1.0).is_err());
    }

    #[test]
    fn antiderivative_matches_quadrature_with_offset() {
        let m = Measure::new(AnnulusConfig::new(1.5, 2.5).unwrap());
        for (rho, t) in [(0.9f64, 0.4f64), (1.4, -0.8), (1.2, 1.1)] {
            let a = t.abs();
            let g = |s: f64| 2.0 * m.density(s).unwrap() * s / ((s - a) * (s + a)).sqrt();
            let oracle = integrate(g, a, rho, 1e-13, SingularityHint::LOWER).unwrap();
            assert!((m.antiderivative(rho, t).unwrap() - oracle.value).abs() < 1e-9, "rho {rho} t {t}");
        }
    }

    #[test]
    fn radial_profile_examples() {
        let m = unit_two();
        let c = m.radial_profile_integral(0.0, Method::ClosedForm).unwrap().value;
        assert_eq!(c, 0.5);
        let near = m.radial_profile_integral(1.0 - 1e-12, Method::ClosedForm).unwrap().value;
        assert!((near - 1.0 / 3f64.sqrt()).abs() < 1e-9);
        let c = m.radial_profile_integral(-0.4, Method::ClosedForm).unwrap().value;
        assert!((c - 0.510_310).abs() < 1e-6);
        let q = m.radial_profile_integral(-0.4, Method::Quadrature).unwrap();
        assert!((q.value - 1.0 / (4.0f64 - 0.16).sqrt()).abs() < 1e-8, "{q:?}");
        assert!(m.radial_profile_integral(1.0, Method::Quadrature).is_err());
        assert!(m.radial_profile_integral(-1.0, Method::ClosedForm).is_err());
    }

    #[test]
    fn mu_regular_examples() {
        let m = unit_two();
        let c = *m.config();
        for method in [Method::ClosedForm, Method::Quadrature] {
            let zero = make_regular(c, 0.0, 1, 0.0).unwrap();
            assert!(m.mu_regular(&zero, method).unwrap().value.abs() < 1e-12);
            let full = make_regular(c, 0.0, 1, c.view_angle()).unwrap();
            assert!((m.mu_regular(&full, method).unwrap().value - PI / 3.0).abs() < 1e-9);
        }
        let d = make_regular(c, 0.0, -1, 0.3).unwrap();
        assert!((m.mu_regular(&d, Method::ClosedForm).unwrap().value - 0.3).abs() < 1e-15);
        assert!((m.mu_regular(&d, Method::Quadrature).unwrap().value - 0.3).abs() < 1e-7);
    }

    #[test]
    fn mu_region_examples() {
        let m = unit_two();
        let full = m.mu_region(&RadialProfile::full_disc(), 1e-11).unwrap();
        assert!((full.value - PI / 3.0).abs() < 1e-8, "{full:?}");
        assert_eq!(m.mu_region(&RadialProfile::empty(), 1e-11).unwrap().value, 0.0);

        let d = make_regular(*m.config(), 0.4, 1, 0.7).unwrap();
        let via_profile = m.mu_region(&RadialProfile::from_domain(d.to_angular()), 1e-11).unwrap();
        assert!((via_profile.value - 0.7).abs() < 1e-7, "{via_profile:?}");
        let via_quad = m.mu_regular(&d, Method::Quadrature).unwrap();
        assert!((via_profile.value - via_quad.value).abs() < 1e-8);
    }

    #[test]
    fn mu_disc_examples() {
        assert!((unit_two().mu_disc() - PI / 3.0).abs() < 1e-15);
        let m = Measure::new(AnnulusConfig::new(1.0, 2f64.sqrt()).unwrap());
        assert!((m.mu_disc() - PI / 2.0).abs() < 1e-15);
        let q = unit_two().mu_disc_quadrature().unwrap();
        assert!((q.value - PI / 3.0).abs() < 1e-8);
    }

    #[test]
    fn wedge_difference_matches_angle() {
        let m = Measure::new(AnnulusConfig::new(0.6, 1.7).unwrap());
        let e = m.config().epsilon();
        let w = RegularWedge::new(*m.config(), 2.0, -0.3 * e, 0.5 * e).unwrap();
        let closed = m.mu_wedge(&w, Method::ClosedForm).unwrap().value;
        let quad = m.mu_wedge(&w, Method::Quadrature).unwrap().value;
        let profile = m.mu_region(&RadialProfile::from_domain(w.to_angular()), 1e-11).unwrap().value;
        assert!((closed - 0.8 * e).abs() < 1e-14);
        assert!((quad - 0.8 * e).abs() < 1e-8);
        assert!((profile - 0.8 * e).abs() < 1e-8);
    }

    #[test]
    fn split_by_interior_halfline_is_additive() {
        let m = unit_two();
        let c = *m.config();
        let whole = make_regular(c, 0.9, 1, 0.8).unwrap();
        let dom = whole.to_angular();
        let cut = 0.35;
        // sub-wedge adjacent to the tangent halfline, and the remainder
        let near = AngularDomain::new(dom.vertex, dom.end_angle() - cut, cut).unwrap();
        let far = AngularDomain::new(dom.vertex, dom.start_angle, dom.sweep - cut).unwrap();
        let a = m.mu_region(&RadialProfile::from_domain(near), 1e-11).unwrap().value;
        let b = m.mu_region(&RadialProfile::from_domain(far), 1e-11).unwrap().value;
        let total = m.mu_regular(&whole, Method::Quadrature).unwrap().value;
        assert!((a + b - total).abs() < 1e-8);
        assert!((a - cut).abs() < 1e-8);
    }

    #[test]
    fn strip_measure_bounded_by_disc() {
        let m = unit_two();
        let s = Strip::new(0.3, -0.2, 0.5).unwrap();
        let v = m.mu_region(&RadialProfile::from_strip(s), 1e-11).unwrap();
        assert!(v.value > 0.0 && v.value <= m.mu_disc() + v.error_estimate);
    }

    #[test]
    fn breakpoints_include_vertex_and_line_distances() {
        let dom = AngularDomain::new(PointXY::new(0.5, 0.0), 0.2, 0.6).unwrap();
        let b = RadialProfile::from_domain(dom).breakpoints(1.0);
        assert!(b.iter().any(|&x| (x - 0.5).abs() < 1e-12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rotation_invariance(theta in -PI..PI, phi in 0.0f64..TAU, frac in 0.0f64..1.0, spin in 0.0f64..TAU) {
            let m = unit_two();
            let c = *m.config();
            let d = make_regular(c, theta, 1, frac * c.view_angle()).unwrap();
            let s = Strip::new(phi, -0.3, 0.1).unwrap();
            let profile = RadialProfile::from_domain(d.to_angular()).with(Piece::Strip(s));
            let a = m.mu_region(&profile, 1e-11).unwrap().value;
            let b = m.mu_region(&profile.rotated(spin), 1e-11).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }
}
