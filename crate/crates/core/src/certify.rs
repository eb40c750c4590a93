//! End-to-end certificates: the angular-domain covering inequality, the
//! plank bound on the unit disc through sphere-zone areas, and the
//! large-`R` limit that recovers the plank bound from the angular one.

use crate::coverage::{check_coverage, check_disc_coverage, regularize, strip_to_regular_domains, CoverageError, CoverageReport, RegularizationResult};
use crate::geom::{AngularDomain, AnnulusConfig, GeomError, Strip};
use crate::measure::{Measure, MeasureError, Method, RadialProfile};
use crate::numerics::{integrate, IntegrationError, SingularityHint};
use serde::Serialize;
use std::cell::RefCell;
use std::f64::consts::PI;
use thiserror::Error;

/// Slack allowed on the final inequality of a certificate.
pub const INEQUALITY_SLACK: f64 = 1e-12;
/// Agreement required between quadrature and closed-form zone areas.
pub const ZONE_TOLERANCE: f64 = 1e-6;
/// Plank bound on the unit disc: its minimal width.
pub const UNIT_DISC_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("strip bounding line at offset {offset} does not meet the unit disc")]
    LineMissesDisc { offset: f64 },
    #[error("outer radius must be at least 2, got {0}")]
    RadiusTooSmall(f64),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Quadrature(#[from] IntegrationError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// The family does not cover the disc, so nothing is claimed.
    NotAsserted,
}

impl Verdict {
    fn from_slack(covered: bool, slack: f64) -> Self {
        match (covered, slack >= -INEQUALITY_SLACK) {
            (false, _) => Verdict::NotAsserted,
            (true, true) => Verdict::Holds,
            (true, false) => Verdict::Violated,
        }
    }
}

/// Slab in space whose trace on the `xy`-plane is a given strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slab {
    pub normal: [f64; 3],
    pub offset_low: f64,
    pub offset_high: f64,
}

impl Slab {
    pub fn width(&self) -> f64 {
        self.offset_high - self.offset_low
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZoneSpec {
    pub strip: Strip,
    pub lifted: Slab,
    /// Clip the slab to `[-1, 1]` instead of requiring both planes to cut
    /// the sphere.
    pub clipped: bool,
}

impl ZoneSpec {
    pub fn new(strip: Strip) -> Self {
        let n = strip.normal();
        Self {
            strip,
            lifted: Slab {
                normal: [n.x, n.y, 0.0],
                offset_low: strip.offset_low,
                offset_high: strip.offset_high,
            },
            clipped: false,
        }
    }

    pub fn clipped(strip: Strip) -> Self {
        Self { clipped: true, ..Self::new(strip) }
    }

    fn bounds(&self) -> Result<(f64, f64), CertifyError> {
        let (lo, hi) = (self.lifted.offset_low, self.lifted.offset_high);
        if self.clipped {
            return Ok((lo.max(-1.0), hi.min(1.0)));
        }
        for offset in [lo, hi] {
            if offset.abs() > 1.0 {
                return Err(CertifyError::LineMissesDisc { offset });
            }
        }
        Ok((lo, hi))
    }
}

/// Area of the unit sphere inside the lifted slab.
///
/// The quadrature route integrates the two-sheeted area element
/// `2 / sqrt(1 - u^2 - v^2)` over the planar strip, in coordinates `u`
/// across and `v` along the strip.
pub fn hatbox_zone_area(spec: &ZoneSpec, method: Method) -> Result<f64, CertifyError> {
    let (lo, hi) = spec.bounds()?;
    if lo >= hi {
        return Ok(0.0);
    }
    match method {
        Method::ClosedForm => Ok(2.0 * PI * (hi - lo)),
        Method::Quadrature => zone_quadrature(lo, hi, 1e-11),
    }
}

fn zone_quadrature(lo: f64, hi: f64, tol: f64) -> Result<f64, CertifyError> {
    let failure: RefCell<Option<IntegrationError>> = RefCell::new(None);
    let chord = |u: f64| {
        let a = ((1.0 - u) * (1.0 + u)).max(0.0).sqrt();
        let element = |v: f64| 2.0 / ((a - v) * (a + v)).sqrt();
        match integrate(element, -a, a, 0.1 * tol, SingularityHint::BOTH) {
            Ok(q) => q.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let outer = integrate(chord, lo, hi, tol, SingularityHint::NONE);
    if let Some(e) = failure.into_inner() {
        return Err(e.into());
    }
    Ok(outer?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlankCertificate {
    pub sum_widths: f64,
    pub bound: f64,
    pub zone_areas: Vec<f64>,
    /// Largest `|zone area - 2 pi width|` over the strips.
    pub zone_residual: f64,
    pub coverage: CoverageReport,
    pub slack: f64,
    pub verdict: Verdict,
}

impl PlankCertificate {
    pub fn inequality_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Certify `sum of widths >= 2` for strips covering the unit disc.
pub fn certify_plank(strips: &[Strip], radial_steps: usize) -> Result<PlankCertificate, CertifyError> {
    let mut zone_areas = Vec::with_capacity(strips.len());
    let mut zone_residual: f64 = 0.0;
    for s in strips {
        let area = hatbox_zone_area(&ZoneSpec::new(*s), Method::Quadrature)?;
        zone_residual = zone_residual.max((area - 2.0 * PI * s.width()).abs());
        zone_areas.push(area);
    }
    let coverage = check_disc_coverage(1.0, &[], strips, radial_steps)?;
    let sum_widths: f64 = strips.iter().map(Strip::width).sum();
    let slack = sum_widths - UNIT_DISC_WIDTH;
    Ok(PlankCertificate {
        sum_widths,
        bound: UNIT_DISC_WIDTH,
        zone_areas,
        zone_residual,
        verdict: Verdict::from_slack(coverage.covered, slack),
        coverage,
        slack,
    })
}

/// Residuals of `sum alpha_i = sum mu(D_i cap T) >= mu(T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureChain {
    /// `mu(D_i cap T)` by quadrature.
    pub domain_measures: Vec<f64>,
    pub sum_measures: f64,
    pub disc_measure: f64,
    /// `sum alpha_i - sum mu(D_i cap T)`; non-negative when every wedge
    /// measures at most its angle.
    pub angles_minus_measures: f64,
    /// `sum mu(D_i cap T) - mu(T)`; non-negative under coverage.
    pub measures_minus_disc: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularCertificate {
    pub sum_angles: f64,
    pub view_angle: f64,
    pub regularized_sum: f64,
    pub regularizations: Vec<RegularizationResult>,
    pub coverage: CoverageReport,
    pub chain: MeasureChain,
    pub slack: f64,
    pub verdict: Verdict,
}

impl AngularCertificate {
    pub fn inequality_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Certify `sum of angles >= view angle` for wedges covering `T`.
pub fn certify_angular(config: &AnnulusConfig, domains: &[AngularDomain], radial_steps: usize) -> Result<AngularCertificate, CertifyError> {
    let regularizations = domains.iter().map(|d| regularize(config, d)).collect::<Result<Vec<_>, _>>()?;
    let coverage = check_coverage(config, domains, &[], radial_steps)?;
    let measure = Measure::new(*config);

    let mut domain_measures = Vec::with_capacity(domains.len());
    let mut error_estimate = 0.0;
    for d in domains {
        let m = measure.mu_region(&RadialProfile::from_domain(*d), 1e-10)?;
        error_estimate += m.error_estimate;
        domain_measures.push(m.value);
    }
    let sum_angles: f64 = domains.iter().map(|d| d.sweep).sum();
    let sum_measures: f64 = domain_measures.iter().sum();
    let view_angle = config.view_angle();
    let slack = sum_angles - view_angle;
    Ok(AngularCertificate {
        sum_angles,
        view_angle,
        regularized_sum: regularizations.iter().map(|r| r.regular.alpha()).sum(),
        regularizations,
        chain: MeasureChain {
            domain_measures,
            sum_measures,
            disc_measure: measure.mu_disc(),
            angles_minus_measures: sum_angles - sum_measures,
            measures_minus_disc: sum_measures - measure.mu_disc(),
            error_estimate,
        },
        verdict: Verdict::from_slack(coverage.covered, slack),
        coverage,
        slack,
    })
}

/// One outer radius of the limit derivation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub outer_radius: f64,
    /// `2 sum d_i / (2R - 2)`.
    pub width_bound: f64,
    /// `sum (tan alpha_i' + tan alpha_i'')`.
    pub tangent_sum: f64,
    /// `sum (alpha_i' + alpha_i'')`.
    pub angle_sum: f64,
    pub two_epsilon: f64,
    pub two_sin_epsilon: f64,
    pub two_over_r: f64,
    /// `(2R - 2) / R`, the lower bound on `sum d_i` implied at this radius.
    pub implied_width: f64,
    pub wedges_cover: bool,
    /// Per-link verdicts, in chain order.
    pub links: [bool; 5],
}

impl LimitRow {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|&l| l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTable {
    pub sum_widths: f64,
    pub rows: Vec<LimitRow>,
    /// Implied bounds non-decreasing as `R` grows.
    pub monotone: bool,
}

impl LimitTable {
    pub fn all_hold(&self) -> bool {
        self.monotone && self.rows.iter().all(LimitRow::holds)
    }
}

/// Evaluate, for each outer radius, the chain
/// `2 sum d/(2R-2) >= sum tan >= sum alpha >= 2 eps >= 2 sin eps = 2/R`
/// on the wedge decomposition of a strip family covering the unit disc.
pub fn limit_derivation_check(strips: &[Strip], outer_radii: &[f64], radial_steps: usize) -> Result<LimitTable, CertifyError> {
    let sum_widths: f64 = strips.iter().map(Strip::width).sum();
    let mut rows = Vec::with_capacity(outer_radii.len());
    let mut order: Vec<f64> = outer_radii.to_vec();
    order.sort_by(f64::total_cmp);
    for &big_r in &order {
        if !(big_r >= 2.0) {
            return Err(CertifyError::RadiusTooSmall(big_r));
        }
        let config = AnnulusConfig::new(1.0, big_r)?;
        let mut wedges = Vec::with_capacity(2 * strips.len());
        let mut tangent_sum = 0.0;
        let mut angle_sum = 0.0;
        for s in strips {
            let dec = strip_to_regular_domains(&config, s)?;
            for a in dec.angles() {
                tangent_sum += a.tan();
                angle_sum += a;
            }
            wedges.extend(dec.wedges);
        }
        let wedges_cover = check_coverage(&config, &wedges, &[], radial_steps)?.covered;
        let width_bound = 2.0 * sum_widths / (2.0 * big_r - 2.0);
        let two_epsilon = config.view_angle();
        let two_sin_epsilon = 2.0 * config.epsilon().sin();
        let two_over_r = 2.0 / big_r;
        let s = INEQUALITY_SLACK;
        rows.push(LimitRow {
            outer_radius: big_r,
            width_bound,
            tangent_sum,
            angle_sum,
            two_epsilon,
            two_sin_epsilon,
            two_over_r,
            implied_width: (2.0 * big_r - 2.0) / big_r,
            wedges_cover,
            links: [
                width_bound >= tangent_sum - s,
                tangent_sum >= angle_sum - s,
                wedges_cover && angle_sum >= two_epsilon - s,
                two_epsilon >= two_sin_epsilon - s,
                (two_sin_epsilon - two_over_r).abs() <= s,
            ],
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].implied_width >= w[0].implied_width);
    Ok(LimitTable { sum_widths, rows, monotone })
}
