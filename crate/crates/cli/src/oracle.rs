//! Closed forms against quadrature across the measure and hat-box identities.

use std::f64::consts::PI;
use std::fmt::Write as _;

use plankcov::{certify::ZoneSpec, hatbox_zone_area, regularize, Measure, Method, RadialProfile, RegularDomain, Strip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::commands::{as_regular_wedge, Exit, Report};
use crate::scene::{Scene, SceneDomain};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_GRID: usize = 50;
pub const TOLERANCE: f64 = 1e-7;
/// Within `1e-3 r` of the singular radius.
pub const NEAR_SINGULAR_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub identity: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

struct Row {
    identity: String,
    tolerance: f64,
    samples: usize,
    max_residual: f64,
    error: Option<String>,
}

impl Row {
    fn new(identity: impl Into<String>, tolerance: f64) -> Self {
        Self {
            identity: identity.into(),
            tolerance,
            samples: 0,
            max_residual: 0.0,
            error: None,
        }
    }

    fn push<E: std::fmt::Display>(&mut self, residual: Result<f64, E>) {
        self.samples += 1;
        let message = match residual {
            Ok(r) if r.is_nan() => "residual is NaN".to_string(),
            Ok(r) => {
                self.max_residual = self.max_residual.max(r);
                return;
            }
            Err(e) => e.to_string(),
        };
        self.error.get_or_insert(message);
    }

    fn finish(self) -> OracleRow {
        OracleRow {
            passed: self.error.is_none() && self.max_residual <= self.tolerance,
            identity: self.identity,
            samples: self.samples,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            error: self.error,
        }
    }
}

/// Limit of `g(x)` as `x -> end` from below, for `g` with an expansion in
/// powers of `sqrt(end - x)`, by polynomial extrapolation in that variable.
pub fn sqrt_limit(g: impl Fn(f64) -> f64, end: f64, h0: f64) -> f64 {
    // sample at representable points and use their exact offsets
    let xs: Vec<f64> = (0..4).map(|k| end - h0 / 4f64.powi(k)).collect();
    let s: Vec<f64> = xs.iter().map(|&x| (end - x).sqrt()).collect();
    let y: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    (0..4)
        .map(|k| {
            let weight: f64 = (0..4).filter(|&j| j != k).map(|j| s[j] / (s[j] - s[k])).product();
            weight * y[k]
        })
        .sum()
}

fn near_singular(t: f64, r: f64) -> bool {
    r - t.abs() <= 1e-3 * r * (1.0 + 1e-9)
}

pub fn oracle_compare(scene: &Scene, grid: usize, seed: u64) -> Report {
    let grid = grid.max(2);
    let c = scene.config;
    let (r, big_r) = (c.inner_radius(), c.outer_radius());
    let m = Measure::new(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    let mut monotone = Row::new("density is increasing on [0, r)", 0.0);
    let mut rhos: Vec<f64> = (0..grid).map(|i| r * i as f64 / grid as f64).collect();
    rhos.extend((1..=9).map(|k| r * (1.0 - 10f64.powi(-k))));
    rhos.sort_by(f64::total_cmp);
    for w in rhos.windows(2) {
        monotone.push(m.density(w[0]).and_then(|a| m.density(w[1]).map(|b| (a - b).max(0.0))));
    }
    rows.push(monotone);

    let mut disc = Row::new("mu(T) quadrature = 2 asin(r/R)", TOLERANCE);
    disc.push(m.mu_disc_quadrature().map(|q| (q.value - c.view_angle()).abs()));
    rows.push(disc);

    let ts: Vec<f64> = (0..grid).map(|i| -0.95 * r + 1.9 * r * (i as f64 + 0.5) / grid as f64).collect();
    let mut at_start = Row::new("G(|t|, t) = 0", 0.0);
    let mut at_end = Row::new("lim G(rho, t) as rho -> r = (R^2 - t^2)^(-1/2)", 1e-10);
    let mut interior = Row::new("G(rho, t) = quadrature of its derivative", TOLERANCE);
    for &t in &ts {
        at_start.push(m.antiderivative(t.abs(), t).map(f64::abs));
        let target = 1.0 / ((big_r - t.abs()) * (big_r + t.abs())).sqrt();
        let limit = sqrt_limit(|rho| m.antiderivative(rho, t).unwrap_or(f64::NAN), r, 1e-6 * (r - t.abs()));
        at_end.push(Ok::<_, String>((limit - target).abs()));
        let rho = t.abs() + rng.gen_range(0.05..0.95) * (r - t.abs());
        let integrand = |x: f64| 2.0 * m.density(x).unwrap_or(f64::NAN) * x / ((x - t.abs()) * (x + t.abs())).sqrt();
        interior.push(
            plankcov::integrate(integrand, t.abs(), rho, 1e-12, plankcov::SingularityHint::LOWER)
                .map_err(|e| e.to_string())
                .and_then(|q| m.antiderivative(rho, t).map(|g| (g - q.value).abs()).map_err(|e| e.to_string())),
        );
    }
    rows.extend([at_start, at_end, interior]);

    let mut profile = Row::new("radial profile integral = (R^2 - t^2)^(-1/2)", TOLERANCE);
    let mut profile_near = Row::new("radial profile integral near t = +-r", NEAR_SINGULAR_TOLERANCE);
    let extra = [-0.999 * r, 0.999 * r];
    for &t in ts.iter().chain(extra.iter()) {
        let row = if near_singular(t, r) { &mut profile_near } else { &mut profile };
        row.push(m.radial_profile_integral(t, Method::Quadrature).and_then(|q| {
            m.radial_profile_integral(t, Method::ClosedForm).map(|cf| (q.value - cf.value).abs())
        }));
    }
    rows.extend([profile, profile_near]);

    let mut regular = Row::new("mu(regular domain cap T) = alpha", TOLERANCE);
    let mut regular_near = Row::new("mu(regular domain cap T) = alpha, |d| near r", NEAR_SINGULAR_TOLERANCE);
    for i in 0..=grid {
        let alpha = c.view_angle() * i as f64 / grid as f64;
        let chirality = if rng.gen_bool(0.5) { 1 } else { -1 };
        let d = RegularDomain::new(c, rng.gen_range(-PI..PI), chirality, alpha).expect("alpha in range");
        let row = if near_singular(d.signed_distance(), r) { &mut regular_near } else { &mut regular };
        row.push(m.mu_regular(&d, Method::Quadrature).map(|q| (q.value - alpha).abs()));
    }
    rows.extend([regular, regular_near]);

    let mut zones = Row::new("hat-box zone area = 2 pi width", TOLERANCE);
    zones.push(hatbox_zone_area(&ZoneSpec::new(Strip::new(0.0, -1.0, 1.0).unwrap()), Method::Quadrature).map(|a| (a - 4.0 * PI).abs()));
    for _ in 0..grid {
        let lo = rng.gen_range(-1.0..1.0);
        let hi = rng.gen_range(lo..=1.0);
        let s = Strip::new(rng.gen_range(-PI..PI), lo, hi).unwrap();
        zones.push(hatbox_zone_area(&ZoneSpec::new(s), Method::Quadrature).map(|a| (a - 2.0 * PI * s.width()).abs()));
    }
    rows.push(zones);

    for (i, d) in scene.domains.iter().enumerate() {
        let row = match d {
            SceneDomain::Regular(g) => {
                let tol = if near_singular(g.signed_distance(), r) { NEAR_SINGULAR_TOLERANCE } else { TOLERANCE };
                let mut row = Row::new(format!("domains[{i}]: mu = alpha"), tol);
                row.push(m.mu_regular(g, Method::Quadrature).map(|q| (q.value - g.alpha).abs()));
                row
            }
            SceneDomain::Angular(a) => {
                let region = m.with_tolerance(1e-11).mu_region(&RadialProfile::from_domain(*a), 1e-11);
                match as_regular_wedge(scene, a) {
                    Some(w) => {
                        let near = [w.from, w.to].iter().any(|&o| near_singular(big_r * o.sin(), r));
                        let mut row = Row::new(format!("domains[{i}]: mu = closed form"), if near { NEAR_SINGULAR_TOLERANCE } else { TOLERANCE });
                        row.push(region.and_then(|q| m.mu_wedge(&w, Method::ClosedForm).map(|cf| (q.value - cf.value).abs())));
                        row
                    }
                    None if a.vertex.norm() > big_r || a.vertex.norm() < r => {
                        let mut row = Row::new(format!("domains[{i}]: mu <= mu(T)"), TOLERANCE);
                        row.push(region.map(|q| (q.value - c.view_angle()).max(0.0)));
                        row
                    }
                    None => {
                        let mut row = Row::new(format!("domains[{i}]: mu <= regularized angle"), TOLERANCE);
                        row.push(
                            regularize(&c, a)
                                .map_err(|e| e.to_string())
                                .and_then(|reg| region.map(|q| (q.value - reg.regular.alpha()).max(0.0)).map_err(|e| e.to_string())),
                        );
                        row
                    }
                }
            }
        };
        rows.push(row);
    }
    for (i, s) in scene.strips.iter().enumerate() {
        let mut row = Row::new(format!("strips[{i}]: zone area = 2 pi width"), TOLERANCE);
        let clipped = (s.offset_high.min(1.0) - s.offset_low.max(-1.0)).max(0.0);
        row.push(hatbox_zone_area(&ZoneSpec::clipped(*s), Method::Quadrature).map(|a| (a - 2.0 * PI * clipped).abs()));
        rows.push(row);
    }

    let rows: Vec<OracleRow> = rows.into_iter().map(Row::finish).collect();
    let all_pass = rows.iter().all(|r| r.passed);

    let mut text = String::new();
    writeln!(text, "oracle comparison for r = {r}, R = {big_r} (grid {grid}, seed {seed})").unwrap();
    for row in &rows {
        let status = if row.passed { "ok  " } else { "FAIL" };
        write!(text, "{status} {:<52} n={:<4} max {:>9.2e}  tol {:.0e}", row.identity, row.samples, row.max_residual, row.tolerance).unwrap();
        if let Some(e) = &row.error {
            write!(text, "  error: {e}").unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "{}", if all_pass { "all identities within tolerance" } else { "some identities out of tolerance" }).unwrap();

    Report {
        text,
        json: json!({"config": c, "grid": grid, "seed": seed, "rows": rows, "passed": all_pass}),
        exit: if all_pass { Exit::Ok } else { Exit::Violation },
    }
}
