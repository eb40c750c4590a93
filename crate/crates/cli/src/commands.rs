//! Subcommand implementations. Each returns a [`Report`] holding both the
//! human-readable text and the JSON form, plus the exit status.

use std::fmt::Write as _;

use plankcov::{
    certify_angular, certify_plank, check_coverage, coverage::DEFAULT_RADIAL_STEPS, regularize, AngularDomain, CertifyError, CoverageError,
    CoverageReport, Measure, MeasureError, Method, PointXY, RadialProfile, RegularWedge, Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::scene::{Scene, SceneDomain, SceneError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Exit {
    Ok = 0,
    NotCovered = 1,
    Input = 2,
    Violation = 3,
    Io = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CommandError {
    pub fn exit(&self) -> Exit {
        match self {
            CommandError::Io { .. } => Exit::Io,
            _ => Exit::Input,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: Exit,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Closed,
    Quad,
    Both,
}

impl MethodChoice {
    fn closed(self) -> bool {
        self != MethodChoice::Quad
    }

    fn quad(self) -> bool {
        self != MethodChoice::Closed
    }
}

#[derive(Debug, Clone, Serialize)]
struct MeasureRow {
    index: usize,
    kind: &'static str,
    angle: f64,
    closed: Option<f64>,
    quadrature: Option<f64>,
    error_estimate: Option<f64>,
}

/// The regular wedge equal to `d` on `T`, if `d` has its vertex on `K` and
/// both halflines meet `k`.
pub fn as_regular_wedge(scene: &Scene, d: &AngularDomain) -> Option<RegularWedge> {
    let big_r = scene.config.outer_radius();
    if (d.vertex.norm() - big_r).abs() > 1e-12 * big_r {
        return None;
    }
    let w = regularize(&scene.config, d).ok()?.regular;
    let a = w.to_angular();
    let turn = (a.start_angle - d.start_angle).sin().abs() + (1.0 - (a.start_angle - d.start_angle).cos());
    (turn <= 1e-10 && (a.sweep - d.sweep).abs() <= 1e-10).then_some(w)
}

pub fn measure(scene: &Scene, method: MethodChoice, tol: f64) -> Result<Report, CommandError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CommandError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let m = Measure::new(scene.config).with_tolerance(tol);
    let mut rows = Vec::new();
    for (index, d) in scene.domains.iter().enumerate() {
        let angular = d.angular();
        let mut row = MeasureRow {
            index,
            kind: d.kind(),
            angle: angular.sweep,
            closed: None,
            quadrature: None,
            error_estimate: None,
        };
        let wedge = match d {
            SceneDomain::Regular(g) => Some(g.as_wedge()),
            SceneDomain::Angular(a) => as_regular_wedge(scene, a),
        };
        if method.closed() {
            row.closed = wedge.map(|w| m.mu_wedge(&w, Method::ClosedForm)).transpose()?.map(|v| v.value);
        }
        if method.quad() {
            let q = match d {
                SceneDomain::Regular(g) => m.mu_regular(g, Method::Quadrature)?,
                SceneDomain::Angular(a) => m.mu_region(&RadialProfile::from_domain(*a), tol)?,
            };
            row.quadrature = Some(q.value);
            row.error_estimate = Some(q.error_estimate);
        }
        rows.push(row);
    }
    let mut strip_rows = Vec::new();
    if method.quad() {
        for (index, s) in scene.strips.iter().enumerate() {
            let q = m.mu_region(&RadialProfile::from_strip(*s), tol)?;
            strip_rows.push(json!({"index": index, "width": s.width(), "quadrature": q.value, "error_estimate": q.error_estimate}));
        }
    }
    let disc_quad = if method.quad() { Some(m.mu_disc_quadrature()?) } else { None };

    let mut text = String::new();
    let c = &scene.config;
    writeln!(text, "annulus r = {}, R = {}", c.inner_radius(), c.outer_radius()).unwrap();
    write!(text, "mu(T) = {:.12} [closed]", m.mu_disc()).unwrap();
    if let Some(q) = &disc_quad {
        write!(text, "  {:.12} +- {:.1e} [quadrature]", q.value, q.error_estimate).unwrap();
    }
    text.push('\n');
    if !rows.is_empty() {
        writeln!(text, "{:>4}  {:<8} {:>15} {:>17} {:>17} {:>9}", "#", "kind", "angle", "closed", "quadrature", "err").unwrap();
    }
    let cell = |v: Option<f64>, prec: usize| v.map_or_else(|| "-".to_string(), |x| format!("{x:.prec$}"));
    for row in &rows {
        writeln!(
            text,
            "{:>4}  {:<8} {:>15.12} {:>17} {:>17} {:>9}",
            row.index,
            row.kind,
            row.angle,
            cell(row.closed, 14),
            cell(row.quadrature, 14),
            row.error_estimate.map_or_else(|| "-".to_string(), |e| format!("{e:.1e}")),
        )
        .unwrap();
    }
    for s in &strip_rows {
        writeln!(text, "strip {:>2}  width {:.12}  mu {:.14}", s["index"], s["width"].as_f64().unwrap(), s["quadrature"].as_f64().unwrap()).unwrap();
    }

    let json = json!({
        "config": scene.config,
        "disc": {"closed": m.mu_disc(), "quadrature": disc_quad.map(|q| q.value), "error_estimate": disc_quad.map(|q| q.error_estimate)},
        "domains": rows,
        "strips": strip_rows,
    });
    Ok(Report { text, json, exit: Exit::Ok })
}

fn coverage_text(text: &mut String, report: &CoverageReport) {
    match report.witness {
        None => writeln!(text, "covered: yes ({} radii checked)", report.radii_checked).unwrap(),
        Some(PointXY { x, y }) => writeln!(
            text,
            "covered: no\nwitness: ({x:.15}, {y:.15}) at radius {:.15}\ngap: {:.3e} rad",
            (PointXY { x, y }).norm(),
            report.min_slack
        )
        .unwrap(),
    }
}

pub fn check_coverage_cmd(scene: &Scene, radial_steps: usize) -> Result<Report, CommandError> {
    let report = check_coverage(&scene.config, &scene.angular_domains(), &scene.strips, radial_steps)?;
    let mut text = String::new();
    coverage_text(&mut text, &report);
    let exit = if report.covered { Exit::Ok } else { Exit::NotCovered };
    Ok(Report {
        text,
        json: json!({ "coverage": report }),
        exit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Angular,
    Plank,
}

fn verdict_exit(v: Verdict) -> Exit {
    match v {
        Verdict::Holds => Exit::Ok,
        Verdict::NotAsserted => Exit::NotCovered,
        Verdict::Violated => Exit::Violation,
    }
}

pub fn certify(scene: &Scene, theorem: Theorem, radial_steps: usize) -> Result<Report, CommandError> {
    let mut text = String::new();
    let (json, verdict) = match theorem {
        Theorem::Angular => {
            let cert = certify_angular(&scene.config, &scene.angular_domains(), radial_steps)?;
            writeln!(text, "theorem: angular").unwrap();
            writeln!(text, "sum of angles: {:.15}", cert.sum_angles).unwrap();
            writeln!(text, "view angle:    {:.15}", cert.view_angle).unwrap();
            writeln!(text, "regularized:   {:.15}", cert.regularized_sum).unwrap();
            writeln!(text, "sum mu(D cap T): {:.15}", cert.chain.sum_measures).unwrap();
            coverage_text(&mut text, &cert.coverage);
            writeln!(text, "slack: {:.3e}", cert.slack).unwrap();
            (json!({"theorem": "angular", "certificate": cert}), cert.verdict)
        }
        Theorem::Plank => {
            let cert = certify_plank(&scene.strips, radial_steps)?;
            writeln!(text, "theorem: plank").unwrap();
            writeln!(text, "sum of widths: {:.15}", cert.sum_widths).unwrap();
            writeln!(text, "bound:         {:.15}", cert.bound).unwrap();
            writeln!(text, "zone residual: {:.3e}", cert.zone_residual).unwrap();
            coverage_text(&mut text, &cert.coverage);
            writeln!(text, "slack: {:.3e}", cert.slack).unwrap();
            if cert.coverage.covered && cert.slack.abs() <= plankcov::certify::INEQUALITY_SLACK {
                writeln!(text, "equality: the widths sum to the bound").unwrap();
            }
            (json!({"theorem": "plank", "certificate": cert}), cert.verdict)
        }
    };
    let line = match verdict {
        Verdict::Holds => "verdict: inequality holds",
        Verdict::NotAsserted => "verdict: family does not cover, nothing asserted",
        Verdict::Violated => "verdict: INEQUALITY VIOLATED",
    };
    writeln!(text, "{line}").unwrap();
    Ok(Report {
        text,
        json,
        exit: verdict_exit(verdict),
    })
}

pub fn default_radial_steps() -> usize {
    DEFAULT_RADIAL_STEPS
}

/// Every `{"x": .., "y": ..}` object stored under a `witness` key.
pub fn collect_witnesses(value: &Value) -> Vec<PointXY> {
    let mut out = Vec::new();
    walk(value, &mut out);
    out
}

fn walk(value: &Value, out: &mut Vec<PointXY>) {
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if key == "witness" {
                    if let Ok(p) = serde_json::from_value::<PointXY>(v.clone()) {
                        out.push(p);
                        continue;
                    }
                }
                walk(v, out);
            }
        }
        Value::Array(items) => items.iter().for_each(|v| walk(v, out)),
        _ => {}
    }
}
