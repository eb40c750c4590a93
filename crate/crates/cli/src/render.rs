//! Deterministic SVG rendering of a scene.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use plankcov::{AngularDomain, PointXY, Strip};

use crate::commands::CommandError;
use crate::scene::Scene;

const DOMAIN_COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').trim_matches(|c| c == '0' || c == '.').is_empty() {
        "0".to_string()
    } else {
        s
    }
}

fn polygon(points: &[PointXY], attrs: &str) -> String {
    let pts: Vec<String> = points.iter().map(|p| format!("{},{}", num(p.x), num(p.y))).collect();
    format!("<polygon points=\"{}\" {attrs}/>", pts.join(" "))
}

// wedge cut off far outside the view box
fn wedge_polygon(d: &AngularDomain, reach: f64) -> Vec<PointXY> {
    let steps = ((d.sweep / 0.05).ceil() as usize).max(1);
    let mut pts = vec![d.vertex];
    for i in 0..=steps {
        let a = d.start_angle + d.sweep * i as f64 / steps as f64;
        pts.push(d.vertex + reach * PointXY::unit(a));
    }
    pts
}

fn strip_polygon(s: &Strip, reach: f64) -> Vec<PointXY> {
    let n = s.normal();
    let u = PointXY::new(-n.y, n.x);
    vec![
        s.offset_low * n - reach * u,
        s.offset_low * n + reach * u,
        s.offset_high * n + reach * u,
        s.offset_high * n - reach * u,
    ]
}

/// SVG document of side `resolution` pixels.
pub fn render_svg(scene: &Scene, witnesses: &[PointXY], resolution: u32) -> String {
    let c = &scene.config;
    let big_r = c.outer_radius();
    let extent = 1.15
        * scene
            .domains
            .iter()
            .map(|d| d.angular().vertex.norm())
            .chain(witnesses.iter().map(|w| w.norm()))
            .fold(big_r, f64::max);
    let reach = 8.0 * extent;
    let stroke = extent / 300.0;

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{resolution}" height="{resolution}" viewBox="{} {} {} {}">"#,
        num(-extent),
        num(-extent),
        num(2.0 * extent),
        num(2.0 * extent)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<defs><clipPath id="view"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        num(-extent),
        num(-extent),
        num(2.0 * extent),
        num(2.0 * extent)
    )
    .unwrap();
    writeln!(svg, r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##, num(-extent), num(-extent), num(2.0 * extent), num(2.0 * extent)).unwrap();
    writeln!(svg, r#"<g transform="scale(1,-1)" clip-path="url(#view)">"#).unwrap();
    for (i, s) in scene.strips.iter().enumerate() {
        let attrs = format!(r##"class="strip" fill="#7f7f7f" fill-opacity="0.25" stroke="#555555" stroke-width="{}" data-index="{i}""##, num(stroke));
        writeln!(svg, "{}", polygon(&strip_polygon(s, reach), &attrs)).unwrap();
    }
    for (i, d) in scene.domains.iter().enumerate() {
        let color = DOMAIN_COLORS[i % DOMAIN_COLORS.len()];
        let attrs = format!(
            r#"class="domain {}" fill="{color}" fill-opacity="0.3" stroke="{color}" stroke-width="{}" data-index="{i}""#,
            d.kind(),
            num(stroke)
        );
        writeln!(svg, "{}", polygon(&wedge_polygon(&d.angular(), reach), &attrs)).unwrap();
    }
    writeln!(
        svg,
        r##"<circle class="outer" cx="0" cy="0" r="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
        num(big_r),
        num(stroke)
    )
    .unwrap();
    writeln!(
        svg,
        r##"<circle class="inner" cx="0" cy="0" r="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
        num(c.inner_radius()),
        num(2.0 * stroke)
    )
    .unwrap();
    for w in witnesses {
        writeln!(
            svg,
            r##"<circle class="witness" cx="{}" cy="{}" r="{}" fill="#e00000" stroke="#000000" stroke-width="{}"/>"##,
            num(w.x),
            num(w.y),
            num(4.0 * stroke),
            num(0.5 * stroke)
        )
        .unwrap();
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CommandError> {
    let io = |context: String| move |source| CommandError::Io { context, source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(format!("creating temporary file in {}", dir.display())))?;
    tmp.write_all(contents).map_err(io(format!("writing {}", path.display())))?;
    tmp.persist(path).map_err(|e| CommandError::Io {
        context: format!("replacing {}", path.display()),
        source: e.error,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    #[test]
    fn zero_domain_scene_has_circles_only() {
        let scene = parse_scene(r#"{"version": 1, "config": {"r": 1, "R": 2}}"#).unwrap();
        let svg = render_svg(&scene, &[], 400);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn number_format_drops_negative_zero() {
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(-1e-9), "0");
        assert_eq!(num(1.5), "1.500000");
    }
}
