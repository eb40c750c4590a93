//! Shared scenes for the criterion benchmarks.

use plankcov::{AngularDomain, AnnulusConfig, RegularWedge, Strip};

pub fn default_config() -> AnnulusConfig {
    AnnulusConfig::new(1.0, 2.0).expect("valid annulus")
}

/// `pieces` wedges at one vertex tiling the whole view cone.
pub fn view_fan(config: &AnnulusConfig, vertex_angle: f64, pieces: usize) -> Vec<AngularDomain> {
    let e = config.epsilon();
    (0..pieces)
        .map(|k| {
            let lo = -e + 2.0 * e * k as f64 / pieces as f64;
            let hi = -e + 2.0 * e * (k + 1) as f64 / pieces as f64;
            RegularWedge::new(*config, vertex_angle, lo, hi).expect("offsets in range").to_angular()
        })
        .collect()
}

/// Strips of equal width tiling `[-1, 1]` across the given normal.
pub fn plank_tiling(count: usize, normal_angle: f64) -> Vec<Strip> {
    let w = 2.0 / count as f64;
    (0..count)
        .map(|i| Strip::new(normal_angle, -1.0 + w * i as f64, -1.0 + w * (i + 1) as f64).expect("ordered offsets"))
        .collect()
}
