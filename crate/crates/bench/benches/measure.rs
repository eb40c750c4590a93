use criterion::{black_box, criterion_group, criterion_main, Criterion};
use plankcov::{certify_plank, check_coverage, hatbox_zone_area, integrate, make_regular, Measure, Method, RadialProfile, SingularityHint, Strip, ZoneSpec};
use plankcov_bench::{default_config, plank_tiling, view_fan};

fn quadrature(c: &mut Criterion) {
    c.bench_function("integrate_inverse_sqrt_upper", |b| {
        b.iter(|| integrate(|x| 1.0 / (1.0 - x).sqrt(), 0.0, black_box(1.0), 1e-10, SingularityHint::UPPER).unwrap())
    });
}

fn measure(c: &mut Criterion) {
    let config = default_config();
    let m = Measure::new(config);
    let domain = make_regular(config, 0.3, 1, 0.7).unwrap();
    c.bench_function("mu_regular_quadrature", |b| b.iter(|| m.mu_regular(black_box(&domain), Method::Quadrature).unwrap()));
    let profile = RadialProfile::from_domain(domain.to_angular());
    c.bench_function("mu_region_single_wedge", |b| b.iter(|| m.mu_region(black_box(&profile), 1e-10).unwrap()));
    c.bench_function("radial_profile_near_edge", |b| b.iter(|| m.radial_profile_integral(black_box(0.999), Method::Quadrature).unwrap()));
}

fn coverage(c: &mut Criterion) {
    let config = default_config();
    let fan = view_fan(&config, 0.4, 8);
    c.bench_function("check_coverage_fan8_512", |b| b.iter(|| check_coverage(&config, black_box(&fan), &[], 512).unwrap()));
    let planks = plank_tiling(6, 0.3);
    c.bench_function("certify_plank_6", |b| b.iter(|| certify_plank(black_box(&planks), 512).unwrap()));
    let zone = ZoneSpec::new(Strip::new(1.0, 0.1, 0.4).unwrap());
    c.bench_function("hatbox_zone_quadrature", |b| b.iter(|| hatbox_zone_area(black_box(&zone), Method::Quadrature).unwrap()));
}

criterion_group!(benches, quadrature, measure, coverage);
criterion_main!(benches);
