use std::f64::consts::TAU;

use fluxforge_core::analysis::{
    conservativity_report, default_loops, fit_log_spiral, parse_trace, search_origin, to_polar, work_integral,
    LoopPath, Region, Tolerances, Trace, TraceUnit,
};
use fluxforge_core::field::{default_fd_step, FnField};
use fluxforge_core::sources::presets::{build_halbach_linear, build_single_cube, HalbachParams};
use fluxforge_core::{Vec3, VectorField};

fn spiral_points(a: f64, b: f64, center: [f64; 2], n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let t = 1.5 * TAU * i as f64 / (n - 1) as f64;
            let r = a * (b * t).exp();
            [center[0] + r * t.cos(), center[1] + r * t.sin()]
        })
        .collect()
}

fn region(center: Vec3, l: f64) -> Region {
    Region { center, inner_radius: 3.0 * l, outer_radius: 5.0 * l, samples: 300 }
}

#[test]
fn exact_spiral_is_recovered() {
    let trace = Trace::new(spiral_points(2.0, 0.15, [0.0, 0.0], 120), TraceUnit::Pixel).unwrap();
    let fit = fit_log_spiral(&to_polar(&trace, [0.0, 0.0]).unwrap()).unwrap();
    assert!((fit.b - 0.15).abs() < 1e-12);
    assert!((fit.a - 2.0).abs() < 1e-11);
    assert!(fit.r_squared > 1.0 - 1e-12);
}

#[test]
fn clockwise_spiral_has_negative_pitch() {
    let pts: Vec<[f64; 2]> = spiral_points(1.0, 0.2, [0.0, 0.0], 80).into_iter().map(|[x, y]| [x, -y]).collect();
    let fit = fit_log_spiral(&to_polar(&Trace::new(pts, TraceUnit::Meter).unwrap(), [0.0, 0.0]).unwrap()).unwrap();
    assert!((fit.b + 0.2).abs() < 1e-12);
}

#[test]
fn origin_search_finds_an_offset_center() {
    let center = [3.0, -2.0];
    let trace = Trace::new(spiral_points(1.0, 0.1, center, 200), TraceUnit::Pixel).unwrap();
    let (origin, fit) = search_origin(&trace, [2.5, -1.5], 1.0, 8).unwrap();
    assert!((origin[0] - center[0]).hypot(origin[1] - center[1]) < 1e-2);
    assert!((fit.b - 0.1).abs() < 1e-3);
}

#[test]
fn trace_csv_parsing() {
    let t = parse_trace("x,y\n1,0\n0,1\n-1,0\n0,-1\n2,0\n0,2\n-2,0\n0,-2\n", TraceUnit::Pixel).unwrap();
    assert_eq!(t.points().len(), 8);
    assert!(parse_trace("x;y\n1;2\n", TraceUnit::Pixel).is_err());
    assert!(parse_trace("x,y\n1,nan\n", TraceUnit::Pixel).is_err());
}

#[test]
fn magnet_fields_pass_every_check() {
    for a in [build_single_cube(1e-2, 1.32, 5).unwrap(), build_halbach_linear(&HalbachParams::default()).unwrap()] {
        let l = a.diameter();
        let loops = default_loops(a.center(), 4.0 * l).unwrap();
        let rep =
            conservativity_report(&a, &region(a.center(), l), &loops, l, default_fd_step(l), &Tolerances::default())
                .unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.closed_loop_work.unwrap() < 1e-12);
    }
}

#[test]
fn rotational_field_fails_curl_and_potential_checks() {
    let swirl = FnField(|p: &Vec3| Vec3::new(-p.y, p.x, 0.0));
    let loops = default_loops(Vec3::zeros(), 0.4).unwrap();
    let rep =
        conservativity_report(&swirl, &region(Vec3::zeros(), 0.1), &loops, 0.1, 1e-5, &Tolerances::default()).unwrap();
    assert!(!rep.passed());
    let failed: Vec<&str> = rep.checks.iter().filter(|c| c.passed == Some(false)).map(|c| c.name).collect();
    assert!(failed.contains(&"curl_h"), "{failed:?}");
    assert!(failed.contains(&"potential_gradient"), "{failed:?}");
    assert!(rep.closed_loop_work.unwrap() < 1e-12, "magnetic force never does work");
}

#[test]
fn gradient_field_does_no_work_on_any_loop() {
    let grad = FnField(|p: &Vec3| Vec3::new(2.0 * p.x * p.y, p.x * p.x + p.z, p.y));
    let path = LoopPath::circle(Vec3::new(0.3, -0.1, 0.2), Vec3::new(1.0, 2.0, 0.5), 0.7).unwrap();
    let w = work_integral(|p: &Vec3, _: &Vec3| grad.field(p), &path, 1024, |_: &Vec3| 1.0).unwrap();
    assert!(w.work.abs() < 1e-12 && w.refined.abs() < 1e-12, "{w:?}");
}
