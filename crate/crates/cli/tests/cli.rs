use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use fluxforge_core::{b_dipole, Vec3};

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fluxforge"));
    cmd.args(args).current_dir(dir).env_remove("FLUXFORGE_OUT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("failed to launch fluxforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.split_once('=').filter(|(k, _)| k.trim() == key).map(|(_, v)| v.trim().to_string()))
        .unwrap_or_else(|| panic!("`{key}` missing from:\n{text}"))
}

fn num(text: &str, key: &str) -> f64 {
    value(text, key).parse().unwrap()
}

fn write_spiral(path: &Path, b: f64, n: usize) {
    let mut s = String::from("x,y\n");
    for i in 0..n {
        let t = 2.0 * TAU * i as f64 / (n - 1) as f64;
        let r = (b * t).exp();
        s.push_str(&format!("{:e},{:e}\n", r * t.cos(), r * t.sin()));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn ring_preset_has_twelve_magnets() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["assembly", "build", "--preset", "ring", "--n", "12", "--skew-deg", "15", "--out-dir", "o"],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "magnets"), "12");
    let text = std::fs::read_to_string(dir.path().join("o/ring.asm")).unwrap();
    assert_eq!(text.matches("[magnet]").count(), 12);
    let csv = std::fs::read_to_string(dir.path().join("o/ring_dipoles.csv")).unwrap();
    assert!(csv.starts_with("x_m,y_m,z_m,mx_Am2,my_Am2,mz_Am2\n"));
}

#[test]
fn lattice_and_grid_presets() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["assembly", "build", "--preset", "lattice", "--count", "19", "--out-dir", "o"], &[]);
    assert_eq!(value(&stdout(&o), "magnets"), "19");
    let o = run_in(
        dir.path(),
        &["assembly", "build", "--preset", "grid", "--pattern", "checkerboard", "--out-dir", "o"],
        &[],
    );
    let out = stdout(&o);
    assert_eq!(value(&out, "magnets"), "16");
    assert!(num(&out, "total_moment_norm_Am2") < 1e-12);
}

#[test]
fn unsupported_preset_options_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["assembly", "build", "--preset", "lattice", "--count", "7"][..],
        &["assembly", "build", "--preset", "ring", "--pattern", "checkerboard"],
        &["assembly", "build", "--preset", "grid", "--pattern", "stripes"],
        &["assembly", "build", "--preset", "nonsense"],
        &["assembly", "build"],
        &["field", "frobnicate"],
    ] {
        let o = run_in(dir.path(), args, &[]);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn sample_matches_closed_form_dipole() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.asm"), "[dipole]\npos_mm = 0,0,0\nmoment_Am2 = 0.1,0,1\n").unwrap();
    let o = run_in(
        dir.path(),
        &["field", "sample", "--assembly", "d.asm", "--at", "0,0,0.01", "--at", "0.02,-0.01,0.005"],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x_m,y_m,z_m,bx_T,by_T,bz_T"));
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let p = Vec3::new(v[0], v[1], v[2]);
        let exact = b_dipole(&Vec3::new(0.1, 0.0, 1.0), &Vec3::zeros(), &p).unwrap();
        for k in 0..3 {
            assert!((v[3 + k] - exact[k]).abs() <= 1e-8 * exact.norm(), "{line}");
        }
    }
}

#[test]
fn missing_assembly_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["field", "map", "--assembly", "nope.asm", "--plane", "z=0.01"], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cannot read assembly file nope.asm"));
}

#[test]
fn sampling_inside_a_magnet_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["assembly", "build", "--preset", "cube", "--out-dir", "o"], &[]);
    let o = run_in(dir.path(), &["field", "sample", "--assembly", "o/cube.asm", "--at", "0,0,0"], &[]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("exclusion zone"));
}

#[test]
fn malformed_description_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.asm"), "[magnet]\nshape = cube\ndims_mm = 1,1,1\ncolour = red\n").unwrap();
    let o = run_in(dir.path(), &["field", "sample", "--assembly", "bad.asm", "--at", "0,0,1"], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn field_map_writes_grid_exports() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["assembly", "build", "--preset", "cube", "--out-dir", "o"], &[]);
    let o = run_in(
        dir.path(),
        &[
            "field",
            "map",
            "--assembly",
            "o/cube.asm",
            "--plane",
            "z=0.02",
            "--nx",
            "17",
            "--ny",
            "13",
            "--out-dir",
            "o",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let pgm = std::fs::read(dir.path().join("o/field_map.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n17 13\n255\n"));
    assert_eq!(pgm.len(), b"P5\n17 13\n255\n".len() + 17 * 13);
    let csv = std::fs::read_to_string(dir.path().join("o/field_map.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 17 * 13);
    let side = std::fs::read_to_string(dir.path().join("o/field_map.txt")).unwrap();
    assert!(side.contains("quantity=magnitude"));
    assert_eq!(value(&stdout(&o), "local_maxima"), "1");
}

#[test]
fn uniform_field_traces_one_straight_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "streamline",
            "trace",
            "--model",
            "uniform b_T=0.1,0.1,0",
            "--seed",
            "0,0,0",
            "--bounds-half",
            "0.1",
            "--out-dir",
            "o",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("o/streamlines.csv")).unwrap();
    let pts: Vec<Vec<f64>> =
        csv.lines().skip(1).map(|l| l.split(',').skip(2).map(|c| c.parse().unwrap()).collect()).collect();
    assert!(pts.len() > 10);
    for p in &pts {
        assert!((p[0] - p[1]).abs() < 1e-8 && p[2] == 0.0);
    }
    let summary = std::fs::read_to_string(dir.path().join("o/streamlines_summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.contains("left_bounds"));
}

#[test]
fn zero_field_seed_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "streamline",
            "trace",
            "--model",
            "uniform b_T=0,0,0",
            "--seed",
            "0,0,0",
            "--bounds-half",
            "1",
            "--out-dir",
            "o",
        ],
        &[],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("degenerate seed"));
}

#[test]
fn spiral_ring_of_seeds_fits_pitch() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "streamline",
            "trace",
            "--model",
            "spiral pitch=0.2 core_radius_mm=1",
            "--ring-center",
            "0,0,0",
            "--ring-radius",
            "0.004",
            "--ring-count",
            "8",
            "--bounds-half",
            "0.05",
            "--step",
            "5e-5",
            "--export-xy",
            "--out-dir",
            "o",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "lines"), "8");
    for k in 0..8 {
        let trace = format!("o/streamlines_line{k}_xy.csv");
        let f =
            run_in(dir.path(), &["analyze", "fit-spiral", "--trace", &trace, "--origin", "0,0", "--out-dir", "o"], &[]);
        assert_eq!(code(&f), 0, "{}", stderr(&f));
        let b = num(&stdout(&f), "b");
        assert!((b / 0.2 - 1.0).abs() < 0.01, "line {k}: b = {b}");
    }
}

#[test]
fn relax_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["sensor", "relax", "--radius-um", "20", "--eta-cP", "2.4", "--temp-K", "300", "--out-dir", "o"],
        &[],
    );
    let out = stdout(&o);
    let delta = num(&out, "delta_Hz");
    assert!((delta / 1.7e-5 - 1.0).abs() < 0.03, "{delta}");
    assert_eq!(value(&out, "regime"), "macroscopic_frozen");
    assert_eq!(value(&out, "mechanisms"), "brownian");
    let report = std::fs::read_to_string(dir.path().join("o/relaxation.txt")).unwrap();
    assert!(out.ends_with(&report));

    let o = run_in(dir.path(), &["sensor", "relax", "--radius-nm", "5", "--neel", "--out-dir", "o"], &[]);
    let out = stdout(&o);
    let delta = num(&out, "delta_Hz");
    assert!((5e8..2e9).contains(&delta), "{delta}");
    assert_eq!(value(&out, "regime"), "quantum_active");
}

#[test]
fn neel_only_overflow_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["sensor", "relax", "--radius-um", "20", "--mechanism", "neel", "--out-dir", "o"], &[]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("blocked"));
    let o = run_in(dir.path(), &["sensor", "relax", "--radius-um", "-3"], &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn render_without_sources_is_fully_masked() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["sensor", "render", "--nx", "16", "--ny", "16", "--out-dir", "o"], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "mask_count"), "256");
    let mag = std::fs::read(dir.path().join("o/response_magnitude.pgm")).unwrap();
    let header = b"P5\n16 16\n255\n";
    assert!(mag.starts_with(header) && mag[header.len()..].iter().all(|&p| p == 0));
}

#[test]
fn render_through_a_magnet_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["assembly", "build", "--preset", "cube", "--out-dir", "o"], &[]);
    let o = run_in(
        dir.path(),
        &["sensor", "render", "--assembly", "o/cube.asm", "--center", "0,0,0", "--pitch", "1e-3", "--out-dir", "o"],
        &[],
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn filter_pass_and_usage() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.csv"), "value\n1\n2\n3\n").unwrap();
    let o = run_in(
        dir.path(),
        &["sensor", "filter", "--input", "s.csv", "--dt", "0.1", "--delta", "1e12", "--out-dir", "o"],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("o/filtered.csv")).unwrap();
    assert_eq!(csv.lines().nth(3), Some("2,3.00000000e0,3.00000000e0"));
    std::fs::write(dir.path().join("bad.csv"), "volts\n1\n").unwrap();
    let o = run_in(dir.path(), &["sensor", "filter", "--input", "bad.csv", "--dt", "0.1", "--delta", "1"], &[]);
    assert_eq!(code(&o), 2);
    let o = run_in(dir.path(), &["sensor", "filter", "--input", "s.csv", "--dt", "-1", "--delta", "1"], &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn fit_spiral_exact_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    write_spiral(&dir.path().join("spiral.csv"), 0.2, 100);
    let o = run_in(
        dir.path(),
        &["analyze", "fit-spiral", "--trace", "spiral.csv", "--origin", "0,0", "--out-dir", "o"],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "b"), "2.00000000e-1");
    assert_eq!(value(&out, "a"), "1.00000000e0");
    let plot = std::fs::read_to_string(dir.path().join("o/spiral_fit_plot.csv")).unwrap();
    assert!(plot.starts_with("theta,r,ln_r,fit_ln_r\n"));
    assert_eq!(plot.lines().count(), 101);

    let o = run_in(
        dir.path(),
        &[
            "analyze",
            "fit-spiral",
            "--trace",
            "spiral.csv",
            "--origin",
            "0.05,0.05",
            "--search-origin",
            "--out-dir",
            "o",
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!((num(&stdout(&o), "b") - 0.2).abs() < 1e-3);

    let mut zig = String::from("x,y\n");
    for k in 0..12 {
        let t: f64 = if k % 2 == 0 { 0.1 * k as f64 } else { -0.1 * k as f64 };
        zig.push_str(&format!("{},{}\n", t.cos(), t.sin()));
    }
    std::fs::write(dir.path().join("zig.csv"), zig).unwrap();
    let o = run_in(dir.path(), &["analyze", "fit-spiral", "--trace", "zig.csv", "--origin", "0,0"], &[]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not a single arm"));

    std::fs::write(dir.path().join("short.csv"), "x,y\n1,0\n0,1\n").unwrap();
    let o = run_in(dir.path(), &["analyze", "fit-spiral", "--trace", "short.csv", "--origin", "0,0"], &[]);
    assert_eq!(code(&o), 2);
    let o = run_in(dir.path(), &["analyze", "fit-spiral", "--trace", "spiral.csv"], &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn conserve_cube_passes_and_strict_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["assembly", "build", "--preset", "cube", "--out-dir", "o", "--name", "cube"], &[]);
    let o = run_in(dir.path(), &["analyze", "conserve", "--assembly", "o/cube.asm", "--out-dir", "o"], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "verdict"), "passed");
    for check in ["divergence", "curl_h", "closed_loop_work", "curl_force", "potential_gradient"] {
        assert_eq!(value(&out, &format!("{check}_check")), "passed");
    }
    let o = run_in(
        dir.path(),
        &["analyze", "conserve", "--assembly", "o/cube.asm", "--tol-div", "1e-30", "--no-loops", "--out-dir", "o"],
        &[],
    );
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("divergence"));
    assert_eq!(value(&stdout(&o), "closed_loop_work"), "not_run");
    assert_eq!(value(&stdout(&o), "closed_loop_work_check"), "not_run");
}

#[test]
fn config_file_sets_options_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.ini"),
        "# shared\n[sensor relax]\nradius_um = 20\neta-cP = 2.4\nout-dir = cfg\n\n[analyze conserve]\nsamples = 10\n",
    )
    .unwrap();
    let o = run_in(dir.path(), &["--config", "run.ini", "sensor", "relax"], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!((num(&stdout(&o), "radius_m") - 2e-5).abs() < 1e-15);
    assert!(dir.path().join("cfg/relaxation.txt").exists());

    let o =
        run_in(dir.path(), &["sensor", "relax", "--radius-nm", "5", "--config", "run.ini", "--out-dir", "cli"], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!((num(&stdout(&o), "radius_m") - 5e-9).abs() < 1e-20);
    assert!(dir.path().join("cli/relaxation.txt").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("unknown_key.ini"), "[sensor relax]\nradius_parsecs = 1\n").unwrap();
    std::fs::write(dir.path().join("unknown_section.ini"), "[sensor dance]\nradius_um = 1\n").unwrap();
    std::fs::write(dir.path().join("syntax.ini"), "[sensor relax\n").unwrap();
    for file in ["unknown_key.ini", "unknown_section.ini", "syntax.ini", "missing.ini"] {
        let o = run_in(dir.path(), &["sensor", "relax", "--config", file], &[]);
        assert_eq!(code(&o), 2, "{file}: {}", stderr(&o));
    }
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["sensor", "relax"], &[("FLUXFORGE_OUT", "from_env")]);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("from_env/relaxation.txt").exists());
    run_in(dir.path(), &["sensor", "relax", "--out-dir", "from_flag"], &[("FLUXFORGE_OUT", "from_env2")]);
    assert!(dir.path().join("from_flag/relaxation.txt").exists());
    assert!(!dir.path().join("from_env2").exists());
    run_in(dir.path(), &["sensor", "relax"], &[]);
    assert!(dir.path().join("fluxforge-out/relaxation.txt").exists());
}

#[test]
fn help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["--help"], &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("assembly"));
}
