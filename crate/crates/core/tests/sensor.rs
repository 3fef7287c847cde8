use fluxforge_core::field::ModelField;
use fluxforge_core::sensor::{
    alignment, langevin, render_response, temporal_filter, Mechanisms, ParticleSpec, Regime, RelaxationReport,
    SensorSpec,
};
use fluxforge_core::{Rotation, Vec3};

#[test]
fn macroscopic_particle_is_frozen() {
    let rep = RelaxationReport::compute(&ParticleSpec::magnetite(20e-6), Mechanisms::Brownian, 60.0).unwrap();
    assert!((1.6e-5..1.8e-5).contains(&rep.delta), "{}", rep.delta);
    assert_eq!(rep.regime, Regime::MacroscopicFrozen);
    assert!(rep.tau_n.is_infinite());
}

#[test]
fn film_particle_is_quantum_active_with_neel() {
    let rep = RelaxationReport::compute(&ParticleSpec::ferrolens_default(), Mechanisms::Combined, 60.0).unwrap();
    assert!((5e8..2e9).contains(&rep.delta), "{}", rep.delta);
    assert_eq!(rep.regime, Regime::QuantumActive);
    assert!(rep.tau_eff <= rep.tau_b.min(rep.tau_n));
}

#[test]
fn coating_and_viscosity_slow_brownian_relaxation() {
    let base = ParticleSpec::magnetite(10e-9);
    let coated = ParticleSpec { coating: 5e-9, ..base };
    let thick = ParticleSpec { viscosity: 2.0 * base.viscosity, ..base };
    let t = |s: &ParticleSpec| RelaxationReport::compute(s, Mechanisms::Brownian, 60.0).unwrap().tau_b;
    assert!((t(&coated) / t(&base) - 3.375).abs() < 1e-9);
    assert!((t(&thick) / t(&base) - 2.0).abs() < 1e-9);
}

#[test]
fn langevin_limits() {
    assert!(langevin(0.0).abs() < 1e-15);
    let reference = [
        (1e-6, 3.333_333_333_333_111e-7),
        (1e-3, 3.333_333_111_111_132e-4),
        (0.05, 1.666_388_955_009_925e-2),
        (0.099, 3.297_845_790_706_68e-2),
        (0.1, 3.331_113_225_398_961e-2),
        (0.5, 1.639_534_137_386_528e-1),
    ];
    for (x, l) in reference {
        assert!((langevin(x) / l - 1.0).abs() < 1e-13, "{x}");
    }
    assert!((langevin(100.0) - 0.99).abs() < 1e-12);
    assert!((langevin(-3.0) + langevin(3.0)).abs() < 1e-15);
    let strong = alignment(&Vec3::new(0.0, 0.0, 1.0), &ParticleSpec::ferrolens_default());
    let weak = alignment(&Vec3::new(0.0, 0.0, 0.01), &ParticleSpec::ferrolens_default());
    assert!(strong > weak && strong < 1.0 && weak > 0.0);
}

#[test]
fn filter_tracks_a_step_with_the_expected_time_constant() {
    let mut step = vec![1.0; 400];
    step[0] = 0.0;
    let out = temporal_filter(&step, 1e-3, 10.0).unwrap();
    assert!(out.windows(2).all(|w| w[1] >= w[0]));
    let tau_steps = 1.0 / (std::f64::consts::TAU * 10.0 * 1e-3);
    assert!((out[399] - 1.0).abs() < 1e-6);
    assert!((out[1] - (1.0 - (-1.0 / tau_steps).exp())).abs() < 1e-15);
    let fast = temporal_filter(&step, 1e-3, 1e9).unwrap();
    assert_eq!(fast, step);
    assert!(temporal_filter(&step, 0.0, 1.0).is_err());
}

#[test]
fn uniform_field_renders_a_constant_angle() {
    let field = ModelField::Uniform { b: Vec3::new(0.0, 0.05, 0.0) };
    let particle = ParticleSpec::ferrolens_default();
    let sensor = SensorSpec::new(Vec3::zeros(), 16, 16, 1e-3);
    let img = render_response(&field, &sensor, &particle).unwrap();
    assert_eq!(img.mask_count(), 0);
    assert!(img.angle.iter().all(|a| (a - std::f64::consts::FRAC_PI_2).abs() < 1e-12));

    let mut turned = sensor.clone();
    turned.orientation = Rotation::from_xyz_deg([0.0, 0.0, 90.0]).unwrap();
    let img = render_response(&field, &turned, &particle).unwrap();
    assert!(img.angle.iter().all(|a| a.abs() < 1e-12 || (a - std::f64::consts::TAU).abs() < 1e-12));

    let weak = ModelField::Uniform { b: Vec3::new(0.0, 0.001, 0.0) };
    assert_eq!(render_response(&weak, &sensor, &particle).unwrap().mask_count(), 256);
}
