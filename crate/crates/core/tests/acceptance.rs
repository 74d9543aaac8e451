//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monoflow::catalog::{sample_ball, PlanarSpec, PotentialSpec};
use monoflow::field::{
    self, Constant, FiniteDifferenced, FnScalar, InverseDistance, Polynomial, QuaternionField, QuaternionPolynomial,
    ScalarAsQuaternion, ScalarField,
};
use monoflow::force::{self, FlowScenario, ForceMethod, MomentMethod};
use monoflow::planar::{blasius_force_2d, blasius_moment_2d, pressure_force_2d, reduce_and_compare, ComplexPotential};
use monoflow::potential::{monogenic_completion, velocity_from_potential, FlowPotential};
use monoflow::surface::{ClosedCurve, RegularBody};
use monoflow::theorems::{self, CauchyKernel};
use monoflow::{Quaternion, ReducedPoint};

type Outcome = Result<String, String>;

fn p(x: f64, y: f64, z: f64) -> ReducedPoint {
    ReducedPoint::new(x, y, z)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn random_ball_points(rng: &mut ChaCha8Rng, radius: f64, n: usize) -> Vec<ReducedPoint> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = p(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if x.norm() < 1.0 {
            out.push(x * radius);
        }
    }
    out
}

// ---------------------------------------------------------------------------

fn algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (a, b, c) = (random_quaternion(&mut rng), random_quaternion(&mut rng), random_quaternion(&mut rng));
        let scale = a.norm() * b.norm() * c.norm();
        let assoc = ((a * b) * c - a * (b * c)).norm() / scale;
        let conj = ((a * b).conj() - b.conj() * a.conj()).norm() / (a.norm() * b.norm());
        let norm = ((a * b).norm() - a.norm() * b.norm()).abs() / (a.norm() * b.norm());
        worst = worst.max(assoc).max(conj).max(norm);
    }
    ensure(worst <= 1e-12, || format!("worst relative error {worst:.2e}"))?;
    Ok(format!("10000 triples, worst relative error {worst:.2e}"))
}

fn harmonic_catalog() -> Vec<(&'static str, Arc<dyn ScalarField>)> {
    let poly = |t: &[(f64, [u32; 3])]| -> Arc<dyn ScalarField> { Arc::new(Polynomial::new(t.iter().copied())) };
    let exp_cos = FnScalar::new(|x| x.x.exp() * x.y.cos())
        .with_gradient(|x| p(x.x.exp() * x.y.cos(), -x.x.exp() * x.y.sin(), 0.0))
        .with_hessian(|x| {
            let (c, s) = (x.x.exp() * x.y.cos(), x.x.exp() * x.y.sin());
            [[c, -s, 0.0], [-s, -c, 0.0], [0.0, 0.0, 0.0]]
        });
    vec![
        ("x", poly(&[(1.0, [1, 0, 0])])),
        ("x^2-y^2", poly(&[(1.0, [2, 0, 0]), (-1.0, [0, 2, 0])])),
        ("xy", poly(&[(1.0, [1, 1, 0])])),
        ("xyz", poly(&[(1.0, [1, 1, 1])])),
        ("x^3-3xy^2", poly(&[(1.0, [3, 0, 0]), (-3.0, [1, 2, 0])])),
        ("2z^2-x^2-y^2", poly(&[(2.0, [0, 0, 2]), (-1.0, [2, 0, 0]), (-1.0, [0, 2, 0])])),
        ("1/|x-c|", Arc::new(InverseDistance::new(p(2.0, 0.5, -0.5)))),
        ("e^x cos y", Arc::new(exp_cos)),
    ]
}

fn operators() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let points = random_ball_points(&mut rng, 1.0, 100);
    let catalog = harmonic_catalog();
    let (mut worst_analytic, mut worst_fd) = (0.0f64, 0.0f64);
    for (name, u) in &catalog {
        let analytic = ScalarAsQuaternion(u.clone());
        let fd = FiniteDifferenced(ScalarAsQuaternion(u.clone()));
        for &x in &points {
            // u is harmonic, so both DD̄u and Δu must vanish
            let a = field::d_of_dbar(&analytic, x).map_err(err)?;
            let la = field::laplacian(&analytic, x).map_err(err)?;
            let f = field::d_of_dbar(&fd, x).map_err(err)?;
            let lf = field::laplacian(&fd, x).map_err(err)?;
            let ra = (a - la).norm().max(a.norm());
            let rf = (f - lf).norm().max(f.norm());
            ensure(ra <= 1e-10, || format!("{name}: analytic residual {ra:.2e} at {x}"))?;
            ensure(rf <= 1e-5, || format!("{name}: finite-difference residual {rf:.2e} at {x}"))?;
            worst_analytic = worst_analytic.max(ra);
            worst_fd = worst_fd.max(rf);
        }
    }
    let position = QuaternionPolynomial::position();
    let mut worst_position = 0.0f64;
    for &x in &points {
        let d = field::apply_d(&position, x).map_err(err)?;
        worst_position = worst_position.max((d + Quaternion::ONE).norm());
    }
    ensure(worst_position <= 1e-12, || format!("D(x+yi+zj) off by {worst_position:.2e}"))?;
    Ok(format!(
        "{} fields x 100 points, analytic {worst_analytic:.1e}, fd {worst_fd:.1e}, D(position)+1 {worst_position:.1e}",
        catalog.len()
    ))
}

fn completion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let points = random_ball_points(&mut rng, 0.95, 100);
    let probes = sample_ball(ReducedPoint::ORIGIN, 1.0, 16);
    let cases: Vec<(&str, Polynomial)> = vec![
        ("x", Polynomial::new([(1.0, [1, 0, 0])])),
        ("x^2-y^2", Polynomial::new([(1.0, [2, 0, 0]), (-1.0, [0, 2, 0])])),
        ("xy", Polynomial::new([(1.0, [1, 1, 0])])),
        ("1+x+2x^2-y^2-z^2", Polynomial::new([(1.0, [0, 0, 0]), (1.0, [1, 0, 0]), (2.0, [2, 0, 0]), (-1.0, [0, 2, 0]), (-1.0, [0, 0, 2])])),
    ];
    let (mut worst_d, mut worst_sc) = (0.0f64, 0.0f64);
    for (name, u) in &cases {
        let fp = monogenic_completion(Arc::new(u.clone()), 32, &probes).map_err(err)?;
        for &x in &points {
            let f = field::evaluate(&*fp.w, x).map_err(err)?;
            let d = field::apply_d(&*fp.w, x).map_err(err)?.norm();
            let sc = (f.sc() - u.eval(x)).abs();
            ensure(d <= 1e-6, || format!("{name}: |Df| = {d:.2e} at {x}"))?;
            ensure(sc <= 1e-10, || format!("{name}: |Sc f - u| = {sc:.2e} at {x}"))?;
            worst_d = worst_d.max(d);
            worst_sc = worst_sc.max(sc);
        }
    }
    let fx = monogenic_completion(Arc::new(cases[0].1.clone()), 32, &probes).map_err(err)?;
    let mut worst_closed = 0.0f64;
    for &x in &points {
        let closed = Quaternion::new(x.x, x.y / 2.0, x.z / 2.0, 0.0);
        worst_closed = worst_closed.max((field::evaluate(&*fx.w, x).map_err(err)? - closed).norm());
    }
    ensure(worst_closed <= 1e-10, || format!("u = x differs from its closed form by {worst_closed:.2e}"))?;
    Ok(format!("max|Df| {worst_d:.1e}, max|Sc f - u| {worst_sc:.1e}, closed form {worst_closed:.1e}"))
}

fn random_quaternion_polynomial(rng: &mut ChaCha8Rng) -> QuaternionPolynomial {
    let exps: [[u32; 3]; 10] =
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
    QuaternionPolynomial::new(std::array::from_fn(|_| {
        Polynomial::new(exps.iter().map(|&e| (rng.gen_range(-1.0..1.0), e)).collect::<Vec<_>>())
    }))
}

fn integral_theorems() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cube = RegularBody::box_(p(-0.5, -0.5, -0.5), p(1.0, 1.0, 1.0), 32).map_err(err)?;
    let ball = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 32).map_err(err)?;
    let ball64 = ball.with_order(64).map_err(err)?;
    let cylinder = RegularBody::cylinder_with_caps(ClosedCurve::circle([0.0, 0.0], 1.0).map_err(err)?, 1.0, 32).map_err(err)?;

    // cube oracle: ∫ dσ (x+yi+zj) = ∫ D(x+yi+zj) dV = −vol
    let one = Constant(Quaternion::ONE);
    let pos = QuaternionPolynomial::position();
    let r = theorems::verify_stokes(&cube, &one, &pos, 16).map_err(err)?;
    let oracle = (r.lhs + Quaternion::ONE).norm();
    ensure(oracle <= 1e-7 && r.residual <= 1e-7, || format!("cube: lhs {} residual {:.2e}", r.lhs, r.residual))?;
    let mut worst_stokes = r.residual;
    for body in [&cube, &ball] {
        for _ in 0..5 {
            let g = random_quaternion_polynomial(&mut rng);
            let f = random_quaternion_polynomial(&mut rng);
            let r = theorems::verify_stokes(body, &g, &f, 16).map_err(err)?;
            ensure(r.residual <= 1e-7, || format!("stokes residual {:.2e}", r.residual))?;
            worst_stokes = worst_stokes.max(r.residual);
        }
    }

    let probes = sample_ball(ReducedPoint::ORIGIN, 1.0, 16);
    let completed = monogenic_completion(
        Arc::new(Polynomial::new([(1.0, [2, 0, 0]), (-1.0, [0, 2, 0]), (0.5, [1, 0, 1])])),
        32,
        &probes,
    )
    .map_err(err)?;
    let exterior_kernel = CauchyKernel::new(p(2.5, 0.3, -0.2));
    let mut worst_cauchy = 0.0f64;
    for (body, radius) in [(&ball64, 0.5), (&cube, 0.15)] {
        for x in random_ball_points(&mut rng, radius, 5) {
            for f in [&*completed.w as &dyn QuaternionField, &exterior_kernel] {
                let r = theorems::verify_cauchy(body, f, x).map_err(err)?;
                ensure(r.residual <= 1e-6, || format!("cauchy error {:.2e} at {x}", r.residual))?;
                worst_cauchy = worst_cauchy.max(r.residual);
            }
        }
    }

    let g = CauchyKernel::new(p(0.0, 3.0, 0.5));
    let mut worst_zil = 0.0f64;
    for body in [&cube, &ball, &cylinder] {
        for f in [&*completed.w as &dyn QuaternionField, &exterior_kernel] {
            let r = theorems::verify_zil(body, &g, f).map_err(err)?;
            ensure(r.residual <= 1e-6, || format!("zil residual {:.2e}", r.residual))?;
            worst_zil = worst_zil.max(r.residual);
        }
    }

    let mut worst_null = 0.0f64;
    for body in [&cube, &ball, &ball64, &cylinder] {
        let n = theorems::surface_null_integral(body).map_err(err)?.norm();
        ensure(n <= 1e-10, || format!("closed-surface integral of dσ is {n:.2e}"))?;
        worst_null = worst_null.max(n);
    }
    Ok(format!(
        "cube oracle {oracle:.1e}, stokes {worst_stokes:.1e}, cauchy {worst_cauchy:.1e}, zil {worst_zil:.1e}, null {worst_null:.1e}"
    ))
}

fn sphere_scenario() -> Result<FlowScenario, String> {
    let w = PotentialSpec::Sphere { speed: 1.0, radius: 1.0, center: [0.0; 3] }.build().map_err(err)?;
    let body = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 32).map_err(err)?;
    FlowScenario::new(w, body, 1.0).map_err(err)
}

fn dalembert() -> Outcome {
    let sc = sphere_scenario()?;
    // the velocity against the classical exterior potential U(x + a³x/(2r³))
    let v = velocity_from_potential(&sc.potential);
    let mut worst_v = 0.0f64;
    for x in [p(1.5, 0.2, -0.3), p(-0.4, 1.1, 0.7), p(0.0, 0.0, 2.0), p(2.0, -1.0, 1.0)] {
        let r = x.norm();
        let (r3, r5) = (r.powi(3), r.powi(5));
        let classical = p(1.0 + 0.5 / r3 - 1.5 * x.x * x.x / r5, -1.5 * x.x * x.y / r5, -1.5 * x.x * x.z / r5);
        worst_v = worst_v.max((v.at(x).map_err(err)? - classical).norm());
    }
    ensure(worst_v <= 1e-10, || format!("velocity differs from the classical sphere flow by {worst_v:.2e}"))?;
    let mut line = Vec::new();
    for m in [ForceMethod::PressureDirect, ForceMethod::BlasiusSpeed, ForceMethod::ComponentSc] {
        let f = force::force(&sc, m).map_err(err)?.value.norm();
        ensure(f <= 1e-6, || format!("{m}: |F| = {f:.2e}"))?;
        line.push(format!("{m} {f:.1e}"));
    }
    for m in MomentMethod::ALL {
        let mm = force::moment(&sc, ReducedPoint::ORIGIN, m).map_err(err)?.value.norm();
        ensure(mm <= 1e-6, || format!("{m} moment {mm:.2e}"))?;
        line.push(format!("moment {m} {mm:.1e}"));
    }
    Ok(line.join(", "))
}

/// Laurent series in `z` with finitely many terms.
#[derive(Clone, Debug, Default)]
struct Laurent(BTreeMap<i32, Complex64>);

impl Laurent {
    fn term(mut self, power: i32, c: Complex64) -> Self {
        *self.0.entry(power).or_default() += c;
        self
    }
    fn mul(&self, o: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&a, &ca) in &self.0 {
            for (&b, &cb) in &o.0 {
                out = out.term(a + b, ca * cb);
            }
        }
        out
    }
    fn coeff(&self, power: i32) -> Complex64 {
        self.0.get(&power).copied().unwrap_or_default()
    }
}

/// Contour force and moment of `U(z + a²/z) − (iΓ/2π) log z` from residues.
fn residue_oracle(u: f64, a: f64, gamma: f64, rho: f64, z0: Complex64) -> (Complex64, f64) {
    let i = Complex64::i();
    let df = Laurent::default()
        .term(0, u.into())
        .term(-1, -i * gamma / (2.0 * PI))
        .term(-2, (-u * a * a).into());
    let sq = df.mul(&df);
    let two_pi_i = 2.0 * PI * i;
    let conj_force = i * rho / 2.0 * two_pi_i * sq.coeff(-1);
    let moment = -rho / 2.0 * (two_pi_i * (sq.coeff(-2) - z0 * sq.coeff(-1))).re;
    (Complex64::new(conj_force.re, -conj_force.im), moment)
}

fn kutta_joukowski() -> Outcome {
    let (u, a, gamma, rho) = (1.0, 1.0, 2.0 * PI, 1.0);
    let f = ComplexPotential::cylinder_vortex(u, a, gamma).map_err(err)?;
    let c = ClosedCurve::circle([0.0, 0.0], a).map_err(err)?;
    let (oracle, _) = residue_oracle(u, a, gamma, rho, Complex64::new(0.0, 0.0));
    let f2 = blasius_force_2d(&f, &c, rho).map_err(err)?.conj();
    let fp = pressure_force_2d(&f, &c, rho).map_err(err)?;
    ensure((f2 - oracle).norm() <= 1e-10, || format!("contour force {f2} vs residue {oracle}"))?;
    ensure((fp - oracle).norm() <= 1e-8, || format!("pressure force {fp} vs residue {oracle}"))?;
    ensure((f2.im.abs() - rho * u * gamma).abs() <= 1e-8, || format!("lift {}", f2.im))?;
    ensure(f2.re.abs() <= 1e-8, || format!("drag {:.2e}", f2.re))?;
    let mut per_length = Vec::new();
    for h in [0.5, 1.0, 2.0] {
        let r = reduce_and_compare(&f, &c, rho, h, 32, Complex64::new(0.0, 0.0)).map_err(err)?;
        ensure(r.force_rel_dev <= 1e-4, || format!("h = {h}: relative deviation {:.2e}", r.force_rel_dev))?;
        per_length.push(r.force_3d_per_length);
    }
    let spread = per_length
        .iter()
        .map(|q| (q[0] - per_length[0][0]).hypot(q[1] - per_length[0][1]))
        .fold(0.0, f64::max);
    ensure(spread <= 1e-6, || format!("per-length force varies with h by {spread:.2e}"))?;
    Ok(format!("lift {:.10}, drag {:.1e}, h-spread {spread:.1e}", f2.im, f2.re))
}

fn moment_reduction() -> Outcome {
    let (u, a, gamma, rho, h) = (1.0, 1.0, 2.0 * PI, 1.0, 1.0);
    let f = ComplexPotential::cylinder_vortex(u, a, gamma).map_err(err)?;
    let c = ClosedCurve::circle([0.0, 0.0], a).map_err(err)?;
    let axis = reduce_and_compare(&f, &c, rho, h, 32, Complex64::new(0.0, 0.0)).map_err(err)?;
    ensure(axis.moment_3d_per_length.abs() <= 1e-6, || format!("axis moment {:.2e}", axis.moment_3d_per_length))?;

    let z0 = Complex64::new(0.5, 0.25);
    let (oracle_force, oracle_moment) = residue_oracle(u, a, gamma, rho, z0);
    let m2_axis = blasius_moment_2d(&f, &c, rho, Complex64::new(0.0, 0.0)).map_err(err)?;
    let m2 = blasius_moment_2d(&f, &c, rho, z0).map_err(err)?;
    ensure((m2 - oracle_moment).abs() <= 1e-10, || format!("contour moment {m2} vs residue {oracle_moment}"))?;
    // M(z0) = M(0) + ((0 − z0) × F)_z
    let shifted = m2_axis - (z0.re * oracle_force.im - z0.im * oracle_force.re);
    let offset = reduce_and_compare(&f, &c, rho, h, 32, z0).map_err(err)?;
    let m3 = offset.moment_3d_per_length;
    let rel = (m3 - shifted).abs() / shifted.abs().max(1e-12);
    ensure(rel <= 1e-5, || format!("offset moment {m3} vs shifted contour moment {shifted}"))?;
    Ok(format!("axis {:.1e}, offset {m3:.10} vs {shifted:.10} (residue {oracle_moment:.10})", axis.moment_3d_per_length))
}

fn vanishing_scenarios() -> Result<Vec<(&'static str, FlowScenario)>, String> {
    let uniform = PotentialSpec::Uniform { velocity: [1.0, 0.3, -0.2] }.build().map_err(err)?;
    let sphere = PotentialSpec::Sphere { speed: 1.0, radius: 1.0, center: [0.0; 3] }.build().map_err(err)?;
    let source = PotentialSpec::Source { strength: 1.0, position: [0.0; 3] }.build().map_err(err)?;
    let strain = PotentialSpec::Strain { rate: 1.0 }.build().map_err(err)?;
    let vortex =
        PotentialSpec::Planar { flow: PlanarSpec::CylinderVortex { speed: 1.0, radius: 1.0, circulation: 2.0 * PI } }
            .build()
            .map_err(err)?;
    let unit_sphere = RegularBody::sphere(ReducedPoint::ORIGIN, 1.0, 32).map_err(err)?;
    let far_sphere = RegularBody::sphere(p(3.0, 0.0, 0.0), 1.0, 32).map_err(err)?;
    let cube = RegularBody::box_(p(1.0, 1.0, 1.0), p(1.0, 1.0, 1.0), 32).map_err(err)?;
    let centred_cube = RegularBody::box_(p(-0.5, -0.5, -0.5), p(1.0, 1.0, 1.0), 32).map_err(err)?;
    let off_cylinder =
        RegularBody::cylinder_with_caps(ClosedCurve::circle([4.0, 0.0], 1.0).map_err(err)?, 1.0, 32).map_err(err)?;
    let make = |w: FlowPotential, b: RegularBody| FlowScenario::new(w, b, 1.0).map_err(err);
    Ok(vec![
        ("uniform / unit sphere", make(uniform, unit_sphere)?),
        ("sphere flow / sphere at (3,0,0)", make(sphere, far_sphere)?),
        ("source / box at (1,1,1)", make(source, cube)?),
        ("strain / centred cube", make(strain, centred_cube)?),
        ("cylinder vortex / cylinder at (4,0)", make(vortex, off_cylinder)?),
    ])
}

/// `(ρ/2) ∫_Ω ∇|v|² dV` with central differences: the net momentum flux
/// through the surface, which equals the pressure force.
fn momentum_balance(sc: &FlowScenario) -> Result<ReducedPoint, String> {
    let v = velocity_from_potential(&sc.potential);
    let speed2 = |x: ReducedPoint| v.at(x).map(|v| v.dot(v)).map_err(err);
    let h = 1e-4;
    let mut total = ReducedPoint::ORIGIN;
    for (x, w) in sc.body.volume_rule(16).map_err(err)? {
        let mut g = [0.0; 3];
        for (a, ga) in g.iter_mut().enumerate() {
            let e = ReducedPoint::ORIGIN.with_component(a, h);
            *ga = (speed2(x + e)? - speed2(x - e)?) / (2.0 * h);
        }
        total += ReducedPoint::from_array(g) * (0.5 * sc.rho * w);
    }
    Ok(total)
}

fn vanishing() -> Outcome {
    let (mut worst_form, mut worst_moment) = (0.0f64, 0.0f64);
    let mut nonzero = Vec::new();
    for (name, sc) in vanishing_scenarios()? {
        let form = force::monogenic_form_integral(&sc).map_err(err)?.norm() * sc.rho / 8.0;
        ensure(form <= 1e-6, || format!("{name}: monogenic-form integral {form:.2e}"))?;
        worst_form = worst_form.max(form);
        let x0 = sc.body.interior_point();
        for m in MomentMethod::ALL {
            let mm = force::moment(&sc, x0, m).map_err(err)?.value.norm();
            ensure(mm <= 1e-6, || format!("{name}: {m} |M| = {mm:.2e} about {x0}"))?;
            worst_moment = worst_moment.max(mm);
        }
        let oracle = momentum_balance(&sc)?;
        let mut worst = 0.0f64;
        for m in [ForceMethod::PressureDirect, ForceMethod::BlasiusSpeed, ForceMethod::ComponentSc] {
            let f = force::force(&sc, m).map_err(err)?.value;
            let dev = (f - oracle).norm();
            ensure(dev <= 1e-6 * (1.0 + oracle.norm()), || format!("{name}: {m} {f} vs momentum balance {oracle}"))?;
            worst = worst.max(f.norm());
        }
        if worst > 1e-6 {
            nonzero.push(format!("{name} |F| = {worst:.3e}"));
        }
    }
    let detail = format!("monogenic-form integral {worst_form:.1e}, |M| about body centre {worst_moment:.1e}");
    if nonzero.is_empty() {
        Ok(format!("5 scenarios, {detail}"))
    } else {
        Err(format!(
            "{}; each equals the momentum-balance volume integral, so the surface is not a stream surface and the force does not vanish ({detail})",
            nonzero.join(", ")
        ))
    }
}

fn method_agreement() -> Outcome {
    let mut scenarios = vanishing_scenarios()?;
    scenarios.push(("sphere d'Alembert", sphere_scenario()?));
    for (name, flow) in [
        ("cylinder vortex", PlanarSpec::CylinderVortex { speed: 1.0, radius: 1.0, circulation: 2.0 * PI }),
        ("cylinder", PlanarSpec::Cylinder { speed: 1.0, radius: 1.0 }),
    ] {
        let w = PotentialSpec::Planar { flow }.build().map_err(err)?;
        let body = RegularBody::cylinder_with_caps(ClosedCurve::circle([0.0, 0.0], 1.0).map_err(err)?, 1.0, 32)
            .map_err(err)?;
        scenarios.push((name, FlowScenario::new(w, body, 1.0).map_err(err)?));
    }
    let (mut worst_sc, mut worst_form, mut gated) = (0.0f64, 0.0f64, 0);
    for (name, sc) in &scenarios {
        let b = force::force_blasius(sc).map_err(err)?.value;
        let c = force::force_components_sc(sc).map_err(err)?.value;
        let d = (b - c).to_array().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        ensure(d <= 1e-10, || format!("{name}: component form differs by {d:.2e}"))?;
        worst_sc = worst_sc.max(d);
        let gate = force::monogenic_form_gate(sc).map_err(err)?;
        if gate.passes(force::STREAM_SURFACE_TOL) {
            let m = force::force_monogenic_form(sc).map_err(err)?.value;
            let d = (m - b).norm();
            ensure(d <= 1e-6, || format!("{name}: monogenic form differs by {d:.2e}"))?;
            worst_form = worst_form.max(d);
            gated += 1;
        } else {
            ensure(
                matches!(force::force_monogenic_form(sc), Err(monoflow::Error::HypothesisViolated(_))),
                || format!("{name}: gate failed but the monogenic form was not refused"),
            )?;
        }
    }
    ensure(gated > 0, || "no scenario passed the stream-surface gate".into())?;
    Ok(format!(
        "{} scenarios, component form {worst_sc:.1e}, monogenic form {worst_form:.1e} on {gated} gated",
        scenarios.len()
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let config = dir.path().join("source-box.json");
    std::fs::write(
        &config,
        r#"{"scenario":"source-box","potential":{"kind":"source","strength":1.0,"position":[0,0,0]},
            "body":{"kind":"box","corner":[1,1,1],"extents":[1,1,1]}}"#,
    )
    .map_err(err)?;
    let config = config.to_string_lossy().into_owned();
    let mut compared = 0;
    for extra in [vec![], vec!["--config", config.as_str()]] {
        for cmd in ["verify", "force"] {
            for format in ["json", "csv"] {
                let mut outputs = Vec::new();
                for threads in ["1", "4", "8"] {
                    let out = Command::new(env!("CARGO_BIN_EXE_monoflow"))
                        .args([cmd, "--threads", threads, "--format", format])
                        .args(&extra)
                        .output()
                        .map_err(err)?;
                    ensure(out.status.code() == Some(0), || {
                        format!("{cmd} --threads {threads} exited with {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr))
                    })?;
                    outputs.push(out.stdout);
                }
                ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{cmd} {format} output depends on threads"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} command/format pairs identical across 1, 4, 8 threads"))
}

/// Criteria whose stated outcome does not hold for the flows they name.
const KNOWN_UNATTAINABLE: &[usize] = &[8];

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quaternion algebra", algebra),
        ("operator identities", operators),
        ("monogenic completion", completion),
        ("integral theorems", integral_theorems),
        ("d'Alembert sphere", dalembert),
        ("Kutta-Joukowski reduction", kutta_joukowski),
        ("moment reduction", moment_reduction),
        ("vanishing force and moment", vanishing),
        ("force method agreement", method_agreement),
        ("thread-count determinism", determinism),
    ];
    let (mut failures, mut unexpected) = (0, 0);
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                let known = KNOWN_UNATTAINABLE.contains(&(k + 1));
                if !known {
                    unexpected += 1;
                }
                println!("FAIL {:>2} {name}: {detail}{}", k + 1, if known { " [known, see README]" } else { "" });
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
