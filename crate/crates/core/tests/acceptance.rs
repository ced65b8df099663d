//! Acceptance gate: each criterion prints one PASS/FAIL line together with
//! its measured figures and runtime, and the test fails if any criterion
//! fails.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_steer::dynamics::{beta, solve_constant_control, trajectory_circle, ClosedFormSolution};
use sphere_steer::induced_fields::{
    field_bracket_check, induced_field, matrix_bracket, SystemPair, DEFAULT_DEPTH, DEFAULT_FD_STEP,
};
use sphere_steer::larc::{larc_global, larc_skew, DEFAULT_SAMPLES};
use sphere_steer::linalg3::{rotation_exp, Matrix3, SkewMatrix3, UnitVector3, Vector3};
use sphere_steer::normal_form::{skew_normal_form, working_frame, NormalFormData, DEFAULT_TOL};
use sphere_steer::planner::{plan, validate_plan};
use sphere_steer::simulator::{integrate_endpoint, IntegrateOptions};

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn random_unit(rng: &mut ChaCha8Rng) -> UnitVector3 {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return UnitVector3::normalize(v).unwrap();
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix3 {
    let mut rows = [[0.0; 3]; 3];
    for v in rows.iter_mut().flatten() {
        *v = rng.gen_range(-1.0..1.0);
    }
    Matrix3::new(rows)
}

fn random_skew(rng: &mut ChaCha8Rng, bound: f64) -> SkewMatrix3 {
    SkewMatrix3::new(
        rng.gen_range(-bound..bound),
        rng.gen_range(-bound..bound),
        rng.gen_range(-bound..bound),
    )
}

fn rk4(sys: &SystemPair, s0: &UnitVector3, u: f64, t: f64, step: f64) -> Vector3 {
    let opts = IntegrateOptions {
        step,
        renormalize: false,
        stride: 1,
    };
    let schedule = [sphere_steer::planner::ControlSegment { u, duration: t }];
    integrate_endpoint(sys, s0, &schedule, &opts).unwrap()
}

fn rotation_pair() -> (Matrix3, Matrix3) {
    (
        Matrix3::new([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        Matrix3::new([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]),
    )
}

fn shear_pair() -> (Matrix3, Matrix3) {
    (
        Matrix3::new([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        Matrix3::new([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
    )
}

fn worked_pair() -> (Matrix3, Matrix3) {
    (
        Matrix3::new([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
        Matrix3::new([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [-1.0, -1.0, 0.0]]),
    )
}

fn criterion_1() -> Outcome {
    let (a, b) = rotation_pair();
    let expected = Matrix3::new([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]);
    let ab = matrix_bracket(&a, &b);
    let sys = SystemPair::new(a, b);
    let sampled = larc_global(&sys, DEFAULT_SAMPLES, DEFAULT_DEPTH, DEFAULT_TOL);
    let skew_a = SkewMatrix3::extract(&a, 0.0).unwrap();
    let skew_b = SkewMatrix3::extract(&b, 0.0).unwrap();
    let algebraic = larc_skew(&skew_a, &skew_b, DEFAULT_TOL).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let worst = (0..100)
        .map(|_| {
            let s = random_unit(&mut rng);
            induced_field(&ab, &s).distance(&Vector3::new(s.z(), 0.0, -s.x()))
        })
        .fold(0.0, f64::max);
    check(
        ab == expected && sampled.verdict.is_satisfied() && algebraic && worst <= 1e-12,
        format!(
            "bracket exact: {}, sampled verdict {:?}, algebraic {algebraic}, max field error {worst:.1e}",
            ab == expected,
            sampled.verdict
        ),
    )
}

fn criterion_2() -> Outcome {
    let (a, b) = shear_pair();
    let ab = matrix_bracket(&a, &b);
    let report = larc_global(
        &SystemPair::new(a, b),
        DEFAULT_SAMPLES,
        DEFAULT_DEPTH,
        DEFAULT_TOL,
    );
    let e1 = UnitVector3::e1();
    let witness = report.deficient_points.iter().any(|d| d.point == e1);
    let fa = induced_field(&a, &e1).norm();
    let fb = induced_field(&b, &e1).norm();
    check(
        ab == Matrix3::zero() && !report.verdict.is_satisfied() && witness && fa <= 1e-15 && fb <= 1e-15,
        format!(
            "bracket zero: {}, verdict {:?}, witness (1,0,0) listed: {witness}, |h_A| = {fa:.1e}, |h_B| = {fb:.1e}",
            ab == Matrix3::zero(),
            report.verdict
        ),
    )
}

fn criterion_3() -> Outcome {
    let (a, b) = worked_pair();
    let sys = SystemPair::new(a, b);
    let nf = working_frame(
        &SkewMatrix3::extract(&a, 0.0).unwrap(),
        &SkewMatrix3::extract(&b, 0.0).unwrap(),
        DEFAULT_TOL,
    )
    .unwrap();
    let identity_frame = nf.frame() == Matrix3::identity();
    let t = 2.0 * PI / (3.0 * 3f64.sqrt());
    let s0 = UnitVector3::e2();
    let mut closed = 0.0f64;
    let mut numeric = 0.0f64;
    let mut circles = 0.0f64;
    for (u, pole) in [(1.0, -1.0), (-1.0, 1.0)] {
        let target = Vector3::new(0.0, 0.0, pole);
        closed = closed.max(
            solve_constant_control(&nf, &s0, u, t)
                .as_vector()
                .distance(&target),
        );
        let expansion = ClosedFormSolution::new(&nf, s0, u).unwrap();
        closed = closed.max(expansion.evaluate(t).distance(&target));
        numeric = numeric.max(rk4(&sys, &s0, u, t, 1e-4).distance(&target));
        let c = trajectory_circle(&nf, &s0, u, DEFAULT_TOL).unwrap();
        let center = Vector3::new(-1.0, 1.0, pole) * (1.0 / 3.0);
        circles = circles
            .max(c.center.distance(&center))
            .max((c.radius * c.radius - 2.0 / 3.0).abs());
    }
    check(
        identity_frame && closed <= 1e-12 && numeric <= 1e-6 && circles <= 1e-12,
        format!(
            "closed-form error {closed:.1e}, RK4 error {numeric:.1e}, circle error {circles:.1e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut case1, mut case2) = (0.0f64, 0.0f64);
    let mut trials = 0;
    while trials < 500 {
        let a = rng.gen_range(0.1..3.0);
        let (b1, b2, b3) = (
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let nf = NormalFormData::canonical(a, b1, b2, b3);
        if nf.alpha <= 0.01 || b3.abs() <= DEFAULT_TOL {
            continue;
        }
        trials += 1;
        let sqrt_alpha = nf.alpha.sqrt();
        let anchor =
            UnitVector3::normalize(Vector3::new(b3, -b2, 0.0) * (1.0 / sqrt_alpha)).unwrap();

        if (sqrt_alpha - b1).abs() > DEFAULT_TOL {
            let u = a / (sqrt_alpha - b1);
            let t = PI / beta(&nf, u);
            let z = solve_constant_control(&nf, &anchor, u, t).z();
            let z_back = solve_constant_control(
                &nf,
                &UnitVector3::normalize(-anchor.as_vector()).unwrap(),
                u,
                t,
            )
            .z();
            case1 = case1.max((z - 1.0).abs()).max((z_back + 1.0).abs());
        }

        let nf2 = NormalFormData::canonical(a, sqrt_alpha, b2, b3);
        let u = -a / (2.0 * sqrt_alpha);
        let t = PI / beta(&nf2, u);
        let z = solve_constant_control(&nf2, &anchor, u, t).z();
        case2 = case2.max((z + 1.0).abs());
    }
    check(
        case1 <= 1e-9 && case2 <= 1e-9,
        format!("{trials} normal forms, max pole miss: case 1 {case1:.1e}, case 2 {case2:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut playback, mut numeric) = (0.0f64, 0.0f64);
    let (mut max_segments, mut negative) = (0, 0);
    let mut steps = 0.0;
    let mut trials = 0;
    while trials < 1000 {
        let a = random_skew(&mut rng, 2.0);
        let b = random_skew(&mut rng, 2.0);
        match working_frame(&a, &b, DEFAULT_TOL) {
            Ok(nf) if nf.alpha > 0.01 => {}
            _ => continue,
        }
        trials += 1;
        let (s0, s1) = (random_unit(&mut rng), random_unit(&mut rng));
        let p = plan(&a, &b, s0, s1, DEFAULT_TOL).unwrap();
        playback = playback
            .max(validate_plan(&p, &a, &b))
            .max(p.endpoint().distance(&s1));
        max_segments = max_segments.max(p.segments.len());
        negative += p
            .segments
            .iter()
            .filter(|s| s.duration < 0.0 || s.duration.is_nan())
            .count();
        let sys = SystemPair::new(a.materialize(), b.materialize());
        let opts = IntegrateOptions::for_system(&sys, 1e-4);
        let end = integrate_endpoint(&sys, &s0, &p.segments, &opts).unwrap();
        numeric = numeric.max(end.distance(&s1.as_vector()));
        steps += p.total_time / 1e-4;
    }
    check(
        playback <= 1e-9 && numeric <= 1e-6 && max_segments <= 5 && negative == 0,
        format!(
            "{trials} plans, playback error {playback:.1e}, RK4 error {numeric:.1e}, max segments {max_segments}, \
             negative durations {negative}, {:.1e} RK4 steps",
            steps
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    for k in 0..500 {
        let (a, b) = if k % 2 == 0 {
            (random_matrix(&mut rng), random_matrix(&mut rng))
        } else {
            (
                random_skew(&mut rng, 1.0).materialize(),
                random_skew(&mut rng, 1.0).materialize(),
            )
        };
        let s = random_unit(&mut rng);
        worst = worst.max(field_bracket_check(&a, &b, &s, DEFAULT_FD_STEP));
    }
    check(
        worst <= 1e-7,
        format!("500 samples (half non-skew), max residual {worst:.1e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let (mut orth, mut canon) = (0.0f64, 0.0f64);
    let mut trials = 0;
    while trials < 1000 {
        let a = random_skew(&mut rng, 2.0);
        if a.rate() < 1e-3 {
            continue;
        }
        trials += 1;
        let (rate, p) = skew_normal_form(&a, DEFAULT_TOL).unwrap();
        let expected = (a.p1 * a.p1 + a.p2 * a.p2 + a.p3 * a.p3).sqrt();
        orth = orth.max((p.transpose() * p - Matrix3::identity()).max_abs());
        let reduced = a.materialize().conjugate_by(&p);
        let block = SkewMatrix3::new(expected, 0.0, 0.0).materialize();
        canon = canon
            .max((reduced - block).max_abs())
            .max((rate - expected).abs());
    }
    check(
        orth <= 1e-10 && canon <= 1e-10,
        format!(
            "{trials} matrices, orthogonality error {orth:.1e}, canonical-form error {canon:.1e}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let (mut linear, mut identity, mut eigen, mut generic, mut cross) =
        (0.0f64, 0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..500 {
        let (a, b) = (random_matrix(&mut rng), random_matrix(&mut rng));
        let u = rng.gen_range(-3.0..3.0);
        let s = random_unit(&mut rng);
        let combined = induced_field(&(a + b.scale(u)), &s);
        let split = induced_field(&a, &s) + induced_field(&b, &s) * u;
        linear = linear.max(combined.distance(&split));
        identity = identity.max(induced_field(&Matrix3::identity(), &s).max_abs());

        // v is an eigenvector of λI + R(I − vvᵀ) by construction
        let v = random_unit(&mut rng).as_vector();
        let lambda = rng.gen_range(-2.0..2.0);
        let projector = Matrix3::identity() - Matrix3::from_columns(v * v.x, v * v.y, v * v.z);
        let m = Matrix3::identity().scale(lambda) + random_matrix(&mut rng) * projector;
        let sv = UnitVector3::normalize(v).unwrap();
        let at_eigen = induced_field(&m, &sv).norm().max((m * v).cross(&v).norm());
        eigen = eigen.max(at_eigen);

        let h = induced_field(&m, &s).norm();
        let c = (m * s.as_vector()).cross(&s.as_vector()).norm();
        cross = cross.max((h - c).abs());
        generic = generic.min(h.min(c));
    }
    check(
        linear <= 1e-13 && identity <= 1e-15 && eigen <= 1e-12 && generic > 1e-12 && cross <= 1e-12,
        format!(
            "linearity {linear:.1e}, |h_Id| {identity:.1e}, at eigenvectors {eigen:.1e}, \
             generic minimum {generic:.1e}, |h| vs |Ms × s| {cross:.1e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let (a, b) = worked_pair();
    let sys = SystemPair::new(a, b);
    let c = SkewMatrix3::extract(&(a + b.scale(1.5)), 0.0).unwrap();
    let s0 = UnitVector3::normalize(Vector3::new(0.3, -0.8, 0.5)).unwrap();
    let t = 4.0;
    let exact = rotation_exp(&c, t) * s0.as_vector();
    let errors: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&h| rk4(&sys, &s0, 1.5, t, h).distance(&exact))
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    check(
        orders.iter().all(|o| (o - 4.0).abs() <= 0.3),
        format!(
            "errors {:.2e} {:.2e} {:.2e}, orders {:.3} {:.3}",
            errors[0], errors[1], errors[2], orders[0], orders[1]
        ),
    )
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 9] = [
        (
            "1 rotation-pair example",
            criterion_1,
            Duration::from_secs(1),
        ),
        ("2 degenerate example", criterion_2, Duration::from_secs(1)),
        (
            "3 worked steering example",
            criterion_3,
            Duration::from_secs(1),
        ),
        ("4 pole controls", criterion_4, Duration::from_secs(5)),
        ("5 planner soundness", criterion_5, Duration::from_secs(60)),
        (
            "6 field bracket homomorphism",
            criterion_6,
            Duration::from_secs(5),
        ),
        ("7 skew normal form", criterion_7, Duration::from_secs(5)),
        (
            "8 induced-field linearity and zeros",
            criterion_8,
            Duration::from_secs(2),
        ),
        (
            "9 RK4 convergence order",
            criterion_9,
            Duration::from_secs(5),
        ),
    ];
    let mut failed = Vec::new();
    // written to the raw stdout handle so the lines survive output capture
    let mut out = std::io::stdout();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let ok = outcome.ok && elapsed <= budget;
        writeln!(
            out,
            "[{}] criterion {name}: {} ({:.3} s, budget {} s)",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        )
        .unwrap();
        if !ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
