use std::fs;

use lieform::artifacts::read_field;
use lieform::experiments::{fit_slope, time_plan, Scenario, ScenarioParams};
use lieform::*;

fn quiet(mut p: ScenarioParams) -> ScenarioParams {
    p.record_timing = false;
    p
}

#[test]
fn square_translate_writes_fields_images_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let params = quiet(Scenario::SquareTranslate.defaults());
    let recs = run_scenario(Scenario::SquareTranslate, &params, dir.path()).unwrap();
    assert_eq!(recs.len(), 2);
    assert!(recs[1].l1 < recs[0].l1, "weno7 should smear less than upwind");

    for scheme in ["upwind", "weno7"] {
        let case = dir.path().join(format!("{scheme}-48"));
        for name in ["initial", "final"] {
            let (g, w) = read_field(&case.join(format!("{name}.txt"))).unwrap();
            assert_eq!((g.nx(), g.ny(), w.degree()), (48, 48, Degree::One));
            let pgm = fs::read(case.join(format!("{name}.pgm"))).unwrap();
            assert!(pgm.starts_with(b"P5\n48 48\n255\n"));
            assert!(case.join(format!("{name}.pgm.txt")).exists());
        }
    }
    let csv = fs::read_to_string(dir.path().join("errors.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "resolution,scheme,l1,l2,runtime_ms");
    assert!(lines[1].starts_with("48,upwind,") && lines[2].starts_with("48,weno7,"));
    assert!(lines[1].ends_with(",0.000"));
}

#[test]
fn initial_rectangle_renders_as_bright_box() {
    let g = GridComplex2D::unit_square(48).unwrap();
    let w = discretize(&Scenario::SquareTranslate.initial_form(), &g).unwrap();
    let r = render_field(&w, &g);
    // well inside the rectangle every bounding edge carries h, outside nothing
    for j in 0..48 {
        for i in 0..48 {
            let (x, y) = ((i as f64 + 0.5) / 48.0, (j as f64 + 0.5) / 48.0);
            let p = r.pixel(i, j);
            if x > 0.32 && x < 0.58 && y > 0.27 && y < 0.68 {
                assert_eq!(p, 255, "cell ({i}, {j})");
            } else if !(0.27..=0.63).contains(&x) || !(0.23..=0.72).contains(&y) {
                assert_eq!(p, 0, "cell ({i}, {j})");
            }
        }
    }
}

#[test]
fn identical_parameters_give_identical_csv() {
    let params = ScenarioParams {
        resolutions: vec![8, 16],
        ..quiet(Scenario::ConvergenceSmoothVortex.defaults())
    };
    let read = || {
        let dir = tempfile::tempdir().unwrap();
        run_scenario(Scenario::ConvergenceSmoothVortex, &params, dir.path()).unwrap();
        let csv = fs::read(dir.path().join("errors.csv")).unwrap();
        let dump = fs::read(dir.path().join("weno7-16").join("final.txt")).unwrap();
        (csv, dump)
    };
    assert_eq!(read(), read());
}

#[test]
fn vortex_run_dumps_configured_steps() {
    let dir = tempfile::tempdir().unwrap();
    let params = ScenarioParams {
        resolutions: vec![16],
        schemes: vec![SchemeKind::UpwindPc],
        steps: Some(40),
        dump_every: Some(20),
        ..quiet(Scenario::RudmanVortex.defaults())
    };
    run_scenario(Scenario::RudmanVortex, &params, dir.path()).unwrap();
    let case = dir.path().join("upwind-16");
    let mut names: Vec<String> = fs::read_dir(&case)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".txt") && !n.ends_with(".pgm.txt"))
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "backward-000000.txt",
            "backward-000020.txt",
            "backward-000040.txt",
            "final.txt",
            "forward-000000.txt",
            "forward-000020.txt",
            "forward-000040.txt",
            "initial.txt",
            "turnaround.txt",
        ]
    );
    let (_, a) = read_field(&case.join("forward-000040.txt")).unwrap();
    let (_, b) = read_field(&case.join("turnaround.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scalar_with_zero_velocity_is_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let params = ScenarioParams {
        velocity: Some((0.0, 0.0)),
        resolutions: vec![16, 32],
        ..quiet(Scenario::Scalar0Form.defaults())
    };
    let recs = run_scenario(Scenario::Scalar0Form, &params, dir.path()).unwrap();
    assert!(recs.iter().all(|r| r.l1 == 0.0 && r.l2 == 0.0));
    let (_, a) = read_field(&dir.path().join("weno7-32/initial.txt")).unwrap();
    let (_, b) = read_field(&dir.path().join("weno7-32/final.txt")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn upwind_smooth_constant_successive_slopes() {
    let params = ScenarioParams {
        schemes: vec![SchemeKind::UpwindPc],
        ..quiet(Scenario::ConvergenceSmoothConstant.defaults())
    };
    let recs: Vec<ErrorRecord> = params
        .resolutions
        .iter()
        .map(|&n| {
            simulate(Scenario::ConvergenceSmoothConstant, &params, n, SchemeKind::UpwindPc, |_, _, _| Ok(()))
                .unwrap()
                .record
        })
        .collect();
    for p in recs.windows(2) {
        let rate = (p[0].l1 / p[1].l1).log2();
        assert!(rate >= 0.8, "{} -> {}: {rate}", p[0].resolution, p[1].resolution);
    }
    let pts: Vec<(usize, f64)> = recs.iter().map(|r| (r.resolution, r.l1)).collect();
    match fit_slope(&pts).unwrap() {
        lieform::experiments::SlopeValue::Slope(s) => assert!((0.8..=1.3).contains(&s), "slope {s}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn scalar_and_volume_forms_converge() {
    for scenario in [Scenario::Scalar0Form, Scenario::Volume2FormEquivalence] {
        let params = ScenarioParams {
            resolutions: vec![16, 32, 64],
            schemes: vec![SchemeKind::UpwindPc],
            ..quiet(scenario.defaults())
        };
        // the entry weights of the norms do not scale with the cell size for
        // degrees 0 and 2, so compare errors relative to the initial data
        let errs: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| {
                let r = simulate(scenario, &params, n, SchemeKind::UpwindPc, |_, _, _| Ok(())).unwrap();
                r.record.l1 / norm(&r.initial, Norm::L1, &r.grid)
            })
            .collect();
        assert!(errs.windows(2).all(|p| p[1] < p[0]), "{scenario}: {errs:?}");
    }
}

#[test]
fn dt_rule_keeps_the_courant_number_fixed() {
    let params = Scenario::ConvergenceSmoothConstant.defaults();
    for scheme in [SchemeKind::UpwindPc, SchemeKind::Weno7] {
        let nus: Vec<f64> = params
            .resolutions
            .iter()
            .map(|&n| time_plan(Scenario::ConvergenceSmoothConstant, &params, n, scheme).unwrap().dt * n as f64)
            .collect();
        for nu in &nus {
            assert!((nu - nus[0]).abs() < 0.01 * nus[0], "{scheme}: {nus:?}");
        }
    }
}

#[test]
fn courant_violation_is_a_numerical_error() {
    let params = ScenarioParams {
        resolutions: vec![16],
        dt: Some(0.05),
        ..Scenario::ConvergenceSmoothConstant.defaults()
    };
    let err = simulate(Scenario::ConvergenceSmoothConstant, &params, 16, SchemeKind::UpwindPc, |_, _, _| Ok(()))
        .unwrap_err();
    assert!(err.is_numerical(), "{err}");
}
