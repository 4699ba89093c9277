use std::f64::consts::PI;

use lieform::experiments::Scenario;
use lieform::fv::{weno5_parts, weno7_parts};
use lieform::*;
use proptest::prelude::*;

fn grid(n: usize) -> GridComplex2D {
    GridComplex2D::unit_square(n).unwrap()
}

/// Values that are small multiples of 1/64, so sums and scalings by small
/// integers stay exact.
fn dyadic(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-512i32..512).prop_map(|k| k as f64 / 64.0), len)
}

fn reals(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

fn cochain(degree: Degree, g: &GridComplex2D, values: Vec<f64>) -> Cochain {
    Cochain::from_values(degree, g, values).unwrap()
}

fn max_diff(a: &Cochain, b: &Cochain) -> f64 {
    axpy(-1.0, a, b).unwrap().max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn boundary_of_boundary_is_zero(nx in 4usize..=512, ny in 4usize..=512) {
        let g = GridComplex2D::new(nx, ny, 1.0).unwrap();
        let d1 = g.boundary_operator(1).unwrap();
        let d2 = g.boundary_operator(2).unwrap();
        let composed = d2.then(&d1);
        prop_assert_eq!(composed.len(), g.cell_count(2));
        prop_assert!(composed.iter().all(|row| row.iter().all(|&(_, c)| c == 0)));
    }
}

proptest! {
    #[test]
    fn transposed_boundary_kills_constant_edges(nx in 4usize..40, ny in 4usize..40, c in -3.0f64..3.0) {
        let g = GridComplex2D::new(nx, ny, 0.1).unwrap();
        let ones = vec![c; g.cell_count(1)];
        let out = g.boundary_operator(2).unwrap().coboundary(&ones);
        prop_assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn flatten_unflatten_round_trip(nx in 4usize..64, ny in 4usize..64, dim in 0u8..3, x_axis: bool, i in 0isize..64, j in 0isize..64) {
        let g = GridComplex2D::new(nx, ny, 1.0).unwrap();
        let (i, j) = (i % nx as isize, j % ny as isize);
        let axis = if x_axis { Axis::X } else { Axis::Y };
        let cell = match dim {
            0 => CellRef::vertex(i, j),
            1 => CellRef::edge(axis, i, j),
            _ => CellRef::face(i, j),
        };
        prop_assert_eq!(g.unflatten(g.flatten(cell)), Some(cell));
    }

    #[test]
    fn norms_are_homogeneous_and_subadditive(a in -10.0f64..10.0, x in reals(2 * 64), y in reals(2 * 64)) {
        let g = grid(8);
        let (x, y) = (cochain(Degree::One, &g, x), cochain(Degree::One, &g, y));
        for p in [Norm::L1, Norm::L2] {
            let scaled = norm(&x.scaled(a), p, &g);
            prop_assert!((scaled - a.abs() * norm(&x, p, &g)).abs() <= 1e-13 * (1.0 + scaled));
            let sum = norm(&axpy(1.0, &x, &y).unwrap(), p, &g);
            prop_assert!(sum <= norm(&x, p, &g) + norm(&y, p, &g) + 1e-13);
        }
    }

    #[test]
    fn discretize_is_linear(alpha in -2.0f64..2.0, beta in -2.0f64..2.0, k in 1u32..4, phase in 0.0f64..1.0) {
        let g = grid(12);
        let kf = k as f64;
        let f = move |x: f64, y: f64| (2.0 * PI * (kf * x + phase)).sin() * (2.0 * PI * y).cos();
        let q = |x: f64, y: f64| x * y + (2.0 * PI * x).cos();
        let cases = [
            (AnalyticForm::scalar(f), AnalyticForm::scalar(q), AnalyticForm::scalar(move |x, y| alpha * f(x, y) + beta * q(x, y))),
            (AnalyticForm::one_form(f, q), AnalyticForm::one_form(q, f), AnalyticForm::one_form(move |x, y| alpha * f(x, y) + beta * q(x, y), move |x, y| alpha * q(x, y) + beta * f(x, y))),
            (AnalyticForm::density(f), AnalyticForm::density(q), AnalyticForm::density(move |x, y| alpha * f(x, y) + beta * q(x, y))),
        ];
        for (a, b, combined) in cases {
            let lhs = discretize(&combined, &g).unwrap();
            let rhs = axpy(alpha, &discretize(&a, &g).unwrap(), &discretize(&b, &g).unwrap().scaled(beta)).unwrap();
            prop_assert!(max_diff(&lhs, &rhs) <= 1e-12);
        }
    }

    #[test]
    fn dd_vanishes(n in 8usize..=128, seed_vals in reals(128 * 128)) {
        let g = grid(n);
        let f = cochain(Degree::Zero, &g, seed_vals[..n * n].to_vec());
        let ddf = exterior_derivative(&exterior_derivative(&f, &g), &g);
        prop_assert!(ddf.max_abs() <= 1e-13 * f.max_abs());
    }

    #[test]
    fn derivative_is_linear_on_dyadic_data(a in -4i32..=4, w in dyadic(2 * 100), r in dyadic(2 * 100)) {
        let g = grid(10);
        let a = a as f64;
        let (w, r) = (cochain(Degree::One, &g, w), cochain(Degree::One, &g, r));
        let lhs = exterior_derivative(&axpy(a, &w, &r).unwrap(), &g);
        let rhs = axpy(a, &exterior_derivative(&w, &g), &exterior_derivative(&r, &g)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_is_linear_on_reals(a in -4.0f64..4.0, w in reals(100), r in reals(100)) {
        let g = grid(10);
        let (w, r) = (cochain(Degree::Zero, &g, w), cochain(Degree::Zero, &g, r));
        let lhs = exterior_derivative(&axpy(a, &w, &r).unwrap(), &g);
        let rhs = axpy(a, &exterior_derivative(&w, &g), &exterior_derivative(&r, &g)).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) <= 8.0 * f64::EPSILON * (a.abs() + 1.0));
    }

    #[test]
    fn stream_fields_are_divergence_free(c in prop::collection::vec(-1.0f64..1.0, 3), n in 6usize..64) {
        let g = grid(n);
        let psi = move |x: f64, y: f64| {
            c[0] * (2.0 * PI * x).sin() * (2.0 * PI * y).cos()
                + c[1] * (4.0 * PI * (x + y)).cos()
                + c[2] * (2.0 * PI * y).sin().powi(3)
        };
        let v = discretize_velocity(&VelocityProvider::stream(psi), &g).unwrap();
        let scale = v.max_abs_flux();
        for j in 0..n as isize {
            for i in 0..n as isize {
                prop_assert!(v.cell_divergence(i, j).abs() <= 1e-13 * scale);
            }
        }
    }

    #[test]
    fn node_averaging_is_linear_and_fixes_constants(a in -3.0f64..3.0, u in reals(64), w in reals(64), cx in -1.0f64..1.0, cy in -1.0f64..1.0) {
        let g = GridComplex2D::new(8, 8, 0.125).unwrap();
        let f1 = StaggeredVelocity::from_fluxes(&g, u.clone(), w.clone()).unwrap();
        let f2 = StaggeredVelocity::from_fluxes(&g, w, u).unwrap();
        let combined = StaggeredVelocity::from_fluxes(
            &g,
            f1.x_flux().iter().zip(f2.x_flux()).map(|(p, q)| a * p + q).collect(),
            f1.y_flux().iter().zip(f2.y_flux()).map(|(p, q)| a * p + q).collect(),
        ).unwrap();
        let (lx, ly) = average_to_node(&combined, &g);
        let (ax, ay) = average_to_node(&f1, &g);
        let (bx, by) = average_to_node(&f2, &g);
        for k in 0..64 {
            prop_assert!((lx[k] - (a * ax[k] + bx[k])).abs() <= 1e-14 * (a.abs() + 2.0));
            prop_assert!((ly[k] - (a * ay[k] + by[k])).abs() <= 1e-14 * (a.abs() + 2.0));
        }
        let constant = discretize_velocity(&VelocityProvider::constant(cx, cy), &g).unwrap();
        let (nx_, ny_) = average_to_node(&constant, &g);
        prop_assert_eq!(&nx_[..], constant.x_flux());
        prop_assert_eq!(&ny_[..], constant.y_flux());
    }

    #[test]
    fn negated_provider_negates_every_flux(vx in -2.0f64..2.0, vy in -2.0f64..2.0, n in 4usize..40) {
        let g = grid(n);
        for p in [VelocityProvider::constant(vx, vy), VelocityProvider::rudman_vortex()] {
            let a = discretize_velocity(&p, &g).unwrap();
            let b = discretize_velocity(&p.negated(), &g).unwrap();
            prop_assert_eq!(a.negated(), b);
        }
    }

    #[test]
    fn upwind_kernel_is_linear_in_data(a in -8i32..=8, u in dyadic(2), v in dyadic(2), positive: bool) {
        let (flux, sweep) = if positive { (0.25, Sweep::Forward) } else { (-0.25, Sweep::Backward) };
        let k = |d: &[f64]| extrusion_integral(&Stencil1D::new(d, sweep), flux, 0.5, 1.0, SchemeKind::UpwindPc).unwrap();
        let a = a as f64;
        let mix: Vec<f64> = u.iter().zip(&v).map(|(p, q)| a * p + q).collect();
        prop_assert_eq!(k(&mix), a * k(&u) + k(&v));
    }

    #[test]
    fn mirrored_window_with_reversed_flux_negates(u in reals(8), flux in 1e-3f64..0.5) {
        for scheme in SchemeKind::ALL {
            let w = scheme.window_len();
            let s = Stencil1D::new(&u[..w], Sweep::Forward);
            let fwd = extrusion_integral(&s, flux, 0.1, 0.25, scheme).unwrap();
            let bwd = extrusion_integral(&s.mirrored(), -flux, 0.1, 0.25, scheme).unwrap();
            prop_assert_eq!(bwd, -fwd);
        }
    }

    #[test]
    fn weno_commutes_with_constant_shifts(u in reals(8), c in -5.0f64..5.0) {
        for scheme in [SchemeKind::Weno5, SchemeKind::Weno7] {
            let w = scheme.window_len();
            let shifted: Vec<f64> = u[..w].iter().map(|x| x + c).collect();
            for sweep in [Sweep::Forward, Sweep::Backward] {
                let q = reconstruct_at_interface(&Stencil1D::new(&u[..w], sweep), scheme);
                let qs = reconstruct_at_interface(&Stencil1D::new(&shifted, sweep), scheme);
                prop_assert!((qs - (q + c)).abs() <= 1e-12 * (1.0 + c.abs()));
            }
        }
    }

    #[test]
    fn weno_weights_are_convex(u in prop::collection::vec(-100.0f64..100.0, 7)) {
        let p5 = weno5_parts(&[u[0], u[1], u[2], u[3], u[4]]);
        let p7 = weno7_parts(&[u[0], u[1], u[2], u[3], u[4], u[5], u[6]]);
        prop_assert!(p5.weights.iter().chain(&p7.weights).all(|&w| w >= 0.0));
        prop_assert!((p5.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!((p7.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(p5.smoothness.iter().chain(&p7.smoothness).all(|&b| b >= 0.0));
    }

    #[test]
    fn contraction_lowers_degree_and_is_linear_for_upwind(a in -4i32..=4, w in dyadic(2 * 64), r in dyadic(2 * 64), fx in dyadic(64), fy in dyadic(64)) {
        // h = 1/8 and fluxes in [-1/8, 1/8): dt = 1/32 keeps the Courant number at most 1/4
        let g = grid(8);
        let scale = |v: Vec<f64>| v.into_iter().map(|x| x / 64.0).collect::<Vec<_>>();
        let field = StaggeredVelocity::from_fluxes(&g, scale(fx), scale(fy)).unwrap();
        let a = a as f64;
        let dt = 1.0 / 32.0;
        let two = |v: &[f64]| cochain(Degree::Two, &g, v[..64].to_vec());
        let one = |v: &[f64]| cochain(Degree::One, &g, v.to_vec());
        for (x, y) in [(two(&w), two(&r)), (one(&w), one(&r))] {
            let c = |z: &Cochain| contract(z, &field, dt, SchemeKind::UpwindPc, &g).unwrap().cochain;
            let lhs = c(&axpy(a, &x, &y).unwrap());
            prop_assert_eq!(lhs.degree(), x.degree().lowered());
            let rhs = axpy(a, &c(&x), &c(&y)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn upwind_contraction_scales_with_dt_and_flux(w in reals(2 * 64), s in 1u32..4) {
        let g = grid(8);
        let field = discretize_velocity(&VelocityProvider::rudman_vortex(), &g).unwrap();
        let w = cochain(Degree::One, &g, w);
        let s = f64::from(s);
        let dt = 1.0 / 64.0;
        let base = contract(&w, &field, dt, SchemeKind::UpwindPc, &g).unwrap().cochain;
        let longer = contract(&w, &field, s * dt, SchemeKind::UpwindPc, &g).unwrap().cochain;
        let faster = contract(&w, &field.scaled(s), dt, SchemeKind::UpwindPc, &g).unwrap().cochain;
        let tol = 1e-15 * (1.0 + base.max_abs() * s);
        prop_assert!(max_diff(&longer, &base.scaled(s)) <= tol);
        prop_assert!(max_diff(&faster, &base.scaled(s)) <= tol);
    }

    #[test]
    fn lie_derivative_commutes_with_d(w in reals(2 * 256), degree_one: bool, scheme_ix in 0usize..3) {
        let g = grid(16);
        let scheme = SchemeKind::ALL[scheme_ix];
        let field = discretize_velocity(&VelocityProvider::rudman_vortex(), &g).unwrap();
        let cfg = AdvectionConfig::new(0.01, 1, scheme).unwrap();
        let w = if degree_one { cochain(Degree::One, &g, w) } else { cochain(Degree::Zero, &g, w[..256].to_vec()) };
        let d_l = exterior_derivative(&lie_increment(&w, &field, &cfg, &g).unwrap(), &g);
        let l_d = lie_increment(&exterior_derivative(&w, &g), &field, &cfg, &g).unwrap();
        let scale = d_l.max_abs().max(w.max_abs());
        prop_assert!(max_diff(&d_l, &l_d) <= 1e-12 * scale);
    }
}

#[test]
fn upwind_two_form_contraction_reads_lower_left_cells() {
    let g = grid(8);
    let field = discretize_velocity(&VelocityProvider::constant(1.0, 1.0), &g).unwrap();
    let dt = 1e-2;
    for j in 0..8isize {
        for i in 0..8isize {
            let mut w = Cochain::zeros(Degree::Two, &g);
            w.values_mut()[g.idx(i, j)] = 1.0;
            let c = contract_2form(&w, &field, dt, SchemeKind::UpwindPc, &g).unwrap().cochain;
            let nonzero: Vec<usize> = (0..c.values().len()).filter(|&k| c.values()[k] != 0.0).collect();
            // the cell feeds the horizontal edge above it and the vertical edge to its right
            let mut expected = vec![g.idx(i, j + 1), g.plane_len() + g.idx(i + 1, j)];
            expected.sort_unstable();
            assert_eq!(nonzero, expected, "cell ({i}, {j})");
            assert!(c.x(i, j + 1) < 0.0 && c.y(i + 1, j) > 0.0);
        }
    }
}

#[test]
fn forward_then_negated_step_differs_by_second_order() {
    // one step forward and one back in the negated field: the residual is O(dt^2)
    let form = Scenario::ConvergenceSmoothConstant.initial_form();
    let mut gaps = Vec::new();
    for n in [16usize, 32, 64] {
        let g = grid(n);
        let v = discretize_velocity(&VelocityProvider::rudman_vortex(), &g).unwrap();
        let back = v.negated();
        let dt = 0.2 / n as f64;
        let cfg = AdvectionConfig::new(dt, 1, SchemeKind::UpwindPc).unwrap();
        let w0 = discretize(&form, &g).unwrap();
        let w2 = step(&step(&w0, &v, &cfg, &g).unwrap(), &back, &cfg, &g).unwrap();
        assert_ne!(w2, w0);
        gaps.push(max_diff(&w2, &w0) / w0.max_abs());
    }
    // dt ~ h, so a second-order residual quarters per refinement
    for p in gaps.windows(2) {
        let rate = (p[0] / p[1]).log2();
        assert!(rate > 1.8, "gaps {gaps:?}");
    }
}
