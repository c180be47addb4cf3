use std::f64::consts::PI;

use proptest::prelude::*;

use sdpls::field::{curvature_at, gradient_at, ScalarField};
use sdpls::grid::{make_grid, Grid, Vec3};
use sdpls::oracle::{integrate_reference, sphere_seed};
use sdpls::solver::{mollifier, source_field, Solver, SolverState, SourceParams, StepControl};
use sdpls::velocity::AnalyticVelocity;

fn fields() -> Vec<AnalyticVelocity> {
    vec![
        AnalyticVelocity::vortex_box(),
        AnalyticVelocity::time_periodic(),
        AnalyticVelocity::linear3d(),
        AnalyticVelocity::Translation {
            c: Vec3::new(0.3, -0.2, 0.1),
        },
        AnalyticVelocity::Rotation2d {
            omega: 1.7,
            xc: 0.4,
            yc: 0.6,
        },
    ]
}

fn max_grad_error(n: usize) -> f64 {
    let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[n, n / 2]).unwrap();
    let f = ScalarField::from_fn(&g, |x| (PI * x[0]).sin());
    (0..g.len())
        .map(|i| (gradient_at(&f, i)[0] - PI * (PI * g.cell_center(i)[0]).cos()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn gradient_is_second_order_including_boundaries() {
    let order = (max_grad_error(32) / max_grad_error(64)).log2();
    assert!(order >= 1.9, "{order}");
}

fn interior_circle_curvature_error(n: usize) -> f64 {
    let g = make_grid(2, &[0.0, 0.0], &[1.0, 1.0], &[n, n]).unwrap();
    let c = Vec3::new(0.5, 0.5, 0.0);
    let f = ScalarField::from_fn(&g, |x| (x - c).norm() - 0.25);
    (0..g.len())
        .filter(|&i| f.get(i).abs() < 0.05)
        .map(|i| (curvature_at(&f, i, 1e-12) + 1.0 / (g.cell_center(i) - c).norm()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn curvature_converges() {
    let (e1, e2) = (
        interior_circle_curvature_error(64),
        interior_circle_curvature_error(128),
    );
    assert!((e1 / e2).log2() >= 1.0, "{e1} {e2}");
}

#[test]
fn oracle_is_insensitive_to_step_halving() {
    let v = AnalyticVelocity::vortex_box();
    let seed = sphere_seed(
        2,
        &Vec3::new(0.5, -0.15, 0.0),
        &Vec3::new(0.5 + 0.3 * 0.75f64.sqrt(), 0.0, 0.0),
    )
    .unwrap();
    let a = integrate_reference(&v, &seed, 0.875, 1e-3).unwrap();
    let b = integrate_reference(&v, &seed, 0.875, 5e-4).unwrap();
    let (a, b) = (a.last().unwrap(), b.last().unwrap());
    assert!((a.x - b.x).norm() < 1e-8);
    assert!((a.theta_deg - b.theta_deg).abs() < 1e-8);
    assert!((a.kappa - b.kappa).abs() < 1e-8);
    assert!(a.x[1].abs() < 1e-10);
}

fn affine(g: &Grid, a: [f64; 4]) -> ScalarField {
    ScalarField::from_fn(g, |x| a[0] + a[1] * x[0] + a[2] * x[1] + a[3] * x[2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_exact_on_affine(a in prop::array::uniform4(-3.0f64..3.0), n in 4usize..12) {
        let g = make_grid(3, &[0.0; 3], &[1.0; 3], &[n, n, n]).unwrap();
        let f = affine(&g, a);
        for i in 0..g.len() {
            let d = gradient_at(&f, i) - Vec3::new(a[1], a[2], a[3]);
            prop_assert!(d.norm() < 1e-11);
        }
    }

    #[test]
    fn mollifier_even_bounded_and_c1(x in -1.0f64..1.0, w1 in 0.01f64..0.3, gap in 0.01f64..0.5) {
        let w2 = w1 + gap;
        let g = mollifier(x, w1, w2).unwrap();
        prop_assert_eq!(g, mollifier(-x, w1, w2).unwrap());
        prop_assert!((0.0..=1.0).contains(&g));
        if x.abs() >= w1 {
            prop_assert!(mollifier(x.abs() + 1e-3, w1, w2).unwrap() <= g);
        }
        let d = 1e-9;
        let left = (mollifier(w1, w1, w2).unwrap() - mollifier(w1 - d, w1, w2).unwrap()) / d;
        let right = (mollifier(w1 + d, w1, w2).unwrap() - mollifier(w1, w1, w2).unwrap()) / d;
        prop_assert!((left - right).abs() < 1e-6 * (1.0 + 1.0 / (gap * gap)));
    }

    #[test]
    fn jacobian_and_hessian_match_finite_differences(
        t in 0.0f64..1.0,
        p in prop::array::uniform3(0.0f64..1.0),
    ) {
        let x = Vec3::from(p);
        let step = 1e-5;
        for v in fields() {
            let dim = v.dim().unwrap_or(3);
            let j = v.eval_gradient(t, &x);
            let hess = v.eval_hessian(t, &x);
            for b in 0..dim {
                let mut e = Vec3::zeros();
                e[b] = step;
                let dv = (v.eval(t, &(x + e)) - v.eval(t, &(x - e))) / (2.0 * step);
                let dj = (v.eval_gradient(t, &(x + e)) - v.eval_gradient(t, &(x - e))) / (2.0 * step);
                for a in 0..3 {
                    prop_assert!((j[(a, b)] - dv[a]).abs() < 1e-6, "{} dv{a}/dx{b}", v.id());
                    for c in 0..dim {
                        prop_assert!((hess[a][(c, b)] - dj[(a, c)]).abs() < 1e-6, "{} d2v{a}/dx{c}dx{b}", v.id());
                    }
                }
            }
            prop_assert!(j.trace().abs() < 1e-12, "{} divergence", v.id());
        }
    }

    #[test]
    fn source_vanishes_for_rigid_motions(
        a in prop::array::uniform4(-1.0f64..1.0),
        k in 1.0f64..6.0,
        omega in -5.0f64..5.0,
    ) {
        let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[24, 12]).unwrap();
        let phi = ScalarField::from_fn(&g, |x| a[0] + a[1] * (k * x[0]).sin() + a[2] * (k * x[1]).cos() + a[3] * x[0] * x[1]);
        let p = SourceParams::new(1e-12, 10.0, 20.0, true).unwrap();
        let rigid = [
            AnalyticVelocity::Translation { c: Vec3::new(a[1], a[2], 0.0) },
            AnalyticVelocity::Rotation2d { omega, xc: a[0], yc: a[3] },
        ];
        for v in &rigid {
            prop_assert!(source_field(&phi, 0.3, v, &p).max_abs() <= 1e-10);
        }
    }

    #[test]
    fn one_step_without_source_respects_bounds(
        vals in prop::collection::vec(-1.0f64..1.0, 16 * 8),
        cfl in 0.05f64..1.0,
        which in 0usize..3,
    ) {
        let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[16, 8]).unwrap();
        let phi = ScalarField::from_values(&g, vals).unwrap();
        let v = [
            AnalyticVelocity::vortex_box(),
            AnalyticVelocity::Rotation2d { omega: 3.0, xc: 0.5, yc: 0.25 },
            AnalyticVelocity::Translation { c: Vec3::new(-0.4, 0.7, 0.0) },
        ][which].clone();
        let solver = Solver::new(g, v, SourceParams::default_2d(false), StepControl::new(cfl, 0.5).unwrap()).unwrap();
        let (lo, hi) = phi.min_max();
        let (next, _) = solver.step(&SolverState::initial(phi)).unwrap();
        let (nlo, nhi) = next.phi.min_max();
        prop_assert!(nlo >= lo - 1e-14 && nhi <= hi + 1e-14, "[{lo}, {hi}] -> [{nlo}, {nhi}]");
    }
}
