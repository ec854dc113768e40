mod common;

use common::c;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simustab::cee::{
    build_data_operator, build_structure, cee_residual, check_solution, solve_cee, solve_interpolant, CeeProblem,
    DataOperator,
};
use simustab::stabdata::{normalize_data, DataMode, DiscData, InterpolationNode};
use simustab::{linalg, CMat, Complex64, Error, RMat};

fn node(z: Complex64, w: CMat) -> InterpolationNode {
    InterpolationNode { z, w, multiplicity: 1 }
}

fn scalar(x: f64) -> CMat {
    CMat::from_element(1, 1, c(x, 0.0))
}

fn scalar_problem() -> CeeProblem {
    let cs = build_structure(1, 1).unwrap();
    CeeProblem::from_nodes(cs, &[node(c(0.5, 0.0), scalar(1.0))], RMat::zeros(1, 1)).unwrap()
}

#[test]
fn scalar_fixture_exact_solution() {
    let sol = solve_cee(&scalar_problem()).unwrap();
    assert!((sol.p[(0, 0)] - 4.0 / 9.0).abs() < 1e-12);
    assert!((sol.a[(0, 0)] + 2.0 / 3.0).abs() < 1e-12);
    assert!((sol.b[(0, 0)] - 2.0 / 3.0).abs() < 1e-12);
    assert!((sol.r[(0, 0)] - 5f64.sqrt() / 3.0).abs() < 1e-12);

    let dd = DiscData {
        ell: 1,
        nodes: vec![node(c(0.0, 0.0), scalar(0.5)), node(c(0.5, 0.0), scalar(1.0))],
        mode: DataMode::Direct,
        normalization: None,
    };
    let itp = solve_interpolant(&normalize_data(&dd, Some(0)).unwrap(), None).unwrap();
    assert!((itp.eval(c(0.5, 0.0)).unwrap()[(0, 0)] - 1.0).norm() < 1e-12);
}

#[test]
fn scalar_residual_vanishes_only_at_solution() {
    let prob = scalar_problem();
    let at = |p: f64| cee_residual(&RMat::from_element(1, 1, p), &prob)[(0, 0)];
    assert!(at(4.0 / 9.0).abs() < 1e-14);
    for p in [0.0, 0.25, 0.6] {
        assert!(at(p).abs() > 1e-3);
    }
}

#[test]
fn trivial_data_gives_constant_half_identity() {
    let half = CMat::identity(2, 2) * c(0.5, 0.0);
    let dd = DiscData {
        ell: 2,
        nodes: vec![node(c(0.0, 0.0), half.clone()), node(c(0.4, 0.0), half.clone()), node(c(-0.3, 0.0), half.clone())],
        mode: DataMode::Direct,
        normalization: None,
    };
    let itp = solve_interpolant(&normalize_data(&dd, Some(0)).unwrap(), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let z = Complex64::from_polar(0.999 * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        assert!((itp.eval(z).unwrap() - &half).norm() < 1e-12);
    }
}

#[test]
fn zero_data_operator_for_half_values() {
    let cs = build_structure(2, 1).unwrap();
    let op = build_data_operator(&[node(c(0.3, 0.0), CMat::identity(2, 2) * c(0.5, 0.0))], &cs).unwrap();
    assert_eq!(op.u.norm(), 0.0);
    assert_eq!(op.big_u.norm(), 0.0);
}

#[test]
fn coincident_nodes_are_degenerate() {
    let cs = build_structure(1, 2).unwrap();
    let nodes = [node(c(0.3, 0.0), scalar(1.0)), node(c(0.3, 0.0), scalar(2.0))];
    assert!(matches!(build_data_operator(&nodes, &cs), Err(Error::DegenerateNodeSet)));
}

#[test]
fn sigma_shape_is_checked() {
    let cs = build_structure(2, 1).unwrap();
    let op = DataOperator::zero(2, 2);
    assert!(matches!(CeeProblem::new(cs, op, RMat::zeros(3, 2)), Err(Error::ShapeError(_))));
}

#[test]
fn unnormalized_data_is_rejected() {
    let dd =
        DiscData { ell: 1, nodes: vec![node(c(0.2, 0.0), scalar(1.0))], mode: DataMode::Direct, normalization: None };
    assert!(matches!(solve_interpolant(&dd, None), Err(Error::ShapeError(_))));
}

/// Values of `F(z) = C + sum_k P_k (1 + a_k z)/(1 - a_k z)`, a Carathéodory function.
fn true_function(params: &[(f64, f64, f64, f64)], c0: f64) -> impl Fn(Complex64) -> CMat + '_ {
    move |z| {
        let mut f = CMat::identity(2, 2) * c(c0, 0.0);
        for &(a, p11, p12, p22) in params {
            let l = RMat::from_row_slice(2, 2, &[p11, 0.0, p12, p22]);
            let p = linalg::to_complex(&(&l * l.transpose()));
            let one = c(1.0, 0.0);
            f += p * ((one + z * a) / (one - z * a));
        }
        f
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn feasible_data_is_interpolated(
        params in prop::collection::vec((-0.8f64..0.8, 0.2f64..1.0, -0.5f64..0.5, 0.2f64..1.0), 1..3),
        c0 in 0.1f64..1.0,
        zs in prop::collection::vec(0.1f64..0.7, 1..3),
        sigma in prop::collection::vec(-0.3f64..0.3, 8),
    ) {
        let f = true_function(&params, c0);
        let mut zs = zs;
        zs.sort_by(f64::total_cmp);
        zs.dedup_by(|a, b| (*a - *b).abs() < 0.1);
        let mut nodes = vec![node(c(0.0, 0.0), f(c(0.0, 0.0)))];
        for (k, &z) in zs.iter().enumerate() {
            let z = if k % 2 == 0 { z } else { -z };
            nodes.push(node(c(z, 0.0), f(c(z, 0.0)).map(|x| c(x.re, 0.0))));
        }
        let dd = DiscData { ell: 2, nodes, mode: DataMode::Direct, normalization: None };
        let nd = normalize_data(&dd, Some(0)).unwrap();
        let n = nd.non_base().len();
        let sigma = RMat::from_iterator(2 * n, 2, sigma.into_iter().take(4 * n));
        let itp = solve_interpolant(&nd, Some(&sigma)).unwrap();
        let sol = itp.solution.as_ref().unwrap();

        // the equation holds and P is admissible
        let prob = CeeProblem::from_nodes(sol.structure.clone(), nd.non_base(), sigma.clone()).unwrap();
        let res = cee_residual(&sol.p, &prob);
        prop_assert!(res.norm() < 1e-10 * (1.0 + sol.p.norm()));
        prop_assert!((&sol.p - sol.p.transpose()).norm() < 1e-12 * (1.0 + sol.p.norm()));
        prop_assert!(linalg::sym_eigenvalues(&sol.p)[0] >= -1e-10);
        let hph = &sol.structure.h * &sol.p * sol.structure.h.transpose();
        prop_assert!(*linalg::sym_eigenvalues(&hph).last().unwrap() < 1.0);

        let chk = check_solution(&itp, &dd).unwrap();
        prop_assert!(chk.interp_residual < 1e-8, "residual {}", chk.interp_residual);
        prop_assert!(chk.min_herm_eig > 0.0);
        prop_assert!(chk.pole_radius < 1.0);
    }

    #[test]
    fn residual_is_symmetric(
        x in prop::collection::vec(-1.0f64..1.0, 4),
        sigma in prop::collection::vec(-0.5f64..0.5, 4),
        w in 0.6f64..3.0,
    ) {
        let cs = build_structure(2, 1).unwrap();
        let val = CMat::from_row_slice(2, 2, &[c(w, 0.0), c(0.1, 0.0), c(-0.1, 0.0), c(1.0, 0.0)]);
        let prob = CeeProblem::from_nodes(cs, &[node(c(0.4, 0.0), val)], RMat::from_vec(2, 2, sigma)).unwrap();
        let a = RMat::from_vec(2, 2, x);
        let p = &a * a.transpose();
        let r = cee_residual(&p, &prob);
        prop_assert!((&r - r.transpose()).norm() < 1e-13 * (1.0 + r.norm()));
    }

    #[test]
    fn canonical_polynomials_agree(ell in 1usize..4, n in 1usize..4, x in -0.9f64..0.9, y in -0.9f64..0.9) {
        let cs = build_structure(ell, n).unwrap();
        let zeta = c(x, y);
        prop_assume!(zeta.norm() > 1e-3);
        let lhs = cs.pi_bar(zeta);
        let rhs = cs.pi(zeta.inv()) * zeta.powu(n as u32);
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + zeta.norm().powi(-(n as i32))));
        prop_assert_eq!(cs.h.nrows(), ell);
        prop_assert_eq!(cs.j.nrows(), ell * n);
    }
}
