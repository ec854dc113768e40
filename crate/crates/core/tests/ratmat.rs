mod common;

use common::{c, poly_from_roots};
use proptest::prelude::*;
use simustab::ratmat::{rm_det_adj, rm_eval, PolyMatrix, Polynomial, RationalFunction, RationalMatrix};
use simustab::{linalg, CMat, Complex64, Error};

fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

fn stable_linear() -> impl Strategy<Value = Polynomial> {
    (0.2f64..5.0).prop_map(|a| Polynomial::linear(a, 1.0))
}

/// `(b0 + b1 s)/(s + a)` with its zero kept away from its pole.
fn entry() -> impl Strategy<Value = RationalFunction> {
    (-3.0f64..3.0, -3.0f64..3.0, stable_linear())
        .prop_filter("near pole-zero cancellation", |(b0, b1, den)| (b0 - b1 * den.coeffs()[0]).abs() > 0.05)
        .prop_map(|(b0, b1, den)| RationalFunction::new(Polynomial::linear(b0, b1), den).unwrap())
}

/// Roots closer than the cancellation tolerance are merged by design, so
/// distinct poles are kept well apart.
fn rmat(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(entry(), n * n)
        .prop_filter("clustered poles", |e| {
            let poles: Vec<f64> = e.iter().filter(|f| !f.is_zero()).map(|f| f.den().coeffs()[0]).collect();
            poles.iter().enumerate().all(|(i, a)| poles[..i].iter().all(|b| (a - b).abs() > 1e-2))
        })
        .prop_map(move |e| RationalMatrix::new(n, n, e).unwrap())
}

/// Round-off plus the effect of one by-design merge of roots closer than
/// `1e-6`: a relative change of `1e-6 / |s - r|`, at most `4e-6` here since
/// samples have `Re s >= 0.05` and poles lie left of `-0.2`.
fn merge_bound(scale: f64) -> f64 {
    1e-10 * (1.0 + scale) + 4e-6 * scale
}

fn sample_point() -> impl Strategy<Value = Complex64> {
    (0.05f64..3.0, -3.0f64..3.0).prop_map(|(x, y)| c(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_match_constructed_roots(
        reals in prop::collection::vec(-4.0f64..4.0, 0..4),
        pairs in prop::collection::vec((-3.0f64..3.0, 0.3f64..3.0), 0..3),
    ) {
        let mut roots: Vec<Complex64> = reals.iter().map(|&r| c(r, 0.0)).collect();
        for &(re, im) in &pairs {
            roots.push(c(re, im));
            roots.push(c(re, -im));
        }
        prop_assume!(!roots.is_empty());
        for i in 0..roots.len() {
            for j in 0..i {
                prop_assume!((roots[i] - roots[j]).norm() > 0.1);
            }
        }
        let coeffs: Vec<f64> = poly_from_roots(&roots).iter().map(|z| z.re).collect();
        let found = sorted(Polynomial::new(coeffs).roots().unwrap());
        let want = sorted(roots);
        for (a, b) in found.iter().zip(&want) {
            prop_assert!((a - b).norm() < 1e-7 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn adjugate_identity(m in rmat(3), s in sample_point()) {
        let (det, adj) = rm_det_adj(&m).unwrap();
        let mv = rm_eval(&m, s).unwrap();
        let av = adj.eval(s).unwrap();
        let lhs = &mv * &av;
        let rhs = CMat::identity(3, 3) * det.eval(s).unwrap();
        prop_assert!((&lhs - &rhs).norm() <= merge_bound(mv.norm() * av.norm()));
    }

    #[test]
    fn det_matches_pointwise(m in rmat(2), s in sample_point()) {
        let mv = rm_eval(&m, s).unwrap();
        let pointwise = mv[(0, 0)] * mv[(1, 1)] - mv[(0, 1)] * mv[(1, 0)];
        let det = m.det().unwrap().eval(s).unwrap();
        let scale = (mv[(0, 0)] * mv[(1, 1)]).norm() + (mv[(0, 1)] * mv[(1, 0)]).norm();
        prop_assert!((det - pointwise).norm() <= merge_bound(scale));
    }

    #[test]
    fn products_and_sums_evaluate_pointwise(a in entry(), b in entry(), s in sample_point()) {
        let (va, vb) = (a.eval(s).unwrap(), b.eval(s).unwrap());
        prop_assert!((a.mul(&b).eval(s).unwrap() - va * vb).norm() <= 1e-10 * (1.0 + (va * vb).norm()));
        prop_assert!((a.add(&b).eval(s).unwrap() - (va + vb)).norm() <= 1e-10 * (1.0 + va.norm() + vb.norm()));
    }

    #[test]
    fn polymatrix_adjugate(m in rmat(2), s in sample_point()) {
        let (x, q) = PolyMatrix::from_rational(&m);
        let back = x.over(&q).unwrap().eval(s).unwrap();
        prop_assert!((back - rm_eval(&m, s).unwrap()).norm() < 1e-10);
        let lhs = x.eval(s) * x.adj().unwrap().eval(s);
        let rhs = CMat::identity(2, 2) * x.det().unwrap().eval_complex(s);
        prop_assert!((lhs - &rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn division_reconstructs(
        p in prop::collection::vec(-5.0f64..5.0, 1..8),
        d in prop::collection::vec(-5.0f64..5.0, 1..4),
    ) {
        let p = Polynomial::new(p);
        let d = Polynomial::new(d);
        prop_assume!(!d.is_zero() && d.leading().abs() > 0.1);
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert!(r.is_zero() || r.degree() < d.degree().max(1));
        let back = &(&q * &d) + &r;
        let x = c(0.3, 0.7);
        let scale = 1.0 + p.magnitude_at(x) + q.magnitude_at(x) * d.magnitude_at(x) + r.magnitude_at(x);
        prop_assert!((back.eval_complex(x) - p.eval_complex(x)).norm() < 1e-12 * scale);
    }
}

#[test]
fn inverse_of_diagonal_rational_matrix() {
    let f = RationalFunction::new(Polynomial::linear(2.0, 1.0), Polynomial::linear(1.0, 1.0)).unwrap();
    let m = RationalMatrix::from_fn(2, 2, |i, j| if i == j { f.clone() } else { RationalFunction::zero() });
    let inv = m.inverse().unwrap();
    let s = c(0.5, 0.0);
    let v = inv.eval(s).unwrap();
    // (s + 1)/(s + 2) at s = 1/2
    assert!((v[(0, 0)] - c(0.6, 0.0)).norm() < 1e-14);
    assert!(v[(0, 1)].norm() < 1e-15);
}

#[test]
fn singular_matrix_is_reported() {
    let f = RationalFunction::new(Polynomial::one(), Polynomial::linear(1.0, 1.0)).unwrap();
    let m = RationalMatrix::from_fn(2, 2, |_, _| f.clone());
    assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
}

#[test]
fn evaluation_at_pole_is_an_error() {
    let f = RationalFunction::new(Polynomial::one(), Polynomial::linear(1.0, 1.0)).unwrap();
    assert!(matches!(f.eval(c(-1.0, 0.0)), Err(Error::PoleEvaluation(_))));
}

#[test]
fn stable_proper_classification() {
    let stable = RationalFunction::new(Polynomial::linear(0.0, 1.0), Polynomial::linear(3.0, 1.0)).unwrap();
    let unstable = RationalFunction::new(Polynomial::one(), Polynomial::linear(-3.0, 1.0)).unwrap();
    let improper = RationalFunction::from_poly(Polynomial::linear(0.0, 1.0));
    let mk = |f: &RationalFunction| RationalMatrix::from_fn(1, 1, |_, _| f.clone());
    assert!(mk(&stable).is_stable_proper().unwrap());
    assert!(!mk(&unstable).is_stable_proper().unwrap());
    assert!(!mk(&improper).is_stable_proper().unwrap());
}

#[test]
fn repeated_root_cluster_is_found() {
    // (s + 10)^6 has a tight cluster; the roots stay near -10
    let p = Polynomial::linear(10.0, 1.0).pow(6);
    for r in p.roots().unwrap() {
        assert!((r - c(-10.0, 0.0)).norm() < 1e-1);
    }
}

#[test]
fn eigenvalues_agree_with_characteristic_roots() {
    let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(-3.0, 0.0), c(0.5, 0.0)]);
    // s^2 - 1.5 s + 6.5
    let roots = sorted(Polynomial::new(vec![6.5, -1.5, 1.0]).roots().unwrap());
    let eig = sorted(linalg::eigenvalues(&m).unwrap());
    for (a, b) in roots.iter().zip(&eig) {
        assert!((a - b).norm() < 1e-12);
    }
}
