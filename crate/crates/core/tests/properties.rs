use cl33::euclid::{embed_paravector, embed_vector, EuclidVector, Paravector};
use cl33::hodge::hodge_star;
use cl33::pipeline::{parse_pipeline, Pipeline, Step};
use cl33::projective::{projective_matrix_probe, ProjMatrix};
use cl33::transform::Transform;
use cl33::versor::Versor;
use cl33::{BladeMask, Multivector};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

fn multivector() -> impl Strategy<Value = Multivector> {
    prop::collection::vec(coeff(), 64).prop_map(|c| Multivector::from_coeffs(c.try_into().unwrap()))
}

fn homogeneous(k: usize) -> impl Strategy<Value = Multivector> {
    let masks: Vec<BladeMask> = BladeMask::iter_all().filter(|m| m.grade() == k).collect();
    prop::collection::vec(coeff(), masks.len()).prop_map(move |c| {
        let mut m = Multivector::zero();
        for (mask, x) in masks.iter().zip(c) {
            m.set(*mask, x);
        }
        m
    })
}

fn vector3() -> impl Strategy<Value = EuclidVector> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(x, y, z)| EuclidVector::new(x, y, z))
}

fn unit3() -> impl Strategy<Value = EuclidVector> {
    vector3()
        .prop_filter("not too short", |v| v.norm() > 0.1)
        .prop_map(|v| v.normalized())
}

fn orthonormal() -> impl Strategy<Value = (EuclidVector, EuclidVector)> {
    (unit3(), vector3())
        .prop_map(|(u, w)| (u, w - u * u.dot(&w)))
        .prop_filter("independent", |(_, p)| p.norm() > 0.1)
        .prop_map(|(u, p)| (u, p.normalized()))
}

fn close(a: &Multivector, b: &Multivector) -> bool {
    (*a - *b).max_abs() <= 1e-12 + 1e-9 * a.max_abs().max(b.max_abs())
}

fn step() -> impl Strategy<Value = Step> {
    let angle = -3.0f64..3.0;
    prop_oneof![
        unit3().prop_map(|n| Step::Reflect { n }),
        (orthonormal(), angle.clone()).prop_map(|((u, v), theta)| Step::Rotate { u, v, theta }),
        (orthonormal(), -1.0f64..1.0).prop_map(|((u, v), eta)| Step::HRotate { u, v, eta }),
        (orthonormal(), -1.0f64..1.0).prop_map(|((u, v), t)| Step::Shear { u, v, t }),
        (unit3(), -1.0f64..1.0).prop_map(|(u, t)| Step::Scale { u, t }),
        vector3().prop_map(|v| Step::Translate { v }),
        vector3().prop_map(|v| Step::Cotranslate { v }),
        (vector3(), unit3(), 1.0f64..3.0).prop_map(|(eye, n, c)| Step::Perspective { eye: eye * 0.1, n, c }),
        unit3().prop_map(|n| Step::Pseudo { n }),
    ]
}

proptest! {
    #[test]
    fn geometric_product_is_associative(a in multivector(), b in multivector(), c in multivector()) {
        prop_assert!(close(&((a * b) * c), &(a * (b * c))));
    }

    #[test]
    fn reversion_reverses_products(a in multivector(), b in multivector()) {
        prop_assert!(close(&(a * b).reversion(), &(b.reversion() * a.reversion())));
        prop_assert!(close(&(a * b).grade_involution(), &(a.grade_involution() * b.grade_involution())));
        prop_assert!(close(&(a * b).conjugation(), &(b.conjugation() * a.conjugation())));
    }

    #[test]
    fn leibniz_rule(v in homogeneous(1), k in 0usize..4, j in 0usize..3, seed in multivector()) {
        let a = seed.grade(k);
        let b = (seed * v).grade(j);
        let contract = |x: &Multivector| Multivector::vector_contract(&v, x).unwrap();
        let lhs = contract(&a.outer_product(&b));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = contract(&a).outer_product(&b) + a.outer_product(&contract(&b)) * sign;
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn vector_product_splits(v in homogeneous(1), k in 0usize..7, seed in multivector()) {
        let a = seed.grade(k);
        let split = Multivector::vector_contract(&v, &a).unwrap() + v.outer_product(&a);
        prop_assert!(close(&(v * a), &split));
    }

    #[test]
    fn hodge_star_round_trips(c in prop::collection::vec(-2.0f64..2.0, 8)) {
        let e = |i| embed_vector(&EuclidVector::axis(i));
        let basis = [
            Multivector::one(), e(1), e(2), e(3),
            e(1).outer_product(&e(2)), e(1).outer_product(&e(3)), e(2).outer_product(&e(3)),
            e(1).outer_product(&e(2)).outer_product(&e(3)),
        ];
        let a = basis.iter().zip(&c).fold(Multivector::zero(), |acc, (b, x)| acc + *b * *x);
        let back = hodge_star(&hodge_star(&a).unwrap()).unwrap();
        prop_assert!(close(&back, &a));
    }

    #[test]
    fn four_vector_sandwich_identity(psi4 in homogeneous(4), p in vector3()) {
        let pv = embed_vector(&p);
        let lhs = (psi4 * pv * psi4).grade(5);
        let rhs = -(psi4 * psi4).grade(4).outer_product(&pv);
        prop_assert!(close(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn even_versors_do_not_mix_weight(
        (u, v) in orthonormal(), s in -1.0f64..1.0, p in vector3(), pick in 0usize..5
    ) {
        let versor = match pick {
            0 => Versor::rotation(&u, &v, 2.0 * s).unwrap(),
            1 => Versor::hyperbolic(&u, &v, s).unwrap(),
            2 => Versor::shear(&u, &v, s).unwrap(),
            3 => Versor::scale(&u, s).unwrap(),
            _ => {
                let n = Versor::reflection(&u).unwrap();
                n.then_after(&n)
            }
        };
        let pv = embed_vector(&p);
        let image = versor.u * pv * versor.u.reversion();
        prop_assert!(image.scalar_part().abs() <= 1e-12);
        prop_assert!(versor.norm_product().grade(1).max_abs() <= 1e-12);
    }

    #[test]
    fn weight_is_kept_by_linear_versors(
        (u, v) in orthonormal(), s in -1.0f64..1.0, p in vector3(), w in -2.0f64..2.0
    ) {
        let pm = embed_paravector(&Paravector::new(w, p));
        for versor in [
            Versor::rotation(&u, &v, s).unwrap(),
            Versor::hyperbolic(&u, &v, s).unwrap(),
            Versor::shear(&u, &v, s).unwrap(),
            Versor::scale(&u, s).unwrap(),
        ] {
            prop_assert!((versor.sandwich(&pm).scalar_part() - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn pipeline_text_round_trips(steps in prop::collection::vec(step(), 0..6)) {
        let pipeline = Pipeline { steps };
        let text = pipeline.to_string();
        prop_assert_eq!(parse_pipeline(&text).unwrap(), pipeline);
    }

    #[test]
    fn matrix_probe_is_idempotent(steps in prop::collection::vec(step(), 1..4)) {
        let t = Pipeline { steps }.transform().unwrap();
        let m = projective_matrix_probe(&t).unwrap();
        let twice = projective_matrix_probe(&Transform::Stages(vec![t.clone(), t])).unwrap();
        let tol = 1e-9 * m.max_abs().powi(2).max(1.0);
        prop_assert!(twice.max_abs_diff(&m.compose(&m)) <= tol);
        prop_assert!(m.compose(&ProjMatrix::identity()) == m);
    }
}
