use cpsym_core::jet::selfcheck::{compare_partials, finite_difference_check};
use cpsym_core::{ComplexJet, Jet};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn exp_sin_matches_finite_differences() {
    let (worst, _, n) = compare_partials(|x| Ok(&x[0].exp() * &x[0].sin()), &[0.7], 4, 1e-5).unwrap();
    assert_eq!(n, 4);
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn tan_matches_finite_differences() {
    let (worst, _, n) = compare_partials(|x| x[0].tan(), &[0.3], 4, 1e-5).unwrap();
    assert_eq!(n, 4);
    assert!(worst < 1e-5, "{worst:e}");
    // closed form: tan' = 1 + tan², tan'' = 2 tan (1 + tan²)
    let t = Jet::variable(0, 0.3, 1, 4).unwrap().tan().unwrap();
    let v = 0.3f64.tan();
    assert!((t.partial(&[1]).unwrap() - (1.0 + v * v)).abs() < 1e-14);
    assert!((t.partial(&[2]).unwrap() - 2.0 * v * (1.0 + v * v)).abs() < 1e-14);
}

#[test]
fn exp_taylor_coefficients() {
    let e = Jet::variable(0, 0.0, 1, 3).unwrap().exp();
    let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
    for (a, b) in e.coeffs().iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(e.partial(&[3]).unwrap(), 1.0);
}

#[test]
fn sqrt_of_a_constant_has_no_higher_terms() {
    let s = Jet::constant(4.0, 2, 3).sqrt().unwrap();
    assert_eq!(s.value(), 2.0);
    assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
}

#[test]
fn mixed_partial_of_a_product() {
    let x = Jet::seed_point(&[1.0, 1.0], 2).unwrap();
    let xy = &x[0] * &x[1];
    assert_eq!(xy.partial(&[1, 1]).unwrap(), 1.0);
    let sq = &x[0] * &x[0];
    assert_eq!(sq.partial(&[2, 0]).unwrap(), 2.0);
}

#[test]
fn seeding_outside_the_variable_range_fails() {
    assert!(Jet::variable(4, 0.0, 4, 2).is_err());
    assert!(Jet::variable(1, 0.0, 1, 2).is_err());
}

#[test]
fn domain_violations_are_errors() {
    let neg = Jet::constant(-1.0, 1, 2);
    assert!(neg.ln().is_err());
    assert!(neg.sqrt().is_err());
    assert!(neg.powf(0.5).is_err());
    assert!(neg.powf(2.0).is_ok());
    let z = Jet::zero(1, 2);
    assert!(Jet::constant(1.0, 1, 2).try_div(&z).is_err());
}

#[test]
fn random_composites_agree_with_finite_differences() {
    let r = finite_difference_check(100, 2024, 4, 1e-5).unwrap();
    assert!(r.compared > 1000);
    assert!(r.worst < 1e-4, "{} at {:?}, index {:?}: {:e}", r.expression, r.point, r.multi_index, r.worst);
}

#[test]
fn complex_exponential_matches_real_parts() {
    let x = Jet::seed_point(&[0.3, -0.8], 3).unwrap();
    let z = ComplexJet::new(x[0].clone(), x[1].clone()).unwrap();
    let e = z.exp();
    let re = &x[0].exp() * &x[1].cos();
    let im = &x[0].exp() * &x[1].sin();
    for (a, b) in e.re.coeffs().iter().zip(re.coeffs()) {
        assert!((a - b).abs() < 1e-14);
    }
    for (a, b) in e.im.coeffs().iter().zip(im.coeffs()) {
        assert!((a - b).abs() < 1e-14);
    }
    let v = e.value();
    assert!((v - Complex64::new(0.3, -0.8).exp()).norm() < 1e-14);
}

fn jet_strategy(nvars: usize, order: usize) -> impl Strategy<Value = Jet> {
    let len = Jet::zero(nvars, order).coeffs().len();
    prop::collection::vec(-2.0..2.0f64, len)
        .prop_map(move |c| Jet::from_taylor_coeffs(nvars, order, c).unwrap())
}

fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= tol * scale)
}

proptest! {
    #[test]
    fn leibniz_rule(a in jet_strategy(3, 3), b in jet_strategy(3, 3), i in 0usize..3) {
        let lhs = (&a * &b).derivative(i).unwrap();
        let rhs = &(&a.derivative(i).unwrap() * &b.truncate(2)) + &(&a.truncate(2) * &b.derivative(i).unwrap());
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn add_and_mul_are_associative_and_commutative(a in jet_strategy(2, 4), b in jet_strategy(2, 4), c in jet_strategy(2, 4)) {
        prop_assert!(close(&(&(&a + &b) + &c), &(&a + &(&b + &c)), 1e-13));
        prop_assert!(close(&(&a + &b), &(&b + &a), 0.0));
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-13));
        prop_assert!(close(&(&a * &b), &(&b * &a), 1e-13));
    }

    #[test]
    fn division_round_trips(a in jet_strategy(4, 3), b in jet_strategy(4, 3)) {
        prop_assume!(b.value().abs() > 0.1);
        let q = a.try_div(&b).unwrap();
        prop_assert!(close(&(&q * &b), &a, 1e-12 * (1.0 + q.max_abs())));
    }

    #[test]
    fn chain_rule_through_elementary_functions(x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let f = |v: &[Jet]| -> cpsym_core::Result<Jet> {
            let inner = &v[0].sin() + &(&v[1] * &v[0]);
            Ok(&inner.scale(0.5).exp() + &inner.cos().add_scalar(2.0).ln()?)
        };
        let (worst, _, _) = compare_partials(f, &[x, y], 4, 1e-5).unwrap();
        prop_assert!(worst < 1e-5);
    }
}

