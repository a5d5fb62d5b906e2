use cpsym_core::cproj::*;
use cpsym_core::families::{build_companion, build_frame, is_regular, sample_points};
use cpsym_core::{CaseSpec, Family, GChoice, Jet, MetricFrame, Params};
use proptest::prelude::*;

fn max_abs(x: impl IntoIterator<Item = f64>) -> f64 {
    x.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn with(family: Family, params: Params) -> CaseSpec {
    CaseSpec::with_params(family, params)
}

/// `L` is `g`-self-adjoint and commutes with `J`.
fn l_defects(spec: &CaseSpec, p: &[f64; 4]) -> (f64, f64) {
    let g = build_frame(spec, p, 1).unwrap();
    let gh = build_companion(spec, p, 1).unwrap();
    let l = l_tensor(&g, &gh).unwrap();
    let ll = l.l_lower.values();
    let sym = max_abs((0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| ll[i * 4 + j] - ll[j * 4 + i]));
    let (lv, jv) = (l.l.values(), g.j.values());
    let mul = |a: &[f64], b: &[f64], i: usize, j: usize| (0..4).map(|k| a[i * 4 + k] * b[k * 4 + j]).sum::<f64>();
    let comm = max_abs((0..16).map(|ij| mul(&lv, &jv, ij / 4, ij % 4) - mul(&jv, &lv, ij / 4, ij % 4)));
    (sym / (1.0 + max_abs(ll)), comm / (1.0 + max_abs(lv)))
}

#[test]
fn l_is_self_adjoint_and_complex_linear() {
    for fam in Family::KAHLER_TYPES {
        let spec = CaseSpec::new(fam);
        for p in sample_points(&spec, 5, 1).unwrap() {
            let (sym, comm) = l_defects(&spec, &p);
            assert!(sym < 1e-10, "{fam}: L not self-adjoint ({sym:e})");
            assert!(comm < 1e-10, "{fam}: [L, J] = {comm:e}");
        }
    }
}

#[test]
fn l_of_a_metric_with_itself_is_the_identity() {
    let spec = CaseSpec::new(Family::C2);
    let p = sample_points(&spec, 1, 3).unwrap()[0];
    let g = build_frame(&spec, &p, 2).unwrap();
    let l = l_tensor(&g, &g).unwrap();
    let v = l.l.values();
    assert!(max_abs((0..16).map(|k| v[k] - if k % 5 == 0 { 1.0 } else { 0.0 })) < 1e-13);
    assert!(max_abs(l.lambda_form.values()) < 1e-13);
}

#[test]
fn both_determinant_ratios_agree_only_when_the_determinants_do() {
    let spec = CaseSpec::new(Family::L1);
    let p = sample_points(&spec, 1, 3).unwrap()[0];
    let g = build_frame(&spec, &p, 1).unwrap();
    let gh = build_companion(&spec, &p, 1).unwrap();
    let a = l_tensor_with(&g, &gh, DetRatio::HatOverG).unwrap().l.values();
    let b = l_tensor_with(&g, &gh, DetRatio::GOverHat).unwrap().l.values();
    assert!(max_abs(a.iter().zip(&b).map(|(x, y)| x - y)) > 1e-3);
}

#[test]
fn hsc_separates_special_from_generic_parameters() {
    let special = [
        with(Family::L1, Params { eps: Some(-1.0), c0: Some(1.0), c1: Some(-1.0), ..Default::default() }),
        with(Family::C1, Params { vs0: Some(0.0), ..Default::default() }),
        with(Family::L2, Params { beta: Some(-2.0), eps: Some(-1.0), d0: Some(1.0), d1: Some(1.0), ..Default::default() }),
        with(Family::D1, Params { g: Some(GChoice::Linear { mu1: 0.3, mu2: 2.0 }), ..Default::default() }),
        CaseSpec::new(Family::Fs),
    ];
    for spec in &special {
        let h = hsc_classify(spec, 20, 9, 1e-8).unwrap();
        assert!(h.constant, "{:?}: spread {:e}", spec.family, h.spread);
        assert!(h.witness.is_none());
    }
    for fam in Family::KAHLER_TYPES {
        let h = hsc_classify(&CaseSpec::new(fam), 20, 9, 1e-8).unwrap();
        assert!(!h.constant, "{fam}");
        let w = h.witness.expect("non-constant HSC carries a witness");
        assert!((w.value - w.other).abs() > 1e-6);
    }
}

#[test]
fn the_fubini_study_value_is_four() {
    let h = hsc_classify(&CaseSpec::new(Family::Fs), 20, 2, 1e-8).unwrap();
    assert!((h.mean - 4.0).abs() < 1e-10, "{}", h.mean);
    let h = hsc_classify(&CaseSpec::new(Family::EuclidModified), 20, 2, 1e-8).unwrap();
    assert!(h.mean.abs() < 1e-10);
}

#[test]
fn first_sinjukov_equation_holds_on_every_pair() {
    for fam in Family::KAHLER_TYPES {
        let spec = CaseSpec::new(fam);
        let sps: Vec<SinjukovPoint> = sample_points(&spec, 10, 4)
            .unwrap()
            .iter()
            .map(|p| SinjukovPoint::new(&spec, p, 3).unwrap())
            .collect();
        let r = sinjukov_residuals(&sps).unwrap();
        assert!(r.eq1 < 1e-8, "{fam}: {:e}", r.eq1);
    }
}

#[test]
fn liouville_mobility_vanishes_on_the_special_parameters_only() {
    let special = with(Family::L1, Params { eps: Some(-1.0), c0: Some(1.0), c1: Some(1.0), ..Default::default() });
    let generic = CaseSpec::new(Family::L1);
    for p in sample_points(&special, 5, 8).unwrap() {
        assert!(mobility_condition_liouville(&special, &p).unwrap().abs() < 1e-9);
    }
    for p in sample_points(&generic, 5, 8).unwrap() {
        assert!(mobility_condition_liouville(&generic, &p).unwrap().abs() > 1e-4);
    }
}

#[test]
fn degenerate_mobility_vanishes_for_d1_and_d2a_only() {
    for (fam, vanishes) in [(Family::D1, true), (Family::D2a, true), (Family::D2b, false), (Family::D3, false)] {
        let spec = CaseSpec::new(fam);
        for x0 in [0.3, 0.7, 1.4] {
            let rel = mobility_relative_degenerate(&spec, x0).unwrap();
            let terms = mobility_terms_degenerate(&spec, x0).unwrap();
            let sum: f64 = terms.iter().sum();
            assert!((sum - mobility_condition_degenerate(&spec, x0).unwrap()).abs() < 1e-12 * (1.0 + sum.abs()));
            assert_eq!(rel < 1e-12, vanishes, "{fam} at {x0}: {rel:e}");
        }
    }
}

fn common_points(n: usize) -> Vec<[f64; 4]> {
    let models = [Family::Fs, Family::FsModified, Family::BergmanModified, Family::EuclidModified];
    let specs: Vec<CaseSpec> = models.iter().map(|&f| CaseSpec::new(f)).collect();
    sample_points(&specs[0], 4 * n, 6)
        .unwrap()
        .into_iter()
        .filter(|p| specs.iter().all(|s| is_regular(s, p)))
        .take(n)
        .collect()
}

#[test]
fn the_constant_hsc_models_are_c_projectively_equivalent() {
    let a = CaseSpec::new(Family::Fs);
    for other in [Family::FsModified, Family::BergmanModified, Family::EuclidModified] {
        let b = CaseSpec::new(other);
        for p in common_points(5) {
            let c = cproj_connection_check(&build_frame(&a, &p, 1).unwrap(), &build_frame(&b, &p, 1).unwrap()).unwrap();
            assert!(c.remainder_strict < 1e-9, "{other}: {:e}", c.remainder_strict);
        }
    }
}

/// A non-constant conformal rescaling changes the connection outside the
/// c-projective pattern.
#[test]
fn a_conformal_rescaling_is_not_c_projective() {
    let spec = CaseSpec::new(Family::Fs);
    let p = common_points(1)[0];
    let g = build_frame(&spec, &p, 1).unwrap();
    let f = Jet::variable(0, p[0], 4, g.order()).unwrap().scale(0.7).exp();
    let scaled = MetricFrame::from_metric_and_j(g.g.map(|c| c.try_mul(&f).unwrap()), g.j.clone()).unwrap();
    let c = cproj_connection_check(&g, &scaled).unwrap();
    assert!(c.remainder > 1e-3, "{:e}", c.remainder);
    let same = MetricFrame::from_metric_and_j(g.g.scale(3.0), g.j.clone()).unwrap();
    assert!(cproj_connection_check(&g, &same).unwrap().remainder_strict < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn l_stays_self_adjoint_across_seeds(seed in 0u64..10_000, k in 0usize..12) {
        let spec = CaseSpec::new(Family::KAHLER_TYPES[k]);
        let p = sample_points(&spec, 1, seed).unwrap()[0];
        let (sym, comm) = l_defects(&spec, &p);
        prop_assert!(sym < 1e-10 && comm < 1e-10);
    }

    #[test]
    fn hsc_classification_is_seed_independent_for_the_models(seed in 0u64..10_000) {
        for fam in [Family::Fs, Family::BergmanModified] {
            prop_assert!(hsc_classify(&CaseSpec::new(fam), 10, seed, 1e-8).unwrap().constant);
        }
    }
}
