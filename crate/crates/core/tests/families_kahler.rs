use cpsym_core::families::{build_companion, build_frame_with, pencil_metric, sample_points, ComplexSign};
use cpsym_core::geometry::kahler_residuals;
use cpsym_core::{CaseSpec, Family, MetricFrame};

fn res(f: &MetricFrame) -> f64 {
    kahler_residuals(f, &f.christoffel().unwrap()).unwrap().max()
}

#[test]
fn every_family_companion_and_pencil_is_kahler() {
    for fam in Family::KAHLER_TYPES {
        let spec = CaseSpec::new(fam);
        for p in sample_points(&spec, 20, 42).unwrap() {
            let b = build_frame_with(&spec, &p, 2, ComplexSign::Corrected).unwrap();
            let gh = build_companion(&spec, &p, 2).unwrap();
            let (rg, rh) = (res(&b.frame), res(&gh));
            let mut rp = 0.0_f64;
            for (t1, t2) in [(1.0, 0.0), (0.0, 1.0), (0.3, 0.7), (2.0, -0.5), (-1.0, 0.4)] {
                let pen = pencil_metric(&b.frame, &gh, t1, t2).unwrap();
                rp = rp.max(res(&pen));
            }
            let m = rg.max(rh).max(rp).max(b.imag_residual);
            assert!(m < 1e-8, "{fam} at {p:?}: g {rg:e}, companion {rh:e}, pencil {rp:e}");
        }
    }
}

#[test]
fn constant_hsc_models_are_kahler() {
    for fam in [Family::Fs, Family::FsModified, Family::BergmanModified, Family::EuclidModified] {
        let spec = CaseSpec::new(fam);
        for p in sample_points(&spec, 20, 5).unwrap() {
            let b = build_frame_with(&spec, &p, 2, ComplexSign::Corrected).unwrap();
            assert!(res(&b.frame) < 1e-9, "{fam} {p:?}");
            assert!(b.imag_residual < 1e-12);
        }
    }
}
