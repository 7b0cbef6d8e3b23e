use hardyforge::geometry::ModelManifold;
use hardyforge::identities::{build_case, verify, CaseId, CaseParams, Variant};

fn curvatures(id: CaseId) -> Vec<f64> {
    match id.pinned_curvature() {
        Some(b) => vec![b],
        None => vec![0.0, 0.5, 1.0],
    }
}

fn tol(id: CaseId) -> f64 {
    if id.is_shifted() {
        1e-7
    } else {
        1e-8
    }
}

#[test]
fn every_case_closes_on_standard_profiles() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for id in CaseId::ALL {
        for n in [3u32, 4, 5, 8] {
            for variant in [Variant::Gradient, Variant::Radial] {
                let case = build_case(id, &CaseParams::new(n).variant(variant)).unwrap();
                for b in curvatures(id) {
                    let m = ModelManifold::new(n, b).unwrap();
                    let ells: &[u32] = match variant {
                        Variant::Gradient => &[0, 1, 2],
                        Variant::Radial => &[0],
                    };
                    for &ell in ells {
                        for p in case.standard_profiles() {
                            let p = p.with_ell(ell);
                            match verify(&case, &m, &p, tol(id)) {
                                Ok(r) => {
                                    worst = worst.max(r.rel_residual);
                                    if !r.pass {
                                        failures.push(format!(
                                            "{id} N={n} b={b} {variant} {p}: rel={:e} margins={:?}",
                                            r.rel_residual, r.margins
                                        ));
                                    }
                                }
                                Err(e) => failures.push(format!("{id} N={n} b={b} {variant} {p}: {e}")),
                            }
                        }
                    }
                }
            }
        }
    }
    println!("worst rel residual {worst:e}");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

// Perturbing any single term must break an identity: guards against terms
// that silently evaluate to zero or cancel by construction.
#[test]
fn perturbed_terms_break_identities() {
    for id in CaseId::ALL.into_iter().filter(|id| !id.is_inequality()) {
        let n = 5;
        let case = build_case(id, &CaseParams::new(n)).unwrap();
        let b = id.pinned_curvature().unwrap_or(0.5);
        let m = ModelManifold::new(n, b).unwrap();
        let p = case.standard_profiles()[0].with_ell(1);
        for k in 0..case.terms.len() {
            let mut bad = case.clone();
            bad.terms[k].coefficient *= 1.001;
            let r = verify(&bad, &m, &p, tol(id)).unwrap();
            assert!(!r.pass, "{id}: scaling term {} went unnoticed", case.terms[k].name);
        }
    }
}

#[test]
fn hyperbolic_critical_log_needs_full_factor() {
    let case = build_case(CaseId::HCritlog, &CaseParams::new(4)).unwrap();
    let m = ModelManifold::hyperbolic(4).unwrap();
    let p = case.standard_profiles()[1];
    assert!(verify(&case, &m, &p, 1e-8).unwrap().pass);
    let mut half = case.clone();
    half.terms[3].coefficient *= 0.5;
    let r = verify(&half, &m, &p, 1e-8).unwrap();
    assert!(r.rel_residual > 1e-4, "{}", r.rel_residual);
}

#[test]
fn expected_signs_hold() {
    for id in CaseId::ALL {
        let case = build_case(id, &CaseParams::new(4)).unwrap();
        let b = id.pinned_curvature().unwrap_or(1.0);
        let m = ModelManifold::new(4, b).unwrap();
        for p in case.standard_profiles() {
            let r = verify(&case, &m, &p, tol(id)).unwrap();
            for (t, v) in case.terms.iter().zip(&r.terms) {
                if t.expect_nonnegative {
                    assert!(v.value >= -1e-12 * r.scale(), "{id} {}: {}", t.name, v.value);
                }
            }
        }
    }
}

#[test]
fn comparison_with_flatter_model_keeps_a_margin() {
    for bc in [0.0, 0.3, 1.0] {
        let case = build_case(CaseId::Ct1Ineq, &CaseParams::new(5).comparison_b(bc)).unwrap();
        let m = ModelManifold::new(5, 1.0).unwrap();
        for p in case.standard_profiles() {
            let r = verify(&case, &m, &p, 1e-8).unwrap();
            assert!(r.pass, "{r:#?}");
            assert!(r.margins[1].value > 0.0 || bc == 0.0);
        }
    }
    let case = build_case(CaseId::Ct1Ineq, &CaseParams::new(5).comparison_b(2.0)).unwrap();
    let m = ModelManifold::new(5, 1.0).unwrap();
    assert!(verify(&case, &m, &case.standard_profiles()[0], 1e-8).is_err());
}

#[test]
fn stability_estimate_holds_with_room() {
    for (n, lambda, radius) in [(3, 0.0, 1.0), (5, 1.5, 2.0), (8, -1.0, 0.7)] {
        let case = build_case(CaseId::C4Stability, &CaseParams::new(n).lambda(lambda).radius(radius)).unwrap();
        let m = ModelManifold::euclidean(n).unwrap();
        for p in case.standard_profiles() {
            for ell in [0, 2] {
                let r = verify(&case, &m, &p.with_ell(ell), 1e-8).unwrap();
                assert!(r.pass && r.margins[0].value > 0.0, "{r:#?}");
            }
        }
    }
    let case = build_case(CaseId::C4Stability, &CaseParams::new(4)).unwrap();
    let m = ModelManifold::new(4, 1.0).unwrap();
    assert!(verify(&case, &m, &case.standard_profiles()[0], 1e-8).is_err());
}

#[test]
fn pinned_cases_reject_other_curvatures() {
    let case = build_case(CaseId::T31, &CaseParams::new(4)).unwrap();
    let m = ModelManifold::new(4, 0.5).unwrap();
    assert!(verify(&case, &m, &case.standard_profiles()[0], 1e-8).is_err());
}

#[test]
fn profiles_must_fit_the_interval() {
    let case = build_case(CaseId::C2, &CaseParams::new(4).radius(1.0)).unwrap();
    let m = ModelManifold::euclidean(4).unwrap();
    let p = hardyforge::profile::TestProfile::bump(0.8, 0.5);
    assert!(verify(&case, &m, &p, 1e-8).is_err());
    let shifted = build_case(CaseId::C3Global, &CaseParams::new(4)).unwrap();
    assert!(verify(&shifted, &m, &hardyforge::profile::TestProfile::bump(0.8, 0.5), 1e-7).is_err());
}
