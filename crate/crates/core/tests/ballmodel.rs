use hardyforge::identities::{build_case, norms_in_both_charts, verify_ballmodel_oracle, CaseId, CaseParams};
use hardyforge::besselpair::PairId;
use hardyforge::profile::TestProfile;

#[test]
fn hyperbolic_cases_agree_in_both_charts() {
    for id in [CaseId::T6BallModel, CaseId::V2Hyperbolic, CaseId::T31, CaseId::T32, CaseId::HLambda] {
        for n in [3, 4, 6] {
            let case = build_case(id, &CaseParams::new(n)).unwrap();
            for p in case.standard_profiles() {
                for ell in [0, 1] {
                    let r = verify_ballmodel_oracle(&case, &p.with_ell(ell), 1e-8).unwrap();
                    assert!(r.pass, "{id} N={n} {p}: {:e}", r.max_rel_discrepancy);
                }
            }
        }
    }
}

#[test]
fn ballmodel_with_green_pair_matches_v2() {
    let n = 5;
    let t6 = build_case(CaseId::T6BallModel, &CaseParams::new(n).pair(PairId::HyperbolicG)).unwrap();
    let v2 = build_case(CaseId::V2Hyperbolic, &CaseParams::new(n)).unwrap();
    let m = hardyforge::geometry::ModelManifold::hyperbolic(n).unwrap();
    for p in t6.standard_profiles() {
        let a = hardyforge::identities::verify(&t6, &m, &p, 1e-8).unwrap();
        let b = hardyforge::identities::verify(&v2, &m, &p, 1e-8).unwrap();
        assert!(a.pass && b.pass);
        for (x, y) in a.terms.iter().zip(&b.terms) {
            assert!((x.value - y.value).abs() <= 1e-9 * x.value.abs().max(1e-300), "{} vs {}", x.value, y.value);
        }
    }
}

#[test]
fn norms_agree_across_charts() {
    for p in [TestProfile::bump(1.5, 1.0), TestProfile::poly_bump(3.0, 2.5).with_ell(2)] {
        for [a, b] in [norms_in_both_charts(4, &p).unwrap()] {
            for (g, ball) in [a, b] {
                assert!((g - ball).abs() <= 1e-10 * g.abs(), "{g} {ball}");
            }
        }
    }
}
