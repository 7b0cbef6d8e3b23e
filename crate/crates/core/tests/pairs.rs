use hardyforge::besselpair::{check_pair, ode_residual, BesselPair, PairId, PairParams, ShootingOptions};
use hardyforge::exprlang::{parse, Bindings};
use hardyforge::geometry::ModelManifold;
use hardyforge::identities::{build_case, verify, CaseId, CaseParams};
use std::sync::Arc;

fn param_grid(id: PairId, n: u32) -> Vec<PairParams> {
    let nf = n as f64;
    let lambdas = [0.0, 1.0, 0.5 * (nf - 2.0)];
    let alphas = [0.0, 1.0, 0.5 * (nf - 2.0)];
    let radii = [1.0, 2.0];
    let mut out = Vec::new();
    for &lambda in &lambdas {
        for &alpha in &alphas {
            for &radius in &radii {
                out.push(PairParams {
                    lambda: Some(lambda),
                    alpha: Some(alpha),
                    radius: Some(radius),
                });
            }
        }
    }
    let _ = id;
    out
}

#[test]
fn catalog_pairs_solve_their_ode() {
    let mut checked = 0;
    for id in PairId::ALL {
        for n in [3u32, 4, 5, 8] {
            for params in param_grid(id, n) {
                // invalid combinations (e.g. alpha above its range) are skipped
                let Ok(pair) = BesselPair::catalog(id, n, params) else { continue };
                let upper = pair.interval.upper.unwrap_or(10.0);
                for i in 0..50 {
                    let r = upper * (i as f64 + 0.5) / 50.0;
                    let res = ode_residual(&pair, r);
                    assert!(res <= 1e-6, "{id} N={n} {params:?} r={r}: {res:e}");
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn phi_is_positive_on_the_interval() {
    for id in PairId::ALL {
        for n in [3u32, 5] {
            let pair = BesselPair::catalog(id, n, PairParams::default()).unwrap();
            let upper = pair.interval.upper.unwrap_or(20.0);
            for i in 1..200 {
                let r = upper * i as f64 / 200.0;
                assert!(pair.phi(r) > 0.0, "{id} at {r}");
            }
        }
    }
}

fn shoot(v: &str, w: &str, n: u32, radius: f64) -> hardyforge::besselpair::PairVerdict {
    check_pair(
        &parse(v).unwrap(),
        &parse(w).unwrap(),
        &Bindings::default(),
        radius,
        n,
        &ShootingOptions::for_radius(radius),
    )
    .unwrap()
}

#[test]
fn critical_hardy_weight_is_a_pair_and_larger_is_not() {
    let ok = shoot("1", "((N-2)/2)^2 / r^2", 4, 1.0);
    assert!(ok.is_pair && ok.first_zero.is_none());
    // the shot solution with phi'(eps) = 0 is a combination of r^-1 and
    // r^-1 ln r; it stays positive on (eps, 1)
    let bad = shoot("1", "1.5*((N-2)/2)^2 / r^2", 4, 1.0);
    assert!(!bad.is_pair);
    let z = bad.first_zero.unwrap();
    // Euler oracle: phi = r^-1 (A cos(mu ln r) + B sin(mu ln r)), mu^2 = 0.5,
    // with phi'(eps) = 0; the first zero is where mu ln(r/eps) = pi - atan(mu)
    let mu = 0.5f64.sqrt();
    let eps = 1e-6;
    let want = eps * ((std::f64::consts::PI - mu.atan()) / mu).exp();
    assert!((z - want).abs() < 1e-6 * want, "{z} vs {want}");
}

#[test]
fn constant_weight_shoots_like_sinc() {
    // V = 1, W = k^2 in N = 3: the solution is sin(k r)/r, vanishing at pi/k
    let v = shoot("1", "4", 3, 2.0);
    assert!(!v.is_pair);
    let want = std::f64::consts::FRAC_PI_2;
    assert!((v.first_zero.unwrap() - want).abs() < 1e-7, "{:?}", v.first_zero);
}

#[test]
fn solved_pair_closes_the_generic_identity() {
    let (vs, ws) = ("r^(-1)", "((N-3)/2)^2 * r^(-3)");
    let n = 5;
    let v = parse(vs).unwrap();
    let w = parse(ws).unwrap();
    let env = Bindings {
        n: Some(n as f64),
        radius: Some(3.0),
        ..Default::default()
    };
    let verdict = check_pair(&v, &w, &env, 3.0, n, &ShootingOptions::for_radius(3.0)).unwrap();
    assert!(verdict.is_pair);
    let pair = Arc::new(BesselPair::from_solution(v, w, env, n, &verdict).unwrap());
    let mut params = CaseParams::new(n);
    params.custom_pair = Some(pair);
    let case = build_case(CaseId::T1Generic, &params).unwrap();
    for b in [0.0, 1.0] {
        let m = ModelManifold::new(n, b).unwrap();
        for p in case.standard_profiles() {
            let r = verify(&case, &m, &p.with_ell(1), 1e-6).unwrap();
            assert!(r.pass, "{:e}", r.rel_residual);
        }
    }
}

#[test]
fn pair_parameter_ranges_are_enforced() {
    let bad = [
        (PairId::BvBessel, PairParams { lambda: Some(3.0), ..Default::default() }, 4),
        (PairId::BvBesselAlpha, PairParams { alpha: Some(2.0), ..Default::default() }, 4),
        (PairId::CriticalLog, PairParams { radius: Some(-1.0), ..Default::default() }, 4),
        (PairId::EuclidPower, PairParams::default(), 2),
    ];
    for (id, p, n) in bad {
        assert!(BesselPair::catalog(id, n, p).is_err(), "{id}");
    }
}

#[test]
fn shooting_confirms_catalog_pairs() {
    use hardyforge::besselpair::check_pair_with;
    for id in PairId::ALL {
        for n in [3u32, 4, 8] {
            let pair = BesselPair::catalog(id, n, PairParams::default()).unwrap();
            let radius = pair.interval.upper.unwrap_or(5.0);
            let opts = ShootingOptions::for_radius(radius);
            let verdict = check_pair_with(|r| Ok(pair.v(r)), |r| Ok(pair.w(r)), radius, n, &opts)
                .unwrap_or_else(|e| panic!("{id} N={n}: {e}"));
            assert!(verdict.is_pair, "{id} N={n}: zero at {:?}", verdict.first_zero);
        }
    }
}
