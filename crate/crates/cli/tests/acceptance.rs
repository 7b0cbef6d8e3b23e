//! Acceptance run: one PASS/FAIL line per criterion. Built without the
//! libtest harness so the lines always reach the console.

use std::process::Command;
use std::time::Instant;

use hardyforge::besselpair::{check_pair, ode_residual, BesselPair, PairId, PairParams, ShootingOptions};
use hardyforge::exprlang::{parse, Bindings};
use hardyforge::geometry::ModelManifold;
use hardyforge::identities::{
    build_case, norms_in_both_charts, verify, verify_ballmodel_oracle, CaseId, CaseParams, Functional, TermKind,
};
use hardyforge::profile::TestProfile;
use hardyforge::sharpness::{sharpness_scan, Target, TrialFamily};
use hardyforge::specfun::bessel_first_zero;

type Check = Result<String, String>;

fn curvatures(id: CaseId) -> Vec<f64> {
    id.pinned_curvature().map_or(vec![0.0, 1.0], |b| vec![b])
}

fn identity_suite() -> Check {
    let start = Instant::now();
    let mut cells = 0;
    let mut worst = 0.0f64;
    for id in CaseId::ALL {
        for n in [3u32, 4, 5, 8] {
            let case = build_case(id, &CaseParams::new(n)).map_err(|e| format!("{id} N={n}: {e}"))?;
            let profiles = case.standard_profiles();
            if profiles.len() != 3 {
                return Err(format!("{id}: expected three profiles"));
            }
            for b in curvatures(id) {
                let m = ModelManifold::new(n, b).unwrap();
                for p in &profiles {
                    for ell in 0..=2 {
                        let r = verify(&case, &m, &p.with_ell(ell), 1e-8)
                            .map_err(|e| format!("{id} N={n} b={b} {p}: {e}"))?;
                        cells += 1;
                        worst = worst.max(r.rel_residual);
                        if !r.pass {
                            return Err(format!("{id} N={n} b={b} {p} l={ell}: rel_residual {:e}", r.rel_residual));
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("{cells} cells over 17 cases, max rel_residual {worst:.2e}, {secs:.2} s"))
}

fn pair_catalog() -> Check {
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for id in PairId::ALL {
        for n in [3u32, 4, 5, 8] {
            let half = 0.5 * (n as f64 - 2.0);
            for lambda in [0.0, 1.0, half] {
                for alpha in [0.0, 1.0, half] {
                    for radius in [1.0, 2.0] {
                        let params = PairParams {
                            lambda: Some(lambda),
                            alpha: Some(alpha),
                            radius: Some(radius),
                        };
                        // combinations outside a pair's range are not samples
                        let Ok(pair) = BesselPair::catalog(id, n, params) else { continue };
                        let upper = pair.interval.upper.unwrap_or(10.0);
                        for i in 0..50 {
                            let r = upper * (i as f64 + 0.5) / 50.0;
                            let res = ode_residual(&pair, r);
                            worst = worst.max(res);
                            if !(res <= 1e-6) {
                                return Err(format!("{id} N={n} {params:?} at r={r}: {res:e}"));
                            }
                        }
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} parameter samples x 50 points, max scaled residual {worst:.2e}"))
}

fn first_zeros() -> Check {
    let z0 = bessel_first_zero(0.0).map_err(|e| e.to_string())?;
    let zh = bessel_first_zero(0.5).map_err(|e| e.to_string())?;
    let z0s = format!("{z0:.4}");
    if z0s != "2.4048" {
        return Err(format!("z0 = {z0}"));
    }
    if (zh - std::f64::consts::PI).abs() > 1e-10 {
        return Err(format!("z_1/2 - pi = {:e}", zh - std::f64::consts::PI));
    }
    Ok(format!("z0 = {z0}, |z_1/2 - pi| = {:.1e}", (zh - std::f64::consts::PI).abs()))
}

fn two_charts() -> Check {
    let mut worst = 0.0f64;
    for n in [3u32, 5] {
        for p in [
            TestProfile::bump(1.5, 1.0),
            TestProfile::poly_bump(1.2, 0.9).with_ell(1),
            TestProfile::bump(2.0, 1.6).with_ell(2),
        ] {
            for (geo, ball) in norms_in_both_charts(n, &p).map_err(|e| e.to_string())? {
                worst = worst.max((geo - ball).abs() / geo.abs());
            }
        }
        let case = build_case(CaseId::V2Hyperbolic, &CaseParams::new(n)).map_err(|e| e.to_string())?;
        for p in case.standard_profiles() {
            for ell in 0..=2 {
                let r = verify_ballmodel_oracle(&case, &p.with_ell(ell), 1e-8).map_err(|e| e.to_string())?;
                worst = worst.max(r.max_rel_discrepancy);
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("max relative discrepancy {worst:e}"));
    }
    Ok(format!("max relative discrepancy {worst:.2e}"))
}

fn comparison_sign() -> Check {
    for b in [0.0, 0.5, 1.0, 4.0] {
        let m = ModelManifold::new(3, b).unwrap();
        let mut t = 1e-6;
        while t <= 50.0 {
            if m.d_b(t) < 0.0 {
                return Err(format!("D_b({t}) < 0 for b = {b}"));
            }
            t *= 1.01;
        }
    }
    let mut checked = 0;
    for id in CaseId::ALL {
        for n in [3u32, 4, 5, 8] {
            let case = build_case(id, &CaseParams::new(n)).map_err(|e| e.to_string())?;
            let logderiv: Vec<usize> = case
                .terms
                .iter()
                .enumerate()
                .filter(|(_, t)| {
                    t.expect_nonnegative
                        && matches!(&t.kind, TermKind::Standard { functional: Functional::LogDerivSq { .. }, .. })
                })
                .map(|(i, _)| i)
                .collect();
            if logderiv.is_empty() {
                continue;
            }
            let bs = match id.pinned_curvature() {
                Some(b) => vec![b],
                None => vec![0.5, 1.0, 4.0],
            };
            for b in bs {
                let m = ModelManifold::new(n, b).unwrap();
                for p in case.standard_profiles() {
                    for ell in 0..=2 {
                        let r = verify(&case, &m, &p.with_ell(ell), 1e-8).map_err(|e| e.to_string())?;
                        for &i in &logderiv {
                            checked += 1;
                            if r.terms[i].value < 0.0 {
                                return Err(format!("{id} N={n} b={b} {p}: {} = {:e}", r.terms[i].name, r.terms[i].value));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("D_b >= 0 on the grid; {checked} log-derivative remainders nonnegative"))
}

fn sharpness() -> Check {
    let runs = [
        (Target::HardyHyperbolic, 5, None, 1.02),
        (Target::Poincare, 4, None, 1.05),
        (Target::BvBall, 3, Some(1.0), 1.05),
    ];
    let mut parts = Vec::new();
    for (target, n, radius, limit) in runs {
        let fam = TrialFamily::new(target, n, radius).map_err(|e| e.to_string())?;
        let s = sharpness_scan(&fam, 64).map_err(|e| e.to_string())?;
        if !(s.min_ratio <= limit && s.bounded_below) {
            return Err(format!("{target} N={n}: ratio {} (limit {limit}), bounded {}", s.min_ratio, s.bounded_below));
        }
        parts.push(format!("{target} N={n} ratio {:.4}", s.min_ratio));
    }
    Ok(parts.join(", "))
}

fn negative_control() -> Check {
    let v = parse("1").unwrap();
    let w = parse("1.5*((N-2)/2)^2 / r^2").unwrap();
    let verdict = check_pair(&v, &w, &Bindings::default(), 1.0, 4, &ShootingOptions::for_radius(1.0))
        .map_err(|e| e.to_string())?;
    let Some(z) = verdict.first_zero.filter(|_| !verdict.is_pair) else {
        return Err("supercritical weight accepted as a pair".into());
    };
    let out = Command::new(env!("CARGO_BIN_EXE_hardyforge"))
        .args(["verify", "--case", "T3.3", "--alpha", "3", "--dims", "4"])
        .output()
        .map_err(|e| e.to_string())?;
    match out.status.code() {
        Some(2) => Ok(format!("zero crossing at r = {z:.6e}; verify T3.3 alpha=3 N=4 exits 2")),
        c => Err(format!("verify T3.3 alpha=3 exited with {c:?}")),
    }
}

fn shifted() -> Check {
    let mut worst = 0.0f64;
    let mut cells = 0;
    for id in [CaseId::T2Shifted, CaseId::C3Global] {
        for radius in [1.0, 2.0] {
            for n in [3u32, 5] {
                let case = build_case(id, &CaseParams::new(n).radius(radius)).map_err(|e| e.to_string())?;
                for b in [0.0, 1.0] {
                    let m = ModelManifold::new(n, b).unwrap();
                    for p in case.standard_profiles() {
                        if p.flat_at.map(|(r, _)| r) != Some(radius) {
                            return Err(format!("{p} is not flat at R = {radius}"));
                        }
                        for ell in 0..=2 {
                            let r = verify(&case, &m, &p.with_ell(ell), 1e-7).map_err(|e| e.to_string())?;
                            cells += 1;
                            worst = worst.max(r.rel_residual);
                            if !r.pass {
                                return Err(format!("{id} R={radius} N={n} b={b} {p}: {:e}", r.rel_residual));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{cells} cells, max rel_residual {worst:.2e}"))
}

fn determinism() -> Check {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hardyforge"))
            .args(["verify", "--case", "all"])
            .env("HARDYFORGE_THREADS", threads)
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run("1")?;
    let b = run("4")?;
    let c = run("1")?;
    if a.status.code() != Some(0) {
        return Err(format!("full suite exited with {:?}", a.status.code()));
    }
    if a.stdout != b.stdout || a.stdout != c.stdout {
        return Err("reports differ between runs".into());
    }
    Ok(format!("3 runs (1, 4, 1 threads), {} identical bytes each", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("identity suite", identity_suite),
        ("Bessel pair catalog", pair_catalog),
        ("first Bessel zeros", first_zeros),
        ("two-chart oracle", two_charts),
        ("comparison sign", comparison_sign),
        ("sharpness", sharpness),
        ("negative control", negative_control),
        ("shifted identities", shifted),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
