//! Rayleigh quotients and concentrating trial families that approach the
//! sharp constants from above.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{angular_eigenvalue, ModelManifold};
use crate::profile::TestProfile;
use crate::quadrature::{integrate, integrate_power_origin, QuadratureError, QuadratureSpec};
use crate::specfun::{self, SpecfunError};

#[derive(Debug, Error)]
pub enum SharpnessError {
    #[error("denominator integral vanishes")]
    ZeroDenominator,
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Near-optimizers are nearly singular, so this module integrates tighter
/// than the identity checks.
fn spec() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-13, 1e-12)
}

/// Which integrals form the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quotient {
    /// int |grad f|^2 / int f^2/rho^2, bounded below by ((N-2)/2)^2.
    Hardy,
    /// int |grad f|^2 / int f^2 on H^N, bounded below by ((N-1)/2)^2.
    Poincare,
    /// (int |grad f|^2 - ((N-2)/2)^2 int f^2/r^2) / int f^2 on the
    /// Euclidean ball of radius R, bounded below by z0^2/R^2.
    BallBessel,
}

impl Quotient {
    pub fn target_constant(self, dim: u32, radius: f64) -> Result<f64, SharpnessError> {
        let n = dim as f64;
        Ok(match self {
            Quotient::Hardy => 0.25 * (n - 2.0) * (n - 2.0),
            Quotient::Poincare => 0.25 * (n - 1.0) * (n - 1.0),
            Quotient::BallBessel => {
                let z = specfun::bessel_first_zero(0.0)?;
                z * z / (radius * radius)
            }
        })
    }
}

/// Rayleigh quotient of f = g Y_l for a compactly supported profile.
pub fn rayleigh(
    q: Quotient,
    m: &ModelManifold,
    f: &TestProfile,
    radius: Option<f64>,
) -> Result<f64, SharpnessError> {
    f.validate().map_err(|e| SharpnessError::Config(e.to_string()))?;
    if f.flat_at.is_some() {
        return Err(SharpnessError::Config("quotients take compactly supported profiles".into()));
    }
    let (lo, hi) = f.support();
    match q {
        Quotient::Poincare if m.curvature != 1.0 => {
            return Err(SharpnessError::Config("the Poincare quotient lives on H^N (b = 1)".into()))
        }
        Quotient::BallBessel => {
            if m.curvature != 0.0 {
                return Err(SharpnessError::Config("the ball quotient is Euclidean (b = 0)".into()));
            }
            let r = radius.unwrap_or(1.0);
            if hi > r {
                return Err(SharpnessError::Config(format!("profile support leaves the ball of radius {r}")));
            }
        }
        _ => {}
    }
    let l = angular_eigenvalue(m.dim, f.ell);
    let grad = |rho: f64| {
        let (g, dg) = f.value_with_deriv(rho);
        let sn = m.metric_radius(rho);
        (dg * dg + l * g * g / (sn * sn)) * m.volume_density(rho)
    };
    let value = |rho: f64| f.value(rho).powi(2) * m.volume_density(rho);
    let over_r2 = |rho: f64| f.value(rho).powi(2) / (rho * rho) * m.volume_density(rho);
    let int = |h: &dyn Fn(f64) -> f64| integrate(h, lo, hi, &spec()).map(|e| e.value);
    let (num, den) = match q {
        Quotient::Hardy => (int(&grad)?, int(&over_r2)?),
        Quotient::Poincare => (int(&grad)?, int(&value)?),
        Quotient::BallBessel => {
            let a = 0.5 * (m.n() - 2.0);
            (int(&grad)? - a * a * int(&over_r2)?, int(&value)?)
        }
    };
    if !(den > 0.0) {
        return Err(SharpnessError::ZeroDenominator);
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    HardyHyperbolic,
    HardyEuclidean,
    Poincare,
    BvBall,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::HardyHyperbolic, Target::HardyEuclidean, Target::Poincare, Target::BvBall];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::HardyHyperbolic => "hardy-hyperbolic",
            Target::HardyEuclidean => "hardy-euclidean",
            Target::Poincare => "poincare",
            Target::BvBall => "bv-ball",
        }
    }

    pub fn quotient(self) -> Quotient {
        match self {
            Target::HardyHyperbolic | Target::HardyEuclidean => Quotient::Hardy,
            Target::Poincare => Quotient::Poincare,
            Target::BvBall => Quotient::BallBessel,
        }
    }

    pub fn curvature(self) -> f64 {
        match self {
            Target::HardyHyperbolic | Target::Poincare => 1.0,
            Target::HardyEuclidean | Target::BvBall => 0.0,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = SharpnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                SharpnessError::Config(format!(
                    "unknown target '{s}' (hardy-hyperbolic, hardy-euclidean, poincare, bv-ball)"
                ))
            })
    }
}

// 1 - smoothstep on [0, 1] and its derivative.
fn ramp_down(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        (1.0, 0.0)
    } else if t >= 1.0 {
        (0.0, 0.0)
    } else {
        let s = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
        let ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
        (1.0 - s, -ds)
    }
}

/// rho^{-(N-2)/2 + eps} eta(rho), eta = 1 below rho1 and 0 above rho2 with
/// a smooth ramp in ln rho between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerCutoff {
    pub eps: f64,
    pub rho1: f64,
    pub rho2: f64,
}

impl PowerCutoff {
    fn eta(&self, rho: f64) -> (f64, f64) {
        let span = (self.rho2 / self.rho1).ln();
        let (e, de) = ramp_down((rho / self.rho1).ln() / span);
        (e, de / (rho * span))
    }

    /// Hardy quotient on `m`. Both integrands are rho^{2 eps - 1} times a
    /// bounded factor, which `integrate_power_origin` absorbs exactly.
    pub fn hardy_quotient(&self, m: &ModelManifold) -> Result<f64, SharpnessError> {
        if !(self.eps > 0.0 && self.rho1 > 0.0 && self.rho2 > self.rho1) {
            return Err(SharpnessError::Config(format!("invalid power-cutoff profile {self:?}")));
        }
        let a = 0.5 * (m.n() - 2.0);
        let n1 = m.dim as i32 - 1;
        let e = self.eps - a;
        let beta = 2.0 * self.eps - 1.0;
        let density = |rho: f64| (m.metric_radius(rho) / rho).powi(n1);
        let num = |rho: f64| {
            let (eta, deta) = self.eta(rho);
            let t = e * eta + rho * deta;
            t * t * density(rho)
        };
        let den = |rho: f64| self.eta(rho).0.powi(2) * density(rho);
        let spec = spec().singular_at(&[self.rho1]);
        let num = integrate_power_origin(num, beta, self.rho2, &spec)?.value;
        let den = integrate_power_origin(den, beta, self.rho2, &spec)?.value;
        if !(den > 0.0) {
            return Err(SharpnessError::ZeroDenominator);
        }
        Ok(num / den)
    }
}

/// Concentrating trial family for a target; member k sharpens as k grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialFamily {
    pub target: Target,
    pub dim: u32,
    pub radius: f64,
}

/// Cutoff used by the Hardy families.
pub const HARDY_CUTOFF: (f64, f64) = (0.05, 1.0);

impl TrialFamily {
    pub fn new(target: Target, dim: u32, radius: Option<f64>) -> Result<Self, SharpnessError> {
        if dim < 3 {
            return Err(SharpnessError::Config(format!("N must be >= 3, got {dim}")));
        }
        let radius = radius.unwrap_or(1.0);
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SharpnessError::Config(format!("R must be positive, got {radius}")));
        }
        Ok(TrialFamily { target, dim, radius })
    }

    pub fn manifold(&self) -> ModelManifold {
        ModelManifold {
            dim: self.dim,
            curvature: self.target.curvature(),
        }
    }

    pub fn target_constant(&self) -> Result<f64, SharpnessError> {
        self.target.quotient().target_constant(self.dim, self.radius)
    }

    /// Quotient of member k.
    pub fn quotient(&self, k: f64) -> Result<f64, SharpnessError> {
        if !(k > 0.0) {
            return Err(SharpnessError::Config(format!("k must be positive, got {k}")));
        }
        let m = self.manifold();
        let n = m.n();
        match self.target {
            Target::HardyHyperbolic | Target::HardyEuclidean => PowerCutoff {
                eps: 1.0 / k,
                rho1: HARDY_CUTOFF.0,
                rho2: HARDY_CUTOFF.1,
            }
            .hardy_quotient(&m),
            Target::Poincare => {
                // g = e^{-c rho} eta(rho/k), c = (N-1)/2 - 1/k, with eta
                // ramping from 1 to 0 on [1, 2]. g^2 sinh^{N-1} is
                // e^{2 rho/k} ((1 - e^{-2 rho})/2)^{N-1} eta^2.
                let c = 0.5 * (n - 1.0) - 1.0 / k;
                let n1 = self.dim as i32 - 1;
                let base = |rho: f64| (2.0 * rho / k).exp() * (-0.5 * (-2.0 * rho).exp_m1()).powi(n1);
                let num = |rho: f64| {
                    let (eta, deta) = ramp_down(rho / k - 1.0);
                    let t = -c * eta + deta / k;
                    t * t * base(rho)
                };
                let den = |rho: f64| ramp_down(rho / k - 1.0).0.powi(2) * base(rho);
                let spec = spec().singular_at(&[k]);
                let num = integrate(num, 0.0, 2.0 * k, &spec)?.value;
                let den = integrate(den, 0.0, 2.0 * k, &spec)?.value;
                if !(den > 0.0) {
                    return Err(SharpnessError::ZeroDenominator);
                }
                Ok(num / den)
            }
            Target::BvBall => {
                // g = r^{e} J0(z r/R), e = -a + 1/k; with x = z r/R,
                // |g'|^2 r^{N-1} - a^2 g^2 r^{N-3} = r^{2/k - 1} S(r) and
                // g^2 r^{N-1} = r^{2/k + 1} J^2.
                let a = 0.5 * (n - 2.0);
                let e = 1.0 / k - a;
                let e2_minus_a2 = (1.0 / k) * (1.0 / k - 2.0 * a);
                let z = specfun::bessel_first_zero(0.0)?;
                let kk = z / self.radius;
                let jj = |r: f64| {
                    let x = kk * r;
                    (
                        x,
                        specfun::bessel_j(0.0, x).unwrap_or(f64::NAN),
                        specfun::bessel_j_deriv(0.0, x).unwrap_or(0.0),
                    )
                };
                let num = |r: f64| {
                    let (x, j, dj) = jj(r);
                    e2_minus_a2 * j * j + 2.0 * e * x * j * dj + x * x * dj * dj
                };
                let den = |r: f64| jj(r).1.powi(2);
                let num = integrate_power_origin(num, 2.0 / k - 1.0, self.radius, &spec())?.value;
                let den = integrate_power_origin(den, 2.0 / k + 1.0, self.radius, &spec())?.value;
                if !(den > 0.0) {
                    return Err(SharpnessError::ZeroDenominator);
                }
                Ok(num / den)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub k: u32,
    pub quotient: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub target: Target,
    #[serde(rename = "N")]
    pub n: u32,
    pub radius: f64,
    pub target_constant: f64,
    pub points: Vec<ScanPoint>,
    pub min_quotient: f64,
    pub min_ratio: f64,
    /// Every quotient is >= target (1 - 1e-8).
    pub bounded_below: bool,
    /// Nonincreasing after the first three entries, with slack 1e-6.
    pub monotone_tail: bool,
}

/// Quotients of members k = 3, ..., k_max.
pub fn sharpness_scan(fam: &TrialFamily, k_max: u32) -> Result<ScanResult, SharpnessError> {
    if k_max < 3 {
        return Err(SharpnessError::Config(format!("k_max must be >= 3, got {k_max}")));
    }
    let target = fam.target_constant()?;
    let points = (3..=k_max)
        .map(|k| {
            let q = fam.quotient(k as f64)?;
            Ok(ScanPoint {
                k,
                quotient: q,
                ratio: q / target,
            })
        })
        .collect::<Result<Vec<_>, SharpnessError>>()?;
    Ok(summarize(fam, target, points))
}

/// Scan summary for quotients evaluated elsewhere (e.g. concurrently).
pub fn summarize(fam: &TrialFamily, target: f64, points: Vec<ScanPoint>) -> ScanResult {
    let min_quotient = points.iter().map(|p| p.quotient).fold(f64::INFINITY, f64::min);
    let bounded_below = points.iter().all(|p| p.quotient >= target * (1.0 - 1e-8));
    let monotone_tail = points
        .windows(2)
        .skip(2)
        .all(|w| w[1].quotient <= w[0].quotient + 1e-6 * w[0].quotient.abs());
    ScanResult {
        target: fam.target,
        n: fam.dim,
        radius: fam.radius,
        target_constant: target,
        points,
        min_quotient,
        min_ratio: min_quotient / target,
        bounded_below,
        monotone_tail,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Nelder-Mead simplex search. Non-finite objective values count as +inf.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], step: f64, max_iter: usize, ftol: f64) -> Minimum {
    let dim = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let mut iterations = 0;
    while iterations < max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[dim].1);
        if (worst - best).abs() <= ftol * best.abs().max(1e-300) {
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|p| p.0[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            (0..dim)
                .map(|j| centroid[j] + t * (simplex[dim].0[j] - centroid[j]))
                .collect()
        };
        let xr = along(-1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let xc = if fr < worst { along(-0.5) } else { along(0.5) };
            let fc = eval(&xc);
            if fc < fr.min(worst) {
                simplex[dim] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    for j in 0..dim {
                        p.0[j] = x_best[j] + 0.5 * (p.0[j] - x_best[j]);
                    }
                    p.1 = eval(&p.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyOptimum {
    pub profile: PowerCutoff,
    pub quotient: f64,
    pub ratio: f64,
    pub iterations: usize,
}

/// Minimize the Hardy quotient over power-cutoff profiles with exponent
/// offset eps >= eps_min, searching (ln rho1, ln ln(rho2/rho1), ln eps).
pub fn optimize_hardy(m: &ModelManifold, eps_min: f64) -> Result<HardyOptimum, SharpnessError> {
    if !(eps_min > 0.0) {
        return Err(SharpnessError::Config(format!("eps_min must be positive, got {eps_min}")));
    }
    let decode = |x: &[f64]| PowerCutoff {
        eps: eps_min + x[2].exp(),
        rho1: x[0].exp(),
        rho2: x[0].exp() * x[1].exp().exp(),
    };
    let objective = |x: &[f64]| {
        if x.iter().any(|v| v.abs() > 6.0) {
            return f64::INFINITY;
        }
        decode(x).hardy_quotient(m).unwrap_or(f64::INFINITY)
    };
    let x0 = [0.5f64.ln(), 1.0f64.ln(), (4.0 * eps_min).ln()];
    let best = nelder_mead(objective, &x0, 0.5, 300, 1e-10);
    let target = Quotient::Hardy.target_constant(m.dim, 1.0)?;
    let profile = decode(&best.x);
    Ok(HardyOptimum {
        profile,
        quotient: best.value,
        ratio: best.value / target,
        iterations: best.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(f, &[-1.2, 1.0], 0.5, 5000, 1e-16);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn ramp_is_smooth_at_ends() {
        assert_eq!(ramp_down(0.0), (1.0, 0.0));
        assert_eq!(ramp_down(1.0), (0.0, 0.0));
        let (v, d) = ramp_down(0.5);
        assert!((v - 0.5).abs() < 1e-15 && (d + 1.875).abs() < 1e-15);
    }
}
