//! Bessel pairs (r^{N-1} V, r^{N-1} W): weights for which
//! (r^{N-1} V phi')' + r^{N-1} W phi = 0 has a positive solution.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exprlang::{Bindings, Expr, ExprError};
use crate::geometry::x_cosh_minus_sinh;
use crate::quadrature::{integrate, QuadratureError, QuadratureSpec};
use crate::specfun::{self, SpecfunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairError {
    #[error("invalid pair parameters: {0}")]
    InvalidParams(String),
    #[error("unknown pair id '{0}'")]
    UnknownPair(String),
    #[error("weight evaluation failed at r = {r:e}: {message}")]
    Weight { r: f64, message: String },
    #[error("step size underflow at r = {r:e} (stiff or singular weights)")]
    StepUnderflow { r: f64 },
    #[error("step limit exceeded at r = {r:e}")]
    TooManySteps { r: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairId {
    EuclidPower,
    CriticalLog,
    BvBessel,
    BvBesselAlpha,
    PoincareSobolevPhi,
    HyperbolicG,
    PoincareBesselR,
}

impl PairId {
    pub const ALL: [PairId; 7] = [
        PairId::EuclidPower,
        PairId::CriticalLog,
        PairId::BvBessel,
        PairId::BvBesselAlpha,
        PairId::PoincareSobolevPhi,
        PairId::HyperbolicG,
        PairId::PoincareBesselR,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PairId::EuclidPower => "euclid-power",
            PairId::CriticalLog => "critical-log",
            PairId::BvBessel => "bv-bessel",
            PairId::BvBesselAlpha => "bv-bessel-alpha",
            PairId::PoincareSobolevPhi => "poincare-sobolev-phi",
            PairId::HyperbolicG => "hyperbolic-G",
            PairId::PoincareBesselR => "poincare-bessel-R",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            PairId::EuclidPower => {
                "V = r^-lambda, W = ((N-lambda-2)/2)^2 r^(-lambda-2), phi = r^((2-N+lambda)/2) on (0, inf)"
            }
            PairId::CriticalLog => {
                "V = r^(2-N), W = 1/(4 r^N ln^2(r/R)), phi = sqrt|ln(r/R)| on (0, R), continued past R"
            }
            PairId::BvBessel => {
                "V = r^-lambda, W = r^-lambda ((N-lambda-2)^2/(4r^2) + z0^2/R^2), phi = r^((2-N+lambda)/2) J0(z0 r/R) on (0, R)"
            }
            PairId::BvBesselAlpha => {
                "as bv-bessel with J_alpha, its first zero z_alpha, and W shifted by -alpha^2 r^(-lambda-2)"
            }
            PairId::PoincareSobolevPhi => {
                "V = r^(2-N), phi = (r/sinh r)^((N-1)/2) on (0, inf); W changes sign"
            }
            PairId::HyperbolicG => {
                "V = (1-r^2)^(2-N), W = F^2/(4 G^2 (1-r^2)^(N-2)), phi = sqrt(G), F = (1-r^2)^(N-2)/r^(N-1), G = int_r^1 F, on (0, 1)"
            }
            PairId::PoincareBesselR => {
                "V = r^(2-N), W = r^(2-N) z0^2/R^2, phi = J0(z0 r/R) on (0, R)"
            }
        }
    }

    pub fn ranges(self) -> &'static str {
        match self {
            PairId::EuclidPower => "lambda finite (default 0); nonincreasing phi iff lambda <= N-2",
            PairId::CriticalLog => "R > 0 (default 1)",
            PairId::BvBessel => "lambda <= N-2 (default 0), R > 0 (default 1)",
            PairId::BvBesselAlpha => {
                "lambda <= N-2 (default 0), 0 <= alpha <= (N-lambda-2)/2 (default min(0.5, (N-lambda-2)/2)), R > 0 (default 1)"
            }
            PairId::PoincareSobolevPhi => "no parameters",
            PairId::HyperbolicG => "no parameters; ball chart, r in (0, 1)",
            PairId::PoincareBesselR => "R > 0 (default 1)",
        }
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairId {
    type Err = PairError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PairId::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| PairError::UnknownPair(s.to_string()))
    }
}

/// Optional parameters; missing entries take the pair's defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PairParams {
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairInterval {
    /// Right end of the interval; None for (0, inf).
    pub upper: Option<f64>,
    /// The identity also holds across `upper` (phi vanishes there).
    pub two_sided: bool,
}

#[derive(Debug, Clone)]
pub enum Provenance {
    Catalog(PairId),
    OdeSolved,
}

#[derive(Debug, Clone)]
enum Kind {
    EuclidPower { lambda: f64, a: f64 },
    CriticalLog { radius: f64 },
    BesselPower { lambda: f64, a: f64, alpha: f64, k: f64 },
    SobolevPhi { c: f64 },
    HyperbolicG,
    Solved(Arc<SolvedPair>),
}

#[derive(Debug)]
struct SolvedPair {
    v: Expr,
    w: Expr,
    env: Bindings,
    // (r, phi, phi', flux, flux')
    nodes: Vec<[f64; 5]>,
}

/// A radial Bessel pair with a positive solution phi.
#[derive(Debug, Clone)]
pub struct BesselPair {
    pub dim: u32,
    pub provenance: Provenance,
    pub interval: PairInterval,
    /// phi is nonincreasing on the interval.
    pub monotone: bool,
    /// Resolved parameter values (defaults filled in).
    pub params: Vec<(&'static str, f64)>,
    kind: Kind,
}

fn positive_finite(name: &str, x: f64) -> Result<f64, PairError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(PairError::InvalidParams(format!("{name} must be positive, got {x}")))
    }
}

impl BesselPair {
    pub fn catalog(id: PairId, dim: u32, params: PairParams) -> Result<Self, PairError> {
        if dim < 3 {
            return Err(PairError::InvalidParams(format!("N must be >= 3, got {dim}")));
        }
        let n = dim as f64;
        let lambda = params.lambda.unwrap_or(0.0);
        if !lambda.is_finite() {
            return Err(PairError::InvalidParams("lambda must be finite".into()));
        }
        let radius = positive_finite("R", params.radius.unwrap_or(1.0))?;
        let a = 0.5 * (n - lambda - 2.0);
        let (kind, interval, monotone, resolved) = match id {
            PairId::EuclidPower => (
                Kind::EuclidPower { lambda, a },
                PairInterval {
                    upper: None,
                    two_sided: false,
                },
                lambda <= n - 2.0,
                vec![("lambda", lambda)],
            ),
            PairId::CriticalLog => (
                Kind::CriticalLog { radius },
                PairInterval {
                    upper: Some(radius),
                    two_sided: true,
                },
                true,
                vec![("R", radius)],
            ),
            PairId::BvBessel | PairId::BvBesselAlpha | PairId::PoincareBesselR => {
                let (lambda, a) = if id == PairId::PoincareBesselR {
                    (n - 2.0, 0.0)
                } else {
                    (lambda, a)
                };
                if lambda > n - 2.0 {
                    return Err(PairError::InvalidParams(format!(
                        "lambda = {lambda} exceeds N - 2 = {}",
                        n - 2.0
                    )));
                }
                let alpha = if id == PairId::BvBesselAlpha {
                    params.alpha.unwrap_or(a.min(0.5))
                } else {
                    0.0
                };
                if !(0.0..=a).contains(&alpha) {
                    return Err(PairError::InvalidParams(format!(
                        "alpha = {alpha} outside [0, (N-lambda-2)/2 = {a}]"
                    )));
                }
                if alpha > specfun::MAX_ORDER {
                    return Err(PairError::InvalidParams(format!(
                        "alpha = {alpha} exceeds the supported Bessel order {}",
                        specfun::MAX_ORDER
                    )));
                }
                let z = specfun::bessel_first_zero(alpha)?;
                let mut resolved = match id {
                    PairId::PoincareBesselR => vec![],
                    _ => vec![("lambda", lambda)],
                };
                if id == PairId::BvBesselAlpha {
                    resolved.push(("alpha", alpha));
                }
                resolved.push(("R", radius));
                (
                    Kind::BesselPower {
                        lambda,
                        a,
                        alpha,
                        k: z / radius,
                    },
                    PairInterval {
                        upper: Some(radius),
                        two_sided: false,
                    },
                    true,
                    resolved,
                )
            }
            PairId::PoincareSobolevPhi => (
                Kind::SobolevPhi { c: 0.5 * (n - 1.0) },
                PairInterval {
                    upper: None,
                    two_sided: false,
                },
                true,
                vec![],
            ),
            PairId::HyperbolicG => (
                Kind::HyperbolicG,
                PairInterval {
                    upper: Some(1.0),
                    two_sided: false,
                },
                true,
                vec![],
            ),
        };
        Ok(BesselPair {
            dim,
            provenance: Provenance::Catalog(id),
            interval,
            monotone,
            params: resolved,
            kind,
        })
    }

    /// A pair whose phi comes from a shooting solution of the ODE. phi is
    /// a cubic Hermite interpolant of the samples; phi' = flux/(r^{N-1}V).
    pub fn from_solution(
        v: Expr,
        w: Expr,
        env: Bindings,
        dim: u32,
        verdict: &PairVerdict,
    ) -> Result<Self, PairError> {
        if !verdict.is_pair || verdict.solution_samples.len() < 2 {
            return Err(PairError::InvalidParams(
                "the weights do not form a Bessel pair".into(),
            ));
        }
        let monotone = verdict.solution_samples.iter().all(|s| s.flux <= 0.0);
        let upper = verdict.solution_samples.last().map(|s| s.r);
        let n1 = dim as f64 - 1.0;
        let mut nodes = Vec::with_capacity(verdict.solution_samples.len());
        for s in &verdict.solution_samples {
            let rn = s.r.powf(n1);
            let vr = v.eval(s.r, &env)?;
            let wr = w.eval(s.r, &env)?;
            nodes.push([s.r, s.phi, s.flux / (rn * vr), s.flux, -rn * wr * s.phi]);
        }
        Ok(BesselPair {
            dim,
            provenance: Provenance::OdeSolved,
            interval: PairInterval {
                upper,
                two_sided: false,
            },
            monotone,
            params: vec![],
            kind: Kind::Solved(Arc::new(SolvedPair {
                v,
                w,
                env,
                nodes,
            })),
        })
    }

    pub fn id(&self) -> Option<PairId> {
        match self.provenance {
            Provenance::Catalog(id) => Some(id),
            Provenance::OdeSolved => None,
        }
    }

    fn n(&self) -> f64 {
        self.dim as f64
    }

    pub fn v(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::EuclidPower { lambda, .. } | Kind::BesselPower { lambda, .. } => r.powf(-lambda),
            Kind::CriticalLog { .. } | Kind::SobolevPhi { .. } => r.powf(2.0 - self.n()),
            Kind::HyperbolicG => (1.0 - r * r).powf(2.0 - self.n()),
            Kind::Solved(s) => s.v.eval(r, &s.env).unwrap_or(f64::NAN),
        }
    }

    pub fn w(&self, r: f64) -> f64 {
        let n = self.n();
        match &self.kind {
            Kind::EuclidPower { lambda, a } => a * a * r.powf(-lambda - 2.0),
            Kind::CriticalLog { radius } => {
                let l = (r / radius).ln();
                1.0 / (4.0 * r.powf(n) * l * l)
            }
            Kind::BesselPower {
                lambda,
                a,
                alpha,
                k,
            } => r.powf(-lambda) * ((a * a - alpha * alpha) / (r * r) + k * k),
            Kind::SobolevPhi { c } => {
                let u = sobolev_u(r);
                let du = sobolev_du(r);
                -c * r.powf(2.0 - n) * (c * u * u / (r * r) + du / r)
            }
            Kind::HyperbolicG => {
                let f = hyperbolic_f(self.dim, r);
                let g = hyperbolic_g(self.dim, r);
                f * f / (4.0 * g * g * (1.0 - r * r).powf(n - 2.0))
            }
            Kind::Solved(s) => s.w.eval(r, &s.env).unwrap_or(f64::NAN),
        }
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.phi_and_deriv(r).0
    }

    pub fn phi_prime(&self, r: f64) -> f64 {
        self.phi_and_deriv(r).1
    }

    /// (phi, phi').
    pub fn phi_and_deriv(&self, r: f64) -> (f64, f64) {
        match &self.kind {
            Kind::EuclidPower { a, .. } => {
                let p = r.powf(-a);
                (p, -a * p / r)
            }
            Kind::CriticalLog { radius } => {
                let l = (r / radius).ln();
                let s = l.abs().sqrt();
                (s, l.signum() / (2.0 * r * s))
            }
            Kind::BesselPower { a, alpha, k, .. } => {
                let x = k * r;
                let j = specfun::bessel_j(*alpha, x).unwrap_or(f64::NAN);
                let dj = specfun::bessel_j_deriv(*alpha, x).unwrap_or(f64::NAN);
                let p = r.powf(-a);
                (p * j, p * (-a * j / r + k * dj))
            }
            Kind::SobolevPhi { c } => {
                let phi = (r / r.sinh()).powf(*c);
                (phi, phi * c * sobolev_u(r) / r)
            }
            Kind::HyperbolicG => {
                let g = hyperbolic_g(self.dim, r);
                let s = g.sqrt();
                (s, -hyperbolic_f(self.dim, r) / (2.0 * s))
            }
            Kind::Solved(s) => {
                let (phi, flux) = interpolate(&s.nodes, r);
                let v = s.v.eval(r, &s.env).unwrap_or(f64::NAN);
                (phi, flux / (r.powf(self.n() - 1.0) * v))
            }
        }
    }

    /// phi'/phi.
    pub fn phi_log_deriv(&self, r: f64) -> f64 {
        match &self.kind {
            Kind::EuclidPower { a, .. } => -a / r,
            Kind::SobolevPhi { c } => c * sobolev_u(r) / r,
            _ => {
                let (p, dp) = self.phi_and_deriv(r);
                dp / p
            }
        }
    }

    /// r^{N-1} V phi'.
    pub fn flux(&self, r: f64) -> f64 {
        r.powf(self.n() - 1.0) * self.v(r) * self.phi_prime(r)
    }

    pub fn catalog_id_str(&self) -> String {
        match self.id() {
            Some(id) => id.to_string(),
            None => "ode-solved".into(),
        }
    }
}

// u = 1 - r coth r
fn sobolev_u(r: f64) -> f64 {
    -x_cosh_minus_sinh(r) / r.sinh()
}

// u' = -(sinh 2r - 2r)/(2 sinh^2 r)
fn sobolev_du(r: f64) -> f64 {
    let s = r.sinh();
    -sinh_minus_x(2.0 * r) / (2.0 * s * s)
}

fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return x.sinh() - x;
    }
    let x2 = x * x;
    let mut term = x;
    let mut sum = 0.0;
    for k in 1..30 {
        let k2 = 2.0 * k as f64;
        term *= x2 / (k2 * (k2 + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// F(r) = (1-r^2)^{N-2}/r^{N-1}.
pub fn hyperbolic_f(dim: u32, r: f64) -> f64 {
    let n = dim as f64;
    (1.0 - r * r).powf(n - 2.0) / r.powf(n - 1.0)
}

/// G(r) = int_r^1 F(t) dt, computed after t = e^s.
pub fn hyperbolic_g(dim: u32, r: f64) -> f64 {
    if !(r > 0.0 && r < 1.0) {
        return f64::NAN;
    }
    let n = dim as f64;
    let spec = QuadratureSpec::with_tolerances(0.0, 1e-13);
    let f = |s: f64| (-(2.0 * s).exp_m1()).powf(n - 2.0) * ((2.0 - n) * s).exp();
    integrate(f, r.ln(), 0.0, &spec)
        .map(|e| e.value)
        .unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionSample {
    pub r: f64,
    pub phi: f64,
    pub flux: f64,
}

/// Heuristic divergence flags for int 1/(r^{N-1}V) and int r^{N-1}V near 0.
/// Reported only; they do not affect `is_pair`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrabilityFlags {
    pub inverse_weight_diverges_at_0: Option<bool>,
    pub weight_diverges_at_0: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub is_pair: bool,
    pub first_zero: Option<f64>,
    pub end: f64,
    pub steps: usize,
    pub flags: IntegrabilityFlags,
    pub solution_samples: Vec<SolutionSample>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Start of integration.
    pub eps: f64,
    pub rtol: f64,
    /// Integration stops at R (1 - end_gap).
    pub end_gap: f64,
    pub max_steps: usize,
}

impl ShootingOptions {
    pub fn for_radius(radius: f64) -> Self {
        ShootingOptions {
            eps: 1e-6 * radius,
            rtol: 1e-11,
            end_gap: 1e-9,
            max_steps: 2_000_000,
        }
    }
}

/// Shoot phi(eps) = 1, phi'(eps) = 0 for weights given as expressions.
pub fn check_pair(
    v: &Expr,
    w: &Expr,
    env: &Bindings,
    radius: f64,
    dim: u32,
    opts: &ShootingOptions,
) -> Result<PairVerdict, PairError> {
    let env = Bindings {
        n: Some(dim as f64),
        radius: Some(radius),
        ..*env
    };
    let ev = |e: &Expr, r: f64| {
        e.eval(r, &env).map_err(|err| PairError::Weight {
            r,
            message: err.to_string(),
        })
    };
    check_pair_with(|r| ev(v, r), |r| ev(w, r), radius, dim, opts)
}

/// Shooting check for weights given as closures.
pub fn check_pair_with<V, W>(
    v: V,
    w: W,
    radius: f64,
    dim: u32,
    opts: &ShootingOptions,
) -> Result<PairVerdict, PairError>
where
    V: Fn(f64) -> Result<f64, PairError>,
    W: Fn(f64) -> Result<f64, PairError>,
{
    if dim < 3 {
        return Err(PairError::InvalidParams(format!("N must be >= 3, got {dim}")));
    }
    let radius = positive_finite("R", radius)?;
    if !(opts.eps > 0.0 && opts.eps < radius) {
        return Err(PairError::InvalidParams(format!(
            "eps = {} must lie in (0, R)",
            opts.eps
        )));
    }
    let n1 = dim as f64 - 1.0;
    let rhs = |r: f64, y: [f64; 2]| -> Result<[f64; 2], PairError> {
        let vr = v(r)?;
        let wr = w(r)?;
        if !vr.is_finite() || !wr.is_finite() {
            return Err(PairError::Weight {
                r,
                message: format!("non-finite weight (V = {vr}, W = {wr})"),
            });
        }
        if vr <= 0.0 {
            return Err(PairError::Weight {
                r,
                message: format!("V must be positive, got {vr}"),
            });
        }
        let rn = r.powf(n1);
        Ok([y[1] / (rn * vr), -rn * wr * y[0]])
    };

    let end = radius * (1.0 - opts.end_gap);
    let mut r = opts.eps;
    let mut y = [1.0, 0.0];
    let mut k1 = rhs(r, y)?;
    let mut h = 1e-3 * opts.eps;
    let mut scale = [1.0f64, 0.0f64];
    let mut samples = vec![SolutionSample {
        r,
        phi: y[0],
        flux: y[1],
    }];
    let mut steps = 0;
    let mut first_zero = None;

    while r < end {
        if steps >= opts.max_steps {
            return Err(PairError::TooManySteps { r });
        }
        if r + h > end {
            h = end - r;
        }
        let (ynew, knew, err) = dopri_step(&rhs, r, y, k1, h, opts.rtol, scale)?;
        if err <= 1.0 {
            steps += 1;
            let rnew = r + h;
            if ynew[0] <= 0.0 {
                let z = hermite_root(r, y[0], k1[0], rnew, ynew[0], knew[0]);
                first_zero = Some(z);
                samples.push(SolutionSample {
                    r: rnew,
                    phi: ynew[0],
                    flux: ynew[1],
                });
                break;
            }
            r = rnew;
            y = ynew;
            k1 = knew;
            scale[0] = scale[0].max(y[0].abs());
            scale[1] = scale[1].max(y[1].abs());
            samples.push(SolutionSample {
                r,
                phi: y[0],
                flux: y[1],
            });
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= if err <= 1.0 { factor } else { factor.min(1.0) };
        if h < 1e-14 * r && r < end {
            return Err(PairError::StepUnderflow { r });
        }
    }

    let flags = IntegrabilityFlags {
        inverse_weight_diverges_at_0: divergence_flag(|r| Ok(1.0 / (r.powf(n1) * v(r)?)), opts.eps, end),
        weight_diverges_at_0: divergence_flag(|r| Ok(r.powf(n1) * v(r)?), opts.eps, end),
    };
    Ok(PairVerdict {
        is_pair: first_zero.is_none(),
        first_zero,
        end: samples.last().map(|s| s.r).unwrap_or(end),
        steps,
        flags,
        solution_samples: samples,
    })
}

fn divergence_flag<F: Fn(f64) -> Result<f64, PairError>>(f: F, eps: f64, end: f64) -> Option<bool> {
    let spec = QuadratureSpec::with_tolerances(0.0, 1e-8);
    let g = |s: f64| {
        let r = s.exp();
        f(r).map(|v| v * r).unwrap_or(f64::NAN)
    };
    let main = integrate(g, eps.ln(), end.ln(), &spec).ok()?.value;
    let tail = integrate(g, (eps * 1e-3).ln(), eps.ln(), &spec).ok()?.value;
    Some(tail.abs() > 1e-2 * main.abs())
}

fn dopri_step<F>(
    f: &F,
    r: f64,
    y: [f64; 2],
    k1: [f64; 2],
    h: f64,
    rtol: f64,
    scale: [f64; 2],
) -> Result<([f64; 2], [f64; 2], f64), PairError>
where
    F: Fn(f64, [f64; 2]) -> Result<[f64; 2], PairError>,
{
    let comb = |c: &[(f64, [f64; 2])]| {
        let mut out = y;
        for (a, k) in c {
            out[0] += h * a * k[0];
            out[1] += h * a * k[1];
        }
        out
    };
    let k2 = f(r + h / 5.0, comb(&[(1.0 / 5.0, k1)]))?;
    let k3 = f(
        r + 3.0 * h / 10.0,
        comb(&[(3.0 / 40.0, k1), (9.0 / 40.0, k2)]),
    )?;
    let k4 = f(
        r + 4.0 * h / 5.0,
        comb(&[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)]),
    )?;
    let k5 = f(
        r + 8.0 * h / 9.0,
        comb(&[
            (19372.0 / 6561.0, k1),
            (-25360.0 / 2187.0, k2),
            (64448.0 / 6561.0, k3),
            (-212.0 / 729.0, k4),
        ]),
    )?;
    let k6 = f(
        r + h,
        comb(&[
            (9017.0 / 3168.0, k1),
            (-355.0 / 33.0, k2),
            (46732.0 / 5247.0, k3),
            (49.0 / 176.0, k4),
            (-5103.0 / 18656.0, k5),
        ]),
    )?;
    let ynew = comb(&[
        (35.0 / 384.0, k1),
        (500.0 / 1113.0, k3),
        (125.0 / 192.0, k4),
        (-2187.0 / 6784.0, k5),
        (11.0 / 84.0, k6),
    ]);
    let k7 = f(r + h, ynew)?;
    let e = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err: f64 = 0.0;
    for i in 0..2 {
        let mut ei = 0.0;
        for (c, k) in e.iter().zip(ks.iter()) {
            ei += c * k[i];
        }
        ei *= h;
        let sc = 1e-3 * rtol * scale[i] + rtol * y[i].abs().max(ynew[i].abs()) + 1e-300;
        err = err.max((ei / sc).abs());
    }
    if !err.is_finite() {
        err = f64::INFINITY;
    }
    Ok((ynew, k7, err))
}

fn hermite_eval(x0: f64, y0: f64, d0: f64, x1: f64, y1: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = 6.0 * t2 - 6.0 * t;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = -6.0 * t2 + 6.0 * t;
    let dh11 = 3.0 * t2 - 2.0 * t;
    let dv = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
    (v, dv)
}

fn hermite_root(x0: f64, y0: f64, d0: f64, x1: f64, y1: f64, d1: f64) -> f64 {
    let (mut lo, mut hi) = (x0, x1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hermite_eval(x0, y0, d0, x1, y1, d1, mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Cubic Hermite interpolation of phi and of the flux between shooting
// nodes; outside the sampled range the nearest node is returned.
fn interpolate(nodes: &[[f64; 5]], r: f64) -> (f64, f64) {
    let i = nodes.partition_point(|s| s[0] < r);
    if i == 0 {
        return (nodes[0][1], nodes[0][3]);
    }
    if i >= nodes.len() {
        let s = nodes[nodes.len() - 1];
        return (s[1], s[3]);
    }
    let (a, b) = (nodes[i - 1], nodes[i]);
    let (phi, _) = hermite_eval(a[0], a[1], a[2], b[0], b[1], b[2], r);
    let (flux, _) = hermite_eval(a[0], a[3], a[4], b[0], b[3], b[4], r);
    (phi, flux)
}

/// Relative defect of the ODE at r: ((r^{N-1} V phi')' + r^{N-1} W phi)
/// divided by |r^{N-1} W phi| + |r^{N-1} V phi'|/r. The flux derivative
/// is a central difference with step 1e-5 min(1, distance to the nearest
/// endpoint).
pub fn ode_residual(pair: &BesselPair, r: f64) -> f64 {
    let dist = pair.interval.upper.map_or(r, |u| r.min((u - r).abs()));
    let h = 1e-5 * dist.min(1.0);
    let dp = (pair.flux(r + h) - pair.flux(r - h)) / (2.0 * h);
    let wterm = r.powf(pair.dim as f64 - 1.0) * pair.w(r) * pair.phi(r);
    let scale = wterm.abs() + pair.flux(r).abs() / r + f64::MIN_POSITIVE;
    (dp + wterm).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in PairId::ALL {
            assert_eq!(id.as_str().parse::<PairId>().unwrap(), id);
        }
        assert!("nope".parse::<PairId>().is_err());
    }

    #[test]
    fn hyperbolic_g_matches_closed_form_for_n4() {
        // N = 4: G = 1/(2 r^2) + 2 ln r - r^2/2
        for r in [0.05, 0.3, 0.7, 0.95] {
            let want = 0.5 / (r * r) + 2.0 * f64::ln(r) - 0.5 * r * r;
            let got = hyperbolic_g(4, r);
            assert!((got - want).abs() <= 1e-12 * want, "r = {r}: {got} vs {want}");
        }
    }

    #[test]
    fn hyperbolic_g_relative_accuracy_near_boundary() {
        // N = 8 near r = 1: G ~ (2(1-r))^{7}/7 to leading order; check
        // against composite Simpson on the original variable.
        let r = 0.98;
        let m = 20000;
        let h = (1.0 - r) / m as f64;
        let mut s = hyperbolic_f(8, r) + 0.0;
        for i in 1..m {
            let t = r + i as f64 * h;
            s += hyperbolic_f(8, t) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let want = s * h / 3.0;
        let got = hyperbolic_g(8, r);
        assert!((got - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn sobolev_helpers_are_stable() {
        for r in [1e-6, 1e-3, 0.2, 0.9, 1.5, 6.0] {
            let u = sobolev_u(r);
            let want_u = if r < 0.01 {
                let r2 = r * r;
                -r2 / 3.0 + r2 * r2 / 45.0
            } else {
                1.0 - r / r.tanh()
            };
            assert!((u - want_u).abs() <= 1e-12 * want_u.abs());
            assert!(u < 0.0);
        }
        assert!((sinh_minus_x(0.5) - (0.5f64.sinh() - 0.5)).abs() < 1e-16);
    }
}
