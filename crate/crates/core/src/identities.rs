//! Catalog of Hardy-type identities and inequalities, and their numerical
//! verification on separated test functions f = g(rho) Y_l.
//!
//! Every term is c * int weight(rho) * Q[h](rho) dV, where Q is one of the
//! functionals below applied to an operand h built from g. Angular factors
//! are normalized away (int |Y_l|^2 = 1), so both sides are compared as
//! radial integrals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::besselpair::{hyperbolic_f, hyperbolic_g, BesselPair, PairError, PairId, PairParams};
use crate::geometry::{angular_eigenvalue, ball_to_geodesic, coth_minus_inv, geodesic_to_ball, ModelManifold};
use crate::profile::{shifted_profiles, standard_profiles, TestProfile};
use crate::quadrature::{integrate, QuadratureError, QuadratureSpec};
use crate::specfun;

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error("term '{term}': {source}")]
    Quadrature {
        term: String,
        #[source]
        source: QuadratureError,
    },
}

fn config<T>(msg: impl Into<String>) -> Result<T, IdentityError> {
    Err(IdentityError::Config(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseId {
    T1Generic,
    T2Shifted,
    Ct1Ineq,
    C1,
    C2,
    C3Global,
    C4Stability,
    BvBall,
    T6BallModel,
    V2Hyperbolic,
    H1Generic,
    T31,
    T32,
    T33,
    HLambda,
    HCritlog,
    HBesselR,
}

impl CaseId {
    pub const ALL: [CaseId; 17] = [
        CaseId::T1Generic,
        CaseId::T2Shifted,
        CaseId::Ct1Ineq,
        CaseId::C1,
        CaseId::C2,
        CaseId::C3Global,
        CaseId::C4Stability,
        CaseId::BvBall,
        CaseId::T6BallModel,
        CaseId::V2Hyperbolic,
        CaseId::H1Generic,
        CaseId::T31,
        CaseId::T32,
        CaseId::T33,
        CaseId::HLambda,
        CaseId::HCritlog,
        CaseId::HBesselR,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::T1Generic => "T1-generic",
            CaseId::T2Shifted => "T2-shifted",
            CaseId::Ct1Ineq => "CT1-ineq",
            CaseId::C1 => "C1",
            CaseId::C2 => "C2",
            CaseId::C3Global => "C3-global",
            CaseId::C4Stability => "C4-stability",
            CaseId::BvBall => "BV-ball",
            CaseId::T6BallModel => "T6-ballmodel",
            CaseId::V2Hyperbolic => "V2-hyperbolic",
            CaseId::H1Generic => "H1-generic",
            CaseId::T31 => "T3.1",
            CaseId::T32 => "T3.2",
            CaseId::T33 => "T3.3",
            CaseId::HLambda => "H-lambda",
            CaseId::HCritlog => "H-critlog",
            CaseId::HBesselR => "H-bessel-R",
        }
    }

    /// Curvature the case is stated for; None means any b >= 0.
    pub fn pinned_curvature(self) -> Option<f64> {
        match self {
            CaseId::C4Stability => Some(0.0),
            CaseId::T6BallModel
            | CaseId::V2Hyperbolic
            | CaseId::H1Generic
            | CaseId::T31
            | CaseId::T32
            | CaseId::T33
            | CaseId::HLambda
            | CaseId::HCritlog
            | CaseId::HBesselR => Some(1.0),
            _ => None,
        }
    }

    pub fn is_inequality(self) -> bool {
        matches!(self, CaseId::Ct1Ineq | CaseId::C4Stability)
    }

    pub fn is_shifted(self) -> bool {
        matches!(self, CaseId::T2Shifted | CaseId::C3Global)
    }

    pub fn description(self) -> &'static str {
        match self {
            CaseId::T1Generic => "weighted identity for a Bessel pair on M_b with the log-density remainder",
            CaseId::T2Shifted => "identity for f - f(R u) with a two-sided pair vanishing at R",
            CaseId::Ct1Ineq => "comparison inequality: remainder built from a less curved model dropped",
            CaseId::C1 => "power-weight Hardy identity, lambda < N-2",
            CaseId::C2 => "critical Hardy identity with logarithmic weight on (0, R)",
            CaseId::C3Global => "critical logarithmic identity for f - f(R u) on all of M_b",
            CaseId::C4Stability => "stability estimate with logarithmic remainder (Euclidean only)",
            CaseId::BvBall => "Hardy identity on the ball of radius R with Bessel remainder",
            CaseId::T6BallModel => "Euclidean pair transplanted to the Poincare ball model",
            CaseId::V2Hyperbolic => "hyperbolic Hardy identity with the Green-function weight G",
            CaseId::H1Generic => "hyperbolic form of the weighted identity, explicit remainder",
            CaseId::T31 => "hyperbolic Hardy identity with explicit positive remainder",
            CaseId::T32 => "hyperbolic Poincare-Hardy identity",
            CaseId::T33 => "hyperbolic Hardy-Bessel identity with chain of dropped remainders",
            CaseId::HLambda => "hyperbolic weighted Hardy identity with power weight rho^-lambda",
            CaseId::HCritlog => "hyperbolic critical logarithmic Hardy identity",
            CaseId::HBesselR => "hyperbolic identity with J0 remainder on a geodesic ball",
        }
    }

    pub fn parameter_ranges(self) -> &'static str {
        match self {
            CaseId::T1Generic => "pair (default bv-bessel-alpha, lambda=0.5, alpha=0.25, R=2), its params; b >= 0",
            CaseId::T2Shifted => "pair with a two-sided interval (default critical-log), R (default 1); b >= 0",
            CaseId::Ct1Ineq => "pair with nonincreasing phi (default euclid-power), comparison b in [0, b]; b >= 0",
            CaseId::C1 => "lambda < N-2 (default 0); b >= 0",
            CaseId::C2 | CaseId::C3Global => "R > 0 (default 1); b >= 0",
            CaseId::C4Stability => "lambda < N-2 (default 0), R > 0 (default 1); b = 0",
            CaseId::BvBall => "lambda <= N-2 (default 0), R > 0 (default 1); b >= 0",
            CaseId::T6BallModel => "Euclidean pair on (0,1) (default euclid-power) and its params; b = 1",
            CaseId::V2Hyperbolic | CaseId::T31 | CaseId::T32 => "no parameters; b = 1",
            CaseId::H1Generic => "pair (default poincare-sobolev-phi) and its params; b = 1",
            CaseId::T33 => "0 <= alpha <= (N-2)/2 (default min(0.5, (N-2)/2)), R > 0 (default 2); b = 1",
            CaseId::HLambda => "lambda < N-2 (default 0.5); b = 1",
            CaseId::HCritlog | CaseId::HBesselR => "R > 0 (default 2); b = 1",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| IdentityError::Config(format!("unknown case id '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Gradient,
    Radial,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Gradient => "gradient",
            Variant::Radial => "radial",
        })
    }
}

impl FromStr for Variant {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gradient" => Ok(Variant::Gradient),
            "radial" => Ok(Variant::Radial),
            _ => config(format!("unknown variant '{s}' (gradient or radial)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// Geodesic polar coordinate rho.
    Geodesic,
    /// Euclidean radius r in the Poincare ball (b = 1 only).
    Ball,
}

/// A weight function in its native chart.
#[derive(Clone)]
pub struct Weight {
    pub chart: Chart,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Weight {
    pub fn geodesic(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Weight {
            chart: Chart::Geodesic,
            f: Arc::new(f),
        }
    }

    pub fn ball(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Weight {
            chart: Chart::Ball,
            f: Arc::new(f),
        }
    }

    fn at(&self, rho: f64, r: f64) -> f64 {
        match self.chart {
            Chart::Geodesic => (self.f)(rho),
            Chart::Ball => (self.f)(r),
        }
    }
}

/// A multiplier m with its derivative in the native chart.
#[derive(Clone)]
pub struct Multiplier {
    pub chart: Chart,
    f: Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
}

impl Multiplier {
    pub fn geodesic(f: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        Multiplier {
            chart: Chart::Geodesic,
            f: Arc::new(f),
        }
    }

    pub fn ball(f: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        Multiplier {
            chart: Chart::Ball,
            f: Arc::new(f),
        }
    }
}

#[derive(Clone)]
pub enum Functional {
    /// h'^2 + L h^2 / sn_b^2
    GradSq,
    /// h'^2
    RadialSq,
    /// h^2
    ValueSq,
    /// h^2 (phi'/phi) (N-1)(ct_b - 1/rho); `curvature` None uses the
    /// manifold being verified.
    LogDerivSq {
        phi_log_deriv: Weight,
        curvature: Option<f64>,
    },
}

/// h = m * g, or m * (g - g(R)) when shifted.
#[derive(Clone)]
pub struct Operand {
    pub shifted: bool,
    pub multiplier: Option<Multiplier>,
}

#[derive(Clone)]
pub enum TermKind {
    Standard {
        weight: Weight,
        functional: Functional,
        operand: Operand,
    },
    /// (1/4) int |g - R^a g(R) rho^-a|^2 / (rho^{lambda+2} ln^2(rho/R)) on
    /// R^N, with the tails outside the support done in closed form.
    LogStability { radius: f64, a: f64, lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
    Aux,
}

#[derive(Clone)]
pub struct Term {
    pub name: String,
    pub side: Side,
    pub coefficient: f64,
    pub kind: TermKind,
    /// The signed value is expected to be >= 0.
    pub expect_nonnegative: bool,
}

/// A named linear combination of term values required to be >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginSpec {
    pub name: String,
    pub coefficients: Vec<(usize, f64)>,
}

#[derive(Clone)]
pub struct IdentityCase {
    pub id: CaseId,
    pub dim: u32,
    pub variant: Variant,
    pub params: BTreeMap<String, f64>,
    pub pair: Option<String>,
    /// Right end of the radial interval for the profile support.
    pub upper: Option<f64>,
    /// Radius R for shifted cases.
    pub shift_radius: Option<f64>,
    pub terms: Vec<Term>,
    pub margins: Vec<MarginSpec>,
    comparison_b: Option<f64>,
}

/// Inputs for `build_case`; missing values take per-case defaults.
#[derive(Debug, Clone, Default)]
pub struct CaseParams {
    pub dim: u32,
    pub variant: Option<Variant>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub radius: Option<f64>,
    pub pair: Option<PairId>,
    /// A user-supplied pair (e.g. from `check_pair`), used instead of `pair`.
    pub custom_pair: Option<Arc<BesselPair>>,
    pub comparison_b: Option<f64>,
}

impl CaseParams {
    pub fn new(dim: u32) -> Self {
        CaseParams {
            dim,
            ..Default::default()
        }
    }

    pub fn variant(mut self, v: Variant) -> Self {
        self.variant = Some(v);
        self
    }

    pub fn lambda(mut self, x: f64) -> Self {
        self.lambda = Some(x);
        self
    }

    pub fn alpha(mut self, x: f64) -> Self {
        self.alpha = Some(x);
        self
    }

    pub fn radius(mut self, x: f64) -> Self {
        self.radius = Some(x);
        self
    }

    pub fn pair(mut self, p: PairId) -> Self {
        self.pair = Some(p);
        self
    }

    pub fn comparison_b(mut self, b: f64) -> Self {
        self.comparison_b = Some(b);
        self
    }
}

fn d_functional(v: Variant) -> Functional {
    match v {
        Variant::Gradient => Functional::GradSq,
        Variant::Radial => Functional::RadialSq,
    }
}

fn plain(shifted: bool) -> Operand {
    Operand {
        shifted,
        multiplier: None,
    }
}

fn times(shifted: bool, m: Multiplier) -> Operand {
    Operand {
        shifted,
        multiplier: Some(m),
    }
}

fn term(name: &str, side: Side, coefficient: f64, weight: Weight, functional: Functional, operand: Operand) -> Term {
    Term {
        name: name.to_string(),
        side,
        coefficient,
        kind: TermKind::Standard {
            weight,
            functional,
            operand,
        },
        expect_nonnegative: false,
    }
}

fn nonneg(mut t: Term) -> Term {
    t.expect_nonnegative = true;
    t
}

fn one() -> Weight {
    Weight::geodesic(|_| 1.0)
}

fn inv_phi(pair: &Arc<BesselPair>) -> Multiplier {
    let p = Arc::clone(pair);
    Multiplier::geodesic(move |r| {
        let (phi, dphi) = p.phi_and_deriv(r);
        (1.0 / phi, -dphi / (phi * phi))
    })
}

fn pair_weight_v(pair: &Arc<BesselPair>) -> Weight {
    let p = Arc::clone(pair);
    Weight::geodesic(move |r| p.v(r))
}

fn pair_weight_w(pair: &Arc<BesselPair>) -> Weight {
    let p = Arc::clone(pair);
    Weight::geodesic(move |r| p.w(r))
}

fn pair_weight_v_phi2(pair: &Arc<BesselPair>) -> Weight {
    let p = Arc::clone(pair);
    Weight::geodesic(move |r| {
        let phi = p.phi(r);
        p.v(r) * phi * phi
    })
}

fn pair_log_deriv(pair: &Arc<BesselPair>) -> Weight {
    let p = Arc::clone(pair);
    Weight::geodesic(move |r| p.phi_log_deriv(r))
}

// LHS and the gradient term of the generic identity for a pair.
fn generic_main_terms(pair: &Arc<BesselPair>, variant: Variant, shifted: bool) -> Vec<Term> {
    vec![
        term("V |Df|^2", Side::Lhs, 1.0, pair_weight_v(pair), d_functional(variant), plain(shifted)),
        term("W f^2", Side::Lhs, -1.0, pair_weight_w(pair), Functional::ValueSq, plain(shifted)),
        nonneg(term(
            "V phi^2 |D(f/phi)|^2",
            Side::Rhs,
            1.0,
            pair_weight_v_phi2(pair),
            d_functional(variant),
            times(shifted, inv_phi(pair)),
        )),
    ]
}

fn model_logderiv_term(pair: &Arc<BesselPair>, shifted: bool, side: Side, curvature: Option<f64>) -> Term {
    let t = term(
        "V f^2 (phi'/phi)(J'/J)",
        side,
        -1.0,
        pair_weight_v(pair),
        Functional::LogDerivSq {
            phi_log_deriv: pair_log_deriv(pair),
            curvature,
        },
        plain(shifted),
    );
    if pair.monotone && !shifted {
        nonneg(t)
    } else {
        t
    }
}

// (N-1) int V (phi'/phi)(rho cosh - sinh)/(rho sinh) f^2 with the sign of
// the hyperbolic remainder.
fn hyperbolic_logderiv_term(pair: &Arc<BesselPair>, dim: u32) -> Term {
    let p = Arc::clone(pair);
    let n1 = dim as f64 - 1.0;
    let t = term(
        "(N-1) V f^2 (phi'/phi)(rho cosh - sinh)/(rho sinh)",
        Side::Rhs,
        -n1,
        Weight::geodesic(move |r| p.v(r) * p.phi_log_deriv(r) * coth_minus_inv(r)),
        Functional::ValueSq,
        plain(false),
    );
    if pair.monotone {
        nonneg(t)
    } else {
        t
    }
}

fn margin(name: &str, coefficients: &[(usize, f64)]) -> MarginSpec {
    MarginSpec {
        name: name.to_string(),
        coefficients: coefficients.to_vec(),
    }
}

fn resolve_pair(params: &CaseParams, default: PairId, defaults: PairParams) -> Result<Arc<BesselPair>, IdentityError> {
    if let Some(p) = &params.custom_pair {
        if p.dim != params.dim {
            return config(format!("pair dimension {} differs from N = {}", p.dim, params.dim));
        }
        return Ok(Arc::clone(p));
    }
    let id = params.pair.unwrap_or(default);
    let use_defaults = params.pair.is_none() || params.pair == Some(default);
    let pp = PairParams {
        lambda: params.lambda.or(if use_defaults { defaults.lambda } else { None }),
        alpha: params.alpha.or(if use_defaults { defaults.alpha } else { None }),
        radius: params.radius.or(if use_defaults { defaults.radius } else { None }),
    };
    Ok(Arc::new(BesselPair::catalog(id, params.dim, pp)?))
}

fn pair_params_map(pair: &BesselPair) -> BTreeMap<String, f64> {
    pair.params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Build the terms of a catalog case.
pub fn build_case(id: CaseId, params: &CaseParams) -> Result<IdentityCase, IdentityError> {
    let dim = params.dim;
    if dim < 3 {
        return config(format!("N must be >= 3, got {dim}"));
    }
    let n = dim as f64;
    let variant = params.variant.unwrap_or(Variant::Gradient);
    let mut case = IdentityCase {
        id,
        dim,
        variant,
        params: BTreeMap::new(),
        pair: None,
        upper: None,
        shift_radius: None,
        terms: Vec::new(),
        margins: Vec::new(),
        comparison_b: params.comparison_b,
    };
    let no_pair = PairParams::default();
    match id {
        CaseId::T1Generic | CaseId::BvBall | CaseId::C1 | CaseId::C2 => {
            let pair = match id {
                CaseId::T1Generic => resolve_pair(
                    params,
                    PairId::BvBesselAlpha,
                    PairParams {
                        lambda: Some(0.5),
                        alpha: Some(0.25),
                        radius: Some(2.0),
                    },
                )?,
                CaseId::BvBall => Arc::new(BesselPair::catalog(
                    PairId::BvBessel,
                    dim,
                    PairParams {
                        lambda: params.lambda,
                        radius: params.radius,
                        alpha: None,
                    },
                )?),
                CaseId::C1 => {
                    let lambda = params.lambda.unwrap_or(0.0);
                    if !(lambda < n - 2.0) {
                        return config(format!("C1 needs lambda < N-2, got {lambda}"));
                    }
                    Arc::new(BesselPair::catalog(
                        PairId::EuclidPower,
                        dim,
                        PairParams {
                            lambda: Some(lambda),
                            ..no_pair
                        },
                    )?)
                }
                _ => Arc::new(BesselPair::catalog(
                    PairId::CriticalLog,
                    dim,
                    PairParams {
                        radius: params.radius,
                        ..no_pair
                    },
                )?),
            };
            case.params = pair_params_map(&pair);
            case.pair = Some(pair.catalog_id_str());
            case.upper = pair.interval.upper;
            case.terms = generic_main_terms(&pair, variant, false);
            case.terms.push(model_logderiv_term(&pair, false, Side::Rhs, None));
        }
        CaseId::T2Shifted | CaseId::C3Global => {
            let pair = if id == CaseId::C3Global {
                Arc::new(BesselPair::catalog(
                    PairId::CriticalLog,
                    dim,
                    PairParams {
                        radius: params.radius,
                        ..no_pair
                    },
                )?)
            } else {
                resolve_pair(params, PairId::CriticalLog, no_pair)?
            };
            if !pair.interval.two_sided {
                return config(format!(
                    "{id} needs a pair that vanishes at R and continues past it; {} does not",
                    pair.catalog_id_str()
                ));
            }
            let radius = pair.interval.upper.expect("two-sided pairs have finite R");
            case.params = pair_params_map(&pair);
            case.pair = Some(pair.catalog_id_str());
            case.shift_radius = Some(radius);
            case.terms = generic_main_terms(&pair, variant, true);
            case.terms.push(model_logderiv_term(&pair, true, Side::Rhs, None));
        }
        CaseId::Ct1Ineq => {
            let pair = resolve_pair(params, PairId::EuclidPower, no_pair)?;
            if !pair.monotone {
                return config(format!(
                    "CT1-ineq needs a nonincreasing phi; {} with these parameters is not",
                    pair.catalog_id_str()
                ));
            }
            case.params = pair_params_map(&pair);
            if let Some(bc) = params.comparison_b {
                case.params.insert("comparison_b".into(), bc);
            }
            case.pair = Some(pair.catalog_id_str());
            case.upper = pair.interval.upper;
            case.terms = generic_main_terms(&pair, variant, false);
            let mut aux = model_logderiv_term(&pair, false, Side::Aux, params.comparison_b);
            aux.name = "V f^2 (phi'/phi)(J_c'/J_c)".into();
            case.terms.push(aux);
            case.margins = vec![
                margin("comparison step", &[(0, 1.0), (1, 1.0), (2, -1.0), (3, -1.0)]),
                margin("drop comparison remainder", &[(3, 1.0)]),
            ];
        }
        CaseId::C4Stability => {
            let lambda = params.lambda.unwrap_or(0.0);
            if !(lambda < n - 2.0) {
                return config(format!("C4-stability needs lambda < N-2, got {lambda}"));
            }
            let radius = params.radius.unwrap_or(1.0);
            if !(radius > 0.0 && radius.is_finite()) {
                return config(format!("R must be positive, got {radius}"));
            }
            let a = 0.5 * (n - lambda - 2.0);
            case.params = BTreeMap::from([("lambda".into(), lambda), ("R".into(), radius)]);
            case.terms = vec![
                term(
                    "rho^-lambda |Df|^2",
                    Side::Lhs,
                    1.0,
                    Weight::geodesic(move |r| r.powf(-lambda)),
                    d_functional(variant),
                    plain(false),
                ),
                term(
                    "a^2 rho^(-lambda-2) f^2",
                    Side::Lhs,
                    -a * a,
                    Weight::geodesic(move |r| r.powf(-lambda - 2.0)),
                    Functional::ValueSq,
                    plain(false),
                ),
                Term {
                    name: "|f - R^a f(R) rho^-a|^2 / (rho^(lambda+2) ln^2(rho/R))".into(),
                    side: Side::Rhs,
                    coefficient: 0.25,
                    kind: TermKind::LogStability { radius, a, lambda },
                    expect_nonnegative: true,
                },
            ];
            case.margins = vec![margin("lhs - rhs", &[(0, 1.0), (1, 1.0), (2, -1.0)])];
        }
        CaseId::T6BallModel => {
            let pair = resolve_pair(params, PairId::EuclidPower, no_pair)?;
            if pair.interval.upper.is_some_and(|u| u < 1.0) {
                return config(format!(
                    "T6-ballmodel needs a pair on (0,1); {} lives on (0, {})",
                    pair.catalog_id_str(),
                    pair.interval.upper.unwrap_or(f64::INFINITY)
                ));
            }
            case.params = pair_params_map(&pair);
            case.pair = Some(pair.catalog_id_str());
            let np = n - 2.0;
            let (p1, p2, p3, p4) = (Arc::clone(&pair), Arc::clone(&pair), Arc::clone(&pair), Arc::clone(&pair));
            let v = Weight::ball(move |r| p1.v(r) * (1.0 - r * r).powf(np));
            let w = Weight::ball(move |r| p2.w(r) * (1.0 - r * r).powf(np + 2.0) / 4.0);
            let vphi2 = Weight::ball(move |r| {
                let phi = p3.phi(r);
                p3.v(r) * (1.0 - r * r).powf(np) * phi * phi
            });
            let m = Multiplier::ball(move |r| {
                let (phi, dphi) = p4.phi_and_deriv(r);
                (1.0 / phi, -dphi / (phi * phi))
            });
            case.terms = vec![
                term("V |Df|^2", Side::Lhs, 1.0, v, d_functional(variant), plain(false)),
                term("W f^2", Side::Lhs, -1.0, w, Functional::ValueSq, plain(false)),
                nonneg(term(
                    "V phi^2 |D(f/phi)|^2",
                    Side::Rhs,
                    1.0,
                    vphi2,
                    d_functional(variant),
                    times(false, m),
                )),
            ];
        }
        CaseId::V2Hyperbolic => {
            let c = 0.25 * (n - 2.0) * (n - 2.0);
            let v2 = Weight::ball(move |r| {
                let f = hyperbolic_f(dim, r);
                let g = hyperbolic_g(dim, r);
                let q = 1.0 - r * r;
                f * f * q * q / (4.0 * (n - 2.0) * (n - 2.0) * g * g)
            });
            let gw = Weight::ball(move |r| hyperbolic_g(dim, r));
            let m = Multiplier::ball(move |r| {
                let g = hyperbolic_g(dim, r);
                let s = g.sqrt();
                (1.0 / s, 0.5 * hyperbolic_f(dim, r) / (g * s))
            });
            case.terms = vec![
                term("|Df|^2", Side::Lhs, 1.0, one(), d_functional(variant), plain(false)),
                term("((N-2)/2)^2 V2 f^2", Side::Lhs, -c, v2, Functional::ValueSq, plain(false)),
                nonneg(term("G |D(f/sqrt(G))|^2", Side::Rhs, 1.0, gw, d_functional(variant), times(false, m))),
            ];
        }
        CaseId::H1Generic => {
            let pair = resolve_pair(params, PairId::PoincareSobolevPhi, no_pair)?;
            case.params = pair_params_map(&pair);
            case.pair = Some(pair.catalog_id_str());
            case.upper = pair.interval.upper;
            case.terms = generic_main_terms(&pair, variant, false);
            case.terms.push(hyperbolic_logderiv_term(&pair, dim));
        }
        CaseId::T31 | CaseId::HLambda => {
            let lambda = if id == CaseId::T31 {
                0.0
            } else {
                params.lambda.unwrap_or(0.5)
            };
            if !(lambda < n - 2.0) {
                return config(format!("H-lambda needs lambda < N-2, got {lambda}"));
            }
            let a = 0.5 * (n - lambda - 2.0);
            if id == CaseId::HLambda {
                case.params.insert("lambda".into(), lambda);
            }
            case.terms = vec![
                term(
                    "rho^-lambda |Df|^2",
                    Side::Lhs,
                    1.0,
                    Weight::geodesic(move |r| r.powf(-lambda)),
                    d_functional(variant),
                    plain(false),
                ),
                term(
                    "a^2 f^2 / rho^(lambda+2)",
                    Side::Lhs,
                    -a * a,
                    Weight::geodesic(move |r| r.powf(-lambda - 2.0)),
                    Functional::ValueSq,
                    plain(false),
                ),
                nonneg(term(
                    "rho^(2-N) |D(rho^a f)|^2",
                    Side::Rhs,
                    1.0,
                    Weight::geodesic(move |r| r.powf(2.0 - n)),
                    d_functional(variant),
                    times(false, Multiplier::geodesic(move |r| (r.powf(a), a * r.powf(a - 1.0)))),
                )),
                nonneg(term(
                    "(rho cosh - sinh)/(rho^(lambda+2) sinh) f^2",
                    Side::Rhs,
                    a * (n - 1.0),
                    Weight::geodesic(move |r| coth_minus_inv(r) * r.powf(-lambda - 1.0)),
                    Functional::ValueSq,
                    plain(false),
                )),
            ];
        }
        CaseId::T32 => {
            let c = 0.5 * (n - 1.0);
            case.terms = vec![
                term("|Df|^2", Side::Lhs, 1.0, one(), d_functional(variant), plain(false)),
                term("f^2", Side::Lhs, -c * c, one(), Functional::ValueSq, plain(false)),
                term(
                    "f^2 / rho^2",
                    Side::Lhs,
                    -0.25,
                    Weight::geodesic(|r| 1.0 / (r * r)),
                    Functional::ValueSq,
                    plain(false),
                ),
            ];
            if dim != 3 {
                case.terms.push(term(
                    "f^2 / sinh^2",
                    Side::Lhs,
                    -(n - 1.0) * (n - 3.0) / 4.0,
                    Weight::geodesic(|r| {
                        let s = r.sinh();
                        1.0 / (s * s)
                    }),
                    Functional::ValueSq,
                    plain(false),
                ));
            }
            case.terms.push(nonneg(term(
                "rho/sinh^(N-1) |D(sinh^((N-1)/2) f / rho^(1/2))|^2",
                Side::Rhs,
                1.0,
                Weight::geodesic(move |r| r / r.sinh().powf(n - 1.0)),
                d_functional(variant),
                times(
                    false,
                    Multiplier::geodesic(move |r| {
                        let m = r.sinh().powf(c) / r.sqrt();
                        (m, m * (c / r.tanh() - 0.5 / r))
                    }),
                ),
            )));
        }
        CaseId::T33 => {
            let a = 0.5 * (n - 2.0);
            let alpha = params.alpha.unwrap_or(a.min(0.5));
            let radius = params.radius.unwrap_or(2.0);
            let pair = Arc::new(BesselPair::catalog(
                PairId::BvBesselAlpha,
                dim,
                PairParams {
                    lambda: Some(0.0),
                    alpha: Some(alpha),
                    radius: Some(radius),
                },
            )?);
            let z = specfun::bessel_first_zero(alpha).map_err(PairError::from)?;
            let k = z / radius;
            case.params = BTreeMap::from([("alpha".into(), alpha), ("R".into(), radius)]);
            case.upper = Some(radius);
            let p = Arc::clone(&pair);
            case.terms = vec![
                term("|Df|^2", Side::Lhs, 1.0, one(), d_functional(variant), plain(false)),
                term(
                    "((N-2)^2/4 - alpha^2) f^2 / rho^2",
                    Side::Lhs,
                    -(a * a - alpha * alpha),
                    Weight::geodesic(|r| 1.0 / (r * r)),
                    Functional::ValueSq,
                    plain(false),
                ),
                term("z^2/R^2 f^2", Side::Rhs, k * k, one(), Functional::ValueSq, plain(false)),
                nonneg(term(
                    "J_alpha^2/rho^(N-2) |D(f/phi)|^2",
                    Side::Rhs,
                    1.0,
                    pair_weight_v_phi2(&pair),
                    d_functional(variant),
                    times(false, inv_phi(&pair)),
                )),
                nonneg(term(
                    "(N-1) ((2-N)/(2rho) + (z/R) J'/J) (rho cosh - sinh)/(rho sinh) f^2",
                    Side::Rhs,
                    -(n - 1.0),
                    Weight::geodesic(move |r| p.phi_log_deriv(r) * coth_minus_inv(r)),
                    Functional::ValueSq,
                    plain(false),
                )),
            ];
            case.margins = vec![
                margin("drop Bessel gradient remainder", &[(3, 1.0)]),
                margin("drop logarithmic-derivative term", &[(4, 1.0)]),
                margin("lhs - z^2/R^2 int f^2", &[(0, 1.0), (1, 1.0), (2, -1.0)]),
            ];
        }
        CaseId::HCritlog => {
            let radius = params.radius.unwrap_or(2.0);
            if !(radius > 0.0 && radius.is_finite()) {
                return config(format!("R must be positive, got {radius}"));
            }
            case.params = BTreeMap::from([("R".into(), radius)]);
            case.upper = Some(radius);
            case.terms = vec![
                term(
                    "rho^(2-N) |Df|^2",
                    Side::Lhs,
                    1.0,
                    Weight::geodesic(move |r| r.powf(2.0 - n)),
                    d_functional(variant),
                    plain(false),
                ),
                term(
                    "f^2 / (rho^N ln^2(rho/R))",
                    Side::Lhs,
                    -0.25,
                    Weight::geodesic(move |r| {
                        let l = (r / radius).ln();
                        1.0 / (r.powf(n) * l * l)
                    }),
                    Functional::ValueSq,
                    plain(false),
                ),
                nonneg(term(
                    "rho^(2-N) |ln(rho/R)| |D(f/sqrt|ln(rho/R)|)|^2",
                    Side::Rhs,
                    1.0,
                    Weight::geodesic(move |r| r.powf(2.0 - n) * (r / radius).ln().abs()),
                    d_functional(variant),
                    times(
                        false,
                        Multiplier::geodesic(move |r| {
                            let l = (radius / r).ln();
                            let s = l.sqrt();
                            (1.0 / s, 0.5 / (r * l * s))
                        }),
                    ),
                )),
                nonneg(term(
                    "rho^(2-N) (rho cosh - sinh)/(2 |ln(rho/R)| rho^2 sinh) f^2",
                    Side::Rhs,
                    n - 1.0,
                    Weight::geodesic(move |r| {
                        r.powf(2.0 - n) * coth_minus_inv(r) / (2.0 * r * (radius / r).ln())
                    }),
                    Functional::ValueSq,
                    plain(false),
                )),
            ];
        }
        CaseId::HBesselR => {
            let radius = params.radius.unwrap_or(2.0);
            let pair = Arc::new(BesselPair::catalog(
                PairId::PoincareBesselR,
                dim,
                PairParams {
                    radius: Some(radius),
                    ..no_pair
                },
            )?);
            let k = specfun::bessel_first_zero(0.0).map_err(PairError::from)? / radius;
            case.params = BTreeMap::from([("R".into(), radius)]);
            case.upper = Some(radius);
            let j = move |r: f64| {
                let x = k * r;
                (
                    specfun::bessel_j(0.0, x).unwrap_or(f64::NAN),
                    specfun::bessel_j_deriv(0.0, x).unwrap_or(f64::NAN),
                )
            };
            case.terms = vec![
                term(
                    "rho^(2-N) |Df|^2",
                    Side::Lhs,
                    1.0,
                    Weight::geodesic(move |r| r.powf(2.0 - n)),
                    d_functional(variant),
                    plain(false),
                ),
                term(
                    "z^2/R^2 rho^(2-N) f^2",
                    Side::Lhs,
                    -k * k,
                    Weight::geodesic(move |r| r.powf(2.0 - n)),
                    Functional::ValueSq,
                    plain(false),
                ),
                nonneg(term(
                    "J0^2 rho^(2-N) |D(f/J0)|^2",
                    Side::Rhs,
                    1.0,
                    pair_weight_v_phi2(&pair),
                    d_functional(variant),
                    times(false, inv_phi(&pair)),
                )),
                nonneg(term(
                    "(N-1)(z/R) (J0'/J0)(rho cosh - sinh)/(rho^(N-1) sinh) f^2",
                    Side::Rhs,
                    -(n - 1.0) * k,
                    Weight::geodesic(move |r| {
                        let (j0, dj0) = j(r);
                        dj0 / j0 * coth_minus_inv(r) * r.powf(2.0 - n)
                    }),
                    Functional::ValueSq,
                    plain(false),
                )),
            ];
        }
    }
    Ok(case)
}

impl IdentityCase {
    /// Default profile set for this case.
    pub fn standard_profiles(&self) -> Vec<TestProfile> {
        match self.shift_radius {
            Some(r) => shifted_profiles(r),
            None => standard_profiles(self.upper),
        }
    }

    pub fn is_inequality(&self) -> bool {
        self.id.is_inequality()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermValue {
    pub name: String,
    pub side: Side,
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginValue {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub case: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub b: f64,
    pub variant: Variant,
    pub ell: u32,
    pub pair: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub profile: String,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub meta: ReportMeta,
    pub terms: Vec<TermValue>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub margins: Vec<MarginValue>,
    pub pass: bool,
}

impl VerificationReport {
    /// Smallest margin (lhs - rhs for inequalities), or 0 for identities.
    pub fn margin(&self) -> f64 {
        self.margins
            .iter()
            .map(|m| m.value)
            .fold(f64::INFINITY, f64::min)
            .min(if self.margins.is_empty() { 0.0 } else { f64::INFINITY })
    }

    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|t| t.value.abs()).fold(0.0, f64::max)
    }
}

struct Ctx<'a> {
    m: &'a ModelManifold,
    f: &'a TestProfile,
    ell_eigen: f64,
}

fn operand_at(op: &Operand, f: &TestProfile, chart: Chart, rho: f64, r: f64) -> (f64, f64) {
    let (g, g_rho) = if op.shifted {
        f.shifted_with_deriv(rho)
    } else {
        f.value_with_deriv(rho)
    };
    // derivative in the integration chart
    let g_x = match chart {
        Chart::Geodesic => g_rho,
        Chart::Ball => g_rho * 2.0 / (1.0 - r * r),
    };
    let Some(m) = &op.multiplier else {
        return (g, g_x);
    };
    let (mv, m_native) = match m.chart {
        Chart::Geodesic => (m.f)(rho),
        Chart::Ball => (m.f)(r),
    };
    let m_x = match (m.chart, chart) {
        (Chart::Geodesic, Chart::Geodesic) | (Chart::Ball, Chart::Ball) => m_native,
        (Chart::Ball, Chart::Geodesic) => m_native * 0.5 * (1.0 - r * r),
        (Chart::Geodesic, Chart::Ball) => m_native * 2.0 / (1.0 - r * r),
    };
    (g * mv, g_x * mv + g * m_x)
}

fn standard_integrand(
    ctx: &Ctx,
    chart: Chart,
    weight: &Weight,
    functional: &Functional,
    operand: &Operand,
    x: f64,
) -> f64 {
    let (rho, r) = match chart {
        Chart::Geodesic => (x, geodesic_to_ball(x)),
        Chart::Ball => (ball_to_geodesic(x).unwrap_or(f64::NAN), x),
    };
    let (h, hx) = operand_at(operand, ctx.f, chart, rho, r);
    if h == 0.0 && hx == 0.0 {
        return 0.0;
    }
    let w = weight.at(rho, r);
    let n = ctx.m.dim as i32;
    let q = match chart {
        Chart::Geodesic => match functional {
            Functional::GradSq => {
                let sn = ctx.m.metric_radius(rho);
                hx * hx + ctx.ell_eigen * h * h / (sn * sn)
            }
            Functional::RadialSq => hx * hx,
            Functional::ValueSq => h * h,
            Functional::LogDerivSq {
                phi_log_deriv,
                curvature,
            } => {
                let model = ModelManifold {
                    dim: ctx.m.dim,
                    curvature: curvature.unwrap_or(ctx.m.curvature),
                };
                let ld = model.log_density_deriv(rho);
                if ld == 0.0 {
                    0.0
                } else {
                    h * h * phi_log_deriv.at(rho, r) * ld
                }
            }
        },
        Chart::Ball => {
            let conf = 0.25 * (1.0 - r * r) * (1.0 - r * r);
            match functional {
                Functional::GradSq => conf * (hx * hx + ctx.ell_eigen * h * h / (r * r)),
                Functional::RadialSq => conf * hx * hx,
                Functional::ValueSq => h * h,
                Functional::LogDerivSq { phi_log_deriv, .. } => {
                    let model = ModelManifold { dim: ctx.m.dim, curvature: 1.0 };
                    h * h * phi_log_deriv.at(rho, r) * model.log_density_deriv(rho)
                }
            }
        }
    };
    let measure = match chart {
        Chart::Geodesic => ctx.m.volume_density(rho),
        Chart::Ball => 2f64.powi(n) * r.powi(n - 1) / (1.0 - r * r).powi(n),
    };
    w * q * measure
}

fn quad_err(term: &Term) -> impl Fn(QuadratureError) -> IdentityError + '_ {
    move |source| IdentityError::Quadrature {
        term: term.name.clone(),
        source,
    }
}

fn evaluate_term(
    case: &IdentityCase,
    term: &Term,
    ctx: &Ctx,
    chart: Chart,
) -> Result<(f64, f64), IdentityError> {
    let (lo, hi) = ctx.f.support();
    let singular: Vec<f64> = case.shift_radius.into_iter().collect();
    match &term.kind {
        TermKind::Standard {
            weight,
            functional,
            operand,
        } => {
            let integrand = |x: f64| standard_integrand(ctx, chart, weight, functional, operand, x);
            let (a, b, sing) = match chart {
                Chart::Geodesic => (lo, hi, singular),
                Chart::Ball => (
                    geodesic_to_ball(lo),
                    geodesic_to_ball(hi),
                    singular.iter().map(|&s| geodesic_to_ball(s)).collect(),
                ),
            };
            let spec = QuadratureSpec::default().singular_at(&sing);
            let e = integrate(integrand, a, b, &spec).map_err(quad_err(term))?;
            Ok((term.coefficient * e.value, term.coefficient.abs() * e.err_est))
        }
        TermKind::LogStability { radius, a, lambda } => {
            if chart != Chart::Geodesic || ctx.m.curvature != 0.0 {
                return config("the stability term is only defined on Euclidean space");
            }
            let (radius, a, lambda) = (*radius, *a, *lambda);
            let g_r = ctx.f.value(radius);
            let nn = ctx.m.dim as i32;
            let coef = radius.powf(a) * g_r;
            let integrand = |rho: f64| {
                let h = ctx.f.value(rho) - coef * rho.powf(-a);
                let l = (rho / radius).ln();
                h * h / (rho.powf(lambda + 2.0) * l * l) * rho.powi(nn - 1)
            };
            let mut spec = QuadratureSpec::default();
            if radius > lo && radius < hi {
                spec.singular_points.push(radius);
            }
            let inner = integrate(integrand, lo, hi, &spec).map_err(quad_err(term))?;
            let mut value = inner.value;
            if g_r != 0.0 {
                // outside the support h = -R^a g(R) rho^-a and the integrand
                // is C / (rho ln^2(rho/R))
                let c = coef * coef;
                value += c / (lo / radius).ln().abs() + c / (hi / radius).ln();
            }
            Ok((term.coefficient * value, term.coefficient * inner.err_est))
        }
    }
}

fn check_inputs(case: &IdentityCase, m: &ModelManifold, f: &TestProfile) -> Result<(), IdentityError> {
    if m.dim != case.dim {
        return config(format!("manifold dimension {} differs from the case's N = {}", m.dim, case.dim));
    }
    if let Some(b) = case.id.pinned_curvature() {
        if m.curvature != b {
            return config(format!("{} is stated for b = {b}, got b = {}", case.id, m.curvature));
        }
    }
    if let Some(bc) = case.comparison_b {
        if !(0.0..=m.curvature).contains(&bc) {
            return config(format!(
                "comparison curvature {bc} must lie in [0, b = {}]",
                m.curvature
            ));
        }
    }
    f.validate().map_err(|e| IdentityError::Config(e.to_string()))?;
    let (_, hi) = f.support();
    match (case.shift_radius, f.flat_at) {
        (Some(r), Some((rf, _))) => {
            if (r - rf).abs() > 1e-12 * r {
                return config(format!("profile is flat at {rf} but the case needs R = {r}"));
            }
        }
        (Some(_), None) => return config(format!("{} needs a flat-at-R profile", case.id)),
        (None, Some(_)) => return config(format!("{} needs a compactly supported profile", case.id)),
        (None, None) => {}
    }
    if case.shift_radius.is_none() {
        if let Some(u) = case.upper {
            if hi > u {
                return config(format!("profile support [{}, {hi}] leaves the interval (0, {u})", f.support().0));
            }
        }
    }
    if case.variant == Variant::Radial && f.ell != 0 {
        return config("the radial variant uses l = 0 profiles");
    }
    Ok(())
}

fn assemble(
    case: &IdentityCase,
    m: &ModelManifold,
    f: &TestProfile,
    tol: f64,
    values: Vec<(f64, f64)>,
) -> VerificationReport {
    let terms: Vec<TermValue> = case
        .terms
        .iter()
        .zip(values.iter())
        .map(|(t, (v, e))| TermValue {
            name: t.name.clone(),
            side: t.side,
            value: *v,
            err_est: *e,
        })
        .collect();
    let sum = |side| terms.iter().filter(|t| t.side == side).map(|t| t.value).sum::<f64>();
    let lhs = sum(Side::Lhs);
    let rhs = sum(Side::Rhs);
    let scale = terms.iter().map(|t| t.value.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let abs_residual = if case.is_inequality() {
        (rhs - lhs).max(0.0)
    } else {
        (lhs - rhs).abs()
    };
    let rel_residual = abs_residual / scale;
    let margins: Vec<MarginValue> = case
        .margins
        .iter()
        .map(|ms| {
            let value: f64 = ms.coefficients.iter().map(|(i, c)| c * terms[*i].value).sum();
            MarginValue {
                name: ms.name.clone(),
                value,
                pass: value >= -tol * scale,
            }
        })
        .collect();
    let pass = rel_residual <= tol && margins.iter().all(|m| m.pass);
    VerificationReport {
        meta: ReportMeta {
            case: case.id.to_string(),
            n: case.dim,
            b: m.curvature,
            variant: case.variant,
            ell: f.ell,
            pair: case.pair.clone(),
            params: case.params.clone(),
            profile: f.to_string(),
            tol,
        },
        terms,
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        margins,
        pass,
    }
}

/// Evaluate every term of `case` for f = g Y_l on `m` and compare sides.
pub fn verify(
    case: &IdentityCase,
    m: &ModelManifold,
    f: &TestProfile,
    tol: f64,
) -> Result<VerificationReport, IdentityError> {
    check_inputs(case, m, f)?;
    let ctx = Ctx {
        m,
        f,
        ell_eigen: angular_eigenvalue(m.dim, f.ell),
    };
    let values = case
        .terms
        .iter()
        .map(|t| evaluate_term(case, t, &ctx, Chart::Geodesic))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(case, m, f, tol, values))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallOracleReport {
    pub geodesic: VerificationReport,
    pub ball: VerificationReport,
    /// max over terms of |geodesic - ball| / max(|geodesic|, |ball|)
    pub max_rel_discrepancy: f64,
    pub pass: bool,
}

/// Tolerance on the per-term agreement of the two charts.
pub const CHART_AGREEMENT_TOL: f64 = 1e-9;

/// Recompute every term of a hyperbolic case in the Poincare ball chart
/// and compare with the geodesic evaluation.
pub fn verify_ballmodel_oracle(
    case: &IdentityCase,
    f: &TestProfile,
    tol: f64,
) -> Result<BallOracleReport, IdentityError> {
    if case.id.pinned_curvature() != Some(1.0) {
        return config(format!("{} is not a hyperbolic case", case.id));
    }
    let m = ModelManifold::hyperbolic(case.dim).map_err(|e| IdentityError::Config(e.to_string()))?;
    check_inputs(case, &m, f)?;
    let ctx = Ctx {
        m: &m,
        f,
        ell_eigen: angular_eigenvalue(m.dim, f.ell),
    };
    let geo = case
        .terms
        .iter()
        .map(|t| evaluate_term(case, t, &ctx, Chart::Geodesic))
        .collect::<Result<Vec<_>, _>>()?;
    let ball = case
        .terms
        .iter()
        .map(|t| evaluate_term(case, t, &ctx, Chart::Ball))
        .collect::<Result<Vec<_>, _>>()?;
    let max_rel = geo
        .iter()
        .zip(ball.iter())
        .map(|((a, _), (b, _))| {
            let s = a.abs().max(b.abs());
            if s == 0.0 {
                0.0
            } else {
                (a - b).abs() / s
            }
        })
        .fold(0.0, f64::max);
    let geodesic = assemble(case, &m, f, tol, geo);
    let ball = assemble(case, &m, f, tol, ball);
    let pass = geodesic.pass && ball.pass && max_rel <= CHART_AGREEMENT_TOL;
    Ok(BallOracleReport {
        geodesic,
        ball,
        max_rel_discrepancy: max_rel,
        pass,
    })
}

/// int |f|^2 dV and int |grad f|^2 dV on H^N computed in both charts:
/// returns [(geodesic, ball) for |f|^2, (geodesic, ball) for |grad f|^2].
pub fn norms_in_both_charts(dim: u32, f: &TestProfile) -> Result<[(f64, f64); 2], IdentityError> {
    let m = ModelManifold::hyperbolic(dim).map_err(|e| IdentityError::Config(e.to_string()))?;
    f.validate().map_err(|e| IdentityError::Config(e.to_string()))?;
    let case = IdentityCase {
        id: CaseId::T32,
        dim,
        variant: Variant::Gradient,
        params: BTreeMap::new(),
        pair: None,
        upper: None,
        shift_radius: None,
        terms: vec![
            term("|f|^2", Side::Lhs, 1.0, one(), Functional::ValueSq, plain(false)),
            term("|grad f|^2", Side::Lhs, 1.0, one(), Functional::GradSq, plain(false)),
        ],
        margins: vec![],
        comparison_b: None,
    };
    let ctx = Ctx {
        m: &m,
        f,
        ell_eigen: angular_eigenvalue(dim, f.ell),
    };
    let mut out = [(0.0, 0.0); 2];
    for (i, t) in case.terms.iter().enumerate() {
        out[i] = (
            evaluate_term(&case, t, &ctx, Chart::Geodesic)?.0,
            evaluate_term(&case, t, &ctx, Chart::Ball)?.0,
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseInfo {
    pub id: &'static str,
    pub curvature: String,
    pub form: &'static str,
    pub parameters: &'static str,
    pub description: &'static str,
}

/// Listing of all cases for the `catalog` command.
pub fn catalog() -> Vec<CaseInfo> {
    CaseId::ALL
        .iter()
        .map(|&id| CaseInfo {
            id: id.as_str(),
            curvature: match id.pinned_curvature() {
                Some(b) => format!("b = {b}"),
                None => "b >= 0".into(),
            },
            form: if id.is_inequality() { "inequality" } else { "identity" },
            parameters: id.parameter_ranges(),
            description: id.description(),
        })
        .collect()
}
