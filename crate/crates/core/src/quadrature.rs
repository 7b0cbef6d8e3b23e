//! Adaptive Gauss-Kronrod (7/15) quadrature with a global error heap.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Levels of halving toward each declared singular point.
const GRADING_LEVELS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("tolerance not met after {subdivisions} subdivisions: value {value:e}, error estimate {err_est:e}")]
    ToleranceNotMet {
        value: f64,
        err_est: f64,
        subdivisions: usize,
    },
    #[error("integrand is not finite at r = {abscissa:e} (value {value})")]
    NonFinite { abscissa: f64, value: f64 },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Points where the integrand may be singular; the interval is split
    /// there and refined geometrically toward each of them.
    pub singular_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            singular_points: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn singular_at(mut self, points: &[f64]) -> Self {
        self.singular_points.extend_from_slice(points);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadratureError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadratureError::NonFinite {
            abscissa: x,
            value: v,
        })
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Piece, QuadratureError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = sample(f, c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = kron.abs();
    let mut fv = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = sample(f, c - dx)?;
        let f2 = sample(f, c + dx)?;
        fv[j] = (f1, f2);
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let value = kron * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((kron - gauss) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Piece { a, b, value, err })
}

fn graded_pieces(a: f64, b: f64, left: bool, right: bool, out: &mut Vec<(f64, f64)>) {
    match (left, right) {
        (false, false) => out.push((a, b)),
        (true, true) => {
            let m = 0.5 * (a + b);
            graded_pieces(a, m, true, false, out);
            graded_pieces(m, b, false, true, out);
        }
        (true, false) => {
            let mut hi = b;
            let len = b - a;
            let mut cuts = Vec::new();
            for k in 1..=GRADING_LEVELS {
                let x = a + len * 0.5f64.powi(k as i32);
                cuts.push((x, hi));
                hi = x;
            }
            cuts.push((a, hi));
            cuts.reverse();
            out.extend(cuts);
        }
        (false, true) => {
            let mut lo = a;
            let len = b - a;
            for k in 1..=GRADING_LEVELS {
                let x = b - len * 0.5f64.powi(k as i32);
                out.push((lo, x));
                lo = x;
            }
            out.push((lo, b));
        }
    }
}

/// Integrate f over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate, QuadratureError> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    if !(spec.abs_tol >= 0.0 && spec.rel_tol >= 0.0) || spec.abs_tol + spec.rel_tol <= 0.0 {
        return Err(QuadratureError::InvalidSpec(
            "tolerances must be non-negative and not both zero".into(),
        ));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let is_singular = |x: f64| spec.singular_points.iter().any(|&s| s == x);
    let mut breaks = vec![a];
    let mut inner: Vec<f64> = spec
        .singular_points
        .iter()
        .copied()
        .filter(|&s| s > a && s < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    breaks.extend(inner);
    breaks.push(b);

    let mut initial = Vec::new();
    for w in breaks.windows(2) {
        graded_pieces(w[0], w[1], is_singular(w[0]), is_singular(w[1]), &mut initial);
    }

    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for (lo, hi) in initial {
        if hi > lo {
            let p = gk15(&f, lo, hi)?;
            total += p.value;
            total_err += p.err;
            heap.push(p);
        }
    }

    let mut subdivisions = 0;
    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            return Err(QuadratureError::ToleranceNotMet {
                value: sum_pieces(&done),
                err_est: total_err,
                subdivisions,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 8.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
        {
            done.push(worst);
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            done.extend(heap.drain());
            return Err(QuadratureError::ToleranceNotMet {
                value: sum_pieces(&done),
                err_est: total_err,
                subdivisions,
            });
        }
        subdivisions += 1;
        let l = gk15(&f, worst.a, mid)?;
        let r = gk15(&f, mid, worst.b)?;
        total += l.value + r.value - worst.value;
        total_err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
    done.extend(heap.drain());
    let err_est: f64 = done.iter().map(|p| p.err).sum();
    Ok(Estimate {
        value: sum_pieces(&done),
        err_est,
    })
}

fn sum_pieces(pieces: &[Piece]) -> f64 {
    let mut sorted: Vec<&Piece> = pieces.iter().collect();
    sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
    // Neumaier summation
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for p in sorted {
        let t = s + p.value;
        if s.abs() >= p.value.abs() {
            c += (s - t) + p.value;
        } else {
            c += (p.value - t) + s;
        }
        s = t;
    }
    s + c
}

/// Integrate r^beta s(r) over [0, b] for beta > -1 using
/// r = b u^{1/(beta+1)}, which turns the power into a constant factor.
pub fn integrate_power_origin<F: Fn(f64) -> f64>(
    s: F,
    beta: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate, QuadratureError> {
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(QuadratureError::InvalidSpec(format!(
            "power exponent {beta} must exceed -1"
        )));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(QuadratureError::InvalidInterval { a: 0.0, b });
    }
    let p = 1.0 / (beta + 1.0);
    let scale = b.powf(beta + 1.0) * p;
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / scale,
        singular_points: spec
            .singular_points
            .iter()
            .filter(|&&x| x >= 0.0 && x <= b)
            .map(|&x| (x / b).powf(beta + 1.0))
            .collect(),
        ..spec.clone()
    };
    let est = integrate(|u| s(b * u.powf(p)), 0.0, 1.0, &inner_spec)?;
    Ok(Estimate {
        value: est.value * scale,
        err_est: est.err_est * scale,
    })
}
