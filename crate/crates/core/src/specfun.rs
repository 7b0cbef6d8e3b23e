//! Bessel functions of the first kind, their first positive zeros, and
//! the surface area of the unit sphere.

use std::f64::consts::PI;

use thiserror::Error;

/// Largest order accepted by the Bessel routines.
pub const MAX_ORDER: f64 = 20.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no sign change of J_{alpha} found in (0, {limit}]")]
    NoBracket { alpha: f64, limit: f64 },
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let e = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: e }
    }

    fn quick(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let s = Dd::quick(s.hi, s.lo + t.hi);
        Dd::quick(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::quick(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::new(-q2)));
        let q3 = r.hi / o.hi;
        Dd::quick(q1, q2).add(Dd::new(q3))
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for x > 0. Integer and half-integer arguments use the
/// exact recursion; everything else the Lanczos approximation.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return f64::NAN;
    }
    if x <= 171.0 && (2.0 * x).fract() == 0.0 {
        return gamma_half_integer(x);
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

fn gamma_half_integer(x: f64) -> f64 {
    let (mut acc, mut k) = if x.fract() == 0.0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while k < x {
        acc *= k;
        k += 1.0;
    }
    acc
}

fn check_order(alpha: f64) -> Result<(), SpecfunError> {
    if !(0.0..=MAX_ORDER).contains(&alpha) || alpha.is_nan() {
        return Err(SpecfunError::Domain(format!(
            "order {alpha} outside [0, {MAX_ORDER}]"
        )));
    }
    Ok(())
}

/// J_alpha(x) for 0 <= alpha <= 20 and x >= 0.
///
/// Below x = max(12, 2 alpha) the ascending series is summed in
/// double-double arithmetic; above it Miller's backward recurrence is
/// normalized with the Neumann series for (x/2)^nu.
pub fn bessel_j(alpha: f64, x: f64) -> Result<f64, SpecfunError> {
    check_order(alpha)?;
    if x.is_nan() || x < 0.0 {
        return Err(SpecfunError::Domain(format!("argument {x} is negative")));
    }
    if !x.is_finite() {
        return Ok(0.0);
    }
    if x == 0.0 {
        return Ok(if alpha == 0.0 { 1.0 } else { 0.0 });
    }
    if x < series_switch(alpha) {
        Ok(series(alpha, x))
    } else {
        Ok(miller(alpha, x))
    }
}

fn series_switch(alpha: f64) -> f64 {
    12f64.max(2.0 * alpha)
}

fn series(alpha: f64, x: f64) -> f64 {
    let xx = Dd {
        hi: x * x,
        lo: x.mul_add(x, -(x * x)),
    };
    let q = Dd {
        hi: xx.hi * 0.25,
        lo: xx.lo * 0.25,
    };
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    let mut max_term = 1.0f64;
    let mut k = 0.0f64;
    loop {
        let kp = k + 1.0;
        let den = Dd::new(kp).mul(Dd::two_sum(kp, alpha));
        term = term.mul(q).div(den).neg();
        sum = sum.add(term);
        let t = term.hi.abs();
        max_term = max_term.max(t);
        k = kp;
        if k * (k + alpha) > q.hi && t <= 1e-34 * max_term {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    let pre = (0.5 * x).powf(alpha) / gamma(alpha + 1.0);
    pre * sum.to_f64()
}

fn miller(alpha: f64, x: f64) -> f64 {
    let n = alpha.floor() as usize;
    let nu = alpha - n as f64;
    let top = (x.max(n as f64) + 30.0 + 4.0 * x.sqrt()).ceil() as usize;
    let top = top + (top % 2);
    let mut j = vec![0.0f64; top + 2];
    j[top] = 1e-30;
    for i in (1..=top).rev() {
        let order = nu + i as f64;
        j[i - 1] = 2.0 * order / x * j[i] - j[i + 1];
        if j[i - 1].abs() > 1e250 {
            for v in j.iter_mut().skip(i - 1) {
                *v *= 1e-250;
            }
        }
    }
    // (x/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu + 2k}(x)
    let mut s = gamma(nu + 1.0) * j[0];
    let mut ratio = gamma(nu + 1.0);
    let mut k = 1usize;
    while 2 * k <= top {
        if k > 1 {
            ratio *= (nu + (k - 1) as f64) / k as f64;
        }
        s += (nu + 2.0 * k as f64) * ratio * j[2 * k];
        k += 1;
    }
    j[n] * (0.5 * x).powf(nu) / s
}

/// dJ_alpha/dx. Uses (J_{alpha-1} - J_{alpha+1})/2 for alpha >= 1 and
/// (alpha/x) J_alpha - J_{alpha+1} below that.
pub fn bessel_j_deriv(alpha: f64, x: f64) -> Result<f64, SpecfunError> {
    check_order(alpha)?;
    if alpha == 0.0 {
        if x.is_nan() || x < 0.0 {
            return Err(SpecfunError::Domain(format!("argument {x} is negative")));
        }
        return Ok(-bessel_j_above(1.0, x)?);
    }
    if alpha >= 1.0 {
        let lo = bessel_j(alpha - 1.0, x)?;
        let hi = bessel_j_above(alpha + 1.0, x)?;
        return Ok(0.5 * (lo - hi));
    }
    if x.is_nan() || x <= 0.0 {
        return Err(SpecfunError::Domain(format!(
            "derivative of J_{alpha} needs x > 0, got {x}"
        )));
    }
    Ok(alpha / x * bessel_j(alpha, x)? - bessel_j_above(alpha + 1.0, x)?)
}

// The order alpha + 1 may exceed MAX_ORDER by one.
fn bessel_j_above(order: f64, x: f64) -> Result<f64, SpecfunError> {
    if order > MAX_ORDER && order <= MAX_ORDER + 1.0 {
        if x.is_nan() || x < 0.0 {
            return Err(SpecfunError::Domain(format!("argument {x} is negative")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        return Ok(if x < series_switch(order) {
            series(order, x)
        } else {
            miller(order, x)
        });
    }
    bessel_j(order, x)
}

/// First positive zero of J_alpha.
pub fn bessel_first_zero(alpha: f64) -> Result<f64, SpecfunError> {
    check_order(alpha)?;
    let limit = alpha + 20.0;
    let step = 0.1;
    let mut a = alpha.max(step);
    let mut fa = bessel_j(alpha, a)?;
    let mut bracket = None;
    while a < limit {
        let b = a + step;
        let fb = bessel_j(alpha, b)?;
        if fa > 0.0 && fb <= 0.0 {
            bracket = Some((a, b));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut lo, mut hi) = bracket.ok_or(SpecfunError::NoBracket { alpha, limit })?;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(alpha, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..20 {
        let dz = bessel_j(alpha, z)? / bessel_j_deriv(alpha, z)?;
        z -= dz;
        if dz.abs() <= 1e-16 * z {
            break;
        }
    }
    Ok(z)
}

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
pub fn sphere_area(n: u32) -> f64 {
    2.0 * PI.powf(0.5 * n as f64) / gamma_half_integer(0.5 * n as f64)
}
