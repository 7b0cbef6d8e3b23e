//! Compactly supported radial test profiles g(rho); f = g(rho) Y_l.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("cannot parse profile '{0}': expected kind:key=value,... with kind bump, polybump or flat")]
    Format(String),
    #[error("profile '{spec}': {reason}")]
    Invalid { spec: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// exp(-1/(1-s^2)) for |s| < 1.
    Bump,
    /// (1-s^2)^4 for |s| < 1.
    PolyBump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestProfile {
    pub shape: Shape,
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub ell: u32,
    /// Some((R, g(R))) for g = g(R) + (rho - R)^2 * amplitude * shape.
    pub flat_at: Option<(f64, f64)>,
}

impl TestProfile {
    pub fn bump(center: f64, width: f64) -> Self {
        TestProfile {
            shape: Shape::Bump,
            center,
            width,
            amplitude: 1.0,
            ell: 0,
            flat_at: None,
        }
    }

    pub fn poly_bump(center: f64, width: f64) -> Self {
        TestProfile {
            shape: Shape::PolyBump,
            ..Self::bump(center, width)
        }
    }

    /// g = value + (rho - R)^2 bump(center, width).
    pub fn flat_at(radius: f64, value: f64, shape: Shape, center: f64, width: f64) -> Self {
        TestProfile {
            shape,
            flat_at: Some((radius, value)),
            ..Self::bump(center, width)
        }
    }

    pub fn with_ell(mut self, ell: u32) -> Self {
        self.ell = ell;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let bad = |reason: &str| {
            Err(ProfileError::Invalid {
                spec: self.to_string(),
                reason: reason.into(),
            })
        };
        if !(self.width > 0.0 && self.width.is_finite() && self.center.is_finite()) {
            return bad("width must be positive and center finite");
        }
        if self.center - self.width <= 0.0 {
            return bad("support must stay away from 0 (c - w > 0)");
        }
        if !self.amplitude.is_finite() {
            return bad("amplitude must be finite");
        }
        if let Some((r, v)) = self.flat_at {
            if !(r > 0.0 && r.is_finite() && v.is_finite()) {
                return bad("flat-at radius must be positive and value finite");
            }
        }
        Ok(())
    }

    /// Closed support [lo, hi] of g (or of g - g(R) for flat profiles).
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    fn base(&self, rho: f64) -> (f64, f64) {
        let s = (rho - self.center) / self.width;
        let q = 1.0 - s * s;
        if !(q > 0.0) {
            return (0.0, 0.0);
        }
        let (v, dv_ds) = match self.shape {
            Shape::Bump => {
                let e = (-1.0 / q).exp();
                (e, e * (-2.0 * s) / (q * q))
            }
            Shape::PolyBump => {
                let q3 = q * q * q;
                (q3 * q, 4.0 * q3 * (-2.0 * s))
            }
        };
        (self.amplitude * v, self.amplitude * dv_ds / self.width)
    }

    /// (g - g(R), g') where g(R) is the flat value (0 for plain bumps).
    pub fn shifted_with_deriv(&self, rho: f64) -> (f64, f64) {
        let (b, db) = self.base(rho);
        match self.flat_at {
            None => (b, db),
            Some((r, _)) => {
                let d = rho - r;
                (d * d * b, 2.0 * d * b + d * d * db)
            }
        }
    }

    /// (g, g').
    pub fn value_with_deriv(&self, rho: f64) -> (f64, f64) {
        let (h, dh) = self.shifted_with_deriv(rho);
        (h + self.flat_value(), dh)
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.value_with_deriv(rho).0
    }

    pub fn deriv(&self, rho: f64) -> f64 {
        self.value_with_deriv(rho).1
    }

    pub fn flat_value(&self) -> f64 {
        self.flat_at.map_or(0.0, |(_, v)| v)
    }
}

impl fmt::Display for TestProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match (self.flat_at, self.shape) {
            (Some(_), _) => "flat",
            (None, Shape::Bump) => "bump",
            (None, Shape::PolyBump) => "polybump",
        };
        write!(f, "{kind}:c={},w={}", self.center, self.width)?;
        if self.amplitude != 1.0 {
            write!(f, ",amp={}", self.amplitude)?;
        }
        if let Some((r, v)) = self.flat_at {
            write!(f, ",R={r},value={v}")?;
            if self.shape == Shape::PolyBump {
                write!(f, ",shape=poly")?;
            }
        }
        if self.ell != 0 {
            write!(f, ",ell={}", self.ell)?;
        }
        Ok(())
    }
}

impl FromStr for TestProfile {
    type Err = ProfileError;

    /// `bump:c=1.5,w=1`, `polybump:c=1,w=0.6,amp=2,ell=1`,
    /// `flat:R=1,value=0.5,c=1,w=0.5[,shape=poly]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fmt_err = || ProfileError::Format(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(fmt_err)?;
        let mut c = None;
        let mut w = None;
        let mut amp = 1.0;
        let mut ell = 0;
        let mut radius = None;
        let mut value = None;
        let mut poly = false;
        for kv in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(fmt_err)?;
            let (k, v) = (k.trim(), v.trim());
            let num = || v.parse::<f64>().map_err(|_| fmt_err());
            match k {
                "c" => c = Some(num()?),
                "w" => w = Some(num()?),
                "amp" => amp = num()?,
                "ell" => ell = v.parse::<u32>().map_err(|_| fmt_err())?,
                "R" => radius = Some(num()?),
                "value" => value = Some(num()?),
                "shape" => poly = v == "poly",
                _ => return Err(fmt_err()),
            }
        }
        let (c, w) = (c.ok_or_else(fmt_err)?, w.ok_or_else(fmt_err)?);
        let p = match kind.trim() {
            "bump" => TestProfile::bump(c, w),
            "polybump" => TestProfile::poly_bump(c, w),
            "flat" => {
                let shape = if poly { Shape::PolyBump } else { Shape::Bump };
                TestProfile::flat_at(
                    radius.ok_or_else(fmt_err)?,
                    value.unwrap_or(1.0),
                    shape,
                    c,
                    w,
                )
            }
            _ => return Err(fmt_err()),
        };
        let p = p.with_amplitude(amp).with_ell(ell);
        p.validate()?;
        Ok(p)
    }
}

/// Three profiles inside (0, R) for finite intervals, or a fixed set on
/// (0, inf) whose supports contain rho = 1.
pub fn standard_profiles(upper: Option<f64>) -> Vec<TestProfile> {
    match upper {
        Some(r) => vec![
            TestProfile::bump(0.5 * r, 0.35 * r),
            TestProfile::poly_bump(0.55 * r, 0.4 * r),
            TestProfile::bump(0.6 * r, 0.3 * r),
        ],
        None => vec![
            TestProfile::bump(1.5, 1.0),
            TestProfile::poly_bump(1.2, 0.9),
            TestProfile::bump(2.0, 1.6),
        ],
    }
}

/// Flat-at-R profiles whose supports straddle R.
pub fn shifted_profiles(radius: f64) -> Vec<TestProfile> {
    vec![
        TestProfile::flat_at(radius, 1.0, Shape::Bump, radius, 0.5 * radius),
        TestProfile::flat_at(radius, -0.5, Shape::PolyBump, 1.1 * radius, 0.6 * radius),
        TestProfile::flat_at(radius, 2.0, Shape::Bump, 0.9 * radius, 0.45 * radius),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let profiles = [
            TestProfile::bump(1.0, 0.5).with_amplitude(3.0),
            TestProfile::poly_bump(2.0, 1.2),
            TestProfile::flat_at(1.0, 0.7, Shape::Bump, 1.1, 0.6),
        ];
        for p in profiles {
            let (lo, hi) = p.support();
            for i in 1..50 {
                let x = lo + (hi - lo) * i as f64 / 50.0;
                let h = 1e-6;
                let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
                assert!((p.deriv(x) - fd).abs() < 1e-7, "{p} at {x}");
            }
        }
    }

    #[test]
    fn flat_profiles_are_flat_at_r() {
        let p = TestProfile::flat_at(2.0, 0.3, Shape::PolyBump, 2.1, 0.8);
        assert_eq!(p.value(2.0), 0.3);
        assert_eq!(p.deriv(2.0), 0.0);
        assert_eq!(p.value(5.0), 0.3);
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "bump:c=1.5,w=1",
            "polybump:c=1,w=0.6,amp=2,ell=1",
            "flat:c=1,w=0.5,R=1,value=0.5,shape=poly",
        ] {
            let p: TestProfile = s.parse().unwrap();
            let again: TestProfile = p.to_string().parse().unwrap();
            assert_eq!(p, again);
        }
        assert!("bump:c=0.2,w=0.5".parse::<TestProfile>().is_err());
        assert!("ring:c=1,w=0.5".parse::<TestProfile>().is_err());
        assert!("bump:c=1".parse::<TestProfile>().is_err());
    }
}
