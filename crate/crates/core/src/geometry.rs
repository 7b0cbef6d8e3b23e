//! Radial geometry of the model spaces M_b with metric dt^2 + sn_b(t)^2 g_S.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension must be at least 3, got {0}")]
    Dimension(u32),
    #[error("curvature parameter b must be finite and >= 0, got {0}")]
    Curvature(f64),
    #[error("ball radius must lie in [0, 1), got {0}")]
    BallRadius(f64),
}

/// M_b of dimension `dim`: Euclidean for b = 0, hyperbolic of sectional
/// curvature -b otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelManifold {
    pub dim: u32,
    pub curvature: f64,
}

impl ModelManifold {
    pub fn new(dim: u32, curvature: f64) -> Result<Self, GeometryError> {
        if dim < 3 {
            return Err(GeometryError::Dimension(dim));
        }
        if !(curvature.is_finite() && curvature >= 0.0) {
            return Err(GeometryError::Curvature(curvature));
        }
        Ok(ModelManifold { dim, curvature })
    }

    pub fn euclidean(dim: u32) -> Result<Self, GeometryError> {
        Self::new(dim, 0.0)
    }

    pub fn hyperbolic(dim: u32) -> Result<Self, GeometryError> {
        Self::new(dim, 1.0)
    }

    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    /// sn_b(t) = sinh(sqrt(b) t)/sqrt(b), or t when b = 0.
    pub fn metric_radius(&self, t: f64) -> f64 {
        if self.curvature == 0.0 {
            return t;
        }
        let s = self.curvature.sqrt();
        let x = s * t;
        if x.abs() < 1e-4 {
            let x2 = x * x;
            t * (1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0)))
        } else {
            x.sinh() / s
        }
    }

    /// sn_b(t)^{N-1}.
    pub fn volume_density(&self, t: f64) -> f64 {
        self.metric_radius(t).powi(self.dim as i32 - 1)
    }

    /// (N-1)(ct_b(t) - 1/t), the logarithmic derivative of sn_b^{N-1}/t^{N-1}.
    pub fn log_density_deriv(&self, t: f64) -> f64 {
        if self.curvature == 0.0 {
            return 0.0;
        }
        let s = self.curvature.sqrt();
        (self.n() - 1.0) * s * coth_minus_inv(s * t)
    }

    /// D_b(t) = t ct_b(t) - 1.
    pub fn d_b(&self, t: f64) -> f64 {
        if self.curvature == 0.0 {
            return 0.0;
        }
        let x = self.curvature.sqrt() * t;
        x * coth_minus_inv(x)
    }
}

/// x cosh x - sinh x, accurate for small x.
pub fn x_cosh_minus_sinh(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return x * x.cosh() - x.sinh();
    }
    // sum_{k>=1} 2k x^{2k+1} / (2k+1)!
    let x2 = x * x;
    let mut pow = x;
    let mut fact = 1.0;
    let mut sum = 0.0;
    for k in 1..30 {
        let k2 = 2.0 * k as f64;
        pow *= x2;
        fact *= k2 * (k2 + 1.0);
        let term = k2 * pow / fact;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// coth x - 1/x for x > 0.
pub fn coth_minus_inv(x: f64) -> f64 {
    if x >= 1.0 {
        return 1.0 / x.tanh() - 1.0 / x;
    }
    if x == 0.0 {
        return 0.0;
    }
    x_cosh_minus_sinh(x) / (x * x.sinh())
}

/// (rho cosh rho - sinh rho)/(rho sinh rho), the hyperbolic remainder
/// weight; equals coth rho - 1/rho.
pub fn hyperbolic_remainder_weight(rho: f64) -> f64 {
    coth_minus_inv(rho)
}

/// Geodesic radius of a point at Euclidean radius r in the Poincare ball.
pub fn ball_to_geodesic(r: f64) -> Result<f64, GeometryError> {
    if !(0.0..1.0).contains(&r) {
        return Err(GeometryError::BallRadius(r));
    }
    Ok((2.0 * r / (1.0 - r)).ln_1p())
}

pub fn geodesic_to_ball(rho: f64) -> f64 {
    (0.5 * rho).tanh()
}

/// Eigenvalue l(l + N - 2) of the sphere Laplacian on degree-l harmonics.
pub fn angular_eigenvalue(dim: u32, ell: u32) -> f64 {
    let l = ell as f64;
    l * (l + dim as f64 - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_branch_is_continuous() {
        for b in [0.5, 1.0, 4.0] {
            let m = ModelManifold::new(5, b).unwrap();
            let t = 1e-4 / b.sqrt();
            let below = m.metric_radius(t * (1.0 - 1e-12));
            let above = m.metric_radius(t * (1.0 + 1e-12));
            assert!((below - above).abs() <= 1e-15 * above.abs() + 2.0 * t * 1e-12);
        }
    }

    #[test]
    fn coth_minus_inv_is_accurate_everywhere() {
        // Reference: odd Laurent series x/3 - x^3/45 + 2x^5/945 - ...
        for i in 1..200 {
            let x = i as f64 * 0.005;
            let x2 = x * x;
            let series = x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0
                - x * x2.powi(3) / 4725.0
                + 2.0 * x * x2.powi(4) / 93555.0
                - 1382.0 * x * x2.powi(5) / 638_512_875.0
                + 4.0 * x * x2.powi(6) / 18_243_225.0;
            let got = coth_minus_inv(x);
            let want = if x < 0.3 {
                series
            } else {
                1.0 / x.tanh() - 1.0 / x
            };
            assert!((got - want).abs() <= 1e-13 * want, "x = {x}");
        }
        assert!((coth_minus_inv(1.0) - (1.0 / 1f64.tanh() - 1.0)).abs() < 1e-16);
    }

    #[test]
    fn log_density_deriv_matches_finite_difference() {
        for b in [0.0, 0.5, 1.0, 4.0] {
            let m = ModelManifold::new(4, b).unwrap();
            for t in [0.01, 0.3, 1.0, 3.0] {
                let h = 1e-6 * t;
                let j = |s: f64| (m.volume_density(s) / s.powi(3)).ln();
                let fd = (j(t + h) - j(t - h)) / (2.0 * h);
                assert!((m.log_density_deriv(t) - fd).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn d_b_is_nonnegative() {
        for b in [0.0, 0.5, 1.0, 4.0] {
            let m = ModelManifold::new(3, b).unwrap();
            let mut t = 1e-6;
            while t <= 50.0 {
                assert!(m.d_b(t) >= 0.0);
                t *= 1.1;
            }
        }
    }

    #[test]
    fn ball_chart_round_trip() {
        for rho in [1e-8, 0.1, 1.0, 5.0] {
            let r = geodesic_to_ball(rho);
            let back = ball_to_geodesic(r).unwrap();
            assert!((back - rho).abs() < 1e-12 * rho.max(1.0));
        }
        assert!(ball_to_geodesic(1.0).is_err());
    }

    #[test]
    fn rejects_bad_manifolds() {
        assert!(ModelManifold::new(2, 0.0).is_err());
        assert!(ModelManifold::new(3, -1.0).is_err());
        assert!(ModelManifold::new(3, f64::NAN).is_err());
    }
}
