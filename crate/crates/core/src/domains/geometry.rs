//! Global charts for the constant-curvature 2D ambients: the plane for
//! k = 0 and the Poincare disk for k = -delta^2 < 0 (metric
//! ds = (2/delta) |dz| / (1 - |z|^2), so geodesic distance from the origin is
//! (2/delta) atanh |z|).
//!
//! Working in one chart keeps point-to-point distances, initial geodesic
//! directions and boundary re-parameterizations closed-form: a Mobius
//! translation moves any point to the origin, where geodesics are straight
//! rays.

use nalgebra::Complex;

pub(crate) type C = Complex<f64>;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Chart {
    /// delta >= 0; 0 means the flat plane.
    pub delta: f64,
}

impl Chart {
    pub fn new(delta: f64) -> Self {
        Chart { delta }
    }

    /// Chart radius of a point at geodesic distance r from the origin.
    pub fn chart_radius(&self, r: f64) -> f64 {
        if self.delta > 0.0 {
            (self.delta * r / 2.0).tanh()
        } else {
            r
        }
    }

    /// d/dr of [`Self::chart_radius`].
    pub fn chart_radius_deriv(&self, r: f64) -> f64 {
        if self.delta > 0.0 {
            let c = (self.delta * r / 2.0).cosh();
            self.delta / (2.0 * c * c)
        } else {
            1.0
        }
    }

    /// Mobius translation sending `p` to the origin, applied to `q`.
    pub fn translate_to_origin(&self, p: C, q: C) -> C {
        if self.delta > 0.0 {
            (q - p) / (C::new(1.0, 0.0) - p.conj() * q)
        } else {
            q - p
        }
    }

    /// Derivative of the translation map at `q`.
    fn translate_deriv(&self, p: C, q: C) -> C {
        if self.delta > 0.0 {
            let den = C::new(1.0, 0.0) - p.conj() * q;
            C::new(1.0 - p.norm_sqr(), 0.0) / (den * den)
        } else {
            C::new(1.0, 0.0)
        }
    }

    /// Geodesic distance between chart points.
    #[allow(dead_code)] // log_direction covers the hot paths; kept for checks
    pub fn distance(&self, p: C, q: C) -> f64 {
        if self.delta > 0.0 {
            let w = self.translate_to_origin(p, q).norm();
            2.0 * w.atanh() / self.delta
        } else {
            (q - p).norm()
        }
    }

    /// Distance together with the unit initial direction (in the chart frame
    /// at p) of the geodesic from p to q.
    pub fn log_direction(&self, p: C, q: C) -> (f64, C) {
        let w = self.translate_to_origin(p, q);
        let n = w.norm();
        if n == 0.0 {
            return (0.0, C::new(0.0, 0.0));
        }
        let dist = if self.delta > 0.0 { 2.0 * n.atanh() / self.delta } else { n };
        (dist, w / n)
    }

    /// Conformal factor of the metric at z: |dz| times this is arc length.
    pub fn metric_factor(&self, z: C) -> f64 {
        if self.delta > 0.0 {
            2.0 / (self.delta * (1.0 - z.norm_sqr()))
        } else {
            1.0
        }
    }

    /// Point at geodesic distance r in direction theta from `base`, the
    /// direction measured in the Mobius frame at `base`.
    pub fn at_polar(&self, base: C, theta: f64, r: f64) -> C {
        let zeta = C::from_polar(self.chart_radius(r), theta);
        if self.delta > 0.0 {
            (base + zeta) / (C::new(1.0, 0.0) + base.conj() * zeta)
        } else {
            base + zeta
        }
    }

    /// Velocity dq/dtheta of the boundary curve theta -> from_polar(base,
    /// theta, rho(theta)) given rho and rho'.
    pub fn boundary_velocity(&self, base: C, theta: f64, rho: f64, drho: f64) -> C {
        let s = self.chart_radius(rho);
        let ds = self.chart_radius_deriv(rho) * drho;
        let e = C::from_polar(1.0, theta);
        let zeta_dot = e * C::new(ds, s);
        if self.delta > 0.0 {
            let zeta = C::from_polar(s, theta);
            let den = C::new(1.0, 0.0) + base.conj() * zeta;
            zeta_dot * C::new(1.0 - base.norm_sqr(), 0.0) / (den * den)
        } else {
            zeta_dot
        }
    }

    /// Angular speed d(alpha)/d(theta) of the direction alpha of q(theta) as
    /// seen from p. Positive everywhere iff the curve is star-shaped about p.
    pub fn angle_speed(&self, p: C, q: C, q_dot: C) -> f64 {
        let w = self.translate_to_origin(p, q);
        let dw = self.translate_deriv(p, q) * q_dot;
        // d/dtheta arg w = Im(w' / w)
        (dw / w).im
    }
}

/// Law-of-cosines geodesic distance from polar data (r1, th1), (r2, th2)
/// about a common origin: for delta > 0,
/// cosh(delta d) = cosh(delta r1) cosh(delta r2)
///               - sinh(delta r1) sinh(delta r2) cos(th1 - th2),
/// evaluated in the cancellation-free half-angle form
/// sinh^2(delta d/2) = sinh^2(delta (r1-r2)/2)
///                   + sinh(delta r1) sinh(delta r2) sin^2((th1-th2)/2).
pub(crate) fn law_of_cosines(delta: f64, r1: f64, th1: f64, r2: f64, th2: f64) -> f64 {
    let half_sin = ((th1 - th2) / 2.0).sin();
    if delta > 0.0 {
        let s = (delta * (r1 - r2) / 2.0).sinh();
        let x = s * s + (delta * r1).sinh() * (delta * r2).sinh() * half_sin * half_sin;
        2.0 * x.sqrt().asinh() / delta
    } else {
        let dr = r1 - r2;
        (dr * dr + 4.0 * r1 * r2 * half_sin * half_sin).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_distance_matches_law_of_cosines() {
        for delta in [0.0, 1.0, 1.7] {
            let chart = Chart::new(delta);
            let cases = [(0.5, 0.3, 1.2, 2.0), (1.0, 0.0, 1.0, std::f64::consts::FRAC_PI_2)];
            for (r1, th1, r2, th2) in cases {
                let p = chart.at_polar(C::new(0.0, 0.0), th1, r1);
                let q = chart.at_polar(C::new(0.0, 0.0), th2, r2);
                let d_chart = chart.distance(p, q);
                let d_law = law_of_cosines(delta, r1, th1, r2, th2);
                assert!((d_chart - d_law).abs() < 1e-12, "delta={delta}: {d_chart} vs {d_law}");
            }
        }
    }

    #[test]
    fn from_polar_preserves_distance_to_base() {
        let chart = Chart::new(1.0);
        let base = C::new(0.3, -0.2);
        for (theta, r) in [(0.0, 0.5), (1.1, 2.0), (4.0, 0.1)] {
            let q = chart.at_polar(base, theta, r);
            assert!((chart.distance(base, q) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_velocity_matches_finite_difference() {
        let chart = Chart::new(1.0);
        let base = C::new(0.2, 0.1);
        let rho = |t: f64| 1.0 + 0.2 * (2.0 * t).cos();
        let drho = |t: f64| -0.4 * (2.0 * t).sin();
        let h = 1e-6;
        for theta in [0.3, 1.9, 5.0] {
            let q = |t: f64| chart.at_polar(base, t, rho(t));
            let fd = (q(theta + h) - q(theta - h)) / C::new(2.0 * h, 0.0);
            let an = chart.boundary_velocity(base, theta, rho(theta), drho(theta));
            assert!((fd - an).norm() < 1e-8, "{fd} vs {an}");
        }
    }

    #[test]
    fn angle_speed_integrates_to_full_turn() {
        // Winding of the boundary direction about an interior point is 2 pi.
        let chart = Chart::new(1.0);
        let base = C::new(0.0, 0.0);
        let p = C::new(0.15, -0.1);
        let rho = |t: f64| 1.0 + 0.2 * (2.0 * t).cos();
        let drho = |t: f64| -0.4 * (2.0 * t).sin();
        let m = 4096;
        let mut total = 0.0;
        for j in 0..m {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let q = chart.at_polar(base, t, rho(t));
            let qd = chart.boundary_velocity(base, t, rho(t), drho(t));
            total += chart.angle_speed(p, q, qd);
        }
        total *= 2.0 * std::f64::consts::PI / m as f64;
        assert!((total - 2.0 * std::f64::consts::PI).abs() < 1e-10, "winding {total}");
    }
}
