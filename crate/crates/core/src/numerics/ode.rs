//! Adaptive Dormand-Prince 5(4) integration for two-dimensional first-order
//! systems, used by the radial shooting solver.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct OdeSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: u64,
}

impl Default for OdeSpec {
    fn default() -> Self {
        OdeSpec { rel_tol: 1e-12, abs_tol: 1e-14, max_steps: 2_000_000 }
    }
}

// Dormand-Prince coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 4th-order embedded weights.
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

type V2 = [f64; 2];

fn axpy(y: V2, terms: &[(f64, V2)], h: f64) -> V2 {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrate y' = f(t, y) from (t0, y0) to t_end. Returns y(t_end).
pub fn integrate_ode2<F: Fn(f64, V2) -> V2>(f: F, t0: f64, y0: V2, t_end: f64, spec: &OdeSpec) -> Result<V2> {
    if !(t_end > t0) {
        return Err(Error::Input("ode integration requires t_end > t0".into()));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y);
    let mut h = ((t_end - t0) * 1e-4).min(1e-3 * t0.max(1e-6));
    let mut steps = 0u64;

    while t < t_end {
        if steps >= spec.max_steps {
            return Err(Error::Convergence {
                what: format!("ode stepper exceeded {} steps at t={t}", spec.max_steps),
                best: y[0],
            });
        }
        steps += 1;
        h = h.min(t_end - t);

        let k2 = f(t + 0.2 * h, axpy(y, &[(A21, k1)], h));
        let k3 = f(t + 0.3 * h, axpy(y, &[(A31, k1), (A32, k2)], h));
        let k4 = f(t + 0.8 * h, axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], h));
        let k5 = f(t + 8.0 / 9.0 * h, axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h));
        let k6 = f(t + h, axpy(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], h));
        let y5 = axpy(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)], h);
        let k7 = f(t + h, y5);
        let y4 = axpy(y, &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)], h);

        let mut err: f64 = 0.0;
        for i in 0..2 {
            let scale = spec.abs_tol + spec.rel_tol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / scale;
            err += e * e;
        }
        err = (err / 2.0).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k7; // FSAL
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Convergence {
                what: format!("ode step size underflow at t={t}"),
                best: y[0],
            });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let y = integrate_ode2(|_, y| [y[0], y[1]], 0.0, [1.0, 2.0], 1.0, &OdeSpec::default()).unwrap();
        let e = std::f64::consts::E;
        assert!((y[0] - e).abs() < 1e-10 && (y[1] - 2.0 * e).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator() {
        let y = integrate_ode2(
            |_, y| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            std::f64::consts::PI / 2.0,
            &OdeSpec::default(),
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }
}
