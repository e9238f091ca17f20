//! Truncated real Fourier series on the circle, the storage format for
//! star-shaped boundary curves and boundary weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// f(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierSeries {
    pub a0: f64,
    #[serde(default)]
    pub a: Vec<f64>,
    #[serde(default)]
    pub b: Vec<f64>,
}

impl FourierSeries {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Self {
        FourierSeries { a0, a, b }
    }

    pub fn constant(c: f64) -> Self {
        FourierSeries { a0: c, a: Vec::new(), b: Vec::new() }
    }

    /// Highest stored mode index.
    pub fn max_mode(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    fn coeff(&self, v: &[f64], k: usize) -> f64 {
        v.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.a0;
        for k in 1..=self.max_mode() {
            let kt = k as f64 * theta;
            s += self.coeff(&self.a, k) * kt.cos() + self.coeff(&self.b, k) * kt.sin();
        }
        s
    }

    pub fn eval_deriv(&self, theta: f64) -> f64 {
        let mut s = 0.0;
        for k in 1..=self.max_mode() {
            let kf = k as f64;
            let kt = kf * theta;
            s += -kf * self.coeff(&self.a, k) * kt.sin() + kf * self.coeff(&self.b, k) * kt.cos();
        }
        s
    }

    pub fn eval_second_deriv(&self, theta: f64) -> f64 {
        let mut s = 0.0;
        for k in 1..=self.max_mode() {
            let kf = k as f64;
            let kt = kf * theta;
            s -= kf * kf * (self.coeff(&self.a, k) * kt.cos() + self.coeff(&self.b, k) * kt.sin());
        }
        s
    }

    /// Largest coefficient amplitude sqrt(a_k^2 + b_k^2), including |a0|.
    pub fn leading_amplitude(&self) -> f64 {
        let mut m = self.a0.abs();
        for k in 1..=self.max_mode() {
            let amp = self.coeff(&self.a, k).hypot(self.coeff(&self.b, k));
            m = m.max(amp);
        }
        m
    }

    /// Exact trigonometric projection of `samples` (uniform grid on [0, 2pi))
    /// onto modes 0..=modes. Exact when the sampled function is band-limited
    /// below the Nyquist mode.
    pub fn from_samples(samples: &[f64], modes: usize) -> Result<Self> {
        let m = samples.len();
        if m < 2 * modes + 2 {
            return Err(Error::Input(format!(
                "{m} samples cannot resolve {modes} Fourier modes"
            )));
        }
        let mut a0 = 0.0;
        for &s in samples {
            a0 += s;
        }
        a0 /= m as f64;
        let mut a = vec![0.0; modes];
        let mut b = vec![0.0; modes];
        for k in 1..=modes {
            let (mut ca, mut cb) = (0.0, 0.0);
            for (j, &s) in samples.iter().enumerate() {
                let t = 2.0 * std::f64::consts::PI * (k * j) as f64 / m as f64;
                ca += s * t.cos();
                cb += s * t.sin();
            }
            a[k - 1] = 2.0 * ca / m as f64;
            b[k - 1] = 2.0 * cb / m as f64;
        }
        Ok(FourierSeries { a0, a, b })
    }

    /// Fit a smooth periodic function, growing the kept mode count until the
    /// discarded tail falls below `tail_tol` times the leading amplitude.
    pub fn fit_periodic<F: Fn(f64) -> f64>(f: F, tail_tol: f64, max_modes: usize) -> Result<Self> {
        let mut modes = 8usize.min(max_modes);
        loop {
            let m = 8 * (modes + 1);
            let samples: Vec<f64> = (0..m)
                .map(|j| f(2.0 * std::f64::consts::PI * j as f64 / m as f64))
                .collect();
            let full = FourierSeries::from_samples(&samples, m / 2 - 1)?;
            let leading = full.leading_amplitude();
            let mut tail = 0.0f64;
            for k in (modes + 1)..=full.max_mode() {
                tail = tail.max(full.coeff(&full.a, k).hypot(full.coeff(&full.b, k)));
            }
            if tail <= tail_tol * leading.max(1e-300) {
                return Ok(FourierSeries {
                    a0: full.a0,
                    a: full.a[..modes.min(full.a.len())].to_vec(),
                    b: full.b[..modes.min(full.b.len())].to_vec(),
                });
            }
            if modes >= max_modes {
                return Err(Error::InvalidModel(format!(
                    "Fourier tail {tail:e} above {tail_tol:e} x leading after {modes} modes"
                )));
            }
            modes = (modes * 2).min(max_modes);
        }
    }

    /// Verify the stored coefficients beyond `keep` modes are negligible.
    pub fn tail_ok(&self, keep: usize, tail_tol: f64) -> bool {
        let leading = self.leading_amplitude();
        for k in (keep + 1)..=self.max_mode() {
            if self.coeff(&self.a, k).hypot(self.coeff(&self.b, k)) > tail_tol * leading {
                return false;
            }
        }
        true
    }

    pub fn min_max_on_grid(&self, samples: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..samples {
            let v = self.eval(2.0 * std::f64::consts::PI * j as f64 / samples as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn projection_recovers_coefficients() {
        let f = FourierSeries::new(1.0, vec![0.2, 0.0, 0.05], vec![0.0, -0.1, 0.0]);
        let m = 64;
        let samples: Vec<f64> = (0..m).map(|j| f.eval(2.0 * PI * j as f64 / m as f64)).collect();
        let g = FourierSeries::from_samples(&samples, 5).unwrap();
        assert!((g.a0 - 1.0).abs() < 1e-14);
        assert!((g.a[0] - 0.2).abs() < 1e-14);
        assert!((g.a[2] - 0.05).abs() < 1e-14);
        assert!((g.b[1] + 0.1).abs() < 1e-14);
        assert!(g.a[3].abs() < 1e-14 && g.a[4].abs() < 1e-14);
    }

    #[test]
    fn fit_periodic_analytic_function() {
        let f = |t: f64| (2.0 + 0.3 * (2.0 * t).cos()).powf(1.5);
        let s = FourierSeries::fit_periodic(f, 1e-12, 256).unwrap();
        for j in 0..37 {
            let t = 2.0 * PI * j as f64 / 37.0;
            assert!((s.eval(t) - f(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = FourierSeries::new(1.0, vec![0.2, 0.1], vec![0.05, -0.3]);
        let h = 1e-6;
        for t in [0.0, 1.0, 2.5] {
            let fd = (s.eval(t + h) - s.eval(t - h)) / (2.0 * h);
            assert!((s.eval_deriv(t) - fd).abs() < 1e-8);
        }
    }
}
