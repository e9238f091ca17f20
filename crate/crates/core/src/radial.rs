//! The radial profile g driving the Steklov eigenvalue of geodesic balls.
//!
//! g solves g'' + TrA g' - lambda_1(S(r)) g = 0 with g(0) = 0; equivalently
//! (g phi)' = phi, so g(r) = (1/phi) * integral of phi. Derivatives are never
//! formed by differencing: g' comes from the first-order identity
//! g' + TrA g = 1 and g'' from the ODE itself, with a series branch near the
//! pole where those expressions lose precision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_ode2, OdeSpec, QuadratureSpec};
use crate::report::CheckResult;
use crate::spaces::{CurvatureSign, FieldKind, SpaceModel};

/// Radius below which g and its derivatives switch to the power series
/// g = r/d + c3 r^3 + O(r^5).
const SERIES_SWITCH: f64 = 1e-3;

fn profile_quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_depth: 40,
        singularity_exponent: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum GForm {
    /// g = tanh(delta r / 2) / delta: 2D space forms of curvature -delta^2.
    TanhHalf { delta: f64 },
    /// g = tan(r/2): the round 2-sphere.
    TanHalf,
    /// g = r/d: flat space of dimension d.
    Linear { d: f64 },
    /// Quadrature of the volume density, series branch near the pole.
    Quadrature,
}

/// The radial profile of a space, with analytically consistent derivatives.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    space: SpaceModel,
    d: f64,
    /// Coefficient a in phi = r^{d-1}(1 + a r^2 + ...).
    series_a: f64,
    form: GForm,
    r_window: f64,
}

/// First-mode radial profile of a rank-1 space or a space form. Closed forms
/// are used where they exist (2D space forms, the round 2-sphere, flat
/// space); everything else is evaluated by quadrature.
pub fn g_profile(space: &SpaceModel) -> Result<RadialProfile> {
    let form = match space {
        SpaceModel::RankOne(s) => match (s.field(), s.sign(), s.base_dim()) {
            (FieldKind::Real, CurvatureSign::Noncompact, 2) => GForm::TanhHalf { delta: 1.0 },
            (FieldKind::Real, CurvatureSign::Compact, 2) => GForm::TanHalf,
            _ => GForm::Quadrature,
        },
        SpaceModel::Form(s) => {
            if s.delta() == 0.0 {
                GForm::Linear { d: s.dim() as f64 }
            } else if s.dim() == 2 {
                GForm::TanhHalf { delta: s.delta() }
            } else {
                GForm::Quadrature
            }
        }
        SpaceModel::Warped(_) => {
            return Err(Error::Unsupported(
                "the radial profile is defined for rank-1 spaces and space forms; \
                 warped models only enter through the space-form comparison profile"
                    .into(),
            ))
        }
    };
    Ok(RadialProfile {
        space: space.clone(),
        d: space.real_dim() as f64,
        series_a: space.density_series_r2_coeff(),
        form,
        r_window: space.radius_window(),
    })
}

/// Same profile forced onto the quadrature evaluation path, for cross-checks
/// against the closed forms.
pub fn g_profile_quadrature(space: &SpaceModel) -> Result<RadialProfile> {
    let mut p = g_profile(space)?;
    p.form = GForm::Quadrature;
    Ok(p)
}

/// Comparison profile g_delta of the n-dimensional space form of curvature
/// -delta^2 (delta = 0 gives g = r/n).
pub fn g_delta_profile(delta: f64, n: u32) -> Result<RadialProfile> {
    g_profile(&SpaceModel::space_form(delta, n)?)
}

impl RadialProfile {
    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn real_dim(&self) -> f64 {
        self.d
    }

    /// Upper end of the radius range on which the profile is defined.
    pub fn valid_r_max(&self) -> f64 {
        self.r_window
    }

    fn check(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("profile radius must be nonnegative, got {r}")));
        }
        if r >= self.r_window {
            return Err(Error::Domain(format!(
                "radius {r} outside the profile window (0, {}) of {}",
                self.r_window, self.space
            )));
        }
        Ok(())
    }

    /// c3 in g = r/d + c3 r^3 + O(r^5).
    fn c3(&self) -> f64 {
        -2.0 * self.series_a / (self.d * (self.d + 2.0))
    }

    pub(crate) fn g_series(&self, r: f64) -> f64 {
        r / self.d + self.c3() * r * r * r
    }

    pub(crate) fn g_quadrature(&self, r: f64) -> Result<f64> {
        let mass = integrate(|t| self.space.density(t).unwrap_or(f64::NAN), 0.0, r, &profile_quad_spec())?;
        Ok(mass / self.space.density(r)?)
    }

    pub fn g(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        if r == 0.0 {
            return Ok(0.0);
        }
        match self.form {
            GForm::TanhHalf { delta } => Ok((delta * r / 2.0).tanh() / delta),
            GForm::TanHalf => Ok((r / 2.0).tan()),
            GForm::Linear { d } => Ok(r / d),
            GForm::Quadrature => {
                if r < SERIES_SWITCH {
                    Ok(self.g_series(r))
                } else {
                    self.g_quadrature(r)
                }
            }
        }
    }

    pub fn g_prime(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        match self.form {
            GForm::TanhHalf { delta } => {
                let c = (delta * r / 2.0).cosh();
                Ok(0.5 / (c * c))
            }
            GForm::TanHalf => {
                let c = (r / 2.0).cos();
                Ok(0.5 / (c * c))
            }
            GForm::Linear { d } => Ok(1.0 / d),
            GForm::Quadrature => {
                if r < SERIES_SWITCH {
                    Ok(1.0 / self.d + 3.0 * self.c3() * r * r)
                } else {
                    Ok(1.0 - self.space.mean_curvature(r)? * self.g(r)?)
                }
            }
        }
    }

    pub fn g_double_prime(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        match self.form {
            GForm::TanhHalf { delta } => {
                let x = delta * r / 2.0;
                let c = x.cosh();
                Ok(-0.5 * delta * x.tanh() / (c * c))
            }
            GForm::TanHalf => {
                let x = r / 2.0;
                let c = x.cos();
                Ok(0.5 * x.tan() / (c * c))
            }
            GForm::Linear { .. } => Ok(0.0),
            GForm::Quadrature => {
                if r < SERIES_SWITCH {
                    Ok(6.0 * self.c3() * r)
                } else {
                    Ok(self.space.lambda1_sphere(r)? * self.g(r)?
                        - self.space.mean_curvature(r)? * self.g_prime(r)?)
                }
            }
        }
    }

    /// g on an ascending grid, sharing cumulative quadrature work across the
    /// grid points.
    pub fn g_batch(&self, rs: &[f64]) -> Result<Vec<f64>> {
        for w in rs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Input("g_batch grid must be strictly ascending".into()));
            }
        }
        if self.form != GForm::Quadrature {
            return rs.iter().map(|&r| self.g(r)).collect();
        }
        let spec = profile_quad_spec();
        let mut out = Vec::with_capacity(rs.len());
        let mut acc = 0.0f64;
        let mut prev = 0.0f64;
        for &r in rs {
            self.check(r)?;
            if r == 0.0 {
                out.push(0.0);
            } else if r < SERIES_SWITCH {
                out.push(self.g_series(r));
            } else {
                acc += integrate(|t| self.space.density(t).unwrap_or(f64::NAN), prev, r, &spec)?;
                prev = r;
                out.push(acc / self.space.density(r)?);
            }
        }
        Ok(out)
    }

    /// Residual of the second-order ODE at r; zero up to the evaluation error
    /// of the three routes feeding it.
    pub fn ode_residual(&self, r: f64) -> Result<f64> {
        Ok(self.g_double_prime(r)? + self.space.mean_curvature(r)? * self.g_prime(r)?
            - self.space.lambda1_sphere(r)? * self.g(r)?)
    }
}

/// Closed form of g on the Cayley hyperbolic plane:
/// (1/22) sinh r (sech^7 r / 120 + sech^5 r / 15 + (3/10) sech^3 r + sech r).
///
/// The sech^7 coefficient is 1/120: the coefficient set must sum to 22/16
/// for the pole limit g(r)/r -> 1/16, and symbolic integration of
/// sinh^15 cosh^7 confirms it.
pub fn cayley_g_closed_form(r: f64) -> f64 {
    let sech = 1.0 / r.cosh();
    (1.0 / 22.0)
        * r.sinh()
        * (sech.powi(7) / 120.0 + sech.powi(5) / 15.0 + 0.3 * sech.powi(3) + sech)
}

/// Robin ratio g'(R)/g(R) of the regular solution of
/// g'' + TrA g' - lambda(r) g = 0, g(0) = 0, for a spherical-harmonic-type
/// eigenvalue profile lambda(r) ~ c/r^2 near the pole.
///
/// The solution is started from a two-term Frobenius series at r = 1e-4
/// (leading exponent m with m(m + d - 2) = lim r^2 lambda) and continued with
/// an adaptive Dormand-Prince stepper.
pub fn radial_mode_shoot<L: Fn(f64) -> f64>(space: &SpaceModel, lambda: L, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || radius >= space.radius_window() {
        return Err(Error::Domain(format!(
            "shoot radius {radius} outside (0, {}) for {space}",
            space.radius_window()
        )));
    }
    let d = space.real_dim() as f64;

    // Indicial data from the limit c = r^2 lambda(r).
    let c1 = 1e-6f64.powi(2) * lambda(1e-6);
    let c2 = 2e-6f64.powi(2) * lambda(2e-6);
    if !c1.is_finite() || !c2.is_finite() || (c1 - c2).abs() > 1e-3 * c1.abs() || c1 <= 1e-8 {
        return Err(Error::Domain(format!(
            "lambda profile is not of spherical-harmonic type near 0 (r^2 lambda = {c1}, {c2})"
        )));
    }
    let c = c1;
    let m = 0.5 * (-(d - 2.0) + ((d - 2.0) * (d - 2.0) + 4.0 * c).sqrt());

    // Next series coefficient from TrA = (d-1)/r + 2 a r and
    // lambda = c/r^2 + lambda0.
    let a = space.density_series_r2_coeff();
    let r1 = 1e-3;
    let lambda0 = lambda(r1) - c / (r1 * r1);
    let cc2 = (lambda0 - 2.0 * a * m) / (4.0 * m + 2.0 * d);

    let r0: f64 = 1e-4;
    let mut y = [
        r0.powf(m) * (1.0 + cc2 * r0 * r0),
        r0.powf(m - 1.0) * (m + (m + 2.0) * cc2 * r0 * r0),
    ];
    // The ODE is linear; normalize the state for step control.
    let scale = y[0].abs().max(y[1].abs());
    y[0] /= scale;
    y[1] /= scale;

    let rhs = |r: f64, y: [f64; 2]| {
        let tra = space.mean_curvature(r).unwrap_or(f64::NAN);
        [y[1], lambda(r) * y[0] - tra * y[1]]
    };
    let spec = OdeSpec { rel_tol: 1e-12, abs_tol: 1e-14, max_steps: 2_000_000 };
    let yr = integrate_ode2(rhs, r0, y, radius, &spec)?;
    if yr[0] == 0.0 || !yr.iter().all(|v| v.is_finite()) {
        return Err(Error::Convergence {
            what: format!("shooting produced a degenerate state at R = {radius}"),
            best: f64::NAN,
        });
    }
    Ok(yr[1] / yr[0])
}

/// Grid report on the monotonicity structure of the radial profile data.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub space: String,
    pub r_max: f64,
    pub grid: usize,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl MonotonicityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Check, on a grid over (0, r_max], that g' > 0, g'' <= 0, that (g')^2,
/// g^2 lambda_1 and their sum are nonincreasing, and that the boundary-moment
/// integrand 2g - TrA g^2 is nondecreasing. Nonincreasing/nondecreasing
/// checks allow slack 1e-12 x scale to absorb roundoff.
///
/// On compact spaces the grid is clamped to the validity window; there the
/// monotonicity of the Steklov integrand genuinely reverses, which the report
/// records as failed checks.
pub fn monotonicity_report(space: &SpaceModel, r_max: f64, grid: usize) -> Result<MonotonicityReport> {
    if !(r_max > 0.0) || grid < 2 {
        return Err(Error::Input("monotonicity_report needs r_max > 0 and grid >= 2".into()));
    }
    let profile = g_profile(space)?;
    let window = profile.valid_r_max();
    let r_hi = if window.is_finite() { r_max.min(0.99 * window) } else { r_max };

    let rs: Vec<f64> = (1..=grid).map(|i| r_hi * i as f64 / grid as f64).collect();
    let g = profile.g_batch(&rs)?;
    let mut gp = Vec::with_capacity(grid);
    let mut gpp = Vec::with_capacity(grid);
    let mut g2lam = Vec::with_capacity(grid);
    let mut moment = Vec::with_capacity(grid);
    for (i, &r) in rs.iter().enumerate() {
        let tra = space.mean_curvature(r)?;
        let lam = space.lambda1_sphere(r)?;
        let gpv = if r < SERIES_SWITCH {
            profile.g_prime(r)?
        } else {
            1.0 - tra * g[i]
        };
        gp.push(gpv);
        gpp.push(if r < SERIES_SWITCH {
            profile.g_double_prime(r)?
        } else {
            lam * g[i] - tra * gpv
        });
        g2lam.push(g[i] * g[i] * lam);
        moment.push(2.0 * g[i] - tra * g[i] * g[i]);
    }

    let scale_of = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let max_increase = |v: &[f64]| {
        v.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let min_increase = |v: &[f64]| v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);

    let mut checks = Vec::new();

    let min_gp = gp.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(CheckResult::new("g_prime_positive", min_gp > 0.0, min_gp));

    let max_gpp = gpp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-12 * scale_of(&gpp);
    checks.push(CheckResult::new("g_double_prime_nonpositive", max_gpp <= slack, -max_gpp));

    let gp2: Vec<f64> = gp.iter().map(|v| v * v).collect();
    let inc = max_increase(&gp2);
    checks.push(CheckResult::new(
        "g_prime_sq_nonincreasing",
        inc <= 1e-12 * scale_of(&gp2),
        -inc,
    ));

    let inc = max_increase(&g2lam);
    checks.push(CheckResult::new(
        "g_sq_lambda1_nonincreasing",
        inc <= 1e-12 * scale_of(&g2lam),
        -inc,
    ));

    let integrand: Vec<f64> = gp2.iter().zip(g2lam.iter()).map(|(x, y)| x + y).collect();
    let inc = max_increase(&integrand);
    checks.push(CheckResult::new(
        "steklov_integrand_nonincreasing",
        inc <= 1e-12 * scale_of(&integrand),
        -inc,
    ));

    let dec = min_increase(&moment);
    checks.push(CheckResult::new(
        "boundary_moment_nondecreasing",
        dec >= -1e-12 * scale_of(&moment),
        dec,
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(MonotonicityReport {
        space: space.to_string(),
        r_max: r_hi,
        grid,
        checks,
        pass,
    })
}
