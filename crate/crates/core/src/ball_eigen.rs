//! First nonzero Steklov eigenvalue of geodesic balls, computed along two
//! independent routes.
//!
//! Route one is the Robin ratio g'(R)/g(R) of the radial profile. Route two
//! evaluates the variational identity
//!
//!   nu_1(B(R)) = integral over B(R) of (g^2 lambda_1(S(r)) + (g')^2)
//!                / (g^2(R) Vol(S(R)))
//!
//! reduced to a single radial quadrature: the unit-sphere factor of the
//! volume element cancels between numerator and denominator, so the integral
//! over the ball is exactly integral of (g^2 lambda_1 + (g')^2) phi dr
//! divided by g^2(R) phi(R).

use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadratureSpec};
use crate::radial::{g_profile, RadialProfile};
use crate::spaces::{CurvatureSign, FieldKind, SpaceModel};

/// Both routes to nu_1(B(R)), their agreement, and the closed form where the
/// space has one.
#[derive(Debug, Clone)]
pub struct BallEigenResult {
    pub space: String,
    pub radius: f64,
    /// g'(R)/g(R).
    pub nu1_ratio: f64,
    /// The radial integral route.
    pub nu1_integral: f64,
    /// 1/sinh R, 1/sin R, 1/R, delta/sinh(delta R) where applicable.
    pub closed_form: Option<f64>,
    /// |ratio - integral| / ratio.
    pub agreement: f64,
}

impl BallEigenResult {
    /// The better-conditioned of the two routes (the ratio).
    pub fn nu1(&self) -> f64 {
        self.nu1_ratio
    }
}

fn closed_form(space: &SpaceModel, radius: f64) -> Option<f64> {
    match space {
        SpaceModel::Form(s) => {
            if s.delta() == 0.0 {
                Some(1.0 / radius)
            } else if s.dim() == 2 {
                Some(s.delta() / (s.delta() * radius).sinh())
            } else {
                None
            }
        }
        SpaceModel::RankOne(s) => match (s.field(), s.sign(), s.base_dim()) {
            (FieldKind::Real, CurvatureSign::Noncompact, 2) => Some(1.0 / radius.sinh()),
            (FieldKind::Real, CurvatureSign::Compact, 2) => Some(1.0 / radius.sin()),
            _ => None,
        },
        SpaceModel::Warped(_) => None,
    }
}

/// integral over [0, t] of (g^2 lambda_1(S(r)) + (g')^2) phi(r) dr, the
/// radial reduction of the Dirichlet-type integral over a ball (the
/// unit-sphere factor of the volume element is left out and cancels wherever
/// this is used).
pub(crate) fn steklov_energy_integral(
    space: &SpaceModel,
    profile: &RadialProfile,
    t: f64,
) -> Result<f64> {
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: 1e-11,
        max_depth: 40,
        singularity_exponent: None,
    };
    let integrand = |r: f64| -> f64 {
        let eval = || -> Result<f64> {
            let g = profile.g(r)?;
            let gp = profile.g_prime(r)?;
            let lam = space.lambda1_sphere(r)?;
            Ok((g * g * lam + gp * gp) * space.density(r)?)
        };
        eval().unwrap_or(f64::NAN)
    };
    integrate(integrand, 0.0, t, &spec)
}

fn nu1_integral_route(space: &SpaceModel, profile: &RadialProfile, radius: f64) -> Result<f64> {
    let numerator = steklov_energy_integral(space, profile, radius)?;
    let g_r = profile.g(radius)?;
    let denominator = g_r * g_r * space.density(radius)?;
    Ok(numerator / denominator)
}

/// nu_1(B(R)) for a geodesic ball of radius R.
pub fn nu1_ball(space: &SpaceModel, radius: f64) -> Result<BallEigenResult> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    let profile = g_profile(space)?;
    let g_r = profile.g(radius)?;
    let gp_r = profile.g_prime(radius)?;
    if !(g_r > 0.0) {
        return Err(Error::Domain(format!("radial profile vanishes at R = {radius}")));
    }
    let nu1_ratio = gp_r / g_r;
    let nu1_integral = nu1_integral_route(space, &profile, radius)?;
    let agreement = (nu1_ratio - nu1_integral).abs() / nu1_ratio.abs().max(1e-300);
    if !(nu1_ratio > 0.0) {
        return Err(Error::Domain(format!(
            "nonpositive nu_1 = {nu1_ratio} at R = {radius}; radius outside the admissible range"
        )));
    }
    if agreement > 1e-8 {
        return Err(Error::Convergence {
            what: format!(
                "ratio and integral routes disagree at R = {radius}: {nu1_ratio} vs {nu1_integral}"
            ),
            best: nu1_ratio,
        });
    }
    Ok(BallEigenResult {
        space: space.to_string(),
        radius,
        nu1_ratio,
        nu1_integral,
        closed_form: closed_form(space, radius),
        agreement,
    })
}

/// One [`nu1_ball`] result per radius; failures are recorded per entry and
/// the sweep continues.
pub fn nu1_ball_sweep(space: &SpaceModel, radii: &[f64]) -> Vec<(f64, Result<BallEigenResult>)> {
    radii.iter().map(|&r| (r, nu1_ball(space, r))).collect()
}

/// CSV table of a sweep: columns space,R,nu1_ratio,nu1_integral,closed_form,agreement.
/// Failed entries keep their radius and leave the value columns empty.
pub fn sweep_to_csv(entries: &[(f64, Result<BallEigenResult>)]) -> String {
    let mut out = String::from("space,R,nu1_ratio,nu1_integral,closed_form,agreement\n");
    for (radius, entry) in entries {
        match entry {
            Ok(r) => {
                let cf = r.closed_form.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.space, r.radius, r.nu1_ratio, r.nu1_integral, cf, r.agreement
                ));
            }
            Err(_) => out.push_str(&format!(",{radius},,,,\n")),
        }
    }
    out
}
