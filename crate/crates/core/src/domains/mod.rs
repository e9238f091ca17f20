//! Star-shaped 2D domains in constant-curvature and warped rotationally
//! symmetric ambients: volumes, boundary measure, weighted centers of mass,
//! radial trial-function upper bounds for the first Steklov eigenvalue, and
//! the curvature-comparison chain against equal-volume space-form balls.
//!
//! A domain is
//!
//!   Omega = { exp_base(r u) : 0 <= r <= rho(theta(u)) }
//!
//! with rho a smooth positive 2 pi-periodic function stored as a truncated
//! Fourier series. Constant-curvature ambients are worked in a global chart
//! (plane or Poincare disk), which keeps distances and geodesic directions
//! closed-form; warped ambients support only the base-centered operations
//! that the comparison chain needs, since off-center geodesic distances have
//! no closed form there.

mod geometry;

use serde::Serialize;
use serde_json::{json, Value};

use crate::ball_eigen::{nu1_ball, steklov_energy_integral};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::numerics::{integrate, QuadratureSpec};
use crate::radial::{g_delta_profile, g_profile, RadialProfile};
use crate::report::{CheckResult, VerificationReport};
use crate::spaces::{sin_delta, CustomWarp, SpaceForm, SpaceModel, Warp, WarpedModel};
use geometry::{law_of_cosines, Chart, C};

use std::f64::consts::PI;
use std::sync::Arc;

/// Default cap on stored boundary Fourier modes.
pub const MAX_RHO_MODES: usize = 64;
/// Relative tail bound enforced on boundary Fourier data.
pub const RHO_TAIL_TOL: f64 = 1e-12;

/// A point in geodesic polar coordinates about a reference point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

/// Two-dimensional ambient geometry of a star domain.
#[derive(Debug, Clone)]
pub enum Ambient2 {
    Form(SpaceForm),
    Warped(WarpedModel),
}

impl Ambient2 {
    pub fn hyperbolic() -> Self {
        Ambient2::Form(SpaceForm::new(1.0, 2).unwrap())
    }

    pub fn flat() -> Self {
        Ambient2::Form(SpaceForm::new(0.0, 2).unwrap())
    }

    pub fn form(delta: f64) -> Result<Self> {
        Ok(Ambient2::Form(SpaceForm::new(delta, 2)?))
    }

    pub fn warped(model: WarpedModel) -> Result<Self> {
        if model.dim() != 2 {
            return Err(Error::InvalidModel(format!(
                "star domains require a 2-dimensional ambient, got n = {}",
                model.dim()
            )));
        }
        Ok(Ambient2::Warped(model))
    }

    /// Warp factor of the rotationally symmetric metric: sin_delta for space
    /// forms, psi for warped models.
    pub fn psi(&self, r: f64) -> f64 {
        match self {
            Ambient2::Form(s) => sin_delta(s.delta(), r),
            Ambient2::Warped(w) => w.psi(r),
        }
    }

    pub fn space_model(&self) -> SpaceModel {
        match self {
            Ambient2::Form(s) => SpaceModel::Form(*s),
            Ambient2::Warped(w) => SpaceModel::Warped(w.clone()),
        }
    }

    fn chart(&self) -> Result<Chart> {
        match self {
            Ambient2::Form(s) => Ok(Chart::new(s.delta())),
            Ambient2::Warped(_) => Err(Error::Unsupported(
                "point-to-point geometry is only available in constant-curvature ambients".into(),
            )),
        }
    }

    /// Interior area element integrated radially: integral of psi over [0, t].
    fn radial_volume(&self, t: f64) -> Result<f64> {
        match self {
            Ambient2::Form(s) => {
                let d = s.delta();
                Ok(if d > 0.0 { ((d * t).cosh() - 1.0) / (d * d) } else { 0.5 * t * t })
            }
            Ambient2::Warped(w) => integrate(
                |r| w.psi(r),
                0.0,
                t,
                &QuadratureSpec { abs_tol: 1e-300, rel_tol: 5e-13, max_depth: 40, singularity_exponent: None },
            ),
        }
    }
}

/// Geodesic distance between two points given in polar coordinates about a
/// common origin of a constant-curvature 2D space form, by the hyperbolic or
/// planar law of cosines.
pub fn geodesic_distance(form: &SpaceForm, a: PolarPoint, b: PolarPoint) -> Result<f64> {
    if form.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "polar distance formula is two-dimensional, got n = {}",
            form.dim()
        )));
    }
    if !(a.r >= 0.0 && b.r >= 0.0) {
        return Err(Error::Domain("polar radii must be nonnegative".into()));
    }
    Ok(law_of_cosines(form.delta(), a.r, a.theta, b.r, b.theta))
}

/// One point of a star-domain boundary with its measure data.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryElement {
    pub theta: f64,
    /// rho(theta).
    pub r: f64,
    /// Arc length per unit theta: sqrt(rho'^2 + psi(rho)^2).
    pub ds_dtheta: f64,
    /// (ds/dtheta)/psi(rho) >= 1, with equality iff rho'(theta) = 0.
    pub sec_theta: f64,
}

/// Star-shaped domain about a base point.
#[derive(Debug, Clone)]
pub struct StarDomain {
    ambient: Ambient2,
    /// Chart coordinates of the base point (origin for warped ambients).
    base: C,
    rho: FourierSeries,
}

impl StarDomain {
    /// Domain about the chart origin.
    pub fn new(ambient: Ambient2, rho: FourierSeries) -> Result<Self> {
        Self::build(ambient, C::new(0.0, 0.0), rho)
    }

    /// Domain about a base point given in polar coordinates about the chart
    /// origin. Warped ambients only support the origin.
    pub fn with_base(ambient: Ambient2, base: PolarPoint, rho: FourierSeries) -> Result<Self> {
        let base_chart = match &ambient {
            Ambient2::Form(_) => {
                let chart = ambient.chart()?;
                chart.at_polar(C::new(0.0, 0.0), base.theta, base.r)
            }
            Ambient2::Warped(_) => {
                if base.r != 0.0 {
                    return Err(Error::Unsupported(
                        "warped ambients only support base-centered domains".into(),
                    ));
                }
                C::new(0.0, 0.0)
            }
        };
        Self::build(ambient, base_chart, rho)
    }

    /// Ball of radius `r` about the base point.
    pub fn ball(ambient: Ambient2, r: f64) -> Result<Self> {
        Self::new(ambient, FourierSeries::constant(r))
    }

    /// Fit a smooth radial function into the stored Fourier form, enforcing
    /// the tail bound.
    pub fn from_radial_fn<F: Fn(f64) -> f64>(ambient: Ambient2, rho: F) -> Result<Self> {
        let series = FourierSeries::fit_periodic(rho, RHO_TAIL_TOL, MAX_RHO_MODES)?;
        Self::new(ambient, series)
    }

    fn build(ambient: Ambient2, base: C, rho: FourierSeries) -> Result<Self> {
        if rho.max_mode() > MAX_RHO_MODES {
            return Err(Error::InvalidModel(format!(
                "boundary radial function carries {} modes, cap is {MAX_RHO_MODES}",
                rho.max_mode()
            )));
        }
        let (min_rho, _) = rho.min_max_on_grid(4096);
        if !(min_rho > 0.0) {
            return Err(Error::InvalidModel(format!(
                "boundary radial function must stay positive, min = {min_rho}"
            )));
        }
        Ok(StarDomain { ambient, base, rho })
    }

    pub fn ambient(&self) -> &Ambient2 {
        &self.ambient
    }

    pub fn rho(&self) -> &FourierSeries {
        &self.rho
    }

    /// Base point in polar coordinates about the chart origin.
    pub fn base(&self) -> PolarPoint {
        match &self.ambient {
            Ambient2::Form(s) => {
                let chart = Chart::new(s.delta());
                let (r, dir) = chart.log_direction(C::new(0.0, 0.0), self.base);
                PolarPoint { r, theta: dir.im.atan2(dir.re) }
            }
            Ambient2::Warped(_) => PolarPoint { r: 0.0, theta: 0.0 },
        }
    }

    pub fn boundary_element(&self, theta: f64) -> BoundaryElement {
        let r = self.rho.eval(theta);
        let dr = self.rho.eval_deriv(theta);
        let psi = self.ambient.psi(r);
        let ds = dr.hypot(psi);
        BoundaryElement { theta, r, ds_dtheta: ds, sec_theta: ds / psi }
    }

    /// Domain volume by nested quadrature (relative tolerance 1e-10).
    pub fn volume(&self) -> Result<f64> {
        let spec = QuadratureSpec { abs_tol: 1e-300, rel_tol: 1e-11, max_depth: 40, singularity_exponent: None };
        integrate(
            |theta| self.ambient.radial_volume(self.rho.eval(theta)).unwrap_or(f64::NAN),
            0.0,
            2.0 * PI,
            &spec,
        )
    }

    /// The same radial function reinterpreted in a constant-curvature target.
    pub fn transplant(&self, target: SpaceForm) -> Result<StarDomain> {
        if target.dim() != 2 {
            return Err(Error::Unsupported("transplant target must be two-dimensional".into()));
        }
        StarDomain::new(Ambient2::Form(target), self.rho.clone())
    }

    /// Whether rho is constant to within the tail tolerance.
    pub fn is_round(&self) -> bool {
        self.rho.tail_ok(0, RHO_TAIL_TOL)
    }

    /// Boundary nodes for the periodic trapezoid rule (constant-curvature
    /// ambients). The rule is spectrally accurate for the analytic data the
    /// domain stores.
    fn nodes(&self, m: usize) -> Result<Vec<Node>> {
        let chart = self.ambient.chart()?;
        let mut out = Vec::with_capacity(m);
        for j in 0..m {
            let theta = 2.0 * PI * j as f64 / m as f64;
            let rho = self.rho.eval(theta);
            let drho = self.rho.eval_deriv(theta);
            let q = chart.at_polar(self.base, theta, rho);
            let q_dot = chart.boundary_velocity(self.base, theta, rho, drho);
            let arc = chart.metric_factor(q) * q_dot.norm();
            out.push(Node { q, q_dot, arc });
        }
        Ok(out)
    }

    fn node_count(&self) -> usize {
        2048usize.max(64 * (self.rho.max_mode() + 1))
    }

    /// JSON form: {"ambient": ..., "rho_fourier": {"a0", "a", "b"}, "base"?}.
    pub fn to_json_value(&self) -> Result<Value> {
        let base = self.base();
        let mut v = json!({
            "ambient": self.ambient.space_model().to_json_value()?,
            "rho_fourier": serde_json::to_value(&self.rho).expect("fourier serialization"),
        });
        if base.r != 0.0 {
            v["base"] = json!({"r": base.r, "theta": base.theta});
        }
        Ok(v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Input("domain JSON must be an object".into()))?;
        let ambient_v = obj.get("ambient").ok_or_else(|| Error::Input("domain JSON needs \"ambient\"".into()))?;
        let ambient = match SpaceModel::from_json_value(ambient_v)? {
            SpaceModel::Form(s) if s.dim() == 2 => Ambient2::Form(s),
            SpaceModel::Warped(w) => Ambient2::warped(w)?,
            other => {
                return Err(Error::Input(format!(
                    "domain ambient must be a 2D space form or warped model, got {other}"
                )))
            }
        };
        let rho_v = obj
            .get("rho_fourier")
            .ok_or_else(|| Error::Input("domain JSON needs \"rho_fourier\"".into()))?;
        let rho: FourierSeries = serde_json::from_value(rho_v.clone())
            .map_err(|e| Error::Input(format!("bad rho_fourier: {e}")))?;
        let base = match obj.get("base") {
            None => PolarPoint { r: 0.0, theta: 0.0 },
            Some(b) => PolarPoint {
                r: b.get("r").and_then(Value::as_f64).unwrap_or(0.0),
                theta: b.get("theta").and_then(Value::as_f64).unwrap_or(0.0),
            },
        };
        StarDomain::with_base(ambient, base, rho)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("bad domain JSON: {e}")))?;
        Self::from_json_value(&v)
    }
}

struct Node {
    q: C,
    q_dot: C,
    arc: f64,
}

/// Weighted center of mass of the boundary: the point p where the moment
/// integral of g(d(p, q)) times the unit direction toward q vanishes.
#[derive(Debug, Clone, Serialize)]
pub struct CenterOfMass {
    /// Polar coordinates of p about the domain's base point.
    pub point: PolarPoint,
    /// Chart coordinates of p (plane or Poincare disk).
    pub chart_point: (f64, f64),
    /// Euclidean norm of the moment integral at p.
    pub residual: f64,
    pub iterations: u32,
    /// Total boundary measure, the scale against which the residual is read.
    pub boundary_measure: f64,
}

fn moment_at(nodes: &[Node], chart: &Chart, weight: &RadialProfile, p: C, m: usize) -> Option<[f64; 2]> {
    if chart.delta > 0.0 && p.norm() >= 0.9999 {
        return None;
    }
    let w = 2.0 * PI / m as f64;
    let mut mx = 0.0;
    let mut my = 0.0;
    for node in nodes {
        let (dist, dir) = chart.log_direction(p, node.q);
        let g = weight.g(dist).ok()?;
        mx += g * dir.re * node.arc;
        my += g * dir.im * node.arc;
    }
    Some([mx * w, my * w])
}

fn min_angle_speed(nodes: &[Node], chart: &Chart, p: C) -> f64 {
    nodes
        .iter()
        .map(|n| chart.angle_speed(p, n.q, n.q_dot))
        .fold(f64::INFINITY, f64::min)
}

/// Find the center of mass of the domain boundary for the radial weight
/// profile `weight` by damped Newton from the base point.
///
/// Every accepted iterate must keep the domain star-shaped about itself
/// (checked through the angular re-parameterization speed); losing that
/// property is a geometry error.
pub fn center_of_mass(domain: &StarDomain, weight: &RadialProfile) -> Result<CenterOfMass> {
    let chart = domain.ambient.chart()?;
    let m = domain.node_count();
    let nodes = domain.nodes(m)?;
    let w = 2.0 * PI / m as f64;
    let boundary_measure: f64 = nodes.iter().map(|n| n.arc).sum::<f64>() * w;

    // Residual scale: boundary measure times the largest weight value seen
    // from the base point.
    let mut g_max: f64 = 0.0;
    for node in &nodes {
        let (dist, _) = chart.log_direction(domain.base, node.q);
        g_max = g_max.max(weight.g(dist)?);
    }
    let scale = boundary_measure * g_max;
    let tol = 1e-12 * scale;

    let eval = |p: C| moment_at(&nodes, &chart, weight, p, m);

    let mut p = domain.base;
    let mut f = eval(p).ok_or_else(|| Error::Geometry("moment undefined at the base point".into()))?;
    let mut res = f[0].hypot(f[1]);
    let star_check = |p: C| -> Result<()> {
        if min_angle_speed(&nodes, &chart, p) <= 0.0 {
            Err(Error::Geometry(format!(
                "domain is not star-shaped about the center iterate ({}, {})",
                p.re, p.im
            )))
        } else {
            Ok(())
        }
    };
    star_check(p)?;

    let mut iterations = 0u32;
    while res > tol {
        if iterations >= 50 {
            return Err(Error::Convergence {
                what: format!("center-of-mass Newton exhausted 50 iterations, residual {res:e}"),
                best: res,
            });
        }
        iterations += 1;
        // Finite-difference Jacobian in chart coordinates.
        let h = 1e-7;
        let fx = eval(p + C::new(h, 0.0));
        let fy = eval(p + C::new(0.0, h));
        let (fx, fy) = match (fx, fy) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Geometry("center iterate left the chart".into())),
        };
        let jac = [
            [(fx[0] - f[0]) / h, (fy[0] - f[0]) / h],
            [(fx[1] - f[1]) / h, (fy[1] - f[1]) / h],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::Convergence {
                what: "center-of-mass Jacobian is singular".into(),
                best: res,
            });
        }
        let step = C::new(
            -(jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
            -(-jac[1][0] * f[0] + jac[0][0] * f[1]) / det,
        );
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = p + step * lambda;
            if let Some(fc) = eval(cand) {
                let rc = fc[0].hypot(fc[1]);
                if rc < res {
                    p = cand;
                    f = fc;
                    res = rc;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::Convergence {
                what: format!("center-of-mass backtracking stalled, residual {res:e}"),
                best: res,
            });
        }
        star_check(p)?;
    }

    let (r, dir) = chart.log_direction(domain.base, p);
    let theta = if r == 0.0 { 0.0 } else { dir.im.atan2(dir.re) };
    Ok(CenterOfMass {
        point: PolarPoint { r, theta },
        chart_point: (p.re, p.im),
        residual: res,
        iterations,
        boundary_measure,
    })
}

/// Rayleigh-quotient upper bound for nu_1 from the radial trial family about
/// the weighted center of mass.
#[derive(Debug, Clone, Serialize)]
pub struct TrialBoundReport {
    pub space: String,
    pub center: CenterOfMass,
    /// Dirichlet-type integral over the domain.
    pub numerator: f64,
    /// Weighted boundary integral of g^2.
    pub denominator: f64,
    /// numerator / denominator: a certified upper bound for nu_1 up to
    /// quadrature error.
    pub bound: f64,
    pub domain_volume: f64,
    /// Radius of the equal-volume geodesic ball.
    pub equal_volume_radius: f64,
    /// nu_1 of that ball.
    pub ball_bound: f64,
    /// Independently computed nu_1 of the domain, when the caller has one.
    pub oracle_nu1: Option<f64>,
}

/// Evaluate the trial-function bound
///
///   nu_1(Omega) <= [integral over Omega of (g^2 lambda_1(S(r)) + (g')^2)]
///                  / [integral over the boundary of g^2]
///
/// with r the distance to the weighted center of mass, in a hyperbolic or
/// flat ambient. Interior integrals use the angular re-parameterization about
/// the center, so the domain must be star-shaped about it.
pub fn trial_bound(domain: &StarDomain) -> Result<TrialBoundReport> {
    let space = domain.ambient.space_model();
    let profile = g_profile(&space)?;
    let center = center_of_mass(domain, &profile)?;
    let chart = domain.ambient.chart()?;
    let p = C::new(center.chart_point.0, center.chart_point.1);

    let m = domain.node_count();
    let nodes = domain.nodes(m)?;
    let w = 2.0 * PI / m as f64;

    let mut denominator = 0.0;
    let mut numerator = 0.0;
    for node in &nodes {
        let (dist, _) = chart.log_direction(p, node.q);
        let g = profile.g(dist)?;
        denominator += g * g * node.arc * w;
        let alpha_speed = chart.angle_speed(p, node.q, node.q_dot);
        if alpha_speed <= 0.0 {
            return Err(Error::Geometry(
                "domain is not star-shaped about its center of mass".into(),
            ));
        }
        numerator += alpha_speed * steklov_energy_integral(&space, &profile, dist)? * w;
    }

    if !(numerator > 0.0 && denominator > 0.0) {
        return Err(Error::Convergence {
            what: format!("degenerate trial-bound integrals: {numerator} / {denominator}"),
            best: f64::NAN,
        });
    }

    let domain_volume = domain.volume()?;
    let equal_volume_radius = space.radius_for_volume(domain_volume)?;
    let ball_bound = nu1_ball(&space, equal_volume_radius)?.nu1_ratio;

    Ok(TrialBoundReport {
        space: space.to_string(),
        center,
        numerator,
        denominator,
        bound: numerator / denominator,
        domain_volume,
        equal_volume_radius,
        ball_bound,
        oracle_nu1: None,
    })
}

/// The comparison constant relating nu_1 of a domain in a curvature-bounded
/// ambient to the equal-volume space-form ball, with its ingredients.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonConstant {
    /// C_k >= 1.
    pub c_k: f64,
    /// Equal-volume radius in the space form for the ambient volume.
    pub r_k: f64,
    /// Equal-volume radius for the transplanted domain.
    pub r_k_prime: f64,
    /// g^2 phi ratio between the two radii.
    pub boundary_factor: f64,
    /// Ratio of the radial energy integrals under the ambient and space-form
    /// densities.
    pub bulk_factor: f64,
    pub curvature_margin: f64,
}

fn ambient_check_model(ambient: &Ambient2, k: f64) -> Result<WarpedModel> {
    match ambient {
        Ambient2::Warped(w) => WarpedModel::new(2, w.warp().clone(), k),
        Ambient2::Form(s) => {
            let d = s.delta();
            let warp = if d > 0.0 {
                Warp::Custom(Arc::new(CustomWarp {
                    psi: Box::new(move |r| (d * r).sinh() / d),
                    dpsi: Some(Box::new(move |r| (d * r).cosh())),
                    d2psi: Some(Box::new(move |r| d * (d * r).sinh())),
                }))
            } else {
                Warp::Custom(Arc::new(CustomWarp {
                    psi: Box::new(|r| r),
                    dpsi: Some(Box::new(|_| 1.0)),
                    d2psi: Some(Box::new(|_| 0.0)),
                }))
            };
            WarpedModel::new(2, warp, k)
        }
    }
}

/// Compute the comparison constant C_k for curvature bound k = -delta^2 or 0.
///
/// The ambient must satisfy the radial curvature bound (verified numerically
/// over the radii the integrals touch); otherwise a hypothesis error is
/// returned.
pub fn comparison_constant(domain: &StarDomain, k: f64) -> Result<ComparisonConstant> {
    if !(k <= 0.0) {
        return Err(Error::Hypothesis(format!("curvature bound must be <= 0, got {k}")));
    }
    let delta = (-k).sqrt();
    let form = SpaceForm::new(delta, 2)?;
    let form_space = SpaceModel::Form(form);
    let g_delta = g_delta_profile(delta, 2)?;

    let vol_ambient = domain.volume()?;
    let r_k = form_space.radius_for_volume(vol_ambient)?;
    let transplanted = domain.transplant(form)?;
    let r_k_prime = form_space.radius_for_volume(transplanted.volume()?)?;

    let (_, rho_max) = domain.rho().min_max_on_grid(4096);
    let r_reach = r_k.max(rho_max) * 1.0001;
    let check = ambient_check_model(&domain.ambient, k)?.curvature_check(r_reach, 800)?;
    let curvature_margin = check.checks[0].margin;
    if !check.pass {
        return Err(Error::Hypothesis(format!(
            "ambient violates the curvature bound {k}: excess {:e}",
            -curvature_margin
        )));
    }

    let g2phi = |r: f64| -> Result<f64> {
        let g = g_delta.g(r)?;
        Ok(g * g * sin_delta(delta, r))
    };
    let boundary_factor = g2phi(r_k)? / g2phi(r_k_prime)?;

    // F(r) = g_delta^2 lambda_1(S_k(r)) + (g_delta')^2, integrated against
    // the ambient density and against the space-form density.
    let energy = |r: f64| -> Result<f64> {
        let g = g_delta.g(r)?;
        let gp = g_delta.g_prime(r)?;
        Ok(g * g * form_space.lambda1_sphere(r)? + gp * gp)
    };
    let spec = QuadratureSpec { abs_tol: 1e-300, rel_tol: 1e-11, max_depth: 40, singularity_exponent: None };
    let bulk_ambient = integrate(
        |r| energy(r).map(|e| e * domain.ambient.psi(r)).unwrap_or(f64::NAN),
        0.0,
        r_k,
        &spec,
    )?;
    let bulk_form = integrate(
        |r| energy(r).map(|e| e * sin_delta(delta, r)).unwrap_or(f64::NAN),
        0.0,
        r_k,
        &spec,
    )?;
    let bulk_factor = bulk_ambient / bulk_form;

    Ok(ComparisonConstant {
        c_k: boundary_factor * bulk_factor,
        r_k,
        r_k_prime,
        boundary_factor,
        bulk_factor,
        curvature_margin,
    })
}

/// The certified comparison chain: nu_1(Omega) <= C_k nu_1(B_k(R_k)).
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonBound {
    pub constant: ComparisonConstant,
    /// nu_1 of the equal-volume ball in the space form.
    pub nu1_ball_k: f64,
    /// C_k times that eigenvalue.
    pub bound: f64,
}

pub fn comparison_bound(domain: &StarDomain, k: f64) -> Result<ComparisonBound> {
    let constant = comparison_constant(domain, k)?;
    let delta = (-k).sqrt();
    let form_space = SpaceModel::space_form(delta, 2)?;
    let nu1_ball_k = nu1_ball(&form_space, constant.r_k)?.nu1_ratio;
    Ok(ComparisonBound { bound: constant.c_k * nu1_ball_k, constant, nu1_ball_k })
}

/// Which point the boundary lower bound is evaluated about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterChoice {
    Base,
    CenterOfMass,
}

/// Outcome of the boundary-measure lower bound
/// integral of g^2 over the boundary >= Vol(S(R)) g^2(R),
/// R the equal-volume ball radius.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryLowerBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    /// lhs - rhs; nonnegative when the bound holds.
    pub margin: f64,
    pub equal_volume_radius: f64,
    /// |margin| <= 1e-9 rhs.
    pub equality: bool,
    /// Whether the domain is a ball centered at the evaluation point.
    pub centered_ball: bool,
}

pub fn boundary_lower_bound_check(
    domain: &StarDomain,
    profile: &RadialProfile,
    center: CenterChoice,
) -> Result<BoundaryLowerBoundReport> {
    let chart = domain.ambient.chart()?;
    let p = match center {
        CenterChoice::Base => domain.base,
        CenterChoice::CenterOfMass => {
            let com = center_of_mass(domain, profile)?;
            C::new(com.chart_point.0, com.chart_point.1)
        }
    };
    let m = domain.node_count();
    let nodes = domain.nodes(m)?;
    let w = 2.0 * PI / m as f64;
    let mut lhs = 0.0;
    let mut max_dev: f64 = 0.0;
    let mut mean_dist = 0.0;
    for node in &nodes {
        let (dist, _) = chart.log_direction(p, node.q);
        let g = profile.g(dist)?;
        lhs += g * g * node.arc * w;
        mean_dist += dist / m as f64;
    }
    for node in &nodes {
        let (dist, _) = chart.log_direction(p, node.q);
        max_dev = max_dev.max((dist - mean_dist).abs());
    }

    let space = domain.ambient.space_model();
    let equal_volume_radius = space.radius_for_volume(domain.volume()?)?;
    let g_r = profile.g(equal_volume_radius)?;
    let rhs = space.sphere_volume(equal_volume_radius)? * g_r * g_r;
    let margin = lhs - rhs;
    Ok(BoundaryLowerBoundReport {
        lhs,
        rhs,
        margin,
        equal_volume_radius,
        equality: margin.abs() <= 1e-9 * rhs,
        centered_ball: max_dev <= 1e-9 * mean_dist,
    })
}

/// Report the boundary-measure factor sec_theta >= 1 across the boundary.
pub fn sec_theta_report(domain: &StarDomain, grid: usize) -> VerificationReport {
    let mut worst = f64::INFINITY;
    for j in 0..grid {
        let theta = 2.0 * PI * j as f64 / grid as f64;
        worst = worst.min(domain.boundary_element(theta).sec_theta);
    }
    let check = CheckResult::new("sec_theta_at_least_one", worst >= 1.0, worst - 1.0)
        .with_detail(format!("min sec_theta = {worst}"));
    VerificationReport::new("boundary_measure_factor", vec![check])
}

#[cfg(test)]
mod tests;
