//! Independent Steklov oracle: the low spectrum of the weighted
//! Dirichlet-to-Neumann map of a smooth star-shaped planar domain.
//!
//! Curved 2D domains are handled through conformal transplantation:
//! harmonicity is conformally invariant in two dimensions, so the Steklov
//! problem on a rotationally symmetric ambient is exactly a weighted planar
//! Steklov problem
//!
//!   Delta f = 0 in Omega,    df/dn = nu w f on the boundary,
//!
//! with w the boundary value of the conformal factor. The planar
//! Dirichlet-to-Neumann map is discretized by a Nystrom boundary-integral
//! method (single and adjoint double layer with spectrally accurate
//! log-kernel quadrature), and the weighted eigenproblem
//! DtN v = nu W v is solved as a dense symmetric generalized problem.

mod nystrom;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::domains::{Ambient2, StarDomain};
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::numerics::{integrate, sym_generalized_eig, QuadratureSpec};
use crate::spaces::Warp;

use std::f64::consts::PI;

/// Tail tolerance for the fitted planar boundary and weight series.
const FIT_TAIL_TOL: f64 = 1e-12;
/// Eigenvalues below this threshold are identified with the constant mode.
const DEFLATION_THRESHOLD: f64 = 1e-7;

/// Planar star-shaped domain with a positive boundary weight.
#[derive(Debug, Clone)]
pub struct WeightedPlanarDomain {
    rho: FourierSeries,
    weight: FourierSeries,
}

impl WeightedPlanarDomain {
    pub fn new(rho: FourierSeries, weight: FourierSeries) -> Result<Self> {
        for (name, f) in [("rho", &rho), ("weight", &weight)] {
            let (lo, _) = f.min_max_on_grid(4096);
            if !(lo > 0.0) {
                return Err(Error::InvalidModel(format!("{name} must stay positive, min = {lo}")));
            }
        }
        Ok(WeightedPlanarDomain { rho, weight })
    }

    /// Unweighted planar domain (w = 1).
    pub fn flat(rho: FourierSeries) -> Result<Self> {
        Self::new(rho, FourierSeries::constant(1.0))
    }

    pub fn disk(radius: f64) -> Self {
        WeightedPlanarDomain {
            rho: FourierSeries::constant(radius),
            weight: FourierSeries::constant(1.0),
        }
    }

    pub fn rho(&self) -> &FourierSeries {
        &self.rho
    }

    pub fn weight(&self) -> &FourierSeries {
        &self.weight
    }

    /// Planar area enclosed by the boundary: (1/2) integral of rho^2.
    pub fn area(&self) -> f64 {
        let mut s = self.rho.a0 * self.rho.a0;
        for k in 1..=self.rho.max_mode() {
            let a = self.rho.a.get(k - 1).copied().unwrap_or(0.0);
            let b = self.rho.b.get(k - 1).copied().unwrap_or(0.0);
            s += 0.5 * (a * a + b * b);
        }
        PI * s
    }

    /// Weighted boundary length: contour integral of w ds.
    pub fn weighted_boundary_length(&self) -> f64 {
        let m = 4096;
        let mut s = 0.0;
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            let r = self.rho.eval(t);
            let dr = self.rho.eval_deriv(t);
            s += self.weight.eval(t) * dr.hypot(r);
        }
        s * 2.0 * PI / m as f64
    }
}

/// Low Steklov spectrum with boundary eigendensities.
#[derive(Debug, Clone)]
pub struct SteklovSpectrum {
    /// Discretization size used.
    pub n: usize,
    /// Ascending eigenvalues, starting with nu_0 ~ 0.
    pub eigenvalues: Vec<f64>,
    /// Boundary traces of the eigenfunctions at the N parameter nodes,
    /// normalized in the weighted boundary inner product.
    pub densities: Vec<Vec<f64>>,
    /// Relative eigenpair residuals from the dense solve.
    pub residuals: Vec<f64>,
    /// |nu_1(N) - nu_1(N/2)|, when the coarse solve is admissible.
    pub refinement_gap: Option<f64>,
    /// Set when the refinement gap exceeds 1e-4.
    pub accuracy_warning: bool,
}

impl SteklovSpectrum {
    /// First eigenvalue above the constant-mode deflation threshold.
    pub fn nu1(&self) -> Result<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .find(|v| *v > DEFLATION_THRESHOLD)
            .ok_or_else(|| Error::Conditioning("no nonzero eigenvalue among the computed modes".into()))
    }

    /// Nonzero eigenvalues in ascending order.
    pub fn nonzero(&self) -> Vec<f64> {
        self.eigenvalues.iter().copied().filter(|v| *v > DEFLATION_THRESHOLD).collect()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "N": self.n,
            "eigenvalues": self.eigenvalues,
            "refinement_gap": self.refinement_gap,
            "accuracy_warning": self.accuracy_warning,
        })
    }

    /// CSV of the eigendensities: theta, then one column per mode.
    pub fn densities_csv(&self) -> String {
        let mut out = String::from("theta");
        for k in 0..self.densities.len() {
            out.push_str(&format!(",mode{k}"));
        }
        out.push('\n');
        for j in 0..self.n {
            out.push_str(&format!("{}", 2.0 * PI * j as f64 / self.n as f64));
            for d in &self.densities {
                out.push_str(&format!(",{}", d[j]));
            }
            out.push('\n');
        }
        out
    }
}

/// Weighted Galerkin pair (A, B) for the scaled domain, plus the scale
/// factor and the relative asymmetry of A before symmetrization.
/// A = M_s DtN (symmetrized), B = M_s diag(w), M_s the arclength weights.
fn weighted_dtn_matrices(
    domain: &WeightedPlanarDomain,
    n_nodes: usize,
) -> Result<(DMatrix<f64>, DMatrix<f64>, f64, f64)> {
    // Scale so the curve fits well inside the unit disk; the single-layer
    // operator is positive definite for domains of logarithmic capacity
    // below one, and eigenvalues scale back exactly.
    let (_, rho_max) = domain.rho.min_max_on_grid(2048);
    let scale = 0.5 / rho_max;
    let scaled = FourierSeries {
        a0: domain.rho.a0 * scale,
        a: domain.rho.a.iter().map(|v| v * scale).collect(),
        b: domain.rho.b.iter().map(|v| v * scale).collect(),
    };

    let curve = nystrom::sample_curve(&scaled, n_nodes);
    let s_mat = nystrom::single_layer(&curve);
    let mut kp = nystrom::adjoint_double_layer(&curve);
    for i in 0..n_nodes {
        kp[(i, i)] += 0.5;
    }
    // DtN = (K' + I/2) S^{-1}: solve S^T X = (K' + I/2)^T.
    let lu = s_mat.transpose().lu();
    let dtn_t = lu
        .solve(&kp.transpose())
        .ok_or_else(|| Error::Conditioning("single-layer matrix is singular".into()))?;
    let dtn = dtn_t.transpose();

    let h = 2.0 * PI / n_nodes as f64;
    let mut a = DMatrix::zeros(n_nodes, n_nodes);
    for i in 0..n_nodes {
        for j in 0..n_nodes {
            a[(i, j)] = h * curve.speed[i] * dtn[(i, j)];
        }
    }
    let asym = (&a - a.transpose()).norm() / a.norm();
    if asym > 1e-8 {
        return Err(Error::Conditioning(format!(
            "discretized Dirichlet-to-Neumann operator asymmetric at {asym:e}; boundary under-resolved"
        )));
    }
    let a = (&a + a.transpose()) * 0.5;
    let b = DMatrix::from_fn(n_nodes, n_nodes, |i, j| {
        if i == j {
            h * curve.speed[i] * domain.weight.eval(curve.t[i])
        } else {
            0.0
        }
    });
    Ok((a, b, scale, asym))
}

fn solve_once(domain: &WeightedPlanarDomain, modes: usize, n_nodes: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> {
    let (a, b, scale, _) = weighted_dtn_matrices(domain, n_nodes)?;
    let (vals, vecs) = sym_generalized_eig(&a, &b, modes)?;
    // Undo the domain scaling and fix normalization/sign of the densities.
    let vals: Vec<f64> = vals.iter().map(|v| v * scale).collect();
    let mut densities = Vec::with_capacity(vecs.len());
    let mut residuals = Vec::with_capacity(vecs.len());
    let a_norm = a.norm();
    for (k, v) in vecs.iter().enumerate() {
        let bnorm = (v.transpose() * &b * v)[(0, 0)].sqrt();
        let mut d: Vec<f64> = v.iter().map(|x| x / bnorm).collect();
        let imax = d
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0);
        if d[imax] < 0.0 {
            for x in d.iter_mut() {
                *x = -*x;
            }
        }
        let r = (&a * v - &b * v * (vals[k] / scale)).norm() / a_norm;
        densities.push(d);
        residuals.push(r);
    }
    Ok((vals, densities, residuals))
}

/// Low spectrum of the weighted Steklov problem, by a spectrally accurate
/// boundary-integral discretization with N nodes.
///
/// Requires N even, N >= 8 x (highest stored Fourier mode of rho and w), and
/// modes < N/2. Convergence is estimated by re-solving at N/2; a refinement
/// gap above 1e-4 on nu_1 sets the accuracy warning.
pub fn dtn_spectrum(domain: &WeightedPlanarDomain, modes: usize, n_nodes: usize) -> Result<SteklovSpectrum> {
    let max_mode = domain.rho.max_mode().max(domain.weight.max_mode());
    if n_nodes % 2 != 0 || n_nodes < 16 {
        return Err(Error::Input(format!("discretization size must be even and >= 16, got {n_nodes}")));
    }
    if n_nodes < 8 * max_mode {
        return Err(Error::Input(format!(
            "N = {n_nodes} cannot resolve boundary data with {max_mode} Fourier modes (need N >= {})",
            8 * max_mode
        )));
    }
    if modes == 0 || modes >= n_nodes / 2 {
        return Err(Error::Input(format!("modes must lie in 1..N/2, got {modes}")));
    }

    let (vals, densities, residuals) = solve_once(domain, modes, n_nodes)?;

    // Type invariants: a near-zero lowest eigenvalue with constant density.
    if vals[0].abs() > 1e-9 {
        return Err(Error::Conditioning(format!(
            "lowest eigenvalue {:e} is not the constant mode",
            vals[0]
        )));
    }
    let d0 = &densities[0];
    let mean = d0.iter().sum::<f64>() / d0.len() as f64;
    let dev = d0.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if dev > 1e-7 * mean.abs() {
        return Err(Error::Conditioning(format!(
            "constant-mode eigendensity deviates by {dev:e} relative"
        )));
    }

    let coarse = n_nodes / 2;
    let refinement_gap = if coarse >= 16.max(8 * max_mode.max(1)) {
        let (coarse_vals, _, _) = solve_once(domain, modes.min(coarse / 2 - 1).max(2), coarse)?;
        let fine_nu1 = vals.iter().copied().find(|v| *v > DEFLATION_THRESHOLD);
        let coarse_nu1 = coarse_vals.iter().copied().find(|v| *v > DEFLATION_THRESHOLD);
        match (fine_nu1, coarse_nu1) {
            (Some(f), Some(c)) => Some((f - c).abs()),
            _ => None,
        }
    } else {
        None
    };
    let accuracy_warning = refinement_gap.map(|g| g > 1e-4).unwrap_or(true);

    Ok(SteklovSpectrum {
        n: n_nodes,
        eigenvalues: vals,
        densities,
        residuals,
        refinement_gap,
        accuracy_warning,
    })
}

/// Conformal radial coordinate s(r) with s'/s = 1/psi and s(r)/r -> 1 at the
/// pole, evaluated for an arbitrary positive warp by
/// s(r) = r exp(integral of (1/psi(t) - 1/t) dt).
fn conformal_radius_generic<F: Fn(f64) -> f64>(psi: F, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    // (t - psi)/(t psi) ~ -c3 t near 0; integrate the series below t0 and
    // quadrature above it.
    let t0 = 1e-3_f64.min(r);
    let h = 1e-2;
    let c3 = (psi(h) / h - 1.0) / (h * h);
    let series_part = -c3 * t0 * t0 / 2.0;
    let spec = QuadratureSpec { abs_tol: 1e-14, rel_tol: 1e-12, max_depth: 40, singularity_exponent: None };
    let tail = if r > t0 {
        integrate(|t| (t - psi(t)) / (t * psi(t)), t0, r, &spec)?
    } else {
        0.0
    };
    Ok(r * (series_part + tail).exp())
}

fn conformal_radius(ambient: &Ambient2, r: f64) -> Result<f64> {
    match ambient {
        Ambient2::Form(s) => {
            let d = s.delta();
            Ok(if d > 0.0 { 2.0 / d * (d * r / 2.0).tanh() } else { r })
        }
        Ambient2::Warped(w) => match w.warp() {
            Warp::SinhScaled { alpha } => Ok(2.0 / alpha * (alpha * r / 2.0).tanh()),
            _ => conformal_radius_generic(|t| w.psi(t), r),
        },
    }
}

/// Conformal planar model of a curved star domain: geodesic polar (r, theta)
/// maps to planar polar (s(r), theta) with s'/s = 1/psi, and the boundary
/// weight is the conformal factor w = psi(rho)/s(rho) on the boundary.
///
/// For the hyperbolic plane this is the Poincare disk up to the s(r)/r -> 1
/// normalization; a geodesic ball of radius R becomes the planar disk of
/// radius 2 tanh(R/2) with constant weight cosh^2(R/2).
pub fn conformal_model(domain: &StarDomain) -> Result<WeightedPlanarDomain> {
    let ambient = domain.ambient();
    let rho = domain.rho().clone();
    let planar = FourierSeries::fit_periodic(
        |theta| conformal_radius(ambient, rho.eval(theta)).unwrap_or(f64::NAN),
        FIT_TAIL_TOL,
        256,
    )?;
    let weight = FourierSeries::fit_periodic(
        |theta| {
            let r = rho.eval(theta);
            let s = conformal_radius(ambient, r).unwrap_or(f64::NAN);
            ambient.psi(r) / s
        },
        FIT_TAIL_TOL,
        256,
    )?;
    WeightedPlanarDomain::new(planar, weight)
}

/// First nonzero Steklov eigenvalue of a curved star domain, through the
/// conformal model and the boundary-integral solver.
pub fn nu1_domain(domain: &StarDomain, n_nodes: usize) -> Result<f64> {
    let planar = conformal_model(domain)?;
    let spectrum = dtn_spectrum(&planar, 4, n_nodes)?;
    spectrum.nu1()
}
