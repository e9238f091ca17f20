//! Nystrom discretization of the layer potentials of the Laplacian on a
//! smooth closed planar curve.
//!
//! The single-layer kernel -(1/2pi) ln |x - y| is split into the periodic
//! logarithm ln(4 sin^2((t - tau)/2)), integrated with the trigonometric
//! product-quadrature weights
//!
//!   R_j(t_i) = -(2 pi/n) sum_{m=1}^{n-1} cos(m (t_i - t_j))/m
//!              - (pi/n^2) cos(n (t_i - t_j)),     N = 2n nodes,
//!
//! plus a smooth remainder handled by the trapezoid rule; the adjoint
//! double-layer kernel is continuous on an analytic curve and goes straight
//! to the trapezoid rule, with the curvature limit on the diagonal. Both
//! discretizations converge spectrally for analytic data.

use nalgebra::{Complex, DMatrix};

use crate::fourier::FourierSeries;

type C = Complex<f64>;

/// Curve samples at the N uniform parameter nodes.
pub(crate) struct CurveData {
    pub t: Vec<f64>,
    pub z: Vec<C>,
    pub z_prime: Vec<C>,
    /// |z'| at the nodes.
    pub speed: Vec<f64>,
    pub z_second: Vec<C>,
}

pub(crate) fn sample_curve(rho: &FourierSeries, n_nodes: usize) -> CurveData {
    let mut t = Vec::with_capacity(n_nodes);
    let mut z = Vec::with_capacity(n_nodes);
    let mut z_prime = Vec::with_capacity(n_nodes);
    let mut speed = Vec::with_capacity(n_nodes);
    let mut z_second = Vec::with_capacity(n_nodes);
    for j in 0..n_nodes {
        let tj = 2.0 * std::f64::consts::PI * j as f64 / n_nodes as f64;
        let r = rho.eval(tj);
        let dr = rho.eval_deriv(tj);
        let ddr = rho.eval_second_deriv(tj);
        let e = C::from_polar(1.0, tj);
        let zj = e * C::new(r, 0.0);
        let zpj = e * C::new(dr, r);
        let zsj = e * C::new(ddr - r, 2.0 * dr);
        t.push(tj);
        z.push(zj);
        z_prime.push(zpj);
        speed.push(zpj.norm());
        z_second.push(zsj);
    }
    CurveData { t, z, z_prime, speed, z_second }
}

/// Kress weights R_k for the periodic-log quadrature, index k = (i - j) mod N.
fn log_weights(n_nodes: usize) -> Vec<f64> {
    let n = n_nodes / 2;
    let mut r = Vec::with_capacity(n_nodes);
    for k in 0..n_nodes {
        let angle = std::f64::consts::PI * k as f64 / n as f64;
        let mut sum = 0.0;
        for m in 1..n {
            sum += (m as f64 * angle).cos() / m as f64;
        }
        let last = (n as f64 * angle).cos();
        r.push(-2.0 * std::f64::consts::PI / n as f64 * sum - std::f64::consts::PI / (n as f64 * n as f64) * last);
    }
    r
}

/// Single-layer matrix: (S sigma)(t_i) = -(1/2pi) contour integral of
/// ln|z_i - y| sigma(y) ds(y), acting on nodal values of sigma.
pub(crate) fn single_layer(curve: &CurveData) -> DMatrix<f64> {
    let n_nodes = curve.t.len();
    let rk = log_weights(n_nodes);
    let h = 2.0 * std::f64::consts::PI / n_nodes as f64;
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    DMatrix::from_fn(n_nodes, n_nodes, |i, j| {
        let smooth = if i == j {
            curve.speed[i].ln()
        } else {
            let dz = (curve.z[i] - curve.z[j]).norm();
            let dt = (curve.t[i] - curve.t[j]) / 2.0;
            (dz / (2.0 * dt.sin().abs())).ln()
        };
        let k = (i + n_nodes - j) % n_nodes;
        -inv2pi * (0.5 * rk[k] + h * smooth) * curve.speed[j]
    })
}

/// Adjoint double-layer matrix: kernel dPhi/dn(x) with the curvature value
/// on the diagonal.
pub(crate) fn adjoint_double_layer(curve: &CurveData) -> DMatrix<f64> {
    let n_nodes = curve.t.len();
    let h = 2.0 * std::f64::consts::PI / n_nodes as f64;
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    DMatrix::from_fn(n_nodes, n_nodes, |i, j| {
        if i == j {
            let im = (curve.z_second[i] * curve.z_prime[i].conj()).im;
            -h * im / (4.0 * std::f64::consts::PI * curve.speed[i] * curve.speed[i])
        } else {
            let d = curve.z[i] - curve.z[j];
            // outward normal at z_i for a counterclockwise curve
            let normal = -C::i() * curve.z_prime[i] / C::new(curve.speed[i], 0.0);
            let dot = d.re * normal.re + d.im * normal.im;
            -h * inv2pi * dot / d.norm_sqr() * curve.speed[j]
        }
    })
}
