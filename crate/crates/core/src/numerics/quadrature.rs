//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! A 7-15 Gauss-Kronrod panel supplies the local estimate and error; the
//! driver repeatedly bisects the segment with the largest error until the
//! summed error estimate meets the requested tolerance. Integrands with an
//! algebraic singularity at the lower endpoint are regularized by the
//! substitution r = a + u^s before panels are laid down.

use crate::error::{Error, Result};

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections of any single segment.
    pub max_depth: u32,
    /// Exponent p of an integrable singularity f ~ (r - a)^p at the lower
    /// endpoint, p > -1. `None` means the integrand is bounded.
    pub singularity_exponent: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            max_depth: 32,
            singularity_exponent: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Input("quadrature tolerances must be positive".into()));
        }
        if self.max_depth > 40 {
            return Err(Error::Input("quadrature max_depth must be <= 40".into()));
        }
        if let Some(p) = self.singularity_exponent {
            if !(p > -1.0) {
                return Err(Error::Input(format!(
                    "endpoint singularity exponent must exceed -1, got {p}"
                )));
            }
        }
        Ok(())
    }
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. QUADPACK dqk15 constants.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 7-15 panel on [a, b]. Returns (integral, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 14];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[j + 7] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[j + 7] - mean).abs());
    }

    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (res_kronrod * half, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    // Seed with a few panels so the global tolerance sees a sane first estimate.
    let n0 = 4usize;
    let mut segs: Vec<Segment> = Vec::with_capacity(64);
    for i in 0..n0 {
        let sa = a + (b - a) * i as f64 / n0 as f64;
        let sb = a + (b - a) * (i + 1) as f64 / n0 as f64;
        let (value, error) = qk15(f, sa, sb);
        segs.push(Segment { a: sa, b: sb, value, error, depth: 0 });
    }

    const MAX_SEGMENTS: usize = 20_000;
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let total_err: f64 = segs.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Domain("integrand produced a non-finite value".into()));
        }
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }

        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let seg = segs[worst];
        if seg.depth >= spec.max_depth || segs.len() >= MAX_SEGMENTS {
            return Err(Error::Convergence {
                what: format!(
                    "quadrature error estimate {total_err:e} above tolerance after depth {}",
                    seg.depth
                ),
                best: total,
            });
        }
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = qk15(f, seg.a, mid);
        let (v2, e2) = qk15(f, mid, seg.b);
        segs[worst] = Segment { a: seg.a, b: mid, value: v1, error: e1, depth: seg.depth + 1 };
        segs.push(Segment { a: mid, b: seg.b, value: v2, error: e2, depth: seg.depth + 1 });
    }
}

/// Adaptive estimate of the integral of `f` over [a, b].
///
/// The result satisfies `err <= max(abs_tol, rel_tol * |I|)` as estimated by
/// the Kronrod error indicator; failure to reach the tolerance within
/// `max_depth` bisections yields [`Error::Convergence`] carrying the best
/// estimate. Deterministic for fixed inputs.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Input("integration limits must be finite".into()));
    }
    if a > b {
        return Err(Error::Input(format!("integration limits out of order: {a} > {b}")));
    }
    if a == b {
        return Ok(0.0);
    }

    match spec.singularity_exponent {
        None => adaptive(&f, a, b, spec),
        Some(p) => {
            // r = a + u^s with even s chosen so the transformed integrand
            // u^(s(1+p)-1) g(u^s) has a nonnegative exponent at u = 0.
            let s = 2.0 * (1.0 / (2.0 * (1.0 + p))).ceil().max(1.0);
            let u_max = (b - a).powf(1.0 / s);
            let g = |u: f64| {
                if u == 0.0 {
                    return 0.0;
                }
                f(a + u.powf(s)) * s * u.powf(s - 1.0)
            };
            adaptive(&g, 0.0, u_max, spec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear() {
        let v = integrate(|r| r, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn sinh_closed_form() {
        for big_r in [0.5, 1.0, 2.0, 4.0] {
            let v = integrate(f64::sinh, 0.0, big_r, &QuadratureSpec::default()).unwrap();
            let exact = big_r.cosh() - 1.0;
            assert!((v - exact).abs() <= 1e-12 * exact.max(1.0), "R={big_r}: {v} vs {exact}");
        }
    }

    #[test]
    fn inverse_sqrt_with_hint() {
        let spec = QuadratureSpec {
            singularity_exponent: Some(-0.5),
            ..Default::default()
        };
        let v = integrate(|r| r.powf(-0.5), 0.0, 1.0, &spec).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn unbounded_integrand_without_hint_reports_best_estimate() {
        let r = integrate(|r| r.powf(-0.5), 1e-300, 1.0, &QuadratureSpec::default());
        match r {
            Err(Error::Convergence { best, .. }) => assert!((best - 2.0).abs() < 1e-2),
            Ok(v) => assert!((v - 2.0).abs() < 1e-10),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn oscillatory() {
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI * 8.0, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-11);
    }
}
