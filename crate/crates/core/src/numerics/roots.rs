//! Bracketed scalar root finding (Brent's method) and a small damped Newton
//! solver for two-dimensional systems.

use crate::error::{Error, Result};

/// Bracket and tolerances for [`find_root`].
#[derive(Debug, Clone)]
pub struct RootSpec {
    pub lo: f64,
    pub hi: f64,
    /// Absolute tolerance on the abscissa.
    pub tol: f64,
    pub max_iter: u32,
}

impl RootSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        RootSpec { lo, hi, tol: 1e-13, max_iter: 200 }
    }
}

/// Brent's method: inverse-quadratic/secant steps safeguarded by bisection.
/// The returned abscissa always lies inside the initial bracket.
pub fn find_root<F: Fn(f64) -> f64>(f: F, spec: &RootSpec) -> Result<f64> {
    if !(spec.lo < spec.hi) {
        return Err(Error::Input(format!("bracket out of order: [{}, {}]", spec.lo, spec.hi)));
    }
    if !(spec.tol > 0.0) {
        return Err(Error::Input("root tolerance must be positive".into()));
    }
    let mut a = spec.lo;
    let mut b = spec.hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::Domain("function not finite at bracket endpoints".into()));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}]: f(lo)={fa:e}, f(hi)={fb:e}"
        )));
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..spec.max_iter {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * spec.tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Attempt inverse quadratic interpolation / secant.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::Domain(format!("function not finite at {b}")));
        }
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::Convergence {
        what: format!("find_root did not converge in {} iterations", spec.max_iter),
        best: b,
    })
}

/// Damped Newton iteration for F: R^2 -> R^2 with a finite-difference Jacobian.
///
/// Steps are scaled starting from `damping` and halved until the residual
/// norm decreases; the iteration stops once ||F|| <= tol.
pub fn newton_system<F: Fn([f64; 2]) -> [f64; 2]>(
    f: F,
    x0: [f64; 2],
    tol: f64,
    max_iter: u32,
    damping: f64,
) -> Result<[f64; 2]> {
    if !(tol > 0.0) || !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::Input("newton_system requires tol > 0 and damping in (0, 1]".into()));
    }
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let mut x = x0;
    let mut fx = f(x);
    let mut res = norm(fx);

    for iter in 0..max_iter {
        if res <= tol {
            return Ok(x);
        }
        // Finite-difference Jacobian, column by column.
        let mut jac = [[0.0f64; 2]; 2];
        for col in 0..2 {
            let h = 1e-7 * x[col].abs().max(1.0);
            let mut xp = x;
            xp[col] += h;
            let fp = f(xp);
            jac[0][col] = (fp[0] - fx[0]) / h;
            jac[1][col] = (fp[1] - fx[1]) / h;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::Convergence {
                what: format!("newton_system: singular Jacobian at iteration {iter}"),
                best: res,
            });
        }
        let step = [
            -(jac[1][1] * fx[0] - jac[0][1] * fx[1]) / det,
            -(-jac[1][0] * fx[0] + jac[0][0] * fx[1]) / det,
        ];

        let mut lambda = damping;
        let mut accepted = false;
        for _ in 0..50 {
            let xn = [x[0] + lambda * step[0], x[1] + lambda * step[1]];
            let fn_ = f(xn);
            let rn = norm(fn_);
            if rn < res || rn <= tol {
                x = xn;
                fx = fn_;
                res = rn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::Convergence {
                what: format!("newton_system: backtracking stalled at iteration {iter}, residual {res:e}"),
                best: res,
            });
        }
    }
    if res <= tol {
        Ok(x)
    } else {
        Err(Error::Convergence {
            what: format!("newton_system: {max_iter} iterations exhausted, residual {res:e}"),
            best: res,
        })
    }
}
