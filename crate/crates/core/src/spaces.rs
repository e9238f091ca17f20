//! Ambient geometries and their radial data.
//!
//! Three model families are supported: rank-1 symmetric spaces with the
//! standard metric normalization (sectional curvature in [-4, -1] for the
//! noncompact family, [1, 4] for the compact one), constant-curvature space
//! forms with curvature k = -delta^2 <= 0, and rotationally symmetric warped
//! models dr^2 + psi(r)^2 dtheta^2 with a nonpositive radial curvature bound.
//!
//! Every operation is a pure function of the immutable space description:
//! the volume density phi along radial geodesics, the mean curvature
//! phi'/phi of geodesic spheres, the first sphere eigenvalue lambda_1(S(r)),
//! and sphere/ball volumes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, CubicSpline, QuadratureSpec, RootSpec};
use crate::report::{CheckResult, VerificationReport};

/// Base field of a rank-1 symmetric space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Real,
    Complex,
    Quaternion,
    Cayley,
}

impl FieldKind {
    /// Real dimension of the field: 1, 2, 4 or 8.
    pub fn real_dim(self) -> u32 {
        match self {
            FieldKind::Real => 1,
            FieldKind::Complex => 2,
            FieldKind::Quaternion => 4,
            FieldKind::Cayley => 8,
        }
    }

    fn code(self) -> &'static str {
        match self {
            FieldKind::Real => "R",
            FieldKind::Complex => "C",
            FieldKind::Quaternion => "H",
            FieldKind::Cayley => "Ca",
        }
    }

    fn from_code(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(FieldKind::Real),
            "C" => Ok(FieldKind::Complex),
            "H" => Ok(FieldKind::Quaternion),
            "Ca" => Ok(FieldKind::Cayley),
            other => Err(Error::Input(format!("unknown field code {other:?}, expected R|C|H|Ca"))),
        }
    }
}

/// Curvature sign of a rank-1 symmetric space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSign {
    Compact,
    Noncompact,
}

/// A rank-1 symmetric space over `field` of base dimension `n`, so that the
/// real dimension is d = k n with k the real dimension of the field. The
/// metric normalization is fixed: -4 <= K <= -1 (noncompact) or 1 <= K <= 4
/// (compact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneSpace {
    field: FieldKind,
    n: u32,
    sign: CurvatureSign,
}

impl RankOneSpace {
    pub fn new(field: FieldKind, n: u32, sign: CurvatureSign) -> Result<Self> {
        if field == FieldKind::Cayley && n != 2 {
            return Err(Error::InvalidModel(format!("the Cayley family requires n = 2, got n = {n}")));
        }
        if n == 0 || field.real_dim() * n < 2 {
            return Err(Error::InvalidModel(format!("real dimension k*n must be >= 2, got {}", field.real_dim() * n)));
        }
        Ok(RankOneSpace { field, n, sign })
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn base_dim(&self) -> u32 {
        self.n
    }

    pub fn sign(&self) -> CurvatureSign {
        self.sign
    }

    /// Real dimension d = k n.
    pub fn real_dim(&self) -> u32 {
        self.field.real_dim() * self.n
    }

    /// Largest radius at which the volume density stays positive.
    fn density_window(&self) -> f64 {
        match (self.sign, self.field.real_dim()) {
            (CurvatureSign::Noncompact, _) => f64::INFINITY,
            (CurvatureSign::Compact, 1) => PI,
            (CurvatureSign::Compact, _) => PI / 2.0,
        }
    }

    /// Validity window of the lambda_1(S(r)) formula. For compact spaces over
    /// fields with k > 1 this is arctan(sqrt((kn+1)/(k-1))); for round spheres
    /// (k = 1) the formula holds on the whole density window.
    pub fn lambda_window(&self) -> f64 {
        let k = self.field.real_dim() as f64;
        match self.sign {
            CurvatureSign::Noncompact => f64::INFINITY,
            CurvatureSign::Compact if k == 1.0 => PI,
            CurvatureSign::Compact => {
                let kn = k * self.n as f64;
                ((kn + 1.0) / (k - 1.0)).sqrt().atan()
            }
        }
    }
}

/// Simply connected space form of constant curvature k = -delta^2 <= 0
/// (delta = 0 means flat) and dimension n >= 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    delta: f64,
    n: u32,
}

impl SpaceForm {
    pub fn new(delta: f64, n: u32) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidModel(format!("delta must be a finite nonnegative real, got {delta}")));
        }
        if n < 2 {
            return Err(Error::InvalidModel(format!("space form dimension must be >= 2, got {n}")));
        }
        Ok(SpaceForm { delta, n })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// Sectional curvature k = -delta^2.
    pub fn curvature(&self) -> f64 {
        -self.delta * self.delta
    }
}

/// sin_delta(r): the curvature -delta^2 solution of the Jacobi equation,
/// sinh(delta r)/delta for delta > 0 and r for delta = 0.
pub fn sin_delta(delta: f64, r: f64) -> f64 {
    if delta > 0.0 {
        (delta * r).sinh() / delta
    } else {
        r
    }
}

/// Derivative of [`sin_delta`] in r: cosh(delta r) for delta > 0, else 1.
pub fn cos_delta(delta: f64, r: f64) -> f64 {
    if delta > 0.0 {
        (delta * r).cosh()
    } else {
        1.0
    }
}

/// User-supplied warp with optional analytic derivatives.
pub struct CustomWarp {
    pub psi: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub dpsi: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    pub d2psi: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
}

/// Warp function of a rotationally symmetric model, psi(0) = 0, psi'(0) = 1.
#[derive(Clone)]
pub enum Warp {
    /// psi(r) = sinh(alpha r)/alpha, radial curvature -alpha^2.
    SinhScaled { alpha: f64 },
    /// Tabulated (r, psi) samples interpolated by a natural cubic spline.
    Table(Arc<CubicSpline>),
    /// Arbitrary callable; derivatives fall back to finite differences when
    /// not supplied.
    Custom(Arc<CustomWarp>),
}

impl fmt::Debug for Warp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warp::SinhScaled { alpha } => write!(f, "SinhScaled {{ alpha: {alpha} }}"),
            Warp::Table(_) => write!(f, "Table(..)"),
            Warp::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Warp {
    pub fn sinh_scaled(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidModel(format!("sinh_scaled warp needs alpha > 0, got {alpha}")));
        }
        Ok(Warp::SinhScaled { alpha })
    }

    pub fn table(points: &[(f64, f64)]) -> Result<Self> {
        let (x, y): (Vec<f64>, Vec<f64>) = points.iter().cloned().unzip();
        if x.first() != Some(&0.0) || y.first() != Some(&0.0) {
            return Err(Error::InvalidModel("tabulated warp must start at (0, 0)".into()));
        }
        Ok(Warp::Table(Arc::new(CubicSpline::new(x, y)?)))
    }

    /// Parse CSV text with columns (r, psi). A non-numeric first line is
    /// treated as a header.
    pub fn table_from_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (c0, c1) = (cols.next(), cols.next());
            match (c0.and_then(|s| s.parse::<f64>().ok()), c1.and_then(|s| s.parse::<f64>().ok())) {
                (Some(r), Some(p)) => points.push((r, p)),
                _ if i == 0 => continue, // header
                _ => return Err(Error::Input(format!("bad CSV warp row {}: {line:?}", i + 1))),
            }
        }
        Warp::table(&points)
    }

    fn psi_raw(&self, r: f64) -> f64 {
        match self {
            Warp::SinhScaled { alpha } => (alpha * r).sinh() / alpha,
            Warp::Table(s) => s.eval(r),
            Warp::Custom(c) => (c.psi)(r),
        }
    }

    /// Odd extension psi(-r) = -psi(r), used by difference stencils near 0.
    fn psi_odd(&self, r: f64) -> f64 {
        if r >= 0.0 {
            self.psi_raw(r)
        } else {
            -self.psi_raw(-r)
        }
    }

    fn dpsi(&self, r: f64) -> f64 {
        match self {
            Warp::SinhScaled { alpha } => (alpha * r).cosh(),
            Warp::Table(s) => s.eval_deriv(r),
            Warp::Custom(c) => match &c.dpsi {
                Some(d) => d(r),
                None => {
                    let h = 1e-6f64.max(1e-6 * r);
                    (self.psi_odd(r + h) - self.psi_odd(r - h)) / (2.0 * h)
                }
            },
        }
    }

    fn d2psi(&self, r: f64) -> f64 {
        match self {
            Warp::SinhScaled { alpha } => alpha * (alpha * r).sinh(),
            Warp::Table(s) => s.eval_second_deriv(r),
            Warp::Custom(c) => match &c.d2psi {
                Some(d) => d(r),
                None => {
                    // Fourth-order stencil; h balances truncation and roundoff
                    // so psi'' carries ~1e-10 absolute error.
                    let h = 2e-3 * r.abs().max(1.0);
                    (-self.psi_odd(r + 2.0 * h) + 16.0 * self.psi_odd(r + h) - 30.0 * self.psi_odd(r)
                        + 16.0 * self.psi_odd(r - h)
                        - self.psi_odd(r - 2.0 * h))
                        / (12.0 * h * h)
                }
            },
        }
    }
}

/// Rotationally symmetric model dr^2 + psi(r)^2 g_{S^{n-1}} with an intended
/// radial curvature bound k <= 0 (k = -delta^2 or 0).
#[derive(Debug, Clone)]
pub struct WarpedModel {
    n: u32,
    warp: Warp,
    curvature_bound: f64,
}

impl WarpedModel {
    pub fn new(n: u32, warp: Warp, curvature_bound: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModel(format!("warped model dimension must be >= 2, got {n}")));
        }
        if !(curvature_bound <= 0.0) {
            return Err(Error::InvalidModel(format!(
                "curvature bound must be <= 0, got {curvature_bound}"
            )));
        }
        Ok(WarpedModel { n, warp, curvature_bound })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn warp(&self) -> &Warp {
        &self.warp
    }

    pub fn curvature_bound(&self) -> f64 {
        self.curvature_bound
    }

    pub fn psi(&self, r: f64) -> f64 {
        self.warp.psi_raw(r)
    }

    pub fn psi_prime(&self, r: f64) -> f64 {
        self.warp.dpsi(r)
    }

    pub fn psi_second(&self, r: f64) -> f64 {
        self.warp.d2psi(r)
    }

    /// Radial sectional curvature -psi''/psi at r.
    pub fn radial_curvature(&self, r: f64) -> Result<f64> {
        let p = self.psi(r);
        if !(p > 0.0) {
            return Err(Error::InvalidModel(format!("warp is not positive at r = {r}: psi = {p}")));
        }
        Ok(-self.psi_second(r) / p)
    }

    /// Verify -psi''/psi <= k on a grid over (0, r_max]. Passes when the worst
    /// excess over the bound is at most 1e-9.
    pub fn curvature_check(&self, r_max: f64, grid: usize) -> Result<VerificationReport> {
        if !(r_max > 0.0) || grid == 0 {
            return Err(Error::Input("curvature_check needs r_max > 0 and a nonempty grid".into()));
        }
        let k = self.curvature_bound;
        let mut worst = f64::NEG_INFINITY;
        let mut worst_r = 0.0;
        for i in 1..=grid {
            let r = r_max * i as f64 / grid as f64;
            let excess = self.radial_curvature(r)? - k;
            if excess > worst {
                worst = excess;
                worst_r = r;
            }
        }
        let check = CheckResult::new("radial_curvature_bound", worst <= 1e-9, -worst)
            .with_detail(format!("worst curvature excess {worst:e} at r = {worst_r}"));
        Ok(VerificationReport::new("curvature_check", vec![check]))
    }
}

/// Any supported ambient geometry.
#[derive(Debug, Clone)]
pub enum SpaceModel {
    RankOne(RankOneSpace),
    Form(SpaceForm),
    Warped(WarpedModel),
}

impl fmt::Display for SpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceModel::RankOne(s) => {
                let name = match (s.field, s.sign) {
                    (FieldKind::Real, CurvatureSign::Noncompact) => format!("RH{}", s.n),
                    (FieldKind::Real, CurvatureSign::Compact) => format!("S{}", s.n),
                    (FieldKind::Complex, CurvatureSign::Noncompact) => format!("CH{}", s.n),
                    (FieldKind::Complex, CurvatureSign::Compact) => format!("CP{}", s.n),
                    (FieldKind::Quaternion, CurvatureSign::Noncompact) => format!("HH{}", s.n),
                    (FieldKind::Quaternion, CurvatureSign::Compact) => format!("HP{}", s.n),
                    (FieldKind::Cayley, CurvatureSign::Noncompact) => "CaH2".to_string(),
                    (FieldKind::Cayley, CurvatureSign::Compact) => "CaP2".to_string(),
                };
                f.write_str(&name)
            }
            SpaceModel::Form(s) => {
                if s.delta == 0.0 {
                    write!(f, "R{}", s.n)
                } else if s.delta == 1.0 {
                    write!(f, "H{}", s.n)
                } else {
                    write!(f, "M(k={},n={})", s.curvature(), s.n)
                }
            }
            SpaceModel::Warped(w) => write!(f, "warped(n={})", w.n),
        }
    }
}

impl SpaceModel {
    pub fn rank_one(field: FieldKind, n: u32, sign: CurvatureSign) -> Result<Self> {
        Ok(SpaceModel::RankOne(RankOneSpace::new(field, n, sign)?))
    }

    pub fn hyperbolic_plane() -> Self {
        SpaceModel::Form(SpaceForm::new(1.0, 2).unwrap())
    }

    pub fn euclidean(n: u32) -> Result<Self> {
        Ok(SpaceModel::Form(SpaceForm::new(0.0, n)?))
    }

    pub fn space_form(delta: f64, n: u32) -> Result<Self> {
        Ok(SpaceModel::Form(SpaceForm::new(delta, n)?))
    }

    /// Real dimension of the manifold.
    pub fn real_dim(&self) -> u32 {
        match self {
            SpaceModel::RankOne(s) => s.real_dim(),
            SpaceModel::Form(s) => s.n,
            SpaceModel::Warped(w) => w.n,
        }
    }

    /// Upper end of the radius range on which radial data is defined
    /// (infinite for noncompact models).
    pub fn radius_window(&self) -> f64 {
        match self {
            SpaceModel::RankOne(s) => s.lambda_window().min(s.density_window()),
            SpaceModel::Form(_) | SpaceModel::Warped(_) => f64::INFINITY,
        }
    }

    fn check_radius(&self, r: f64, window: f64, what: &str) -> Result<()> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("{what}: radius must be finite and nonnegative, got {r}")));
        }
        if r >= window {
            return Err(Error::Domain(format!(
                "{what}: radius {r} outside the validity window (0, {window}) of {self}"
            )));
        }
        Ok(())
    }

    /// Volume density phi(r) along a radial geodesic; phi(0) = 0 and
    /// phi > 0 on the validity range.
    pub fn density(&self, r: f64) -> Result<f64> {
        match self {
            SpaceModel::RankOne(s) => {
                self.check_radius(r, s.density_window(), "density")?;
                let kn1 = (s.real_dim() - 1) as i32;
                let k1 = (s.field.real_dim() - 1) as i32;
                Ok(match s.sign {
                    CurvatureSign::Noncompact => r.sinh().powi(kn1) * r.cosh().powi(k1),
                    CurvatureSign::Compact => r.sin().powi(kn1) * r.cos().powi(k1),
                })
            }
            SpaceModel::Form(s) => {
                self.check_radius(r, f64::INFINITY, "density")?;
                Ok(sin_delta(s.delta, r).powi(s.n as i32 - 1))
            }
            SpaceModel::Warped(w) => {
                self.check_radius(r, f64::INFINITY, "density")?;
                let p = w.psi(r);
                if r > 0.0 && !(p > 0.0) {
                    return Err(Error::InvalidModel(format!("warp not positive at r = {r}")));
                }
                Ok(p.powi(w.n as i32 - 1))
            }
        }
    }

    /// Mean curvature Tr A(r) = phi'(r)/phi(r) of the geodesic sphere S(r),
    /// evaluated analytically.
    pub fn mean_curvature(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Err(Error::Pole(format!(
                "mean curvature diverges like (d-1)/r at the pole of {self}"
            )));
        }
        match self {
            SpaceModel::RankOne(s) => {
                self.check_radius(r, s.density_window(), "mean_curvature")?;
                let kn1 = (s.real_dim() - 1) as f64;
                let k1 = (s.field.real_dim() - 1) as f64;
                Ok(match s.sign {
                    CurvatureSign::Noncompact => kn1 / r.tanh() + k1 * r.tanh(),
                    CurvatureSign::Compact => kn1 / r.tan() - k1 * r.tan(),
                })
            }
            SpaceModel::Form(s) => {
                self.check_radius(r, f64::INFINITY, "mean_curvature")?;
                Ok((s.n - 1) as f64 * cos_delta(s.delta, r) / sin_delta(s.delta, r))
            }
            SpaceModel::Warped(w) => {
                self.check_radius(r, f64::INFINITY, "mean_curvature")?;
                let p = w.psi(r);
                if !(p > 0.0) {
                    return Err(Error::InvalidModel(format!("warp not positive at r = {r}")));
                }
                Ok((w.n - 1) as f64 * w.psi_prime(r) / p)
            }
        }
    }

    /// First nonzero Laplace eigenvalue lambda_1(S(r)) of the geodesic sphere.
    ///
    /// For rank-1 spaces this satisfies lambda_1(S(r)) = -d/dr Tr A(r); for
    /// compact spaces over C, H, Ca it is only valid on the arctan window.
    pub fn lambda1_sphere(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Err(Error::Pole(format!("lambda_1(S(r)) diverges at the pole of {self}")));
        }
        match self {
            SpaceModel::RankOne(s) => {
                self.check_radius(r, s.lambda_window(), "lambda1_sphere")?;
                let kn1 = (s.real_dim() - 1) as f64;
                let k1 = (s.field.real_dim() - 1) as f64;
                Ok(match s.sign {
                    CurvatureSign::Noncompact => kn1 / r.sinh().powi(2) - k1 / r.cosh().powi(2),
                    CurvatureSign::Compact => kn1 / r.sin().powi(2) + k1 / r.cos().powi(2),
                })
            }
            SpaceModel::Form(s) => {
                self.check_radius(r, f64::INFINITY, "lambda1_sphere")?;
                Ok((s.n - 1) as f64 / sin_delta(s.delta, r).powi(2))
            }
            SpaceModel::Warped(w) => {
                self.check_radius(r, f64::INFINITY, "lambda1_sphere")?;
                let p = w.psi(r);
                if !(p > 0.0) {
                    return Err(Error::InvalidModel(format!("warp not positive at r = {r}")));
                }
                Ok((w.n - 1) as f64 / (p * p))
            }
        }
    }

    /// Coefficient a in the expansion phi(r) = r^{d-1} (1 + a r^2 + O(r^4)),
    /// used by series branches near the pole.
    pub(crate) fn density_series_r2_coeff(&self) -> f64 {
        match self {
            SpaceModel::RankOne(s) => {
                let kn1 = (s.real_dim() - 1) as f64;
                let k1 = (s.field.real_dim() - 1) as f64;
                match s.sign {
                    CurvatureSign::Noncompact => kn1 / 6.0 + k1 / 2.0,
                    CurvatureSign::Compact => -kn1 / 6.0 - k1 / 2.0,
                }
            }
            SpaceModel::Form(s) => (s.n - 1) as f64 * s.delta * s.delta / 6.0,
            SpaceModel::Warped(w) => {
                // psi = r (1 + c3 r^2 + ...): estimate c3 from a small sample.
                let h = 1e-2;
                let c3 = (w.psi(h) / h - 1.0) / (h * h);
                (w.n - 1) as f64 * c3
            }
        }
    }

    /// Surface volume of the geodesic sphere S(r): omega_{d-1} phi(r).
    pub fn sphere_volume(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("sphere_volume needs r > 0, got {r}")));
        }
        Ok(unit_sphere_area(self.real_dim()) * self.density(r)?)
    }

    /// Volume of the geodesic ball B(r): omega_{d-1} * integral of phi.
    pub fn ball_volume(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("ball_volume needs r > 0, got {r}")));
        }
        self.check_radius(r, self.density_window_bound(), "ball_volume")?;
        self.ball_volume_in_range(r)
    }

    fn density_window_bound(&self) -> f64 {
        match self {
            SpaceModel::RankOne(s) => s.density_window(),
            _ => f64::INFINITY,
        }
    }

    fn ball_volume_in_range(&self, r: f64) -> Result<f64> {
        let spec = QuadratureSpec {
            abs_tol: 1e-300,
            rel_tol: 5e-13,
            max_depth: 40,
            singularity_exponent: None,
        };
        let integral = integrate(|t| self.density(t).unwrap_or(f64::NAN), 0.0, r, &spec)?;
        Ok(unit_sphere_area(self.real_dim()) * integral)
    }

    /// Radius R with ball_volume(R) = v, by bracketed root finding plus a
    /// Newton polish against sphere_volume.
    pub fn radius_for_volume(&self, v: f64) -> Result<f64> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("radius_for_volume needs a positive volume, got {v}")));
        }
        let window = self.density_window_bound();
        let hi = if window.is_finite() {
            let r_top = window * (1.0 - 1e-9);
            let v_top = self.ball_volume_in_range(r_top)?;
            if v > v_top * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "volume {v} exceeds the attainable ball volume {v_top} of {self}"
                )));
            }
            r_top
        } else {
            let mut hi = 1.0;
            while self.ball_volume_in_range(hi)? < v {
                hi *= 2.0;
                if hi > 600.0 {
                    return Err(Error::Domain(format!("volume {v} out of representable radius range")));
                }
            }
            hi
        };

        let spec = RootSpec { lo: 0.0, hi, tol: 1e-12 * hi.max(1.0), max_iter: 200 };
        let f = |r: f64| {
            if r <= 0.0 {
                return -v;
            }
            self.ball_volume_in_range(r).map(|b| b - v).unwrap_or(f64::NAN)
        };
        let mut r = find_root(f, &spec)?;
        // Two Newton steps drive the relative volume mismatch to ~1e-14.
        for _ in 0..2 {
            let dv = self.ball_volume_in_range(r)? - v;
            let s = self.sphere_volume(r)?;
            if s > 0.0 {
                r -= dv / s;
            }
        }
        let residual = (self.ball_volume_in_range(r)? - v).abs();
        if residual > 1e-12 * v {
            return Err(Error::Convergence {
                what: format!("radius_for_volume residual {residual:e} above 1e-12 * volume"),
                best: r,
            });
        }
        Ok(r)
    }

    /// Serialize the space description to the JSON schema used by the CLI.
    pub fn to_json_value(&self) -> Result<Value> {
        Ok(match self {
            SpaceModel::RankOne(s) => json!({
                "kind": "rank1",
                "field": s.field.code(),
                "n": s.n,
                "sign": match s.sign { CurvatureSign::Compact => "compact", CurvatureSign::Noncompact => "noncompact" },
            }),
            SpaceModel::Form(s) => json!({
                "kind": "spaceform",
                "delta": s.delta,
                "n": s.n,
            }),
            SpaceModel::Warped(w) => match &w.warp {
                Warp::SinhScaled { alpha } => json!({
                    "kind": "warped",
                    "n": w.n,
                    "k": w.curvature_bound,
                    "warp": "sinh_scaled",
                    "alpha": alpha,
                }),
                Warp::Table(_) => {
                    return Err(Error::Unsupported(
                        "serializing tabulated warps back to JSON is not supported; keep the source CSV".into(),
                    ))
                }
                Warp::Custom(_) => {
                    return Err(Error::Unsupported("custom warp closures are not serializable".into()))
                }
            },
        })
    }

    /// Parse a space description from its JSON object form.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Input("space JSON must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Input("space JSON needs a string \"kind\"".into()))?;
        let get_u32 = |key: &str| -> Result<u32> {
            obj.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as u32)
                .ok_or_else(|| Error::Input(format!("space JSON needs integer \"{key}\"")))
        };
        match kind {
            "rank1" => {
                let field = FieldKind::from_code(
                    obj.get("field")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Input("rank1 space needs \"field\"".into()))?,
                )?;
                let sign = match obj.get("sign").and_then(Value::as_str) {
                    Some("compact") => CurvatureSign::Compact,
                    Some("noncompact") | None => CurvatureSign::Noncompact,
                    Some(other) => return Err(Error::Input(format!("unknown sign {other:?}"))),
                };
                SpaceModel::rank_one(field, get_u32("n")?, sign)
            }
            "spaceform" => {
                let delta = obj
                    .get("delta")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::Input("spaceform needs \"delta\"".into()))?;
                SpaceModel::space_form(delta, get_u32("n")?)
            }
            "warped" => {
                let n = get_u32("n")?;
                let k = obj.get("k").and_then(Value::as_f64).unwrap_or(0.0);
                let warp = match obj.get("warp").and_then(Value::as_str) {
                    Some("sinh_scaled") => {
                        let alpha = obj
                            .get("alpha")
                            .and_then(Value::as_f64)
                            .ok_or_else(|| Error::Input("sinh_scaled warp needs \"alpha\"".into()))?;
                        Warp::sinh_scaled(alpha)?
                    }
                    Some("table") => {
                        let pts = obj
                            .get("points")
                            .and_then(Value::as_array)
                            .ok_or_else(|| Error::Input("table warp needs \"points\": [[r, psi], ...]".into()))?;
                        let mut points = Vec::with_capacity(pts.len());
                        for p in pts {
                            let row = p.as_array().filter(|r| r.len() == 2);
                            let row = row.ok_or_else(|| Error::Input("warp table rows must be [r, psi]".into()))?;
                            points.push((
                                row[0].as_f64().ok_or_else(|| Error::Input("non-numeric warp radius".into()))?,
                                row[1].as_f64().ok_or_else(|| Error::Input("non-numeric warp value".into()))?,
                            ));
                        }
                        Warp::table(&points)?
                    }
                    other => return Err(Error::Input(format!("unknown warp kind {other:?}"))),
                };
                Ok(SpaceModel::Warped(WarpedModel::new(n, warp, k)?))
            }
            other => Err(Error::Input(format!("unknown space kind {other:?}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("bad space JSON: {e}")))?;
        Self::from_json_value(&v)
    }
}

/// Surface area of the unit sphere S^{d-1} in R^d, 2 pi^{d/2} / Gamma(d/2).
/// Exact half-integer Gamma values keep this accurate to machine precision.
pub fn unit_sphere_area(d: u32) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    if d % 2 == 0 {
        // Gamma(d/2) = (d/2 - 1)!
        let m = d / 2;
        let mut fact = 1.0f64;
        for i in 1..m {
            fact *= i as f64;
        }
        2.0 * PI.powi(m as i32) / fact
    } else {
        // Gamma(m + 1/2) = sqrt(pi) (2m)! / (4^m m!), with d = 2m + 1.
        let m = (d - 1) / 2;
        let mut ratio = 1.0f64; // 4^m m! / (2m)!
        for i in 1..=m {
            // multiply by 4 i / ((2i)(2i-1)) = 2 / (2i - 1)
            ratio *= 2.0 / (2.0 * i as f64 - 1.0);
        }
        2.0 * PI.powi(m as i32) * ratio
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rh(n: u32) -> SpaceModel {
        SpaceModel::rank_one(FieldKind::Real, n, CurvatureSign::Noncompact).unwrap()
    }

    fn cah2() -> SpaceModel {
        SpaceModel::rank_one(FieldKind::Cayley, 2, CurvatureSign::Noncompact).unwrap()
    }

    #[test]
    fn density_examples() {
        let s = rh(2);
        assert_relative_eq!(s.density(1.3).unwrap(), 1.3f64.sinh(), max_relative = 1e-15);
        let c = cah2();
        let r = 0.7f64;
        assert_relative_eq!(
            c.density(r).unwrap(),
            r.sinh().powi(15) * r.cosh().powi(7),
            max_relative = 1e-14
        );
        assert_eq!(rh(5).density(0.0).unwrap(), 0.0);
        assert_eq!(cah2().density(0.0).unwrap(), 0.0);
    }

    #[test]
    fn mean_curvature_closed_forms() {
        for n in [2u32, 3, 5] {
            let s = rh(n);
            for r in [0.3, 1.0, 2.5] {
                assert_relative_eq!(
                    s.mean_curvature(r).unwrap(),
                    (n - 1) as f64 / r.tanh(),
                    max_relative = 1e-14
                );
            }
        }
        let ch3 = SpaceModel::rank_one(FieldKind::Complex, 3, CurvatureSign::Noncompact).unwrap();
        for r in [0.4, 1.1] {
            assert_relative_eq!(
                ch3.mean_curvature(r).unwrap(),
                5.0 / r.tanh() + r.tanh(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn mean_curvature_pole_limit() {
        // r * TrA(r) -> d - 1 as r -> 0.
        for space in [rh(4), cah2(), SpaceModel::euclidean(3).unwrap()] {
            let d = space.real_dim() as f64;
            let r = 1e-6;
            let v = r * space.mean_curvature(r).unwrap();
            assert!((v - (d - 1.0)).abs() < 1e-9, "{space}: {v}");
        }
        assert!(matches!(rh(3).mean_curvature(0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn lambda1_examples() {
        let c = cah2();
        let r = 0.9f64;
        assert_relative_eq!(
            c.lambda1_sphere(r).unwrap(),
            15.0 / r.sinh().powi(2) - 7.0 / r.cosh().powi(2),
            max_relative = 1e-14
        );
        let h2 = SpaceModel::hyperbolic_plane();
        assert_relative_eq!(h2.lambda1_sphere(r).unwrap(), 1.0 / r.sinh().powi(2), max_relative = 1e-14);
    }

    #[test]
    fn lambda1_matches_minus_mean_curvature_derivative() {
        // |lambda_1 + d/dr TrA| <= 1e-9 lambda_1 on a log grid. The oracle is
        // the hand-differentiated mean curvature of each family:
        //   noncompact: d/dr [(kn-1) coth r + (k-1) tanh r]
        //   compact:    d/dr [(kn-1) cot r  - (k-1) tan r]
        let spaces: Vec<SpaceModel> = vec![
            rh(2),
            rh(5),
            SpaceModel::rank_one(FieldKind::Complex, 2, CurvatureSign::Noncompact).unwrap(),
            SpaceModel::rank_one(FieldKind::Quaternion, 2, CurvatureSign::Noncompact).unwrap(),
            cah2(),
            SpaceModel::rank_one(FieldKind::Real, 2, CurvatureSign::Compact).unwrap(),
            SpaceModel::rank_one(FieldKind::Complex, 2, CurvatureSign::Compact).unwrap(),
        ];
        for space in spaces {
            let SpaceModel::RankOne(ro) = &space else { unreachable!() };
            let kn1 = (ro.real_dim() - 1) as f64;
            let k1 = (ro.field().real_dim() - 1) as f64;
            let compact = ro.sign() == CurvatureSign::Compact;
            let window = space.radius_window();
            let r_hi = if window.is_finite() { 0.9 * window } else { 5.0 };
            for i in 0..60 {
                let r: f64 = 1e-3 * (r_hi / 1e-3).powf(i as f64 / 59.0);
                let dtra = if compact {
                    -kn1 / r.sin().powi(2) - k1 / r.cos().powi(2)
                } else {
                    -kn1 / r.sinh().powi(2) + k1 / r.cosh().powi(2)
                };
                let lam = space.lambda1_sphere(r).unwrap();
                assert!(
                    (lam + dtra).abs() <= 1e-9 * lam.abs().max(1.0),
                    "{space} at r={r}: lambda={lam}, TrA'={dtra}"
                );
                // Finite-difference cross-check of the analytic TrA itself.
                let h = 1e-3 * r;
                let tra = |x: f64| space.mean_curvature(x).unwrap();
                let fd = (-tra(r + 2.0 * h) + 8.0 * tra(r + h) - 8.0 * tra(r - h) + tra(r - 2.0 * h)) / (12.0 * h);
                assert!(
                    (fd - dtra).abs() <= 1e-6 * dtra.abs().max(1.0),
                    "{space} at r={r}: FD {fd} vs analytic {dtra}"
                );
            }
        }
    }

    #[test]
    fn compact_window_enforced() {
        let cp2 = SpaceModel::rank_one(FieldKind::Complex, 2, CurvatureSign::Compact).unwrap();
        // kn = 4, k = 2: window is arctan(sqrt((kn+1)/(k-1))) = arctan(sqrt 5).
        let win = 5.0f64.sqrt().atan();
        assert!(cp2.lambda1_sphere(win * 0.99).is_ok());
        assert!(matches!(cp2.lambda1_sphere(win * 1.01), Err(Error::Domain(_))));
        // Round sphere: window is pi.
        let s2 = SpaceModel::rank_one(FieldKind::Real, 2, CurvatureSign::Compact).unwrap();
        assert!(s2.lambda1_sphere(3.0).is_ok());
        assert!(matches!(s2.lambda1_sphere(3.2), Err(Error::Domain(_))));
    }

    #[test]
    fn rank1_real_agrees_with_space_form() {
        for n in [2u32, 3, 6] {
            let a = rh(n);
            let b = SpaceModel::space_form(1.0, n).unwrap();
            for r in [1e-3, 0.2, 1.0, 3.7] {
                assert_relative_eq!(a.density(r).unwrap(), b.density(r).unwrap(), max_relative = 1e-14);
                assert_relative_eq!(
                    a.mean_curvature(r).unwrap(),
                    b.mean_curvature(r).unwrap(),
                    max_relative = 1e-14
                );
                assert_relative_eq!(
                    a.lambda1_sphere(r).unwrap(),
                    b.lambda1_sphere(r).unwrap(),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn sin_delta_definition_and_flat_limit() {
        for r in [0.0, 0.3, 2.0, 5.0] {
            assert_relative_eq!(sin_delta(1.0, r), r.sinh(), max_relative = 1e-15);
            assert_eq!(sin_delta(0.0, r), r);
            assert!((sin_delta(1e-6, r) - r).abs() <= 1e-10);
        }
        assert_eq!(sin_delta(2.3, 0.0), 0.0);
    }

    #[test]
    fn volumes_closed_forms() {
        let h2 = SpaceModel::hyperbolic_plane();
        for big_r in [0.5, 1.0, 2.0] {
            assert_relative_eq!(
                h2.ball_volume(big_r).unwrap(),
                2.0 * PI * (big_r.cosh() - 1.0),
                max_relative = 1e-12
            );
            assert_relative_eq!(h2.sphere_volume(big_r).unwrap(), 2.0 * PI * big_r.sinh(), max_relative = 1e-14);
        }
        for n in [2u32, 3, 5] {
            let e = SpaceModel::euclidean(n).unwrap();
            let big_r = 1.7f64;
            assert_relative_eq!(
                e.ball_volume(big_r).unwrap(),
                unit_sphere_area(n) * big_r.powi(n as i32) / n as f64,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn ball_volume_leading_order() {
        for space in [rh(3), cah2()] {
            let d = space.real_dim();
            let r = 1e-3;
            let lead = space.ball_volume(r).unwrap() / r.powi(d as i32);
            assert_relative_eq!(lead, unit_sphere_area(d) / d as f64, max_relative = 1e-5);
        }
    }

    #[test]
    fn sphere_volume_is_ball_volume_derivative() {
        for space in [rh(2), cah2(), SpaceModel::euclidean(4).unwrap()] {
            for r in [0.5f64, 1.5, 3.0] {
                let h = 1e-4 * r;
                let bv = |x: f64| space.ball_volume(x).unwrap();
                let fd = (-bv(r + 2.0 * h) + 8.0 * bv(r + h) - 8.0 * bv(r - h) + bv(r - 2.0 * h)) / (12.0 * h);
                assert_relative_eq!(fd, space.sphere_volume(r).unwrap(), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn radius_for_volume_round_trips() {
        let h2 = SpaceModel::hyperbolic_plane();
        let r = h2.radius_for_volume(2.0 * PI * (2.0f64.cosh() - 1.0)).unwrap();
        assert!((r - 2.0).abs() < 1e-11);

        let e2 = SpaceModel::euclidean(2).unwrap();
        let r = e2.radius_for_volume(PI * 1.3 * 1.3).unwrap();
        assert!((r - 1.3).abs() < 1e-11);

        for space in [rh(4), cah2()] {
            for big_r in [0.5, 2.0] {
                let v = space.ball_volume(big_r).unwrap();
                let back = space.radius_for_volume(v).unwrap();
                assert!((back - big_r).abs() <= 1e-10 * big_r, "{space}: {back} vs {big_r}");
            }
        }
    }

    #[test]
    fn radius_for_volume_rejects_oversized_compact() {
        let s2 = SpaceModel::rank_one(FieldKind::Real, 2, CurvatureSign::Compact).unwrap();
        // Total area of the round sphere of curvature 1 is 4 pi.
        assert!(s2.radius_for_volume(4.0 * PI * 1.01).is_err());
        let r = s2.radius_for_volume(2.0 * PI).unwrap(); // hemisphere
        assert!((r - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn curvature_check_cases() {
        let exact = WarpedModel::new(2, Warp::Custom(Arc::new(CustomWarp {
            psi: Box::new(f64::sinh),
            dpsi: Some(Box::new(f64::cosh)),
            d2psi: Some(Box::new(f64::sinh)),
        })), -1.0).unwrap();
        let rep = exact.curvature_check(3.0, 200).unwrap();
        assert!(rep.pass);
        assert!(rep.checks[0].margin.abs() < 1e-12);

        let steeper = WarpedModel::new(2, Warp::sinh_scaled(1.2).unwrap(), -1.0).unwrap();
        let rep = steeper.curvature_check(3.0, 200).unwrap();
        assert!(rep.pass);
        assert!((rep.checks[0].margin - 0.44).abs() < 1e-9, "margin {}", rep.checks[0].margin);

        let sine = WarpedModel::new(2, Warp::Custom(Arc::new(CustomWarp {
            psi: Box::new(f64::sin),
            dpsi: Some(Box::new(f64::cos)),
            d2psi: Some(Box::new(|r| -r.sin())),
        })), 0.0).unwrap();
        let rep = sine.curvature_check(1.5, 100).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn curvature_check_finite_difference_fallback() {
        // No analytic derivatives supplied: the stencil must still resolve
        // -psi''/psi = -1.44 to ~1e-9.
        let w = WarpedModel::new(2, Warp::Custom(Arc::new(CustomWarp {
            psi: Box::new(|r| (1.2 * r).sinh() / 1.2),
            dpsi: None,
            d2psi: None,
        })), -1.0).unwrap();
        let rep = w.curvature_check(2.0, 100).unwrap();
        assert!(rep.pass, "margin {}", rep.checks[0].margin);
        assert!((rep.checks[0].margin - 0.44).abs() < 1e-7);
    }

    #[test]
    fn table_warp_tracks_sinh() {
        let n = 2000;
        let pts: Vec<(f64, f64)> = (0..=n).map(|i| {
            let r = 4.0 * i as f64 / n as f64;
            (r, r.sinh())
        }).collect();
        let w = WarpedModel::new(2, Warp::table(&pts).unwrap(), -1.0).unwrap();
        for r in [0.5, 1.0, 3.0] {
            assert_relative_eq!(w.psi(r), r.sinh(), max_relative = 1e-8);
        }
    }

    #[test]
    fn csv_warp_table() {
        let mut csv = String::from("r,psi\n");
        for i in 0..=1500 {
            let r = 3.0 * i as f64 / 1500.0;
            csv.push_str(&format!("{},{}\n", r, r.sinh()));
        }
        let warp = Warp::table_from_csv(&csv).unwrap();
        let model = WarpedModel::new(2, warp, -1.0).unwrap();
        assert_relative_eq!(model.psi(1.2), 1.2f64.sinh(), max_relative = 1e-8);
        assert!(Warp::table_from_csv("r,psi\n1.0,oops\n").is_err());
        // Tables must start at the pole.
        assert!(Warp::table_from_csv("0.5,0.5\n1.0,1.2\n2.0,3.6\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let spaces = [
            rh(3),
            SpaceModel::rank_one(FieldKind::Cayley, 2, CurvatureSign::Noncompact).unwrap(),
            SpaceModel::space_form(1.5, 4).unwrap(),
            SpaceModel::Warped(WarpedModel::new(2, Warp::sinh_scaled(1.2).unwrap(), -1.0).unwrap()),
        ];
        for s in spaces {
            let v = s.to_json_value().unwrap();
            let back = SpaceModel::from_json_value(&v).unwrap();
            assert_eq!(s.to_json_value().unwrap(), back.to_json_value().unwrap());
        }
        assert!(SpaceModel::from_json("{\"kind\":\"nope\"}").is_err());
    }

    #[test]
    fn cayley_requires_n2() {
        assert!(RankOneSpace::new(FieldKind::Cayley, 3, CurvatureSign::Noncompact).is_err());
    }

    #[test]
    fn unit_sphere_areas() {
        assert_relative_eq!(unit_sphere_area(2), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI, max_relative = 1e-15);
        // Gamma-function reference values for higher dimensions.
        assert_relative_eq!(unit_sphere_area(16), 2.0 * PI.powi(8) / 5040.0, max_relative = 1e-14);
    }
}
