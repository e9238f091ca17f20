//! Steklov eigenvalues of geodesic balls in rank-1 symmetric spaces and
//! constant-curvature space forms, sharp isoperimetric upper bounds for
//! star-shaped 2D domains, and an independent boundary-integral Steklov
//! solver used as a cross-check oracle.
//!
//! The crate is organized around the radial reduction of the Steklov problem
//! on geodesic balls: separation of variables turns the problem into a
//! one-dimensional ODE in the radial profile g, whose Robin ratio g'(R)/g(R)
//! at the ball boundary is the first nonzero eigenvalue. The same profile
//! drives trial-function upper bounds for general star-shaped domains, and a
//! spectrally accurate planar Dirichlet-to-Neumann solver (conformally
//! transplanted for curved ambients) provides independent eigenvalues to
//! verify the bounds against.

pub mod ball_eigen;
pub mod domains;
pub mod error;
pub mod fourier;
pub mod numerics;
pub mod radial;
pub mod report;
pub mod spaces;
pub mod steklov2d;

pub use ball_eigen::{nu1_ball, nu1_ball_sweep, sweep_to_csv, BallEigenResult};
pub use domains::{
    boundary_lower_bound_check, center_of_mass, comparison_bound, comparison_constant,
    geodesic_distance, trial_bound, Ambient2, BoundaryElement, BoundaryLowerBoundReport,
    CenterChoice, CenterOfMass, ComparisonBound, ComparisonConstant, PolarPoint, StarDomain,
    TrialBoundReport,
};
pub use error::{Error, Result};
pub use fourier::FourierSeries;
pub use radial::{
    cayley_g_closed_form, g_delta_profile, g_profile, g_profile_quadrature, monotonicity_report,
    radial_mode_shoot, MonotonicityReport, RadialProfile,
};
pub use report::{CheckResult, VerificationReport};
pub use spaces::{
    sin_delta, unit_sphere_area, CurvatureSign, CustomWarp, FieldKind, RankOneSpace, SpaceForm,
    SpaceModel, Warp, WarpedModel,
};
pub use steklov2d::{conformal_model, dtn_spectrum, nu1_domain, SteklovSpectrum, WeightedPlanarDomain};
