//! Verification suites behind `steklov verify <suite>`.
//!
//! Each suite re-derives one block of the theory numerically and reports
//! signed margins: the monotonicity structure of the radial profile
//! (`lemma3`), the isoperimetric upper bound against the boundary-integral
//! oracle (`thm1`), the curvature comparison chain (`thm2`), the boundary
//! g^2 mass lower bound (`lemma2`), and the oracle's own accuracy
//! invariants (`oracle`).

use rayon::prelude::*;

use steklov::domains::{
    boundary_lower_bound_check, comparison_bound, trial_bound, Ambient2, CenterChoice, StarDomain,
};
use steklov::radial::{g_profile, monotonicity_report};
use steklov::spaces::{CurvatureSign, FieldKind, SpaceModel, Warp, WarpedModel};
use steklov::steklov2d::{dtn_spectrum, nu1_domain, WeightedPlanarDomain};
use steklov::{nu1_ball, CheckResult, FourierSeries, Result, VerificationReport};

pub fn run_suite(name: &str) -> Result<VerificationReport> {
    match name {
        "lemma3" => suite_monotonicity(),
        "thm1" => suite_isoperimetric(),
        "thm2" => suite_comparison(),
        "lemma2" => suite_boundary_mass(),
        "oracle" => suite_oracle(),
        other => Err(steklov::Error::Input(format!(
            "unknown suite {other:?}; expected lemma3 | thm1 | thm2 | lemma2 | oracle"
        ))),
    }
}

fn noncompact_collection() -> Vec<SpaceModel> {
    let mut spaces = Vec::new();
    for n in 2..=8 {
        spaces.push(SpaceModel::rank_one(FieldKind::Real, n, CurvatureSign::Noncompact).unwrap());
    }
    for n in 2..=4 {
        spaces.push(SpaceModel::rank_one(FieldKind::Complex, n, CurvatureSign::Noncompact).unwrap());
    }
    for n in 2..=3 {
        spaces.push(SpaceModel::rank_one(FieldKind::Quaternion, n, CurvatureSign::Noncompact).unwrap());
    }
    spaces.push(SpaceModel::rank_one(FieldKind::Cayley, 2, CurvatureSign::Noncompact).unwrap());
    spaces
}

/// Monotonicity of the radial profile data; the round sphere is included as
/// a documented counterexample whose integrand checks must fail.
fn suite_monotonicity() -> Result<VerificationReport> {
    let spaces = noncompact_collection();
    let reports: Vec<_> = spaces
        .par_iter()
        .map(|space| monotonicity_report(space, 10.0, 2000))
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    for rep in reports {
        for c in rep.checks {
            checks.push(CheckResult::new(format!("{}:{}", rep.space, c.name), c.pass, c.margin));
        }
    }

    let s2 = SpaceModel::rank_one(FieldKind::Real, 2, CurvatureSign::Compact)?;
    let rep = monotonicity_report(&s2, 10.0, 2000)?;
    let expected_failures = [
        "g_double_prime_nonpositive",
        "g_prime_sq_nonincreasing",
        "g_sq_lambda1_nonincreasing",
        "steklov_integrand_nonincreasing",
    ];
    for c in rep.checks {
        let check = CheckResult::new(format!("{}:{}", rep.space, c.name), c.pass, c.margin);
        if expected_failures.contains(&c.name.as_str()) {
            checks.push(check.expected_fail().with_detail("compact counterexample"));
        } else {
            checks.push(check);
        }
    }
    Ok(VerificationReport::new("lemma3", checks))
}

struct GapRow {
    eps: f64,
    oracle: f64,
    ball: f64,
    trial: f64,
}

fn perturbed_hyperbolic(eps: f64) -> StarDomain {
    StarDomain::new(Ambient2::hyperbolic(), FourierSeries::new(1.0, vec![0.0, eps], vec![])).unwrap()
}

/// nu_1(Omega) <= nu_1(B(R_vol)) for hyperbolic domains, via the oracle and
/// the trial-function machinery.
fn suite_isoperimetric() -> Result<VerificationReport> {
    let h2 = SpaceModel::hyperbolic_plane();
    let rows: Vec<GapRow> = [0.05, 0.1, 0.2]
        .par_iter()
        .map(|&eps| -> Result<GapRow> {
            let dom = perturbed_hyperbolic(eps);
            let oracle = nu1_domain(&dom, 256)?;
            let r_vol = h2.radius_for_volume(dom.volume()?)?;
            let ball = nu1_ball(&h2, r_vol)?.nu1_ratio;
            let trial = trial_bound(&dom)?.bound;
            Ok(GapRow { eps, oracle, ball, trial })
        })
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    for row in &rows {
        let gap = row.ball - row.oracle;
        checks.push(
            CheckResult::new(format!("oracle_below_ball[eps={}]", row.eps), gap >= -1e-8, gap)
                .with_detail(format!("oracle {}, ball {}", row.oracle, row.ball)),
        );
        let lower = row.trial - row.oracle;
        checks.push(CheckResult::new(
            format!("trial_above_oracle[eps={}]", row.eps),
            lower >= -1e-6,
            lower,
        ));
        let upper = row.ball - row.trial;
        checks.push(CheckResult::new(
            format!("trial_below_ball[eps={}]", row.eps),
            upper >= -1e-8,
            upper,
        ));
    }
    let gaps: Vec<f64> = rows.iter().map(|r| r.ball - r.oracle).collect();
    let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(CheckResult::new("gaps_positive", min_gap > 0.0, min_gap));
    let monotone = gaps.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    checks.push(CheckResult::new("gap_grows_with_eps", monotone > 0.0, monotone));
    Ok(VerificationReport::new("thm1", checks))
}

/// Comparison chain nu_1(Omega) <= C_k nu_1(B_k(R_k)) on the warped test
/// model psi = sinh(1.2 r)/1.2 with k = -1.
fn suite_comparison() -> Result<VerificationReport> {
    let warped = WarpedModel::new(2, Warp::sinh_scaled(1.2)?, -1.0)?;
    let mut checks = Vec::new();

    let curv = warped.curvature_check(4.0, 400)?;
    checks.push(CheckResult::new("curvature_hypothesis", curv.pass, curv.checks[0].margin));

    let domains = [
        ("ball", FourierSeries::constant(1.0)),
        ("cos2", FourierSeries::new(1.0, vec![0.0, 0.15], vec![])),
    ];
    for (label, rho) in domains {
        let dom = StarDomain::new(Ambient2::warped(warped.clone())?, rho)?;
        let cb = comparison_bound(&dom, -1.0)?;
        checks.push(CheckResult::new(
            format!("ck_at_least_one[{label}]"),
            cb.constant.c_k >= 1.0 - 1e-12,
            cb.constant.c_k - 1.0,
        ));
        let oracle = nu1_domain(&dom, 256)?;
        let gap = cb.bound - oracle;
        checks.push(
            CheckResult::new(format!("oracle_below_comparison[{label}]"), gap >= -1e-8, gap)
                .with_detail(format!("oracle {oracle}, bound {}", cb.bound)),
        );
    }

    // With psi = sinh r the ambient is the space form itself and C_k = 1.
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.0)?;
    let cb = comparison_bound(&ball, -1.0)?;
    let dev = (cb.constant.c_k - 1.0).abs();
    checks.push(CheckResult::new("ck_collapses_on_space_form", dev <= 1e-10, -dev));
    Ok(VerificationReport::new("thm2", checks))
}

/// Boundary g^2 mass lower bound: equality on centered balls, strict excess
/// on perturbed domains.
fn suite_boundary_mass() -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let profile = g_profile(&SpaceModel::hyperbolic_plane())?;
    for big_r in [0.7, 1.5] {
        let ball = StarDomain::ball(Ambient2::hyperbolic(), big_r)?;
        let rep = boundary_lower_bound_check(&ball, &profile, CenterChoice::Base)?;
        checks.push(CheckResult::new(
            format!("equality_on_ball[R={big_r}]"),
            rep.equality,
            -rep.margin.abs() / rep.rhs,
        ));
    }
    let flat_profile = g_profile(&SpaceModel::euclidean(2)?)?;
    let disk = StarDomain::ball(Ambient2::flat(), 1.3)?;
    let rep = boundary_lower_bound_check(&disk, &flat_profile, CenterChoice::Base)?;
    checks.push(CheckResult::new("equality_on_flat_disk", rep.equality, -rep.margin.abs() / rep.rhs));

    let dom = perturbed_hyperbolic(0.2);
    let rep = boundary_lower_bound_check(&dom, &profile, CenterChoice::Base)?;
    checks.push(CheckResult::new("strict_excess[eps=0.2]", rep.margin > 0.0, rep.margin));
    Ok(VerificationReport::new("lemma2", checks))
}

/// Accuracy invariants of the boundary-integral solver itself.
fn suite_oracle() -> Result<VerificationReport> {
    let mut checks = Vec::new();

    let disk = WeightedPlanarDomain::disk(1.0);
    let spec = dtn_spectrum(&disk, 5, 256)?;
    let max_err = spec
        .eigenvalues
        .iter()
        .zip([0.0, 1.0, 1.0, 2.0, 2.0])
        .map(|(v, e)| (v - e).abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckResult::new("disk_spectrum", max_err <= 1e-8, 1e-8 - max_err));

    let hyper: Vec<(f64, f64)> = [0.5f64, 1.0, 2.0, 3.0]
        .par_iter()
        .map(|&big_r| -> Result<(f64, f64)> {
            let ball = StarDomain::ball(Ambient2::hyperbolic(), big_r)?;
            Ok((big_r, nu1_domain(&ball, 256)?))
        })
        .collect::<Result<_>>()?;
    for (big_r, nu1) in hyper {
        let exact = 1.0 / big_r.sinh();
        let rel = (nu1 - exact).abs() / exact;
        checks.push(CheckResult::new(format!("hyperbolic_ball[R={big_r}]"), rel <= 1e-6, 1e-6 - rel));
    }

    // Only the area form of the Hersch-Payne inequality is asserted. The
    // related Weinstock bound circulates both as nu_1 <= 2 pi / A and, in
    // its classical perimeter form, as nu_1 L <= 2 pi; neither version is
    // asserted here.
    for (label, rho) in [
        ("cos2", FourierSeries::new(1.0, vec![0.0, 0.3], vec![])),
        ("cos3", FourierSeries::new(1.0, vec![0.0, 0.0, 0.2], vec![])),
    ] {
        let dom = WeightedPlanarDomain::flat(rho)?;
        let spec = dtn_spectrum(&dom, 4, 256)?;
        let nz = spec.nonzero();
        let margin = 1.0 / nz[0] + 1.0 / nz[1] - dom.area() / std::f64::consts::PI;
        checks.push(CheckResult::new(format!("hersch_payne[{label}]"), margin >= -1e-8, margin));
    }

    // Scaling a flat domain by 2 halves every eigenvalue.
    let base = FourierSeries::new(1.0, vec![0.0, 0.2], vec![]);
    let scaled = FourierSeries::new(2.0, vec![0.0, 0.4], vec![]);
    let s1 = dtn_spectrum(&WeightedPlanarDomain::flat(base.clone())?, 5, 256)?;
    let s2 = dtn_spectrum(&WeightedPlanarDomain::flat(scaled)?, 5, 256)?;
    let dev = s1
        .nonzero()
        .iter()
        .zip(s2.nonzero().iter())
        .map(|(a, b)| (a - 2.0 * b).abs() / a.abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckResult::new("flat_scaling_law", dev <= 1e-8, 1e-8 - dev));

    // Multiplying the weight by c divides the spectrum by c.
    let weighted = WeightedPlanarDomain::new(base.clone(), FourierSeries::constant(4.0))?;
    let sw = dtn_spectrum(&weighted, 5, 256)?;
    let dev = s1
        .nonzero()
        .iter()
        .zip(sw.nonzero().iter())
        .map(|(a, b)| (a - 4.0 * b).abs() / a.abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckResult::new("weight_scaling", dev <= 1e-10, 1e-10 - dev));

    let gap = s1.refinement_gap.unwrap_or(f64::NAN);
    checks.push(CheckResult::new("refinement_gap", gap <= 1e-8, 1e-8 - gap));

    Ok(VerificationReport::new("oracle", checks))
}
