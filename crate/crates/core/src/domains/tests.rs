use super::*;
use crate::numerics::{find_root, RootSpec};
use crate::radial::g_profile;
use approx::assert_relative_eq;
use proptest::prelude::*;

fn hyperbolic_domain(eps: f64, mode: usize) -> StarDomain {
    let mut a = vec![0.0; mode];
    a[mode - 1] = eps;
    StarDomain::new(Ambient2::hyperbolic(), FourierSeries::new(1.0, a, vec![])).unwrap()
}

fn flat_domain(rho: FourierSeries) -> StarDomain {
    StarDomain::new(Ambient2::flat(), rho).unwrap()
}

/// rho(theta) of a geodesic circle of radius `r` centered at chart-polar
/// (c_r, c_th), seen from the origin. Root-cast per direction, then fitted.
fn off_center_ball(delta: f64, c_r: f64, c_th: f64, r: f64) -> StarDomain {
    let ambient = Ambient2::form(delta).unwrap();
    let rho = |theta: f64| {
        let f = |t: f64| law_of_cosines(delta, t, theta, c_r, c_th) - r;
        find_root(f, &RootSpec { lo: 1e-9, hi: c_r + r + 1.0, tol: 1e-14, max_iter: 200 }).unwrap()
    };
    StarDomain::from_radial_fn(ambient, rho).unwrap()
}

#[test]
fn volume_closed_forms() {
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.5).unwrap();
    assert_relative_eq!(ball.volume().unwrap(), 2.0 * PI * (1.5f64.cosh() - 1.0), max_relative = 1e-10);

    let disk = StarDomain::ball(Ambient2::flat(), 2.0).unwrap();
    assert_relative_eq!(disk.volume().unwrap(), 4.0 * PI, max_relative = 1e-10);

    // Flat rho = R(1 + eps cos 2 theta): area = pi R^2 (1 + eps^2 / 2).
    let (big_r, eps) = (1.3, 0.2);
    let dom = flat_domain(FourierSeries::new(big_r, vec![0.0, big_r * eps], vec![]));
    assert_relative_eq!(
        dom.volume().unwrap(),
        PI * big_r * big_r * (1.0 + eps * eps / 2.0),
        max_relative = 1e-10
    );
}

#[test]
fn distance_law_of_cosines() {
    let h = SpaceForm::new(1.0, 2).unwrap();
    let a = PolarPoint { r: 0.7, theta: 0.3 };
    assert_eq!(geodesic_distance(&h, a, a).unwrap(), 0.0);

    let flat = SpaceForm::new(0.0, 2).unwrap();
    let p = PolarPoint { r: 2.0, theta: 1.1 };
    let q = PolarPoint { r: 0.5, theta: 1.1 };
    assert_relative_eq!(geodesic_distance(&flat, p, q).unwrap(), 1.5, max_relative = 1e-14);

    // Right hyperbolic triangle with legs 1: hypotenuse arccosh(cosh^2 1).
    let a = PolarPoint { r: 1.0, theta: 0.0 };
    let b = PolarPoint { r: 1.0, theta: PI / 2.0 };
    assert_relative_eq!(
        geodesic_distance(&h, a, b).unwrap(),
        (1.0f64.cosh() * 1.0f64.cosh()).acosh(),
        max_relative = 1e-14
    );
}

#[test]
fn boundary_element_sec_theta() {
    let dom = hyperbolic_domain(0.2, 2);
    let rep = sec_theta_report(&dom, 512);
    assert!(rep.pass);
    // Round domains have sec_theta identically 1.
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.0).unwrap();
    for j in 0..32 {
        let el = ball.boundary_element(2.0 * PI * j as f64 / 32.0);
        assert_relative_eq!(el.sec_theta, 1.0, max_relative = 1e-14);
        assert_relative_eq!(el.ds_dtheta, 1.0f64.sinh(), max_relative = 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn sec_theta_at_least_one(eps in 0.01f64..0.45, mode in 1usize..5) {
        let dom = hyperbolic_domain(eps, mode);
        let rep = sec_theta_report(&dom, 256);
        prop_assert!(rep.pass);
        // Equality somewhere only where rho' = 0; strict inequality at a
        // point with rho' != 0.
        let theta = PI / (2.0 * mode as f64);
        prop_assert!(dom.boundary_element(theta).sec_theta > 1.0);
    }
}

#[test]
fn center_of_mass_symmetric_domains() {
    let profile = g_profile(&SpaceModel::hyperbolic_plane()).unwrap();
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.2).unwrap();
    let com = center_of_mass(&ball, &profile).unwrap();
    assert!(com.point.r < 1e-12, "center drifted to r = {}", com.point.r);
    assert!(com.residual <= 1e-10 * com.boundary_measure);

    // Symmetric perturbation keeps the center at the base.
    let dom = hyperbolic_domain(0.2, 2);
    let com = center_of_mass(&dom, &profile).unwrap();
    assert!(com.point.r < 1e-10);
}

#[test]
fn center_of_mass_flat_centroid_oracle() {
    // Flat weight g = r/2 makes the moment condition linear: the center is
    // the arc-length centroid of the boundary.
    let rho = FourierSeries::new(1.0, vec![0.15, 0.1], vec![0.0, 0.05]);
    let dom = flat_domain(rho.clone());
    let profile = g_profile(&SpaceModel::euclidean(2).unwrap()).unwrap();
    let com = center_of_mass(&dom, &profile).unwrap();

    let m = 8192;
    let (mut cx, mut cy, mut total) = (0.0, 0.0, 0.0);
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        let r = rho.eval(t);
        let dr = rho.eval_deriv(t);
        let ds = dr.hypot(r);
        cx += r * t.cos() * ds;
        cy += r * t.sin() * ds;
        total += ds;
    }
    cx /= total;
    cy /= total;
    assert!((com.chart_point.0 - cx).abs() < 1e-9, "{} vs {cx}", com.chart_point.0);
    assert!((com.chart_point.1 - cy).abs() < 1e-9, "{} vs {cy}", com.chart_point.1);
}

#[test]
fn center_of_mass_translation_equivariance() {
    let rho = FourierSeries::new(1.0, vec![0.1, 0.12], vec![0.08]);
    let profile = g_profile(&SpaceModel::euclidean(2).unwrap()).unwrap();
    let dom = flat_domain(rho.clone());
    let com0 = center_of_mass(&dom, &profile).unwrap();

    let shift = (0.4f64, -0.25f64);
    let base = PolarPoint { r: shift.0.hypot(shift.1), theta: shift.1.atan2(shift.0) };
    let moved = StarDomain::with_base(Ambient2::flat(), base, rho).unwrap();
    let com1 = center_of_mass(&moved, &profile).unwrap();
    assert!((com1.chart_point.0 - com0.chart_point.0 - shift.0).abs() <= 1e-9);
    assert!((com1.chart_point.1 - com0.chart_point.1 - shift.1).abs() <= 1e-9);
}

#[test]
fn trial_bound_on_centered_balls() {
    for big_r in [0.8, 2.0] {
        let ball = StarDomain::ball(Ambient2::hyperbolic(), big_r).unwrap();
        let rep = trial_bound(&ball).unwrap();
        let exact = 1.0 / big_r.sinh();
        assert!(
            (rep.bound - exact).abs() <= 1e-8 * exact,
            "R={big_r}: bound {} vs {exact}",
            rep.bound
        );
        assert!((rep.ball_bound - exact).abs() <= 1e-8 * exact);
    }
    let disk = StarDomain::ball(Ambient2::flat(), 2.0).unwrap();
    let rep = trial_bound(&disk).unwrap();
    assert!((rep.bound - 0.5).abs() <= 1e-8 * 0.5);
}

#[test]
fn trial_bound_on_off_center_balls() {
    // A geodesic ball described from an off-center base: the center solve
    // must find the true center and the bound must collapse to nu_1(B(R)).
    let big_r = 1.0f64;
    let dom = off_center_ball(1.0, 0.6, 0.9, big_r);
    let rep = trial_bound(&dom).unwrap();
    let exact = 1.0 / big_r.sinh();
    assert!(
        (rep.bound - exact).abs() <= 1e-7 * exact,
        "bound {} vs {exact}",
        rep.bound
    );
    // The recovered center sits at chart-polar (0.6, 0.9) up to fit error.
    assert!((rep.center.point.r - 0.6).abs() < 1e-7);

    let dom = off_center_ball(0.0, 0.5, -0.4, 1.5);
    let rep = trial_bound(&dom).unwrap();
    assert!((rep.bound - 1.0 / 1.5).abs() <= 1e-7 / 1.5);
}

#[test]
fn trial_bound_dominated_by_ball_bound() {
    for eps in [0.05, 0.1, 0.2] {
        let dom = hyperbolic_domain(eps, 2);
        let rep = trial_bound(&dom).unwrap();
        assert!(
            rep.bound <= rep.ball_bound + 1e-8,
            "eps={eps}: trial {} vs ball {}",
            rep.bound,
            rep.ball_bound
        );
    }
}

#[test]
fn transplant_preserves_rho_and_dominates_volume() {
    let warped = Ambient2::warped(WarpedModel::new(2, Warp::sinh_scaled(1.2).unwrap(), -1.0).unwrap()).unwrap();
    let dom = StarDomain::new(warped, FourierSeries::new(1.0, vec![0.0, 0.15], vec![])).unwrap();
    let target = SpaceForm::new(1.0, 2).unwrap();
    let moved = dom.transplant(target).unwrap();
    for j in 0..16 {
        let t = 2.0 * PI * j as f64 / 16.0;
        assert_eq!(dom.rho().eval(t), moved.rho().eval(t));
    }
    // Grid-check the precondition psi >= sin_delta, then the consequence:
    // the ambient volume dominates the transplanted one.
    for i in 1..=200 {
        let r = 2.0 * i as f64 / 200.0;
        assert!(dom.ambient().psi(r) >= r.sinh());
    }
    assert!(dom.volume().unwrap() >= moved.volume().unwrap());

    let ball = StarDomain::ball(Ambient2::hyperbolic(), 0.7).unwrap();
    let flat_ball = ball.transplant(SpaceForm::new(0.0, 2).unwrap()).unwrap();
    assert!(flat_ball.is_round());
}

#[test]
fn comparison_constant_is_one_on_the_space_form_itself() {
    // Ambient equal to the space form: every factor collapses.
    let hyper_ball = StarDomain::ball(Ambient2::hyperbolic(), 1.0).unwrap();
    let c = comparison_constant(&hyper_ball, -1.0).unwrap();
    assert!((c.c_k - 1.0).abs() <= 1e-10, "C_k = {}", c.c_k);
    assert!((c.r_k - 1.0).abs() <= 1e-10);
    assert!((c.r_k_prime - 1.0).abs() <= 1e-10);

    let flat_disk = StarDomain::ball(Ambient2::flat(), 1.4).unwrap();
    let c = comparison_constant(&flat_disk, 0.0).unwrap();
    assert!((c.c_k - 1.0).abs() <= 1e-10);
}

#[test]
fn comparison_constant_exceeds_one_under_strict_curvature() {
    let warped = Ambient2::warped(WarpedModel::new(2, Warp::sinh_scaled(1.2).unwrap(), -1.0).unwrap()).unwrap();
    let ball = StarDomain::new(warped, FourierSeries::constant(1.0)).unwrap();
    let c = comparison_constant(&ball, -1.0).unwrap();
    assert!(c.c_k >= 1.0, "C_k = {}", c.c_k);
    assert!(c.bulk_factor >= 1.0 && c.boundary_factor >= 1.0);
    // Ambient volume strictly dominates, so R_k > R_k'.
    assert!(c.r_k > c.r_k_prime);
}

#[test]
fn comparison_bound_collapses_on_space_form_balls() {
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.3).unwrap();
    let b = comparison_bound(&ball, -1.0).unwrap();
    let exact = 1.0 / 1.3f64.sinh();
    assert!((b.bound - exact).abs() <= 1e-9 * exact);
    assert!((b.nu1_ball_k - exact).abs() <= 1e-9 * exact);
}

#[test]
fn comparison_bound_flat_ambient_dominates_oracle() {
    // Flat ambient with k = 0: C_0 = 1 and the chain reduces to the plain
    // equal-volume disk bound, which must dominate the solver value.
    let dom = flat_domain(FourierSeries::new(1.0, vec![0.0, 0.2], vec![]));
    let cb = comparison_bound(&dom, 0.0).unwrap();
    assert!((cb.constant.c_k - 1.0).abs() <= 1e-10);
    let oracle = crate::steklov2d::nu1_domain(&dom, 256).unwrap();
    assert!(oracle <= cb.bound + 1e-8, "oracle {oracle} vs bound {}", cb.bound);
}

#[test]
fn comparison_rejects_violated_curvature_hypothesis() {
    // Ambient curvature -1 does not satisfy a bound of -4.
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.0).unwrap();
    assert!(matches!(comparison_constant(&ball, -4.0), Err(Error::Hypothesis(_))));
}

#[test]
fn boundary_lower_bound_equality_on_balls() {
    let profile = g_profile(&SpaceModel::hyperbolic_plane()).unwrap();
    let ball = StarDomain::ball(Ambient2::hyperbolic(), 1.0).unwrap();
    let rep = boundary_lower_bound_check(&ball, &profile, CenterChoice::Base).unwrap();
    assert!(rep.equality, "margin {}", rep.margin);
    assert!(rep.centered_ball);

    let flat_profile = g_profile(&SpaceModel::euclidean(2).unwrap()).unwrap();
    let disk = StarDomain::ball(Ambient2::flat(), 2.0).unwrap();
    let rep = boundary_lower_bound_check(&disk, &flat_profile, CenterChoice::Base).unwrap();
    assert!(rep.equality);
}

#[test]
fn boundary_lower_bound_strict_on_perturbed_domains() {
    let profile = g_profile(&SpaceModel::hyperbolic_plane()).unwrap();
    let dom = hyperbolic_domain(0.2, 2);
    let rep = boundary_lower_bound_check(&dom, &profile, CenterChoice::Base).unwrap();
    assert!(rep.margin > 1e-3 * rep.rhs, "margin {} rhs {}", rep.margin, rep.rhs);
    assert!(!rep.equality);
    assert!(!rep.centered_ball);
    // The bound also holds about the center of mass.
    let rep = boundary_lower_bound_check(&dom, &profile, CenterChoice::CenterOfMass).unwrap();
    assert!(rep.margin > 0.0);
}

#[test]
fn newton_system_solves_the_moment_map() {
    // The general small-system Newton solver against the boundary moment of
    // a reflection-symmetric flat domain: the zero must sit at the symmetry
    // center (here the origin), independently of the center-of-mass solver.
    use crate::numerics::newton_system;
    let rho = FourierSeries::new(1.0, vec![0.0, 0.25], vec![]);
    let profile = g_profile(&SpaceModel::euclidean(2).unwrap()).unwrap();
    let m = 1024;
    let moment = |p: [f64; 2]| -> [f64; 2] {
        let mut out = [0.0, 0.0];
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            let r = rho.eval(t);
            let dr = rho.eval_deriv(t);
            let ds = dr.hypot(r) * 2.0 * PI / m as f64;
            let q = [r * t.cos() - p[0], r * t.sin() - p[1]];
            let d = q[0].hypot(q[1]);
            let g = profile.g(d).unwrap();
            out[0] += g * q[0] / d * ds;
            out[1] += g * q[1] / d * ds;
        }
        out
    };
    let x = newton_system(moment, [0.17, -0.08], 1e-12, 50, 1.0).unwrap();
    assert!(x[0].abs() < 1e-10 && x[1].abs() < 1e-10, "center ({}, {})", x[0], x[1]);
}

#[test]
fn star_domain_validation() {
    // Nonpositive rho is rejected.
    let bad = FourierSeries::new(0.1, vec![0.5], vec![]);
    assert!(StarDomain::new(Ambient2::flat(), bad).is_err());
    // Warped ambients reject off-center bases.
    let warped = Ambient2::warped(WarpedModel::new(2, Warp::sinh_scaled(1.2).unwrap(), -1.0).unwrap()).unwrap();
    assert!(StarDomain::with_base(warped, PolarPoint { r: 0.3, theta: 0.0 }, FourierSeries::constant(1.0)).is_err());
}

#[test]
fn json_round_trip() {
    let dom = hyperbolic_domain(0.15, 3);
    let v = dom.to_json_value().unwrap();
    let back = StarDomain::from_json_value(&v).unwrap();
    assert_eq!(dom.rho().a0, back.rho().a0);
    assert_eq!(dom.rho().a, back.rho().a);
    assert!(StarDomain::from_json("{}").is_err());

    let base = PolarPoint { r: 0.4, theta: 1.0 };
    let dom = StarDomain::with_base(Ambient2::hyperbolic(), base, FourierSeries::constant(1.0)).unwrap();
    let back = StarDomain::from_json_value(&dom.to_json_value().unwrap()).unwrap();
    assert!((back.base().r - 0.4).abs() < 1e-12);
}
