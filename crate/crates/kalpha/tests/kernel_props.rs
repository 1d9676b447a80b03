//! Kernel invariants: finite-difference consistency, chart invariance of the
//! curvature, unit normals, and isometry equivariance of the residual.

use proptest::prelude::*;

use kalpha::kernel::{
    forms_at, jet_at, signed_power, translator_residual, ChartRect, DerivativeMode, ParamSurface,
    SurfaceJet, TranslatorSpec,
};
use kalpha::profile::SamplingPolicy;
use kalpha::rotational::{profile, revolve, slope_squared, RotationalParams};
use kalpha::{Mat3, Vec3};

/// The stored smooth reference surface: a wave graph with closed-form jets.
fn wave_jet(u: f64, v: f64) -> SurfaceJet {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    SurfaceJet {
        x: Vec3::new(u, v, su * cv),
        xu: Vec3::new(1.0, 0.0, cu * cv),
        xv: Vec3::new(0.0, 1.0, -su * sv),
        xuu: Vec3::new(0.0, 0.0, -su * cv),
        xuv: Vec3::new(0.0, 0.0, -cu * sv),
        xvv: Vec3::new(0.0, 0.0, -su * cv),
    }
}

fn wave_analytic() -> ParamSurface {
    ParamSurface::analytic(ChartRect::new((-2.0, 2.0), (-2.0, 2.0)), wave_jet)
}

fn wave_fd(step: f64) -> ParamSurface {
    ParamSurface::finite_difference(
        ChartRect::new((-2.0, 2.0), (-2.0, 2.0)),
        |u, v| wave_jet(u, v).x,
        step,
    )
}

fn jet_distance(a: &SurfaceJet, b: &SurfaceJet) -> f64 {
    [(a.xu, b.xu), (a.xv, b.xv), (a.xuu, b.xuu), (a.xuv, b.xuv), (a.xvv, b.xvv)]
        .iter()
        .map(|(p, q)| (*p - *q).norm())
        .fold(0.0, f64::max)
}

#[test]
fn finite_difference_reproduces_analytic_jets() {
    // Relative error bounded by 10 eps^2 on the stored reference surface.
    for &eps in &[1e-2, 1e-3] {
        let fd = wave_fd(eps);
        assert_eq!(fd.derivative_mode(), DerivativeMode::FiniteDifference { step: eps });
        for &(u, v) in &[(0.3, 0.7), (-1.1, 0.2), (0.9, -1.4)] {
            let exact = jet_at(&wave_analytic(), u, v).unwrap();
            let approx = jet_at(&fd, u, v).unwrap();
            let err = jet_distance(&exact, &approx);
            assert!(err <= 10.0 * eps * eps, "eps {eps}: err {err:e}");
        }
    }
}

#[test]
fn halving_the_step_quarters_the_jet_error() {
    let (u, v) = (0.4, -0.8);
    let exact = jet_at(&wave_analytic(), u, v).unwrap();
    let coarse = jet_distance(&exact, &jet_at(&wave_fd(1e-2), u, v).unwrap());
    let fine = jet_distance(&exact, &jet_at(&wave_fd(5e-3), u, v).unwrap());
    let factor = coarse / fine;
    assert!((3.5..=4.5).contains(&factor), "reduction factor {factor}");
}

#[test]
fn curvature_on_rotational_chart_matches_closed_form() {
    let params = RotationalParams::new(0.25, 2.0).unwrap();
    let p = profile(&params, &SamplingPolicy::default().with_n(64).with_r_max(3.0)).unwrap();
    let surf = revolve(&p);
    for i in 1..12 {
        let r = 0.2 + 2.5 * i as f64 / 12.0;
        let jet = jet_at(&surf, r, 1.0).unwrap();
        let forms = forms_at(&jet).unwrap();
        let s = slope_squared(0.25, 2.0, r);
        // K = f' f'' / (r (1 + f'^2)^2), with f' f'' = S'/2 = r (S = m + r^2 - 1).
        let expect = r / (r * (1.0 + s) * (1.0 + s));
        assert!(
            (forms.gauss - expect).abs() <= 1e-8 * expect.abs(),
            "r = {r}: K {} vs {}",
            forms.gauss,
            expect
        );
    }
}

#[test]
fn paraboloid_residual_value_at_unit_radius() {
    // K = 1/4 and <N, e3> = 1/sqrt(2) at r = 1 on the quarter-power
    // paraboloid, so for alpha = 1/2 the residual is 1/2 - 1/sqrt(2).
    let params = RotationalParams::new(0.25, 1.0).unwrap();
    let p = profile(&params, &SamplingPolicy::default().with_n(64)).unwrap();
    let surf = revolve(&p);
    let jet = jet_at(&surf, 1.0, 0.5).unwrap();
    let forms = forms_at(&jet).unwrap();
    assert!((forms.gauss - 0.25).abs() < 1e-12);
    let residual = signed_power(forms.gauss, 0.5).unwrap() - forms.normal.dot(Vec3::EZ);
    let expect = 0.5 - 1.0 / std::f64::consts::SQRT_2;
    assert!((residual - expect).abs() < 1e-12, "residual {residual}");
    assert!((residual + 0.2071).abs() < 1e-4);
}

#[test]
fn paraboloid_residual_under_quarter_power_is_tiny() {
    let params = RotationalParams::new(0.25, 1.0).unwrap();
    let p = profile(&params, &SamplingPolicy::default().with_n(128)).unwrap();
    let surf = revolve(&p);
    let spec = TranslatorSpec::new(0.25, Vec3::EZ).unwrap();
    let report = translator_residual(&surf, &spec, (64, 32)).unwrap();
    assert!(report.max_abs < 1e-9, "max_abs = {:e}", report.max_abs);
    assert!(report.max_abs >= report.mean_abs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Normals from arbitrary quadratic graph charts are unit length.
    #[test]
    fn normals_are_unit(
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        c in -2.0f64..2.0,
        u in -0.9f64..0.9,
        v in -0.9f64..0.9,
    ) {
        let surf = ParamSurface::analytic(ChartRect::new((-1.0, 1.0), (-1.0, 1.0)), move |u, v| {
            SurfaceJet {
                x: Vec3::new(u, v, a * u * u + b * u * v + c * v * v),
                xu: Vec3::new(1.0, 0.0, 2.0 * a * u + b * v),
                xv: Vec3::new(0.0, 1.0, b * u + 2.0 * c * v),
                xuu: Vec3::new(0.0, 0.0, 2.0 * a),
                xuv: Vec3::new(0.0, 0.0, b),
                xvv: Vec3::new(0.0, 0.0, 2.0 * c),
            }
        });
        let forms = forms_at(&jet_at(&surf, u, v).unwrap()).unwrap();
        prop_assert!((forms.normal.norm() - 1.0).abs() < 1e-12);
    }

    /// Rotating the chart and the speed by the same rigid motion leaves every
    /// residual entry unchanged.
    #[test]
    fn residual_is_isometry_equivariant(
        axis_x in -1.0f64..1.0,
        axis_y in -1.0f64..1.0,
        axis_z in 0.1f64..1.0,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let params = RotationalParams::new(0.25, 1.0).unwrap();
        let p = profile(&params, &SamplingPolicy::default().with_n(48)).unwrap();
        let surf = revolve(&p);
        let rot = Mat3::rotation(Vec3::new(axis_x, axis_y, axis_z), angle);

        let spec = TranslatorSpec::new(0.5, Vec3::EZ).unwrap();
        let base = translator_residual(&surf, &spec, (9, 7)).unwrap();

        let rotated_speed = rot.apply(Vec3::EZ);
        let spec_rot = TranslatorSpec::new(0.5, rotated_speed).unwrap();
        let turned = translator_residual(&surf.rotated(rot), &spec_rot, (9, 7)).unwrap();

        for (a, b) in base.residuals.iter().zip(turned.residuals.iter()) {
            let (a, b) = (a.unwrap(), b.unwrap());
            prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
