//! Helicoidal checks: the direct screw chart and the Bour chart describe the
//! same family, both pass the kernel oracle, and the Bour identities
//! `K = -U''(s)/U`, `<N, e3> = U'(s)` hold against the kernel.

use kalpha::helicoidal::{
    axis_obstruction_hel, bour_admissible_range, bour_chart, bour_constant, bour_df_du,
    bour_s_of_u, bour_u_of_s_alpha1, hel_domain, hel_profile, hel_slope_terms, helicoid_surface,
    BourChart, DomainScan, HelicoidalParams,
};
use kalpha::kernel::{forms_at, jet_at, translator_residual, ParamSurface, TranslatorSpec};
use kalpha::profile::{ProfileCurve, SamplingPolicy};
use kalpha::quad::integrate;
use kalpha::Vec3;

const CASES: [(f64, f64, f64); 3] = [(0.25, 0.0, 1.0), (1.0 / 3.0, 1.0, 1.0), (1.0, 0.0, 1.0)];

fn forms_at_chart(surface: &ParamSurface, sigma: f64, u: f64, w: f64) -> kalpha::kernel::FormsAtPoint {
    let (a, b) = if sigma >= 0.0 { (u, w) } else { (w, u) };
    forms_at(&jet_at(surface, a, b).unwrap()).unwrap()
}

#[test]
fn direct_charts_pass_the_kernel_oracle() {
    for &(alpha, m, h) in &CASES {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let prof = hel_profile(
            &params,
            &SamplingPolicy::default().with_n(96).with_r_max(3.0).with_margin(0.03),
        )
        .unwrap();
        let surf = helicoid_surface(&prof, h).unwrap();
        let spec = TranslatorSpec::new(alpha, Vec3::EZ).unwrap();
        let report = translator_residual(&surf, &spec, (48, 16)).unwrap();
        assert!(
            report.max_abs < 1e-6,
            "alpha {alpha}, m {m}: max residual {:e}",
            report.max_abs
        );
    }
}

/// Chart window inside the admissible Bour range for one family.
fn bour_window(params: &HelicoidalParams) -> (f64, f64) {
    let range = bour_admissible_range(params, &DomainScan::default()).unwrap();
    match range.hi {
        Some(hi) => {
            let lo = if range.lo_closed { range.lo } else { range.lo + 0.05 * (hi - range.lo) };
            (lo, hi)
        }
        None => (range.lo, range.lo + 2.0),
    }
}

#[test]
fn bour_charts_pass_the_kernel_oracle() {
    for &(alpha, m, h) in &CASES {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let (u_lo, u_hi) = bour_window(&params);
        let chart = bour_chart(&params, u_lo, u_hi, 64).unwrap();
        let surf = chart.surface();
        let spec = TranslatorSpec::new(alpha, Vec3::EZ).unwrap();
        let report = translator_residual(&surf, &spec, (32, 12)).unwrap();
        assert!(
            report.max_abs < 1e-6,
            "alpha {alpha}, m {m}: Bour residual {:e}",
            report.max_abs
        );
    }
}

#[test]
fn bour_identities_match_the_kernel() {
    for &(alpha, m, h) in &CASES {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let (u_lo, u_hi) = bour_window(&params);
        let chart = bour_chart(&params, u_lo, u_hi, 64).unwrap();
        let surf = chart.surface();
        for i in 1..10 {
            let u = u_lo + (u_hi - u_lo) * i as f64 / 10.0;
            let forms = forms_at_chart(&surf, chart.sigma, u, 1.0);
            let k_bour = chart.curvature_from_bour(u);
            assert!(
                (forms.gauss - k_bour).abs() < 1e-6 * (1.0 + k_bour.abs()),
                "alpha {alpha}: kernel K {} vs -U''/U {}",
                forms.gauss,
                k_bour
            );
            let n3 = forms.normal.dot(Vec3::EZ);
            let p = chart.u_prime_of_s(u);
            assert!(
                (n3 - p).abs() < 1e-6,
                "alpha {alpha}: <N,e3> {} vs U'(s) {}",
                n3,
                p
            );
        }
    }
}

#[test]
fn bour_curvature_matches_table_differencing() {
    // -(d^2 U/ds^2)/U from the tabulated (s, U) pairs, non-uniform central
    // differences, against the kernel curvature.
    let params = HelicoidalParams::new(1.0 / 3.0, 1.0, 1.0).unwrap();
    let (u_lo, u_hi) = bour_window(&params);
    let chart = bour_chart(&params, u_lo, u_hi, 1024).unwrap();
    let surf = chart.surface();
    let s = &chart.samples;
    for i in (32..s.len() - 32).step_by(64) {
        let (s0, s1, s2) = (s[i - 1].s, s[i].s, s[i + 1].s);
        let (u0, u1, u2) = (s[i - 1].u, s[i].u, s[i + 1].u);
        let h0 = s1 - s0;
        let h1 = s2 - s1;
        let du_ds = (u2 - u0) / (s2 - s0);
        let d2u_ds2 = 2.0 * (h0 * u2 - (h0 + h1) * u1 + h1 * u0) / (h0 * h1 * (h0 + h1));
        let k_table = -d2u_ds2 / u1;
        let forms = forms_at_chart(&surf, chart.sigma, u1, 2.0);
        assert!(
            (forms.gauss - k_table).abs() < 1e-6 * (1.0 + forms.gauss.abs()),
            "K {} vs table {}",
            forms.gauss,
            k_table
        );
        assert!((du_ds - chart.u_prime_of_s(u1)).abs() < 1e-6);
    }
}

#[test]
fn explicit_df_form_equals_the_chain_rule() {
    // The Bour df/dU row equals f'(r) dr/dU computed from the direct profile
    // once the constants are mapped.
    for &(alpha, m, h) in CASES.iter().chain([(0.5, 1.0, 1.0)].iter()) {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let m_bour = bour_constant(alpha, m, h).unwrap();
        let (u_lo, u_hi) = bour_window(&params);
        for i in 1..12 {
            let u = u_lo + (u_hi - u_lo) * i as f64 / 12.0;
            let r = (u * u - h * h).sqrt();
            let (df, _) = params.slope_with_curvature(r);
            let chain = df * u / r;
            let explicit = bour_df_du(alpha, m_bour, h, u).unwrap();
            assert!(
                (explicit - chain.abs()).abs() < 1e-9 * (1.0 + chain.abs()),
                "alpha {alpha}, U {u}: explicit {explicit} vs chain {chain}"
            );
        }
    }
}

#[test]
fn theta_increments_follow_h_over_u_squared_df() {
    let params = HelicoidalParams::new(0.25, 0.0, 1.0).unwrap();
    let (u_lo, u_hi) = bour_window(&params);
    let chart = bour_chart(&params, u_lo, u_hi, 64).unwrap();
    let s = &chart.samples;
    let du = s[1].u - s[0].u;
    for i in 0..s.len() - 1 {
        let dtheta = s[i + 1].theta - s[i].theta;
        let df = s[i + 1].f - s[i].f;
        let u_mid = 0.5 * (s[i].u + s[i + 1].u);
        let predicted = 1.0 / (u_mid * u_mid) * df;
        assert!(
            (dtheta - predicted).abs() < 0.5 * du * du * (1.0 + df.abs() / du),
            "i = {i}: dTheta {dtheta} vs {predicted}"
        );
    }
}

#[test]
fn first_integral_of_the_screw_families() {
    // g = r^2(1+f'^2) + h^2 satisfies r g' = 2 g + 2 sigma r^{1/a} g^{(4a-1)/(2a)}.
    let check = |alpha: f64, m: f64, h: f64, sigma: f64| {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let prof = hel_profile(
            &params,
            &SamplingPolicy::default().with_n(64).with_r_max(2.5).with_margin(0.04),
        )
        .unwrap();
        let (r_lo, r_hi) = prof.r_range();
        for i in 1..12 {
            let r = r_lo + (r_hi - r_lo) * i as f64 / 12.5;
            let (w, w1, _) = hel_slope_terms(alpha, m, h, r);
            let g = r * r * (1.0 + w) + h * h;
            let g1 = 2.0 * r * (1.0 + w) + r * r * w1;
            let lhs = r * g1;
            let rhs = 2.0 * g + 2.0 * sigma * r.powf(1.0 / alpha) * g.powf((4.0 * alpha - 1.0) / (2.0 * alpha));
            assert!(
                (lhs - rhs).abs() < 1e-6 * (1.0 + rhs.abs()),
                "alpha {alpha}: r {r}, lhs {lhs} vs rhs {rhs}"
            );
        }
    };
    check(0.5, 1.0, 1.0, 1.0);
    check(0.25, 0.0, 1.0, 1.0);
    check(1.0 / 3.0, 1.0, 1.0, 1.0);
    // K < 0 with odd integer exponent: the orientation-flipped branch.
    check(1.0, 0.0, 1.0, -1.0);
}

#[test]
fn kernel_curvature_matches_the_explicit_k_formula() {
    let params = HelicoidalParams::new(0.25, 0.0, 1.0).unwrap();
    let prof = hel_profile(&params, &SamplingPolicy::default().with_n(96).with_r_max(3.0)).unwrap();
    let surf = helicoid_surface(&prof, 1.0).unwrap();
    for i in 1..10 {
        let r = 1.3 + (3.0 - 1.3) * i as f64 / 10.0;
        let forms = forms_at(&jet_at(&surf, r, 2.0).unwrap()).unwrap();
        let (w, w1, _) = hel_slope_terms(0.25, 0.0, 1.0, r);
        let d = r * r * (1.0 + w) + 1.0;
        let expect = (r * r * r * w1 / 2.0 - 1.0) / (d * d);
        assert!(
            (forms.gauss - expect).abs() < 1e-8 * expect.abs().max(1.0),
            "r {r}: K {} vs {}",
            forms.gauss,
            expect
        );
        // The reduced residual form K^alpha - r/sqrt(D) agrees with the
        // kernel residual.
        let reduced = forms.gauss.powf(0.25) - r / d.sqrt();
        let kernel = forms.gauss.powf(0.25) - forms.normal.dot(Vec3::EZ);
        assert!((reduced - kernel).abs() < 1e-12);
    }
}

#[test]
fn plain_helicoid_has_the_textbook_curvature() {
    // f = 0, h = 1: K = -1/(r^2+1)^2.
    let prof = ProfileCurve::constant(0.0, 0.4, 2.5, 8);
    let surf = helicoid_surface(&prof, 1.0).unwrap();
    for &r in &[0.5, 1.0, 1.9] {
        let forms = forms_at(&jet_at(&surf, r, 0.7).unwrap()).unwrap();
        let expect = -1.0 / (r * r + 1.0).powi(2);
        assert!((forms.gauss - expect).abs() < 1e-12);
    }
    // The screw direction at (r, theta) = (1, 0): X_theta = (0, 1, h).
    let jet = jet_at(&surf, 1.0, 1e-12).unwrap();
    assert!((jet.xv.x).abs() < 1e-10);
    assert!((jet.xv.y - 1.0).abs() < 1e-10);
    assert!((jet.xv.z - 1.0).abs() < 1e-12);
}

#[test]
fn large_pitch_tilts_the_normal_toward_horizontal() {
    let prof = ProfileCurve::constant(0.0, 0.5, 2.0, 8);
    let surf = helicoid_surface(&prof, 40.0).unwrap();
    let forms = forms_at(&jet_at(&surf, 1.0, 1.0).unwrap()).unwrap();
    assert!(forms.normal.dot(Vec3::EZ).abs() < 0.05);
}

#[test]
fn axis_obstruction_forces_vertical_speed() {
    let params = HelicoidalParams::new(0.25, 0.0, 1.0).unwrap();
    let prof = hel_profile(&params, &SamplingPolicy::default().with_n(48).with_r_max(3.0)).unwrap();

    for row in axis_obstruction_hel(&prof, 1.0, Vec3::EZ).unwrap() {
        assert!(row.a0.unwrap().abs() < 1e-8, "r {}: a0 {:?}", row.r, row.a0);
        assert_eq!(row.a1, 0.0);
        assert_eq!(row.a2, 0.0);
    }
    // v = e_y: a1 = h/sqrt(D) > 0 whatever the profile does.
    for row in axis_obstruction_hel(&prof, 1.0, Vec3::EY).unwrap() {
        assert!(row.a1 > 0.0);
        assert!(row.a2 >= 0.0);
    }
    // v = e_x: at the slope-zero endpoint f' = 0 but a2 = -h/sqrt(D) persists.
    let rows = axis_obstruction_hel(&prof, 1.0, Vec3::EX).unwrap();
    let first = rows.first().unwrap();
    assert!(first.a1.abs() < 1e-4);
    assert!(first.a2 < -1e-3);
}

#[test]
fn alpha_one_inverse_against_numerical_inversion() {
    // U(s) = sqrt(2m) tanh(sqrt(m/2) s) inverts the explicit s(U) row; check
    // by solving s(U) = s numerically on the principal branch.
    let m = 0.5f64;
    for i in 1..20 {
        let u_true = 0.999 * (2.0 * m).sqrt() * i as f64 / 20.0;
        let s = bour_s_of_u(1.0, m, u_true).unwrap();
        let u_inv = bour_u_of_s_alpha1(m, s).unwrap();
        assert!((u_inv - u_true).abs() < 1e-8, "u {u_true} vs inverse {u_inv}");
    }
}

#[test]
fn bour_closed_forms_match_quadrature() {
    // Printed rows against direct integration of ds/dU over their ranges.
    let check = |alpha: f64, m: f64, u0: f64, u1: f64| {
        let numeric = integrate(|t| kalpha::helicoidal::bour_ds_du(alpha, m, t), u0, u1, 1e-12)
            .unwrap()
            .value;
        let explicit = bour_s_of_u(alpha, m, u1).unwrap() - bour_s_of_u(alpha, m, u0).unwrap();
        assert!(
            (numeric - explicit).abs() < 1e-8 * (1.0 + explicit.abs()),
            "alpha {alpha}, m {m}: quadrature {numeric} vs explicit {explicit}"
        );
    };
    check(0.25, 1.0, 0.2, 2.0);
    check(0.25, 0.0, 0.2, 2.0);
    check(0.25, -1.0, 1.05, 2.0);
    check(1.0 / 3.0, 1.0, 0.0, 2.0);
    check(1.0 / 3.0, -0.5, 0.0, 2.0);
    check(1.0, 0.5, 0.1, 0.9);
    check(1.0, 0.0, 0.5, 2.0);
    check(1.0, -0.5, 0.0, 1.5);
    // Quadrature fallback for an exponent without a explicit row.
    check(0.2, 1.0, 0.0, 1.5);
}

#[test]
fn domain_and_scan_are_consistent_with_the_slope_field() {
    for &(alpha, m, h) in &CASES {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let d = hel_domain(&params, &DomainScan::default()).unwrap();
        let mid = match d.hi {
            Some(hi) => 0.5 * (d.lo + hi),
            None => d.lo + 1.0,
        };
        assert!(kalpha::helicoidal::hel_slope_squared(alpha, m, h, mid) >= 0.0);
    }
}

#[test]
fn bour_chart_positions_are_finite_on_the_closed_boundary() {
    // Mesh export samples the chart boundary inclusively; the left edge sits
    // exactly at the chart's anchor.
    for &(alpha, m, h) in &CASES {
        let params = HelicoidalParams::new(alpha, m, h).unwrap();
        let (u_lo, u_hi) = bour_window(&params);
        let chart = bour_chart(&params, u_lo, u_hi, 32).unwrap();
        let surf = chart.surface();
        let (u0, u1) = surf.domain.u;
        let (v0, v1) = surf.domain.v;
        for i in 0..=4 {
            for j in 0..=4 {
                let u = u0 + (u1 - u0) * i as f64 / 4.0;
                let v = v0 + (v1 - v0) * j as f64 / 4.0;
                let x = surf.position(u, v).unwrap();
                assert!(x.is_finite(), "({u}, {v}) -> {x:?}");
            }
        }
    }
}

#[test]
fn bour_chart_sigma_flips_only_for_the_negative_branch() {
    let quarter = HelicoidalParams::new(0.25, 0.0, 1.0).unwrap();
    let (lo, hi) = bour_window(&quarter);
    assert_eq!(bour_chart(&quarter, lo, hi, 16).unwrap().sigma, 1.0);

    let one = HelicoidalParams::new(1.0, 0.0, 1.0).unwrap();
    let (lo, hi) = bour_window(&one);
    let chart: BourChart = bour_chart(&one, lo, hi, 16).unwrap();
    assert_eq!(chart.sigma, -1.0);
    // s decreases with U on this branch.
    assert!(chart.samples[1].s < chart.samples[0].s);
}
