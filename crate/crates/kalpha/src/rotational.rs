//! Rotational translators: slope field, maximal domains, numeric and
//! closed-form profiles, the axis-orthogonal family, growth asymptotics and
//! the axis-alignment obstruction.
//!
//! The generating curve `z = f(r)` of a rotational translator with vertical
//! unit speed satisfies
//!
//! ```text
//! f'^2 = (1/m) e^{r^2} - 1                                  alpha = 1/2,
//! f'^2 = (m - (2a-1)/(2a) r^2)^{2a/(1-2a)} - 1              alpha = a != 1/2,
//! ```
//!
//! with an integration constant `m`. Everything else in this module is
//! bookkeeping around that radicand.

use thiserror::Error;

use crate::kernel::{signed_power, ChartRect, ParamSurface, SurfaceJet};
use crate::power::real_power;
use crate::profile::{build_profile, ProfileCurve, ProfileError, ProfileFamily, SamplingPolicy};
use crate::quad::{EndpointKind, Interval};
use crate::vec3::Vec3;

#[derive(Debug, Error)]
pub enum RotationalError {
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("alpha = 1/2 requires m > 0, got m = {m}")]
    HalfAlphaNeedsPositiveM { m: f64 },
    #[error("empty maximal domain: alpha = {alpha} outside [0, 1/2] requires m > 0, got m = {m}")]
    EmptyDomain { alpha: f64, m: f64 },
    #[error("no explicit antiderivative for alpha = {alpha} (m = {m})")]
    NoClosedForm { alpha: f64, m: f64 },
    #[error("r = {r} is outside the closed form's validity range")]
    OutsideValidity { r: f64 },
    #[error("asymptotic law requires alpha in (0, 1/2), got {alpha}")]
    AlphaOutsideAsymptoticRange { alpha: f64 },
    #[error("profile does not carry rotational parameters")]
    WrongFamily,
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Parameters of a rotational translator profile.
#[derive(Clone, Copy, Debug)]
pub struct RotationalParams {
    pub alpha: f64,
    pub m: f64,
    /// `true` for the `f' >= 0` branch; the other branch is its mirror image.
    pub positive_branch: bool,
    /// Additive constant of `f` (profiles are unique up to vertical shifts).
    pub offset: f64,
}

impl RotationalParams {
    pub fn new(alpha: f64, m: f64) -> Result<RotationalParams, RotationalError> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(RotationalError::ZeroAlpha);
        }
        if alpha == 0.5 && m <= 0.0 {
            return Err(RotationalError::HalfAlphaNeedsPositiveM { m });
        }
        Ok(RotationalParams { alpha, m, positive_branch: true, offset: 0.0 })
    }

    pub fn with_branch(mut self, positive: bool) -> Self {
        self.positive_branch = positive;
        self
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn branch_sign(&self) -> f64 {
        if self.positive_branch {
            1.0
        } else {
            -1.0
        }
    }

    /// Signed `(f', f'')` at radius `r`, with the one-sided limit at
    /// radicand zeros.
    pub fn slope_with_curvature(&self, r: f64) -> (f64, f64) {
        let (s, s1, s2) = slope_terms(self.alpha, self.m, r);
        slope_from_terms(s, s1, s2, self.branch_sign())
    }
}

/// Squared slope of the generating curve at radius `r`.
///
/// A negative return value (including `-inf` where the radicand's fractional
/// power has no real value) tags `r` as outside the maximal domain.
pub fn slope_squared(alpha: f64, m: f64, r: f64) -> f64 {
    slope_terms(alpha, m, r).0
}

/// `(S, S', S'')` where `S(r) = f'(r)^2`.
pub(crate) fn slope_terms(alpha: f64, m: f64, r: f64) -> (f64, f64, f64) {
    if alpha == 0.5 {
        let e = (r * r).exp() / m;
        (e - 1.0, 2.0 * r * e, (2.0 + 4.0 * r * r) * e)
    } else {
        let c = (2.0 * alpha - 1.0) / (2.0 * alpha);
        let q = 2.0 * alpha / (1.0 - 2.0 * alpha);
        let base = m - c * r * r;
        let base1 = -2.0 * c * r;
        let s = real_power(base, q) - 1.0;
        let s1 = q * real_power(base, q - 1.0) * base1;
        let s2 =
            q * (q - 1.0) * real_power(base, q - 2.0) * base1 * base1
                + q * real_power(base, q - 1.0) * (-2.0 * c);
        (s, s1, s2)
    }
}

/// Turns radicand jet `(S, S', S'')` into signed `(f', f'')`.
///
/// Interior points use `f'' = S' / (2 sqrt(S))`. At a radicand zero the slope
/// vanishes; the curvature is the one-sided limit: `sqrt(S''/2)` when `S'`
/// also vanishes there (axis-orthogonal case), otherwise infinite.
pub(crate) fn slope_from_terms(s: f64, s1: f64, s2: f64, sign: f64) -> (f64, f64) {
    const S_BOUNDARY: f64 = 1e-13;
    if s > S_BOUNDARY {
        let root = s.sqrt();
        (sign * root, sign * s1 / (2.0 * root))
    } else if s > -S_BOUNDARY {
        let d2 = if s1.abs() < 1e-8 {
            (s2.max(0.0) / 2.0).sqrt()
        } else {
            s1.signum() * f64::INFINITY
        };
        (0.0, sign * d2)
    } else {
        (f64::NAN, f64::NAN)
    }
}

/// Maximal domain of the generating curve for `(alpha, m)`.
///
/// `alpha = 1/2`: `[sqrt(max(0, log m)), inf)`. `alpha` in `(0, 1/2)`:
/// `[sqrt(max(0, 2a/(2a-1) (m-1))), inf)`. Otherwise the domain is the
/// bounded `[sqrt(max(0, 2a/(2a-1) (m-1))), sqrt(2a/(2a-1) m))`, closed with
/// vanishing slope on the left, open with `f, f' -> inf` on the right. A
/// negative left radicand clamps the left end to 0.
pub fn maximal_domain(alpha: f64, m: f64) -> Result<Interval, RotationalError> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(RotationalError::ZeroAlpha);
    }
    let lo_from_radicand = |radicand: f64| -> (f64, EndpointKind) {
        if radicand > 0.0 {
            (radicand.sqrt(), EndpointKind::SlopeZero)
        } else {
            let s0 = slope_squared(alpha, m, 0.0);
            let kind = if s0.abs() < 1e-14 { EndpointKind::SlopeZero } else { EndpointKind::Regular };
            (0.0, kind)
        }
    };

    if alpha == 0.5 {
        if m <= 0.0 {
            return Err(RotationalError::HalfAlphaNeedsPositiveM { m });
        }
        let (lo, kind) = lo_from_radicand(m.ln());
        Ok(Interval::unbounded_above(lo, true, kind))
    } else if alpha > 0.0 && alpha < 0.5 {
        let ratio = 2.0 * alpha / (2.0 * alpha - 1.0);
        let (lo, kind) = lo_from_radicand(ratio * (m - 1.0));
        Ok(Interval::unbounded_above(lo, true, kind))
    } else {
        let ratio = 2.0 * alpha / (2.0 * alpha - 1.0);
        if m <= 0.0 {
            return Err(RotationalError::EmptyDomain { alpha, m });
        }
        let hi = (ratio * m).sqrt();
        let (lo, kind) = lo_from_radicand(ratio * (m - 1.0));
        Ok(Interval::bounded(lo, hi, true, false, kind, EndpointKind::SlopeInfinite))
    }
}

/// Numeric profile: `f` by adaptive quadrature of `sqrt(f'^2)` from the
/// domain's closed endpoint, `f''` by analytic differentiation of the
/// radicand.
pub fn profile(
    params: &RotationalParams,
    policy: &SamplingPolicy,
) -> Result<ProfileCurve, RotationalError> {
    let domain = maximal_domain(params.alpha, params.m)?;
    Ok(build_profile(ProfileFamily::Rotational(*params), domain, policy, params.offset)?)
}

/// The explicit antiderivatives: `alpha = 1/4` for any `m`, and the `m = 1`
/// closed forms for `alpha` in `{1/3, 1/6, 1}` (the last through the real
/// logarithm branch of the inverse hyperbolic tangent, since its argument
/// exceeds 1 on the translator's domain).
pub fn closed_form_profile(alpha: f64, m: f64, r: f64) -> Result<f64, RotationalError> {
    let near = |a: f64, b: f64| (a - b).abs() < 1e-12;
    if near(alpha, 0.25) {
        let w2 = m + r * r - 1.0;
        if w2 < 0.0 {
            return Err(RotationalError::OutsideValidity { r });
        }
        if near(m, 1.0) {
            return Ok(0.5 * r * r);
        }
        let w = w2.sqrt();
        Ok(0.5 * (r * w + (m - 1.0) * (w + r).ln()))
    } else if near(alpha, 1.0 / 3.0) {
        if !near(m, 1.0) {
            return Err(RotationalError::NoClosedForm { alpha, m });
        }
        Ok((4.0 + r * r).powf(1.5) / 6.0)
    } else if near(alpha, 1.0 / 6.0) {
        if !near(m, 1.0) {
            return Err(RotationalError::NoClosedForm { alpha, m });
        }
        if r <= 0.0 {
            return Err(RotationalError::OutsideValidity { r });
        }
        let w = (2.0 * r * r + 1.0).sqrt();
        Ok((w - 1.0).sqrt() * (2.0 * r * r - w - 1.0) / (3.0 * r))
    } else if near(alpha, 1.0) {
        if !near(m, 1.0) {
            return Err(RotationalError::NoClosedForm { alpha, m });
        }
        if !(0.0..2.0).contains(&r) || (r - std::f64::consts::SQRT_2).abs() < 1e-12 {
            return Err(RotationalError::OutsideValidity { r });
        }
        let w = (4.0 - r * r).sqrt();
        let x = w / std::f64::consts::SQRT_2;
        // atanh continued past |x| = 1 through its real log form.
        let atanh_ext = 0.5 * ((x + 1.0).abs() / (x - 1.0).abs()).ln();
        Ok(-w + std::f64::consts::SQRT_2 * atanh_ext)
    } else {
        Err(RotationalError::NoClosedForm { alpha, m })
    }
}

/// The unique (up to vertical shift) profile meeting the rotation axis
/// orthogonally: `m = 1`, so `f'(0) = 0` and `f''(0+) = 1`.
pub fn orthogonal_profile(
    alpha: f64,
    policy: &SamplingPolicy,
) -> Result<ProfileCurve, RotationalError> {
    let params = RotationalParams::new(alpha, 1.0)?;
    profile(&params, policy)
}

/// Growth law of the axis-orthogonal profile for `alpha` in `(0, 1/2)`:
/// `f(r) ~ coefficient * r^exponent` with `exponent = 1/(1-2a)`.
pub fn asymptotic_coefficient(alpha: f64) -> Result<(f64, f64), RotationalError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(RotationalError::AlphaOutsideAsymptoticRange { alpha });
    }
    let exponent = 1.0 / (1.0 - 2.0 * alpha);
    let coefficient =
        (1.0 - 2.0 * alpha) * ((1.0 - 2.0 * alpha) / (2.0 * alpha)).powf(alpha / (1.0 - 2.0 * alpha));
    Ok((exponent, coefficient))
}

/// Surface of revolution `X(r, theta) = (r cos theta, r sin theta, f(r))`
/// over the profile's sampled radii, with analytic jets.
pub fn revolve(profile: &ProfileCurve) -> ParamSurface {
    let family = profile.family;
    let (anchor_r, anchor_f) = profile.anchor;
    let (r_lo, r_hi) = profile.r_range();
    ParamSurface::analytic(
        ChartRect::new((r_lo, r_hi), (0.0, std::f64::consts::TAU)),
        move |r, theta| {
            let (df, d2f) = family.slope(r);
            let f = family.height_from(anchor_r, anchor_f, r).unwrap_or(f64::NAN);
            let (s, c) = theta.sin_cos();
            SurfaceJet {
                x: Vec3::new(r * c, r * s, f),
                xu: Vec3::new(c, s, df),
                xv: Vec3::new(-r * s, r * c, 0.0),
                xuu: Vec3::new(0.0, 0.0, d2f),
                xuv: Vec3::new(-s, c, 0.0),
                xvv: Vec3::new(-r * c, -r * s, 0.0),
            }
        },
    )
}

/// One radius of the axis-alignment obstruction.
///
/// The translator equation on a rotational chart splits against
/// `{1, cos theta, sin theta}` into three coefficients that must all vanish;
/// `a1` and `a2` are proportional to the transverse speed components, which
/// is why the speed must be parallel to the rotation axis.
#[derive(Clone, Copy, Debug)]
pub struct AxisObstructionRow {
    pub r: f64,
    /// `K^alpha - v3 (1+f'^2)^{-1/2}`; `None` where `K^alpha` is undefined.
    pub a0: Option<f64>,
    /// `v1 f' (1+f'^2)^{-1/2}`.
    pub a1: f64,
    /// `v2 f' (1+f'^2)^{-1/2}`.
    pub a2: f64,
}

pub fn axis_obstruction(
    profile: &ProfileCurve,
    v: Vec3,
) -> Result<Vec<AxisObstructionRow>, RotationalError> {
    let params = match profile.family {
        ProfileFamily::Rotational(p) => p,
        _ => return Err(RotationalError::WrongFamily),
    };
    Ok(profile
        .samples
        .iter()
        .filter(|s| s.r > 0.0)
        .map(|sample| {
            let r = sample.r;
            let (s, s1, _) = slope_terms(params.alpha, params.m, r);
            let one_plus = 1.0 + s.max(0.0);
            let w = one_plus.sqrt();
            // f' f'' = S'/2 regardless of branch, finite even at radicand zeros.
            let gauss = (s1 / 2.0) / (r * one_plus * one_plus);
            let df = sample.df;
            AxisObstructionRow {
                r,
                a0: signed_power(gauss, params.alpha).map(|p| p - v.z / w),
                a1: v.x * df / w,
                a2: v.y * df / w,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_squared_examples() {
        // Quarter-power paraboloid: f'^2 = (1 + r^2) - 1 = r^2.
        assert!((slope_squared(0.25, 1.0, 1.0) - 1.0).abs() < 1e-14);
        // Half power at the axis: e^0/1 - 1 = 0.
        assert!(slope_squared(0.5, 1.0, 0.0).abs() < 1e-14);
        // alpha = 1: (1 - 1/2)^{-2} - 1 = 3.
        assert!((slope_squared(1.0, 1.0, 1.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn domain_for_alpha_one() {
        let d = maximal_domain(1.0, 1.0).unwrap();
        assert_eq!(d.lo, 0.0);
        assert!((d.hi.unwrap() - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(d.lo_kind, EndpointKind::SlopeZero);
        assert_eq!(d.hi_kind, EndpointKind::SlopeInfinite);
        assert!(!d.hi_closed);
    }

    #[test]
    fn domain_for_half_alpha() {
        let d = maximal_domain(0.5, std::f64::consts::E).unwrap();
        assert!((d.lo - 1.0).abs() < 1e-14);
        assert!(d.hi.is_none());
        assert!(maximal_domain(0.5, -1.0).is_err());
    }

    #[test]
    fn domain_for_quarter_alpha_small_m() {
        let d = maximal_domain(0.25, 0.5).unwrap();
        assert!((d.lo - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(d.hi.is_none());
        assert_eq!(d.lo_kind, EndpointKind::SlopeZero);
    }

    #[test]
    fn domain_clamps_at_zero() {
        // m > 1 makes the left radicand negative; the end clamps to 0 with
        // nonzero slope there.
        let d = maximal_domain(0.25, 2.0).unwrap();
        assert_eq!(d.lo, 0.0);
        assert_eq!(d.lo_kind, EndpointKind::Regular);
    }

    #[test]
    fn empty_domain_rejected() {
        assert!(matches!(
            maximal_domain(1.0, -0.5),
            Err(RotationalError::EmptyDomain { .. })
        ));
    }

    #[test]
    fn closed_form_quarter_examples() {
        // m = 1 collapses to the parabola r^2/2.
        assert!((closed_form_profile(0.25, 1.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        // m = 2, r = 1: (sqrt2 + log(1 + sqrt2)) / 2.
        let expect = 0.5 * (std::f64::consts::SQRT_2 + (1.0 + std::f64::consts::SQRT_2).ln());
        assert!((closed_form_profile(0.25, 2.0, 1.0).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn closed_form_third_at_zero() {
        assert!((closed_form_profile(1.0 / 3.0, 1.0, 0.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_rejections() {
        assert!(closed_form_profile(0.4, 1.0, 1.0).is_err());
        assert!(closed_form_profile(1.0 / 3.0, 2.0, 1.0).is_err());
        assert!(closed_form_profile(1.0, 1.0, 2.5).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        let (e3, c3) = asymptotic_coefficient(1.0 / 3.0).unwrap();
        assert!((e3 - 3.0).abs() < 1e-12);
        assert!((c3 - 1.0 / 6.0).abs() < 1e-12);
        let (e4, c4) = asymptotic_coefficient(0.25).unwrap();
        assert!((e4 - 2.0).abs() < 1e-12);
        assert!((c4 - 0.5).abs() < 1e-12);
        // exponent -> 1 as alpha -> 0+.
        let (e0, _) = asymptotic_coefficient(1e-6).unwrap();
        assert!((e0 - 1.0).abs() < 1e-5);
        assert!(asymptotic_coefficient(0.5).is_err());
        assert!(asymptotic_coefficient(-0.2).is_err());
    }

    #[test]
    fn paraboloid_profile_matches_r2_over_2() {
        let params = RotationalParams::new(0.25, 1.0).unwrap();
        let p = profile(&params, &SamplingPolicy::default().with_n(64).with_r_max(3.0)).unwrap();
        for s in &p.samples {
            assert!((s.f - 0.5 * s.r * s.r).abs() < 1e-9, "r = {}", s.r);
            assert!((s.df - s.r).abs() < 1e-12);
            assert!((s.d2f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_profile_axis_behaviour() {
        for &alpha in &[0.2, 0.25, 1.0 / 3.0, 0.5, 1.0, 2.0] {
            let params = RotationalParams::new(alpha, 1.0).unwrap();
            let (df0, d2f0) = params.slope_with_curvature(0.0);
            assert_eq!(df0, 0.0, "alpha = {alpha}");
            assert!((d2f0 - 1.0).abs() < 1e-6, "alpha = {alpha}, f''(0) = {d2f0}");
            let (_, d2f) = params.slope_with_curvature(1e-3);
            assert!((d2f - 1.0).abs() < 1e-3, "alpha = {alpha}, f''(1e-3) = {d2f}");
        }
    }

    #[test]
    fn rotational_jet_example() {
        let params = RotationalParams::new(0.25, 1.0).unwrap();
        let p = profile(&params, &SamplingPolicy::default().with_n(32)).unwrap();
        let surf = revolve(&p);
        let jet = crate::kernel::jet_at(&surf, 1.0, 1e-9).unwrap();
        assert!((jet.x.x - 1.0).abs() < 1e-8);
        assert!((jet.x.z - 0.5).abs() < 1e-9);
        assert!((jet.xu.x - 1.0).abs() < 1e-8);
        assert!((jet.xu.z - 1.0).abs() < 1e-12);
        assert!((jet.xv.y - 1.0).abs() < 1e-8);
    }

    #[test]
    fn axis_obstruction_vanishes_only_for_vertical_speed() {
        let params = RotationalParams::new(0.25, 1.0).unwrap();
        let p = profile(&params, &SamplingPolicy::default().with_n(64)).unwrap();

        for row in axis_obstruction(&p, Vec3::EZ).unwrap() {
            assert!(row.a0.unwrap().abs() < 1e-10);
            assert_eq!(row.a1, 0.0);
            assert_eq!(row.a2, 0.0);
        }
        // v = (1,0,0): a1(r) = f'(1+f'^2)^{-1/2} = r / sqrt(1 + r^2) on the
        // paraboloid, nonzero at every positive radius.
        for row in axis_obstruction(&p, Vec3::EX).unwrap() {
            let expect = row.r / (1.0 + row.r * row.r).sqrt();
            assert!((row.a1 - expect).abs() < 1e-10);
            assert!(row.a1 > 0.0);
        }
        for row in axis_obstruction(&p, Vec3::EY).unwrap() {
            assert!(row.a2 > 0.0);
        }
    }
}
