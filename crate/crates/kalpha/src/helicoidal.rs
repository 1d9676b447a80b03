//! Helicoidal translators, by direct profile integration and through Bour
//! coordinates.
//!
//! Direct route: the generating curve of a helicoidal translator with pitch
//! `h` and vertical unit speed satisfies
//!
//! ```text
//! f'^2 = m e^{r^2} - h^2/r^2 - 1                                  alpha = 1/2,
//! f'^2 = ((1-2a)/(2a) r^2 + m)^{2a/(1-2a)} - h^2/r^2 - 1          alpha = a != 1/2.
//! ```
//!
//! Bour route: in coordinates where the first form is `ds^2 + U^2 dt^2`
//! (`U^2 = r^2 + h^2`), the translator equation reduces to the ODE
//! `-U''(s)/U = (U'(s))^{1/a}`, whose first integration gives `ds/dU` with
//! its own constant. The two constants label the same family differently;
//! [`bour_constant`] converts the direct one into the Bour one so that both
//! routes build the same surface.

use thiserror::Error;

use crate::kernel::{signed_power, ChartRect, ParamSurface, SurfaceJet};
use crate::power::real_power;
use crate::profile::{build_profile, ProfileCurve, ProfileError, ProfileFamily, SamplingPolicy};
use crate::quad::{self, EndpointKind, Interval, QuadError, RootError};
use crate::vec3::Vec3;

#[derive(Debug, Error)]
pub enum HelicoidalError {
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("pitch h must be nonzero (h = 0 is the rotational case)")]
    ZeroPitch,
    #[error("alpha = 1/2 requires m > 0, got m = {m}")]
    HalfAlphaNeedsPositiveM { m: f64 },
    #[error("no radius with nonnegative slope radicand in the scan range [{lo}, {hi}]")]
    NoAdmissibleRegion { lo: f64, hi: f64 },
    #[error("U = {u} is outside the admissible Bour range")]
    BourRange { u: f64 },
    #[error("fractional power has nonpositive base at U = {u}")]
    FractionalPowerBase { u: f64 },
    #[error("the first-integral base changes sign at {at} inside the requested range")]
    PoleInsideRange { at: f64 },
    #[error("profile does not carry helicoidal parameters")]
    WrongFamily,
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("quadrature failed: {0}")]
    Quad(#[from] QuadError),
    #[error("root refinement failed: {0}")]
    Root(#[from] RootError),
}

/// Parameters of a helicoidal translator profile, in the direct convention.
#[derive(Clone, Copy, Debug)]
pub struct HelicoidalParams {
    pub alpha: f64,
    pub m: f64,
    /// Pitch of the screw motion.
    pub h: f64,
    pub positive_branch: bool,
}

impl HelicoidalParams {
    pub fn new(alpha: f64, m: f64, h: f64) -> Result<HelicoidalParams, HelicoidalError> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(HelicoidalError::ZeroAlpha);
        }
        if h == 0.0 {
            return Err(HelicoidalError::ZeroPitch);
        }
        if alpha == 0.5 && m <= 0.0 {
            return Err(HelicoidalError::HalfAlphaNeedsPositiveM { m });
        }
        Ok(HelicoidalParams { alpha, m, h, positive_branch: true })
    }

    pub fn with_branch(mut self, positive: bool) -> Self {
        self.positive_branch = positive;
        self
    }

    pub fn branch_sign(&self) -> f64 {
        if self.positive_branch {
            1.0
        } else {
            -1.0
        }
    }

    pub fn slope_with_curvature(&self, r: f64) -> (f64, f64) {
        let (w, w1, w2) = hel_slope_terms(self.alpha, self.m, self.h, r);
        crate::rotational::slope_from_terms(w, w1, w2, self.branch_sign())
    }
}

fn kappa(alpha: f64) -> f64 {
    (1.0 - 2.0 * alpha) / (2.0 * alpha)
}

/// Squared slope of the helicoidal generating curve; negative values (and
/// `-inf` where the fractional power is undefined) tag radii outside the
/// domain. `h = 0` is accepted here so the rotational limit can be compared.
pub fn hel_slope_squared(alpha: f64, m: f64, h: f64, r: f64) -> f64 {
    hel_slope_terms(alpha, m, h, r).0
}

/// `(W, W', W'')` where `W(r) = f'(r)^2`.
pub fn hel_slope_terms(alpha: f64, m: f64, h: f64, r: f64) -> (f64, f64, f64) {
    let h2 = h * h;
    if alpha == 0.5 {
        let e = (r * r).exp() * m;
        (
            e - h2 / (r * r) - 1.0,
            2.0 * r * e + 2.0 * h2 / (r * r * r),
            (2.0 + 4.0 * r * r) * e - 6.0 * h2 / (r * r * r * r),
        )
    } else {
        let k = kappa(alpha);
        let q = 2.0 * alpha / (1.0 - 2.0 * alpha);
        let base = k * r * r + m;
        let base1 = 2.0 * k * r;
        let w = real_power(base, q) - h2 / (r * r) - 1.0;
        let w1 = q * real_power(base, q - 1.0) * base1 + 2.0 * h2 / (r * r * r);
        let w2 = q * (q - 1.0) * real_power(base, q - 2.0) * base1 * base1
            + q * real_power(base, q - 1.0) * (2.0 * k)
            - 6.0 * h2 / (r * r * r * r);
        (w, w1, w2)
    }
}

/// Scan configuration for locating the admissible radius interval.
#[derive(Clone, Copy, Debug)]
pub struct DomainScan {
    pub r_lo: f64,
    pub r_hi: f64,
    pub n: usize,
    pub root_tol: f64,
}

impl Default for DomainScan {
    fn default() -> Self {
        // Roots to machine precision so the endpoint samples carry an exact
        // zero slope.
        DomainScan { r_lo: 1e-4, r_hi: 1e3, n: 4096, root_tol: 1e-15 }
    }
}

/// Maximal radius interval with `f'^2 >= 0` adjacent to the first admissible
/// radius found by a logarithmic scan. Radicand roots become slope-zero
/// endpoints (refined by the hybrid root finder); ends where the radicand or
/// the profile blows up are open with kind slope-infinite.
pub fn hel_domain(params: &HelicoidalParams, scan: &DomainScan) -> Result<Interval, HelicoidalError> {
    let w = |r: f64| hel_slope_squared(params.alpha, params.m, params.h, r);
    // Clamp +-inf so the root finder only sees finite samples.
    let w_clamped = |r: f64| w(r).clamp(-1e300, 1e300);
    let base = |r: f64| {
        if params.alpha == 0.5 {
            1.0
        } else {
            kappa(params.alpha) * r * r + params.m
        }
    };

    let n = scan.n.max(16);
    let ratio = (scan.r_hi / scan.r_lo).ln();
    let grid: Vec<f64> = (0..n)
        .map(|i| scan.r_lo * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect();

    let inside = |r: f64| w(r) >= 0.0;
    let seed = match grid.iter().position(|&r| inside(r)) {
        Some(i) => i,
        None => {
            return Err(HelicoidalError::NoAdmissibleRegion { lo: scan.r_lo, hi: scan.r_hi })
        }
    };

    let pole_between = |a: f64, b: f64| base(a).signum() != base(b).signum();

    let mut end = seed;
    while end + 1 < n && inside(grid[end + 1]) && !pole_between(grid[end], grid[end + 1]) {
        end += 1;
    }

    let (lo, lo_closed, lo_kind) = if seed == 0 {
        // Admissible all the way down the scan: the slope blows up toward 0.
        (0.0, false, EndpointKind::SlopeInfinite)
    } else if pole_between(grid[seed - 1], grid[seed]) {
        let at = (-params.m / kappa(params.alpha)).max(0.0).sqrt();
        (at, false, EndpointKind::SlopeInfinite)
    } else {
        let root = quad::bracket_root(w_clamped, grid[seed - 1], grid[seed], scan.root_tol)?;
        (root, true, EndpointKind::SlopeZero)
    };

    if end == n - 1 {
        Ok(Interval { lo, hi: None, lo_closed, hi_closed: false, lo_kind, hi_kind: EndpointKind::Unbounded })
    } else if pole_between(grid[end], grid[end + 1]) {
        let at = (-params.m / kappa(params.alpha)).max(0.0).sqrt();
        Ok(Interval { lo, hi: Some(at), lo_closed, hi_closed: false, lo_kind, hi_kind: EndpointKind::SlopeInfinite })
    } else {
        let root = quad::bracket_root(w_clamped, grid[end], grid[end + 1], scan.root_tol)?;
        Ok(Interval { lo, hi: Some(root), lo_closed, hi_closed: true, lo_kind, hi_kind: EndpointKind::SlopeZero })
    }
}

/// Numeric helicoidal profile over the admissible radii.
pub fn hel_profile(
    params: &HelicoidalParams,
    policy: &SamplingPolicy,
) -> Result<ProfileCurve, HelicoidalError> {
    let domain = hel_domain(params, &DomainScan::default())?;
    Ok(build_profile(ProfileFamily::Helicoidal(*params), domain, policy, 0.0)?)
}

/// Screw chart `X(r, theta) = (r cos theta, r sin theta, f(r) + h theta)`
/// with analytic jets.
///
/// Chart coordinates are ordered so the kernel normal satisfies
/// `<N, e3> = sign(K^alpha)` pointwise: families with negative curvature and
/// odd integer exponent need the opposite orientation, which a swap of the
/// two chart coordinates provides.
pub fn helicoid_surface(profile: &ProfileCurve, h: f64) -> Result<ParamSurface, HelicoidalError> {
    let family = profile.family;
    let (anchor_r, anchor_f) = profile.anchor;
    let (r_lo, r_hi) = profile.r_range();

    let alpha = match family {
        ProfileFamily::Helicoidal(p) => Some(p.alpha),
        ProfileFamily::Rotational(p) => Some(p.alpha),
        ProfileFamily::Constant { .. } => None,
    };
    let r_mid = 0.5 * (r_lo + r_hi);
    let k_mid = gauss_curvature_from_family(&family, h, r_mid);
    let sigma = alpha
        .and_then(|a| signed_power(k_mid, a))
        .map(|s| if s < 0.0 { -1.0 } else { 1.0 })
        .unwrap_or(1.0);

    let jet = move |r: f64, theta: f64| -> SurfaceJet {
        let (df, d2f) = family.slope(r);
        let f = family.height_from(anchor_r, anchor_f, r).unwrap_or(f64::NAN);
        let (s, c) = theta.sin_cos();
        SurfaceJet {
            x: Vec3::new(r * c, r * s, f + h * theta),
            xu: Vec3::new(c, s, df),
            xv: Vec3::new(-r * s, r * c, h),
            xuu: Vec3::new(0.0, 0.0, d2f),
            xuv: Vec3::new(-s, c, 0.0),
            xvv: Vec3::new(-r * c, -r * s, 0.0),
        }
    };

    let theta_range = (0.0, std::f64::consts::TAU);
    Ok(if sigma >= 0.0 {
        ParamSurface::analytic(ChartRect::new((r_lo, r_hi), theta_range), jet)
    } else {
        ParamSurface::analytic(ChartRect::new(theta_range, (r_lo, r_hi)), move |theta, r| {
            let j = jet(r, theta);
            SurfaceJet { x: j.x, xu: j.xv, xv: j.xu, xuu: j.xvv, xuv: j.xuv, xvv: j.xuu }
        })
    })
}

/// `K = (r^3 f' f'' - h^2) / D^2`, `D = r^2 (1 + f'^2) + h^2`, computed from
/// the radicand jet so it stays finite at slope-zero endpoints.
pub(crate) fn gauss_curvature_from_family(family: &ProfileFamily, h: f64, r: f64) -> f64 {
    let (w, df_d2f) = match family {
        ProfileFamily::Helicoidal(p) => {
            let (w, w1, _) = hel_slope_terms(p.alpha, p.m, p.h, r);
            (w.max(0.0), w1 / 2.0)
        }
        ProfileFamily::Rotational(p) => {
            let (s, s1, _) = crate::rotational::slope_terms(p.alpha, p.m, r);
            (s.max(0.0), s1 / 2.0)
        }
        ProfileFamily::Constant { .. } => (0.0, 0.0),
    };
    let d = r * r * (1.0 + w) + h * h;
    (r * r * r * df_d2f - h * h) / (d * d)
}

/// One radius of the helicoidal axis-alignment obstruction: the Fourier
/// coefficients in `theta` of the translator equation. `a1` and `a2` can only
/// vanish along the profile when the transverse speed components do.
#[derive(Clone, Copy, Debug)]
pub struct HelObstructionRow {
    pub r: f64,
    /// `K^alpha - v3 r / sqrt(D)`; `None` where `K^alpha` is undefined.
    pub a0: Option<f64>,
    /// `(v1 r f' + v2 h) / sqrt(D)`.
    pub a1: f64,
    /// `(v2 r f' - v1 h) / sqrt(D)`.
    pub a2: f64,
}

pub fn axis_obstruction_hel(
    profile: &ProfileCurve,
    h: f64,
    v: Vec3,
) -> Result<Vec<HelObstructionRow>, HelicoidalError> {
    let params = match profile.family {
        ProfileFamily::Helicoidal(p) => p,
        _ => return Err(HelicoidalError::WrongFamily),
    };
    Ok(profile
        .samples
        .iter()
        .filter(|s| s.r > 0.0)
        .map(|sample| {
            let r = sample.r;
            let (w, _, _) = hel_slope_terms(params.alpha, params.m, params.h, r);
            let d = r * r * (1.0 + w.max(0.0)) + h * h;
            let sqrt_d = d.sqrt();
            let k = gauss_curvature_from_family(&profile.family, h, r);
            HelObstructionRow {
                r,
                a0: signed_power(k, params.alpha).map(|p| p - v.z * r / sqrt_d),
                a1: (v.x * r * sample.df + v.y * h) / sqrt_d,
                a2: (v.y * r * sample.df - v.x * h) / sqrt_d,
            }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Bour route
// ---------------------------------------------------------------------------

/// Converts the direct-route constant into the Bour-route constant so both
/// parametrizations describe the same surface: matching `dU/ds` between the
/// two first integrals gives `m_bour = m - (1-2a)/(2a) h^2` for `a != 1/2`
/// and `m_bour = e^{h^2/2} / sqrt(m)` for `a = 1/2`.
pub fn bour_constant(alpha: f64, m_direct: f64, h: f64) -> Result<f64, HelicoidalError> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(HelicoidalError::ZeroAlpha);
    }
    if alpha == 0.5 {
        if m_direct <= 0.0 {
            return Err(HelicoidalError::HalfAlphaNeedsPositiveM { m: m_direct });
        }
        Ok((h * h / 2.0).exp() / m_direct.sqrt())
    } else {
        Ok(m_direct - kappa(alpha) * h * h)
    }
}

/// `ds/dU` of the Bour first integration (constant in the Bour convention).
pub fn bour_ds_du(alpha: f64, m: f64, u: f64) -> f64 {
    if alpha == 0.5 {
        (u * u / 2.0).exp() / m
    } else {
        real_power(m + kappa(alpha) * u * u, alpha / (1.0 - 2.0 * alpha))
    }
}

fn bour_ds_du_deriv(alpha: f64, m: f64, u: f64) -> f64 {
    if alpha == 0.5 {
        u * (u * u / 2.0).exp() / m
    } else {
        let p = alpha / (1.0 - 2.0 * alpha);
        p * real_power(m + kappa(alpha) * u * u, p - 1.0) * 2.0 * kappa(alpha) * u
    }
}

/// `s(U)`: explicit antiderivatives for `alpha` in `{1/4, 1/3, 1}` (inverse
/// hyperbolics with their arguments scaled by `sqrt(|m|)`, which is what
/// differentiates back to the integrand; at `|m| = 1` the scaling is
/// invisible), numeric quadrature otherwise.
pub fn bour_s_of_u(alpha: f64, m: f64, u: f64) -> Result<f64, HelicoidalError> {
    let near = |a: f64, b: f64| (a - b).abs() < 1e-12;
    if near(alpha, 0.25) {
        if m == 0.0 {
            if u <= 0.0 {
                return Err(HelicoidalError::BourRange { u });
            }
            Ok(0.5 * u * u)
        } else if m > 0.0 {
            Ok(0.5 * (u * (m + u * u).sqrt() + m * (u / m.sqrt()).asinh()))
        } else {
            if u < (-m).sqrt() {
                return Err(HelicoidalError::BourRange { u });
            }
            Ok(0.5 * (u * (m + u * u).sqrt() + m * (u / (-m).sqrt()).acosh()))
        }
    } else if near(alpha, 1.0 / 3.0) {
        Ok(m * u + u * u * u / 6.0)
    } else if near(alpha, 1.0) {
        if m == 0.0 {
            if u == 0.0 {
                return Err(HelicoidalError::BourRange { u });
            }
            Ok(2.0 / u)
        } else if m > 0.0 {
            let root = (2.0 * m).sqrt();
            if (u.abs() - root).abs() < 1e-12 {
                return Err(HelicoidalError::BourRange { u });
            }
            // Real on both sides of |U| = sqrt(2m) through the log form.
            let x = u / root;
            Ok((2.0 / m).sqrt() * 0.5 * ((x + 1.0).abs() / (x - 1.0).abs()).ln())
        } else {
            Ok(-(2.0 / -m).sqrt() * (u / (-2.0 * m).sqrt()).atan())
        }
    } else if alpha == 0.5 {
        if m <= 0.0 {
            return Err(HelicoidalError::HalfAlphaNeedsPositiveM { m });
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        let (a, b, sgn) = if u > 0.0 { (0.0, u, 1.0) } else { (u, 0.0, -1.0) };
        Ok(sgn * quad::integrate(|t| (t * t / 2.0).exp() / m, a, b, 1e-12)?.value)
    } else {
        let k = kappa(alpha);
        let p = alpha / (1.0 - 2.0 * alpha);
        let base = |t: f64| m + k * t * t;
        if base(u) <= 0.0 {
            return Err(HelicoidalError::FractionalPowerBase { u });
        }
        let anchor = if base(0.0) > 0.0 {
            0.0
        } else if k > 0.0 && m < 0.0 {
            (-m / k).sqrt() * (1.0 + 1e-9)
        } else {
            return Err(HelicoidalError::FractionalPowerBase { u });
        };
        if u == anchor {
            return Ok(0.0);
        }
        let (a, b, sgn) = if u > anchor { (anchor, u, 1.0) } else { (u, anchor, -1.0) };
        Ok(sgn * quad::integrate(|t| real_power(base(t), p), a, b, 1e-12)?.value)
    }
}

/// Inverse of the `alpha = 1, m > 0` row on its principal branch
/// (`|U| < sqrt(2m)`): inverting `s = sqrt(2/m) atanh(U / sqrt(2m))` gives
/// `U = sqrt(2m) tanh(sqrt(m/2) s)`.
pub fn bour_u_of_s_alpha1(m: f64, s: f64) -> Result<f64, HelicoidalError> {
    if m <= 0.0 {
        return Err(HelicoidalError::HalfAlphaNeedsPositiveM { m });
    }
    Ok((2.0 * m).sqrt() * ((m / 2.0).sqrt() * s).tanh())
}

/// Positive-branch `df/dU` of the Bour parametrization (`m` in the Bour
/// convention).
pub fn bour_df_du(alpha: f64, m: f64, h: f64, u: f64) -> Result<f64, HelicoidalError> {
    let dsdu = bour_ds_du(alpha, m, u);
    if !dsdu.is_finite() || dsdu == 0.0 {
        return Err(HelicoidalError::FractionalPowerBase { u });
    }
    let r2 = u * u - h * h;
    if r2 <= 0.0 {
        return Err(HelicoidalError::BourRange { u });
    }
    let p = 1.0 / dsdu;
    let rad = u * u * (1.0 - p * p) - h * h;
    if rad < -1e-10 {
        return Err(HelicoidalError::BourRange { u });
    }
    Ok(u / r2 * rad.max(0.0).sqrt() * dsdu.abs())
}

/// Admissible Bour range for the family of `params`: the direct radius
/// domain transported through `U = sqrt(r^2 + h^2)`.
pub fn bour_admissible_range(
    params: &HelicoidalParams,
    scan: &DomainScan,
) -> Result<Interval, HelicoidalError> {
    let d = hel_domain(params, scan)?;
    let h = params.h.abs();
    let lift = |r: f64| (r * r + params.h * params.h).sqrt();
    let lo = if d.lo == 0.0 { h } else { lift(d.lo) };
    Ok(Interval {
        lo,
        hi: d.hi.map(lift),
        lo_closed: d.lo_closed,
        hi_closed: d.hi_closed,
        lo_kind: d.lo_kind,
        hi_kind: d.hi_kind,
    })
}

/// Tabulated Bour data for one chart: `(U, s, f, Theta)` rows.
#[derive(Clone, Copy, Debug)]
pub struct BourSample {
    pub u: f64,
    pub s: f64,
    pub f: f64,
    pub theta: f64,
}

/// Helicoidal translator in Bour coordinates
/// `X(U, t) = (r cos(t - Theta), r sin(t - Theta), f + h (t - Theta))` with
/// `r = sqrt(U^2 - h^2)`.
#[derive(Clone, Debug)]
pub struct BourChart {
    pub samples: Vec<BourSample>,
    pub params: HelicoidalParams,
    /// The first-integral constant in the Bour convention.
    pub m_bour: f64,
    /// Sign of `ds/dU` on the chart; negative means `s` decreases with `U`
    /// and the chart coordinates are swapped to keep `<N, e3> = U'(s)`.
    pub sigma: f64,
    u_range: (f64, f64),
    anchor_r: f64,
}

pub fn bour_chart(
    params: &HelicoidalParams,
    u_lo: f64,
    u_hi: f64,
    n: usize,
) -> Result<BourChart, HelicoidalError> {
    let h = params.h;
    if !(u_lo > h.abs()) || !(u_hi > u_lo) {
        return Err(HelicoidalError::BourRange { u: u_lo });
    }
    let n = n.max(2);
    let m_bour = bour_constant(params.alpha, params.m, h)?;

    if params.alpha != 0.5 {
        let k = kappa(params.alpha);
        if -m_bour / k > 0.0 {
            let pole = (-m_bour / k).sqrt();
            if pole > u_lo && pole < u_hi {
                return Err(HelicoidalError::PoleInsideRange { at: pole });
            }
        }
    }

    let us: Vec<f64> = (0..n)
        .map(|i| u_lo + (u_hi - u_lo) * i as f64 / (n - 1) as f64)
        .collect();

    let sigma = if bour_ds_du(params.alpha, m_bour, 0.5 * (u_lo + u_hi)) < 0.0 { -1.0 } else { 1.0 };

    // df/dU through the direct profile slope; equality with the explicit
    // Bour form is checked in the route-equivalence tests.
    let family = ProfileFamily::Helicoidal(*params);
    let radius = move |u: f64| (u * u - h * h).sqrt();
    let phi = move |u: f64| {
        let r = radius(u);
        family.slope(r).0 * u / r
    };

    for &u in &us {
        // The Bour radicand must be admissible across the requested range.
        bour_df_du(params.alpha, m_bour, h, u)?;
    }

    let s_closed: Result<Vec<f64>, HelicoidalError> =
        us.iter().map(|&u| bour_s_of_u(params.alpha, m_bour, u)).collect();
    let s_vals = match s_closed {
        Ok(v) => v,
        Err(_) => {
            // Fall back to cumulative quadrature anchored at the low end.
            let mut acc = vec![0.0f64; n];
            for i in 0..n - 1 {
                let panel =
                    quad::integrate(|t| bour_ds_du(params.alpha, m_bour, t), us[i], us[i + 1], 1e-12)?;
                acc[i + 1] = acc[i] + panel.value;
            }
            acc
        }
    };

    let mut f_vals = vec![0.0f64; n];
    let mut theta_vals = vec![0.0f64; n];
    for i in 0..n - 1 {
        let fp = quad::integrate(phi, us[i], us[i + 1], 1e-12)?;
        let tp = quad::integrate(|t| h / (t * t) * phi(t), us[i], us[i + 1], 1e-12)?;
        f_vals[i + 1] = f_vals[i] + fp.value;
        theta_vals[i + 1] = theta_vals[i] + tp.value;
    }

    let samples = us
        .iter()
        .enumerate()
        .map(|(i, &u)| BourSample { u, s: s_vals[i], f: f_vals[i], theta: theta_vals[i] })
        .collect();

    Ok(BourChart {
        samples,
        params: *params,
        m_bour,
        sigma,
        u_range: (u_lo, u_hi),
        anchor_r: radius(u_lo),
    })
}

impl BourChart {
    /// `U'(s) = <N, e3>` along the chart.
    pub fn u_prime_of_s(&self, u: f64) -> f64 {
        1.0 / bour_ds_du(self.params.alpha, self.m_bour, u)
    }

    /// `-U''(s)/U`, the Gauss curvature in Bour coordinates.
    pub fn curvature_from_bour(&self, u: f64) -> f64 {
        let dsdu = bour_ds_du(self.params.alpha, self.m_bour, u);
        let p = 1.0 / dsdu;
        let p_prime = -bour_ds_du_deriv(self.params.alpha, self.m_bour, u) / (dsdu * dsdu);
        -(p * p_prime) / u
    }

    /// The chart as a kernel surface with analytic jets.
    pub fn surface(&self) -> ParamSurface {
        let params = self.params;
        let h = params.h;
        let family = ProfileFamily::Helicoidal(params);
        let anchor_r = self.anchor_r;
        let (u_lo, u_hi) = self.u_range;

        let jet = move |uu: f64, t: f64| -> SurfaceJet {
            let r = (uu * uu - h * h).sqrt();
            let (df, d2f) = family.slope(r);
            let f = family.height_from(anchor_r, 0.0, r).unwrap_or(f64::NAN);
            let theta_integrand = |x: f64| {
                let rx = (x * x - h * h).sqrt();
                h / (x * x) * family.slope(rx).0 * x / rx
            };
            let theta_of_u = if uu == u_lo {
                0.0
            } else if uu > u_lo {
                quad::integrate(theta_integrand, u_lo, uu, 1e-12)
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN)
            } else {
                quad::integrate(theta_integrand, uu, u_lo, 1e-12)
                    .map(|q| -q.value)
                    .unwrap_or(f64::NAN)
            };

            let r_u = uu / r;
            let r_uu = -h * h / (r * r * r);
            let phi = df * r_u;
            let phi_prime = d2f * r_u * r_u + df * r_uu;
            let theta_u = h * phi / (uu * uu);
            let theta_uu = h * (phi_prime / (uu * uu) - 2.0 * phi / (uu * uu * uu));

            let theta = t - theta_of_u;
            let (s, c) = theta.sin_cos();
            let x = Vec3::new(r * c, r * s, f + h * theta);
            let x_r = Vec3::new(c, s, df);
            let x_th = Vec3::new(-r * s, r * c, h);
            let x_rr = Vec3::new(0.0, 0.0, d2f);
            let x_rth = Vec3::new(-s, c, 0.0);
            let x_thth = Vec3::new(-r * c, -r * s, 0.0);

            let xu = x_r * r_u - x_th * theta_u;
            let xt = x_th;
            let xuu = x_rr * (r_u * r_u) - x_rth * (2.0 * r_u * theta_u) + x_thth * (theta_u * theta_u)
                + x_r * r_uu
                - x_th * theta_uu;
            let xut = x_rth * r_u - x_thth * theta_u;
            let xtt = x_thth;
            SurfaceJet { x, xu, xv: xt, xuu, xuv: xut, xvv: xtt }
        };

        let t_range = (0.0, std::f64::consts::TAU);
        if self.sigma >= 0.0 {
            ParamSurface::analytic(ChartRect::new((u_lo, u_hi), t_range), jet)
        } else {
            ParamSurface::analytic(ChartRect::new(t_range, (u_lo, u_hi)), move |t, uu| {
                let j = jet(uu, t);
                SurfaceJet { x: j.x, xu: j.xv, xv: j.xu, xuu: j.xvv, xuv: j.xuv, xvv: j.xuu }
            })
        }
    }
}
