//! Non-cylindrical ruled surfaces: distribution parameter, Gauss curvature,
//! and the linear-independence probe behind the ruled nonexistence result.
//!
//! A ruled chart is `X(s, t) = gamma(s) + t w(s)` with `|w| = 1`, `gamma` the
//! arc-length striction curve (`<gamma', w'> = 0`). Its curvature is
//! `K = -lambda^2 / (lambda^2 + t^2)^2` with
//! `lambda = det(gamma', w, w') / |w'|^2`. The translator equation reduces to
//! a linear relation between `1`, `(l^2+t^2)^{(4a-1)/2}` and
//! `t (l^2+t^2)^{(4a-1)/2}`; a positive Gram minimum certifies those three
//! functions independent, so no relation can hold.

use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{ChartRect, ParamSurface, SurfaceJet};
use crate::vec3::Vec3;

#[derive(Debug, Error)]
pub enum RuledError {
    #[error("cylindrical ruling (w' = 0): K = 0 surfaces are excluded")]
    Cylindrical,
    #[error("striction condition violated at s = {s}: <gamma', w'> = {value:e}")]
    NotStriction { s: f64, value: f64 },
    #[error("ruling direction not unit at s = {s}: |w| = {norm}")]
    NonUnitRuling { s: f64, norm: f64 },
    #[error("stored lambda deviates from det(gamma', w, w')/|w'|^2 by {deviation:e} at s = {s}")]
    LambdaMismatch { s: f64, deviation: f64 },
    #[error("singular ruling point: lambda = t = 0")]
    SingularPoint,
    #[error("independence probe needs alpha to be a nonzero integer")]
    NonIntegerAlpha,
    #[error("independence probe needs lambda != 0 and at least 16 samples, got n = {n}")]
    DegenerateSampling { n: usize },
}

/// Base and ruling curves with position plus two derivatives. The default
/// jets come from five-point central differences; analytic impls override.
pub trait RulingCurves: Send + Sync {
    fn gamma(&self, s: f64) -> Vec3;
    fn w(&self, s: f64) -> Vec3;

    fn gamma_jet(&self, s: f64) -> [Vec3; 3] {
        fd_jet(&|x| self.gamma(x), s)
    }

    fn w_jet(&self, s: f64) -> [Vec3; 3] {
        fd_jet(&|x| self.w(x), s)
    }
}

fn fd_jet(f: &dyn Fn(f64) -> Vec3, s: f64) -> [Vec3; 3] {
    let h = 1e-5;
    let p2 = f(s + 2.0 * h);
    let p1 = f(s + h);
    let p0 = f(s);
    let m1 = f(s - h);
    let m2 = f(s - 2.0 * h);
    let d1 = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
    let d2 = (-(p2 + m2) + (p1 + m1) * 16.0 - p0 * 30.0) / (12.0 * h * h);
    [p0, d1, d2]
}

/// Curves supplied as closures, derivatives by finite differences.
pub struct ClosureCurves<G, W> {
    pub gamma: G,
    pub w: W,
}

impl<G, W> RulingCurves for ClosureCurves<G, W>
where
    G: Fn(f64) -> Vec3 + Send + Sync,
    W: Fn(f64) -> Vec3 + Send + Sync,
{
    fn gamma(&self, s: f64) -> Vec3 {
        (self.gamma)(s)
    }
    fn w(&self, s: f64) -> Vec3 {
        (self.w)(s)
    }
}

/// The helicoid as a ruled surface: axis striction curve, horizontal rulings
/// spinning at rate `omega`. Distribution parameter `1/omega`.
pub struct HelicoidRuling {
    pub omega: f64,
}

impl RulingCurves for HelicoidRuling {
    fn gamma(&self, s: f64) -> Vec3 {
        Vec3::new(0.0, 0.0, s)
    }
    fn w(&self, s: f64) -> Vec3 {
        let (sn, cs) = (self.omega * s).sin_cos();
        Vec3::new(cs, sn, 0.0)
    }
    fn gamma_jet(&self, _s: f64) -> [Vec3; 3] {
        [Vec3::new(0.0, 0.0, _s), Vec3::EZ, Vec3::ZERO]
    }
    fn w_jet(&self, s: f64) -> [Vec3; 3] {
        let (sn, cs) = (self.omega * s).sin_cos();
        let o = self.omega;
        [
            Vec3::new(cs, sn, 0.0),
            Vec3::new(-o * sn, o * cs, 0.0),
            Vec3::new(-o * o * cs, -o * o * sn, 0.0),
        ]
    }
}

/// Ruled-surface data: the two curves plus the distribution parameter, which
/// is user data and independently recomputed during validation.
#[derive(Clone)]
pub struct RuledData {
    pub curves: Arc<dyn RulingCurves>,
    pub lambda: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RuledData {
    pub fn new(
        curves: impl RulingCurves + 'static,
        lambda: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> RuledData {
        RuledData { curves: Arc::new(curves), lambda: Arc::new(lambda) }
    }

    /// `det(gamma', w, w') / |w'|^2` from the curves themselves.
    pub fn lambda_recomputed(&self, s: f64) -> Result<f64, RuledError> {
        let [_, dg, _] = self.curves.gamma_jet(s);
        let [w, dw, _] = self.curves.w_jet(s);
        let dw2 = dw.norm_squared();
        if dw2 < 1e-20 {
            return Err(RuledError::Cylindrical);
        }
        Ok(Vec3::triple(dg, w, dw) / dw2)
    }
}

/// Checks the striction normalization, unit rulings, non-cylindricity, and
/// that the stored distribution parameter matches the recomputed one.
pub fn validate_ruled(data: &RuledData, samples: &[f64]) -> Result<(), RuledError> {
    for &s in samples {
        let [_, dg, _] = data.curves.gamma_jet(s);
        let [w, dw, _] = data.curves.w_jet(s);
        let norm = w.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(RuledError::NonUnitRuling { s, norm });
        }
        if dw.norm_squared() < 1e-20 {
            return Err(RuledError::Cylindrical);
        }
        let striction = dg.dot(dw);
        if striction.abs() > 1e-6 {
            return Err(RuledError::NotStriction { s, value: striction });
        }
        let recomputed = data.lambda_recomputed(s)?;
        let deviation = (recomputed - (data.lambda)(s)).abs();
        if deviation > 1e-6 {
            return Err(RuledError::LambdaMismatch { s, deviation });
        }
    }
    Ok(())
}

/// `K = -lambda^2 / (lambda^2 + t^2)^2`.
pub fn ruled_gauss(lambda: f64, t: f64) -> Result<f64, RuledError> {
    let den = lambda * lambda + t * t;
    if den == 0.0 {
        return Err(RuledError::SingularPoint);
    }
    Ok(-lambda * lambda / (den * den))
}

/// Wronskian of `{1, (l^2+t^2)^{(4a-1)/2}, t (l^2+t^2)^{(4a-1)/2}}`:
/// `(4a-1)(l^2+t^2)^{4a-3}(4a t^2 - l^2)`.
pub fn wronskian(alpha: f64, lambda: f64, t: f64) -> f64 {
    let den = lambda * lambda + t * t;
    (4.0 * alpha - 1.0) * den.powf(4.0 * alpha - 3.0) * (4.0 * alpha * t * t - lambda * lambda)
}

/// Analytic ruled chart `X(s, t) = gamma(s) + t w(s)`.
pub fn ruled_surface(data: &RuledData, s_range: (f64, f64), t_range: (f64, f64)) -> ParamSurface {
    let curves = Arc::clone(&data.curves);
    ParamSurface::analytic(ChartRect::new(s_range, t_range), move |s, t| {
        let [g, dg, ddg] = curves.gamma_jet(s);
        let [w, dw, ddw] = curves.w_jet(s);
        SurfaceJet {
            x: g + w * t,
            xu: dg + dw * t,
            xv: w,
            xuu: ddg + ddw * t,
            xuv: dw,
            xvv: Vec3::ZERO,
        }
    })
}

/// Residual of the reduced translator equation for a ruled surface at `(s, t)`:
/// `-(-1)^a l^{2a} |w'| + [l <w', v> + t det(w', w, v)] (l^2+t^2)^{(4a-1)/2}`.
/// Identically zero in `t` would be required of a ruled translator.
pub fn eq_ruled_residual(alpha: i32, data: &RuledData, v: Vec3, s: f64, t: f64) -> f64 {
    let [w, dw, _] = data.curves.w_jet(s);
    let lambda = (data.lambda)(s);
    let den = lambda * lambda + t * t;
    let unsigned = den.powf((4.0 * alpha as f64 - 1.0) / 2.0);
    let sign = if alpha.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    -sign * lambda.abs().powi(2 * alpha) * dw.norm()
        + (lambda * dw.dot(v) + t * Vec3::triple(dw, w, v)) * unsigned
}

/// Gram matrix of three scalar functions under the trapezoid inner product
/// on `n` uniform samples of `[t0, t1]`.
pub fn gram_matrix(
    funcs: [&dyn Fn(f64) -> f64; 3],
    t_range: (f64, f64),
    n: usize,
) -> [[f64; 3]; 3] {
    let (t0, t1) = t_range;
    let dt = (t1 - t0) / (n - 1) as f64;
    let mut gram = [[0.0f64; 3]; 3];
    for i in 0..n {
        let t = t0 + dt * i as f64;
        let weight = if i == 0 || i == n - 1 { 0.5 * dt } else { dt };
        let values = [funcs[0](t), funcs[1](t), funcs[2](t)];
        for r in 0..3 {
            for c in 0..3 {
                gram[r][c] += weight * values[r] * values[c];
            }
        }
    }
    gram
}

/// Smallest eigenvalue of a symmetric 3x3 matrix (trigonometric closed form).
pub fn sym3_min_eigenvalue(a: [[f64; 3]; 3]) -> f64 {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if p1 == 0.0 {
        return a[0][0].min(a[1][1]).min(a[2][2]);
    }
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = a;
    for (r, row) in b.iter_mut().enumerate() {
        row[r] -= q;
        for x in row.iter_mut() {
            *x /= p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    // Smallest of the three roots.
    q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos()
}

/// Smallest Gram eigenvalue of `{1, psi, t psi}`,
/// `psi = (lambda^2 + t^2)^{(4 alpha - 1)/2}`, over `n` trapezoid samples.
/// Strict positivity certifies linear independence: no constant combination
/// can cancel the reduced translator equation in `t`.
pub fn independence_probe(
    alpha: i32,
    lambda: f64,
    t_range: (f64, f64),
    n: usize,
) -> Result<f64, RuledError> {
    if alpha == 0 {
        return Err(RuledError::NonIntegerAlpha);
    }
    if lambda == 0.0 || n < 16 {
        return Err(RuledError::DegenerateSampling { n });
    }
    let beta = (4.0 * alpha as f64 - 1.0) / 2.0;
    let psi = move |t: f64| (lambda * lambda + t * t).powf(beta);
    let tpsi = move |t: f64| t * psi(t);
    let one = |_: f64| 1.0;
    let gram = gram_matrix([&one, &psi, &tpsi], t_range, n);
    Ok(sym3_min_eigenvalue(gram))
}
