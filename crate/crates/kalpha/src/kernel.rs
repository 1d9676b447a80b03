//! Differential-geometry kernel: jets, fundamental forms, Gauss curvature and
//! the translator residual `K^alpha - <N, v>` evaluated over chart grids.
//!
//! The kernel is the oracle every family construction is checked against: it
//! knows nothing about generating curves, only about charts.

use std::sync::Arc;

use thiserror::Error;

use crate::par;
use crate::vec3::{Mat3, Vec3};

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("chart point ({u}, {v}) lies outside the open chart domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("surface evaluation at ({u}, {v}) produced a non-finite jet")]
    NonFinite { u: f64, v: f64 },
    #[error("degenerate jet: EG - F^2 = {eg_f2:e} is not positive")]
    DegenerateJet { eg_f2: f64 },
    #[error("exponent alpha must be nonzero")]
    ZeroAlpha,
    #[error("speed vector must be unit length, got |v| = {norm}")]
    NonUnitSpeed { norm: f64 },
    #[error("residual grid must be at least 2x2, got {nu}x{nv}")]
    GridTooSmall { nu: usize, nv: usize },
    #[error("K^alpha is undefined at every grid point for alpha = {alpha}")]
    AllPointsSkipped { alpha: f64 },
}

/// Position and partial derivatives of a chart up to second order.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet {
    pub x: Vec3,
    pub xu: Vec3,
    pub xv: Vec3,
    pub xuu: Vec3,
    pub xuv: Vec3,
    pub xvv: Vec3,
}

impl SurfaceJet {
    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.xu.is_finite()
            && self.xv.is_finite()
            && self.xuu.is_finite()
            && self.xuv.is_finite()
            && self.xvv.is_finite()
    }
}

/// Rectangular chart domain `[u0, u1] x [v0, v1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartRect {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl ChartRect {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> ChartRect {
        assert!(u.0 < u.1 && v.0 < v.1, "chart rectangle must have positive extent");
        ChartRect { u, v }
    }

    pub fn contains_open(&self, u: f64, v: f64) -> bool {
        u > self.u.0 && u < self.u.1 && v > self.v.0 && v < self.v.1
    }

    pub fn contains_closed(&self, u: f64, v: f64) -> bool {
        u >= self.u.0 && u <= self.u.1 && v >= self.v.0 && v <= self.v.1
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { step: f64 },
}

#[derive(Clone)]
enum JetSource {
    Analytic(Arc<dyn Fn(f64, f64) -> SurfaceJet + Send + Sync>),
    FiniteDiff {
        position: Arc<dyn Fn(f64, f64) -> Vec3 + Send + Sync>,
        step: f64,
    },
}

/// A parametrized surface patch: a rectangular chart plus a jet evaluator.
///
/// Analytic charts supply exact jets; finite-difference charts supply
/// positions only, and jets come from central differences with the configured
/// step (first derivatives and pure second derivatives use the five-point
/// cross stencil centred at the query, the mixed derivative uses the four
/// corner points). Both stencils are second-order, so halving the step cuts
/// the jet error by about four.
#[derive(Clone)]
pub struct ParamSurface {
    pub domain: ChartRect,
    source: JetSource,
}

impl ParamSurface {
    pub const DEFAULT_FD_STEP: f64 = 1e-5;

    pub fn analytic(
        domain: ChartRect,
        eval: impl Fn(f64, f64) -> SurfaceJet + Send + Sync + 'static,
    ) -> ParamSurface {
        ParamSurface { domain, source: JetSource::Analytic(Arc::new(eval)) }
    }

    pub fn finite_difference(
        domain: ChartRect,
        position: impl Fn(f64, f64) -> Vec3 + Send + Sync + 'static,
        step: f64,
    ) -> ParamSurface {
        ParamSurface {
            domain,
            source: JetSource::FiniteDiff { position: Arc::new(position), step },
        }
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        match &self.source {
            JetSource::Analytic(_) => DerivativeMode::Analytic,
            JetSource::FiniteDiff { step, .. } => DerivativeMode::FiniteDifference { step: *step },
        }
    }

    fn raw_jet(&self, u: f64, v: f64) -> SurfaceJet {
        match &self.source {
            JetSource::Analytic(f) => f(u, v),
            JetSource::FiniteDiff { position, step } => {
                let p = position.as_ref();
                let e = *step;
                let x = p(u, v);
                let pu = p(u + e, v);
                let mu = p(u - e, v);
                let pv = p(u, v + e);
                let mv = p(u, v - e);
                let pp = p(u + e, v + e);
                let pm = p(u + e, v - e);
                let mp = p(u - e, v + e);
                let mm = p(u - e, v - e);
                SurfaceJet {
                    x,
                    xu: (pu - mu) / (2.0 * e),
                    xv: (pv - mv) / (2.0 * e),
                    xuu: (pu - x * 2.0 + mu) / (e * e),
                    xvv: (pv - x * 2.0 + mv) / (e * e),
                    xuv: (pp - pm - mp + mm) / (4.0 * e * e),
                }
            }
        }
    }

    /// Chart position only; permitted on the closed domain (mesh export walks
    /// the boundary, where second derivatives of some families blow up).
    pub fn position(&self, u: f64, v: f64) -> Result<Vec3, KernelError> {
        if !self.domain.contains_closed(u, v) {
            return Err(KernelError::OutOfDomain { u, v });
        }
        let x = match &self.source {
            JetSource::Analytic(f) => f(u, v).x,
            JetSource::FiniteDiff { position, .. } => position(u, v),
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(KernelError::NonFinite { u, v })
        }
    }

    /// The same evaluator over a sub-rectangle of the chart.
    pub fn restrict(&self, u: (f64, f64), v: (f64, f64)) -> ParamSurface {
        assert!(
            self.domain.contains_closed(u.0, v.0) && self.domain.contains_closed(u.1, v.1),
            "restriction must stay inside the chart domain"
        );
        ParamSurface { domain: ChartRect::new(u, v), source: self.source.clone() }
    }

    /// The same chart rotated rigidly about the origin.
    pub fn rotated(&self, rot: Mat3) -> ParamSurface {
        let domain = self.domain;
        match &self.source {
            JetSource::Analytic(f) => {
                let f = Arc::clone(f);
                ParamSurface::analytic(domain, move |u, v| {
                    let j = f(u, v);
                    SurfaceJet {
                        x: rot.apply(j.x),
                        xu: rot.apply(j.xu),
                        xv: rot.apply(j.xv),
                        xuu: rot.apply(j.xuu),
                        xuv: rot.apply(j.xuv),
                        xvv: rot.apply(j.xvv),
                    }
                })
            }
            JetSource::FiniteDiff { position, step } => {
                let p = Arc::clone(position);
                let step = *step;
                ParamSurface::finite_difference(domain, move |u, v| rot.apply(p(u, v)), step)
            }
        }
    }
}

/// Jet of the chart at an interior point.
pub fn jet_at(surface: &ParamSurface, u: f64, v: f64) -> Result<SurfaceJet, KernelError> {
    if !surface.domain.contains_open(u, v) {
        return Err(KernelError::OutOfDomain { u, v });
    }
    let jet = surface.raw_jet(u, v);
    if !jet.is_finite() {
        return Err(KernelError::NonFinite { u, v });
    }
    Ok(jet)
}

/// First and second fundamental forms, unit normal and Gauss curvature at a
/// chart point.
#[derive(Clone, Copy, Debug)]
pub struct FormsAtPoint {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n2: f64,
    pub gauss: f64,
    pub normal: Vec3,
}

pub fn forms_at(jet: &SurfaceJet) -> Result<FormsAtPoint, KernelError> {
    let e = jet.xu.dot(jet.xu);
    let f = jet.xu.dot(jet.xv);
    let g = jet.xv.dot(jet.xv);
    let eg_f2 = e * g - f * f;
    let cross = jet.xu.cross(jet.xv);
    let cross_norm = cross.norm();
    if eg_f2 <= 0.0 || cross_norm == 0.0 {
        return Err(KernelError::DegenerateJet { eg_f2 });
    }
    let normal = cross / cross_norm;
    let l = jet.xuu.dot(normal);
    let m = jet.xuv.dot(normal);
    let n2 = jet.xvv.dot(normal);
    let gauss = (l * n2 - m * m) / eg_f2;
    Ok(FormsAtPoint { e, f, g, l, m, n2, gauss, normal })
}

/// The flow exponent and unit speed direction of a translator problem.
#[derive(Clone, Copy, Debug)]
pub struct TranslatorSpec {
    pub alpha: f64,
    pub speed: Vec3,
}

impl TranslatorSpec {
    /// `alpha` must be nonzero and `speed` unit length (to 1e-9).
    pub fn new(alpha: f64, speed: Vec3) -> Result<TranslatorSpec, KernelError> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(KernelError::ZeroAlpha);
        }
        let norm = speed.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(KernelError::NonUnitSpeed { norm });
        }
        Ok(TranslatorSpec { alpha, speed })
    }
}

fn is_integer(alpha: f64) -> bool {
    alpha == alpha.round() && alpha.abs() < 1e9
}

/// Sign-aware power `k^alpha`.
///
/// Negative `k` is admitted only for integer `alpha` (then the sign is the
/// parity of `alpha`); `k = 0` only for positive `alpha` (then the value is
/// 0, by continuity of `t -> t^alpha` on `[0, inf)`). Other combinations are
/// undefined and yield `None`.
pub fn signed_power(k: f64, alpha: f64) -> Option<f64> {
    if k > 0.0 {
        Some(k.powf(alpha))
    } else if k == 0.0 {
        if alpha > 0.0 {
            Some(0.0)
        } else {
            None
        }
    } else if is_integer(alpha) {
        let magnitude = (-k).powf(alpha);
        if (alpha.round() as i64).rem_euclid(2) == 1 {
            Some(-magnitude)
        } else {
            Some(magnitude)
        }
    } else {
        None
    }
}

/// Grid statistics of the translator residual `K^alpha - <N, v>`.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub grid: (usize, usize),
    /// Row-major `n_u x n_v`; `None` marks a point where `K^alpha` is undefined.
    pub residuals: Vec<Option<f64>>,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Chart coordinates of the skipped points, in grid order.
    pub skipped: Vec<(f64, f64)>,
}

impl ResidualReport {
    pub fn residual(&self, i: usize, j: usize) -> Option<f64> {
        self.residuals[i * self.grid.1 + j]
    }

    pub fn defined_count(&self) -> usize {
        self.residuals.iter().filter(|r| r.is_some()).count()
    }
}

enum PointOutcome {
    Value(f64),
    Skipped,
    Failed(KernelError),
}

/// Residual report over an `n_u x n_v` grid of interior chart points.
///
/// Samples exclude the chart boundary by half a cell: the generating-curve
/// families are frequently singular exactly at their domain endpoints. Points
/// are evaluated independently (in parallel when the `parallel` feature is
/// on) and reduced in fixed grid order, so the report is deterministic.
pub fn translator_residual(
    surface: &ParamSurface,
    spec: &TranslatorSpec,
    grid: (usize, usize),
) -> Result<ResidualReport, KernelError> {
    residual_core(surface, spec, grid, true)
}

/// Sequential variant of [`translator_residual`]; same report, bit for bit.
pub fn translator_residual_seq(
    surface: &ParamSurface,
    spec: &TranslatorSpec,
    grid: (usize, usize),
) -> Result<ResidualReport, KernelError> {
    residual_core(surface, spec, grid, false)
}

fn residual_core(
    surface: &ParamSurface,
    spec: &TranslatorSpec,
    grid: (usize, usize),
    parallel: bool,
) -> Result<ResidualReport, KernelError> {
    let (nu, nv) = grid;
    if nu < 2 || nv < 2 {
        return Err(KernelError::GridTooSmall { nu, nv });
    }
    let du = (surface.domain.u.1 - surface.domain.u.0) / nu as f64;
    let dv = (surface.domain.v.1 - surface.domain.v.0) / nv as f64;
    let point = |idx: usize| -> (f64, f64) {
        let i = idx / nv;
        let j = idx % nv;
        (
            surface.domain.u.0 + (i as f64 + 0.5) * du,
            surface.domain.v.0 + (j as f64 + 0.5) * dv,
        )
    };

    let eval = |idx: usize| -> PointOutcome {
        let (u, v) = point(idx);
        let jet = match jet_at(surface, u, v) {
            Ok(j) => j,
            Err(e) => return PointOutcome::Failed(e),
        };
        let forms = match forms_at(&jet) {
            Ok(f) => f,
            Err(e) => return PointOutcome::Failed(e),
        };
        match signed_power(forms.gauss, spec.alpha) {
            Some(p) => PointOutcome::Value(p - forms.normal.dot(spec.speed)),
            None => PointOutcome::Skipped,
        }
    };

    let n = nu * nv;
    let outcomes = if parallel {
        par::map_indexed(n, eval)
    } else {
        (0..n).map(eval).collect()
    };

    let mut residuals = Vec::with_capacity(n);
    let mut skipped = Vec::new();
    let mut max_abs = 0.0f64;
    let mut sum_abs = 0.0f64;
    let mut defined = 0usize;
    for (idx, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            PointOutcome::Value(r) => {
                max_abs = max_abs.max(r.abs());
                sum_abs += r.abs();
                defined += 1;
                residuals.push(Some(r));
            }
            PointOutcome::Skipped => {
                skipped.push(point(idx));
                residuals.push(None);
            }
            PointOutcome::Failed(e) => return Err(e),
        }
    }
    if defined == 0 {
        return Err(KernelError::AllPointsSkipped { alpha: spec.alpha });
    }
    Ok(ResidualReport {
        grid,
        residuals,
        max_abs,
        mean_abs: sum_abs / defined as f64,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> ParamSurface {
        ParamSurface::analytic(ChartRect::new((-1.0, 1.0), (-1.0, 1.0)), |u, v| SurfaceJet {
            x: Vec3::new(u, v, 0.0),
            xu: Vec3::EX,
            xv: Vec3::EY,
            xuu: Vec3::ZERO,
            xuv: Vec3::ZERO,
            xvv: Vec3::ZERO,
        })
    }

    fn unit_sphere() -> ParamSurface {
        // X(u, v) = (cos u cos v, cos u sin v, sin u)
        ParamSurface::analytic(ChartRect::new((-1.2, 1.2), (0.2, 2.0)), |u, v| {
            let (su, cu) = u.sin_cos();
            let (sv, cv) = v.sin_cos();
            SurfaceJet {
                x: Vec3::new(cu * cv, cu * sv, su),
                xu: Vec3::new(-su * cv, -su * sv, cu),
                xv: Vec3::new(-cu * sv, cu * cv, 0.0),
                xuu: Vec3::new(-cu * cv, -cu * sv, -su),
                xuv: Vec3::new(su * sv, -su * cv, 0.0),
                xvv: Vec3::new(-cu * cv, -cu * sv, 0.0),
            }
        })
    }

    fn cylinder() -> ParamSurface {
        ParamSurface::analytic(ChartRect::new((0.1, 3.0), (-1.0, 1.0)), |u, v| {
            let (s, c) = u.sin_cos();
            SurfaceJet {
                x: Vec3::new(c, s, v),
                xu: Vec3::new(-s, c, 0.0),
                xv: Vec3::EZ,
                xuu: Vec3::new(-c, -s, 0.0),
                xuv: Vec3::ZERO,
                xvv: Vec3::ZERO,
            }
        })
    }

    #[test]
    fn plane_jet_values() {
        let j = jet_at(&plane(), 0.3, 0.7).unwrap();
        assert_eq!(j.xu, Vec3::EX);
        assert_eq!(j.xv, Vec3::EY);
        assert_eq!(j.xuu, Vec3::ZERO);
        assert_eq!(j.xuv, Vec3::ZERO);
        assert_eq!(j.xvv, Vec3::ZERO);
    }

    #[test]
    fn sphere_curvature_is_one() {
        let s = unit_sphere();
        for &(u, v) in &[(0.0, 1.0), (0.5, 0.7), (-0.9, 1.8)] {
            let f = forms_at(&jet_at(&s, u, v).unwrap()).unwrap();
            assert!((f.gauss - 1.0).abs() < 1e-12, "K = {}", f.gauss);
            assert!((f.normal.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cylinder_curvature_is_zero() {
        let f = forms_at(&jet_at(&cylinder(), 1.0, 0.0).unwrap()).unwrap();
        assert!(f.gauss.abs() < 1e-14);
    }

    #[test]
    fn out_of_domain_is_reported() {
        assert!(matches!(jet_at(&plane(), 2.0, 0.0), Err(KernelError::OutOfDomain { .. })));
    }

    #[test]
    fn degenerate_jet_is_reported() {
        let jet = SurfaceJet {
            x: Vec3::ZERO,
            xu: Vec3::EX,
            xv: Vec3::EX,
            xuu: Vec3::ZERO,
            xuv: Vec3::ZERO,
            xvv: Vec3::ZERO,
        };
        assert!(matches!(forms_at(&jet), Err(KernelError::DegenerateJet { .. })));
    }

    #[test]
    fn signed_power_rules() {
        assert_eq!(signed_power(4.0, 0.5), Some(2.0));
        assert_eq!(signed_power(0.0, 0.25), Some(0.0));
        assert_eq!(signed_power(0.0, -1.0), None);
        assert_eq!(signed_power(-2.0, 0.5), None);
        assert_eq!(signed_power(-2.0, 3.0), Some(-8.0));
        assert_eq!(signed_power(-2.0, 2.0), Some(4.0));
        assert_eq!(signed_power(-2.0, -1.0), Some(-0.5));
    }

    #[test]
    fn plane_residual_is_minus_one() {
        let spec = TranslatorSpec::new(1.0, Vec3::EZ).unwrap();
        let report = translator_residual(&plane(), &spec, (8, 8)).unwrap();
        assert!((report.max_abs - 1.0).abs() < 1e-14);
        assert!((report.mean_abs - 1.0).abs() < 1e-14);
        for r in &report.residuals {
            assert!((r.unwrap() + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn plane_with_negative_alpha_skips_everything() {
        let spec = TranslatorSpec::new(-1.0, Vec3::EZ).unwrap();
        assert!(matches!(
            translator_residual(&plane(), &spec, (4, 4)),
            Err(KernelError::AllPointsSkipped { .. })
        ));
    }

    #[test]
    fn cylinder_with_fractional_alpha_skips_negative_free_zero() {
        // K = 0 everywhere, alpha = 1/4 > 0: defined, residual = -<N, e3> = 0.
        let spec = TranslatorSpec::new(0.25, Vec3::EZ).unwrap();
        let report = translator_residual(&cylinder(), &spec, (6, 4)).unwrap();
        assert!(report.max_abs < 1e-14);
        assert!(report.skipped.is_empty());
    }

    #[test]
    fn spec_validation() {
        assert!(TranslatorSpec::new(0.0, Vec3::EZ).is_err());
        assert!(TranslatorSpec::new(1.0, Vec3::new(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn grid_too_small() {
        let spec = TranslatorSpec::new(1.0, Vec3::EZ).unwrap();
        assert!(matches!(
            translator_residual(&plane(), &spec, (1, 8)),
            Err(KernelError::GridTooSmall { .. })
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_reports_agree_bitwise() {
        let s = unit_sphere();
        let spec = TranslatorSpec::new(0.5, Vec3::EZ).unwrap();
        let a = translator_residual(&s, &spec, (17, 9)).unwrap();
        let b = translator_residual_seq(&s, &spec, (17, 9)).unwrap();
        assert_eq!(a.residuals, b.residuals);
        assert_eq!(a.max_abs.to_bits(), b.max_abs.to_bits());
        assert_eq!(a.mean_abs.to_bits(), b.mean_abs.to_bits());
    }
}
