//! Quarter-power translators built by separation of variables: additive
//! graphs `z = f(x) + g(y)` for vertical and tilted speeds, the sideways
//! graph `y = f(x) + g(z)`, and the product ansatz `x = f(z) g(y)`
//! (homothetical). A residual probe demonstrates numerically that the same
//! surfaces fail the translator equation for any other exponent.

use thiserror::Error;

use crate::kernel::{
    translator_residual, ChartRect, KernelError, ParamSurface, ResidualReport, SurfaceJet,
    TranslatorSpec,
};
use crate::vec3::Vec3;

/// Chart inset from radicand-zero loci; fractional powers lose smoothness at
/// the boundary.
const RADICAND_CLIP: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum TranslationError {
    #[error("m must be nonzero")]
    ZeroM,
    #[error("homothetical parameters require a > 0, got a = {a}")]
    NonPositiveA { a: f64 },
    #[error("f0 = {f0} outside the admissible range (0, {hi})")]
    FRangeViolated { f0: f64, hi: f64 },
    #[error("requested chart is empty after clipping the radicand constraint")]
    EmptyChart,
    #[error("g has a pole at y = {at} inside the requested range and no room beside it")]
    PoleInRange { at: f64 },
    #[error("ODE march stalled near z = {at}")]
    MarchStalled { at: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Parameters of the homothetical (product-separable) example.
#[derive(Clone, Copy, Debug)]
pub struct HomotheticalParams {
    /// Separation constant of `g'' = a g^3`; positive.
    pub a: f64,
    /// Constant of the Bernoulli first integral for `f`; nonzero.
    pub m: f64,
    /// Initial value `f(z0)` at the left chart edge, in `(0, 1/(2 m^2))`.
    pub f0: f64,
    /// Branch of `f'`.
    pub sign_f: f64,
    /// `g` at `y0`; nonzero.
    pub g0: f64,
    pub y0: f64,
    /// Branch of `g'`.
    pub sign_g: f64,
}

impl Default for HomotheticalParams {
    fn default() -> Self {
        HomotheticalParams { a: 2.0, m: 1.0, f0: 0.1, sign_f: 1.0, g0: 1.0, y0: 0.0, sign_g: 1.0 }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum TranslationCase {
    /// `f = x^2/m + a x + b`, `g = m y^2/4 + c y + d`, speed `(0,0,1)`.
    AdditiveVertical { m: f64, a: f64, b: f64, c: f64, d: f64 },
    /// `f` as above, `g` solving `g'' = (m/2)(v3 - g')^4` on `2c + m y > 0`,
    /// the solution for the speed `(0, 1, v3)`. That vector is not unit length;
    /// the builder dilates the surface by `1 + v3^2`, which turns the same
    /// graph into a translator for the normalized speed.
    AdditiveTilted { m: f64, a: f64, b: f64, c: f64, d: f64, v3: f64 },
    /// Sideways graph `X(x, z) = (x, f(x) + g(z), z)` with
    /// `f = x^2/(2m) + a x + b`, `g = -(1/(2m))(-3 m z + c)^{2/3} + d`
    /// on `-3 m z + c > 0`, speed `(0,0,1)`.
    GraphXz { m: f64, a: f64, b: f64, c: f64, d: f64 },
    /// Product chart `X(z, y) = (f(z) g(y), y, z)`, speed `(0,0,1)`.
    Homothetical(HomotheticalParams),
}

/// A case plus the requested chart rectangle `(u, v)`. Chart variables per
/// case: additive `(x, y)`, sideways graph `(x, z)`, homothetical `(z, y)`.
#[derive(Clone, Copy, Debug)]
pub struct TranslationParams {
    pub case: TranslationCase,
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
}

#[derive(Clone, Debug)]
enum Component {
    Quadratic { c2: f64, c1: f64, c0: f64 },
    /// `g` of the tilted case: `v3 (2c + m y)/m - (3/2)^{2/3}(2c+my)^{2/3}/m + d`.
    TiltedG { m: f64, c: f64, d: f64, v3: f64 },
    /// `g` of the sideways graph: `-(1/(2m))(-3 m z + c)^{2/3} + d`.
    SidewaysG { m: f64, c: f64, d: f64 },
    /// `g(y) = 1/(1/g0 - s sqrt(a/2)(y - y0))`, the general `g'^2 = a g^4 / 2`.
    HomoG { a: f64, g0: f64, y0: f64, sign: f64 },
    /// Marched `f` of the homothetical Bernoulli ODE, cubic-Hermite table.
    HomoF(MarchTable),
}

impl Component {
    /// `(value, first, second)` derivative jet at `t`.
    fn jet(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Component::Quadratic { c2, c1, c0 } => {
                (c2 * t * t + c1 * t + c0, 2.0 * c2 * t + c1, 2.0 * c2)
            }
            Component::TiltedG { m, c, d, v3 } => {
                let base = 2.0 * c + m * t;
                let g = v3 * base / m - (1.5f64).powf(2.0 / 3.0) * base.powf(2.0 / 3.0) / m + d;
                let g1 = v3 - (2.0f64 / 3.0).powf(1.0 / 3.0) * base.powf(-1.0 / 3.0);
                let g2 = m / 3.0 * (2.0f64 / 3.0).powf(1.0 / 3.0) * base.powf(-4.0 / 3.0);
                (g, g1, g2)
            }
            Component::SidewaysG { m, c, d } => {
                let base = -3.0 * m * t + c;
                (
                    -base.powf(2.0 / 3.0) / (2.0 * m) + d,
                    base.powf(-1.0 / 3.0),
                    m * base.powf(-4.0 / 3.0),
                )
            }
            Component::HomoG { a, g0, y0, sign } => {
                let root = (a / 2.0).sqrt();
                let g = 1.0 / (1.0 / g0 - sign * root * (t - y0));
                (g, sign * root * g * g, a * g * g * g)
            }
            Component::HomoF(table) => table.jet(t),
        }
    }
}

/// Dense output of the fourth-order march: nodes plus Hermite interpolation.
#[derive(Clone, Debug)]
struct MarchTable {
    zs: Vec<f64>,
    fs: Vec<f64>,
    dfs: Vec<f64>,
    /// Bernoulli data needed for the analytic `f'` and `f''`.
    a: f64,
    m: f64,
    sign: f64,
}

impl MarchTable {
    fn slope(&self, f: f64) -> f64 {
        self.sign * self.a.sqrt() * self.m * f.max(0.0).sqrt()
            / (1.0 - 2.0 * self.m * self.m * f).max(1e-300).sqrt()
    }

    fn curvature(&self, f: f64) -> f64 {
        let den = 1.0 - 2.0 * self.m * self.m * f;
        self.a * self.m * self.m / (2.0 * den * den)
    }

    fn jet(&self, z: f64) -> (f64, f64, f64) {
        let n = self.zs.len();
        let i = match self.zs.binary_search_by(|p| p.partial_cmp(&z).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let h = self.zs[i + 1] - self.zs[i];
        let t = (z - self.zs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let f = (2.0 * t3 - 3.0 * t2 + 1.0) * self.fs[i]
            + (t3 - 2.0 * t2 + t) * h * self.dfs[i]
            + (-2.0 * t3 + 3.0 * t2) * self.fs[i + 1]
            + (t3 - t2) * h * self.dfs[i + 1];
        (f, self.slope(f), self.curvature(f))
    }
}

/// A built translator of translation type: the chart surface, its intrinsic
/// unit speed, and the component curves for pointwise checks.
#[derive(Clone, Debug)]
pub struct TranslationSurface {
    pub params: TranslationParams,
    pub speed: Vec3,
    comp_u: Component,
    comp_v: Component,
    /// Chart actually achieved (radicand clipping, march extent).
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    scale: f64,
    swap_chart: bool,
}

impl TranslationSurface {
    /// `(f, f', f'')` of the u-direction component.
    pub fn u_parts(&self, u: f64) -> (f64, f64, f64) {
        self.comp_u.jet(u)
    }

    /// `(g, g', g'')` of the v-direction component.
    pub fn v_parts(&self, v: f64) -> (f64, f64, f64) {
        self.comp_v.jet(v)
    }

    /// Pointwise residual of the product-separable equation
    /// `f g f'' g'' - f'^2 g'^2 - f'^4 g^4` (homothetical case only).
    pub fn homothetical_pde_residual(&self, z: f64, y: f64) -> Option<f64> {
        match self.params.case {
            TranslationCase::Homothetical(_) => {
                let (f, f1, f2) = self.u_parts(z);
                let (g, g1, g2) = self.v_parts(y);
                Some(f * g * f2 * g2 - f1 * f1 * g1 * g1 - f1.powi(4) * g.powi(4))
            }
            _ => None,
        }
    }

    pub fn surface(&self) -> ParamSurface {
        let comp_u = self.comp_u.clone();
        let comp_v = self.comp_v.clone();
        let case = self.params.case;
        let scale = self.scale;

        let jet = move |u: f64, v: f64| -> SurfaceJet {
            let (f, f1, f2) = comp_u.jet(u);
            let (g, g1, g2) = comp_v.jet(v);
            let raw = match case {
                TranslationCase::AdditiveVertical { .. } | TranslationCase::AdditiveTilted { .. } => {
                    SurfaceJet {
                        x: Vec3::new(u, v, f + g),
                        xu: Vec3::new(1.0, 0.0, f1),
                        xv: Vec3::new(0.0, 1.0, g1),
                        xuu: Vec3::new(0.0, 0.0, f2),
                        xuv: Vec3::ZERO,
                        xvv: Vec3::new(0.0, 0.0, g2),
                    }
                }
                TranslationCase::GraphXz { .. } => SurfaceJet {
                    x: Vec3::new(u, f + g, v),
                    xu: Vec3::new(1.0, f1, 0.0),
                    xv: Vec3::new(0.0, g1, 1.0),
                    xuu: Vec3::new(0.0, f2, 0.0),
                    xuv: Vec3::ZERO,
                    xvv: Vec3::new(0.0, g2, 0.0),
                },
                TranslationCase::Homothetical(_) => SurfaceJet {
                    x: Vec3::new(f * g, v, u),
                    xu: Vec3::new(f1 * g, 0.0, 1.0),
                    xv: Vec3::new(f * g1, 1.0, 0.0),
                    xuu: Vec3::new(f2 * g, 0.0, 0.0),
                    xuv: Vec3::new(f1 * g1, 0.0, 0.0),
                    xvv: Vec3::new(f * g2, 0.0, 0.0),
                },
            };
            SurfaceJet {
                x: raw.x * scale,
                xu: raw.xu * scale,
                xv: raw.xv * scale,
                xuu: raw.xuu * scale,
                xuv: raw.xuv * scale,
                xvv: raw.xvv * scale,
            }
        };

        if self.swap_chart {
            ParamSurface::analytic(ChartRect::new(self.v_range, self.u_range), move |v, u| {
                let j = jet(u, v);
                SurfaceJet { x: j.x, xu: j.xv, xv: j.xu, xuu: j.xvv, xuv: j.xuv, xvv: j.xuu }
            })
        } else {
            ParamSurface::analytic(ChartRect::new(self.u_range, self.v_range), jet)
        }
    }
}

/// Clips `span` to `{t : base0 + slope * t > RADICAND_CLIP}`.
fn clip_to_positive(span: (f64, f64), base0: f64, slope: f64) -> Result<(f64, f64), TranslationError> {
    let (mut lo, mut hi) = span;
    if slope > 0.0 {
        lo = lo.max((RADICAND_CLIP - base0) / slope);
    } else if slope < 0.0 {
        hi = hi.min((RADICAND_CLIP - base0) / slope);
    } else if base0 <= RADICAND_CLIP {
        return Err(TranslationError::EmptyChart);
    }
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(TranslationError::EmptyChart)
    }
}

/// Builds the quarter-power translator for any of the four cases.
pub fn build_quarter_solution(params: &TranslationParams) -> Result<TranslationSurface, TranslationError> {
    if !(params.u_range.0 < params.u_range.1) || !(params.v_range.0 < params.v_range.1) {
        return Err(TranslationError::EmptyChart);
    }
    match params.case {
        TranslationCase::AdditiveVertical { m, a, b, c, d } => {
            if m == 0.0 {
                return Err(TranslationError::ZeroM);
            }
            Ok(TranslationSurface {
                params: *params,
                speed: Vec3::EZ,
                comp_u: Component::Quadratic { c2: 1.0 / m, c1: a, c0: b },
                comp_v: Component::Quadratic { c2: m / 4.0, c1: c, c0: d },
                u_range: params.u_range,
                v_range: params.v_range,
                scale: 1.0,
                swap_chart: false,
            })
        }
        TranslationCase::AdditiveTilted { m, a, b, c, d, v3 } => {
            if m == 0.0 {
                return Err(TranslationError::ZeroM);
            }
            let v_range = clip_to_positive(params.v_range, 2.0 * c, m)?;
            let mu2 = 1.0 + v3 * v3;
            Ok(TranslationSurface {
                params: *params,
                speed: Vec3::new(0.0, 1.0, v3) / mu2.sqrt(),
                comp_u: Component::Quadratic { c2: 1.0 / m, c1: a, c0: b },
                comp_v: Component::TiltedG { m, c, d, v3 },
                u_range: params.u_range,
                v_range,
                scale: mu2,
                swap_chart: false,
            })
        }
        TranslationCase::GraphXz { m, a, b, c, d } => {
            if m == 0.0 {
                return Err(TranslationError::ZeroM);
            }
            let v_range = clip_to_positive(params.v_range, c, -3.0 * m)?;
            Ok(TranslationSurface {
                params: *params,
                speed: Vec3::EZ,
                comp_u: Component::Quadratic { c2: 0.5 / m, c1: a, c0: b },
                comp_v: Component::SidewaysG { m, c, d },
                u_range: params.u_range,
                v_range,
                scale: 1.0,
                swap_chart: false,
            })
        }
        TranslationCase::Homothetical(h) => build_homothetical_impl(params, &h),
    }
}

/// Builds the homothetical example: `g` from the explicit solution of
/// `g'^2 = (a/2) g^4`, `f` marched through its Bernoulli first integral.
pub fn build_homothetical(params: &TranslationParams) -> Result<TranslationSurface, TranslationError> {
    match params.case {
        TranslationCase::Homothetical(h) => build_homothetical_impl(params, &h),
        _ => build_quarter_solution(params),
    }
}

fn build_homothetical_impl(
    params: &TranslationParams,
    h: &HomotheticalParams,
) -> Result<TranslationSurface, TranslationError> {
    if h.a <= 0.0 {
        return Err(TranslationError::NonPositiveA { a: h.a });
    }
    if h.m == 0.0 {
        return Err(TranslationError::ZeroM);
    }
    let f_hi = 1.0 / (2.0 * h.m * h.m);
    if !(h.f0 > 0.0 && h.f0 < f_hi) {
        return Err(TranslationError::FRangeViolated { f0: h.f0, hi: f_hi });
    }

    // Keep the requested y-range clear of the g pole.
    let pole = h.y0 + 1.0 / (h.g0 * h.sign_g * (h.a / 2.0).sqrt());
    let (mut v_lo, mut v_hi) = params.v_range;
    let margin = RADICAND_CLIP * (v_hi - v_lo).abs().max(1.0);
    if pole > v_lo && pole < v_hi {
        if h.y0 < pole {
            v_hi = pole - margin;
        } else {
            v_lo = pole + margin;
        }
    }
    if !(v_lo < v_hi) {
        return Err(TranslationError::PoleInRange { at: pole });
    }

    let table = march_homothetical(h, params.u_range.0, params.u_range.1, f_hi)?;
    let u_range = (table.zs[0], *table.zs.last().unwrap());
    if u_range.1 - u_range.0 < 1e-9 {
        return Err(TranslationError::MarchStalled { at: u_range.0 });
    }

    // Orient the chart so <N, e3> = K^{1/4} >= 0, i.e. f' g > 0.
    let (_, f1_mid, _) = table.jet(0.5 * (u_range.0 + u_range.1));
    let g_mid = Component::HomoG { a: h.a, g0: h.g0, y0: h.y0, sign: h.sign_g }
        .jet(0.5 * (v_lo + v_hi))
        .0;
    let swap_chart = f1_mid * g_mid < 0.0;

    Ok(TranslationSurface {
        params: *params,
        speed: Vec3::EZ,
        comp_u: Component::HomoF(table),
        comp_v: Component::HomoG { a: h.a, g0: h.g0, y0: h.y0, sign: h.sign_g },
        u_range,
        v_range: (v_lo, v_hi),
        scale: 1.0,
        swap_chart,
    })
}

/// Classical fourth-order step with step-halving control on
/// `f' = sign sqrt(a) m sqrt(f) / sqrt(1 - 2 m^2 f)`, stopping short of the
/// range boundary where the slope blows up.
fn march_homothetical(
    h: &HomotheticalParams,
    z0: f64,
    z1: f64,
    f_hi: f64,
) -> Result<MarchTable, TranslationError> {
    let guard = 1e-3 * f_hi;
    let table_seed = MarchTable {
        zs: vec![z0],
        fs: vec![h.f0],
        dfs: vec![],
        a: h.a,
        m: h.m,
        sign: h.sign_f,
    };
    let deriv = |f: f64| table_seed.slope(f);

    let rk4 = |f: f64, step: f64| -> f64 {
        let k1 = deriv(f);
        let k2 = deriv(f + 0.5 * step * k1);
        let k3 = deriv(f + 0.5 * step * k2);
        let k4 = deriv(f + step * k3);
        f + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };

    let mut zs = vec![z0];
    let mut fs = vec![h.f0];
    let mut dfs = vec![deriv(h.f0)];
    let mut z = z0;
    let mut f = h.f0;
    let mut step = (z1 - z0) / 1024.0;
    let min_step = (z1 - z0) * 1e-12;

    while z < z1 {
        let step_now = step.min(z1 - z);
        let full = rk4(f, step_now);
        let half = rk4(rk4(f, 0.5 * step_now), 0.5 * step_now);
        let err = (full - half).abs();
        if err > 1e-12 * (1.0 + half.abs()) && step_now > min_step {
            step = 0.5 * step_now;
            continue;
        }
        let f_next = half;
        if !(f_next > guard && f_next < f_hi - guard) {
            break;
        }
        z += step_now;
        f = f_next;
        zs.push(z);
        fs.push(f);
        dfs.push(deriv(f));
        if err < 1e-14 * (1.0 + f.abs()) {
            step = (1.5 * step).min((z1 - z0) / 64.0);
        }
    }
    if zs.len() < 2 {
        return Err(TranslationError::MarchStalled { at: z0 });
    }
    Ok(MarchTable { zs, fs, dfs, a: h.a, m: h.m, sign: h.sign_f })
}

/// Kernel residual of a built quarter-power surface evaluated under a
/// different exponent. For `alpha != 1/4` the report's `max_abs` sits above a
/// positive floor: translation-type surfaces only solve the quarter power.
pub fn mismatch_obstruction(
    surface: &TranslationSurface,
    alpha: f64,
    grid: (usize, usize),
) -> Result<ResidualReport, TranslationError> {
    let spec = TranslatorSpec::new(alpha, surface.speed)?;
    Ok(translator_residual(&surface.surface(), &spec, grid)?)
}

/// The four coefficients of the cubic-in-`g'` polynomial from the
/// nonexistence proof, evaluated from `f` data at one abscissa. For the
/// quadratic `f` of case (1) (`f''' = 0`), `a1 = a3 = 0` forces `v2 = 0`, and
/// then `a0`, `a2` cannot both vanish unless `4 alpha - 1 = 0`.
#[derive(Clone, Copy, Debug)]
pub struct ProofCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

pub fn obstruction_coefficients(alpha: f64, v: Vec3, f1: f64, f2: f64, f3: f64) -> ProofCoefficients {
    let p = v.z - v.x * f1;
    let fourm1 = 4.0 * alpha - 1.0;
    let pow_low = f2.powf(-alpha - 1.0);
    let pow_high = f2.powf(1.0 - alpha);
    let a3 = alpha * pow_low * f3 * v.y;
    let a1 = -v.y * fourm1 * f1 * f2 + alpha * v.y * (1.0 + f1 * f1) * pow_low * f3;
    let a2 = v.x * pow_high + alpha * pow_low * f3 * p;
    let a0 = fourm1 * p * f1 * f2 - (1.0 + f1 * f1) * (v.x * pow_high + alpha * pow_low * f3 * p);
    ProofCoefficients { a0, a1, a2, a3 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case1() -> TranslationParams {
        TranslationParams {
            case: TranslationCase::AdditiveVertical { m: 2.0, a: 0.0, b: 0.0, c: 0.0, d: 0.0 },
            u_range: (-1.0, 1.0),
            v_range: (-1.0, 1.0),
        }
    }

    #[test]
    fn case1_is_a_paraboloid() {
        let s = build_quarter_solution(&case1()).unwrap();
        let (f, f1, f2) = s.u_parts(0.5);
        assert!((f - 0.125).abs() < 1e-15);
        assert!((f1 - 0.5).abs() < 1e-15);
        assert!((f2 - 1.0).abs() < 1e-15);
        let (_, _, g2) = s.v_parts(0.3);
        assert!((g2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn case1_zero_m_rejected() {
        let mut p = case1();
        p.case = TranslationCase::AdditiveVertical { m: 0.0, a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
        assert!(matches!(build_quarter_solution(&p), Err(TranslationError::ZeroM)));
    }

    #[test]
    fn tilted_slope_example() {
        // m = 1, c = 1, v3 = 0 at y = 0: g' = -(2/3)^{1/3} (2c)^{-1/3}.
        let p = TranslationParams {
            case: TranslationCase::AdditiveTilted { m: 1.0, a: 0.0, b: 0.0, c: 1.0, d: 0.0, v3: 0.0 },
            u_range: (-1.0, 1.0),
            v_range: (-1.0, 1.0),
        };
        let s = build_quarter_solution(&p).unwrap();
        let (_, g1, g2) = s.v_parts(0.0);
        let expect = -(2.0f64 / 3.0).powf(1.0 / 3.0) * (2.0f64).powf(-1.0 / 3.0);
        assert!((g1 - expect).abs() < 1e-14);
        // g'' = (m/2)(v3 - g')^4 with v2 = 1.
        assert!((g2 - 0.5 * (0.0 - g1).powi(4)).abs() < 1e-14);
    }

    #[test]
    fn tilted_chart_is_clipped() {
        let p = TranslationParams {
            case: TranslationCase::AdditiveTilted { m: 1.0, a: 0.0, b: 0.0, c: 0.0, d: 0.0, v3: 0.5 },
            u_range: (-1.0, 1.0),
            v_range: (-1.0, 1.0),
        };
        let s = build_quarter_solution(&p).unwrap();
        assert!(s.v_range.0 >= RADICAND_CLIP);
    }

    #[test]
    fn graph_xz_matches_explicit_functions() {
        let p = TranslationParams {
            case: TranslationCase::GraphXz { m: 1.0, a: 0.0, b: 0.0, c: 0.0, d: 0.0 },
            u_range: (-1.0, 1.0),
            v_range: (-2.0, -0.5),
        };
        let s = build_quarter_solution(&p).unwrap();
        let (g, g1, _) = s.v_parts(-1.0);
        assert!((g - (-0.5 * 3.0f64.powf(2.0 / 3.0))).abs() < 1e-14);
        assert!(g1 > 0.0);
        let (f, _, f2) = s.u_parts(0.8);
        assert!((f - 0.32).abs() < 1e-15);
        assert!((f2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn homothetical_g_identities() {
        let p = TranslationParams {
            case: TranslationCase::Homothetical(HomotheticalParams::default()),
            u_range: (0.0, 0.4),
            v_range: (-0.5, 0.5),
        };
        let s = build_homothetical(&p).unwrap();
        for &y in &[-0.4, -0.1, 0.2, 0.45] {
            let (g, g1, g2) = s.v_parts(y);
            // Separation constant b = 1/2: g'^2 / (a g^4) = 1/2.
            assert!((g1 * g1 / (2.0 * g.powi(4)) - 0.5).abs() < 1e-12);
            // g''/g^3 = a.
            assert!((g2 / g.powi(3) - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn homothetical_f_first_integral() {
        let p = TranslationParams {
            case: TranslationCase::Homothetical(HomotheticalParams::default()),
            u_range: (0.0, 0.4),
            v_range: (-0.5, 0.5),
        };
        let s = build_homothetical(&p).unwrap();
        let (z0, z1) = s.u_range;
        for i in 0..9 {
            let z = z0 + (z1 - z0) * (0.05 + 0.9 * i as f64 / 8.0);
            let (f, f1, f2) = s.u_parts(z);
            // f f'' - f'^2/2 = f'^4 / a.
            let lhs = f * f2 - 0.5 * f1 * f1;
            let rhs = f1.powi(4) / 2.0;
            assert!((lhs - rhs).abs() < 1e-6 * (1.0 + rhs.abs()), "z = {z}: {lhs} vs {rhs}");
            // And the explicit Bernoulli slope.
            let expect = 2.0f64.sqrt() * f.sqrt() / (1.0 - 2.0 * f).sqrt();
            assert!((f1 - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn homothetical_avoids_g_pole() {
        // a = 2, g0 = 1, y0 = 0 puts the pole at y = 1.
        let p = TranslationParams {
            case: TranslationCase::Homothetical(HomotheticalParams::default()),
            u_range: (0.0, 0.4),
            v_range: (0.0, 2.0),
        };
        let s = build_homothetical(&p).unwrap();
        assert!(s.v_range.1 < 1.0);
    }

    #[test]
    fn homothetical_f0_validation() {
        // f0 above 1/(2 m^2) = 0.5 must be rejected.
        let h = HomotheticalParams { f0: 0.7, ..HomotheticalParams::default() };
        let p = TranslationParams {
            case: TranslationCase::Homothetical(h),
            u_range: (0.0, 0.4),
            v_range: (-0.5, 0.5),
        };
        assert!(matches!(build_homothetical(&p), Err(TranslationError::FRangeViolated { .. })));
    }

    #[test]
    fn proof_coefficients_case1() {
        // Case-(1) data: f'' = 2/m constant, f''' = 0, alpha = 1/2.
        let m = 2.0;
        for &x in &[0.2, 0.7, 1.3] {
            let f1 = 2.0 * x / m;
            let f2 = 2.0 / m;
            let cy = obstruction_coefficients(0.5, Vec3::EY, f1, f2, 0.0);
            assert_eq!(cy.a3, 0.0);
            assert!(cy.a1.abs() > 1e-3, "a1 must force v2 = 0");
            let cz = obstruction_coefficients(0.5, Vec3::EZ, f1, f2, 0.0);
            assert_eq!(cz.a1, 0.0);
            assert_eq!(cz.a3, 0.0);
            assert_eq!(cz.a2, 0.0);
            assert!(cz.a0.abs() > 1e-3, "a0 cannot vanish for alpha != 1/4");
            let cq = obstruction_coefficients(0.25, Vec3::EZ, f1, f2, 0.0);
            assert!(cq.a0.abs() < 1e-15, "alpha = 1/4 kills the obstruction");
        }
    }
}
