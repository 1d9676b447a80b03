//! Numerical backbone: adaptive Gauss-Kronrod integration (open rules, so
//! integrable endpoint behaviour is tolerated) and a bisection/secant hybrid
//! root finder for locating radicand zeros.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("invalid bounds: require a < b (got a = {a}, b = {b})")]
    InvalidBounds { a: f64, b: f64 },
    #[error("integrand produced a non-finite value near {at}")]
    NonFiniteIntegrand { at: f64 },
    #[error(
        "tolerance not reached within {evaluations} evaluations \
         (value so far {value:e}, error estimate {error_estimate:e})"
    )]
    ToleranceNotReached { value: f64, error_estimate: f64, evaluations: usize },
}

#[derive(Debug, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {f_lo:e}, g(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("invalid bracket: require lo < hi and finite tolerance")]
    InvalidBracket,
    #[error("root function produced a non-finite value at {at}")]
    NonFinite { at: f64 },
}

/// How an interval endpoint behaves for the generating-curve families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointKind {
    /// Ordinary point, slope finite and nonzero.
    Regular,
    /// Radicand zero: the profile slope vanishes there.
    SlopeZero,
    /// The slope (and typically the height) blows up approaching the end.
    SlopeInfinite,
    /// No finite endpoint.
    Unbounded,
}

/// A real interval with endpoint classification. An unbounded upper end is
/// encoded as `hi: None`, never as an infinity sentinel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: Option<f64>,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub lo_kind: EndpointKind,
    pub hi_kind: EndpointKind,
}

impl Interval {
    pub fn bounded(
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
        lo_kind: EndpointKind,
        hi_kind: EndpointKind,
    ) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi: Some(hi), lo_closed, hi_closed, lo_kind, hi_kind }
    }

    pub fn unbounded_above(lo: f64, lo_closed: bool, lo_kind: EndpointKind) -> Interval {
        Interval {
            lo,
            hi: None,
            lo_closed,
            hi_closed: false,
            lo_kind,
            hi_kind: EndpointKind::Unbounded,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_some()
    }

    /// Upper endpoint, with `cap` standing in for an unbounded end.
    pub fn hi_or(&self, cap: f64) -> f64 {
        self.hi.unwrap_or(cap)
    }

    pub fn is_empty(&self) -> bool {
        match self.hi {
            Some(hi) => hi < self.lo || (hi == self.lo && !(self.lo_closed && self.hi_closed)),
            None => false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    /// Absolute floor added to the relative target.
    pub abs_floor: f64,
    /// Evaluation budget for one integral.
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { rel_tol: 1e-10, abs_floor: 1e-14, max_evaluations: 1_000_000 }
    }
}

// 15-point Kronrod nodes with the embedded 7-point Gauss rule (QUADPACK dqk15).
// All nodes are interior, so endpoints are never evaluated.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One Gauss-Kronrod 15 panel: returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0f64; 14];
    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv[j] = f1;
        fv[7 + j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * fsum;
        }
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    let value = res_kronrod * half;
    (value, rescale_error(err, res_abs * half.abs(), res_asc * half.abs()))
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Bisects the segment with the largest Kronrod error estimate until the
/// total estimate drops under `rel_tol * |value| + abs_floor`. The embedded
/// rule is open, so integrable endpoint singularities are sampled but never
/// evaluated at the endpoint itself.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult, QuadError> {
    integrate_opts(f, a, b, &QuadratureOptions { rel_tol, ..QuadratureOptions::default() })
}

pub fn integrate_opts<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult, QuadError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidBounds { a, b });
    }

    let (v0, e0) = gk15(&f, a, b);
    if !v0.is_finite() {
        return Err(QuadError::NonFiniteIntegrand { at: 0.5 * (a + b) });
    }
    let mut evaluations = 15usize;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v0, error: e0 });
    let mut total_value = v0;
    let mut total_error = e0;

    let width_floor = 1e-15 * (1.0 + a.abs() + b.abs());

    loop {
        if total_error <= opts.rel_tol * total_value.abs() + opts.abs_floor {
            break;
        }
        // Segments too narrow to split carry their estimate to the final tally.
        let worst = match heap.pop() {
            Some(s) if s.b - s.a > width_floor => s,
            Some(s) => {
                heap.push(s);
                break;
            }
            None => break,
        };
        if evaluations + 30 > opts.max_evaluations {
            heap.push(worst);
            let (value, error_estimate) = tally(&heap);
            return Err(QuadError::ToleranceNotReached { value, error_estimate, evaluations });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (vl, el) = gk15(&f, worst.a, mid);
        let (vr, er) = gk15(&f, mid, worst.b);
        evaluations += 30;
        if !vl.is_finite() || !vr.is_finite() {
            return Err(QuadError::NonFiniteIntegrand { at: mid });
        }
        total_value += vl + vr - worst.value;
        total_error += el + er - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: vl, error: el });
        heap.push(Segment { a: mid, b: worst.b, value: vr, error: er });
    }

    let (value, error_estimate) = tally(&heap);
    Ok(QuadratureResult { value, error_estimate, evaluations })
}

/// Deterministic final sum: segments ordered by position, not heap order.
fn tally(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    let mut value = 0.0;
    let mut error = 0.0;
    for s in segs {
        value += s.value;
        error += s.error;
    }
    (value, error)
}

/// Result of integrating toward an endpoint where the integrand blows up.
#[derive(Clone, Copy, Debug)]
pub struct SingularTail {
    pub result: QuadratureResult,
    /// The abscissa the integration actually reached (`b - delta`).
    pub cap: f64,
    /// True when the geometric tail shrank below tolerance, i.e. the improper
    /// integral converged; false when the cap floor `delta_min` was hit first.
    pub converged: bool,
}

/// Integrates `f` on `[a, b - delta]` with `delta` shrinking geometrically.
///
/// Each halving appends the panel `[b - delta, b - delta/2]`; the loop stops
/// when a panel contributes less than the tolerance (converged improper
/// integral) or when `delta` reaches `delta_min` (divergent tail, capped).
pub fn integrate_to_singular_hi<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    delta_min: f64,
) -> Result<SingularTail, QuadError> {
    if !(a < b) {
        return Err(QuadError::InvalidBounds { a, b });
    }
    let mut delta = 0.5 * (b - a);
    let first = integrate(&f, a, b - delta, rel_tol)?;
    let mut value = first.value;
    let mut error = first.error_estimate;
    let mut evaluations = first.evaluations;
    let mut converged = false;
    while delta > delta_min {
        let next = 0.5 * delta;
        let panel = integrate(&f, b - delta, b - next, rel_tol)?;
        value += panel.value;
        error += panel.error_estimate;
        evaluations += panel.evaluations;
        delta = next;
        if panel.value.abs() <= rel_tol * value.abs() + 1e-14 {
            converged = true;
            break;
        }
    }
    Ok(SingularTail {
        result: QuadratureResult { value, error_estimate: error, evaluations },
        cap: b - delta,
        converged,
    })
}

/// Bracketed root of `g` on `[lo, hi]`, by bisection refined with secant steps.
///
/// Requires a sign change. Returns the bracket midpoint once its width is at
/// most `tol`.
pub fn bracket_root<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64, RootError> {
    if !(lo < hi) || !tol.is_finite() || tol <= 0.0 {
        return Err(RootError::InvalidBracket);
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = g(a);
    let mut fb = g(b);
    if !fa.is_finite() {
        return Err(RootError::NonFinite { at: a });
    }
    if !fb.is_finite() {
        return Err(RootError::NonFinite { at: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }

    let mut use_secant = true;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let width = b - a;
        let mut x = if use_secant && fb != fa {
            b - fb * (b - a) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        // Keep the trial strictly interior; otherwise fall back to bisection.
        if !(x > a + 0.01 * width && x < b - 0.01 * width) {
            x = 0.5 * (a + b);
        }
        let fx = g(x);
        if !fx.is_finite() {
            return Err(RootError::NonFinite { at: x });
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // Alternate so a stagnating secant cannot stall convergence.
        use_secant = !use_secant || (b - a) < 0.5 * width;
    }
    Ok(0.5 * (a + b))
}
