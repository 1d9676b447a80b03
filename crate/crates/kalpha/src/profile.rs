//! Sampled generating curves shared by the rotational and helicoidal
//! families: `(r, f, f', f'')` tables over a maximal domain, built by
//! adaptive quadrature of the slope field.

use thiserror::Error;

use crate::helicoidal::{self, HelicoidalParams};
use crate::par;
use crate::quad::{self, Interval, QuadError};
use crate::rotational::{self, RotationalParams};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile domain is empty")]
    EmptyDomain,
    #[error("sample range [{lo}, {hi}] is empty; raise r_max or shrink the margin")]
    EmptySampleRange { lo: f64, hi: f64 },
    #[error("need at least 2 samples, got {n}")]
    TooFewSamples { n: usize },
    #[error("quadrature of the slope field failed: {0}")]
    Quadrature(#[from] QuadError),
}

/// One row of a generating-curve table.
#[derive(Clone, Copy, Debug)]
pub struct ProfileSample {
    pub r: f64,
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

/// Which slope field a profile samples. The parameters are kept so charts can
/// evaluate `f`, `f'`, `f''` analytically at any radius, not just at samples.
#[derive(Clone, Copy, Debug)]
pub enum ProfileFamily {
    Rotational(RotationalParams),
    Helicoidal(HelicoidalParams),
    /// `f` identically constant; planes and circular cylinders for oracles.
    Constant { value: f64 },
}

impl ProfileFamily {
    /// Signed `(f', f'')` at radius `r`. At a radicand zero the slope is 0 and
    /// the curvature is the one-sided limit (possibly infinite).
    pub fn slope(&self, r: f64) -> (f64, f64) {
        match self {
            ProfileFamily::Rotational(p) => p.slope_with_curvature(r),
            ProfileFamily::Helicoidal(p) => p.slope_with_curvature(r),
            ProfileFamily::Constant { .. } => (0.0, 0.0),
        }
    }

    fn branch_sign(&self) -> f64 {
        match self {
            ProfileFamily::Rotational(p) => p.branch_sign(),
            ProfileFamily::Helicoidal(p) => p.branch_sign(),
            ProfileFamily::Constant { .. } => 1.0,
        }
    }

    /// `|f'(r)|`, clamped at radicand zeros where rounding drifts negative.
    fn speed(&self, r: f64) -> f64 {
        match self {
            ProfileFamily::Rotational(p) => {
                rotational::slope_squared(p.alpha, p.m, r).max(0.0).sqrt()
            }
            ProfileFamily::Helicoidal(p) => {
                helicoidal::hel_slope_squared(p.alpha, p.m, p.h, r).max(0.0).sqrt()
            }
            ProfileFamily::Constant { .. } => 0.0,
        }
    }

    /// Height at `r` given `f(anchor_r) = anchor_f`, by adaptive quadrature of
    /// the slope field between the two radii.
    pub fn height_from(&self, anchor_r: f64, anchor_f: f64, r: f64) -> Result<f64, QuadError> {
        if let ProfileFamily::Constant { value } = self {
            return Ok(*value);
        }
        if r == anchor_r {
            return Ok(anchor_f);
        }
        let sign = self.branch_sign();
        let run = if r > anchor_r {
            quad::integrate(|t| self.speed(t), anchor_r, r, 1e-12)?.value
        } else {
            -quad::integrate(|t| self.speed(t), r, anchor_r, 1e-12)?.value
        };
        Ok(anchor_f + sign * run)
    }
}

/// How to turn a maximal domain into a finite sample grid.
#[derive(Clone, Copy, Debug)]
pub struct SamplingPolicy {
    /// Number of samples (>= 2).
    pub n: usize,
    /// Radius cap for unbounded domains.
    pub r_max: f64,
    /// Relative inset from open (singular) endpoints, as a fraction of the
    /// sampled span. Closed endpoints are sampled exactly.
    pub margin: f64,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy { n: 256, r_max: 3.0, margin: 0.01 }
    }
}

impl SamplingPolicy {
    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_r_max(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }
}

/// A sampled generating curve, its maximal domain and the family it belongs
/// to. `domain` is the maximal domain of the parameters; `samples` may cover
/// less (caps at `r_max`, insets at singular endpoints).
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    pub samples: Vec<ProfileSample>,
    pub domain: Interval,
    pub family: ProfileFamily,
    /// `(r, f)` where the vertical translation constant was fixed.
    pub anchor: (f64, f64),
}

impl ProfileCurve {
    pub fn r_range(&self) -> (f64, f64) {
        (self.samples[0].r, self.samples[self.samples.len() - 1].r)
    }

    pub fn slope(&self, r: f64) -> (f64, f64) {
        self.family.slope(r)
    }

    pub fn height(&self, r: f64) -> Result<f64, QuadError> {
        self.family.height_from(self.anchor.0, self.anchor.1, r)
    }

    /// Constant-height profile over `[r_lo, r_hi]`, an exact plane section.
    pub fn constant(value: f64, r_lo: f64, r_hi: f64, n: usize) -> ProfileCurve {
        let n = n.max(2);
        let samples = (0..n)
            .map(|i| {
                let r = r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64;
                ProfileSample { r, f: value, df: 0.0, d2f: 0.0 }
            })
            .collect();
        ProfileCurve {
            samples,
            domain: Interval::bounded(
                r_lo,
                r_hi,
                true,
                true,
                quad::EndpointKind::Regular,
                quad::EndpointKind::Regular,
            ),
            family: ProfileFamily::Constant { value },
            anchor: (r_lo, value),
        }
    }
}

/// Builds the sample table: slope values analytically per sample, heights by
/// integrating each inter-sample panel (panels run in parallel, the prefix
/// sum is sequential, so the table is deterministic).
pub(crate) fn build_profile(
    family: ProfileFamily,
    domain: Interval,
    policy: &SamplingPolicy,
    anchor_value: f64,
) -> Result<ProfileCurve, ProfileError> {
    if domain.is_empty() {
        return Err(ProfileError::EmptyDomain);
    }
    if policy.n < 2 {
        return Err(ProfileError::TooFewSamples { n: policy.n });
    }

    let hi_raw = domain.hi_or(policy.r_max);
    let span = hi_raw - domain.lo;
    if span <= 0.0 {
        return Err(ProfileError::EmptySampleRange { lo: domain.lo, hi: hi_raw });
    }
    let r_lo = if domain.lo_closed { domain.lo } else { domain.lo + policy.margin * span };
    let r_hi = match domain.hi {
        None => hi_raw,
        Some(h) if domain.hi_closed => h,
        Some(h) => h - policy.margin * span,
    };
    if !(r_lo < r_hi) {
        return Err(ProfileError::EmptySampleRange { lo: r_lo, hi: r_hi });
    }

    let n = policy.n;
    let rs: Vec<f64> = (0..n)
        .map(|i| r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64)
        .collect();

    let sign = family.branch_sign();
    let panels: Vec<Result<f64, QuadError>> = par::map_indexed(n - 1, |i| {
        quad::integrate(|t| family.speed(t), rs[i], rs[i + 1], 1e-12).map(|q| sign * q.value)
    });
    let mut increments = Vec::with_capacity(n - 1);
    for p in panels {
        increments.push(p?);
    }

    // Anchor at a closed endpoint; prefer the lower one.
    let anchor_at_lo = domain.lo_closed || !(domain.hi_closed && domain.hi.is_some());
    let mut heights = vec![0.0f64; n];
    if anchor_at_lo {
        heights[0] = anchor_value;
        for i in 0..n - 1 {
            heights[i + 1] = heights[i] + increments[i];
        }
    } else {
        heights[n - 1] = anchor_value;
        for i in (0..n - 1).rev() {
            heights[i] = heights[i + 1] - increments[i];
        }
    }

    let samples = rs
        .iter()
        .zip(heights.iter())
        .map(|(&r, &f)| {
            let (df, d2f) = family.slope(r);
            ProfileSample { r, f, df, d2f }
        })
        .collect();

    let anchor = if anchor_at_lo { (rs[0], heights[0]) } else { (rs[n - 1], heights[n - 1]) };
    Ok(ProfileCurve { samples, domain, family, anchor })
}
