//! Command execution and the exit-code contract.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use kalpha::helicoidal::{
    bour_admissible_range, bour_chart, hel_profile, helicoid_surface, DomainScan, HelicoidalError,
    HelicoidalParams,
};
use kalpha::kernel::{translator_residual, KernelError, ParamSurface, TranslatorSpec};
use kalpha::profile::{ProfileCurve, SamplingPolicy};
use kalpha::quad::Interval;
use kalpha::rotational::{profile as rotational_profile, revolve, RotationalError, RotationalParams};
use kalpha::ruled::{independence_probe, wronskian, RuledError};
use kalpha::translation::{
    build_quarter_solution, HomotheticalParams, TranslationCase, TranslationError,
    TranslationParams, TranslationSurface,
};
use kalpha::Vec3;

use crate::cli::{
    CaseKind, Cli, Command, Family, HelicoidalArgs, MeshArgs, RotationalArgs, RuledArgs,
    SurfaceArgs, TranslationArgs, VerifyArgs,
};
use crate::export::{self, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliErrorKind {
    /// Exit 1: the verification ran and failed its tolerance.
    Verification,
    /// Exit 2: bad flags or flag combinations.
    Usage,
    /// Exit 3: construction or numerical failure, I/O included.
    Numeric,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: CliErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { kind: CliErrorKind::Usage, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> CliError {
        CliError { kind: CliErrorKind::Numeric, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> CliError {
        CliError { kind: CliErrorKind::Verification, message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            CliErrorKind::Verification => 1,
            CliErrorKind::Usage => 2,
            CliErrorKind::Numeric => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::numeric(format!("io: {e}"))
    }
}

fn rotational_error(e: RotationalError) -> CliError {
    match e {
        RotationalError::ZeroAlpha => CliError::usage("--alpha must be nonzero"),
        RotationalError::HalfAlphaNeedsPositiveM { m } => {
            CliError::usage(format!("--m must be positive when --alpha is 0.5 (got {m})"))
        }
        other => CliError::numeric(format!("rotational construction: {other}")),
    }
}

fn helicoidal_error(e: HelicoidalError) -> CliError {
    match e {
        HelicoidalError::ZeroAlpha => CliError::usage("--alpha must be nonzero"),
        HelicoidalError::ZeroPitch => CliError::usage("--pitch must be nonzero"),
        HelicoidalError::HalfAlphaNeedsPositiveM { m } => {
            CliError::usage(format!("--m must be positive when --alpha is 0.5 (got {m})"))
        }
        other => CliError::numeric(format!("helicoidal construction: {other}")),
    }
}

fn translation_error(e: TranslationError) -> CliError {
    match e {
        TranslationError::ZeroM => CliError::usage("--m must be nonzero"),
        TranslationError::NonPositiveA { a } => {
            CliError::usage(format!("--a-h must be positive (got {a})"))
        }
        TranslationError::FRangeViolated { f0, hi } => {
            CliError::usage(format!("--f0 = {f0} outside the admissible range (0, {hi})"))
        }
        other => CliError::numeric(format!("translation construction: {other}")),
    }
}

fn kernel_error(e: KernelError) -> CliError {
    match e {
        KernelError::ZeroAlpha => CliError::usage("--alpha must be nonzero"),
        other => CliError::numeric(format!("kernel: {other}")),
    }
}

fn ruled_error(e: RuledError) -> CliError {
    match e {
        RuledError::NonIntegerAlpha => CliError::usage("--alpha must be a nonzero integer"),
        RuledError::DegenerateSampling { .. } => {
            CliError::usage("--lambda must be nonzero and --samples at least 16")
        }
        other => CliError::numeric(format!("ruled probe: {other}")),
    }
}

/// Relative paths are resolved against $KALPHA_OUT_DIR when it is set.
fn resolve_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var("KALPHA_OUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

fn with_m_suffix(path: &Path, m: f64) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_m{m}.{ext}"))
}

fn profile_rows(p: &ProfileCurve) -> Vec<(f64, f64, f64, f64)> {
    p.samples.iter().map(|s| (s.r, s.f, s.df, s.d2f)).collect()
}

fn curve_points(p: &ProfileCurve) -> Vec<(f64, f64)> {
    p.samples.iter().map(|s| (s.r, s.f)).collect()
}

fn describe_interval(d: &Interval) -> String {
    let lo_bracket = if d.lo_closed { '[' } else { '(' };
    match d.hi {
        Some(hi) => format!(
            "{}{:.6}, {:.6}{}",
            lo_bracket,
            d.lo,
            hi,
            if d.hi_closed { ']' } else { ')' }
        ),
        None => format!("{}{:.6}, inf)", lo_bracket, d.lo),
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rotational(args) => run_rotational(args),
        Command::Helicoidal(args) => run_helicoidal(args),
        Command::Translation(args) => run_translation(args),
        Command::Ruled(args) => run_ruled(args),
        Command::Verify(args) => run_verify(args),
        Command::Mesh(args) => run_mesh(args),
    }
}

fn run_rotational(args: RotationalArgs) -> Result<(), CliError> {
    let mut curves = Vec::new();
    let multiple = args.m.len() > 1;
    for &m in &args.m {
        let params = RotationalParams::new(args.alpha, m)
            .map_err(rotational_error)?
            .with_branch(!args.negative_branch)
            .with_offset(args.offset);
        let policy = SamplingPolicy::default()
            .with_n(args.samples)
            .with_r_max(args.r_max)
            .with_margin(args.margin);
        let p = rotational_profile(&params, &policy).map_err(rotational_error)?;
        let (r_lo, r_hi) = p.r_range();
        println!(
            "rotational alpha={} m={}: domain {}, sampled [{:.6}, {:.6}] ({} points)",
            args.alpha,
            m,
            describe_interval(&p.domain),
            r_lo,
            r_hi,
            p.samples.len()
        );
        if let Some(out) = &args.out {
            let path = if multiple { with_m_suffix(out, m) } else { out.clone() };
            let path = resolve_path(&path);
            export::write_profile_csv(&path, &profile_rows(&p))?;
            println!("  wrote {}", path.display());
        }
        curves.push(curve_points(&p));
    }
    if let Some(svg) = &args.svg {
        let path = resolve_path(svg);
        export::write_svg(&path, &curves)?;
        println!("  wrote {}", path.display());
    }
    Ok(())
}

fn run_helicoidal(args: HelicoidalArgs) -> Result<(), CliError> {
    let params =
        HelicoidalParams::new(args.alpha, args.m, args.pitch).map_err(helicoidal_error)?;
    let policy = SamplingPolicy::default()
        .with_n(args.samples)
        .with_r_max(args.r_max)
        .with_margin(args.margin);
    let p = hel_profile(&params, &policy).map_err(helicoidal_error)?;
    let (r_lo, r_hi) = p.r_range();
    println!(
        "helicoidal alpha={} m={} pitch={}: domain {}, sampled [{:.6}, {:.6}] ({} points)",
        args.alpha,
        args.m,
        args.pitch,
        describe_interval(&p.domain),
        r_lo,
        r_hi,
        p.samples.len()
    );
    if let Some(out) = &args.out {
        let path = resolve_path(out);
        export::write_profile_csv(&path, &profile_rows(&p))?;
        println!("  wrote {}", path.display());
    }
    if let Some(svg) = &args.svg {
        let path = resolve_path(svg);
        export::write_svg(&path, &[curve_points(&p)])?;
        println!("  wrote {}", path.display());
    }
    Ok(())
}

fn translation_params(s: &SurfaceArgs) -> TranslationParams {
    let case = match s.case {
        CaseKind::AdditiveV3 => {
            TranslationCase::AdditiveVertical { m: s.m, a: s.a, b: s.b, c: s.c, d: s.d }
        }
        CaseKind::AdditiveV2 => {
            TranslationCase::AdditiveTilted { m: s.m, a: s.a, b: s.b, c: s.c, d: s.d, v3: s.v3 }
        }
        CaseKind::GraphXz => TranslationCase::GraphXz { m: s.m, a: s.a, b: s.b, c: s.c, d: s.d },
        CaseKind::Homothetical => TranslationCase::Homothetical(HomotheticalParams {
            a: s.a_h,
            m: s.m_h,
            f0: s.f0,
            sign_f: 1.0,
            g0: s.g0,
            y0: s.y0,
            sign_g: 1.0,
        }),
    };
    let (du, dv) = match s.case {
        CaseKind::Homothetical => ((0.0, 0.4), (-0.5, 0.5)),
        _ => ((-1.0, 1.0), (-1.0, 1.0)),
    };
    TranslationParams {
        case,
        u_range: (s.u_min.unwrap_or(du.0), s.u_max.unwrap_or(du.1)),
        v_range: (s.v_min.unwrap_or(dv.0), s.v_max.unwrap_or(dv.1)),
    }
}

struct BuiltSurface {
    surface: ParamSurface,
    speed: Vec3,
    family: String,
    build_alpha: f64,
}

fn build_translation(s: &SurfaceArgs) -> Result<TranslationSurface, CliError> {
    build_quarter_solution(&translation_params(s)).map_err(translation_error)
}

fn build_surface(s: &SurfaceArgs) -> Result<BuiltSurface, CliError> {
    let policy = SamplingPolicy::default()
        .with_n(s.samples)
        .with_r_max(s.r_max)
        .with_margin(s.margin);
    match s.family {
        Family::Rotational => {
            let params = RotationalParams::new(s.alpha, s.m).map_err(rotational_error)?;
            let p = rotational_profile(&params, &policy).map_err(rotational_error)?;
            Ok(BuiltSurface {
                surface: revolve(&p),
                speed: Vec3::EZ,
                family: "rotational".into(),
                build_alpha: s.alpha,
            })
        }
        Family::Helicoidal => {
            let params =
                HelicoidalParams::new(s.alpha, s.m, s.pitch).map_err(helicoidal_error)?;
            let p = hel_profile(&params, &policy).map_err(helicoidal_error)?;
            let surface = helicoid_surface(&p, s.pitch).map_err(helicoidal_error)?;
            Ok(BuiltSurface {
                surface,
                speed: Vec3::EZ,
                family: "helicoidal".into(),
                build_alpha: s.alpha,
            })
        }
        Family::Bour => {
            let params =
                HelicoidalParams::new(s.alpha, s.m, s.pitch).map_err(helicoidal_error)?;
            let (u_lo, u_hi) = match (s.u_min, s.u_max) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => {
                    let range = bour_admissible_range(&params, &DomainScan::default())
                        .map_err(helicoidal_error)?;
                    match range.hi {
                        Some(hi) => {
                            let lo = if range.lo_closed {
                                range.lo
                            } else {
                                range.lo + s.margin.max(0.01) * (hi - range.lo)
                            };
                            (s.u_min.unwrap_or(lo), s.u_max.unwrap_or(hi))
                        }
                        None => {
                            let lo = range.lo;
                            (s.u_min.unwrap_or(lo), s.u_max.unwrap_or(lo + 2.0))
                        }
                    }
                }
            };
            let chart =
                bour_chart(&params, u_lo, u_hi, s.samples).map_err(helicoidal_error)?;
            Ok(BuiltSurface {
                surface: chart.surface(),
                speed: Vec3::EZ,
                family: "bour".into(),
                build_alpha: s.alpha,
            })
        }
        Family::Translation => {
            let ts = build_translation(s)?;
            let case = match s.case {
                CaseKind::AdditiveV3 => "additive-v3",
                CaseKind::AdditiveV2 => "additive-v2",
                CaseKind::GraphXz => "graph-xz",
                CaseKind::Homothetical => "homothetical",
            };
            Ok(BuiltSurface {
                surface: ts.surface(),
                speed: ts.speed,
                family: format!("translation:{case}"),
                build_alpha: 0.25,
            })
        }
    }
}

fn run_translation(args: TranslationArgs) -> Result<(), CliError> {
    if args.surface.family != Family::Translation {
        return Err(CliError::usage("the translation subcommand requires --family translation"));
    }
    let ts = build_translation(&args.surface)?;
    println!(
        "translation {:?}: chart u in [{:.6}, {:.6}], v in [{:.6}, {:.6}], speed ({:.6}, {:.6}, {:.6})",
        args.surface.case, ts.u_range.0, ts.u_range.1, ts.v_range.0, ts.v_range.1,
        ts.speed.x, ts.speed.y, ts.speed.z
    );
    let spec = TranslatorSpec::new(0.25, ts.speed).map_err(kernel_error)?;
    let report = translator_residual(&ts.surface(), &spec, (16, 16)).map_err(kernel_error)?;
    println!("  quarter-power residual on 16x16: max_abs = {:.3e}", report.max_abs);

    if let Some(prefix) = &args.out {
        let n = args.curve_samples.max(2);
        let sample = |range: (f64, f64), part: &dyn Fn(f64) -> (f64, f64, f64)| {
            (0..n)
                .map(|i| {
                    let t = range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64;
                    let (v, d1, d2) = part(t);
                    (t, v, d1, d2)
                })
                .collect::<Vec<_>>()
        };
        let f_rows = sample(ts.u_range, &|t| ts.u_parts(t));
        let g_rows = sample(ts.v_range, &|t| ts.v_parts(t));
        let base = resolve_path(prefix);
        let stem = base.file_name().and_then(|s| s.to_str()).unwrap_or("curve").to_string();
        let f_path = base.with_file_name(format!("{stem}_f.csv"));
        let g_path = base.with_file_name(format!("{stem}_g.csv"));
        export::write_profile_csv(&f_path, &f_rows)?;
        export::write_profile_csv(&g_path, &g_rows)?;
        println!("  wrote {}", f_path.display());
        println!("  wrote {}", g_path.display());
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct RuledReport {
    alpha: i32,
    lambda: f64,
    t_range: [f64; 2],
    samples: usize,
    min_eigenvalue: f64,
    tolerance: f64,
    independent: bool,
}

fn run_ruled(args: RuledArgs) -> Result<(), CliError> {
    let min_eig = independence_probe(args.alpha, args.lambda, (args.t_min, args.t_max), args.samples)
        .map_err(ruled_error)?;
    let independent = min_eig > args.tol;
    println!(
        "ruled probe alpha={} lambda={}: Gram min eigenvalue = {:.6e} over t in [{}, {}] ({} samples)",
        args.alpha, args.lambda, min_eig, args.t_min, args.t_max, args.samples
    );
    for i in 0..5 {
        let t = args.t_min + (args.t_max - args.t_min) * i as f64 / 4.0;
        println!(
            "  wronskian(alpha, lambda, t = {:+.3}) = {:.6e}",
            t,
            wronskian(args.alpha as f64, args.lambda, t)
        );
    }
    if let Some(json) = &args.json {
        let path = resolve_path(json);
        let report = RuledReport {
            alpha: args.alpha,
            lambda: args.lambda,
            t_range: [args.t_min, args.t_max],
            samples: args.samples,
            min_eigenvalue: min_eig,
            tolerance: args.tol,
            independent,
        };
        let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
        body.push('\n');
        std::fs::write(&path, body)?;
        println!("  wrote {}", path.display());
    }
    if independent {
        println!("  independent: no constant combination cancels the reduced equation");
        Ok(())
    } else {
        Err(CliError::verification(format!(
            "Gram minimum {min_eig:e} at or below tolerance {:e}",
            args.tol
        )))
    }
}

fn parse_grid(text: &str) -> Result<(usize, usize), CliError> {
    let mut it = text.split('x');
    let err = || CliError::usage(format!("--grid expects NUxNV, got '{text}'"));
    let nu = it.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
    let nv = it.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
    if it.next().is_some() {
        return Err(err());
    }
    Ok((nu, nv))
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let built = build_surface(&args.surface)?;
    let test_alpha = args.test_alpha.unwrap_or(built.build_alpha);
    let grid = parse_grid(&args.grid)?;
    let spec = TranslatorSpec::new(test_alpha, built.speed).map_err(kernel_error)?;
    let report = translator_residual(&built.surface, &spec, grid).map_err(kernel_error)?;
    let pass = report.max_abs <= args.tol;
    println!(
        "verify {} alpha={} grid={}x{}: max_abs = {:.6e}, mean_abs = {:.6e}, skipped = {} -> {}",
        built.family,
        test_alpha,
        grid.0,
        grid.1,
        report.max_abs,
        report.mean_abs,
        report.skipped.len(),
        if pass { "PASS" } else { "FAIL" }
    );
    if let Some(json) = &args.json {
        let path = resolve_path(json);
        export::write_json(
            &path,
            &VerifyReport {
                family: built.family.clone(),
                alpha: test_alpha,
                speed: [built.speed.x, built.speed.y, built.speed.z],
                grid: [grid.0, grid.1],
                max_abs: report.max_abs,
                mean_abs: report.mean_abs,
                skipped: report.skipped.len(),
                tolerance: args.tol,
                pass,
            },
        )?;
        println!("  wrote {}", path.display());
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::verification(format!(
            "max residual {:e} exceeds tolerance {:e}",
            report.max_abs, args.tol
        )))
    }
}

fn run_mesh(args: MeshArgs) -> Result<(), CliError> {
    let built = build_surface(&args.surface)?;
    let (nu, nv) = (args.nu.max(1), args.nv.max(1));
    let (u0, u1) = built.surface.domain.u;
    let (v0, v1) = built.surface.domain.v;
    let mut vertices = Vec::with_capacity((nu + 1) * (nv + 1));
    for i in 0..=nu {
        for j in 0..=nv {
            let u = u0 + (u1 - u0) * i as f64 / nu as f64;
            let v = v0 + (v1 - v0) * j as f64 / nv as f64;
            vertices.push(built.surface.position(u, v).map_err(kernel_error)?);
        }
    }
    let path = resolve_path(&args.out);
    export::write_obj(&path, &vertices, nu, nv)?;
    println!(
        "mesh {}: wrote {} ({} vertices, {} triangles)",
        built.family,
        path.display(),
        vertices.len(),
        2 * nu * nv
    );
    Ok(())
}
