//! Flag surface of the `kalpha` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "kalpha",
    version,
    about = "Builds and verifies translating solitons of Gauss-curvature-power flows",
    after_help = "Relative output paths are resolved against $KALPHA_OUT_DIR when it is set.\n\
                  Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 construction or numerical error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rotational generating curves: CSV/SVG export of (r, f, f', f'')
    Rotational(RotationalArgs),
    /// Helicoidal generating curves: CSV/SVG export of (r, f, f', f'')
    Helicoidal(HelicoidalArgs),
    /// Translation-type surfaces: component curves and a residual summary
    Translation(TranslationArgs),
    /// Ruled nonexistence probe: Gram minimum and Wronskian table
    Ruled(RuledArgs),
    /// Verify the translator equation on a grid; nonzero exit on failure
    Verify(VerifyArgs),
    /// Triangulated OBJ mesh of a built chart
    Mesh(MeshArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct RotationalArgs {
    /// Flow exponent (nonzero)
    #[arg(long)]
    pub alpha: f64,
    /// Integration constant(s); a comma list produces one curve per value
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub m: Vec<f64>,
    /// Additive height constant
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    /// Take the mirrored f' <= 0 branch
    #[arg(long)]
    pub negative_branch: bool,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Radius cap for unbounded domains
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    /// Relative inset from singular endpoints
    #[arg(long, default_value_t = 0.01)]
    pub margin: f64,
    /// CSV path; with several m values the stem gains a `_m<value>` suffix
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG path; all curves land in one picture
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct HelicoidalArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub m: f64,
    /// Pitch of the screw motion (nonzero)
    #[arg(long)]
    pub pitch: f64,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub margin: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseKind {
    /// z = f(x) + g(y), speed (0,0,1)
    AdditiveV3,
    /// z = f(x) + g(y), tilted speed (0,1,v3)/|.|
    AdditiveV2,
    /// y = f(x) + g(z), speed (0,0,1)
    GraphXz,
    /// x = f(z) g(y), speed (0,0,1)
    Homothetical,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct TranslationArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Points per exported component curve
    #[arg(long, default_value_t = 128)]
    pub curve_samples: usize,
    /// Prefix for `<prefix>_f.csv` and `<prefix>_g.csv`
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct RuledArgs {
    /// Integer flow exponent (ruled surfaces have K < 0)
    #[arg(long)]
    pub alpha: i32,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = -2.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
    /// Positivity threshold for the Gram minimum
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Rotational,
    Helicoidal,
    /// Helicoidal family through the Bour chart
    Bour,
    Translation,
}

/// Everything needed to build one verifiable chart.
#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long, value_enum, default_value_t = Family::Translation)]
    pub family: Family,
    /// Build exponent (translation surfaces exist only for 1/4)
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub pitch: f64,
    #[arg(long, value_enum, default_value_t = CaseKind::AdditiveV3)]
    pub case: CaseKind,
    /// Constant a (translation cases)
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    /// Third speed component of the tilted case
    #[arg(long, default_value_t = 0.0)]
    pub v3: f64,
    /// Homothetical: constant of g'' = a g^3
    #[arg(long, default_value_t = 2.0)]
    pub a_h: f64,
    /// Homothetical: Bernoulli constant
    #[arg(long, default_value_t = 1.0)]
    pub m_h: f64,
    /// Homothetical: initial f value
    #[arg(long, default_value_t = 0.1)]
    pub f0: f64,
    /// Homothetical: g at y0
    #[arg(long, default_value_t = 1.0)]
    pub g0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub y0: f64,
    #[arg(long)]
    pub u_min: Option<f64>,
    #[arg(long)]
    pub u_max: Option<f64>,
    #[arg(long)]
    pub v_min: Option<f64>,
    #[arg(long)]
    pub v_max: Option<f64>,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub margin: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Exponent to verify against; defaults to the build exponent
    #[arg(long)]
    pub test_alpha: Option<f64>,
    /// Residual grid, e.g. 64x32
    #[arg(long, default_value = "64x32")]
    pub grid: String,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct MeshArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, default_value_t = 64)]
    pub nu: usize,
    #[arg(long, default_value_t = 32)]
    pub nv: usize,
    #[arg(long)]
    pub out: PathBuf,
}
