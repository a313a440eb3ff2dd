use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lstx",
    version,
    about = "Kernel evaluation, index series and inversions for Lebedev-Skalskaya kernels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Absolute quadrature tolerance (command default if omitted).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub abs_tol: Option<f64>,

    /// Relative quadrature tolerance (command default if omitted).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rel_tol: Option<f64>,

    /// Subdivision budget per integral (command default if omitted).
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Re,
    Im,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    ReK,
    ImK,
    ReJ,
    ImJ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    #[value(name = "laplace-k", alias = "eq113")]
    LaplaceK,
    #[value(name = "laplace-re", alias = "eq114")]
    LaplaceRe,
    #[value(name = "laplace-im", alias = "eq115")]
    LaplaceIm,
}

/// Series family of the forward transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Series {
    /// `sum a_n K_{alpha+in}(x)`.
    Complete,
    /// `sum a_n J(x, 1/2+in, pi)`.
    Incomplete,
}

/// Coefficient recovery formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Complete-kernel series inverted with the incomplete kernels.
    Complete,
    /// Incomplete-kernel series inverted with the complete kernels.
    Incomplete,
    /// Complete-kernel series against the incomplete kernels, no cosh weight.
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    /// psi(u) = cos(u)
    Cos,
    /// psi(u) = sin(u)
    Sin,
    /// psi(u) = |u|
    Triangle,
    /// psi(u) = u (pi - |u|) / pi, odd and Lipschitz
    OddTriangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    CoshHalf,
    SinhHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientSource {
    /// x-quadrature against the complete kernels.
    Quadrature,
    /// Exchange of integration order with the closed-form Laplace composition.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Kernel,
    Identity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate kernels on a grid.
    Kernel {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [KernelArg::ReK, KernelArg::ImK])]
        kind: Vec<KernelArg>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        alpha: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        tau: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// Residual of a Laplace identity: quadrature against closed form.
    Oracle {
        #[arg(long, value_enum)]
        identity: IdentityArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Index (integer for the real/imaginary-part identities).
        #[arg(long, alias = "n", allow_hyphen_values = true)]
        tau: f64,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        u: Vec<f64>,
    },
    /// Evaluate a forward series at points x.
    Forward {
        #[arg(long, value_enum, default_value_t = Series::Complete)]
        series: Series,
        #[arg(long, value_enum, default_value_t = Variant::Re)]
        variant: Variant,
        /// Order alpha (complete series only).
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        alpha: f64,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// Recover coefficients from exp(-x cosh u0).
    Invert {
        #[arg(long, value_enum, default_value_t = Scheme::Complete)]
        scheme: Scheme,
        #[arg(long, value_enum, default_value_t = Variant::Re)]
        variant: Variant,
        #[arg(long, allow_hyphen_values = true)]
        u0: f64,
        /// Indices to recover, as a list or an inclusive range `a..b`.
        #[arg(long)]
        n: String,
        /// Coefficient accuracy used for precision warnings.
        #[arg(long, default_value_t = 1e-6)]
        coefficient_tol: f64,
    },
    /// Forward series followed by coefficient recovery.
    Roundtrip {
        #[arg(long, value_enum, default_value_t = Scheme::Complete)]
        scheme: Scheme,
        #[arg(long, value_enum, default_value_t = Variant::Re)]
        variant: Variant,
        #[command(flatten)]
        seq: SeqArgs,
        /// Coefficient accuracy used for precision warnings.
        #[arg(long, default_value_t = 1e-6)]
        coefficient_tol: f64,
    },
    /// Partial-sum reconstruction of a profile-represented function.
    Reconstruct {
        #[arg(long, value_enum)]
        profile: ProfileArg,
        #[arg(long, value_enum, default_value_t = FlavorArg::CoshHalf)]
        flavor: FlavorArg,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        /// Partial-sum order; omitted means stop once successive sums settle.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = CoefficientSource::Closed)]
        coefficients: CoefficientSource,
    },
    /// Continuous-index pair applied to exp(-x cosh u0).
    Continuous {
        #[arg(long, value_enum, default_value_t = Variant::Re)]
        variant: Variant,
        #[arg(long, allow_hyphen_values = true)]
        u0: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 2.0])]
        tau: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 12.0)]
        tau_max: f64,
    },
    /// Deterministic golden table of kernel or identity values.
    Golden {
        #[arg(long, value_enum)]
        table: TableArg,
        #[arg(long, value_enum, default_value_t = IdentityArg::LaplaceRe)]
        identity: IdentityArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<f64>,
        /// Indices, as a list or an inclusive range `a..b`.
        #[arg(long, default_value = "")]
        n: String,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// Coefficients a_0, a_1, ... separated by commas.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub seq: Vec<f64>,
    /// Decay certificate exponent for infinite-intent sequences.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}
