use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cmrank", version, about = "Rank 2 Cohen-Macaulay modules over B_{k,n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether M(I,J) with the given coefficients is indecomposable.
    Classify(ClassifyArgs),
    /// Decide whether two coefficient tuples give isomorphic modules.
    Iso(IsoArgs),
    /// Sweep integer coefficient tuples over the profiles of a (k,n) pair.
    Enumerate(EnumerateArgs),
    /// Number of indecomposable classes for a three-box profile.
    Count(CountArgs),
    /// Run the endomorphism oracle alone.
    Oracle(OracleArgs),
    /// Re-run the worked examples and report pass/fail for each.
    PaperSuite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    On,
    Off,
    Only,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Rim size; checked against the profile when given.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: usize,
    /// `I|J` as comma-separated labels, e.g. "1,3,5|2,4,6".
    #[arg(long)]
    pub profile: String,
    /// Series literals b_1..b_n, comma separated. One entry may be `_`,
    /// which is solved from the cycle constraint.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Truncation order N of Q[t]/(t^N); at least 2n. Default 4n.
    #[arg(long, env = "CM_TRUNC_ORDER")]
    pub trunc_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    #[arg(long, value_enum, default_value = "on")]
    pub oracle: OracleMode,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct IsoArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Coefficients of the second module, same syntax as --b.
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, value_enum, default_value = "on")]
    pub oracle: OracleMode,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Restrict to one profile (canonicalized up to rotation).
    #[arg(long)]
    pub profile: Option<String>,
    /// Inclusive integer range `lo,hi` for each free coefficient.
    #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
    pub range: String,
    /// Bound on tuples per profile. A larger lattice is an error unless
    /// --seed is given, in which case this many tuples are sampled.
    #[arg(long, default_value_t = 5000)]
    pub max_tuples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "off")]
    pub oracle: OracleMode,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, env = "CM_TRUNC_ORDER")]
    pub trunc_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Box sizes `l1,l2,l3`.
    #[arg(long, conflicts_with = "profile")]
    pub sizes: Option<String>,
    /// Read the box sizes off a three-box profile instead.
    #[arg(long, requires = "n")]
    pub profile: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Build every example at this order instead of 4n. Not checked
    /// against 2n, so low values exercise the precision guard.
    #[arg(long, env = "CM_TRUNC_ORDER")]
    pub trunc_order: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}
