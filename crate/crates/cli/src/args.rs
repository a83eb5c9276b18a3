use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "branched", version, about = "Rooted-tree Hopf algebra, branched rough paths and their decay bounds")]
pub struct Cli {
    /// Directory for JSON reports and the CSV summary.
    #[arg(long, global = true, default_value = "reports")]
    pub out: PathBuf,

    /// Seed for the randomised exact suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the rooted trees with `n` vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Number of vertex labels; 0 means unlabelled.
        #[arg(long, default_value_t = 0)]
        labels: u16,
    },
    /// Print the coproduct of a tree or forest, e.g. `[*.[*]]`.
    Coproduct { forest: String },
    /// Lift a path to a branched rough path.
    Lift(LiftArgs),
    /// Extend an N-truncated path to higher degree by dyadic refinement.
    Extend(ExtendArgs),
    /// Check the factorial decay bound on a lifted path.
    VerifyDecay(DecayArgs),
    /// The divergent cut sum behind the tree neoclassical counterexample.
    Counterexample(CounterexampleArgs),
    /// Exact algebra, concavity, star, appendix and main-lemma checks.
    Lemmas(LemmasArgs),
    /// Every suite at its default size.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// `x(t) = t`.
    Identity,
    /// `x(t) = (t, t²)`.
    Plane,
    /// Two-dimensional Weierstrass-type curve.
    Weierstrass,
}

#[derive(Clone, Debug, Args)]
pub struct SourceArgs {
    /// Named path.
    #[arg(long, value_enum, conflicts_with_all = ["poly", "csv"])]
    pub preset: Option<Preset>,
    /// Polynomial components as rational coefficient lists, lowest degree
    /// first, components separated by `;`, e.g. `0,1;0,0,1`.
    #[arg(long, conflicts_with = "csv")]
    pub poly: Option<String>,
    /// CSV samples with header `t,x1,...,xd`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Sample count for presets that are sampled.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    /// Weierstrass base.
    #[arg(long, default_value_t = 2.0)]
    pub base: f64,
    /// Weierstrass terms.
    #[arg(long, default_value_t = 8)]
    pub terms: u32,
}

#[derive(Clone, Debug, Args)]
pub struct LiftArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Maximal tree size M.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    /// Hölder exponent claimed for sampled data.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 12)]
    pub max_level: u32,
    /// Left end (exact polynomial lifts only).
    #[arg(long, default_value = "0")]
    pub s: String,
    /// Right end (exact polynomial lifts only).
    #[arg(long, default_value = "1")]
    pub t: String,
    /// Also Young-lift a polynomial from samples and compare with the exact lift.
    #[arg(long)]
    pub compare: bool,
    /// Agreement tolerance for `--compare`.
    #[arg(long, default_value_t = 1e-6)]
    pub agree_tol: f64,
    /// Tolerance for the Chen identity on numeric lifts.
    #[arg(long, default_value_t = 1e-5)]
    pub chen_tol: f64,
}

#[derive(Clone, Debug, Args)]
pub struct ExtendArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Truncation N the source is cut to.
    #[arg(long, default_value_t = 1)]
    pub truncation: usize,
    /// Target degree M.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    #[arg(long, default_value = "0")]
    pub s: String,
    #[arg(long, default_value = "1")]
    pub t: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 3)]
    pub min_level: u32,
    #[arg(long, default_value_t = 12)]
    pub max_level: u32,
    /// Tolerance against the source's own high-degree values.
    #[arg(long, default_value_t = 1e-8)]
    pub agree_tol: f64,
}

#[derive(Clone, Debug, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Maximal tree size checked.
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    /// Intervals are the dyadic pairs at this level.
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    /// Young lift tolerance for sampled sources.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also locate where the branched bound beats the geometric one (2-d paths, γ > 1/2).
    #[arg(long)]
    pub crossover: bool,
}

#[derive(Clone, Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
}

#[derive(Clone, Debug, Args)]
pub struct LemmasArgs {
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Largest tree for the exact suites; forests go one below.
    #[arg(long, default_value_t = 7)]
    pub max_tree: usize,
    /// Largest tree for the concavity sweep (defaults to one above `--max-tree`).
    #[arg(long)]
    pub concavity_tree: Option<usize>,
    /// Random characters per randomised suite.
    #[arg(long, default_value_t = 10)]
    pub characters: u64,
    /// Dyadic level of the main-lemma grid.
    #[arg(long, default_value_t = 3)]
    pub level: u32,
}
