use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "langrobust", version, about = "Language-robustness benchmarking for 3D vision-language corpora")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON config file; flags take precedence over its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every randomized step
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for data-parallel work and concurrent provider calls
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Directory for output files
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Offline providers: comma-separated mock kinds (syntax, inverse_syntax,
    /// voice, modifier, accent, tone, identity) or `all`
    #[arg(long, global = true, value_name = "SET")]
    pub mock_provider: Option<String>,
    /// Print the JSON report on stdout instead of a table
    #[arg(long, global = true)]
    pub json: bool,
    /// More log output (repeat for more)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rephrase an original split into variant splits
    Generate(GenerateArgs),
    /// Meaning-preservation statistics of variant splits against the original
    Assess(AssessArgs),
    /// Syntactic diversity profile and density grid per split
    Diversity(DiversityArgs),
    /// Score model predictions per split and build robustness reports
    Evaluate(EvaluateArgs),
    /// Rewrite a split into a model's training style
    Prealign(PrealignArgs),
    /// Compare paired feature similarities before and after fusion
    Probe(ProbeArgs),
    /// Draw a seeded, optionally stratified subset of a split
    Subsample(SubsampleArgs),
    /// Build a mixed-style training split from an original and its variants
    Augment(AugmentArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Original split (JSON Lines)
    #[arg(long)]
    pub input: PathBuf,
    /// Styles to generate, comma-separated
    #[arg(long, value_delimiter = ',', default_values = ["syntax", "voice", "modifier", "accent", "tone"])]
    pub styles: Vec<String>,
    /// Prompt template asset
    #[arg(long)]
    pub prompts: Option<PathBuf>,
    /// Provider response cache directory
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Granularity {
    Token,
    Char,
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    /// Original split
    #[arg(long)]
    pub original: PathBuf,
    /// Variant splits
    #[arg(long, required = true, num_args = 1..)]
    pub variants: Vec<PathBuf>,
    /// Static word-vector table (`word v1 ... vd` per line)
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Keep the table's case instead of case-folding lookups
    #[arg(long)]
    pub case_sensitive: bool,
    /// Unit of the edit distance
    #[arg(long, value_enum, default_value_t = Granularity::Token)]
    pub granularity: Granularity,
    /// Also compute neural sentence-embedding similarity
    #[arg(long)]
    pub neural: bool,
    /// Provider response cache directory
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    /// Splits to profile
    #[arg(long, required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Tagger lexicon asset
    #[arg(long)]
    pub tagger: Option<PathBuf>,
    /// Grid cells per axis
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
    /// Minimum document frequency of a structure term
    #[arg(long, default_value_t = 2)]
    pub min_df: usize,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Metrics: acc@<k>, acc, em@<k>, bleu1, cider
    #[arg(long = "metric", required = true, value_delimiter = ',')]
    pub metrics: Vec<String>,
    /// Original split and its predictions as SPLIT=PREDICTIONS
    #[arg(long, value_name = "SPLIT=PREDICTIONS")]
    pub original: Option<String>,
    /// Variant split and its predictions as SPLIT=PREDICTIONS (repeatable)
    #[arg(long = "variant", value_name = "SPLIT=PREDICTIONS")]
    pub variants: Vec<String>,
    /// Label for this model in the reports
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Debug, Args)]
pub struct PrealignArgs {
    /// Split to normalize
    #[arg(long, required_unless_present = "sample_exemplars")]
    pub input: Option<PathBuf>,
    /// Pre-alignment config (rules and exemplars)
    #[arg(long)]
    pub prealign_config: Option<PathBuf>,
    /// Provider response cache directory
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Write K training sentences as an exemplar skeleton and exit
    #[arg(long, value_name = "K", requires = "training")]
    pub sample_exemplars: Option<usize>,
    /// Training split the skeleton is drawn from
    #[arg(long)]
    pub training: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// Pre-fusion features of the original sentences
    #[arg(long)]
    pub pre_original: PathBuf,
    /// Pre-fusion features of the variant sentences
    #[arg(long)]
    pub pre_variant: PathBuf,
    /// Post-fusion features of the original sentences
    #[arg(long)]
    pub post_original: PathBuf,
    /// Post-fusion features of the variant sentences
    #[arg(long)]
    pub post_variant: PathBuf,
    /// Similarity threshold for the mass-below statistic
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
    /// Histogram bins
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Restrict to ids listed one per line in this file
    #[arg(long)]
    pub failures: Option<PathBuf>,
    /// Smooth the densities with a Gaussian kernel instead of binning
    #[arg(long)]
    pub kde: bool,
}

#[derive(Debug, Args)]
pub struct SubsampleArgs {
    /// Split to sample from
    #[arg(long)]
    pub input: PathBuf,
    /// Share of records to keep, in (0, 1]
    #[arg(long)]
    pub fraction: f64,
    /// Keep stratum proportions (difficulty x view dependence)
    #[arg(long)]
    pub stratify: bool,
    /// Records with more object nouns than this are hard
    #[arg(long, default_value_t = 2)]
    pub difficulty_threshold: u32,
    /// Output file; defaults to <out-dir>/<input stem>.subsample.jsonl
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Balanced,
    Merged,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Original training split
    #[arg(long)]
    pub original: PathBuf,
    /// The five variant splits of the original
    #[arg(long, required = true, num_args = 1..)]
    pub variants: Vec<PathBuf>,
    /// balanced: same size as the original; merged: original plus variants
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Output file; defaults to <out-dir>/augmented.<mode>.jsonl
    #[arg(long)]
    pub output: Option<PathBuf>,
}
