use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "udlf",
    version,
    about = "Convert UD treebanks of child-directed speech to logical forms and analyze them"
)]
pub struct Cli {
    /// Key-value config file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert every sentence to an LF, one JSON record per line.
    Convert(Flags),
    /// Label counts, frequencies and per-label conversion rates.
    Stats(Flags),
    /// LAS/UAS between two annotations of the same sentences.
    Agree(Flags),
    /// Per-label regression of sentence share on child age.
    Trends(Flags),
    /// Labels whose count per token differs between two corpora.
    Compare(Flags),
    /// Dump full derivations for debugging rule files.
    Derive(DeriveFlags),
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Language: en or he. Selects the question-word lexicon.
    #[arg(long)]
    pub lang: Option<String>,
    /// Tree rewrite rules; the bundled set when absent
    #[arg(long)]
    pub rules_rewrite: Option<PathBuf>,
    /// LF assignment rules; the bundled set when absent
    #[arg(long)]
    pub rules_lf: Option<PathBuf>,
    /// Dependency composition order; the bundled list when absent
    #[arg(long)]
    pub priorities: Option<PathBuf>,
    /// Input CoNLL-U file. agree and compare take it twice.
    #[arg(long = "in")]
    pub input: Vec<PathBuf>,
    /// Output file; stdout when absent. JSON reports go next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Minimum per-token difference reported by compare.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Smooth trend plot data over 5 sessions.
    #[arg(long)]
    pub smooth: bool,
    /// Worker threads for conversion; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Skip utterances transcribed as interrupted.
    #[arg(long)]
    pub drop_incomplete: bool,
    /// Leave punctuation out of agreement scores.
    #[arg(long)]
    pub exclude_punct: bool,
    /// Beta-reduction budget per composition step.
    #[arg(long)]
    pub max_steps: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct DeriveFlags {
    #[command(flatten)]
    pub flags: Flags,
    /// Only this sentence id.
    #[arg(long)]
    pub sentence: Option<String>,
}
