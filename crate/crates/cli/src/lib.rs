//! Argument definitions and command implementations behind the `detpol` binary.

pub mod commands;
pub mod report;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "detpol", version, about = "Membership, separation and covering for polynomial-closure classes of regular languages")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print nothing; report the verdict through the exit code.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Print one JSON report line instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON file with `cap`, `k_max`, `ptk` and `word_length`.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    #[arg(long, global = true)]
    pub ptk: Option<usize>,
    #[arg(long, global = true)]
    pub word_length: Option<usize>,
    /// Alphabet letters; defaults to the letters of the given expressions.
    #[arg(long, short, global = true)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Syntactic monoid of a regular expression.
    Syntactic {
        #[arg(long)]
        regex: String,
    },
    /// Decide whether a language belongs to a class.
    Member {
        #[arg(long)]
        class: String,
        #[arg(long)]
        regex: String,
        /// Show the violated equation.
        #[arg(long)]
        witness: bool,
    },
    /// Canonical equivalence of a class on the syntactic monoid.
    Equiv {
        #[arg(long)]
        class: String,
        #[arg(long)]
        regex: String,
    },
    /// Decide whether a class separates two languages.
    Separate {
        #[arg(long)]
        class: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Search for an explicit separator.
        #[arg(long)]
        witness: bool,
    },
    /// Decide whether a language has a cover avoiding the given ones.
    Cover {
        #[arg(long)]
        class: String,
        #[arg(long)]
        target: String,
        #[arg(long, num_args = 1.., required = true)]
        against: Vec<String>,
    },
    /// Determinism flags of a marked product `R0 a1 R1 ... an Rn`.
    ClassifyProduct {
        #[arg(long)]
        parts: String,
    },
    /// Class of a word as a marked product.
    WordClass {
        /// ST, AT or PTK(k); ignored when --regex is given.
        #[arg(long, default_value = "AT")]
        class_morphism: String,
        /// Use the syntactic morphism of this expression instead.
        #[arg(long)]
        regex: Option<String>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "mixed")]
        mode: String,
        #[arg(long)]
        word: String,
    },
    /// Compare two pointed words in the two-variable game preorder.
    Ef {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 0)]
        left_pos: usize,
        #[arg(long, default_value_t = 0)]
        right_pos: usize,
        #[arg(long, default_value = "trivial")]
        eta: String,
    },
    /// Run the fixture corpus.
    Corpus {
        #[arg(long, default_value = "corpus/languages.txt")]
        file: std::path::PathBuf,
        /// Write computed verdicts for missing expectations back to the file.
        #[arg(long)]
        fill: bool,
    },
}
