use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use umtl_core::logic::Extension;
use umtl_core::U2Parse;

#[derive(Debug, Parser)]
#[command(name = "umtl", version, about = "Finite MTL-algebras with universal quantifiers")]
pub struct Cli {
    /// Write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Worker threads for enumeration and search.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Grouping of the fixed-implication quantifier identity.
    #[arg(
        long = "u2-parse",
        global = true,
        default_value = "standard",
        value_name = "standard|alt"
    )]
    pub u2_parse: U2Parse,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Which quantifier to pair with an algebra file.
#[derive(Debug, Clone, Args)]
pub struct ForallArg {
    /// `declared` (the file's forall line), `delta`, `identity`, `all`
    /// (every quantifier), or a table of names or indices.
    #[arg(long, value_name = "WHICH")]
    pub forall: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the MTL axioms, and the quantifier axioms when one is given.
    Validate {
        path: PathBuf,
        #[command(flatten)]
        forall: ForallArg,
    },
    /// Subvariety membership and element orders.
    Classify { path: PathBuf },
    #[command(subcommand)]
    Quantifiers(QuantifiersCmd),
    /// Filters, prime filters, U-filters and the radical.
    Filters {
        path: PathBuf,
        #[command(flatten)]
        forall: ForallArg,
        #[arg(long, value_enum, default_value = "all")]
        kind: FilterKind,
    },
    /// The quotient by a U-filter.
    Quotient {
        path: PathBuf,
        /// Members of the U-filter, by name or index.
        #[arg(long, value_name = "ELEMS")]
        filter: String,
        #[command(flatten)]
        forall: ForallArg,
        /// Write the quotient as an algebra file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Representability, strongness, simplicity and semisimplicity.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        forall: ForallArg,
    },
    /// Cross-check characterization results over a corpus.
    Audit { corpus: PathBuf },
    #[command(subcommand)]
    Prove(ProveCmd),
    #[command(subcommand)]
    Logic(LogicCmd),
    #[command(subcommand)]
    Export(ExportCmd),
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

/// Quantifiers on an algebra.
#[derive(Debug, Subcommand)]
pub enum QuantifiersCmd {
    /// List every quantifier.
    Enum {
        path: PathBuf,
        /// Compare with a scan of every unary map.
        #[arg(long)]
        brute_force: bool,
    },
    /// Check a table against the quantifier axioms.
    Check {
        path: PathBuf,
        #[command(flatten)]
        forall: ForallArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterKind {
    All,
    Filters,
    Primes,
    MinimalPrimes,
    Maximal,
    Ufilters,
    MaximalUfilters,
    Radical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtensionArg {
    Inv,
    Wnm,
    Mv,
    Em,
}

impl From<ExtensionArg> for Extension {
    fn from(e: ExtensionArg) -> Self {
        match e {
            ExtensionArg::Inv => Extension::Inv,
            ExtensionArg::Wnm => Extension::Wnm,
            ExtensionArg::Mv => Extension::Mv,
            ExtensionArg::Em => Extension::Em,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    /// Add an extension schema.
    #[arg(long = "ext", value_enum)]
    pub extensions: Vec<ExtensionArg>,
    /// Enable the rule "from a | b derive a | box b".
    #[arg(long)]
    pub disjunction_rule: bool,
}

/// Hilbert-style proofs.
#[derive(Debug, Subcommand)]
pub enum ProveCmd {
    /// Check a proof file.
    Check {
        proof: PathBuf,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Discharge a hypothesis: a proof of `b` from `T, a` becomes one of
    /// `box a -> b` from `T`.
    Deduce {
        proof: PathBuf,
        /// Hypothesis name or formula.
        #[arg(long)]
        discharge: String,
        #[command(flatten)]
        catalog: CatalogArgs,
        /// Write the transformed proof here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Algebras to search for a countermodel when the transform refuses.
        #[arg(long, value_name = "PATH")]
        pool: Option<PathBuf>,
    },
}

/// Semantics over a pool of quantified algebras.
#[derive(Debug, Subcommand)]
pub enum LogicCmd {
    /// Validity of a formula on every pool member.
    Valid {
        formula: String,
        #[command(flatten)]
        pool: PoolArgs,
    },
    /// First refutation of a formula or of `from A, B derive C`.
    Countermodel {
        goal: String,
        #[command(flatten)]
        pool: PoolArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PoolArgs {
    /// Algebra file or directory; the bundled corpus when absent. Files
    /// without a forall line contribute every quantifier.
    #[arg(long, value_name = "PATH")]
    pub pool: Option<PathBuf>,
    #[arg(long, default_value_t = umtl_core::logic::semantics::DEFAULT_MAX_VARS)]
    pub max_vars: usize,
}

/// Diagrams for external renderers.
#[derive(Debug, Subcommand)]
pub enum ExportCmd {
    /// Graphviz Hasse diagram.
    Dot {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "order")]
        what: DotTarget,
        #[command(flatten)]
        forall: ForallArg,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotTarget {
    Order,
    Filters,
    Ufilters,
}

/// The bundled corpus.
#[derive(Debug, Subcommand)]
pub enum CorpusCmd {
    /// Write the bundled algebra files.
    Write { dir: PathBuf },
    /// Write proofs of the derived rules.
    Proofs { dir: PathBuf },
}
