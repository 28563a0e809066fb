mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "setscheme",
    version,
    about = "Set association schemes, vector association schemes and Hamming sandwiches"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the main output here instead of stdout (a directory for `enumerate` and `catalog`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Triangle,
    AllTypes,
}

impl From<ModeArg> for setscheme::coherence::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Triangle => setscheme::coherence::Mode::Triangle,
            ModeArg::AllTypes => setscheme::coherence::Mode::AllTypes,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableName {
    Table1,
    Table2,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coherence check with a witness on failure (exit 0 coherent, 1 incoherent).
    Check {
        /// Scheme file or catalog name (S1..S8, N9a, N9b).
        scheme: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Triangle)]
        mode: ModeArg,
    },
    /// Coarsest coherent refinement, written as a scheme file.
    Stabilize {
        scheme: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Triangle)]
        mode: ModeArg,
    },
    /// Strong and weak automorphism groups.
    Aut { scheme: String },
    /// Whether the scheme is the orbital scheme of its automorphism group.
    Schurian { scheme: String },
    /// All set association schemes of a degree up to isomorphism.
    Enumerate {
        #[arg(long)]
        degree: usize,
        /// Allow degree 8 and 9 (hours to days).
        #[arg(long)]
        long_run: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        max_seconds: Option<f64>,
    },
    /// Catalog schemes of degree 8 and 9: one by name, or all into `--out DIR`.
    Catalog { name: Option<String> },
    /// Rebuild a catalog table and compare it with the expected rows (exit 1 on mismatch).
    Table {
        #[arg(value_enum)]
        which: TableName,
    },
    /// Hamming sandwich `[m]^S`.
    Sandwich {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        m: usize,
        /// Build the explicit color table and recover the scheme from it.
        #[arg(long)]
        materialize: bool,
        /// Check that pairwise WL leaves the configuration unchanged.
        #[arg(long)]
        verify_wl: bool,
        /// Rank, primitivity and automorphism data.
        #[arg(long)]
        report: bool,
    },
    /// Vector association schemes on {0..k}^d.
    Vas {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, group = "action")]
        check: Option<PathBuf>,
        #[arg(long, group = "action")]
        enumerate: bool,
        /// sym, alt, cyclic, trivial, or generators such as "(1,2,3);(1,2)".
        #[arg(long, group = "action")]
        orbital: Option<String>,
    },
    /// Weak isomorphism between two schemes.
    Iso { a: String, b: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
