use std::collections::BTreeSet;
use std::io;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use slicekit_cli::{run, run_corpus, OutputFormat, RunConfig};
use slicekit_core::DataflowMode;

/// Backward slicer for output-stream writes in a small Java-like language.
#[derive(Parser)]
#[command(name = "slicekit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the backward slice of an output-stream variable.
    Slice {
        /// Source file containing exactly one method (`.mj`).
        file: PathBuf,
        /// Output-stream variable to slice on.
        #[arg(long)]
        stream: String,
        /// Comma-separated sink method names.
        #[arg(long, value_delimiter = ',', default_value = "print,println,write,append")]
        sinks: Vec<String>,
        /// Data-flow handling.
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: SliceFormatArg,
    },
    /// Emit the dependency graph of a method.
    Graph {
        /// Source file containing exactly one method (`.mj`).
        file: PathBuf,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: GraphFormatArg,
        /// Data-flow handling.
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
    /// Check every `.mj` file in a directory against its golden slice.
    Corpus {
        /// Directory of `.mj` files paired with `.expected.json` goldens.
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum ModeArg {
    #[default]
    Paper,
    ReachingDefs,
    LoopAware,
}

impl From<ModeArg> for DataflowMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Paper => DataflowMode::Paper,
            ModeArg::ReachingDefs => DataflowMode::ReachingDefs,
            ModeArg::LoopAware => DataflowMode::LoopAware,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum SliceFormatArg {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum GraphFormatArg {
    #[default]
    Dot,
    Json,
}

fn main() {
    let cli = Cli::parse();
    let mut stdout = io::stdout();
    let mut stderr = io::stderr();

    let code = match cli.command {
        Command::Slice {
            file,
            stream,
            sinks,
            mode,
            format,
        } => {
            let mut config = RunConfig::slice(file, stream);
            config.sink_methods = sinks.into_iter().collect::<BTreeSet<String>>();
            config.mode = mode.into();
            config.output_format = match format {
                SliceFormatArg::Text => OutputFormat::Text,
                SliceFormatArg::Json => OutputFormat::Json,
            };
            run(&config, &mut stdout, &mut stderr)
        }
        Command::Graph { file, format, mode } => {
            let mut config = RunConfig::graph(file);
            config.mode = mode.into();
            config.output_format = match format {
                GraphFormatArg::Dot => OutputFormat::Dot,
                GraphFormatArg::Json => OutputFormat::Json,
            };
            run(&config, &mut stdout, &mut stderr)
        }
        Command::Corpus { dir } => run_corpus(&dir, &mut stdout, &mut stderr),
    };
    std::process::exit(code);
}
