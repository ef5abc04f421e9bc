use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use hdconv::experiment::{render_table, run_experiment, write_atomic, RunConfig, SplitSource};
use hdconv::{EncodeConfig, Error, Mode, SplitKind};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Output {
    Table,
    Json,
}

/// Node classification by weightless graph convolution with hyperdimensional
/// bundling. Encodes, fits class centers, and reports accuracy per split.
#[derive(Debug, Parser)]
#[command(name = "hdconv", version)]
struct Args {
    /// Dataset directory, or a root directory when --dataset is given.
    #[arg(long)]
    data: PathBuf,

    /// Dataset name, resolved as <data>/<dataset>.
    #[arg(long)]
    dataset: Option<String>,

    /// Aggregation path: auto, real or binary.
    #[arg(long, default_value = "auto")]
    mode: Mode,

    #[arg(long, default_value_t = 1)]
    layers: usize,

    #[arg(long, default_value_t = 0.5)]
    alpha: f32,

    /// Comma-separated alpha grid; the value with the best validation accuracy is used.
    #[arg(long, value_delimiter = ',')]
    alpha_sweep: Option<Vec<f32>>,

    /// auto, fixed (the dataset's splits.json), ratio (60/20/20),
    /// per-class (20 per class, 500 val, 1000 test), or a path to a splits file.
    #[arg(long, default_value = "auto")]
    splits: String,

    #[arg(long, default_value_t = 10)]
    n_splits: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value = "table")]
    output: Output,

    /// Print timing in table output.
    #[arg(long)]
    time: bool,

    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,

    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn split_source(arg: &str) -> SplitSource {
    match arg {
        "auto" => SplitSource::Auto,
        "fixed" => SplitSource::File { path: None },
        "ratio" => SplitSource::Generate { kind: SplitKind::RATIO_622 },
        "per-class" => SplitSource::Generate { kind: SplitKind::PLANETOID },
        path => SplitSource::File { path: Some(PathBuf::from(path)) },
    }
}

fn run(args: Args) -> hdconv::Result<()> {
    let data = match &args.dataset {
        Some(name) => args.data.join(name),
        None => args.data.clone(),
    };
    let cfg = RunConfig {
        data,
        encode: EncodeConfig {
            layers: args.layers,
            alpha: args.alpha,
            mode: args.mode,
        },
        splits: split_source(&args.splits),
        n_splits: args.n_splits,
        seed: args.seed,
        alpha_sweep: args.alpha_sweep,
        workers: args.workers,
    };
    let report = run_experiment(&cfg)?;

    // an invariant of the report itself; exit 4 if it ever breaks
    let tests: Vec<f64> = report.splits.iter().map(|s| s.test_accuracy).collect();
    let mean = tests.iter().sum::<f64>() / tests.len() as f64;
    if (mean - report.mean_test_accuracy).abs() > 1e-12 {
        return Err(Error::Dimension { expected: tests.len(), found: report.splits.len() }
            .context("mean test accuracy disagrees with per-split values"));
    }

    let json = report.to_json()?;
    if let Some(path) = &args.report {
        write_atomic(path, &json)?;
    }
    match args.output {
        Output::Json => println!("{json}"),
        Output::Table => print!("{}", render_table(&report, args.time)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
