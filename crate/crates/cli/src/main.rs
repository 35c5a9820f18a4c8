//! `afd` command-line tool: synthesize signals, decompose them, reconstruct
//! partial sums, and benchmark the engines.

mod document;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use afd_core::bench::{run_benchmark, BenchConfig, BenchEngine};
use afd_core::signals::{self, read_signal_csv, write_signal_csv};
use afd_core::{decompose, reconstruct_steps, DecomposeOptions, Engine, FirstPole, ParameterGrid};
use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use document::DecompositionDocument;

#[derive(Parser, Debug)]
#[command(
    name = "afd",
    version,
    about = "Adaptive Fourier decomposition of sampled signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a test signal as `index,real,imag` CSV.
    Synth {
        kind: SynthKind,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Polynomial degree of a random signal (default N/4).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decompose a signal CSV into a JSON document.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        terms: usize,
        /// Stop once the relative residual energy drops to this value.
        #[arg(long)]
        threshold: Option<f64>,
        /// `START:STEP:END` or a comma-separated list.
        #[arg(long, default_value = "0:0.1:0.8")]
        radii: RadiiSpec,
        #[arg(long, default_value = "fft")]
        engine: Engine,
        /// Evaluate field rows on the thread pool (FFT engine only).
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value = "origin")]
        first_pole: FirstPole,
        #[arg(long)]
        output: PathBuf,
    },
    /// Evaluate the partial sum of the first K terms of a document.
    Reconstruct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        output: PathBuf,
        /// Also write `n,relative_error` for n = 1..=K.
        #[arg(long)]
        emit_errors: Option<PathBuf>,
    },
    /// Time decompositions of the first test signal.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, value_delimiter = ',', default_value = "fft,direct")]
        engines: Vec<BenchEngine>,
        #[arg(long, default_value = "0:0.1:0.8")]
        radii: RadiiSpec,
        #[arg(long)]
        output: PathBuf,
        /// Medians and fitted slopes as JSON.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SynthKind {
    F1,
    F2,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
enum RadiiSpec {
    Range { start: f64, step: f64, end: f64 },
    List(Vec<f64>),
}

impl FromStr for RadiiSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let number = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, step, end] => Ok(RadiiSpec::Range {
                start: number(start)?,
                step: number(step)?,
                end: number(end)?,
            }),
            [list] => list
                .split(',')
                .map(number)
                .collect::<Result<_, _>>()
                .map(RadiiSpec::List),
            _ => Err(format!("'{s}' is neither START:STEP:END nor a comma list")),
        }
    }
}

impl RadiiSpec {
    fn grid(&self, n: usize) -> afd_core::Result<ParameterGrid> {
        match self {
            RadiiSpec::Range { start, step, end } => {
                ParameterGrid::from_range(*start, *step, *end, n)
            }
            RadiiSpec::List(radii) => ParameterGrid::new(radii.clone(), n),
        }
    }
}

fn synth(
    kind: SynthKind,
    n: usize,
    seed: u64,
    degree: Option<usize>,
    output: &Path,
) -> anyhow::Result<()> {
    let g = match kind {
        SynthKind::F1 => signals::synth_f1(n)?,
        SynthKind::F2 => signals::synth_f2(n)?,
        SynthKind::Random => signals::synth_random_hardy(n, degree.unwrap_or(n / 4), seed)?,
    };
    write_signal_csv(&g, output).with_context(|| format!("cannot write {}", output.display()))?;
    log::info!("wrote {n} samples to {}", output.display());
    Ok(())
}

fn run_decompose(
    input: &Path,
    radii: &RadiiSpec,
    options: &DecomposeOptions,
    output: &Path,
) -> anyhow::Result<()> {
    let g = read_signal_csv(input).with_context(|| format!("cannot read {}", input.display()))?;
    let grid = radii.grid(g.len())?;
    let d = decompose(&g, &grid, options)?;
    let errors = d.relative_errors(&g)?;
    if let Some(last) = errors.last() {
        log::info!("{} steps, final relative error {last:.3e}", d.steps.len());
    }
    DecompositionDocument::from_decomposition(&d, errors).write(output)
}

fn run_reconstruct(
    input: &Path,
    terms: usize,
    output: &Path,
    emit_errors: Option<&Path>,
) -> anyhow::Result<()> {
    let doc = DecompositionDocument::read(input)?;
    if terms > doc.steps.len() {
        bail!(
            "--terms {terms} exceeds the {} steps in {}",
            doc.steps.len(),
            input.display()
        );
    }
    let steps = doc.steps()?;
    let s = reconstruct_steps(&steps[..terms], doc.n_samples)?;
    write_signal_csv(&s, output).with_context(|| format!("cannot write {}", output.display()))?;
    if let Some(path) = emit_errors {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        w.write_record(["n", "relative_error"])?;
        for (i, e) in doc.relative_errors[..terms].iter().enumerate() {
            w.write_record([(i + 1).to_string(), format!("{e:.16e}")])?;
        }
        w.flush()?;
    }
    Ok(())
}

fn run_bench(config: &BenchConfig, output: &Path, summary: Option<&Path>) -> anyhow::Result<()> {
    let report = run_benchmark(config)?;
    let file = std::fs::File::create(output)
        .with_context(|| format!("cannot create {}", output.display()))?;
    report.write_csv(std::io::BufWriter::new(file))?;
    let summary_doc = report.summary();
    for engine in &summary_doc.engines {
        match engine.slope {
            Some(slope) => log::info!("{}: log-log slope {slope:.3}", engine.engine),
            None => log::info!("{}: too few sizes for a slope", engine.engine),
        }
    }
    if let Some(path) = summary {
        std::fs::write(path, summary_doc.to_json() + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("AFD_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("AFD_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("cannot configure the thread pool")?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Synth {
            kind,
            samples,
            seed,
            degree,
            output,
        } => synth(kind, samples, seed, degree, &output),
        Command::Decompose {
            input,
            terms,
            threshold,
            radii,
            engine,
            parallel,
            first_pole,
            output,
        } => {
            let options = DecomposeOptions {
                max_terms: terms,
                energy_threshold: threshold,
                engine,
                first_pole,
                parallel,
            };
            run_decompose(&input, &radii, &options, &output)
        }
        Command::Reconstruct {
            input,
            terms,
            output,
            emit_errors,
        } => run_reconstruct(&input, terms, &output, emit_errors.as_deref()),
        Command::Bench {
            sizes,
            terms,
            repeats,
            engines,
            radii,
            output,
            summary,
        } => {
            let config = BenchConfig {
                sizes,
                radii: radii.grid(8)?.radii().to_vec(),
                terms,
                repeats,
                engines,
            };
            run_bench(&config, &output, summary.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!(
                "afd: {}",
                text.lines().next().unwrap_or("invalid arguments")
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("afd: error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
