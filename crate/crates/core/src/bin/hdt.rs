use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use hdt::error::{Error, Result};
use hdt::harness::{self, BenchConfig, PipelineConfig, PipelineInput};
use hdt::oracles::{conv3sum_brute, ov_brute, threesum_brute};
use hdt::reduction::conv3sum::{reduce_conv3sum_with, Conv3SumInstance, ThreeSumInstance};
use hdt::reduction::ov::{preprocess_ov, reduce_ov_with, OVInstance};
use hdt::reduction::ReductionOutput;
use hdt::scalar::{format_rational, parse_rational};
use hdt::solver::{decide_translation_with, format_bracket, value_bisect, Direction, SolverOptions};
use hdt::{Instance, Norm};

#[derive(Parser)]
#[command(name = "hdt", version, about = "Hausdorff distance under translation: exact solver and hardness reductions")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long = "timeout-ms", global = true)]
    timeout_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random OV or Conv3SUM instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Reduce an OV or Conv3SUM instance to a Hausdorff instance.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Decide whether some translation achieves distance at most delta.
    Decide(DecideArgs),
    /// Bracket the optimal distance under translation.
    Value(ValueArgs),
    /// Run a brute-force oracle.
    Oracle(OracleArgs),
    /// Reduce, solve and compare against the oracle.
    Verify(VerifyArgs),
    /// Time the OV pipeline over a size grid and write CSV.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    Ov {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        planted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Conv3sum {
        #[arg(long)]
        n: usize,
        #[arg(long = "max")]
        max: i64,
        #[arg(long)]
        planted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Expected {
    Pos,
    Neg,
    Unknown,
}

#[derive(Args)]
struct ReduceOutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "provenance-out")]
    provenance_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "unknown")]
    expected: Expected,
}

#[derive(Subcommand)]
enum ReduceCommand {
    Ov {
        #[arg(long)]
        ov: PathBuf,
        #[arg(long, default_value = "l1")]
        norm: Norm,
        /// Override the default epsilon (a rational).
        #[arg(long)]
        eps: Option<String>,
        #[command(flatten)]
        output: ReduceOutputArgs,
    },
    Conv3sum {
        #[arg(long)]
        seq: PathBuf,
        /// Pad the diagonal gadget so the directed A→B instance is sound.
        #[arg(long = "extend-diagonal")]
        extend_diagonal: bool,
        #[command(flatten)]
        output: ReduceOutputArgs,
    },
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Overrides the delta stored in the instance.
    #[arg(long)]
    delta: Option<String>,
    /// Overrides the norm stored in the instance.
    #[arg(long)]
    norm: Option<Norm>,
    #[arg(long, default_value = "und")]
    direction: Direction,
    /// Test every candidate exactly, without the floating-point screen.
    #[arg(long = "no-prefilter")]
    no_prefilter: bool,
}

#[derive(Args)]
struct ValueArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    norm: Option<Norm>,
    #[arg(long, default_value = "und")]
    direction: Direction,
    #[arg(long, default_value = "1/1024")]
    tol: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Ov,
    #[value(name = "3sum")]
    ThreeSum,
    Conv3sum,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    kind: OracleKind,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Ov,
    Conv3sum,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: VerifyKind,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    norm: Option<Norm>,
    #[arg(long, default_value = "und")]
    direction: Direction,
    #[arg(long = "extend-diagonal")]
    extend_diagonal: bool,
    #[arg(long = "failures-dir", default_value = "failures")]
    failures_dir: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated `m x n` sizes, e.g. `2x2,3x3,4x4`.
    #[arg(long, default_value = "2x2,3x3,4x4")]
    grid: String,
    #[arg(long, default_value_t = 4)]
    d: usize,
    #[arg(long, default_value = "l1")]
    norm: Norm,
    #[arg(long, default_value = "und")]
    direction: Direction,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn solver_options(cli: &Cli) -> SolverOptions {
    SolverOptions {
        workers: cli.workers.max(1),
        deadline: cli.timeout_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
        prefilter: true,
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn answer_code(positive: bool) -> u8 {
    if positive {
        0
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Gen(GenCommand::Ov { m, n, d, planted, out }) => {
            let inst = harness::gen_ov(*m, *n, *d, *planted, cli.seed)?;
            emit(out.as_deref(), &inst.to_text())?;
            Ok(0)
        }
        Command::Gen(GenCommand::Conv3sum { n, max, planted, out }) => {
            let inst = harness::gen_conv3sum(*n, *max, *planted, cli.seed)?;
            emit(out.as_deref(), &inst.to_text())?;
            Ok(0)
        }
        Command::Reduce(ReduceCommand::Ov { ov, norm, eps, output }) => {
            let inst = OVInstance::parse(&read(ov)?)?;
            let pre = preprocess_ov(&inst);
            if let Some(answer) = pre.forced {
                println!("preprocessed: {}", if answer { "positive" } else { "negative" });
                return Ok(0);
            }
            let eps = eps.as_deref().map(parse_rational).transpose()?;
            let (out, _, _) = reduce_ov_with(&inst, *norm, eps)?;
            write_reduction(&out, output)
        }
        Command::Reduce(ReduceCommand::Conv3sum { seq, extend_diagonal, output }) => {
            let inst = Conv3SumInstance::parse(&read(seq)?)?;
            let (out, _) = reduce_conv3sum_with(&inst, *extend_diagonal)?;
            write_reduction(&out, output)
        }
        Command::Decide(args) => {
            let inst = Instance::parse(&read(&args.input)?)?;
            let delta = match (&args.delta, &inst.delta) {
                (Some(d), _) => parse_rational(d)?,
                (None, Some(d)) => d.clone(),
                (None, None) => return Err(Error::InvalidInput("no delta in the instance; pass --delta".into())),
            };
            let norm = args.norm.unwrap_or(inst.norm);
            let mut opts = solver_options(cli);
            opts.prefilter = !args.no_prefilter;
            let r = decide_translation_with(&inst.a, &inst.b, &delta, norm, args.direction, &opts)?;
            println!("{}", if r.feasible { "feasible" } else { "infeasible" });
            if let Some(w) = &r.witness {
                println!("{w}");
            }
            println!(
                "candidates {} tested {}",
                r.stats.candidates_generated, r.stats.candidates_tested
            );
            Ok(answer_code(r.feasible))
        }
        Command::Value(args) => {
            let inst = Instance::parse(&read(&args.input)?)?;
            let tol = parse_rational(&args.tol)?;
            let norm = args.norm.unwrap_or(inst.norm);
            let b = value_bisect(&inst.a, &inst.b, norm, args.direction, &tol, &solver_options(cli))?;
            println!("{}", format_bracket(&b));
            if let Some(w) = &b.witness {
                println!("{w}");
            }
            Ok(0)
        }
        Command::Oracle(args) => {
            let text = read(&args.input)?;
            let found = match args.kind {
                OracleKind::Ov => ov_brute(&OVInstance::parse(&text)?).map(|(i, j)| format!("witness {i} {j}")),
                OracleKind::ThreeSum => {
                    threesum_brute(&ThreeSumInstance::parse(&text)?).map(|(x, y, z)| format!("witness {x} {y} {z}"))
                }
                OracleKind::Conv3sum => {
                    conv3sum_brute(&Conv3SumInstance::parse(&text)?).map(|(i, j)| format!("witness {i} {j}"))
                }
            };
            println!("{}", if found.is_some() { "positive" } else { "negative" });
            if let Some(w) = &found {
                println!("{w}");
            }
            Ok(answer_code(found.is_some()))
        }
        Command::Verify(args) => {
            let text = read(&args.input)?;
            let (input, default_norm) = match args.kind {
                VerifyKind::Ov => (PipelineInput::Ov(OVInstance::parse(&text)?), Norm::L1),
                VerifyKind::Conv3sum => (PipelineInput::Conv3Sum(Conv3SumInstance::parse(&text)?), Norm::L2),
            };
            let config = PipelineConfig { solver: solver_options(cli), extend_diagonal: args.extend_diagonal };
            let id = args.input.file_stem().map_or("case".into(), |s| s.to_string_lossy().into_owned());
            let run = harness::verify_pipeline(&id, &input, args.norm.unwrap_or(default_norm), args.direction, &config)?;
            println!("{}", serde_json::to_string_pretty(&run.report).map_err(|e| Error::Internal(e.to_string()))?);
            if run.report.agreement {
                Ok(0)
            } else {
                let dir = harness::dump_failure(&args.failures_dir, &input, &run)?;
                eprintln!("disagreement; artifacts written to {}", dir.display());
                Ok(1)
            }
        }
        Command::Bench(args) => {
            let grid = parse_grid(&args.grid)?;
            let cfg = BenchConfig {
                grid,
                d: args.d,
                norm: args.norm,
                direction: args.direction,
                repetitions: args.reps,
                seed: cli.seed,
                timeout: cli.timeout_ms.map(Duration::from_millis),
            };
            let summary = harness::bench_scaling(&cfg)?;
            let mut buf = Vec::new();
            harness::write_bench_csv(&summary.records, &mut buf)?;
            emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))?;
            match summary.slope {
                Some(s) => eprintln!("fitted slope of log(time) vs log(nm): {s:.3}"),
                None => eprintln!("fitted slope: not available (needs 3 or more grid points)"),
            }
            Ok(0)
        }
    }
}

fn write_reduction(out: &ReductionOutput, args: &ReduceOutputArgs) -> Result<u8> {
    let mut text = out.instance().to_text();
    let expected = match args.expected {
        Expected::Pos => Some("pos"),
        Expected::Neg => Some("neg"),
        Expected::Unknown => None,
    };
    if let Some(e) = expected {
        text = text.replacen('\n', &format!("\n# expected: {e}\n"), 1);
    }
    emit(args.out.as_deref(), &text)?;
    if let Some(p) = &args.provenance_out {
        fs::write(p, out.provenance_json())?;
    }
    if args.out.is_some() {
        eprintln!(
            "|A| = {}, |B| = {}, delta = {}, norm = {}",
            out.a.len(),
            out.b.len(),
            format_rational(&out.delta),
            out.norm
        );
    }
    Ok(0)
}

fn parse_grid(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (m, n) = p
                .trim()
                .split_once('x')
                .ok_or_else(|| Error::Parse(format!("grid entry `{p}` is not of the form MxN")))?;
            let num = |v: &str| v.trim().parse::<usize>().map_err(|e| Error::Parse(format!("`{v}`: {e}")));
            Ok((num(m)?, num(n)?))
        })
        .collect()
}
