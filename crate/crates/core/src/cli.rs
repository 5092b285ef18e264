//! The `ttutv` command line.
//!
//! Exit codes: 0 success, 1 usage or invalid argument, 2 I/O or parse
//! failure, 3 numerical or invariant failure (including a violated bound).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::completion::{complete, CompletionConfig, ObservationMask, Retraction};
use crate::decomp::{decompose, verify_bound, DecompConfig, Method, Mode, Retain, Sweep};
use crate::error::{Error, Result};
use crate::gen::{gen_gaussian, gen_hilbert, gen_mask, gen_planted_tt, rng};
use crate::io::{detect, read_tensor, read_tensor_any, read_tt, write_tensor, write_tt, FileKind};
use crate::report::{format_ranks, trace_rows, write_rows_to_path, ReportRow};
use crate::tensor::{psnr, DenseTensor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ttutv", version, about = "Tensor-train decompositions with rank-revealing ULV/URV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a tensor file into a TT file.
    Decompose(DecomposeArgs),
    /// Densify a TT file.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fill in unobserved entries with a fixed-rank TT model.
    Complete(CompleteArgs),
    /// Run a seeded benchmark suite and write one CSV row per run.
    Bench(BenchArgs),
    /// Describe a tensor or TT file.
    Info {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write a synthetic tensor.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Svd,
    Ulv,
    Urv,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Svd => Method::Svd,
            MethodArg::Ulv => Method::Ulv,
            MethodArg::Urv => Method::Urv,
        }
    }
}

impl From<MethodArg> for Retraction {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Svd => Retraction::Svd,
            MethodArg::Ulv => Retraction::Ulv,
            MethodArg::Urv => Retraction::Urv,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepArg {
    L2r,
    R2l,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RetainArg {
    L11,
    Full,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "l2r")]
    sweep: SweepArg,
    /// Interior ranks r_1,...,r_{d-1}.
    #[arg(long, value_delimiter = ',', conflicts_with = "eps", required_unless_present = "eps")]
    ranks: Option<Vec<usize>>,
    /// Relative tolerance.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_delimiter = ',', requires = "eps")]
    weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    refine: usize,
    /// What the ULV right-to-left sweep carries forward.
    #[arg(long, value_enum)]
    retain: Option<RetainArg>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompleteArgs {
    /// Tensor holding the observed values (other entries are ignored).
    #[arg(long = "in")]
    input: PathBuf,
    /// 0/1 tensor file marking observed entries.
    #[arg(long)]
    mask: PathBuf,
    #[arg(long, value_delimiter = ',')]
    ranks: Vec<usize>,
    #[arg(long, value_enum, default_value = "ulv")]
    retraction: MethodArg,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    stop_tol: f64,
    /// Ground truth for full-tensor RSE and PSNR columns.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Bounds,
    Recovery,
    Hilbert,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random fixtures for the bounds and recovery suites.
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Hilbert,
    Planted,
    Gaussian,
    Mask,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Interior ranks for `planted`.
    #[arg(long, value_delimiter = ',')]
    ranks: Option<Vec<usize>>,
    /// Observed fraction for `mask`.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write the planted cores.
    #[arg(long)]
    tt_out: Option<PathBuf>,
}

/// Run with process stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse(_) | Error::Csv(_) => EXIT_IO,
        Error::Numerical(_) | Error::BoundViolation { .. } | Error::Invariant(_) => EXIT_NUMERICAL,
        Error::Completion { source, .. } => exit_code(source),
        Error::Index(_) | Error::Argument(_) | Error::Domain(_) | Error::Resource(_) => EXIT_USAGE,
    }
}

fn full_chain(interior: &[usize]) -> Vec<usize> {
    let mut r = Vec::with_capacity(interior.len() + 2);
    r.push(1);
    r.extend_from_slice(interior);
    r.push(1);
    r
}

fn check_interior(dims: &[usize], interior: &[usize]) -> Result<()> {
    if interior.len() + 1 != dims.len() {
        return Err(Error::Argument(format!(
            "an order-{} tensor needs {} interior ranks, got {}",
            dims.len(),
            dims.len() - 1,
            interior.len()
        )));
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Decompose(a) => cmd_decompose(a, out, err),
        Command::Reconstruct { input, out: path } => {
            let x = read_tt(&input)?;
            let t = x.reconstruct()?;
            write_tensor(&path, &t)?;
            writeln!(out, "wrote {:?} tensor to {}", t.dims(), path.display())?;
            Ok(EXIT_OK)
        }
        Command::Complete(a) => cmd_complete(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Info { input } => cmd_info(input, out),
        Command::Gen(a) => cmd_gen(a, out),
    }
}

fn cmd_decompose(a: DecomposeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let t = read_tensor_any(&a.input)?;
    let method: Method = a.method.into();
    let sweep = match a.sweep {
        SweepArg::L2r => Sweep::LeftToRight,
        SweepArg::R2l => Sweep::RightToLeft,
    };
    let mode = match (a.ranks, a.eps) {
        (Some(r), _) => {
            check_interior(t.dims(), &r)?;
            Mode::FixedRank(full_chain(&r))
        }
        (None, Some(eps)) => Mode::FixedTol {
            eps,
            weights: a.weights,
        },
        (None, None) => unreachable!("clap requires --ranks or --eps"),
    };
    let retain = match a.retain {
        Some(RetainArg::Full) => Retain::FullColumn,
        _ => Retain::L11Only,
    };
    if a.retain.is_some() && !(method == Method::Ulv && sweep == Sweep::RightToLeft) {
        writeln!(err, "note: --retain only affects ulv with --sweep r2l")?;
    }
    if method == Method::Ulv && sweep == Sweep::RightToLeft && retain == Retain::L11Only {
        writeln!(
            err,
            "note: ulv with a right-to-left sweep only guarantees the summed bound Σ ε_k, \
             looser than sqrt(Σ ε_k²); use --retain full or urv for the tighter bound"
        )?;
    }
    let cfg = DecompConfig::new(method, sweep, mode)
        .with_refine(a.refine)
        .with_retain(retain);
    let (x, rep) = decompose(&t, &cfg)?;
    for w in &rep.warnings {
        writeln!(err, "warning: {w}")?;
    }
    write_tt(&a.out, &x)?;
    let checked = verify_bound(&t, &x, &rep);
    let rep = match checked {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_NUMERICAL);
        }
    };
    let approx = x.reconstruct()?;
    let peak = psnr(&approx, &t).ok();
    if let Some(path) = &a.report {
        write_rows_to_path(path, &[ReportRow::from_decomp(&cfg.mode, &rep, &x, peak)])?;
    }
    writeln!(
        out,
        "{} {} ranks {} bound({}) {:.3e} achieved {:.3e} rse {:.3e} params {}",
        method.name(),
        sweep.name(),
        format_ranks(&rep.ranks_chosen),
        rep.bound_kind.name(),
        rep.bound,
        rep.achieved_error.unwrap_or(f64::NAN),
        rep.achieved_rse().unwrap_or(f64::NAN),
        x.param_count()
    )?;
    Ok(EXIT_OK)
}

fn cmd_complete(a: CompleteArgs, out: &mut dyn Write) -> Result<i32> {
    let data = read_tensor_any(&a.input)?;
    let mask_t = read_tensor(&a.mask)?;
    let mask = ObservationMask::from_tensors(&mask_t, &data)?;
    check_interior(data.dims(), &a.ranks)?;
    let truth = a.truth.as_ref().map(read_tensor_any).transpose()?;
    let retraction: Retraction = a.retraction.into();
    let mut cfg = CompletionConfig::new(full_chain(&a.ranks), retraction);
    cfg.step_size = a.alpha;
    cfg.max_iters = a.iters;
    cfg.stop_tol = a.stop_tol;
    let (x, trace) = complete(&mask, &cfg, truth.as_ref())?;
    if let Some(p) = &a.out {
        write_tt(p, &x)?;
    }
    if let Some(p) = &a.report {
        write_rows_to_path(p, &trace_rows(retraction, &trace))?;
    }
    let last = trace.last().expect("at least one iteration");
    write!(
        out,
        "{} iterations ({:?}) observed rse {:.3e}",
        trace.len(),
        trace.stop,
        last.rse_observed
    )?;
    if let Some(r) = last.rse_full {
        write!(out, " full rse {r:.3e}")?;
    }
    writeln!(out)?;
    Ok(EXIT_OK)
}

fn cmd_info(input: PathBuf, out: &mut dyn Write) -> Result<i32> {
    let bytes = std::fs::read(&input)?;
    match detect(&bytes) {
        Some(FileKind::Tt) => {
            let x = read_tt(&input)?;
            writeln!(out, "kind: tt")?;
            writeln!(out, "dims: {:?}", x.dims())?;
            writeln!(out, "ranks: {}", format_ranks(&x.ranks()))?;
            writeln!(out, "parameters: {}", x.param_count())?;
        }
        _ => {
            let t = read_tensor_any(&input)?;
            writeln!(out, "kind: tensor")?;
            writeln!(out, "dims: {:?}", t.dims())?;
            writeln!(out, "entries: {}", t.numel())?;
            writeln!(out, "frobenius norm: {:e}", t.frobenius_norm())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<i32> {
    let t = match a.kind {
        GenKind::Hilbert => gen_hilbert(&a.dims)?,
        GenKind::Gaussian => gen_gaussian(&a.dims, a.seed)?,
        GenKind::Mask => gen_mask(&a.dims, a.fraction, a.seed)?,
        GenKind::Planted => {
            let interior = a
                .ranks
                .as_ref()
                .ok_or_else(|| Error::Argument("--kind planted needs --ranks".into()))?;
            check_interior(&a.dims, interior)?;
            let (t, x) = gen_planted_tt(&a.dims, &full_chain(interior), a.seed)?;
            if let Some(p) = &a.tt_out {
                write_tt(p, &x)?;
            }
            t
        }
    };
    write_tensor(&a.out, &t)?;
    writeln!(out, "wrote {:?} tensor to {}", t.dims(), a.out.display())?;
    Ok(EXIT_OK)
}

/// Fixture and configuration of one benchmark run.
struct BenchCase {
    tensor: DenseTensor,
    cfg: DecompConfig,
}

fn bench_cases(suite: Suite, seed: u64, trials: usize) -> Result<Vec<BenchCase>> {
    use rand::Rng;
    let mut cases = Vec::new();
    let all = [
        (Method::Svd, Sweep::LeftToRight, Retain::L11Only),
        (Method::Svd, Sweep::RightToLeft, Retain::L11Only),
        (Method::Ulv, Sweep::LeftToRight, Retain::L11Only),
        (Method::Urv, Sweep::RightToLeft, Retain::L11Only),
        (Method::Ulv, Sweep::RightToLeft, Retain::L11Only),
        (Method::Ulv, Sweep::RightToLeft, Retain::FullColumn),
        (Method::Urv, Sweep::LeftToRight, Retain::L11Only),
    ];
    match suite {
        Suite::Hilbert => {
            let h = gen_hilbert(&[20, 20, 20])?;
            for r in [2, 4, 6, 8] {
                for m in [Method::Svd, Method::Ulv, Method::Urv] {
                    let sweep = if m == Method::Urv {
                        Sweep::RightToLeft
                    } else {
                        Sweep::LeftToRight
                    };
                    cases.push(BenchCase {
                        tensor: h.clone(),
                        cfg: DecompConfig::fixed_rank(m, sweep, vec![1, r, r, 1]),
                    });
                }
            }
        }
        Suite::Bounds | Suite::Recovery => {
            let mut g = rng(seed);
            for trial in 0..trials {
                let d = g.random_range(3..=4);
                let dims: Vec<usize> = (0..d).map(|_| g.random_range(2..=8)).collect();
                let mut ranks = vec![1];
                ranks.extend((1..d).map(|_| g.random_range(1..=4)));
                ranks.push(1);
                let fixture_seed = seed.wrapping_add(trial as u64);
                let tensor = match suite {
                    Suite::Bounds => gen_gaussian(&dims, fixture_seed)?,
                    _ => gen_planted_tt(&dims, &ranks, fixture_seed)?.0,
                };
                for &(m, s, retain) in &all {
                    cases.push(BenchCase {
                        tensor: tensor.clone(),
                        cfg: DecompConfig::fixed_rank(m, s, ranks.clone()).with_retain(retain),
                    });
                }
            }
        }
    }
    Ok(cases)
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cases = bench_cases(a.suite, a.seed, a.trials)?;
    let mut rows = Vec::with_capacity(cases.len());
    let mut violations = 0;
    for case in &cases {
        let (x, rep) = decompose(&case.tensor, &case.cfg)?;
        let rep = match verify_bound(&case.tensor, &x, &rep) {
            Ok(r) => r,
            Err(e) => {
                violations += 1;
                writeln!(err, "error: {e}")?;
                rep
            }
        };
        let peak = psnr(&x.reconstruct()?, &case.tensor).ok();
        rows.push(ReportRow::from_decomp(&case.cfg.mode, &rep, &x, peak));
    }
    write_rows_to_path(&a.report, &rows)?;
    writeln!(
        out,
        "{} runs written to {}, {} bound violations",
        rows.len(),
        a.report.display(),
        violations
    )?;
    Ok(if violations > 0 { EXIT_NUMERICAL } else { EXIT_OK })
}
