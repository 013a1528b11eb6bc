use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qbffpt::cgis::build_cgis;
use qbffpt::error::SolveError;
use qbffpt::expansion::{expand_all, Expansion};
use qbffpt::forge::{
    is_to_multipartite, multipartite_is_to_qbf, random_qdcnf, PrefixShape,
};
use qbffpt::formula::{QbfInstance, Var};
use qbffpt::io::{
    dump_cgis, dump_multipartite, dump_taut, parse_cgis, parse_multipartite, parse_qcsp,
    parse_qdimacs, parse_simple_graph, serialize_qdimacs,
};
use qbffpt::kernel::{kernelize, KernelMode};
use qbffpt::qcsp::qcsp_to_qbf;
use qbffpt::search::{solve, Budgets, Method, SolveOptions, SolveStats, Verdict};

#[derive(Parser)]
#[command(name = "qbffpt", about = "FPT pipeline for quantified Boolean formulas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fpt,
    Xp,
    Oracle,
    Auto,
}

impl MethodArg {
    fn to_method(self) -> Method {
        match self {
            MethodArg::Fpt => Method::Fpt,
            MethodArg::Xp => Method::Xp,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelModeArg {
    Paper,
    Safe,
}

impl KernelModeArg {
    fn to_mode(self) -> KernelMode {
        match self {
            KernelModeArg::Paper => KernelMode::Paper,
            KernelModeArg::Safe => KernelMode::Safe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Kv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Alternating,
    Ae,
    Ea,
    Random,
}

impl ShapeArg {
    fn to_shape(self) -> PrefixShape {
        match self {
            ShapeArg::Alternating => PrefixShape::Alternating,
            ShapeArg::Ae => PrefixShape::Ae,
            ShapeArg::Ea => PrefixShape::Ea,
            ShapeArg::Random => PrefixShape::Random,
        }
    }
}

#[derive(Args)]
struct CommonOpts {
    /// Input file; stdin when omitted.
    input: Option<PathBuf>,
    /// Worker threads for the kernelizer (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output style: human adds timing lines, kv is byte-deterministic.
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a QDIMACS instance; exit 10 when TRUE, 20 when FALSE.
    Solve {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "safe")]
        kernel_mode: KernelModeArg,
        #[arg(long, default_value_t = 1 << 20)]
        budget_parts: usize,
        #[arg(long, default_value_t = 1 << 26)]
        budget_clauses: usize,
        /// Keep constant-true and constant-false branch formulas.
        #[arg(long)]
        no_prune: bool,
    },
    /// Expand away the existential quantifiers; print the TAUT instance.
    Expand {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        no_prune: bool,
    },
    /// Expand and reduce to the clause graph; print the CGIS instance.
    Reduce {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        no_prune: bool,
    },
    /// Kernelize a CGIS instance; print the reduced graph.
    Kernel {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_enum, default_value = "safe")]
        kernel_mode: KernelModeArg,
    },
    /// Emit instances: random Q-d-CNF, the IS lift, or the hardness reduction.
    Generate {
        /// Multipartite graph file; compiles the ∀∃CNF hardness instance.
        #[arg(long, conflicts_with_all = ["lift_from"])]
        hardness_from: Option<PathBuf>,
        /// Simple graph file; lifts to a multipartite IS instance.
        #[arg(long, requires = "parts")]
        lift_from: Option<PathBuf>,
        /// Number of parts for the lift.
        #[arg(long)]
        parts: Option<usize>,
        /// Allow the same underlying vertex in two parts of the lift.
        #[arg(long)]
        no_strict: bool,
        /// Universal variable count for random generation.
        #[arg(short = 'n', long, default_value_t = 4)]
        universals: usize,
        /// Existential variable count for random generation.
        #[arg(short = 'k', long, default_value_t = 2)]
        existentials: usize,
        /// Maximum clause width.
        #[arg(short = 'd', long, default_value_t = 3)]
        width: usize,
        /// Clause count.
        #[arg(short = 'm', long, default_value_t = 8)]
        clauses: usize,
        #[arg(long, value_enum, default_value = "alternating")]
        shape: ShapeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compile a QCSP instance to QDIMACS.
    CompileQcsp {
        /// Input file; stdin when omitted.
        input: Option<PathBuf>,
    },
}

fn read_input(path: &Option<PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("stdin: {e}"))?;
            Ok(buf)
        }
    }
}

fn configure_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
}

fn load_qbf(path: &Option<PathBuf>) -> Result<QbfInstance, String> {
    let text = read_input(path)?;
    let (inst, warnings) = parse_qdimacs(&text).map_err(|e| e.to_string())?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(inst)
}

fn print_stats(stats: &SolveStats, format: FormatArg) {
    let sizes = |v: &[usize]| {
        v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    };
    println!("c method={}", stats.method);
    println!("c n={}", stats.n);
    println!("c k={}", stats.k);
    println!("c d={}", stats.d);
    println!("c clauses={}", stats.clauses);
    println!("c parts={}", stats.parts);
    if !stats.part_sizes_pre.is_empty() {
        println!("c part_sizes_pre={}", sizes(&stats.part_sizes_pre));
    }
    if !stats.part_sizes_post.is_empty() {
        println!("c part_sizes_post={}", sizes(&stats.part_sizes_post));
    }
    if let Some(kernel) = &stats.kernel {
        println!("c kernel_mode={}", kernel.mode.name());
        println!("c kernel_s={}", kernel.s);
        println!("c kernel_bound={}", kernel.bound);
        println!("c kernel_deleted={}", kernel.total_deleted());
    }
    if matches!(format, FormatArg::Human) {
        println!("c expand_ms={}", stats.expand_time.as_millis());
        println!("c kernel_ms={}", stats.kernel_time.as_millis());
        println!("c search_ms={}", stats.search_time.as_millis());
    }
}

fn print_verdict(verdict: &Verdict, format: FormatArg) -> ExitCode {
    print_stats(&verdict.stats, format);
    if verdict.answer {
        println!("TRUE");
        ExitCode::from(10)
    } else {
        println!("FALSE");
        if let Some(witness) = &verdict.witness {
            print_witness(witness);
        }
        ExitCode::from(20)
    }
}

fn print_witness(witness: &BTreeMap<Var, bool>) {
    let lits: Vec<String> = witness
        .iter()
        .map(|(v, &b)| {
            if b {
                v.id().to_string()
            } else {
                format!("-{}", v.id())
            }
        })
        .collect();
    println!("v {} 0", lits.join(" "));
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            common,
            method,
            kernel_mode,
            budget_parts,
            budget_clauses,
            no_prune,
        } => {
            configure_jobs(common.jobs);
            let inst = load_qbf(&common.input)?;
            let opts = SolveOptions {
                kernel_mode: kernel_mode.to_mode(),
                budgets: Budgets {
                    max_parts: budget_parts,
                    max_clauses: budget_clauses,
                },
                prune: !no_prune,
            };
            match solve(&inst, method.to_method(), &opts) {
                Ok(verdict) => Ok(print_verdict(&verdict, common.format)),
                Err(SolveError::Budget { which, limit, needed }) => {
                    eprintln!("budget {which} exceeded: limit {limit}, needed {needed}");
                    println!("UNDECIDED budget={which}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Expand { common, no_prune } => {
            let inst = load_qbf(&common.input)?;
            match expand_all(&inst, !no_prune) {
                Expansion::Decided(answer) => {
                    println!("DECIDED {}", if answer { "TRUE" } else { "FALSE" });
                }
                Expansion::Open(taut) => print!("{}", dump_taut(&taut)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { common, no_prune } => {
            let inst = load_qbf(&common.input)?;
            match expand_all(&inst, !no_prune) {
                Expansion::Decided(answer) => {
                    println!("DECIDED {}", if answer { "TRUE" } else { "FALSE" });
                }
                Expansion::Open(taut) => print!("{}", dump_cgis(&build_cgis(&taut))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel { common, kernel_mode } => {
            configure_jobs(common.jobs);
            let text = read_input(&common.input)?;
            let graph = parse_cgis(&text).map_err(|e| e.to_string())?;
            let (reduced, report) = kernelize(&graph, kernel_mode.to_mode());
            println!("c kernel_mode={}", report.mode.name());
            println!("c kernel_s={}", report.s);
            println!("c kernel_bound={}", report.bound);
            println!("c kernel_deleted={}", report.total_deleted());
            print!("{}", dump_cgis(&reduced));
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            hardness_from,
            lift_from,
            parts,
            no_strict,
            universals,
            existentials,
            width,
            clauses,
            shape,
            seed,
        } => {
            if let Some(path) = hardness_from {
                let text = read_input(&Some(path))?;
                let graph = parse_multipartite(&text).map_err(|e| e.to_string())?;
                let inst = multipartite_is_to_qbf(&graph);
                print!("{}", serialize_qdimacs(&inst));
            } else if let Some(path) = lift_from {
                let text = read_input(&Some(path))?;
                let graph = parse_simple_graph(&text).map_err(|e| e.to_string())?;
                let k = parts.expect("clap enforces --parts with --lift-from");
                let lifted = is_to_multipartite(&graph, k, !no_strict)
                    .map_err(|e| e.to_string())?;
                print!("{}", dump_multipartite(&lifted));
            } else {
                let inst = random_qdcnf(
                    universals,
                    existentials,
                    width,
                    clauses,
                    shape.to_shape(),
                    seed,
                )
                .map_err(|e| e.to_string())?;
                print!("{}", serialize_qdimacs(&inst));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CompileQcsp { input } => {
            let text = read_input(&input)?;
            let inst = parse_qcsp(&text).map_err(|e| e.to_string())?;
            print!("{}", serialize_qdimacs(&qcsp_to_qbf(&inst)));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QBFFPT_LOG")).init();
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
