//! Command-line front end for the fair-division solver.
//!
//! Subcommands: `solve` an instance file against a chosen algorithm and its
//! theorem bound, `bench` seeded sweeps to CSV, `gen` random instance files,
//! and `oracle` to compare an algorithm with the exhaustive optimum.
//!
//! Exit codes: 0 success/PASS, 1 bound violation (a bug — the bounds are
//! theorems), 2 usage, parse, or incompatibility errors.

use clap::{Parser, Subcommand, ValueEnum};
use fairdiv_core::bid_and_take::{fractional_bid_and_take, round_largest_fraction};
use fairdiv_core::envy::{efs_bound, efs_solve};
use fairdiv_core::identical::{load_balance, load_balance_bound, weighted_load_balance};
use fairdiv_core::instances::{gen_random, Family};
use fairdiv_core::io::{read_instance, write_instance};
use fairdiv_core::moving_knife::moving_knife;
use fairdiv_core::oracle::{
    oracle_min_total_efs_subsidy, oracle_min_total_subsidy, DEFAULT_ENUMERATION_CAP,
};
use fairdiv_core::rational::rat;
use fairdiv_core::reduction::{lift_allocation, to_ido};
use fairdiv_core::rounding::{round_best, round_best_bound};
use fairdiv_core::verify::{is_ef, is_ef1, is_prop, is_prop1, is_propx, min_subsidy_vector};
use fairdiv_core::{
    format_decimal, format_rational, Allocation, Instance, Mode, Rational, SubsidyVector,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_PASS: u8 = 0;
const EXIT_BOUND_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "fairdiv",
    version,
    about = "Fair allocation of indivisible chores and goods with minimum subsidies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and check the algorithm's worst-case bound.
    Solve(SolveArgs),
    /// Run a seeded random sweep and emit one CSV row per trial.
    Bench(BenchArgs),
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Compare an instance's exhaustive optimum against an algorithm.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Greedy load balancing (identical-cost chores).
    LoadBalance,
    /// Weighted greedy load balancing (identical-cost chores).
    WeightedLoadBalance,
    /// Reduce to a common cost order, run the moving knife, round both ways,
    /// keep the cheaper, and lift back.
    MovingKnifeRoundBest,
    /// Weighted fractional bid-and-take, rounded by largest fraction.
    BidAndTake,
    /// Matching-based allocation with envy-eliminating payments (chores).
    Efs,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::LoadBalance => "load-balance",
            Algorithm::WeightedLoadBalance => "weighted-load-balance",
            Algorithm::MovingKnifeRoundBest => "moving-knife-round-best",
            Algorithm::BidAndTake => "bid-and-take",
            Algorithm::Efs => "efs",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Chores,
    Goods,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Chores => Mode::Chores,
            ModeArg::Goods => Mode::Goods,
        }
    }
}

/// Inclusive sweep range, written `lo..hi` or as a single value.
#[derive(Clone, Copy, Debug)]
struct SweepRange {
    lo: usize,
    hi: usize,
}

impl SweepRange {
    fn span(self) -> usize {
        self.hi - self.lo + 1
    }
}

fn parse_sweep_range(s: &str) -> Result<SweepRange, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(SweepRange { lo, hi })
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_str(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
struct SolveArgs {
    /// Instance file (JSON with mode, cost matrix, optional weights).
    file: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Also print decimal approximations next to exact rationals.
    #[arg(long)]
    decimal: bool,
}

#[derive(Parser)]
struct BenchArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Agent counts to sweep, e.g. `4` or `2..8`.
    #[arg(long, value_parser = parse_sweep_range, default_value = "2..8")]
    n: SweepRange,
    /// Item counts to sweep, e.g. `6` or `1..12`.
    #[arg(long, value_parser = parse_sweep_range, default_value = "1..12")]
    m: SweepRange,
    #[arg(long, value_parser = parse_family, default_value = "uniform")]
    family: Family,
    #[arg(long, value_enum, default_value_t = ModeArg::Chores)]
    mode: ModeArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base seed; trial t uses seed + t.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_parser = parse_family, default_value = "uniform")]
    family: Family,
    #[arg(long, value_enum, default_value_t = ModeArg::Chores)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the instance here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser)]
struct OracleArgs {
    /// Instance file to search exhaustively.
    file: PathBuf,
    /// Also run this algorithm and report its gap to the optimum.
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// Refuse searches larger than this many allocations.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[arg(long)]
    decimal: bool,
}

/// A non-usage failure: message plus the exit code to report.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn bound(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: EXIT_BOUND_VIOLATION,
        }
    }
}

fn fmt_rat(q: &Rational, decimal: bool) -> String {
    if decimal {
        format!("{} ({})", format_rational(q), format_decimal(q, 6))
    } else {
        format_rational(q)
    }
}

fn fmt_vector(s: &SubsidyVector, decimal: bool) -> String {
    s.iter()
        .map(|q| fmt_rat(q, decimal))
        .collect::<Vec<_>>()
        .join(", ")
}

/// The result of running one algorithm on one instance.
struct Solved {
    allocation: Allocation,
    /// Payments handed to each agent (minimum deficits, or envy-eliminating
    /// payments for `efs`).
    subsidies: SubsidyVector,
    bound: Rational,
    bound_label: &'static str,
    /// Extra report lines, e.g. the pre-lift subsidies of the knife pipeline.
    extra: Vec<(String, Rational)>,
}

impl Solved {
    fn total(&self) -> Rational {
        self.subsidies.total()
    }
}

/// Checks the named compatibility requirements before running anything.
fn check_compatible(inst: &Instance, algorithm: Algorithm) -> Result<(), Failure> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Failure::usage(format!(
                "{} requires {what}",
                algorithm.name()
            )))
        }
    };
    match algorithm {
        Algorithm::LoadBalance => {
            need(inst.mode() == Mode::Chores, "a chores instance")?;
            need(inst.rows_identical(), "identical cost rows")?;
            need(inst.has_uniform_weights(), "uniform weights")
        }
        Algorithm::WeightedLoadBalance => {
            need(inst.mode() == Mode::Chores, "a chores instance")?;
            need(inst.rows_identical(), "identical cost rows")
        }
        Algorithm::MovingKnifeRoundBest => need(inst.has_uniform_weights(), "uniform weights"),
        Algorithm::BidAndTake => Ok(()),
        Algorithm::Efs => need(inst.mode() == Mode::Chores, "a chores instance"),
    }
}

fn run_algorithm(inst: &Instance, algorithm: Algorithm) -> Result<Solved, Failure> {
    check_compatible(inst, algorithm)?;
    let n = inst.agents();
    match algorithm {
        Algorithm::LoadBalance => {
            let (allocation, subsidies, _) =
                load_balance(inst).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(Solved {
                allocation,
                subsidies,
                bound: load_balance_bound(n),
                bound_label: if n.is_multiple_of(2) { "n/4" } else { "(n^2-1)/(4n)" },
                extra: Vec::new(),
            })
        }
        Algorithm::WeightedLoadBalance => {
            let (allocation, subsidies, _) =
                weighted_load_balance(inst).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(Solved {
                allocation,
                subsidies,
                bound: load_balance_bound(n),
                bound_label: if n.is_multiple_of(2) { "n/4" } else { "(n^2-1)/(4n)" },
                extra: Vec::new(),
            })
        }
        Algorithm::MovingKnifeRoundBest => {
            let (ido, _) = to_ido(inst);
            let (cuts, _) = moving_knife(&ido).map_err(|e| Failure::usage(e.to_string()))?;
            let outcome = round_best(&cuts, &ido);
            let ido_total = outcome.total_subsidy();
            let allocation = lift_allocation(&outcome.allocation, inst);
            let subsidies = min_subsidy_vector(inst, &allocation);
            Ok(Solved {
                allocation,
                subsidies,
                bound: round_best_bound(n),
                bound_label: "n/4",
                extra: vec![(
                    "total before lifting (common-cost-order instance)".into(),
                    ido_total,
                )],
            })
        }
        Algorithm::BidAndTake => {
            let (frac, _) =
                fractional_bid_and_take(inst).map_err(|e| Failure::usage(e.to_string()))?;
            let outcome = round_largest_fraction(&frac, inst);
            Ok(Solved {
                allocation: outcome.allocation,
                subsidies: outcome.subsidies,
                bound: rat(n as i64 - 1, 2),
                bound_label: "(n-1)/2",
                extra: Vec::new(),
            })
        }
        Algorithm::Efs => {
            let (allocation, subsidies) =
                efs_solve(inst).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(Solved {
                allocation,
                subsidies,
                bound: efs_bound(n),
                bound_label: "n-1",
                extra: Vec::new(),
            })
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let inst = read_instance(&args.file).map_err(|e| Failure::usage(e.to_string()))?;
    let solved = run_algorithm(&inst, args.algorithm)?;
    let d = args.decimal;

    println!(
        "instance: {} agents, {} items, {}{}",
        inst.agents(),
        inst.items(),
        inst.mode(),
        if inst.has_uniform_weights() {
            String::new()
        } else {
            format!(
                ", weights {}",
                inst.weights()
                    .iter()
                    .map(|w| fmt_rat(w, d))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        }
    );
    println!("algorithm: {}", args.algorithm.name());
    println!("allocation:");
    for i in 0..inst.agents() {
        let items: Vec<String> = solved
            .allocation
            .bundle(i)
            .iter()
            .map(usize::to_string)
            .collect();
        println!("  agent {i}: {{{}}}", items.join(", "));
    }
    for (label, value) in &solved.extra {
        println!("{label}: {}", fmt_rat(value, d));
    }
    println!("subsidy per agent: {}", fmt_vector(&solved.subsidies, d));
    let total = solved.total();
    println!("total subsidy: {}", fmt_rat(&total, d));
    println!(
        "bound: {} [{} for n={}]",
        fmt_rat(&solved.bound, d),
        solved.bound_label,
        inst.agents()
    );

    let mut within = total <= solved.bound;
    for (_, value) in &solved.extra {
        within = within && *value <= solved.bound;
    }
    if within {
        println!(
            "verdict: PASS ({} <= {})",
            format_rational(&total),
            format_rational(&solved.bound)
        );
        Ok(())
    } else {
        println!(
            "verdict: FAIL ({} > {})",
            format_rational(&total),
            format_rational(&solved.bound)
        );
        Err(Failure::bound(format!(
            "total subsidy {} exceeds the proven bound {} — this is a bug",
            format_rational(&total),
            format_rational(&solved.bound)
        )))
    }
}

const CSV_HEADER: &str = "seed,n,m,family,algorithm,total_subsidy,bound,tight_ratio,prop,prop1,propx,ef,ef1";

fn csv_row(
    seed: u64,
    inst: &Instance,
    family: Family,
    algorithm: Algorithm,
    solved: &Solved,
) -> String {
    let total = solved.total();
    let ratio = if solved.bound == rat(0, 1) {
        rat(0, 1)
    } else {
        &total / &solved.bound
    };
    let alloc = &solved.allocation;
    format!(
        "{seed},{},{},{family},{},{},{},{},{},{},{},{},{}",
        inst.agents(),
        inst.items(),
        algorithm.name(),
        format_rational(&total),
        format_rational(&solved.bound),
        format_rational(&ratio),
        is_prop(inst, alloc),
        is_prop1(inst, alloc),
        is_propx(inst, alloc),
        is_ef(inst, alloc),
        is_ef1(inst, alloc),
    )
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let mode: Mode = args.mode.into();
    let identical_needed = matches!(
        args.algorithm,
        Algorithm::LoadBalance | Algorithm::WeightedLoadBalance
    );
    if identical_needed && args.family != Family::IdenticalUniform {
        return Err(Failure::usage(format!(
            "{} requires --family identical-uniform",
            args.algorithm.name()
        )));
    }
    if (identical_needed || args.algorithm == Algorithm::Efs) && mode != Mode::Chores {
        return Err(Failure::usage(format!(
            "{} requires --mode chores",
            args.algorithm.name()
        )));
    }
    if args.n.lo < 2 {
        return Err(Failure::usage("sweeps need at least 2 agents"));
    }

    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").expect("string write");
    for t in 0..args.trials {
        let n = args.n.lo + t % args.n.span();
        let m = args.m.lo + (t / args.n.span()) % args.m.span();
        let seed = args.seed + t as u64;
        let inst = gen_random(n, m, seed, args.family, mode);
        let solved = match run_algorithm(&inst, args.algorithm) {
            Ok(s) => s,
            // A degenerate draw (e.g. an all-zero cost row) is skipped;
            // the skip is deterministic for a given seed.
            Err(_) => continue,
        };
        let total = solved.total();
        if total > solved.bound {
            return Err(Failure::bound(format!(
                "seed {seed} (n={n}, m={m}): total {} exceeds bound {} — this is a bug",
                format_rational(&total),
                format_rational(&solved.bound)
            )));
        }
        writeln!(out, "{}", csv_row(seed, &inst, args.family, args.algorithm, &solved))
            .expect("string write");
    }

    match &args.out {
        Some(path) => std::fs::write(path, out)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    if args.n < 1 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let inst = gen_random(args.n, args.m, args.seed, args.family, args.mode.into());
    match &args.out {
        Some(path) => {
            write_instance(path, &inst).map_err(|e| Failure::usage(e.to_string()))?;
            println!(
                "wrote {} ({} agents, {} items, {}, {})",
                path.display(),
                args.n,
                args.m,
                inst.mode(),
                args.family
            );
            Ok(())
        }
        None => {
            println!("{}", fairdiv_core::io::instance_to_json(&inst));
            Ok(())
        }
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), Failure> {
    let inst = read_instance(&args.file).map_err(|e| Failure::usage(e.to_string()))?;
    let d = args.decimal;

    let optimum = if args.algorithm == Some(Algorithm::Efs) {
        let (opt, _, _) = oracle_min_total_efs_subsidy(&inst, args.cap)
            .map_err(|e| Failure::usage(e.to_string()))?;
        println!("exhaustive minimum envy-eliminating total: {}", fmt_rat(&opt, d));
        opt
    } else {
        let (opt, alloc) = oracle_min_total_subsidy(&inst, args.cap)
            .map_err(|e| Failure::usage(e.to_string()))?;
        println!("exhaustive minimum total subsidy: {}", fmt_rat(&opt, d));
        let bundles: Vec<String> = (0..inst.agents())
            .map(|i| {
                let items: Vec<String> = alloc.bundle(i).iter().map(usize::to_string).collect();
                format!("{{{}}}", items.join(", "))
            })
            .collect();
        println!("an optimal allocation: {}", bundles.join(" "));
        opt
    };

    let Some(algorithm) = args.algorithm else {
        return Ok(());
    };
    let solved = run_algorithm(&inst, algorithm)?;
    let total = solved.total();
    let gap = &total - &optimum;
    println!("{} total: {}", algorithm.name(), fmt_rat(&total, d));
    println!("gap above optimum: {}", fmt_rat(&gap, d));
    if total >= optimum {
        println!(
            "verdict: PASS ({} >= {})",
            format_rational(&total),
            format_rational(&optimum)
        );
        Ok(())
    } else {
        println!(
            "verdict: FAIL ({} < {})",
            format_rational(&total),
            format_rational(&optimum)
        );
        Err(Failure::bound(format!(
            "{} undercut the exhaustive optimum ({} < {}) — this is a bug",
            algorithm.name(),
            format_rational(&total),
            format_rational(&optimum)
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_PASS),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
