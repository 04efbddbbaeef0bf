//! Command-line front end: irreducible decomposition, monodromy, count
//! polynomials, spectra, eigenspace cohomology tables, and exact point
//! counts of Milnor fibers over finite fields.
//!
//! Output is line-oriented and byte-stable for fixed input and flags:
//! polynomials print ascending-degree with explicit signs, and nothing
//! depends on map iteration order or wall-clock time. Exit status: 0 on
//! success, 1 when `--expect-polynomial-count` was asserted and a prime
//! falsified the candidate, 2 on usage errors, 3 on any other failure
//! (invalid input, bad prime, exceeded budget).

use std::fs;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use milnor::arrangement::{builtin, CentralArrangement};
use milnor::decompose::{irreducible_decomposition, monodromy_report};
use milnor::ffcount::{is_prime, CountMethod, PointCounter, PrimeField, DEFAULT_BUDGET};
use milnor::hodge::milnor_fiber_table;
use milnor::katz::{polynomial_count_check, reproduce_rk2, REFERENCE_PRIMES};
use milnor::lattice::IntersectionLattice;
use milnor::spectrum::{equivalence_report, spectrum_unit_interval};
use milnor::{Error, Result};

#[derive(Parser)]
#[command(
    name = "milnor",
    version,
    about = "Exact monodromy, spectra, and finite-field point counts for central hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cap on point evaluations per counting call (default: MILNOR_BUDGET
    /// env var if set, otherwise 10^9)
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for data-parallel counting
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Split into irreducible factors and report the monodromy order
    Decompose(InputArg),
    /// Monodromy triviality with the Euler-characteristic cross-check
    Monodromy(InputArg),
    /// Characteristic polynomial and projective count polynomial
    Charpoly(InputArg),
    /// Spectrum on (0,1) for plane arrangements, with the equivalence report
    Spectrum(InputArg),
    /// Eigenspace cohomology table of the Milnor fiber
    Hodge(InputArg),
    /// Count Milnor fiber points over prime fields
    Count(CountArgs),
    /// Compare exact counts against the candidate count polynomial
    Katz(KatzArgs),
    /// Replay a built-in census (dataset `rk2`: the two-factor product
    /// counterexample over its reference primes)
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct InputArg {
    /// Arrangement document path, or a built-in: @g2, @g4, @a11,
    /// @boolean:N, @g:N, @a:U,V
    input: String,
}

#[derive(Args)]
#[command(group(ArgGroup::new("prime_selection").required(true).args(["prime", "primes"])))]
struct CountArgs {
    #[command(flatten)]
    input: InputArg,

    /// Count at a single prime (a bad prime is an error)
    #[arg(long)]
    prime: Option<u64>,

    /// Count at several primes: comma list "5,7,11" or inclusive range
    /// "5..40" (bad primes are skipped with a notice)
    #[arg(long)]
    primes: Option<String>,

    /// Counting strategy: brute, factored, or fast
    #[arg(long, default_value_t = CountMethod::Fast)]
    method: CountMethod,
}

#[derive(Args)]
struct KatzArgs {
    #[command(flatten)]
    input: InputArg,

    /// Primes to test: comma list "5,7,11" or inclusive range "5..40"
    #[arg(long)]
    primes: String,

    /// Counting strategy: brute, factored, or fast
    #[arg(long, default_value_t = CountMethod::Fast)]
    method: CountMethod,

    /// Exit with status 1 if any prime falsifies the candidate
    #[arg(long)]
    expect_polynomial_count: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Built-in dataset to replay
    #[arg(value_parser = ["rk2"])]
    dataset: String,

    /// Primes to run (comma list or inclusive range); defaults to the
    /// dataset's full reference list
    #[arg(long)]
    primes: Option<String>,

    /// Exit with status 1 if any prime falsifies the candidate
    #[arg(long)]
    expect_polynomial_count: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let budget = effective_budget(cli.budget)?;
    match &cli.command {
        Command::Decompose(arg) => {
            let a = load_arrangement(&arg.input)?;
            println!("{}", irreducible_decomposition(&a)?);
        }
        Command::Monodromy(arg) => {
            let a = load_arrangement(&arg.input)?;
            let report = monodromy_report(&a)?;
            println!(
                "d0={} trivial={} reducible={} projective_euler={}",
                report.decomposition.monodromy_order(),
                report.trivial(),
                report.decomposition.is_reducible(),
                report.projective_euler
            );
        }
        Command::Charpoly(arg) => {
            let a = load_arrangement(&arg.input)?;
            let lattice = IntersectionLattice::build(&a)?;
            println!("chi: {}", lattice.characteristic_polynomial());
            println!("projective: {}", lattice.projective_count_polynomial());
        }
        Command::Spectrum(arg) => {
            let a = load_arrangement(&arg.input)?;
            let table = spectrum_unit_interval(&a)?;
            let d = table.denominator();
            for (j, value) in table.entries() {
                println!("{j}/{d} {value}");
            }
            let eq = equivalence_report(&a)?;
            println!(
                "equivalence: hodge_vanish={} reducible={} trivial_monodromy={} spectrum_vanishes={}",
                eq.hodge_components_vanish, eq.reducible, eq.trivial_monodromy, eq.spectrum_vanishes
            );
        }
        Command::Hodge(arg) => {
            let a = load_arrangement(&arg.input)?;
            let table = milnor_fiber_table(&a)?;
            println!("n={} order={}", table.complex_dim(), table.eigenvalue_order());
            // One row per monodromy eigenvalue index: dims of H^0 .. H^n.
            for k in 0..table.eigenvalue_order() {
                let dims: Vec<String> = table.dims(k).iter().map(u64::to_string).collect();
                println!("dims[k={k}]: {}", dims.join(","));
            }
            println!("tate={}", table.is_tate());
            if table.is_tate() {
                println!("hd: {}", table.e_polynomial()?);
                println!("candidate: {}", table.katz_candidate()?);
            }
        }
        Command::Count(args) => return run_count(args, budget, cli.threads),
        Command::Katz(args) => return run_katz(args, budget, cli.threads),
        Command::Reproduce(args) => return run_reproduce(args, budget, cli.threads),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_count(args: &CountArgs, budget: u64, threads: usize) -> Result<ExitCode> {
    let a = load_arrangement(&args.input.input)?;
    let counter = PointCounter::new(&a)?.with_budget(budget).with_threads(threads);
    if let Some(p) = args.prime {
        let field = PrimeField::new(p)?;
        let result = counter.count_milnor_fiber(&field, args.method)?;
        println!("p={} method={} count={}", result.p, result.method, result.value);
        return Ok(ExitCode::SUCCESS);
    }
    let selection = args.primes.as_deref().expect("clap enforces the prime selection group");
    for p in parse_primes(selection)? {
        if !counter.is_good_prime(p) {
            println!("p={p} skipped (bad prime)");
            continue;
        }
        let field = PrimeField::new(p)?;
        let result = counter.count_milnor_fiber(&field, args.method)?;
        println!("p={} method={} count={}", result.p, result.method, result.value);
    }
    Ok(ExitCode::SUCCESS)
}

fn run_katz(args: &KatzArgs, budget: u64, threads: usize) -> Result<ExitCode> {
    let a = load_arrangement(&args.input.input)?;
    let counter = PointCounter::new(&a)?.with_budget(budget).with_threads(threads);
    let candidate = milnor_fiber_table(&a)?.katz_candidate()?;
    let primes = parse_primes(&args.primes)?;
    let mut counts = Vec::with_capacity(primes.len());
    for p in primes {
        let field = PrimeField::new(p)?;
        counts.push(counter.count_milnor_fiber(&field, args.method)?);
    }
    let report = polynomial_count_check(&counts, &candidate, counter.bad_primes())?;
    println!("candidate: {candidate}");
    println!("{report}");
    if report.is_falsified() && args.expect_polynomial_count {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_reproduce(args: &ReproduceArgs, budget: u64, threads: usize) -> Result<ExitCode> {
    // `dataset` is constrained to "rk2" by the argument parser.
    let primes = match &args.primes {
        Some(selection) => parse_primes(selection)?,
        None => REFERENCE_PRIMES.to_vec(),
    };
    let report = reproduce_rk2(&primes, budget, threads)?;
    println!("candidate: {}", report.candidate);
    println!("{report}");
    if report.is_falsified() && args.expect_polynomial_count {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// Budget precedence: `--budget` flag, then the MILNOR_BUDGET environment
/// variable, then the library default.
fn effective_budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("MILNOR_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("MILNOR_BUDGET must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn load_arrangement(input: &str) -> Result<CentralArrangement> {
    if let Some(name) = input.strip_prefix('@') {
        return builtin(name);
    }
    let text = fs::read_to_string(input)
        .map_err(|e| Error::Parse(format!("cannot read {input}: {e}")))?;
    CentralArrangement::parse_document(&text)
}

fn parse_number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: expected an integer, got {text:?}")))
}

/// Primes given either as an inclusive range `a..b` (composites silently
/// dropped) or a comma list (every entry must be prime).
fn parse_primes(selection: &str) -> Result<Vec<u64>> {
    if let Some((lo, hi)) = selection.split_once("..") {
        let lo: u64 = parse_number(lo, "--primes range")?;
        let hi: u64 = parse_number(hi, "--primes range")?;
        return Ok((lo..=hi).filter(|&p| is_prime(p)).collect());
    }
    let mut primes = Vec::new();
    for part in selection.split(',') {
        let p: u64 = parse_number(part, "--primes list")?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        primes.push(p);
    }
    Ok(primes)
}
