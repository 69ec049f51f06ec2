//! Command-line front end: solving, generation, reduction, certificate
//! checking, bound audits and spanning-tree verification.
//!
//! Exit codes: 0 success, 1 verification or internal failure, 2 input
//! error, 3 size-guard refusal.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use broadcast2::broadcast::{validate, BroadcastAssignment, Certificate};
use broadcast2::exact::{
    solve_bruteforce_guarded, solve_exact_guarded, SizeGuards, SolveError, SolveResult,
};
use broadcast2::families::{
    audit_bounds, enumerate_free_trees, generate, AuditReport, FamilySpec,
};
use broadcast2::graph::{parse_graph, Graph};
use broadcast2::reduction::{build_reduction, parse_dimacs};
use broadcast2::spanning::{extract_optimal_spanning_tree, min_over_spanning_trees};
use broadcast2::treedp::solve_tree;

/// Environment variable raising or lowering the default size guards; the
/// hard caps still apply.
const MAX_N_ENV: &str = "BROADCAST2_MAX_N";

#[derive(Parser)]
#[command(name = "broadcast2", version, about = "Dominating 2-broadcast toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the dominating 2-broadcast number of a graph file.
    Solve(SolveArgs),
    /// Generate a graph from a named family.
    Gen(GenArgs),
    /// Build the reduction graph of a DIMACS 3-CNF formula.
    Reduce(ReduceArgs),
    /// Re-check a certificate against a graph.
    Verify(VerifyArgs),
    /// Audit the tree and caterpillar bounds over a corpus.
    Audit(AuditArgs),
    /// Check the spanning-tree reduction on one graph.
    Spanning(SpanningArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    Auto,
    Bruteforce,
    Bnb,
    Treedp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file in `p edge` format; `-` reads stdin.
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    solver: SolverChoice,
    /// Size-guard override for the exact solvers (clamped to hard caps).
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    /// Family: path, cycle, star, spider, t9, f, random_tree,
    /// random_caterpillar.
    #[arg(long)]
    family: String,
    /// Vertex count (path, cycle, star, random_tree, random_caterpillar).
    #[arg(long)]
    n: Option<usize>,
    /// Copy count for family f.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Leg count for spiders.
    #[arg(long)]
    legs: Option<usize>,
    /// Leg length for spiders.
    #[arg(long = "leg-len")]
    leg_len: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF file; `-` reads stdin.
    #[arg(long)]
    input: String,
    /// Graph output file; stdout when absent.
    #[arg(long)]
    output: Option<String>,
    /// Role-map JSON output file; stdout when absent.
    #[arg(long)]
    map: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file; `-` reads stdin.
    #[arg(long)]
    input: String,
    /// Certificate JSON file.
    #[arg(long)]
    certificate: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct AuditArgs {
    /// Audit every non-isomorphic tree of this order.
    #[arg(long)]
    exhaustive: Option<usize>,
    /// Audit this many seeded random caterpillars.
    #[arg(long = "random-caterpillars")]
    random_caterpillars: Option<usize>,
    /// Largest caterpillar order (with --random-caterpillars).
    #[arg(long = "max-n", default_value_t = 60)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Audit family f members; `--m 2` or a range `--m 1..4`.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<String>,
    /// Worker threads for corpus audits.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SpanningArgs {
    /// Graph file; `-` reads stdin.
    #[arg(long)]
    input: String,
    /// Bound on the number of enumerated spanning trees.
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

enum CliError {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// Refused by a size guard: exit 3.
    Guard(String),
    /// Verification or internal failure: exit 1.
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guard(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(err: SolveError) -> Self {
        match err {
            SolveError::TooLarge { .. } => CliError::Guard(err.to_string()),
            SolveError::NotATree => CliError::Input(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Spanning(args) => cmd_spanning(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Failure(format!("{path}: {e}")))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_graph(path: &str) -> Result<Graph, CliError> {
    parse_graph(&read_input(path)?).map_err(|e| CliError::Input(e.to_string()))
}

/// Guards from the default table, overridden by `BROADCAST2_MAX_N` and then
/// by `--cap`; hard caps always apply.
fn effective_guards(cap: Option<usize>) -> SizeGuards {
    let env_cap = std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok());
    match cap.or(env_cap) {
        Some(n) => SizeGuards::uniform(n),
        None => SizeGuards::default(),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let guards = effective_guards(args.cap);
    let is_tree = g.is_tree();
    let result: SolveResult = match args.solver {
        SolverChoice::Treedp => solve_tree(&g)?,
        SolverChoice::Auto if is_tree => solve_tree(&g)?,
        SolverChoice::Auto | SolverChoice::Bnb => solve_exact_guarded(&g, &guards)?,
        SolverChoice::Bruteforce => solve_bruteforce_guarded(&g, &guards)?,
    };
    let cert = result.certificate(&g);
    if !cert.valid {
        return Err(CliError::Failure("witness failed revalidation".into()));
    }
    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&cert).unwrap()),
        Format::Text => {
            println!("n {}", cert.n);
            println!("cost {}", cert.cost);
            println!("method {}", cert.method);
            println!("nodes_explored {}", cert.nodes_explored);
            println!("values {:?}", cert.values);
        }
    }
    Ok(())
}

fn family_spec(args: &GenArgs) -> Result<FamilySpec, CliError> {
    let need_n = || {
        args.n
            .ok_or_else(|| CliError::Input("--n is required for this family".into()))
    };
    let spec = match args.family.as_str() {
        "path" => FamilySpec::Path { n: need_n()? },
        "cycle" => FamilySpec::Cycle { n: need_n()? },
        "star" => FamilySpec::Star {
            leaves: need_n()?.saturating_sub(1),
        },
        "spider" => FamilySpec::Spider {
            legs: args
                .legs
                .ok_or_else(|| CliError::Input("--legs is required for spiders".into()))?,
            leg_len: args
                .leg_len
                .ok_or_else(|| CliError::Input("--leg-len is required for spiders".into()))?,
        },
        "t9" => FamilySpec::T9,
        "f" => FamilySpec::FamilyF {
            m: args
                .m
                .ok_or_else(|| CliError::Input("--m is required for family f".into()))?,
            seed: args.seed,
        },
        "random_tree" => FamilySpec::RandomTree {
            n: need_n()?,
            seed: args.seed.unwrap_or(0),
        },
        "random_caterpillar" => FamilySpec::RandomCaterpillar {
            n: need_n()?,
            seed: args.seed.unwrap_or(0),
        },
        other => return Err(CliError::Input(format!("unknown family '{other}'"))),
    };
    Ok(spec)
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let spec = family_spec(&args)?;
    let g = generate(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    write_output(args.output.as_deref(), &g.to_dimacs())
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    let cnf = parse_dimacs(&read_input(&args.input)?).map_err(|e| CliError::Input(e.to_string()))?;
    let (g, map) = build_reduction(&cnf).map_err(|e| CliError::Input(e.to_string()))?;
    write_output(args.output.as_deref(), &g.to_dimacs())?;
    let mut map_json = serde_json::to_string(&map).unwrap();
    map_json.push('\n');
    write_output(args.map.as_deref(), &map_json)
}

#[derive(Serialize)]
struct VerifyOutcome {
    ok: bool,
    cost: usize,
    reason: Option<String>,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let text = read_input(&args.certificate)?;
    let cert: Certificate =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("certificate: {e}")))?;
    let outcome = check_certificate(&g, &cert);
    let line = match args.format {
        Format::Json => serde_json::to_string(&outcome).unwrap(),
        Format::Text => match &outcome.reason {
            None => format!("ok cost {}", outcome.cost),
            Some(reason) => format!("invalid: {reason}"),
        },
    };
    println!("{line}");
    match outcome.reason {
        None => Ok(()),
        Some(reason) => Err(CliError::Failure(reason)),
    }
}

fn check_certificate(g: &Graph, cert: &Certificate) -> VerifyOutcome {
    let fail = |reason: &str| VerifyOutcome {
        ok: false,
        cost: cert.cost,
        reason: Some(reason.to_string()),
    };
    if cert.n != g.n() {
        return fail("certificate n does not match the graph");
    }
    let f = match BroadcastAssignment::new(cert.values.clone()) {
        Ok(f) => f,
        Err(e) => return fail(&e.to_string()),
    };
    let report = match validate(g, &f) {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string()),
    };
    if !report.is_valid {
        return fail("assignment does not dominate the graph");
    }
    if f.cost() != cert.cost {
        return fail("stated cost does not match the values");
    }
    if !cert.valid {
        return fail("certificate declares itself invalid");
    }
    VerifyOutcome {
        ok: true,
        cost: cert.cost,
        reason: None,
    }
}

#[derive(Serialize)]
struct AuditSummary {
    count: usize,
    violations: usize,
    max_ratio: f64,
    tight: Vec<usize>,
}

fn parse_m_range(text: &str) -> Result<(usize, usize), CliError> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo
            .parse()
            .map_err(|_| CliError::Input(format!("bad range '{text}'")))?;
        let hi = hi
            .parse()
            .map_err(|_| CliError::Input(format!("bad range '{text}'")))?;
        Ok((lo, hi))
    } else {
        let m = text
            .parse()
            .map_err(|_| CliError::Input(format!("bad m '{text}'")))?;
        Ok((m, m))
    }
}

fn cmd_audit(args: AuditArgs) -> Result<(), CliError> {
    let corpus: Vec<Graph> = if let Some(n) = args.exhaustive {
        enumerate_free_trees(n).map_err(|e| CliError::Guard(e.to_string()))?
    } else if let Some(count) = args.random_caterpillars {
        let mut trees = Vec::with_capacity(count);
        for i in 0..count {
            let n = 1 + (seed_mix(args.seed, i as u64) as usize % args.max_n.max(1));
            let t = generate(&FamilySpec::RandomCaterpillar {
                n,
                seed: seed_mix(args.seed ^ 0x9e37, i as u64),
            })
            .map_err(|e| CliError::Input(e.to_string()))?;
            trees.push(t);
        }
        trees
    } else if args.family.as_deref() == Some("f") {
        let (lo, hi) = parse_m_range(
            args.m
                .as_deref()
                .ok_or_else(|| CliError::Input("--m is required with --family f".into()))?,
        )?;
        if lo < 1 || hi < lo {
            return Err(CliError::Input("m range must satisfy 1 <= lo <= hi".into()));
        }
        (lo..=hi)
            .map(|m| generate(&FamilySpec::FamilyF { m, seed: None }))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Input(e.to_string()))?
    } else {
        return Err(CliError::Input(
            "choose --exhaustive N, --random-caterpillars COUNT, or --family f --m RANGE".into(),
        ));
    };

    let reports = audit_corpus(&corpus, args.jobs.max(1))?;
    let mut violations = 0usize;
    let mut max_ratio = 0f64;
    let mut tight = Vec::new();
    for (i, report) in reports.iter().enumerate() {
        if report.gamma_b2 > report.tree_bound {
            violations += 1;
        }
        if let Some(cb) = report.caterpillar_bound {
            if report.gamma_b2 > cb {
                violations += 1;
            }
        }
        max_ratio = max_ratio.max(report.gamma_b2 as f64 / report.tree_bound as f64);
        if report.tight_tree_bound {
            tight.push(i);
        }
        match args.format {
            Format::Json => println!("{}", serde_json::to_string(report).unwrap()),
            Format::Text => println!(
                "tree {i}: n {} gamma_b2 {} bound {}{}{}",
                report.n,
                report.gamma_b2,
                report.tree_bound,
                if report.tight_tree_bound { " tight" } else { "" },
                if report.in_extremal_family {
                    " extremal"
                } else {
                    ""
                },
            ),
        }
    }
    let summary = AuditSummary {
        count: reports.len(),
        violations,
        max_ratio,
        tight,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&summary).unwrap()),
        Format::Text => println!(
            "audited {} trees, {} violations, max ratio {:.3}, {} tight",
            summary.count,
            summary.violations,
            summary.max_ratio,
            summary.tight.len()
        ),
    }
    if violations > 0 {
        return Err(CliError::Failure(format!("{violations} bound violations")));
    }
    Ok(())
}

fn seed_mix(seed: u64, index: u64) -> u64 {
    // splitmix64 step over (seed, index).
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9e3779b97f4a7c15))
        .wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn audit_corpus(corpus: &[Graph], jobs: usize) -> Result<Vec<AuditReport>, CliError> {
    if jobs <= 1 || corpus.len() < 2 {
        return corpus
            .iter()
            .map(|t| audit_bounds(t).map_err(|e| CliError::Failure(e.to_string())))
            .collect();
    }
    let chunk = corpus.len().div_ceil(jobs);
    let mut slots: Vec<Option<Result<AuditReport, String>>> = vec![None; corpus.len()];
    std::thread::scope(|scope| {
        for (chunk_index, (graphs, out)) in corpus
            .chunks(chunk)
            .zip(slots.chunks_mut(chunk))
            .enumerate()
        {
            let _ = chunk_index;
            scope.spawn(move || {
                for (t, slot) in graphs.iter().zip(out.iter_mut()) {
                    *slot = Some(audit_bounds(t).map_err(|e| e.to_string()));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.expect("all slots filled")
                .map_err(CliError::Failure)
        })
        .collect()
}

#[derive(Serialize)]
struct SpanningOutcome {
    graph_value: usize,
    spanning_minimum: usize,
    extracted_tree_value: usize,
}

fn cmd_spanning(args: SpanningArgs) -> Result<(), CliError> {
    let g = load_graph(&args.input)?;
    let guards = effective_guards(None);
    let exact = solve_exact_guarded(&g, &guards)?;
    let spanning_minimum =
        min_over_spanning_trees(&g, args.cap).map_err(|e| CliError::Guard(e.to_string()))?;
    let extraction = extract_optimal_spanning_tree(&g, &exact.witness)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let extracted_tree_value = solve_tree(&extraction.tree)?.optimum;
    let outcome = SpanningOutcome {
        graph_value: exact.optimum,
        spanning_minimum,
        extracted_tree_value,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&outcome).unwrap()),
        Format::Text => println!(
            "graph {} spanning-min {} extracted {}",
            outcome.graph_value, outcome.spanning_minimum, outcome.extracted_tree_value
        ),
    }
    if outcome.spanning_minimum != outcome.graph_value
        || outcome.extracted_tree_value != outcome.graph_value
    {
        return Err(CliError::Failure("spanning-tree values disagree".into()));
    }
    Ok(())
}
