//! Argument parsing and the five verbs.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qcluster::explore::{graph_stats, AuditKind};
use qcluster::ledger::{GramLattice, WeightData};
use qcluster::mutation::check_compatible;
use qcluster::wire::SeedFile;
use qcluster::{audit_graph, mutation_graph, Error, ExploreOptions, IntMatrix, MonoidalLedger, QuantumSeed};

/// Environment variable overriding the explore node budget.
pub const ENV_MAX_NODES: &str = "QCLUSTER_MAX_NODES";
/// Environment variable overriding the per-variable term budget.
pub const ENV_MAX_TERMS: &str = "QCLUSTER_MAX_TERMS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qcluster", version, about = "Exact quantum cluster algebra computations")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a seed (compatibility) or ledger (all monoidal conditions).
    Check { file: PathBuf },
    /// Apply a sequence of mutations and print the resulting seed.
    Mutate {
        file: PathBuf,
        /// Comma-separated directions, applied left to right.
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<usize>,
    },
    /// Explore the mutation graph up to a depth.
    Explore {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Check Laurentness, positivity, bar-invariance and quasi-commutation.
        #[arg(long)]
        audit: bool,
        /// Identify seeds that differ by a relabeling.
        #[arg(long)]
        fold: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify the decategorified exchange identities in one direction.
    Decat {
        file: PathBuf,
        #[arg(long)]
        dir: usize,
    },
    /// Serve the session HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code, stdout, stderr }
    }
}

/// Runs one command line (including the program name) and collects its
/// output. `serve` blocks until the server stops.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, String::new(), text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match args.command {
        Command::Check { file } => run(|| check(&file)),
        Command::Mutate { file, seq } => run(|| mutate(&file, &seq)),
        Command::Explore {
            file,
            depth,
            audit,
            fold,
            parallel,
            max_nodes,
            max_terms,
            format,
        } => run(|| {
            let mut opts = ExploreOptions {
                depth,
                fold,
                parallel,
                ..ExploreOptions::default()
            };
            opts.max_nodes = budget(max_nodes, ENV_MAX_NODES, opts.max_nodes)?;
            opts.max_terms = budget(max_terms, ENV_MAX_TERMS, opts.max_terms)?;
            explore(&file, &opts, audit, format)
        }),
        Command::Decat { file, dir } => run(|| decat(&file, dir)),
        Command::Serve { port, host } => serve(&host, port),
    }
}

/// A failed command: exit code plus message.
struct Failure {
    code: i32,
    stdout: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotExchangeable(_) | Error::UnknownIndex(_) => EXIT_USAGE,
            _ => EXIT_INVALID,
        };
        let message = match e {
            Error::NotExchangeable(k) => format!("error: index {k} is frozen and cannot be mutated"),
            other => format!("error: {other}"),
        };
        Failure {
            code,
            stdout: String::new(),
            message,
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        stdout: String::new(),
        message,
    }
}

/// `Ok` carries stdout; a validation failure may also carry partial stdout.
type Run = std::result::Result<String, Failure>;

fn run(f: impl FnOnce() -> Run) -> Outcome {
    match f() {
        Ok(out) => Outcome::ok(out),
        Err(fail) => Outcome::fail(fail.code, fail.stdout, fail.message),
    }
}

fn budget(flag: Option<usize>, var: &str, default: usize) -> std::result::Result<usize, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(var) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("error: {var} must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(default),
    }
}

fn load(path: &Path) -> std::result::Result<SeedFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("error: cannot read {}: {e}", path.display())))?;
    SeedFile::parse(&text).map_err(|e| Failure {
        code: EXIT_INVALID,
        stdout: String::new(),
        message: format!("error: {}: {e}", path.display()),
    })
}

fn check(path: &Path) -> Run {
    let file = load(path)?;
    let mut out = String::new();
    let mut failed = false;
    match file
        .l_matrix()
        .and_then(|l| check_compatible(&file.indices, &l, &file.b))
    {
        Ok(d) => writeln!(out, "compatible, d={d}").unwrap(),
        Err(e) => {
            failed = true;
            writeln!(out, "not compatible: {e}").unwrap();
        }
    }
    if let Some(ledger) = file.ledger()? {
        let report = ledger.check();
        if report.is_ok() {
            writeln!(out, "monoidal conditions: ok").unwrap();
        } else {
            failed = true;
            writeln!(out, "monoidal conditions: {} violation(s)", report.violations.len()).unwrap();
            for v in &report.violations {
                writeln!(out, "  {v}").unwrap();
            }
        }
    }
    if failed {
        Err(Failure {
            code: EXIT_INVALID,
            stdout: out,
            message: format!("{}: validation failed", path.display()),
        })
    } else {
        Ok(out)
    }
}

fn mutate(path: &Path, seq: &[usize]) -> Run {
    let file = load(path)?;
    let pair = file.pair()?;
    // validate every direction before computing anything
    for &k in seq {
        pair.indices().ex_slot(k)?;
    }
    let ledger = file.ledger()?;
    let seed = QuantumSeed::initial(pair).mutate_seq(seq)?;
    let mut out = render_seed(&seed);
    if let Some(mut ledger) = ledger {
        for &k in seq {
            ledger = ledger.mutate(k)?.0;
        }
        out.push_str(&render_ledger(&ledger));
    }
    Ok(out)
}

fn explore(path: &Path, opts: &ExploreOptions, audit: bool, format: Format) -> Run {
    let file = load(path)?;
    let seed = QuantumSeed::initial(file.pair()?);
    let graph = mutation_graph(&seed, opts)?;
    let mut out = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&graph.to_json()).expect("json");
            s.push('\n');
            s
        }
        Format::Dot => graph.to_dot(),
        Format::Text => {
            let stats = graph_stats(&graph);
            let mut s = String::new();
            writeln!(s, "depth: {}{}", opts.depth, if opts.fold { " (folded)" } else { "" }).unwrap();
            writeln!(s, "nodes: {}", stats.nodes).unwrap();
            writeln!(s, "edges: {}", stats.edges).unwrap();
            writeln!(s, "max depth reached: {}", stats.max_depth).unwrap();
            writeln!(s, "distinct variables: {}", stats.distinct_variables).unwrap();
            writeln!(s, "largest variable: {} terms", stats.max_terms).unwrap();
            s
        }
    };
    if !audit {
        return Ok(out);
    }
    let report = audit_graph(&graph)?;
    if format != Format::Text {
        // keep stdout machine-readable; the audit summary goes to stderr
        return if report.passed() {
            Ok(out)
        } else {
            Err(Failure {
                code: EXIT_INVALID,
                stdout: out,
                message: format!("audit: {} failure(s)", report.failures.len()),
            })
        };
    }
    if report.passed() {
        writeln!(
            out,
            "audit: passed ({} variables at {} nodes)",
            report.variables_checked, report.nodes
        )
        .unwrap();
        return Ok(out);
    }
    writeln!(out, "audit: {} failure(s)", report.failures.len()).unwrap();
    for f in &report.failures {
        let what = match &f.kind {
            AuditKind::NotLaurent => "not a Laurent polynomial in the initial cluster".to_string(),
            AuditKind::NotPositive => "negative coefficient".to_string(),
            AuditKind::NotBarInvariant => "not bar-invariant".to_string(),
            AuditKind::QuasiCommutation { with, expected, found } => format!(
                "quasi-commutation with x{with}: expected {expected}, found {}",
                found.map_or("none".to_string(), |c| c.to_string())
            ),
        };
        writeln!(out, "  node {}, x{}: {what}", f.node, f.index).unwrap();
    }
    Err(Failure {
        code: EXIT_INVALID,
        stdout: out,
        message: "audit failed".into(),
    })
}

/// The ledger in a file, or a zero-weight ledger with `Λ = -L` for a plain seed.
pub fn ledger_of(file: &SeedFile) -> qcluster::Result<MonoidalLedger> {
    if let Some(ledger) = file.ledger()? {
        return Ok(ledger);
    }
    let lattice = GramLattice::new(IntMatrix::from_rows(&[[2]])?)?;
    MonoidalLedger::new(
        file.indices.clone(),
        -&file.l_matrix()?,
        file.b.clone(),
        WeightData::zero(file.indices.len(), lattice),
    )
}

fn decat(path: &Path, k: usize) -> Run {
    let file = load(path)?;
    let ledger = ledger_of(&file)?;
    ledger.indices().ex_slot(k)?;
    let w = ledger.decat_verify(k)?;
    let mut out = String::new();
    writeln!(out, "direction {k}").unwrap();
    writeln!(out, "  m = {}, m' = {}", w.m, w.m_prime).unwrap();
    writeln!(out, "  zeta = {:?}", w.zeta).unwrap();
    if let Some(delta) = w.delta {
        writeln!(out, "  delta = {delta}").unwrap();
    }
    writeln!(out, "identity 1: {}", w.lhs1).unwrap();
    writeln!(out, "         = {}", w.rhs1).unwrap();
    writeln!(out, "identity 2: {}", w.lhs2).unwrap();
    writeln!(out, "         = {}", w.rhs2).unwrap();
    writeln!(out, "verified").unwrap();
    Ok(out)
}

/// Text rendering of a seed; frozen variables are marked with `*`.
pub fn render_seed(seed: &QuantumSeed) -> String {
    let idx = seed.indices();
    let mut out = String::new();
    writeln!(out, "history: {:?}", seed.history()).unwrap();
    writeln!(out, "exchangeable: {:?}  frozen*: {:?}", idx.ex_labels(), idx.fr_labels()).unwrap();
    writeln!(out, "d = {}", seed.pair().d()).unwrap();
    writeln!(out, "L =").unwrap();
    out.push_str(&seed.l().to_string());
    writeln!(out, "B =").unwrap();
    out.push_str(&seed.b().to_string());
    for (pos, x) in seed.vars().iter().enumerate() {
        let mark = if idx.is_exchangeable_at(pos) { " " } else { "*" };
        let n = x.term_count();
        writeln!(
            out,
            "x{}{mark} = {x}   [{n} term{}]",
            idx.label(pos),
            if n == 1 { "" } else { "s" }
        )
        .unwrap();
    }
    out
}

fn render_ledger(ledger: &MonoidalLedger) -> String {
    let mut out = String::from("Lambda =\n");
    out.push_str(&ledger.lambda().to_string());
    let labels = ledger.indices().labels();
    for (l, w) in labels.iter().zip(ledger.weights().weights()) {
        writeln!(out, "wt(M{l}) = {w:?}").unwrap();
    }
    out
}

fn serve(host: &str, port: u16) -> Outcome {
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_INVALID, String::new(), format!("error: {e}")),
    };
    let addr = format!("{host}:{port}");
    let result = runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, crate::server::router(crate::server::ServerConfig::default())).await
    });
    match result {
        Ok(()) => Outcome::ok(String::new()),
        Err(e) => Outcome::fail(EXIT_USAGE, String::new(), format!("error: cannot serve on {addr}: {e}")),
    }
}
