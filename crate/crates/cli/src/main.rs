mod cache;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffhyper_core::hypergraph::Budget;

use cache::{Cache, Entry};
use commands::{CliError, Output};

const CACHE_ENV: &str = "FFHYPER_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "ffhyper", version, about = "Quadratic-residue hypergraphs of symmetric polynomials over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Maximum tuples an exhaustive loop may visit (search nodes for `clique`).
    #[arg(long = "budget-tuples", global = true, default_value_t = Budget::default().tuples,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget_tuples: u64,
    /// Maximum bytes for an eager edge bitset.
    #[arg(long = "budget-mem", global = true, default_value_t = Budget::default().mem_bytes,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget_mem: u64,
    /// Output format; `scan` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Result cache directory (falls back to $FFHYPER_CACHE_DIR).
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exhaustive count over distinct tuples.
    Direct,
    /// Character sum over all of F^{2k}.
    Naive,
    /// Character sum as a sum of squares over F^{2k-2}.
    Factored,
    /// Direct count and factored character sum, with an agreement check.
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// Field: `p`, `q`, `p^n` or `p^n:c0,c1,...,1`.
    #[arg(long)]
    pub field: String,
    /// Symmetric polynomial in x1..xk, e.g. "x1*x2+1".
    #[arg(long)]
    pub poly: String,
    /// Number of variables, when larger than the highest index used.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct EpoArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long, required_unless_present = "paley", conflicts_with = "paley")]
    pub poly: Option<String>,
    /// Use f = x1 + ... + xk.
    #[arg(long)]
    pub paley: bool,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    pub method: Method,
}

#[derive(Args, Debug, Clone)]
pub struct TuplesArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Subset size, at least k.
    #[arg(long)]
    pub m: usize,
}

#[derive(Args, Debug, Clone)]
pub struct WeilArgs {
    #[arg(long)]
    pub field: String,
    /// Monic univariate g in x1; without it, `--s` random instances are checked.
    #[arg(long)]
    pub poly: Option<String>,
    /// Nonzero multiplier a.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Number of random instances.
    #[arg(long, default_value_t = 100)]
    pub s: usize,
    /// Maximum degree of random instances.
    #[arg(long, default_value_t = 6)]
    pub d: u32,
}

#[derive(Args, Debug, Clone)]
pub struct SlavovArgs {
    #[arg(long)]
    pub field: String,
    /// One polynomial per flag; all share the variables x1..xm.
    #[arg(long, required = true)]
    pub poly: Vec<String>,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Comma-separated fields.
    #[arg(long, default_value = "5,7,9,11,13")]
    pub field: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Degree of the random polynomials.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Subset size for the tuple counts (default k + 1).
    #[arg(long)]
    pub m: Option<usize>,
    /// Admissible samples per field.
    #[arg(long, default_value_t = 50)]
    pub s: usize,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Comma-separated check groups to run.
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Decide admissibility of a symmetric polynomial.
    Admissible(PolyArgs),
    /// Count labeled even partial octahedra.
    Epo(EpoArgs),
    /// Count m-subsets all of whose k-subsets are edges.
    Tuples(TuplesArgs),
    /// Clique number by branch and bound.
    Clique(PolyArgs),
    /// Check the Weil bound for sum chi(a g(x)).
    Weil(WeilArgs),
    /// Enumerate the exceptional set X.
    Xset(PolyArgs),
    /// Enumerate the exceptional product set B.
    Bset(PolyArgs),
    /// Count points where every polynomial is a nonzero square.
    Slavov(SlavovArgs),
    /// Sweep random admissible polynomials over several fields (CSV).
    Scan(ScanArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Admissible(_) => "admissible",
            Command::Epo(_) => "epo",
            Command::Tuples(_) => "tuples",
            Command::Clique(_) => "clique",
            Command::Weil(_) => "weil",
            Command::Xset(_) => "xset",
            Command::Bset(_) => "bset",
            Command::Slavov(_) => "slavov",
            Command::Scan(_) => "scan",
            Command::Verify(_) => "verify",
        }
    }
}

fn run(cli: &Cli) -> Result<Entry, CliError> {
    let g = &cli.global;
    let budget = Budget { tuples: g.budget_tuples, mem_bytes: g.budget_mem };
    let format = g.format.unwrap_or(match cli.command {
        Command::Scan(_) => Format::Csv,
        _ => Format::Json,
    });
    let ctx = commands::Context { seed: g.seed, budget, workers: g.workers.map(|w| w as usize), format };
    let request = commands::canonical_request(cli.command.name(), &command_args(&cli.command), &ctx)?;
    let cache = match (&request, g.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))) {
        (Some(_), Some(dir)) => Some(Cache::new(&dir)),
        _ => None,
    };
    let key = request.as_ref().map(|parts| {
        let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
        cache::key(&refs)
    });
    if let (Some(cache), Some(key)) = (&cache, &key) {
        if let Some(hit) = cache.get(key) {
            return Ok(hit);
        }
    }
    let out: Output = match &cli.command {
        Command::Admissible(a) => commands::admissible(a, &ctx)?,
        Command::Epo(a) => commands::epo(a, &ctx)?,
        Command::Tuples(a) => commands::tuples(a, &ctx)?,
        Command::Clique(a) => commands::clique(a, &ctx)?,
        Command::Weil(a) => commands::weil(a, &ctx)?,
        Command::Xset(a) => commands::xset(a, &ctx)?,
        Command::Bset(a) => commands::bset(a, &ctx)?,
        Command::Slavov(a) => commands::slavov(a, &ctx)?,
        Command::Scan(a) => commands::scan(a, &ctx)?,
        Command::Verify(a) => commands::verify(a, &ctx)?,
    };
    let entry = Entry { output: out.render(format)?, pass: out.pass };
    if let (Some(cache), Some(key)) = (&cache, &key) {
        cache.put(key, &entry);
    }
    Ok(entry)
}

/// The command's own arguments, for the cache key.
fn command_args(c: &Command) -> commands::Request {
    use commands::Request as R;
    match c {
        Command::Admissible(a) | Command::Clique(a) | Command::Xset(a) | Command::Bset(a) => R::Poly(a.clone()),
        Command::Epo(a) => R::Epo(a.clone()),
        Command::Tuples(a) => R::Tuples(a.clone()),
        Command::Weil(a) => R::Weil(a.clone()),
        Command::Slavov(a) => R::Slavov(a.clone()),
        Command::Scan(a) => R::Scan(a.clone()),
        Command::Verify(_) => R::Uncached,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.global.workers {
        // a second initialisation can only fail if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global();
    }
    match run(&cli) {
        Ok(entry) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &entry.output),
                None => std::io::stdout().write_all(entry.output.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if entry.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
