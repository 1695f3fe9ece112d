use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use normchain::cache::Cache;
use normchain::{columns, record, render};
use normchain_core::chain::{CentralizerMethod, ChainRecord, Engine, EngineConfig, DEFAULT_K_MAX};
use normchain_core::constructions::NamedGroup;
use normchain_core::imprimitivity::canonical_chain;
use normchain_core::perm::{cycle_lines, Permutation};
use normchain_core::sequences::{build_tables, CellVerdict};
use normchain_core::verify::{self, DEFAULT_SEED};
use normchain_core::{Depth, Portrait};

#[derive(Parser, Debug)]
#[command(name = "normchain", version, about = "Normalizer chains in the Sylow 2-subgroup of Sym(2^n)")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Debug)]
struct Opts {
    /// Depth at or below which groups are handled by enumeration (2..4).
    #[arg(long, global = true, default_value_t = 3)]
    base_depth: u32,
    /// Largest log2 order that may be enumerated element by element.
    #[arg(long, global = true, default_value_t = 22)]
    enum_bound: u32,
    /// Largest log2 size of a quotient table.
    #[arg(long, global = true, default_value_t = 26)]
    quotient_bound: u32,
    /// How section centralizers are computed.
    #[arg(long, global = true, value_enum, default_value_t = Method::Table)]
    centralizer: Method,
    /// Cache directory [default: $NORMCHAIN_CACHE_DIR, then the user cache dir].
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write cached results.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for `table` [default: available cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Last chain step to compute.
    #[arg(long, global = true, default_value_t = DEFAULT_K_MAX)]
    k_max: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Table,
    Layered,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TreeFormat {
    Dot,
    Table,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// One column of the table: the chain N^0 <= N^1 <= ... at depth n.
    Chain {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Several columns side by side.
    Table {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 7)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Runs one named check.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(verify::CHECKS))]
        check: String,
        #[arg(long)]
        n: u32,
    },
    /// The partition-counting sequences b_j and a_j.
    Seq {
        #[arg(long, default_value_t = 14)]
        max_j: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// The tree of the canonical imprimitivity chain.
    Tree {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = TreeFormat::Dot)]
        format: TreeFormat,
    },
    /// Evaluates a product of permutations in cycle notation on 2^n points.
    Element {
        expr: String,
        #[arg(long)]
        n: u32,
    },
    /// Prints generators in cycle notation, one per line.
    ///
    /// Keys: T, U, Sigma, Q, Trivial (with --n), T:n, T:n:i, U:n, Sigma:n,
    /// Q:n, Ztheta:n:h, and N:n:k for a chain cell.
    Export {
        key: String,
        #[arg(long)]
        n: Option<u32>,
    },
}

impl Opts {
    fn config(&self) -> Result<EngineConfig> {
        let cfg = EngineConfig {
            base_depth: self.base_depth,
            enum_bound_log2: self.enum_bound,
            quotient_bound_log2: self.quotient_bound,
            centralizer: match self.centralizer {
                Method::Table => CentralizerMethod::QuotientTable,
                Method::Layered => CentralizerMethod::Layered,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn cache(&self) -> Option<Cache> {
        (!self.no_cache).then(|| Cache::locate(self.cache_dir.clone()))
    }

    fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

/// A record is good when every cell was computed and none contradicts its prediction.
fn record_ok(r: &ChainRecord) -> bool {
    !r.failed() && r.entries.iter().all(|e| !matches!(e.verdict, CellVerdict::Mismatch))
}

fn render_records(rs: &[ChainRecord], format: Format, k_max: u32) -> Result<String> {
    Ok(match format {
        Format::Table if rs.len() == 1 => render::column(&rs[0]),
        Format::Table => render::table(rs, k_max),
        Format::Json if rs.len() == 1 => record::to_json(&rs[0]) + "\n",
        Format::Json => record::many_to_json(rs) + "\n",
        Format::Csv => record::to_csv(rs)?,
    })
}

fn export(key: &str, n: Option<u32>, opts: &Opts) -> Result<String> {
    let parts: Vec<&str> = key.split(':').collect();
    let gens: Vec<Portrait> = if parts[0] == "N" {
        let (n, k) = match (parts.as_slice(), n) {
            ([_, n, k], _) => (n.parse::<u32>()?, k.parse::<u32>()?),
            ([_, k], Some(n)) => (n, k.parse::<u32>()?),
            _ => bail!("expected N:n:k, or N:k together with --n"),
        };
        let groups = Engine::new(opts.config()?)?.chain_groups(n, k)?;
        let Some(g) = groups.get(k as usize) else {
            bail!("the chain at n={n} is stable before step {k}; N^{k} = N^{}", groups.len() - 1)
        };
        g.generators().cloned().collect()
    } else {
        let full = match n {
            Some(n) if parts.len() == 1 => format!("{key}:{n}"),
            _ => key.to_string(),
        };
        NamedGroup::parse(&full)?.defining_generators()?
    };
    let perms: Vec<Permutation> = gens.iter().map(Portrait::to_permutation).collect();
    Ok(cycle_lines(&perms))
}

fn run(cli: Cli, out: &mut String) -> Result<bool> {
    let opts = &cli.opts;
    match cli.cmd {
        Cmd::Chain { n, format } => {
            let cfg = opts.config()?;
            let cache = opts.cache();
            let r = columns::column(&cfg, n, opts.k_max, cache.as_ref())?;
            write!(out, "{}", render_records(std::slice::from_ref(&r), format, opts.k_max)?)?;
            Ok(record_ok(&r))
        }
        Cmd::Table { n_min, n_max, format } => {
            if n_min > n_max {
                bail!("--n-min {n_min} is larger than --n-max {n_max}");
            }
            let cfg = opts.config()?;
            let cache = opts.cache();
            let ns: Vec<u32> = (n_min..=n_max).collect();
            let mut rs = Vec::new();
            for (n, r) in ns.iter().zip(columns::columns(&cfg, &ns, opts.k_max, opts.jobs(), cache.as_ref())) {
                rs.push(r.with_context(|| format!("column n={n}"))?);
            }
            if format == Format::Table {
                write!(out, "{}", render::table(&rs, opts.k_max))?;
            } else {
                write!(out, "{}", render_records(&rs, format, opts.k_max)?)?;
            }
            Ok(rs.iter().all(record_ok))
        }
        Cmd::Verify { check, n } => {
            let mut engine = Engine::new(opts.config()?)?;
            let rep = verify::run_check(&check, n, &mut engine, opts.seed)?;
            writeln!(out, "{} n={}: {}", rep.check, rep.n, if rep.passed { "PASS" } else { "FAIL" })?;
            for line in &rep.lines {
                writeln!(out, "  {line}")?;
            }
            Ok(rep.passed)
        }
        Cmd::Seq { max_j, format } => {
            let t = build_tables(max_j);
            match format {
                Format::Table => write!(out, "{}", render::sequences(&t))?,
                Format::Json => writeln!(out, "{}", record::seq_json(&t))?,
                Format::Csv => write!(out, "{}", record::seq_csv(&t)?)?,
            }
            Ok(true)
        }
        Cmd::Tree { n, format } => {
            Depth::new(n)?;
            let tree = canonical_chain(n).tree();
            match format {
                TreeFormat::Dot => write!(out, "{}", render::tree_dot(&tree, n))?,
                TreeFormat::Table => write!(out, "{}", render::tree_outline(&tree))?,
            }
            Ok(true)
        }
        Cmd::Element { expr, n } => {
            let depth = Depth::new(n)?;
            let p = Permutation::evaluate(&expr, 1usize << n)?;
            writeln!(out, "{p}")?;
            match Portrait::from_permutation(&p, depth) {
                Ok(q) => writeln!(out, "in Sigma_{n}, portrait {}", q.to_hex())?,
                Err(_) => writeln!(out, "not in Sigma_{n}")?,
            }
            Ok(true)
        }
        Cmd::Export { key, n } => {
            writeln!(out, "{}", export(&key, n, opts)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    // a closed pipe (`| head`) is not an error
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
