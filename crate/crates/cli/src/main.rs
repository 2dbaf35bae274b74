use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ekrlab_core::corpus::random_permutation;
use ekrlab_core::family_io::write_family_file;
use ekrlab_core::search::{ff_crossover_scan, solve, ProblemKind, SearchLimits, SearchProblem};
use ekrlab_core::suite::{
    records_csv, registry, resolve_suite, rows_csv, run_check, run_suite, search_csv, theorem_csv, verify_theorem,
    Context, Overrides, Status, TheoremId, TheoremStatus,
};

#[derive(Parser)]
#[command(name = "ekrlab", version, about = "Exact checks and extremal search for intersecting families")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for searches and suites.
    #[arg(long, global = true, env = "EKRLAB_WORKERS")]
    workers: Option<usize>,
    /// Node budget per search.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Wall-clock budget per search, in seconds.
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,
    /// Working precision (bits) for transcendental comparisons.
    #[arg(long, global = true)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run one checker: `ekrlab check check_russo n=6 f='or(1,2)' p=1/3`.
    Check {
        checker: String,
        /// Parameters as key=value.
        params: Vec<String>,
    },
    /// List the registered checkers and their parameters.
    Checkers,
    /// Run a suite file, or the built-in `paper-tools` suite.
    Suite {
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exhaustive extremal search.
    Search {
        /// intersecting | union | matching (or the full operation names).
        problem: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Number of intersecting families (union).
        #[arg(long)]
        r: Option<u32>,
        /// Matching number bound (matching).
        #[arg(long)]
        s: Option<u32>,
        /// Report every optimal family up to isomorphism.
        #[arg(long)]
        all_witnesses: bool,
        /// Relabel the ground set with a seeded random permutation first.
        #[arg(long)]
        relabel_seed: Option<u64>,
        /// Write each witness as a family file `witness-<i>.fam` in this directory.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Compare an extremal search with its closed formula.
    Theorem {
        /// ekr | ff-union | main-union | matching
        id: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
    },
    /// Tabulations.
    Scan {
        #[command(subcommand)]
        what: Scan,
    },
}

#[derive(Subcommand)]
enum Scan {
    /// Frankl–Füredi level sizes against the OR bound and the search optimum.
    Ff {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        r: u32,
        /// Range of n, `lo..hi` inclusive or a single value.
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "1..3")]
        t: String,
        /// Also run the union search at each n.
        #[arg(long)]
        search: bool,
    },
}

fn parse_range(s: &str) -> Result<Vec<u32>> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim_start_matches('=').trim().parse()?),
        None => {
            let v = s.trim().parse()?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range `{s}`");
    }
    Ok((lo..=hi).collect())
}

impl Global {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_nodes: self.budget_nodes,
            max_seconds: self.budget_seconds,
            workers: self.workers.unwrap_or(1),
            ..SearchLimits::default()
        }
    }

    fn context(&self) -> Context {
        let mut ctx = Context { limits: self.limits(), ..Context::default() };
        if let Some(p) = self.precision {
            ctx.precision_bits = p;
        }
        ctx
    }
}

fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let newline = if text.ends_with('\n') { "" } else { "\n" };
    // A closed pipe (`| head`) is not an error worth reporting.
    let _ = write!(out, "{text}{newline}").and_then(|_| out.flush());
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    match cli.command {
        Command::Check { checker, params } => {
            let mut map = BTreeMap::new();
            for p in params {
                let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("parameter `{p}` is not key=value"))?;
                map.insert(k.trim().to_string(), v.to_string());
            }
            let record = run_check(&checker, map, &g.context())?;
            emit(&match g.format {
                Format::Json => json(&record)?,
                Format::Csv => records_csv(std::slice::from_ref(&record))?,
            });
            Ok(match record.verdict {
                Status::Holds | Status::Value => 0,
                Status::Fails | Status::Indeterminate => 1,
                Status::Error => 2,
            })
        }
        Command::Checkers => {
            let list: Vec<_> = registry()
                .iter()
                .map(|c| serde_json::json!({ "id": c.id, "params": c.params, "summary": c.summary }))
                .collect();
            match g.format {
                Format::Json => emit(&json(&list)?),
                Format::Csv => {
                    let mut out = String::from("id,params,summary\n");
                    for c in registry() {
                        out.push_str(&format!("{},{},\"{}\"\n", c.id, c.params.join(" "), c.summary.replace('"', "'")));
                    }
                    emit(&out);
                }
            }
            Ok(0)
        }
        Command::Suite { spec, seed } => {
            let (mut suite, dir) = resolve_suite(&spec).with_context(|| format!("loading suite `{spec}`"))?;
            suite.apply(&Overrides {
                seed,
                precision_bits: g.precision,
                max_nodes: g.budget_nodes,
                max_seconds: g.budget_seconds,
                workers: g.workers,
            });
            let report = run_suite(&suite, &dir)?;
            emit(&match g.format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            });
            Ok(report.exit_code() as u8)
        }
        Command::Search { problem, n, k, r, s, all_witnesses, relabel_seed, witness_dir } => {
            let need = |v: Option<u32>, name: &str| v.ok_or_else(|| anyhow!("this problem needs --{name}"));
            let kind = match problem.replace('-', "_").as_str() {
                "intersecting" | "max_intersecting" | "ekr" => ProblemKind::MaxIntersecting { n, k },
                "union" | "max_union_intersecting" => ProblemKind::MaxUnionIntersecting { n, k, r: need(r, "r")? },
                "matching" | "max_bounded_matching" => ProblemKind::MaxBoundedMatching { n, k, s: need(s, "s")? },
                other => bail!("unknown problem `{other}` (intersecting, union, matching)"),
            };
            let limits = SearchLimits {
                all_witnesses,
                relabel: relabel_seed.map(|seed| random_permutation(n, seed)),
                ..g.limits()
            };
            let out = solve(&SearchProblem { kind, limits })?;
            if let Some(dir) = witness_dir {
                std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for (i, w) in out.witnesses.iter().enumerate() {
                    write_family_file(&dir.join(format!("witness-{}.fam", i + 1)), w.family())?;
                }
            }
            emit(&match g.format {
                Format::Json => json(&out)?,
                Format::Csv => search_csv(&out)?,
            });
            Ok(if out.complete { 0 } else { 1 })
        }
        Command::Theorem { id, n, k, r, s } => {
            let id: TheoremId = id.parse()?;
            let report = verify_theorem(id, n, k, r.or(s), &g.limits())?;
            emit(&match g.format {
                Format::Json => json(&report)?,
                Format::Csv => theorem_csv(&report)?,
            });
            Ok(match report.status {
                TheoremStatus::Contradicted | TheoremStatus::Incomplete => 1,
                _ => 0,
            })
        }
        Command::Scan { what: Scan::Ff { k, r, n, t, search } } => {
            let rows = ff_crossover_scan(k, r, parse_range(&n)?, &parse_range(&t)?, search, &g.limits())?;
            emit(&match g.format {
                Format::Json => json(&rows)?,
                Format::Csv => rows_csv(&rows)?,
            });
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
