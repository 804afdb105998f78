use clap::{Parser, Subcommand};
use rtt_cli::{config::ExperimentConfig, formats, report};
use rtt_core::{
    alpha_r_with_budget, alpha_star_r_with_budget, initial_partition, max_tiling_with_budget,
    merge_partition, montgomery_template, quasiperfect_gap, verify_absorber, ConstructionSpec,
    Frac, Pattern, Verdict, VertexSet,
};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "rtt", about = "Desk-scale tiling threshold laboratory")]
struct Cli {
    /// Seed for seeded subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Solver node budget.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Graph file format: graph6 | edge-list.
    #[arg(long, global = true, default_value = "graph6")]
    format: String,
    /// Output path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a construction and write the graph.
    Generate {
        /// Construction literal, e.g. `g0:n=20,eta=1/2`.
        spec: String,
    },
    /// Solve the maximum tiling on a graph file.
    Solve {
        input: PathBuf,
        /// Pattern literal, e.g. K3, C5, P4.
        #[arg(long, default_value = "K3")]
        pattern: String,
        /// Quasiperfectness parameter eta as p/q.
        #[arg(long, default_value = "1/2")]
        eta: String,
    },
    /// Compute alpha_r and alpha*_r on a graph file.
    Alpha {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Check the absorber property of a vertex set for a given target set.
    VerifyAbsorber {
        input: PathBuf,
        #[arg(long, default_value = "K3")]
        pattern: String,
        /// Absorber vertices, comma-separated.
        #[arg(long)]
        absorber: String,
        /// Target set S, comma-separated.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Build and verify an absorption template.
    Template {
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Flexibility ratio beta as p/q.
        #[arg(long, default_value = "1/2")]
        beta: String,
    },
    /// Partition a graph and merge parts via transferrals.
    Merge {
        input: PathBuf,
        #[arg(long, default_value = "K3")]
        pattern: String,
        /// Edge sampling density delta as p/q.
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Run a sweep described by a config file and persist CSV rows.
    Experiment { config: PathBuf },
    /// Summarize a persisted CSV; `--out` writes an SVG scatter.
    Report { input: PathBuf },
}

fn parse_frac(s: &str) -> Result<Frac, String> {
    let bad = || format!("bad rational {s:?}");
    match s.split_once('/') {
        Some((p, q)) => Ok(Frac::new(
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok(Frac::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_vertex_list(s: &str, n: usize) -> Result<VertexSet, String> {
    let mut set = VertexSet::empty(n);
    for tok in s.split(',').filter(|t| !t.trim().is_empty()) {
        let v: usize = tok
            .trim()
            .parse()
            .map_err(|_| format!("bad vertex {tok:?}"))?;
        if v >= n {
            return Err(format!("vertex {v} out of range for n = {n}"));
        }
        set.insert(v);
    }
    Ok(set)
}

fn run(cli: Cli) -> Result<u8, String> {
    let format: formats::GraphFormat = cli.format.parse().map_err(|e| format!("{e}"))?;
    match cli.command {
        Command::Generate { spec } => {
            let parsed = ConstructionSpec::parse(&spec).map_err(|e| e.to_string())?;
            let (g, record) = parsed.generate().map_err(|e| e.to_string())?;
            let notes = record.render();
            if !notes.is_empty() {
                print!("{notes}");
            }
            println!("n = {}, edges = {}", g.n(), g.edge_count());
            if let Some(out) = cli.out {
                formats::write_graph(&out, &g, format).map_err(|e| e.to_string())?;
                println!("wrote {}", out.display());
            }
            Ok(0)
        }
        Command::Solve {
            input,
            pattern,
            eta,
        } => {
            let g = formats::read_graph(&input, format).map_err(|e| e.to_string())?;
            let f = Pattern::parse(&pattern).map_err(|e| e.to_string())?;
            let eta = parse_frac(&eta)?;
            let outcome = max_tiling_with_budget(&g, &f, cli.budget).map_err(|e| e.to_string())?;
            let gap =
                quasiperfect_gap(&g, &f, &outcome.tiling, eta).map_err(|e| e.to_string())?;
            println!(
                "copies = {}, uncovered = {}, allowance = {}, quasiperfect = {}, optimal = {}, \
                 nodes = {}",
                outcome.tiling.size(),
                gap.uncovered,
                gap.allowance,
                gap.quasiperfect,
                outcome.optimal,
                outcome.nodes,
            );
            Ok(if outcome.optimal { 0 } else { EXIT_BUDGET })
        }
        Command::Alpha { input, r } => {
            let g = formats::read_graph(&input, format).map_err(|e| e.to_string())?;
            let a = alpha_r_with_budget(&g, r, cli.budget).map_err(|e| e.to_string())?;
            let astar = alpha_star_r_with_budget(&g, r, cli.budget).map_err(|e| e.to_string())?;
            println!(
                "alpha_{r} = {} (exact = {}), alpha*_{r} = {} (exact = {})",
                a.value, a.exact, astar.value, astar.exact
            );
            Ok(if a.exact && astar.exact { 0 } else { EXIT_BUDGET })
        }
        Command::VerifyAbsorber {
            input,
            pattern,
            absorber,
            target,
            t,
        } => {
            let g = formats::read_graph(&input, format).map_err(|e| e.to_string())?;
            let f = Pattern::parse(&pattern).map_err(|e| e.to_string())?;
            let a = parse_vertex_list(&absorber, g.n())?;
            let s = parse_vertex_list(&target, g.n())?;
            let verdict = verify_absorber(&g, &f, &s, &a, t).map_err(|e| e.to_string())?;
            println!("absorber verdict: {verdict:?}");
            Ok(match verdict {
                Verdict::Yes => 0,
                Verdict::No => EXIT_VERIFY,
                Verdict::Unknown => EXIT_BUDGET,
            })
        }
        Command::Template { m, beta } => {
            let beta = parse_frac(&beta)?;
            let template = montgomery_template(m, beta, cli.seed).map_err(|e| e.to_string())?;
            println!(
                "m = {}, |X| = {}, |Y| = {}, |Z| = {}, max_degree = {}, exhaustive = {}",
                template.m,
                template.x_size,
                template.y_size,
                template.z_size,
                template.max_degree,
                template.verified_exhaustive,
            );
            Ok(0)
        }
        Command::Merge {
            input,
            pattern,
            delta,
            t,
        } => {
            let g = formats::read_graph(&input, format).map_err(|e| e.to_string())?;
            let f = Pattern::parse(&pattern).map_err(|e| e.to_string())?;
            let delta = parse_frac(&delta)?;
            let partition =
                initial_partition(&g, &f, delta, t, 10_000).map_err(|e| e.to_string())?;
            println!("initial parts: {}", partition.parts().len());
            let (merged, log) =
                merge_partition(&g, &f, &partition, 1).map_err(|e| e.to_string())?;
            for record in &log {
                println!(
                    "merged parts {} <- {} (strengths {}, {})",
                    record.merged.0, record.merged.1, record.s_strength, record.t_strength
                );
            }
            println!("final parts: {}", merged.parts().len());
            Ok(0)
        }
        Command::Experiment { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text).map_err(|e| e.to_string())?;
            let out = cli.out.unwrap_or_else(|| cfg.output.clone());
            let records = rtt_cli::run_and_persist(&cfg, &out).map_err(|e| e.to_string())?;
            println!("wrote {} rows to {}", records.len(), out.display());
            let exhausted = records.iter().any(|r| r.status == "budget-exhausted");
            let failed = records.iter().any(|r| r.status.starts_with("error"));
            Ok(if failed {
                EXIT_VERIFY
            } else if exhausted {
                EXIT_BUDGET
            } else {
                0
            })
        }
        Command::Report { input } => {
            let records = rtt_cli::read_records(&input).map_err(|e| e.to_string())?;
            print!("{}", report::text_report(&records));
            if let Some(out) = cli.out {
                std::fs::write(&out, report::svg_scatter(&records))
                    .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
                println!("wrote {}", out.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests print and succeed; real usage errors
            // exit 1 per the contract.
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if benign { 0 } else { EXIT_USAGE });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
