//! Batch experiment runner: expand sweeps, generate, measure, persist.

use crate::config::{ExperimentConfig, InstanceSource, SweepPoint};
use crate::formats::{self, GraphFormat};
use rayon::prelude::*;
use rtt_core::{
    alpha_r_with_budget, alpha_star_r_with_budget, max_tiling_with_budget, quasiperfect_gap,
    ConstructionSpec, Frac, Graph, Pattern,
};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Format(#[from] crate::formats::FormatError),
    #[error("bad pattern: {0}")]
    Pattern(#[from] rtt_core::PatternError),
    #[error("csv row {row}: {detail}")]
    Csv { row: usize, detail: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// One CSV row. Every numeric field is re-derivable from the sidecar graph
/// and the seed; `wall_time_ms` is the only non-reproducible column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRecord {
    pub spec: String,
    pub n: usize,
    pub min_degree: usize,
    pub alpha: usize,
    pub alpha_exact: bool,
    pub alpha_star: usize,
    pub copies: usize,
    pub uncovered: usize,
    pub allowance: usize,
    pub quasiperfect: bool,
    pub nodes: u64,
    pub wall_time_ms: u64,
    pub seed: u64,
    pub status: String,
}

pub const CSV_HEADER: &str = "spec,n,min_degree,alpha,alpha_exact,alpha_star,copies,uncovered,\
allowance,quasiperfect,nodes,wall_time_ms,seed,status";

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Splits one CSV line honoring double-quote escaping.
fn csv_split(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

impl ExperimentRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_quote(&self.spec),
            self.n,
            self.min_degree,
            self.alpha,
            self.alpha_exact,
            self.alpha_star,
            self.copies,
            self.uncovered,
            self.allowance,
            self.quasiperfect,
            self.nodes,
            self.wall_time_ms,
            self.seed,
            csv_quote(&self.status),
        )
    }

    pub fn from_csv_row(row: usize, line: &str) -> Result<Self, ExperimentError> {
        let fields = csv_split(line);
        if fields.len() != 14 {
            return Err(ExperimentError::Csv {
                row,
                detail: format!("expected 14 fields, found {}", fields.len()),
            });
        }
        let num = |i: usize| -> Result<u64, ExperimentError> {
            fields[i].parse().map_err(|_| ExperimentError::Csv {
                row,
                detail: format!("bad numeric field {:?}", fields[i]),
            })
        };
        let flag = |i: usize| -> Result<bool, ExperimentError> {
            fields[i].parse().map_err(|_| ExperimentError::Csv {
                row,
                detail: format!("bad boolean field {:?}", fields[i]),
            })
        };
        Ok(ExperimentRecord {
            spec: fields[0].clone(),
            n: num(1)? as usize,
            min_degree: num(2)? as usize,
            alpha: num(3)? as usize,
            alpha_exact: flag(4)?,
            alpha_star: num(5)? as usize,
            copies: num(6)? as usize,
            uncovered: num(7)? as usize,
            allowance: num(8)? as usize,
            quasiperfect: flag(9)?,
            nodes: num(10)?,
            wall_time_ms: num(11)?,
            seed: num(12)?,
            status: fields[13].clone(),
        })
    }

    /// Equality ignoring the wall-clock column, for golden-file comparisons.
    pub fn same_modulo_wall_time(&self, other: &ExperimentRecord) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.wall_time_ms = 0;
        b.wall_time_ms = 0;
        a == b
    }
}

fn failed_record(spec: String, seed: u64, detail: String) -> ExperimentRecord {
    ExperimentRecord {
        spec,
        n: 0,
        min_degree: 0,
        alpha: 0,
        alpha_exact: false,
        alpha_star: 0,
        copies: 0,
        uncovered: 0,
        allowance: 0,
        quasiperfect: false,
        nodes: 0,
        wall_time_ms: 0,
        seed,
        status: format!("error: {detail}"),
    }
}

fn try_measure(
    g: &Graph,
    f: &Pattern,
    eta: Frac,
    r: usize,
    budget: u64,
) -> Result<ExperimentRecord, String> {
    let min_degree = g.min_degree().map_err(|e| e.to_string())?;
    let alpha = alpha_r_with_budget(g, r, budget).map_err(|e| e.to_string())?;
    let alpha_star = alpha_star_r_with_budget(g, r, budget).map_err(|e| e.to_string())?;
    let outcome = max_tiling_with_budget(g, f, budget).map_err(|e| e.to_string())?;
    let gap = quasiperfect_gap(g, f, &outcome.tiling, eta).map_err(|e| e.to_string())?;
    let status = if outcome.optimal && alpha.exact && alpha_star.exact {
        "ok"
    } else {
        "budget-exhausted"
    };
    Ok(ExperimentRecord {
        spec: String::new(),
        n: g.n(),
        min_degree,
        alpha: alpha.value,
        alpha_exact: alpha.exact,
        alpha_star: alpha_star.value,
        copies: outcome.tiling.size(),
        uncovered: gap.uncovered,
        allowance: gap.allowance,
        quasiperfect: gap.quasiperfect,
        nodes: outcome.nodes,
        wall_time_ms: outcome.wall_time.as_millis() as u64,
        seed: 0,
        status: status.to_string(),
    })
}

/// Runs one sweep point against an already materialized graph.
pub fn measure_graph(
    g: &Graph,
    spec: String,
    f: &Pattern,
    eta: Frac,
    r: usize,
    budget: u64,
    seed: u64,
) -> ExperimentRecord {
    match try_measure(g, f, eta, r, budget) {
        Ok(mut record) => {
            record.spec = spec;
            record.seed = seed;
            record
        }
        Err(detail) => failed_record(spec, seed, detail),
    }
}

fn run_point(
    config: &ExperimentConfig,
    f: &Pattern,
    point: &SweepPoint,
) -> (ExperimentRecord, Option<Graph>) {
    let spec = config.substitute(point);
    let graph = match &config.source {
        InstanceSource::InputFile(path) => {
            let format = if path.extension().is_some_and(|e| e == "g6") {
                GraphFormat::Graph6
            } else {
                GraphFormat::EdgeList
            };
            formats::read_graph(path, format).map_err(|e| e.to_string())
        }
        InstanceSource::Construction(_) => ConstructionSpec::parse(&spec)
            .and_then(|s| s.generate().map(|(g, _)| g))
            .map_err(|e| e.to_string()),
    };
    match graph {
        Ok(g) => {
            let record = measure_graph(
                &g,
                spec,
                f,
                config.eta,
                config.r,
                config.solver_budget,
                point.seed,
            );
            (record, Some(g))
        }
        Err(detail) => (failed_record(spec, point.seed, detail), None),
    }
}

/// Expands the sweep, runs all points in parallel, and returns records in
/// sweep order together with the per-point graphs that materialized.
pub fn run_experiment(
    config: &ExperimentConfig,
) -> Result<Vec<(ExperimentRecord, Option<Graph>)>, ExperimentError> {
    let f = Pattern::parse(&config.pattern)?;
    let points = config.points();
    Ok(points
        .par_iter()
        .map(|point| run_point(config, &f, point))
        .collect())
}

/// Runs the experiment and persists the CSV plus one graph6 sidecar per row
/// (`<stem>.row<i>.g6` beside the CSV).
pub fn run_and_persist(
    config: &ExperimentConfig,
    out: &Path,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let results = run_experiment(config)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let dir = out.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut records = Vec::with_capacity(results.len());
    for (i, (record, graph)) in results.into_iter().enumerate() {
        csv.push_str(&record.to_csv_row());
        csv.push('\n');
        if let Some(g) = graph {
            let sidecar = dir.join(format!("{stem}.row{i}.g6"));
            formats::write_graph(&sidecar, &g, GraphFormat::Graph6)?;
        }
        records.push(record);
    }
    std::fs::write(out, csv).map_err(|source| ExperimentError::Io {
        path: out.display().to_string(),
        source,
    })?;
    Ok(records)
}

/// Loads a persisted CSV back into records.
pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        None => return Ok(Vec::new()),
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(ExperimentError::Csv {
                row: 1,
                detail: format!("schema mismatch: unexpected header {header:?}"),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| ExperimentRecord::from_csv_row(idx + 1, line))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_cliques_sweep_row() {
        let cfg = ExperimentConfig::parse(
            "construction = disjoint_cliques:sizes=8+8\npattern = K3\neta = 2/5\n",
        )
        .unwrap();
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        let record = &rows[0].0;
        assert_eq!(record.uncovered, 4);
        assert_eq!(record.allowance, 4);
        assert!(record.quasiperfect);
        assert_eq!(record.status, "ok");
        assert_eq!(record.uncovered % 3, record.n % 3);
    }

    #[test]
    fn csv_row_round_trip() {
        let record = ExperimentRecord {
            spec: "blocker:n=12,d=4,seed=0".to_string(),
            n: 12,
            min_degree: 3,
            alpha: 5,
            alpha_exact: true,
            alpha_star: 2,
            copies: 3,
            uncovered: 3,
            allowance: 2,
            quasiperfect: false,
            nodes: 123,
            wall_time_ms: 9,
            seed: 0,
            status: "ok".to_string(),
        };
        let back = ExperimentRecord::from_csv_row(2, &record.to_csv_row()).unwrap();
        assert_eq!(back, record);
    }

    #[test]
    fn persist_and_reload() {
        let dir = std::env::temp_dir().join("rtt_experiment_test");
        let out = dir.join("rows.csv");
        let cfg = ExperimentConfig::parse(
            "construction = disjoint_cliques:sizes={s}+{s}\npattern = K3\neta = 2/5\nsweep s = 5 8\n",
        )
        .unwrap();
        let records = run_and_persist(&cfg, &out).unwrap();
        let reloaded = read_records(&out).unwrap();
        assert_eq!(records, reloaded);
        for (i, record) in records.iter().enumerate() {
            let g = formats::read_graph(&dir.join(format!("rows.row{i}.g6")), GraphFormat::Graph6)
                .unwrap();
            assert_eq!(g.n(), record.n);
        }
    }

    #[test]
    fn failed_points_are_recorded_not_fatal() {
        let cfg = ExperimentConfig::parse(
            "construction = disjoint_cliques:sizes={s}\npattern = K3\neta = 1/2\nsweep s = 6 nonsense\n",
        )
        .unwrap();
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].0.status, "ok");
        assert!(rows[1].0.status.starts_with("error:"), "{}", rows[1].0.status);
    }
}
