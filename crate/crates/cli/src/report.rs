//! Plain-text tables and a minimal SVG scatter over persisted records.

use crate::experiment::ExperimentRecord;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Family key: the construction name up to the first `:`.
fn family(record: &ExperimentRecord) -> String {
    record
        .spec
        .split(':')
        .next()
        .unwrap_or("unknown")
        .to_string()
}

/// Three-way factor column: a perfect tiling is "yes", a certified-optimal
/// short tiling is "no", and a budget-exhausted row stays "unknown".
fn factor_column(record: &ExperimentRecord) -> &'static str {
    if record.status.starts_with("error") {
        "error"
    } else if record.copies > 0 || record.n == 0 {
        if record.uncovered == 0 {
            "yes"
        } else if record.status == "ok" {
            "no"
        } else {
            "unknown"
        }
    } else if record.status == "ok" {
        "no"
    } else {
        "unknown"
    }
}

/// Renders the per-row table plus a per-family aggregate of uncovered
/// vertices versus n.
pub fn text_report(records: &[ExperimentRecord]) -> String {
    let mut out = String::new();
    if records.is_empty() {
        return out;
    }
    let _ = writeln!(
        out,
        "{:<40} {:>5} {:>6} {:>9} {:>9} {:>12} {:>7}",
        "spec", "n", "delta", "uncovered", "allowance", "quasiperfect", "factor"
    );
    for record in records {
        let _ = writeln!(
            out,
            "{:<40} {:>5} {:>6} {:>9} {:>9} {:>12} {:>7}",
            record.spec,
            record.n,
            record.min_degree,
            record.uncovered,
            record.allowance,
            record.quasiperfect,
            factor_column(record),
        );
    }
    let mut groups: BTreeMap<(String, usize), Vec<usize>> = BTreeMap::new();
    for record in records.iter().filter(|r| !r.status.starts_with("error")) {
        groups
            .entry((family(record), record.n))
            .or_default()
            .push(record.uncovered);
    }
    if !groups.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<24} {:>5} {:>5} {:>14} {:>14}",
            "family", "n", "rows", "min uncovered", "max uncovered"
        );
        for ((name, n), uncovered) in groups {
            let _ = writeln!(
                out,
                "{:<24} {:>5} {:>5} {:>14} {:>14}",
                name,
                n,
                uncovered.len(),
                uncovered.iter().min().unwrap(),
                uncovered.iter().max().unwrap(),
            );
        }
    }
    out
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Hand-rolled SVG scatter of uncovered vertices versus n, one color per
/// construction family.
pub fn svg_scatter(records: &[ExperimentRecord]) -> String {
    let (w, h, margin) = (480.0, 320.0, 48.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">"
    );
    let live: Vec<&ExperimentRecord> = records
        .iter()
        .filter(|r| !r.status.starts_with("error"))
        .collect();
    let max_n = live.iter().map(|r| r.n).max().unwrap_or(1).max(1) as f64;
    let max_u = live.iter().map(|r| r.uncovered).max().unwrap_or(1).max(1) as f64;
    let x = |n: usize| margin + (w - 2.0 * margin) * n as f64 / max_n;
    let y = |u: usize| h - margin - (h - 2.0 * margin) * u as f64 / max_u;
    let _ = writeln!(
        out,
        "  <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n  \
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>",
        m = margin,
        b = h - margin,
        r = w - margin,
        t = margin,
    );
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\">n</text>\n  \
         <text x=\"8\" y=\"{}\" font-size=\"12\">uncovered</text>",
        w - margin + 6.0,
        h - margin + 4.0,
        margin - 8.0,
    );
    let mut colors: BTreeMap<String, &str> = BTreeMap::new();
    for record in &live {
        let name = family(record);
        let next = PALETTE[colors.len() % PALETTE.len()];
        let color = *colors.entry(name).or_insert(next);
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{}\"/>",
            x(record.n),
            y(record.uncovered),
            color,
        );
    }
    for (i, (name, color)) in colors.iter().enumerate() {
        let ly = margin + 14.0 * i as f64;
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.1}\" cy=\"{ly:.1}\" r=\"3\" fill=\"{color}\"/>\n  \
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{name}</text>",
            w - margin - 110.0,
            w - margin - 102.0,
            ly + 4.0,
        );
    }
    out.push_str("</svg>\n");
    out
}
