//! Plain-text tables. Presentational only; the JSON output is the contract.

use motivic_core::atinfinity::{HomologyAtInfinity, RzTerm};
use motivic_core::mumford::LinkResult;
use serde_json::Value;
use std::fmt::{Display, Write};

pub fn matrix<T: Display>(labels: &[&str], rows: &[Vec<T>]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let label_w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let w = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        let label = labels.get(i).copied().unwrap_or("");
        let _ = write!(out, "{label:<label_w$} |");
        for c in row {
            let _ = write!(out, " {c:>w$}");
        }
        out.push('\n');
    }
    out
}

pub fn diagonal<T: Display>(d: &[T]) -> String {
    let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
    format!("diag({})\n", parts.join(", "))
}

pub fn link(r: &LinkResult) -> String {
    match r {
        LinkResult::Resolved(d) => format!("{}\n", d.expression),
        LinkResult::Unresolved(u) => {
            let mut out = format!("unresolved: {}\n", u.reason);
            let _ = writeln!(out, "point motives: {}", u.point_motives);
            let _ = writeln!(out, "vertex column: {}", u.vertex_column);
            if let Some(a) = &u.artin_part {
                let _ = writeln!(out, "artin part: {a}");
            }
            out
        }
    }
}

pub fn homology(h: &HomologyAtInfinity) -> String {
    let mut out = String::new();
    for (i, pieces) in h.hm.iter().enumerate() {
        let parts: Vec<String> = pieces
            .iter()
            .map(|p| {
                let mut groups = Vec::new();
                if p.free_rank > 0 {
                    groups.push(if p.free_rank == 1 { "ℤ".to_string() } else { format!("ℤ^{}", p.free_rank) });
                }
                groups.extend(p.torsion.iter().map(|t| format!("ℤ/{t}")));
                format!("({})({})", groups.join(" ⊕ "), p.twist)
            })
            .collect();
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" , ") };
        let flag = if h.unresolved_extensions.contains(&i) { "  [extension undetermined]" } else { "" };
        let _ = writeln!(out, "HM{i}: {body}{flag}");
    }
    out
}

pub fn rz(terms: &[RzTerm]) -> String {
    let mut out = String::new();
    for t in terms {
        let _ = writeln!(out, "degree {}: rank {} 𝟙({})[{}]", t.degree, t.rank, t.twist, t.shift);
    }
    out
}

pub fn arrangement(v: &Value) -> String {
    let mut out = format!("dimension {}, {} hyperplanes\n", v["dimension"], v["hyperplanes"]);
    if let Some(m) = v["multiplicities"].as_object() {
        let parts: Vec<String> = m.iter().map(|(n, c)| format!("m({n}) = {c}")).collect();
        let _ = writeln!(out, "{}", parts.join(", "));
    }
    for key in ["complement", "infinity", "dual", "compact_support"] {
        let shown = v[key]["display"].as_str().unwrap_or("n/a (not normal crossing)");
        let _ = writeln!(out, "{key}: {shown}");
    }
    out
}
