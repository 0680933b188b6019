use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::SummaryMetrics;
use crate::builder::{DispatchSchedule, Entity, Quantity};
use crate::model::MicrogridCase;
use crate::solver::MilpSolution;

use super::case_file::serialize_case;

#[derive(Debug, thiserror::Error)]
pub enum ResultsError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Write `contents` to `path` via a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), ResultsError> {
    let err = |source| ResultsError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        err(e)
    })
}

pub fn ensure_dir(dir: &Path) -> Result<(), ResultsError> {
    fs::create_dir_all(dir).map_err(|source| ResultsError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Fixed six-decimal rendering; negative zero prints as zero.
pub fn fmt_value(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    status: &'a str,
    objective: f64,
    bound: f64,
    gap: f64,
    nodes: usize,
    lp_iterations: usize,
}

fn schedule_csv(case: &MicrogridCase, s: &DispatchSchedule) -> String {
    let mut out = String::from("hour,entity,quantity,value\n");
    for (key, &v) in &s.values {
        let _ = writeln!(out, "{},{},{},{}", key.hour, key.entity.label(case), key.quantity, fmt_value(v));
    }
    out
}

fn flows_csv(case: &MicrogridCase, s: &DispatchSchedule) -> String {
    let mut out = String::from("hour,element,quantity,value\n");
    for (key, &v) in &s.values {
        if matches!(key.entity, Entity::AcLine(_) | Entity::DcLine(_) | Entity::Pipe(_)) {
            let _ = writeln!(out, "{},{},{},{}", key.hour, key.entity.label(case), key.quantity, fmt_value(v));
        }
    }
    out
}

fn battery_csv(case: &MicrogridCase, s: &DispatchSchedule) -> String {
    let mut out = String::from("hour,battery,E_kwh,P_ch_kw,P_dc_kw\n");
    for t in 0..s.horizon {
        for (k, b) in case.batteries.iter().enumerate() {
            let e = Entity::Battery(k);
            let _ = writeln!(
                out,
                "{t},{},{},{},{}",
                b.id,
                fmt_value(s.get(e, Quantity::E, t)),
                fmt_value(s.get(e, Quantity::Pch, t)),
                fmt_value(s.get(e, Quantity::Pdc, t)),
            );
        }
    }
    out
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Write the plan outputs into `out_dir` and return the written paths.
/// `case` is in physical units.
pub fn write_results(
    case: &MicrogridCase,
    solution: &MilpSolution,
    schedule: &DispatchSchedule,
    metrics: &SummaryMetrics,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, ResultsError> {
    ensure_dir(out_dir)?;
    let summary = SolveSummary {
        status: solution.status.as_str(),
        objective: schedule.objective,
        bound: solution.bound,
        gap: solution.gap,
        nodes: solution.nodes,
        lp_iterations: solution.lp_iterations,
    };
    let files = [
        ("schedule.csv", schedule_csv(case, schedule)),
        ("flows.csv", flows_csv(case, schedule)),
        ("battery.csv", battery_csv(case, schedule)),
        ("metrics.json", json(metrics)),
        ("solve.json", json(&summary)),
        ("case.json", serialize_case(case, "", "")),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out_dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
