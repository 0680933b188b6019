use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::SummaryMetrics;

use super::results::{fmt_value, write_atomic, ResultsError};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed {path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error(transparent)]
    Write(#[from] ResultsError),
}

fn read(path: &Path) -> Result<String, ReportError> {
    fs::read_to_string(path).map_err(|source| ReportError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn malformed(path: &Path, message: impl ToString) -> ReportError {
    ReportError::Malformed {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

/// `(entity, quantity) -> hourly values` for the rows of schedule.csv
/// whose entity kind is `kind`.
type Series = BTreeMap<String, Vec<f64>>;

fn load_series(path: &Path, text: &str, kind: &str, quantity: &str, horizon: usize) -> Result<Series, ReportError> {
    let mut out = Series::new();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| malformed(path, e))?;
        if rec.len() != 4 {
            return Err(malformed(path, format!("expected 4 fields, found {}", rec.len())));
        }
        let Some(id) = rec[1].strip_prefix(kind).and_then(|r| r.strip_prefix(':')) else {
            continue;
        };
        if &rec[2] != quantity {
            continue;
        }
        let hour: usize = rec[0].parse().map_err(|e| malformed(path, e))?;
        let value: f64 = rec[3].parse().map_err(|e| malformed(path, e))?;
        if hour >= horizon {
            return Err(malformed(path, format!("hour {hour} beyond horizon {horizon}")));
        }
        out.entry(id.to_string()).or_insert_with(|| vec![0.0; horizon])[hour] = value;
    }
    Ok(out)
}

fn wide_csv(series: &Series, horizon: usize) -> String {
    let mut out = String::from("hour");
    for id in series.keys() {
        out.push(',');
        out.push_str(id);
    }
    out.push('\n');
    for t in 0..horizon {
        let _ = write!(out, "{t}");
        for v in series.values() {
            let _ = write!(out, ",{}", fmt_value(v[t]));
        }
        out.push('\n');
    }
    out
}

fn columns_csv(header: &str, cols: &[&[f64]]) -> String {
    let mut out = format!("{header}\n");
    let horizon = cols.first().map_or(0, |c| c.len());
    for t in 0..horizon {
        let _ = write!(out, "{t}");
        for c in cols {
            let _ = write!(out, ",{}", fmt_value(c[t]));
        }
        out.push('\n');
    }
    out
}

fn gnuplot(inverters: &Series, pipes: &Series) -> String {
    let mut s = String::from(
        "set datafile separator ','\n\
         set key outside\n\
         set xlabel 'hour'\n\
         set terminal pngcairo size 900,500\n\n\
         set output 'electricity.png'\n\
         set ylabel 'kW'\n\
         plot 'electricity.csv' using 1:2 with lines title 'generation', \\\n\
         \x20    '' using 1:3 with lines title 'discharge', \\\n\
         \x20    '' using 1:4 with lines title 'charge', \\\n\
         \x20    '' using 1:5 with boxes title 'lost load'\n\n\
         set output 'battery.png'\n\
         set ylabel 'kW / kWh'\n\
         plot 'battery.csv' using 1:3 with lines title 'E', \\\n\
         \x20    '' using 1:4 with lines title 'P_ch', \\\n\
         \x20    '' using 1:5 with lines title 'P_dc'\n\n\
         set output 'gas.png'\n\
         set ylabel 'Skcf/hr'\n\
         plot 'gas.csv' using 1:2 with lines title 'heat demand', \\\n\
         \x20    '' using 1:3 with lines title 'heat served', \\\n\
         \x20    '' using 1:4 with lines title 'supply'\n",
    );
    for (file, ylabel, series) in [("inverters", "kW", inverters), ("pipe_flows", "Skcf/hr", pipes)] {
        if series.is_empty() {
            continue;
        }
        let _ = write!(s, "\nset output '{file}.png'\nset ylabel '{ylabel}'\nplot ");
        for (k, id) in series.keys().enumerate() {
            if k > 0 {
                s.push_str(", \\\n     ");
            }
            let src = if k == 0 { format!("'{file}.csv'") } else { "''".to_string() };
            let _ = write!(s, "{src} using 1:{} with lines title '{id}'", k + 2);
        }
        s.push('\n');
    }
    s
}

/// Turn the outputs of a plan run in `out_dir` into plot-ready tables and a
/// gnuplot script. Returns the written paths.
pub fn write_report(out_dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    let metrics_path = out_dir.join("metrics.json");
    let metrics: SummaryMetrics =
        serde_json::from_str(&read(&metrics_path)?).map_err(|e| malformed(&metrics_path, e))?;
    let h = &metrics.hourly;
    let horizon = h.lost_load_kw.len();
    let schedule_path = out_dir.join("schedule.csv");
    let schedule = read(&schedule_path)?;
    let inverters = load_series(&schedule_path, &schedule, "inverter", "P_c", horizon)?;
    let pipes = load_series(&schedule_path, &schedule, "pipe", "f_p", horizon)?;

    let files = [
        (
            "electricity.csv",
            columns_csv(
                "hour,generation_kw,discharge_kw,charge_kw,lost_load_kw",
                &[&h.generation_kw, &h.discharge_kw, &h.charge_kw, &h.lost_load_kw],
            ),
        ),
        (
            "gas.csv",
            columns_csv(
                "hour,heat_demand_skcf_hr,heat_served_skcf_hr,gas_supply_skcf_hr,fuel_cost",
                &[&h.heat_demand_skcf_hr, &h.heat_served_skcf_hr, &h.gas_supply_skcf_hr, &h.fuel_cost],
            ),
        ),
        ("inverters.csv", wide_csv(&inverters, horizon)),
        ("pipe_flows.csv", wide_csv(&pipes, horizon)),
        ("plots.gp", gnuplot(&inverters, &pipes)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out_dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
