use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::model::MicrogridCase;
use crate::planner::{plan, PlanOptions};
use crate::solver::MilpStatus;

use super::SummaryMetrics;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SweepError {
    #[error("bad parameter path `{path}`: {reason}")]
    BadPath { path: String, reason: String },
    #[error("sweep value {0} is not finite")]
    NonFinite(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub status: MilpStatus,
    pub objective: Option<f64>,
    pub metrics: Option<SummaryMetrics>,
    /// Set when the point failed before reaching the solver.
    pub error: Option<String>,
}

enum Step {
    Key(String),
    Index(usize),
    All,
}

fn bad(path: &str, reason: impl Into<String>) -> SweepError {
    SweepError::BadPath {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn parse_path(path: &str) -> Result<Vec<Step>, SweepError> {
    let mut steps = Vec::new();
    for part in path.split('.') {
        let (name, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if name.is_empty() {
            return Err(bad(path, "empty field name"));
        }
        steps.push(Step::Key(name.to_string()));
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(|| bad(path, "unclosed `[`"))?;
            let inner = &rest[1..close];
            if inner == "*" {
                steps.push(Step::All);
            } else {
                let i = inner.parse().map_err(|_| bad(path, format!("bad index `{inner}`")))?;
                steps.push(Step::Index(i));
            }
            rest = &rest[close + 1..];
            if !rest.is_empty() && !rest.starts_with('[') {
                return Err(bad(path, format!("unexpected `{rest}`")));
            }
        }
    }
    Ok(steps)
}

/// Field of `obj` named `name`, or the unique field named `name_<unit>`.
fn field_name(obj: &serde_json::Map<String, Value>, name: &str, path: &str) -> Result<String, SweepError> {
    if obj.contains_key(name) {
        return Ok(name.to_string());
    }
    let prefix = format!("{name}_");
    let hits: Vec<&String> = obj.keys().filter(|k| k.starts_with(&prefix)).collect();
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(bad(path, format!("no field `{name}`"))),
        _ => Err(bad(path, format!("`{name}` is ambiguous"))),
    }
}

fn visit<'a>(v: &'a mut Value, steps: &[Step], path: &str, out: &mut Vec<&'a mut Value>) -> Result<(), SweepError> {
    let Some((step, rest)) = steps.split_first() else {
        if !v.is_number() {
            return Err(bad(path, "does not address a number"));
        }
        out.push(v);
        return Ok(());
    };
    match step {
        Step::Key(name) => {
            let obj = v.as_object_mut().ok_or_else(|| bad(path, format!("`{name}` applied to a non-object")))?;
            let key = field_name(obj, name, path)?;
            visit(obj.get_mut(&key).expect("key exists"), rest, path, out)
        }
        Step::Index(i) => {
            let arr = v.as_array_mut().ok_or_else(|| bad(path, "index applied to a non-list"))?;
            let len = arr.len();
            let item = arr.get_mut(*i).ok_or_else(|| bad(path, format!("index {i} out of range (len {len})")))?;
            visit(item, rest, path, out)
        }
        Step::All => {
            let arr = v.as_array_mut().ok_or_else(|| bad(path, "`[*]` applied to a non-list"))?;
            if arr.is_empty() {
                return Err(bad(path, "`[*]` over an empty list"));
            }
            for item in arr {
                visit(item, rest, path, out)?;
            }
            Ok(())
        }
    }
}

/// Current values addressed by `path`, e.g. `inverters[0].p_max` or `pipes[*].f_max`.
pub fn resolve_path(case: &MicrogridCase, path: &str) -> Result<Vec<f64>, SweepError> {
    let steps = parse_path(path)?;
    let mut v = serde_json::to_value(case).expect("case serializes");
    let mut out = Vec::new();
    visit(&mut v, &steps, path, &mut out)?;
    Ok(out.iter().map(|x| x.as_f64().unwrap_or(f64::NAN)).collect())
}

/// Copy of `case` with every field addressed by `path` set to `value`.
pub fn set_parameter(case: &MicrogridCase, path: &str, value: f64) -> Result<MicrogridCase, SweepError> {
    if !value.is_finite() {
        return Err(SweepError::NonFinite(value));
    }
    let steps = parse_path(path)?;
    let mut v = serde_json::to_value(case).expect("case serializes");
    {
        let mut out = Vec::new();
        visit(&mut v, &steps, path, &mut out)?;
        let num = if value.fract() == 0.0 && value.abs() < 1e15 && out.iter().all(|x| x.is_u64() || x.is_i64()) {
            Value::from(value as i64)
        } else {
            Value::from(value)
        };
        for slot in out {
            *slot = num.clone();
        }
    }
    let mut next: MicrogridCase =
        serde_json::from_value(v).map_err(|e| bad(path, format!("value {value} rejected: {e}")))?;
    next.units = case.units;
    Ok(next)
}

/// One solve per value, in parallel; rows keep the order of `values`.
pub fn sweep(case: &MicrogridCase, path: &str, values: &[f64], opts: &PlanOptions) -> Result<Vec<SweepRow>, SweepError> {
    let cases = values
        .iter()
        .map(|&x| set_parameter(case, path, x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cases
        .par_iter()
        .zip(values.par_iter())
        .map(|(c, &value)| match plan(c, opts) {
            Ok(out) => SweepRow {
                value,
                status: out.status(),
                objective: out.schedule.as_ref().map(|s| s.objective),
                metrics: out.metrics,
                error: None,
            },
            Err(e) => SweepRow {
                value,
                status: MilpStatus::Failed,
                objective: None,
                metrics: None,
                error: Some(e.to_string()),
            },
        })
        .collect())
}

/// Variant of `case` whose batteries can neither charge nor discharge.
pub fn remove_storage(case: &MicrogridCase) -> MicrogridCase {
    let mut out = case.clone();
    for b in &mut out.batteries {
        b.e_min = b.e_initial;
        b.e_max = b.e_initial;
        b.p_ch_min = 0.0;
        b.p_ch_max = 0.0;
        b.p_dc_min = 0.0;
        b.p_dc_max = 0.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::toy_case;

    #[test]
    fn resolves_unit_suffixed_fields() {
        let case = toy_case();
        assert_eq!(resolve_path(&case, "inverters[0].p_max").unwrap(), vec![50.0]);
        assert_eq!(resolve_path(&case, "pipes[*].f_max").unwrap(), vec![30.0]);
        assert_eq!(resolve_path(&case, "costs.beta").unwrap().len(), 1);
    }

    #[test]
    fn bad_paths() {
        let case = toy_case();
        for p in ["inverters[3].p_max", "inverters[0].nope", "inverters.p_max", "inverters[0].id", "a[", "p_max"] {
            assert!(matches!(resolve_path(&case, p), Err(SweepError::BadPath { .. })), "{p}");
        }
        assert!(matches!(
            resolve_path(&case, "batteries[0].p"),
            Err(SweepError::BadPath { .. })
        ));
    }

    #[test]
    fn set_changes_only_the_target() {
        let case = toy_case();
        let next = set_parameter(&case, "inverters[0].p_max", 35.5).unwrap();
        assert_eq!(next.inverters[0].p_max, 35.5);
        let mut back = next.clone();
        back.inverters[0].p_max = case.inverters[0].p_max;
        assert_eq!(back, case);
        assert!(matches!(set_parameter(&case, "costs.beta", f64::NAN), Err(SweepError::NonFinite(_))));
    }

    #[test]
    fn integer_fields_accept_whole_values() {
        let case = toy_case();
        let next = set_parameter(&case, "costs.pwl_segments", 6.0).unwrap();
        assert_eq!(next.costs.pwl_segments, 6);
        assert!(set_parameter(&case, "costs.pwl_segments", 2.5).is_err());
    }

    #[test]
    fn identity_sweep_matches_plain_solve() {
        let case = toy_case();
        let opts = PlanOptions::default();
        let cur = resolve_path(&case, "inverters[0].p_max").unwrap()[0];
        let rows = sweep(&case, "inverters[0].p_max", &[cur], &opts).unwrap();
        let direct = plan(&case, &opts).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].metrics, direct.metrics);
    }

    #[test]
    fn storage_removal_pins_energy() {
        let case = remove_storage(&toy_case());
        let b = &case.batteries[0];
        assert_eq!((b.e_min, b.e_max, b.p_ch_max, b.p_dc_max), (b.e_initial, b.e_initial, 0.0, 0.0));
    }
}
