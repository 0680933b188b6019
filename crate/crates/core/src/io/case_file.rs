use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{
    validate_case, AcHub, AcLine, BatteryUnit, CostParams, DcHub, DcLine, GasHub, GasPipe, GasSupplier, Inverter,
    MicrogridCase, Microturbine, PerUnitBase, RenewableUnit, UnitSystem, ValidationReport,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CaseError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown field `{field}` at line {line}, column {column}")]
    UnknownField { field: String, line: usize, column: usize },
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("invalid case:\n{0}")]
    Invalid(ValidationReport),
}

/// On-disk layout of a case: the instance fields plus schema and metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub schema: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub horizon: usize,
    #[serde(default)]
    pub base: PerUnitBase,
    #[serde(default)]
    pub costs: CostParams,
    pub ac_hubs: Vec<AcHub>,
    #[serde(default)]
    pub ac_lines: Vec<AcLine>,
    #[serde(default)]
    pub dc_hubs: Vec<DcHub>,
    #[serde(default)]
    pub dc_lines: Vec<DcLine>,
    #[serde(default)]
    pub inverters: Vec<Inverter>,
    #[serde(default)]
    pub turbines: Vec<Microturbine>,
    #[serde(default)]
    pub renewables: Vec<RenewableUnit>,
    #[serde(default)]
    pub batteries: Vec<BatteryUnit>,
    #[serde(default)]
    pub gas_hubs: Vec<GasHub>,
    #[serde(default)]
    pub pipes: Vec<GasPipe>,
    #[serde(default)]
    pub suppliers: Vec<GasSupplier>,
}

impl CaseFile {
    pub fn from_case(case: &MicrogridCase, name: &str, description: &str) -> Self {
        assert_eq!(case.units, UnitSystem::Physical, "case files hold physical units");
        let c = case.clone();
        Self {
            schema: SCHEMA_VERSION,
            name: name.to_string(),
            description: description.to_string(),
            horizon: c.horizon,
            base: c.base,
            costs: c.costs,
            ac_hubs: c.ac_hubs,
            ac_lines: c.ac_lines,
            dc_hubs: c.dc_hubs,
            dc_lines: c.dc_lines,
            inverters: c.inverters,
            turbines: c.turbines,
            renewables: c.renewables,
            batteries: c.batteries,
            gas_hubs: c.gas_hubs,
            pipes: c.pipes,
            suppliers: c.suppliers,
        }
    }

    pub fn into_case(self) -> MicrogridCase {
        MicrogridCase {
            horizon: self.horizon,
            base: self.base,
            costs: self.costs,
            ac_hubs: self.ac_hubs,
            ac_lines: self.ac_lines,
            dc_hubs: self.dc_hubs,
            dc_lines: self.dc_lines,
            inverters: self.inverters,
            turbines: self.turbines,
            renewables: self.renewables,
            batteries: self.batteries,
            gas_hubs: self.gas_hubs,
            pipes: self.pipes,
            suppliers: self.suppliers,
            units: UnitSystem::Physical,
        }
    }
}

fn syntax(e: serde_json::Error) -> CaseError {
    let msg = e.to_string();
    if let Some(rest) = msg.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return CaseError::UnknownField {
                field: rest[..end].to_string(),
                line: e.line(),
                column: e.column(),
            };
        }
    }
    // serde_json appends " at line L column C"; keep only the message
    let message = match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg,
    };
    CaseError::Syntax {
        line: e.line(),
        column: e.column(),
        message,
    }
}

/// Parse a case file without validating the instance.
pub fn read_case_file(text: &str) -> Result<CaseFile, CaseError> {
    let file: CaseFile = serde_json::from_str(text).map_err(syntax)?;
    if file.schema != SCHEMA_VERSION {
        return Err(CaseError::Schema(file.schema));
    }
    Ok(file)
}

/// Parse and validate a case from JSON text.
pub fn parse_case_str(text: &str) -> Result<MicrogridCase, CaseError> {
    let case = read_case_file(text)?.into_case();
    let report = validate_case(&case);
    if report.is_empty() {
        Ok(case)
    } else {
        Err(CaseError::Invalid(report))
    }
}

pub fn parse_case(path: &Path) -> Result<MicrogridCase, CaseError> {
    let text = fs::read_to_string(path).map_err(|source| CaseError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_case_str(&text)
}

/// Pretty JSON with a trailing newline.
pub fn serialize_case(case: &MicrogridCase, name: &str, description: &str) -> String {
    let mut s = serde_json::to_string_pretty(&CaseFile::from_case(case, name, description)).expect("case serializes");
    s.push('\n');
    s
}
