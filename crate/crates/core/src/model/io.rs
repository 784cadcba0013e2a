//! CSV ingestion and export.
//!
//! Composed format: `SUBJID,ARM,GROUPN,AVAL0`, one row per subject, where
//! GROUPN is the HCE category and AVAL0 its magnitude.
//!
//! Wide format: `SUBJID,ARM`, then `<stem>_EVENT` / `<stem>_TIME` for every
//! time-to-event component and `<stem>_VALUE` for the continuous one. The stem
//! is the component name with every non-alphanumeric character replaced by `_`.

use std::io::{Read, Write};

use csv::{ReaderBuilder, StringRecord};

use super::{Arm, ComponentConfig, ComponentKind, HceDataset, HceValue, SubjectRecord};
use crate::error::{HceError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArmLabels {
    pub active: String,
    pub control: String,
}

impl Default for ArmLabels {
    fn default() -> Self {
        ArmLabels { active: "Active".into(), control: "Control".into() }
    }
}

impl ArmLabels {
    pub fn new(active: impl Into<String>, control: impl Into<String>) -> Result<Self> {
        let labels = ArmLabels { active: active.into(), control: control.into() };
        if labels.active.is_empty() || labels.control.is_empty() || labels.active == labels.control {
            return Err(HceError::invalid("arm labels must be two distinct non-empty strings"));
        }
        Ok(labels)
    }

    fn parse(&self, s: &str) -> Option<Arm> {
        if s == self.active {
            Some(Arm::Active)
        } else if s == self.control {
            Some(Arm::Control)
        } else {
            None
        }
    }

    pub fn label(&self, arm: Arm) -> &str {
        match arm {
            Arm::Active => &self.active,
            Arm::Control => &self.control,
        }
    }
}

fn row_err(line: usize, message: impl Into<String>) -> HceError {
    HceError::Row { line, message: message.into() }
}

struct Columns<'a> {
    headers: &'a StringRecord,
}

impl Columns<'_> {
    fn find(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.find(name).ok_or_else(|| row_err(1, format!("missing column {name}")))
    }
}

fn parse_f64(field: &str, line: usize, column: &str) -> Result<f64> {
    let v: f64 =
        field.parse().map_err(|_| row_err(line, format!("column {column}: cannot parse {field:?} as a number")))?;
    if !v.is_finite() {
        return Err(row_err(line, format!("column {column}: value {field:?} is not finite")));
    }
    Ok(v)
}

fn line_of(record: &StringRecord, fallback: usize) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(fallback)
}

/// Reads a composed-format CSV into a validated dataset.
pub fn load_dataset<R: Read>(input: R, config: &ComponentConfig, labels: &ArmLabels) -> Result<HceDataset> {
    let mut reader = ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| row_err(1, e.to_string()))?.clone();
    let cols = Columns { headers: &headers };
    let (id_col, arm_col, grp_col, val_col) =
        (cols.require("SUBJID")?, cols.require("ARM")?, cols.require("GROUPN")?, cols.require("AVAL0")?);

    let mut subjects = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| row_err(i + 2, e.to_string()))?;
        let line = line_of(&record, i + 2);
        let id = record.get(id_col).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(row_err(line, "empty SUBJID"));
        }
        if !seen.insert(id.clone()) {
            return Err(row_err(line, format!("duplicate SUBJID {id:?}")));
        }
        let arm_field = record.get(arm_col).unwrap_or("");
        let arm = labels.parse(arm_field).ok_or_else(|| row_err(line, format!("unknown arm label {arm_field:?}")))?;
        let grp_field = record.get(grp_col).unwrap_or("");
        let category: i64 = grp_field
            .parse()
            .map_err(|_| row_err(line, format!("column GROUPN: cannot parse {grp_field:?} as an integer")))?;
        if category < 1 || category > config.k() as i64 {
            return Err(row_err(line, format!("category out of range: GROUPN {category} not in 1..={}", config.k())));
        }
        let magnitude = parse_f64(record.get(val_col).unwrap_or(""), line, "AVAL0")?;
        let value = HceValue::new(category as u32, magnitude);
        config.validate_value(&value).map_err(|e| row_err(line, e.to_string()))?;
        subjects.push(SubjectRecord { subject_id: id, arm, value });
    }
    HceDataset::new(config.clone(), subjects)
}

/// Writes a dataset in composed format. Magnitudes use the shortest
/// representation that parses back to the same `f64`.
pub fn write_dataset<W: Write>(dataset: &HceDataset, labels: &ArmLabels, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["SUBJID", "ARM", "GROUPN", "AVAL0"]).map_err(csv_io)?;
    for s in dataset.subjects() {
        w.write_record([
            s.subject_id.as_str(),
            labels.label(s.arm),
            &s.value.category.to_string(),
            &s.value.magnitude.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> HceError {
    HceError::Io(std::io::Error::other(e))
}

/// One time-to-event component of a wide-format row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EventObservation {
    pub occurred: bool,
    pub time: Option<f64>,
}

/// Per-component event observations (in priority order) plus the continuous
/// value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WideRow {
    pub events: Vec<EventObservation>,
    pub continuous: Option<f64>,
}

/// Collapses one subject's component outcomes into its HCE value: the most
/// severe event that occurred (with its time), or the continuous value when
/// no event occurred.
pub fn compose_hce(row: &WideRow, config: &ComponentConfig) -> Result<HceValue> {
    let n_tte = config.k() as usize - 1;
    if row.events.len() != n_tte {
        return Err(HceError::invalid(format!("expected {n_tte} event components, got {}", row.events.len())));
    }
    for (i, ev) in row.events.iter().enumerate() {
        if !ev.occurred {
            continue;
        }
        let name = &config.components()[i].name;
        let time = ev.time.ok_or_else(|| HceError::invalid(format!("{name}: event flagged without a time")))?;
        let value = HceValue::new(i as u32 + 1, time);
        config.validate_value(&value).map_err(|e| HceError::invalid(format!("{name}: {e}")))?;
        return Ok(value);
    }
    let value = row.continuous.ok_or_else(|| HceError::invalid("no event and no continuous value"))?;
    let value = HceValue::new(config.k(), value);
    config.validate_value(&value)?;
    Ok(value)
}

fn column_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// Reads a wide-format CSV and composes each row with [`compose_hce`].
pub fn load_wide_dataset<R: Read>(input: R, config: &ComponentConfig, labels: &ArmLabels) -> Result<HceDataset> {
    let mut reader = ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| row_err(1, e.to_string()))?.clone();
    let cols = Columns { headers: &headers };
    let id_col = cols.require("SUBJID")?;
    let arm_col = cols.require("ARM")?;
    let mut event_cols = Vec::new();
    let mut value_col = None;
    for c in config.components() {
        let stem = column_stem(&c.name);
        match c.kind {
            ComponentKind::TimeToEvent => {
                let ev = format!("{stem}_EVENT");
                let t = format!("{stem}_TIME");
                event_cols.push((cols.require(&ev)?, ev, cols.require(&t)?, t));
            }
            ComponentKind::Continuous => {
                let v = format!("{stem}_VALUE");
                value_col = Some((cols.require(&v)?, v));
            }
        }
    }
    let (value_col, value_name) = value_col.expect("config has a continuous component");

    let mut subjects = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| row_err(i + 2, e.to_string()))?;
        let line = line_of(&record, i + 2);
        let id = record.get(id_col).unwrap_or("").to_string();
        let arm_field = record.get(arm_col).unwrap_or("");
        let arm = labels.parse(arm_field).ok_or_else(|| row_err(line, format!("unknown arm label {arm_field:?}")))?;
        let mut row = WideRow::default();
        for (ev_col, ev_name, t_col, t_name) in &event_cols {
            let occurred = match record.get(*ev_col).unwrap_or("") {
                "1" => true,
                "0" | "" => false,
                other => {
                    return Err(row_err(line, format!("column {ev_name}: event flag must be 0 or 1, got {other:?}")))
                }
            };
            let t_field = record.get(*t_col).unwrap_or("");
            let time = if t_field.is_empty() { None } else { Some(parse_f64(t_field, line, t_name)?) };
            row.events.push(EventObservation { occurred, time });
        }
        let v_field = record.get(value_col).unwrap_or("");
        row.continuous = if v_field.is_empty() { None } else { Some(parse_f64(v_field, line, &value_name)?) };
        let value = compose_hce(&row, config).map_err(|e| row_err(line, e.to_string()))?;
        subjects.push(SubjectRecord { subject_id: id, arm, value });
    }
    HceDataset::new(config.clone(), subjects)
}
