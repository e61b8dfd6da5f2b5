//! Ingestion of pair tables, pair metadata, coding lists, and result
//! serialization.
//!
//! File formats:
//! - pair table: numeric text, comma or whitespace delimited, `#` comments;
//! - pair meta: whitespace lines `id cause-start cause-end effect-start effect-end weight`
//!   with 1-based inclusive column ranges;
//! - coding: `id,label` lines with labels causal / confounded / uncertain;
//! - results CSV: header `name,l_causal_nats,l_confounded_nats,confidence,label,weight`.

use std::fmt;
use std::io::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::DatasetPair;
use crate::decision::{Label, Verdict};
use crate::error::{Error, Result};
use crate::models::CodeLengths;

/// Bundled coding of the public cause-effect pair corpus, 100 entries.
pub const BUNDLED_CODING: &str = include_str!("../data/tuebingen_coding.csv");

// ---------------------------------------------------------------------------
// pair tables
// ---------------------------------------------------------------------------

/// Cell delimiter of a pair table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Comma if the first data line contains one, whitespace otherwise.
    #[default]
    Auto,
    Comma,
    Whitespace,
}

/// Which column holds Y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    LastColumn,
    /// 1-based column index.
    Index(usize),
}

fn parse_err(path: &str, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        column,
        message: message.into(),
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parse a numeric table: one row per line, `#` lines and blank lines
/// skipped, every cell finite. Returns the rows and the 1-based line number
/// each row came from.
fn parse_table(path_label: &str, text: &str, delimiter: Delimiter) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut delim = delimiter;
    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if delim == Delimiter::Auto {
            delim = if line.contains(',') {
                Delimiter::Comma
            } else {
                Delimiter::Whitespace
            };
        }
        let cells: Vec<&str> = match delim {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            _ => line.split_whitespace().collect(),
        };
        let mut row = Vec::with_capacity(cells.len());
        for (col0, cell) in cells.iter().enumerate() {
            let col = col0 + 1;
            let value: f64 = cell.parse().map_err(|_| {
                parse_err(path_label, lineno, col, format!("'{cell}' is not a number"))
            })?;
            if !value.is_finite() {
                return Err(parse_err(
                    path_label,
                    lineno,
                    col,
                    format!("non-finite value '{cell}'"),
                ));
            }
            row.push(value);
        }
        if let Some((first_line, first)) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    path_label,
                    lineno,
                    row.len().min(first.len()) + 1,
                    format!(
                        "expected {} columns as on line {first_line}, found {}",
                        first.len(),
                        row.len()
                    ),
                ));
            }
        }
        rows.push((lineno, row));
    }
    Ok(rows)
}

/// Read an n×(m+1) table and split it into X and the target column Y.
pub fn read_pair_table(path: &Path, delimiter: Delimiter, target: Target) -> Result<DatasetPair> {
    let label = path.display().to_string();
    let text = read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().replace(',', "_"))
        .unwrap_or_else(|| "pair".to_string());
    pair_from_table(&label, &name, &text, delimiter, target)
}

/// [`read_pair_table`] over in-memory text.
pub fn pair_from_table(
    path_label: &str,
    name: &str,
    text: &str,
    delimiter: Delimiter,
    target: Target,
) -> Result<DatasetPair> {
    let rows = parse_table(path_label, text, delimiter)?;
    let n = rows.len();
    if n < 3 {
        return Err(Error::DegenerateInput(format!(
            "{path_label}: {n} data rows; at least 3 required"
        )));
    }
    let width = rows[0].1.len();
    if width < 2 {
        return Err(Error::DegenerateInput(format!(
            "{path_label}: needs at least 2 columns, found {width}"
        )));
    }
    let target_col = match target {
        Target::LastColumn => width - 1,
        Target::Index(i) => {
            if i < 1 || i > width {
                return Err(Error::Domain(format!(
                    "{path_label}: target column {i} outside 1..={width}"
                )));
            }
            i - 1
        }
    };
    let mut x = DMatrix::zeros(n, width - 1);
    let mut y = DVector::zeros(n);
    for (i, (_, row)) in rows.iter().enumerate() {
        let mut xi = 0;
        for (j, &v) in row.iter().enumerate() {
            if j == target_col {
                y[i] = v;
            } else {
                x[(i, xi)] = v;
                xi += 1;
            }
        }
    }
    DatasetPair::new(name, x, y)
}

// ---------------------------------------------------------------------------
// pair metadata
// ---------------------------------------------------------------------------

/// One line of a pair-meta file: which columns hold the cause and effect
/// blocks, and the benchmark weight of the pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMetaEntry {
    pub pair_id: String,
    pub cause_start: usize,
    pub cause_end: usize,
    pub effect_start: usize,
    pub effect_end: usize,
    pub weight: f64,
}

impl PairMetaEntry {
    pub fn cause_is_multivariate(&self) -> bool {
        self.cause_end > self.cause_start
    }

    /// The method requires a scalar effect; wider effect blocks are skipped.
    pub fn effect_is_scalar(&self) -> bool {
        self.effect_end == self.effect_start
    }
}

/// Read a whitespace-delimited 6-field pair-meta file.
pub fn read_pair_meta(path: &Path) -> Result<Vec<PairMetaEntry>> {
    let label = path.display().to_string();
    let text = read_to_string(path)?;
    pair_meta_from_text(&label, &text)
}

pub fn pair_meta_from_text(path_label: &str, text: &str) -> Result<Vec<PairMetaEntry>> {
    let mut entries = Vec::new();
    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(parse_err(
                path_label,
                lineno,
                1,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        }
        let idx = |s: &str, col: usize| -> Result<usize> {
            s.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| {
                    parse_err(path_label, lineno, col, format!("'{s}' is not a 1-based index"))
                })
        };
        let entry = PairMetaEntry {
            pair_id: fields[0].to_string(),
            cause_start: idx(fields[1], 2)?,
            cause_end: idx(fields[2], 3)?,
            effect_start: idx(fields[3], 4)?,
            effect_end: idx(fields[4], 5)?,
            weight: fields[5].parse().map_err(|_| {
                parse_err(path_label, lineno, 6, format!("'{}' is not a number", fields[5]))
            })?,
        };
        if !(entry.weight > 0.0) || !entry.weight.is_finite() {
            return Err(parse_err(
                path_label,
                lineno,
                6,
                format!("weight must be positive, got {}", entry.weight),
            ));
        }
        if entry.cause_end < entry.cause_start || entry.effect_end < entry.effect_start {
            return Err(parse_err(path_label, lineno, 2, "column range is reversed"));
        }
        let overlap = entry.cause_start <= entry.effect_end && entry.effect_start <= entry.cause_end;
        if overlap {
            return Err(parse_err(
                path_label,
                lineno,
                2,
                "cause and effect column ranges overlap",
            ));
        }
        entries.push(entry);
    }
    Ok(entries)
}

// ---------------------------------------------------------------------------
// coding lists
// ---------------------------------------------------------------------------

/// Judgment of a benchmark pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coding {
    Causal,
    Confounded,
    Uncertain,
}

impl fmt::Display for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coding::Causal => "causal",
            Coding::Confounded => "confounded",
            Coding::Uncertain => "uncertain",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingEntry {
    pub pair_id: String,
    pub coding: Coding,
}

/// Read an `id,label` coding file. Ids must be unique.
pub fn read_coding(path: &Path) -> Result<Vec<CodingEntry>> {
    let label = path.display().to_string();
    let text = read_to_string(path)?;
    coding_from_text(&label, &text)
}

pub fn coding_from_text(path_label: &str, text: &str) -> Result<Vec<CodingEntry>> {
    let mut entries: Vec<CodingEntry> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, label_str) = line.split_once(',').ok_or_else(|| {
            parse_err(path_label, lineno, 1, "expected 'id,label'")
        })?;
        let id = id.trim().to_string();
        if id.is_empty() {
            return Err(parse_err(path_label, lineno, 1, "empty pair id"));
        }
        let coding = match label_str.trim().to_ascii_lowercase().as_str() {
            "causal" => Coding::Causal,
            "confounded" => Coding::Confounded,
            "uncertain" => Coding::Uncertain,
            other => {
                return Err(parse_err(
                    path_label,
                    lineno,
                    2,
                    format!("unknown label '{other}'"),
                ))
            }
        };
        if !seen.insert(canonical_pair_id(&id)) {
            return Err(parse_err(
                path_label,
                lineno,
                1,
                format!("duplicate pair id '{id}'"),
            ));
        }
        entries.push(CodingEntry { pair_id: id, coding });
    }
    Ok(entries)
}

/// The coding shipped with the crate.
pub fn bundled_coding() -> Vec<CodingEntry> {
    coding_from_text("<bundled>", BUNDLED_CODING).expect("bundled coding must parse")
}

/// Normalize a pair id so `pair0065`, `0065`, and `65` refer to the same
/// pair: lowercase, strip a `pair` prefix, strip leading zeros.
pub fn canonical_pair_id(id: &str) -> String {
    let lower = id.trim().to_ascii_lowercase();
    let stripped = lower.strip_prefix("pair").unwrap_or(&lower);
    let trimmed = stripped.trim_start_matches('0');
    if trimmed.is_empty() {
        if stripped.is_empty() {
            lower
        } else {
            "0".to_string()
        }
    } else {
        trimmed.to_string()
    }
}

// ---------------------------------------------------------------------------
// results
// ---------------------------------------------------------------------------

/// One row of a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub name: String,
    pub l_causal_nats: f64,
    pub l_confounded_nats: f64,
    pub confidence: f64,
    pub label: Label,
    pub weight: f64,
}

impl ResultRecord {
    pub fn new(name: impl Into<String>, verdict: &Verdict, weight: f64) -> Self {
        ResultRecord {
            name: name.into(),
            l_causal_nats: verdict.lengths.l_causal,
            l_confounded_nats: verdict.lengths.l_confounded,
            confidence: verdict.confidence,
            label: verdict.label,
            weight,
        }
    }

    pub fn verdict(&self) -> Result<Verdict> {
        Verdict::from_lengths(CodeLengths {
            l_causal: self.l_causal_nats,
            l_confounded: self.l_confounded_nats,
        })
    }
}

pub const RESULTS_HEADER: &str = "name,l_causal_nats,l_confounded_nats,confidence,label,weight";

/// Results CSV as a string, records sorted by name. Floats use the shortest
/// round-trippable representation, so a write/read cycle is lossless.
pub fn results_to_csv(records: &[ResultRecord]) -> String {
    let mut sorted: Vec<&ResultRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in sorted {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.name, r.l_causal_nats, r.l_confounded_nats, r.confidence, r.label, r.weight
        ));
    }
    out
}

/// Write the results CSV (stable ordering by name).
pub fn write_results(path: &Path, records: &[ResultRecord]) -> Result<()> {
    write_bytes(path, results_to_csv(records).as_bytes())
}

/// JSON mirror of the results file.
pub fn write_results_json(path: &Path, records: &[ResultRecord]) -> Result<()> {
    let mut sorted: Vec<&ResultRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let json = serde_json::to_string_pretty(&sorted).expect("records serialize");
    write_bytes(path, format!("{json}\n").as_bytes())
}

/// Read a results CSV back.
pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let label = path.display().to_string();
    let text = read_to_string(path)?;
    results_from_csv(&label, &text)
}

pub fn results_from_csv(path_label: &str, text: &str) -> Result<Vec<ResultRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == RESULTS_HEADER => {}
        other => {
            return Err(parse_err(
                path_label,
                1,
                1,
                format!("bad header: {:?}", other.map(|(_, h)| h)),
            ))
        }
    }
    let mut records = Vec::new();
    for (lineno0, raw) in lines {
        let lineno = lineno0 + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(parse_err(
                path_label,
                lineno,
                1,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        }
        let num = |s: &str, col: usize| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| parse_err(path_label, lineno, col, format!("'{s}' is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(path_label, lineno, col, "non-finite value"));
            }
            Ok(v)
        };
        records.push(ResultRecord {
            name: fields[0].to_string(),
            l_causal_nats: num(fields[1], 2)?,
            l_confounded_nats: num(fields[2], 3)?,
            confidence: num(fields[3], 4)?,
            label: fields[4]
                .parse()
                .map_err(|e: String| parse_err(path_label, lineno, 5, e))?,
            weight: num(fields[5], 6)?,
        });
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// decision-rate curves and grids
// ---------------------------------------------------------------------------

/// Write a decision-rate curve as `rate,accuracy` lines. Metadata such as the
/// AUDR or a corpus baseline goes into leading `#` comment lines.
pub fn drcurve_to_csv(curve: &crate::evalkit::DrCurve, metadata: &[(&str, f64)]) -> String {
    let mut out = String::new();
    for (key, value) in metadata {
        out.push_str(&format!("# {key} = {value}\n"));
    }
    out.push_str("rate,accuracy\n");
    for (rate, acc) in &curve.points {
        out.push_str(&format!("{rate},{acc}\n"));
    }
    out
}

pub fn write_drcurve(
    path: &Path,
    curve: &crate::evalkit::DrCurve,
    metadata: &[(&str, f64)],
) -> Result<()> {
    write_bytes(path, drcurve_to_csv(curve, metadata).as_bytes())
}

/// Write an AUDR grid as `dim_x,dim_z,audr` lines.
pub fn grid_to_csv(grid: &crate::evalkit::AudrGrid) -> String {
    let mut out = String::from("dim_x,dim_z,audr\n");
    for (ix, &dx) in grid.dims_x.iter().enumerate() {
        for (iz, &dz) in grid.dims_z.iter().enumerate() {
            out.push_str(&format!("{dx},{dz},{}\n", grid.values[ix][iz]));
        }
    }
    out
}

pub fn write_grid(path: &Path, grid: &crate::evalkit::AudrGrid) -> Result<()> {
    write_bytes(path, grid_to_csv(grid).as_bytes())
}

/// Write a `name,label` truth file (for `eval` runs over exported results).
pub fn write_truth(path: &Path, truths: &[(String, crate::evalkit::Truth)]) -> Result<()> {
    let mut sorted: Vec<&(String, crate::evalkit::Truth)> = truths.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::new();
    for (name, truth) in sorted {
        out.push_str(&format!("{name},{}\n", truth.name()));
    }
    write_bytes(path, out.as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CodeLengths;

    #[test]
    fn parses_whitespace_table() {
        let pair =
            pair_from_table("t", "p", "1 2\n2 4\n3 6\n", Delimiter::Auto, Target::LastColumn)
                .unwrap();
        assert_eq!(pair.x.as_slice(), &[1.0, 2.0, 3.0]);
        assert_eq!(pair.y.as_slice(), &[2.0, 4.0, 6.0]);
    }

    #[test]
    fn parses_comma_table_with_comments_and_crlf() {
        let text = "# header comment\r\n1,2\r\n\r\n2,4\r\n3,6\r\n";
        let pair = pair_from_table("t", "p", text, Delimiter::Auto, Target::LastColumn).unwrap();
        assert_eq!(pair.n(), 3);
        assert_eq!(pair.y.as_slice(), &[2.0, 4.0, 6.0]);
    }

    #[test]
    fn bad_cell_cites_location() {
        let text = "1 2\nabc 4\n3 6\n";
        match pair_from_table("t", "p", text, Delimiter::Auto, Target::LastColumn) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_cells() {
        let text = "1 2\n2 inf\n3 6\n";
        match pair_from_table("t", "p", text, Delimiter::Auto, Target::LastColumn) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!((line, column), (2, 2));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "1 2\n2 nan\n3 6\n";
        assert!(matches!(
            pair_from_table("t", "p", text, Delimiter::Auto, Target::LastColumn),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn too_few_rows_is_degenerate() {
        let text = "1 2\n2 4\n";
        assert!(matches!(
            pair_from_table("t", "p", text, Delimiter::Auto, Target::LastColumn),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn target_index_selects_column() {
        let text = "9 1 2\n8 2 4\n7 3 6\n";
        let pair = pair_from_table("t", "p", text, Delimiter::Auto, Target::Index(1)).unwrap();
        assert_eq!(pair.y.as_slice(), &[9.0, 8.0, 7.0]);
        assert_eq!(pair.x.ncols(), 2);
    }

    #[test]
    fn ragged_rows_rejected() {
        let text = "1 2\n2 4 9\n3 6\n";
        assert!(matches!(
            pair_from_table("t", "p", text, Delimiter::Auto, Target::LastColumn),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn bundled_coding_matches_published_lists() {
        let entries = bundled_coding();
        assert_eq!(entries.len(), 100);
        let get = |id: &str| {
            entries
                .iter()
                .find(|e| canonical_pair_id(&e.pair_id) == canonical_pair_id(id))
                .unwrap()
                .coding
        };
        assert_eq!(get("65"), Coding::Confounded);
        assert_eq!(get("13"), Coding::Causal);
        assert_eq!(get("1"), Coding::Uncertain);
        let causal = entries.iter().filter(|e| e.coding == Coding::Causal).count();
        let confounded = entries
            .iter()
            .filter(|e| e.coding == Coding::Confounded)
            .count();
        assert_eq!(causal, 41);
        assert_eq!(confounded, 6);
    }

    #[test]
    fn coding_rejects_duplicates_and_unknown_labels() {
        assert!(matches!(
            coding_from_text("t", "7,causal\n7,confounded\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        // ids are matched canonically, so 007 duplicates 7
        assert!(coding_from_text("t", "7,causal\npair007,confounded\n").is_err());
        assert!(matches!(
            coding_from_text("t", "3,maybe\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn canonical_ids() {
        assert_eq!(canonical_pair_id("pair0065"), "65");
        assert_eq!(canonical_pair_id("0065"), "65");
        assert_eq!(canonical_pair_id("65"), "65");
        assert_eq!(canonical_pair_id("pair0000"), "0");
        assert_eq!(canonical_pair_id("abalone"), "abalone");
    }

    #[test]
    fn pair_meta_parsing_and_filters() {
        let text = "pair0001 1 1 2 2 1.0\npair0002 1 3 4 4 0.5\npair0003 1 1 2 3 1.0\n";
        let entries = pair_meta_from_text("t", text).unwrap();
        assert_eq!(entries.len(), 3);
        assert!(!entries[0].cause_is_multivariate());
        assert!(entries[1].cause_is_multivariate());
        assert!(entries[1].effect_is_scalar());
        assert!(!entries[2].effect_is_scalar()); // multi-column effect: skip later

        assert!(matches!(
            pair_meta_from_text("t", "p 1 2 2 3 1.0\n"),
            Err(Error::Parse { .. })
        )); // overlapping ranges
        assert!(matches!(
            pair_meta_from_text("t", "p 1 1 2 2 0\n"),
            Err(Error::Parse { .. })
        )); // non-positive weight
        assert!(matches!(
            pair_meta_from_text("t", "p 1 1 2\n"),
            Err(Error::Parse { .. })
        )); // wrong field count
    }

    fn record(name: &str, l_ca: f64, l_co: f64) -> ResultRecord {
        let v = Verdict::from_lengths(CodeLengths {
            l_causal: l_ca,
            l_confounded: l_co,
        })
        .unwrap();
        ResultRecord::new(name, &v, 1.0)
    }

    #[test]
    fn empty_results_file_is_header_only() {
        let csv = results_to_csv(&[]);
        assert_eq!(csv, format!("{RESULTS_HEADER}\n"));
    }

    #[test]
    fn single_record_contents() {
        let csv = results_to_csv(&[record("a", 100.0, 80.0)]);
        let line = csv.lines().nth(1).unwrap();
        assert_eq!(line, "a,100,80,-0.2,confounded,1");
    }

    #[test]
    fn results_round_trip() {
        let records = vec![
            record("b-data", 123.456789012345, 120.0001),
            record("a-data", 55.5, 77.7),
        ];
        let csv = results_to_csv(&records);
        let back = results_from_csv("t", &csv).unwrap();
        // sorted by name on write
        assert_eq!(back[0].name, "a-data");
        assert_eq!(back[1].name, "b-data");
        let orig = &records[0];
        let echo = &back[1];
        assert_eq!(orig.l_causal_nats.to_bits(), echo.l_causal_nats.to_bits());
        assert_eq!(orig.confidence.to_bits(), echo.confidence.to_bits());
        assert_eq!(orig.label, echo.label);
    }

    #[test]
    fn results_reader_rejects_bad_input() {
        assert!(results_from_csv("t", "wrong,header\n").is_err());
        let bad = format!("{RESULTS_HEADER}\nname,1,2,0.1,causal\n");
        assert!(results_from_csv("t", &bad).is_err()); // 5 fields
        let bad = format!("{RESULTS_HEADER}\nname,1,inf,0.1,causal,1\n");
        assert!(results_from_csv("t", &bad).is_err()); // non-finite
    }
}
