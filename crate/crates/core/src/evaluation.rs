//! Precision / recall / F-measure scoring of system transliterations
//! against human references.
//!
//! `precision = correct / system`, `recall = correct / reference` and
//! `F = 2PR / (P + R)`. A record is correct when its NFC-normalized output
//! equals the NFC-normalized reference exactly.

use std::fmt::Write as _;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

use crate::devanagari::nfc;
use crate::ner_io::EntityCategory;

/// Literal used for "no output" in evaluation files.
pub const NO_OUTPUT: &str = "-";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no records to evaluate")]
    EmptyEvaluation,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("read error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRecord {
    pub entity_text: String,
    pub category: EntityCategory,
    pub system_output: Option<String>,
    pub reference: String,
}

impl EvalRecord {
    pub fn is_correct(&self) -> bool {
        self.system_output
            .as_deref()
            .is_some_and(|out| nfc(out) == nfc(&self.reference))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub reference: u64,
    pub system: u64,
    pub correct: u64,
}

impl Counts {
    fn add(&mut self, other: Counts) {
        self.reference += other.reference;
        self.system += other.system;
        self.correct += other.correct;
    }

    fn of(record: &EvalRecord) -> Counts {
        Counts {
            reference: 1,
            system: u64::from(record.system_output.is_some()),
            correct: u64::from(record.is_correct()),
        }
    }
}

/// Counts plus the metrics derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// No system output: precision is reported as 0.
    pub precision_undefined: bool,
}

impl Score {
    pub fn from_counts(counts: Counts) -> Score {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(counts.correct, counts.system);
        let recall = ratio(counts.correct, counts.reference);
        let f_measure = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Score { counts, precision, recall, f_measure, precision_undefined: counts.system == 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// One row per category, in `EntityCategory::ALL` order, zeros included.
    pub per_category: Vec<(EntityCategory, Score)>,
    pub total: Score,
}

impl EvalReport {
    /// Builds a report from per-category counts; missing categories are zero.
    pub fn from_category_counts(rows: &[(EntityCategory, Counts)]) -> EvalReport {
        let mut per = [Counts::default(); 6];
        for (cat, c) in rows {
            per[cat_index(*cat)].add(*c);
        }
        let mut total = Counts::default();
        for c in per {
            total.add(c);
        }
        EvalReport {
            per_category: EntityCategory::ALL
                .iter()
                .zip(per)
                .map(|(cat, c)| (*cat, Score::from_counts(c)))
                .collect(),
            total: Score::from_counts(total),
        }
    }

    pub fn category(&self, cat: EntityCategory) -> &Score {
        &self.per_category[cat_index(cat)].1
    }
}

fn cat_index(cat: EntityCategory) -> usize {
    EntityCategory::ALL.iter().position(|c| *c == cat).expect("closed enum")
}

pub fn score(records: &[EvalRecord]) -> Result<Score, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyEvaluation);
    }
    let mut counts = Counts::default();
    for r in records {
        counts.add(Counts::of(r));
    }
    Ok(Score::from_counts(counts))
}

pub fn per_category_report(records: &[EvalRecord]) -> Result<EvalReport, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyEvaluation);
    }
    let rows: Vec<(EntityCategory, Counts)> = records.iter().map(|r| (r.category, Counts::of(r))).collect();
    Ok(EvalReport::from_category_counts(&rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Tsv,
    JsonLines,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "tsv" => Ok(ReportFormat::Tsv),
            "jsonl" | "json-lines" => Ok(ReportFormat::JsonLines),
            _ => Err(format!("unknown report format {s:?} (expected text, tsv or jsonl)")),
        }
    }
}

const TSV_HEADER: &str = "category\treference\tsystem\tcorrect\tprecision\trecall\tf_measure\tprecision_undefined";

pub fn render_report(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Tsv => render_tsv(report),
        ReportFormat::JsonLines => render_jsonl(report),
    }
}

fn render_text(report: &EvalReport) -> String {
    let t = &report.total;
    let mut out = String::new();
    let _ = writeln!(out, "Total Name Entities  {}", t.counts.reference);
    let _ = writeln!(out, "System Generated Name Entities  {}", t.counts.system);
    let _ = writeln!(out, "Human Generated Name Entities  {}", t.counts.reference);
    let _ = writeln!(out, "Correct Name Entities  {}", t.counts.correct);
    let _ = writeln!(out, "Precision  {:.4}", t.precision);
    let _ = writeln!(out, "Recall  {:.4}", t.recall);
    let _ = writeln!(out, "F-Measure  {:.4}", t.f_measure);
    out.push('\n');

    let rows = report
        .per_category
        .iter()
        .map(|(cat, s)| (cat.as_str(), s))
        .chain(std::iter::once(("Total", &report.total)));
    let mut table = vec![[
        "Category".to_string(),
        "Count".to_string(),
        "System".to_string(),
        "Correct".to_string(),
        "Precision".to_string(),
        "Recall".to_string(),
        "F-Measure".to_string(),
    ]];
    let mut any_undefined = false;
    for (name, s) in rows {
        any_undefined |= s.precision_undefined;
        let mark = if s.precision_undefined { "*" } else { "" };
        table.push([
            name.to_string(),
            s.counts.reference.to_string(),
            s.counts.system.to_string(),
            s.counts.correct.to_string(),
            format!("{:.4}{mark}", s.precision),
            format!("{:.4}", s.recall),
            format!("{:.4}", s.f_measure),
        ]);
    }
    let mut widths = [0usize; 7];
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (cell, w))| if i == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    if any_undefined {
        let _ = writeln!(out, "\n* no system output; precision undefined, reported as 0");
    }
    out
}

fn render_tsv(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TSV_HEADER}");
    let rows = report
        .per_category
        .iter()
        .map(|(cat, s)| (cat.as_str(), s))
        .chain(std::iter::once(("Total", &report.total)));
    for (name, s) in rows {
        let _ = writeln!(
            out,
            "{name}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{}",
            s.counts.reference,
            s.counts.system,
            s.counts.correct,
            s.precision,
            s.recall,
            s.f_measure,
            u8::from(s.precision_undefined)
        );
    }
    out
}

fn render_jsonl(report: &EvalReport) -> String {
    let mut out = String::new();
    let rows = report
        .per_category
        .iter()
        .map(|(cat, s)| (cat.as_str(), s))
        .chain(std::iter::once(("Total", &report.total)));
    for (name, s) in rows {
        let _ = writeln!(
            out,
            "{{\"category\":\"{name}\",\"reference\":{},\"system\":{},\"correct\":{},\"precision\":{:.4},\"recall\":{:.4},\"f_measure\":{:.4},\"precision_undefined\":{}}}",
            s.counts.reference,
            s.counts.system,
            s.counts.correct,
            s.precision,
            s.recall,
            s.f_measure,
            s.precision_undefined
        );
    }
    out
}

/// Reads a TSV report back. Counts are authoritative; metrics are
/// recomputed and the Total row is checked against the category sums.
pub fn parse_report_tsv(text: &str) -> Result<EvalReport, EvalError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TSV_HEADER => {}
        _ => return Err(EvalError::Parse { line: 1, message: "missing report header".into() }),
    }
    let mut rows = Vec::new();
    let mut total: Option<Counts> = None;
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |message: String| EvalError::Parse { line: line_no, message };
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 {
            return Err(err(format!("expected 8 columns, found {}", cols.len())));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| err(format!("bad count {s:?}")));
        let counts = Counts { reference: num(cols[1])?, system: num(cols[2])?, correct: num(cols[3])? };
        if cols[0] == "Total" {
            total = Some(counts);
        } else {
            let cat = cols[0].parse::<EntityCategory>().map_err(|n| err(format!("unknown category {n:?}")))?;
            rows.push((cat, counts));
        }
    }
    let report = EvalReport::from_category_counts(&rows);
    match total {
        Some(t) if t == report.total.counts => Ok(report),
        Some(_) => Err(EvalError::Parse { line: 0, message: "Total row does not equal category sums".into() }),
        None => Err(EvalError::Parse { line: 0, message: "missing Total row".into() }),
    }
}

/// Reads `entity_text<TAB>category<TAB>system_output<TAB>reference` rows.
/// `-` in the output column means no output. Blank lines, `#` comments and
/// a leading `entity_text` header are skipped.
pub fn read_eval_records<R: BufRead>(reader: R) -> Result<Vec<EvalRecord>, EvalError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| EvalError::Io(e.to_string()))?;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() || text.starts_with('#') || (records.is_empty() && text.starts_with("entity_text\t")) {
            continue;
        }
        let err = |message: String| EvalError::Parse { line: line_no, message };
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 4 {
            return Err(err(format!("expected 4 columns, found {}", cols.len())));
        }
        let category = cols[1]
            .trim()
            .parse::<EntityCategory>()
            .map_err(|n| err(format!("unknown category {n:?}")))?;
        let reference = cols[3].trim();
        if reference.is_empty() {
            return Err(err("empty reference".into()));
        }
        let output = cols[2].trim();
        records.push(EvalRecord {
            entity_text: cols[0].to_string(),
            category,
            system_output: (output != NO_OUTPUT).then(|| output.to_string()),
            reference: reference.to_string(),
        });
    }
    Ok(records)
}
