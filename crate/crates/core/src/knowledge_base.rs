//! English→Hindi phoneme knowledge base.
//!
//! Counts are the source of truth. Probabilities are always derived as
//! `count(english, hindi) / count(english)` and are never read from disk.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::devanagari::{is_hindi_char, nfc, split_aksharas};
use crate::phonology::{CharClass, Phonology, classify_char};

/// Header line of a KB file.
pub const KB_HEADER: &str = "english\thindi\tcount";

const SEED_KB: &str = include_str!("../data/seed_kb.tsv");

#[derive(Debug, Error)]
pub enum KbError {
    #[error("invalid phoneme pair: {0}")]
    InvalidPair(String),
    #[error("no valid pairs in source")]
    EmptySource,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("probabilities for {english:?} do not normalize (sum {sum})")]
    InvariantViolation { english: String, sum: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhonemePair {
    english: String,
    hindi: String,
}

impl PhonemePair {
    /// Validates and normalizes a pair: English is case-folded, Hindi is
    /// NFC-normalized.
    pub fn new(english: &str, hindi: &str) -> Result<Self, KbError> {
        let english = english.trim().to_ascii_lowercase();
        if english.is_empty() || !english.chars().all(|c| classify_char(c) != CharClass::Other) {
            return Err(KbError::InvalidPair(format!("english side {english:?} must be Latin letters")));
        }
        let hindi = nfc(hindi.trim());
        if hindi.is_empty() || !hindi.chars().all(is_hindi_char) {
            return Err(KbError::InvalidPair(format!("hindi side {hindi:?} must be Devanagari")));
        }
        Ok(PhonemePair { english, hindi })
    }

    pub fn english(&self) -> &str {
        &self.english
    }

    pub fn hindi(&self) -> &str {
        &self.hindi
    }
}

/// Raw `Count(English, Hindi)` and `Count(English)` tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounts {
    joint: BTreeMap<String, BTreeMap<String, u64>>,
}

impl PairCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, pair: &PhonemePair) {
        self.add_count(pair.english(), pair.hindi(), 1);
    }

    fn add_count(&mut self, english: &str, hindi: &str, n: u64) {
        *self
            .joint
            .entry(english.to_string())
            .or_default()
            .entry(hindi.to_string())
            .or_insert(0) += n;
    }

    pub fn merge(&mut self, other: &PairCounts) {
        for (e, row) in &other.joint {
            for (h, n) in row {
                self.add_count(e, h, *n);
            }
        }
    }

    pub fn joint(&self, english: &str, hindi: &str) -> u64 {
        self.joint.get(english).and_then(|r| r.get(hindi)).copied().unwrap_or(0)
    }

    pub fn marginal(&self, english: &str) -> u64 {
        self.joint.get(english).map(|r| r.values().sum()).unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.joint.values().flat_map(|r| r.values()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.joint.is_empty()
    }

    /// `(english, hindi, count)` triples in sorted order.
    pub fn triples(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.joint
            .iter()
            .flat_map(|(e, row)| row.iter().map(move |(h, n)| (e.as_str(), h.as_str(), *n)))
    }
}

/// Tallies a stream of pairs.
pub fn ingest_pairs<I>(pairs: I) -> Result<PairCounts, KbError>
where
    I: IntoIterator<Item = PhonemePair>,
{
    let mut counts = PairCounts::new();
    for p in pairs {
        counts.add(&p);
    }
    if counts.is_empty() {
        return Err(KbError::EmptySource);
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Default)]
pub struct IngestStats {
    pub read: usize,
    pub skipped: Vec<SkippedLine>,
    pub unalignable: usize,
}

/// Reads an `english<TAB>hindi` corpus into `counts`. Blank lines and `#`
/// comments are ignored; malformed lines are recorded in `stats` and skipped.
pub fn read_pair_corpus<R: BufRead>(
    reader: R,
    counts: &mut PairCounts,
    stats: &mut IngestStats,
) -> Result<(), KbError> {
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() || text.trim_start().starts_with('#') {
            continue;
        }
        let mut cols = text.split('\t');
        let (Some(e), Some(h), None) = (cols.next(), cols.next(), cols.next()) else {
            stats.skipped.push(SkippedLine { line: line_no, reason: "expected 2 tab-separated columns".into() });
            continue;
        };
        match PhonemePair::new(e, h) {
            Ok(p) => {
                counts.add(&p);
                stats.read += 1;
            }
            Err(err) => stats.skipped.push(SkippedLine { line: line_no, reason: err.to_string() }),
        }
    }
    Ok(())
}

/// Reads an `english_word<TAB>hindi_word` corpus, aligning each pair
/// chunk-by-akshara. Unalignable pairs are counted, not fatal.
pub fn read_word_pair_corpus<R: BufRead>(
    reader: R,
    phonology: &Phonology,
    counts: &mut PairCounts,
    stats: &mut IngestStats,
) -> Result<(), KbError> {
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() || text.trim_start().starts_with('#') {
            continue;
        }
        let mut cols = text.split('\t');
        let (Some(e), Some(h), None) = (cols.next(), cols.next(), cols.next()) else {
            stats.skipped.push(SkippedLine { line: line_no, reason: "expected 2 tab-separated columns".into() });
            continue;
        };
        match align_word_pair(phonology, e.trim(), h.trim()) {
            Alignment::Aligned(pairs) => {
                for p in &pairs {
                    counts.add(p);
                }
                stats.read += pairs.len();
            }
            Alignment::Unalignable { .. } => stats.unalignable += 1,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Alignment {
    Aligned(Vec<PhonemePair>),
    Unalignable { chunks: usize, aksharas: usize },
}

/// Pairs the chunks of `english_word` with the aksharas of `hindi_word`
/// positionally, when the two counts agree.
pub fn align_word_pair(phonology: &Phonology, english_word: &str, hindi_word: &str) -> Alignment {
    let chunks = match phonology.segment_word(english_word) {
        Ok(w) => w.chunks,
        Err(_) => return Alignment::Unalignable { chunks: 0, aksharas: split_aksharas(hindi_word).len() },
    };
    let aksharas = split_aksharas(hindi_word);
    if chunks.len() != aksharas.len() {
        return Alignment::Unalignable { chunks: chunks.len(), aksharas: aksharas.len() };
    }
    let pairs: Result<Vec<_>, _> = chunks
        .iter()
        .zip(&aksharas)
        .map(|(c, a)| PhonemePair::new(&c.surface, a))
        .collect();
    match pairs {
        Ok(pairs) => Alignment::Aligned(pairs),
        Err(_) => Alignment::Unalignable { chunks: chunks.len(), aksharas: aksharas.len() },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KbEntry {
    pub english: String,
    pub hindi: String,
    pub count: u64,
    pub prob: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbMetadata {
    pub source: String,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub total_pairs: u64,
}

/// Immutable phoneme mapping table. Each english phoneme's entries are kept
/// in lookup order: probability descending, then Hindi string ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeBase {
    entries: BTreeMap<String, Vec<KbEntry>>,
    counts: PairCounts,
    pub metadata: KbMetadata,
}

fn lookup_order(a: &KbEntry, b: &KbEntry) -> std::cmp::Ordering {
    b.prob.total_cmp(&a.prob).then_with(|| a.hindi.cmp(&b.hindi))
}

/// Relative-frequency estimate over `counts`.
pub fn estimate(counts: &PairCounts) -> Result<KnowledgeBase, KbError> {
    if counts.is_empty() {
        return Err(KbError::EmptySource);
    }
    let mut entries = BTreeMap::new();
    for (english, row) in &counts.joint {
        let denom: u64 = row.values().sum();
        if denom == 0 {
            return Err(KbError::InvariantViolation { english: english.clone(), sum: f64::NAN });
        }
        let mut list: Vec<KbEntry> = row
            .iter()
            .map(|(hindi, &count)| KbEntry {
                english: english.clone(),
                hindi: hindi.clone(),
                count,
                prob: count as f64 / denom as f64,
            })
            .collect();
        let sum: f64 = list.iter().map(|e| e.prob).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(KbError::InvariantViolation { english: english.clone(), sum });
        }
        list.sort_by(lookup_order);
        entries.insert(english.clone(), list);
    }
    Ok(KnowledgeBase {
        entries,
        counts: counts.clone(),
        metadata: KbMetadata { source: String::new(), created: 0, total_pairs: counts.total() },
    })
}

impl KnowledgeBase {
    /// The bundled seed table.
    pub fn seed() -> Self {
        let mut kb = load_kb(SEED_KB.as_bytes()).expect("bundled seed KB is well-formed");
        kb.metadata.source = "bundled seed".into();
        kb
    }

    /// Candidates for `english`, best first. Unknown phonemes give an empty
    /// slice.
    pub fn lookup(&self, english: &str) -> &[KbEntry] {
        let key = english.to_ascii_lowercase();
        self.entries.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn counts(&self) -> &PairCounts {
        &self.counts
    }

    pub fn phonemes(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &KbEntry> {
        self.entries.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Writes the KB as TSV. Metadata goes into leading `#` comment lines,
/// rows are sorted by (english, hindi).
pub fn save_kb<W: Write>(kb: &KnowledgeBase, mut out: W) -> Result<(), KbError> {
    let source = kb.metadata.source.replace(['\n', '\r'], " ");
    writeln!(out, "# source: {source}")?;
    writeln!(out, "# created: {}", kb.metadata.created)?;
    writeln!(out, "# total_pairs: {}", kb.counts.total())?;
    writeln!(out, "{KB_HEADER}")?;
    for (e, h, n) in kb.counts.triples() {
        writeln!(out, "{e}\t{h}\t{n}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_kb<R: BufRead>(reader: R) -> Result<KnowledgeBase, KbError> {
    let mut counts = PairCounts::new();
    let mut metadata = KbMetadata::default();
    let mut seen_header = false;

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim_end_matches('\r');
        let parse_err = |message: String| KbError::Parse { line: line_no, message };

        if let Some(comment) = text.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "source" => metadata.source = value.to_string(),
                    "created" => metadata.created = value.parse().unwrap_or(0),
                    _ => {}
                }
            }
            continue;
        }
        if text.trim().is_empty() {
            continue;
        }
        if !seen_header {
            if text != KB_HEADER {
                return Err(parse_err(format!("expected header {KB_HEADER:?}")));
            }
            seen_header = true;
            continue;
        }
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 3 {
            return Err(parse_err(format!("expected 3 columns, found {}", cols.len())));
        }
        let pair = PhonemePair::new(cols[0], cols[1]).map_err(|e| parse_err(e.to_string()))?;
        let count: u64 = cols[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("count {:?} is not a non-negative integer", cols[2])))?;
        if counts.joint.get(pair.english()).is_some_and(|r| r.contains_key(pair.hindi())) {
            return Err(parse_err(format!("duplicate row ({}, {})", pair.english(), pair.hindi())));
        }
        counts.add_count(pair.english(), pair.hindi(), count);
    }
    if !seen_header {
        return Err(KbError::Parse { line: 0, message: "missing header".into() });
    }
    let mut kb = estimate(&counts)?;
    kb.metadata.source = metadata.source;
    kb.metadata.created = metadata.created;
    Ok(kb)
}
