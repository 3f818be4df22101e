//! Maximum-probability phoneme decoding.
//!
//! Each chunk of a segmented word is mapped to its most probable Hindi
//! phoneme and the results are concatenated. Chunks the knowledge base has
//! never seen go through a letter-level fallback table so that every
//! alphabetic input produces Devanagari output.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use thiserror::Error;

use crate::devanagari::{nfc, VIRAMA};
use crate::knowledge_base::KnowledgeBase;
use crate::ner_io::{EntityCategory, TaggedEntity};
use crate::phonology::{Phonology, UnitKind};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("empty input")]
    EmptyInput,
    #[error("fallback table line {line}: {message}")]
    FallbackTable { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    Kb,
    Fallback,
    PassThrough,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Kb => "KB",
            Origin::Fallback => "Fallback",
            Origin::PassThrough => "PassThrough",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChunkChoice {
    pub english: String,
    pub hindi: String,
    pub prob: f64,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransliterationResult {
    pub source: String,
    pub hindi: String,
    pub per_chunk: Vec<ChunkChoice>,
    /// Product of the probabilities of KB-chosen chunks.
    pub confidence: f64,
    /// Set when any chunk went through the fallback table or passed through.
    pub low_confidence: bool,
}

impl TransliterationResult {
    fn from_choices(source: &str, per_chunk: Vec<ChunkChoice>) -> Self {
        let hindi = per_chunk.iter().map(|c| c.hindi.as_str()).collect();
        let confidence = per_chunk
            .iter()
            .filter(|c| c.origin == Origin::Kb)
            .map(|c| c.prob)
            .product();
        let low_confidence = per_chunk.iter().any(|c| c.origin != Origin::Kb);
        TransliterationResult { source: source.to_string(), hindi, per_chunk, confidence, low_confidence }
    }

    /// `ra:रा|m:म` rendering of the per-chunk choices.
    pub fn chunk_trace(&self) -> String {
        self.per_chunk
            .iter()
            .map(|c| format!("{}:{}", c.english, c.hindi))
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Letter/digraph to Devanagari table used for unseen chunks.
///
/// Consonant units map to a bare consonant; vowel units have an independent
/// form (chunk-initial) and a dependent sign (after a consonant). Consecutive
/// consonants inside a chunk are joined with a virama.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FallbackTable {
    consonants: HashMap<String, String>,
    vowels: HashMap<String, (String, String)>,
}

const DEFAULT_CONSONANTS: [(&str, &str); 31] = [
    ("b", "ब"),
    ("c", "क"),
    ("d", "द"),
    ("f", "फ़"),
    ("g", "ग"),
    ("h", "ह"),
    ("j", "ज"),
    ("k", "क"),
    ("l", "ल"),
    ("m", "म"),
    ("n", "न"),
    ("p", "प"),
    ("q", "क़"),
    ("r", "र"),
    ("s", "स"),
    ("t", "त"),
    ("v", "व"),
    ("w", "व"),
    ("x", "क्स"),
    ("y", "य"),
    ("z", "ज़"),
    ("bh", "भ"),
    ("ch", "च"),
    ("dh", "ध"),
    ("gh", "घ"),
    ("jh", "झ"),
    ("kh", "ख"),
    ("ph", "फ"),
    ("sh", "श"),
    ("th", "थ"),
    ("lh", "ल्ह"),
];

// The dependent form of `a` is the inherent vowel, written as nothing.
const DEFAULT_VOWELS: [(&str, &str, &str); 5] = [
    ("a", "अ", ""),
    ("e", "ए", "े"),
    ("i", "इ", "ि"),
    ("o", "ओ", "ो"),
    ("u", "उ", "ु"),
];

impl Default for FallbackTable {
    fn default() -> Self {
        FallbackTable {
            consonants: DEFAULT_CONSONANTS.iter().map(|(k, v)| (k.to_string(), nfc(v))).collect(),
            vowels: DEFAULT_VOWELS
                .iter()
                .map(|(k, ind, dep)| (k.to_string(), (nfc(ind), nfc(dep))))
                .collect(),
        }
    }
}

impl FallbackTable {
    /// Overrides default entries from a TSV of `unit<TAB>form` (consonants)
    /// or `unit<TAB>independent<TAB>dependent` (vowels) lines.
    pub fn with_overrides<R: BufRead>(mut self, reader: R) -> Result<Self, DecodeError> {
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim_end_matches('\r');
            if text.trim().is_empty() || text.starts_with('#') {
                continue;
            }
            let err = |message: &str| DecodeError::FallbackTable { line: line_no, message: message.to_string() };
            let cols: Vec<&str> = text.split('\t').collect();
            let unit = cols[0].trim().to_ascii_lowercase();
            if unit.is_empty() || !unit.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(err("unit must be Latin letters"));
            }
            let is_vowel = unit.len() == 1 && matches!(unit.as_str(), "a" | "e" | "i" | "o" | "u");
            match (is_vowel, cols.len()) {
                (true, 3) => {
                    self.vowels.insert(unit, (nfc(cols[1].trim()), nfc(cols[2].trim())));
                }
                (false, 2) => {
                    self.consonants.insert(unit, nfc(cols[1].trim()));
                }
                (true, _) => return Err(err("vowel rows need independent and dependent forms")),
                (false, _) => return Err(err("consonant rows need exactly one form")),
            }
        }
        Ok(self)
    }

    /// Renders one chunk letter by letter.
    pub fn render(&self, phonology: &Phonology, chunk: &str) -> String {
        let mut out = String::new();
        let mut prev: Option<UnitKind> = None;
        for unit in phonology.group_units(chunk) {
            match unit.kind {
                UnitKind::C => {
                    if prev == Some(UnitKind::C) {
                        out.push(VIRAMA);
                    }
                    match self.consonants.get(&unit.text) {
                        Some(form) => out.push_str(form),
                        // Unlisted digraphs fall back to their letters.
                        None => {
                            let mut first = true;
                            for c in unit.text.chars() {
                                if !first {
                                    out.push(VIRAMA);
                                }
                                first = false;
                                if let Some(form) = self.consonants.get(&c.to_string()) {
                                    out.push_str(form);
                                }
                            }
                        }
                    }
                }
                UnitKind::V => {
                    if let Some((independent, dependent)) = self.vowels.get(&unit.text) {
                        if prev == Some(UnitKind::C) {
                            out.push_str(dependent);
                        } else {
                            out.push_str(independent);
                        }
                    }
                }
            }
            prev = Some(unit.kind);
        }
        nfc(&out)
    }
}

/// Per-chunk argmax decoder over a shared knowledge base.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    kb: &'a KnowledgeBase,
    phonology: Phonology,
    fallback: FallbackTable,
    skip: BTreeSet<EntityCategory>,
}

/// Entity-level outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum EntityOutput {
    Text {
        hindi: String,
        confidence: f64,
        low_confidence: bool,
        words: Vec<TransliterationResult>,
    },
    /// The entity's category is in the skip set.
    NoOutput,
}

impl<'a> Decoder<'a> {
    /// Default phonology, default fallback table, skip set `{Misc}`.
    pub fn new(kb: &'a KnowledgeBase) -> Self {
        Decoder {
            kb,
            phonology: Phonology::default(),
            fallback: FallbackTable::default(),
            skip: BTreeSet::from([EntityCategory::Misc]),
        }
    }

    pub fn with_phonology(mut self, phonology: Phonology) -> Self {
        self.phonology = phonology;
        self
    }

    pub fn with_fallback(mut self, fallback: FallbackTable) -> Self {
        self.fallback = fallback;
        self
    }

    pub fn with_skip(mut self, skip: BTreeSet<EntityCategory>) -> Self {
        self.skip = skip;
        self
    }

    pub fn kb(&self) -> &KnowledgeBase {
        self.kb
    }

    pub fn phonology(&self) -> &Phonology {
        &self.phonology
    }

    pub fn choose_phoneme(&self, chunk: &str) -> ChunkChoice {
        let english = chunk.to_ascii_lowercase();
        match self.kb.lookup(&english).first() {
            Some(best) => ChunkChoice { english, hindi: best.hindi.clone(), prob: best.prob, origin: Origin::Kb },
            None => {
                let hindi = self.fallback.render(&self.phonology, &english);
                ChunkChoice { english, hindi, prob: 1.0, origin: Origin::Fallback }
            }
        }
    }

    /// Transliterates one whitespace-free token. Letter runs are segmented
    /// and decoded; everything else (digits, punctuation, non-Latin text)
    /// passes through unchanged.
    pub fn transliterate_word(&self, word: &str) -> Result<TransliterationResult, DecodeError> {
        if word.is_empty() {
            return Err(DecodeError::EmptyInput);
        }
        let mut choices = Vec::new();
        for (is_letters, span) in letter_spans(word) {
            if !is_letters {
                choices.push(ChunkChoice {
                    english: span.to_string(),
                    hindi: span.to_string(),
                    prob: 1.0,
                    origin: Origin::PassThrough,
                });
                continue;
            }
            let segmented = self
                .phonology
                .segment_word(span)
                .expect("letter span is non-empty");
            choices.extend(segmented.chunks.iter().map(|c| self.choose_phoneme(&c.surface)));
        }
        Ok(TransliterationResult::from_choices(word, choices))
    }

    /// Transliterates every whitespace-separated token of `text` and joins
    /// the outputs with single spaces.
    pub fn transliterate_text(&self, text: &str) -> Result<EntityOutput, DecodeError> {
        let words = text
            .split_whitespace()
            .map(|w| self.transliterate_word(w))
            .collect::<Result<Vec<_>, _>>()?;
        if words.is_empty() {
            return Err(DecodeError::EmptyInput);
        }
        let hindi = words.iter().map(|w| w.hindi.as_str()).collect::<Vec<_>>().join(" ");
        let confidence = words.iter().map(|w| w.confidence).product();
        let low_confidence = words.iter().any(|w| w.low_confidence);
        Ok(EntityOutput::Text { hindi, confidence, low_confidence, words })
    }

    pub fn transliterate_entity(&self, entity: &TaggedEntity) -> Result<EntityOutput, DecodeError> {
        if self.skip.contains(&entity.category) {
            return Ok(EntityOutput::NoOutput);
        }
        self.transliterate_text(&entity.text)
    }
}

/// Splits a token into maximal runs of ASCII letters and of everything else.
fn letter_spans(word: &str) -> Vec<(bool, &str)> {
    let mut spans = Vec::new();
    let mut start = 0;
    let mut current: Option<bool> = None;
    for (i, c) in word.char_indices() {
        let is_letter = c.is_ascii_alphabetic();
        match current {
            Some(kind) if kind == is_letter => {}
            Some(kind) => {
                spans.push((kind, &word[start..i]));
                start = i;
                current = Some(is_letter);
            }
            None => current = Some(is_letter),
        }
    }
    if let Some(kind) = current {
        spans.push((kind, &word[start..]));
    }
    spans
}
