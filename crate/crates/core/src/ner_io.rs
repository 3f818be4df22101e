//! Named-entity input: inline `token/Category` markup, two-column CoNLL,
//! and a heuristic tagger for untagged text.

use std::fmt;
use std::io::BufRead;
use std::ops::Range;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NerError {
    #[error("unknown category {name:?} at token {position}")]
    UnknownCategory { name: String, position: usize },
    #[error("malformed tag {token:?} at token {position}")]
    MalformedTag { token: String, position: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("read error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityCategory {
    Person,
    Location,
    Organization,
    Date,
    Time,
    Misc,
}

impl EntityCategory {
    pub const ALL: [EntityCategory; 6] = [
        EntityCategory::Person,
        EntityCategory::Location,
        EntityCategory::Organization,
        EntityCategory::Date,
        EntityCategory::Time,
        EntityCategory::Misc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityCategory::Person => "Person",
            EntityCategory::Location => "Location",
            EntityCategory::Organization => "Organization",
            EntityCategory::Date => "Date",
            EntityCategory::Time => "Time",
            EntityCategory::Misc => "Misc",
        }
    }
}

impl fmt::Display for EntityCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityCategory {
    type Err = String;

    /// Case-insensitive; also accepts the usual short labels (`PER`, `LOC`,
    /// `ORG`, `MISC`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "person" | "per" => EntityCategory::Person,
            "location" | "loc" => EntityCategory::Location,
            "organization" | "organisation" | "org" => EntityCategory::Organization,
            "date" => EntityCategory::Date,
            "time" => EntityCategory::Time,
            "misc" => EntityCategory::Misc,
            _ => return Err(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedEntity {
    pub text: String,
    pub category: EntityCategory,
    pub sentence_id: usize,
    /// Token index range within the sentence.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub id: usize,
    pub tokens: Vec<String>,
    /// Disjoint, sorted by span.
    pub entities: Vec<TaggedEntity>,
}

impl TaggedSentence {
    /// Builds a sentence from per-token labels. Consecutive tokens with the
    /// same category form one entity unless `starts[i]` forces a boundary.
    fn from_labels(id: usize, tokens: Vec<String>, labels: &[Option<EntityCategory>], starts: &[bool]) -> Self {
        let mut entities = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let Some(cat) = labels[i] else {
                i += 1;
                continue;
            };
            let start = i;
            i += 1;
            while i < tokens.len() && labels[i] == Some(cat) && !starts[i] {
                i += 1;
            }
            entities.push(TaggedEntity {
                text: tokens[start..i].join(" "),
                category: cat,
                sentence_id: id,
                span: start..i,
            });
        }
        TaggedSentence { id, tokens, entities }
    }

    /// Per-token labels: the entity category and whether the token opens an
    /// entity.
    fn labels(&self) -> Vec<Option<(EntityCategory, bool)>> {
        let mut labels = vec![None; self.tokens.len()];
        for e in &self.entities {
            for i in e.span.clone() {
                labels[i] = Some((e.category, i == e.span.start));
            }
        }
        labels
    }
}

// Lowercase words absorbed into an entity when both neighbours carry the
// same category ("Institute of Technology").
const FUNCTION_WORDS: [&str; 11] = ["of", "the", "and", "for", "de", "da", "di", "del", "la", "van", "von"];

fn is_function_word(token: &str) -> bool {
    FUNCTION_WORDS.contains(&token)
}

const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?'];

/// Splits trailing sentence punctuation off a token, unless the token is
/// nothing but punctuation.
fn peel_punct(token: &str) -> (&str, Option<&str>) {
    let core = token.trim_end_matches(TRAILING_PUNCT);
    if core.is_empty() || core.len() == token.len() {
        (token, None)
    } else {
        (core, Some(&token[core.len()..]))
    }
}

/// Parses one line of inline markup such as
/// `Ram/Person is going to Bhopal/Location`.
pub fn parse_inline(line: &str, sentence_id: usize) -> Result<TaggedSentence, NerError> {
    let mut tokens: Vec<String> = Vec::new();
    let mut labels: Vec<Option<EntityCategory>> = Vec::new();

    for (position, raw) in line.split_whitespace().enumerate() {
        match raw.rfind('/') {
            Some(slash) => {
                let word = &raw[..slash];
                let (tag, punct) = peel_punct(&raw[slash + 1..]);
                if word.is_empty() || tag.is_empty() || tag.chars().all(|c| TRAILING_PUNCT.contains(&c)) {
                    return Err(NerError::MalformedTag { token: raw.to_string(), position });
                }
                let cat = tag
                    .parse::<EntityCategory>()
                    .map_err(|name| NerError::UnknownCategory { name, position })?;
                tokens.push(word.to_string());
                labels.push(Some(cat));
                if let Some(p) = punct {
                    tokens.push(p.to_string());
                    labels.push(None);
                }
            }
            None => {
                let (word, punct) = peel_punct(raw);
                tokens.push(word.to_string());
                labels.push(None);
                if let Some(p) = punct {
                    tokens.push(p.to_string());
                    labels.push(None);
                }
            }
        }
    }

    absorb_function_words(&tokens, &mut labels);
    let starts = vec![false; tokens.len()];
    Ok(TaggedSentence::from_labels(sentence_id, tokens, &labels, &starts))
}

fn absorb_function_words(tokens: &[String], labels: &mut [Option<EntityCategory>]) {
    let mut i = 1;
    while i + 1 < tokens.len() {
        if labels[i].is_none() && labels[i - 1].is_some() && is_function_word(&tokens[i]) {
            // Allow runs like "of the".
            let mut j = i;
            while j < tokens.len() && labels[j].is_none() && is_function_word(&tokens[j]) {
                j += 1;
            }
            let cat = labels[i - 1];
            if j < tokens.len() && labels[j] == cat {
                for label in &mut labels[i..j] {
                    *label = cat;
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
}

/// Renders a sentence back into inline markup.
pub fn render_inline(sentence: &TaggedSentence) -> String {
    sentence
        .labels()
        .iter()
        .zip(&sentence.tokens)
        .map(|(label, tok)| match label {
            Some((cat, _)) => format!("{tok}/{cat}"),
            None => tok.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders a sentence as `token<TAB>label` lines with `B-`/`I-` prefixes,
/// followed by a blank line.
pub fn render_conll(sentence: &TaggedSentence) -> String {
    let mut out = String::new();
    for (label, tok) in sentence.labels().iter().zip(&sentence.tokens) {
        let tag = match label {
            Some((cat, true)) => format!("B-{cat}"),
            Some((cat, false)) => format!("I-{cat}"),
            None => "O".to_string(),
        };
        out.push_str(tok);
        out.push('\t');
        out.push_str(&tag);
        out.push('\n');
    }
    out.push('\n');
    out
}

fn parse_conll_label(label: &str) -> Result<(Option<EntityCategory>, bool), String> {
    if label == "O" {
        return Ok((None, false));
    }
    let (begin, name) = match label.split_once('-') {
        Some(("B", rest)) => (true, rest),
        Some(("I", rest)) => (false, rest),
        _ => (false, label),
    };
    let cat = name.parse::<EntityCategory>().map_err(|n| format!("unknown category {n:?}"))?;
    Ok((Some(cat), begin))
}

/// Parses two-column CoNLL-style input. Blank lines separate sentences.
pub fn parse_conll<R: BufRead>(reader: R) -> Result<Vec<TaggedSentence>, NerError> {
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut labels = Vec::new();
    let mut starts = Vec::new();

    let mut flush = |tokens: &mut Vec<String>, labels: &mut Vec<Option<EntityCategory>>, starts: &mut Vec<bool>| {
        if !tokens.is_empty() {
            let id = sentences.len();
            sentences.push(TaggedSentence::from_labels(id, std::mem::take(tokens), labels, starts));
            labels.clear();
            starts.clear();
        }
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| NerError::Io(e.to_string()))?;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() {
            flush(&mut tokens, &mut labels, &mut starts);
            continue;
        }
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 2 || cols[0].is_empty() {
            return Err(NerError::Parse { line: i + 1, message: format!("expected 2 columns, found {}", cols.len()) });
        }
        let (cat, begin) =
            parse_conll_label(cols[1].trim()).map_err(|message| NerError::Parse { line: i + 1, message })?;
        tokens.push(cols[0].to_string());
        labels.push(cat);
        starts.push(begin);
    }
    flush(&mut tokens, &mut labels, &mut starts);
    Ok(sentences)
}

struct Patterns {
    year: Regex,
    era: Regex,
    time: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        year: Regex::new(r"^[0-9]{4}$").unwrap(),
        era: Regex::new(r"^(AD|BC|A\.D\.?|B\.C\.?)$").unwrap(),
        time: Regex::new(r"^([01]?[0-9]|2[0-3]):[0-5][0-9]$").unwrap(),
    })
}

/// Heuristic tagger for untagged text. It is a rough stand-in for a real
/// NER system:
///
/// * four-digit numbers, optionally followed by `AD`/`BC`, become `Date`;
/// * `H:MM`/`HH:MM` become `Time`;
/// * runs of capitalized tokens become `Misc`, except the sentence-initial
///   token; lowercase function words between capitalized tokens are kept
///   inside the run.
pub fn fallback_tag(sentence: &str, sentence_id: usize) -> TaggedSentence {
    let p = patterns();
    let mut tokens = Vec::new();
    for raw in sentence.split_whitespace() {
        let (word, punct) = peel_punct(raw);
        tokens.push(word.to_string());
        if let Some(punct) = punct {
            tokens.push(punct.to_string());
        }
    }

    let mut labels: Vec<Option<EntityCategory>> = vec![None; tokens.len()];
    let mut starts = vec![false; tokens.len()];
    let mut i = 0;
    while i < tokens.len() {
        let tok = tokens[i].as_str();
        if p.year.is_match(tok) {
            labels[i] = Some(EntityCategory::Date);
            starts[i] = true;
            if tokens.get(i + 1).is_some_and(|t| p.era.is_match(t)) {
                labels[i + 1] = Some(EntityCategory::Date);
                i += 1;
            }
        } else if p.time.is_match(tok) {
            labels[i] = Some(EntityCategory::Time);
            starts[i] = true;
        } else if i > 0 && tok.chars().next().is_some_and(|c| c.is_uppercase()) {
            labels[i] = Some(EntityCategory::Misc);
        }
        i += 1;
    }
    absorb_function_words(&tokens, &mut labels);
    TaggedSentence::from_labels(sentence_id, tokens, &labels, &starts)
}
