//! Consonant/vowel segmentation of romanized words.
//!
//! A word is first grouped into units (single letters, or a consonant
//! digraph such as `bh` that stands for one Hindi consonant) and then cut
//! into chunks of the shape `C*V+`. Consonants left over at the end of the
//! word form one final all-consonant chunk, so `Ram` becomes `Ra|m` and
//! `Suresh` becomes `Su|re|sh`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Consonant digraphs grouped into a single unit by default.
pub const DEFAULT_DIGRAPHS: [&str; 10] = ["bh", "ch", "dh", "gh", "jh", "kh", "ph", "sh", "th", "lh"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhonologyError {
    #[error("word {0:?} contains no Latin letters")]
    EmptyWord(String),
    #[error("invalid digraph {0:?}: expected two Latin consonants")]
    InvalidDigraph(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Vowel,
    Consonant,
    Other,
}

/// `a e i o u` in either case are vowels, every other ASCII letter
/// (including `y` and `w`) is a consonant, anything else is `Other`.
pub fn classify_char(c: char) -> CharClass {
    if !c.is_ascii_alphabetic() {
        return CharClass::Other;
    }
    match c.to_ascii_lowercase() {
        'a' | 'e' | 'i' | 'o' | 'u' => CharClass::Vowel,
        _ => CharClass::Consonant,
    }
}

/// Consonant/vowel shape of a chunk.
///
/// The first seven variants are the combinations a romanized word is built
/// from; `C`, `CC` and `CCV` also come out of real words (the `m` of `Ra|m`)
/// and are kept as their own labels. Anything else is `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChunkPattern {
    V,
    CV,
    VC,
    CVC,
    CCVC,
    CVCC,
    VCC,
    C,
    CC,
    CCV,
    Other,
}

impl ChunkPattern {
    pub fn as_str(self) -> &'static str {
        match self {
            ChunkPattern::V => "V",
            ChunkPattern::CV => "CV",
            ChunkPattern::VC => "VC",
            ChunkPattern::CVC => "CVC",
            ChunkPattern::CCVC => "CCVC",
            ChunkPattern::CVCC => "CVCC",
            ChunkPattern::VCC => "VCC",
            ChunkPattern::C => "C",
            ChunkPattern::CC => "CC",
            ChunkPattern::CCV => "CCV",
            ChunkPattern::Other => "Other",
        }
    }

    /// True for the seven base combinations, false for the extensions.
    pub fn is_base(self) -> bool {
        matches!(
            self,
            ChunkPattern::V
                | ChunkPattern::CV
                | ChunkPattern::VC
                | ChunkPattern::CVC
                | ChunkPattern::CCVC
                | ChunkPattern::CVCC
                | ChunkPattern::VCC
        )
    }
}

impl fmt::Display for ChunkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    C,
    V,
}

/// A single vowel, a single consonant, or a consonant digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub text: String,
    pub kind: UnitKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeChunk {
    pub surface: String,
    pub pattern: ChunkPattern,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedWord {
    pub original: String,
    pub chunks: Vec<PhonemeChunk>,
}

impl SegmentedWord {
    pub fn surfaces(&self) -> Vec<&str> {
        self.chunks.iter().map(|c| c.surface.as_str()).collect()
    }

    pub fn patterns(&self) -> Vec<ChunkPattern> {
        self.chunks.iter().map(|c| c.pattern).collect()
    }
}

/// Maps a C/V unit sequence to its pattern label.
pub fn classify_chunk(kinds: &[UnitKind]) -> ChunkPattern {
    use UnitKind::{C, V};
    match kinds {
        [V] => ChunkPattern::V,
        [C, V] => ChunkPattern::CV,
        [V, C] => ChunkPattern::VC,
        [C, V, C] => ChunkPattern::CVC,
        [C, C, V, C] => ChunkPattern::CCVC,
        [C, V, C, C] => ChunkPattern::CVCC,
        [V, C, C] => ChunkPattern::VCC,
        [C] => ChunkPattern::C,
        [C, C] => ChunkPattern::CC,
        [C, C, V] => ChunkPattern::CCV,
        _ => ChunkPattern::Other,
    }
}

/// Segmenter configured with a digraph inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phonology {
    digraphs: BTreeSet<String>,
}

impl Default for Phonology {
    fn default() -> Self {
        Phonology {
            digraphs: DEFAULT_DIGRAPHS.iter().map(|d| d.to_string()).collect(),
        }
    }
}

impl Phonology {
    pub fn with_digraphs<I, S>(digraphs: I) -> Result<Self, PhonologyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for d in digraphs {
            let d = d.as_ref().trim().to_ascii_lowercase();
            let ok = d.chars().count() == 2 && d.chars().all(|c| classify_char(c) == CharClass::Consonant);
            if !ok {
                return Err(PhonologyError::InvalidDigraph(d));
            }
            set.insert(d);
        }
        Ok(Phonology { digraphs: set })
    }

    pub fn digraphs(&self) -> impl Iterator<Item = &str> {
        self.digraphs.iter().map(String::as_str)
    }

    /// Groups the letters of `word` into units. Non-letters are dropped.
    pub fn group_units(&self, word: &str) -> Vec<Unit> {
        let letters: Vec<char> = word
            .chars()
            .filter(char::is_ascii_alphabetic)
            .map(|c| c.to_ascii_lowercase())
            .collect();
        let mut units = Vec::with_capacity(letters.len());
        let mut i = 0;
        while i < letters.len() {
            let c = letters[i];
            if classify_char(c) == CharClass::Vowel {
                units.push(Unit { text: c.to_string(), kind: UnitKind::V });
                i += 1;
                continue;
            }
            if let Some(&next) = letters.get(i + 1) {
                let pair: String = [c, next].iter().collect();
                if self.digraphs.contains(&pair) {
                    units.push(Unit { text: pair, kind: UnitKind::C });
                    i += 2;
                    continue;
                }
            }
            units.push(Unit { text: c.to_string(), kind: UnitKind::C });
            i += 1;
        }
        units
    }

    pub fn segment_word(&self, word: &str) -> Result<SegmentedWord, PhonologyError> {
        let units = self.group_units(word);
        if units.is_empty() {
            return Err(PhonologyError::EmptyWord(word.to_string()));
        }

        let mut groups: Vec<&[Unit]> = Vec::new();
        let mut start = 0;
        let mut i = 0;
        while i < units.len() {
            while i < units.len() && units[i].kind == UnitKind::C {
                i += 1;
            }
            if i == units.len() {
                break;
            }
            while i < units.len() && units[i].kind == UnitKind::V {
                i += 1;
            }
            groups.push(&units[start..i]);
            start = i;
        }
        if start < units.len() {
            groups.push(&units[start..]);
        }

        let chunks = groups
            .into_iter()
            .enumerate()
            .map(|(index, group)| {
                let kinds: Vec<UnitKind> = group.iter().map(|u| u.kind).collect();
                PhonemeChunk {
                    surface: group.iter().map(|u| u.text.as_str()).collect(),
                    pattern: classify_chunk(&kinds),
                    index,
                }
            })
            .collect();

        Ok(SegmentedWord { original: word.to_string(), chunks })
    }

    /// Re-derives the units of an already segmented chunk.
    pub fn chunk_units(&self, chunk: &PhonemeChunk) -> Vec<Unit> {
        self.group_units(&chunk.surface)
    }
}

impl FromStr for ChunkPattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "V" => ChunkPattern::V,
            "CV" => ChunkPattern::CV,
            "VC" => ChunkPattern::VC,
            "CVC" => ChunkPattern::CVC,
            "CCVC" => ChunkPattern::CCVC,
            "CVCC" => ChunkPattern::CVCC,
            "VCC" => ChunkPattern::VCC,
            "C" => ChunkPattern::C,
            "CC" => ChunkPattern::CC,
            "CCV" => ChunkPattern::CCV,
            "Other" => ChunkPattern::Other,
            _ => return Err(format!("unknown chunk pattern {s:?}")),
        })
    }
}

/// Segments with the default digraph inventory.
pub fn segment_word(word: &str) -> Result<SegmentedWord, PhonologyError> {
    Phonology::default().segment_word(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(word: &str) -> Vec<String> {
        segment_word(word).unwrap().chunks.into_iter().map(|c| c.surface).collect()
    }

    fn unit_texts(word: &str) -> Vec<String> {
        Phonology::default().group_units(word).into_iter().map(|u| u.text).collect()
    }

    #[test]
    fn char_classes() {
        assert_eq!(classify_char('a'), CharClass::Vowel);
        assert_eq!(classify_char('U'), CharClass::Vowel);
        assert_eq!(classify_char('m'), CharClass::Consonant);
        assert_eq!(classify_char('y'), CharClass::Consonant);
        assert_eq!(classify_char('w'), CharClass::Consonant);
        assert_eq!(classify_char('5'), CharClass::Other);
        assert_eq!(classify_char('-'), CharClass::Other);
        assert_eq!(classify_char('é'), CharClass::Other);
    }

    #[test]
    fn digraph_grouping() {
        assert_eq!(unit_texts("bho"), ["bh", "o"]);
        assert_eq!(unit_texts("ram"), ["r", "a", "m"]);
        assert_eq!(unit_texts("shi"), ["sh", "i"]);
        assert_eq!(unit_texts("Delhi"), ["d", "e", "lh", "i"]);
    }

    #[test]
    fn worked_examples() {
        assert_eq!(surfaces("Ram"), ["ra", "m"]);
        assert_eq!(surfaces("Bhopal"), ["bho", "pa", "l"]);
        assert_eq!(surfaces("Ramesh"), ["ra", "me", "sh"]);
        assert_eq!(surfaces("Delhi"), ["de", "lhi"]);
        assert_eq!(surfaces("Suresh"), ["su", "re", "sh"]);
    }

    #[test]
    fn patterns_of_worked_examples() {
        let w = segment_word("Ram").unwrap();
        assert_eq!(w.patterns(), [ChunkPattern::CV, ChunkPattern::C]);
        let w = segment_word("Suresh").unwrap();
        assert_eq!(w.patterns(), [ChunkPattern::CV, ChunkPattern::CV, ChunkPattern::C]);
        let w = segment_word("a").unwrap();
        assert_eq!(w.surfaces(), ["a"]);
        assert_eq!(w.patterns(), [ChunkPattern::V]);
    }

    #[test]
    fn chunk_classification() {
        use UnitKind::{C, V};
        assert_eq!(classify_chunk(&[C, V]), ChunkPattern::CV);
        assert_eq!(classify_chunk(&[C]), ChunkPattern::C);
        assert_eq!(classify_chunk(&[C, C, V, C]), ChunkPattern::CCVC);
        assert_eq!(classify_chunk(&[V, V]), ChunkPattern::Other);
        assert!(ChunkPattern::CVCC.is_base());
        assert!(!ChunkPattern::CCV.is_base());
    }

    #[test]
    fn without_lh_digraph_delhi_chunk_is_ccv() {
        let p = Phonology::with_digraphs(["sh"]).unwrap();
        let w = p.segment_word("Delhi").unwrap();
        assert_eq!(w.surfaces(), ["de", "lhi"]);
        assert_eq!(w.patterns(), [ChunkPattern::CV, ChunkPattern::CCV]);
    }

    #[test]
    fn non_letters_are_stripped() {
        assert_eq!(surfaces("O'Neil"), ["o", "nei", "l"]);
        assert_eq!(
            segment_word("1592"),
            Err(PhonologyError::EmptyWord("1592".into()))
        );
        assert!(segment_word("").is_err());
    }

    #[test]
    fn original_casing_is_kept() {
        let w = segment_word("BhoPAL").unwrap();
        assert_eq!(w.original, "BhoPAL");
        assert_eq!(w.surfaces(), ["bho", "pa", "l"]);
        let idx: Vec<usize> = w.chunks.iter().map(|c| c.index).collect();
        assert_eq!(idx, [0, 1, 2]);
    }

    #[test]
    fn bad_digraph_config() {
        assert!(Phonology::with_digraphs(["ae"]).is_err());
        assert!(Phonology::with_digraphs(["sch"]).is_err());
        assert!(Phonology::with_digraphs(["Th"]).is_ok());
    }
}
