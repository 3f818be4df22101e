//! Devanagari character classes and akshara splitting.

use unicode_normalization::UnicodeNormalization;

pub const ZWNJ: char = '\u{200C}';
pub const ZWJ: char = '\u{200D}';
pub const VIRAMA: char = '\u{094D}';

pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

pub fn is_devanagari(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c)
}

/// Devanagari block plus the two joiners.
pub fn is_hindi_char(c: char) -> bool {
    is_devanagari(c) || c == ZWJ || c == ZWNJ
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Consonant,
    IndependentVowel,
    /// Dependent vowel signs, nukta, virama, anusvara, visarga, candrabindu
    /// and the joiners. All attach to the preceding character.
    Combining,
    Virama,
    Other,
}

fn kind(c: char) -> Kind {
    match c {
        VIRAMA => Kind::Virama,
        '\u{0915}'..='\u{0939}' | '\u{0958}'..='\u{095F}' | '\u{0978}'..='\u{097F}' => Kind::Consonant,
        '\u{0904}'..='\u{0914}' | '\u{0960}' | '\u{0961}' | '\u{0972}'..='\u{0977}' => Kind::IndependentVowel,
        '\u{0900}'..='\u{0903}'
        | '\u{093A}'..='\u{093C}'
        | '\u{093E}'..='\u{094C}'
        | '\u{094E}'..='\u{094F}'
        | '\u{0951}'..='\u{0957}'
        | '\u{0962}'
        | '\u{0963}'
        | ZWJ
        | ZWNJ => Kind::Combining,
        _ => Kind::Other,
    }
}

/// Splits NFC Devanagari text into aksharas.
///
/// An akshara is any number of consonant+virama pairs, then a consonant
/// with an optional vowel sign, or an independent vowel; anusvara, visarga
/// and candrabindu stay with the akshara they follow. A consonant directly
/// after a virama continues the current akshara (a conjunct).
pub fn split_aksharas(text: &str) -> Vec<String> {
    let text = nfc(text);
    let mut out: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut after_virama = false;

    for c in text.chars() {
        match kind(c) {
            Kind::Consonant if after_virama => {
                current.push(c);
                after_virama = false;
            }
            Kind::Consonant | Kind::IndependentVowel | Kind::Other => {
                if !current.is_empty() {
                    out.push(std::mem::take(&mut current));
                }
                current.push(c);
                after_virama = false;
            }
            Kind::Virama => {
                current.push(c);
                after_virama = true;
            }
            Kind::Combining => {
                current.push(c);
                // A joiner after a virama keeps the conjunct open.
                if !(after_virama && (c == ZWJ || c == ZWNJ)) {
                    after_virama = false;
                }
            }
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}
