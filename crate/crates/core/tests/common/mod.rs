#![allow(dead_code)]

//! Generators and brute-force oracles shared by the integration tests.
//! Nothing here calls into the code paths it is used to check.

use proptest::prelude::*;

use nametranslit::knowledge_base::{estimate, ingest_pairs, PhonemePair};
use nametranslit::KnowledgeBase;

pub const ENGLISH_POOL: [&str; 8] = ["a", "ra", "bho", "m", "sh", "shi", "lhi", "kra"];
pub const HINDI_POOL: [&str; 10] = ["अ", "आ", "रा", "र", "भो", "म", "श", "शि", "लही", "क्र"];

/// Small random phoneme-pair corpus.
pub fn pair_corpus() -> impl Strategy<Value = Vec<(String, String)>> {
    prop::collection::vec(
        (prop::sample::select(&ENGLISH_POOL[..]), prop::sample::select(&HINDI_POOL[..])),
        1..40,
    )
    .prop_map(|v| v.into_iter().map(|(e, h)| (e.to_string(), h.to_string())).collect())
}

pub fn kb_from_pairs(pairs: &[(String, String)]) -> KnowledgeBase {
    let pairs = pairs.iter().map(|(e, h)| PhonemePair::new(e, h).unwrap());
    estimate(&ingest_pairs(pairs).unwrap()).unwrap()
}

/// Count(e, h) / Count(e) by linear scans over the raw corpus.
pub fn brute_force_prob(corpus: &[(String, String)], english: &str, hindi: &str) -> f64 {
    let joint = corpus.iter().filter(|(e, h)| e == english && h == hindi).count();
    let marginal = corpus.iter().filter(|(e, _)| e == english).count();
    joint as f64 / marginal as f64
}

/// Per-chunk candidate lists as (hindi, count), given as a table the
/// decoder sees only through the estimated KB.
pub type CandidateTable = Vec<(String, Vec<(String, u64)>)>;

/// A random word of at most four chunks plus a KB covering every chunk with
/// one to four candidates. Counts are small so that ties are common.
pub fn decoder_case() -> impl Strategy<Value = (String, CandidateTable)> {
    let syllable = prop::sample::select(vec![
        "ka", "ra", "bho", "pa", "me", "su", "re", "de", "lhi", "shi", "kri", "a", "o", "tra",
    ]);
    let tail = prop::sample::select(vec!["", "m", "sh", "l", "n", "t"]);
    (prop::collection::vec(syllable, 1..=3), tail)
        .prop_map(|(s, t)| format!("{}{}", s.concat(), t))
        .prop_flat_map(|word| {
            let chunks: Vec<String> = nametranslit::phonology::segment_word(&word)
                .unwrap()
                .chunks
                .into_iter()
                .map(|c| c.surface)
                .collect();
            let mut distinct = chunks.clone();
            distinct.sort();
            distinct.dedup();
            let tables: Vec<_> = distinct
                .into_iter()
                .map(|chunk| {
                    prop::collection::btree_map(prop::sample::select(&HINDI_POOL[..]), 1u64..4, 1..=4).prop_map(
                        move |m| {
                            (chunk.clone(), m.into_iter().map(|(h, n)| (h.to_string(), n)).collect::<Vec<_>>())
                        },
                    )
                })
                .collect();
            (Just(word), tables)
        })
        .prop_filter("at most four chunks", |(w, _)| {
            nametranslit::phonology::segment_word(w).unwrap().chunks.len() <= 4
        })
}

pub fn kb_from_table(table: &CandidateTable) -> KnowledgeBase {
    let mut pairs = Vec::new();
    for (e, cands) in table {
        for (h, n) in cands {
            for _ in 0..*n {
                pairs.push(PhonemePair::new(e, h).unwrap());
            }
        }
    }
    estimate(&ingest_pairs(pairs).unwrap()).unwrap()
}

/// Exhaustive enumeration over every candidate combination, scoring each
/// by its probability product. Ties go to the lexicographically smallest
/// tuple of Hindi strings (codepoint order).
pub fn enumerate_best(chunks: &[String], table: &CandidateTable) -> (Vec<String>, f64) {
    let lists: Vec<Vec<(String, f64)>> = chunks
        .iter()
        .map(|c| {
            let cands = &table.iter().find(|(e, _)| e == c).expect("chunk covered").1;
            let total: u64 = cands.iter().map(|(_, n)| n).sum();
            cands.iter().map(|(h, n)| (h.clone(), *n as f64 / total as f64)).collect()
        })
        .collect();

    let mut best: Option<(Vec<String>, f64)> = None;
    let mut idx = vec![0usize; lists.len()];
    loop {
        let tuple: Vec<String> = idx.iter().zip(&lists).map(|(&i, l)| l[i].0.clone()).collect();
        let score: f64 = idx.iter().zip(&lists).map(|(&i, l)| l[i].1).product();
        let better = match &best {
            None => true,
            Some((bt, bs)) => score > *bs || (score == *bs && tuple < *bt),
        };
        if better {
            best = Some((tuple, score));
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return best.expect("at least one combination");
            }
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Random KB content as (english, hindi, count) triples with unique keys.
pub fn kb_triples() -> impl Strategy<Value = Vec<(String, String, u64)>> {
    prop::collection::btree_map(
        (prop::sample::select(&ENGLISH_POOL[..]), prop::sample::select(&HINDI_POOL[..])),
        1u64..1000,
        1..30,
    )
    .prop_map(|m| m.into_iter().map(|((e, h), n)| (e.to_string(), h.to_string(), n)).collect())
}
