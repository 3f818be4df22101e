//! Tagged sentences in, one transliteration row per entity out.

use crate::decoder::{Decoder, EntityOutput};
use crate::ner_io::{EntityCategory, TaggedSentence};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRow {
    pub sentence_id: usize,
    pub entity: String,
    pub category: EntityCategory,
    /// `None` when the category is skipped.
    pub output: Option<String>,
    pub confidence: Option<f64>,
    pub low_confidence: bool,
    pub chunk_trace: Option<String>,
}

impl PipelineRow {
    /// `sentence_id<TAB>entity<TAB>category<TAB>output<TAB>confidence`, with
    /// `-` standing in for a skipped entity's output and confidence.
    pub fn to_tsv(&self, show_chunks: bool) -> String {
        let output = self.output.as_deref().unwrap_or("-");
        let confidence = self.confidence.map_or_else(|| "-".to_string(), |c| format!("{c:.4}"));
        let mut line = format!("{}\t{}\t{}\t{}\t{}", self.sentence_id, self.entity, self.category, output, confidence);
        if show_chunks {
            line.push('\t');
            line.push_str(self.chunk_trace.as_deref().unwrap_or("-"));
        }
        line
    }
}

/// Transliterates every entity of one sentence, in span order.
pub fn process_sentence(sentence: &TaggedSentence, decoder: &Decoder<'_>) -> Vec<PipelineRow> {
    sentence
        .entities
        .iter()
        .map(|entity| {
            let base = PipelineRow {
                sentence_id: sentence.id,
                entity: entity.text.clone(),
                category: entity.category,
                output: None,
                confidence: None,
                low_confidence: false,
                chunk_trace: None,
            };
            match decoder.transliterate_entity(entity) {
                Ok(EntityOutput::Text { hindi, confidence, low_confidence, words }) => PipelineRow {
                    output: Some(hindi),
                    confidence: Some(confidence),
                    low_confidence,
                    chunk_trace: Some(words.iter().map(|w| w.chunk_trace()).collect::<Vec<_>>().join(" ")),
                    ..base
                },
                // Entity text is never empty, so decoding only declines via
                // the skip set.
                Ok(EntityOutput::NoOutput) | Err(_) => base,
            }
        })
        .collect()
}

/// Lazily processes a stream of sentences, preserving input order.
pub fn pipeline<'d, I>(sentences: I, decoder: &'d Decoder<'d>) -> impl Iterator<Item = PipelineRow> + 'd
where
    I: IntoIterator<Item = TaggedSentence>,
    I::IntoIter: 'd,
{
    sentences.into_iter().flat_map(move |s| process_sentence(&s, decoder))
}
