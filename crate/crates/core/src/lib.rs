//! English→Hindi named-entity transliteration.
//!
//! Romanized names are cut into consonant/vowel chunks
//! ([`phonology`]), each chunk is mapped to its most probable Devanagari
//! rendering from a relative-frequency table ([`knowledge_base`],
//! [`decoder`]), and the results are scored against human references
//! ([`evaluation`]). [`ner_io`] reads the tagged-entity input and
//! [`pipeline`] ties the pieces together.

pub mod config;
pub mod decoder;
pub mod devanagari;
pub mod evaluation;
pub mod knowledge_base;
pub mod ner_io;
pub mod phonology;
pub mod pipeline;

pub use config::Config;
pub use decoder::{Decoder, EntityOutput, FallbackTable, Origin, TransliterationResult};
pub use evaluation::{EvalRecord, EvalReport, ReportFormat, Score};
pub use knowledge_base::{KnowledgeBase, PhonemePair};
pub use ner_io::{EntityCategory, TaggedEntity, TaggedSentence};
pub use phonology::{Phonology, SegmentedWord};
