mod common;

use proptest::prelude::*;

use common::*;
use nametranslit::decoder::{Decoder, Origin};
use nametranslit::devanagari::is_hindi_char;
use nametranslit::evaluation::{parse_report_tsv, render_report, Counts, EvalReport, ReportFormat};
use nametranslit::knowledge_base::{load_kb, save_kb};
use nametranslit::ner_io::{parse_conll, parse_inline, render_conll, render_inline, EntityCategory};
use nametranslit::phonology::{classify_chunk, Phonology, UnitKind};

proptest! {
    #[test]
    fn segmentation_reconstructs_and_has_cv_shape(word in "[a-zA-Z]{1,20}") {
        let p = Phonology::default();
        let seg = p.segment_word(&word).unwrap();
        let joined: String = seg.chunks.iter().map(|c| c.surface.as_str()).collect();
        prop_assert_eq!(joined, word.to_ascii_lowercase());

        let last = seg.chunks.len() - 1;
        for (i, chunk) in seg.chunks.iter().enumerate() {
            prop_assert_eq!(chunk.index, i);
            prop_assert!(!chunk.surface.is_empty());
            let units = p.chunk_units(chunk);
            let kinds: Vec<UnitKind> = units.iter().map(|u| u.kind).collect();
            prop_assert_eq!(classify_chunk(&kinds), chunk.pattern);
            if i < last {
                prop_assert_eq!(*kinds.last().unwrap(), UnitKind::V);
            }
        }
        prop_assert_eq!(p.segment_word(&word).unwrap(), seg);
    }

    #[test]
    fn estimated_probs_match_recount(corpus in pair_corpus()) {
        let kb = kb_from_pairs(&corpus);
        for english in kb.phonemes() {
            let entries = kb.lookup(english);
            let sum: f64 = entries.iter().map(|e| e.prob).sum();
            prop_assert!((sum - 1.0).abs() <= 1e-9);
            for e in entries {
                let expected = brute_force_prob(&corpus, english, &e.hindi);
                prop_assert!((e.prob - expected).abs() <= 1e-12);
            }
            // prob desc, then codepoint asc
            for w in entries.windows(2) {
                prop_assert!(w[0].prob > w[1].prob || (w[0].prob == w[1].prob && w[0].hindi < w[1].hindi));
            }
        }
    }

    #[test]
    fn kb_save_load_is_identity(triples in kb_triples()) {
        let text = format!(
            "english\thindi\tcount\n{}",
            triples.iter().map(|(e, h, n)| format!("{e}\t{h}\t{n}\n")).collect::<String>()
        );
        let kb = load_kb(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        save_kb(&kb, &mut buf).unwrap();
        let back = load_kb(buf.as_slice()).unwrap();
        let got: Vec<(String, String, u64)> =
            back.counts().triples().map(|(e, h, n)| (e.to_string(), h.to_string(), n)).collect();
        prop_assert_eq!(got, triples);
    }

    #[test]
    fn decoder_matches_exhaustive_enumeration((word, table) in decoder_case()) {
        let kb = kb_from_table(&table);
        let d = Decoder::new(&kb);
        let result = d.transliterate_word(&word).unwrap();
        let chunks: Vec<String> = result.per_chunk.iter().map(|c| c.english.clone()).collect();
        let (best, score) = enumerate_best(&chunks, &table);
        let chosen: Vec<String> = result.per_chunk.iter().map(|c| c.hindi.clone()).collect();
        prop_assert_eq!(&chosen, &best);
        prop_assert_eq!(result.hindi, best.concat());
        prop_assert!((result.confidence - score).abs() <= 1e-12);
        prop_assert!(result.confidence > 0.0 && result.confidence <= 1.0);
        prop_assert!(!result.low_confidence);
    }

    #[test]
    fn decoder_output_script(word in "[a-zA-Z0-9]{1,12}") {
        let kb = nametranslit::KnowledgeBase::seed();
        let d = Decoder::new(&kb);
        let r = d.transliterate_word(&word).unwrap();
        prop_assert!(r.confidence > 0.0 && r.confidence <= 1.0);
        for c in &r.per_chunk {
            match c.origin {
                Origin::PassThrough => prop_assert_eq!(&c.hindi, &c.english),
                _ => prop_assert!(c.hindi.chars().all(is_hindi_char), "{:?}", c),
            }
        }
        let fired = r.per_chunk.iter().any(|c| c.origin != Origin::Kb);
        prop_assert_eq!(r.low_confidence, fired);
        prop_assert_eq!(&r, &d.transliterate_word(&word).unwrap());
    }

    #[test]
    fn inline_round_trip_and_conll_agreement(
        tokens in prop::collection::vec(
            ("[A-Z][a-z]{0,6}|[a-z]{1,5}|[0-9]{1,4}", prop::option::of(prop::sample::select(EntityCategory::ALL.to_vec()))),
            1..12,
        )
    ) {
        let line = tokens
            .iter()
            .map(|(t, c)| match c {
                Some(c) => format!("{t}/{c}"),
                None => t.clone(),
            })
            .collect::<Vec<_>>()
            .join(" ");
        let s = parse_inline(&line, 0).unwrap();

        // Spans are disjoint, sorted and non-empty.
        for w in s.entities.windows(2) {
            prop_assert!(w[0].span.end <= w[1].span.start);
        }
        for e in &s.entities {
            prop_assert!(!e.span.is_empty() && e.span.end <= s.tokens.len());
        }

        let reparsed = parse_inline(&render_inline(&s), 0).unwrap();
        prop_assert_eq!(&reparsed, &s);

        let conll = parse_conll(render_conll(&s).as_bytes()).unwrap();
        prop_assert_eq!(conll.len(), 1);
        prop_assert_eq!(&conll[0], &s);
    }

    #[test]
    fn report_totals_and_metric_bounds(
        rows in prop::collection::vec((prop::sample::select(EntityCategory::ALL.to_vec()), 0u64..500, 0u64..500, 0u64..500), 1..8)
    ) {
        let counts: Vec<(EntityCategory, Counts)> = rows
            .iter()
            .map(|&(cat, a, b, c)| {
                let reference = a;
                let system = b;
                let correct = c.min(reference).min(system);
                (cat, Counts { reference, system, correct })
            })
            .collect();
        let report = EvalReport::from_category_counts(&counts);

        let mut sum = Counts::default();
        for (_, s) in &report.per_category {
            sum.reference += s.counts.reference;
            sum.system += s.counts.system;
            sum.correct += s.counts.correct;
        }
        prop_assert_eq!(sum, report.total.counts);

        for s in report.per_category.iter().map(|(_, s)| s).chain(std::iter::once(&report.total)) {
            prop_assert!(s.counts.correct <= s.counts.system.min(s.counts.reference));
            prop_assert!((0.0..=1.0).contains(&s.precision));
            prop_assert!((0.0..=1.0).contains(&s.recall));
            if s.precision > 0.0 && s.recall > 0.0 {
                let lo = s.precision.min(s.recall);
                let hi = (s.precision + s.recall) / 2.0;
                prop_assert!(s.f_measure >= lo - 1e-12 && s.f_measure <= hi + 1e-12);
            }
        }

        let tsv = render_report(&report, ReportFormat::Tsv);
        prop_assert_eq!(&parse_report_tsv(&tsv).unwrap(), &report);
        prop_assert_eq!(render_report(&report, ReportFormat::Tsv), tsv);
    }
}

proptest! {
    // Rounding P and R to four places moves F by up to
    // 2(P^2 + R^2)/(P + R)^2 * 5e-5 on top of F's own 5e-5 rounding, so a
    // flat 5e-5 only holds when P and R are close.
    #[test]
    fn printed_f_matches_printed_p_and_r(reference in 1u64..10_000, system in 1u64..10_000, correct in 0u64..10_000) {
        let correct = correct.min(reference).min(system);
        let report = EvalReport::from_category_counts(&[(EntityCategory::Person, Counts { reference, system, correct })]);
        let t = &report.total;
        let exact = if t.precision + t.recall == 0.0 { 0.0 } else { 2.0 * t.precision * t.recall / (t.precision + t.recall) };
        prop_assert!((t.f_measure - exact).abs() <= 1e-12);

        let tsv = render_report(&report, ReportFormat::Tsv);
        let total = tsv.lines().last().unwrap();
        let cols: Vec<f64> = total.split('\t').skip(4).take(3).map(|v| v.parse().unwrap()).collect();
        let (p, r, f) = (cols[0], cols[1], cols[2]);
        let recomputed = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        let sensitivity = if p + r == 0.0 { 0.0 } else { 2.0 * (p * p + r * r) / ((p + r) * (p + r)) };
        let bound = 5e-5 * (1.0 + sensitivity) + 1e-12;
        prop_assert!((f - recomputed).abs() <= bound, "P={} R={} F={} recomputed={}", p, r, f, recomputed);
    }
}

#[test]
fn reference_totals_printed_f_within_flat_tolerance() {
    let report = EvalReport::from_category_counts(&[(
        EntityCategory::Person,
        Counts { reference: 9234, system: 9180, correct: 7679 },
    )]);
    let tsv = render_report(&report, ReportFormat::Tsv);
    let cols: Vec<f64> = tsv.lines().last().unwrap().split('\t').skip(4).take(3).map(|v| v.parse().unwrap()).collect();
    let recomputed = 2.0 * cols[0] * cols[1] / (cols[0] + cols[1]);
    assert!((cols[2] - recomputed).abs() <= 5e-5);
}
