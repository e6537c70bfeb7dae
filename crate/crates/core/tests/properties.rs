//! Pipeline-wide properties over random sentences built from the sample
//! vocabularies.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use anusaaraka::grouper::{group_words, matches_exactly};
use anusaaraka::lexicon::{FeatureKey, Gnp, GroupKind, Lexicon};
use anusaaraka::morph::Analysis;
use anusaaraka::pipeline::{analyze_tokens, run_pipeline, tokenize, translate_text};
use anusaaraka::render::{parse_notation, render, render_group, DetailLevel};
use anusaaraka::transfer::{gnp_annotation, map_tam, number_abbrev};
use proptest::prelude::*;

fn dir(pair: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(pair)
}

fn lexica() -> &'static [(Lexicon, Vec<String>); 2] {
    static L: OnceLock<[(Lexicon, Vec<String>); 2]> = OnceLock::new();
    L.get_or_init(|| {
        ["sample-tel-hin", "sample-kan-hin"].map(|p| {
            let lex = Lexicon::load_dir(dir(p)).unwrap();
            let words = vocabulary(&lex);
            (lex, words)
        })
    })
}

/// Every source word form the tables generate, plus a few unknowns.
fn vocabulary(lex: &Lexicon) -> Vec<String> {
    let lang = lex.source();
    let mut words = BTreeSet::new();
    for e in lang.roots() {
        words.insert(e.root.clone());
        for s in lang.suffixes().iter().filter(|s| s.paradigm == e.paradigm) {
            if let Some(stem) = s.join.attach_stem(&e.root) {
                words.insert(format!("{stem}{}", s.surface));
            }
        }
    }
    words.extend(["qqqq", "xyz", "mAnavasmRti"].map(String::from));
    words.into_iter().collect()
}

fn sentence() -> impl Strategy<Value = (usize, String)> {
    (0..2usize).prop_flat_map(|which| {
        let n = lexica()[which].1.len();
        let item = prop_oneof![
            8 => (0..n).prop_map(move |i| lexica()[which].1[i].clone()),
            1 => prop::sample::select(vec![",", ".", "?", "!"]).prop_map(String::from),
        ];
        (Just(which), prop::collection::vec(item, 0..10).prop_map(|w| w.join(" ")))
    })
}

/// Level 2 to level 1: drop `{...}` annotations and backtick markers.
fn erase_to_1(s: &str) -> String {
    let mut out = String::new();
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            '`' => {}
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

/// One `_`-joined sequence at level 0; stops at `]`, `|`, a space or the end.
fn erase_seq(chars: &[char], i: &mut usize) -> String {
    let mut parts: Vec<String> = Vec::new();
    loop {
        let mut form = String::new();
        while *i < chars.len() && !"[]|_ ".contains(chars[*i]) {
            form.push(chars[*i]);
            *i += 1;
        }
        let mut alternatives = Vec::new();
        if *i < chars.len() && chars[*i] == '[' {
            loop {
                *i += 1;
                alternatives.push(erase_seq(chars, i));
                if chars[*i] == ']' {
                    *i += 1;
                    break;
                }
            }
        }
        let shown = if form.is_empty() {
            alternatives.into_iter().next().unwrap_or_default()
        } else {
            form
        };
        if shown != "*" && !shown.is_empty() {
            parts.push(shown);
        }
        if *i < chars.len() && chars[*i] == '_' {
            *i += 1;
        } else {
            break;
        }
    }
    parts.join("_")
}

/// Level 1 to level 0: primary forms only, placeholders dropped with their
/// join.
fn erase_to_0(s: &str) -> String {
    s.split('\n')
        .map(|line| {
            let mut groups: Vec<String> = Vec::new();
            for g in line.split(' ').filter(|g| !g.is_empty()) {
                let chars: Vec<char> = g.chars().collect();
                let mut i = 0;
                let mut text = String::new();
                while i < chars.len() {
                    if chars[i] == '_' || chars[i] == ' ' {
                        i += 1;
                        continue;
                    }
                    let start = i;
                    let seq = erase_seq(&chars, &mut i);
                    if !text.is_empty() && !seq.is_empty() && start > 0 && chars[start - 1] == '_' {
                        text.push('_');
                    }
                    text.push_str(&seq);
                    if i == start {
                        i += 1;
                    }
                }
                if !text.is_empty() {
                    groups.push(text);
                }
            }
            groups.join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Items a source analysis can justify: its gnp display items and its
/// person, gender and number values.
fn justified(a: &Analysis, out: &mut BTreeSet<String>) {
    if let Some(g) = a.features.get(FeatureKey::Gnp) {
        out.extend(gnp_annotation(g));
    }
    if let Some(p) = a.features.get(FeatureKey::Person) {
        out.insert(p.alternatives().concat());
    }
    if let Some(g) = a.features.single(FeatureKey::Gender) {
        if let Some(abbrev) = Gnp::parse(&format!("{g}_any_any")).and_then(|g| g.gender.abbrev()) {
            out.insert(abbrev.to_owned());
        }
    }
    if let Some(n) = a.features.single(FeatureKey::Number) {
        out.extend(number_abbrev(n).map(str::to_owned));
    }
    for p in &a.parts {
        justified(p, out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn notation_round_trips((which, text) in sentence()) {
        let lex = &lexica()[which].0;
        let l2 = render(&run_pipeline(&text, lex), DetailLevel::Full);
        let back = parse_notation(&l2).unwrap();
        prop_assert_eq!(render(&back, DetailLevel::Full), l2.clone());
        prop_assert_eq!(render(&back, DetailLevel::Plain), translate_text(&text, lex, DetailLevel::Plain));
    }

    #[test]
    fn levels_are_erasures_of_level_2((which, text) in sentence()) {
        let lex = &lexica()[which].0;
        let doc = run_pipeline(&text, lex);
        let l2 = render(&doc, DetailLevel::Full);
        let l1 = render(&doc, DetailLevel::Alternatives);
        prop_assert_eq!(&l1, &erase_to_1(&l2));
        prop_assert_eq!(render(&doc, DetailLevel::Plain), erase_to_0(&l1));
    }

    #[test]
    fn spacing_is_canonical((which, text) in sentence()) {
        let lex = &lexica()[which].0;
        let doc = run_pipeline(&text, lex);
        for level in [DetailLevel::Plain, DetailLevel::Alternatives, DetailLevel::Full] {
            let out = render(&doc, level);
            prop_assert!(!out.contains("  "));
            prop_assert!(!out.starts_with(' ') && !out.ends_with(' '));
            for p in [" ,", " .", " ?", " !"] {
                prop_assert!(!out.contains(p), "{:?}", out);
            }
            for s in &doc.sentences {
                for g in &s.groups {
                    prop_assert!(!render_group(g, level).contains(char::is_whitespace));
                }
            }
        }
    }

    #[test]
    fn groups_tile_and_are_maximal((which, text) in sentence()) {
        let lex = &lexica()[which].0;
        let tokens = analyze_tokens(&tokenize(&text), lex);
        let groups = group_words(&tokens, lex);
        let mut next = 0;
        for g in &groups {
            prop_assert_eq!(g.span.start, next);
            prop_assert!(g.span.end > g.span.start);
            prop_assert!(g.span.contains(&g.head_token));
            next = g.span.end;
            if g.punct || g.kind == GroupKind::Unknown {
                continue;
            }
            if g.kind != GroupKind::Singleton {
                prop_assert!(matches_exactly(lex.source(), &tokens, g.span.clone()));
            }
            if g.kind != GroupKind::FixedExpression && g.span.end < tokens.len() {
                prop_assert!(!matches_exactly(lex.source(), &tokens, g.span.start..g.span.end + 1));
            }
        }
        prop_assert_eq!(next, tokens.len());
    }

    #[test]
    fn mapping_conserves_and_never_invents((which, text) in sentence()) {
        let lex = &lexica()[which].0;
        let tokens = analyze_tokens(&tokenize(&text), lex);
        let doc = run_pipeline(&text, lex);
        let sentence_tokens: Vec<_> = doc.sentences.iter().flat_map(|s| s.tokens.iter()).collect();
        prop_assert_eq!(sentence_tokens.len(), tokens.len());
        let mut offset = 0;
        for s in &doc.sentences {
            let mut ne_seen = false;
            for g in &s.groups {
                let mut sources = BTreeSet::new();
                let mut items = Vec::new();
                let mut has_ne = false;
                g.walk(&mut |n| {
                    sources.insert(n.source);
                    items.extend(n.annotation.iter().cloned());
                    has_ne |= n.form == "ne";
                });
                for t in g.span.clone() {
                    prop_assert!(sources.contains(&t), "token {} of {:?} has no output", t, text);
                }
                let mut allowed = BTreeSet::new();
                for t in g.span.clone() {
                    for a in &tokens[offset + t].analyses {
                        justified(a, &mut allowed);
                    }
                }
                for i in &items {
                    prop_assert!(allowed.contains(i), "`{}` not in source of {:?}", i, text);
                }
                prop_assert!(!(g.suppresses_ne && ne_seen));
                ne_seen |= has_ne;
            }
            offset += s.tokens.len();
        }
    }

    #[test]
    fn sentences_translate_independently((which, a) in sentence(), b in "[a-zA-Z]{1,6}") {
        let lex = &lexica()[which].0;
        let first = format!("{a}.");
        let both = format!("{first} {b}");
        let joined = translate_text(&both, lex, DetailLevel::Full);
        let alone = translate_text(&first, lex, DetailLevel::Full);
        prop_assert!(joined.starts_with(&alone), "{:?} vs {:?}", joined, alone);
        prop_assert_eq!(translate_text(&both, lex, DetailLevel::Full), joined);
    }
}

#[test]
fn map_tam_is_a_pure_expansion() {
    for (lex, _) in lexica() {
        for m in lex.tam_mappings() {
            let a = map_tam(&m.source_tam, lex).unwrap();
            assert_eq!(a, map_tam(&m.source_tam, lex).unwrap());
        }
        assert!(map_tam("no-such-tam", lex).is_err());
    }
}

#[test]
fn erasure_helpers_follow_the_rules() {
    let l2 = "Apa pustaka paDha_raHA_[HE|thA]_kyA{23_ba.}? rAma khAyA_HE_jo_*_vaHa lekina[Hone_do], kahA`";
    let l1 = erase_to_1(l2);
    assert_eq!(l1, "Apa pustaka paDha_raHA_[HE|thA]_kyA? rAma khAyA_HE_jo_*_vaHa lekina[Hone_do], kahA");
    assert_eq!(erase_to_0(&l1), "Apa pustaka paDha_raHA_HE_kyA? rAma khAyA_HE_jo_vaHa lekina, kahA");
}

#[test]
fn grouping_ignores_pattern_file_order() {
    let copy = tempfile::tempdir().unwrap();
    for f in std::fs::read_dir(dir("sample-tel-hin")).unwrap() {
        let f = f.unwrap().path();
        let mut text = std::fs::read_to_string(&f).unwrap();
        if f.file_name().unwrap() == "source.groups" {
            let mut rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
            rows.reverse();
            text = rows.join("\n");
        }
        std::fs::write(copy.path().join(f.file_name().unwrap()), text).unwrap();
    }
    let reversed = Lexicon::load_dir(copy.path()).unwrap();
    let (lex, words) = &lexica()[0];
    for pair in words.windows(3) {
        let text = pair.join(" ");
        let a = group_words(&analyze_tokens(&tokenize(&text), lex), lex);
        let b = group_words(&analyze_tokens(&tokenize(&text), &reversed), &reversed);
        // Equal-length ties between kinds fall to file order; spans may not.
        let spans = |g: &[anusaaraka::grouper::WordGroup]| g.iter().map(|g| g.span.clone()).collect::<Vec<_>>();
        assert_eq!(spans(&a), spans(&b), "{text}");
    }
}
