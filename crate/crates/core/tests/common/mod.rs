//! Oracles and generators shared by the test targets.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;

use anusaaraka::edit::{apply_post_edit, EditCommand, EditVerb, Position};
use anusaaraka::lexicon::{FeatureBundle, FeatureValue, Language, Lexicon, Side, VariantEntry};
use anusaaraka::morph::{analyze_in, analyze_plain, synthesize, SynthesisError};
use anusaaraka::pipeline::run_pipeline;
use anusaaraka::render::{render, render_group, DetailLevel, Document};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn lex(pair: &str) -> Lexicon {
    Lexicon::load_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(pair)).unwrap()
}

pub const INDECL: &str = "indecl";

/// (root, category, features, root part, suffix) for every way the tables
/// can produce `word`: each indeclinable entry spelled `word`, and each
/// root entry combined with each suffix row of its paradigm.
pub fn oracle(word: &str, lang: &Language) -> BTreeSet<(String, String, String, String, String)> {
    let mut out = BTreeSet::new();
    for e in lang.roots() {
        if e.paradigm == INDECL {
            if e.root == word {
                out.insert((e.root.clone(), e.category.to_string(), e.inherent.to_string(), word.to_owned(), String::new()));
            }
            continue;
        }
        for s in lang.suffixes().iter().filter(|s| s.paradigm == e.paradigm) {
            let Some(kept) = e.root.strip_suffix(s.join.delete_from_root.as_str()) else {
                continue;
            };
            let root_part = format!("{kept}{}", s.join.insert_at_boundary);
            if root_part.is_empty() || format!("{root_part}{}", s.surface) != word {
                continue;
            }
            let features = e.inherent.merged(&s.features).to_string();
            out.insert((e.root.clone(), e.category.to_string(), features, root_part, s.surface.clone()));
        }
    }
    out
}

pub fn analyzer_set(word: &str, lang: &Language) -> BTreeSet<(String, String, String, String, String)> {
    analyze_plain(word, lang)
        .into_iter()
        .map(|a| {
            let seg = &a.segmentation;
            let suffix = seg.get(1).map(|s| s.surface.clone()).unwrap_or_default();
            (a.root, a.category.to_string(), a.features.to_string(), seg[0].surface.clone(), suffix)
        })
        .collect()
}

/// Every two-way breakup of `word`, plain or through a junction rule, whose
/// halves both analyze without sandhi.
pub fn sandhi_oracle(word: &str, lang: &Language, junctions: &[&VariantEntry]) -> BTreeSet<(String, String)> {
    let chars: Vec<char> = word.chars().collect();
    let mut candidates = Vec::new();
    for p in 1..chars.len() {
        let left: String = chars[..p].iter().collect();
        let right: String = chars[p..].iter().collect();
        candidates.push((left.clone(), right.clone()));
        for j in junctions {
            let (l, r) = j.standard.split_once('+').unwrap();
            if let Some(rest) = right.strip_prefix(j.variant.as_str()) {
                candidates.push((format!("{left}{l}"), format!("{r}{rest}")));
            }
        }
    }
    candidates
        .into_iter()
        .filter(|(l, r)| !r.is_empty() && !oracle(l, lang).is_empty() && !oracle(r, lang).is_empty())
        .collect()
}

pub fn corpus_words(lex: &Lexicon) -> Vec<String> {
    let mut words = BTreeSet::new();
    for side in [Side::Source, Side::Target] {
        let lang = lex.language(side);
        for e in lang.roots() {
            words.insert(e.root.clone());
            for s in lang.suffixes().iter().filter(|s| s.paradigm == e.paradigm) {
                if let Some(stem) = s.join.attach_stem(&e.root) {
                    words.insert(format!("{stem}{}", s.surface));
                }
            }
        }
    }
    words.into_iter().collect()
}

pub fn random_words(lang: &Language, rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let alphabet: Vec<char> = lang
        .roots()
        .iter()
        .map(|e| e.root.as_str())
        .chain(lang.suffixes().iter().map(|s| s.surface.as_str()))
        .flat_map(str::chars)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pieces: Vec<&str> = lang
        .roots()
        .iter()
        .map(|e| e.root.as_str())
        .chain(lang.suffixes().iter().map(|s| s.surface.as_str()))
        .filter(|p| !p.is_empty())
        .collect();
    (0..n)
        .map(|i| {
            let mut w = String::new();
            if i % 2 == 0 {
                for _ in 0..rng.random_range(1..=12) {
                    w.push(alphabet[rng.random_range(0..alphabet.len())]);
                }
            } else {
                while w.chars().count() < rng.random_range(2..=12) {
                    w.push_str(pieces[rng.random_range(0..pieces.len())]);
                }
                w = w.chars().take(12).collect();
            }
            w
        })
        .collect()
}

pub fn random_command(rng: &mut ChaCha8Rng, doc: &Document) -> EditCommand {
    let s = rng.random_range(0..doc.sentences.len());
    let g = rng.random_range(0..doc.sentences[s].groups.len() + 1);
    let verb = match rng.random_range(0..5) {
        0 => {
            let gender = ["m", "f", "n", "any"][rng.random_range(0..4)];
            let number = ["sg", "pl"][rng.random_range(0..2)];
            let person = ["1", "2", "3"][rng.random_range(0..3)];
            EditVerb::SetGnp(format!("{gender}_{number}_{person}"))
        }
        1 => EditVerb::InsertNe,
        2 => EditVerb::ResolveVibhakti(["meM", "se", "ko"][rng.random_range(0..3)].into()),
        3 => EditVerb::ChooseAlternative(rng.random_range(0..3)),
        _ => EditVerb::ReplaceForm("xyz".into()),
    };
    EditCommand {
        position: Position::group(s, g),
        verb,
    }
}

/// Synthesizes every (root, suffix row) request of both dictionaries and
/// analyzes the result back. Returns the number checked and the failures.
pub fn synthesis_round_trip(lex: &Lexicon) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for side in [Side::Source, Side::Target] {
        let lang = lex.language(side);
        for e in lang.roots().iter().filter(|e| e.paradigm != INDECL) {
            for s in lang.suffixes().iter().filter(|s| s.paradigm == e.paradigm) {
                let mut requests = vec![FeatureBundle::new()];
                for (k, v) in s.features.iter() {
                    let options: Vec<FeatureValue> = match v {
                        FeatureValue::Any => vec![FeatureValue::Any],
                        _ => v.alternatives().iter().map(FeatureValue::single).collect(),
                    };
                    requests = requests
                        .into_iter()
                        .flat_map(|r| options.iter().map(move |o| r.clone().with(k, o.clone())))
                        .collect();
                }
                for req in requests {
                    let form = match synthesize(&e.root, e.category, &req, lang) {
                        Ok(f) => f,
                        Err(SynthesisError::Ambiguous { .. }) => continue,
                        Err(err) => {
                            failures.push(format!("{} {req}: {err}", e.root));
                            continue;
                        }
                    };
                    checked += 1;
                    let found = analyze_in(&form, lang, &[]).into_iter().any(|a| {
                        a.root == e.root
                            && a.category == e.category
                            && req.iter().all(|(k, v)| {
                                a.features.get(k).is_some_and(|got| {
                                    got.is_any() || v.alternatives().iter().all(|x| got.alternatives().contains(x))
                                })
                            })
                    });
                    if !found {
                        failures.push(format!("{} {req} -> {form} does not analyze back", e.root));
                    }
                }
            }
        }
    }
    (checked, failures)
}

/// Runs `scripts` random four-command edit scripts over the sample corpus.
/// Checks that inputs are never mutated, that a successful command changes
/// only its own group, and that a repeated set_gnp changes nothing.
/// Returns the number of commands applied and the violations.
pub fn random_edit_scripts(seed: u64, scripts: usize) -> (usize, Vec<String>) {
    let tel = lex("sample-tel-hin");
    let kan = lex("sample-kan-hin");
    let corpus = [
        (&tel, "mlru pustakaM caduvutunnArA? Ame vADito mATIADiMdi kAnI, vADu Ameto mATIADaledu."),
        (&tel, "rAmuDu winina pleTu veVMdixi. vADu wiMTADu."),
        (&kan, "rAma haNNu tiMdanu. mohana nALe baruvanu eMdu rAma heLidanu."),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut applied = 0;
    let mut violations = Vec::new();
    for script in 0..scripts {
        let (lex, text) = corpus[script % corpus.len()];
        let mut doc = run_pipeline(text, lex);
        for _ in 0..4 {
            let cmd = random_command(&mut rng, &doc);
            let before = doc.clone();
            let Ok(next) = apply_post_edit(&doc, &cmd, lex) else {
                if doc != before {
                    violations.push(format!("failed `{cmd}` mutated its input"));
                }
                continue;
            };
            if doc != before {
                violations.push(format!("`{cmd}` mutated its input"));
            }
            for (si, s) in next.sentences.iter().enumerate() {
                if s.groups.len() != before.sentences[si].groups.len() {
                    violations.push(format!("`{cmd}` changed the group count of sentence {si}"));
                    continue;
                }
                for (gi, g) in s.groups.iter().enumerate() {
                    let was = render_group(&before.sentences[si].groups[gi], DetailLevel::Full);
                    if (si, gi) != (cmd.position.sentence, cmd.position.group) && render_group(g, DetailLevel::Full) != was {
                        violations.push(format!("`{cmd}` changed group {si}/{gi}"));
                    }
                }
            }
            if matches!(cmd.verb, EditVerb::SetGnp(_)) {
                match apply_post_edit(&next, &cmd, lex) {
                    Ok(again) if render(&again, DetailLevel::Full) == render(&next, DetailLevel::Full) => {}
                    _ => violations.push(format!("`{cmd}` is not idempotent")),
                }
            }
            applied += 1;
            doc = next;
        }
    }
    (applied, violations)
}
