mod common;

use anusaaraka::edit::{
    apply_post_edit, apply_pre_edit, check_pre_edit, EditCommand, EditError, EditVerb, IssueKind, Position,
};
use anusaaraka::lexicon::Lexicon;
use anusaaraka::pipeline::run_pipeline;
use anusaaraka::render::{render, DetailLevel, Document};
use anusaaraka::transfer::NodePath;
use common::{lex, random_edit_scripts};

fn apply(doc: &Document, cmd: &str, lex: &Lexicon) -> Result<Document, EditError> {
    apply_post_edit(doc, &cmd.parse().unwrap(), lex)
}

fn full(doc: &Document) -> String {
    render(doc, DetailLevel::Full)
}

#[test]
fn set_gnp_resynthesizes_verb_and_auxiliaries() {
    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("vADu wiMTADu", &tel);
    let d = apply(&doc, "0/1 set_gnp f sg 3", &tel).unwrap();
    assert_eq!(full(&d), "vaHa{m.} khAtI_HE");

    let doc = run_pipeline("Ame vADito mATIADiMdi kAnI,", &tel);
    let d = apply(&doc, "0/2 set_gnp f sg 3", &tel).unwrap();
    assert_eq!(full(&d), "vaHa{f.} usa{m.}_se` bAta_kI_[HE|thI] lekina[Hone_do],");
    let d = apply(&doc, "0/2 set_gnp m pl 3", &tel).unwrap();
    assert_eq!(full(&d), "vaHa{f.} usa{m.}_se` bAta_kiye_[HEM|the] lekina[Hone_do],");
}

#[test]
fn set_gnp_is_idempotent() {
    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("mlru pustakaM caduvutunnArA? vADu wiMTADu.", &tel);
    for cmd in ["0/2 set_gnp f pl 2", "1/1 set_gnp f sg 3", "0/2 set_gnp m sg 3"] {
        let once = apply(&doc, cmd, &tel).unwrap();
        let twice = apply(&once, cmd, &tel).unwrap();
        assert_eq!(once, twice, "{cmd}");
    }
}

#[test]
fn set_gnp_with_unrealizable_value_fails_cleanly() {
    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("vADu wiMTADu", &tel);
    let err = apply(&doc, "0/1 set_gnp n sg 3", &tel).unwrap_err();
    assert!(matches!(err, EditError::Synthesis(_)), "{err}");
    assert!(matches!(
        apply(&doc, "0/0 set_gnp f sg 3", &tel),
        Err(EditError::NothingToAgree(_))
    ));
}

#[test]
fn resolve_vibhakti_makes_relative_oblique() {
    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("rAmuDu winina pleTu veVMdixi", &tel);
    let d = apply(&doc, "0/1 resolve_vibhakti meM", &tel).unwrap();
    assert_eq!(full(&d), "rAma khAyA_HE_jisa_meM_vaHa pleTa cAMdi_kA");
    let d = apply(&doc, "0/1 resolve_vibhakti se", &tel).unwrap();
    assert_eq!(full(&d), "rAma khAyA_HE_jisa_se_vaHa pleTa cAMdi_kA");
    let at = Position::node(0, 1, NodePath::top(3));
    let cmd = EditCommand {
        position: at,
        verb: EditVerb::ResolveVibhakti("meM".into()),
    };
    assert_eq!(full(&apply_post_edit(&doc, &cmd, &tel).unwrap()), full(&d).replace("se", "meM"));
    assert!(matches!(
        apply(&doc, "0/1/0 resolve_vibhakti meM", &tel),
        Err(EditError::NotAPlaceholder(_))
    ));
}

#[test]
fn insert_ne_follows_the_data_guard() {
    let kan = lex("sample-kan-hin");
    let doc = run_pipeline("rAma haNNu tiMdanu.", &kan);
    assert!(!full(&doc).contains("ne"));
    let d = apply(&doc, "0/0 insert_ne", &kan).unwrap();
    assert_eq!(render(&d, DetailLevel::Plain), "rAma_ne phala khAyA.");
    assert!(matches!(apply(&d, "0/0 insert_ne", &kan), Err(EditError::NeAlreadyPresent(_))));
    assert!(matches!(apply(&doc, "0/2 insert_ne", &kan), Err(EditError::NoGoverningVerb(_))));

    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("vADu wiMTADu", &tel);
    assert!(matches!(apply(&doc, "0/0 insert_ne", &tel), Err(EditError::NeNotLicensed(_))));
    let doc = run_pipeline("Ame vADito mATIADiMdi kAnI,", &tel);
    let d = apply(&doc, "0/0 insert_ne", &tel).unwrap();
    assert!(full(&d).starts_with("usa{f.}_ne usa{m.}_se`"), "{}", full(&d));
}

#[test]
fn choose_alternative_on_pipeline_output() {
    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("mlru pustakaM caduvutunnArA?", &tel);
    let d = apply(&doc, "0/2 choose_alternative 1", &tel).unwrap();
    assert_eq!(full(&d), "Apa pustaka paDha_raHA_thA_kyA{23_ba.}?");
}

#[test]
fn replace_form_marks_manual() {
    let tel = lex("sample-tel-hin");
    let doc = run_pipeline("vADu wiMTADu", &tel);
    let d = apply(&doc, "0/0 replace_form laDakA", &tel).unwrap();
    assert_eq!(full(&d), "laDakA khAtA_HE");
    assert!(d.sentences[0].groups[0].nodes[0].manual);
}

#[test]
fn edits_touch_only_the_addressed_group() {
    let (applied, violations) = random_edit_scripts(7, 50);
    assert!(violations.is_empty(), "{violations:#?}");
    assert!(applied > 20, "only {applied} commands applied");
}

#[test]
fn pre_edit_on_sample_text() {
    let tel = lex("sample-tel-hin");
    assert!(check_pre_edit("mlru pustakaM caduvutunnArA?", &tel).is_empty());

    let text = "mIru pustakam caduvutunnaru.";
    let issues = check_pre_edit(text, &tel);
    let found: Vec<(usize, IssueKind, &str)> = issues
        .iter()
        .map(|i| (i.token, i.kind, i.suggestions[0].replacement.as_str()))
        .collect();
    assert_eq!(
        found,
        [
            (0, IssueKind::NonstandardSpelling, "mlru"),
            (1, IssueKind::NonstandardSpelling, "pustakaM"),
            (2, IssueKind::NonstandardSpelling, "caduvutunnAru"),
        ]
    );
    for issue in &issues {
        let s = &issue.suggestions[0];
        let fixed = apply_pre_edit(text, issue.token, &s.replacement, s.covers).unwrap();
        assert!(!check_pre_edit(&fixed, &tel)
            .iter()
            .any(|i| i.token == issue.token && i.kind == issue.kind));
    }

    let text = "mlru pustakaM caduvu tunnArA?";
    let issues = check_pre_edit(text, &tel);
    assert_eq!(issues.len(), 1);
    assert_eq!(issues[0].kind, IssueKind::SuspectMissplit);
    let fixed = apply_pre_edit(text, 2, &issues[0].suggestions[0].replacement, 2).unwrap();
    assert_eq!(fixed, "mlru pustakaM caduvutunnArA?");
    assert!(check_pre_edit(&fixed, &tel).is_empty());
}
