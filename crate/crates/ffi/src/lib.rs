//! C ABI over the anusaaraka engine.
//!
//! Every function returns an [`AnkStatus`]. On failure a message is kept per
//! thread and can be read with [`ank_last_error`]. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! [`ank_string_free`]; handles are released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use anusaaraka::edit::{apply_post_edit, check_pre_edit, EditCommand};
use anusaaraka::lexicon::Lexicon;
use anusaaraka::pipeline::run_pipeline;
use anusaaraka::render::{parse_notation, render, DetailLevel, Document};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The lexicon could not be loaded or failed validation.
    Lexicon = 3,
    /// The detail level was not 0, 1 or 2.
    InvalidDetail = 4,
    /// The notation text did not parse.
    Notation = 5,
    /// The edit command did not parse.
    CommandSyntax = 6,
    /// The edit command was rejected by the document.
    Edit = 7,
    /// The output contained a NUL byte.
    InteriorNul = 8,
    /// The library panicked; the handle arguments are left unchanged.
    Internal = 9,
}

/// A loaded language-pair lexicon. Immutable; may be shared across threads.
pub struct AnkLexicon(Lexicon);

/// A translated or parsed document that post-editing commands act on.
pub struct AnkDocument(Document);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AnkStatus, String);

impl Failure {
    fn new(status: AnkStatus, message: impl ToString) -> Failure {
        Failure(status, message.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AnkStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err(Failure::new(AnkStatus::Internal, "internal panic")));
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = match &outcome {
            Ok(()) => None,
            Err(Failure(_, msg)) => CString::new(msg.replace('\0', " ")).ok(),
        }
    });
    match outcome {
        Ok(()) => AnkStatus::Ok,
        Err(Failure(status, _)) => status,
    }
}

unsafe fn arg_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(AnkStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(AnkStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(AnkStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::new(AnkStatus::NullArgument, "output pointer is null"))
    } else {
        Ok(())
    }
}

unsafe fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(AnkStatus::InteriorNul, e))?;
    *out = c.into_raw();
    Ok(())
}

fn level_of(level: u8) -> Result<DetailLevel, Failure> {
    DetailLevel::try_from(level).map_err(|e| Failure::new(AnkStatus::InvalidDetail, e))
}

/// Loads the lexicon directory `dir`. With `validate` nonzero, a lexicon with
/// cross-reference problems is rejected and the first problem reported.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ank_lexicon_load(dir: *const c_char, validate: bool, out: *mut *mut AnkLexicon) -> AnkStatus {
    guard(|| {
        out_ptr(out)?;
        let dir = arg_str(dir, "dir")?;
        let lex = Lexicon::load_dir(dir).map_err(|e| Failure::new(AnkStatus::Lexicon, e))?;
        if validate {
            let diags = lex.validate();
            if let Some(d) = diags.first() {
                return Err(Failure::new(AnkStatus::Lexicon, format!("{} problem(s), first: {d}", diags.len())));
            }
        }
        *out = Box::into_raw(Box::new(AnkLexicon(lex)));
        Ok(())
    })
}

/// # Safety
/// `lex` must come from [`ank_lexicon_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ank_lexicon_free(lex: *mut AnkLexicon) {
    if !lex.is_null() {
        drop(Box::from_raw(lex));
    }
}

/// Translates `text` and renders it at `detail` (0, 1 or 2).
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`ank_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ank_translate(
    lex: *const AnkLexicon,
    text: *const c_char,
    detail: u8,
    out: *mut *mut c_char,
) -> AnkStatus {
    guard(|| {
        out_ptr(out)?;
        let lex = handle(lex, "lexicon")?;
        let level = level_of(detail)?;
        let t = arg_str(text, "text")?;
        give_string(render(&run_pipeline(t, &lex.0), level), out)
    })
}

/// Pre-editing diagnostics for `text` as a JSON array.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`ank_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ank_check(lex: *const AnkLexicon, text: *const c_char, out: *mut *mut c_char) -> AnkStatus {
    guard(|| {
        out_ptr(out)?;
        let lex = handle(lex, "lexicon")?;
        let t = arg_str(text, "text")?;
        let json = serde_json::to_string(&check_pre_edit(t, &lex.0)).map_err(|e| Failure::new(AnkStatus::Internal, e))?;
        give_string(json, out)
    })
}

/// Runs the pipeline on `text` and keeps the document for editing.
///
/// # Safety
/// Pointers must be valid; `out` receives a handle for [`ank_document_free`].
#[no_mangle]
pub unsafe extern "C" fn ank_document_translate(
    lex: *const AnkLexicon,
    text: *const c_char,
    out: *mut *mut AnkDocument,
) -> AnkStatus {
    guard(|| {
        out_ptr(out)?;
        let lex = handle(lex, "lexicon")?;
        let t = arg_str(text, "text")?;
        *out = Box::into_raw(Box::new(AnkDocument(run_pipeline(t, &lex.0))));
        Ok(())
    })
}

/// Parses level-2 notation into a document.
///
/// # Safety
/// Pointers must be valid; `out` receives a handle for [`ank_document_free`].
#[no_mangle]
pub unsafe extern "C" fn ank_document_parse(notation: *const c_char, out: *mut *mut AnkDocument) -> AnkStatus {
    guard(|| {
        out_ptr(out)?;
        let t = arg_str(notation, "notation")?;
        let doc = parse_notation(t).map_err(|e| Failure::new(AnkStatus::Notation, e))?;
        *out = Box::into_raw(Box::new(AnkDocument(doc)));
        Ok(())
    })
}

/// Applies one post-editing command line such as `0/1 resolve_vibhakti meM`.
/// The document is replaced on success and untouched on failure.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ank_document_apply(
    doc: *mut AnkDocument,
    lex: *const AnkLexicon,
    command: *const c_char,
) -> AnkStatus {
    guard(|| {
        let lex = handle(lex, "lexicon")?;
        let doc = doc
            .as_mut()
            .ok_or_else(|| Failure::new(AnkStatus::NullArgument, "document is null"))?;
        let cmd: EditCommand = arg_str(command, "command")?
            .parse()
            .map_err(|e| Failure::new(AnkStatus::CommandSyntax, e))?;
        doc.0 = apply_post_edit(&doc.0, &cmd, &lex.0).map_err(|e| Failure::new(AnkStatus::Edit, format!("{cmd}: {e}")))?;
        Ok(())
    })
}

/// Renders the document at `detail` (0, 1 or 2).
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`ank_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ank_document_render(doc: *const AnkDocument, detail: u8, out: *mut *mut c_char) -> AnkStatus {
    guard(|| {
        out_ptr(out)?;
        let doc = handle(doc, "document")?;
        give_string(render(&doc.0, level_of(detail)?), out)
    })
}

/// # Safety
/// `doc` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ank_document_free(doc: *mut AnkDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn ank_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ank_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn ank_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn take(p: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
        unsafe { ank_string_free(p) };
        s
    }

    fn last_error() -> String {
        let p = ank_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    fn load() -> *mut AnkLexicon {
        let dir = c(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/sample-tel-hin"));
        let mut lex = ptr::null_mut();
        assert_eq!(unsafe { ank_lexicon_load(dir.as_ptr(), true, &mut lex) }, AnkStatus::Ok);
        lex
    }

    #[test]
    fn translate_and_errors() {
        let lex = load();
        let mut out = ptr::null_mut();
        let input = c("mlru pustakaM caduvutunnArA?");
        assert_eq!(unsafe { ank_translate(lex, input.as_ptr(), 2, &mut out) }, AnkStatus::Ok);
        assert_eq!(take(out), "Apa pustaka paDha_raHA_[HE|thA]_kyA{23_ba.}?");
        assert!(ank_last_error().is_null());

        assert_eq!(unsafe { ank_translate(lex, input.as_ptr(), 3, &mut out) }, AnkStatus::InvalidDetail);
        assert!(last_error().contains('3'));
        assert_eq!(unsafe { ank_translate(lex, ptr::null(), 0, &mut out) }, AnkStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(unsafe { ank_translate(lex, bad.as_ptr().cast(), 0, &mut out) }, AnkStatus::InvalidUtf8);
        unsafe { ank_lexicon_free(lex) };
    }

    #[test]
    fn lexicon_load_failures() {
        let mut lex = ptr::null_mut();
        let dir = c("/nonexistent/lexicon");
        assert_eq!(unsafe { ank_lexicon_load(dir.as_ptr(), false, &mut lex) }, AnkStatus::Lexicon);
        assert!(lex.is_null());
        let tmp = std::env::temp_dir().join(format!("ank-ffi-{}", std::process::id()));
        std::fs::create_dir_all(&tmp).unwrap();
        std::fs::write(tmp.join("source.roots"), "a\tnoun\tindecl\n").unwrap();
        let dir = c(tmp.to_str().unwrap());
        assert_eq!(unsafe { ank_lexicon_load(dir.as_ptr(), true, &mut lex) }, AnkStatus::Lexicon);
        assert_eq!(unsafe { ank_lexicon_load(dir.as_ptr(), false, &mut lex) }, AnkStatus::Ok);
        unsafe { ank_lexicon_free(lex) };
        std::fs::remove_dir_all(tmp).unwrap();
    }

    #[test]
    fn document_editing() {
        let lex = load();
        let mut doc = ptr::null_mut();
        let input = c("rAmuDu winina pleTu veVMdixi");
        assert_eq!(unsafe { ank_document_translate(lex, input.as_ptr(), &mut doc) }, AnkStatus::Ok);

        let bad = c("0/0 resolve_vibhakti meM");
        assert_eq!(unsafe { ank_document_apply(doc, lex, bad.as_ptr()) }, AnkStatus::Edit);
        let syntax = c("0/0 frobnicate");
        assert_eq!(unsafe { ank_document_apply(doc, lex, syntax.as_ptr()) }, AnkStatus::CommandSyntax);
        let cmd = c("0/1 resolve_vibhakti meM");
        assert_eq!(unsafe { ank_document_apply(doc, lex, cmd.as_ptr()) }, AnkStatus::Ok);

        let mut out = ptr::null_mut();
        assert_eq!(unsafe { ank_document_render(doc, 0, &mut out) }, AnkStatus::Ok);
        assert_eq!(take(out), "rAma khAyA_HE_jisa_meM_vaHa pleTa cAMdi_kA");
        unsafe { ank_document_free(doc) };

        let notation = c("rAma khAyA_HE_jo_*_vaHa pleTa");
        assert_eq!(unsafe { ank_document_parse(notation.as_ptr(), &mut doc) }, AnkStatus::Ok);
        assert_eq!(unsafe { ank_document_render(doc, 2, &mut out) }, AnkStatus::Ok);
        assert_eq!(take(out), "rAma khAyA_HE_jo_*_vaHa pleTa");
        unsafe { ank_document_free(doc) };
        let broken = c("a[b");
        assert_eq!(unsafe { ank_document_parse(broken.as_ptr(), &mut doc) }, AnkStatus::Notation);
        unsafe { ank_lexicon_free(lex) };
    }

    #[test]
    fn check_returns_json() {
        let lex = load();
        let mut out = ptr::null_mut();
        let input = c("mIru pustakaM");
        assert_eq!(unsafe { ank_check(lex, input.as_ptr(), &mut out) }, AnkStatus::Ok);
        let issues: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(issues[0]["kind"], "nonstandard_spelling");
        assert_eq!(issues[0]["suggestions"][0]["replacement"], "mlru");
        unsafe { ank_lexicon_free(lex) };
    }

    #[test]
    fn version_is_static() {
        let v = unsafe { CStr::from_ptr(ank_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
