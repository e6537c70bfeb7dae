//! Declarative language data: dictionaries, suffix tables, group patterns,
//! bilingual mappings and spelling variants.
//!
//! A lexicon directory holds plain tab-separated files, one record per
//! line, `#` starting a comment line. Monolingual files (`.roots`,
//! `.suffixes`, `.groups`) are assigned to a side by their file stem, which
//! must start with `source` or `target`. See `docs/DATA_FORMATS.md`.

mod features;
mod load;
pub mod template;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use features::{Category, FeatureBundle, FeatureKey, FeatureValue, Gender, Gnp};
pub use load::load_lexicon;
pub use template::{TemplateForm, TemplateNode};
pub use validate::{validate_lexicon, Diagnostic, DiagnosticKind};
pub(crate) use validate::is_null_case;

/// Paradigm for words that take no suffix; such roots match whole words.
pub const INDECLINABLE: &str = "indecl";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Location {
    pub file: PathBuf,
    pub line: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file.display(), self.line)
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no dictionary file found in {0}")]
    NoDictionary(PathBuf),
    #[error("{0}: file name must start with `source` or `target`")]
    UnsidedFile(PathBuf),
    #[error("{location}: {message}")]
    Parse { location: Location, message: String },
    #[error("{location}: paradigm `{paradigm}` is not defined in the suffix table")]
    DanglingParadigm { location: Location, paradigm: String },
    #[error("{location}: duplicate {what} `{key}` (first defined at {first})")]
    Duplicate {
        location: Location,
        what: &'static str,
        key: String,
        first: Location,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Source,
    Target,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexEntry {
    pub root: String,
    pub category: Category,
    pub paradigm: String,
    pub inherent: FeatureBundle,
    pub gloss: Option<String>,
    /// Name shown by the analyzer debug format when it differs from `root`.
    pub label: Option<String>,
    pub location: Location,
}

impl LexEntry {
    pub fn display_root(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.root)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JoinRule {
    pub delete_from_root: String,
    pub insert_at_boundary: String,
}

impl JoinRule {
    pub fn is_identity(&self) -> bool {
        self.delete_from_root.is_empty() && self.insert_at_boundary.is_empty()
    }

    /// Stem the suffix attaches to, or `None` when the root does not end
    /// with the deleted string.
    pub fn attach_stem(&self, root: &str) -> Option<String> {
        let kept = root.strip_suffix(self.delete_from_root.as_str())?;
        Some(format!("{kept}{}", self.insert_at_boundary))
    }

    /// Inverse of [`JoinRule::attach_stem`].
    pub fn recover_root(&self, root_part: &str) -> Option<String> {
        let kept = root_part.strip_suffix(self.insert_at_boundary.as_str())?;
        Some(format!("{kept}{}", self.delete_from_root))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuffixEntry {
    pub surface: String,
    pub paradigm: String,
    pub category: Category,
    pub features: FeatureBundle,
    pub join: JoinRule,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    NounGroup,
    VerbGroup,
    FixedExpression,
    Singleton,
    Unknown,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::NounGroup => "noun_group",
            GroupKind::VerbGroup => "verb_group",
            GroupKind::FixedExpression => "fixed",
            GroupKind::Singleton => "singleton",
            GroupKind::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ItemMatcher {
    Category(Category),
    Root {
        root: String,
        category: Option<Category>,
    },
}

impl ItemMatcher {
    pub fn accepts(&self, root: &str, category: Category) -> bool {
        match self {
            ItemMatcher::Category(c) => *c == category,
            ItemMatcher::Root { root: r, category: c } => {
                r == root && c.map_or(true, |c| c == category)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantifier {
    One,
    Optional,
    Star,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternItem {
    pub matcher: ItemMatcher,
    pub quantifier: Quantifier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPattern {
    pub kind: GroupKind,
    pub items: Vec<PatternItem>,
    /// Index into `items` of the head; the head item is always `One`.
    pub head: usize,
    pub meaning: Option<RootMapping>,
    pub location: Location,
}

impl GroupPattern {
    pub fn head_matcher(&self) -> &ItemMatcher {
        &self.items[self.head].matcher
    }

    pub fn is_fixed(&self) -> bool {
        self.kind == GroupKind::FixedExpression
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetRoot {
    pub root: String,
    pub category: Category,
    pub dialect_marked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootMapping {
    pub source_root: String,
    pub source_category: Category,
    /// First is the default rendering; the rest are alternatives.
    pub targets: Vec<TargetRoot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TamMapping {
    pub source_tam: String,
    pub template_text: String,
    pub template: Vec<TemplateNode>,
    pub suppresses_ne: bool,
    pub dialect_marked: bool,
    /// Target TAM that licenses an ergative `ne` on its karta.
    pub ergative: bool,
    /// gnp used for inflected heads where the source leaves slots open or
    /// where the template displays gnp instead of agreeing.
    pub citation: Option<Gnp>,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    Spelling,
    SandhiJoin,
    SandhiMissplit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantEntry {
    pub variant: String,
    pub standard: String,
    pub kind: VariantKind,
}

impl VariantEntry {
    /// For `sandhi_join` rows: the `(left_end, right_start)` restored at a
    /// junction written as `variant`.
    pub fn junction(&self) -> Option<(&str, &str)> {
        (self.kind == VariantKind::SandhiJoin)
            .then(|| self.standard.split_once('+'))
            .flatten()
    }
}

/// One language's monolingual data.
#[derive(Debug, Clone, Default)]
pub struct Language {
    roots: Vec<LexEntry>,
    suffixes: Vec<SuffixEntry>,
    groups: Vec<GroupPattern>,
    paradigms: BTreeSet<String>,
    root_index: HashMap<String, Vec<usize>>,
    suffix_index: HashMap<String, Vec<usize>>,
    paradigm_keys: HashMap<String, BTreeSet<FeatureKey>>,
    max_suffix_len: usize,
}

impl Language {
    pub(crate) fn build(
        roots: Vec<LexEntry>,
        suffixes: Vec<SuffixEntry>,
        groups: Vec<GroupPattern>,
    ) -> Language {
        let mut lang = Language {
            roots,
            suffixes,
            groups,
            ..Language::default()
        };
        for (i, e) in lang.roots.iter().enumerate() {
            lang.root_index.entry(e.root.clone()).or_default().push(i);
        }
        for (i, s) in lang.suffixes.iter().enumerate() {
            lang.suffix_index.entry(s.surface.clone()).or_default().push(i);
            lang.paradigms.insert(s.paradigm.clone());
            lang.paradigm_keys
                .entry(s.paradigm.clone())
                .or_default()
                .extend(s.features.keys());
            lang.max_suffix_len = lang.max_suffix_len.max(s.surface.len());
        }
        lang
    }

    pub fn roots(&self) -> &[LexEntry] {
        &self.roots
    }

    pub fn suffixes(&self) -> &[SuffixEntry] {
        &self.suffixes
    }

    pub fn groups(&self) -> &[GroupPattern] {
        &self.groups
    }

    pub fn has_paradigm(&self, paradigm: &str) -> bool {
        paradigm == INDECLINABLE || self.paradigms.contains(paradigm)
    }

    /// All entries whose root equals `surface`, in file order.
    pub fn lookup_root(&self, surface: &str) -> Vec<&LexEntry> {
        self.root_index
            .get(surface)
            .map(|ix| ix.iter().map(|&i| &self.roots[i]).collect())
            .unwrap_or_default()
    }

    pub(crate) fn root_indices(&self, surface: &str) -> &[usize] {
        self.root_index.get(surface).map_or(&[], Vec::as_slice)
    }

    pub fn lookup_entry(&self, root: &str, category: Category) -> Vec<&LexEntry> {
        self.lookup_root(root)
            .into_iter()
            .filter(|e| e.category == category)
            .collect()
    }

    /// Suffix rows with this surface that belong to `paradigm`.
    pub fn lookup_suffix(&self, surface: &str, paradigm: &str) -> Vec<&SuffixEntry> {
        self.suffix_indices(surface)
            .iter()
            .map(|&i| &self.suffixes[i])
            .filter(|s| s.paradigm == paradigm)
            .collect()
    }

    pub(crate) fn suffix_indices(&self, surface: &str) -> &[usize] {
        self.suffix_index.get(surface).map_or(&[], Vec::as_slice)
    }

    pub fn paradigm_rows<'a>(&'a self, paradigm: &'a str) -> impl Iterator<Item = &'a SuffixEntry> {
        self.suffixes.iter().filter(move |s| s.paradigm == paradigm)
    }

    /// Feature keys realized by inflection in a paradigm.
    pub fn paradigm_keys(&self, paradigm: &str) -> BTreeSet<FeatureKey> {
        self.paradigm_keys.get(paradigm).cloned().unwrap_or_default()
    }

    pub fn max_suffix_len(&self) -> usize {
        self.max_suffix_len
    }
}

/// A loaded, indexed and immutable language pair.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    pub(crate) pair: String,
    pub(crate) source: Language,
    pub(crate) target: Language,
    pub(crate) root_maps: Vec<RootMapping>,
    pub(crate) root_map_index: HashMap<(String, Category), usize>,
    pub(crate) tam_maps: Vec<TamMapping>,
    pub(crate) tam_index: HashMap<String, usize>,
    pub(crate) variants: Vec<VariantEntry>,
    pub(crate) variant_index: HashMap<String, Vec<usize>>,
}

impl Lexicon {
    /// Loads every data file in `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
        load::load_dir(dir.as_ref())
    }

    pub fn pair(&self) -> &str {
        &self.pair
    }

    pub fn source(&self) -> &Language {
        &self.source
    }

    pub fn target(&self) -> &Language {
        &self.target
    }

    pub fn language(&self, side: Side) -> &Language {
        match side {
            Side::Source => &self.source,
            Side::Target => &self.target,
        }
    }

    pub fn root_mappings(&self) -> &[RootMapping] {
        &self.root_maps
    }

    pub fn root_mapping(&self, root: &str, category: Category) -> Option<&RootMapping> {
        self.root_map_index
            .get(&(root.to_owned(), category))
            .map(|&i| &self.root_maps[i])
    }

    pub fn tam_mappings(&self) -> &[TamMapping] {
        &self.tam_maps
    }

    pub fn tam_mapping(&self, label: &str) -> Option<&TamMapping> {
        self.tam_index.get(label).map(|&i| &self.tam_maps[i])
    }

    pub fn variants(&self) -> &[VariantEntry] {
        &self.variants
    }

    pub fn variants_of(&self, token: &str) -> Vec<&VariantEntry> {
        self.variant_index
            .get(token)
            .map(|ix| ix.iter().map(|&i| &self.variants[i]).collect())
            .unwrap_or_default()
    }

    /// Boundary restorations usable by the sandhi splitter.
    pub fn junction_rules(&self) -> impl Iterator<Item = &VariantEntry> {
        self.variants.iter().filter(|v| v.junction().is_some())
    }

    /// Cross-reference diagnostics; empty when consistent.
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate_lexicon(self)
    }
}
