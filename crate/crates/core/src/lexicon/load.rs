use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::template::{self, parse_template};
use super::*;

const KINDS: [&str; 6] = ["roots", "suffixes", "groups", "map-roots", "map-tam", "variants"];

/// Loads the given data files. Files are read in sorted path order, so the
/// result does not depend on the order of `paths`.
pub fn load_lexicon(paths: &[PathBuf]) -> Result<Lexicon, LexiconError> {
    let mut paths: Vec<PathBuf> = paths.to_vec();
    paths.sort();
    paths.dedup();
    let pair = paths
        .first()
        .and_then(|p| p.parent())
        .and_then(Path::file_name)
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Loader::default().run(&paths, pair)
}

pub(super) fn load_dir(dir: &Path) -> Result<Lexicon, LexiconError> {
    let io = |source| LexiconError::Io {
        path: dir.to_owned(),
        source,
    };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && file_kind(&path).is_some() {
            paths.push(path);
        }
    }
    if !paths.iter().any(|p| file_kind(p) == Some("roots")) {
        return Err(LexiconError::NoDictionary(dir.to_owned()));
    }
    load_lexicon(&paths)
}

fn file_kind(path: &Path) -> Option<&'static str> {
    let ext = path.extension()?.to_str()?;
    KINDS.into_iter().find(|k| *k == ext)
}

fn side_of(path: &Path) -> Result<Side, LexiconError> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if stem.starts_with("source") {
        Ok(Side::Source)
    } else if stem.starts_with("target") {
        Ok(Side::Target)
    } else {
        Err(LexiconError::UnsidedFile(path.to_owned()))
    }
}

/// `-` spells the empty string in symbol columns.
fn symbol(field: &str) -> String {
    if field == "-" {
        String::new()
    } else {
        field.to_owned()
    }
}

fn optional(field: Option<&&str>) -> Option<String> {
    field.filter(|f| !f.is_empty() && **f != "-").map(|f| f.to_string())
}

#[derive(Default)]
struct SideData {
    roots: Vec<LexEntry>,
    suffixes: Vec<SuffixEntry>,
    groups: Vec<GroupPattern>,
}

#[derive(Default)]
struct Loader {
    source: SideData,
    target: SideData,
    root_maps: Vec<(RootMapping, Location)>,
    tam_maps: Vec<TamMapping>,
    variants: Vec<(VariantEntry, Location)>,
    seen: HashMap<(&'static str, String), Location>,
}

impl Loader {
    fn run(mut self, paths: &[PathBuf], pair: String) -> Result<Lexicon, LexiconError> {
        let mut roots_found = false;
        for path in paths {
            let Some(kind) = file_kind(path) else {
                continue;
            };
            roots_found |= kind == "roots";
            let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
                path: path.clone(),
                source,
            })?;
            for (n, line) in text.lines().enumerate() {
                let trimmed = line.trim_end_matches('\r');
                if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                    continue;
                }
                let mut fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
                while fields.last() == Some(&"") {
                    fields.pop();
                }
                let location = Location {
                    file: path.clone(),
                    line: n + 1,
                };
                self.record(kind, path, &fields, location)?;
            }
        }
        if !roots_found {
            let dir = paths
                .first()
                .and_then(|p| p.parent())
                .map(Path::to_path_buf)
                .unwrap_or_default();
            return Err(LexiconError::NoDictionary(dir));
        }
        self.finish(pair)
    }

    fn side(&mut self, side: Side) -> &mut SideData {
        match side {
            Side::Source => &mut self.source,
            Side::Target => &mut self.target,
        }
    }

    fn unique(
        &mut self,
        what: &'static str,
        key: String,
        location: &Location,
    ) -> Result<(), LexiconError> {
        if let Some(first) = self.seen.get(&(what, key.clone())) {
            return Err(LexiconError::Duplicate {
                location: location.clone(),
                what,
                key,
                first: first.clone(),
            });
        }
        self.seen.insert((what, key), location.clone());
        Ok(())
    }

    fn record(
        &mut self,
        kind: &str,
        path: &Path,
        fields: &[&str],
        location: Location,
    ) -> Result<(), LexiconError> {
        let bad = |message: String| LexiconError::Parse {
            location: location.clone(),
            message,
        };
        let need = |n: usize| {
            if fields.len() < n {
                Err(bad(format!("expected at least {n} fields, found {}", fields.len())))
            } else {
                Ok(())
            }
        };
        match kind {
            "roots" => {
                need(3)?;
                let side = side_of(path)?;
                let root = fields[0].to_owned();
                if root.is_empty() || root == "-" {
                    return Err(bad("empty root".into()));
                }
                let category: Category = fields[1].parse().map_err(bad)?;
                let paradigm = fields[2].to_owned();
                let inherent: FeatureBundle = fields
                    .get(3)
                    .copied()
                    .unwrap_or("-")
                    .parse()
                    .map_err(bad)?;
                let tag = if side == Side::Source { "source root" } else { "target root" };
                self.unique(tag, format!("{root}/{category}/{paradigm}"), &location)?;
                self.side(side).roots.push(LexEntry {
                    root,
                    category,
                    paradigm,
                    inherent,
                    gloss: optional(fields.get(4)),
                    label: optional(fields.get(5)),
                    location,
                });
            }
            "suffixes" => {
                need(3)?;
                let side = side_of(path)?;
                let paradigm = fields[0].to_owned();
                if paradigm == INDECLINABLE {
                    return Err(bad(format!("paradigm `{INDECLINABLE}` is reserved")));
                }
                let category: Category = fields[1].parse().map_err(bad)?;
                let surface = symbol(fields[2]);
                let features: FeatureBundle = fields
                    .get(3)
                    .copied()
                    .unwrap_or("-")
                    .parse()
                    .map_err(bad)?;
                if let Some(k) = features.keys().find(|k| !k.is_suffix_key()) {
                    return Err(bad(format!("`{k}` cannot be contributed by a suffix")));
                }
                let join = JoinRule {
                    delete_from_root: fields.get(4).map(|f| symbol(f)).unwrap_or_default(),
                    insert_at_boundary: fields.get(5).map(|f| symbol(f)).unwrap_or_default(),
                };
                let tag = if side == Side::Source { "source suffix" } else { "target suffix" };
                self.unique(
                    tag,
                    format!(
                        "{paradigm}/{surface}/{features}/{}/{}",
                        join.delete_from_root, join.insert_at_boundary
                    ),
                    &location,
                )?;
                self.side(side).suffixes.push(SuffixEntry {
                    surface,
                    paradigm,
                    category,
                    features,
                    join,
                    location,
                });
            }
            "groups" => {
                need(2)?;
                let side = side_of(path)?;
                let pattern = parse_group(fields, &location).map_err(bad)?;
                self.side(side).groups.push(pattern);
            }
            "map-roots" => {
                need(3)?;
                let source_root = fields[0].to_owned();
                let source_category: Category = fields[1].parse().map_err(bad)?;
                let targets = parse_targets(fields[2]).map_err(bad)?;
                self.unique(
                    "root mapping",
                    format!("{source_root}/{source_category}"),
                    &location,
                )?;
                self.root_maps.push((
                    RootMapping {
                        source_root,
                        source_category,
                        targets,
                    },
                    location,
                ));
            }
            "map-tam" => {
                need(2)?;
                let source_tam = fields[0].to_owned();
                let template_text = fields[1].to_owned();
                let template = parse_template(&template_text).map_err(bad)?;
                if template::count_placeholders(&template) > 1 {
                    return Err(bad("a template may hold at most one `*`".into()));
                }
                let mut mapping = TamMapping {
                    source_tam: source_tam.clone(),
                    template_text,
                    template,
                    suppresses_ne: false,
                    dialect_marked: false,
                    ergative: false,
                    citation: None,
                    location: location.clone(),
                };
                for flag in fields
                    .get(2)
                    .copied()
                    .filter(|f| *f != "-")
                    .into_iter()
                    .flat_map(|f| f.split(','))
                    .map(str::trim)
                {
                    match flag.split_once('=') {
                        Some(("citation", g)) => {
                            let gnp = Gnp::parse(g)
                                .ok_or_else(|| bad(format!("bad citation gnp `{g}`")))?;
                            mapping.citation = Some(gnp);
                        }
                        None if flag == "suppress_ne" => mapping.suppresses_ne = true,
                        None if flag == "dialect" => mapping.dialect_marked = true,
                        None if flag == "ergative" => mapping.ergative = true,
                        _ => return Err(bad(format!("unknown TAM flag `{flag}`"))),
                    }
                }
                if mapping.dialect_marked != template::has_tick(&mapping.template) {
                    return Err(bad(
                        "`dialect` flag and backtick in the template must agree".into(),
                    ));
                }
                self.unique("TAM mapping", source_tam, &location)?;
                self.tam_maps.push(mapping);
            }
            "variants" => {
                need(3)?;
                let kind = match fields[2] {
                    "spelling" => VariantKind::Spelling,
                    "sandhi_join" => VariantKind::SandhiJoin,
                    "sandhi_missplit" => VariantKind::SandhiMissplit,
                    other => return Err(bad(format!("unknown variant kind `{other}`"))),
                };
                let entry = VariantEntry {
                    variant: symbol(fields[0]),
                    standard: fields[1].to_owned(),
                    kind,
                };
                if entry.variant == entry.standard {
                    return Err(bad("variant equals its standard form".into()));
                }
                if kind == VariantKind::SandhiJoin && entry.junction().is_none() {
                    return Err(bad("sandhi_join standard must be written `left+right`".into()));
                }
                if kind == VariantKind::SandhiMissplit
                    && (entry.variant.split(' ').count() != 2 || entry.standard.is_empty())
                {
                    return Err(bad("sandhi_missplit variant must be two tokens".into()));
                }
                self.unique(
                    "variant",
                    format!("{}/{}", entry.variant, entry.standard),
                    &location,
                )?;
                self.variants.push((entry, location));
            }
            _ => unreachable!("filtered by file_kind"),
        }
        Ok(())
    }

    fn finish(self, pair: String) -> Result<Lexicon, LexiconError> {
        let source = build_side(self.source)?;
        let target = build_side(self.target)?;
        let mut lex = Lexicon {
            pair,
            source,
            target,
            ..Lexicon::default()
        };
        for (i, (m, _)) in self.root_maps.iter().enumerate() {
            lex.root_map_index
                .insert((m.source_root.clone(), m.source_category), i);
        }
        lex.root_maps = self.root_maps.into_iter().map(|(m, _)| m).collect();
        for (i, t) in self.tam_maps.iter().enumerate() {
            lex.tam_index.insert(t.source_tam.clone(), i);
        }
        lex.tam_maps = self.tam_maps;
        for (i, (v, _)) in self.variants.iter().enumerate() {
            lex.variant_index.entry(v.variant.clone()).or_default().push(i);
        }
        lex.variants = self.variants.into_iter().map(|(v, _)| v).collect();
        Ok(lex)
    }
}

fn build_side(data: SideData) -> Result<Language, LexiconError> {
    let lang = Language::build(data.roots, data.suffixes, data.groups);
    for e in lang.roots() {
        if !lang.has_paradigm(&e.paradigm) {
            return Err(LexiconError::DanglingParadigm {
                location: e.location.clone(),
                paradigm: e.paradigm.clone(),
            });
        }
    }
    Ok(lang)
}

fn parse_targets(field: &str) -> Result<Vec<TargetRoot>, String> {
    let targets: Vec<TargetRoot> = field
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (root, cat) = t
                .rsplit_once(':')
                .ok_or_else(|| format!("target `{t}` must be written root:category"))?;
            let (root, dialect_marked) = match root.strip_suffix('`') {
                Some(r) => (r, true),
                None => (root, false),
            };
            if root.is_empty() {
                return Err(format!("empty target root in `{t}`"));
            }
            Ok(TargetRoot {
                root: root.to_owned(),
                category: cat.parse()?,
                dialect_marked,
            })
        })
        .collect::<Result<_, String>>()?;
    if targets.is_empty() {
        return Err("a mapping needs at least one target".into());
    }
    Ok(targets)
}

fn parse_group(fields: &[&str], location: &Location) -> Result<GroupPattern, String> {
    let kind = match fields[0] {
        "noun_group" => GroupKind::NounGroup,
        "verb_group" => GroupKind::VerbGroup,
        "fixed" => GroupKind::FixedExpression,
        other => return Err(format!("unknown group kind `{other}`")),
    };
    let mut items = Vec::new();
    let mut head = None;
    for raw in fields[1].split(' ').filter(|s| !s.is_empty()) {
        let (is_head, raw) = match raw.strip_prefix('^') {
            Some(r) => (true, r),
            None => (false, raw),
        };
        let (body, quantifier) = match raw.chars().last() {
            Some('*') => (&raw[..raw.len() - 1], Quantifier::Star),
            Some('+') => (&raw[..raw.len() - 1], Quantifier::Plus),
            Some('?') => (&raw[..raw.len() - 1], Quantifier::Optional),
            _ => (raw, Quantifier::One),
        };
        let matcher = if let Some(lit) = body.strip_prefix('=') {
            match lit.rsplit_once(':') {
                Some((root, cat)) => ItemMatcher::Root {
                    root: root.to_owned(),
                    category: Some(cat.parse()?),
                },
                None => ItemMatcher::Root {
                    root: lit.to_owned(),
                    category: None,
                },
            }
        } else {
            ItemMatcher::Category(body.parse()?)
        };
        if is_head {
            if head.is_some() {
                return Err("pattern marks two heads".into());
            }
            if quantifier != Quantifier::One {
                return Err("the head item cannot be quantified".into());
            }
            head = Some(items.len());
        }
        items.push(PatternItem {
            matcher,
            quantifier,
        });
    }
    if items.is_empty() {
        return Err("empty pattern".into());
    }
    let head = head.unwrap_or(0);
    if items[head].quantifier != Quantifier::One {
        return Err("the head item cannot be quantified".into());
    }
    let meaning = match fields.get(2).filter(|f| !f.is_empty() && **f != "-") {
        Some(m) => {
            let roots: Vec<String> = items
                .iter()
                .map(|it| match &it.matcher {
                    ItemMatcher::Root { root, .. } => Ok(root.clone()),
                    ItemMatcher::Category(_) => {
                        Err("a pattern with a meaning must list literal roots".to_string())
                    }
                })
                .collect::<Result<_, _>>()?;
            let source_category = match &items[head].matcher {
                ItemMatcher::Root {
                    category: Some(c), ..
                } => *c,
                _ => Category::Noun,
            };
            Some(RootMapping {
                source_root: roots.join("_"),
                source_category,
                targets: parse_targets(m)?,
            })
        }
        None => None,
    };
    if kind == GroupKind::FixedExpression {
        if items.len() < 2 {
            return Err("a fixed expression needs at least two words".into());
        }
        if meaning.is_none() {
            return Err("a fixed expression must carry a meaning".into());
        }
        if items.iter().any(|i| i.quantifier != Quantifier::One) {
            return Err("fixed expressions cannot be quantified".into());
        }
    }
    Ok(GroupPattern {
        kind,
        items,
        head,
        meaning,
        location: location.clone(),
    })
}
