//! The embedded catalog of operads and its verifier.
//!
//! Each entry is a `.operad` presentation next to a `.meta` file of
//! `key: value` lines. The files in `registry/` are compiled in; pointing
//! `OPERADICA_REGISTRY_DIR` at a directory with the same layout replaces them.
//!
//! Meta keys: `name`, `title`, `properties`, `ns_dims` / `sym_dims` (as
//! printed, `?` for an unknown value), `dims_arities`, `derived_dims`,
//! `series`, `series_fixed`, `sequence`, `dual`, `dual_map`, `model`,
//! `alt_presentation`, `max_arity`, `derived`, `conflict` and `note`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{factorial, Rational};
use crate::freeoperad::{quotient_dims_with, Budget, DimTable, MAX_BASIS};
use crate::koszul::{identity_map, quadratic_dual, relations_equivalent, relations_equivalent_scaled};
use crate::models::{check_by_id, Interpretation};
use crate::presentation::{parse, Mode, Presentation};
use crate::series::{koszul_series_compare, named_sequence, KoszulSeriesOutcome, PowerSeries, SeriesId, SeriesKind};

/// Environment variable naming a directory that replaces the embedded data.
pub const ENV_DIR: &str = "OPERADICA_REGISTRY_DIR";

macro_rules! file {
    ($name:literal) => {
        ($name, include_str!(concat!("../registry/", $name)))
    };
}

const FILES: &[(&str, &str)] = &[
    file!("2as-dual.meta"),
    file!("2as-dual.operad"),
    file!("2as.meta"),
    file!("2as.operad"),
    file!("akivis.meta"),
    file!("akivis.operad"),
    file!("altern-dual.meta"),
    file!("altern-dual.operad"),
    file!("altern.meta"),
    file!("altern.operad"),
    file!("as-angle-2-dual.meta"),
    file!("as-angle-2-dual.operad"),
    file!("as-angle-2.meta"),
    file!("as-angle-2.operad"),
    file!("as-paren-2.meta"),
    file!("as-paren-2.operad"),
    file!("as.meta"),
    file!("as.operad"),
    file!("com.meta"),
    file!("com.operad"),
    file!("commag-dual.meta"),
    file!("commag-dual.operad"),
    file!("commag.meta"),
    file!("commag.operad"),
    file!("comtrias.meta"),
    file!("comtrias.operad"),
    file!("ctd-dual.meta"),
    file!("ctd-dual.operad"),
    file!("ctd.meta"),
    file!("ctd.operad"),
    file!("dend.meta"),
    file!("dend.operad"),
    file!("dias.meta"),
    file!("dias.operad"),
    file!("diprelie.meta"),
    file!("diprelie.operad"),
    file!("dipt-dual.meta"),
    file!("dipt-dual.operad"),
    file!("dipt.meta"),
    file!("dipt.operad"),
    file!("doublelie.meta"),
    file!("doublelie.operad"),
    file!("dup-dual.meta"),
    file!("dup-dual.operad"),
    file!("dup.meta"),
    file!("dup.operad"),
    file!("excluded.txt"),
    file!("genmag.meta"),
    file!("genmag.operad"),
    file!("index.txt"),
    file!("interchange.meta"),
    file!("interchange.operad"),
    file!("jt.meta"),
    file!("jt.operad"),
    file!("leib.meta"),
    file!("leib.operad"),
    file!("lie-adm.meta"),
    file!("lie-adm.operad"),
    file!("lie-yamaguti.meta"),
    file!("lie-yamaguti.operad"),
    file!("lie.meta"),
    file!("lie.operad"),
    file!("lts.meta"),
    file!("lts.operad"),
    file!("mag.meta"),
    file!("mag.operad"),
    file!("magfine-dual.meta"),
    file!("magfine-dual.operad"),
    file!("magfine.meta"),
    file!("magfine.operad"),
    file!("malcev.meta"),
    file!("malcev.operad"),
    file!("moufang.meta"),
    file!("moufang.operad"),
    file!("nap.meta"),
    file!("nap.operad"),
    file!("nil2.meta"),
    file!("nil2.operad"),
    file!("novikov.meta"),
    file!("novikov.operad"),
    file!("p-as.meta"),
    file!("p-as.operad"),
    file!("param1rel.meta"),
    file!("param1rel.operad"),
    file!("perm.meta"),
    file!("perm.operad"),
    file!("pois-alt.operad"),
    file!("pois.meta"),
    file!("pois.operad"),
    file!("postlie.meta"),
    file!("postlie.operad"),
    file!("prelie.meta"),
    file!("prelie.operad"),
    file!("prelieperm.meta"),
    file!("prelieperm.operad"),
    file!("quadri-dual.meta"),
    file!("quadri-dual.operad"),
    file!("quadri.meta"),
    file!("quadri.operad"),
    file!("t-as.meta"),
    file!("t-as.operad"),
    file!("tableau.txt"),
    file!("trias.meta"),
    file!("trias.operad"),
    file!("tridend.meta"),
    file!("tridend.operad"),
    file!("zinb.meta"),
    file!("zinb.operad"),
];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("no registry entry named `{0}`")]
    UnknownEntry(String),
    #[error("{file}: {message}")]
    Data { file: String, message: String },
    #[error("{0}")]
    Io(String),
}

fn data_err(file: &str, message: impl Into<String>) -> RegistryError {
    RegistryError::Data { file: file.to_string(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Property {
    Binary,
    Ternary,
    MultiAry,
    Quadratic,
    Cubic,
    Ns,
    SetTheoretic,
    Koszul,
    SelfDual,
    QuasiRegular,
    NonKoszul,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::Binary,
        Property::Ternary,
        Property::MultiAry,
        Property::Quadratic,
        Property::Cubic,
        Property::Ns,
        Property::SetTheoretic,
        Property::Koszul,
        Property::SelfDual,
        Property::QuasiRegular,
        Property::NonKoszul,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Binary => "binary",
            Property::Ternary => "ternary",
            Property::MultiAry => "multi-ary",
            Property::Quadratic => "quadratic",
            Property::Cubic => "cubic",
            Property::Ns => "ns",
            Property::SetTheoretic => "set-theoretic",
            Property::Koszul => "Koszul",
            Property::SelfDual => "self-dual",
            Property::QuasiRegular => "quasi-regular",
            Property::NonKoszul => "non-Koszul",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a check or a documented conflict is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Dims,
    Series,
    Dual,
    Model,
    Tableau,
    Data,
}

impl CheckKind {
    /// The kinds `verify` can run.
    pub const RUNNABLE: [CheckKind; 5] = [CheckKind::Dims, CheckKind::Series, CheckKind::Dual, CheckKind::Model, CheckKind::Tableau];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Dims => "dims",
            CheckKind::Series => "series",
            CheckKind::Dual => "dual",
            CheckKind::Model => "model",
            CheckKind::Tableau => "tableau",
            CheckKind::Data => "data",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        [CheckKind::Dims, CheckKind::Series, CheckKind::Dual, CheckKind::Model, CheckKind::Tableau, CheckKind::Data]
            .into_iter()
            .find(|k| k.as_str() == s.trim())
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimKind {
    /// `dim P_n`; the symmetric dimension is `n!` times this.
    Ns,
    /// `dim P(n)`.
    Symmetric,
}

/// A dimension table as printed; `None` stands for `??`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimList {
    pub kind: DimKind,
    pub values: Vec<Option<u64>>,
}

/// A documented inconsistency of the source tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub kind: CheckKind,
    pub text: String,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.text)
    }
}

/// One catalog entry.
#[derive(Clone, Debug, Serialize)]
pub struct RegistryEntry {
    pub slug: String,
    pub name: String,
    pub title: String,
    pub source: String,
    #[serde(skip)]
    pub presentation: Presentation,
    pub alt_source: Option<String>,
    pub printed_dims: Option<DimList>,
    /// Values computed once and kept as a regression table, in the
    /// presentation's own convention.
    pub derived_dims: Option<Vec<u64>>,
    pub dims_arities: Option<Vec<usize>>,
    pub series: Option<String>,
    pub series_fixed: Option<String>,
    pub sequence: Option<String>,
    pub dual: Option<String>,
    /// `(a, b, c)`: generator `a` of the computed dual is `c` times `b`.
    pub dual_map: Vec<(String, String, Rational)>,
    pub properties: BTreeSet<Property>,
    pub model: Option<(String, usize)>,
    /// The presentation is computed rather than transcribed.
    pub derived: bool,
    pub max_arity: Option<usize>,
    pub conflicts: Vec<Conflict>,
    pub notes: Vec<String>,
}

impl RegistryEntry {
    pub fn series_kind(&self) -> SeriesKind {
        match self.presentation.mode {
            Mode::Ns => SeriesKind::Ordinary,
            Mode::Symmetric => SeriesKind::Exponential,
        }
    }

    /// The printed closed form.
    pub fn printed_series(&self) -> Option<SeriesId> {
        self.series.as_ref().map(|s| SeriesId::parse(s, self.series_kind()).expect("checked at load"))
    }

    /// The corrected closed form when there is one, else the printed one.
    pub fn working_series(&self) -> Option<SeriesId> {
        match &self.series_fixed {
            Some(s) => Some(SeriesId::parse(s, self.series_kind()).expect("checked at load")),
            None => self.printed_series(),
        }
    }

    /// Arity of the `i`-th listed dimension.
    pub fn arity_at(&self, i: usize) -> usize {
        match &self.dims_arities {
            Some(a) => a.get(i).copied().unwrap_or(usize::MAX),
            None => i + 1,
        }
    }

    /// `(arity, value)` pairs of the printed table.
    pub fn printed_dims_by_arity(&self) -> Vec<(usize, Option<u64>)> {
        match &self.printed_dims {
            Some(d) => d.values.iter().enumerate().map(|(i, v)| (self.arity_at(i), *v)).collect(),
            None => Vec::new(),
        }
    }

    pub fn has_conflict(&self, kind: CheckKind) -> bool {
        self.conflicts.iter().any(|c| c.kind == kind)
    }

    pub fn alt_presentation(&self) -> Option<Presentation> {
        self.alt_source.as_ref().map(|s| parse(s).expect("checked at load"))
    }
}

/// A row of the closing table of integer sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableauRow {
    pub values: Vec<u64>,
    pub label: String,
    pub entries: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
    excluded: Vec<(String, String)>,
    tableau: Vec<TableauRow>,
}

fn split_list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_u64_list(file: &str, v: &str) -> Result<Vec<u64>, RegistryError> {
    split_list(v).into_iter().map(|x| x.parse().map_err(|_| data_err(file, format!("`{x}` is not a number")))).collect()
}

fn parse_dims(file: &str, v: &str) -> Result<Vec<Option<u64>>, RegistryError> {
    split_list(v)
        .into_iter()
        .map(|x| if x == "?" { Ok(None) } else { x.parse().map(Some).map_err(|_| data_err(file, format!("`{x}` is not a number"))) })
        .collect()
}

fn build_entry(slug: &str, files: &BTreeMap<String, String>) -> Result<RegistryEntry, RegistryError> {
    let meta_file = format!("{slug}.meta");
    let op_file = format!("{slug}.operad");
    let meta = files.get(&meta_file).ok_or_else(|| data_err(&meta_file, "missing"))?;
    let source = files.get(&op_file).ok_or_else(|| data_err(&op_file, "missing"))?.clone();
    let presentation = parse(&source).map_err(|e| data_err(&op_file, e.to_string()))?;
    let mut e = RegistryEntry {
        slug: slug.to_string(),
        name: String::new(),
        title: String::new(),
        source,
        presentation,
        alt_source: None,
        printed_dims: None,
        derived_dims: None,
        dims_arities: None,
        series: None,
        series_fixed: None,
        sequence: None,
        dual: None,
        dual_map: Vec::new(),
        properties: BTreeSet::new(),
        model: None,
        derived: false,
        max_arity: None,
        conflicts: Vec::new(),
        notes: Vec::new(),
    };
    for (i, raw) in meta.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let here = format!("{meta_file}:{}", i + 1);
        let (key, value) = line.split_once(':').ok_or_else(|| data_err(&here, "expected `key: value`"))?;
        let value = value.trim();
        match key.trim() {
            "name" => e.name = value.to_string(),
            "title" => e.title = value.to_string(),
            "properties" => {
                for p in split_list(value) {
                    e.properties.insert(Property::parse(p).ok_or_else(|| data_err(&here, format!("unknown property `{p}`")))?);
                }
            }
            "ns_dims" => e.printed_dims = Some(DimList { kind: DimKind::Ns, values: parse_dims(&here, value)? }),
            "sym_dims" => e.printed_dims = Some(DimList { kind: DimKind::Symmetric, values: parse_dims(&here, value)? }),
            "dims_arities" => {
                e.dims_arities = Some(parse_u64_list(&here, value)?.into_iter().map(|a| a as usize).collect());
            }
            "derived_dims" => e.derived_dims = Some(parse_u64_list(&here, value)?),
            "series" | "series_fixed" => {
                let kind = if e.presentation.mode == Mode::Ns { SeriesKind::Ordinary } else { SeriesKind::Exponential };
                SeriesId::parse(value, kind).map_err(|err| data_err(&here, err.to_string()))?;
                if key.trim() == "series" {
                    e.series = Some(value.to_string());
                } else {
                    e.series_fixed = Some(value.to_string());
                }
            }
            "sequence" => {
                named_sequence(value, 1).ok_or_else(|| data_err(&here, format!("unknown sequence `{value}`")))?;
                e.sequence = Some(value.to_string());
            }
            "dual" => e.dual = Some(value.to_string()),
            "dual_map" => {
                for pair in split_list(value) {
                    let (a, b) = pair.split_once('=').ok_or_else(|| data_err(&here, format!("expected `a=b`, found `{pair}`")))?;
                    let (c, b) = match b.split_once('*') {
                        Some((c, b)) => (c.trim().parse::<Rational>().map_err(|_| data_err(&here, format!("bad scale `{c}`")))?, b),
                        None => match b.trim().strip_prefix('-') {
                            Some(b) => (-Rational::one(), b),
                            None => (Rational::one(), b),
                        },
                    };
                    e.dual_map.push((a.trim().to_string(), b.trim().to_string(), c));
                }
            }
            "model" => {
                let mut it = value.split_whitespace();
                let (Some(id), Some(size), None) = (it.next(), it.next(), it.next()) else {
                    return Err(data_err(&here, "expected `model: <id> <size>`"));
                };
                let size = size.parse().map_err(|_| data_err(&here, "model size is not a number"))?;
                e.model = Some((id.to_string(), size));
            }
            "alt_presentation" => {
                let src = files.get(value).ok_or_else(|| data_err(&here, format!("missing file `{value}`")))?;
                parse(src).map_err(|err| data_err(value, err.to_string()))?;
                e.alt_source = Some(src.clone());
            }
            "max_arity" => e.max_arity = Some(value.parse().map_err(|_| data_err(&here, "max_arity is not a number"))?),
            "derived" => e.derived = value == "true",
            "conflict" => {
                let (kind, text) = value.split_once(':').ok_or_else(|| data_err(&here, "expected `conflict: <kind>: <text>`"))?;
                let kind = CheckKind::parse(kind).ok_or_else(|| data_err(&here, format!("unknown conflict kind `{kind}`")))?;
                e.conflicts.push(Conflict { kind, text: text.trim().to_string() });
            }
            "note" => e.notes.push(value.to_string()),
            other => return Err(data_err(&here, format!("unknown key `{other}`"))),
        }
    }
    if e.name.is_empty() {
        return Err(data_err(&meta_file, "no `name`"));
    }
    if e.name != e.presentation.name {
        return Err(data_err(&meta_file, format!("name `{}` differs from the presentation's `{}`", e.name, e.presentation.name)));
    }
    Ok(e)
}

fn parse_excluded(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| match l.split_once('|') {
            Some((n, r)) => (n.trim().to_string(), r.trim().to_string()),
            None => (l.to_string(), String::new()),
        })
        .collect()
}

fn parse_tableau(text: &str) -> Result<Vec<TableauRow>, RegistryError> {
    let mut rows = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let here = format!("tableau.txt:{}", i + 1);
        let parts: Vec<&str> = l.split('|').collect();
        if parts.len() != 3 {
            return Err(data_err(&here, "expected `values | label | entries`"));
        }
        let values = parts[0]
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| data_err(&here, format!("`{x}` is not a number"))))
            .collect::<Result<Vec<u64>, _>>()?;
        rows.push(TableauRow {
            values,
            label: parts[1].trim().to_string(),
            entries: split_list(parts[2]).into_iter().map(String::from).collect(),
        });
    }
    Ok(rows)
}

impl Registry {
    /// The compiled-in data.
    pub fn embedded() -> Registry {
        let files = FILES.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect();
        Registry::from_files(&files).expect("embedded registry data is valid")
    }

    /// Reads a directory laid out like `registry/`.
    pub fn from_dir(dir: &Path) -> Result<Registry, RegistryError> {
        let mut files = BTreeMap::new();
        let rd = std::fs::read_dir(dir).map_err(|e| RegistryError::Io(format!("{}: {e}", dir.display())))?;
        for item in rd {
            let path = item.map_err(|e| RegistryError::Io(e.to_string()))?.path();
            if !path.is_file() {
                continue;
            }
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
            let text = std::fs::read_to_string(&path).map_err(|e| RegistryError::Io(format!("{}: {e}", path.display())))?;
            files.insert(name, text);
        }
        Registry::from_files(&files)
    }

    /// The directory named by `OPERADICA_REGISTRY_DIR`, or the embedded data.
    pub fn load() -> Result<Registry, RegistryError> {
        match std::env::var_os(ENV_DIR) {
            Some(dir) if !dir.is_empty() => Registry::from_dir(Path::new(&dir)),
            _ => Ok(Registry::embedded()),
        }
    }

    /// Builds from file name to contents. `index.txt` fixes the order;
    /// without it the `.meta` files are taken alphabetically.
    pub fn from_files(files: &BTreeMap<String, String>) -> Result<Registry, RegistryError> {
        let slugs: Vec<String> = match files.get("index.txt") {
            Some(idx) => idx.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect(),
            None => files.keys().filter_map(|k| k.strip_suffix(".meta")).map(String::from).collect(),
        };
        for k in files.keys().filter_map(|k| k.strip_suffix(".meta")) {
            if !slugs.iter().any(|s| s == k) {
                return Err(data_err("index.txt", format!("`{k}` is not listed")));
            }
        }
        let entries = slugs.iter().map(|s| build_entry(s, files)).collect::<Result<Vec<_>, _>>()?;
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.name.to_lowercase()) {
                return Err(data_err(&format!("{}.meta", e.slug), format!("duplicate name `{}`", e.name)));
            }
        }
        let excluded = files.get("excluded.txt").map(|t| parse_excluded(t)).unwrap_or_default();
        let tableau = match files.get("tableau.txt") {
            Some(t) => parse_tableau(t)?,
            None => Vec::new(),
        };
        Ok(Registry { entries, excluded, tableau })
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn list(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// Looks up by name, then by name or slug ignoring case.
    pub fn get(&self, name: &str) -> Result<&RegistryEntry, RegistryError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .or_else(|| self.entries.iter().find(|e| e.name.eq_ignore_ascii_case(name) || e.slug.eq_ignore_ascii_case(name)))
            .ok_or_else(|| RegistryError::UnknownEntry(name.to_string()))
    }

    /// Pages left out, with the reason.
    pub fn excluded(&self) -> &[(String, String)] {
        &self.excluded
    }

    pub fn tableau(&self) -> &[TableauRow] {
        &self.tableau
    }

    /// Every documented conflict, by entry.
    pub fn conflicts(&self) -> Vec<(&str, &Conflict)> {
        self.entries.iter().flat_map(|e| e.conflicts.iter().map(move |c| (e.name.as_str(), c))).collect()
    }
}

/// Names of the embedded (or overridden) entries.
pub fn list() -> Result<Vec<String>, RegistryError> {
    Ok(Registry::load()?.list().into_iter().map(String::from).collect())
}

pub fn get(name: &str) -> Result<RegistryEntry, RegistryError> {
    Registry::load()?.get(name).cloned()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub checks: BTreeSet<CheckKind>,
    /// Largest arity computed for ns presentations.
    pub ns_max: usize,
    /// Largest arity computed for symmetric presentations.
    pub sym_max: usize,
    pub series_order: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { checks: CheckKind::RUNNABLE.into_iter().collect(), ns_max: 7, sym_max: 5, series_order: 12 }
    }
}

impl VerifyOptions {
    pub fn only(checks: &[CheckKind]) -> Self {
        VerifyOptions { checks: checks.iter().copied().collect(), ..Default::default() }
    }

    /// Both budgets set to `max_arity`.
    pub fn with_max_arity(mut self, max_arity: usize) -> Self {
        self.ns_max = max_arity;
        self.sym_max = max_arity;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Failed, but the entry documents a conflict of this kind.
    Warn,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Warn => "warn",
            Status::Skipped => "skip",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub kind: CheckKind,
    pub label: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
    /// Documented conflicts, always reported.
    pub warnings: Vec<String>,
    /// `(arity, dim)` in the presentation's convention, when computed.
    pub dims: Vec<(usize, u64)>,
}

impl EntryReport {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn ok(&self) -> bool {
        self.hard_failures() == 0
    }

    pub fn check(&self, kind: CheckKind, label: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.kind == kind && c.label == label)
    }

    pub fn status(&self, kind: CheckKind) -> Vec<Status> {
        self.checks.iter().filter(|c| c.kind == kind).map(|c| c.status).collect()
    }
}

impl fmt::Display for EntryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        for c in &self.checks {
            let what = format!("{} {}", c.kind, c.label);
            writeln!(f, "  {:<5} {:<22} {}", c.status.as_str(), what.trim_end(), c.detail)?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning  {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegistryReport {
    pub entries: Vec<EntryReport>,
}

impl RegistryReport {
    pub fn hard_failures(&self) -> usize {
        self.entries.iter().map(EntryReport::hard_failures).sum()
    }

    pub fn ok(&self) -> bool {
        self.hard_failures() == 0
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().flat_map(|e| &e.checks).filter(|c| c.status == status).count()
    }

    pub fn warnings(&self) -> Vec<(&str, &str)> {
        self.entries.iter().flat_map(|e| e.warnings.iter().map(move |w| (e.name.as_str(), w.as_str()))).collect()
    }
}

impl fmt::Display for RegistryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{e}")?;
        }
        writeln!(
            f,
            "{} entries: {} pass, {} fail, {} warn, {} skipped; {} documented conflicts",
            self.entries.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Warn),
            self.count(Status::Skipped),
            self.warnings().len()
        )
    }
}

fn join<T: fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn sym_value(v: u64, n: usize, ns: bool) -> BigInt {
    if ns {
        BigInt::from(v) * factorial(n as u64)
    } else {
        BigInt::from(v)
    }
}

struct Checker<'a> {
    reg: &'a Registry,
    e: &'a RegistryEntry,
    opts: &'a VerifyOptions,
    out: Vec<CheckResult>,
}

impl Checker<'_> {
    fn push(&mut self, kind: CheckKind, label: &str, ok: bool, detail: String) {
        let status = match (ok, self.e.has_conflict(kind)) {
            (true, _) => Status::Pass,
            (false, true) => Status::Warn,
            (false, false) => Status::Fail,
        };
        let detail = if status == Status::Warn { format!("{detail} (documented conflict)") } else { detail };
        self.out.push(CheckResult { kind, label: label.to_string(), status, detail });
    }

    fn skip(&mut self, kind: CheckKind, label: &str, reason: impl Into<String>) {
        self.out.push(CheckResult { kind, label: label.to_string(), status: Status::Skipped, detail: reason.into() });
    }

    fn max_arity(&self, p: &Presentation) -> usize {
        let m = match p.mode {
            Mode::Ns => self.opts.ns_max,
            Mode::Symmetric => self.opts.sym_max,
        };
        self.e.max_arity.map_or(m, |cap| m.min(cap))
    }

    fn dims_of(&self, p: &Presentation, max_arity: usize) -> Result<DimTable, String> {
        quotient_dims_with(p, Budget { max_arity, max_basis: MAX_BASIS }).map_err(|e| e.to_string())
    }

    /// Compares computed dims with a printed table.
    fn compare(&mut self, label: &str, table: &DimTable, ns: bool, expected: &[(usize, Option<u64>)], expected_ns: bool) {
        let mut agree = Vec::new();
        let mut bad = Vec::new();
        for (a, v) in expected {
            let (Some(v), Some(d)) = (v, table.get(*a)) else { continue };
            if sym_value(d, *a, ns) == sym_value(*v, *a, expected_ns) {
                agree.push(*a);
            } else {
                bad.push(format!("n={a}: table {v}, computed {d}"));
            }
        }
        let trunc = match &table.truncated {
            Some(t) => format!("; stopped at arity {} ({} monomials > {})", t.arity, t.basis_size, t.limit),
            None => String::new(),
        };
        if agree.is_empty() && bad.is_empty() {
            self.skip(CheckKind::Dims, label, format!("no computed arity is in the table{trunc}"));
        } else if bad.is_empty() {
            let computed: Vec<u64> = agree.iter().filter_map(|a| table.get(*a)).collect();
            self.push(CheckKind::Dims, label, true, format!("n={} agree: {}{trunc}", join(&agree), join(computed)));
        } else {
            self.push(CheckKind::Dims, label, false, format!("{}{trunc}", bad.join("; ")));
        }
    }

    fn dims(&mut self, table: &Result<DimTable, String>) {
        let e = self.e;
        let ns = e.presentation.mode == Mode::Ns;
        let table = match table {
            Ok(t) => t,
            Err(msg) => {
                self.push(CheckKind::Dims, "", false, msg.clone());
                return;
            }
        };
        if let Some(d) = &e.printed_dims {
            let expected = e.printed_dims_by_arity();
            self.compare("", table, ns, &expected, d.kind == DimKind::Ns);
        }
        if let Some(derived) = &e.derived_dims {
            let expected: Vec<(usize, Option<u64>)> = derived.iter().enumerate().map(|(i, v)| (e.arity_at(i), Some(*v))).collect();
            self.compare("derived", table, ns, &expected, ns);
        }
        if e.printed_dims.is_none() && e.derived_dims.is_none() {
            self.skip(CheckKind::Dims, "", format!("no table; computed {}", join(table.dims())));
        }
        if let (Some(alt), Some(d)) = (e.alt_presentation(), &e.printed_dims) {
            let alt_ns = alt.mode == Mode::Ns;
            let max = self.max_arity(&alt).min(4);
            match self.dims_of(&alt, max) {
                Ok(t) => self.compare("alternative", &t, alt_ns, &e.printed_dims_by_arity(), d.kind == DimKind::Ns),
                Err(msg) => self.push(CheckKind::Dims, "alternative", false, msg),
            }
        }
    }

    fn series_against(&mut self, label: &str, s: &PowerSeries, table: &DimTable) {
        let ns = self.e.presentation.mode == Mode::Ns;
        let mut bad = Vec::new();
        let mut seen = Vec::new();
        for n in 1..=table.rows.last().map_or(0, |r| r.arity) {
            let c = s.coefficient(n);
            let got = if ns { c } else { &c * &Rational::from(factorial(n as u64)) };
            let want = Rational::from(table.get(n).unwrap_or(0));
            seen.push(n);
            if got != want {
                bad.push(format!("t^{n}: series {got}, computed {want}"));
            }
        }
        if bad.is_empty() {
            self.push(CheckKind::Series, label, true, format!("coefficients agree for n=1..{}", seen.len()));
        } else {
            self.push(CheckKind::Series, label, false, bad.join("; "));
        }
    }

    fn series(&mut self, table: &Result<DimTable, String>) {
        let e = self.e;
        let Ok(table) = table else {
            self.skip(CheckKind::Series, "", "no computed dimensions");
            return;
        };
        let order = table.rows.last().map_or(1, |r| r.arity);
        let mut any = false;
        for (label, src) in [("printed", &e.series), ("corrected", &e.series_fixed)] {
            let Some(src) = src else { continue };
            any = true;
            match SeriesId::parse(src, e.series_kind()).and_then(|id| id.expand(order)) {
                Ok(s) => self.series_against(label, &s, table),
                Err(err) => self.push(CheckKind::Series, label, false, err.to_string()),
            }
        }
        if let Some(name) = &e.sequence {
            any = true;
            let seq = named_sequence(name, order).unwrap_or_default();
            let mut coeffs = vec![Rational::zero()];
            coeffs.extend(seq);
            let s = PowerSeries::from_full(SeriesKind::Ordinary, coeffs);
            self.series_against(name, &s, table);
        }
        if !any {
            self.skip(CheckKind::Series, "", "no closed form");
        }
    }

    fn dual(&mut self) {
        let e = self.e;
        let p = &e.presentation;
        let computed = quadratic_dual(p);
        match &computed {
            Ok(q) => match quadratic_dual(q).and_then(|qq| relations_equivalent(&qq, p, &identity_map(p))) {
                Ok(ok) => self.push(CheckKind::Dual, "involution", ok, if ok { "P!! = P".into() } else { "P!! differs from P".into() }),
                Err(err) => self.push(CheckKind::Dual, "involution", false, err.to_string()),
            },
            Err(err) => self.skip(CheckKind::Dual, "involution", err.to_string()),
        }
        let Some(dn) = &e.dual else {
            self.skip(CheckKind::Dual, "pair", "no dual page");
            return;
        };
        let other = match self.reg.get(dn) {
            Ok(o) => o,
            Err(err) => {
                self.push(CheckKind::Dual, "pair", false, err.to_string());
                return;
            }
        };
        let back = other.dual.as_deref() == Some(e.name.as_str());
        self.push(CheckKind::Dual, "symmetric", back, if back { format!("{} names {} back", other.name, e.name) } else { format!("{} does not name {} as its dual", other.name, e.name) });
        match &computed {
            Ok(q) => {
                let map: Vec<(&str, &str, Rational)> = if e.dual_map.is_empty() {
                    identity_map(p).into_iter().map(|(a, b)| (a, b, Rational::one())).collect()
                } else {
                    e.dual_map.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.clone())).collect()
                };
                match relations_equivalent_scaled(q, &other.presentation, &map) {
                    Ok(ok) => self.push(
                        CheckKind::Dual,
                        "relations",
                        ok,
                        if ok { format!("computed dual matches {}", other.name) } else { format!("computed dual differs from {}", other.name) },
                    ),
                    Err(err) => self.push(CheckKind::Dual, "relations", false, err.to_string()),
                }
            }
            Err(err) => self.skip(CheckKind::Dual, "relations", err.to_string()),
        }
        match (e.working_series(), other.working_series()) {
            _ if !(p.is_binary() && other.presentation.is_binary()) => {
                self.skip(CheckKind::Dual, "series", "the series identity needs binary generators")
            }
            (Some(f), Some(g)) => {
                let order = self.opts.series_order;
                let res = f.expand(order).and_then(|f| g.expand(order).and_then(|g| koszul_series_compare(&f, &g)));
                match res {
                    Ok(KoszulSeriesOutcome::Holds { order }) => self.push(CheckKind::Dual, "series", true, format!("f!(-f(-t)) = t to order {order}")),
                    Ok(KoszulSeriesOutcome::Differs { degree, expected, found }) => {
                        self.push(CheckKind::Dual, "series", false, format!("t^{degree}: expected {expected}, found {found}"))
                    }
                    Err(err) => self.push(CheckKind::Dual, "series", false, err.to_string()),
                }
            }
            _ => self.skip(CheckKind::Dual, "series", "closed forms missing"),
        }
    }

    fn model(&mut self) {
        let Some((id, size)) = &self.e.model else {
            self.skip(CheckKind::Model, "", "no model");
            return;
        };
        match check_by_id(id, &self.e.presentation, *size, &Interpretation::native()) {
            Ok(r) => {
                let ok = r.passed();
                self.push(CheckKind::Model, id, ok, r.to_string());
            }
            Err(err) => self.push(CheckKind::Model, id, false, err.to_string()),
        }
    }

    fn tableau(&mut self) {
        let e = self.e;
        let rows: Vec<&TableauRow> = self.reg.tableau.iter().filter(|r| r.entries.iter().any(|n| n == &e.name)).collect();
        if rows.is_empty() {
            self.skip(CheckKind::Tableau, "", "not in the closing table");
            return;
        }
        let candidates = tableau_candidates(e);
        for row in rows {
            let hit = candidates.iter().any(|c| contains_window(c, &row.values));
            let shown = join(&row.values);
            self.push(
                CheckKind::Tableau,
                "",
                hit,
                if hit { format!("row {shown} ({}) matches", row.label) } else { format!("row {shown} ({}) is not in the entry's table", row.label) },
            );
        }
    }
}

/// The printed table read as ns, as symmetric, and shifted by `(n-1)!`.
fn tableau_candidates(e: &RegistryEntry) -> Vec<Vec<Option<BigInt>>> {
    let Some(d) = &e.printed_dims else { return Vec::new() };
    let by_arity = e.printed_dims_by_arity();
    let sym: Vec<Option<BigInt>> = by_arity.iter().map(|(a, v)| v.map(|v| sym_value(v, *a, d.kind == DimKind::Ns))).collect();
    let div = |k: usize| -> Vec<Option<BigInt>> {
        by_arity
            .iter()
            .zip(&sym)
            .map(|((a, _), s)| {
                let f = factorial((a - k.min(*a)) as u64);
                s.as_ref().filter(|s| (*s % &f) == BigInt::from(0)).map(|s| s / &f)
            })
            .collect()
    };
    vec![sym.clone(), div(0), div(1)]
}

fn contains_window(seq: &[Option<BigInt>], row: &[u64]) -> bool {
    if row.is_empty() || row.len() > seq.len() {
        return false;
    }
    seq.windows(row.len()).any(|w| w.iter().zip(row).all(|(a, b)| a.as_ref() == Some(&BigInt::from(*b))))
}

impl Registry {
    /// Runs the requested checks on one entry.
    pub fn verify(&self, name: &str, opts: &VerifyOptions) -> Result<EntryReport, RegistryError> {
        let e = self.get(name)?;
        let mut c = Checker { reg: self, e, opts, out: Vec::new() };
        let needs_dims = opts.checks.contains(&CheckKind::Dims) || opts.checks.contains(&CheckKind::Series);
        let table = if needs_dims { Some(c.dims_of(&e.presentation, c.max_arity(&e.presentation))) } else { None };
        for kind in &opts.checks {
            match kind {
                CheckKind::Dims => c.dims(table.as_ref().expect("computed")),
                CheckKind::Series => c.series(table.as_ref().expect("computed")),
                CheckKind::Dual => c.dual(),
                CheckKind::Model => c.model(),
                CheckKind::Tableau => c.tableau(),
                CheckKind::Data => {}
            }
        }
        let dims = match &table {
            Some(Ok(t)) => t.dims_by_arity(),
            _ => Vec::new(),
        };
        Ok(EntryReport { name: e.name.clone(), checks: c.out, warnings: e.conflicts.iter().map(|c| c.to_string()).collect(), dims })
    }

    /// All entries, in parallel; the report keeps the registry order.
    pub fn verify_all(&self, opts: &VerifyOptions) -> RegistryReport {
        let entries = self.entries.par_iter().map(|e| self.verify(&e.name, opts).expect("entry exists")).collect();
        RegistryReport { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Registry {
        Registry::embedded()
    }

    #[test]
    fn catalog_size_and_lookup() {
        let r = reg();
        let names = r.list();
        assert!(names.len() >= 40);
        for n in ["Dend", "Trias", "JT"] {
            assert!(names.contains(&n), "{n}");
        }
        assert_eq!(r.get("Leib").unwrap().dual.as_deref(), Some("Zinb"));
        assert_eq!(r.get("leib").unwrap().name, "Leib");
        assert_eq!(r.get("as-angle-2").unwrap().name, "As<2>");
        assert!(matches!(r.get("Gerst"), Err(RegistryError::UnknownEntry(_))));
    }

    #[test]
    fn properties() {
        let r = reg();
        assert!(r.get("Altern").unwrap().properties.contains(&Property::NonKoszul));
        assert!(r.get("JT").unwrap().properties.contains(&Property::Ternary));
        assert_eq!(Property::parse("non-koszul"), Some(Property::NonKoszul));
        for p in Property::ALL {
            assert_eq!(Property::parse(p.as_str()), Some(p));
        }
    }

    #[test]
    fn duals_name_each_other() {
        let r = reg();
        for e in r.entries() {
            if let Some(d) = &e.dual {
                let other = r.get(d).unwrap();
                assert_eq!(other.dual.as_deref(), Some(e.name.as_str()), "{}", e.name);
            }
        }
    }

    #[test]
    fn excluded_and_tableau() {
        let r = reg();
        assert!(r.excluded().iter().any(|(n, _)| n == "Gerst"));
        for (n, _) in r.excluded() {
            assert!(r.get(n).is_err(), "{n} is both listed and excluded");
        }
        assert!(r.tableau().iter().any(|row| row.values.starts_with(&[1, 2, 5, 14])));
        for row in r.tableau() {
            for n in &row.entries {
                assert!(r.get(n).is_ok(), "{n}");
            }
        }
    }

    #[test]
    fn verify_small_entries() {
        let r = reg();
        let opts = VerifyOptions::default().with_max_arity(4);
        for n in ["Dias", "PostLie", "Lie-adm"] {
            let rep = r.verify(n, &opts).unwrap();
            assert!(rep.ok(), "{rep}");
            assert!(rep.checks.iter().any(|c| c.status == Status::Pass), "{rep}");
        }
        let la = r.verify("Lie-adm", &opts).unwrap();
        assert!(!la.warnings.is_empty());
        assert_eq!(la.check(CheckKind::Tableau, "").unwrap().status, Status::Warn);
    }

    #[test]
    fn moufang_mismatch_is_a_warning() {
        let rep = reg().verify("Moufang", &VerifyOptions::only(&[CheckKind::Dims]).with_max_arity(4)).unwrap();
        assert_eq!(rep.status(CheckKind::Dims), vec![Status::Warn]);
        assert!(rep.ok());
    }

    #[test]
    fn undocumented_failure_is_hard() {
        let mut files: BTreeMap<String, String> = FILES.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect();
        files.get_mut("dias.meta").unwrap().push_str("sym_dims: 1, 2, 7\n");
        let r = Registry::from_files(&files).unwrap();
        let rep = r.verify("Dias", &VerifyOptions::only(&[CheckKind::Dims]).with_max_arity(3)).unwrap();
        assert_eq!(rep.hard_failures(), 1, "{rep}");
    }

    #[test]
    fn bad_data_is_reported() {
        let mut files: BTreeMap<String, String> = FILES.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect();
        files.get_mut("dias.meta").unwrap().push_str("colour: blue\n");
        let err = Registry::from_files(&files).unwrap_err();
        assert!(err.to_string().contains("unknown key `colour`"), "{err}");
        files.remove("dias.meta");
        assert!(Registry::from_files(&files).is_err());
    }

    #[test]
    fn dual_map_scales() {
        let e = reg().get("PostLie").unwrap().clone();
        assert!(e.dual_map.contains(&("b".into(), "p".into(), Rational::new(1, 2))));
    }

    #[test]
    fn windows() {
        let s: Vec<Option<BigInt>> = [Some(1), Some(2), None, Some(7)].into_iter().map(|v| v.map(BigInt::from)).collect();
        assert!(contains_window(&s, &[1, 2]));
        assert!(!contains_window(&s, &[2, 7]));
        assert!(!contains_window(&s, &[]));
    }
}
