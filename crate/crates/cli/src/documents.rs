//! On-disk document formats: spaces, maps, functions, reports.
//!
//! Everything is UTF-8 JSON with integers only. Parsing is strict
//! (unknown fields are rejected) and emission is deterministic, so
//! `parse ∘ emit` is the identity on document values and emitted bytes are
//! stable across runs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use stratachi_core::ic::{LinkData, LinkSystem};
use stratachi_core::poset::{Space, StratPoset, StratumId};
use stratachi_core::pushforward::ProperMapKernel;
use stratachi_core::report::{FormulaReport, ReportValue};
use stratachi_core::ConstrFn;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumEntry {
    pub id: String,
    pub complex_dim: u32,
    pub chi_c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub lower: String,
    pub upper: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ichi_cone: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_ih_betti: Option<Vec<u64>>,
}

/// A stratified space with optional link data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub name: String,
    pub strata: Vec<StratumEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dense: Option<String>,
    /// `None` means no link data was given; `Some(vec![])` declares an
    /// explicitly empty (and for spaces without comparable pairs, complete)
    /// link system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<Vec<LinkEntry>>,
}

impl SpaceDocument {
    /// Builds the poset and, when possible, the link system. Link data is
    /// taken from the document; a space with no strictly comparable pairs
    /// gets the trivial complete link system even without a `links` field.
    pub fn resolve(&self) -> Result<(Space, Option<LinkSystem>), CliError> {
        let strata = self
            .strata
            .iter()
            .map(|s| Ok((StratumId::new(&s.id)?, s.complex_dim, s.chi_c)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let pairs = self
            .order_pairs
            .iter()
            .map(|(a, b)| Ok((StratumId::new(a)?, StratumId::new(b)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let dense = self.dense.as_ref().map(StratumId::new).transpose()?;
        let space: Space = Arc::new(StratPoset::build(strata, &pairs, dense)?);

        let links = match &self.links {
            Some(entries) => {
                let data = entries
                    .iter()
                    .map(|e| {
                        Ok(LinkData {
                            lower: StratumId::new(&e.lower)?,
                            upper: StratumId::new(&e.upper)?,
                            cone_ichi: e.ichi_cone,
                            link_ih_betti: e.link_ih_betti.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Some(LinkSystem::build(&space, &data)?)
            }
            None => LinkSystem::build(&space, &[]).ok(),
        };
        Ok((space, links))
    }

    /// Document form of core objects, used when emitting counterexamples.
    pub fn from_parts(name: &str, space: &Space, links: Option<&LinkSystem>) -> SpaceDocument {
        let strata = space
            .strata()
            .map(|s| StratumEntry {
                id: s.id.as_str().to_owned(),
                complex_dim: s.complex_dim,
                chi_c: s.chi_c,
            })
            .collect();
        let mut order_pairs = Vec::new();
        for a in space.strata() {
            for b in space.strata() {
                if a.id != b.id && space.leq(&a.id, &b.id).unwrap_or(false) {
                    order_pairs.push((a.id.as_str().to_owned(), b.id.as_str().to_owned()));
                }
            }
        }
        SpaceDocument {
            name: name.to_owned(),
            strata,
            order_pairs,
            dense: space.dense_stratum().map(|s| s.id.as_str().to_owned()),
            links: links.map(|l| {
                l.pairs()
                    .into_iter()
                    .map(|(lo, hi, v)| LinkEntry {
                        lower: lo.as_str().to_owned(),
                        upper: hi.as_str().to_owned(),
                        ichi_cone: Some(v),
                        link_ih_betti: None,
                    })
                    .collect()
            }),
        }
    }
}

/// A space given inline or by path (relative to the referring document).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceDocument),
}

impl SpaceRef {
    pub fn load(&self, base_dir: &Path) -> Result<SpaceDocument, CliError> {
        match self {
            SpaceRef::Inline(doc) => Ok(doc.clone()),
            SpaceRef::Path(p) => {
                let path = base_dir.join(p);
                parse_space_document(&std::fs::read_to_string(&path).map_err(|e| {
                    CliError::Io(format!("reading {}: {e}", path.display()))
                })?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    pub target: String,
    pub source: String,
    pub chi: i64,
}

/// A proper map between two spaces, as a fiberwise χ_c kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub source: SpaceRef,
    pub target: SpaceRef,
    pub kernel: Vec<KernelEntry>,
    #[serde(default)]
    pub skip_validation: bool,
}

/// Core objects built from a [`MapDocument`].
pub struct ResolvedMap {
    pub source: Space,
    pub source_links: Option<LinkSystem>,
    pub target: Space,
    pub target_links: Option<LinkSystem>,
    pub kernel: ProperMapKernel,
}

impl MapDocument {
    /// `skip_validation` may also be forced from the command line.
    pub fn resolve(&self, base_dir: &Path, force_skip: bool) -> Result<ResolvedMap, CliError> {
        let source_doc = self.source.load(base_dir)?;
        let target_doc = self.target.load(base_dir)?;
        let (source, source_links) = source_doc.resolve()?;
        let (target, target_links) = target_doc.resolve()?;
        let entries = self
            .kernel
            .iter()
            .map(|e| {
                Ok((
                    StratumId::new(&e.target)?,
                    StratumId::new(&e.source)?,
                    e.chi,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let validate = !(self.skip_validation || force_skip);
        let kernel = ProperMapKernel::build(&source, &target, &entries, validate)?;
        Ok(ResolvedMap {
            source,
            source_links,
            target,
            target_links,
            kernel,
        })
    }

    pub fn from_parts(
        source: (&str, &Space, Option<&LinkSystem>),
        target: (&str, &Space, Option<&LinkSystem>),
        kernel: &ProperMapKernel,
        skip_validation: bool,
    ) -> MapDocument {
        MapDocument {
            source: SpaceRef::Inline(SpaceDocument::from_parts(source.0, source.1, source.2)),
            target: SpaceRef::Inline(SpaceDocument::from_parts(target.0, target.1, target.2)),
            kernel: kernel
                .entries()
                .into_iter()
                .map(|(t, s, chi)| KernelEntry {
                    target: t.as_str().to_owned(),
                    source: s.as_str().to_owned(),
                    chi,
                })
                .collect(),
            skip_validation,
        }
    }
}

/// Function documents are plain objects mapping stratum ids to integers;
/// strata not mentioned get 0.
pub type FunctionDocument = BTreeMap<String, i64>;

pub fn function_from_document(space: &Space, doc: &FunctionDocument) -> Result<ConstrFn, CliError> {
    let values = doc
        .iter()
        .map(|(k, v)| Ok((StratumId::new(k)?, *v)))
        .collect::<Result<BTreeMap<_, _>, CliError>>()?;
    Ok(ConstrFn::from_map(space, &values)?)
}

/// A minimized failing instance, re-runnable through `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleDocument {
    pub formula: String,
    pub map: MapDocument,
    pub function: FunctionDocument,
}

/// Either top-level document, detected by shape.
pub enum AnyDocument {
    Space(SpaceDocument),
    Map(MapDocument),
}

pub fn parse_space_document(text: &str) -> Result<SpaceDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn parse_map_document(text: &str) -> Result<MapDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn parse_function_document(text: &str) -> Result<FunctionDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// Objects with a `kernel` field are maps, objects with `strata` are spaces.
pub fn parse_any_document(text: &str) -> Result<AnyDocument, CliError> {
    let probe: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    match probe.as_object() {
        Some(obj) if obj.contains_key("kernel") => Ok(AnyDocument::Map(parse_map_document(text)?)),
        Some(obj) if obj.contains_key("strata") => {
            Ok(AnyDocument::Space(parse_space_document(text)?))
        }
        _ => Err(CliError::Parse(
            "document is neither a space (strata) nor a map (kernel)".into(),
        )),
    }
}

/// Deterministic emission: two-space pretty JSON plus a trailing newline.
pub fn emit<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}

pub fn load_text(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Report DTOs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueDto {
    Int(i64),
    Function(BTreeMap<String, i64>),
    Class(BTreeMap<String, i64>),
}

impl ValueDto {
    pub fn from_core(v: &ReportValue) -> ValueDto {
        match v {
            ReportValue::Int(i) => ValueDto::Int(*i),
            ReportValue::Function(m) => ValueDto::Function(
                m.iter().map(|(k, v)| (k.as_str().to_owned(), *v)).collect(),
            ),
            ReportValue::Class(m) => ValueDto::Class(m.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub stratum: String,
    pub coefficient: i64,
    pub weight: ValueDto,
    pub contribution: ValueDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDto {
    pub formula: String,
    pub statement: String,
    pub pass: bool,
    pub lhs: ValueDto,
    pub rhs: ValueDto,
    pub terms: Vec<TermDto>,
}

impl ReportDto {
    pub fn from_core(r: &FormulaReport) -> ReportDto {
        ReportDto {
            formula: r.formula.code().to_owned(),
            statement: r.formula.statement().to_owned(),
            pass: r.pass,
            lhs: ValueDto::from_core(&r.lhs),
            rhs: ValueDto::from_core(&r.rhs),
            terms: r
                .terms
                .iter()
                .map(|t| TermDto {
                    stratum: t.stratum.as_str().to_owned(),
                    coefficient: t.coefficient,
                    weight: ValueDto::from_core(&t.weight),
                    contribution: ValueDto::from_core(&t.contribution),
                })
                .collect(),
        }
    }
}
