//! Built-in worked examples, each with the full battery of formula checks.
//!
//! The numbers are classical:
//!
//! * blow-up of the projective plane at a point — fibers are a point over
//!   the dense stratum and a line (χ = 2) over the center, so
//!   χ(X) = 4 = 1·3 + (2 − 1)·1;
//! * the nodal cubic — a sphere with two points glued, χ = 1, while its
//!   intersection homology sees the normalization, Iχ = 2, and the node's
//!   link is two circles, so the comparison reads 1 = 2 + (1 − 2)·1;
//! * the normalization of the nodal cubic — two points over the node, and
//!   the pushforward of the constant function is exactly `ic_Y`.

use stratachi_core::poset::Space;
use stratachi_core::pushforward::ProperMapKernel;
use stratachi_core::report::{Formula, FormulaReport};
use stratachi_core::ConstrFn;

use crate::documents::{
    KernelEntry, LinkEntry, MapDocument, SpaceDocument, SpaceRef, StratumEntry,
};
use crate::verify::{run_map_formula, run_space_formula};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Space,
    Map,
    Suite,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    pub summary: &'static str,
}

pub const ENTRIES: [CatalogEntry; 6] = [
    CatalogEntry {
        name: "smooth-singleton",
        kind: EntryKind::Space,
        summary: "one smooth stratum with χ = 3; every correction term is empty",
    },
    CatalogEntry {
        name: "two-chain",
        kind: EntryKind::Space,
        summary: "two-stratum chain with generic integer weights and cone value 2",
    },
    CatalogEntry {
        name: "nodal-cubic",
        kind: EntryKind::Space,
        summary: "nodal cubic curve: χ = 1, Iχ = 2, node link = two circles",
    },
    CatalogEntry {
        name: "blowup-p2",
        kind: EntryKind::Map,
        summary: "blow-up of the projective plane at a point of its target",
    },
    CatalogEntry {
        name: "nodal-cubic-normalization",
        kind: EntryKind::Map,
        summary: "normalization of the nodal cubic; f∗1 lands on ic_Y",
    },
    CatalogEntry {
        name: "identity-maps",
        kind: EntryKind::Suite,
        summary: "identity kernels on every catalog space",
    },
];

fn stratum(id: &str, complex_dim: u32, chi_c: i64) -> StratumEntry {
    StratumEntry {
        id: id.into(),
        complex_dim,
        chi_c,
    }
}

pub fn space_document(name: &str) -> Option<SpaceDocument> {
    match name {
        "smooth-singleton" => Some(SpaceDocument {
            name: "smooth-singleton".into(),
            strata: vec![stratum("m", 2, 3)],
            order_pairs: vec![],
            dense: Some("m".into()),
            links: Some(vec![]),
        }),
        "two-chain" => Some(SpaceDocument {
            name: "two-chain".into(),
            strata: vec![stratum("w", 0, 3), stratum("s", 2, 4)],
            order_pairs: vec![("w".into(), "s".into())],
            dense: Some("s".into()),
            links: Some(vec![LinkEntry {
                lower: "w".into(),
                upper: "s".into(),
                ichi_cone: Some(2),
                link_ih_betti: None,
            }]),
        }),
        "nodal-cubic" => Some(SpaceDocument {
            name: "nodal-cubic".into(),
            strata: vec![stratum("node", 0, 1), stratum("smooth", 1, 0)],
            order_pairs: vec![("node".into(), "smooth".into())],
            dense: Some("smooth".into()),
            links: Some(vec![LinkEntry {
                lower: "node".into(),
                upper: "smooth".into(),
                ichi_cone: None,
                link_ih_betti: Some(vec![2, 2]),
            }]),
        }),
        _ => None,
    }
}

pub fn map_document(name: &str) -> Option<MapDocument> {
    match name {
        "blowup-p2" => Some(MapDocument {
            source: SpaceRef::Inline(SpaceDocument {
                name: "blowup-of-p2".into(),
                strata: vec![stratum("x", 2, 4)],
                order_pairs: vec![],
                dense: Some("x".into()),
                links: Some(vec![]),
            }),
            target: SpaceRef::Inline(SpaceDocument {
                name: "p2".into(),
                strata: vec![stratum("p", 0, 1), stratum("plane", 2, 2)],
                order_pairs: vec![("p".into(), "plane".into())],
                dense: Some("plane".into()),
                links: Some(vec![LinkEntry {
                    lower: "p".into(),
                    upper: "plane".into(),
                    ichi_cone: None,
                    // The link of a point in a smooth surface is a 3-sphere.
                    link_ih_betti: Some(vec![1, 0, 0, 1]),
                }]),
            }),
            kernel: vec![
                KernelEntry {
                    target: "plane".into(),
                    source: "x".into(),
                    chi: 1,
                },
                KernelEntry {
                    target: "p".into(),
                    source: "x".into(),
                    chi: 2,
                },
            ],
            skip_validation: false,
        }),
        "nodal-cubic-normalization" => Some(MapDocument {
            source: SpaceRef::Inline(SpaceDocument {
                name: "line".into(),
                strata: vec![stratum("line", 1, 2)],
                order_pairs: vec![],
                dense: Some("line".into()),
                links: Some(vec![]),
            }),
            target: SpaceRef::Inline(space_document("nodal-cubic").expect("catalog space")),
            kernel: vec![
                KernelEntry {
                    target: "smooth".into(),
                    source: "line".into(),
                    chi: 1,
                },
                KernelEntry {
                    target: "node".into(),
                    source: "line".into(),
                    chi: 2,
                },
            ],
            skip_validation: false,
        }),
        _ => None,
    }
}

pub struct NamedReport {
    pub context: String,
    pub report: FormulaReport,
}

const SPACE_FORMULAS: [Formula; 3] = [Formula::Eq11, Formula::C1, Formula::C2];
const MAP_FORMULAS: [Formula; 12] = [
    Formula::Eq3,
    Formula::Eq4,
    Formula::Eq5,
    Formula::Eq6,
    Formula::Eq7,
    Formula::Eq12,
    Formula::Eq13,
    Formula::Eq14,
    Formula::Eq15,
    Formula::Eq16,
    Formula::Eq17,
    Formula::Eq18,
];

fn run_space_entry(name: &str) -> Result<Vec<NamedReport>, CliError> {
    let doc = space_document(name).expect("known space entry");
    let (space, links) = doc.resolve()?;
    let links = links.expect("catalog spaces carry link data");
    SPACE_FORMULAS
        .iter()
        .map(|f| {
            Ok(NamedReport {
                context: name.to_owned(),
                report: run_space_formula(*f, &space, &links, None)?,
            })
        })
        .collect()
}

fn run_map_entry(name: &str) -> Result<Vec<NamedReport>, CliError> {
    let doc = map_document(name).expect("known map entry");
    let resolved = doc.resolve(std::path::Path::new("."), false)?;
    let mut reports: Vec<NamedReport> = MAP_FORMULAS
        .iter()
        .map(|f| {
            Ok(NamedReport {
                context: name.to_owned(),
                report: run_map_formula(*f, &resolved, None)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    // The comparison identities on the target space.
    let target_links = resolved
        .target_links
        .as_ref()
        .expect("catalog targets carry link data");
    for f in SPACE_FORMULAS {
        reports.push(NamedReport {
            context: format!("{name}:target"),
            report: run_space_formula(f, &resolved.target, target_links, None)?,
        });
    }
    Ok(reports)
}

fn identity_reports(space_name: &str) -> Result<Vec<NamedReport>, CliError> {
    let doc = space_document(space_name).expect("known space entry");
    let (space, links) = doc.resolve()?;
    let links = links.expect("catalog spaces carry link data");
    let kernel = ProperMapKernel::identity(&space);
    let one = ConstrFn::constant(&space, 1);
    let resolved = crate::documents::ResolvedMap {
        source: space.clone(),
        source_links: Some(links.clone()),
        target: space.clone(),
        target_links: Some(links),
        kernel,
    };
    [Formula::Eq3, Formula::Eq4, Formula::Eq12, Formula::Eq13]
        .iter()
        .map(|f| {
            Ok(NamedReport {
                context: format!("identity:{space_name}"),
                report: run_map_formula(*f, &resolved, Some(&one))?,
            })
        })
        .collect()
}

/// Runs every check of one catalog entry.
pub fn run(name: &str) -> Result<Vec<NamedReport>, CliError> {
    match name {
        "smooth-singleton" | "two-chain" | "nodal-cubic" => run_space_entry(name),
        "blowup-p2" | "nodal-cubic-normalization" => run_map_entry(name),
        "identity-maps" => {
            let mut reports = Vec::new();
            for space in ["smooth-singleton", "two-chain", "nodal-cubic"] {
                reports.extend(identity_reports(space)?);
            }
            Ok(reports)
        }
        other => Err(CliError::Usage(format!("unknown catalog example `{other}`"))),
    }
}

/// The spaces and maps behind `run`, for tests and the `validate` command.
pub fn resolve_space(name: &str) -> Option<(Space, stratachi_core::LinkSystem)> {
    let doc = space_document(name)?;
    let (space, links) = doc.resolve().ok()?;
    Some((space, links?))
}
