//! Subcommand implementations. Each returns the process exit code; hard
//! errors bubble up as [`CliError`] and exit with 2.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use stratachi_core::constructible::Basis;
use stratachi_core::ic::{decompose_ic, decompose_ic_pure, ic_transition_matrix};
use stratachi_core::matrix::TriangularMatrix;
use stratachi_core::poset::Space;
use stratachi_core::pushforward::pushforward;
use stratachi_core::report::{Formula, FormulaReport};
use stratachi_core::{ConstrFn, Error, LinkSystem};

use crate::catalog;
use crate::documents::{
    emit, function_from_document, load_text, parse_any_document, parse_function_document,
    AnyDocument, ReportDto, ResolvedMap, SpaceDocument,
};
use crate::fuzz::{run_fuzz, FuzzParams};
use crate::verify::{has_fixed_function, is_space_formula, run_map_formula, run_space_formula};
use crate::{CliError, EXIT_CHECK_FAILED, EXIT_OK};

fn base_dir(path: &Path) -> PathBuf {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn load_function(
    space: &Space,
    path: &Option<PathBuf>,
) -> Result<Option<ConstrFn>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let doc = parse_function_document(&load_text(p)?)?;
            Ok(Some(function_from_document(space, &doc)?))
        }
    }
}

fn print_report(report: &FormulaReport, json: bool) {
    if json {
        print!("{}", emit(&ReportDto::from_core(report)));
    } else {
        println!("{}", report.formula.statement());
        print!("{report}");
    }
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SpaceSummary {
    name: String,
    strata: usize,
    comparable_pairs: usize,
    dense: Option<String>,
    links: String,
}

fn summarize_space(doc: &SpaceDocument) -> Result<(Space, Option<LinkSystem>, SpaceSummary), CliError> {
    let (space, links) = doc.resolve()?;
    let mut pairs = 0;
    for a in 0..space.len() {
        for b in 0..space.len() {
            if space.lt_idx(a, b) {
                pairs += 1;
            }
        }
    }
    let summary = SpaceSummary {
        name: doc.name.clone(),
        strata: space.len(),
        comparable_pairs: pairs,
        dense: space.dense_stratum().map(|s| s.id.as_str().to_owned()),
        links: match (&doc.links, &links) {
            (Some(_), Some(_)) => "complete".into(),
            (None, Some(_)) => "trivial".into(),
            _ => "absent".into(),
        },
    };
    Ok((space, links, summary))
}

pub fn cmd_validate(path: &PathBuf, json: bool) -> Result<i32, CliError> {
    match parse_any_document(&load_text(path)?)? {
        AnyDocument::Space(doc) => {
            let (_, _, summary) = summarize_space(&doc)?;
            if json {
                #[derive(Serialize)]
                struct Out {
                    kind: &'static str,
                    valid: bool,
                    space: SpaceSummary,
                }
                print!(
                    "{}",
                    emit(&Out {
                        kind: "space",
                        valid: true,
                        space: summary,
                    })
                );
            } else {
                println!("space `{}`: valid", summary.name);
                println!("  strata: {}", summary.strata);
                println!("  comparable pairs: {}", summary.comparable_pairs);
                println!(
                    "  dense stratum: {}",
                    summary.dense.as_deref().unwrap_or("(none)")
                );
                println!("  links: {}", summary.links);
            }
            Ok(EXIT_OK)
        }
        AnyDocument::Map(doc) => {
            let resolved = doc.resolve(&base_dir(path), false)?;
            let consistency = if doc.skip_validation {
                match resolved.kernel.check_columns() {
                    Ok(()) => "waived (columns happen to be consistent)".to_owned(),
                    Err(e) => format!("waived ({e})"),
                }
            } else {
                "ok".to_owned()
            };
            if json {
                #[derive(Serialize)]
                struct Out {
                    kind: &'static str,
                    valid: bool,
                    kernel_entries: usize,
                    column_consistency: String,
                }
                print!(
                    "{}",
                    emit(&Out {
                        kind: "map",
                        valid: true,
                        kernel_entries: resolved.kernel.entries().len(),
                        column_consistency: consistency,
                    })
                );
            } else {
                println!("map: valid");
                println!("  source strata: {}", resolved.source.len());
                println!("  target strata: {}", resolved.target.len());
                println!("  kernel entries: {}", resolved.kernel.entries().len());
                println!("  column consistency: {consistency}");
            }
            Ok(EXIT_OK)
        }
    }
}

// ---------------------------------------------------------------------------
// bases
// ---------------------------------------------------------------------------

fn matrix_rows(m: &TriangularMatrix) -> Vec<Vec<i64>> {
    (0..m.len()).map(|w| m.row(w).to_vec()).collect()
}

fn print_matrix(label: &str, order: &[String], rows: &[Vec<i64>]) {
    println!("{label}:");
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        println!("  {:>8} [ {} ]", order[i], cells.join(" "));
    }
}

pub fn cmd_bases(path: &PathBuf, json: bool) -> Result<i32, CliError> {
    let doc = match parse_any_document(&load_text(path)?)? {
        AnyDocument::Space(doc) => doc,
        AnyDocument::Map(_) => {
            return Err(CliError::Usage(
                "`bases` expects a space document".into(),
            ))
        }
    };
    let (space, links) = doc.resolve()?;
    let order: Vec<String> = space.strata().map(|s| s.id.as_str().to_owned()).collect();
    let closure = TriangularMatrix::closure(&space);
    let closure_inv = closure.inverse()?;
    let ic = links.as_ref().map(ic_transition_matrix);
    let ic_inv = ic.as_ref().map(|m| m.inverse()).transpose()?;

    if json {
        #[derive(Serialize)]
        struct Out {
            order: Vec<String>,
            closed_to_open: Vec<Vec<i64>>,
            closed_to_open_inverse: Vec<Vec<i64>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            ic_to_open: Option<Vec<Vec<i64>>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            ic_to_open_inverse: Option<Vec<Vec<i64>>>,
        }
        print!(
            "{}",
            emit(&Out {
                order,
                closed_to_open: matrix_rows(&closure),
                closed_to_open_inverse: matrix_rows(&closure_inv),
                ic_to_open: ic.as_ref().map(matrix_rows),
                ic_to_open_inverse: ic_inv.as_ref().map(matrix_rows),
            })
        );
    } else {
        println!("canonical order: {}", order.join(", "));
        print_matrix("closed → open (columns expand 1_V̄)", &order, &matrix_rows(&closure));
        print_matrix(
            "inverse (columns expand ĥ1(V̄) over closed)",
            &order,
            &matrix_rows(&closure_inv),
        );
        match (&ic, &ic_inv) {
            (Some(m), Some(inv)) => {
                print_matrix("ic → open (columns are stalks of ic_V̄)", &order, &matrix_rows(m));
                print_matrix(
                    "inverse (columns expand îc(V̄) over ic)",
                    &order,
                    &matrix_rows(inv),
                );
            }
            _ => println!("links: none given, ic basis unavailable"),
        }
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

pub fn parse_basis(code: &str) -> Result<Basis, CliError> {
    [
        Basis::Open,
        Basis::Closed,
        Basis::Hat,
        Basis::Ic,
        Basis::DenseHat,
        Basis::DenseIc,
    ]
    .into_iter()
    .find(|b| b.code() == code)
    .ok_or_else(|| {
        CliError::Usage(format!(
            "unknown basis `{code}` (expected open, closed, hat, ic, hat-dense, ic-dense)"
        ))
    })
}

pub fn cmd_decompose(
    path: &PathBuf,
    function: &Option<PathBuf>,
    basis: &str,
    json: bool,
) -> Result<i32, CliError> {
    let doc = match parse_any_document(&load_text(path)?)? {
        AnyDocument::Space(doc) => doc,
        AnyDocument::Map(_) => {
            return Err(CliError::Usage(
                "`decompose` expects a space document".into(),
            ))
        }
    };
    let basis = parse_basis(basis)?;
    let (space, links) = doc.resolve()?;
    let alpha = load_function(&space, function)?
        .unwrap_or_else(|| ConstrFn::constant(&space, 1));
    let need_links = || links.as_ref().ok_or(CliError::Core(Error::MissingLinks));
    let coeffs = match basis {
        Basis::Open => alpha.decompose_open(),
        Basis::Closed => alpha.decompose_closed()?,
        Basis::Hat => alpha.decompose_hat(),
        Basis::DenseHat => alpha.decompose_hat_dense()?,
        Basis::Ic => decompose_ic_pure(need_links()?, &alpha)?,
        Basis::DenseIc => decompose_ic(need_links()?, &alpha)?,
    };
    let map: BTreeMap<String, i64> = coeffs
        .to_map()
        .into_iter()
        .map(|(k, v)| (k.as_str().to_owned(), v))
        .collect();
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            basis: &'a str,
            coefficients: BTreeMap<String, i64>,
        }
        print!(
            "{}",
            emit(&Out {
                basis: basis.code(),
                coefficients: map,
            })
        );
    } else {
        println!("basis: {}", basis.code());
        for (id, c) in &map {
            println!("  {id}: {c}");
        }
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// pushforward
// ---------------------------------------------------------------------------

pub fn cmd_pushforward(
    path: &PathBuf,
    function: &Option<PathBuf>,
    skip_validation: bool,
    json: bool,
) -> Result<i32, CliError> {
    let doc = match parse_any_document(&load_text(path)?)? {
        AnyDocument::Map(doc) => doc,
        AnyDocument::Space(_) => {
            return Err(CliError::Usage(
                "`pushforward` expects a map document".into(),
            ))
        }
    };
    let resolved = doc.resolve(&base_dir(path), skip_validation)?;
    let alpha = load_function(&resolved.source, function)?
        .unwrap_or_else(|| ConstrFn::constant(&resolved.source, 1));
    let pf = pushforward(&resolved.kernel, &alpha)?;
    let map: BTreeMap<String, i64> = pf
        .to_map()
        .into_iter()
        .map(|(k, v)| (k.as_str().to_owned(), v))
        .collect();
    if json {
        #[derive(Serialize)]
        struct Out {
            pushforward: BTreeMap<String, i64>,
        }
        print!("{}", emit(&Out { pushforward: map }));
    } else {
        for (id, v) in &map {
            println!("  {id}: {v}");
        }
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn cmd_verify(
    path: &PathBuf,
    formula_code: &str,
    function: &Option<PathBuf>,
    skip_validation: bool,
    json: bool,
) -> Result<i32, CliError> {
    let formula = Formula::from_code(formula_code).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown formula `{formula_code}` (expected one of {})",
            Formula::ALL.map(|f| f.code()).join(", ")
        ))
    })?;
    if has_fixed_function(formula) && function.is_some() {
        return Err(CliError::Usage(format!(
            "`{formula}` fixes its own function; drop --function"
        )));
    }
    let report = match parse_any_document(&load_text(path)?)? {
        AnyDocument::Space(doc) => {
            if !is_space_formula(formula) {
                return Err(CliError::Usage(format!(
                    "`{formula}` needs a map document, got a space"
                )));
            }
            let (space, links) = doc.resolve()?;
            let links = links.ok_or(CliError::Core(Error::MissingLinks))?;
            let alpha = load_function(&space, function)?;
            run_space_formula(formula, &space, &links, alpha.as_ref())?
        }
        AnyDocument::Map(doc) => {
            if is_space_formula(formula) {
                return Err(CliError::Usage(format!(
                    "`{formula}` needs a space document, got a map"
                )));
            }
            let resolved: ResolvedMap = doc.resolve(&base_dir(path), skip_validation)?;
            let alpha = load_function(&resolved.source, function)?;
            run_map_formula(formula, &resolved, alpha.as_ref())?
        }
    };
    print_report(&report, json);
    Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

// ---------------------------------------------------------------------------
// fuzz
// ---------------------------------------------------------------------------

pub fn cmd_fuzz(params: &FuzzParams, json: bool) -> Result<i32, CliError> {
    let report = run_fuzz(params);
    if json {
        print!("{}", emit(&report));
    } else {
        println!(
            "fuzz: seed {} · {} trials · ≤ {} strata{}",
            report.seed,
            report.trials,
            report.max_strata,
            if report.inject_fault {
                " · fault injected"
            } else {
                ""
            }
        );
        for (check, passes) in &report.checks {
            println!("  {check:<20} {passes} passed");
        }
        if report.failures.is_empty() {
            println!("all checks passed");
        } else {
            println!("{} failures:", report.failures.len());
            for f in report.failures.iter().take(10) {
                println!("  trial {} {}: {}", f.trial, f.check, f.detail);
            }
            if report.failures.len() > 10 {
                println!("  … and {} more", report.failures.len() - 10);
            }
            if let Some(ce) = &report.counterexample {
                println!("minimized counterexample ({}):", ce.formula);
                print!("{}", emit(ce));
            }
        }
    }
    Ok(if report.all_passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

pub fn cmd_catalog_list(json: bool) -> Result<i32, CliError> {
    if json {
        #[derive(Serialize)]
        struct Entry {
            name: &'static str,
            kind: &'static str,
            summary: &'static str,
        }
        let entries: Vec<Entry> = catalog::ENTRIES
            .iter()
            .map(|e| Entry {
                name: e.name,
                kind: match e.kind {
                    catalog::EntryKind::Space => "space",
                    catalog::EntryKind::Map => "map",
                    catalog::EntryKind::Suite => "suite",
                },
                summary: e.summary,
            })
            .collect();
        print!("{}", emit(&entries));
    } else {
        for e in &catalog::ENTRIES {
            println!("{:<28} {}", e.name, e.summary);
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_catalog_run(name: &str, json: bool) -> Result<i32, CliError> {
    let reports = catalog::run(name)?;
    let all_pass = reports.iter().all(|r| r.report.pass);
    if json {
        #[derive(Serialize)]
        struct Item {
            context: String,
            #[serde(flatten)]
            report: ReportDto,
        }
        let items: Vec<Item> = reports
            .iter()
            .map(|r| Item {
                context: r.context.clone(),
                report: ReportDto::from_core(&r.report),
            })
            .collect();
        print!("{}", emit(&items));
    } else {
        for r in &reports {
            println!("[{}]", r.context);
            print!("{}", r.report);
        }
        println!(
            "{}: {}",
            name,
            if all_pass { "all checks passed" } else { "FAILURES" }
        );
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
