//! Formula dispatch shared by `verify`, the catalog, and the fuzz harness.

use stratachi_core::hom::{verify_class_pushforward_hat, verify_class_pushforward_ic};
use stratachi_core::ic::{ic_function, verify_ic_decomposition, LinkSystem};
use stratachi_core::poset::Space;
use stratachi_core::pushforward::{
    decompose_pushforward_hat, verify_chi_mult, verify_compare, verify_ic_pushforward,
    verify_ichi_mult, ProperMapKernel,
};
use stratachi_core::report::{Formula, FormulaReport};
use stratachi_core::{ConstrFn, Error};

use crate::documents::ResolvedMap;
use crate::CliError;

/// Formulas stated on a single space (with links); the rest need a map.
pub fn is_space_formula(f: Formula) -> bool {
    matches!(f, Formula::Eq11 | Formula::C1 | Formula::C2)
}

/// Selectors whose function argument is fixed by the formula itself:
/// the total indicator for `eq6`/`eq7`/`eq15`/`eq16`, the source ic function
/// for `eq17`/`eq18`, and nothing at all for `c1`/`c2`.
pub fn has_fixed_function(f: Formula) -> bool {
    matches!(
        f,
        Formula::Eq6
            | Formula::Eq7
            | Formula::Eq15
            | Formula::Eq16
            | Formula::Eq17
            | Formula::Eq18
            | Formula::C1
            | Formula::C2
    )
}

/// Runs a space-level formula. `alpha` defaults to the total indicator.
pub fn run_space_formula(
    formula: Formula,
    space: &Space,
    links: &LinkSystem,
    alpha: Option<&ConstrFn>,
) -> Result<FormulaReport, CliError> {
    let one = ConstrFn::constant(space, 1);
    match formula {
        Formula::Eq11 => Ok(verify_ic_decomposition(links, alpha.unwrap_or(&one))?),
        Formula::C1 => Ok(verify_compare(links)?),
        Formula::C2 => {
            let id = ProperMapKernel::identity(space);
            Ok(verify_class_pushforward_ic(&id, &one, links, Formula::C2)?)
        }
        other => Err(CliError::Usage(format!(
            "`{other}` needs a map document, not a space"
        ))),
    }
}

/// Runs a map-level formula. `alpha` (a function on the source) defaults to
/// the total indicator; fixed-function selectors ignore it and use their
/// own.
pub fn run_map_formula(
    formula: Formula,
    map: &ResolvedMap,
    alpha: Option<&ConstrFn>,
) -> Result<FormulaReport, CliError> {
    let one = ConstrFn::constant(&map.source, 1);
    let alpha = alpha.unwrap_or(&one);
    let target_links = || map.target_links.as_ref().ok_or(Error::MissingLinks);
    let source_ic = || -> Result<ConstrFn, CliError> {
        let links = map
            .source_links
            .as_ref()
            .ok_or(CliError::Core(Error::MissingLinks))?;
        let dense = map
            .source
            .dense_stratum()
            .ok_or(CliError::Core(Error::NoDenseStratum))?;
        Ok(ic_function(links, &dense.id)?)
    };
    let report = match formula {
        Formula::Eq3 => decompose_pushforward_hat(&map.kernel, alpha)?,
        Formula::Eq4 => verify_chi_mult(&map.kernel, alpha, Formula::Eq4)?,
        Formula::Eq5 => verify_class_pushforward_hat(&map.kernel, alpha, Formula::Eq5)?,
        Formula::Eq6 => verify_chi_mult(&map.kernel, &one, Formula::Eq6)?,
        Formula::Eq7 => verify_class_pushforward_hat(&map.kernel, &one, Formula::Eq7)?,
        Formula::Eq12 => verify_ic_pushforward(&map.kernel, alpha, target_links()?)?,
        Formula::Eq13 => verify_ichi_mult(&map.kernel, alpha, target_links()?, Formula::Eq13)?,
        Formula::Eq14 => {
            verify_class_pushforward_ic(&map.kernel, alpha, target_links()?, Formula::Eq14)?
        }
        Formula::Eq15 => verify_ichi_mult(&map.kernel, &one, target_links()?, Formula::Eq15)?,
        Formula::Eq16 => {
            verify_class_pushforward_ic(&map.kernel, &one, target_links()?, Formula::Eq16)?
        }
        Formula::Eq17 => {
            let ic_x = source_ic()?;
            verify_ichi_mult(&map.kernel, &ic_x, target_links()?, Formula::Eq17)?
        }
        Formula::Eq18 => {
            let ic_x = source_ic()?;
            verify_class_pushforward_ic(&map.kernel, &ic_x, target_links()?, Formula::Eq18)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "`{other}` needs a space document, not a map"
            )))
        }
    };
    Ok(report)
}
