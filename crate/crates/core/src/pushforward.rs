//! Proper maps as fiberwise Euler-characteristic kernels, and the stratified
//! multiplicative identities built on them.
//!
//! A proper map `f : X → Y` of stratified spaces enters the calculus only
//! through the integers `k(V, U) = χ_c(f⁻¹(v) ∩ U)` for `v` a point of the
//! target stratum `V`; stratified submersiveness is exactly the statement
//! that these numbers do not depend on the point, which is built into the
//! data model. The pushforward of a function is then
//! `f∗(α)(V) = Σ_U α(U)·k(V, U)`.
//!
//! Geometric consistency leaves one visible shadow: for every source
//! stratum `U`, `Σ_V chi_c(V)·k(V, U) = chi_c(U)`. This *column consistency*
//! is what makes `χ ∘ f∗ = χ` hold, and kernels are validated against it on
//! construction unless the caller explicitly waives it (the waiver is
//! recorded on the kernel).

use crate::constructible::{hat_function, ConstrFn};
use crate::error::{iadd, imul, isub, Error, Result};
use crate::hom::{HomSpec, IcHomSpec};
use crate::ic::{hat_ic_function, ic_function, LinkSystem};
use crate::poset::{same_space, Space, StratumId};
use crate::report::{Formula, FormulaReport, ReportTerm, ReportValue};

/// Fiberwise χ_c kernel of a proper map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperMapKernel {
    source: Space,
    target: Space,
    /// Row-major `target × source`.
    entries: Vec<i64>,
    validated: bool,
}

impl ProperMapKernel {
    /// Builds a kernel from sparse entries `(target stratum, source stratum,
    /// χ_c of the fiber slice)`; absent pairs are 0. With `validate` set,
    /// column consistency is enforced.
    pub fn build(
        source: &Space,
        target: &Space,
        entries: &[(StratumId, StratumId, i64)],
        validate: bool,
    ) -> Result<ProperMapKernel> {
        let mut k = ProperMapKernel {
            source: source.clone(),
            target: target.clone(),
            entries: vec![0; source.len() * target.len()],
            validated: validate,
        };
        let mut seen = vec![false; source.len() * target.len()];
        let n = source.len();
        for (t, s, chi) in entries {
            let ti = target.index_of(t)?;
            let si = source.index_of(s)?;
            if seen[ti * n + si] {
                return Err(Error::DuplicateKernelEntry {
                    row: t.clone(),
                    column: s.clone(),
                });
            }
            seen[ti * n + si] = true;
            k.entries[ti * n + si] = *chi;
        }
        if validate {
            k.check_columns()?;
        }
        Ok(k)
    }

    /// The identity map on a space: the Kronecker kernel.
    pub fn identity(space: &Space) -> ProperMapKernel {
        let n = space.len();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        ProperMapKernel {
            source: space.clone(),
            target: space.clone(),
            entries,
            validated: true,
        }
    }

    /// Column consistency: `Σ_V chi_c(V)·k(V, U) = chi_c(U)` for every
    /// source stratum `U`. Callable independently of the build-time flag.
    pub fn check_columns(&self) -> Result<()> {
        let n = self.source.len();
        for u in 0..n {
            let mut acc = 0i64;
            for v in 0..self.target.len() {
                let k = self.entries[v * n + u];
                if k != 0 {
                    acc = iadd(acc, imul(self.target.stratum_at(v).chi_c, k)?)?;
                }
            }
            let expected = self.source.stratum_at(u).chi_c;
            if acc != expected {
                return Err(Error::KernelInconsistent {
                    column: self.source.stratum_at(u).id.clone(),
                    expected,
                    actual: acc,
                });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    /// Whether column consistency was enforced when the kernel was built.
    pub fn validated(&self) -> bool {
        self.validated
    }

    pub fn entry_idx(&self, target: usize, source: usize) -> i64 {
        self.entries[target * self.source.len() + source]
    }

    pub fn entry(&self, target: &StratumId, source: &StratumId) -> Result<i64> {
        Ok(self.entry_idx(self.target.index_of(target)?, self.source.index_of(source)?))
    }

    /// Sparse view of the kernel in canonical (target, source) order.
    pub fn entries(&self) -> Vec<(StratumId, StratumId, i64)> {
        let mut out = Vec::new();
        for v in 0..self.target.len() {
            for u in 0..self.source.len() {
                let k = self.entry_idx(v, u);
                if k != 0 {
                    out.push((
                        self.target.stratum_at(v).id.clone(),
                        self.source.stratum_at(u).id.clone(),
                        k,
                    ));
                }
            }
        }
        out
    }

    /// Kernel of the composite map: the fiber of the composite over a point
    /// of `W` decomposes over the intermediate strata, giving the matrix
    /// product `k(W, U) = Σ_V outer(W, V)·inner(V, U)`.
    pub fn compose(outer: &ProperMapKernel, inner: &ProperMapKernel) -> Result<ProperMapKernel> {
        if !same_space(&inner.target, &outer.source) {
            return Err(Error::SpaceMismatch);
        }
        let ns = inner.source.len();
        let nm = outer.source.len();
        let nt = outer.target.len();
        let mut entries = vec![0i64; nt * ns];
        for w in 0..nt {
            for u in 0..ns {
                let mut acc = 0i64;
                for v in 0..nm {
                    let a = outer.entry_idx(w, v);
                    let b = inner.entry_idx(v, u);
                    if a != 0 && b != 0 {
                        acc = iadd(acc, imul(a, b)?)?;
                    }
                }
                entries[w * ns + u] = acc;
            }
        }
        Ok(ProperMapKernel {
            source: inner.source.clone(),
            target: outer.target.clone(),
            entries,
            validated: inner.validated && outer.validated,
        })
    }
}

/// `f∗(α)(V) = Σ_U α(U)·k(V, U)`; linear in `α`.
pub fn pushforward(kernel: &ProperMapKernel, alpha: &ConstrFn) -> Result<ConstrFn> {
    if !same_space(alpha.space(), &kernel.source) {
        return Err(Error::SpaceMismatch);
    }
    let mut values = vec![0i64; kernel.target.len()];
    for v in 0..kernel.target.len() {
        let mut acc = 0i64;
        for u in 0..kernel.source.len() {
            let k = kernel.entry_idx(v, u);
            let a = alpha.value_at(u);
            if k != 0 && a != 0 {
                acc = iadd(acc, imul(a, k)?)?;
            }
        }
        values[v] = acc;
    }
    Ok(ConstrFn::from_values(&kernel.target, values))
}

/// Function-level hat decomposition of the pushforward:
/// `f∗α = χ(α|F)·1_Y + Σ_{V<S} (χ(α|F_V) − χ(α|F))·ĥ1(V̄)`, both sides
/// materialized on the target.
pub fn decompose_pushforward_hat(
    kernel: &ProperMapKernel,
    alpha: &ConstrFn,
) -> Result<FormulaReport> {
    let target = &kernel.target;
    let s = target.require_dense()?;
    let pf = pushforward(kernel, alpha)?;
    let fiber_general = pf.value_at(s);

    let top = ConstrFn::closed_indicator(target, &target.stratum_at(s).id)?;
    let mut rhs = top.scale(fiber_general)?;
    let mut terms = vec![ReportTerm {
        stratum: target.stratum_at(s).id.clone(),
        coefficient: fiber_general,
        weight: ReportValue::function(&top),
        contribution: ReportValue::function(&rhs),
    }];
    for v in 0..target.len() {
        if v == s {
            continue;
        }
        let coefficient = isub(pf.value_at(v), fiber_general)?;
        let hat = hat_function(target, &target.stratum_at(v).id)?;
        let contribution = hat.scale(coefficient)?;
        rhs = rhs.add(&contribution)?;
        terms.push(ReportTerm {
            stratum: target.stratum_at(v).id.clone(),
            coefficient,
            weight: ReportValue::function(&hat),
            contribution: ReportValue::function(&contribution),
        });
    }
    Ok(FormulaReport::new(
        Formula::Eq3,
        ReportValue::function(&pf),
        ReportValue::function(&rhs),
        terms,
    ))
}

/// Stratified multiplicativity of χ:
/// `χ(α) = χ(α|F)·χ(Y) + Σ_{V<S} (χ(α|F_V) − χ(α|F))·χ̂(V̄)`. The left side
/// is computed on the source; the fiber values are read off the
/// pushforward. `Eq4` is the general statement, `Eq6` the total-indicator
/// specialization.
pub fn verify_chi_mult(
    kernel: &ProperMapKernel,
    alpha: &ConstrFn,
    label: Formula,
) -> Result<FormulaReport> {
    assert!(
        matches!(label, Formula::Eq4 | Formula::Eq6),
        "label must be a χ-multiplicativity identity"
    );
    let target = &kernel.target;
    let s = target.require_dense()?;
    let pf = pushforward(kernel, alpha)?;
    let fiber_general = pf.value_at(s);
    let lhs = alpha.euler()?;

    let chi_target = ConstrFn::constant(target, 1).euler()?;
    let chi_hom = HomSpec::chi(target)?;
    let mut rhs = imul(fiber_general, chi_target)?;
    let mut terms = vec![ReportTerm {
        stratum: target.stratum_at(s).id.clone(),
        coefficient: fiber_general,
        weight: ReportValue::Int(chi_target),
        contribution: ReportValue::Int(rhs),
    }];
    for v in 0..target.len() {
        if v == s {
            continue;
        }
        let coefficient = isub(pf.value_at(v), fiber_general)?;
        let hat = chi_hom.hat_value(&target.stratum_at(v).id)?;
        let contribution = imul(coefficient, hat)?;
        rhs = iadd(rhs, contribution)?;
        terms.push(ReportTerm {
            stratum: target.stratum_at(v).id.clone(),
            coefficient,
            weight: ReportValue::Int(hat),
            contribution: ReportValue::Int(contribution),
        });
    }
    Ok(FormulaReport::new(
        label,
        ReportValue::Int(lhs),
        ReportValue::Int(rhs),
        terms,
    ))
}

/// Function-level ic decomposition of the pushforward:
/// `f∗α = χ(α|F)·ic_Y + Σ_{V<S} (χ(α|F_V) − χ(α|F)·Iχ(c°L_V))·îc(V̄)`.
pub fn verify_ic_pushforward(
    kernel: &ProperMapKernel,
    alpha: &ConstrFn,
    links: &LinkSystem,
) -> Result<FormulaReport> {
    let target = &kernel.target;
    if !same_space(target, links.space()) {
        return Err(Error::SpaceMismatch);
    }
    let s = target.require_dense()?;
    let pf = pushforward(kernel, alpha)?;
    let fiber_general = pf.value_at(s);

    let ic_top = ic_function(links, &target.stratum_at(s).id)?;
    let mut rhs = ic_top.scale(fiber_general)?;
    let mut terms = vec![ReportTerm {
        stratum: target.stratum_at(s).id.clone(),
        coefficient: fiber_general,
        weight: ReportValue::function(&ic_top),
        contribution: ReportValue::function(&rhs),
    }];
    for v in 0..target.len() {
        if v == s {
            continue;
        }
        let coefficient = isub(
            pf.value_at(v),
            imul(fiber_general, links.stalk_idx(v, s))?,
        )?;
        let hat = hat_ic_function(links, &target.stratum_at(v).id)?;
        let contribution = hat.scale(coefficient)?;
        rhs = rhs.add(&contribution)?;
        terms.push(ReportTerm {
            stratum: target.stratum_at(v).id.clone(),
            coefficient,
            weight: ReportValue::function(&hat),
            contribution: ReportValue::function(&contribution),
        });
    }
    Ok(FormulaReport::new(
        Formula::Eq12,
        ReportValue::function(&pf),
        ReportValue::function(&rhs),
        terms,
    ))
}

/// Stratified multiplicativity of Iχ:
/// `χ(α) = χ(α|F)·Iχ(Y) + Σ_{V<S} (χ(α|F_V) − χ(α|F)·Iχ(c°L_V))·Îχ(V̄)`.
/// For `α = ic_X` (label `Eq17`/`Eq18`) the fiber terms read off the
/// pushforward are exactly `Iχ` of the general fiber and of the cone
/// preimages, so the same computation covers the Iχ-multiplicative case.
pub fn verify_ichi_mult(
    kernel: &ProperMapKernel,
    alpha: &ConstrFn,
    links: &LinkSystem,
    label: Formula,
) -> Result<FormulaReport> {
    assert!(
        matches!(label, Formula::Eq13 | Formula::Eq15 | Formula::Eq17),
        "label must be an Iχ-multiplicativity identity"
    );
    let target = &kernel.target;
    if !same_space(target, links.space()) {
        return Err(Error::SpaceMismatch);
    }
    let s = target.require_dense()?;
    let pf = pushforward(kernel, alpha)?;
    let fiber_general = pf.value_at(s);
    let lhs = alpha.euler()?;

    let ichi_target = ic_function(links, &target.stratum_at(s).id)?.euler()?;
    let ichi_hom = IcHomSpec::ichi(links)?;
    let mut rhs = imul(fiber_general, ichi_target)?;
    let mut terms = vec![ReportTerm {
        stratum: target.stratum_at(s).id.clone(),
        coefficient: fiber_general,
        weight: ReportValue::Int(ichi_target),
        contribution: ReportValue::Int(rhs),
    }];
    for v in 0..target.len() {
        if v == s {
            continue;
        }
        let coefficient = isub(
            pf.value_at(v),
            imul(fiber_general, links.stalk_idx(v, s))?,
        )?;
        let hat = ichi_hom.ichat_value(links, &target.stratum_at(v).id)?;
        let contribution = imul(coefficient, hat)?;
        rhs = iadd(rhs, contribution)?;
        terms.push(ReportTerm {
            stratum: target.stratum_at(v).id.clone(),
            coefficient,
            weight: ReportValue::Int(hat),
            contribution: ReportValue::Int(contribution),
        });
    }
    Ok(FormulaReport::new(
        label,
        ReportValue::Int(lhs),
        ReportValue::Int(rhs),
        terms,
    ))
}

/// The χ-vs-Iχ comparison on one space:
/// `χ(Y) = Iχ(Y) + Σ_{V<S} (1 − Iχ(c°L_V))·Îχ(V̄)`.
pub fn verify_compare(links: &LinkSystem) -> Result<FormulaReport> {
    let space = links.space();
    let s = space.require_dense()?;
    let lhs = ConstrFn::constant(space, 1).euler()?;
    let ichi_target = ic_function(links, &space.stratum_at(s).id)?.euler()?;
    let ichi_hom = IcHomSpec::ichi(links)?;

    let mut rhs = ichi_target;
    let mut terms = vec![ReportTerm {
        stratum: space.stratum_at(s).id.clone(),
        coefficient: 1,
        weight: ReportValue::Int(ichi_target),
        contribution: ReportValue::Int(ichi_target),
    }];
    for v in 0..space.len() {
        if v == s {
            continue;
        }
        let coefficient = isub(1, links.stalk_idx(v, s))?;
        let hat = ichi_hom.ichat_value(links, &space.stratum_at(v).id)?;
        let contribution = imul(coefficient, hat)?;
        rhs = iadd(rhs, contribution)?;
        terms.push(ReportTerm {
            stratum: space.stratum_at(v).id.clone(),
            coefficient,
            weight: ReportValue::Int(hat),
            contribution: ReportValue::Int(contribution),
        });
    }
    Ok(FormulaReport::new(
        Formula::C1,
        ReportValue::Int(lhs),
        ReportValue::Int(rhs),
        terms,
    ))
}
