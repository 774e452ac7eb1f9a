//! Evaluation of group homomorphisms on constructible functions.
//!
//! A homomorphism `φ` out of the function group is determined by its values
//! on a basis. [`HomSpec`] fixes the values `φ(1_{V̄})` on the closed
//! indicators; [`IcHomSpec`] fixes `φ(ic_{V̄})` on the ic basis. Evaluation
//! expands the argument in the matching basis and applies `φ` linearly, and
//! the hat transforms
//!
//! ```text
//! φ̂(V̄)  = φ(1_{V̄})  − Σ_{W<V} φ̂(W̄)
//! Îφ(V̄) = φ(ic_{V̄}) − Σ_{W<V} Îφ(W̄)·Iχ(c°L_{W,V})
//! ```
//!
//! produce the corrected values appearing in the stratified multiplicative
//! formulas.
//!
//! Class-level identities are checked under the *universal* homomorphism
//! into the free abelian group on one symbol per closure (or per ic class).
//! Every concrete class transformation factors through the universal one by
//! linearity, so coefficientwise equality there certifies the identity for
//! all realizations; substituting integers for the symbols recovers the
//! numeric reports.

use std::collections::BTreeMap;
use std::fmt;

use crate::constructible::ConstrFn;
use crate::error::{iadd, imul, Error, Result};
use crate::ic::{decompose_ic_pure, ic_function, LinkSystem};
use crate::poset::{same_space, Space, StratumId};
use crate::pushforward::{pushforward, ProperMapKernel};
use crate::report::{Formula, FormulaReport, ReportTerm, ReportValue};

/// Values of an abelian group with checked integer scaling.
pub trait GroupValue: Clone + Eq + fmt::Debug {
    fn zero() -> Self;
    fn checked_add(&self, other: &Self) -> Result<Self>;
    fn checked_scale(&self, k: i64) -> Result<Self>;
    fn to_report_value(&self) -> ReportValue;
}

impl GroupValue for i64 {
    fn zero() -> Self {
        0
    }

    fn checked_add(&self, other: &Self) -> Result<Self> {
        iadd(*self, *other)
    }

    fn checked_scale(&self, k: i64) -> Result<Self> {
        imul(*self, k)
    }

    fn to_report_value(&self) -> ReportValue {
        ReportValue::Int(*self)
    }
}

/// Symbol for the class of a stratum closure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClosureSym(pub StratumId);

impl fmt::Display for ClosureSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cl({})", self.0)
    }
}

/// Symbol for the ic class of a stratum closure. Kept as a distinct type so
/// the two symbol families cannot be mixed in one class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IcSym(pub StratumId);

impl fmt::Display for IcSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ic({})", self.0)
    }
}

/// Element of the free abelian group on a symbol family; zero coefficients
/// are pruned so equality is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalClass<S: Ord + Clone + fmt::Debug + fmt::Display> {
    terms: BTreeMap<S, i64>,
}

impl<S: Ord + Clone + fmt::Debug + fmt::Display> FormalClass<S> {
    pub fn symbol(s: S) -> Self {
        FormalClass {
            terms: [(s, 1)].into(),
        }
    }

    pub fn coeff(&self, s: &S) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, i64)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes an integer for each symbol; with χ-values this collapses
    /// a class identity to its numeric counterpart.
    pub fn realize(&self, f: impl Fn(&S) -> i64) -> Result<i64> {
        let mut acc = 0i64;
        for (s, c) in &self.terms {
            acc = iadd(acc, imul(*c, f(s))?)?;
        }
        Ok(acc)
    }
}

impl<S: Ord + Clone + fmt::Debug + fmt::Display> GroupValue for FormalClass<S> {
    fn zero() -> Self {
        FormalClass {
            terms: BTreeMap::new(),
        }
    }

    fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms.clone();
        for (s, c) in &other.terms {
            let entry = terms.entry(s.clone()).or_insert(0);
            *entry = iadd(*entry, *c)?;
            if *entry == 0 {
                terms.remove(s);
            }
        }
        Ok(FormalClass { terms })
    }

    fn checked_scale(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(Self::zero());
        }
        let mut terms = BTreeMap::new();
        for (s, c) in &self.terms {
            terms.insert(s.clone(), imul(*c, k)?);
        }
        Ok(FormalClass { terms })
    }

    fn to_report_value(&self) -> ReportValue {
        ReportValue::Class(
            self.terms
                .iter()
                .map(|(s, c)| (s.to_string(), *c))
                .collect(),
        )
    }
}

/// A homomorphism given by its values on the closed-indicator basis.
#[derive(Debug, Clone)]
pub struct HomSpec<T: GroupValue> {
    space: Space,
    values: Vec<T>,
}

impl<T: GroupValue> HomSpec<T> {
    /// Requires a value `φ(1_{V̄})` for every stratum.
    pub fn new(space: &Space, values: &BTreeMap<StratumId, T>) -> Result<Self> {
        for id in values.keys() {
            space.index_of(id)?;
        }
        let vals = space
            .strata()
            .map(|s| {
                values
                    .get(&s.id)
                    .cloned()
                    .ok_or_else(|| Error::MissingHomValue(s.id.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(HomSpec {
            space: space.clone(),
            values: vals,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn value_on_closure(&self, v: &StratumId) -> Result<&T> {
        Ok(&self.values[self.space.index_of(v)?])
    }

    /// `φ(α)`: expand `α` over the closed indicators and apply `φ` linearly.
    pub fn evaluate(&self, alpha: &ConstrFn) -> Result<T> {
        if !same_space(&self.space, alpha.space()) {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = alpha.decompose_closed()?;
        let mut acc = T::zero();
        for v in 0..self.space.len() {
            let c = coeffs.coeff_at(v);
            if c != 0 {
                acc = acc.checked_add(&self.values[v].checked_scale(c)?)?;
            }
        }
        Ok(acc)
    }

    /// `φ̂(V̄) = φ(1_{V̄}) − Σ_{W<V} φ̂(W̄)`, by recursion over the down-set.
    pub fn hat_value(&self, v: &StratumId) -> Result<T> {
        let vi = self.space.index_of(v)?;
        let n = self.space.len();
        let mut hat: Vec<Option<T>> = vec![None; n];
        for w in 0..n {
            if !self.space.leq_idx(w, vi) {
                continue;
            }
            let mut acc = self.values[w].clone();
            for u in 0..w {
                if self.space.lt_idx(u, w) {
                    let prev = hat[u].as_ref().expect("down-set processed in order");
                    acc = acc.checked_add(&prev.checked_scale(-1)?)?;
                }
            }
            hat[w] = Some(acc);
        }
        Ok(hat[vi].take().expect("target stratum processed"))
    }
}

impl HomSpec<i64> {
    /// The Euler characteristic homomorphism: `φ(1_{V̄}) = χ(V̄)`.
    pub fn chi(space: &Space) -> Result<Self> {
        let values = (0..space.len())
            .map(|v| space.closure_chi(v))
            .collect::<Result<_>>()?;
        Ok(HomSpec {
            space: space.clone(),
            values,
        })
    }
}

impl HomSpec<FormalClass<ClosureSym>> {
    /// The universal homomorphism: each closed indicator goes to its own
    /// symbol.
    pub fn universal(space: &Space) -> Self {
        let values = space
            .strata()
            .map(|s| FormalClass::symbol(ClosureSym(s.id.clone())))
            .collect();
        HomSpec {
            space: space.clone(),
            values,
        }
    }
}

/// A homomorphism given by its values on the ic basis.
#[derive(Debug, Clone)]
pub struct IcHomSpec<T: GroupValue> {
    space: Space,
    values: Vec<T>,
}

impl<T: GroupValue> IcHomSpec<T> {
    pub fn new(space: &Space, values: &BTreeMap<StratumId, T>) -> Result<Self> {
        for id in values.keys() {
            space.index_of(id)?;
        }
        let vals = space
            .strata()
            .map(|s| {
                values
                    .get(&s.id)
                    .cloned()
                    .ok_or_else(|| Error::MissingHomValue(s.id.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(IcHomSpec {
            space: space.clone(),
            values: vals,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn value_on_ic(&self, v: &StratumId) -> Result<&T> {
        Ok(&self.values[self.space.index_of(v)?])
    }

    /// `φ(α)`: expand `α` over the ic basis (which needs the link system)
    /// and apply `φ` linearly.
    pub fn evaluate(&self, links: &LinkSystem, alpha: &ConstrFn) -> Result<T> {
        if !same_space(&self.space, alpha.space()) || !same_space(&self.space, links.space()) {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = decompose_ic_pure(links, alpha)?;
        let mut acc = T::zero();
        for v in 0..self.space.len() {
            let c = coeffs.coeff_at(v);
            if c != 0 {
                acc = acc.checked_add(&self.values[v].checked_scale(c)?)?;
            }
        }
        Ok(acc)
    }

    /// `Îφ(V̄) = φ(ic_{V̄}) − Σ_{W<V} Îφ(W̄)·Iχ(c°L_{W,V})`.
    pub fn ichat_value(&self, links: &LinkSystem, v: &StratumId) -> Result<T> {
        if !same_space(&self.space, links.space()) {
            return Err(Error::SpaceMismatch);
        }
        let vi = self.space.index_of(v)?;
        let n = self.space.len();
        let mut hat: Vec<Option<T>> = vec![None; n];
        for w in 0..n {
            if !self.space.leq_idx(w, vi) {
                continue;
            }
            let mut acc = self.values[w].clone();
            for u in 0..w {
                if self.space.lt_idx(u, w) {
                    let t = links.stalk_idx(u, w);
                    if t != 0 {
                        let prev = hat[u].as_ref().expect("down-set processed in order");
                        acc = acc.checked_add(&prev.checked_scale(-t)?)?;
                    }
                }
            }
            hat[w] = Some(acc);
        }
        Ok(hat[vi].take().expect("target stratum processed"))
    }
}

impl IcHomSpec<i64> {
    /// The intersection-homology Euler characteristic: `φ(ic_{V̄}) = Iχ(V̄)`.
    pub fn ichi(links: &LinkSystem) -> Result<Self> {
        let space = links.space();
        let values = space
            .strata()
            .map(|s| ic_function(links, &s.id)?.euler())
            .collect::<Result<_>>()?;
        Ok(IcHomSpec {
            space: space.clone(),
            values,
        })
    }
}

impl IcHomSpec<FormalClass<IcSym>> {
    pub fn universal(space: &Space) -> Self {
        let values = space
            .strata()
            .map(|s| FormalClass::symbol(IcSym(s.id.clone())))
            .collect();
        IcHomSpec {
            space: space.clone(),
            values,
        }
    }
}

/// Class-level pushforward identity over closure symbols: the image of the
/// hat decomposition of `f∗α` under the universal homomorphism. `Eq5` is the
/// general statement, `Eq7` its specialization to the total indicator.
pub fn verify_class_pushforward_hat(
    kernel: &ProperMapKernel,
    alpha: &ConstrFn,
    label: Formula,
) -> Result<FormulaReport> {
    assert!(
        matches!(label, Formula::Eq5 | Formula::Eq7),
        "label must be a closure-symbol pushforward identity"
    );
    let target = kernel.target();
    let s = target.require_dense()?;
    let pf = pushforward(kernel, alpha)?;
    let phi = HomSpec::universal(target);

    let lhs = phi.evaluate(&pf)?;

    let fiber_general = pf.value_at(s);
    let top = phi.value_on_closure(&target.stratum_at(s).id)?.clone();
    let mut rhs = top.checked_scale(fiber_general)?;
    let mut terms = vec![ReportTerm {
        stratum: target.stratum_at(s).id.clone(),
        coefficient: fiber_general,
        weight: top.to_report_value(),
        contribution: rhs.to_report_value(),
    }];
    for v in 0..target.len() {
        if v == s {
            continue;
        }
        let coefficient = crate::error::isub(pf.value_at(v), fiber_general)?;
        let hat = phi.hat_value(&target.stratum_at(v).id)?;
        let contribution = hat.checked_scale(coefficient)?;
        rhs = rhs.checked_add(&contribution)?;
        terms.push(ReportTerm {
            stratum: target.stratum_at(v).id.clone(),
            coefficient,
            weight: hat.to_report_value(),
            contribution: contribution.to_report_value(),
        });
    }
    Ok(FormulaReport::new(
        label,
        lhs.to_report_value(),
        rhs.to_report_value(),
        terms,
    ))
}

/// Class-level pushforward identity over ic symbols: the image of the ic
/// decomposition of `f∗α`. `Eq14` is the general statement, `Eq16`/`Eq18`
/// its specializations, and `C2` the identity-map comparison form.
pub fn verify_class_pushforward_ic(
    kernel: &ProperMapKernel,
    alpha: &ConstrFn,
    links: &LinkSystem,
    label: Formula,
) -> Result<FormulaReport> {
    assert!(
        matches!(
            label,
            Formula::Eq14 | Formula::Eq16 | Formula::Eq18 | Formula::C2
        ),
        "label must be an ic-symbol pushforward identity"
    );
    let target = kernel.target();
    if !same_space(target, links.space()) {
        return Err(Error::SpaceMismatch);
    }
    let s = target.require_dense()?;
    let pf = pushforward(kernel, alpha)?;
    let phi = IcHomSpec::universal(target);

    let lhs = phi.evaluate(links, &pf)?;

    let fiber_general = pf.value_at(s);
    let top = phi.value_on_ic(&target.stratum_at(s).id)?.clone();
    let mut rhs = top.checked_scale(fiber_general)?;
    let mut terms = vec![ReportTerm {
        stratum: target.stratum_at(s).id.clone(),
        coefficient: fiber_general,
        weight: top.to_report_value(),
        contribution: rhs.to_report_value(),
    }];
    for v in 0..target.len() {
        if v == s {
            continue;
        }
        let coefficient = crate::error::isub(
            pf.value_at(v),
            imul(fiber_general, links.stalk_idx(v, s))?,
        )?;
        let hat = phi.ichat_value(links, &target.stratum_at(v).id)?;
        let contribution = hat.checked_scale(coefficient)?;
        rhs = rhs.checked_add(&contribution)?;
        terms.push(ReportTerm {
            stratum: target.stratum_at(v).id.clone(),
            coefficient,
            weight: hat.to_report_value(),
            contribution: contribution.to_report_value(),
        });
    }
    Ok(FormulaReport::new(
        label,
        lhs.to_report_value(),
        rhs.to_report_value(),
        terms,
    ))
}
