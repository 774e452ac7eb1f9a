//! Link systems, ic constructible functions, and the coefficient calculus of
//! the free module on the classes `[IC′_{V̄}]`.
//!
//! For each comparable pair `W < V` the link system records the integer
//! `Iχ(c°L_{W,V})`: the intersection-homology Euler characteristic of the
//! open cone on the link of `W` inside `V̄`. The constructible function
//! `ic_{V̄}` is then 1 on `V`, `Iχ(c°L_{W,V})` on each `W < V`, and 0 off
//! `V̄`. These functions form another unipotent-triangular basis.
//!
//! ## Cone truncation convention
//!
//! When a cone value is derived from link Betti numbers, this crate uses the
//! middle-perversity truncation for a pair of complex codimension
//! `c = dim V − dim W` (real link dimension `2c − 1`):
//!
//! ```text
//! Iχ(c°L) = Σ_{j < c} (−1)^j · b_j(IH of the link)
//! ```
//!
//! i.e. only intersection-cohomology degrees strictly below the complex
//! codimension contribute, matching the normalization in which the
//! hypercohomology of `IC′_{V̄}` is the intersection cohomology of `V̄`.
//! Callers who disagree with the convention can supply `Iχ(c°L)` integers
//! directly; when both encodings are given they must agree.
//!
//! `KClass` tracks an element `Σ_V [IC′_{V̄}]·L(V)` of the free module on
//! the `[IC′_{V̄}]`, with the coefficient ring collapsed to the integers by
//! Euler characteristic. Stalkwise evaluation and its inverse (for spaces
//! with a dense stratum) are exact triangular computations.

use std::collections::BTreeMap;

use crate::constructible::{Basis, BasisCoefficients, ConstrFn};
use crate::error::{iadd, imul, isub, Error, Result};
use crate::matrix::TriangularMatrix;
use crate::poset::{same_space, Space, StratumId};
use crate::report::{Formula, FormulaReport, ReportTerm, ReportValue};

/// Raw link input for one comparable pair. At least one encoding must be
/// present; when both are, they must agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkData {
    pub lower: StratumId,
    pub upper: StratumId,
    pub cone_ichi: Option<i64>,
    pub link_ih_betti: Option<Vec<u64>>,
}

impl LinkData {
    pub fn cone(lower: StratumId, upper: StratumId, value: i64) -> Self {
        LinkData {
            lower,
            upper,
            cone_ichi: Some(value),
            link_ih_betti: None,
        }
    }

    pub fn betti(lower: StratumId, upper: StratumId, betti: Vec<u64>) -> Self {
        LinkData {
            lower,
            upper,
            cone_ichi: None,
            link_ih_betti: Some(betti),
        }
    }
}

/// Truncated alternating sum of link Betti numbers: `Σ_{j<codim} (−1)^j b_j`.
pub fn cone_euler(link_betti: &[u64], codim: u32) -> Result<i64> {
    if codim == 0 {
        return Err(Error::InvalidCodim(0));
    }
    let mut acc = 0i64;
    for (j, b) in link_betti.iter().enumerate() {
        if j as u32 >= codim {
            break;
        }
        let b = i64::try_from(*b).map_err(|_| Error::Overflow)?;
        acc = if j % 2 == 0 { iadd(acc, b)? } else { isub(acc, b)? };
    }
    Ok(acc)
}

/// Complete cone data `Iχ(c°L_{W,V})` for every comparable pair of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSystem {
    space: Space,
    /// Row-major `n × n` stalk table: entry `(w, v)` is the value of
    /// `ic_{V̄}` at `w` — 1 on the diagonal, the cone value for `w < v`,
    /// 0 otherwise.
    stalks: Vec<i64>,
}

impl LinkSystem {
    pub fn build(space: &Space, entries: &[LinkData]) -> Result<LinkSystem> {
        let n = space.len();
        let mut stalks = vec![0i64; n * n];
        let mut seen = vec![false; n * n];
        for i in 0..n {
            stalks[i * n + i] = 1;
        }
        for e in entries {
            let w = space.index_of(&e.lower)?;
            let v = space.index_of(&e.upper)?;
            if !space.lt_idx(w, v) {
                return Err(Error::InvalidLinkPair {
                    lower: e.lower.clone(),
                    upper: e.upper.clone(),
                });
            }
            if seen[w * n + v] {
                return Err(Error::DuplicateLink {
                    lower: e.lower.clone(),
                    upper: e.upper.clone(),
                });
            }
            let codim = space.stratum_at(v).complex_dim - space.stratum_at(w).complex_dim;
            let value = match (&e.cone_ichi, &e.link_ih_betti) {
                (Some(c), None) => *c,
                (None, Some(b)) => cone_euler(b, codim)?,
                (Some(c), Some(b)) => {
                    let derived = cone_euler(b, codim)?;
                    if *c != derived {
                        return Err(Error::LinkConflict {
                            lower: e.lower.clone(),
                            upper: e.upper.clone(),
                            given: *c,
                            derived,
                        });
                    }
                    *c
                }
                (None, None) => {
                    return Err(Error::MissingLinkData {
                        lower: e.lower.clone(),
                        upper: e.upper.clone(),
                    })
                }
            };
            stalks[w * n + v] = value;
            seen[w * n + v] = true;
        }
        for w in 0..n {
            for v in 0..n {
                if space.lt_idx(w, v) && !seen[w * n + v] {
                    return Err(Error::MissingLinkData {
                        lower: space.stratum_at(w).id.clone(),
                        upper: space.stratum_at(v).id.clone(),
                    });
                }
            }
        }
        Ok(LinkSystem {
            space: space.clone(),
            stalks,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Stalk of `ic_{V̄}` at `w`: 1 on the diagonal, the cone value below,
    /// 0 off the closure.
    pub fn stalk_idx(&self, w: usize, v: usize) -> i64 {
        self.stalks[w * self.space.len() + v]
    }

    /// `Iχ(c°L_{W,V})` for a strictly comparable pair.
    pub fn cone_ichi(&self, lower: &StratumId, upper: &StratumId) -> Result<i64> {
        let w = self.space.index_of(lower)?;
        let v = self.space.index_of(upper)?;
        if !self.space.lt_idx(w, v) {
            return Err(Error::InvalidLinkPair {
                lower: lower.clone(),
                upper: upper.clone(),
            });
        }
        Ok(self.stalk_idx(w, v))
    }

    /// All strictly comparable pairs with their cone values, in canonical
    /// order.
    pub fn pairs(&self) -> Vec<(StratumId, StratumId, i64)> {
        let n = self.space.len();
        let mut out = Vec::new();
        for w in 0..n {
            for v in 0..n {
                if self.space.lt_idx(w, v) {
                    out.push((
                        self.space.stratum_at(w).id.clone(),
                        self.space.stratum_at(v).id.clone(),
                        self.stalk_idx(w, v),
                    ));
                }
            }
        }
        out
    }

    /// Induces the link system on a sub-poset built by
    /// [`crate::poset::StratPoset::restriction`]; strata are matched by id.
    pub fn restrict(&self, subspace: &Space) -> Result<LinkSystem> {
        let mut entries = Vec::new();
        for w in 0..subspace.len() {
            for v in 0..subspace.len() {
                if subspace.lt_idx(w, v) {
                    let lo = &subspace.stratum_at(w).id;
                    let hi = &subspace.stratum_at(v).id;
                    entries.push(LinkData::cone(lo.clone(), hi.clone(), self.cone_ichi(lo, hi)?));
                }
            }
        }
        LinkSystem::build(subspace, &entries)
    }
}

/// `ic_{V̄}` as a constructible function: 1 on `V`, the cone value on each
/// `W < V`, 0 off the closure.
pub fn ic_function(links: &LinkSystem, v: &StratumId) -> Result<ConstrFn> {
    let space = links.space();
    let vi = space.index_of(v)?;
    let values = (0..space.len()).map(|w| links.stalk_idx(w, vi)).collect();
    Ok(ConstrFn::from_values(space, values))
}

/// The transition matrix from the ic basis to the open-indicator basis:
/// column `V` holds the stalks of `ic_{V̄}`.
pub fn ic_transition_matrix(links: &LinkSystem) -> TriangularMatrix {
    TriangularMatrix::from_fn(links.space(), |w, v| links.stalk_idx(w, v))
}

/// Expansion of `îc(V̄)` over the ic basis, from the recursion
/// `îc(V̄) = ic_{V̄} − Σ_{W<V} îc(W̄)·Iχ(c°L_{W,V})`. As a function it
/// equals the open indicator `1_V`. The value depends only on the closure
/// `V̄` with its induced stratification.
pub fn hat_ic(links: &LinkSystem, v: &StratumId) -> Result<BasisCoefficients> {
    let space = links.space();
    let vi = space.index_of(v)?;
    let n = space.len();
    let mut hat: Vec<Option<Vec<i64>>> = vec![None; n];
    for w in 0..n {
        if !space.leq_idx(w, vi) {
            continue;
        }
        let mut col = vec![0i64; n];
        col[w] = 1;
        for u in 0..w {
            if space.lt_idx(u, w) {
                let t = links.stalk_idx(u, w);
                let prev = hat[u].as_ref().expect("down-set processed in order");
                for s in 0..n {
                    if prev[s] != 0 {
                        col[s] = isub(col[s], imul(prev[s], t)?)?;
                    }
                }
            }
        }
        hat[w] = Some(col);
    }
    let coeffs = hat[vi].take().expect("target stratum processed");
    Ok(BasisCoefficients::new(space, Basis::Ic, coeffs))
}

/// `îc(V̄)` as a function, assembled by summing its ic-basis expansion.
pub fn hat_ic_function(links: &LinkSystem, v: &StratumId) -> Result<ConstrFn> {
    hat_ic(links, v)?.recompose(Some(links))
}

/// Dense-stratum expansion of a function over `{ic_Y} ∪ {îc(V̄) : V < S}`:
/// the coefficient of `ic_Y` is `α(S)` and the coefficient of `îc(V̄)` is
/// `α(V) − α(S)·Iχ(c°L_{V,Y})`.
pub fn decompose_ic(links: &LinkSystem, alpha: &ConstrFn) -> Result<BasisCoefficients> {
    let space = links.space();
    if !same_space(space, alpha.space()) {
        return Err(Error::SpaceMismatch);
    }
    let s = space.require_dense()?;
    let top = alpha.value_at(s);
    let mut coeffs = vec![0i64; space.len()];
    for v in 0..space.len() {
        coeffs[v] = if v == s {
            top
        } else {
            isub(alpha.value_at(v), imul(top, links.stalk_idx(v, s))?)?
        };
    }
    Ok(BasisCoefficients::new(space, Basis::DenseIc, coeffs))
}

/// Expansion in the pure ic basis `α = Σ_V c_V·ic_{V̄}`, by inverting the
/// transition matrix. Works without a dense stratum.
pub fn decompose_ic_pure(links: &LinkSystem, alpha: &ConstrFn) -> Result<BasisCoefficients> {
    let space = links.space();
    if !same_space(space, alpha.space()) {
        return Err(Error::SpaceMismatch);
    }
    let inv = ic_transition_matrix(links).inverse()?;
    let coeffs = inv.apply(alpha.raw_values())?;
    Ok(BasisCoefficients::new(space, Basis::Ic, coeffs))
}

/// An element `Σ_V [IC′_{V̄}]·L(V)` of the free module on the ic classes,
/// with coefficients in the integers (the coefficient ring of graded vector
/// spaces collapsed by Euler characteristic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KClass {
    space: Space,
    coeffs: Vec<i64>,
}

impl KClass {
    /// Builds from a sparse coefficient map; absent strata get 0.
    pub fn from_map(space: &Space, coeffs: &BTreeMap<StratumId, i64>) -> Result<KClass> {
        let mut k = KClass {
            space: space.clone(),
            coeffs: vec![0; space.len()],
        };
        for (id, c) in coeffs {
            let i = space.index_of(id)?;
            k.coeffs[i] = *c;
        }
        Ok(k)
    }

    pub(crate) fn from_coeffs(space: &Space, coeffs: Vec<i64>) -> KClass {
        debug_assert_eq!(coeffs.len(), space.len());
        KClass {
            space: space.clone(),
            coeffs,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn coeff(&self, v: &StratumId) -> Result<i64> {
        Ok(self.coeffs[self.space.index_of(v)?])
    }

    pub fn coeff_at(&self, pos: usize) -> i64 {
        self.coeffs[pos]
    }

    pub fn to_map(&self) -> BTreeMap<StratumId, i64> {
        self.space
            .strata()
            .zip(&self.coeffs)
            .map(|(s, c)| (s.id.clone(), *c))
            .collect()
    }

    /// The underlying constructible function `Σ_V L(V)·ic_{V̄}`; its stalk
    /// values agree with [`k_stalk`] at every stratum.
    pub fn to_fn(&self, links: &LinkSystem) -> Result<ConstrFn> {
        if !same_space(&self.space, links.space()) {
            return Err(Error::SpaceMismatch);
        }
        BasisCoefficients::new(&self.space, Basis::Ic, self.coeffs.clone())
            .recompose(Some(links))
    }
}

/// Stalk of the class at a point of `W`:
/// `L(W) + Σ_{V>W} Iχ(c°L_{W,V})·L(V)`.
pub fn k_stalk(class: &KClass, links: &LinkSystem, w: &StratumId) -> Result<i64> {
    if !same_space(class.space(), links.space()) {
        return Err(Error::SpaceMismatch);
    }
    let space = links.space();
    let wi = space.index_of(w)?;
    let mut acc = 0i64;
    for v in 0..space.len() {
        let t = links.stalk_idx(wi, v);
        if t != 0 && class.coeff_at(v) != 0 {
            acc = iadd(acc, imul(t, class.coeff_at(v))?)?;
        }
    }
    Ok(acc)
}

/// Stalks at every stratum, in canonical order.
pub fn k_stalks(class: &KClass, links: &LinkSystem) -> Result<Vec<i64>> {
    links
        .space()
        .strata()
        .map(|s| k_stalk(class, links, &s.id))
        .collect()
}

/// Recovers the unique class with the given per-stratum stalks, for a space
/// with a dense stratum `S`. The top coefficient is the stalk on `S`; the
/// rest solve the triangular system
/// `stalk(W) − Iχ(c°L_{W,Y})·stalk(S) = Σ_{W≤V<S} Iχ(c°L_{W,V})·L(V)`
/// by back-substitution over the strata below `S`.
pub fn k_decompose(stalks: &BTreeMap<StratumId, i64>, links: &LinkSystem) -> Result<KClass> {
    let space = links.space();
    let s = space.require_dense()?;
    let n = space.len();
    let mut stalk_vec = vec![0i64; n];
    for (id, v) in stalks {
        stalk_vec[space.index_of(id)?] = *v;
    }
    let mut coeffs = vec![0i64; n];
    coeffs[s] = stalk_vec[s];
    // Corrected stalks L′(W) = stalk(W) − Iχ(c°L_{W,Y})·stalk(S).
    let mut corrected = vec![0i64; n];
    for w in 0..n {
        if w != s {
            corrected[w] = isub(stalk_vec[w], imul(links.stalk_idx(w, s), stalk_vec[s])?)?;
        }
    }
    for v in (0..n).rev() {
        if v == s {
            continue;
        }
        let mut acc = corrected[v];
        for u in (v + 1)..n {
            if u != s && space.lt_idx(v, u) && coeffs[u] != 0 {
                acc = isub(acc, imul(links.stalk_idx(v, u), coeffs[u])?)?;
            }
        }
        coeffs[v] = acc;
    }
    Ok(KClass::from_coeffs(space, coeffs))
}

/// Checks the dense-stratum ic decomposition as an identity of functions:
/// the left side is `α`, the right side is reassembled from `ic_Y` and the
/// `îc(V̄)`.
pub fn verify_ic_decomposition(links: &LinkSystem, alpha: &ConstrFn) -> Result<FormulaReport> {
    let space = links.space();
    if !same_space(space, alpha.space()) {
        return Err(Error::SpaceMismatch);
    }
    let s = space.require_dense()?;
    let dc = decompose_ic(links, alpha)?;

    let mut terms = Vec::new();
    let ic_top = ic_function(links, &space.stratum_at(s).id)?;
    let mut rhs = ic_top.scale(dc.coeff_at(s))?;
    terms.push(ReportTerm {
        stratum: space.stratum_at(s).id.clone(),
        coefficient: dc.coeff_at(s),
        weight: ReportValue::function(&ic_top),
        contribution: ReportValue::function(&rhs),
    });
    for v in 0..space.len() {
        if v == s {
            continue;
        }
        let hat = hat_ic_function(links, &space.stratum_at(v).id)?;
        let contribution = hat.scale(dc.coeff_at(v))?;
        rhs = rhs.add(&contribution)?;
        terms.push(ReportTerm {
            stratum: space.stratum_at(v).id.clone(),
            coefficient: dc.coeff_at(v),
            weight: ReportValue::function(&hat),
            contribution: ReportValue::function(&contribution),
        });
    }
    Ok(FormulaReport::new(
        Formula::Eq11,
        ReportValue::function(alpha),
        ReportValue::function(&rhs),
        terms,
    ))
}
