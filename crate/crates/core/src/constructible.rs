//! Integer-valued constructible functions on a stratification poset.
//!
//! A function is stored by its value on each open stratum. Four families of
//! basis elements are in play:
//!
//! * open indicators `1_V` — value 1 on `V` only;
//! * closed indicators `1_{V̄} = Σ_{W ≤ V} 1_W`;
//! * the hat family `ĥ1_{V̄} = 1_{V̄} − Σ_{W < V} ĥ1_{W̄}`, the columns of
//!   the inverse closure matrix;
//! * the ic family (see [`crate::ic`]), with its own hat transform.
//!
//! When the space has a dense stratum `S`, two rewritten expansions are also
//! available: `α = α(S)·1_Y + Σ_{V<S} (α(V) − α(S))·ĥ1_{V̄}` and its ic
//! analogue. [`BasisCoefficients`] tags which expansion its coefficients
//! belong to, so recomposition is always unambiguous.
//!
//! Decomposition reads coefficients off closed-form identities; recomposition
//! rebuilds the function by genuinely summing basis elements. Round-tripping
//! the two therefore checks the identities instead of assuming them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{iadd, imul, isub, Error, Result};
use crate::ic::{hat_ic_function, ic_function, LinkSystem};
use crate::matrix::TriangularMatrix;
use crate::poset::{same_space, Space, StratumId};

/// A constructible function, total on the strata of its space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrFn {
    space: Space,
    /// Values in canonical stratum order.
    values: Vec<i64>,
}

impl ConstrFn {
    pub fn zero(space: &Space) -> Self {
        ConstrFn {
            space: space.clone(),
            values: vec![0; space.len()],
        }
    }

    pub fn constant(space: &Space, c: i64) -> Self {
        ConstrFn {
            space: space.clone(),
            values: vec![c; space.len()],
        }
    }

    /// Builds from a sparse map; strata not mentioned get value 0.
    pub fn from_map(space: &Space, values: &BTreeMap<StratumId, i64>) -> Result<Self> {
        let mut f = Self::zero(space);
        for (id, v) in values {
            let i = space.index_of(id)?;
            f.values[i] = *v;
        }
        Ok(f)
    }

    pub(crate) fn from_values(space: &Space, values: Vec<i64>) -> Self {
        debug_assert_eq!(values.len(), space.len());
        ConstrFn {
            space: space.clone(),
            values,
        }
    }

    /// `1_V`: value 1 on the open stratum, 0 elsewhere.
    pub fn indicator(space: &Space, v: &StratumId) -> Result<Self> {
        let i = space.index_of(v)?;
        let mut f = Self::zero(space);
        f.values[i] = 1;
        Ok(f)
    }

    /// `1_{V̄}`: value 1 on every `W ≤ V`.
    pub fn closed_indicator(space: &Space, v: &StratumId) -> Result<Self> {
        let vi = space.index_of(v)?;
        let mut f = Self::zero(space);
        for w in space.down_set_indices(vi) {
            f.values[w] = 1;
        }
        Ok(f)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn value(&self, v: &StratumId) -> Result<i64> {
        Ok(self.values[self.space.index_of(v)?])
    }

    pub fn value_at(&self, pos: usize) -> i64 {
        self.values[pos]
    }

    /// Values in canonical stratum order.
    pub fn raw_values(&self) -> &[i64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StratumId, i64)> {
        self.space
            .strata()
            .zip(self.values.iter())
            .map(|(s, v)| (&s.id, *v))
    }

    pub fn to_map(&self) -> BTreeMap<StratumId, i64> {
        self.iter().map(|(id, v)| (id.clone(), v)).collect()
    }

    pub fn add(&self, other: &ConstrFn) -> Result<ConstrFn> {
        self.zip_with(other, iadd)
    }

    pub fn sub(&self, other: &ConstrFn) -> Result<ConstrFn> {
        self.zip_with(other, isub)
    }

    /// Pointwise product; the ring structure of the function group.
    pub fn mul(&self, other: &ConstrFn) -> Result<ConstrFn> {
        self.zip_with(other, imul)
    }

    pub fn scale(&self, k: i64) -> Result<ConstrFn> {
        let values = self
            .values
            .iter()
            .map(|v| imul(*v, k))
            .collect::<Result<_>>()?;
        Ok(ConstrFn {
            space: self.space.clone(),
            values,
        })
    }

    fn zip_with(&self, other: &ConstrFn, op: fn(i64, i64) -> Result<i64>) -> Result<ConstrFn> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(*a, *b))
            .collect::<Result<_>>()?;
        Ok(ConstrFn {
            space: self.space.clone(),
            values,
        })
    }

    /// χ_c(α) = Σ_V α(V)·chi_c(V); on complex strata this computes the
    /// Euler characteristic homomorphism χ as well.
    pub fn euler(&self) -> Result<i64> {
        let mut acc = 0i64;
        for (s, v) in self.space.strata().zip(&self.values) {
            if *v != 0 {
                acc = iadd(acc, imul(*v, s.chi_c)?)?;
            }
        }
        Ok(acc)
    }

    /// Expansion in the open-indicator basis (the identity expansion).
    pub fn decompose_open(&self) -> BasisCoefficients {
        BasisCoefficients {
            space: self.space.clone(),
            basis: Basis::Open,
            coeffs: self.values.clone(),
        }
    }

    /// Expansion in the closed-indicator basis, by applying the inverse of
    /// the closure matrix to the value vector.
    pub fn decompose_closed(&self) -> Result<BasisCoefficients> {
        let inv = TriangularMatrix::closure(&self.space).inverse()?;
        Ok(BasisCoefficients {
            space: self.space.clone(),
            basis: Basis::Closed,
            coeffs: inv.apply(&self.values)?,
        })
    }

    /// Expansion over the hat family: the coefficient of `ĥ1_{V̄}` is α(V).
    pub fn decompose_hat(&self) -> BasisCoefficients {
        BasisCoefficients {
            space: self.space.clone(),
            basis: Basis::Hat,
            coeffs: self.values.clone(),
        }
    }

    /// Dense rewriting: `α = α(S)·1_Y + Σ_{V<S} (α(V) − α(S))·ĥ1_{V̄}`.
    pub fn decompose_hat_dense(&self) -> Result<BasisCoefficients> {
        let s = self.space.require_dense()?;
        let top = self.values[s];
        let mut coeffs = vec![0i64; self.space.len()];
        for v in 0..self.space.len() {
            coeffs[v] = if v == s {
                top
            } else {
                isub(self.values[v], top)?
            };
        }
        Ok(BasisCoefficients {
            space: self.space.clone(),
            basis: Basis::DenseHat,
            coeffs,
        })
    }
}

impl fmt::Display for ConstrFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (id, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{id} ↦ {v}")?;
        }
        write!(f, "}}")
    }
}

/// Which expansion a coefficient vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `α = Σ_V c_V · 1_V`
    Open,
    /// `α = Σ_V c_V · 1_{V̄}`
    Closed,
    /// `α = Σ_V c_V · ĥ1_{V̄}`
    Hat,
    /// `α = Σ_V c_V · ic_{V̄}` (needs link data to recompose)
    Ic,
    /// `α = c_S·1_Y + Σ_{V<S} c_V·ĥ1_{V̄}` with `S` the dense stratum
    DenseHat,
    /// `α = c_S·ic_Y + Σ_{V<S} c_V·îc(V̄)` with `S` the dense stratum
    DenseIc,
}

impl Basis {
    pub fn code(self) -> &'static str {
        match self {
            Basis::Open => "open",
            Basis::Closed => "closed",
            Basis::Hat => "hat",
            Basis::Ic => "ic",
            Basis::DenseHat => "hat-dense",
            Basis::DenseIc => "ic-dense",
        }
    }
}

/// Integer coefficients of a function in a tagged expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCoefficients {
    space: Space,
    basis: Basis,
    /// Coefficients in canonical stratum order.
    coeffs: Vec<i64>,
}

impl BasisCoefficients {
    pub(crate) fn new(space: &Space, basis: Basis, coeffs: Vec<i64>) -> Self {
        debug_assert_eq!(coeffs.len(), space.len());
        BasisCoefficients {
            space: space.clone(),
            basis,
            coeffs,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, v: &StratumId) -> Result<i64> {
        Ok(self.coeffs[self.space.index_of(v)?])
    }

    pub fn coeff_at(&self, pos: usize) -> i64 {
        self.coeffs[pos]
    }

    pub fn raw_coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn to_map(&self) -> BTreeMap<StratumId, i64> {
        self.space
            .strata()
            .zip(&self.coeffs)
            .map(|(s, c)| (s.id.clone(), *c))
            .collect()
    }

    pub fn add(&self, other: &BasisCoefficients) -> Result<BasisCoefficients> {
        if !same_space(&self.space, &other.space) || self.basis != other.basis {
            return Err(Error::SpaceMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| iadd(*a, *b))
            .collect::<Result<_>>()?;
        Ok(BasisCoefficients {
            space: self.space.clone(),
            basis: self.basis,
            coeffs,
        })
    }

    /// Rebuilds the function by summing coefficient × basis element. The ic
    /// expansions need the link system of the space.
    pub fn recompose(&self, links: Option<&LinkSystem>) -> Result<ConstrFn> {
        let space = &self.space;
        let need_links = || -> Result<&LinkSystem> {
            let l = links.ok_or(Error::MissingLinks)?;
            if !same_space(l.space(), space) {
                return Err(Error::SpaceMismatch);
            }
            Ok(l)
        };
        match self.basis {
            Basis::Open => Ok(ConstrFn::from_values(space, self.coeffs.clone())),
            Basis::Closed => {
                let mut acc = ConstrFn::zero(space);
                for (v, &c) in self.coeffs.iter().enumerate() {
                    if c != 0 {
                        let e = ConstrFn::closed_indicator(space, &space.stratum_at(v).id)?;
                        acc = acc.add(&e.scale(c)?)?;
                    }
                }
                Ok(acc)
            }
            Basis::Hat => {
                let mut acc = ConstrFn::zero(space);
                for (v, &c) in self.coeffs.iter().enumerate() {
                    if c != 0 {
                        let e = hat_function(space, &space.stratum_at(v).id)?;
                        acc = acc.add(&e.scale(c)?)?;
                    }
                }
                Ok(acc)
            }
            Basis::DenseHat => {
                let s = space.require_dense()?;
                let mut acc =
                    ConstrFn::closed_indicator(space, &space.stratum_at(s).id)?.scale(self.coeffs[s])?;
                for (v, &c) in self.coeffs.iter().enumerate() {
                    if v != s && c != 0 {
                        let e = hat_function(space, &space.stratum_at(v).id)?;
                        acc = acc.add(&e.scale(c)?)?;
                    }
                }
                Ok(acc)
            }
            Basis::Ic => {
                let l = need_links()?;
                let mut acc = ConstrFn::zero(space);
                for (v, &c) in self.coeffs.iter().enumerate() {
                    if c != 0 {
                        let e = ic_function(l, &space.stratum_at(v).id)?;
                        acc = acc.add(&e.scale(c)?)?;
                    }
                }
                Ok(acc)
            }
            Basis::DenseIc => {
                let l = need_links()?;
                let s = space.require_dense()?;
                let mut acc = ic_function(l, &space.stratum_at(s).id)?.scale(self.coeffs[s])?;
                for (v, &c) in self.coeffs.iter().enumerate() {
                    if v != s && c != 0 {
                        let e = hat_ic_function(l, &space.stratum_at(v).id)?;
                        acc = acc.add(&e.scale(c)?)?;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Expansion of `ĥ1_{V̄}` over the closed-indicator basis: the `V` column of
/// the inverse closure matrix, computed by the recursion
/// `ĥ1_{V̄} = 1_{V̄} − Σ_{W < V} ĥ1_{W̄}`.
pub fn hat_closed(space: &Space, v: &StratumId) -> Result<BasisCoefficients> {
    let vi = space.index_of(v)?;
    let n = space.len();
    // hat[w] holds the closed-basis coefficient vector of ĥ1_{W̄}; build in
    // canonical order so the recursion only looks backwards.
    let mut hat: Vec<Option<Vec<i64>>> = vec![None; n];
    for w in 0..n {
        if !space.leq_idx(w, vi) {
            continue;
        }
        let mut col = vec![0i64; n];
        col[w] = 1;
        for u in 0..w {
            if space.lt_idx(u, w) {
                let prev = hat[u].as_ref().expect("down-set processed in order");
                for t in 0..n {
                    col[t] = isub(col[t], prev[t])?;
                }
            }
        }
        hat[w] = Some(col);
    }
    let coeffs = hat[vi].take().expect("target stratum processed");
    Ok(BasisCoefficients::new(space, Basis::Closed, coeffs))
}

/// `ĥ1_{V̄}` as a function, assembled from its closed-basis expansion; it
/// equals the open indicator `1_V` pointwise.
pub fn hat_function(space: &Space, v: &StratumId) -> Result<ConstrFn> {
    hat_closed(space, v)?.recompose(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::StratPoset;
    use std::sync::Arc;

    fn sid(s: &str) -> StratumId {
        StratumId::new(s).unwrap()
    }

    fn singleton(chi: i64) -> Space {
        Arc::new(StratPoset::build(vec![(sid("s"), 1, chi)], &[], None).unwrap())
    }

    fn chain2() -> Space {
        Arc::new(
            StratPoset::build(
                vec![(sid("w"), 0, 1), (sid("s"), 1, 0)],
                &[(sid("w"), sid("s"))],
                None,
            )
            .unwrap(),
        )
    }

    fn diamond() -> Space {
        Arc::new(
            StratPoset::build(
                vec![
                    (sid("w"), 0, 1),
                    (sid("a"), 1, 2),
                    (sid("b"), 1, -1),
                    (sid("s"), 2, 3),
                ],
                &[
                    (sid("w"), sid("a")),
                    (sid("w"), sid("b")),
                    (sid("a"), sid("s")),
                    (sid("b"), sid("s")),
                ],
                None,
            )
            .unwrap(),
        )
    }

    #[test]
    fn indicators() {
        let space = chain2();
        let f = ConstrFn::indicator(&space, &sid("w")).unwrap();
        assert_eq!(f.value(&sid("w")).unwrap(), 1);
        assert_eq!(f.value(&sid("s")).unwrap(), 0);

        let g = ConstrFn::closed_indicator(&space, &sid("s")).unwrap();
        assert_eq!(g.value(&sid("w")).unwrap(), 1);
        assert_eq!(g.value(&sid("s")).unwrap(), 1);

        let d = diamond();
        let h = ConstrFn::closed_indicator(&d, &sid("a")).unwrap();
        assert_eq!(h.to_map()[&sid("w")], 1);
        assert_eq!(h.to_map()[&sid("a")], 1);
        assert_eq!(h.to_map()[&sid("b")], 0);
        assert_eq!(h.to_map()[&sid("s")], 0);
    }

    #[test]
    fn hat_on_a_two_chain() {
        let space = chain2();
        let hc = hat_closed(&space, &sid("s")).unwrap();
        assert_eq!(hc.coeff(&sid("s")).unwrap(), 1);
        assert_eq!(hc.coeff(&sid("w")).unwrap(), -1);
        let f = hat_function(&space, &sid("s")).unwrap();
        assert_eq!(f, ConstrFn::indicator(&space, &sid("s")).unwrap());
    }

    #[test]
    fn hat_on_the_diamond_matches_the_expanded_recursion() {
        // ĥ1_{S̄} = 1_{S̄} − 1_{Ā} − 1_{B̄} + 1_{W̄}
        let space = diamond();
        let hc = hat_closed(&space, &sid("s")).unwrap();
        assert_eq!(hc.coeff(&sid("s")).unwrap(), 1);
        assert_eq!(hc.coeff(&sid("a")).unwrap(), -1);
        assert_eq!(hc.coeff(&sid("b")).unwrap(), -1);
        assert_eq!(hc.coeff(&sid("w")).unwrap(), 1);
        assert_eq!(
            hat_function(&space, &sid("s")).unwrap(),
            ConstrFn::indicator(&space, &sid("s")).unwrap()
        );
    }

    #[test]
    fn hat_coefficients_are_columns_of_the_inverse_closure_matrix() {
        let space = diamond();
        let inv = TriangularMatrix::closure(&space).inverse().unwrap();
        for s in space.strata() {
            let hc = hat_closed(&space, &s.id).unwrap();
            let v = space.index_of(&s.id).unwrap();
            assert_eq!(hc.raw_coeffs(), inv.column(v).as_slice());
        }
    }

    #[test]
    fn hat_decomposition_reads_off_values() {
        let space = chain2();
        let alpha =
            ConstrFn::from_map(&space, &[(sid("w"), 4), (sid("s"), -2)].into()).unwrap();
        let dc = alpha.decompose_hat();
        assert_eq!(dc.coeff(&sid("w")).unwrap(), 4);
        assert_eq!(dc.coeff(&sid("s")).unwrap(), -2);
        assert_eq!(dc.recompose(None).unwrap(), alpha);
    }

    #[test]
    fn dense_hat_decomposition_on_a_two_chain() {
        // α = b·1_Y + (a − b)·ĥ1_{W̄}
        let space = chain2();
        let alpha =
            ConstrFn::from_map(&space, &[(sid("w"), 7), (sid("s"), 3)].into()).unwrap();
        let dc = alpha.decompose_hat_dense().unwrap();
        assert_eq!(dc.coeff(&sid("s")).unwrap(), 3);
        assert_eq!(dc.coeff(&sid("w")).unwrap(), 4);
        assert_eq!(dc.recompose(None).unwrap(), alpha);
    }

    #[test]
    fn dense_hat_of_a_constant_has_only_the_top_coefficient() {
        let space = diamond();
        let alpha = ConstrFn::constant(&space, 9);
        let dc = alpha.decompose_hat_dense().unwrap();
        for s in space.strata() {
            let expected = if s.id == sid("s") { 9 } else { 0 };
            assert_eq!(dc.coeff(&s.id).unwrap(), expected);
        }
        assert_eq!(dc.recompose(None).unwrap(), alpha);
    }

    #[test]
    fn dense_hat_requires_a_dense_stratum() {
        let space = Arc::new(
            StratPoset::build(vec![(sid("a"), 0, 1), (sid("b"), 0, 1)], &[], None).unwrap(),
        );
        let alpha = ConstrFn::constant(&space, 1);
        assert_eq!(
            alpha.decompose_hat_dense().unwrap_err(),
            Error::NoDenseStratum
        );
    }

    #[test]
    fn euler_of_basic_functions() {
        let space = singleton(3);
        assert_eq!(ConstrFn::constant(&space, 1).euler().unwrap(), 3);

        // Nodal-cubic weights: χ(Y) = 1·1 + 1·0 = 1.
        let nodal = chain2();
        assert_eq!(ConstrFn::constant(&nodal, 1).euler().unwrap(), 1);

        let d = diamond();
        for s in d.strata() {
            let f = ConstrFn::indicator(&d, &s.id).unwrap();
            assert_eq!(f.euler().unwrap(), s.chi_c);
        }
    }

    #[test]
    fn closed_decomposition_round_trips() {
        let space = diamond();
        let alpha = ConstrFn::from_map(
            &space,
            &[(sid("w"), 2), (sid("a"), -3), (sid("b"), 5), (sid("s"), 1)].into(),
        )
        .unwrap();
        let dc = alpha.decompose_closed().unwrap();
        assert_eq!(dc.recompose(None).unwrap(), alpha);
    }

    #[test]
    fn pointwise_product_and_scaling() {
        let space = chain2();
        let alpha =
            ConstrFn::from_map(&space, &[(sid("w"), 3), (sid("s"), -2)].into()).unwrap();
        let beta = ConstrFn::from_map(&space, &[(sid("w"), -4), (sid("s"), 5)].into()).unwrap();
        let prod = alpha.mul(&beta).unwrap();
        assert_eq!(prod.value(&sid("w")).unwrap(), -12);
        assert_eq!(prod.value(&sid("s")).unwrap(), -10);
        assert_eq!(alpha.scale(-3).unwrap().value(&sid("w")).unwrap(), -9);
        // Multiplying by the total indicator is the identity.
        let one = ConstrFn::constant(&space, 1);
        assert_eq!(alpha.mul(&one).unwrap(), alpha);
    }

    #[test]
    fn arithmetic_is_checked() {
        let space = singleton(2);
        let big = ConstrFn::constant(&space, i64::MAX);
        assert_eq!(big.add(&big).unwrap_err(), Error::Overflow);
        assert_eq!(big.euler().unwrap_err(), Error::Overflow);
    }

    #[test]
    fn space_mismatch_is_rejected() {
        let a = ConstrFn::constant(&singleton(1), 1);
        let b = ConstrFn::constant(&chain2(), 1);
        assert_eq!(a.add(&b).unwrap_err(), Error::SpaceMismatch);
    }
}
