//! Finite stratification posets.
//!
//! A stratified space is reduced here to its combinatorial shadow: a finite
//! set of strata, each carrying a complex dimension and the compactly
//! supported Euler characteristic of the open stratum, together with the
//! closure order `V ≤ W  iff  V ⊂ W̄` induced by the frontier condition.
//!
//! The order is built as the reflexive-transitive closure of user-supplied
//! pairs, then checked for antisymmetry and for strict dimension growth
//! (`V < W` forces `dim V < dim W`, as holds for complex Whitney
//! stratifications). Strata are indexed in the *canonical linear extension*:
//! sorted by `(complex_dim, name)`. All matrix and coefficient vectors in
//! this crate use that indexing, so output is deterministic.
//!
//! Connectivity of the individual strata cannot be seen from this data; it
//! is an obligation on the caller, as is the geometric meaning of the
//! `chi_c` weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Name of a stratum, unique within one [`StratPoset`]. Nonempty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumId(Arc<str>);

impl StratumId {
    pub fn new(name: impl AsRef<str>) -> Result<Self> {
        let name = name.as_ref();
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        Ok(Self(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StratumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StratumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StratumId({:?})", &*self.0)
    }
}

impl FromStr for StratumId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

/// One stratum with its exact integer data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub id: StratumId,
    /// Complex dimension of the open stratum.
    pub complex_dim: u32,
    /// Compactly supported Euler characteristic of the open stratum.
    pub chi_c: i64,
}

/// A finite poset of strata, immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratPoset {
    strata: Vec<Stratum>,
    index: BTreeMap<StratumId, usize>,
    /// Row-major `n × n` closure relation: `leq[w * n + v]` means `w ≤ v`.
    leq: Vec<bool>,
    dense: Option<usize>,
}

/// Shared handle used by everything downstream; posets are plain data and
/// safe to share across threads.
pub type Space = Arc<StratPoset>;

impl StratPoset {
    /// Builds a poset from raw stratum data and covering pairs
    /// `(lower, upper)`. The relation stored is the reflexive-transitive
    /// closure of the input pairs. When no dense stratum is supplied, a
    /// unique maximum is detected automatically if one exists.
    pub fn build(
        strata: Vec<(StratumId, u32, i64)>,
        order_pairs: &[(StratumId, StratumId)],
        dense: Option<StratumId>,
    ) -> Result<StratPoset> {
        let mut strata: Vec<Stratum> = strata
            .into_iter()
            .map(|(id, complex_dim, chi_c)| Stratum {
                id,
                complex_dim,
                chi_c,
            })
            .collect();
        // Canonical linear extension: (complex_dim, name).
        strata.sort_by(|a, b| (a.complex_dim, &a.id).cmp(&(b.complex_dim, &b.id)));

        let mut index = BTreeMap::new();
        for (pos, s) in strata.iter().enumerate() {
            if index.insert(s.id.clone(), pos).is_some() {
                return Err(Error::DuplicateStratum(s.id.clone()));
            }
        }

        let n = strata.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (lo, hi) in order_pairs {
            let lo = *index
                .get(lo)
                .ok_or_else(|| Error::UnknownStratum(lo.clone()))?;
            let hi = *index
                .get(hi)
                .ok_or_else(|| Error::UnknownStratum(hi.clone()))?;
            leq[lo * n + hi] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Cycle(strata[i].id.clone(), strata[j].id.clone()));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && strata[i].complex_dim >= strata[j].complex_dim {
                    return Err(Error::DimOrder {
                        lower: strata[i].id.clone(),
                        lower_dim: strata[i].complex_dim,
                        upper: strata[j].id.clone(),
                        upper_dim: strata[j].complex_dim,
                    });
                }
            }
        }

        let is_max = |m: usize| (0..n).all(|v| leq[v * n + m]);
        let dense = match dense {
            Some(id) => {
                let m = *index
                    .get(&id)
                    .ok_or_else(|| Error::UnknownStratum(id.clone()))?;
                if !is_max(m) {
                    return Err(Error::NotDense(id));
                }
                Some(m)
            }
            None => (0..n).find(|&m| is_max(m)),
        };

        Ok(StratPoset {
            strata,
            index,
            leq,
            dense,
        })
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// Strata in the canonical linear extension.
    pub fn strata(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter()
    }

    pub fn stratum_at(&self, pos: usize) -> &Stratum {
        &self.strata[pos]
    }

    pub fn index_of(&self, id: &StratumId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownStratum(id.clone()))
    }

    pub fn contains(&self, id: &StratumId) -> bool {
        self.index.contains_key(id)
    }

    pub fn leq_idx(&self, lo: usize, hi: usize) -> bool {
        self.leq[lo * self.strata.len() + hi]
    }

    pub fn lt_idx(&self, lo: usize, hi: usize) -> bool {
        lo != hi && self.leq_idx(lo, hi)
    }

    /// `a ≤ b` in the closure order.
    pub fn leq(&self, a: &StratumId, b: &StratumId) -> Result<bool> {
        Ok(self.leq_idx(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn dense_index(&self) -> Option<usize> {
        self.dense
    }

    pub fn dense_stratum(&self) -> Option<&Stratum> {
        self.dense.map(|i| &self.strata[i])
    }

    pub fn require_dense(&self) -> Result<usize> {
        self.dense.ok_or(Error::NoDenseStratum)
    }

    /// `{ W : W ≤ V }`, the strata of the closure `V̄`.
    pub fn down_set(&self, v: &StratumId) -> Result<BTreeSet<StratumId>> {
        let vi = self.index_of(v)?;
        Ok(self
            .down_set_indices(vi)
            .into_iter()
            .map(|w| self.strata[w].id.clone())
            .collect())
    }

    /// Positions of `{ W : W ≤ V }` in canonical order.
    pub fn down_set_indices(&self, v: usize) -> Vec<usize> {
        (0..self.strata.len())
            .filter(|&w| self.leq_idx(w, v))
            .collect()
    }

    /// χ(V̄) = Σ_{W ≤ V} chi_c(W).
    pub fn closure_chi(&self, v: usize) -> Result<i64> {
        let mut acc = 0i64;
        for w in self.down_set_indices(v) {
            acc = crate::error::iadd(acc, self.strata[w].chi_c)?;
        }
        Ok(acc)
    }

    /// The induced sub-poset on a subset of strata. Intended for down-closed
    /// subsets, where it models a closure `V̄` with its induced
    /// stratification; any subset yields a valid poset.
    pub fn restriction(&self, keep: &BTreeSet<StratumId>) -> Result<StratPoset> {
        let mut data = Vec::new();
        let mut pairs = Vec::new();
        let mut positions = Vec::new();
        for id in keep {
            let i = self.index_of(id)?;
            positions.push(i);
            let s = &self.strata[i];
            data.push((s.id.clone(), s.complex_dim, s.chi_c));
        }
        for &a in &positions {
            for &b in &positions {
                if self.lt_idx(a, b) {
                    pairs.push((self.strata[a].id.clone(), self.strata[b].id.clone()));
                }
            }
        }
        StratPoset::build(data, &pairs, None)
    }
}

/// Structural equality of two space handles, with a pointer fast path.
pub fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sid(s: &str) -> StratumId {
        StratumId::new(s).unwrap()
    }

    fn chain2() -> StratPoset {
        StratPoset::build(
            vec![(sid("w"), 0, 1), (sid("s"), 1, 0)],
            &[(sid("w"), sid("s"))],
            None,
        )
        .unwrap()
    }

    #[test]
    fn singleton_is_its_own_dense_stratum() {
        let p = StratPoset::build(vec![(sid("s"), 2, 3)], &[], None).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.dense_stratum().unwrap().id, sid("s"));
        assert_eq!(p.down_set(&sid("s")).unwrap(), [sid("s")].into());
    }

    #[test]
    fn two_chain_detects_dense() {
        let p = chain2();
        assert_eq!(p.dense_stratum().unwrap().id, sid("s"));
        assert!(p.leq(&sid("w"), &sid("s")).unwrap());
        assert!(!p.leq(&sid("s"), &sid("w")).unwrap());
        assert_eq!(p.down_set(&sid("s")).unwrap(), [sid("w"), sid("s")].into());
    }

    #[test]
    fn cycle_is_rejected() {
        let err = StratPoset::build(
            vec![(sid("a"), 0, 1), (sid("b"), 1, 1)],
            &[(sid("a"), sid("b")), (sid("b"), sid("a"))],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Cycle(..)));
    }

    #[test]
    fn dimension_must_grow_along_the_order() {
        let err = StratPoset::build(
            vec![(sid("a"), 1, 1), (sid("b"), 1, 1)],
            &[(sid("a"), sid("b"))],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimOrder { .. }));
    }

    #[test]
    fn duplicate_and_unknown_strata() {
        let err =
            StratPoset::build(vec![(sid("a"), 0, 1), (sid("a"), 1, 1)], &[], None).unwrap_err();
        assert_eq!(err, Error::DuplicateStratum(sid("a")));

        let err = StratPoset::build(
            vec![(sid("a"), 0, 1)],
            &[(sid("a"), sid("zz"))],
            None,
        )
        .unwrap_err();
        assert_eq!(err, Error::UnknownStratum(sid("zz")));
    }

    #[test]
    fn declared_dense_must_be_a_maximum() {
        let err = StratPoset::build(
            vec![(sid("a"), 0, 1), (sid("b"), 1, 1)],
            &[],
            Some(sid("b")),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotDense(sid("b")));
    }

    #[test]
    fn transitive_closure_and_diamond_down_set() {
        // w < {a, b} < s
        let p = StratPoset::build(
            vec![
                (sid("w"), 0, 1),
                (sid("a"), 1, 0),
                (sid("b"), 1, -2),
                (sid("s"), 2, 5),
            ],
            &[
                (sid("w"), sid("a")),
                (sid("w"), sid("b")),
                (sid("a"), sid("s")),
                (sid("b"), sid("s")),
            ],
            None,
        )
        .unwrap();
        assert!(p.leq(&sid("w"), &sid("s")).unwrap());
        assert_eq!(p.down_set(&sid("a")).unwrap(), [sid("w"), sid("a")].into());
        assert_eq!(p.dense_stratum().unwrap().id, sid("s"));
        assert!(!p.leq(&sid("a"), &sid("b")).unwrap());
    }

    #[test]
    fn no_dense_when_two_maximal_strata() {
        let p = StratPoset::build(
            vec![(sid("w"), 0, 1), (sid("a"), 1, 1), (sid("b"), 1, 1)],
            &[(sid("w"), sid("a")), (sid("w"), sid("b"))],
            None,
        )
        .unwrap();
        assert!(p.dense_stratum().is_none());
        assert_eq!(p.require_dense().unwrap_err(), Error::NoDenseStratum);
    }

    #[test]
    fn restriction_to_a_down_set_keeps_the_induced_order() {
        let p = StratPoset::build(
            vec![
                (sid("w"), 0, 1),
                (sid("a"), 1, 0),
                (sid("b"), 1, -2),
                (sid("s"), 2, 5),
            ],
            &[
                (sid("w"), sid("a")),
                (sid("w"), sid("b")),
                (sid("a"), sid("s")),
                (sid("b"), sid("s")),
            ],
            None,
        )
        .unwrap();
        let sub = p.restriction(&p.down_set(&sid("a")).unwrap()).unwrap();
        assert_eq!(sub.len(), 2);
        assert!(sub.leq(&sid("w"), &sid("a")).unwrap());
        assert_eq!(sub.dense_stratum().unwrap().id, sid("a"));
    }

    #[test]
    fn empty_id_rejected() {
        assert_eq!(StratumId::new("").unwrap_err(), Error::EmptyName);
    }
}
