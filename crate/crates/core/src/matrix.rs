//! Unipotent triangular matrices over a stratification poset.
//!
//! Entries `a_{W,V}` are nonzero only for `W ≤ V`, with all diagonal entries
//! equal to 1, so the matrix is invertible over the integers. The inverse is
//! computed by the standard inductive recursion of incidence algebras:
//!
//! ```text
//! a'_{V,V} = 1,      a'_{W,V} = − Σ_{W ≤ S < V} a'_{W,S} · a_{S,V}
//! ```
//!
//! All arithmetic is checked `i64`; overflow surfaces as an error.

use crate::error::{iadd, imul, ineg, Error, Result};
use crate::poset::{same_space, Space, StratumId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularMatrix {
    space: Space,
    /// Row-major `n × n` in the canonical stratum order.
    entries: Vec<i64>,
}

impl TriangularMatrix {
    pub fn identity(space: &Space) -> Self {
        let n = space.len();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        TriangularMatrix {
            space: space.clone(),
            entries,
        }
    }

    /// The closure-order matrix: `a_{W,V} = 1` for `W ≤ V`, else 0. This is
    /// the transition matrix from the closed-indicator basis to the
    /// open-indicator basis.
    pub fn closure(space: &Space) -> Self {
        let n = space.len();
        let mut entries = vec![0; n * n];
        for w in 0..n {
            for v in 0..n {
                if space.leq_idx(w, v) {
                    entries[w * n + v] = 1;
                }
            }
        }
        TriangularMatrix {
            space: space.clone(),
            entries,
        }
    }

    /// Builds a unipotent matrix from off-diagonal entries `(lower, upper,
    /// value)`. The diagonal is implied; an explicit diagonal entry must be
    /// 1 and entries outside the order support are rejected.
    pub fn from_entries(space: &Space, entries: &[(StratumId, StratumId, i64)]) -> Result<Self> {
        let mut m = Self::identity(space);
        let n = space.len();
        for (lo, hi, value) in entries {
            let w = space.index_of(lo)?;
            let v = space.index_of(hi)?;
            if w == v {
                if *value != 1 {
                    return Err(Error::DiagonalNotOne(lo.clone()));
                }
                continue;
            }
            if !space.leq_idx(w, v) {
                if *value != 0 {
                    return Err(Error::EntryOffSupport {
                        lower: lo.clone(),
                        upper: hi.clone(),
                    });
                }
                continue;
            }
            m.entries[w * n + v] = *value;
        }
        Ok(m)
    }

    pub(crate) fn from_fn(space: &Space, f: impl Fn(usize, usize) -> i64) -> Self {
        let n = space.len();
        let mut m = Self::identity(space);
        for w in 0..n {
            for v in 0..n {
                if w != v && space.lt_idx(w, v) {
                    m.entries[w * n + v] = f(w, v);
                }
            }
        }
        m
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn get_idx(&self, w: usize, v: usize) -> i64 {
        self.entries[w * self.space.len() + v]
    }

    pub fn get(&self, lower: &StratumId, upper: &StratumId) -> Result<i64> {
        Ok(self.get_idx(self.space.index_of(lower)?, self.space.index_of(upper)?))
    }

    /// Row of the matrix in canonical column order.
    pub fn row(&self, w: usize) -> &[i64] {
        let n = self.space.len();
        &self.entries[w * n..(w + 1) * n]
    }

    /// Column `v` in canonical row order.
    pub fn column(&self, v: usize) -> Vec<i64> {
        (0..self.space.len()).map(|w| self.get_idx(w, v)).collect()
    }

    /// Exact inverse via the inductive recursion; again unipotent
    /// upper-triangular with respect to the order.
    pub fn inverse(&self) -> Result<TriangularMatrix> {
        let n = self.space.len();
        let mut inv = Self::identity(&self.space);
        // Columns in canonical order: column v only needs columns s < v.
        for v in 0..n {
            for w in (0..v).rev() {
                if !self.space.lt_idx(w, v) {
                    continue;
                }
                let mut acc = 0i64;
                for s in w..v {
                    if self.space.leq_idx(w, s) && self.space.lt_idx(s, v) {
                        acc = iadd(acc, imul(inv.get_idx(w, s), self.get_idx(s, v))?)?;
                    }
                }
                inv.entries[w * n + v] = ineg(acc)?;
            }
        }
        Ok(inv)
    }

    pub fn mul(&self, other: &TriangularMatrix) -> Result<TriangularMatrix> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let n = self.space.len();
        let mut out = Self::identity(&self.space);
        for w in 0..n {
            for v in 0..n {
                let mut acc = 0i64;
                for s in 0..n {
                    let a = self.get_idx(w, s);
                    let b = other.get_idx(s, v);
                    if a != 0 && b != 0 {
                        acc = iadd(acc, imul(a, b)?)?;
                    }
                }
                out.entries[w * n + v] = acc;
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `(M x)_W = Σ_V m_{W,V} x_V` over canonical
    /// coordinates.
    pub fn apply(&self, values: &[i64]) -> Result<Vec<i64>> {
        let n = self.space.len();
        assert_eq!(values.len(), n, "coordinate vector length mismatch");
        let mut out = vec![0i64; n];
        for w in 0..n {
            let mut acc = 0i64;
            for v in 0..n {
                let a = self.get_idx(w, v);
                if a != 0 && values[v] != 0 {
                    acc = iadd(acc, imul(a, values[v])?)?;
                }
            }
            out[w] = acc;
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.space.len();
        (0..n).all(|w| (0..n).all(|v| self.get_idx(w, v) == i64::from(w == v)))
    }
}
