//! Sparse exact linear algebra over `Q`.
//!
//! Subspaces are kept in reduced row echelon form, which is canonical: the basis
//! produced for a given subspace does not depend on the order vectors were inserted.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_q, Q};

/// A sparse vector; absent coordinates are zero and zeros are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct SparseVec(BTreeMap<usize, Q>);

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(k, v)| (k, fmt_q(v)))).finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.0.insert(i, Q::one());
        v
    }

    pub fn from_dense(xs: &[Q]) -> Self {
        let mut v = Self::new();
        for (i, x) in xs.iter().enumerate() {
            v.set(i, x.clone());
        }
        v
    }

    pub fn to_dense(&self, len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (&i, x) in &self.0 {
            out[i] = x.clone();
        }
        out
    }

    pub fn get(&self, i: usize) -> Q {
        self.0.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, i: usize, x: Q) {
        if x.is_zero() {
            self.0.remove(&i);
        } else {
            self.0.insert(i, x);
        }
    }

    /// `self[i] += x`
    pub fn add_at(&mut self, i: usize, x: &Q) {
        if x.is_zero() {
            return;
        }
        match self.0.get_mut(&i) {
            Some(y) => {
                *y += x;
                if y.is_zero() {
                    self.0.remove(&i);
                }
            }
            None => {
                self.0.insert(i, x.clone());
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Q, other: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.0 {
            self.add_at(i, &(c * x));
        }
    }

    pub fn scaled(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(&i, x)| (i, x * c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.0.iter().map(|(&i, x)| (i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.0.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

impl FromIterator<(usize, Q)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Q)>>(iter: T) -> Self {
        let mut v = SparseVec::new();
        for (i, x) in iter {
            v.add_at(i, &x);
        }
        v
    }
}

/// Row-major sparse matrix. Columns index the source space, rows the target.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} ", self.nrows, self.ncols)?;
        f.debug_list().entries(self.to_dense().iter().map(|r| r.iter().map(fmt_q).collect::<Vec<_>>())).finish()
    }
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![SparseVec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Q::one())
    }

    pub fn scalar(n: usize, c: &Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, c.clone());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self { nrows, ncols, rows: rows.iter().map(|r| SparseVec::from_dense(r)).collect() }
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter() {
                assert!(i < nrows, "column entry out of range");
                m.rows[i].set(j, x.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        assert!(i < self.nrows && j < self.ncols);
        self.rows[i].set(j, x);
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: &Q) {
        assert!(i < self.nrows && j < self.ncols);
        self.rows[i].add_at(j, x);
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> SparseVec {
        self.rows.iter().enumerate().map(|(i, r)| (i, r.get(j))).collect()
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, j, x)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVec::is_zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for (i, j, x) in self.entries() {
            t.rows[j].set(i, x.clone());
        }
        t
    }

    /// `self * v`
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut acc = Q::zero();
            for (j, x) in v.iter() {
                let a = r.get(j);
                if !a.is_zero() {
                    acc += a * x;
                }
            }
            out.set(i, acc);
        }
        out
    }

    /// `self * other`
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = Self::zeros(self.nrows, other.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r.iter() {
                out.rows[i].add_scaled(a, &other.rows[k]);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&Q::one(), other)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&-Q::one(), other)
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &Q, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "dimension mismatch in sum");
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            r.add_scaled(c, o);
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> SparseMatrix {
        Self { nrows: self.nrows, ncols: self.ncols, rows: self.rows.iter().map(|r| r.scaled(c)).collect() }
    }

    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.nrows, self.ncols);
        let mut p = self.clone();
        for _ in 0..self.nrows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.ncols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of `{x : self * x = 0}` in canonical (reduced echelon) form.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut e = Echelon::new(self.ncols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.null_space()
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &SparseMatrix, b: &SparseMatrix, c: &SparseMatrix, d: &SparseMatrix) -> SparseMatrix {
        assert_eq!(a.nrows, b.nrows);
        assert_eq!(c.nrows, d.nrows);
        assert_eq!(a.ncols, c.ncols);
        assert_eq!(b.ncols, d.ncols);
        let mut out = Self::zeros(a.nrows + c.nrows, a.ncols + b.ncols);
        let place = |out: &mut SparseMatrix, m: &SparseMatrix, r0: usize, c0: usize| {
            for (i, j, x) in m.entries() {
                out.rows[r0 + i].set(c0 + j, x.clone());
            }
        };
        place(&mut out, a, 0, 0);
        place(&mut out, b, 0, a.ncols);
        place(&mut out, c, a.nrows, 0);
        place(&mut out, d, a.nrows, a.ncols);
        out
    }
}

/// A subspace of `Q^dim` held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    dim: usize,
    /// pivot column -> basis row (pivot entry 1, zero in all other pivot columns)
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: BTreeMap::new() }
    }

    pub fn spanned_by<'a>(dim: usize, vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut e = Self::new(dim);
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Basis vectors ordered by pivot column.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Q)> =
            v.iter().filter(|(c, _)| self.rows.contains_key(c)).map(|(c, x)| (c, x.clone())).collect();
        let mut out = v.clone();
        for (c, x) in hits {
            out.add_scaled(&-x, &self.rows[&c]);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(&v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let r = r.scaled(&(Q::one() / lead));
        for row in self.rows.values_mut() {
            let x = row.get(p);
            if !x.is_zero() {
                row.add_scaled(&-x, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    /// Coordinates of `v` (assumed in the span) against `basis()`.
    pub fn coordinates(&self, v: &SparseVec) -> Vec<Q> {
        self.rows.keys().map(|&p| v.get(p)).collect()
    }

    pub fn contains_all(&self, other: &Echelon) -> bool {
        other.basis().all(|v| self.contains(v))
    }

    /// Non-pivot columns, in increasing order: a canonical complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|c| !self.rows.contains_key(c)).collect()
    }

    /// Treating the basis rows as equations, returns a basis of their common solutions.
    pub fn null_space(&self) -> Vec<SparseVec> {
        self.free_columns()
            .into_iter()
            .map(|fc| {
                let mut v = SparseVec::unit(fc);
                for (&p, row) in &self.rows {
                    let x = row.get(fc);
                    if !x.is_zero() {
                        v.set(p, -x);
                    }
                }
                v
            })
            .collect()
    }
}

/// Row echelon form without back substitution, for building large systems:
/// each insertion only touches the new row. Convert with [`RowEchelon::into_reduced`].
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl RowEchelon {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates pivots from the front of `v` until its leading column is free.
    fn forward(&self, mut v: SparseVec) -> SparseVec {
        while let Some((c, x)) = v.leading().map(|(c, x)| (c, x.clone())) {
            match self.rows.get(&c) {
                Some(row) => v.add_scaled(&-x, row),
                None => break,
            }
        }
        v
    }

    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.forward(v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let r = r.scaled(&(Q::one() / lead));
        self.rows.insert(p, r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.forward(v.clone()).is_zero()
    }

    pub fn into_reduced(self) -> Echelon {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (p, mut row) in self.rows.into_iter().rev() {
            let hits: Vec<(usize, Q)> =
                row.iter().filter(|(c, _)| *c != p && done.contains_key(c)).map(|(c, x)| (c, x.clone())).collect();
            for (c, x) in hits {
                row.add_scaled(&-x, &done[&c]);
            }
            done.insert(p, row);
        }
        Echelon { dim: self.dim, rows: done }
    }
}
