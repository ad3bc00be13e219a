//! Exact sparse linear algebra over the rationals: sparse vectors, incremental
//! echelon bases (rank and span membership) and kernels.

use std::collections::HashMap;

use num::{One, Zero};

use crate::rational::Q;

/// Sparse vector with strictly increasing keys and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(u64, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: u64) -> Self {
        SparseVec { entries: vec![(key, Q::one())] }
    }

    /// Builds from arbitrary (key, value) pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(u64, Q)>) -> Self {
        pairs.sort_by_key(|(k, _)| *k);
        let mut entries: Vec<(u64, Q)> = Vec::with_capacity(pairs.len());
        for (k, v) in pairs {
            match entries.last_mut() {
                Some((lk, lv)) if *lk == k => *lv += v,
                _ => entries.push((k, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn entries(&self) -> &[(u64, Q)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u64, Q)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: u64) -> Option<&Q> {
        self.entries
            .binary_search_by_key(&key, |(k, _)| *k)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn lead(&self) -> Option<&(u64, Q)> {
        self.entries.first()
    }

    pub fn scale(&mut self, alpha: &Q) {
        if alpha.is_zero() {
            self.entries.clear();
        } else {
            for (_, v) in &mut self.entries {
                *v *= alpha;
            }
        }
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: &Q, other: &SparseVec) {
        if alpha.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ka, _)), Some((kb, _))) if ka < kb => out.push(a.next().unwrap()),
                (Some((ka, _)), Some((kb, _))) if ka > kb => {
                    let (k, v) = b.next().unwrap();
                    out.push((*k, alpha * v));
                }
                (Some(_), Some(_)) => {
                    let (k, va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    let s = va + alpha * vb;
                    if !s.is_zero() {
                        out.push((k, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (k, v) = b.next().unwrap();
                    out.push((*k, alpha * v));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    /// Scales so that the leading coefficient is one.
    pub fn normalize_lead(&mut self) {
        if let Some((_, lead)) = self.entries.first() {
            if !lead.is_one() {
                let inv = lead.recip();
                self.scale(&inv);
            }
        }
    }

    /// If `self = c · other` for a nonzero scalar `c`, returns `c`.
    pub fn ratio_to(&self, other: &SparseVec) -> Option<Q> {
        if self.len() != other.len() || self.is_zero() {
            return None;
        }
        let c = &self.entries[0].1 / &other.entries[0].1;
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|((ka, va), (kb, vb))| ka == kb && *va == &c * vb)
            .then_some(c)
    }
}

/// Incrementally maintained echelon basis. Each stored vector has leading
/// coefficient one and a leading key no other stored vector has.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    vectors: Vec<SparseVec>,
    pivots: HashMap<u64, usize>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    /// Residual of `v` after eliminating every pivot key.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        self.reduce_tracked(&mut v, |_, _| {});
        v
    }

    fn reduce_tracked(&self, v: &mut SparseVec, mut on_step: impl FnMut(&Q, usize)) {
        let mut cursor: Option<u64> = None;
        loop {
            let hit = v
                .entries
                .iter()
                .filter(|(k, _)| cursor.is_none_or(|c| *k > c))
                .find_map(|(k, c)| self.pivots.get(k).map(|&i| (*k, c.clone(), i)));
            let Some((key, coeff, idx)) = hit else { break };
            let alpha = -coeff;
            on_step(&alpha, idx);
            v.axpy(&alpha, &self.vectors[idx]);
            cursor = Some(key);
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Adds `v` if independent; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        r.normalize_lead();
        let key = r.lead().unwrap().0;
        self.pivots.insert(key, self.vectors.len());
        self.vectors.push(r);
        true
    }
}

/// Basis of `{ c : Σ_j c_j columns[j] = 0 }`, as sparse vectors over the
/// column indices, in reduced row echelon form (leading coefficient one).
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut images = EchelonBasis::new();
    let mut combos: Vec<SparseVec> = Vec::new();
    let mut null = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut img = col.clone();
        let mut combo = SparseVec::unit(j as u64);
        let mut steps = Vec::new();
        images.reduce_tracked(&mut img, |alpha, idx| steps.push((alpha.clone(), idx)));
        for (alpha, idx) in &steps {
            combo.axpy(alpha, &combos[*idx]);
        }
        if img.is_zero() {
            null.push(combo);
        } else {
            let inv = img.lead().unwrap().1.recip();
            img.scale(&inv);
            combo.scale(&inv);
            let key = img.lead().unwrap().0;
            images.pivots.insert(key, images.vectors.len());
            images.vectors.push(img);
            combos.push(combo);
        }
    }
    rref(null)
}

/// Reduced row echelon form of the span of `rows`.
pub fn rref(rows: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert(r);
    }
    let mut vs = basis.vectors;
    vs.sort_by_key(|v| v.lead().unwrap().0);
    for i in (0..vs.len()).rev() {
        let key = vs[i].lead().unwrap().0;
        let pivot_row = vs[i].clone();
        for v in vs.iter_mut().take(i) {
            if let Some(c) = v.get(key).cloned() {
                v.axpy(&-c, &pivot_row);
            }
        }
    }
    vs
}

/// Exact sparse matrix stored by columns; row keys are `u64` indices below `nrows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Self {
        SparseMatrix { nrows, cols }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.cols[j].get(i as u64).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, c)| c.entries().iter().all(|(i, _)| *i as usize == j))
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.nrows, "inner dimensions differ");
        let cols = rhs
            .cols
            .iter()
            .map(|rc| {
                let mut out = SparseVec::new();
                for (k, v) in rc.entries() {
                    out.axpy(v, &self.cols[*k as usize]);
                }
                out
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols()), (rhs.nrows, rhs.ncols()));
        let minus_one = -Q::one();
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.axpy(&minus_one, b);
                c
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn commutator(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.entries() {
                out[*i as usize][j] = v.clone();
            }
        }
        out
    }
}
