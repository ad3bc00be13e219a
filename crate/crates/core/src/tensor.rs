//! Tensors on `C^d`, Young symmetrizers and the `gl(d)`/`O(d)` actions on them.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::diagram::GLDiagram;
use crate::dual_pairs::BilinearForm;
use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Largest `d^n` that a tensor may index.
pub const TENSOR_GUARD: u64 = 1_000_000;

/// A (sparse) function on index tuples `(p₁,…,pₙ)`, `1 ≤ pᵢ ≤ d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    n: usize,
    d: usize,
    values: BTreeMap<Vec<u8>, Q>,
}

fn check_guard(n: usize, d: usize) -> Result<()> {
    let fits = (d as u64)
        .checked_pow(n as u32)
        .is_some_and(|v| v <= TENSOR_GUARD);
    if !fits || d > u8::MAX as usize {
        return Err(Error::TensorGuard { n, d });
    }
    Ok(())
}

impl Tensor {
    pub fn zero(n: usize, d: usize) -> Result<Self> {
        check_guard(n, d)?;
        Ok(Tensor { n, d, values: BTreeMap::new() })
    }

    pub fn unit(d: usize, tuple: &[usize]) -> Result<Self> {
        let mut t = Self::zero(tuple.len(), d)?;
        if tuple.iter().any(|&p| p == 0 || p > d) {
            return Err(Error::ShapeMismatch(format!("tuple {tuple:?} outside 1..={d}")));
        }
        t.values.insert(tuple.iter().map(|&p| p as u8).collect(), Q::one());
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, tuple: &[usize]) -> Q {
        let key: Vec<u8> = tuple.iter().map(|&p| p as u8).collect();
        self.values.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (Vec<usize>, &Q)> {
        self.values.iter().map(|(k, v)| (k.iter().map(|&p| p as usize).collect(), v))
    }

    fn add(&mut self, key: Vec<u8>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.values.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.values.remove(&key);
        }
    }

    pub fn scaled(&self, c: &Q) -> Tensor {
        let mut out = Tensor { n: self.n, d: self.d, values: BTreeMap::new() };
        for (k, v) in &self.values {
            out.add(k.clone(), v * c);
        }
        out
    }

    pub fn minus(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.values {
            out.add(k.clone(), -v);
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Tensor) -> Result<()> {
        if (self.n, self.d) != (other.n, other.d) {
            return Err(Error::DimensionMismatch);
        }
        Ok(())
    }

    /// `c` with `self = c·other`, if any.
    pub fn ratio_to(&self, other: &Tensor) -> Option<Q> {
        let (k, v) = other.values.iter().next()?;
        let c = self.values.get(k)? / v;
        (self.values.len() == other.values.len()
            && other.values.iter().all(|(k, v)| self.values.get(k) == Some(&(v * &c))))
        .then_some(c)
    }

    /// `(πχ)(p) = χ(p∘π)`, with `π` a 0-based permutation of the slots.
    pub fn permuted(&self, pi: &[usize]) -> Tensor {
        let mut out = Tensor { n: self.n, d: self.d, values: BTreeMap::new() };
        for (t, c) in &self.values {
            let mut p = vec![0u8; self.n];
            for (i, &x) in t.iter().enumerate() {
                p[pi[i]] = x;
            }
            out.add(p, c.clone());
        }
        out
    }
}

/// The reading-order tableau of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    shape: GLDiagram,
    cells: Vec<(usize, usize)>,
}

impl Tableau {
    pub fn reading_order(shape: &GLDiagram) -> Self {
        Tableau { shape: shape.clone(), cells: shape.reading_order() }
    }

    pub fn shape(&self) -> &GLDiagram {
        &self.shape
    }

    /// `(row, column)` of number `i + 1`.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    fn blocks(&self, by_row: bool) -> Vec<Vec<usize>> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &(r, c)) in self.cells.iter().enumerate() {
            map.entry(if by_row { r } else { c }).or_default().push(i);
        }
        map.into_values().collect()
    }
}

/// Element of the group algebra `Q[S_n]`; product follows `(π∘σ)(i) = π(σ(i))`.
pub type GroupAlgebra = BTreeMap<Vec<usize>, Q>;

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn algebra_mul(x: &GroupAlgebra, y: &GroupAlgebra) -> GroupAlgebra {
    let mut out = GroupAlgebra::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let e = out.entry(compose(a, b)).or_insert_with(Q::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn permutations(items: &[usize]) -> Vec<(Vec<usize>, bool)> {
    if items.len() <= 1 {
        return vec![(items.to_vec(), false)];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let rest: Vec<usize> = items.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        for (mut tail, odd) in permutations(&rest) {
            tail.insert(0, first);
            out.push((tail, odd ^ (i % 2 == 1)));
        }
    }
    out
}

/// All permutations fixing every block setwise, with their parity.
fn block_group(blocks: &[Vec<usize>], n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut group = vec![((0..n).collect::<Vec<usize>>(), false)];
    for block in blocks {
        let mut next = Vec::new();
        for (g, odd) in &group {
            for (images, o2) in permutations(block) {
                let mut h = g.clone();
                for (src, dst) in block.iter().zip(&images) {
                    h[*src] = *dst;
                }
                next.push((h, odd ^ o2));
            }
        }
        group = next;
    }
    group
}

/// `Σ_{s,t} (sgn s) s t` over column permutations `s` and row permutations `t`.
pub fn young_element(lambda: &GLDiagram) -> GroupAlgebra {
    let tab = Tableau::reading_order(lambda);
    let n = lambda.size();
    let rows = block_group(&tab.blocks(true), n);
    let cols = block_group(&tab.blocks(false), n);
    let mut out = GroupAlgebra::new();
    for (s, odd) in &cols {
        for (t, _) in &rows {
            let e = out.entry(compose(s, t)).or_insert_with(Q::zero);
            *e += q(if *odd { -1 } else { 1 });
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The idempotent `Y_λ` and its normalization `c_λ`, found from `Y′² = μY′`.
pub fn young_symmetrizer(lambda: &GLDiagram) -> Result<(GroupAlgebra, Q)> {
    let y = young_element(lambda);
    let y2 = algebra_mul(&y, &y);
    let (perm, c1) = y.iter().next().ok_or_else(|| Error::Internal("empty Young element".into()))?;
    let mu = y2.get(perm).cloned().unwrap_or_else(Q::zero) / c1;
    if mu.is_zero() {
        return Err(Error::Internal(format!("Young element of {lambda} is nilpotent")));
    }
    let c = mu.recip();
    let normalized = y.into_iter().map(|(p, v)| (p, v * &c)).collect();
    Ok((normalized, c))
}

pub fn apply_algebra(x: &GroupAlgebra, t: &Tensor) -> Tensor {
    let mut out = Tensor { n: t.n, d: t.d, values: BTreeMap::new() };
    for (pi, c) in x {
        for (k, v) in t.permuted(pi).values {
            out.add(k, v * c);
        }
    }
    out
}

pub fn young_symmetrize(lambda: &GLDiagram, t: &Tensor) -> Result<Tensor> {
    if t.n != lambda.size() {
        return Err(Error::ShapeMismatch(format!("rank {} tensor, {} cells", t.n, lambda.size())));
    }
    let (y, _) = young_symmetrizer(lambda)?;
    Ok(apply_algebra(&y, t))
}

/// `χ_λ = Π δ_{pᵢ ρ(i)}`, zero when `λ` is deeper than `d`.
pub fn chi_lambda(lambda: &GLDiagram, d: usize) -> Result<Tensor> {
    let rows: Vec<usize> = Tableau::reading_order(lambda).cells().iter().map(|&(r, _)| r).collect();
    chi_rows(&rows, d)
}

/// Unit tensor at the given row labels, zero if any label exceeds `d`.
pub fn chi_rows(rows: &[usize], d: usize) -> Result<Tensor> {
    if rows.iter().any(|&r| r > d) {
        return Tensor::zero(rows.len(), d);
    }
    Tensor::unit(d, rows)
}

/// `χ^λ_hw = Y_λ χ_λ`.
pub fn chi_hw(lambda: &GLDiagram, d: usize) -> Result<Tensor> {
    young_symmetrize(lambda, &chi_lambda(lambda, d)?)
}

fn check_matrix(x: &[Vec<Q>], d: usize) -> Result<()> {
    if x.len() != d || x.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}

/// Derivation action `(xχ)(p) = Σᵢ Σ_q x_{pᵢq} χ(…q…)`.
pub fn gl_act(x: &[Vec<Q>], t: &Tensor) -> Result<Tensor> {
    check_matrix(x, t.d)?;
    let mut out = Tensor { n: t.n, d: t.d, values: BTreeMap::new() };
    for (key, c) in &t.values {
        for i in 0..t.n {
            let qi = key[i] as usize - 1;
            for (p, row) in x.iter().enumerate() {
                if !row[qi].is_zero() {
                    let mut k = key.clone();
                    k[i] = p as u8 + 1;
                    out.add(k, c * &row[qi]);
                }
            }
        }
    }
    Ok(out)
}

/// Slotwise action `(gχ)(p) = Σ_q Πᵢ g_{pᵢqᵢ} χ(q)`.
pub fn group_act(g: &[Vec<Q>], t: &Tensor) -> Result<Tensor> {
    check_matrix(g, t.d)?;
    let mut cur = t.clone();
    for i in 0..t.n {
        let mut next = Tensor { n: t.n, d: t.d, values: BTreeMap::new() };
        for (key, c) in &cur.values {
            let qi = key[i] as usize - 1;
            for (p, row) in g.iter().enumerate() {
                if !row[qi].is_zero() {
                    let mut k = key.clone();
                    k[i] = p as u8 + 1;
                    next.add(k, c * &row[qi]);
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `Σ_{pᵢ,pⱼ} ⟨b|pᵢpⱼ⟩ χ(…) = 0` for every pair of slots.
pub fn is_traceless(t: &Tensor, b: &BilinearForm) -> Result<bool> {
    if b.d() != t.d {
        return Err(Error::DimensionMismatch);
    }
    for i in 0..t.n {
        for j in 0..t.n {
            if i == j {
                continue;
            }
            let mut contraction: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
            for (key, c) in &t.values {
                let bij = b.get(key[i] as usize, key[j] as usize);
                if bij.is_zero() {
                    continue;
                }
                let rest: Vec<u8> =
                    key.iter().enumerate().filter(|&(s, _)| s != i && s != j).map(|(_, &v)| v).collect();
                *contraction.entry(rest).or_insert_with(Q::zero) += c * bij;
            }
            if contraction.values().any(|v| !v.is_zero()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn matrix_unit(p: usize, qq: usize, d: usize) -> Vec<Vec<Q>> {
    let mut m = vec![vec![Q::zero(); d]; d];
    m[p - 1][qq - 1] = Q::one();
    m
}

/// `ē_pq = e_pq − e_{q*p*}` for the symmetric anti-diagonal form.
pub fn ebar_matrix(p: usize, qq: usize, d: usize) -> Vec<Vec<Q>> {
    let mut m = matrix_unit(p, qq, d);
    m[d - qq][d - p] -= Q::one();
    m
}

/// The reflection: odd `d` negates the middle index, even `d` swaps `d/2` and `d/2+1`.
pub fn r_matrix(d: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    if d % 2 == 1 {
        m[d / 2][d / 2] = -Q::one();
    } else if d >= 2 {
        let (a, b) = (d / 2 - 1, d / 2);
        m[a][a] = Q::zero();
        m[b][b] = Q::zero();
        m[a][b] = Q::one();
        m[b][a] = Q::one();
    }
    m
}

pub fn r_act(t: &Tensor) -> Result<Tensor> {
    group_act(&r_matrix(t.d), t)
}

/// Row labels of `λ′`: the reading-order tableau of a self-complementary `λ`
/// with row `d/2` moved one step down.
pub fn row_moved_labels(lambda: &GLDiagram, d: usize) -> Option<Vec<usize>> {
    if d % 2 == 1 || 2 * lambda.column_depth(1) != d {
        return None;
    }
    Some(
        Tableau::reading_order(lambda)
            .cells()
            .iter()
            .map(|&(r, _)| if r == d / 2 { r + 1 } else { r })
            .collect(),
    )
}

/// `χ^{λ′}_hw = Y_λ χ_{λ′}` for a self-complementary `λ`.
pub fn chi_hw_row_moved(lambda: &GLDiagram, d: usize) -> Result<Option<Tensor>> {
    match row_moved_labels(lambda, d) {
        None => Ok(None),
        Some(rows) => Ok(Some(young_symmetrize(lambda, &chi_rows(&rows, d)?)?)),
    }
}
