//! Fermionic Fock space over `d·k` modes with exact quadratic operators.
//!
//! Mode `(p, τ)` (both 1-based) has the linear number `(p−1)·k + (τ−1)`. Every
//! fermionic sign is taken relative to that order: a basis state is the
//! product of its creation operators in increasing mode number applied to the
//! vacuum.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::rational::{self, Q};

/// Default cap on `d·k` for anything that enumerates the full basis.
pub const DEFAULT_MAX_DK: usize = 24;

/// Largest `d·k` for full-basis enumeration; `FOCK_MAX_DK` overrides the default.
pub fn max_dk() -> usize {
    std::env::var("FOCK_MAX_DK")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DK)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockSpace {
    d: usize,
    k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub p: usize,
    pub tau: usize,
}

impl ModeIndex {
    pub fn new(p: usize, tau: usize) -> Self {
        ModeIndex { p, tau }
    }
}

/// Linear mode number in canonical order.
pub type Mode = u8;

impl FockSpace {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(Error::EmptyDimension { d, k });
        }
        if d * k > 64 {
            return Err(Error::TooManyModes { modes: d * k });
        }
        Ok(FockSpace { d, k })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_modes(&self) -> usize {
        self.d * self.k
    }

    pub fn mode(&self, m: ModeIndex) -> Result<Mode> {
        if m.p == 0 || m.p > self.d || m.tau == 0 || m.tau > self.k {
            return Err(Error::IndexOutOfRange { p: m.p, tau: m.tau, d: self.d, k: self.k });
        }
        Ok(((m.p - 1) * self.k + (m.tau - 1)) as Mode)
    }

    /// Unchecked variant for indices already known to be in range.
    pub(crate) fn m(&self, p: usize, tau: usize) -> Mode {
        debug_assert!((1..=self.d).contains(&p) && (1..=self.k).contains(&tau));
        ((p - 1) * self.k + (tau - 1)) as Mode
    }

    pub fn mode_index(&self, m: Mode) -> ModeIndex {
        let m = m as usize;
        ModeIndex { p: m / self.k + 1, tau: m % self.k + 1 }
    }

    pub fn vacuum(&self) -> FockState {
        FockState { bits: 0, space: *self }
    }

    pub fn state(&self, bits: u64) -> FockState {
        debug_assert!(self.num_modes() == 64 || bits >> self.num_modes() == 0);
        FockState { bits, space: *self }
    }

    pub fn state_from_modes(&self, modes: &[ModeIndex]) -> Result<FockState> {
        let mut bits = 0u64;
        for m in modes {
            bits |= 1 << self.mode(*m)?;
        }
        Ok(self.state(bits))
    }

    /// Fails when `d·k` exceeds [`max_dk`].
    pub fn check_guard(&self) -> Result<()> {
        let max = max_dk();
        if self.num_modes() > max {
            return Err(Error::GuardExceeded { dk: self.num_modes(), max });
        }
        Ok(())
    }

    /// All `2^{dk}` occupation states in increasing bit-mask order.
    pub fn full_basis(&self) -> Result<Vec<FockState>> {
        self.check_guard()?;
        Ok((0..1u64 << self.num_modes()).map(|b| self.state(b)).collect())
    }

    pub fn dimension(&self) -> u64 {
        1u64 << self.num_modes()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    bits: u64,
    space: FockSpace,
}

impl FockState {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn is_occupied(&self, m: ModeIndex) -> Result<bool> {
        Ok(self.bits >> self.space.mode(m)? & 1 == 1)
    }

    pub fn particle_number(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn occupied(&self) -> Vec<ModeIndex> {
        (0..self.space.num_modes() as Mode)
            .filter(|m| self.bits >> m & 1 == 1)
            .map(|m| self.space.mode_index(m))
            .collect()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let modes: Vec<String> =
            self.occupied().iter().map(|m| format!("({},{})", m.p, m.tau)).collect();
        write!(f, "{{{}}}", modes.join(","))
    }
}

/// Result of a single creation or annihilation on a basis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedState {
    pub sign: i8,
    pub state: FockState,
}

fn parity_below(bits: u64, m: Mode) -> bool {
    (bits & ((1u64 << m) - 1)).count_ones() % 2 == 1
}

/// `a†_m` on a bit mask: `None` when occupied, else (`negative sign`, new mask).
pub(crate) fn create_bits(bits: u64, m: Mode) -> Option<(bool, u64)> {
    if bits >> m & 1 == 1 {
        None
    } else {
        Some((parity_below(bits, m), bits | 1 << m))
    }
}

pub(crate) fn annihilate_bits(bits: u64, m: Mode) -> Option<(bool, u64)> {
    if bits >> m & 1 == 0 {
        None
    } else {
        Some((parity_below(bits, m), bits & !(1 << m)))
    }
}

pub fn vacuum(d: usize, k: usize) -> Result<FockState> {
    Ok(FockSpace::new(d, k)?.vacuum())
}

pub fn apply_creation(s: &FockState, m: ModeIndex) -> Result<Option<SignedState>> {
    let mode = s.space.mode(m)?;
    Ok(create_bits(s.bits, mode).map(|(neg, bits)| SignedState {
        sign: if neg { -1 } else { 1 },
        state: s.space.state(bits),
    }))
}

pub fn apply_annihilation(s: &FockState, m: ModeIndex) -> Result<Option<SignedState>> {
    let mode = s.space.mode(m)?;
    Ok(annihilate_bits(s.bits, mode).map(|(neg, bits)| SignedState {
        sign: if neg { -1 } else { 1 },
        state: s.space.state(bits),
    }))
}

/// A single creation or annihilation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldOp {
    Create(Mode),
    Annihilate(Mode),
}

impl FieldOp {
    pub(crate) fn apply_bits(self, bits: u64) -> Option<(bool, u64)> {
        match self {
            FieldOp::Create(m) => create_bits(bits, m),
            FieldOp::Annihilate(m) => annihilate_bits(bits, m),
        }
    }

    /// `{self, other}`, always a number for fermions.
    pub fn anticommutator(self, other: FieldOp) -> Q {
        match (self, other) {
            (FieldOp::Create(i), FieldOp::Annihilate(j))
            | (FieldOp::Annihilate(i), FieldOp::Create(j))
                if i == j =>
            {
                Q::one()
            }
            _ => Q::zero(),
        }
    }
}

/// Linear combination of field operators.
pub type FieldLin = Vec<(Q, FieldOp)>;

/// Normal-ordered bilinear: creators left of annihilators, ascending modes in
/// the `CC` and `AA` cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    /// `a†_i a†_j`, `i < j`
    CC(Mode, Mode),
    /// `a†_i a_j`
    CA(Mode, Mode),
    /// `a_i a_j`, `i < j`
    AA(Mode, Mode),
}

impl Monomial {
    pub fn factors(self) -> (FieldOp, FieldOp) {
        use FieldOp::*;
        match self {
            Monomial::CC(i, j) => (Create(i), Create(j)),
            Monomial::CA(i, j) => (Create(i), Annihilate(j)),
            Monomial::AA(i, j) => (Annihilate(i), Annihilate(j)),
        }
    }

    fn key(self) -> u64 {
        let (t, i, j) = match self {
            Monomial::CC(i, j) => (1u64, i, j),
            Monomial::CA(i, j) => (2, i, j),
            Monomial::AA(i, j) => (3, i, j),
        };
        (t << 16) | ((i as u64) << 8) | j as u64
    }

    /// Applies right factor then left factor to a bit mask.
    pub(crate) fn apply_bits(self, bits: u64) -> Option<(bool, u64)> {
        let (x, y) = self.factors();
        let (n1, b1) = y.apply_bits(bits)?;
        let (n2, b2) = x.apply_bits(b1)?;
        Some((n1 ^ n2, b2))
    }
}

/// Exact operator `scalar + Σ c·monomial` in normal-ordered canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticOperator {
    space: FockSpace,
    terms: BTreeMap<Monomial, Q>,
    scalar: Q,
}

impl QuadraticOperator {
    pub fn zero(space: FockSpace) -> Self {
        QuadraticOperator { space, terms: BTreeMap::new(), scalar: Q::zero() }
    }

    pub fn scalar_op(space: FockSpace, c: Q) -> Self {
        QuadraticOperator { space, terms: BTreeMap::new(), scalar: c }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn scalar(&self) -> &Q {
        &self.scalar
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.scalar.is_zero()
    }

    pub fn coefficient(&self, m: Monomial) -> Q {
        self.terms.get(&m).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Adds `c · x·y`, normal ordering the product.
    pub fn add_product(&mut self, c: &Q, x: FieldOp, y: FieldOp) {
        use FieldOp::*;
        if c.is_zero() {
            return;
        }
        match (x, y) {
            (Create(i), Create(j)) | (Annihilate(i), Annihilate(j)) if i == j => {}
            (Create(i), Create(j)) if i < j => self.add_term(Monomial::CC(i, j), c.clone()),
            (Create(i), Create(j)) => self.add_term(Monomial::CC(j, i), -c),
            (Annihilate(i), Annihilate(j)) if i < j => {
                self.add_term(Monomial::AA(i, j), c.clone())
            }
            (Annihilate(i), Annihilate(j)) => self.add_term(Monomial::AA(j, i), -c),
            (Create(i), Annihilate(j)) => self.add_term(Monomial::CA(i, j), c.clone()),
            (Annihilate(i), Create(j)) => {
                if i == j {
                    self.scalar += c;
                }
                self.add_term(Monomial::CA(j, i), -c);
            }
        }
    }

    /// `c · x·y` for single field operators.
    pub fn product(space: FockSpace, x: FieldOp, y: FieldOp) -> Self {
        let mut out = Self::zero(space);
        out.add_product(&Q::one(), x, y);
        out
    }

    /// Normal-ordered product of two linear combinations of field operators.
    pub fn product_lin(space: FockSpace, xs: &FieldLin, ys: &FieldLin) -> Self {
        let mut out = Self::zero(space);
        for (cx, x) in xs {
            for (cy, y) in ys {
                out.add_product(&(cx * cy), *x, *y);
            }
        }
        out
    }

    pub fn from_monomial(space: FockSpace, m: Monomial, c: Q) -> Self {
        let mut out = Self::zero(space);
        out.add_term(m, c);
        out
    }

    /// `a†_m a_m`.
    pub fn number(space: FockSpace, m: Mode) -> Self {
        Self::from_monomial(space, Monomial::CA(m, m), Q::one())
    }

    /// `Σ_m a†_m a_m`.
    pub fn total_number(space: FockSpace) -> Self {
        let mut out = Self::zero(space);
        for m in 0..space.num_modes() as Mode {
            out.add_term(Monomial::CA(m, m), Q::one());
        }
        out
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Self) {
        assert_eq!(self.space, other.space, "operators on different Fock spaces");
        for (m, v) in &other.terms {
            self.add_term(*m, c * v);
        }
        self.scalar += c * &other.scalar;
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&Q::one(), other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-Q::one(), other);
        out
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.space);
        out.add_scaled(c, self);
        out
    }

    /// Applies to a basis state given as a bit mask, calling `f(sign, bits, coeff)`
    /// for every surviving term; the scalar part comes first.
    pub(crate) fn for_each_image(&self, bits: u64, mut f: impl FnMut(bool, u64, &Q)) {
        if !self.scalar.is_zero() {
            f(false, bits, &self.scalar);
        }
        for (m, c) in &self.terms {
            if let Some((neg, b)) = m.apply_bits(bits) {
                f(neg, b, c);
            }
        }
    }

    /// Image of one basis state as a sparse vector keyed by bit mask.
    pub fn apply_to_bits(&self, bits: u64) -> SparseVec {
        let mut pairs = Vec::new();
        self.for_each_image(bits, |neg, b, c| pairs.push((b, if neg { -c } else { c.clone() })));
        SparseVec::from_pairs(pairs)
    }

    /// Image of a sparse vector keyed by bit mask.
    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut pairs = Vec::new();
        for (bits, cv) in v.entries() {
            self.for_each_image(*bits, |neg, b, c| {
                let t = cv * c;
                pairs.push((b, if neg { -t } else { t }));
            });
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.space != self.space {
            return Err(Error::DimensionMismatch);
        }
        Ok(StateVector::from_sparse(self.space, &self.apply_sparse(&v.to_sparse())))
    }

    /// If the operator maps the basis state to a multiple of itself, that multiple.
    pub fn diagonal_value(&self, bits: u64) -> Option<Q> {
        let img = self.apply_to_bits(bits);
        match img.entries() {
            [] => Some(Q::zero()),
            [(b, c)] if *b == bits => Some(c.clone()),
            _ => None,
        }
    }

    /// Coordinates over the monomials (key 0 holds the scalar).
    pub fn coordinates(&self) -> SparseVec {
        let mut pairs: Vec<(u64, Q)> = self.terms.iter().map(|(m, c)| (m.key(), c.clone())).collect();
        if !self.scalar.is_zero() {
            pairs.push((0, self.scalar.clone()));
        }
        SparseVec::from_pairs(pairs)
    }

    /// Whether `self = c · other` for some nonzero `c`.
    pub fn proportional_to(&self, other: &Self) -> Option<Q> {
        self.coordinates().ratio_to(&other.coordinates())
    }

    /// Replaces every field operator by a linear combination and normal orders.
    pub fn substitute(&self, image: impl Fn(FieldOp) -> FieldLin) -> Self {
        let mut out = Self::scalar_op(self.space, self.scalar.clone());
        for (m, c) in &self.terms {
            let (x, y) = m.factors();
            let part = Self::product_lin(self.space, &image(x), &image(y));
            out.add_scaled(c, &part);
        }
        out
    }
}

/// Symbolic commutator `[A, B]`, again a normal-ordered quadratic operator.
///
/// For odd `x₁,x₂,y₁,y₂`:
/// `[x₁x₂, y₁y₂] = x₁{x₂,y₁}y₂ − x₁y₁{x₂,y₂} + {x₁,y₁}y₂x₂ − y₁{x₁,y₂}x₂`,
/// and every anticommutator of field operators is a number.
pub fn bracket(a: &QuadraticOperator, b: &QuadraticOperator) -> Result<QuadraticOperator> {
    a.check_space(b)?;
    let mut out = QuadraticOperator::zero(a.space);
    for (ma, ca) in &a.terms {
        let (x1, x2) = ma.factors();
        for (mb, cb) in &b.terms {
            let (y1, y2) = mb.factors();
            let c = ca * cb;
            let k = x2.anticommutator(y1);
            if !k.is_zero() {
                out.add_product(&(&c * &k), x1, y2);
            }
            let k = x2.anticommutator(y2);
            if !k.is_zero() {
                out.add_product(&-(&c * &k), x1, y1);
            }
            let k = x1.anticommutator(y1);
            if !k.is_zero() {
                out.add_product(&(&c * &k), y2, x2);
            }
            let k = x1.anticommutator(y2);
            if !k.is_zero() {
                out.add_product(&-(&c * &k), y1, x2);
            }
        }
    }
    Ok(out)
}

pub fn apply_quadratic(a: &QuadraticOperator, v: &StateVector) -> Result<StateVector> {
    a.apply(v)
}

/// Matrix of `a` on an ordered list of basis states: column `j` is the image of `basis[j]`.
pub fn matrix_of(a: &QuadraticOperator, basis: &[FockState]) -> Result<SparseMatrix> {
    let mut index = std::collections::HashMap::with_capacity(basis.len());
    for (i, s) in basis.iter().enumerate() {
        if s.space != a.space {
            return Err(Error::DimensionMismatch);
        }
        if index.insert(s.bits, i as u64).is_some() {
            return Err(Error::DuplicateBasisState);
        }
    }
    let cols = basis
        .iter()
        .map(|s| {
            let img = a.apply_to_bits(s.bits);
            let pairs = img
                .into_entries()
                .into_iter()
                .map(|(b, c)| index.get(&b).map(|&i| (i, c)).ok_or(Error::OutsideBasis(b)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SparseVec::from_pairs(pairs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(basis.len(), cols))
}

/// Exact vector in the Fock space, keyed by occupation bit mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    space: FockSpace,
    terms: BTreeMap<u64, Q>,
}

impl StateVector {
    pub fn zero(space: FockSpace) -> Self {
        StateVector { space, terms: BTreeMap::new() }
    }

    pub fn basis(s: FockState) -> Self {
        Self::term(s, Q::one())
    }

    pub fn term(s: FockState, c: Q) -> Self {
        let mut v = Self::zero(s.space);
        v.add_term(s, c);
        v
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn add_term(&mut self, s: FockState, c: Q) {
        assert_eq!(s.space, self.space, "state from another Fock space");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(s.bits).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s.bits);
        }
    }

    pub fn coefficient(&self, s: &FockState) -> Q {
        self.terms.get(&s.bits).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FockState, &Q)> {
        self.terms.iter().map(|(b, c)| (self.space.state(*b), c))
    }

    pub fn linear_combination(&self, alpha: &Q, other: &Self, beta: &Q) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch);
        }
        let mut out = Self::zero(self.space);
        for (s, c) in self.iter() {
            out.add_term(s, alpha * c);
        }
        for (s, c) in other.iter() {
            out.add_term(s, beta * c);
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_pairs(self.terms.iter().map(|(b, c)| (*b, c.clone())).collect())
    }

    pub fn from_sparse(space: FockSpace, v: &SparseVec) -> Self {
        StateVector { space, terms: v.entries().iter().cloned().collect() }
    }

    /// Scales so the first nonzero coefficient in basis order is one.
    pub fn normalized(&self) -> Self {
        let mut v = self.to_sparse();
        v.normalize_lead();
        Self::from_sparse(self.space, &v)
    }
}

// JSON forms.

#[derive(Serialize, Deserialize)]
struct StateTermJson {
    modes: Vec<[usize; 2]>,
    #[serde(with = "rational::q_string")]
    coeff: Q,
}

#[derive(Serialize, Deserialize)]
struct StateVectorJson {
    d: usize,
    k: usize,
    terms: Vec<StateTermJson>,
}

#[derive(Serialize, Deserialize)]
struct OperatorTermJson {
    op: String,
    modes: [[usize; 2]; 2],
    #[serde(with = "rational::q_string")]
    coeff: Q,
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    d: usize,
    k: usize,
    #[serde(with = "rational::q_string")]
    scalar: Q,
    terms: Vec<OperatorTermJson>,
}

fn pair_of(space: FockSpace, m: Mode) -> [usize; 2] {
    let mi = space.mode_index(m);
    [mi.p, mi.tau]
}

impl StateVector {
    /// `{"d","k","terms":[{"modes":[[p,τ],…],"coeff":"1/2"}]}`, modes ascending.
    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .iter()
            .map(|(s, c)| StateTermJson {
                modes: s.occupied().iter().map(|m| [m.p, m.tau]).collect(),
                coeff: c.clone(),
            })
            .collect();
        serde_json::to_value(StateVectorJson { d: self.space.d, k: self.space.k, terms })
            .expect("state vector serializes")
    }

    /// Reads the `to_json` form; listed modes may be in any order and the
    /// coefficient refers to the canonically ordered product.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: StateVectorJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
        let space = FockSpace::new(j.d, j.k)?;
        let mut out = Self::zero(space);
        for t in j.terms {
            let modes: Vec<ModeIndex> = t.modes.iter().map(|m| ModeIndex::new(m[0], m[1])).collect();
            let s = space.state_from_modes(&modes)?;
            if s.particle_number() as usize != modes.len() {
                return Err(Error::ShapeMismatch("repeated mode in state".into()));
            }
            out.add_term(s, t.coeff);
        }
        Ok(out)
    }
}

impl QuadraticOperator {
    /// `{"d","k","scalar","terms":[{"op":"cc"|"ca"|"aa","modes":[[p,τ],[q,υ]],"coeff"}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let (op, i, j) = match *m {
                    Monomial::CC(i, j) => ("cc", i, j),
                    Monomial::CA(i, j) => ("ca", i, j),
                    Monomial::AA(i, j) => ("aa", i, j),
                };
                OperatorTermJson {
                    op: op.to_string(),
                    modes: [pair_of(self.space, i), pair_of(self.space, j)],
                    coeff: c.clone(),
                }
            })
            .collect();
        serde_json::to_value(OperatorJson {
            d: self.space.d,
            k: self.space.k,
            scalar: self.scalar.clone(),
            terms,
        })
        .expect("operator serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: OperatorJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
        let space = FockSpace::new(j.d, j.k)?;
        let mut out = Self::scalar_op(space, j.scalar);
        for t in j.terms {
            let i = space.mode(ModeIndex::new(t.modes[0][0], t.modes[0][1]))?;
            let jm = space.mode(ModeIndex::new(t.modes[1][0], t.modes[1][1]))?;
            let (x, y) = match t.op.as_str() {
                "cc" => (FieldOp::Create(i), FieldOp::Create(jm)),
                "ca" => (FieldOp::Create(i), FieldOp::Annihilate(jm)),
                "aa" => (FieldOp::Annihilate(i), FieldOp::Annihilate(jm)),
                other => return Err(Error::ShapeMismatch(format!("unknown monomial {other:?}"))),
            };
            out.add_product(&t.coeff, x, y);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};
    use proptest::prelude::*;

    fn sp(d: usize, k: usize) -> FockSpace {
        FockSpace::new(d, k).unwrap()
    }

    /// Independent dense oracle: Jordan–Wigner matrices built from scratch.
    fn dense_field(n: usize, m: usize, create: bool) -> Vec<Vec<i64>> {
        let dim = 1usize << n;
        let mut out = vec![vec![0i64; dim]; dim];
        for col in 0..dim {
            let occ = col >> m & 1 == 1;
            if occ == create {
                continue;
            }
            let below = (0..m).filter(|i| col >> i & 1 == 1).count();
            let row = col ^ (1 << m);
            out[row][col] = if below % 2 == 0 { 1 } else { -1 };
        }
        out
    }

    fn dense_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l] != 0 {
                    for j in 0..n {
                        out[i][j] += a[i][l] * b[l][j];
                    }
                }
            }
        }
        out
    }

    fn dense_of(op: &QuadraticOperator) -> Vec<Vec<Q>> {
        let n = op.space().num_modes();
        let dim = 1usize << n;
        let mut out = vec![vec![Q::zero(); dim]; dim];
        for (i, row) in out.iter_mut().enumerate() {
            row[i] += op.scalar();
        }
        for (m, c) in op.terms() {
            let (x, y) = m.factors();
            let mx = match x {
                FieldOp::Create(i) => dense_field(n, i as usize, true),
                FieldOp::Annihilate(i) => dense_field(n, i as usize, false),
            };
            let my = match y {
                FieldOp::Create(i) => dense_field(n, i as usize, true),
                FieldOp::Annihilate(i) => dense_field(n, i as usize, false),
            };
            let prod = dense_mul(&mx, &my);
            for i in 0..dim {
                for j in 0..dim {
                    out[i][j] += c * q(prod[i][j]);
                }
            }
        }
        out
    }

    fn dense_commutator(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let n = a.len();
        let mut out = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    out[i][j] += &a[i][l] * &b[l][j] - &b[i][l] * &a[l][j];
                }
            }
        }
        out
    }

    #[test]
    fn vacuum_examples() {
        for (d, k) in [(1, 1), (2, 1), (13, 4)] {
            let v = vacuum(d, k).unwrap();
            assert_eq!(v.particle_number(), 0);
            assert_eq!(v.space().num_modes(), d * k);
        }
        assert!(vacuum(0, 1).is_err());
    }

    #[test]
    fn creation_and_annihilation_examples() {
        let s = sp(2, 1);
        let m11 = ModeIndex::new(1, 1);
        let m21 = ModeIndex::new(2, 1);
        let one = apply_creation(&s.vacuum(), m11).unwrap().unwrap();
        assert_eq!(one.sign, 1);
        assert_eq!(one.state.occupied(), vec![m11]);
        assert_eq!(apply_creation(&one.state, m11).unwrap(), None);
        let two = apply_creation(&one.state, m21).unwrap().unwrap();
        assert_eq!((two.sign, two.state.occupied()), (-1, vec![m11, m21]));
        // a†_{11} a†_{21}|⟩ is the canonical product, the reverse order is its negative
        let rev = apply_creation(&apply_creation(&s.vacuum(), m21).unwrap().unwrap().state, m11)
            .unwrap()
            .unwrap();
        assert_eq!(rev.sign, 1);
        assert_eq!(rev.state, two.state);
        let back = apply_annihilation(&rev.state, m11).unwrap().unwrap();
        assert_eq!((back.sign, back.state.occupied()), (1, vec![m21]));

        assert_eq!(apply_annihilation(&s.vacuum(), m11).unwrap(), None);
        let v = apply_annihilation(&one.state, m11).unwrap().unwrap();
        assert_eq!((v.sign, v.state), (1, s.vacuum()));
        let r = apply_annihilation(&two.state, m21).unwrap().unwrap();
        assert_eq!((r.sign, r.state.occupied()), (-1, vec![m11]));

        assert!(matches!(
            apply_creation(&s.vacuum(), ModeIndex::new(3, 1)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(apply_annihilation(&s.vacuum(), ModeIndex::new(1, 2)).is_err());
    }

    #[test]
    fn car_relations_on_every_state() {
        let s = sp(2, 2);
        for st in s.full_basis().unwrap() {
            for m in 0..4u8 {
                for n in 0..4u8 {
                    // {a_m, a†_n} s
                    let mut v: BTreeMap<u64, i64> = BTreeMap::new();
                    for (first, second) in
                        [(FieldOp::Create(n), FieldOp::Annihilate(m)), (FieldOp::Annihilate(m), FieldOp::Create(n))]
                    {
                        if let Some((n1, b1)) = first.apply_bits(st.bits()) {
                            if let Some((n2, b2)) = second.apply_bits(b1) {
                                *v.entry(b2).or_default() += if n1 ^ n2 { -1 } else { 1 };
                            }
                        }
                    }
                    v.retain(|_, c| *c != 0);
                    let expect: BTreeMap<u64, i64> =
                        if m == n { [(st.bits(), 1)].into() } else { BTreeMap::new() };
                    assert_eq!(v, expect);
                }
            }
        }
    }

    #[test]
    fn apply_quadratic_examples() {
        let s = sp(2, 1);
        let n = QuadraticOperator::total_number(s);
        let one = StateVector::basis(s.state(0b01));
        assert_eq!(n.apply(&one).unwrap(), one);

        let pair = QuadraticOperator::product(s, FieldOp::Create(0), FieldOp::Create(1));
        assert_eq!(pair.apply(&StateVector::basis(s.vacuum())).unwrap(), StateVector::basis(s.state(0b11)));

        // f_{−1,−1} = d/2 − Σ_p n_{p1} with d = 2
        let f = QuadraticOperator::scalar_op(s, q(1)).minus(&n);
        let full = StateVector::basis(s.state(0b11));
        assert_eq!(f.apply(&full).unwrap(), StateVector::term(s.state(0b11), q(-1)));

        let other = QuadraticOperator::zero(sp(1, 2));
        assert_eq!(other.apply(&full), Err(Error::DimensionMismatch));
    }

    #[test]
    fn bracket_examples() {
        let s = sp(2, 1);
        let c = |i| FieldOp::Create(i);
        let a = |i| FieldOp::Annihilate(i);
        let x = QuadraticOperator::product(s, c(0), a(1));
        let y = QuadraticOperator::product(s, c(1), a(0));
        let expect = QuadraticOperator::number(s, 0).minus(&QuadraticOperator::number(s, 1));
        assert_eq!(bracket(&x, &y).unwrap(), expect);

        let n = QuadraticOperator::total_number(s);
        let p = QuadraticOperator::product(s, c(0), c(1));
        assert_eq!(bracket(&n, &p).unwrap(), p.scaled(&q(2)));
        assert_eq!(bracket(&n, &QuadraticOperator::zero(sp(1, 1))), Err(Error::DimensionMismatch));
    }

    #[test]
    fn bracket_matches_dense_commutator_oracle() {
        let s = sp(3, 1);
        let c = |i| FieldOp::Create(i);
        let a = |i| FieldOp::Annihilate(i);
        let ops = [
            QuadraticOperator::product(s, c(0), c(2)),
            QuadraticOperator::product(s, a(2), a(0)),
            QuadraticOperator::product(s, c(1), a(2)).plus(&QuadraticOperator::product(s, a(1), c(0))),
            QuadraticOperator::product(s, a(0), c(0)),
            QuadraticOperator::product(s, c(2), c(1)).scaled(&q_frac(3, 2)),
        ];
        for x in &ops {
            for y in &ops {
                let sym = bracket(x, y).unwrap();
                assert_eq!(dense_of(&sym), dense_commutator(&dense_of(x), &dense_of(y)));
            }
        }
    }

    #[test]
    fn matrix_of_examples() {
        let s = sp(1, 1);
        let basis = s.full_basis().unwrap();
        let m = matrix_of(&QuadraticOperator::total_number(s), &basis).unwrap();
        assert_eq!(m.to_dense(), vec![vec![q(0), q(0)], vec![q(0), q(1)]]);
        assert!(matrix_of(&QuadraticOperator::zero(s), &basis).unwrap().is_zero());

        // ē₁₁ = n₁ − n₂ on (vacuum, {1}, {2}, {1,2})
        let s2 = sp(2, 1);
        let e11 = QuadraticOperator::number(s2, 0).minus(&QuadraticOperator::number(s2, 1));
        let m = matrix_of(&e11, &s2.full_basis().unwrap()).unwrap();
        let diag: Vec<Q> = (0..4).map(|i| m.get(i, i)).collect();
        assert_eq!(diag, vec![q(0), q(1), q(-1), q(0)]);
        assert!(m.is_diagonal());

        let pair = QuadraticOperator::product(s2, FieldOp::Create(0), FieldOp::Create(1));
        assert_eq!(matrix_of(&pair, &[s2.vacuum()]), Err(Error::OutsideBasis(0b11)));
        assert_eq!(matrix_of(&pair, &[s2.vacuum(), s2.vacuum()]), Err(Error::DuplicateBasisState));
    }

    #[test]
    fn guard_blocks_large_bases() {
        let s = sp(6, 5);
        assert!(matches!(s.full_basis(), Err(Error::GuardExceeded { dk: 30, .. })));
    }

    #[test]
    fn json_round_trip() {
        let s = sp(2, 2);
        let op = QuadraticOperator::product(s, FieldOp::Create(3), FieldOp::Create(0))
            .plus(&QuadraticOperator::scalar_op(s, q_frac(-3, 2)));
        let back = QuadraticOperator::from_json(&op.to_json()).unwrap();
        assert_eq!(back, op);
        let v = op.apply(&StateVector::basis(s.state(0b0110))).unwrap();
        assert_eq!(StateVector::from_json(&v.to_json()).unwrap(), v);
    }

    fn arb_op(n: u8) -> impl Strategy<Value = Vec<(u8, u8, u8, i64)>> {
        proptest::collection::vec((0u8..3, 0..n, 0..n, -3i64..4), 0..6)
    }

    fn build(space: FockSpace, spec: &[(u8, u8, u8, i64)], scalar: i64) -> QuadraticOperator {
        let mut op = QuadraticOperator::scalar_op(space, q(scalar));
        for &(t, i, j, c) in spec {
            let (x, y) = match t {
                0 => (FieldOp::Create(i), FieldOp::Create(j)),
                1 => (FieldOp::Create(i), FieldOp::Annihilate(j)),
                _ => (FieldOp::Annihilate(i), FieldOp::Annihilate(j)),
            };
            op.add_product(&q(c), x, y);
        }
        op
    }

    proptest! {
        #[test]
        fn bracket_is_antisymmetric_and_jacobi(a in arb_op(4), b in arb_op(4), c in arb_op(4), s in -2i64..3) {
            let space = sp(2, 2);
            let (a, b, c) = (build(space, &a, s), build(space, &b, 1), build(space, &c, 0));
            let ab = bracket(&a, &b).unwrap();
            prop_assert_eq!(ab.plus(&bracket(&b, &a).unwrap()), QuadraticOperator::zero(space));
            let j = bracket(&a, &bracket(&b, &c).unwrap()).unwrap()
                .plus(&bracket(&b, &bracket(&c, &a).unwrap()).unwrap())
                .plus(&bracket(&c, &ab).unwrap());
            prop_assert!(j.is_zero());
        }

        #[test]
        fn bracket_realizes_matrix_commutator(a in arb_op(4), b in arb_op(4)) {
            let space = sp(4, 1);
            let (a, b) = (build(space, &a, 1), build(space, &b, -1));
            let basis = space.full_basis().unwrap();
            let lhs = matrix_of(&bracket(&a, &b).unwrap(), &basis).unwrap();
            let ma = matrix_of(&a, &basis).unwrap();
            let mb = matrix_of(&b, &basis).unwrap();
            prop_assert_eq!(lhs, ma.commutator(&mb));
        }

        #[test]
        fn apply_is_linear(a in arb_op(4), u in proptest::collection::vec((0u64..16, -4i64..5), 0..6),
                           v in proptest::collection::vec((0u64..16, -4i64..5), 0..6),
                           alpha in -3i64..4, beta in -3i64..4) {
            let space = sp(2, 2);
            let op = build(space, &a, 2);
            let mk = |pairs: &[(u64, i64)]| {
                let mut sv = StateVector::zero(space);
                for &(b, c) in pairs { sv.add_term(space.state(b), q(c)); }
                sv
            };
            let (u, v) = (mk(&u), mk(&v));
            let lhs = op.apply(&u.linear_combination(&q(alpha), &v, &q(beta)).unwrap()).unwrap();
            let rhs = op.apply(&u).unwrap().linear_combination(&q(alpha), &op.apply(&v).unwrap(), &q(beta)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
