//! Generator sets of the three fermionic dual pairs, the reflection `r`, the
//! involution `σ` and the highest-weight states `φ_hw`.

use num::{One, Zero};
use serde::Serialize;

use crate::diagram::{OGroupDiagram, PairType};
use crate::error::{Error, Result};
use crate::fock::{
    self, create_bits, FieldLin, FieldOp, FockSpace, FockState, Mode,
    QuadraticOperator, StateVector,
};
use crate::linalg::{EchelonBasis, SparseVec};
use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Symmetric,
    Skew,
}

/// A non-singular bilinear form on `C^d` together with its dual form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    kind: FormKind,
    entries: Vec<Vec<Q>>,
    dual: Vec<Vec<Q>>,
}

impl BilinearForm {
    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.entries.len()
    }

    /// `⟨b|pq⟩`, 1-based.
    pub fn get(&self, p: usize, q: usize) -> &Q {
        &self.entries[p - 1][q - 1]
    }

    /// `⟨pq|b*⟩`, 1-based.
    pub fn dual(&self, p: usize, q: usize) -> &Q {
        &self.dual[p - 1][q - 1]
    }

    pub fn entries(&self) -> &[Vec<Q>] {
        &self.entries
    }
}

/// Anti-diagonal form `⟨b|pq⟩ = δ_{p+q,d+1}`, with sign `sgn(q − p)` in the skew case.
pub fn standard_form(kind: FormKind, d: usize) -> Result<BilinearForm> {
    if d == 0 {
        return Err(Error::EmptyDimension { d, k: 1 });
    }
    if kind == FormKind::Skew && d % 2 == 1 {
        return Err(Error::OddSymplecticDimension(d));
    }
    let mut entries = vec![vec![Q::zero(); d]; d];
    for p in 1..=d {
        let ps = d + 1 - p;
        entries[p - 1][ps - 1] = match kind {
            FormKind::Symmetric => Q::one(),
            FormKind::Skew if p < ps => Q::one(),
            FormKind::Skew => -Q::one(),
        };
    }
    let dual = dual_of(&entries)?;
    Ok(BilinearForm { kind, entries, dual })
}

/// Solves `Σ_r b_pr b*_qr = δ_pq`, i.e. `b* = (b⁻¹)ᵀ`, by exact Gauss–Jordan.
fn dual_of(b: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = b.len();
    let mut a: Vec<Vec<Q>> = b.to_vec();
    let mut inv: Vec<Vec<Q>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular bilinear form".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &s;
            inv[col][j] = &inv[col][j] / &s;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Ok((0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Cartan,
    Raising,
    Lowering,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub role: Role,
    pub op: QuadraticOperator,
}

/// Both commuting algebras of one dual pair realized on the Fock space.
#[derive(Clone, Debug)]
pub struct DualPairRealization {
    pub pair_type: PairType,
    pub d: usize,
    pub k: usize,
    space: FockSpace,
    side_a: Vec<Generator>,
    side_b: Vec<Generator>,
}

fn with_role(gens: &[Generator], role: Role) -> Vec<&QuadraticOperator> {
    gens.iter().filter(|g| g.role == role).map(|g| &g.op).collect()
}

impl DualPairRealization {
    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn side_a(&self) -> &[Generator] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[Generator] {
        &self.side_b
    }

    pub fn side_a_ops(&self) -> Vec<&QuadraticOperator> {
        self.side_a.iter().map(|g| &g.op).collect()
    }

    pub fn side_b_ops(&self) -> Vec<&QuadraticOperator> {
        self.side_b.iter().map(|g| &g.op).collect()
    }

    pub fn cartan_a(&self) -> Vec<&QuadraticOperator> {
        with_role(&self.side_a, Role::Cartan)
    }

    pub fn raising_a(&self) -> Vec<&QuadraticOperator> {
        with_role(&self.side_a, Role::Raising)
    }

    pub fn lowering_a(&self) -> Vec<&QuadraticOperator> {
        with_role(&self.side_a, Role::Lowering)
    }

    /// Entry `τ` is `f_{−(k+1−τ),−(k+1−τ)}` (or `E_ττ` for gl), so its eigenvalue is `w_τ`.
    pub fn cartan_b(&self) -> Vec<&QuadraticOperator> {
        with_role(&self.side_b, Role::Cartan)
    }

    pub fn raising_b(&self) -> Vec<&QuadraticOperator> {
        with_role(&self.side_b, Role::Raising)
    }

    pub fn lowering_b(&self) -> Vec<&QuadraticOperator> {
        with_role(&self.side_b, Role::Lowering)
    }

    /// Raising operators of both sides.
    pub fn raising(&self) -> Vec<&QuadraticOperator> {
        let mut out = self.raising_a();
        out.extend(self.raising_b());
        out
    }

    /// Lowering operators of both sides.
    pub fn lowering(&self) -> Vec<&QuadraticOperator> {
        let mut out = self.lowering_a();
        out.extend(self.lowering_b());
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dump = |gens: &[Generator]| -> Vec<serde_json::Value> {
            gens.iter()
                .map(|g| {
                    serde_json::json!({
                        "label": g.label,
                        "role": g.role,
                        "operator": g.op.to_json(),
                    })
                })
                .collect()
        };
        serde_json::json!({
            "pair_type": self.pair_type,
            "d": self.d,
            "k": self.k,
            "side_a": dump(&self.side_a),
            "side_b": dump(&self.side_b),
        })
    }
}

/// Keeps candidates that enlarge the span, in the given order.
fn independent(cands: Vec<Generator>) -> Vec<Generator> {
    let mut basis = EchelonBasis::new();
    cands.into_iter().filter(|g| !g.op.is_zero() && basis.insert(g.op.coordinates())).collect()
}

fn nonzero_kind(tau: i64, k: usize) -> Result<usize> {
    let a = tau.unsigned_abs() as usize;
    if tau == 0 || a > k {
        return Err(Error::BadKindIndex { tau, k });
    }
    Ok(a)
}

/// Extended creation/annihilation operators for kinds `−k..−1, 1..k`.
struct Extended {
    space: FockSpace,
    eps: Vec<i64>,
}

impl Extended {
    fn new(space: FockSpace, form: &BilinearForm) -> Self {
        let d = space.d();
        let eps = (1..=d)
            .map(|p| if form.get(p, d + 1 - p).is_one() { 1 } else { -1 })
            .collect();
        Extended { space, eps }
    }

    fn pstar(&self, p: usize) -> usize {
        self.space.d() + 1 - p
    }

    /// `a†_{pτ}`, with `a†_{p,−τ} = ε_p a_{p*,τ}`.
    fn create(&self, p: usize, tau: i64) -> FieldLin {
        let t = tau.unsigned_abs() as usize;
        if tau > 0 {
            vec![(Q::one(), FieldOp::Create(self.space.m(p, t)))]
        } else {
            vec![(q(self.eps[p - 1]), FieldOp::Annihilate(self.space.m(self.pstar(p), t)))]
        }
    }

    /// `a_{pτ}`, with `a_{p,−τ} = ε_p a†_{p*,τ}`.
    fn annihilate(&self, p: usize, tau: i64) -> FieldLin {
        let t = tau.unsigned_abs() as usize;
        if tau > 0 {
            vec![(Q::one(), FieldOp::Annihilate(self.space.m(p, t)))]
        } else {
            vec![(q(self.eps[p - 1]), FieldOp::Create(self.space.m(self.pstar(p), t)))]
        }
    }

    /// `f_{τυ} = ½ Σ_p [a†_{pτ}, a_{pυ}]`.
    fn f(&self, tau: i64, upsilon: i64) -> QuadraticOperator {
        let mut out = QuadraticOperator::zero(self.space);
        let half = Q::new(1.into(), 2.into());
        for p in 1..=self.space.d() {
            let (x, y) = (self.create(p, tau), self.annihilate(p, upsilon));
            out.add_scaled(&half, &QuadraticOperator::product_lin(self.space, &x, &y));
            out.add_scaled(&-&half, &QuadraticOperator::product_lin(self.space, &y, &x));
        }
        out
    }

    /// `ē_pq = Σ_τ (a†_{pτ}a_{qτ} − ε_pε_q a†_{q*τ}a_{p*τ})`.
    fn ebar(&self, p: usize, qq: usize) -> QuadraticOperator {
        let s = &self.space;
        let sign = q(-self.eps[p - 1] * self.eps[qq - 1]);
        let mut out = QuadraticOperator::zero(*s);
        for tau in 1..=s.k() {
            out.add_product(&Q::one(), FieldOp::Create(s.m(p, tau)), FieldOp::Annihilate(s.m(qq, tau)));
            out.add_product(
                &sign,
                FieldOp::Create(s.m(self.pstar(qq), tau)),
                FieldOp::Annihilate(s.m(self.pstar(p), tau)),
            );
        }
        out
    }
}

fn form_kind(pair: PairType) -> FormKind {
    match pair {
        PairType::SpSp => FormKind::Skew,
        _ => FormKind::Symmetric,
    }
}

/// Kinds in the order `−k, …, −1, 1, …, k`.
fn signed_kinds(k: usize) -> Vec<i64> {
    let k = k as i64;
    (-k..=-1).chain(1..=k).collect()
}

/// `f_{τυ}` for the orthogonal pair (`b` symmetric).
pub fn f_operator(tau: i64, upsilon: i64, d: usize, k: usize) -> Result<QuadraticOperator> {
    f_operator_for(PairType::OO, tau, upsilon, d, k)
}

/// `f_{τυ}` built with the form of the given pair type.
pub fn f_operator_for(pair: PairType, tau: i64, upsilon: i64, d: usize, k: usize) -> Result<QuadraticOperator> {
    let space = FockSpace::new(d, k)?;
    nonzero_kind(tau, k)?;
    nonzero_kind(upsilon, k)?;
    let form = standard_form(form_kind(pair), d)?;
    Ok(Extended::new(space, &form).f(tau, upsilon))
}

pub fn build_pair(pair_type: PairType, d: usize, k: usize) -> Result<DualPairRealization> {
    let space = FockSpace::new(d, k)?;
    space.check_guard()?;
    let (side_a, side_b) = match pair_type {
        PairType::GlGl => gl_generators(space),
        PairType::OO | PairType::SpSp => {
            let form = standard_form(form_kind(pair_type), d)?;
            orthosymplectic_generators(space, &form)
        }
    };
    Ok(DualPairRealization { pair_type, d, k, space, side_a, side_b })
}

fn role_of(i: usize, j: usize) -> Role {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Role::Raising,
        std::cmp::Ordering::Greater => Role::Lowering,
        std::cmp::Ordering::Equal => Role::Cartan,
    }
}

fn ordered_by_role(mut cands: Vec<Generator>) -> Vec<Generator> {
    let rank = |r: Role| match r {
        Role::Cartan => 0,
        Role::Raising => 1,
        Role::Lowering => 2,
    };
    cands.sort_by_key(|g| rank(g.role));
    independent(cands)
}

fn gl_generators(space: FockSpace) -> (Vec<Generator>, Vec<Generator>) {
    let (d, k) = (space.d(), space.k());
    let mut a = Vec::new();
    for p in 1..=d {
        for qq in 1..=d {
            let mut op = QuadraticOperator::zero(space);
            for tau in 1..=k {
                op.add_product(&Q::one(), FieldOp::Create(space.m(p, tau)), FieldOp::Annihilate(space.m(qq, tau)));
            }
            a.push(Generator { label: format!("E({p},{qq})"), role: role_of(p, qq), op });
        }
    }
    let mut b = Vec::new();
    for tau in 1..=k {
        for ups in 1..=k {
            let mut op = QuadraticOperator::zero(space);
            for p in 1..=d {
                op.add_product(&Q::one(), FieldOp::Create(space.m(p, tau)), FieldOp::Annihilate(space.m(p, ups)));
            }
            b.push(Generator { label: format!("E'({tau},{ups})"), role: role_of(tau, ups), op });
        }
    }
    (ordered_by_role(a), ordered_by_role(b))
}

fn orthosymplectic_generators(space: FockSpace, form: &BilinearForm) -> (Vec<Generator>, Vec<Generator>) {
    let (d, k) = (space.d(), space.k());
    let ext = Extended::new(space, form);
    let mut a = Vec::new();
    for p in 1..=d {
        for qq in 1..=d {
            let role = match role_of(p, qq) {
                Role::Cartan if p > d / 2 => continue,
                r => r,
            };
            a.push(Generator { label: format!("ebar({p},{qq})"), role, op: ext.ebar(p, qq) });
        }
    }
    let kinds = signed_kinds(k);
    let mut b = Vec::new();
    // Cartan entries ordered so that entry τ carries the eigenvalue w_τ.
    for &t in &kinds[..k] {
        b.push(Generator { label: format!("f({t},{t})"), role: Role::Cartan, op: ext.f(t, t) });
    }
    for (i, &t) in kinds.iter().enumerate() {
        for (j, &u) in kinds.iter().enumerate() {
            if i != j {
                b.push(Generator { label: format!("f({t},{u})"), role: role_of(i, j), op: ext.f(t, u) });
            }
        }
    }
    (ordered_by_role(a), ordered_by_role(b))
}

/// Image of a single field operator under an involution.
type FieldImage = (bool, FieldOp);

/// A Fock-space map induced by a CAR-preserving substitution of field operators
/// plus the image of the vacuum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockInvolution {
    pub name: &'static str,
    space: FockSpace,
    create: Vec<FieldImage>,
    annihilate: Vec<FieldImage>,
    vacuum: (bool, u64),
}

impl FockInvolution {
    pub fn space(&self) -> FockSpace {
        self.space
    }

    fn image(&self, op: FieldOp) -> FieldImage {
        match op {
            FieldOp::Create(m) => self.create[m as usize],
            FieldOp::Annihilate(m) => self.annihilate[m as usize],
        }
    }

    /// Image of the basis state `bits` as `(negative, bits)`.
    pub fn apply_bits(&self, bits: u64) -> (bool, u64) {
        let (mut neg, mut cur) = self.vacuum;
        for m in (0..self.space.num_modes() as Mode).rev().filter(|m| bits >> m & 1 == 1) {
            let (n0, op) = self.create[m as usize];
            let (n1, next) = op
                .apply_bits(cur)
                .expect("an invertible substitution never annihilates a basis state");
            neg ^= n0 ^ n1;
            cur = next;
        }
        (neg, cur)
    }

    pub fn apply_state(&self, s: &FockState) -> StateVector {
        let (neg, bits) = self.apply_bits(s.bits());
        StateVector::term(self.space.state(bits), q(if neg { -1 } else { 1 }))
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.space() != self.space {
            return Err(Error::DimensionMismatch);
        }
        let mut out = StateVector::zero(self.space);
        for (s, c) in v.iter() {
            let (neg, bits) = self.apply_bits(s.bits());
            out.add_term(self.space.state(bits), if neg { -c } else { c.clone() });
        }
        Ok(out)
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_pairs(
            v.entries()
                .iter()
                .map(|(b, c)| {
                    let (neg, bits) = self.apply_bits(*b);
                    (bits, if neg { -c } else { c.clone() })
                })
                .collect(),
        )
    }

    /// Symbolic `g x g⁻¹`.
    pub fn conjugate(&self, x: &QuadraticOperator) -> QuadraticOperator {
        x.substitute(|op| {
            let (neg, img) = self.image(op);
            vec![(q(if neg { -1 } else { 1 }), img)]
        })
    }
}

fn each_mode<F>(space: FockSpace, f: F) -> Vec<FieldImage>
where
    F: Fn(usize, usize) -> FieldImage,
{
    (0..space.num_modes() as Mode)
        .map(|m| {
            let mi = space.mode_index(m);
            f(mi.p, mi.tau)
        })
        .collect()
}

/// The reflection generating the non-rotation coset of `O(d)`.
pub fn reflection_r(d: usize, k: usize) -> Result<FockInvolution> {
    let space = FockSpace::new(d, k)?;
    let map = |p: usize| -> (bool, usize) {
        if d % 2 == 1 {
            (p == d.div_ceil(2), p)
        } else if p == d / 2 {
            (false, p + 1)
        } else if p == d / 2 + 1 {
            (false, p - 1)
        } else {
            (false, p)
        }
    };
    let create = each_mode(space, |p, tau| {
        let (neg, p2) = map(p);
        (neg, FieldOp::Create(space.m(p2, tau)))
    });
    let annihilate = each_mode(space, |p, tau| {
        let (neg, p2) = map(p);
        (neg, FieldOp::Annihilate(space.m(p2, tau)))
    });
    Ok(FockInvolution { name: "r", space, create, annihilate, vacuum: (false, 0) })
}

/// Swaps creation and annihilation for kind 1: `σa†_{p1}σ⁻¹ = a_{p*1}`.
pub fn sigma(d: usize, k: usize) -> Result<FockInvolution> {
    let space = FockSpace::new(d, k)?;
    let create = each_mode(space, |p, tau| {
        if tau == 1 {
            (false, FieldOp::Annihilate(space.m(d + 1 - p, 1)))
        } else {
            (false, FieldOp::Create(space.m(p, tau)))
        }
    });
    let annihilate = each_mode(space, |p, tau| {
        if tau == 1 {
            (false, FieldOp::Create(space.m(d + 1 - p, 1)))
        } else {
            (false, FieldOp::Annihilate(space.m(p, tau)))
        }
    });
    // Π_p a†_{p1} with p increasing, applied right to left.
    let mut vac = (false, 0u64);
    for p in (1..=d).rev() {
        let (n, b) = create_bits(vac.1, space.m(p, 1)).expect("distinct modes");
        vac = (vac.0 ^ n, b);
    }
    Ok(FockInvolution { name: "sigma", space, create, annihilate, vacuum: vac })
}

/// `φ = (Π_i a†_{ρ(i)κ(i)})|⟩` over the reading-order tableau of `λ`.
pub fn phi_hw(lambda: &OGroupDiagram, k: usize) -> Result<StateVector> {
    let d = lambda.d();
    let l = lambda.lambda();
    if l.width() > k {
        return Err(Error::InvalidDiagram(format!("{l} has more than {k} columns")));
    }
    let space = FockSpace::new(d, k)?;
    let mut neg = false;
    let mut bits = 0u64;
    for &(row, col) in l.reading_order().iter().rev() {
        let (n, b) = create_bits(bits, space.m(row, col)).expect("cells are distinct modes");
        neg ^= n;
        bits = b;
    }
    Ok(StateVector::term(space.state(bits), q(if neg { -1 } else { 1 })))
}

/// Whether every pairwise bracket of `gens` lies in their span.
pub fn closes_under_bracket(gens: &[&QuadraticOperator]) -> Result<bool> {
    let mut span = EchelonBasis::new();
    for g in gens {
        span.insert(g.coordinates());
    }
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            if !span.contains(&fock::bracket(x, y)?.coordinates()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every side-A generator commutes with every side-B generator.
pub fn sides_commute(pair: &DualPairRealization) -> Result<bool> {
    for a in pair.side_a_ops() {
        for b in pair.side_b_ops() {
            if !fock::bracket(a, b)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `g x g⁻¹` lies in the span of `gens` for every `x` in `gens`.
pub fn preserves_span(g: &FockInvolution, gens: &[&QuadraticOperator]) -> bool {
    let mut span = EchelonBasis::new();
    for x in gens {
        span.insert(x.coordinates());
    }
    gens.iter().all(|x| span.contains(&g.conjugate(x).coordinates()))
}
