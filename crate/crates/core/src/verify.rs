//! Bounded property suites over a `(d, k)` grid.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::decompose::{decompose, eigenvalue, quasispin_check};
use crate::diagram::{complementary, o_group_to_algebra, rowe_w_from_lambda, GLDiagram, OGroupDiagram, PairType};
use crate::dual_pairs::{
    build_pair, closes_under_bracket, phi_hw, preserves_span, reflection_r, sides_commute, sigma, standard_form,
    FockInvolution, FormKind,
};
use crate::error::{Error, Result};
use crate::fock::{FieldOp, FockSpace, Mode, QuadraticOperator};
use crate::linalg::SparseVec;
use crate::rational::{q, Q};
use crate::tensor::{
    algebra_mul, chi_hw, chi_hw_row_moved, ebar_matrix, gl_act, is_traceless, matrix_unit, r_act, young_symmetrizer,
    Tensor,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Car,
    Involutions,
    Hw,
    Tensor,
    Quasispin,
    Commutant,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Car, Suite::Involutions, Suite::Hw, Suite::Tensor, Suite::Quasispin, Suite::Commutant];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Car => "car",
            Suite::Involutions => "involutions",
            Suite::Hw => "hw",
            Suite::Tensor => "tensor",
            Suite::Quasispin => "quasispin",
            Suite::Commutant => "commutant",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::ALL)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::ShapeMismatch(format!("unknown suite {s:?}")))
    }
}

/// Grid limits. `d`, when set, pins the orbital dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_dk: usize,
    pub d: Option<usize>,
    pub k: Option<usize>,
    /// Largest tensor rank and dimension of the tensor suite.
    pub max_n: usize,
    pub max_tensor_d: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_dk: 10, d: None, k: None, max_n: 5, max_tensor_d: 4 }
    }
}

impl Bounds {
    pub fn with_max_dk(max_dk: usize) -> Self {
        Bounds { max_dk, ..Bounds::default() }
    }

    /// Every `(d, k)` with `d, k ≥ 1` and `d·k ≤ max_dk`, filtered by the pins.
    pub fn grid(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for d in 1..=self.max_dk {
            for k in 1..=self.max_dk / d {
                if self.d.is_none_or(|x| x == d) && self.k.is_none_or(|x| x == k) {
                    out.push((d, k));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(suite: Suite, name: &str) -> Self {
        CheckOutcome { suite, name: name.to_string(), cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(case());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl VerifySummary {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("summary serializes");
        v["all_pass"] = self.all_pass().into();
        v
    }

    pub fn render_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{:<12} {:<width$} {:>6} cases  {status}\n", c.suite.name(), c.name, c.cases));
            for f in &c.failures {
                out.push_str(&format!("    {f}\n"));
            }
        }
        out.push_str(if self.all_pass() { "all checks pass\n" } else { "some checks FAILED\n" });
        out
    }
}

pub fn run_verify(suite: Suite, bounds: &Bounds) -> Result<VerifySummary> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::ALL.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(match s {
            Suite::Car => car_suite(bounds)?,
            Suite::Involutions => involution_suite(bounds)?,
            Suite::Hw => hw_suite(bounds)?,
            Suite::Tensor => tensor_suite(bounds)?,
            Suite::Quasispin => quasispin_suite(bounds)?,
            Suite::Commutant => commutant_suite(bounds)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(VerifySummary { suite, checks })
}

fn apply_word(ops: &[FieldOp], bits: u64) -> Option<(bool, u64)> {
    let mut neg = false;
    let mut cur = bits;
    for op in ops.iter().rev() {
        let (n, b) = op.apply_bits(cur)?;
        neg ^= n;
        cur = b;
    }
    Some((neg, cur))
}

/// `{x, y}` on `bits` equals the scalar anticommutator times `bits`.
fn anticommutes(x: FieldOp, y: FieldOp, bits: u64) -> bool {
    let mut acc: Vec<(u64, i64)> = Vec::new();
    for word in [[x, y], [y, x]] {
        if let Some((neg, b)) = apply_word(&word, bits) {
            match acc.iter_mut().find(|(s, _)| *s == b) {
                Some(e) => e.1 += if neg { -1 } else { 1 },
                None => acc.push((b, if neg { -1 } else { 1 })),
            }
        }
    }
    acc.retain(|&(_, c)| c != 0);
    if x.anticommutator(y) == q(1) {
        acc == [(bits, 1)]
    } else {
        acc.is_empty()
    }
}

pub fn car_suite(bounds: &Bounds) -> Result<Vec<CheckOutcome>> {
    let mut ca = CheckOutcome::new(Suite::Car, "{a_i, a†_j} = δ_ij");
    let mut cc = CheckOutcome::new(Suite::Car, "{a†_i, a†_j} = 0");
    let mut aa = CheckOutcome::new(Suite::Car, "{a_i, a_j} = 0");
    for (d, k) in bounds.grid() {
        let space = FockSpace::new(d, k)?;
        space.check_guard()?;
        let n = space.num_modes() as Mode;
        let (mut ok_ca, mut ok_cc, mut ok_aa) = (true, true, true);
        for bits in 0..space.dimension() {
            for i in 0..n {
                for j in 0..n {
                    ok_ca &= anticommutes(FieldOp::Annihilate(i), FieldOp::Create(j), bits);
                    ok_cc &= anticommutes(FieldOp::Create(i), FieldOp::Create(j), bits);
                    ok_aa &= anticommutes(FieldOp::Annihilate(i), FieldOp::Annihilate(j), bits);
                }
            }
        }
        ca.record(ok_ca, || format!("d={d} k={k}"));
        cc.record(ok_cc, || format!("d={d} k={k}"));
        aa.record(ok_aa, || format!("d={d} k={k}"));
    }
    Ok(vec![ca, cc, aa])
}

fn compose_bits(g: &FockInvolution, h: &FockInvolution, bits: u64) -> (bool, u64) {
    let (n1, b1) = h.apply_bits(bits);
    let (n2, b2) = g.apply_bits(b1);
    (n1 ^ n2, b2)
}

pub fn involution_suite(bounds: &Bounds) -> Result<Vec<CheckOutcome>> {
    let mut r2 = CheckOutcome::new(Suite::Involutions, "r² = id");
    let mut s2 = CheckOutcome::new(Suite::Involutions, "σ² = id");
    let mut anti = CheckOutcome::new(Suite::Involutions, "σr = −rσ");
    let mut span = CheckOutcome::new(Suite::Involutions, "σ·side B·σ⁻¹ ⊆ side B");
    let mut matrix = CheckOutcome::new(Suite::Involutions, "σX = (σXσ⁻¹)σ on the basis");
    let mut r_comm = CheckOutcome::new(Suite::Involutions, "rX = Xr for side B");
    for (d, k) in bounds.grid() {
        let pair = build_pair(PairType::OO, d, k)?;
        let r = reflection_r(d, k)?;
        let s = sigma(d, k)?;
        let dim = pair.space().dimension();
        let case = || format!("d={d} k={k}");

        let (mut ok_r, mut ok_s, mut ok_a) = (true, true, true);
        for bits in 0..dim {
            ok_r &= compose_bits(&r, &r, bits) == (false, bits);
            ok_s &= compose_bits(&s, &s, bits) == (false, bits);
            let (n1, b1) = compose_bits(&s, &r, bits);
            let (n2, b2) = compose_bits(&r, &s, bits);
            ok_a &= b1 == b2 && n1 != n2;
        }
        r2.record(ok_r, case);
        s2.record(ok_s, case);
        anti.record(ok_a, case);

        let gens = pair.side_b_ops();
        span.record(preserves_span(&s, &gens), case);
        let (mut ok_m, mut ok_rc) = (true, true);
        for x in &gens {
            let xs = s.conjugate(x);
            ok_rc &= r.conjugate(x) == **x;
            for bits in 0..dim {
                let lhs = s.apply_sparse(&x.apply_to_bits(bits));
                let (neg, sb) = s.apply_bits(bits);
                let mut rhs = xs.apply_to_bits(sb);
                rhs.scale(&q(if neg { -1 } else { 1 }));
                ok_m &= lhs == rhs;
                let lhs = r.apply_sparse(&x.apply_to_bits(bits));
                let (neg, rb) = r.apply_bits(bits);
                let mut rhs = x.apply_to_bits(rb);
                rhs.scale(&q(if neg { -1 } else { 1 }));
                ok_rc &= lhs == rhs;
            }
        }
        matrix.record(ok_m, case);
        r_comm.record(ok_rc, case);
    }
    Ok(vec![r2, s2, anti, span, matrix, r_comm])
}

fn sign_multiple(a: &SparseVec, b: &SparseVec) -> Option<i64> {
    match a.ratio_to(b) {
        Some(c) if c == q(1) => Some(1),
        Some(c) if c == q(-1) => Some(-1),
        _ => None,
    }
}

fn eigen_tuple(ops: &[&QuadraticOperator], v: &SparseVec) -> Option<Vec<Q>> {
    ops.iter().map(|op| eigenvalue(op, v)).collect()
}

pub fn hw_suite(bounds: &Bounds) -> Result<Vec<CheckOutcome>> {
    let mut kill_b = CheckOutcome::new(Suite::Hw, "side B raising kills φ_hw");
    let mut kill_a = CheckOutcome::new(Suite::Hw, "side A raising kills φ_hw");
    let mut weight = CheckOutcome::new(Suite::Hw, "side B Cartan weight = w(λ)");
    let mut r_eig = CheckOutcome::new(Suite::Hw, "rφ = ±φ for λ̃₁ ≶ d/2");
    let mut s_eig = CheckOutcome::new(Suite::Hw, "σφ = (−1)^{d/2}φ, σrφ = (−1)^{d/2+1}rφ");
    for (d, k) in bounds.grid() {
        let pair = build_pair(PairType::OO, d, k)?;
        let r = reflection_r(d, k)?;
        let s = sigma(d, k)?;
        let (raise_a, raise_b) = (pair.raising_a(), pair.raising_b());
        let (cart_a, cart_b) = (pair.cartan_a(), pair.cartan_b());
        for lambda in OGroupDiagram::all(d, k) {
            let case = || format!("d={d} k={k} λ={}", lambda.lambda());
            let phi = phi_hw(&lambda, k)?.to_sparse();
            kill_b.record(raise_b.iter().all(|x| x.apply_sparse(&phi).is_zero()), case);
            kill_a.record(raise_a.iter().all(|x| x.apply_sparse(&phi).is_zero()), case);

            let expected: Vec<Q> = rowe_w_from_lambda(&lambda, k)?.rows().iter().map(|h| h.to_rational()).collect();
            weight.record(eigen_tuple(&cart_b, &phi) == Some(expected), case);

            let rphi = r.apply_sparse(&phi);
            let depth = 2 * lambda.lambda().column_depth(1);
            if depth != d {
                let want = if depth < d { 1 } else { -1 };
                r_eig.record(sign_multiple(&rphi, &phi) == Some(want), case);
            } else {
                let e = if (d / 2) % 2 == 0 { 1 } else { -1 };
                let on_phi = sign_multiple(&s.apply_sparse(&phi), &phi) == Some(e);
                let on_partner = sign_multiple(&s.apply_sparse(&rphi), &rphi) == Some(-e);
                let last = cart_a.last().map(|c| (eigenvalue(c, &phi), eigenvalue(c, &rphi)));
                let split = matches!(&last, Some((Some(a), Some(b))) if *a != q(0) && *b == -a.clone());
                s_eig.record(on_phi && on_partner && split, case);
            }
        }
    }
    Ok(vec![kill_b, kill_a, weight, r_eig, s_eig])
}

fn cartan_tuple(t: &Tensor, d: usize) -> Result<Vec<Option<Q>>> {
    (1..=d / 2)
        .map(|p| {
            let img = gl_act(&ebar_matrix(p, p, d), t)?;
            Ok(if img.is_zero() { Some(q(0)) } else { img.ratio_to(t) })
        })
        .collect()
}

pub fn tensor_suite(bounds: &Bounds) -> Result<Vec<CheckOutcome>> {
    let mut idem = CheckOutcome::new(Suite::Tensor, "Y_λ² = Y_λ");
    let mut rows = CheckOutcome::new(Suite::Tensor, "e_pp χ_hw = λ_p χ_hw");
    let mut slhw = CheckOutcome::new(Suite::Tensor, "e_pq χ_hw = 0 for p < q");
    let mut ebar = CheckOutcome::new(Suite::Tensor, "ē_pp χ_hw = (λ_p − λ_p*) χ_hw");
    let mut wrule = CheckOutcome::new(Suite::Tensor, "ē_pp tuple = o(d) highest weight");
    let mut trace = CheckOutcome::new(Suite::Tensor, "χ_hw traceless");
    let mut compl = CheckOutcome::new(Suite::Tensor, "complementary λ share ē_pp tuples");
    let mut refl = CheckOutcome::new(Suite::Tensor, "r χ_hw = ±χ_hw or χ^λ′_hw");

    for n in 0..=bounds.max_n {
        for lambda in GLDiagram::partitions(n) {
            let (y, _) = young_symmetrizer(&lambda)?;
            idem.record(algebra_mul(&y, &y) == y, || format!("λ={lambda}"));
        }
    }

    for d in 1..=bounds.max_tensor_d {
        let b = standard_form(FormKind::Symmetric, d)?;
        for n in 0..=bounds.max_n {
            for lambda in GLDiagram::partitions(n).into_iter().filter(|l| l.depth() <= d) {
                let case = || format!("d={d} λ={lambda}");
                let chi = chi_hw(&lambda, d)?;
                let mut ok_rows = true;
                let mut ok_hw = true;
                for p in 1..=d {
                    ok_rows &= gl_act(&matrix_unit(p, p, d), &chi)? == chi.scaled(&q(lambda.row(p) as i64));
                    for qq in p + 1..=d {
                        ok_hw &= gl_act(&matrix_unit(p, qq, d), &chi)?.is_zero();
                    }
                }
                rows.record(ok_rows, case);
                slhw.record(ok_hw, case);

                let tuple = cartan_tuple(&chi, d)?;
                let expected: Vec<Option<Q>> =
                    (1..=d / 2).map(|p| Some(q(lambda.row(p) as i64 - lambda.row(d + 1 - p) as i64))).collect();
                ebar.record(tuple == expected, case);

                let Ok(og) = OGroupDiagram::new(lambda.clone(), d) else { continue };
                trace.record(is_traceless(&chi, &b)?, case);
                let w = o_group_to_algebra(&og)?;
                let head: Vec<Option<Q>> = w[0].rows().iter().map(|h| Some(h.to_rational())).collect();
                wrule.record(tuple == head, case);

                let depth = 2 * lambda.column_depth(1);
                if depth < d {
                    let other = complementary(&og)?;
                    if other.lambda().size() <= bounds.max_n {
                        let t2 = cartan_tuple(&chi_hw(other.lambda(), d)?, d)?;
                        compl.record(t2 == tuple, case);
                    }
                }
                let rchi = r_act(&chi)?;
                if depth == d {
                    let moved = chi_hw_row_moved(&lambda, d)?
                        .ok_or_else(|| Error::Internal("self-complementary λ without λ′".into()))?;
                    let mut negated = tuple.clone();
                    if let Some(Some(last)) = negated.last_mut() {
                        *last = -last.clone();
                    }
                    let sign_ok = rchi.ratio_to(&moved).is_some_and(|c| c == q(1) || c == q(-1));
                    refl.record(sign_ok && cartan_tuple(&moved, d)? == negated, case);
                } else {
                    let want = q(if depth < d { 1 } else { -1 });
                    refl.record(rchi.ratio_to(&chi) == Some(want), case);
                }
            }
        }
    }
    Ok(vec![idem, rows, slhw, ebar, wrule, trace, compl, refl])
}

pub fn quasispin_suite(bounds: &Bounds) -> Result<Vec<CheckOutcome>> {
    let mut report_ok = CheckOutcome::new(Suite::Quasispin, "o-o k=2 decomposition");
    let mut q0_op = CheckOutcome::new(Suite::Quasispin, "Q₀ = ½N − d/2");
    let mut layers = CheckOutcome::new(Suite::Quasispin, "Q₀ = ½(n − d) on n-particle states");
    let mut split = CheckOutcome::new(Suite::Quasispin, "side B = o(3)_S ⊕ o(3)_Q");
    let mut rel = CheckOutcome::new(Suite::Quasispin, "w = Q ± S, v = d − 2Q = d − w₁ − w₂");
    let ds: Vec<usize> = match bounds.d {
        Some(d) => vec![d],
        None => (2..=4).filter(|d| 2 * d <= bounds.max_dk.max(8)).collect(),
    };
    for d in ds {
        let case = || format!("d={d}");
        let mut report = decompose(PairType::OO, d, 2)?;
        crate::decompose::reflection_analysis(&mut report)?;
        report_ok.record(report.all_pass(), case);
        let rec = quasispin_check(d, &report)?;
        q0_op.record(rec.q0_is_half_n_minus_d, case);
        layers.record(rec.q0_layers, case);
        split.record(rec.split_ok, case);
        rel.record(rec.relations_ok, case);
    }
    Ok(vec![report_ok, q0_op, layers, split, rel])
}

pub fn commutant_suite(bounds: &Bounds) -> Result<Vec<CheckOutcome>> {
    let mut cross = CheckOutcome::new(Suite::Commutant, "[side A, side B] = 0");
    let mut close_a = CheckOutcome::new(Suite::Commutant, "side A closes");
    let mut close_b = CheckOutcome::new(Suite::Commutant, "side B closes");
    for (d, k) in bounds.grid() {
        for pt in [PairType::GlGl, PairType::OO, PairType::SpSp] {
            if pt == PairType::SpSp && d % 2 == 1 {
                continue;
            }
            let pair = build_pair(pt, d, k)?;
            let case = || format!("{pt} d={d} k={k}");
            cross.record(sides_commute(&pair)?, case);
            close_a.record(closes_under_bracket(&pair.side_a_ops())?, case);
            close_b.record(closes_under_bracket(&pair.side_b_ops())?, case);
        }
    }
    Ok(vec![cross, close_a, close_b])
}
