//! Brute-force joint decomposition of the Fock space under a dual pair.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{self, fmt_rows, GLDiagram, OGroupDiagram, PairType};
use crate::dual_pairs::{build_pair, reflection_r, sigma, DualPairRealization, FockInvolution};
use crate::error::{Error, Result};
use crate::fock::{FieldOp, FockSpace, QuadraticOperator};
use crate::linalg::{kernel, EchelonBasis, SparseVec};
use crate::rational::{q, q_frac, HalfInt, Q};

pub type Weight = Vec<HalfInt>;
pub type JointWeight = (Weight, Weight);

/// Basis states grouped by their joint Cartan eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    space: FockSpace,
    spaces: BTreeMap<JointWeight, Vec<u64>>,
}

impl WeightTable {
    pub fn spaces(&self) -> &BTreeMap<JointWeight, Vec<u64>> {
        &self.spaces
    }

    pub fn get(&self, w: &JointWeight) -> Option<&[u64]> {
        self.spaces.get(w).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    /// Position of each state's weight space in iteration order.
    fn index(&self) -> HashMap<u64, usize> {
        let mut out = HashMap::with_capacity(self.space.dimension() as usize);
        for (i, states) in self.spaces.values().enumerate() {
            for &b in states {
                out.insert(b, i);
            }
        }
        out
    }
}

fn eigen(ops: &[&QuadraticOperator], bits: u64) -> Result<Weight> {
    ops.iter()
        .map(|op| {
            let v = op.diagonal_value(bits).ok_or(Error::NonDiagonalCartan(bits))?;
            HalfInt::try_from_rational(&v)
        })
        .collect()
}

pub fn joint_weights(pair: &DualPairRealization) -> Result<WeightTable> {
    let space = pair.space();
    let (ca, cb) = (pair.cartan_a(), pair.cartan_b());
    let tagged = space
        .full_basis()?
        .par_iter()
        .map(|s| Ok(((eigen(&ca, s.bits())?, eigen(&cb, s.bits())?), s.bits())))
        .collect::<Result<Vec<_>>>()?;
    let mut spaces: BTreeMap<JointWeight, Vec<u64>> = BTreeMap::new();
    for (w, b) in tagged {
        spaces.entry(w).or_default().push(b);
    }
    for v in spaces.values_mut() {
        v.sort_unstable();
    }
    Ok(WeightTable { space, spaces })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighestWeightRecord {
    pub lambda: Weight,
    pub w: Weight,
    #[serde(skip)]
    pub vector: SparseVec,
    pub dim: usize,
    pub r_partner: Option<usize>,
    pub r_eigen: Option<i8>,
    pub sigma_partner: Option<usize>,
    pub sigma_eigen: Option<i8>,
    pub o_group_lambda: Option<GLDiagram>,
}

impl HighestWeightRecord {
    fn new(lambda: Weight, w: Weight, vector: SparseVec) -> Self {
        HighestWeightRecord {
            lambda,
            w,
            vector,
            dim: 0,
            r_partner: None,
            r_eigen: None,
            sigma_partner: None,
            sigma_eigen: None,
            o_group_lambda: None,
        }
    }
}

/// Stacks `ops(s)` for every state of a weight space into one column per state.
fn stacked_columns(ops: &[&QuadraticOperator], states: &[u64], shift: u32) -> Vec<SparseVec> {
    states
        .iter()
        .map(|&b| {
            let mut pairs = Vec::new();
            for (i, op) in ops.iter().enumerate() {
                for (bits, c) in op.apply_to_bits(b).into_entries() {
                    pairs.push(((i as u64) << shift | bits, c));
                }
            }
            SparseVec::from_pairs(pairs)
        })
        .collect()
}

/// Vectors annihilated by every raising operator of both sides, one record per
/// kernel basis vector, first coefficient normalized to one.
pub fn highest_weight_vectors(pair: &DualPairRealization) -> Result<Vec<HighestWeightRecord>> {
    let table = joint_weights(pair)?;
    Ok(hw_from_table(pair, &table))
}

fn hw_from_table(pair: &DualPairRealization, table: &WeightTable) -> Vec<HighestWeightRecord> {
    let raising = pair.raising();
    let shift = pair.space().num_modes() as u32;
    let spaces: Vec<(&JointWeight, &Vec<u64>)> = table.spaces.iter().collect();
    spaces
        .par_iter()
        .flat_map_iter(|(w, states)| {
            let cols = stacked_columns(&raising, states, shift);
            kernel(&cols).into_iter().map(move |v| {
                let vec = SparseVec::from_pairs(
                    v.into_entries().into_iter().map(|(j, c)| (states[j as usize], c)).collect(),
                );
                HighestWeightRecord::new(w.0.clone(), w.1.clone(), vec)
            })
        })
        .collect()
}

/// Smallest subspace containing `seed` and stable under `generators`.
pub fn generate_module(seed: &SparseVec, generators: &[&QuadraticOperator]) -> Vec<SparseVec> {
    let mut basis = EchelonBasis::new();
    if !basis.insert(seed.clone()) {
        return Vec::new();
    }
    let mut next = 0;
    while next < basis.rank() {
        let v = basis.vectors()[next].clone();
        next += 1;
        for g in generators {
            basis.insert(g.apply_sparse(&v));
        }
    }
    basis.vectors().to_vec()
}

/// Module generation for weight vectors under root operators, one echelon per weight space.
struct WeightedModule {
    parts: BTreeMap<usize, EchelonBasis>,
}

impl WeightedModule {
    fn generate(seed: &SparseVec, gens: &[&QuadraticOperator], index: &HashMap<u64, usize>) -> Self {
        let mut parts: BTreeMap<usize, EchelonBasis> = BTreeMap::new();
        let mut queue = vec![seed.clone()];
        let weight_of = |v: &SparseVec| index[&v.entries()[0].0];
        parts.entry(weight_of(seed)).or_default().insert(seed.clone());
        while let Some(v) = queue.pop() {
            for g in gens {
                let img = g.apply_sparse(&v);
                if img.is_zero() {
                    continue;
                }
                let part = parts.entry(weight_of(&img)).or_default();
                let before = part.rank();
                if part.insert(img) {
                    queue.push(part.vectors()[before].clone());
                }
            }
        }
        WeightedModule { parts }
    }

    fn dim(&self) -> usize {
        self.parts.values().map(|b| b.rank()).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub multiplicity_free: bool,
    pub dimension_sum: bool,
    pub disjoint: bool,
    pub prediction_diff: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_rule: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub pair_type: PairType,
    pub d: usize,
    pub k: usize,
    pub records: Vec<HighestWeightRecord>,
    pub checks: Checks,
    pub notes: Vec<String>,
}

impl DecompositionReport {
    pub fn all_pass(&self) -> bool {
        let c = &self.checks;
        c.multiplicity_free
            && c.dimension_sum
            && c.disjoint
            && c.prediction_diff.is_empty()
            && c.group_rule != Some(false)
    }

    pub fn signed_set(&self) -> BTreeSet<JointWeight> {
        self.records.iter().map(|r| (r.lambda.clone(), r.w.clone())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "{} decomposition, d={}, k={}: {} highest-weight records\n\n",
            self.pair_type,
            self.d,
            self.k,
            self.records.len()
        );
        out.push_str(&format!("{:>3}  {:<18} {:<22} {:>6}  {:<8} {:<8} {}\n", "#", "λ", "w", "dim", "r", "σ", "O(d) λ"));
        let link = |partner: Option<usize>, eigen: Option<i8>| match (partner, eigen) {
            (Some(j), _) => format!("↔{j}"),
            (None, Some(e)) => format!("{e:+}"),
            _ => "-".into(),
        };
        for (i, r) in self.records.iter().enumerate() {
            out.push_str(&format!(
                "{:>3}  {:<18} {:<22} {:>6}  {:<8} {:<8} {}\n",
                i,
                fmt_rows(&r.lambda),
                fmt_rows(&r.w),
                r.dim,
                link(r.r_partner, r.r_eigen),
                link(r.sigma_partner, r.sigma_eigen),
                r.o_group_lambda.as_ref().map(|l| l.to_string()).unwrap_or_else(|| "-".into()),
            ));
        }
        let c = &self.checks;
        out.push_str(&format!(
            "\nmultiplicity_free: {}\ndimension_sum: {}\ndisjoint: {}\n",
            c.multiplicity_free, c.dimension_sum, c.disjoint
        ));
        if let Some(g) = c.group_rule {
            out.push_str(&format!("group_rule: {g}\n"));
        }
        if c.prediction_diff.is_empty() {
            out.push_str("prediction: match\n");
        } else {
            out.push_str("prediction: MISMATCH\n");
            for line in &c.prediction_diff {
                out.push_str(&format!("  {line}\n"));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn prediction_diff(
    found: &BTreeSet<JointWeight>,
    predicted: &BTreeSet<JointWeight>,
) -> Vec<String> {
    let mut out = Vec::new();
    for (l, w) in predicted.difference(found) {
        out.push(format!("missing λ={} w={}", fmt_rows(l), fmt_rows(w)));
    }
    for (l, w) in found.difference(predicted) {
        out.push(format!("unexpected λ={} w={}", fmt_rows(l), fmt_rows(w)));
    }
    out
}

pub fn decompose(pair_type: PairType, d: usize, k: usize) -> Result<DecompositionReport> {
    let pair = build_pair(pair_type, d, k)?;
    let table = joint_weights(&pair)?;
    let mut records = hw_from_table(&pair, &table);
    records.sort_by(|a, b| (&a.lambda, &a.w).cmp(&(&b.lambda, &b.w)));

    let index = table.index();
    let lowering = pair.lowering();
    let modules: Vec<WeightedModule> = records
        .par_iter()
        .map(|r| WeightedModule::generate(&r.vector, &lowering, &index))
        .collect();
    for (r, m) in records.iter_mut().zip(&modules) {
        r.dim = m.dim();
    }

    let signed: BTreeSet<JointWeight> = records.iter().map(|r| (r.lambda.clone(), r.w.clone())).collect();
    let multiplicity_free = signed.len() == records.len();
    let total: u64 = records.iter().map(|r| r.dim as u64).sum();
    let dimension_sum = total == pair.space().dimension();
    let disjoint = modules_disjoint(&modules, &table);
    let predicted = diagram::pairing_table(pair_type, d, k)?.signed_set();

    let mut report = DecompositionReport {
        pair_type,
        d,
        k,
        records,
        checks: Checks {
            multiplicity_free,
            dimension_sum,
            disjoint,
            prediction_diff: prediction_diff(&signed, &predicted),
            group_rule: None,
        },
        notes: Vec::new(),
    };
    if pair_type == PairType::OO {
        reflection_analysis(&mut report)?;
        if d == 2 {
            report.notes.push(
                "d=2: side B is the algebra of O(2)-invariant bilinears; the full commutant of O(2) \
                 is larger, so these modules are irreducible under the invariant algebra only"
                    .into(),
            );
        }
    }
    Ok(report)
}

/// Per weight space, the union of all module pieces has full rank.
fn modules_disjoint(modules: &[WeightedModule], table: &WeightTable) -> bool {
    let sizes: Vec<usize> = table.spaces.values().map(|v| v.len()).collect();
    (0..sizes.len()).into_par_iter().all(|wi| {
        let mut union = EchelonBasis::new();
        let mut count = 0;
        for m in modules {
            if let Some(part) = m.parts.get(&wi) {
                for v in part.vectors() {
                    count += 1;
                    if !union.insert(v.clone()) {
                        return false;
                    }
                }
            }
        }
        count == sizes[wi]
    })
}

fn negate_last(v: &[HalfInt]) -> Weight {
    let mut v = v.to_vec();
    if let Some(x) = v.last_mut() {
        *x = -*x;
    }
    v
}

fn unit_sign(c: &Q) -> Option<i8> {
    if c.is_one() {
        Some(1)
    } else if (-c).is_one() {
        Some(-1)
    } else {
        None
    }
}

/// Locates `g(v_i)` among the records: returns the partner index and the
/// proportionality factor.
fn image_record(
    g: &FockInvolution,
    records: &[HighestWeightRecord],
    lookup: &HashMap<JointWeight, usize>,
    i: usize,
    target: JointWeight,
) -> Result<(usize, Q)> {
    let img = g.apply_sparse(&records[i].vector);
    let j = *lookup.get(&target).ok_or(Error::PartnerNotFound(i))?;
    let c = img.ratio_to(&records[j].vector).ok_or(Error::PartnerNotFound(i))?;
    Ok((j, c))
}

/// Fills the `r` and `σ` columns of an o-o report and the group-level diagrams.
pub fn reflection_analysis(report: &mut DecompositionReport) -> Result<()> {
    if report.pair_type != PairType::OO {
        return Err(Error::ShapeMismatch("reflection analysis needs an o-o report".into()));
    }
    let (d, k) = (report.d, report.k);
    let r = reflection_r(d, k)?;
    let s = sigma(d, k)?;
    let lookup: HashMap<JointWeight, usize> = report
        .records
        .iter()
        .enumerate()
        .map(|(i, rec)| ((rec.lambda.clone(), rec.w.clone()), i))
        .collect();
    let mut rule_ok = true;
    for i in 0..report.records.len() {
        let (lambda, w) = (report.records[i].lambda.clone(), report.records[i].w.clone());
        let r_target = if d % 2 == 0 { (negate_last(&lambda), w.clone()) } else { (lambda.clone(), w.clone()) };
        let (j, c) = image_record(&r, &report.records, &lookup, i, r_target)?;
        let rec = &mut report.records[i];
        if j == i {
            rec.r_eigen = Some(unit_sign(&c).ok_or(Error::PartnerNotFound(i))?);
        } else {
            rec.r_partner = Some(j);
        }
        let (j, c) = image_record(&s, &report.records, &lookup, i, (lambda.clone(), negate_last(&w)))?;
        let rec = &mut report.records[i];
        if j == i {
            rec.sigma_eigen = Some(unit_sign(&c).ok_or(Error::PartnerNotFound(i))?);
        } else {
            rec.sigma_partner = Some(j);
        }

        let rows: Vec<usize> = lambda.iter().map(|x| (x.twice().abs() / 2) as usize).collect();
        let base = OGroupDiagram::new(GLDiagram::new(rows)?, d)?;
        let group = match (rec.r_partner, rec.r_eigen) {
            (Some(_), _) | (None, Some(1)) => base,
            _ => diagram::complementary(&base)?,
        };
        rule_ok &= diagram::rowe_w_from_lambda(&group, k)
            .map(|wd| wd.rows() == w.as_slice())
            .unwrap_or(false);
        rec.o_group_lambda = Some(group.lambda().clone());
    }
    report.checks.group_rule = Some(rule_ok);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasispinModule {
    pub w: Weight,
    pub s: HalfInt,
    pub q: HalfInt,
    pub seniority: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasispinRecord {
    pub d: usize,
    /// `Q₀ = σS₀σ⁻¹` equals `½(n − d)` as an operator.
    pub q0_is_half_n_minus_d: bool,
    /// `Q₀` has eigenvalue `½(n − d)` on every `n`-particle basis state.
    pub q0_layers: bool,
    /// `S` and `Q` components commute with each other and span side B.
    pub split_ok: bool,
    pub modules: Vec<QuasispinModule>,
    /// `w₁ = Q + S`, `w₂ = Q − S`, `v = d − 2Q = d − w₁ − w₂` on every module.
    pub relations_ok: bool,
}

impl QuasispinRecord {
    pub fn all_pass(&self) -> bool {
        self.q0_is_half_n_minus_d && self.q0_layers && self.split_ok && self.relations_ok
    }
}

/// `S₀, S₊, S₋` of the number-conserving `sl(2)` inside `o(4)`.
fn spin_components(space: FockSpace) -> [QuadraticOperator; 3] {
    let d = space.d();
    let half = q_frac(1, 2);
    let mut s0 = QuadraticOperator::zero(space);
    let mut sp = QuadraticOperator::zero(space);
    let mut sm = QuadraticOperator::zero(space);
    for p in 1..=d {
        let (m1, m2) = (space.m(p, 1), space.m(p, 2));
        s0.add_product(&half, FieldOp::Create(m2), FieldOp::Annihilate(m2));
        s0.add_product(&-&half, FieldOp::Create(m1), FieldOp::Annihilate(m1));
        sp.add_product(&Q::one(), FieldOp::Create(m2), FieldOp::Annihilate(m1));
        sm.add_product(&Q::one(), FieldOp::Create(m1), FieldOp::Annihilate(m2));
    }
    [s0, sp, sm]
}

/// Splits the o-o side B at `k = 2` into commuting spin and quasispin `o(3)`s
/// and checks the seniority relations module by module.
pub fn quasispin_check(d: usize, report: &DecompositionReport) -> Result<QuasispinRecord> {
    if report.k != 2 {
        return Err(Error::QuasispinNeedsTwoKinds(report.k));
    }
    if report.pair_type != PairType::OO || report.d != d {
        return Err(Error::ShapeMismatch("quasispin check needs the o-o report for this d".into()));
    }
    let pair = build_pair(PairType::OO, d, 2)?;
    let space = pair.space();
    let s = sigma(d, 2)?;
    let spin = spin_components(space);
    let quasi: Vec<QuadraticOperator> = spin.iter().map(|x| s.conjugate(x)).collect();

    let n_op = QuadraticOperator::total_number(space);
    let expect_q0 = n_op.scaled(&q_frac(1, 2)).minus(&QuadraticOperator::scalar_op(space, q_frac(d as i64, 2)));
    let q0_is_half_n_minus_d = quasi[0] == expect_q0;
    let q0_layers = space.full_basis()?.iter().all(|st| {
        quasi[0].diagonal_value(st.bits())
            == Some(q_frac(st.particle_number() as i64 - d as i64, 2))
    });

    let mut split_ok = true;
    for a in &spin {
        for b in &quasi {
            split_ok &= crate::fock::bracket(a, b)?.is_zero();
        }
    }
    let mut side_b = EchelonBasis::new();
    for g in pair.side_b_ops() {
        side_b.insert(g.coordinates());
    }
    let mut sq = EchelonBasis::new();
    for x in spin.iter().chain(&quasi) {
        split_ok &= side_b.contains(&x.coordinates());
        sq.insert(x.coordinates());
    }
    split_ok &= sq.rank() == side_b.rank();

    let b_gens = pair.side_b_ops();
    let mut modules = Vec::new();
    let mut relations_ok = true;
    for rec in &report.records {
        let basis = generate_module(&rec.vector, &b_gens);
        let mut s_max: Option<Q> = None;
        let mut q_max: Option<Q> = None;
        let mut v_min = usize::MAX;
        for v in &basis {
            for (op, slot) in [(&spin[0], &mut s_max), (&quasi[0], &mut q_max)] {
                // module vectors are mixed weight in general; eigenvalues per state
                for (bits, _) in v.entries() {
                    let e = op.diagonal_value(*bits).ok_or(Error::NonDiagonalCartan(*bits))?;
                    if slot.as_ref().is_none_or(|m| e > *m) {
                        *slot = Some(e);
                    }
                }
            }
            for (bits, _) in v.entries() {
                v_min = v_min.min(bits.count_ones() as usize);
            }
        }
        let s_val = HalfInt::try_from_rational(&s_max.unwrap_or_else(Q::zero))?;
        let q_val = HalfInt::try_from_rational(&q_max.unwrap_or_else(Q::zero))?;
        let (w1, w2) = (rec.w[0], rec.w[1]);
        let dd = HalfInt::from_int(d as i64);
        let v = HalfInt::from_int(v_min as i64);
        relations_ok &= w1 == q_val + s_val
            && w2 == q_val - s_val
            && v == dd - q_val - q_val
            && v == dd - w1 - w2;
        modules.push(QuasispinModule { w: rec.w.clone(), s: s_val, q: q_val, seniority: v_min });
    }
    Ok(QuasispinRecord { d, q0_is_half_n_minus_d, q0_layers, split_ok, modules, relations_ok })
}

/// Scalar `c` with `apply(v) = c·v`, when it exists.
pub fn eigenvalue(op: &QuadraticOperator, v: &SparseVec) -> Option<Q> {
    let img = op.apply_sparse(v);
    if img.is_zero() {
        return Some(q(0));
    }
    img.ratio_to(v)
}
