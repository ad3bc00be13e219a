//! Young-diagram arithmetic and the duality pairing rules.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::HalfInt;

/// An ordinary Young diagram stored as row lengths without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GLDiagram {
    rows: Vec<usize>,
}

impl GLDiagram {
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(format!("rows {rows:?} are not non-increasing")));
        }
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Ok(GLDiagram { rows })
    }

    pub fn empty() -> Self {
        GLDiagram::default()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Row `p` (1-based), zero past the depth.
    pub fn row(&self, p: usize) -> usize {
        self.rows.get(p.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.row(1)
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Depth of column `j` (1-based), zero past the width.
    pub fn column_depth(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.rows.iter().take_while(|&&r| r >= j).count()
    }

    pub fn columns(&self) -> Vec<usize> {
        (1..=self.width()).map(|j| self.column_depth(j)).collect()
    }

    /// Row lengths padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<usize> {
        let mut out = self.rows.clone();
        out.resize(n.max(out.len()), 0);
        out
    }

    /// `(row, column)` of cells `1..=n` in reading order.
    pub fn reading_order(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
            .collect()
    }

    /// Every diagram with at most `max_rows` rows and `max_cols` columns,
    /// in lexicographic order of the padded row sequence.
    pub fn all_in_box(max_rows: usize, max_cols: usize) -> Vec<GLDiagram> {
        fn go(left: usize, cap: usize, acc: &mut Vec<usize>, out: &mut Vec<GLDiagram>) {
            if left == 0 {
                out.push(GLDiagram::new(acc.clone()).expect("non-increasing by construction"));
                return;
            }
            for r in 0..=cap {
                acc.push(r);
                go(left - 1, r, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        go(max_rows, max_cols, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All diagrams with exactly `n` cells.
    pub fn partitions(n: usize) -> Vec<GLDiagram> {
        Self::all_in_box(n, n).into_iter().filter(|l| l.size() == n).collect()
    }
}

impl TryFrom<Vec<usize>> for GLDiagram {
    type Error = Error;
    fn try_from(rows: Vec<usize>) -> Result<Self> {
        GLDiagram::new(rows)
    }
}

impl From<GLDiagram> for Vec<usize> {
    fn from(l: GLDiagram) -> Self {
        l.rows
    }
}

impl fmt::Display for GLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", rows.join(","))
    }
}

impl FromStr for GLDiagram {
    type Err = Error;
    /// Accepts `4,3,1`, `(4,3,1)`, `()` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() {
            return Ok(GLDiagram::empty());
        }
        let rows = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidDiagram(s.to_string()))?;
        GLDiagram::new(rows)
    }
}

/// An `O(d)` group diagram: any two different columns have total depth at most `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OGroupDiagram {
    lambda: GLDiagram,
    d: usize,
}

impl OGroupDiagram {
    pub fn new(lambda: GLDiagram, d: usize) -> Result<Self> {
        if lambda.column_depth(1) + lambda.column_depth(2) > d {
            return Err(Error::InvalidDiagram(format!("{lambda} is not an O({d}) diagram")));
        }
        Ok(OGroupDiagram { lambda, d })
    }

    pub fn lambda(&self) -> &GLDiagram {
        &self.lambda
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_self_complementary(&self) -> bool {
        2 * self.lambda.column_depth(1) == self.d
    }

    /// Every `O(d)` diagram with at most `k` columns.
    pub fn all(d: usize, k: usize) -> Vec<OGroupDiagram> {
        GLDiagram::all_in_box(d, k)
            .into_iter()
            .filter_map(|l| OGroupDiagram::new(l, d).ok())
            .collect()
    }
}

impl fmt::Display for OGroupDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lambda)
    }
}

/// Highest weight of an orthogonal algebra written as a generalized diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<HalfInt>", into = "Vec<HalfInt>")]
pub struct OAlgebraDiagram {
    w: Vec<HalfInt>,
}

impl OAlgebraDiagram {
    pub fn new(w: Vec<HalfInt>) -> Result<Self> {
        let bad = |why: &str| Error::InvalidDiagram(format!("{}: {why}", fmt_rows(&w)));
        if let Some(first) = w.first() {
            if w.iter().any(|x| x.is_integral() != first.is_integral()) {
                return Err(bad("mixes integral and half-odd entries"));
            }
        }
        let n = w.len();
        if n >= 2 {
            if w[..n - 1].windows(2).any(|p| p[0] < p[1]) {
                return Err(bad("rows are not non-increasing"));
            }
            if w[n - 2] < w[n - 1].abs() {
                return Err(bad("last row exceeds the one above it"));
            }
        }
        if n >= 2 && w[n - 2] < HalfInt::ZERO {
            return Err(bad("only the last row may be negative"));
        }
        Ok(OAlgebraDiagram { w })
    }

    pub fn rows(&self) -> &[HalfInt] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn spin(&self) -> bool {
        !self.w.is_empty() && self.w.iter().all(|x| !x.is_integral())
    }

    pub fn with_last_negated(&self) -> Self {
        let mut w = self.w.clone();
        if let Some(x) = w.last_mut() {
            *x = -*x;
        }
        OAlgebraDiagram { w }
    }
}

impl TryFrom<Vec<HalfInt>> for OAlgebraDiagram {
    type Error = Error;
    fn try_from(w: Vec<HalfInt>) -> Result<Self> {
        OAlgebraDiagram::new(w)
    }
}

impl From<OAlgebraDiagram> for Vec<HalfInt> {
    fn from(d: OAlgebraDiagram) -> Self {
        d.w
    }
}

impl fmt::Display for OAlgebraDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rows(&self.w))
    }
}

pub fn fmt_rows(w: &[HalfInt]) -> String {
    let rows: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", rows.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairType {
    #[serde(rename = "gl-gl")]
    GlGl,
    #[serde(rename = "sp-sp")]
    SpSp,
    #[serde(rename = "o-o")]
    OO,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairType::GlGl => "gl-gl",
            PairType::SpSp => "sp-sp",
            PairType::OO => "o-o",
        })
    }
}

impl FromStr for PairType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl-gl" => Ok(PairType::GlGl),
            "sp-sp" => Ok(PairType::SpSp),
            "o-o" => Ok(PairType::OO),
            other => Err(Error::ShapeMismatch(format!("unknown pair type {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistics {
    Fermion,
    Boson,
}

/// Which last row of an entry stands for a ± pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMarker {
    /// `λ_{d/2} ≠ 0`: two `o(d)` irreps share one `w`.
    LambdaLast,
    /// `w_k ≠ 0`: two `o(2k)` irreps share one `λ`.
    WLast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub lambda: Vec<HalfInt>,
    pub w: Vec<HalfInt>,
    pub marker: Option<PairMarker>,
}

impl PairingEntry {
    /// The one or two signed `(λ, w)` labels the entry stands for.
    pub fn signed(&self) -> Vec<(Vec<HalfInt>, Vec<HalfInt>)> {
        let negate_last = |v: &[HalfInt]| {
            let mut v = v.to_vec();
            if let Some(x) = v.last_mut() {
                *x = -*x;
            }
            v
        };
        match self.marker {
            None => vec![(self.lambda.clone(), self.w.clone())],
            Some(PairMarker::LambdaLast) => vec![
                (self.lambda.clone(), self.w.clone()),
                (negate_last(&self.lambda), self.w.clone()),
            ],
            Some(PairMarker::WLast) => vec![
                (self.lambda.clone(), self.w.clone()),
                (self.lambda.clone(), negate_last(&self.w)),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingTable {
    pub duality_type: PairType,
    pub d: usize,
    pub k: usize,
    pub entries: Vec<PairingEntry>,
}

impl PairingTable {
    pub fn signed_set(&self) -> BTreeSet<(Vec<HalfInt>, Vec<HalfInt>)> {
        self.entries.iter().flat_map(|e| e.signed()).collect()
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("{} pairs, d={}, k={}: {} entries\n", self.duality_type, self.d, self.k, self.entries.len());
        for e in &self.entries {
            let mark = match e.marker {
                None => "",
                Some(PairMarker::LambdaLast) => "  (±λ last)",
                Some(PairMarker::WLast) => "  (±w last)",
            };
            out.push_str(&format!("\nλ={}  w={}{}\n", fmt_rows(&e.lambda), fmt_rows(&e.w), mark));
            out.push_str(&side_by_side(&render_rows(&e.lambda), &render_rows(&e.w)));
        }
        out
    }
}

fn ints(v: &[usize]) -> Vec<HalfInt> {
    v.iter().map(|&x| HalfInt::from_int(x as i64)).collect()
}

pub fn conjugate(lambda: &GLDiagram) -> GLDiagram {
    GLDiagram::new(lambda.columns()).expect("column depths are non-increasing")
}

pub fn complementary(lambda: &OGroupDiagram) -> Result<OGroupDiagram> {
    let mut cols = lambda.lambda.columns();
    let d = lambda.d;
    match cols.first_mut() {
        Some(c) => *c = d - *c,
        None => cols.push(d),
    }
    let rows = GLDiagram::new(cols).map_err(|_| Error::InvalidDiagram(lambda.to_string()))?;
    OGroupDiagram::new(conjugate(&rows), d)
}

pub fn gl_pair(lambda: &GLDiagram, d: usize, k: usize, statistics: Statistics) -> Result<GLDiagram> {
    match statistics {
        Statistics::Fermion => {
            if lambda.depth() > d || lambda.width() > k {
                return Err(Error::InvalidDiagram(format!(
                    "{lambda} does not fit in a {d} × {k} box"
                )));
            }
            Ok(conjugate(lambda))
        }
        Statistics::Boson => {
            if lambda.depth() > d.min(k) {
                return Err(Error::InvalidDiagram(format!("{lambda} is deeper than min({d},{k})")));
            }
            Ok(lambda.clone())
        }
    }
}

/// Fermion `gl(d)`–`gl(k)` pairs: every `λ` in a `d × k` box with its transpose.
pub fn gl_pairs(d: usize, k: usize) -> PairingTable {
    let entries = GLDiagram::all_in_box(d, k)
        .into_iter()
        .map(|l| PairingEntry {
            lambda: ints(&l.padded(d)),
            w: ints(&conjugate(&l).padded(k)),
            marker: None,
        })
        .collect();
    PairingTable { duality_type: PairType::GlGl, d, k, entries }
}

fn frame_w(lambda: &GLDiagram, d: usize, k: usize) -> Vec<HalfInt> {
    (1..=k)
        .map(|tau| HalfInt::half_of(d) - HalfInt::from_int(lambda.column_depth(k + 1 - tau) as i64))
        .collect()
}

pub fn frame_fill_pairs(d: usize, k: usize) -> PairingTable {
    let h = d / 2;
    let entries = GLDiagram::all_in_box(h, k)
        .into_iter()
        .map(|l| {
            let marker = if d.is_multiple_of(2) && h > 0 && l.row(h) != 0 {
                PairMarker::LambdaLast
            } else {
                PairMarker::WLast
            };
            PairingEntry { lambda: ints(&l.padded(h)), w: frame_w(&l, d, k), marker: Some(marker) }
        })
        .collect();
    PairingTable { duality_type: PairType::OO, d, k, entries }
}

pub fn helmers_pairs(d: usize, k: usize) -> Result<PairingTable> {
    if d % 2 == 1 {
        return Err(Error::OddSymplecticDimension(d));
    }
    let entries = GLDiagram::all_in_box(d / 2, k)
        .into_iter()
        .map(|l| PairingEntry {
            lambda: ints(&l.padded(d / 2)),
            w: frame_w(&l, d, k),
            marker: None,
        })
        .collect();
    Ok(PairingTable { duality_type: PairType::SpSp, d, k, entries })
}

pub fn pairing_table(pair: PairType, d: usize, k: usize) -> Result<PairingTable> {
    if d == 0 || k == 0 {
        return Err(Error::EmptyDimension { d, k });
    }
    match pair {
        PairType::GlGl => Ok(gl_pairs(d, k)),
        PairType::SpSp => helmers_pairs(d, k),
        PairType::OO => Ok(frame_fill_pairs(d, k)),
    }
}

/// `w_τ = d/2 − λ̃_{k+1−τ}`.
pub fn rowe_w_from_lambda(lambda: &OGroupDiagram, k: usize) -> Result<OAlgebraDiagram> {
    if lambda.lambda.width() > k {
        return Err(Error::InvalidDiagram(format!("{lambda} has more than {k} columns")));
    }
    OAlgebraDiagram::new(frame_w(&lambda.lambda, lambda.d, k))
}

/// `w_τ = −λ_{k+1−τ} − d/2`.
pub fn boson_dual_weights(lambda: &GLDiagram, d: usize, k: usize) -> Result<Vec<HalfInt>> {
    if lambda.depth() > d.min(k) {
        return Err(Error::InvalidDiagram(format!("{lambda} is deeper than min({d},{k})")));
    }
    Ok((1..=k)
        .map(|tau| -HalfInt::from_int(lambda.row(k + 1 - tau) as i64) - HalfInt::half_of(d))
        .collect())
}

/// The `o(d)` highest weights inside the `O(d)` irrep `λ`: one, or a `±` pair
/// when `λ` is self-complementary.
pub fn o_group_to_algebra(lambda: &OGroupDiagram) -> Result<Vec<OAlgebraDiagram>> {
    let d = lambda.d;
    let rep = if 2 * lambda.lambda.column_depth(1) > d { complementary(lambda)? } else { lambda.clone() };
    let w = OAlgebraDiagram::new(ints(&rep.lambda.padded(d / 2)[..d / 2]))?;
    if lambda.is_self_complementary() {
        let neg = w.with_last_negated();
        Ok(vec![w, neg])
    } else {
        Ok(vec![w])
    }
}

/// ASCII diagram: `[]` per cell, `|` for the half-width spin column, a
/// leading `-` on a negative row. Trailing zero rows are dropped.
pub fn render_rows(rows: &[HalfInt]) -> String {
    let mut n = rows.len();
    while n > 0 && rows[n - 1].is_zero() {
        n -= 1;
    }
    if n == 0 {
        return "(empty)\n".to_string();
    }
    let mut out = String::new();
    for x in &rows[..n] {
        if x.twice() < 0 {
            out.push('-');
        }
        let t = x.twice().unsigned_abs() as usize;
        if t % 2 == 1 {
            out.push('|');
        }
        out.push_str(&"[]".repeat(t / 2));
        out.push('\n');
    }
    out
}

pub fn render_gl(lambda: &GLDiagram) -> String {
    render_rows(&ints(lambda.rows()))
}

pub fn side_by_side(left: &str, right: &str) -> String {
    let l: Vec<&str> = left.lines().collect();
    let r: Vec<&str> = right.lines().collect();
    let width = l.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for i in 0..l.len().max(r.len()) {
        let a = l.get(i).copied().unwrap_or("");
        let b = r.get(i).copied().unwrap_or("");
        let pad = width - a.chars().count();
        let line = format!("  {a}{}    {b}", " ".repeat(pad));
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gl(rows: &[usize]) -> GLDiagram {
        GLDiagram::new(rows.to_vec()).unwrap()
    }

    fn og(rows: &[usize], d: usize) -> OGroupDiagram {
        OGroupDiagram::new(gl(rows), d).unwrap()
    }

    fn hv(twice: &[i64]) -> Vec<HalfInt> {
        twice.iter().map(|&t| HalfInt::from_twice(t)).collect()
    }

    fn binomial(n: usize, r: usize) -> usize {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&gl(&[3, 1])), gl(&[2, 1, 1]));
        assert_eq!(conjugate(&gl(&[])), gl(&[]));
        assert_eq!(conjugate(&gl(&[2, 2])), gl(&[2, 2]));
        assert!(GLDiagram::new(vec![1, 2]).is_err());
        assert_eq!(gl(&[2, 1, 0, 0]), gl(&[2, 1]));
    }

    #[test]
    fn complementary_examples() {
        assert_eq!(complementary(&og(&[1], 3)).unwrap(), og(&[1, 1], 3));
        assert_eq!(complementary(&og(&[1, 1], 4)).unwrap(), og(&[1, 1], 4));
        assert!(og(&[1, 1], 4).is_self_complementary());
        assert_eq!(complementary(&og(&[], 2)).unwrap(), og(&[1, 1], 2));
        assert!(OGroupDiagram::new(gl(&[2, 2]), 3).is_err());
    }

    #[test]
    fn gl_pair_examples() {
        assert_eq!(gl_pair(&gl(&[2, 2, 1]), 3, 2, Statistics::Fermion).unwrap(), gl(&[3, 2]));
        assert_eq!(gl_pair(&gl(&[4, 1]), 5, 2, Statistics::Boson).unwrap(), gl(&[4, 1]));
        assert!(gl_pair(&gl(&[3, 1]), 2, 2, Statistics::Fermion).is_err());
    }

    #[test]
    fn figure_entry_for_d13_k4() {
        let table = frame_fill_pairs(13, 4);
        let entry = table
            .entries
            .iter()
            .find(|e| e.lambda == hv(&[8, 6, 6, 4, 2, 0]))
            .expect("λ = (4,3,3,2,1,0) present");
        assert_eq!(entry.w, hv(&[11, 7, 5, 3]));
        assert_eq!(entry.marker, Some(PairMarker::WLast));
        assert!(table.signed_set().contains(&(hv(&[8, 6, 6, 4, 2, 0]), hv(&[11, 7, 5, -3]))));
    }

    #[test]
    fn frame_fill_small_cases() {
        let t = frame_fill_pairs(2, 1);
        let got: Vec<_> = t.entries.iter().map(|e| (e.lambda.clone(), e.w.clone(), e.marker)).collect();
        assert_eq!(
            got,
            vec![
                (hv(&[0]), hv(&[2]), Some(PairMarker::WLast)),
                (hv(&[2]), hv(&[0]), Some(PairMarker::LambdaLast)),
            ]
        );
        for d in [2, 4, 6] {
            let t = frame_fill_pairs(d, 3);
            assert_eq!(t.entries[0].lambda, vec![HalfInt::ZERO; d / 2]);
            assert_eq!(t.entries[0].w, vec![HalfInt::half_of(d); 3]);
        }
        let t = frame_fill_pairs(1, 3);
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].w, hv(&[1, 1, 1]));
    }

    #[test]
    fn helmers_examples() {
        let t = helmers_pairs(2, 1).unwrap();
        let got: Vec<_> = t.entries.iter().map(|e| (e.lambda.clone(), e.w.clone())).collect();
        assert_eq!(got, vec![(hv(&[0]), hv(&[2])), (hv(&[2]), hv(&[0]))]);
        let t = helmers_pairs(4, 1).unwrap();
        let got: Vec<_> = t.entries.iter().map(|e| (e.lambda.clone(), e.w.clone())).collect();
        assert_eq!(
            got,
            vec![(hv(&[0, 0]), hv(&[4])), (hv(&[2, 0]), hv(&[2])), (hv(&[2, 2]), hv(&[0]))]
        );
        let full = helmers_pairs(6, 2).unwrap();
        let rect = full.entries.iter().find(|e| e.lambda == hv(&[4, 4, 4])).unwrap();
        assert_eq!(rect.w, hv(&[0, 0]));
        assert!(full.entries.iter().all(|e| e.marker.is_none()));
        assert_eq!(helmers_pairs(3, 1), Err(Error::OddSymplecticDimension(3)));
    }

    #[test]
    fn rowe_examples() {
        let w = rowe_w_from_lambda(&og(&[4, 3, 3, 2, 1, 1, 1, 1], 13), 4).unwrap();
        assert_eq!(w.rows(), hv(&[11, 7, 5, -3]).as_slice());
        assert!(w.spin());
        assert_eq!(rowe_w_from_lambda(&og(&[], 4), 2).unwrap().rows(), hv(&[4, 4]).as_slice());
        assert_eq!(rowe_w_from_lambda(&og(&[1, 1], 3), 1).unwrap().rows(), hv(&[-1]).as_slice());
        assert!(rowe_w_from_lambda(&og(&[2], 3), 1).is_err());
    }

    #[test]
    fn boson_examples() {
        assert_eq!(boson_dual_weights(&gl(&[5]), 3, 1).unwrap(), hv(&[-13]));
        assert_eq!(boson_dual_weights(&gl(&[]), 4, 3).unwrap(), hv(&[-4, -4, -4]));
        assert_eq!(boson_dual_weights(&gl(&[2, 1]), 4, 2).unwrap(), hv(&[-6, -8]));
        assert!(boson_dual_weights(&gl(&[1, 1, 1]), 4, 2).is_err());
    }

    #[test]
    fn o_group_to_algebra_examples() {
        assert_eq!(o_group_to_algebra(&og(&[1], 3)).unwrap(), vec![OAlgebraDiagram::new(hv(&[2])).unwrap()]);
        let pair = o_group_to_algebra(&og(&[1, 1], 4)).unwrap();
        assert_eq!(pair.len(), 2);
        assert_eq!(pair[0].rows(), hv(&[2, 2]).as_slice());
        assert_eq!(pair[1].rows(), hv(&[2, -2]).as_slice());
        assert_eq!(o_group_to_algebra(&og(&[1, 1], 3)).unwrap(), o_group_to_algebra(&og(&[1], 3)).unwrap());
        // the deeper member of a complementary pair reads off its partner's rows
        assert_eq!(o_group_to_algebra(&og(&[1, 1, 1], 4)).unwrap()[0].rows(), hv(&[2, 0]).as_slice());
    }

    #[test]
    fn algebra_diagram_validity() {
        assert!(OAlgebraDiagram::new(hv(&[3, 2])).is_err());
        assert!(OAlgebraDiagram::new(hv(&[3, 1])).unwrap().spin());
        assert!(OAlgebraDiagram::new(hv(&[2, 4])).is_err());
        assert!(OAlgebraDiagram::new(hv(&[2, -4])).is_err());
        assert!(OAlgebraDiagram::new(hv(&[-2, -2])).is_err());
        assert!(OAlgebraDiagram::new(hv(&[-2])).is_ok());
        assert!(!OAlgebraDiagram::new(hv(&[4, -2])).unwrap().spin());
    }

    #[test]
    fn renders() {
        assert_eq!(render_rows(&hv(&[11, -3])), "|[][][][][]\n-|[]\n");
        assert_eq!(render_rows(&hv(&[0, 0])), "(empty)\n");
        assert_eq!(render_gl(&gl(&[2, 1])), "[][]\n[]\n");
        let t = frame_fill_pairs(2, 1).render_table();
        assert!(t.contains("λ=(1)  w=(0)  (±λ last)"));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(frame_fill_pairs(3, 1)).unwrap();
        assert_eq!(v["duality_type"], "o-o");
        assert_eq!(v["entries"][0]["w"][0], "3/2");
        assert_eq!(v["entries"][0]["marker"], "w_last");
        let back: PairingTable = serde_json::from_value(v).unwrap();
        assert_eq!(back, frame_fill_pairs(3, 1));
    }

    fn arb_gl(max_rows: usize, max_cols: usize) -> impl Strategy<Value = GLDiagram> {
        proptest::collection::vec(0..=max_cols, 0..=max_rows).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            GLDiagram::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugate_is_involutive(l in arb_gl(6, 6)) {
            prop_assert_eq!(conjugate(&conjugate(&l)), l);
        }

        #[test]
        fn complementary_is_involutive(l in arb_gl(8, 4), d in 1usize..9) {
            if let Ok(o) = OGroupDiagram::new(l, d) {
                let c = complementary(&o).unwrap();
                prop_assert_eq!(c.lambda().column_depth(1) + o.lambda().column_depth(1), d);
                prop_assert_eq!(complementary(&c).unwrap(), o);
            }
        }

        #[test]
        fn rowe_of_complement_flips_last_row(l in arb_gl(8, 4), d in 1usize..9, k in 1usize..5) {
            if let Ok(o) = OGroupDiagram::new(l, d) {
                if o.lambda().width() <= k && !o.is_self_complementary() {
                    let w = rowe_w_from_lambda(&o, k).unwrap();
                    let wc = rowe_w_from_lambda(&complementary(&o).unwrap(), k).unwrap();
                    prop_assert_eq!(wc, w.with_last_negated());
                }
            }
        }
    }

    #[test]
    fn frame_fill_invariants() {
        for d in 1..=9 {
            for k in 1..=4 {
                let t = frame_fill_pairs(d, k);
                assert_eq!(t.entries.len(), binomial(d / 2 + k, k), "d={d} k={k}");
                let lambdas: BTreeSet<_> = t.entries.iter().map(|e| e.lambda.clone()).collect();
                let ws: BTreeSet<_> = t.entries.iter().map(|e| e.w.clone()).collect();
                assert_eq!(lambdas.len(), t.entries.len());
                assert_eq!(ws.len(), t.entries.len());
                assert_eq!(t.signed_set().len(), 2 * t.entries.len());
                for e in &t.entries {
                    let rows: Vec<usize> = e.lambda.iter().map(|x| (x.twice() / 2) as usize).collect();
                    let l = gl(&rows);
                    for tau in 1..=k {
                        let sum = HalfInt::from_int(l.column_depth(k + 1 - tau) as i64) + e.w[tau - 1];
                        assert_eq!(sum, HalfInt::half_of(d));
                    }
                    let w = OAlgebraDiagram::new(e.w.clone()).unwrap();
                    assert_eq!(w.spin(), d % 2 == 1);
                    assert!(e.lambda.iter().all(|x| x.is_integral()));
                    let marker = if d % 2 == 0 && l.row(d / 2) != 0 && d > 0 {
                        PairMarker::LambdaLast
                    } else {
                        PairMarker::WLast
                    };
                    assert_eq!(e.marker, Some(marker));
                    if marker == PairMarker::LambdaLast {
                        assert!(e.w[k - 1].is_zero());
                    } else {
                        assert!(!e.w[k - 1].is_zero());
                    }
                }
                if d % 2 == 0 {
                    let h = helmers_pairs(d, k).unwrap();
                    assert_eq!(h.entries.len(), t.entries.len());
                    assert!(h.entries.iter().all(|e| e.w.iter().all(|x| *x >= HalfInt::ZERO)));
                }
            }
        }
    }
}
