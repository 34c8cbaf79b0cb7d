//! Reduced simplicial homology over the integers.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Default cap on the total number of faces handled by homology computations.
pub const DEFAULT_FACE_BUDGET: usize = 200_000;

/// Abstract simplicial complex given by its facets (sorted vertex lists).
/// No facets at all is the void complex; the single facet `[]` is `{∅}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Sorts vertices, removes duplicate facets and facets contained in others.
    pub fn new(facets: Vec<Vec<usize>>) -> Self {
        let mut fs: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        fs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        fs.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for f in fs {
            if !kept.iter().any(|g| is_sorted_subset(&f, g)) {
                kept.push(f);
            }
        }
        kept.sort();
        SimplicialComplex { facets: kept }
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.facets.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    /// Dimension; `-1` for `{∅}`, `-2` for the void complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-2)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().map(|f| f.len()).collect::<BTreeSet<_>>().len() <= 1
    }

    /// All faces grouped by dimension; entry `d + 1` holds the `d`-faces, sorted.
    pub fn faces(&self, budget: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        if self.facets.is_empty() {
            return Ok(Vec::new());
        }
        let top = self.dim() + 1;
        let mut by_dim: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); top as usize + 1];
        let mut total = 0usize;
        for f in &self.facets {
            let k = f.len();
            if k >= 63 {
                return Err(Error::BudgetExceeded { what: "face enumeration", budget: budget as u64 });
            }
            for m in 0u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).map(|i| f[i]).collect();
                if by_dim[face.len()].insert(face) {
                    total += 1;
                    if total > budget {
                        return Err(Error::BudgetExceeded { what: "face enumeration", budget: budget as u64 });
                    }
                }
            }
        }
        Ok(by_dim
            .into_iter()
            .map(|s| {
                let mut v: Vec<Vec<usize>> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect())
    }

    /// Face numbers `f_{-1}, f_0, …`.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        Ok(self.faces(DEFAULT_FACE_BUDGET)?.iter().map(|v| v.len()).collect())
    }

    /// Σ (−1)^d f_d over d ≥ −1.
    pub fn reduced_euler_characteristic(&self) -> Result<i64> {
        let f = self.f_vector()?;
        Ok(f.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { c as i64 } else { -(c as i64) }).sum())
    }
}

fn is_sorted_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Column-sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// For each column, `(row, value)` pairs sorted by row.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[r][c] = v;
            }
        }
        m
    }
}

/// Matrix of ∂_d from `d`-faces to `(d−1)`-faces, faces in sorted order and
/// oriented by increasing vertex order; ∂_0 maps every vertex to the empty face.
pub fn boundary_matrix(k: &SimplicialComplex, d: usize) -> Result<SparseMatrix> {
    let faces = k.faces(DEFAULT_FACE_BUDGET)?;
    Ok(boundary_from_faces(&faces, d))
}

fn boundary_from_faces(faces: &[Vec<Vec<usize>>], d: usize) -> SparseMatrix {
    let empty = Vec::new();
    let src = faces.get(d + 1).unwrap_or(&empty);
    let dst = faces.get(d).unwrap_or(&empty);
    let index: HashMap<&[usize], usize> = dst.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let columns = src
        .iter()
        .map(|f| {
            let mut col: Vec<(usize, i64)> = (0..f.len())
                .map(|i| {
                    let mut g = f.clone();
                    g.remove(i);
                    (index[g.as_slice()], if i % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    SparseMatrix { rows: dst.len(), cols: src.len(), columns }
}

/// Rank and the invariant factors greater than one of an integer matrix.
pub fn smith_invariants(m: &SparseMatrix) -> (usize, Vec<BigInt>) {
    let cols: Vec<BTreeMap<usize, i64>> = m.columns.iter().map(|c| c.iter().copied().collect()).collect();
    match eliminate(m.rows, cols.clone()) {
        Some(r) => r,
        None => {
            let big = cols.into_iter().map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect()).collect();
            eliminate(m.rows, big).expect("arbitrary precision cannot overflow")
        }
    }
}

trait Coef: Clone + fmt::Debug {
    fn c_zero() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_is_unit(&self) -> bool;
    /// `self + a * b`, or `None` on overflow.
    fn c_add_mul(&self, a: &Self, b: &Self) -> Option<Self>;
    fn c_neg(&self) -> Option<Self>;
    fn c_big(&self) -> BigInt;
}

impl Coef for i64 {
    fn c_zero() -> Self {
        0
    }
    fn c_is_zero(&self) -> bool {
        *self == 0
    }
    fn c_is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn c_add_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b).and_then(|p| self.checked_add(p))
    }
    fn c_neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn c_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn c_is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn c_add_mul(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self + a * b)
    }
    fn c_neg(&self) -> Option<Self> {
        Some(-self.clone())
    }
    fn c_big(&self) -> BigInt {
        self.clone()
    }
}

/// Sparse elimination on unit pivots, then dense Smith normal form on what is left.
fn eliminate<C: Coef>(nrows: usize, mut cols: Vec<BTreeMap<usize, C>>) -> Option<(usize, Vec<BigInt>)> {
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nrows];
    for (c, col) in cols.iter().enumerate() {
        for r in col.keys() {
            row_cols[*r].insert(c);
        }
    }
    let mut alive: Vec<bool> = vec![true; cols.len()];
    let mut rank = 0usize;
    loop {
        let mut order: Vec<usize> = (0..cols.len()).filter(|&c| alive[c] && !cols[c].is_empty()).collect();
        order.sort_by_key(|&c| cols[c].len());
        let mut progressed = false;
        for c in order {
            if !alive[c] || cols[c].is_empty() {
                continue;
            }
            let pivot = cols[c]
                .iter()
                .filter(|(_, v)| v.c_is_unit())
                .min_by_key(|(r, _)| row_cols[**r].len())
                .map(|(r, v)| (*r, v.clone()));
            let Some((r, pv)) = pivot else { continue };
            let pivot_col = cols[c].clone();
            let others: Vec<usize> = row_cols[r].iter().copied().filter(|&o| o != c).collect();
            for o in others {
                // o -= (o[r] * pv) * c, since pv = ±1 is its own inverse.
                let factor = C::c_zero().c_add_mul(&cols[o][&r], &pv)?.c_neg()?;
                for (rr, vv) in &pivot_col {
                    let cur = cols[o].get(rr).cloned().unwrap_or_else(C::c_zero);
                    let new = cur.c_add_mul(&factor, vv)?;
                    if new.c_is_zero() {
                        cols[o].remove(rr);
                        row_cols[*rr].remove(&o);
                    } else {
                        if !cols[o].contains_key(rr) {
                            row_cols[*rr].insert(o);
                        }
                        cols[o].insert(*rr, new);
                    }
                }
            }
            for rr in pivot_col.keys() {
                row_cols[*rr].remove(&c);
            }
            // Row r now lives only in column c; remove both.
            cols[c].clear();
            alive[c] = false;
            rank += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let rest: Vec<usize> = (0..cols.len()).filter(|&c| alive[c] && !cols[c].is_empty()).collect();
    if rest.is_empty() {
        return Some((rank, Vec::new()));
    }
    let rows: Vec<usize> = rest.iter().flat_map(|&c| cols[c].keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let rpos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut dense = vec![vec![BigInt::zero(); rest.len()]; rows.len()];
    for (j, &c) in rest.iter().enumerate() {
        for (r, v) in &cols[c] {
            dense[rpos[r]][j] = v.c_big();
        }
    }
    let diag = dense_smith(dense);
    rank += diag.len();
    let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
    Some((rank, torsion))
}

/// Nonzero diagonal of the Smith normal form, each entry dividing the next.
pub fn dense_smith(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t].clone();
            let mut again = false;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    for j in t..n {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        again = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[t] * &q;
                        row[j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                // Enforce divisibility of the rest of the block.
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
                match bad {
                    Some(i) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
            // Move the smallest entry of row t / column t to the corner.
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs()) {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && (a[best.0][best.1].is_zero() || a[t][j].abs() < a[best.0][best.1].abs()) {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Reduced homology in one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub dim: isize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Reduced homology in dimensions −1 through the complex dimension.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomologySummary {
    pub groups: Vec<HomologyGroup>,
}

impl HomologySummary {
    pub fn rank(&self, dim: isize) -> usize {
        self.groups.iter().find(|g| g.dim == dim).map_or(0, |g| g.rank)
    }
    pub fn torsion(&self, dim: isize) -> &[BigInt] {
        self.groups.iter().find(|g| g.dim == dim).map_or(&[], |g| g.torsion.as_slice())
    }
    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }
    /// Nonzero reduced Betti numbers by dimension.
    pub fn betti(&self) -> BTreeMap<isize, usize> {
        self.groups.iter().filter(|g| g.rank > 0).map(|g| (g.dim, g.rank)).collect()
    }
    /// `{dim: {betti, torsion}}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for g in &self.groups {
            let torsion: Vec<Value> = g
                .torsion
                .iter()
                .map(|t| t.to_u64().map_or_else(|| Value::String(t.to_string()), |x| json!(x)))
                .collect();
            m.insert(g.dim.to_string(), json!({"betti": g.rank, "torsion": torsion}));
        }
        Value::Object(m)
    }
}

pub fn integral_reduced_homology(k: &SimplicialComplex) -> Result<HomologySummary> {
    integral_reduced_homology_with_budget(k, DEFAULT_FACE_BUDGET)
}

pub fn integral_reduced_homology_with_budget(k: &SimplicialComplex, budget: usize) -> Result<HomologySummary> {
    let faces = k.faces(budget)?;
    if faces.is_empty() {
        return Ok(HomologySummary::default());
    }
    let top = faces.len() - 1; // faces[top] holds (top-1)-faces
    // snf[d] = invariants of ∂_d for d = 0..top-1 (∂_d maps faces[d+1] -> faces[d]).
    let snf: Vec<(usize, Vec<BigInt>)> = (0..top).map(|d| smith_invariants(&boundary_from_faces(&faces, d))).collect();
    let mut groups = Vec::new();
    for i in 0..=top {
        let dim = i as isize - 1;
        let count = faces[i].len();
        let out_rank = if i == 0 { 0 } else { snf[i - 1].0 };
        let (in_rank, torsion) = if i < top { (snf[i].0, snf[i].1.clone()) } else { (0, Vec::new()) };
        groups.push(HomologyGroup { dim, rank: count - out_rank - in_rank, torsion });
    }
    Ok(HomologySummary { groups })
}

/// Sphere dimensions of a wedge with the given homology, if torsion-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WedgeSummary {
    Wedge(Vec<isize>),
    NotAWedge,
}

impl fmt::Display for WedgeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WedgeSummary::NotAWedge => f.write_str("not a wedge signature"),
            WedgeSummary::Wedge(dims) if dims.is_empty() => f.write_str("point"),
            WedgeSummary::Wedge(dims) => {
                let mut counts: BTreeMap<isize, usize> = BTreeMap::new();
                for d in dims {
                    *counts.entry(*d).or_default() += 1;
                }
                let parts: Vec<String> = counts.iter().map(|(d, c)| format!("⋁{c}S^{d}")).collect();
                f.write_str(&parts.join(" ∨ "))
            }
        }
    }
}

pub fn wedge_summary(hs: &HomologySummary) -> WedgeSummary {
    if !hs.is_torsion_free() {
        return WedgeSummary::NotAWedge;
    }
    WedgeSummary::Wedge(hs.groups.iter().flat_map(|g| std::iter::repeat(g.dim).take(g.rank)).collect())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn rp2() -> SimplicialComplex {
        SimplicialComplex::new(vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 4, 5],
        ])
    }

    #[test]
    fn constructor_normalizes() {
        let k = SimplicialComplex::new(vec![vec![2, 1], vec![1], vec![1, 2], vec![3]]);
        assert_eq!(k.facets(), &[vec![1, 2], vec![3]]);
        assert_eq!(k.dim(), 1);
        assert_eq!(SimplicialComplex::new(vec![vec![]]).dim(), -1);
        assert_eq!(SimplicialComplex::new(vec![]).dim(), -2);
    }

    #[test]
    fn boundary_examples() {
        let edge = SimplicialComplex::new(vec![vec![0, 1]]);
        assert_eq!(boundary_matrix(&edge, 1).unwrap().to_dense(), vec![vec![-1], vec![1]]);
        assert_eq!(boundary_matrix(&edge, 0).unwrap().to_dense(), vec![vec![1, 1]]);
        let tri = SimplicialComplex::new(vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(smith_invariants(&boundary_matrix(&tri, 1).unwrap()).0, 2);
        let square = SimplicialComplex::new(vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        assert_eq!(smith_invariants(&boundary_matrix(&square, 1).unwrap()).0, 3);
        let h = integral_reduced_homology(&square).unwrap();
        assert_eq!(h.betti(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn homology_examples() {
        let point = SimplicialComplex::new(vec![vec![0]]);
        assert!(integral_reduced_homology(&point).unwrap().betti().is_empty());
        let h = integral_reduced_homology(&rp2()).unwrap();
        assert!(h.betti().is_empty());
        assert_eq!(h.torsion(1), &[BigInt::from(2)]);
        assert_eq!(wedge_summary(&h), WedgeSummary::NotAWedge);
        let empty = SimplicialComplex::new(vec![vec![]]);
        let h = integral_reduced_homology(&empty).unwrap();
        assert_eq!(h.betti(), BTreeMap::from([(-1, 1)]));
        assert_eq!(wedge_summary(&h), WedgeSummary::Wedge(vec![-1]));
        let two_points = SimplicialComplex::new(vec![vec![0], vec![1]]);
        assert_eq!(integral_reduced_homology(&two_points).unwrap().betti(), BTreeMap::from([(0, 1)]));
        let cone = SimplicialComplex::new(vec![vec![0, 1, 9], vec![1, 2, 9], vec![0, 2, 9]]);
        assert_eq!(wedge_summary(&integral_reduced_homology(&cone).unwrap()), WedgeSummary::Wedge(vec![]));
        let s2 = SimplicialComplex::new(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        let w = wedge_summary(&integral_reduced_homology(&s2).unwrap());
        assert_eq!(w, WedgeSummary::Wedge(vec![2]));
        assert_eq!(w.to_string(), "⋁1S^2");
        assert!(integral_reduced_homology(&SimplicialComplex::new(vec![])).unwrap().groups.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let big = SimplicialComplex::new(vec![(0..12).collect()]);
        assert!(matches!(integral_reduced_homology_with_budget(&big, 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn dense_smith_divisibility() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(-4), BigInt::from(-16)],
        ];
        assert_eq!(dense_smith(m), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let m = vec![vec![BigInt::from(2), BigInt::zero()], vec![BigInt::zero(), BigInt::from(3)]];
        assert_eq!(dense_smith(m), vec![BigInt::from(1), BigInt::from(6)]);
    }

    /// Rank over GF(p) by plain Gaussian elimination.
    fn rank_mod_p(m: &SparseMatrix, p: i64) -> usize {
        let mut a: Vec<Vec<i64>> = m.to_dense().into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(p)).collect()).collect();
        let (rows, cols) = (m.rows, m.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, piv);
            let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
            for r in 0..rows {
                if r != rank && a[r][c] != 0 {
                    let f = a[r][c] * inv % p;
                    for j in 0..cols {
                        a[r][j] = (a[r][j] - f * a[rank][j]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        proptest::collection::vec(proptest::collection::btree_set(0usize..7, 1..5), 1..9)
            .prop_map(|fs| SimplicialComplex::new(fs.into_iter().map(|s| s.into_iter().collect()).collect()))
    }

    proptest! {
        #[test]
        fn euler_characteristic_matches_betti(k in arb_complex()) {
            let h = integral_reduced_homology(&k).unwrap();
            let chi: i64 = h.groups.iter().map(|g| if g.dim % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum();
            prop_assert_eq!(chi, k.reduced_euler_characteristic().unwrap());
        }

        #[test]
        fn snf_rank_matches_large_prime_rank(k in arb_complex()) {
            let faces = k.faces(DEFAULT_FACE_BUDGET).unwrap();
            for d in 0..faces.len() - 1 {
                let b = boundary_from_faces(&faces, d);
                prop_assert_eq!(smith_invariants(&b).0, rank_mod_p(&b, 1_000_003));
            }
        }

        #[test]
        fn torsion_factors_divide(k in arb_complex()) {
            let h = integral_reduced_homology(&k).unwrap();
            for g in &h.groups {
                for w in g.torsion.windows(2) {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                }
                prop_assert!(g.torsion.iter().all(|t| *t > BigInt::one()));
            }
        }
    }
}
