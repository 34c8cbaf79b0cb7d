//! Finite posets with explicit cover relations.

use std::collections::BTreeSet;
use std::ops::Deref;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homology::SimplicialComplex;

#[derive(Clone, Debug)]
pub struct Poset<T> {
    elements: Vec<T>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers_up: Vec<Vec<usize>>,
    covers_down: Vec<Vec<usize>>,
    linear: Vec<usize>,
}

impl<T> Poset<T> {
    /// Builds a poset from a `leq` predicate, checking the partial-order axioms
    /// on all pairs and triples.
    pub fn from_order(elements: Vec<T>, leq: impl Fn(&T, &T) -> bool) -> Result<Self> {
        let n = elements.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            if !leq(&elements[x], &elements[x]) {
                return Err(Error::NotAPartialOrder(format!("element {x} is not reflexive")));
            }
            for y in 0..n {
                if x != y && leq(&elements[x], &elements[y]) {
                    if leq(&elements[y], &elements[x]) {
                        return Err(Error::NotAPartialOrder(format!("elements {x} and {y} violate antisymmetry")));
                    }
                    up[x].insert(y);
                }
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if !up[y].is_subset(&up[x]) {
                    let z = up[y].difference(&up[x]).next().unwrap();
                    return Err(Error::NotAPartialOrder(format!("{x} <= {y} <= {z} but not {x} <= {z}")));
                }
            }
        }
        Ok(Self::from_strict_up(elements, up))
    }

    /// Builds a poset from its Hasse diagram, rejecting cycles and covers
    /// implied by transitivity.
    pub fn from_covers(elements: Vec<T>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(x, y) in covers {
            if x >= n || y >= n || x == y {
                return Err(Error::NotAPartialOrder(format!("bad cover pair ({x}, {y})")));
            }
            succ[x].push(y);
            indeg[y] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::NotAPartialOrder("cover relation has a cycle".into()));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &v in order.iter().rev() {
            let mut s = FixedBitSet::with_capacity(n);
            for &w in &succ[v] {
                s.insert(w);
                s.union_with(&up[w]);
            }
            up[v] = s;
        }
        let p = Self::from_strict_up(elements, up);
        let mut given: Vec<(usize, usize)> = covers.to_vec();
        given.sort_unstable();
        given.dedup();
        if given.len() != covers.len() || given != p.cover_pairs() {
            return Err(Error::NotAPartialOrder("a listed cover is implied by transitivity".into()));
        }
        Ok(p)
    }

    /// Trusted constructor: `up[x]` is the strict up-set of `x` and is already
    /// transitive and acyclic.
    pub(crate) fn from_strict_up(elements: Vec<T>, up: Vec<FixedBitSet>) -> Self {
        let n = elements.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            for y in up[x].ones() {
                down[y].insert(x);
            }
        }
        let mut covers_up = vec![Vec::new(); n];
        let mut covers_down = vec![Vec::new(); n];
        for x in 0..n {
            let mut above = FixedBitSet::with_capacity(n);
            for z in up[x].ones() {
                above.union_with(&up[z]);
            }
            for y in up[x].difference(&above) {
                covers_up[x].push(y);
                covers_down[y].push(x);
            }
        }
        let mut linear: Vec<usize> = (0..n).collect();
        linear.sort_by_key(|&x| (down[x].count_ones(..), x));
        Poset { elements, up, down, covers_up, covers_down, linear }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn element(&self, i: usize) -> &T {
        &self.elements[i]
    }
    pub fn elements(&self) -> &[T] {
        &self.elements
    }
    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.up[x].contains(y)
    }
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }
    /// Strict up-set.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }
    /// Strict down-set.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }
    /// Elements covering `x`, sorted by index.
    pub fn covers_up(&self, x: usize) -> &[usize] {
        &self.covers_up[x]
    }
    /// Elements covered by `x`, sorted by index.
    pub fn covers_down(&self, x: usize) -> &[usize] {
        &self.covers_down[x]
    }
    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.covers_up[x].binary_search(&y).is_ok()
    }
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> =
            (0..self.len()).flat_map(|x| self.covers_up[x].iter().map(move |&y| (x, y))).collect();
        v.sort_unstable();
        v
    }
    /// A linear extension (elements sorted by down-set size).
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }
    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.covers_down[x].is_empty()).collect()
    }
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.covers_up[x].is_empty()).collect()
    }

    /// Induced subposet on the given indices (kept in the given order).
    pub fn subposet(&self, indices: &[usize]) -> Poset<T>
    where
        T: Clone,
    {
        let k = indices.len();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in indices.iter().enumerate() {
            pos[x] = i;
        }
        let up = indices
            .iter()
            .map(|&x| {
                let mut s = FixedBitSet::with_capacity(k);
                for y in self.up[x].ones() {
                    if pos[y] != usize::MAX {
                        s.insert(pos[y]);
                    }
                }
                s
            })
            .collect();
        Poset::from_strict_up(indices.iter().map(|&x| self.elements[x].clone()).collect(), up)
    }

    /// Maximal chains, from minimal to maximal elements, depth-first with
    /// cover targets in index order.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for m in self.minimal_elements() {
            let mut chain = vec![m];
            self.chains_from(&mut chain, &mut out);
        }
        out
    }

    fn chains_from(&self, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let x = *chain.last().unwrap();
        if self.covers_up[x].is_empty() {
            out.push(chain.clone());
            return;
        }
        for &y in &self.covers_up[x] {
            chain.push(y);
            self.chains_from(chain, out);
            chain.pop();
        }
    }

    /// Order complex: faces are chains. The empty poset gives the complex {∅}.
    pub fn order_complex(&self) -> SimplicialComplex {
        if self.is_empty() {
            return SimplicialComplex::new(vec![vec![]]);
        }
        SimplicialComplex::new(self.maximal_chains())
    }

    /// Lengths of maximal chains through covers from `x` up to a maximal element.
    fn lengths_up(&self) -> Vec<BTreeSet<usize>> {
        let mut memo: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.len()];
        for &x in self.linear.iter().rev() {
            if self.covers_up[x].is_empty() {
                memo[x].insert(0);
            } else {
                let mut s = BTreeSet::new();
                for &y in &self.covers_up[x] {
                    s.extend(memo[y].iter().map(|l| l + 1));
                }
                memo[x] = s;
            }
        }
        memo
    }

    /// Hasse diagram in DOT, edges drawn bottom to top.
    pub fn to_dot(&self, label: impl Fn(&T) -> String) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, e) in self.elements.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", label(e).replace('"', "\\\"")));
        }
        for (x, y) in self.cover_pairs() {
            out.push_str(&format!("  n{x} -> n{y};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// `{"elements": [...], "covers": [[x, y], ...]}`.
    pub fn to_json(&self, label: impl Fn(&T) -> String) -> Value {
        json!({
            "elements": self.elements.iter().map(label).collect::<Vec<_>>(),
            "covers": self.cover_pairs().into_iter().map(|(x, y)| vec![x, y]).collect::<Vec<_>>(),
        })
    }
}

/// A poset with a least and a greatest element.
#[derive(Clone, Debug)]
pub struct BoundedPoset<T> {
    poset: Poset<T>,
    bottom: usize,
    top: usize,
}

impl<T> Deref for BoundedPoset<T> {
    type Target = Poset<T>;
    fn deref(&self) -> &Poset<T> {
        &self.poset
    }
}

impl<T> BoundedPoset<T> {
    pub fn new(poset: Poset<T>) -> Result<Self> {
        let mins = poset.minimal_elements();
        let maxs = poset.maximal_elements();
        if mins.len() != 1 || maxs.len() != 1 {
            return Err(Error::Unbounded);
        }
        Ok(BoundedPoset { bottom: mins[0], top: maxs[0], poset })
    }
    pub fn poset(&self) -> &Poset<T> {
        &self.poset
    }
    pub fn bottom(&self) -> usize {
        self.bottom
    }
    pub fn top(&self) -> usize {
        self.top
    }

    /// Sorted indices of `[x, y]`.
    pub fn interval_indices(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        if !self.leq(x, y) {
            return Err(Error::NotLeq);
        }
        let mut v: Vec<usize> = self.up[x].intersection(&self.down[y]).collect();
        v.push(x);
        if x != y {
            v.push(y);
        }
        v.sort_unstable();
        Ok(v)
    }

    pub fn interval(&self, x: usize, y: usize) -> Result<BoundedPoset<T>>
    where
        T: Clone,
    {
        let idx = self.interval_indices(x, y)?;
        BoundedPoset::new(self.subposet(&idx))
    }

    /// Möbius value μ(x, y).
    pub fn mobius(&self, x: usize, y: usize) -> BigInt {
        if !self.leq(x, y) {
            return BigInt::zero();
        }
        let mut mu: Vec<Option<BigInt>> = vec![None; self.len()];
        for &z in self.linear.iter() {
            if !self.leq(x, z) || !self.leq(z, y) {
                continue;
            }
            let v = if z == x {
                BigInt::one()
            } else {
                let mut s = BigInt::zero();
                for w in self.down[z].ones() {
                    if let Some(m) = &mu[w] {
                        s += m;
                    }
                }
                -s
            };
            mu[z] = Some(v);
        }
        mu[y].take().unwrap()
    }

    /// μ(0̂, 1̂).
    pub fn mobius_invariant(&self) -> BigInt {
        self.mobius(self.bottom, self.top)
    }

    /// Maximal chains from bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chain = vec![self.bottom];
        self.poset.chains_from(&mut chain, &mut out);
        out
    }

    /// Number of maximal chains, without enumerating them.
    pub fn count_maximal_chains(&self) -> BigInt {
        let mut cnt: Vec<BigInt> = vec![BigInt::zero(); self.len()];
        for &x in self.linear.iter().rev() {
            cnt[x] = if self.covers_up[x].is_empty() {
                BigInt::one()
            } else {
                self.covers_up[x].iter().map(|&y| cnt[y].clone()).sum()
            };
        }
        cnt[self.bottom].clone()
    }

    /// Set of lengths of maximal chains.
    pub fn chain_lengths(&self) -> BTreeSet<usize> {
        self.lengths_up().swap_remove(self.bottom)
    }

    pub fn length(&self) -> usize {
        self.chain_lengths().into_iter().max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        self.chain_lengths().len() <= 1
    }

    /// Every closed interval is semimodular: whenever `a`, `b` cover `c`, each
    /// common upper bound of `a`, `b` lies above some common cover of them.
    pub fn is_totally_semimodular(&self) -> bool {
        let n = self.len();
        for c in 0..n {
            let cov = &self.covers_up[c];
            for (i, &a) in cov.iter().enumerate() {
                for &b in &cov[i + 1..] {
                    let mut common = self.up[a].clone();
                    common.intersect_with(&self.up[b]);
                    if common.is_clear() {
                        continue;
                    }
                    let mut reach = FixedBitSet::with_capacity(n);
                    for &d in &self.covers_up[a] {
                        if self.is_cover(b, d) {
                            reach.insert(d);
                            reach.union_with(&self.up[d]);
                        }
                    }
                    if !common.is_subset(&reach) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Proper part (bottom and top removed) together with the original indices.
    pub fn proper_part(&self) -> Result<(Poset<T>, Vec<usize>)>
    where
        T: Clone,
    {
        if self.bottom == self.top {
            return Err(Error::OutOfRange("proper part needs length at least one".into()));
        }
        let idx: Vec<usize> = (0..self.len()).filter(|&x| x != self.bottom && x != self.top).collect();
        Ok((self.subposet(&idx), idx))
    }

    /// Order complex of the proper part.
    pub fn proper_order_complex(&self) -> Result<SimplicialComplex>
    where
        T: Clone,
    {
        Ok(self.proper_part()?.0.order_complex())
    }
}

/// Componentwise product of two bounded posets.
pub fn product<T: Clone, U: Clone>(p: &BoundedPoset<T>, q: &BoundedPoset<U>) -> BoundedPoset<(T, U)> {
    let (a, b) = (p.len(), q.len());
    let mut elements = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            elements.push((p.element(i).clone(), q.element(j).clone()));
        }
    }
    let up = (0..a * b)
        .map(|x| {
            let (i, j) = (x / b, x % b);
            let mut s = FixedBitSet::with_capacity(a * b);
            for y in 0..a * b {
                let (k, l) = (y / b, y % b);
                if x != y && p.leq(i, k) && q.leq(j, l) {
                    s.insert(y);
                }
            }
            s
        })
        .collect();
    BoundedPoset::new(Poset::from_strict_up(elements, up)).expect("product of bounded posets is bounded")
}
