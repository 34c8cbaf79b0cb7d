//! Recursive atom orderings, chain-edge labelings, falling chains and
//! brute-force shelling of simplicial complexes.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::FamilyTag;
use crate::error::{Error, Result};
use crate::evenposet::{CanonicalFrame, EvenPoset};
use crate::homology::SimplicialComplex;
use crate::multigraph::{Multigraph, SubgraphSet};
use crate::poset::BoundedPoset;

/// Atom orders of the upper intervals `[x, 1̂]`. An order may depend on the
/// set of atoms that the enclosing ordering requires to come first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomOrdering {
    uniform: Vec<Option<Vec<usize>>>,
    contextual: HashMap<(usize, Vec<usize>), Vec<usize>>,
}

impl AtomOrdering {
    /// One fixed order per element, used in every context.
    pub fn uniform(orders: Vec<Vec<usize>>) -> Self {
        AtomOrdering { uniform: orders.into_iter().map(Some).collect(), contextual: HashMap::new() }
    }

    /// Order of the atoms of `[x, 1̂]` when the atoms in `first` (sorted) must lead.
    pub fn order(&self, x: usize, first: &[usize]) -> Option<&[usize]> {
        if let Some(o) = self.contextual.get(&(x, first.to_vec())) {
            return Some(o);
        }
        self.uniform.get(x).and_then(|o| o.as_deref())
    }

    pub fn set_contextual(&mut self, x: usize, first: Vec<usize>, order: Vec<usize>) {
        self.contextual.insert((x, first), order);
    }

    /// Orders at the bottom-reachable contexts, for reporting.
    pub fn to_json<T>(&self, p: &BoundedPoset<T>, label: impl Fn(usize) -> String) -> Value {
        let mut out = serde_json::Map::new();
        let mut seen = HashSet::new();
        let mut stack = vec![(p.bottom(), Vec::<usize>::new())];
        while let Some((x, first)) = stack.pop() {
            if !seen.insert((x, first.clone())) {
                continue;
            }
            let Some(order) = self.order(x, &first) else { continue };
            let key = if self.contextual.contains_key(&(x, first.clone())) && !first.is_empty() {
                format!("{} | {}", label(x), first.iter().map(|&f| label(f)).collect::<Vec<_>>().join(","))
            } else {
                label(x)
            };
            out.insert(key, json!(order.iter().map(|&a| label(a)).collect::<Vec<_>>()));
            let mut earlier = Earlier::new(p.len());
            for &a in order {
                for reading in [Reading::Belongs, Reading::Covers] {
                    stack.push((a, earlier.lead(p, a, reading)));
                }
                earlier.add(p, a);
            }
        }
        Value::Object(out)
    }
}

/// How condition (1) identifies the atoms of `[α_j, 1̂]` that must come first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    /// Atoms lying in some earlier `[α_i, 1̂]`.
    Belongs,
    /// Atoms covering some earlier `α_i`.
    Covers,
}

impl Reading {
    fn other(self) -> Reading {
        match self {
            Reading::Belongs => Reading::Covers,
            Reading::Covers => Reading::Belongs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RaoViolation {
    /// The order at `element` is not a permutation of its upper covers.
    NotAPermutation { element: usize },
    /// Condition (1): `offending` precedes an atom of `first` at `element`.
    FirstNotLeading { element: usize, first: Vec<usize>, offending: usize },
    /// Condition (2): `atoms[i] < y` and `atoms[j] < y`, but no atom of
    /// `[atoms[j], 1̂]` below `y` lies above an earlier atom.
    NoEarlierAtomBelow { element: usize, earlier: usize, later: usize, above: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaoReport {
    pub violation: Option<RaoViolation>,
    /// First `(element, atom)` at which the two readings of condition (1)
    /// give different leading sets.
    pub divergence: Option<(usize, usize)>,
}

impl RaoReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Union of the strict up-sets and of the upper covers of the atoms placed so far.
#[derive(Clone)]
struct Earlier {
    up: FixedBitSet,
    covers: FixedBitSet,
}

impl Earlier {
    fn new(len: usize) -> Self {
        Earlier { up: FixedBitSet::with_capacity(len), covers: FixedBitSet::with_capacity(len) }
    }

    fn add<T>(&mut self, p: &BoundedPoset<T>, a: usize) {
        self.up.union_with(p.up_set(a));
        p.covers_up(a).iter().for_each(|&z| self.covers.insert(z));
    }

    /// Atoms of `[a, 1̂]` that must lead in its ordering.
    fn lead<T>(&self, p: &BoundedPoset<T>, a: usize, reading: Reading) -> Vec<usize> {
        let set = match reading {
            Reading::Belongs => &self.up,
            Reading::Covers => &self.covers,
        };
        let mut f: Vec<usize> = p.covers_up(a).iter().copied().filter(|&z| set.contains(z)).collect();
        f.sort_unstable();
        f
    }
}

/// Checks condition (2) for the atom `a` placed after the atoms whose strict
/// up-sets union to `earlier`; returns an offending `y`.
fn condition_two<T>(p: &BoundedPoset<T>, a: usize, earlier: &Earlier, first: &[usize]) -> Option<usize> {
    let mut reach = FixedBitSet::with_capacity(p.len());
    for &z in first {
        reach.insert(z);
        reach.union_with(p.up_set(z));
    }
    let mut both = earlier.up.clone();
    both.intersect_with(p.up_set(a));
    both.difference(&reach).next()
}

/// Checks the recursive atom ordering conditions in every context reachable
/// from the bottom, under the `Belongs` reading, and reports where the
/// `Covers` reading would pick different leading atoms.
pub fn verify_recursive_atom_ordering<T>(p: &BoundedPoset<T>, ord: &AtomOrdering) -> RaoReport {
    let mut r = verify_recursive_atom_ordering_as(p, ord, Reading::Belongs);
    if r.divergence.is_none() {
        r.divergence = first_divergence(p, ord);
    }
    r
}

/// First context, reachable under either reading, where the readings disagree.
fn first_divergence<T>(p: &BoundedPoset<T>, ord: &AtomOrdering) -> Option<(usize, usize)> {
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut stack = vec![(p.bottom(), Vec::<usize>::new())];
    while let Some((x, first)) = stack.pop() {
        if !seen.insert((x, first.clone())) {
            continue;
        }
        let Some(order) = ord.order(x, &first) else { continue };
        let mut earlier = Earlier::new(p.len());
        for &a in order {
            let fb = earlier.lead(p, a, Reading::Belongs);
            let fc = earlier.lead(p, a, Reading::Covers);
            if fb != fc {
                return Some((x, a));
            }
            earlier.add(p, a);
            stack.push((a, fb));
        }
    }
    None
}

/// Checks the recursive atom ordering conditions under the given reading.
/// Under `Covers`, condition (2) asks for `z` covering both `α_j` and an earlier `α_k`.
pub fn verify_recursive_atom_ordering_as<T>(p: &BoundedPoset<T>, ord: &AtomOrdering, reading: Reading) -> RaoReport {
    let mut report = RaoReport { violation: None, divergence: None };
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut stack = vec![(p.bottom(), Vec::<usize>::new())];
    while let Some((x, first)) = stack.pop() {
        if !seen.insert((x, first.clone())) {
            continue;
        }
        let atoms = p.covers_up(x);
        if atoms.is_empty() {
            continue;
        }
        let Some(order) = ord.order(x, &first) else {
            report.violation = Some(RaoViolation::NotAPermutation { element: x });
            return report;
        };
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        let mut expect = atoms.to_vec();
        expect.sort_unstable();
        if sorted != expect {
            report.violation = Some(RaoViolation::NotAPermutation { element: x });
            return report;
        }
        let lead: HashSet<usize> = first.iter().copied().collect();
        if let Some(pos) = order.iter().position(|a| !lead.contains(a)) {
            if let Some(&late) = order[pos..].iter().find(|a| lead.contains(a)) {
                let _ = late;
                report.violation =
                    Some(RaoViolation::FirstNotLeading { element: x, first: first.clone(), offending: order[pos] });
                return report;
            }
        }
        let mut earlier = Earlier::new(p.len());
        for (j, &a) in order.iter().enumerate() {
            let f = earlier.lead(p, a, reading);
            if report.divergence.is_none() && f != earlier.lead(p, a, reading.other()) {
                report.divergence = Some((x, a));
            }
            if let Some(y) = condition_two(p, a, &earlier, &f) {
                let i = order[..j].iter().copied().find(|&e| p.lt(e, y)).expect("some earlier atom lies below");
                report.violation = Some(RaoViolation::NoEarlierAtomBelow { element: x, earlier: i, later: a, above: y });
                return report;
            }
            earlier.add(p, a);
            stack.push((a, f));
        }
    }
    report
}

/// Leading sets under the chosen reading, for reporting the two readings side by side.
pub fn leading_sets<T>(p: &BoundedPoset<T>, order: &[usize], reading: Reading) -> Vec<Vec<usize>> {
    let mut earlier = Earlier::new(p.len());
    let mut out = Vec::with_capacity(order.len());
    for &a in order {
        out.push(earlier.lead(p, a, reading));
        earlier.add(p, a);
    }
    out
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

struct RaoSearch<'a, T> {
    p: &'a BoundedPoset<T>,
    memo: HashMap<(usize, Vec<usize>), Option<Vec<usize>>>,
    nodes: u64,
    budget: u64,
    reading: Reading,
}

impl<T> RaoSearch<'_, T> {
    fn solve(&mut self, x: usize, first: Vec<usize>) -> Result<bool> {
        if let Some(r) = self.memo.get(&(x, first.clone())) {
            return Ok(r.is_some());
        }
        let atoms = self.p.covers_up(x).to_vec();
        let found = if atoms.is_empty() {
            Some(Vec::new())
        } else {
            let lead: Vec<usize> = first.clone();
            let rest: Vec<usize> = atoms.iter().copied().filter(|a| !lead.contains(a)).collect();
            let mut prefix = Vec::with_capacity(atoms.len());
            let earlier = Earlier::new(self.p.len());
            if self.extend(&mut prefix, lead, rest, earlier)? {
                Some(prefix)
            } else {
                None
            }
        };
        let ok = found.is_some();
        self.memo.insert((x, first), found);
        Ok(ok)
    }

    fn extend(&mut self, prefix: &mut Vec<usize>, lead: Vec<usize>, rest: Vec<usize>, earlier: Earlier) -> Result<bool> {
        if lead.is_empty() && rest.is_empty() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { what: "recursive atom ordering search", budget: self.budget });
        }
        let from_lead = !lead.is_empty();
        let pool = if from_lead { &lead } else { &rest };
        let mut cands: Vec<(usize, Vec<usize>)> = pool.iter().map(|&a| (a, earlier.lead(self.p, a, self.reading))).collect();
        cands.sort_by_key(|(a, f)| (std::cmp::Reverse(f.len()), *a));
        for (a, f) in cands {
            if condition_two(self.p, a, &earlier, &f).is_some() {
                continue;
            }
            if !self.solve(a, f)? {
                continue;
            }
            let mut next_lead = lead.clone();
            let mut next_rest = rest.clone();
            if from_lead {
                next_lead.retain(|&b| b != a);
            } else {
                next_rest.retain(|&b| b != a);
            }
            let mut next_earlier = earlier.clone();
            next_earlier.add(self.p, a);
            prefix.push(a);
            if self.extend(prefix, next_lead, next_rest, next_earlier)? {
                return Ok(true);
            }
            prefix.pop();
        }
        Ok(false)
    }
}

/// Searches all (context-dependent) atom orderings under the `Belongs`
/// reading. `Ok(None)` is a proof that none exists; running out of budget is
/// an error.
pub fn find_recursive_atom_ordering<T>(p: &BoundedPoset<T>, budget: u64) -> Result<Option<AtomOrdering>> {
    find_recursive_atom_ordering_as(p, budget, Reading::Belongs)
}

pub fn find_recursive_atom_ordering_as<T>(p: &BoundedPoset<T>, budget: u64, reading: Reading) -> Result<Option<AtomOrdering>> {
    let mut spent = 0;
    search_counted(p, budget, reading, &mut spent)
}

fn search_counted<T>(p: &BoundedPoset<T>, budget: u64, reading: Reading, spent: &mut u64) -> Result<Option<AtomOrdering>> {
    let mut s = RaoSearch { p, memo: HashMap::new(), nodes: 0, budget, reading };
    let found = s.solve(p.bottom(), Vec::new());
    *spent += s.nodes;
    if !found? {
        return Ok(None);
    }
    let mut ord = AtomOrdering { uniform: vec![None; p.len()], contextual: HashMap::new() };
    for ((x, first), order) in s.memo {
        if let Some(order) = order {
            if !order.is_empty() {
                ord.set_contextual(x, first, order);
            }
        }
    }
    Ok(Some(ord))
}

/// Chain-edge labeling evaluated along a chain from the bottom.
pub trait ChainEdgeLabeling {
    type State: Clone;
    fn start(&self) -> Self::State;
    /// Label of the cover from the state's current element to `y`, with the extended state.
    fn step(&self, state: &Self::State, y: usize) -> Option<(i64, Self::State)>;

    /// Labels along a saturated chain starting at the bottom.
    fn labels(&self, chain: &[usize]) -> Option<Vec<i64>> {
        let mut s = self.start();
        let mut out = Vec::with_capacity(chain.len().saturating_sub(1));
        for &y in chain.iter().skip(1) {
            let (l, t) = self.step(&s, y)?;
            out.push(l);
            s = t;
        }
        Some(out)
    }
}

/// Labels given explicitly per chain prefix: `(prefix from the bottom, y) -> label`.
#[derive(Clone, Debug, Default)]
pub struct ExplicitLabeling {
    pub bottom: usize,
    pub labels: HashMap<(Vec<usize>, usize), i64>,
}

impl ExplicitLabeling {
    /// Builds a labeling from maximal chains and their label sequences.
    /// Chains sharing a prefix must agree on it.
    pub fn from_chains(bottom: usize, chains: &[(Vec<usize>, Vec<i64>)]) -> Result<Self> {
        let mut labels = HashMap::new();
        for (chain, ls) in chains {
            if chain.len() != ls.len() + 1 || chain.first() != Some(&bottom) {
                return Err(Error::NotMaximalChain);
            }
            for k in 0..ls.len() {
                let key = (chain[..=k].to_vec(), chain[k + 1]);
                if let Some(&old) = labels.get(&key) {
                    if old != ls[k] {
                        return Err(Error::InvalidOrdering("chains sharing a prefix disagree on its labels".into()));
                    }
                }
                labels.insert(key, ls[k]);
            }
        }
        Ok(ExplicitLabeling { bottom, labels })
    }
}

impl ChainEdgeLabeling for ExplicitLabeling {
    type State = Vec<usize>;
    fn start(&self) -> Vec<usize> {
        vec![self.bottom]
    }
    fn step(&self, state: &Vec<usize>, y: usize) -> Option<(i64, Vec<usize>)> {
        let l = *self.labels.get(&(state.clone(), y))?;
        let mut s = state.clone();
        s.push(y);
        Some((l, s))
    }
}

/// Labeling induced by a recursive atom ordering: atoms of `[x, 1̂]` that must
/// lead get labels just below the label of the cover into `x`, the others
/// labels just above it, increasing along the order.
pub struct RaoLabeling<'a, T> {
    p: &'a BoundedPoset<T>,
    ord: &'a AtomOrdering,
    reading: Reading,
}

#[derive(Clone, Debug)]
pub struct RaoState {
    x: usize,
    first: Vec<usize>,
    label: i64,
}

impl<'a, T> ChainEdgeLabeling for RaoLabeling<'a, T> {
    type State = RaoState;
    fn start(&self) -> RaoState {
        RaoState { x: self.p.bottom(), first: Vec::new(), label: 0 }
    }
    fn step(&self, s: &RaoState, y: usize) -> Option<(i64, RaoState)> {
        let order = self.ord.order(s.x, &s.first)?;
        let pos = order.iter().position(|&a| a == y)?;
        let f = s.first.len() as i64;
        let i = pos as i64 + 1;
        let label = if i <= f { s.label - f - 1 + i } else { s.label + (i - f) };
        let mut earlier = Earlier::new(self.p.len());
        for &a in &order[..pos] {
            earlier.add(self.p, a);
        }
        let first = earlier.lead(self.p, y, self.reading);
        Some((label, RaoState { x: y, first, label }))
    }
}

/// The labeling built from an ordering verified under the `Belongs` reading.
pub fn cl_labeling_from_rao<'a, T>(p: &'a BoundedPoset<T>, ord: &'a AtomOrdering) -> Result<RaoLabeling<'a, T>> {
    cl_labeling_from_rao_as(p, ord, Reading::Belongs)
}

pub fn cl_labeling_from_rao_as<'a, T>(p: &'a BoundedPoset<T>, ord: &'a AtomOrdering, reading: Reading) -> Result<RaoLabeling<'a, T>> {
    let r = verify_recursive_atom_ordering_as(p, ord, reading);
    if let Some(v) = r.violation {
        return Err(Error::InvalidOrdering(format!("{v:?}")));
    }
    Ok(RaoLabeling { p, ord, reading })
}

impl<'a, T> RaoLabeling<'a, T> {
    /// The same construction without verifying the ordering first; the
    /// result need not be a CL-labeling.
    pub fn unchecked(p: &'a BoundedPoset<T>, ord: &'a AtomOrdering, reading: Reading) -> Self {
        RaoLabeling { p, ord, reading }
    }
}

fn increasing(ls: &[i64]) -> bool {
    ls.windows(2).all(|w| w[0] < w[1])
}

/// A rooted interval where the labeling fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClFailure {
    pub root: Vec<usize>,
    pub top: usize,
    pub increasing_chains: usize,
}

/// Checks that every rooted interval has exactly one strictly increasing
/// maximal chain and that it strictly precedes all others lexicographically.
pub fn verify_cl_labeling<T, L: ChainEdgeLabeling>(p: &BoundedPoset<T>, lab: &L) -> std::result::Result<(), ClFailure> {
    struct Best {
        increasing: usize,
        min: Vec<i64>,
        min_unique: bool,
        min_increasing: bool,
    }
    fn collect<T, L: ChainEdgeLabeling>(
        p: &BoundedPoset<T>,
        lab: &L,
        x: usize,
        s: &L::State,
        seq: &mut Vec<i64>,
        out: &mut HashMap<usize, Best>,
        undefined: &mut bool,
    ) {
        for &y in p.covers_up(x) {
            let Some((l, t)) = lab.step(s, y) else {
                *undefined = true;
                return;
            };
            seq.push(l);
            let inc = increasing(seq);
            match out.get_mut(&y) {
                None => {
                    out.insert(y, Best { increasing: inc as usize, min: seq.clone(), min_unique: true, min_increasing: inc });
                }
                Some(b) => {
                    b.increasing += inc as usize;
                    match seq.as_slice().cmp(b.min.as_slice()) {
                        std::cmp::Ordering::Less => {
                            b.min = seq.clone();
                            b.min_unique = true;
                            b.min_increasing = inc;
                        }
                        std::cmp::Ordering::Equal => b.min_unique = false,
                        std::cmp::Ordering::Greater => {}
                    }
                }
            }
            collect(p, lab, y, &t, seq, out, undefined);
            seq.pop();
        }
    }
    let mut stack = vec![(vec![p.bottom()], lab.start())];
    while let Some((root, s)) = stack.pop() {
        let x = *root.last().unwrap();
        let mut out = HashMap::new();
        let mut undefined = false;
        collect(p, lab, x, &s, &mut Vec::new(), &mut out, &mut undefined);
        if undefined {
            return Err(ClFailure { root, top: x, increasing_chains: 0 });
        }
        let mut tops: Vec<usize> = out.keys().copied().collect();
        tops.sort_unstable();
        for y in tops {
            let b = &out[&y];
            if b.increasing != 1 || !b.min_unique || !b.min_increasing {
                return Err(ClFailure { root, top: y, increasing_chains: b.increasing });
            }
        }
        for &y in p.covers_up(x) {
            let (_, t) = lab.step(&s, y).expect("checked above");
            let mut r = root.clone();
            r.push(y);
            stack.push((r, t));
        }
    }
    Ok(())
}

/// Maximal chains whose labels weakly decrease.
pub fn falling_chains<T, L: ChainEdgeLabeling>(p: &BoundedPoset<T>, lab: &L) -> Vec<Vec<usize>> {
    fn go<T, L: ChainEdgeLabeling>(
        p: &BoundedPoset<T>,
        lab: &L,
        s: &L::State,
        last: Option<i64>,
        chain: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = *chain.last().unwrap();
        if x == p.top() {
            out.push(chain.clone());
            return;
        }
        for &y in p.covers_up(x) {
            let Some((l, t)) = lab.step(s, y) else { continue };
            if last.map_or(true, |m| m >= l) {
                chain.push(y);
                go(p, lab, &t, Some(l), chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, lab, &lab.start(), None, &mut vec![p.bottom()], &mut out);
    out
}

/// Number of chains of each length.
pub fn counts_by_length(chains: &[Vec<usize>]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for c in chains {
        *m.entry(c.len() - 1).or_insert(0) += 1;
    }
    m
}

/// Chain rendered as `∅<23<123b1<…`.
pub fn chain_string(ep: &EvenPoset, chain: &[usize]) -> String {
    chain.iter().map(|&i| ep.label(i)).collect::<Vec<_>>().join("<")
}

/// Ground bits of a canonical host in the lexicographic order attached to `i`.
pub fn lex_order(ep: &EvenPoset, i: SubgraphSet) -> Result<Vec<usize>> {
    let f = ep.frame()?;
    ep.require(i)?;
    Ok(lex_order_in(&f, i))
}

fn lex_order_in(f: &CanonicalFrame, i: SubgraphSet) -> Vec<usize> {
    let vs = |r: std::ops::RangeInclusive<usize>| r.map(|v| f.vertex(v)).collect::<Vec<_>>();
    let a_in = (1..=f.two_m).filter(|&k| i.contains_bit(f.a(k))).max();
    let b_in = (1..=f.l).filter(|&k| i.contains_bit(f.b(k))).max();
    let a_all: Vec<usize> = (1..=f.two_m).map(|k| f.a(k)).collect();
    let b_all: Vec<usize> = (1..=f.l).map(|k| f.b(k)).collect();
    let mut out = Vec::with_capacity(f.n + f.two_m + f.l);
    let head = vs(1..=f.n.min(2));
    let tail = if f.n >= 3 { vs(3..=f.n) } else { Vec::new() };
    match (a_in, b_in) {
        (None, None) => {
            out.extend(vs(1..=f.n));
            out.extend(&a_all);
            out.extend(&b_all);
        }
        (Some(k), None) => {
            out.extend(&head);
            out.extend(&a_all[..k]);
            out.extend(&tail);
            out.extend(&a_all[k..]);
            out.extend(&b_all);
        }
        (_, Some(k)) => {
            out.extend(&head);
            out.extend(&a_all);
            out.extend(&b_all[..k]);
            out.extend(&tail);
            out.extend(&b_all[k..]);
        }
    }
    out
}

fn positions(order: &[usize], ground: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; ground];
    for (k, &b) in order.iter().enumerate() {
        pos[b] = k;
    }
    pos
}

fn atom_order_in(ep: &EvenPoset, f: &CanonicalFrame, x: usize) -> Vec<usize> {
    let i = ep.element(x);
    let pos = positions(&lex_order_in(f, i), f.n + f.two_m + f.l);
    let o1 = f.n % 2 == 0 && f.one_two_in_a();
    let mut atoms: Vec<(usize, (u8, Vec<usize>))> = ep
        .poset()
        .covers_up(x)
        .iter()
        .map(|&j| {
            let d = ep.element(j).minus(i);
            let mut seq: Vec<usize> = d.iter().map(|b| pos[b]).collect();
            seq.sort_unstable();
            let rank = if o1 {
                match (d.0 & 3).count_ones() {
                    1 => 0,
                    2 => 1,
                    _ => 2,
                }
            } else {
                0
            };
            (j, (rank, seq))
        })
        .collect();
    atoms.sort_by(|a, b| a.1.cmp(&b.1));
    atoms.into_iter().map(|(j, _)| j).collect()
}

/// Atoms of `[i, G]` in the explicit order used for canonical single-bundle hosts.
pub fn atom_order(ep: &EvenPoset, i: SubgraphSet) -> Result<Vec<SubgraphSet>> {
    let f = ep.frame()?;
    let x = ep.require(i)?;
    if x == ep.poset().top() {
        return Err(Error::NoAtoms);
    }
    Ok(atom_order_in(ep, &f, x).into_iter().map(|j| ep.element(j)).collect())
}

/// The explicit ordering at every element of a canonical even poset.
pub fn explicit_ordering(ep: &EvenPoset) -> Result<AtomOrdering> {
    let f = ep.frame()?;
    Ok(AtomOrdering::uniform((0..ep.len()).map(|x| atom_order_in(ep, &f, x)).collect()))
}

/// Step test for `i ⋖ ij ⋖ j` from the explicit ordering: true iff `j` lies
/// above an atom of `[i, G]` preceding `ij`.
fn threshold_step(ep: &EvenPoset, f: &CanonicalFrame, x: usize, xj: usize, y: usize) -> bool {
    let order = atom_order_in(ep, f, x);
    if order.first() == Some(&xj) {
        return false;
    }
    let (i, ij, j) = (ep.element(x), ep.element(xj), ep.element(y));
    let ground = f.n + f.two_m + f.l;
    let pi = positions(&lex_order_in(f, i), ground);
    let pj = positions(&lex_order_in(f, ij), ground);
    let d1 = ij.minus(i);
    let xmin = j.minus(ij).iter().min_by_key(|&b| pj[b]).expect("cover adds elements");
    let n_bit = f.vertex(f.n);
    let small = |b: usize| pi[b] <= pi[n_bit];
    let vmask = f.vertex_mask();
    let labels = d1.0 & !vmask;
    let ends = (d1.0 & 3).count_ones();
    if d1.0 & !vmask == 0 && ends > 0 {
        return pj[xmin] < pj[f.vertex(2)];
    }
    if d1.len() == 2 && (d1.0 & vmask).count_ones() == 1 && (labels & f.a_mask()).count_ones() == 1 {
        let a = labels.trailing_zeros() as usize;
        if small(a) {
            let v = (d1.0 & vmask).trailing_zeros() as usize;
            let t = if f.l > 0 && pj[f.b(1)] < pj[v] { f.b(1) } else { v };
            return pj[xmin] < pj[t];
        }
    }
    if d1.0 & vmask == 0 && d1.iter().all(|b| !small(b)) {
        return pj[xmin] <= pj[n_bit];
    }
    let rest = vmask & !ij.0;
    if rest != 0 && d1.iter().any(small) && SubgraphSet(labels).iter().any(|b| !small(b)) && ends % 2 == 0 {
        let v = rest.trailing_zeros() as usize;
        return pj[xmin] <= pj[v];
    }
    let xmax = d1.iter().max_by_key(|&b| pj[b]).expect("cover adds elements");
    pj[xmin] < pj[xmax]
}

/// Falling test for a maximal chain of a canonical even poset, computed from
/// the case-by-case thresholds rather than from labels.
pub fn threshold_falling_test(ep: &EvenPoset, chain: &[SubgraphSet]) -> Result<bool> {
    let f = ep.frame()?;
    let idx: Vec<usize> = chain.iter().map(|&s| ep.require(s)).collect::<Result<_>>()?;
    let p = ep.poset();
    if idx.first() != Some(&p.bottom()) || idx.last() != Some(&p.top()) || idx.windows(2).any(|w| !p.is_cover(w[0], w[1])) {
        return Err(Error::NotMaximalChain);
    }
    Ok(idx.windows(3).all(|w| threshold_step(ep, &f, w[0], w[1], w[2])))
}

/// Whether a falling chain is predicted: vertices 2 and 3 adjacent, or `n` even.
pub fn predicts_falling_chain(g: &Multigraph, f: &CanonicalFrame) -> bool {
    f.n % 2 == 0 || (f.n >= 3 && g.has_simple_edge(1, 2))
}

/// Whether a falling chain's length and its step adding vertex 1 fit the
/// predicted table of lengths and shapes.
pub fn chain_shape_allowed(g: &Multigraph, f: &CanonicalFrame, chain: &[SubgraphSet]) -> bool {
    let len = chain.len() - 1;
    let Some(k) = chain.iter().position(|s| s.contains_bit(0)) else {
        return false;
    };
    let d = chain[k].minus(chain[k - 1]);
    let half = f.a_size() / 2;
    let l = f.l;
    let vm = f.vertex_mask();
    let nv = (d.0 & vm).count_ones();
    let na = (d.0 & f.a_mask()).count_ones();
    let nb = (d.0 & f.b_mask()).count_ones();
    let has2 = d.contains_bit(1);
    let primed = matches!(f.family, FamilyTag::Bundle { primed: true, .. });
    let _ = g;
    if f.all_vertices_in_a() {
        if f.n % 2 == 1 {
            return false;
        }
        if l > 0 {
            let twelve_b = d.len() == 3 && nb == 1 && has2;
            let one_vb = d.len() == 3 && nb == 1 && nv == 2 && !has2;
            len + 1 == half + l && (twelve_b || (primed && one_vb))
        } else {
            let twelve_aa = d.len() == 4 && has2 && na == 2;
            let one_a = d.len() == 2 && na == 1 && !has2;
            if primed {
                (len + 1 == half || len == half) && (twelve_aa || one_a)
            } else {
                len + 1 == half && twelve_aa
            }
        }
    } else {
        let want = if f.n % 2 == 0 { half + l + 1 } else { half + l };
        let shape = if l > 0 {
            d.len() == 2 && nb == 1 && nv == 1
        } else {
            d.len() == 3 && nv >= 1 && !has2 && na >= 1 && na + nv == 3
        };
        len == want && shape
    }
}

/// Sphere dimensions predicted for the proper part, or `None` when it is contractible.
pub fn predicted_sphere_dimensions(g: &Multigraph, f: &CanonicalFrame) -> Option<BTreeSet<isize>> {
    if !predicts_falling_chain(g, f) {
        return None;
    }
    let half = (f.a_size() / 2) as isize;
    let l = f.l as isize;
    let two_three = f.n >= 3 && g.has_simple_edge(1, 2);
    Some(if f.n % 2 == 1 {
        BTreeSet::from([half + l - 2])
    } else if !f.all_vertices_in_a() {
        BTreeSet::from([half + l - 1])
    } else if l == 0 && two_three {
        // Falling chains have length half - 1 or half, so spheres sit two below.
        BTreeSet::from([half - 3, half - 2])
    } else {
        BTreeSet::from([half + l - 3])
    })
}

/// Facet order of a shelling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShellingOrder(pub Vec<usize>);

pub const MAX_SHELLING_FACETS: usize = 14;

fn facet_bits(k: &SimplicialComplex) -> Vec<FixedBitSet> {
    let nv = k.facets().iter().flatten().copied().max().map_or(0, |m| m + 1);
    k.facets()
        .iter()
        .map(|f| {
            let mut b = FixedBitSet::with_capacity(nv);
            f.iter().for_each(|&v| b.insert(v));
            b
        })
        .collect()
}

/// Whether adding facet `f` after `placed` keeps the intersection pure of
/// dimension `dim f - 1`.
fn shell_step(fs: &[FixedBitSet], placed: &[usize], f: usize) -> bool {
    if placed.is_empty() {
        return true;
    }
    let size = fs[f].count_ones(..);
    let inter: Vec<FixedBitSet> = placed
        .iter()
        .map(|&i| {
            let mut x = fs[f].clone();
            x.intersect_with(&fs[i]);
            x
        })
        .collect();
    let ridges: Vec<&FixedBitSet> = inter.iter().filter(|x| x.count_ones(..) + 1 == size).collect();
    if ridges.is_empty() {
        return false;
    }
    inter.iter().all(|x| ridges.iter().any(|r| x.is_subset(r)))
}

pub fn verify_shelling(k: &SimplicialComplex, order: &ShellingOrder) -> bool {
    let fs = facet_bits(k);
    let mut sorted = order.0.clone();
    sorted.sort_unstable();
    if sorted != (0..fs.len()).collect::<Vec<_>>() {
        return false;
    }
    (0..order.0.len()).all(|t| shell_step(&fs, &order.0[..t], order.0[t]))
}

/// Exhaustive search for a shelling (facets of any dimensions). `Ok(None)`
/// means no order works.
pub fn is_shellable_bruteforce(k: &SimplicialComplex) -> Result<Option<ShellingOrder>> {
    is_shellable_bruteforce_up_to(k, MAX_SHELLING_FACETS)
}

/// As [`is_shellable_bruteforce`] with a different facet limit (at most 26).
pub fn is_shellable_bruteforce_up_to(k: &SimplicialComplex, limit: usize) -> Result<Option<ShellingOrder>> {
    let limit = limit.min(26);
    let t = k.facets().len();
    if t > limit {
        return Err(Error::TooManyFacets { facets: t, limit });
    }
    if t <= 1 {
        return Ok(Some(ShellingOrder((0..t).collect())));
    }
    let fs = facet_bits(k);
    let mut dead = vec![false; 1 << t];
    let mut order = Vec::with_capacity(t);
    fn go(fs: &[FixedBitSet], mask: usize, order: &mut Vec<usize>, dead: &mut [bool]) -> bool {
        let t = fs.len();
        if mask == (1 << t) - 1 {
            return true;
        }
        if dead[mask] {
            return false;
        }
        let mut cands: Vec<usize> = (0..t).filter(|&f| mask >> f & 1 == 0 && shell_step(fs, order, f)).collect();
        // Prefer facets sharing the most with what is placed.
        cands.sort_by_key(|&f| {
            let shared: usize = order.iter().map(|&i| {
                let mut x = fs[f].clone();
                x.intersect_with(&fs[i]);
                x.count_ones(..)
            }).max().unwrap_or(0);
            (std::cmp::Reverse(fs[f].count_ones(..)), std::cmp::Reverse(shared), f)
        });
        for f in cands {
            order.push(f);
            if go(fs, mask | 1 << f, order, dead) {
                return true;
            }
            order.pop();
        }
        dead[mask] = true;
        false
    }
    Ok(go(&fs, 0, &mut order, &mut dead).then_some(ShellingOrder(order)))
}

/// Facet limit used when a report or search falls back to brute-force shelling.
pub const FALLBACK_FACET_LIMIT: usize = 20;

#[derive(Clone, Debug)]
pub enum Certificate {
    Rao(AtomOrdering),
    Shelling(ShellingOrder),
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Shellable(Certificate),
    /// Exhaustive shelling search failed.
    NotShellable,
    /// No atom ordering and too many facets to brute force.
    Unknown { facets: usize },
}

/// Decides shellability of a bounded poset: atom ordering search first, then
/// brute-force shelling of the proper part up to `facet_limit` facets.
/// Search nodes are charged against `budget`.
pub fn decide_shellable<T: Clone>(p: &BoundedPoset<T>, budget: &mut u64, facet_limit: usize) -> Result<Verdict> {
    let mut spent = 0;
    let r = search_counted(p, *budget, Reading::Belongs, &mut spent);
    *budget = budget.saturating_sub(spent);
    if let Some(ord) = r? {
        return Ok(Verdict::Shellable(Certificate::Rao(ord)));
    }
    let k = p.proper_order_complex()?;
    match is_shellable_bruteforce_up_to(&k, facet_limit) {
        Ok(Some(o)) => Ok(Verdict::Shellable(Certificate::Shelling(o))),
        Ok(None) => Ok(Verdict::NotShellable),
        Err(Error::TooManyFacets { facets, .. }) => Ok(Verdict::Unknown { facets }),
        Err(e) => Err(e),
    }
}

/// Shellability verdict with its certificate and falling chains.
#[derive(Clone, Debug, Serialize)]
pub struct ShellReport {
    /// `None` when the search gave up.
    pub shellable: Option<bool>,
    pub method: &'static str,
    pub certificate: Value,
    pub falling_chains: Vec<String>,
    pub counts_by_length: BTreeMap<usize, usize>,
}

impl ShellReport {
    pub fn to_json(&self) -> Value {
        json!({
            "shellable": self.shellable.map_or(json!("unknown"), |b| json!(b)),
            "method": self.method,
            "certificate": self.certificate,
            "falling_chains": self.falling_chains,
            "counts_by_length": self.counts_by_length.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Shellability of an even poset: the explicit ordering for canonical hosts,
/// otherwise a recursive atom ordering search, falling back to brute-force
/// shelling of the proper part.
pub fn shell_report(ep: &EvenPoset, budget: u64) -> Result<ShellReport> {
    let p = ep.poset();
    let label = |i: usize| ep.label(i);
    let with_rao = |ord: &AtomOrdering, method: &'static str| {
        let lab = RaoLabeling { p, ord, reading: Reading::Belongs };
        let chains = falling_chains(p, &lab);
        ShellReport {
            shellable: Some(true),
            method,
            certificate: ord.to_json(p, label),
            falling_chains: chains.iter().map(|c| chain_string(ep, c)).collect(),
            counts_by_length: counts_by_length(&chains),
        }
    };
    if let Ok(ord) = explicit_ordering(ep) {
        if verify_recursive_atom_ordering(p, &ord).is_valid() {
            return Ok(with_rao(&ord, "explicit recursive atom ordering"));
        }
    }
    let searched = find_recursive_atom_ordering(p, budget);
    match searched {
        Ok(Some(ord)) => return Ok(with_rao(&ord, "recursive atom ordering search")),
        Ok(None) | Err(Error::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    let k = p.proper_order_complex()?;
    let verdict = match is_shellable_bruteforce_up_to(&k, FALLBACK_FACET_LIMIT) {
        Ok(Some(order)) => (Some(true), json!(order.0.iter().map(|&i| {
            k.facets()[i].iter().map(|&v| v).collect::<Vec<_>>()
        }).collect::<Vec<_>>())),
        Ok(None) => (Some(false), Value::Null),
        Err(Error::TooManyFacets { .. }) => (None, Value::Null),
        Err(e) => return Err(e),
    };
    let shell_method = if matches!(searched, Ok(None)) { "no recursive atom ordering; brute-force shelling" } else { "brute-force shelling" };
    Ok(ShellReport {
        shellable: verdict.0,
        method: shell_method,
        certificate: verdict.1,
        falling_chains: Vec::new(),
        counts_by_length: BTreeMap::new(),
    })
}

/// Which atom ordering labels the chains in [`falling_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingChoice {
    /// The explicit ordering if it verifies, otherwise a searched one.
    Auto,
    /// The explicit ordering, used even when it fails verification.
    Explicit,
    Search,
}

#[derive(Clone, Debug)]
pub struct FallingReport {
    pub ordering: &'static str,
    /// Whether the ordering passed recursive atom ordering verification.
    pub verified: bool,
    pub chains: Vec<String>,
    pub counts_by_length: BTreeMap<usize, usize>,
}

impl FallingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ordering": self.ordering,
            "verified": self.verified,
            "count": self.chains.len(),
            "falling_chains": self.chains,
            "counts_by_length": self.counts_by_length.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Falling chains of an even poset under the chosen atom ordering.
pub fn falling_report(ep: &EvenPoset, budget: u64, choice: OrderingChoice) -> Result<FallingReport> {
    let p = ep.poset();
    let explicit = match choice {
        OrderingChoice::Search => None,
        OrderingChoice::Auto => explicit_ordering(ep).ok(),
        OrderingChoice::Explicit => Some(explicit_ordering(ep)?),
    };
    let (ord, name, verified) = match explicit {
        Some(ord) => {
            let ok = verify_recursive_atom_ordering(p, &ord).is_valid();
            if ok || choice == OrderingChoice::Explicit {
                (ord, "explicit", ok)
            } else {
                (find_recursive_atom_ordering(p, budget)?.ok_or(Error::InvalidOrdering("no recursive atom ordering exists".into()))?, "search", true)
            }
        }
        None => (find_recursive_atom_ordering(p, budget)?.ok_or(Error::InvalidOrdering("no recursive atom ordering exists".into()))?, "search", true),
    };
    let lab = RaoLabeling::unchecked(p, &ord, Reading::Belongs);
    let chains = falling_chains(p, &lab);
    Ok(FallingReport {
        ordering: name,
        verified,
        chains: chains.iter().map(|c| chain_string(ep, c)).collect(),
        counts_by_length: counts_by_length(&chains),
    })
}
