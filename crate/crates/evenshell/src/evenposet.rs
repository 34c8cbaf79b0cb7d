//! Posets of A-even (and A-odd) semi-induced subgraphs, cover types and the
//! canonical labeling of single-bundle graphs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{family_matches, FamilyTag, Shape};
use crate::error::{Error, Result};
use crate::multigraph::{is_admissible, AdmissibleSet, Multigraph, SubgraphSet};
use crate::poset::{BoundedPoset, Poset};

/// All semi-induced subsets of `g`, including the empty set.
pub fn semi_induced_sets(g: &Multigraph) -> Vec<SubgraphSet> {
    let n = g.n();
    let mut out = Vec::new();
    for vm in 0u64..(1u64 << n) {
        let mut partial = vec![vm];
        for b in 0..g.bundles().len() {
            let ends = g.bundle_end_mask(b);
            if vm & ends != ends {
                continue;
            }
            let labels: Vec<usize> = SubgraphSet(g.bundle_label_mask(b)).iter().collect();
            let mut next = Vec::with_capacity(partial.len() << labels.len());
            for &p in &partial {
                for sub in 1u64..(1u64 << labels.len()) {
                    let extra = labels.iter().enumerate().filter(|&(i, _)| sub >> i & 1 == 1).fold(0u64, |m, (_, &l)| m | 1 << l);
                    next.push(p | extra);
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(SubgraphSet));
    }
    out
}

fn parity_ok(g: &Multigraph, s: SubgraphSet, a: SubgraphSet, odd: bool) -> bool {
    g.set_components(s).into_iter().all(|c| (c.intersect(a).len() % 2 == 1) == odd)
}

/// Poset of sets ordered by inclusion, elements sorted by size then bits.
fn inclusion_poset(mut elements: Vec<SubgraphSet>) -> Poset<SubgraphSet> {
    elements.sort_by_key(|s| (s.len(), s.0));
    let n = elements.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if elements[i].is_subset(elements[j]) && elements[i] != elements[j] {
                up[i].insert(j);
            }
        }
    }
    Poset::from_strict_up(elements, up)
}

#[derive(Clone, Debug)]
pub struct EvenPoset {
    host: Multigraph,
    admissible: AdmissibleSet,
    poset: BoundedPoset<SubgraphSet>,
    index: HashMap<u64, usize>,
}

/// The even poset, or the null poset when the set is not admissible.
#[derive(Clone, Debug)]
pub enum EvenPosetOrNull {
    Null,
    Poset(Box<EvenPoset>),
}

impl EvenPosetOrNull {
    pub fn is_null(&self) -> bool {
        matches!(self, EvenPosetOrNull::Null)
    }
    pub fn as_poset(&self) -> Option<&EvenPoset> {
        match self {
            EvenPosetOrNull::Null => None,
            EvenPosetOrNull::Poset(p) => Some(p),
        }
    }
    pub fn into_poset(self) -> Option<EvenPoset> {
        match self {
            EvenPosetOrNull::Null => None,
            EvenPosetOrNull::Poset(p) => Some(*p),
        }
    }
}

pub fn even_poset(g: &Multigraph, a: SubgraphSet) -> Result<EvenPosetOrNull> {
    if !a.is_subset(g.full()) {
        return Err(Error::NotInGround);
    }
    if !is_admissible(g, a) {
        return Ok(EvenPosetOrNull::Null);
    }
    let elements: Vec<SubgraphSet> =
        semi_induced_sets(g).into_iter().filter(|&s| parity_ok(g, s, a, false)).collect();
    let poset = BoundedPoset::new(inclusion_poset(elements)).expect("∅ and the full graph bound the poset");
    let index = poset.elements().iter().enumerate().map(|(i, s)| (s.0, i)).collect();
    Ok(EvenPosetOrNull::Poset(Box::new(EvenPoset { host: g.clone(), admissible: a, poset, index })))
}

/// Poset of nonempty semi-induced subgraphs each of whose components meets
/// `a` in an odd number of elements. No bounds are added.
pub fn odd_poset(g: &Multigraph, a: SubgraphSet) -> Result<Poset<SubgraphSet>> {
    if !a.is_subset(g.full()) {
        return Err(Error::NotInGround);
    }
    let elements =
        semi_induced_sets(g).into_iter().filter(|&s| !s.is_empty() && parity_ok(g, s, a, true)).collect();
    Ok(inclusion_poset(elements))
}

impl EvenPoset {
    pub fn host(&self) -> &Multigraph {
        &self.host
    }
    pub fn admissible(&self) -> AdmissibleSet {
        self.admissible
    }
    pub fn poset(&self) -> &BoundedPoset<SubgraphSet> {
        &self.poset
    }
    pub fn len(&self) -> usize {
        self.poset.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn index_of(&self, s: SubgraphSet) -> Option<usize> {
        self.index.get(&s.0).copied()
    }
    pub fn element(&self, i: usize) -> SubgraphSet {
        *self.poset.element(i)
    }
    /// Index of `s`, or an error naming it.
    pub fn require(&self, s: SubgraphSet) -> Result<usize> {
        self.index_of(s).ok_or_else(|| Error::NotAnElement(self.host.format_set(s)))
    }
    pub fn format(&self, s: SubgraphSet) -> String {
        self.host.format_set(s)
    }
    /// Element `i` rendered as a token string.
    pub fn label(&self, i: usize) -> String {
        self.format(self.element(i))
    }
    pub fn chain_length_spectrum(&self) -> BTreeSet<usize> {
        self.poset.chain_lengths()
    }
    pub fn to_json(&self) -> Value {
        let mut v = self.poset.to_json(|s| self.host.format_set(*s));
        v["admissible"] = json!(self.host.format_set(self.admissible));
        v
    }
    pub fn to_dot(&self) -> String {
        self.poset.to_dot(|s| self.host.format_set(*s))
    }
}

pub fn chain_length_spectrum(ep: &EvenPoset) -> BTreeSet<usize> {
    ep.chain_length_spectrum()
}

fn distances(g: &Multigraph, src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[src] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let mut nb = g.neighbours(v);
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Relabeling that puts a single-bundle graph in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalLabeling {
    /// `(old vertex id, new vertex id)` pairs, ordered by old id.
    pub vertices: Vec<(usize, usize)>,
    /// Labels of parallel edges in the admissible set, in their new order.
    pub a_edges: Vec<String>,
    /// The remaining parallel edge labels, in their new order.
    pub b_edges: Vec<String>,
    /// `ground_map[bit]` is the new ground bit of old ground bit `bit`.
    pub ground_map: Vec<usize>,
}

impl CanonicalLabeling {
    pub fn map_set(&self, s: SubgraphSet) -> SubgraphSet {
        SubgraphSet(s.iter().fold(0, |m, b| m | 1 << self.ground_map[b]))
    }
    pub fn is_identity(&self) -> bool {
        self.ground_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.vertices.iter().all(|&(o, n)| o == n)
    }
}

fn label_vertices(g: &Multigraph, one: usize, two: usize) -> Vec<usize> {
    let n = g.n();
    let mut new = vec![0usize; n];
    new[one] = 1;
    new[two] = 2;
    let mut prev = two;
    for i in 3..=n {
        let dist = distances(g, prev);
        let v = (0..n)
            .filter(|&v| new[v] == 0)
            .min_by_key(|&v| (dist[v], g.name(v)))
            .expect("connected graph");
        new[v] = i;
        prev = v;
    }
    new
}

/// Relabels a single-bundle graph of the listed families: bundle endpoints
/// become 1 and 2, vertex `i` is a closest unlabeled vertex to `i-1`, and the
/// labels in `a` precede the others (each group in input order).
pub fn canonical_labeling(g: &Multigraph, a: SubgraphSet) -> Result<(Multigraph, SubgraphSet, CanonicalLabeling)> {
    if !a.is_subset(g.full()) {
        return Err(Error::NotInGround);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let matches = family_matches(g);
    if matches.is_empty() {
        return Err(Error::OutsideFamilies);
    }
    if !is_admissible(g, a) {
        return Err(Error::Inadmissible);
    }
    let n = g.n();
    let (x, y) = g.bundles()[0].ends;
    let in_a = |v: usize| a.0 >> v & 1 == 1;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    if n % 2 == 1 {
        let one = if in_a(x) { y } else { x };
        candidates.push((one, if one == x { y } else { x }));
    } else {
        for (one, two) in [(x, y), (y, x)] {
            if n == 2 || g.simple_neighbours(one) & !(1u64 << two) != 0 {
                candidates.push((one, two));
            }
        }
    }
    let mut a_labels: Vec<usize> = Vec::new();
    let mut b_labels: Vec<usize> = Vec::new();
    for j in 0..g.labels().len() {
        if in_a(n + j) {
            a_labels.push(j);
        } else {
            b_labels.push(j);
        }
    }
    let label_order: Vec<usize> = a_labels.iter().chain(&b_labels).copied().collect();
    let mut best: Option<(Vec<(usize, usize)>, Vec<usize>)> = None;
    for (one, two) in candidates {
        let new = label_vertices(g, one, two);
        let mut edges: Vec<(usize, usize)> =
            g.simple_edges().iter().map(|&(u, v)| (new[u].min(new[v]), new[u].max(new[v]))).collect();
        edges.sort_unstable();
        if best.as_ref().map_or(true, |(e, _)| edges < *e) {
            best = Some((edges, new));
        }
    }
    let (_, new) = best.expect("at least one endpoint assignment");
    let by_name: HashMap<usize, usize> = (0..n).map(|v| (g.name(v), new[v])).collect();
    let h = g.relabel(&|name| by_name[&name], &label_order);
    let mut ground_map = vec![0usize; g.ground_len()];
    for v in 0..n {
        ground_map[v] = new[v] - 1;
    }
    for (pos, &j) in label_order.iter().enumerate() {
        ground_map[n + j] = n + pos;
    }
    let mut vertices: Vec<(usize, usize)> = (0..n).map(|v| (g.name(v), new[v])).collect();
    vertices.sort_unstable();
    let labeling = CanonicalLabeling {
        vertices,
        a_edges: a_labels.iter().map(|&j| g.labels()[j].clone()).collect(),
        b_edges: b_labels.iter().map(|&j| g.labels()[j].clone()).collect(),
        ground_map,
    };
    let a2 = labeling.map_set(a);
    Ok((h, a2, labeling))
}

/// Parameters of a canonically labeled single-bundle graph: vertices are
/// ground bits `0..n` (vertex `i` is bit `i-1`), then `a_1..a_2m`, then `b_1..b_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFrame {
    pub n: usize,
    /// Number of parallel edges in the admissible set (`2m`).
    pub two_m: usize,
    /// Number of parallel edges outside it (`l`).
    pub l: usize,
    pub admissible: SubgraphSet,
    pub family: FamilyTag,
}

impl CanonicalFrame {
    /// Ground bit of vertex `v` (1-based).
    pub fn vertex(&self, v: usize) -> usize {
        v - 1
    }
    /// Ground bit of `a_i` (1-based).
    pub fn a(&self, i: usize) -> usize {
        self.n + i - 1
    }
    /// Ground bit of `b_i` (1-based).
    pub fn b(&self, i: usize) -> usize {
        self.n + self.two_m + i - 1
    }
    pub fn vertex_mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }
    pub fn a_mask(&self) -> u64 {
        ((1u64 << self.two_m) - 1) << self.n
    }
    pub fn b_mask(&self) -> u64 {
        ((1u64 << self.l) - 1) << (self.n + self.two_m)
    }
    pub fn is_vertex(&self, bit: usize) -> bool {
        bit < self.n
    }
    pub fn is_a_edge(&self, bit: usize) -> bool {
        bit >= self.n && bit < self.n + self.two_m
    }
    pub fn is_b_edge(&self, bit: usize) -> bool {
        bit >= self.n + self.two_m
    }
    /// `|A|`, counting vertices and edges.
    pub fn a_size(&self) -> usize {
        self.admissible.len()
    }
    pub fn one_two_in_a(&self) -> bool {
        self.admissible.0 & 3 == 3
    }
    pub fn all_vertices_in_a(&self) -> bool {
        self.admissible.0 & self.vertex_mask() == self.vertex_mask()
    }
}

/// Checks that `(g, a)` is in canonical form and returns its parameters.
pub fn canonical_frame(g: &Multigraph, a: SubgraphSet) -> Result<CanonicalFrame> {
    let bad = |m: &str| Err(Error::NotCanonical(m.to_string()));
    if !a.is_subset(g.full()) {
        return Err(Error::NotInGround);
    }
    if !is_admissible(g, a) {
        return Err(Error::Inadmissible);
    }
    let n = g.n();
    if g.names().iter().enumerate().any(|(i, &x)| x != i + 1) {
        return bad("vertices must be 1..n");
    }
    if g.bundles().len() != 1 || g.bundles()[0].ends != (0, 1) {
        return bad("the only parallel edges must join 1 and 2");
    }
    let matches = family_matches(g);
    let Some(first) = matches.first() else {
        return Err(Error::OutsideFamilies);
    };
    let two_m = (a.0 >> n).count_ones() as usize;
    let labels = g.labels().len();
    let in_a_bits = (a.0 >> n) & ((1u64 << labels) - 1);
    if in_a_bits != (1u64 << two_m) - 1 {
        return bad("parallel edges in the admissible set must come first");
    }
    if n % 2 == 1 && a.0 & 1 == 1 {
        return bad("vertex 1 must lie outside the admissible set");
    }
    if n % 2 == 0 && n >= 3 && g.simple_neighbours(0) & !2 == 0 {
        return bad("vertex 1 must have a neighbour other than 2");
    }
    for i in 3..=n {
        let dist = distances(g, i - 2);
        let here = dist[i - 1];
        if (i..n).any(|j| dist[j] < here) {
            return bad(&format!("vertex {i} is not closest to vertex {}", i - 1));
        }
    }
    Ok(CanonicalFrame { n, two_m, l: labels - two_m, admissible: a, family: first.tag })
}

impl EvenPoset {
    pub fn frame(&self) -> Result<CanonicalFrame> {
        canonical_frame(&self.host, self.admissible)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CoverType {
    E1,
    E2,
    E3,
    E4,
    E1p,
    E2p,
    E3p1,
    E3p2,
}

impl CoverType {
    pub fn is_primed(self) -> bool {
        matches!(self, CoverType::E1p | CoverType::E2p | CoverType::E3p1 | CoverType::E3p2)
    }
}

impl fmt::Display for CoverType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverType::E1 => "E1",
            CoverType::E2 => "E2",
            CoverType::E3 => "E3",
            CoverType::E4 => "E4",
            CoverType::E1p => "E1′",
            CoverType::E2p => "E2′",
            CoverType::E3p1 => "E3′-1",
            CoverType::E3p2 => "E3′-2",
        })
    }
}

fn check_cover(ep: &EvenPoset, i: SubgraphSet, j: SubgraphSet) -> Result<CanonicalFrame> {
    let frame = ep.frame()?;
    let (x, y) = (ep.require(i)?, ep.require(j)?);
    if !ep.poset.is_cover(x, y) {
        return Err(Error::NotACover(ep.format(i), ep.format(j)));
    }
    Ok(frame)
}

fn classify_difference(f: &CanonicalFrame, d: SubgraphSet) -> Option<CoverType> {
    let a = f.admissible.0;
    let ends = d.0 & 3;
    let nv = (d.0 & f.vertex_mask()).count_ones();
    let na = (d.0 & f.a_mask()).count_ones();
    let nb = (d.0 & f.b_mask()).count_ones();
    let k = d.len();
    let ends_count = ends.count_ones();
    if nb == 1 {
        return match (k, ends_count, nv) {
            (1, _, _) => Some(CoverType::E1p),
            (2, 1, 1) => Some(CoverType::E2p),
            (3, 1, 2) => Some(CoverType::E3p1),
            (3, 2, 2) => Some(CoverType::E3p2),
            _ => None,
        };
    }
    if nb > 1 {
        return None;
    }
    match k {
        1 if ends_count == 1 => Some(CoverType::E1),
        2 if d.0 & !a == 0 => Some(CoverType::E2),
        3 if ends_count == 1 && na >= 1 && ends & a == 0 => Some(CoverType::E3),
        4 if ends_count == 2 && na == 2 => Some(CoverType::E4),
        _ => None,
    }
}

/// Type of the cover `i ⋖ j` of a canonically labeled even poset.
pub fn cover_type(ep: &EvenPoset, i: SubgraphSet, j: SubgraphSet) -> Result<CoverType> {
    let frame = check_cover(ep, i, j)?;
    classify_difference(&frame, j.minus(i))
        .ok_or_else(|| Error::NotCanonical(format!("cover {} ⋖ {} has no listed form", ep.format(i), ep.format(j))))
}

/// Row of the cover-type table selected by `n` and `A ∩ {1,2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Row {
    Odd,
    EvenOutside,
    EvenInside,
}

/// Checks the exact table form of `j \ i`, including the row restrictions,
/// the choice of `v = min(V \ (I ∪ {1,2}))`, and that the new elements lie in
/// one component of `j`.
pub fn matches_cover_table(ep: &EvenPoset, i: SubgraphSet, j: SubgraphSet) -> Result<bool> {
    let f = check_cover(ep, i, j)?;
    let d = j.minus(i);
    let Some(t) = classify_difference(&f, d) else {
        return Ok(false);
    };
    let a = f.admissible.0;
    let row = if f.n % 2 == 1 {
        if a & 3 != 2 {
            return Ok(false);
        }
        Row::Odd
    } else if a & 3 == 0 {
        Row::EvenOutside
    } else if a & 3 == 3 {
        Row::EvenInside
    } else {
        return Ok(false);
    };
    let v_min = (2..f.n).find(|&v| i.0 >> v & 1 == 0);
    let other_vertex = d.0 & f.vertex_mask() & !3;
    // In the S and T shapes the last two vertices are interchangeable.
    let swappable = matches!(f.family, FamilyTag::Bundle { shape: Shape::S | Shape::T, .. });
    let v_ok = v_min.map_or(false, |v| {
        other_vertex == 1u64 << v || (swappable && v == f.n - 2 && other_vertex == 1u64 << (f.n - 1))
    });
    let ends = d.0 & 3;
    let ok = match (row, t) {
        (_, CoverType::E2) | (_, CoverType::E1p) => true,
        (Row::Odd, CoverType::E1) => ends == 1,
        (Row::EvenOutside, CoverType::E1) => true,
        (Row::Odd, CoverType::E3) | (Row::EvenOutside, CoverType::E3) => {
            let vertex_c = other_vertex != 0;
            (row == Row::EvenOutside || ends == 1) && (!vertex_c || v_ok)
        }
        (Row::EvenInside, CoverType::E4) => true,
        (Row::Odd, CoverType::E2p) => ends == 1,
        (Row::EvenOutside, CoverType::E2p) => true,
        (Row::Odd, CoverType::E3p1) => ends == 2 && v_ok,
        (Row::EvenInside, CoverType::E3p1) => v_ok,
        (Row::EvenInside, CoverType::E3p2) => true,
        _ => false,
    };
    Ok(ok && ep.host.set_components(j).iter().any(|c| d.is_subset(*c)))
}

/// Chain lengths predicted from `n`, `|A|`, `|B \ A|` and the adjacency of 2 and 3.
pub fn predicted_chain_lengths(g: &Multigraph, f: &CanonicalFrame) -> BTreeSet<usize> {
    let half = f.a_size() / 2;
    let l = f.l;
    if f.n % 2 == 1 {
        let two_three = f.n >= 3 && g.has_simple_edge(1, 2);
        if !two_three && l == 0 {
            return BTreeSet::from([half + 1]);
        }
        BTreeSet::from([half + l + 1, half + l])
    } else if !f.all_vertices_in_a() {
        BTreeSet::from([half + l + 1])
    } else {
        BTreeSet::from([half + l, half + l - 1])
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::multigraph::{parse_graph, Multigraph};

    /// Odd path on five vertices with parallel edges a1, a2, b1 between 1 and 2.
    pub fn odd_bundle_path() -> Multigraph {
        parse_graph("vertices 5\nedge 1 2 a1\nedge 1 2 a2\nedge 1 2 b1\nedge 2 3\nedge 3 4\nedge 4 5\n").unwrap()
    }
    /// Even path on four vertices with a1, a2, b1, b2 between 1 and 2, 13 an edge.
    pub fn even_bundle_path() -> Multigraph {
        parse_graph("vertices 4\nedge 1 2 a1\nedge 1 2 a2\nedge 1 2 b1\nedge 1 2 b2\nedge 1 3\nedge 3 4\n").unwrap()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::multigraph::fixtures::*;
    use crate::multigraph::{enumerate_admissible, parse_graph};
    use crate::poset::product;
    use proptest::prelude::*;

    fn ep(g: &Multigraph, a: &str) -> EvenPoset {
        even_poset(g, g.parse_set(a).unwrap()).unwrap().into_poset().unwrap()
    }

    fn names(ep: &EvenPoset, xs: &[usize]) -> BTreeSet<String> {
        xs.iter().map(|&i| ep.label(i)).collect()
    }

    #[test]
    fn subgraph_posets() {
        let p1 = ep(&h1(), "1 2 3 4");
        assert_eq!(p1.len(), 5);
        let atoms = p1.poset().covers_up(p1.poset().bottom()).to_vec();
        assert_eq!(names(&p1, &atoms), ["12", "23", "34"].map(String::from).into());
        let p2 = ep(&h2(), "1 2 3 4 a b");
        let all: BTreeSet<String> = (0..p2.len()).map(|i| p2.label(i)).collect();
        assert_eq!(all, ["∅", "23", "34", "12ab", "123a", "123b", "1234ab"].map(String::from).into());
        let atoms = p2.poset().covers_up(p2.poset().bottom()).to_vec();
        assert_eq!(names(&p2, &atoms), ["12ab", "23", "34"].map(String::from).into());
    }

    #[test]
    fn null_and_errors() {
        let p3 = parse_graph("vertices 3\nedge 1 2\nedge 2 3\n").unwrap();
        assert!(even_poset(&p3, p3.full()).unwrap().is_null());
        assert_eq!(even_poset(&p3, SubgraphSet(1 << 10)).unwrap_err(), Error::NotInGround);
    }

    #[test]
    fn odd_poset_examples() {
        let one = parse_graph("vertices 1\n").unwrap();
        assert_eq!(odd_poset(&one, one.full()).unwrap().len(), 1);
        let g = h1();
        let p = odd_poset(&g, g.full()).unwrap();
        let all: BTreeSet<String> = p.elements().iter().map(|&s| g.format_set(s)).collect();
        for x in ["1", "2", "3", "4", "123", "234"] {
            assert!(all.contains(x), "{x}");
        }
        assert!(!all.contains("12"));
        // Parity only: an inadmissible set still yields an odd poset.
        let p3 = parse_graph("vertices 3\nedge 1 2\nedge 2 3\n").unwrap();
        assert!(odd_poset(&p3, p3.full()).unwrap().len() > 0);
    }

    #[test]
    fn cover_types_of_examples() {
        let g = odd_bundle_path();
        let p = ep(&g, "2 3 4 5 a1 a2");
        let s = |t: &str| g.parse_set(t).unwrap();
        assert_eq!(cover_type(&p, s(""), s("2 3")).unwrap(), CoverType::E2);
        assert_eq!(cover_type(&p, s("2 3"), s("1 2 3 b1")).unwrap(), CoverType::E2p);
        let h = even_bundle_path();
        let q = ep(&h, "1 2 3 4 a1 a2");
        let t = |x: &str| h.parse_set(x).unwrap();
        assert_eq!(cover_type(&q, t(""), t("1 2 b2")).unwrap(), CoverType::E3p2);
        assert_eq!(CoverType::E3p1.to_string(), "E3′-1");
        assert!(matches!(cover_type(&q, t(""), t("1 2 3 4 a1 a2 b1 b2")), Err(Error::NotACover(_, _))));
    }

    #[test]
    fn spectra_of_examples() {
        let g = odd_bundle_path();
        let p = ep(&g, "2 3 4 5 a1 a2");
        assert_eq!(p.chain_length_spectrum(), BTreeSet::from([4, 5]));
        let ii = parse_graph("vertices 4\nedge 1 2 a1\nedge 1 2 a2\nedge 1 2 b1\nedge 1 2 b2\nedge 1 3\nedge 3 4\n").unwrap();
        let q = ep(&ii, "3 4 a1 a2");
        assert_eq!(q.chain_length_spectrum(), BTreeSet::from([5]));
        let r = ep(&even_bundle_path(), "1 2 3 4 a1 a2");
        assert_eq!(r.chain_length_spectrum(), BTreeSet::from([4, 5]));
        assert_eq!(p.len(), 26);
        for e in [&p, &q, &r] {
            let f = e.frame().unwrap();
            assert_eq!(predicted_chain_lengths(e.host(), &f), e.chain_length_spectrum());
        }
    }

    #[test]
    fn canonical_labeling_examples() {
        // Bundle endpoint outside A becomes 1 and the path is renumbered from 2.
        let g = parse_graph("vertices 5\nedge 5 4 x\nedge 5 4 y\nedge 4 3\nedge 3 2\nedge 2 1\n").unwrap();
        let a = g.parse_set("1 2 3 4 x y").unwrap();
        let (h, a2, lab) = canonical_labeling(&g, a).unwrap();
        assert_eq!(lab.vertices, vec![(1, 5), (2, 4), (3, 3), (4, 2), (5, 1)]);
        assert_eq!(h.format_set(a2), "2345xy");
        canonical_frame(&h, a2).unwrap();
        // Even, both endpoints in A: 13 must be an edge.
        let g = parse_graph("vertices 4\nedge 1 2\nedge 2 3\nedge 3 4 a\nedge 3 4 b\n").unwrap();
        let (h, a2, _) = canonical_labeling(&g, g.full()).unwrap();
        assert!(h.has_simple_edge(0, 2));
        canonical_frame(&h, a2).unwrap();
        // Already canonical.
        let g = even_bundle_path();
        let a = g.parse_set("1 2 3 4 a1 a2").unwrap();
        let (h, a2, lab) = canonical_labeling(&g, a).unwrap();
        assert!(lab.is_identity());
        assert_eq!((h, a2), (g, a));
        assert_eq!(canonical_labeling(&two_bundle_graph(), two_bundle_graph().full()).unwrap_err(), Error::OutsideFamilies);
    }

    #[test]
    fn canonical_frame_rejects() {
        let g = parse_graph("vertices 3\nedge 1 2 a\nedge 1 2 b\nedge 1 3\n").unwrap();
        // Odd with 1 in A.
        let a = g.parse_set("1 3 a b").unwrap();
        assert!(matches!(canonical_frame(&g, a), Err(Error::NotCanonical(_))));
        let g = parse_graph("vertices 4\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\n").unwrap();
        assert!(matches!(canonical_frame(&g, g.full()), Err(Error::NotCanonical(_))));
    }

    /// Canonical single-bundle hosts of the listed families with `|V|+|B|` at most `max`.
    pub(crate) fn family_hosts(max: usize) -> Vec<Multigraph> {
        let mut out = Vec::new();
        for n in 2..max {
            for m in 2..=max - n {
                let labels: String = (1..=m).map(|i| format!("edge 1 2 e{i}\n")).collect();
                let path: String = (2..n).map(|i| format!("edge {i} {}\n", i + 1)).collect();
                let mut shapes = vec![path.clone()];
                if n >= 3 {
                    shapes.push(format!("{path}edge 1 3\n"));
                }
                if n >= 5 && n % 2 == 1 {
                    let s: String = (2..n - 1).map(|i| format!("edge {i} {}\n", i + 1)).collect();
                    let s = format!("{s}edge {} {n}\n", n - 2);
                    let t = format!("{s}edge {} {n}\n", n - 1);
                    shapes.extend([s.clone(), format!("{s}edge 1 3\n"), t.clone(), format!("{t}edge 1 3\n")]);
                }
                for sh in shapes {
                    out.push(parse_graph(&format!("vertices {n}\n{labels}{sh}")).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn cover_table_and_spectra_exhaustive() {
        for g in family_hosts(8) {
            for a in enumerate_admissible(&g) {
                let (h, a2, _) = canonical_labeling(&g, a).unwrap();
                let p = even_poset(&h, a2).unwrap().into_poset().unwrap();
                let f = p.frame().unwrap();
                for (x, y) in p.poset().cover_pairs() {
                    let (i, j) = (p.element(x), p.element(y));
                    let t = cover_type(&p, i, j).unwrap();
                    assert!(!t.is_primed() || f.l > 0);
                    assert!(matches_cover_table(&p, i, j).unwrap(), "{} {} ⋖ {}", f.family, p.format(i), p.format(j));
                    assert_eq!(j.minus(i).intersect(a2).len() % 2, 0);
                }
                let pred = predicted_chain_lengths(&h, &f);
                let got = p.chain_length_spectrum();
                if f.n >= 3 {
                    assert_eq!(pred, got, "{}", h.to_graph_text());
                } else {
                    assert!(got.is_subset(&pred));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn disconnected_is_a_product(
            g1 in crate::multigraph::tests::arb_multigraph(3, 4),
            g2 in crate::multigraph::tests::arb_multigraph(3, 4),
            seed in 0usize..1000,
        ) {
            let text = format!("{}{}", g1.to_graph_text(), g2.to_graph_text().lines().skip(1).map(|l| {
                let p: Vec<&str> = l.split_whitespace().collect();
                let shift = |s: &str| (s.parse::<usize>().unwrap() + g1.n()).to_string();
                let mut q = vec![p[0].to_string(), shift(p[1]), shift(p[2])];
                if p.len() == 4 { q.push(format!("{}'", p[3])); }
                q.join(" ") + "\n"
            }).collect::<String>()).replacen(&format!("vertices {}", g1.n()), &format!("vertices {}", g1.n() + g2.n()), 1);
            let g = parse_graph(&text).unwrap();
            let a1s = enumerate_admissible(&g1);
            let a2s = enumerate_admissible(&g2);
            prop_assume!(!a1s.is_empty() && !a2s.is_empty());
            let (a1, a2) = (a1s[seed % a1s.len()], a2s[seed / 7 % a2s.len()]);
            let shift = |s: SubgraphSet| {
                let v = s.0 & g2.vertex_mask();
                let l = s.0 >> g2.n();
                SubgraphSet(v << g1.n() | l << (g1.n() + g2.n() + g1.labels().len()))
            };
            let lift1 = |s: SubgraphSet| {
                let v = s.0 & g1.vertex_mask();
                let l = s.0 >> g1.n();
                SubgraphSet(v | l << (g1.n() + g2.n()))
            };
            let a = lift1(a1).union(shift(a2));
            let p = even_poset(&g, a).unwrap().into_poset().unwrap();
            let p1 = even_poset(&g1, a1).unwrap().into_poset().unwrap();
            let p2 = even_poset(&g2, a2).unwrap().into_poset().unwrap();
            let prod = product(p1.poset(), p2.poset());
            prop_assert_eq!(prod.len(), p.len());
            let img: Vec<usize> = prod.elements().iter().map(|(x, y)| p.index_of(lift1(*x).union(shift(*y))).unwrap()).collect();
            for x in 0..prod.len() {
                for y in 0..prod.len() {
                    prop_assert_eq!(prod.leq(x, y), p.poset().leq(img[x], img[y]));
                }
            }
        }
    }
}
