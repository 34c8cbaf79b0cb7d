//! Membership in the shellable class and search for non-shellable witnesses.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evenposet::even_poset;
use crate::multigraph::{enumerate_admissible, enumerate_pi_graphs, AdmissibleSet, Multigraph, PiGraph, SubgraphSet};
use crate::shellability::{decide_shellable, Verdict, FALLBACK_FACET_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Shape {
    /// Path hung on one bundle endpoint.
    P,
    /// Path with a pendant vertex at its second to last vertex.
    S,
    /// Path ending in a triangle.
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyTag {
    Simple,
    /// `n` vertices, `m` parallel edges; `primed` adds the edge from the leaf endpoint to vertex 3.
    Bundle { shape: Shape, primed: bool, n: usize, m: usize },
    None,
}

impl FamilyTag {
    pub fn is_member(self) -> bool {
        self != FamilyTag::None
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyTag::Simple => f.write_str("Simple"),
            FamilyTag::None => f.write_str("None"),
            FamilyTag::Bundle { shape, primed, n, m } => {
                let s = match shape {
                    Shape::P => "P̃",
                    Shape::S => "S̃",
                    Shape::T => "T̃",
                };
                write!(f, "{s}{}_{{{n},{m}}}", if primed { "′" } else { "" })
            }
        }
    }
}

/// A successful structural match: `leaf` is the bundle endpoint hanging off
/// the rest of the graph, `inner` the endpoint the path continues from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct FamilyMatch {
    pub tag: FamilyTag,
    pub leaf: usize,
    pub inner: usize,
}

/// All orientations of the unique bundle under which `g` matches a family.
pub(crate) fn family_matches(g: &Multigraph) -> Vec<FamilyMatch> {
    if g.bundles().len() != 1 {
        return Vec::new();
    }
    let b = &g.bundles()[0];
    let m = b.labels.len();
    let n = g.n();
    let mut out = Vec::new();
    for (leaf, inner) in [(b.ends.0, b.ends.1), (b.ends.1, b.ends.0)] {
        if let Some((shape, primed)) = match_orientation(g, leaf, inner) {
            let ok = match shape {
                Shape::P => n >= if primed { 3 } else { 2 },
                Shape::S | Shape::T => n >= 5 && n % 2 == 1,
            };
            if ok {
                out.push(FamilyMatch { tag: FamilyTag::Bundle { shape, primed, n, m }, leaf, inner });
            }
        }
    }
    out
}

fn match_orientation(g: &Multigraph, leaf: usize, inner: usize) -> Option<(Shape, bool)> {
    let n = g.n();
    let rest = g.vertex_mask() & !(1u64 << leaf);
    let adj = |v: usize| g.neighbours(v) & rest;
    let deg = |v: usize| adj(v).count_ones();
    // Neighbour of `inner` along the remaining graph, if any.
    let next = adj(inner);
    let leaf_extra = g.simple_neighbours(leaf) & !(1u64 << inner);
    let primed = match leaf_extra.count_ones() {
        0 => false,
        1 => {
            if next.count_ones() != 1 || leaf_extra != next {
                return None;
            }
            true
        }
        _ => return None,
    };
    if n == 1 {
        return None;
    }
    if n - 1 == 1 {
        return Some((Shape::P, primed));
    }
    if deg(inner) != 1 {
        return None;
    }
    let verts: Vec<usize> = (0..n).filter(|&v| rest >> v & 1 == 1).collect();
    let edges: u32 = verts.iter().map(|&v| deg(v)).sum::<u32>() / 2;
    let k = verts.len() as u32;
    let degs: Vec<u32> = verts.iter().map(|&v| deg(v)).collect();
    let connected = {
        let mut seen = 1u64 << inner;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj(v) & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == rest
    };
    if !connected {
        return None;
    }
    if edges == k - 1 && degs.iter().all(|&d| d <= 2) {
        return Some((Shape::P, primed));
    }
    let hubs: Vec<usize> = verts.iter().copied().filter(|&v| deg(v) == 3).collect();
    if hubs.len() != 1 || degs.iter().any(|&d| d > 3) {
        return None;
    }
    let c = hubs[0];
    if edges == k - 1 {
        // Tree: the leaves other than `inner` are exactly two, both on the hub.
        let leaves: Vec<usize> = verts.iter().copied().filter(|&v| deg(v) == 1 && v != inner).collect();
        if leaves.len() == 2 && leaves.iter().all(|&x| adj(x) == 1u64 << c) {
            return Some((Shape::S, primed));
        }
        return None;
    }
    if edges == k {
        // One cycle, a triangle on the hub whose two other corners have degree 2.
        let tri: Vec<usize> = SubgraphIter(adj(c)).filter(|&x| deg(x) == 2 && adj(x) & adj(c) != 0).collect();
        if tri.len() == 2 && adj(tri[0]) >> tri[1] & 1 == 1 && c != inner {
            return Some((Shape::T, primed));
        }
    }
    None
}

struct SubgraphIter(u64);

impl Iterator for SubgraphIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Family of a connected graph.
pub fn family_of(g: &Multigraph) -> Result<FamilyTag> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_simple() {
        return Ok(FamilyTag::Simple);
    }
    Ok(family_matches(g).first().map_or(FamilyTag::None, |m| m.tag))
}

/// True iff every component is simple or one of the six bundle families.
pub fn in_g_star(g: &Multigraph) -> bool {
    g.components().iter().all(|c| family_of(c).map(FamilyTag::is_member).unwrap_or(false))
}

/// A closed interval of an even poset whose proper part is not shellable.
#[derive(Clone, Debug)]
pub struct Witness {
    pub pi: PiGraph,
    pub admissible: AdmissibleSet,
    pub bottom: SubgraphSet,
    pub top: SubgraphSet,
    /// Elements of the interval, endpoints included.
    pub size: usize,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        let h = &self.pi.graph;
        serde_json::json!({
            "graph": h.to_graph_text(),
            "A": h.format_tokens(self.admissible),
            "interval": [h.format_set(self.bottom), h.format_set(self.top)],
            "size": self.size,
        })
    }
}

/// An interval that neither an atom ordering nor brute force could decide.
#[derive(Clone, Debug)]
pub struct Undecided {
    pub pi: PiGraph,
    pub admissible: AdmissibleSet,
    pub bottom: SubgraphSet,
    pub top: SubgraphSet,
    pub facets: usize,
}

#[derive(Clone, Debug, Default)]
pub struct WitnessSearch {
    pub witness: Option<Witness>,
    pub undecided: Vec<Undecided>,
    pub pairs: usize,
    pub intervals: usize,
}

/// Which intervals of each even poset are examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Every closed interval with at least four elements, smallest first.
    Intervals,
    /// Only the whole poset.
    Whole,
}

/// Searches `A*(g)` for a non-shellable interval. PI-graphs are visited by
/// vertex count then ground size, and intervals by element count.
pub fn witness_search(g: &Multigraph, scope: Scope, facet_limit: usize, budget: u64) -> Result<WitnessSearch> {
    let mut pis = enumerate_pi_graphs(g);
    pis.sort_by_key(|h| (h.graph.n(), h.graph.ground_len()));
    let mut left = budget;
    let mut out = WitnessSearch::default();
    for h in pis {
        for a in enumerate_admissible(&h.graph) {
            let Some(ep) = even_poset(&h.graph, a)?.into_poset() else { continue };
            out.pairs += 1;
            let p = ep.poset();
            let mut cands: Vec<(usize, usize, usize)> = match scope {
                Scope::Whole => vec![(p.len(), p.bottom(), p.top())],
                Scope::Intervals => {
                    let mut v = Vec::new();
                    for x in 0..p.len() {
                        for y in p.up_set(x).ones() {
                            let size = p.up_set(x).intersection(p.down_set(y)).count() + 2;
                            if size >= 4 {
                                v.push((size, x, y));
                            }
                        }
                    }
                    v
                }
            };
            cands.sort_unstable();
            for (size, x, y) in cands {
                out.intervals += 1;
                let q = p.interval(x, y)?;
                let verdict = match decide_shellable(&q, &mut left, facet_limit) {
                    Err(Error::BudgetExceeded { .. }) => return Err(Error::BudgetExceeded { what: "witness search", budget }),
                    r => r?,
                };
                match verdict {
                    Verdict::Shellable(_) => {}
                    Verdict::NotShellable => {
                        out.witness = Some(Witness { pi: h, admissible: a, bottom: ep.element(x), top: ep.element(y), size });
                        return Ok(out);
                    }
                    Verdict::Unknown { facets } => out.undecided.push(Undecided {
                        pi: h.clone(),
                        admissible: a,
                        bottom: ep.element(x),
                        top: ep.element(y),
                        facets,
                    }),
                }
            }
        }
    }
    Ok(out)
}

/// First non-shellable interval over `A*(g)`, or `None` when every interval
/// is shellable. Undecidable intervals are reported as a budget error.
pub fn non_shellable_witness(g: &Multigraph, budget: u64) -> Result<Option<Witness>> {
    let r = witness_search(g, Scope::Intervals, FALLBACK_FACET_LIMIT, budget)?;
    if r.witness.is_none() && !r.undecided.is_empty() {
        return Err(Error::BudgetExceeded { what: "witness search (interval too large to brute force)", budget });
    }
    Ok(r.witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::fixtures::*;
    use crate::multigraph::parse_graph;

    fn g(text: &str) -> Multigraph {
        parse_graph(text).unwrap()
    }

    #[test]
    fn basic_families() {
        let tri = g("vertices 2\nedge 1 2 a\nedge 1 2 b\nedge 1 2 c\n");
        assert_eq!(family_of(&tri).unwrap().to_string(), "P̃_{2,3}");
        let p6 = g("vertices 6\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\nedge 4 5\nedge 5 6\n");
        assert_eq!(family_of(&p6).unwrap().to_string(), "P̃_{6,2}");
        assert_eq!(family_of(&h3()).unwrap(), FamilyTag::None);
        assert_eq!(family_of(&h1()).unwrap(), FamilyTag::Simple);
        assert!(!in_g_star(&two_bundle_graph()));
        assert!(in_g_star(&h2()));
    }

    #[test]
    fn shapes_and_primes() {
        let s5 = g("vertices 5\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\nedge 3 5\n");
        assert_eq!(family_of(&s5).unwrap().to_string(), "S̃_{5,2}");
        let t5 = g("vertices 5\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\nedge 3 5\nedge 4 5\n");
        assert_eq!(family_of(&t5).unwrap().to_string(), "T̃_{5,2}");
        let t5p = g("vertices 5\nedge 1 2 a\nedge 1 2 b\nedge 1 3\nedge 2 3\nedge 3 4\nedge 3 5\nedge 4 5\n");
        assert_eq!(family_of(&t5p).unwrap().to_string(), "T̃′_{5,2}");
        let p3p = g("vertices 3\nedge 1 2 a\nedge 1 2 b\nedge 1 3\nedge 2 3\n");
        assert_eq!(family_of(&p3p).unwrap().to_string(), "P̃′_{3,2}");
        // Even S shape is excluded.
        let s6 = g("vertices 6\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\nedge 4 5\nedge 4 6\n");
        assert_eq!(family_of(&s6).unwrap(), FamilyTag::None);
        // Pendant too early is not S.
        let s7 = g("vertices 7\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\nedge 3 7\nedge 4 5\nedge 5 6\n");
        assert_eq!(family_of(&s7).unwrap(), FamilyTag::None);
        // Triangle through the bundle's far side but not to vertex 3.
        let bad = g("vertices 4\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\nedge 1 4\n");
        assert_eq!(family_of(&bad).unwrap(), FamilyTag::None);
        let two = g("vertices 3\nedge 1 2 a\nedge 1 2 b\nedge 2 3 c\nedge 2 3 d\n");
        assert_eq!(family_of(&two).unwrap(), FamilyTag::None);
    }

    #[test]
    fn witnesses() {
        // Smallest first: the two bundles on three vertices already fail.
        let w = non_shellable_witness(&two_bundle_graph(), 10_000_000).unwrap().unwrap();
        let h = &w.pi.graph;
        assert_eq!((h.n(), h.bundles().len()), (3, 2));
        assert_eq!(h.format_tokens(w.admissible), "1 2 a b c d");
        assert_eq!((h.format_set(w.bottom), h.format_set(w.top), w.size), ("3".into(), "123abcd".into(), 8));
        let ep = even_poset(h, w.admissible).unwrap().into_poset().unwrap();
        let q = ep.poset().interval(ep.index_of(w.bottom).unwrap(), ep.index_of(w.top).unwrap()).unwrap();
        // Two disjoint paths 123ac-23c-123bc and 123ad-23d-123bd.
        let k = q.proper_order_complex().unwrap();
        assert_eq!(k.facets().len(), 4);
        assert_eq!(crate::homology::integral_reduced_homology(&k).unwrap().rank(0), 1);

        let whole = witness_search(&h3(), Scope::Whole, FALLBACK_FACET_LIMIT, 10_000_000).unwrap();
        let w = whole.witness.unwrap();
        assert_eq!(w.pi.graph, h3());
        assert_eq!(w.pi.graph.format_tokens(w.admissible), "1 2 3 4 c d");
        assert!(whole.undecided.is_empty());

        let p42 = g("vertices 4\nedge 1 2 a\nedge 1 2 b\nedge 2 3\nedge 3 4\n");
        assert!(non_shellable_witness(&p42, 10_000_000).unwrap().is_none());
        assert!(matches!(non_shellable_witness(&h3(), 1), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn disconnected_is_an_error() {
        let d = g("vertices 3\nedge 1 2\n");
        assert_eq!(family_of(&d), Err(Error::Disconnected));
        assert!(in_g_star(&d));
    }
}
