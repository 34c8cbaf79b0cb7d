//! Finite loopless multigraphs, semi-induced subgraphs, PI-graphs and admissible sets.
//!
//! The ground set of a graph is its vertices followed by its bundle-edge labels.
//! Subsets of the ground set are stored as `u64` bitmasks: bit `i < n` is the
//! vertex with index `i`, bit `n + j` is the `j`-th label in file order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A set of ground elements of some host graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubgraphSet(pub u64);

/// Admissible sets are ground subsets too; the name documents intent.
pub type AdmissibleSet = SubgraphSet;

impl SubgraphSet {
    pub const EMPTY: SubgraphSet = SubgraphSet(0);

    pub fn bits(self) -> u64 {
        self.0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn contains_bit(self, b: usize) -> bool {
        self.0 >> b & 1 == 1
    }
    pub fn is_subset(self, other: SubgraphSet) -> bool {
        self.0 & !other.0 == 0
    }
    pub fn union(self, other: SubgraphSet) -> SubgraphSet {
        SubgraphSet(self.0 | other.0)
    }
    pub fn intersect(self, other: SubgraphSet) -> SubgraphSet {
        SubgraphSet(self.0 & other.0)
    }
    pub fn minus(self, other: SubgraphSet) -> SubgraphSet {
        SubgraphSet(self.0 & !other.0)
    }
    /// Ground indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(b)
            }
        })
    }
}

/// Parallel edges between the same two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    /// Vertex indices, smaller first.
    pub ends: (usize, usize),
    /// Label indices in ground order.
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    names: Vec<usize>,
    simple: Vec<(usize, usize)>,
    bundles: Vec<Bundle>,
    labels: Vec<String>,
    label_bundle: Vec<usize>,
    adj: Vec<u64>,
    bundle_end_mask: Vec<u64>,
    bundle_label_mask: Vec<u64>,
}

impl Multigraph {
    /// Builds a graph on vertices `1..=n` from `(u, v, label)` edges.
    pub fn new<S: AsRef<str>>(n: usize, edges: &[(usize, usize, Option<S>)]) -> Result<Self> {
        let names: Vec<usize> = (1..=n).collect();
        let mut pair_edges: Vec<((usize, usize), Vec<Option<String>>)> = Vec::new();
        let mut pair_pos: HashMap<(usize, usize), usize> = HashMap::new();
        let mut seen_labels: HashMap<String, ()> = HashMap::new();
        let mut label_order: Vec<(String, (usize, usize))> = Vec::new();
        for (u, v, label) in edges {
            let (u, v) = (*u, *v);
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::VertexRange(x));
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            let key = (u.min(v) - 1, u.max(v) - 1);
            let label = label.as_ref().map(|s| s.as_ref().to_string());
            if let Some(l) = &label {
                if seen_labels.insert(l.clone(), ()).is_some() {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
                label_order.push((l.clone(), key));
            }
            let pos = *pair_pos.entry(key).or_insert_with(|| {
                pair_edges.push((key, Vec::new()));
                pair_edges.len() - 1
            });
            pair_edges[pos].1.push(label);
        }
        let mut simple = Vec::new();
        let mut bundle_ends = Vec::new();
        let mut bundle_of_pair: HashMap<(usize, usize), usize> = HashMap::new();
        for (key, ls) in &pair_edges {
            if ls.len() == 1 {
                if let Some(l) = &ls[0] {
                    return Err(Error::LoneLabel(l.clone()));
                }
                simple.push(*key);
            } else {
                if ls.iter().any(|l| l.is_none()) {
                    return Err(Error::MissingLabel(key.0 + 1, key.1 + 1));
                }
                bundle_of_pair.insert(*key, bundle_ends.len());
                bundle_ends.push(*key);
            }
        }
        let labels = label_order
            .into_iter()
            .map(|(l, key)| (l, bundle_of_pair[&key]))
            .collect();
        Self::from_parts(names, simple, bundle_ends, labels)
    }

    /// Assembles a graph from already-validated parts. Vertex indices refer to
    /// positions in `names`; labels are given in ground order with their bundle.
    pub(crate) fn from_parts(
        names: Vec<usize>,
        simple: Vec<(usize, usize)>,
        bundle_ends: Vec<(usize, usize)>,
        labels: Vec<(String, usize)>,
    ) -> Result<Self> {
        let n = names.len();
        let ground = n + labels.len();
        if ground > 64 {
            return Err(Error::GroundTooLarge(ground));
        }
        let mut bundles: Vec<Bundle> = bundle_ends
            .iter()
            .map(|&(u, v)| Bundle { ends: (u.min(v), u.max(v)), labels: Vec::new() })
            .collect();
        let mut label_bundle = Vec::with_capacity(labels.len());
        let mut label_names = Vec::with_capacity(labels.len());
        for (j, (l, b)) in labels.into_iter().enumerate() {
            bundles[b].labels.push(j);
            label_bundle.push(b);
            label_names.push(l);
        }
        let mut adj = vec![0u64; n];
        let simple: Vec<(usize, usize)> = simple.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        for &(u, v) in &simple {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        for b in &bundles {
            let (u, v) = b.ends;
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        let bundle_end_mask = bundles.iter().map(|b| (1u64 << b.ends.0) | (1u64 << b.ends.1)).collect();
        let bundle_label_mask = bundles
            .iter()
            .map(|b| b.labels.iter().fold(0u64, |m, &j| m | 1u64 << (n + j)))
            .collect();
        Ok(Multigraph {
            names,
            simple,
            bundles,
            labels: label_names,
            label_bundle,
            adj,
            bundle_end_mask,
            bundle_label_mask,
        })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }
    /// Display id of every vertex index.
    pub fn names(&self) -> &[usize] {
        &self.names
    }
    pub fn name(&self, v: usize) -> usize {
        self.names[v]
    }
    pub fn vertex_index(&self, name: usize) -> Option<usize> {
        self.names.iter().position(|&x| x == name)
    }
    pub fn simple_edges(&self) -> &[(usize, usize)] {
        &self.simple
    }
    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label_bundle(&self, j: usize) -> usize {
        self.label_bundle[j]
    }
    pub fn is_simple(&self) -> bool {
        self.bundles.is_empty()
    }
    pub fn ground_len(&self) -> usize {
        self.n() + self.labels.len()
    }
    pub fn full(&self) -> SubgraphSet {
        SubgraphSet(mask(self.ground_len()))
    }
    pub fn vertex_mask(&self) -> u64 {
        mask(self.n())
    }
    pub fn label_mask(&self) -> u64 {
        mask(self.ground_len()) & !mask(self.n())
    }
    /// Neighbour mask of a vertex index (any edge kind).
    pub fn neighbours(&self, v: usize) -> u64 {
        self.adj[v]
    }
    pub fn bundle_end_mask(&self, b: usize) -> u64 {
        self.bundle_end_mask[b]
    }
    pub fn bundle_label_mask(&self, b: usize) -> u64 {
        self.bundle_label_mask[b]
    }
    /// Bundle joining two vertex indices, if any.
    pub fn bundle_between(&self, u: usize, v: usize) -> Option<usize> {
        let m = (1u64 << u) | (1u64 << v);
        self.bundle_end_mask.iter().position(|&e| e == m)
    }
    pub fn has_simple_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.simple.contains(&key)
    }
    /// Neighbours through simple edges only.
    pub fn simple_neighbours(&self, v: usize) -> u64 {
        self.simple.iter().fold(0, |m, &(a, b)| {
            if a == v {
                m | 1 << b
            } else if b == v {
                m | 1 << a
            } else {
                m
            }
        })
    }

    /// Token of a ground element: the vertex id or the edge label.
    pub fn token(&self, bit: usize) -> String {
        if bit < self.n() {
            self.names[bit].to_string()
        } else {
            self.labels[bit - self.n()].clone()
        }
    }

    /// Compact rendering such as `123a1b1`; `∅` for the empty set. Tokens are
    /// space-separated when some vertex id has more than one digit.
    pub fn format_set(&self, s: SubgraphSet) -> String {
        if s.is_empty() {
            return "∅".to_string();
        }
        let sep = if self.names.iter().any(|&x| x > 9) { " " } else { "" };
        s.iter().map(|b| self.token(b)).collect::<Vec<_>>().join(sep)
    }

    /// Whitespace-separated token list, as in `--A "2 3 4 5 a1 a2"`.
    pub fn format_tokens(&self, s: SubgraphSet) -> String {
        s.iter().map(|b| self.token(b)).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_set(&self, text: &str) -> Result<SubgraphSet> {
        let mut m = 0u64;
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() || tok == "∅" {
                continue;
            }
            let bit = if let Ok(x) = tok.parse::<usize>() {
                self.vertex_index(x).ok_or_else(|| Error::UnknownElement(tok.to_string()))?
            } else {
                self.labels
                    .iter()
                    .position(|l| l == tok)
                    .map(|j| self.n() + j)
                    .ok_or_else(|| Error::UnknownElement(tok.to_string()))?
            };
            m |= 1 << bit;
        }
        Ok(SubgraphSet(m))
    }

    fn check_ground(&self, s: SubgraphSet) -> Result<()> {
        if s.is_subset(self.full()) {
            Ok(())
        } else {
            Err(Error::NotInGround)
        }
    }

    /// Semi-induced test: every present label has both endpoints present, and
    /// every bundle with both endpoints present keeps at least one edge.
    pub fn is_semi_induced(&self, s: SubgraphSet) -> Result<bool> {
        self.check_ground(s)?;
        Ok(self.semi_induced(s))
    }

    pub(crate) fn semi_induced(&self, s: SubgraphSet) -> bool {
        let v = s.0 & self.vertex_mask();
        for b in 0..self.bundles.len() {
            let ends = self.bundle_end_mask[b];
            let has_label = s.0 & self.bundle_label_mask[b] != 0;
            let ends_in = v & ends == ends;
            if has_label && !ends_in {
                return false;
            }
            if ends_in && !has_label {
                return false;
            }
        }
        true
    }

    /// Components of a semi-induced set, each with its labels, ordered by
    /// smallest vertex index.
    pub fn set_components(&self, s: SubgraphSet) -> Vec<SubgraphSet> {
        let vmask = s.0 & self.vertex_mask();
        let mut edge_adj = vec![0u64; self.n()];
        for &(u, v) in &self.simple {
            if vmask >> u & 1 == 1 && vmask >> v & 1 == 1 {
                edge_adj[u] |= 1 << v;
                edge_adj[v] |= 1 << u;
            }
        }
        for (b, bd) in self.bundles.iter().enumerate() {
            if s.0 & self.bundle_label_mask[b] != 0 {
                let (u, v) = bd.ends;
                edge_adj[u] |= 1 << v;
                edge_adj[v] |= 1 << u;
            }
        }
        let mut rest = vmask;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = edge_adj[v] & !comp;
                comp |= new;
                frontier |= new;
            }
            rest &= !comp;
            let mut labels = 0u64;
            for (b, bd) in self.bundles.iter().enumerate() {
                if comp >> bd.ends.0 & 1 == 1 {
                    labels |= s.0 & self.bundle_label_mask[b];
                }
            }
            out.push(SubgraphSet(comp | labels));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.set_components(self.full()).len() <= 1
    }

    /// Connected components as standalone graphs keeping vertex ids and labels.
    pub fn components(&self) -> Vec<Multigraph> {
        self.set_components(self.full())
            .into_iter()
            .map(|c| self.restrict(c.0 & self.vertex_mask(), 0))
            .collect()
    }

    /// Subgraph induced on a vertex mask, with the bundles in `replaced`
    /// turned into unlabeled simple edges.
    fn restrict(&self, vmask: u64, replaced: u64) -> Multigraph {
        let mut index = vec![usize::MAX; self.n()];
        let mut names = Vec::new();
        for v in 0..self.n() {
            if vmask >> v & 1 == 1 {
                index[v] = names.len();
                names.push(self.names[v]);
            }
        }
        let inside = |(u, v): (usize, usize)| vmask >> u & 1 == 1 && vmask >> v & 1 == 1;
        let mut simple: Vec<(usize, usize)> =
            self.simple.iter().filter(|&&e| inside(e)).map(|&(u, v)| (index[u], index[v])).collect();
        let mut bundle_ends = Vec::new();
        let mut new_bundle = vec![usize::MAX; self.bundles.len()];
        for (b, bd) in self.bundles.iter().enumerate() {
            if !inside(bd.ends) {
                continue;
            }
            let e = (index[bd.ends.0], index[bd.ends.1]);
            if replaced >> b & 1 == 1 {
                simple.push(e);
            } else {
                new_bundle[b] = bundle_ends.len();
                bundle_ends.push(e);
            }
        }
        simple.sort_unstable();
        let labels = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(j, _)| new_bundle[self.label_bundle[j]] != usize::MAX)
            .map(|(j, l)| (l.clone(), new_bundle[self.label_bundle[j]]))
            .collect();
        Multigraph::from_parts(names, simple, bundle_ends, labels).expect("subgraph of a valid graph")
    }

    /// Copy of the graph with vertex `v` renamed to `perm[name(v)]`-style ids
    /// given by `new_name(old_name)`, and labels reordered by `label_order`
    /// (a permutation of label indices). Vertices are re-indexed by new name.
    pub(crate) fn relabel(&self, new_name: &dyn Fn(usize) -> usize, label_order: &[usize]) -> Multigraph {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| new_name(self.names[v]));
        let mut index = vec![0; self.n()];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        let names = order.iter().map(|&v| new_name(self.names[v])).collect();
        let mut simple: Vec<(usize, usize)> = self.simple.iter().map(|&(u, v)| (index[u], index[v])).collect();
        simple.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        simple.sort_unstable();
        let bundle_ends = self.bundles.iter().map(|b| (index[b.ends.0], index[b.ends.1])).collect();
        let labels = label_order.iter().map(|&j| (self.labels[j].clone(), self.label_bundle[j])).collect();
        Multigraph::from_parts(names, simple, bundle_ends, labels).expect("relabeling of a valid graph")
    }

    /// Graph file text that parses back to an equal graph (vertex ids must be 1..n).
    pub fn to_graph_text(&self) -> String {
        let mut out = format!("vertices {}\n", self.n());
        for &(u, v) in &self.simple {
            out.push_str(&format!("edge {} {}\n", self.names[u], self.names[v]));
        }
        for (j, l) in self.labels.iter().enumerate() {
            let (u, v) = self.bundles[self.label_bundle[j]].ends;
            out.push_str(&format!("edge {} {} {}\n", self.names[u], self.names[v], l));
        }
        out
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_set(self.full()))
    }
}

impl FromStr for Multigraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

fn mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Parses the line-based graph format:
/// `vertices <n>`, then `edge <u> <v>` or `edge <u> <v> <label>`; `#` comments.
pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Option<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("expected a vertex number, got `{s}`")));
        match parts[0] {
            "vertices" => {
                if parts.len() != 2 {
                    return Err(err("expected `vertices <n>`"));
                }
                if n.is_some() {
                    return Err(err("repeated `vertices` line"));
                }
                n = Some(num(parts[1])?);
            }
            "edge" => {
                if n.is_none() {
                    return Err(err("`edge` before `vertices`"));
                }
                match parts.len() {
                    3 => edges.push((num(parts[1])?, num(parts[2])?, None)),
                    4 => edges.push((num(parts[1])?, num(parts[2])?, Some(parts[3].to_string()))),
                    _ => return Err(err("expected `edge <u> <v> [label]`")),
                }
                if let Some(l) = &edges.last().unwrap().2 {
                    if l.parse::<usize>().is_ok() || l == "∅" {
                        return Err(err("edge labels must not be numbers"));
                    }
                }
            }
            other => return Err(err(&format!("unknown directive `{other}`"))),
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing `vertices` line".into() })?;
    Multigraph::new(n, &edges)
}

/// A graph obtained from a source by inducing on a vertex subset after
/// replacing some bundles by simple edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiGraph {
    pub graph: Multigraph,
    /// Source vertex indices kept.
    pub vertices: u64,
    /// Source bundle indices replaced by simple edges (only bundles inside `vertices`).
    pub replaced: u64,
    to_source: Vec<usize>,
}

impl PiGraph {
    /// Maps a ground subset of the PI-graph into the source's ground set.
    pub fn lift(&self, s: SubgraphSet) -> SubgraphSet {
        SubgraphSet(s.iter().fold(0, |m, b| m | 1 << self.to_source[b]))
    }
}

/// All PI-graphs, vertex-subset bitmask ascending then replacement bitmask ascending.
pub fn enumerate_pi_graphs(g: &Multigraph) -> Vec<PiGraph> {
    let n = g.n();
    let k = g.bundles().len();
    let mut out = Vec::new();
    for vm in 0u64..(1u64 << n) {
        let inside: u64 = (0..k).filter(|&b| vm & g.bundle_end_mask(b) == g.bundle_end_mask(b)).fold(0, |m, b| m | 1 << b);
        for r in 0u64..(1u64 << k) {
            if r & !inside != 0 {
                continue;
            }
            let graph = g.restrict(vm, r);
            let mut to_source = Vec::with_capacity(graph.ground_len());
            for v in 0..n {
                if vm >> v & 1 == 1 {
                    to_source.push(v);
                }
            }
            for (j, _) in g.labels().iter().enumerate() {
                let b = g.label_bundle(j);
                if inside >> b & 1 == 1 && r >> b & 1 == 0 {
                    to_source.push(n + j);
                }
            }
            out.push(PiGraph { graph, vertices: vm, replaced: r, to_source });
        }
    }
    out
}

/// Admissible sets of `h`, in increasing bitmask order.
pub fn enumerate_admissible(h: &Multigraph) -> Vec<AdmissibleSet> {
    let mut partial: Vec<u64> = vec![0];
    for comp in h.set_components(h.full()) {
        let vm = comp.0 & h.vertex_mask();
        let bundles: Vec<usize> =
            (0..h.bundles().len()).filter(|&b| h.bundle_end_mask(b) & vm != 0).collect();
        let ends: u64 = bundles.iter().fold(0, |m, &b| m | h.bundle_end_mask(b));
        let forced = vm & !ends;
        let mut choices: Vec<u64> = Vec::new();
        let free: Vec<usize> = SubgraphSet(ends).iter().collect();
        for sub in 0u64..(1u64 << free.len()) {
            let picked = free.iter().enumerate().filter(|&(i, _)| sub >> i & 1 == 1).fold(0u64, |m, (_, &v)| m | 1 << v);
            if (forced | picked).count_ones() % 2 == 0 {
                choices.push(forced | picked);
            }
        }
        for &b in &bundles {
            let labels: Vec<usize> = SubgraphSet(h.bundle_label_mask(b)).iter().collect();
            let mut opts = Vec::new();
            for sub in 1u64..(1u64 << labels.len()) {
                if sub.count_ones() % 2 == 0 {
                    opts.push(labels.iter().enumerate().filter(|&(i, _)| sub >> i & 1 == 1).fold(0u64, |m, (_, &l)| m | 1 << l));
                }
            }
            choices = choices.iter().flat_map(|&c| opts.iter().map(move |&o| c | o)).collect();
        }
        partial = partial.iter().flat_map(|&p| choices.iter().map(move |&c| p | c)).collect();
    }
    partial.sort_unstable();
    partial.into_iter().map(SubgraphSet).collect()
}

/// Direct admissibility test against the definition.
pub fn is_admissible(h: &Multigraph, a: SubgraphSet) -> bool {
    if !a.is_subset(h.full()) {
        return false;
    }
    for comp in h.set_components(h.full()) {
        let vm = comp.0 & h.vertex_mask();
        if (a.0 & vm).count_ones() % 2 == 1 {
            return false;
        }
        for v in SubgraphSet(vm).iter() {
            let in_bundle = (0..h.bundles().len()).any(|b| h.bundle_end_mask(b) >> v & 1 == 1);
            if !in_bundle && a.0 >> v & 1 == 0 {
                return false;
            }
        }
    }
    for b in 0..h.bundles().len() {
        let k = (a.0 & h.bundle_label_mask(b)).count_ones();
        if k == 0 || k % 2 == 1 {
            return false;
        }
    }
    true
}

/// Pairs (H, A) with H a PI-graph and A admissible for H.
pub fn a_star(g: &Multigraph) -> Vec<(PiGraph, AdmissibleSet)> {
    enumerate_pi_graphs(g)
        .into_iter()
        .flat_map(|h| {
            let sets = enumerate_admissible(&h.graph);
            sets.into_iter().map(move |a| (h.clone(), a))
        })
        .collect()
}
