use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bits::{self, full, is_subset};
use crate::error::{Error, Result};
use crate::poly::KinSymbol;

/// Hard bound from the bitmask representation of vertex and edge sets.
pub const MAX_BITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
    pub massive: bool,
    pub lambda: Rational64,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

/// Feynman graph with external momentum labels attached to vertices.
///
/// A vertex may carry several labels after contractions. Edge `k` is the
/// Schwinger parameter `alpha_k` of every polynomial built from the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeynmanGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    external: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl FeynmanGraph {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let unique: BTreeSet<&String> = vertices.iter().collect();
        if unique.len() != vertices.len() {
            return Err(Error::InvalidGraph("duplicate vertex name".into()));
        }
        if vertices.len() > MAX_BITS {
            return Err(Error::TooLarge {
                what: "vertices",
                size: vertices.len(),
                limit: MAX_BITS,
            });
        }
        let n = vertices.len();
        Ok(FeynmanGraph {
            vertices,
            edges: Vec::new(),
            external: vec![Vec::new(); n],
        })
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {name}")))
    }

    pub fn add_edge(&mut self, id: &str, a: &str, b: &str, massive: bool) -> Result<&mut Self> {
        self.add_edge_with_lambda(id, a, b, massive, Rational64::one())
    }

    pub fn add_edge_with_lambda(
        &mut self,
        id: &str,
        a: &str,
        b: &str,
        massive: bool,
        lambda: Rational64,
    ) -> Result<&mut Self> {
        if self.edges.iter().any(|e| e.id == id) {
            return Err(Error::InvalidGraph(format!("duplicate edge id {id}")));
        }
        if self.edges.len() == MAX_BITS {
            return Err(Error::TooLarge {
                what: "edges",
                size: MAX_BITS + 1,
                limit: MAX_BITS,
            });
        }
        let ends = (self.vertex_index(a)?, self.vertex_index(b)?);
        self.edges.push(Edge {
            id: id.to_string(),
            ends,
            massive,
            lambda,
        });
        Ok(self)
    }

    pub fn add_external(&mut self, vertex: &str, label: &str) -> Result<&mut Self> {
        if self.external.iter().flatten().any(|l| l == label) {
            return Err(Error::InvalidGraph(format!(
                "duplicate external label {label}"
            )));
        }
        let v = self.vertex_index(vertex)?;
        self.external[v].push(label.to_string());
        self.external[v].sort();
        Ok(self)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown edge {id}")))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn all_edges(&self) -> u64 {
        full(self.edges.len())
    }

    /// External labels per vertex.
    pub fn external(&self) -> &[Vec<String>] {
        &self.external
    }

    pub fn external_labels(&self) -> Vec<String> {
        let mut l: Vec<String> = self.external.iter().flatten().cloned().collect();
        l.sort();
        l
    }

    pub fn external_vertices(&self) -> u64 {
        self.external
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .fold(0, |acc, (v, _)| acc | 1 << v)
    }

    pub fn massive_edges(&self) -> u64 {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.massive)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn lambdas(&self) -> Vec<Rational64> {
        self.edges.iter().map(|e| e.lambda).collect()
    }

    pub fn set_lambdas(&mut self, lambdas: &[Rational64]) -> Result<()> {
        if lambdas.len() != self.edges.len() {
            return Err(Error::RankMismatch {
                expected: self.edges.len(),
                found: lambdas.len(),
            });
        }
        for (e, &l) in self.edges.iter_mut().zip(lambdas) {
            e.lambda = l;
        }
        Ok(())
    }

    /// Nontrivial scales: at least two external vertices or a massive edge.
    pub fn has_kinematics(&self) -> bool {
        bits::count(self.external_vertices()) >= 2 || self.massive_edges() != 0
    }

    fn check_mask(&self, mask: u64) -> Result<()> {
        if is_subset(mask, self.all_edges()) {
            Ok(())
        } else {
            Err(Error::NotASubset(mask))
        }
    }

    /// Vertices touched by the edges of `mask`.
    pub fn vertices_of(&self, mask: u64) -> u64 {
        bits::elements(mask).fold(0, |acc, i| {
            let (a, b) = self.edges[i].ends;
            acc | 1 << a | 1 << b
        })
    }

    /// Union-find over all vertices joined by the edges of `mask`.
    pub(crate) fn partition(&self, mask: u64) -> UnionFind {
        let mut uf = UnionFind::new(self.vertices.len());
        for i in bits::elements(mask) {
            let (a, b) = self.edges[i].ends;
            uf.union(a, b);
        }
        uf
    }

    /// Connected components of the spanning subgraph `(V_G, mask)` as vertex masks.
    pub fn vertex_components(&self, mask: u64) -> Vec<u64> {
        let mut uf = self.partition(mask);
        let mut comps: BTreeMap<usize, u64> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            *comps.entry(uf.find(v)).or_default() |= 1 << v;
        }
        comps.into_values().collect()
    }

    /// Components of the edge subgraph `mask`, as (vertex mask, edge mask) pairs.
    pub fn edge_components(&self, mask: u64) -> Vec<(u64, u64)> {
        let touched = self.vertices_of(mask);
        self.vertex_components(mask)
            .into_iter()
            .filter(|c| c & touched != 0)
            .map(|c| {
                let edges = bits::elements(mask)
                    .filter(|&i| (c >> self.edges[i].ends.0) & 1 == 1)
                    .fold(0, |a, i| a | 1 << i);
                (c, edges)
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_components(self.all_edges()).len() <= 1
    }

    /// First Betti number `|E| - |V| + components` of the edge subgraph `mask`.
    pub fn h1(&self, mask: u64) -> i64 {
        let comps = self.edge_components(mask).len() as i64;
        bits::count(mask) as i64 - bits::count(self.vertices_of(mask)) as i64 + comps
    }

    pub fn loops(&self) -> i64 {
        let comps = self.vertex_components(self.all_edges()).len() as i64;
        self.edges.len() as i64 - self.vertices.len() as i64 + comps
    }

    /// Acyclic edge sets of the given size, in lexicographic order of edge lists.
    fn acyclic_subsets(&self, size: usize) -> Vec<u64> {
        fn rec(
            g: &FeynmanGraph,
            start: usize,
            left: usize,
            mask: u64,
            uf: &UnionFind,
            out: &mut Vec<u64>,
        ) {
            if left == 0 {
                out.push(mask);
                return;
            }
            for i in start..=g.edges.len() - left {
                let (a, b) = g.edges[i].ends;
                let mut next = uf.clone();
                if next.union(a, b) {
                    rec(g, i + 1, left - 1, mask | 1 << i, &next, out);
                }
            }
        }
        let mut out = Vec::new();
        if size <= self.edges.len() {
            rec(
                self,
                0,
                size,
                0,
                &UnionFind::new(self.vertices.len()),
                &mut out,
            );
        }
        out
    }

    /// Spanning forests: one spanning tree per connected component.
    pub fn spanning_forests(&self) -> Vec<u64> {
        let c = self.vertex_components(self.all_edges()).len();
        self.acyclic_subsets(self.vertices.len() - c)
    }

    pub fn spanning_trees(&self) -> Result<Vec<u64>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.spanning_forests())
    }

    /// Spanning 2-forests (a spanning forest minus one edge), each with the
    /// vertex set of the tree `T_1`: the side of the split component holding
    /// that component's first vertex.
    pub fn spanning_2forests(&self) -> Vec<(u64, u64)> {
        let components = self.vertex_components(self.all_edges());
        let c = components.len();
        if self.vertices.len() < c + 1 {
            return Vec::new();
        }
        self.acyclic_subsets(self.vertices.len() - c - 1)
            .into_iter()
            .map(|f| {
                let parts = self.vertex_components(f);
                let split = components
                    .iter()
                    .find(|&&comp| parts.iter().filter(|&&p| is_subset(p, comp)).count() == 2)
                    .copied()
                    .expect("a 2-forest splits exactly one component");
                let first = split.trailing_zeros();
                let t1 = parts
                    .into_iter()
                    .find(|p| (p >> first) & 1 == 1)
                    .expect("vertex has a part");
                (f, t1)
            })
            .collect()
    }

    /// External labels on the vertices of `vmask`.
    pub fn labels_on(&self, vmask: u64) -> Vec<String> {
        let mut l: Vec<String> = bits::elements(vmask)
            .flat_map(|v| self.external[v].iter().cloned())
            .collect();
        l.sort();
        l
    }

    /// Canonical invariant `q_I^2` for a set of external labels: `I` and its
    /// complement within the labels of the same connected component name the
    /// same value, and the smaller one (by size, then lexicographically) is
    /// used. Empty and full sets give `None`.
    pub fn sq_symbol(&self, labels: &[String]) -> Result<Option<KinSymbol>> {
        let mut set: Vec<String> = labels.to_vec();
        set.sort();
        set.dedup();
        if set.is_empty() {
            return Ok(None);
        }
        let owner = |l: &String| self.external.iter().position(|ls| ls.contains(l));
        let mut comp_labels: Option<Vec<String>> = None;
        for l in &set {
            let v = owner(l)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown external label {l}")))?;
            let comp = self
                .vertex_components(self.all_edges())
                .into_iter()
                .find(|c| (c >> v) & 1 == 1)
                .expect("vertex lies in a component");
            let cl = self.labels_on(comp);
            match &comp_labels {
                None => comp_labels = Some(cl),
                Some(prev) if *prev != cl => {
                    return Err(Error::InvalidGraph(format!(
                        "labels {set:?} span several components"
                    )))
                }
                _ => {}
            }
        }
        let all = comp_labels.unwrap_or_default();
        if set.len() == all.len() {
            return Ok(None);
        }
        let rest: Vec<String> = all.into_iter().filter(|l| !set.contains(l)).collect();
        let pick = if (rest.len(), &rest) < (set.len(), &set) {
            rest
        } else {
            set
        };
        Ok(Some(KinSymbol::Sq(pick)))
    }

    /// All external vertices lie in one connected component of the edge
    /// subgraph `mask`; never true with fewer than two external vertices.
    pub fn is_momentum_spanning(&self, mask: u64) -> bool {
        let ext = self.external_vertices();
        if bits::count(ext) < 2 {
            return false;
        }
        self.edge_components(mask)
            .iter()
            .any(|&(c, _)| is_subset(ext, c))
    }

    /// Momentum spanning and containing every massive edge. Without two
    /// external vertices only the massive edges matter, and a graph with no
    /// kinematics has no m.m. subgraphs.
    pub fn is_mass_momentum_spanning(&self, mask: u64) -> bool {
        if !self.has_kinematics() {
            return false;
        }
        let masses = self.massive_edges();
        if !is_subset(masses, mask) {
            return false;
        }
        if bits::count(self.external_vertices()) < 2 {
            return true;
        }
        self.is_momentum_spanning(mask)
    }

    /// `s_G(mask) = 2 h^1 + delta^mm`, zero on the empty set.
    pub fn s_value(&self, mask: u64) -> i64 {
        if mask == 0 {
            return 0;
        }
        2 * self.h1(mask) + i64::from(self.is_mass_momentum_spanning(mask))
    }

    /// Contracts every connected component of the edge subgraph `mask` to a
    /// vertex. Remaining edges keep masses and exponents, external labels move
    /// to the merged vertices.
    pub fn quotient(&self, mask: u64) -> Result<FeynmanGraph> {
        self.check_mask(mask)?;
        let mut uf = self.partition(mask);
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut names = Vec::new();
        let mut map = vec![0; self.vertices.len()];
        for v in 0..self.vertices.len() {
            let r = uf.find(v);
            let k = *index.entry(r).or_insert_with(|| {
                names.push(self.vertices[v].clone());
                names.len() - 1
            });
            map[v] = k;
        }
        let mut external = vec![Vec::new(); names.len()];
        for (v, labels) in self.external.iter().enumerate() {
            external[map[v]].extend(labels.iter().cloned());
        }
        for l in &mut external {
            l.sort();
        }
        let edges = (0..self.edges.len())
            .filter(|i| (mask >> i) & 1 == 0)
            .map(|i| {
                let e = &self.edges[i];
                Edge {
                    ends: (map[e.ends.0], map[e.ends.1]),
                    ..e.clone()
                }
            })
            .collect();
        Ok(FeynmanGraph {
            vertices: names,
            edges,
            external,
        })
    }

    /// The edge subgraph `mask` on its own vertices. It carries the kinematics
    /// of the graph if it is mass-momentum spanning and is scaleless otherwise.
    pub fn subgraph_with_kinematics(&self, mask: u64) -> Result<FeynmanGraph> {
        let mm = self.is_mass_momentum_spanning(mask);
        self.edge_subgraph(mask, mm, mm)
    }

    /// The edge subgraph `mask`, optionally keeping external labels and masses.
    pub fn edge_subgraph(
        &self,
        mask: u64,
        keep_external: bool,
        keep_masses: bool,
    ) -> Result<FeynmanGraph> {
        self.check_mask(mask)?;
        let vmask = self.vertices_of(mask);
        let kept: Vec<usize> = bits::elements(vmask).collect();
        let pos = |v: usize| kept.iter().position(|&k| k == v).expect("endpoint kept");
        let vertices = kept.iter().map(|&v| self.vertices[v].clone()).collect();
        let external = kept
            .iter()
            .map(|&v| {
                if keep_external {
                    self.external[v].clone()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let edges = bits::elements(mask)
            .map(|i| {
                let e = &self.edges[i];
                Edge {
                    ends: (pos(e.ends.0), pos(e.ends.1)),
                    massive: keep_masses && e.massive,
                    ..e.clone()
                }
            })
            .collect();
        Ok(FeynmanGraph {
            vertices,
            edges,
            external,
        })
    }

    /// Components of the cycle matroid restricted to `mask`: blocks joined by
    /// fundamental circuits. Bridges and self-loops form their own blocks.
    pub fn one_vi_components(&self, mask: u64) -> Vec<u64> {
        let list: Vec<usize> = bits::elements(mask).collect();
        let mut forest = UnionFind::new(self.vertices.len());
        let mut tree = Vec::new();
        let mut chords = Vec::new();
        for &i in &list {
            let (a, b) = self.edges[i].ends;
            if forest.union(a, b) {
                tree.push(i);
            } else {
                chords.push(i);
            }
        }
        let tree_mask = tree.iter().fold(0u64, |m, &i| m | 1 << i);
        let mut blocks = UnionFind::new(self.edges.len());
        for &c in &chords {
            let (a, b) = self.edges[c].ends;
            for i in self.tree_path(tree_mask, a, b) {
                blocks.union(c, i);
            }
        }
        let mut out: BTreeMap<usize, u64> = BTreeMap::new();
        for &i in &list {
            *out.entry(blocks.find(i)).or_default() |= 1 << i;
        }
        let mut v: Vec<u64> = out.into_values().collect();
        v.sort_by(|a, b| bits::canonical_cmp(*a, *b));
        v
    }

    /// Edges on the path between `a` and `b` in the forest `tree`.
    fn tree_path(&self, tree: u64, a: usize, b: usize) -> Vec<usize> {
        let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([a]);
        let mut seen = 1u64 << a;
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for i in bits::elements(tree) {
                let (x, y) = self.edges[i].ends;
                let w = if x == v {
                    y
                } else if y == v {
                    x
                } else {
                    continue;
                };
                if (seen >> w) & 1 == 0 {
                    seen |= 1 << w;
                    prev.insert(w, (v, i));
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = b;
        while v != a {
            let (p, i) = prev[&v];
            path.push(i);
            v = p;
        }
        path
    }

    /// Every 1VI component carries a mass or separates the external vertices.
    pub fn is_s_irreducible(&self) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let ext = self.external_vertices();
        let momenta = bits::count(ext) >= 2;
        self.one_vi_components(self.all_edges())
            .into_iter()
            .all(|block| {
                if block & self.massive_edges() != 0 {
                    return true;
                }
                momenta
                    && self
                        .vertex_components(self.all_edges() & !block)
                        .iter()
                        .filter(|&&c| c & ext != 0)
                        .count()
                        >= 2
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bubble() -> FeynmanGraph {
        let mut g = FeynmanGraph::new(["v1", "v2"]).unwrap();
        g.add_edge("e1", "v1", "v2", false).unwrap();
        g.add_edge("e2", "v1", "v2", false).unwrap();
        g.add_external("v1", "p1")
            .unwrap()
            .add_external("v2", "p2")
            .unwrap();
        g
    }

    #[test]
    fn trees_of_bubble() {
        let g = bubble();
        assert_eq!(g.spanning_trees().unwrap(), vec![0b01, 0b10]);
        let two = g.spanning_2forests();
        assert_eq!(two, vec![(0, 0b01)]);
        assert_eq!(g.loops(), 1);
    }

    #[test]
    fn validation() {
        let mut g = FeynmanGraph::new(["a"]).unwrap();
        assert!(g.add_edge("e", "a", "b", false).is_err());
        g.add_edge("e", "a", "a", false).unwrap();
        assert!(g.add_edge("e", "a", "a", false).is_err());
        assert!(FeynmanGraph::new(["a", "a"]).is_err());
    }

    #[test]
    fn disconnected_trees_error() {
        let mut g = FeynmanGraph::new(["a", "b", "c"]).unwrap();
        g.add_edge("e", "a", "b", false).unwrap();
        assert_eq!(g.spanning_trees(), Err(Error::Disconnected));
        assert_eq!(g.spanning_forests(), vec![1]);
    }

    #[test]
    fn symbols_are_canonical() {
        let mut g = FeynmanGraph::new(["a", "b", "c"]).unwrap();
        g.add_edge("e1", "a", "b", false)
            .unwrap()
            .add_edge("e2", "b", "c", false)
            .unwrap();
        g.add_external("a", "p")
            .unwrap()
            .add_external("b", "q")
            .unwrap()
            .add_external("c", "r")
            .unwrap();
        let s = |l: &[&str]| {
            g.sq_symbol(&l.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .unwrap()
        };
        assert_eq!(s(&["q", "r"]), Some(KinSymbol::Sq(vec!["p".into()])));
        assert_eq!(s(&["q"]), Some(KinSymbol::Sq(vec!["q".into()])));
        assert_eq!(s(&["p", "q", "r"]), None);
        assert!(g.sq_symbol(&["x".to_string()]).is_err());
    }

    #[test]
    fn blocks() {
        // bubble with a self-loop at v1 and a pendant edge
        let mut g = bubble();
        g.vertices.push("v3".into());
        g.external.push(Vec::new());
        g.add_edge("l", "v1", "v1", false).unwrap();
        g.add_edge("t", "v2", "v3", false).unwrap();
        assert_eq!(
            g.one_vi_components(g.all_edges()),
            vec![0b0100, 0b1000, 0b0011]
        );
    }

    #[test]
    fn quotient_and_subgraph() {
        let g = bubble();
        let q = g.quotient(0b01).unwrap();
        assert_eq!(q.num_vertices(), 1);
        assert!(q.edges()[0].is_self_loop());
        assert!(!q.has_kinematics());
        let s = g.subgraph_with_kinematics(0b01).unwrap();
        assert!(s.has_kinematics());
        assert_eq!(g.quotient(0).unwrap(), g);
    }
}
