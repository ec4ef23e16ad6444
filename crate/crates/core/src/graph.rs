//! Undirected simple graphs with dense `0..n` vertex ids, canonical vertex and
//! edge sets, and the neighborhood / boundary / reachability primitives every
//! solver in the crate is built on.

use std::collections::VecDeque;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u} {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex sets overlap at {vertex}")]
    Overlap { vertex: usize },
}

/// Sorted, duplicate-free set of vertex ids.
///
/// Equality and hashing are structural, so two sets with the same members
/// compare equal regardless of how they were built.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    /// Builds a set from an already sorted, duplicate-free vector.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet(members)
    }

    /// Collects the marked positions of a membership mask.
    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(
            mask.iter()
                .enumerate()
                .filter_map(|(v, &b)| b.then_some(v))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.len() <= other.len() && self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().all(|v| !large.contains(v))
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// Membership mask of length `n`.
    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }
}

impl From<usize> for VertexSet {
    fn from(v: usize) -> Self {
        VertexSet::singleton(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(members: [usize; N]) -> Self {
        VertexSet::from(members.to_vec())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Sorted set of edges, each stored as `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(Vec<(usize, usize)>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[(usize, usize)] {
        &self.0
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        let mut edges: Vec<_> = iter
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        EdgeSet(edges)
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (u, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({u},{v})")?;
        }
        write!(f, "}}")
    }
}

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
///
/// Immutable once built; every query takes `&self`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and ids `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge {
                    u: u.min(w[0]),
                    v: u.max(w[0]),
                });
            }
        }
        Ok(Graph { adj, m })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        match set.last() {
            Some(v) if v >= self.n() => Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            }),
            _ => Ok(()),
        }
    }

    /// Open neighborhood `N(U)`.
    pub fn neighborhood(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_set(set)?;
        Ok(self.neighborhood_unchecked(set))
    }

    pub(crate) fn neighborhood_unchecked(&self, set: &VertexSet) -> VertexSet {
        let inside = set.to_mask(self.n());
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for v in set.iter() {
            for &w in &self.adj[v] {
                if !inside[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        VertexSet::from(out)
    }

    /// Edge boundary: edges with exactly one endpoint in `U`.
    pub fn edge_boundary(&self, set: &VertexSet) -> Result<EdgeSet, GraphError> {
        self.check_set(set)?;
        let inside = set.to_mask(self.n());
        Ok(set
            .iter()
            .flat_map(|v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| !inside[w])
                    .map(move |&w| (v, w))
            })
            .collect())
    }

    pub(crate) fn edge_boundary_size(&self, inside: &[bool]) -> usize {
        inside
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| self.adj[v].iter().filter(|&&w| !inside[w]).count())
            .sum()
    }

    /// `R(X, S)`: vertices reachable from `X` in `G - S`.
    pub fn reachable(
        &self,
        from: &VertexSet,
        removed: &VertexSet,
    ) -> Result<VertexSet, GraphError> {
        self.check_set(from)?;
        self.check_set(removed)?;
        if let Some(v) = from.iter().find(|&v| removed.contains(v)) {
            return Err(GraphError::Overlap { vertex: v });
        }
        Ok(self.reachable_unchecked(from, &removed.to_mask(self.n())))
    }

    /// Traversal from `from` avoiding `blocked`; `from` must not be blocked.
    pub(crate) fn reachable_unchecked(&self, from: &VertexSet, blocked: &[bool]) -> VertexSet {
        let mut seen = blocked.to_vec();
        let mut reached = vec![false; self.n()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for v in from.iter() {
            if !seen[v] {
                seen[v] = true;
                reached[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached[w] = true;
                    queue.push_back(w);
                }
            }
        }
        VertexSet::from_mask(&reached)
    }

    /// Connected components of the subgraph induced by `keep`, each sorted,
    /// ordered by smallest member.
    pub fn components_within(&self, keep: &[bool]) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for root in 0..self.n() {
            if !keep[root] || seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if keep[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            out.push(VertexSet::from(comp));
        }
        out
    }

    pub fn is_connected_set(&self, set: &VertexSet) -> bool {
        let Some(first) = set.first() else {
            return true;
        };
        let mut blocked = vec![true; self.n()];
        for v in set.iter() {
            blocked[v] = false;
        }
        self.reachable_unchecked(&VertexSet::singleton(first), &blocked)
            .len()
            == set.len()
    }

    /// Breadth-first distances from `source` inside the subgraph induced by
    /// `within`; `usize::MAX` marks unreachable vertices.
    pub(crate) fn distances_within(&self, source: usize, within: &[bool]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if within[w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Visits every connected vertex set of size `1..=max_size` whose smallest
    /// member is `root` and whose members are all `allowed`. Each set is visited
    /// exactly once (ESU-style exclusive-neighborhood extension).
    pub fn for_each_connected_set<F>(
        &self,
        root: usize,
        max_size: usize,
        allowed: &[bool],
        mut visit: F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if !allowed[root] || max_size == 0 {
            return ControlFlow::Continue(());
        }
        let mut walker = ConnectedSetWalker {
            graph: self,
            root,
            max_size,
            allowed,
            in_sub: vec![false; self.n()],
            touch: vec![0; self.n()],
            sub: Vec::with_capacity(max_size),
        };
        walker.add(root);
        let ext: Vec<usize> = self.adj[root]
            .iter()
            .copied()
            .filter(|&w| w > root && allowed[w])
            .collect();
        walker.extend(ext, &mut visit)
    }
}

struct ConnectedSetWalker<'g> {
    graph: &'g Graph,
    root: usize,
    max_size: usize,
    allowed: &'g [bool],
    in_sub: Vec<bool>,
    // Number of current members adjacent to each vertex.
    touch: Vec<u32>,
    sub: Vec<usize>,
}

impl ConnectedSetWalker<'_> {
    fn add(&mut self, v: usize) {
        self.in_sub[v] = true;
        self.sub.push(v);
        for &w in self.graph.neighbors(v) {
            self.touch[w] += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.sub.pop().expect("non-empty");
        self.in_sub[v] = false;
        for &w in self.graph.neighbors(v) {
            self.touch[w] -= 1;
        }
    }

    fn extend<F>(&mut self, mut ext: Vec<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        visit(&self.sub)?;
        if self.sub.len() == self.max_size {
            return ControlFlow::Continue(());
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &x in self.graph.neighbors(w) {
                if x > self.root && self.allowed[x] && !self.in_sub[x] && self.touch[x] == 0 {
                    next.push(x);
                }
            }
            self.add(w);
            let flow = self.extend(next, visit);
            self.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn vs<const N: usize>(a: [usize; N]) -> VertexSet {
        VertexSet::from(a)
    }

    #[test]
    fn neighborhood_examples() {
        assert_eq!(
            Graph::complete(3).neighborhood(&vs([0])).unwrap(),
            vs([1, 2])
        );
        assert_eq!(
            Graph::path(4).neighborhood(&vs([1, 2])).unwrap(),
            vs([0, 3])
        );
        let g = Graph::cycle(5);
        let all: VertexSet = (0..5).collect();
        assert!(g.neighborhood(&all).unwrap().is_empty());
        assert!(matches!(
            g.neighborhood(&vs([7])),
            Err(GraphError::VertexOutOfRange { vertex: 7, n: 5 })
        ));
    }

    #[test]
    fn edge_boundary_examples() {
        let b = Graph::path(4).edge_boundary(&vs([0, 1])).unwrap();
        assert_eq!(b.as_slice(), &[(1, 2)]);
        let b = Graph::complete(4).edge_boundary(&vs([0])).unwrap();
        assert_eq!(b.as_slice(), &[(0, 1), (0, 2), (0, 3)]);
        assert!(Graph::complete(4)
            .edge_boundary(&VertexSet::new())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn reachable_examples() {
        let g = Graph::path(4);
        assert_eq!(g.reachable(&vs([0]), &vs([2])).unwrap(), vs([0, 1]));
        assert_eq!(g.reachable(&vs([3]), &vs([2])).unwrap(), vs([3]));
        let h = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(
            h.reachable(&vs([0, 4]), &VertexSet::new()).unwrap(),
            vs([0, 1, 3, 4])
        );
        assert_eq!(
            g.reachable(&vs([1]), &vs([1])),
            Err(GraphError::Overlap { vertex: 1 })
        );
    }

    #[test]
    fn rejects_non_simple_input() {
        assert_eq!(
            Graph::from_edges(2, [(0, 0)]),
            Err(GraphError::SelfLoop { vertex: 0 })
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        );
    }

    #[test]
    fn vertex_set_algebra() {
        let a = vs([1, 3, 5]);
        let b = vs([3, 4]);
        assert_eq!(a.union(&b), vs([1, 3, 4, 5]));
        assert_eq!(a.intersection(&b), vs([3]));
        assert_eq!(a.difference(&b), vs([1, 5]));
        assert!(vs([3]).is_subset(&a));
        assert!(!a.is_disjoint(&b));
        assert_eq!(VertexSet::from(vec![4, 2, 4]), vs([2, 4]));
        assert_eq!(a.to_string(), "{1,3,5}");
    }

    #[test]
    fn connected_sets_match_subset_filter() {
        let g =
            Graph::from_edges(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (5, 6), (4, 6)]).unwrap();
        let allowed = vec![true; 7];
        let mut seen = BTreeSet::new();
        for root in 0..7 {
            let _ = g.for_each_connected_set(root, 4, &allowed, |s| {
                assert!(
                    seen.insert(VertexSet::from(s.to_vec())),
                    "visited twice: {s:?}"
                );
                ControlFlow::Continue(())
            });
        }
        let brute: BTreeSet<VertexSet> = (1u32..1 << 7)
            .map(|mask| (0..7).filter(|v| mask >> v & 1 == 1).collect::<VertexSet>())
            .filter(|s| s.len() <= 4 && g.is_connected_set(s))
            .collect();
        assert_eq!(seen, brute);
    }
}
