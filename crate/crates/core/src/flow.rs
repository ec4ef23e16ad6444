//! Vertex separators through unit-capacity flow on the vertex-split network.
//!
//! Every vertex `v` becomes an arc `in(v) -> out(v)` of capacity one (infinite
//! for terminals), and every edge `uv` becomes the two infinite arcs
//! `out(u) -> in(v)` and `out(v) -> in(u)`. The minimum cut nearest the sink is
//! the unique minimum important separator; enumeration of all important
//! separators up to a budget branches on a vertex of that cut.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatorError {
    #[error("terminal sets must be non-empty")]
    EmptyTerminals,
    #[error("terminal sets overlap at vertex {vertex}")]
    Overlap { vertex: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("terminal sets are adjacent; no vertex separator exists")]
    NoSeparator,
    #[error("{0} is not a separator")]
    NotASeparator(VertexSet),
}

/// A minimal `(X, Y)`-separator with its cached source side `R(X, S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Separator {
    pub members: VertexSet,
    pub source_side: VertexSet,
}

impl Separator {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

const INF: i32 = i32::MAX / 2;

/// Residual network of one separator query.
struct FlowState {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i32>,
    source: usize,
    sink: usize,
    flow: usize,
}

impl FlowState {
    fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowState {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            source,
            sink,
            flow: 0,
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i32) {
        self.head[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.head[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
    }

    /// One breadth-first augmentation of a single unit. Returns false when the
    /// sink is unreachable.
    fn augment(&mut self) -> bool {
        let mut parent_arc = vec![usize::MAX; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        'bfs: while let Some(a) = queue.pop_front() {
            for &e in &self.head[a] {
                let b = self.to[e];
                if self.cap[e] > 0 && !seen[b] {
                    seen[b] = true;
                    parent_arc[b] = e;
                    if b == self.sink {
                        break 'bfs;
                    }
                    queue.push_back(b);
                }
            }
        }
        if !seen[self.sink] {
            return false;
        }
        let mut node = self.sink;
        while node != self.source {
            let e = parent_arc[node];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            node = self.to[e ^ 1];
        }
        self.flow += 1;
        true
    }

    /// Nodes that can still reach the sink in the residual network.
    fn sink_reachers(&self) -> Vec<bool> {
        let mut reach = vec![false; self.head.len()];
        reach[self.sink] = true;
        let mut queue = VecDeque::from([self.sink]);
        while let Some(b) = queue.pop_front() {
            for &e in &self.head[b] {
                // e: b -> a, so e ^ 1 is the arc a -> b.
                let a = self.to[e];
                if self.cap[e ^ 1] > 0 && !reach[a] {
                    reach[a] = true;
                    queue.push_back(a);
                }
            }
        }
        reach
    }
}

pub(crate) enum Cut {
    Adjacent,
    TooLarge,
    Found(VertexSet),
}

/// Minimum `(X, Y)`-separator of `G - blocked` closest to `Y`, or `TooLarge`
/// once more than `budget` disjoint paths exist. `X` and `Y` must be disjoint
/// and unblocked.
pub(crate) fn closest_min_cut(
    g: &Graph,
    blocked: &[bool],
    x: &VertexSet,
    y: &VertexSet,
    budget: usize,
) -> Cut {
    let n = g.n();
    let mut role = vec![0u8; n]; // 1 = source terminal, 2 = sink terminal
    for v in x.iter() {
        role[v] = 1;
    }
    for v in y.iter() {
        role[v] = 2;
    }
    if x.iter()
        .any(|v| g.neighbors(v).iter().any(|&w| role[w] == 2))
    {
        return Cut::Adjacent;
    }

    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowState::new(2 * n + 2, source, sink);
    for v in 0..n {
        if blocked[v] {
            continue;
        }
        net.add_arc(2 * v, 2 * v + 1, if role[v] == 0 { 1 } else { INF });
        for &w in g.neighbors(v) {
            if !blocked[w] {
                net.add_arc(2 * v + 1, 2 * w, INF);
            }
        }
        match role[v] {
            1 => net.add_arc(source, 2 * v, INF),
            2 => net.add_arc(2 * v + 1, sink, INF),
            _ => {}
        }
    }

    while net.augment() {
        if net.flow > budget {
            return Cut::TooLarge;
        }
    }

    let reach = net.sink_reachers();
    let cut = VertexSet::from_sorted(
        (0..n)
            .filter(|&v| !blocked[v] && role[v] == 0 && !reach[2 * v] && reach[2 * v + 1])
            .collect(),
    );
    debug_assert_eq!(cut.len(), net.flow);
    Cut::Found(cut)
}

fn validate(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<(), SeparatorError> {
    g.check_set(x)?;
    g.check_set(y)?;
    if x.is_empty() || y.is_empty() {
        return Err(SeparatorError::EmptyTerminals);
    }
    if let Some(v) = x.iter().find(|&v| y.contains(v)) {
        return Err(SeparatorError::Overlap { vertex: v });
    }
    Ok(())
}

/// Size of a minimum vertex `(X, Y)`-separator.
pub fn min_separator_size(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<usize, SeparatorError> {
    unique_min_important_separator(g, x, y).map(|s| s.len())
}

/// The unique important `(X, Y)`-separator of minimum size: among all minimum
/// separators, the one whose source side `R(X, S)` is largest.
pub fn unique_min_important_separator(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<Separator, SeparatorError> {
    validate(g, x, y)?;
    let blocked = vec![false; g.n()];
    match closest_min_cut(g, &blocked, x, y, g.n()) {
        Cut::Adjacent => Err(SeparatorError::NoSeparator),
        Cut::TooLarge => unreachable!("a cut never exceeds n"),
        Cut::Found(members) => {
            let source_side = g.reachable_unchecked(x, &members.to_mask(g.n()));
            Ok(Separator {
                members,
                source_side,
            })
        }
    }
}

/// Whether `s` is an important `(X, Y)`-separator.
///
/// `s` is important iff it is the unique minimum important separator between
/// its own source side `R(X, s)` and `Y`.
pub fn is_important(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    s: &VertexSet,
) -> Result<bool, SeparatorError> {
    validate(g, x, y)?;
    g.check_set(s)?;
    if !s.is_disjoint(x) || !s.is_disjoint(y) {
        return Err(SeparatorError::NotASeparator(s.clone()));
    }
    let mask = s.to_mask(g.n());
    let side = g.reachable_unchecked(x, &mask);
    if !side.is_disjoint(y) {
        return Err(SeparatorError::NotASeparator(s.clone()));
    }
    Ok(is_important_unchecked(g, &side, y, s))
}

fn is_important_unchecked(g: &Graph, side: &VertexSet, y: &VertexSet, s: &VertexSet) -> bool {
    let blocked = vec![false; g.n()];
    match closest_min_cut(g, &blocked, side, y, s.len()) {
        Cut::Found(cut) => &cut == s,
        Cut::Adjacent | Cut::TooLarge => false,
    }
}

/// All important `(X, Y)`-separators of size at most `t`, sorted by size and
/// then lexicographically. Empty when the terminals are adjacent or the
/// minimum cut exceeds `t`.
///
/// Candidates come from branching on the lowest vertex `v` of the current
/// minimum important separator: either `v` is cut (budget drops by one) or it
/// joins the source side. Each candidate is re-checked against the
/// definition before it is returned.
pub fn enumerate_important_separators(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    t: usize,
) -> Result<Vec<Separator>, SeparatorError> {
    validate(g, x, y)?;
    let mut candidates = BTreeSet::new();
    let mut blocked = vec![false; g.n()];
    let mut chosen = Vec::new();
    branch(
        g,
        &mut blocked,
        x.clone(),
        y,
        t,
        &mut chosen,
        &mut candidates,
    );

    let mut out: Vec<Separator> = candidates
        .into_iter()
        .filter_map(|members| {
            let side = g.reachable_unchecked(x, &members.to_mask(g.n()));
            is_important_unchecked(g, &side, y, &members).then_some(Separator {
                members,
                source_side: side,
            })
        })
        .collect();
    out.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
    Ok(out)
}

fn branch(
    g: &Graph,
    blocked: &mut Vec<bool>,
    x: VertexSet,
    y: &VertexSet,
    budget: usize,
    chosen: &mut Vec<usize>,
    out: &mut BTreeSet<VertexSet>,
) {
    let cut = match closest_min_cut(g, blocked, &x, y, budget) {
        Cut::Adjacent | Cut::TooLarge => return,
        Cut::Found(cut) => cut,
    };
    let Some(v) = cut.first() else {
        out.insert(VertexSet::from(chosen.clone()));
        return;
    };

    blocked[v] = true;
    chosen.push(v);
    branch(g, blocked, x.clone(), y, budget - 1, chosen, out);
    chosen.pop();
    blocked[v] = false;

    let mut around = blocked.clone();
    for w in cut.iter() {
        around[w] = true;
    }
    let mut grown = g.reachable_unchecked(&x, &around);
    grown.insert(v);
    branch(g, blocked, grown, y, budget, chosen, out);
}
