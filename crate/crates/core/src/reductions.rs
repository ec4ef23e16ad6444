//! Clique reductions producing cutting instances, plus random graph sources.
//!
//! Each reduction maps `(G, k)` to an instance that is YES exactly when `G`
//! has a `k`-clique. They double as hard-instance generators and as
//! correctness fixtures for the solvers.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::instance::{Instance, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("clique size must be at least 2 (got {0})")]
    KTooSmall(usize),
    #[error("clique size {k} exceeds the number of vertices {n}")]
    KExceedsN { k: usize, n: usize },
    #[error("source graph has no edges")]
    NoEdges,
    #[error("graph is not regular")]
    NotRegular,
    #[error("derived parameters k' = {k_prime}, t' = {t_prime} admit no solution; the source has no {k}-clique")]
    Degenerate {
        k: usize,
        k_prime: i64,
        t_prime: i64,
    },
    #[error("padded clique size {size} must be at least {min}")]
    PaddingTooSmall { size: usize, min: usize },
}

/// Source instance: does `graph` contain a clique on `k` vertices?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub graph: Graph,
    pub k: usize,
}

impl CliqueInstance {
    pub fn new(graph: Graph, k: usize) -> Result<Self, ReductionError> {
        if k < 2 {
            return Err(ReductionError::KTooSmall(k));
        }
        if k > graph.n() {
            return Err(ReductionError::KExceedsN { k, n: graph.n() });
        }
        Ok(CliqueInstance { graph, k })
    }
}

/// What an output vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Member of the big vertex clique identified with a source vertex.
    HvVertex(usize),
    /// Remaining member of the big vertex clique.
    HvPadding,
    /// Member of the edge clique standing for source edge `i`.
    HeEdge(usize),
    Terminal,
    BaseClique,
    /// Base-clique vertex adjacent to every vertex copy.
    Distinguished,
    VertexCopy(usize),
    EdgeCopy(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::HvVertex(v) => write!(f, "hv vertex {v}"),
            Role::HvPadding => write!(f, "hv padding"),
            Role::HeEdge(i) => write!(f, "he edge {i}"),
            Role::Terminal => write!(f, "terminal"),
            Role::BaseClique => write!(f, "base"),
            Role::Distinguished => write!(f, "base distinguished"),
            Role::VertexCopy(v) => write!(f, "vertex-copy {v}"),
            Role::EdgeCopy(i) => write!(f, "edge-copy {i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// Vertex variant; hard for parameter `k`.
    VertexCut,
    /// Vertex-terminal variant; hard for parameter `t`.
    TerminalVertexCut,
    /// Edge-terminal variant from regular graphs; NP-hard.
    TerminalEdgeCut,
}

impl Reduction {
    /// Selector used on the command line (`2`, `4`, `5`).
    pub fn from_selector(sel: u32) -> Option<Self> {
        match sel {
            2 => Some(Reduction::VertexCut),
            4 => Some(Reduction::TerminalVertexCut),
            5 => Some(Reduction::TerminalEdgeCut),
            _ => None,
        }
    }

    pub fn apply(self, src: &CliqueInstance) -> Result<ReducedInstance, ReductionError> {
        match self {
            Reduction::VertexCut => reduce_to_vertex_cut(src, None),
            Reduction::TerminalVertexCut => reduce_to_terminal_vertex_cut(src),
            Reduction::TerminalEdgeCut => reduce_to_terminal_edge_cut(src),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub instance: Instance,
    /// `roles[v]` describes output vertex `v`.
    pub roles: Vec<Role>,
    pub reduction: Reduction,
    /// False when the vertex clique was resized away from `n^3`.
    pub faithful: bool,
}

impl ReducedInstance {
    /// Comment lines describing every output vertex.
    pub fn vertex_map_lines(&self) -> Vec<String> {
        self.roles
            .iter()
            .enumerate()
            .map(|(v, r)| format!("vertex {v}: {r}"))
            .collect()
    }
}

fn choose2(k: usize) -> i64 {
    (k * (k - 1) / 2) as i64
}

fn clique_edges(range: std::ops::Range<usize>) -> impl Iterator<Item = (usize, usize)> {
    range
        .clone()
        .flat_map(move |a| (a + 1..range.end).map(move |b| (a, b)))
}

/// Big clique `H_V` (first `n` members identify with `V(G)`), clique `H_E` on
/// the edges, incidence edges between them. `k' = C(k,2)`,
/// `t' = k + m - C(k,2)`.
///
/// `hv_size` replaces the `n^3` padding; such outputs are flagged unfaithful.
pub fn reduce_to_vertex_cut(
    src: &CliqueInstance,
    hv_size: Option<usize>,
) -> Result<ReducedInstance, ReductionError> {
    let g = &src.graph;
    let (n, m, k) = (g.n(), g.m(), src.k);
    if m == 0 {
        return Err(ReductionError::NoEdges);
    }
    let k_prime = choose2(k);
    let t_prime = k as i64 + m as i64 - choose2(k);
    if t_prime < 0 {
        return Err(ReductionError::Degenerate {
            k,
            k_prime,
            t_prime,
        });
    }
    let hv = match hv_size {
        None => n * n * n,
        Some(size) => {
            let min = n.max((k_prime + t_prime + 1) as usize);
            if size < min {
                return Err(ReductionError::PaddingTooSmall { size, min });
            }
            size
        }
    };
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut out: Vec<(usize, usize)> = clique_edges(0..hv)
        .chain(clique_edges(hv..hv + m))
        .collect();
    for (i, &(a, b)) in edges.iter().enumerate() {
        out.push((a, hv + i));
        out.push((b, hv + i));
    }
    let graph = Graph::from_edges(hv + m, out).expect("construction is simple");
    let mut roles: Vec<Role> = (0..n).map(Role::HvVertex).collect();
    roles.resize(hv, Role::HvPadding);
    roles.extend((0..m).map(Role::HeEdge));
    Ok(ReducedInstance {
        instance: Instance::vertex(graph, k_prime as usize, t_prime as usize).expect("k' >= 1"),
        roles,
        reduction: Reduction::VertexCut,
        faithful: hv_size.is_none(),
    })
}

/// Terminal `s` adjacent to every vertex copy; vertex copies adjacent to the
/// copies of their incident edges. `k' = n - k + m - C(k,2) + 1`, `t' = k`.
pub fn reduce_to_terminal_vertex_cut(
    src: &CliqueInstance,
) -> Result<ReducedInstance, ReductionError> {
    let g = &src.graph;
    let (n, m, k) = (g.n(), g.m(), src.k);
    let k_prime = n as i64 - k as i64 + m as i64 - choose2(k) + 1;
    if k_prime < 1 {
        return Err(ReductionError::Degenerate {
            k,
            k_prime,
            t_prime: k as i64,
        });
    }
    let vcopy = |v: usize| 1 + v;
    let ecopy = |i: usize| 1 + n + i;
    let mut out: Vec<(usize, usize)> = (0..n).map(|v| (0, vcopy(v))).collect();
    for (i, (a, b)) in g.edges().enumerate() {
        out.push((vcopy(a), ecopy(i)));
        out.push((vcopy(b), ecopy(i)));
    }
    let graph = Graph::from_edges(1 + n + m, out).expect("construction is simple");
    let mut roles = vec![Role::Terminal];
    roles.extend((0..n).map(Role::VertexCopy));
    roles.extend((0..m).map(Role::EdgeCopy));
    Ok(ReducedInstance {
        instance: Instance::new(graph, Variant::VertexTerminal, k_prime as usize, k, Some(0))
            .expect("terminal in range"),
        roles,
        reduction: Reduction::TerminalVertexCut,
        faithful: true,
    })
}

/// Base clique of size `dn` holding the terminal (vertex 0) and `d`
/// distinguished vertices (1..=d); each vertex copy is adjacent to all
/// distinguished vertices, each edge copy to its two endpoint copies.
/// `k' = dn + k + C(k,2)`, `t' = dn - 2 C(k,2)`.
pub fn reduce_to_terminal_edge_cut(
    src: &CliqueInstance,
) -> Result<ReducedInstance, ReductionError> {
    let g = &src.graph;
    let (n, m, k) = (g.n(), g.m(), src.k);
    let d = g.is_regular().ok_or(ReductionError::NotRegular)?;
    let base = d * n;
    let k_prime = base as i64 + k as i64 + choose2(k);
    let t_prime = base as i64 - 2 * choose2(k);
    if d == 0 || t_prime < 0 {
        return Err(ReductionError::Degenerate {
            k,
            k_prime,
            t_prime,
        });
    }
    let vcopy = |v: usize| base + v;
    let ecopy = |i: usize| base + n + i;
    let mut out: Vec<(usize, usize)> = clique_edges(0..base).collect();
    for v in 0..n {
        out.extend((1..=d).map(|dist| (dist, vcopy(v))));
    }
    for (i, (a, b)) in g.edges().enumerate() {
        out.push((vcopy(a), ecopy(i)));
        out.push((vcopy(b), ecopy(i)));
    }
    let graph = Graph::from_edges(base + n + m, out).expect("construction is simple");
    let mut roles = vec![Role::Terminal];
    roles.extend(std::iter::repeat_n(Role::Distinguished, d));
    roles.resize(base, Role::BaseClique);
    roles.extend((0..n).map(Role::VertexCopy));
    roles.extend((0..m).map(Role::EdgeCopy));
    Ok(ReducedInstance {
        instance: Instance::new(
            graph,
            Variant::EdgeTerminal,
            k_prime as usize,
            t_prime as usize,
            Some(0),
        )
        .expect("terminal in range"),
        roles,
        reduction: Reduction::TerminalEdgeCut,
        faithful: true,
    })
}

/// Exhaustive clique search by extension over increasing vertex ids.
pub fn has_clique(g: &Graph, k: usize) -> bool {
    fn extend(g: &Graph, members: &mut Vec<usize>, next: usize, k: usize) -> bool {
        if members.len() == k {
            return true;
        }
        for v in next..g.n() {
            if members.iter().all(|&u| g.has_edge(u, v)) {
                members.push(v);
                if extend(g, members, v + 1, k) {
                    return true;
                }
                members.pop();
            }
        }
        false
    }
    extend(g, &mut Vec::new(), 0, k)
}

/// Erdős–Rényi `G(n, p)`, reproducible per seed.
pub fn generate_random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph_with(n, p, &mut rng)
}

pub fn random_graph_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let p = p.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("G(n, p) is simple")
}
