use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{EdgeSet, Graph, VertexSet};

/// Which cutting problem an instance asks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `|X| <= k`, `|N(X)| <= t`.
    Vertex,
    /// As `Vertex`, with the terminal required in `X`.
    VertexTerminal,
    /// `s in X`, `|X| <= k`, `|∂(X)| <= t`.
    EdgeTerminal,
    /// `|X| = k`, `|N(X)| <= t`.
    ExactK,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Vertex,
        Variant::VertexTerminal,
        Variant::EdgeTerminal,
        Variant::ExactK,
    ];

    pub fn has_terminal(self) -> bool {
        matches!(self, Variant::VertexTerminal | Variant::EdgeTerminal)
    }

    pub fn uses_edge_cut(self) -> bool {
        self == Variant::EdgeTerminal
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Vertex => "vertex",
            Variant::VertexTerminal => "vertex-terminal",
            Variant::EdgeTerminal => "edge-terminal",
            Variant::ExactK => "exact-k",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variant `{0}` (expected vertex, vertex-terminal, edge-terminal or exact-k)")]
pub struct UnknownVariant(pub String);

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vertex" => Ok(Variant::Vertex),
            "vertex-terminal" => Ok(Variant::VertexTerminal),
            "edge-terminal" => Ok(Variant::EdgeTerminal),
            "exact-k" | "exact-k-vertex" => Ok(Variant::ExactK),
            other => Err(UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("variant {0} requires a terminal vertex")]
    MissingTerminal(Variant),
    #[error("variant {0} does not take a terminal vertex")]
    UnexpectedTerminal(Variant),
    #[error("terminal {terminal} out of range (n = {n})")]
    TerminalOutOfRange { terminal: usize, n: usize },
}

/// A problem instance: graph, variant, size bound `k`, cut budget `t`, and a
/// terminal for the terminal variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub variant: Variant,
    pub k: usize,
    pub t: usize,
    pub terminal: Option<usize>,
}

impl Instance {
    pub fn new(
        graph: Graph,
        variant: Variant,
        k: usize,
        t: usize,
        terminal: Option<usize>,
    ) -> Result<Self, InstanceError> {
        if k == 0 {
            return Err(InstanceError::ZeroK);
        }
        match (variant.has_terminal(), terminal) {
            (true, None) => return Err(InstanceError::MissingTerminal(variant)),
            (false, Some(_)) => return Err(InstanceError::UnexpectedTerminal(variant)),
            (true, Some(s)) if s >= graph.n() => {
                return Err(InstanceError::TerminalOutOfRange {
                    terminal: s,
                    n: graph.n(),
                })
            }
            _ => {}
        }
        Ok(Instance {
            graph,
            variant,
            k,
            t,
            terminal,
        })
    }

    pub fn vertex(graph: Graph, k: usize, t: usize) -> Result<Self, InstanceError> {
        Instance::new(graph, Variant::Vertex, k, t, None)
    }

    /// Builds the certificate for `x` under this instance's variant, with the
    /// boundary computed from the graph. Ids must be in range.
    pub fn certificate_for(&self, x: VertexSet) -> Certificate {
        Certificate::compute(&self.graph, self.variant, x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundary {
    Vertices(VertexSet),
    Edges(EdgeSet),
}

impl Boundary {
    pub fn len(&self) -> usize {
        match self {
            Boundary::Vertices(s) => s.len(),
            Boundary::Edges(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Vertices(s) => s.fmt(f),
            Boundary::Edges(e) => e.fmt(f),
        }
    }
}

/// A claimed solution `X` together with its boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub x: VertexSet,
    pub boundary: Boundary,
    pub variant: Variant,
}

impl Certificate {
    pub fn compute(graph: &Graph, variant: Variant, x: VertexSet) -> Self {
        let boundary = if variant.uses_edge_cut() {
            Boundary::Edges(graph.edge_boundary(&x).expect("certificate ids in range"))
        } else {
            Boundary::Vertices(graph.neighborhood(&x).expect("certificate ids in range"))
        };
        Certificate {
            x,
            boundary,
            variant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(Certificate),
    No,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Yes(c) => Some(c),
            Verdict::No => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_yes() { "YES" } else { "NO" })
    }
}

pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_validation() {
        let g = Graph::path(3);
        assert_eq!(Instance::vertex(g.clone(), 0, 1), Err(InstanceError::ZeroK));
        assert_eq!(
            Instance::new(g.clone(), Variant::VertexTerminal, 1, 1, None),
            Err(InstanceError::MissingTerminal(Variant::VertexTerminal))
        );
        assert_eq!(
            Instance::new(g.clone(), Variant::EdgeTerminal, 1, 1, Some(3)),
            Err(InstanceError::TerminalOutOfRange { terminal: 3, n: 3 })
        );
        assert!(Instance::new(g, Variant::Vertex, 1, 0, Some(0)).is_err());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert!("edge".parse::<Variant>().is_err());
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(16, 6), 8008);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
