//! Exhaustive ground truth: brute-force solvers for all four variants, a
//! definitional enumeration of important separators, and certificate checks.
//!
//! Two engines back [`brute_force_solve`]:
//!
//! * a subset search over bitmasks in lexicographic order, with exact
//!   pruning (set size, cut lower bounds from already-excluded vertices,
//!   terminal position), used when `n` is small enough;
//! * a connected-set enumeration for the three "at most k" variants, where a
//!   connected solution exists whenever any solution does.
//!
//! Both drop vertices of degree above `k - 1 + t` up front: such a vertex has
//! more neighbors than `X ∪ N(X)` (or `X` plus the cut edges) can hold.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::instance::{Certificate, Instance, Variant, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space too large for the oracle (n = {n}, k = {k}, variant {variant})")]
    SearchSpaceExceeded {
        n: usize,
        k: usize,
        variant: Variant,
    },
    #[error("terminal sets must be non-empty and disjoint")]
    BadTerminals,
}

/// Admissible search spaces for [`brute_force_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest `n` for the subset search (at most 64).
    pub max_subset_n: usize,
    /// Largest `k` for connected-set enumeration.
    pub max_connected_k: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_subset_n: 22,
            max_connected_k: 8,
        }
    }
}

/// Exact verdict under the default limits (`n <= 22`, or `k <= 8` with
/// connected-set enumeration for the "at most k" variants).
pub fn brute_force_solve(inst: &Instance) -> Result<Verdict, OracleError> {
    brute_force_solve_with(inst, OracleLimits::default())
}

pub fn brute_force_solve_with(
    inst: &Instance,
    limits: OracleLimits,
) -> Result<Verdict, OracleError> {
    let n = inst.graph.n();
    if n <= limits.max_subset_n.min(64) {
        Ok(solve_by_subsets(inst))
    } else if inst.variant != Variant::ExactK && inst.k <= limits.max_connected_k {
        Ok(solve_by_connected_sets(inst))
    } else {
        Err(OracleError::SearchSpaceExceeded {
            n,
            k: inst.k,
            variant: inst.variant,
        })
    }
}

fn degree_cap_mask(inst: &Instance) -> Vec<bool> {
    let cap = inst.k - 1 + inst.t;
    (0..inst.graph.n())
        .map(|v| inst.graph.degree(v) <= cap)
        .collect()
}

/// Lexicographically first solution over all vertex subsets. Requires `n <= 64`.
pub fn solve_by_subsets(inst: &Instance) -> Verdict {
    let g = &inst.graph;
    let n = g.n();
    assert!(n <= 64, "subset search needs n <= 64");
    let allowed = degree_cap_mask(inst);
    let search = SubsetSearch {
        adj: (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w))
            .collect(),
        n,
        k: inst.k,
        t: inst.t,
        variant: inst.variant,
        terminal: inst.terminal,
        excluded: (0..n)
            .filter(|&v| !allowed[v])
            .fold(0u64, |acc, v| acc | 1 << v),
    };
    if let Some(s) = inst.terminal {
        if !allowed[s] {
            return Verdict::No;
        }
    }
    let last_root = inst.terminal.unwrap_or(n.saturating_sub(1));
    for root in 0..n.min(last_root + 1) {
        if search.excluded >> root & 1 == 1 {
            continue;
        }
        if let Some(mask) = search.dfs(1 << root, 1, root + 1) {
            let x = VertexSet::from_sorted((0..n).filter(|&v| mask >> v & 1 == 1).collect());
            return Verdict::Yes(inst.certificate_for(x));
        }
    }
    Verdict::No
}

struct SubsetSearch {
    adj: Vec<u64>,
    n: usize,
    k: usize,
    t: usize,
    variant: Variant,
    terminal: Option<usize>,
    excluded: u64,
}

impl SubsetSearch {
    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn members(mask: u64) -> impl Iterator<Item = usize> {
        let mut rest = mask;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                v
            })
        })
    }

    fn open_neighborhood(&self, set: u64) -> u64 {
        Self::members(set).fold(0u64, |acc, v| acc | self.adj[v]) & !set
    }

    fn crossing_edges(&self, set: u64, other: u64) -> u32 {
        Self::members(set)
            .map(|v| (self.adj[v] & other).count_ones())
            .sum()
    }

    fn cut(&self, set: u64) -> u32 {
        if self.variant.uses_edge_cut() {
            self.crossing_edges(set, !set & self.all())
        } else {
            self.open_neighborhood(set).count_ones()
        }
    }

    /// Pre-order search below `set`, whose largest member is `next - 1`.
    fn dfs(&self, set: u64, size: usize, next: usize) -> Option<u64> {
        let low = if next >= 64 {
            u64::MAX
        } else {
            (1u64 << next) - 1
        };
        let out = (low & !set) | self.excluded;
        let t = self.t as u32;

        // Cut already forced by decided vertices; a lower bound for `set` and
        // every extension of it.
        let forced = if self.variant.uses_edge_cut() {
            let undecided = self.all() & !(set | out);
            self.crossing_edges(set, out)
                + Self::members(undecided)
                    .map(|w| {
                        (self.adj[w] & set)
                            .count_ones()
                            .min((self.adj[w] & out).count_ones())
                    })
                    .sum::<u32>()
        } else {
            (self.open_neighborhood(set) & out).count_ones()
        };
        if forced > t {
            return None;
        }

        let has_terminal = self.terminal.is_none_or(|s| set >> s & 1 == 1);
        let size_ok = match self.variant {
            Variant::ExactK => size == self.k,
            _ => size <= self.k,
        };
        if has_terminal && size_ok && self.cut(set) <= t {
            return Some(set);
        }
        if size >= self.k {
            return None;
        }
        for x in next..self.n {
            if let Some(s) = self.terminal {
                if x > s && set >> s & 1 == 0 {
                    break;
                }
            }
            if self.excluded >> x & 1 == 1 {
                continue;
            }
            if let Some(found) = self.dfs(set | 1 << x, size + 1, x + 1) {
                return Some(found);
            }
        }
        None
    }
}

/// Lexicographically first connected solution, for the "at most k" variants.
pub fn solve_by_connected_sets(inst: &Instance) -> Verdict {
    assert!(
        inst.variant != Variant::ExactK,
        "exact-k needs the subset search"
    );
    let g = &inst.graph;
    let n = g.n();
    let allowed = degree_cap_mask(inst);
    if let Some(s) = inst.terminal {
        if !allowed[s] {
            return Verdict::No;
        }
    }
    let mut inside = vec![false; n];
    let last_root = inst.terminal.unwrap_or(n.saturating_sub(1));
    for root in 0..n.min(last_root + 1) {
        let mut best: Option<Vec<usize>> = None;
        let _ = g.for_each_connected_set(root, inst.k, &allowed, |members| {
            if inst.terminal.is_some_and(|s| !members.contains(&s)) {
                return ControlFlow::Continue(());
            }
            for &v in members {
                inside[v] = true;
            }
            let cut = if inst.variant.uses_edge_cut() {
                g.edge_boundary_size(&inside)
            } else {
                let mut seen = Vec::new();
                for &v in members {
                    for &w in g.neighbors(v) {
                        if !inside[w] && !seen.contains(&w) {
                            seen.push(w);
                        }
                    }
                }
                seen.len()
            };
            for &v in members {
                inside[v] = false;
            }
            if cut <= inst.t {
                let mut sorted = members.to_vec();
                sorted.sort_unstable();
                if best.as_ref().is_none_or(|b| sorted < *b) {
                    best = Some(sorted);
                }
            }
            ControlFlow::Continue(())
        });
        if let Some(x) = best {
            return Verdict::Yes(inst.certificate_for(VertexSet::from_sorted(x)));
        }
    }
    Verdict::No
}

/// All important `(X, Y)`-separators of size at most `t`, straight from the
/// definition: every subset is tried as a separator, then checked for
/// minimality and for domination by any other separator. Requires `n <= 22`.
pub fn naive_important_separators(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    t: usize,
) -> Result<Vec<VertexSet>, OracleError> {
    let n = g.n();
    if n > 22 {
        return Err(OracleError::SearchSpaceExceeded {
            n,
            k: t,
            variant: Variant::Vertex,
        });
    }
    if x.is_empty()
        || y.is_empty()
        || !x.is_disjoint(y)
        || x.last().is_some_and(|v| v >= n)
        || y.last().is_some_and(|v| v >= n)
    {
        return Err(OracleError::BadTerminals);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    let xm = x.iter().fold(0u32, |acc, v| acc | 1 << v);
    let ym = y.iter().fold(0u32, |acc, v| acc | 1 << v);
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let free = all & !(xm | ym);

    let reach = |removed: u32| -> u32 {
        let mut r = xm;
        loop {
            let mut grown = r;
            let mut rest = r;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grown |= adj[v];
            }
            grown &= !removed;
            if grown == r {
                return r;
            }
            r = grown;
        }
    };
    let separates = |s: u32| reach(s) & ym == 0;

    let mut seps: Vec<(u32, u32)> = Vec::new();
    let mut s = free;
    loop {
        if s.count_ones() as usize <= t && separates(s) {
            seps.push((s, reach(s)));
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & free;
    }

    let mut out: Vec<VertexSet> = seps
        .iter()
        .filter(|&&(s, r)| {
            let minimal = (0..n)
                .filter(|v| s >> v & 1 == 1)
                .all(|v| !separates(s & !(1 << v)));
            let dominated = seps.iter().any(|&(other, ro)| {
                other.count_ones() <= s.count_ones() && r & !ro == 0 && r != ro
            });
            minimal && !dominated
        })
        .map(|&(s, _)| (0..n).filter(|v| s >> v & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &VertexSet, b: &VertexSet| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("empty set")]
    Empty,
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("certificate is for variant {found}, instance is {expected}")]
    VariantMismatch { expected: Variant, found: Variant },
    #[error("set too large: |X| = {size} > k = {k}")]
    TooLarge { size: usize, k: usize },
    #[error("set size {size} differs from k = {k}")]
    WrongSize { size: usize, k: usize },
    #[error("terminal {0} missing from X")]
    TerminalMissing(usize),
    #[error("boundary mismatch: certificate lists {claimed}, graph gives {actual}")]
    BoundaryMismatch { claimed: String, actual: String },
    #[error("boundary too large: {size} > t = {t}")]
    BoundaryTooLarge { size: usize, t: usize },
}

/// Checks a certificate against the instance, recomputing the boundary.
pub fn verify_certificate(inst: &Instance, cert: &Certificate) -> Result<(), CertificateError> {
    let x = &cert.x;
    if x.is_empty() {
        return Err(CertificateError::Empty);
    }
    if let Some(v) = x.last().filter(|&v| v >= inst.graph.n()) {
        return Err(CertificateError::OutOfRange(v));
    }
    if cert.variant != inst.variant {
        return Err(CertificateError::VariantMismatch {
            expected: inst.variant,
            found: cert.variant,
        });
    }
    match inst.variant {
        Variant::ExactK if x.len() != inst.k => {
            return Err(CertificateError::WrongSize {
                size: x.len(),
                k: inst.k,
            })
        }
        _ if x.len() > inst.k => {
            return Err(CertificateError::TooLarge {
                size: x.len(),
                k: inst.k,
            })
        }
        _ => {}
    }
    if let Some(s) = inst.terminal.filter(|&s| !x.contains(s)) {
        return Err(CertificateError::TerminalMissing(s));
    }
    let actual = Certificate::compute(&inst.graph, inst.variant, x.clone());
    if actual.boundary != cert.boundary {
        return Err(CertificateError::BoundaryMismatch {
            claimed: cert.boundary.to_string(),
            actual: actual.boundary.to_string(),
        });
    }
    if actual.boundary.len() > inst.t {
        return Err(CertificateError::BoundaryTooLarge {
            size: actual.boundary.len(),
            t: inst.t,
        });
    }
    Ok(())
}
