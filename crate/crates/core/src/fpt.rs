//! Exact solver for "at most k vertices, at most t neighbors" whose exponential
//! part depends on `t` alone.
//!
//! Dispatch:
//!
//! * `k + t >= n`: any `min(k, n)` vertices work, since `|N(X)| <= n - |X|`.
//! * `4k <= 3t`: color coding over a universal family (or exhaustive
//!   connected-set search when the family would be too large).
//! * otherwise, for each anchor `u`, compute the minimum important
//!   `(u, v)`-separator `S_v` for every `v` outside `N[u]`, keep those with
//!   `|S_v| <= t` (the set `V0`), and let the family be the inclusion-minimal
//!   far sides `R(v)`. A small `R(v)` is an answer outright. Otherwise the
//!   family members are disjoint and larger than `k`, at most two of them can
//!   sit inside `X ∪ N(X)`, and the union `Z` of the rest is a source from which
//!   an important `(Z, u)`-separator of size `<= t` cuts out a region around `u`
//!   of at most `k + t` vertices including the separator.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::colorcoding::{derandomization_feasible, solve_colorcoding, Mode};
use crate::flow::{closest_min_cut, enumerate_important_separators, Cut};
use crate::graph::{Graph, VertexSet};
use crate::instance::{Certificate, Instance, Variant, Verdict};

/// `S_v` and the far side `R(v) = R(v, S_v)` for one `v` in `V0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorCut {
    pub cut: VertexSet,
    pub region: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorState {
    pub anchor: usize,
    pub t: usize,
    /// Vertices `v` outside `N[u]` with `|S_v| <= t`.
    pub v0: VertexSet,
    pub sep_of: BTreeMap<usize, AnchorCut>,
    /// Inclusion-minimal regions among `{R(v) : v in V0}`, sorted.
    pub family: Vec<VertexSet>,
}

pub fn build_anchor_state(g: &Graph, u: usize, t: usize) -> AnchorState {
    let n = g.n();
    let blocked = vec![false; n];
    let source = VertexSet::singleton(u);
    let mut sep_of = BTreeMap::new();
    for v in 0..n {
        if v == u || g.has_edge(u, v) {
            continue;
        }
        if let Cut::Found(cut) = closest_min_cut(g, &blocked, &source, &VertexSet::singleton(v), t)
        {
            let region = g.reachable_unchecked(&VertexSet::singleton(v), &cut.to_mask(n));
            sep_of.insert(v, AnchorCut { cut, region });
        }
    }
    let v0: VertexSet = sep_of.keys().copied().collect();

    let mut regions: Vec<&VertexSet> = sep_of.values().map(|c| &c.region).collect();
    regions.sort_by_key(|r| r.len());
    let mut family: Vec<VertexSet> = Vec::new();
    for (i, r) in regions.iter().enumerate() {
        let strictly_contains_other = regions[..i]
            .iter()
            .any(|other| other.len() < r.len() && other.is_subset(r));
        if !strictly_contains_other && !family.contains(r) {
            family.push((*r).clone());
        }
    }
    family.sort();
    AnchorState {
        anchor: u,
        t,
        v0,
        sep_of,
        family,
    }
}

/// Counts of broken structural properties in one anchor state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InvariantViolations {
    /// Pairs `v, w` in `V0` with `w in R(v)` but `R(w)` not inside `R(v)`.
    pub containment: usize,
    /// Pairs of distinct family members that intersect.
    pub disjointness: usize,
    /// `V0` members adjacent to or equal to the anchor, or with `|S_v| > t`.
    pub membership: usize,
    /// Family members strictly containing some `R(w)`.
    pub minimality: usize,
}

impl InvariantViolations {
    pub fn total(&self) -> usize {
        self.containment + self.disjointness + self.membership + self.minimality
    }
}

impl AnchorState {
    pub fn invariant_violations(&self, g: &Graph) -> InvariantViolations {
        let mut out = InvariantViolations::default();
        for (&v, cv) in &self.sep_of {
            if v == self.anchor || g.has_edge(self.anchor, v) || cv.cut.len() > self.t {
                out.membership += 1;
            }
            for (&w, cw) in &self.sep_of {
                if cv.region.contains(w) && !cw.region.is_subset(&cv.region) {
                    out.containment += 1;
                }
            }
        }
        for (i, a) in self.family.iter().enumerate() {
            for b in &self.family[i + 1..] {
                if !a.is_disjoint(b) {
                    out.disjointness += 1;
                }
            }
            if self
                .sep_of
                .values()
                .any(|c| c.region.len() < a.len() && c.region.is_subset(a))
            {
                out.minimality += 1;
            }
        }
        out
    }
}

/// How an anchor search produced its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoundVia {
    /// Some `v in V0` had `|R(v)| <= k`; the smallest such region is taken.
    SmallRegion { v: usize },
    /// An important `(Z, u)`-separator, possibly followed by trimming.
    ImportantSeparator {
        z: VertexSet,
        separator: VertexSet,
        trimmed: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorFind {
    pub certificate: Certificate,
    pub via: FoundVia,
}

/// Case analysis for one anchor. The caller guarantees `3t < 4k` and
/// `k + t < n`.
pub fn search_with_anchor(
    g: &Graph,
    state: &AnchorState,
    k: usize,
    t: usize,
) -> Option<AnchorFind> {
    search_counting(g, state, k, t, &AtomicUsize::new(0))
}

fn search_counting(
    g: &Graph,
    state: &AnchorState,
    k: usize,
    t: usize,
    bound_violations: &AtomicUsize,
) -> Option<AnchorFind> {
    if state.v0.is_empty() {
        return None;
    }
    let smallest = state
        .sep_of
        .iter()
        .filter(|(_, c)| c.region.len() <= k)
        .min_by_key(|(&v, c)| (c.region.len(), v));
    if let Some((&v, c)) = smallest {
        return Some(AnchorFind {
            certificate: Certificate::compute(g, Variant::Vertex, c.region.clone()),
            via: FoundVia::SmallRegion { v },
        });
    }

    let u = state.anchor;
    let anchor = VertexSet::singleton(u);
    for z in z_guesses(&state.family) {
        let seps =
            enumerate_important_separators(g, &z, &anchor, t).expect("Z is non-empty and avoids u");
        for sep in seps {
            let region = g.reachable_unchecked(&anchor, &sep.members.to_mask(g.n()));
            if region.len() + sep.len() > k + t {
                continue;
            }
            let (x, trimmed) = if region.len() <= k {
                (region, false)
            } else {
                let out = trim(g, u, &region, &sep.members, k, t).expect("bounds checked above");
                (out.x, true)
            };
            let certificate = Certificate::compute(g, Variant::Vertex, x);
            if certificate.boundary.len() > t {
                bound_violations.fetch_add(1, Ordering::Relaxed);
                continue;
            }
            return Some(AnchorFind {
                certificate,
                via: FoundVia::ImportantSeparator {
                    z,
                    separator: sep.members,
                    trimmed,
                },
            });
        }
    }
    None
}

/// Unions of the family with zero, one or two members left out, in that
/// order, skipping empty unions.
fn z_guesses(family: &[VertexSet]) -> impl Iterator<Item = VertexSet> + '_ {
    let f = family.len();
    let exclusions = std::iter::once((None, None))
        .chain((0..f).map(|i| (Some(i), None)))
        .chain((0..f).flat_map(move |i| (i + 1..f).map(move |j| (Some(i), Some(j)))));
    exclusions.filter_map(move |(a, b)| {
        let z = family
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != a && Some(i) != b)
            .fold(VertexSet::new(), |acc, (_, m)| acc.union(m));
        (!z.is_empty()).then_some(z)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrimError {
    #[error("anchor {0} is not in the region")]
    AnchorOutside(usize),
    #[error("region of {region} plus separator of {separator} exceeds k + t = {bound}")]
    TooLarge {
        region: usize,
        separator: usize,
        bound: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trimmed {
    pub x: VertexSet,
    pub removed: VertexSet,
}

/// Shrinks `region` to `k` vertices by removing the ones farthest from the
/// anchor (ties: larger id first). Since `N(region) ⊆ separator`, the result
/// has `N(X') ⊆ removed ∪ separator`, which has at most `t` vertices.
pub fn trim(
    g: &Graph,
    anchor: usize,
    region: &VertexSet,
    separator: &VertexSet,
    k: usize,
    t: usize,
) -> Result<Trimmed, TrimError> {
    if !region.contains(anchor) {
        return Err(TrimError::AnchorOutside(anchor));
    }
    if region.len() + separator.len() > k + t {
        return Err(TrimError::TooLarge {
            region: region.len(),
            separator: separator.len(),
            bound: k + t,
        });
    }
    if region.len() <= k {
        return Ok(Trimmed {
            x: region.clone(),
            removed: VertexSet::new(),
        });
    }
    let dist = g.distances_within(anchor, &region.to_mask(g.n()));
    let mut order: Vec<usize> = region.iter().filter(|&v| v != anchor).collect();
    order.sort_by(|&a, &b| (dist[b], b).cmp(&(dist[a], a)));
    let removed: VertexSet = order[..region.len() - k].iter().copied().collect();
    Ok(Trimmed {
        x: region.difference(&removed),
        removed,
    })
}

/// Which branch of the dispatch answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    EmptyGraph,
    /// `k + t >= n`.
    Trivial,
    ColorCoding,
    /// `4k <= 3t` but the universal family is too large to build.
    SmallSetSearch,
    Anchors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Check the structural properties of every anchor state.
    pub check_invariants: bool,
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            check_invariants: false,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveStats {
    pub route: Route,
    pub anchors_built: usize,
    pub violations: InvariantViolations,
    /// Separator-route answers whose final boundary exceeded `t`.
    pub bound_violations: usize,
}

pub fn solve_by_t(g: &Graph, k: usize, t: usize) -> Verdict {
    solve_by_t_with(g, k, t, SolveOptions::default()).0
}

pub fn solve_by_t_with(g: &Graph, k: usize, t: usize, opts: SolveOptions) -> (Verdict, SolveStats) {
    assert!(k >= 1, "k must be at least 1");
    let n = g.n();
    let mut stats = SolveStats {
        route: Route::EmptyGraph,
        anchors_built: 0,
        violations: InvariantViolations::default(),
        bound_violations: 0,
    };
    if n == 0 {
        return (Verdict::No, stats);
    }
    if k + t >= n {
        stats.route = Route::Trivial;
        let x: VertexSet = (0..k.min(n)).collect();
        return (
            Verdict::Yes(Certificate::compute(g, Variant::Vertex, x)),
            stats,
        );
    }
    if 4 * k <= 3 * t {
        let verdict = if derandomization_feasible(n, k, t) {
            stats.route = Route::ColorCoding;
            let inst = Instance::vertex(g.clone(), k, t).expect("k >= 1");
            solve_colorcoding(&inst, Mode::Derandomized).expect("family feasible")
        } else {
            stats.route = Route::SmallSetSearch;
            small_set_search(g, k, t)
        };
        return (verdict, stats);
    }

    stats.route = Route::Anchors;
    let built = AtomicUsize::new(0);
    let bound_violations = AtomicUsize::new(0);
    let violations_acc = std::sync::Mutex::new(InvariantViolations::default());
    let run = |u: usize| {
        let state = build_anchor_state(g, u, t);
        built.fetch_add(1, Ordering::Relaxed);
        if opts.check_invariants {
            let v = state.invariant_violations(g);
            let mut acc = violations_acc.lock().expect("stats lock");
            acc.containment += v.containment;
            acc.disjointness += v.disjointness;
            acc.membership += v.membership;
            acc.minimality += v.minimality;
        }
        search_counting(g, &state, k, t, &bound_violations)
    };
    let found = if opts.parallel {
        (0..n).into_par_iter().find_map_first(run)
    } else {
        (0..n).find_map(run)
    };
    stats.anchors_built = built.into_inner();
    stats.bound_violations = bound_violations.into_inner();
    stats.violations = violations_acc.into_inner().expect("stats lock");
    (
        found.map_or(Verdict::No, |f| Verdict::Yes(f.certificate)),
        stats,
    )
}

/// Exhaustive search over connected sets of size at most `k`.
fn small_set_search(g: &Graph, k: usize, t: usize) -> Verdict {
    let allowed: Vec<bool> = (0..g.n()).map(|v| g.degree(v) < k + t).collect();
    for root in 0..g.n() {
        let mut hit = None;
        let _ = g.for_each_connected_set(root, k, &allowed, |members| {
            let x = VertexSet::from(members.to_vec());
            if g.neighborhood_unchecked(&x).len() <= t {
                hit = Some(x);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if let Some(x) = hit {
            return Verdict::Yes(Certificate::compute(g, Variant::Vertex, x));
        }
    }
    Verdict::No
}
