use proptest::prelude::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smallcut::colorcoding::{default_trials, solve_colorcoding, Mode};
use smallcut::flow::{enumerate_important_separators, is_important, min_separator_size};
use smallcut::fpt::{solve_by_t, solve_by_t_with, SolveOptions};
use smallcut::oracle::{
    brute_force_solve, solve_by_connected_sets, solve_by_subsets, verify_certificate,
};
use smallcut::reductions::random_graph_with;
use smallcut::{Graph, Instance, Variant, VertexSet};

/// Internal vertex masks of all simple paths from `x` to `y` whose interior
/// avoids both sets.
fn path_interiors(g: &Graph, x: &VertexSet, y: &VertexSet) -> Vec<u32> {
    fn walk(g: &Graph, v: usize, y: &VertexSet, ends: u32, inner: u32, out: &mut Vec<u32>) {
        for &w in g.neighbors(v) {
            if y.contains(w) {
                out.push(inner);
            } else if ends >> w & 1 == 0 && inner >> w & 1 == 0 {
                walk(g, w, y, ends, inner | 1 << w, out);
            }
        }
    }
    let ends = x.iter().chain(y.iter()).fold(0u32, |m, v| m | 1 << v);
    let mut out = Vec::new();
    for s in x.iter() {
        walk(g, s, y, ends, 0, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// Largest number of pairwise disjoint masks.
fn max_packing(masks: &[u32], used: u32) -> usize {
    let Some((&first, rest)) = masks.split_first() else {
        return 0;
    };
    let skip = max_packing(rest, used);
    if first & used == 0 {
        skip.max(1 + max_packing(rest, used | first))
    } else {
        skip
    }
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|bits| VertexSet::from_mask(&bits))
}

fn graph_with_two_sets(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), subset(n), subset(n))
    })
}

/// A graph containing a connected planted set `0..k` whose neighbourhood is
/// exactly `k..k+t`, plus random edges elsewhere.
fn planted() -> impl Strategy<Value = (Graph, usize, usize)> {
    (1usize..=4, 0usize..=3, 2usize..=8).prop_flat_map(|(k, t, rest)| {
        let n = k + t + rest;
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let inside = |v: usize| v < k;
            let border = |v: usize| (k..k + t).contains(&v);
            let mut edges: Vec<(usize, usize)> = (1..k).map(|v| (v - 1, v)).collect();
            edges.extend((k..k + t).map(|b| (0, b)));
            for ((u, v), b) in (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .zip(bits)
            {
                let keep = b
                    && !(u + 1 == v && inside(v))
                    && !(u == 0 && border(v))
                    && !(inside(u) && !inside(v) && !border(v));
                if keep {
                    edges.push((u, v));
                }
            }
            (Graph::from_edges(n, edges).unwrap(), k, t)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn neighbourhood_submodular((g, a, b) in graph_with_two_sets(12)) {
        let size = |s: &VertexSet| g.neighborhood(s).unwrap().len();
        prop_assert!(size(&a.intersection(&b)) + size(&a.union(&b)) <= size(&a) + size(&b));
    }

    #[test]
    fn neighbourhood_avoids_the_set((g, a, _) in graph_with_two_sets(12)) {
        prop_assert!(g.neighborhood(&a).unwrap().is_disjoint(&a));
    }

    #[test]
    fn reachable_shrinks_as_cut_grows((g, s, extra) in graph_with_two_sets(12), root in 0usize..12) {
        let x = VertexSet::singleton(root % g.n());
        let s1 = s.difference(&x);
        let s2 = s1.union(&extra).difference(&x);
        let r1 = g.reachable(&x, &s1).unwrap();
        let r2 = g.reachable(&x, &s2).unwrap();
        prop_assert!(r2.is_subset(&r1));
        prop_assert!(g.neighborhood(&r1).unwrap().is_subset(&s1));
    }

    #[test]
    fn important_separators_bounded_and_important(
        (g, ys, _) in graph_with_two_sets(14),
        root in 0usize..14,
        t in 0usize..=4,
    ) {
        let x = VertexSet::singleton(root % g.n());
        let y = ys.difference(&x);
        prop_assume!(!y.is_empty());
        let seps = enumerate_important_separators(&g, &x, &y, t).unwrap();
        prop_assert!(seps.len() <= 1 << (2 * t));
        for s in &seps {
            prop_assert!(s.len() <= t);
            prop_assert!(is_important(&g, &x, &y, &s.members).unwrap());
            prop_assert_eq!(&g.reachable(&x, &s.members).unwrap(), &s.source_side);
            prop_assert_eq!(&g.neighborhood(&s.source_side).unwrap(), &s.members);
        }
    }

    #[test]
    fn min_cut_equals_disjoint_path_count(
        (g, ys, _) in graph_with_two_sets(8),
        root in 0usize..8,
    ) {
        let x = VertexSet::singleton(root % g.n());
        let y = ys.difference(&x);
        prop_assume!(!y.is_empty());
        prop_assume!(x.iter().all(|a| y.iter().all(|b| !g.has_edge(a, b))));
        let paths = path_interiors(&g, &x, &y);
        prop_assert_eq!(min_separator_size(&g, &x, &y).unwrap(), max_packing(&paths, 0));
    }

    #[test]
    fn connected_and_subset_oracles_agree(
        g in graph(10),
        k in 1usize..=5,
        t in 0usize..=4,
        which in 0usize..3,
        s in 0usize..10,
    ) {
        let variant = [Variant::Vertex, Variant::VertexTerminal, Variant::EdgeTerminal][which];
        let terminal = variant.has_terminal().then_some(s % g.n());
        let inst = Instance::new(g, variant, k, t, terminal).unwrap();
        let by_subsets = solve_by_subsets(&inst);
        prop_assert_eq!(by_subsets.is_yes(), solve_by_connected_sets(&inst).is_yes());
        if let Some(cert) = by_subsets.certificate() {
            prop_assert_eq!(verify_certificate(&inst, cert), Ok(()));
        }
    }

    #[test]
    fn edge_certificates_satisfy_vertex_bound(g in graph(10), k in 1usize..=4, t in 0usize..=3, s in 0usize..10) {
        let terminal = s % g.n();
        let inst = Instance::new(g, Variant::EdgeTerminal, k, t, Some(terminal)).unwrap();
        if let Some(cert) = solve_colorcoding(&inst, Mode::Derandomized).unwrap().certificate() {
            let vertex_cut = inst.graph.neighborhood(&cert.x).unwrap().len();
            prop_assert!(vertex_cut <= cert.boundary.len());
            prop_assert!(vertex_cut <= t);
        }
    }

    #[test]
    fn by_t_solver_matches_oracle(g in graph(9), k in 1usize..=5, t in 0usize..=3) {
        let inst = Instance::vertex(g.clone(), k, t).unwrap();
        let opts = SolveOptions { check_invariants: true, parallel: false };
        let (verdict, stats) = solve_by_t_with(&g, k, t, opts);
        prop_assert_eq!(verdict.is_yes(), brute_force_solve(&inst).unwrap().is_yes());
        prop_assert_eq!(stats.violations.total(), 0);
        if let Some(cert) = verdict.certificate() {
            prop_assert_eq!(verify_certificate(&inst, cert), Ok(()));
        }
    }

    #[test]
    fn planted_solutions_are_found((g, k, t) in planted()) {
        let inst = Instance::vertex(g.clone(), k, t).unwrap();
        let planted_x: VertexSet = (0..k).collect();
        prop_assert_eq!(verify_certificate(&inst, &inst.certificate_for(planted_x)), Ok(()));
        prop_assert!(solve_by_t(&g, k, t).is_yes());
        prop_assert!(solve_colorcoding(&inst, Mode::Derandomized).unwrap().is_yes());
        let term = Instance::new(g, Variant::VertexTerminal, k, t, Some(0)).unwrap();
        prop_assert!(solve_colorcoding(&term, Mode::Derandomized).unwrap().is_yes());
    }
}

#[test]
fn randomized_miss_rate_within_delta() {
    // 500 random YES instances, each solved once with the default trial
    // count (delta = 0.01) and its own seed. Misses must stay below 5%.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut runs, mut misses) = (0, 0);
    while runs < 500 {
        let n = rng.gen_range(2..=10);
        let g = random_graph_with(n, [0.2, 0.5, 0.8][rng.gen_range(0..3)], &mut rng);
        let k = rng.gen_range(1..=5);
        let t = rng.gen_range(0..=6 - k);
        let variant = [
            Variant::Vertex,
            Variant::VertexTerminal,
            Variant::EdgeTerminal,
        ][runs % 3];
        let terminal = variant.has_terminal().then(|| rng.gen_range(0..n));
        let inst = Instance::new(g, variant, k, t, terminal).unwrap();
        if !brute_force_solve(&inst).unwrap().is_yes() {
            continue;
        }
        let mode = Mode::Randomized {
            seed: runs as u64,
            trials: default_trials(k, t),
        };
        misses += usize::from(!solve_colorcoding(&inst, mode).unwrap().is_yes());
        runs += 1;
    }
    assert!(misses < 25, "{misses} misses in {runs} YES instances");
}

#[test]
fn randomized_miss_rate_on_a_unique_solution() {
    // Planted set {0,1,2} (a path) with neighbourhood {3}; the rest is a K6
    // hanging off 3, so the planted set is the only solution with k=3, t=1.
    let mut edges = vec![(0, 1), (1, 2), (2, 3)];
    edges.extend((3..9).flat_map(|a| (a + 1..9).map(move |b| (a, b))));
    let g = Graph::from_edges(9, edges).unwrap();
    let inst = Instance::new(g, Variant::VertexTerminal, 3, 1, Some(0)).unwrap();
    let trials = default_trials(3, 1);
    let runs = 500;
    let misses = (0..runs)
        .filter(|&seed| {
            !solve_colorcoding(&inst, Mode::Randomized { seed, trials })
                .unwrap()
                .is_yes()
        })
        .count();
    // At most 5 misses expected; 25 is the 5% ceiling.
    assert!(misses < 25, "{misses} misses in {runs} runs");
}
