//! Cross-solver equivalence sweep behind `smallcut selftest`.
//!
//! Every case draws from its own ChaCha stream keyed by `(check, index)`, so
//! reports depend only on the configuration and never on scheduling.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::colorcoding::{solve_colorcoding, Mode};
use crate::flow::{
    enumerate_important_separators, min_separator_size, unique_min_important_separator,
};
use crate::fpt::{solve_by_t_with, SolveOptions};
use crate::graph::{Graph, VertexSet};
use crate::instance::{Instance, Variant, Verdict};
use crate::oracle::{
    brute_force_solve, brute_force_solve_with, naive_important_separators, verify_certificate,
    OracleLimits,
};
use crate::reductions::{has_clique, random_graph_with, CliqueInstance, Reduction, ReductionError};

pub const EDGE_PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Largest graph for the solver comparisons (clamped to 1..=16).
    pub n_max: usize,
    /// Cases per check.
    pub instances: usize,
    /// Report NO from the by-t solver regardless of its answer. Negative
    /// control: the sweep must then fail.
    pub inject_fault: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 1,
            n_max: 10,
            instances: 200,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "selftest seed={} n_max={} instances={}{}\n",
            c.seed,
            c.n_max,
            c.instances,
            if c.inject_fault { " inject_fault" } else { "" }
        );
        for check in &self.checks {
            let _ = writeln!(
                out,
                "{} {}: {} cases, {} failures",
                if check.failures == 0 { "PASS" } else { "FAIL" },
                check.name,
                check.cases,
                check.failures
            );
            if let Some(f) = &check.first_failure {
                let _ = writeln!(out, "  first failure: {f}");
            }
        }
        let cases: usize = self.checks.iter().map(|c| c.cases).sum();
        let failures: usize = self.checks.iter().map(|c| c.failures).sum();
        let _ = writeln!(
            out,
            "RESULT selftest status={} checks={} cases={cases} failures={failures}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        out
    }
}

/// The RNG for case `index` of check `check`.
pub fn case_rng(seed: u64, check: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((check << 32) | index as u64);
    rng
}

fn random_graph<R: Rng>(rng: &mut R, n_lo: usize, n_hi: usize) -> Graph {
    let n = rng.gen_range(n_lo..=n_hi);
    let p = EDGE_PROBABILITIES[rng.gen_range(0..EDGE_PROBABILITIES.len())];
    random_graph_with(n, p, rng)
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> VertexSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// Runs `case` on every index in parallel; `Err` counts as a failure.
fn run_check<F>(name: &'static str, cfg: &SelftestConfig, check: u64, case: F) -> CheckOutcome
where
    F: Fn(&mut ChaCha8Rng) -> Option<Result<(), String>> + Sync,
{
    let results: Vec<Option<Result<(), String>>> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| case(&mut case_rng(cfg.seed, check, i)))
        .collect();
    let ran: Vec<&Result<(), String>> = results.iter().flatten().collect();
    let failures: Vec<&String> = ran.iter().filter_map(|r| r.as_ref().err()).collect();
    CheckOutcome {
        name,
        cases: ran.len(),
        failures: failures.len(),
        first_failure: failures.first().map(|s| s.to_string()),
    }
}

fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("n={} edges=[{}]", g.n(), edges.join(" "))
}

fn check_yes(inst: &Instance, verdict: &Verdict) -> Result<(), String> {
    match verdict.certificate() {
        Some(cert) => {
            verify_certificate(inst, cert).map_err(|e| format!("bad certificate {}: {e}", cert.x))
        }
        None => Ok(()),
    }
}

fn by_t_case(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n_max = cfg.n_max.clamp(1, 16);
    let g = random_graph(rng, 1, n_max);
    let k = rng.gen_range(1..=g.n().min(6));
    let t = rng.gen_range(0..=4);
    let inst = Instance::vertex(g.clone(), k, t).expect("k >= 1");
    let opts = SolveOptions {
        check_invariants: true,
        parallel: false,
    };
    let (mut verdict, stats) = solve_by_t_with(&g, k, t, opts);
    if cfg.inject_fault {
        verdict = Verdict::No;
    }
    let truth = brute_force_solve(&inst).map_err(|e| e.to_string())?;
    let ctx = || format!("{} k={k} t={t}", describe(&g));
    if verdict.is_yes() != truth.is_yes() {
        return Err(format!("{}: solver {verdict}, oracle {truth}", ctx()));
    }
    if stats.violations.total() > 0 || stats.bound_violations > 0 {
        return Err(format!(
            "{}: anchor-state violations {:?}",
            ctx(),
            stats.violations
        ));
    }
    check_yes(&inst, &verdict).map_err(|e| format!("{}: {e}", ctx()))
}

fn colorcoding_case(
    cfg: &SelftestConfig,
    variant: Variant,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let g = random_graph(rng, 1, cfg.n_max.clamp(1, 10));
    let k = rng.gen_range(1..=6);
    let t = rng.gen_range(0..=6 - k);
    let terminal = variant.has_terminal().then(|| rng.gen_range(0..g.n()));
    let inst = Instance::new(g, variant, k, t, terminal).expect("valid parameters");
    let verdict = solve_colorcoding(&inst, Mode::Derandomized).map_err(|e| e.to_string())?;
    let truth = brute_force_solve(&inst).map_err(|e| e.to_string())?;
    if verdict.is_yes() != truth.is_yes() {
        return Err(format!(
            "{} {variant} k={k} t={t} terminal={terminal:?}: color coding {verdict}, oracle {truth}",
            describe(&inst.graph)
        ));
    }
    check_yes(&inst, &verdict)
}

fn separator_case(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = random_graph(rng, 2, cfg.n_max.clamp(2, 10));
    let n = g.n();
    let x = VertexSet::singleton(rng.gen_range(0..n));
    let mut y = random_subset(rng, n, 0.25).difference(&x);
    if y.is_empty() {
        y.insert((x.first().unwrap() + 1) % n);
    }
    let t = rng.gen_range(0..=4);
    let ctx = format!("{} X={x} Y={y} t={t}", describe(&g));
    let found = enumerate_important_separators(&g, &x, &y, t).map_err(|e| format!("{ctx}: {e}"))?;
    if found.len() > 1 << (2 * t) {
        return Err(format!("{ctx}: {} separators exceed 4^t", found.len()));
    }
    let mut got: Vec<VertexSet> = found.iter().map(|s| s.members.clone()).collect();
    got.sort();
    let mut want = naive_important_separators(&g, &x, &y, t).map_err(|e| format!("{ctx}: {e}"))?;
    want.sort();
    if got != want {
        return Err(format!("{ctx}: enumeration differs from definition"));
    }
    if let Ok(min) = min_separator_size(&g, &x, &y) {
        if min <= t {
            let minimum: Vec<&VertexSet> = got.iter().filter(|s| s.len() == min).collect();
            let unique =
                unique_min_important_separator(&g, &x, &y).map_err(|e| format!("{ctx}: {e}"))?;
            if minimum.len() != 1 || *minimum[0] != unique.members {
                return Err(format!(
                    "{ctx}: {} minimum important separators",
                    minimum.len()
                ));
            }
        }
    }
    Ok(())
}

/// Oracle limits that let the exhaustive search finish on reduced instances.
pub const REDUCED_LIMITS: OracleLimits = OracleLimits {
    max_subset_n: 64,
    max_connected_k: 8,
};

pub fn reduction_case(reduction: Reduction, g: Graph, k: usize) -> Result<(), String> {
    let expect = has_clique(&g, k);
    let ctx = format!("{} k={k} {reduction:?}", describe(&g));
    let src = CliqueInstance::new(g, k).map_err(|e| format!("{ctx}: {e}"))?;
    match reduction.apply(&src) {
        Ok(r) => {
            let verdict = brute_force_solve_with(&r.instance, REDUCED_LIMITS)
                .map_err(|e| format!("{ctx}: {e}"))?;
            if verdict.is_yes() != expect {
                return Err(format!(
                    "{ctx}: clique {expect}, reduced instance {verdict}"
                ));
            }
            check_yes(&r.instance, &verdict)
        }
        Err(ReductionError::NoEdges | ReductionError::Degenerate { .. }) if !expect => Ok(()),
        Err(e) => Err(format!("{ctx}: {e}")),
    }
}

fn reductions_case(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> Option<Result<(), String>> {
    let g = random_graph(rng, 2, cfg.n_max.clamp(2, 6));
    let k = rng.gen_range(2..=g.n().min(3));
    let reduction = [
        Reduction::VertexCut,
        Reduction::TerminalVertexCut,
        Reduction::TerminalEdgeCut,
    ][rng.gen_range(0..3)];
    if reduction == Reduction::TerminalEdgeCut && g.is_regular().is_none() {
        return None;
    }
    Some(reduction_case(reduction, g, k))
}

fn submodularity_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = random_graph(rng, 1, 12);
    let (a, b) = (
        random_subset(rng, g.n(), 0.4),
        random_subset(rng, g.n(), 0.4),
    );
    let size = |s: &VertexSet| g.neighborhood(s).expect("in range").len();
    let (lhs, rhs) = (
        size(&a.intersection(&b)) + size(&a.union(&b)),
        size(&a) + size(&b),
    );
    if lhs > rhs {
        return Err(format!("{} A={a} B={b}: {lhs} > {rhs}", describe(&g)));
    }
    Ok(())
}

pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let checks = vec![
        run_check("by-t solver vs oracle", cfg, 0, |rng| {
            Some(by_t_case(cfg, rng))
        }),
        run_check("color coding (vertex) vs oracle", cfg, 1, |rng| {
            Some(colorcoding_case(cfg, Variant::Vertex, rng))
        }),
        run_check("color coding (vertex-terminal) vs oracle", cfg, 2, |rng| {
            Some(colorcoding_case(cfg, Variant::VertexTerminal, rng))
        }),
        run_check("color coding (edge-terminal) vs oracle", cfg, 3, |rng| {
            Some(colorcoding_case(cfg, Variant::EdgeTerminal, rng))
        }),
        run_check("important separators vs definition", cfg, 4, |rng| {
            Some(separator_case(cfg, rng))
        }),
        run_check("reductions vs clique search", cfg, 5, |rng| {
            reductions_case(cfg, rng)
        }),
        run_check("submodularity of |N(.)|", cfg, 6, |rng| {
            Some(submodularity_case(rng))
        }),
    ];
    SelftestReport {
        config: *cfg,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(inject_fault: bool) -> SelftestConfig {
        SelftestConfig {
            seed: 7,
            n_max: 7,
            instances: 30,
            inject_fault,
        }
    }

    #[test]
    fn small_sweep_passes_and_is_deterministic() {
        let a = run_selftest(&small(false));
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a.render(), run_selftest(&small(false)).render());
        assert!(a.render().ends_with("failures=0\n"));
    }

    #[test]
    fn injected_fault_is_caught() {
        let r = run_selftest(&small(true));
        assert!(!r.passed());
        assert!(r.checks[0].failures > 0);
        assert!(r.render().contains("status=FAIL"));
    }

    #[test]
    fn case_streams_differ() {
        let a: u64 = case_rng(1, 0, 0).gen();
        assert_ne!(a, case_rng(1, 0, 1).gen::<u64>());
        assert_ne!(a, case_rng(1, 1, 0).gen::<u64>());
        assert_eq!(a, case_rng(1, 0, 0).gen::<u64>());
    }
}
