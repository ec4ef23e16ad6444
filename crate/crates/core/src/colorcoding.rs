//! Red/blue color coding for the three "at most k" variants.
//!
//! If `X` is a connected solution, any coloring that paints `X` red and
//! `N(X)` blue makes `X` a maximal connected red set, so it suffices to look
//! at the red components of each coloring. Random colorings succeed with
//! probability at least `2^-(k+t)`; a universal family over `k + t` positions
//! makes the search deterministic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::instance::{binomial, Certificate, Instance, Variant, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

/// One color per vertex; not a proper coloring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn from_red(n: usize, red: &VertexSet) -> Self {
        Coloring(
            (0..n)
                .map(|v| {
                    if red.contains(v) {
                        Color::Red
                    } else {
                        Color::Blue
                    }
                })
                .collect(),
        )
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        Coloring(
            (0..n)
                .map(|_| {
                    if rng.gen::<bool>() {
                        Color::Red
                    } else {
                        Color::Blue
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_red(&self, v: usize) -> bool {
        self.0[v] == Color::Red
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    fn red_mask(&self) -> Vec<bool> {
        self.0.iter().map(|&c| c == Color::Red).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("strength {ell} must lie in 1..={n}")]
    InvalidStrength { n: usize, ell: usize },
    #[error("({n}, {ell})-universal family needs {pairs} coverage checks, above the limit of {MAX_VERIFIED_PAIRS}")]
    TooLarge { n: usize, ell: usize, pairs: u128 },
}

/// Largest `C(n, ell) * 2^ell` for which a family is built and verified.
pub const MAX_VERIFIED_PAIRS: u128 = 10_000_000;

/// Colorings of `n` positions such that every `ell` positions see all `2^ell`
/// red/blue patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalFamily {
    pub n: usize,
    pub ell: usize,
    pub colorings: Vec<Coloring>,
}

impl UniversalFamily {
    pub fn len(&self) -> usize {
        self.colorings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colorings.is_empty()
    }

    /// Exhaustive universality check over all `ell`-subsets of positions.
    pub fn is_universal(&self) -> bool {
        if self.ell == 0 || self.ell > self.n || self.colorings.iter().any(|c| c.len() != self.n) {
            return false;
        }
        let full = 1usize << self.ell;
        let mut seen = vec![false; full];
        let mut combo: Vec<usize> = (0..self.ell).collect();
        loop {
            seen.iter_mut().for_each(|s| *s = false);
            let mut count = 0;
            for c in &self.colorings {
                let p = pattern(c, &combo);
                if !seen[p] {
                    seen[p] = true;
                    count += 1;
                }
            }
            if count != full {
                return false;
            }
            if !next_combination(&mut combo, self.n) {
                return true;
            }
        }
    }
}

fn pattern(c: &Coloring, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &v)| acc | usize::from(c.is_red(v)) << i)
}

/// Advances `combo` to the next `r`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let r = combo.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if combo[i] < n - r + i {
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn build_universal_family(n: usize, ell: usize) -> Result<UniversalFamily, FamilyError> {
    build_universal_family_seeded(n, ell, 0x5eed_0000 ^ ((n as u64) << 16) ^ ell as u64)
}

/// Randomized greedy construction. Repeatedly takes the first uncovered
/// (subset, pattern) pair, forces that pattern onto a random coloring, and
/// records everything the coloring covers, until nothing is uncovered.
pub fn build_universal_family_seeded(
    n: usize,
    ell: usize,
    seed: u64,
) -> Result<UniversalFamily, FamilyError> {
    if ell == 0 || ell > n {
        return Err(FamilyError::InvalidStrength { n, ell });
    }
    let pairs = binomial(n, ell) << ell;
    if pairs > MAX_VERIFIED_PAIRS {
        return Err(FamilyError::TooLarge { n, ell, pairs });
    }
    let pats = 1usize << ell;
    let mut combos: Vec<usize> = Vec::new();
    let mut combo: Vec<usize> = (0..ell).collect();
    loop {
        combos.extend_from_slice(&combo);
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    let total = combos.len() / ell * pats;
    let mut covered = vec![false; total];
    let mut uncovered = total;
    let mut cursor = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colorings = Vec::new();

    while uncovered > 0 {
        while covered[cursor] {
            cursor += 1;
        }
        let (target, pat) = (cursor / pats, cursor % pats);
        let mut colors = Coloring::random(n, &mut rng).0;
        for (i, &v) in combos[target * ell..(target + 1) * ell].iter().enumerate() {
            colors[v] = if pat >> i & 1 == 1 {
                Color::Red
            } else {
                Color::Blue
            };
        }
        let coloring = Coloring(colors);
        for (ci, positions) in combos.chunks_exact(ell).enumerate() {
            let slot = ci * pats + pattern(&coloring, positions);
            if !covered[slot] {
                covered[slot] = true;
                uncovered -= 1;
            }
        }
        colorings.push(coloring);
    }
    Ok(UniversalFamily { n, ell, colorings })
}

type FamilyCache = Mutex<HashMap<(usize, usize), Arc<UniversalFamily>>>;

/// Process-wide memo of [`build_universal_family`], keyed by `(n, ell)`.
pub fn cached_universal_family(n: usize, ell: usize) -> Result<Arc<UniversalFamily>, FamilyError> {
    static CACHE: OnceLock<FamilyCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("family cache poisoned").get(&(n, ell)) {
        return Ok(Arc::clone(f));
    }
    let family = Arc::new(build_universal_family(n, ell)?);
    cache
        .lock()
        .expect("family cache poisoned")
        .insert((n, ell), Arc::clone(&family));
    Ok(family)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorCodingError {
    #[error("color coding does not handle variant {0}")]
    UnsupportedVariant(Variant),
    #[error("variant {0} requires a terminal vertex")]
    MissingTerminal(Variant),
    #[error("coloring has length {found}, graph has {expected} vertices")]
    ColoringLength { expected: usize, found: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Finds a maximal connected red set fitting the bounds, if there is one.
///
/// For the terminal variants only the red component of the terminal is
/// examined. The boundary of a maximal red component is blue automatically.
pub fn solve_two_colored(
    g: &Graph,
    coloring: &Coloring,
    k: usize,
    t: usize,
    variant: Variant,
    terminal: Option<usize>,
) -> Result<Option<Certificate>, ColorCodingError> {
    if variant == Variant::ExactK {
        return Err(ColorCodingError::UnsupportedVariant(variant));
    }
    if coloring.len() != g.n() {
        return Err(ColorCodingError::ColoringLength {
            expected: g.n(),
            found: coloring.len(),
        });
    }
    let red = coloring.red_mask();
    let candidates = if variant.has_terminal() {
        let s = terminal.ok_or(ColorCodingError::MissingTerminal(variant))?;
        if !red[s] {
            return Ok(None);
        }
        let mut blocked: Vec<bool> = red.iter().map(|&r| !r).collect();
        blocked[s] = false;
        vec![g.reachable_unchecked(&VertexSet::singleton(s), &blocked)]
    } else {
        g.components_within(&red)
    };
    Ok(candidates
        .into_iter()
        .filter(|c| c.len() <= k)
        .map(|c| Certificate::compute(g, variant, c))
        .find(|cert| cert.boundary.len() <= t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `trials` independent uniform colorings from a seeded generator.
    Randomized { seed: u64, trials: u64 },
    /// Every coloring of a `(n, min(k + t, n))`-universal family.
    Derandomized,
}

/// `ceil(ln(1/delta) * 2^(k+t))` trials, giving one-sided error at most
/// `delta`.
pub fn trials_for(k: usize, t: usize, delta: f64) -> u64 {
    ((1.0 / delta).ln() * 2f64.powi((k + t) as i32)).ceil() as u64
}

pub fn default_trials(k: usize, t: usize) -> u64 {
    trials_for(k, t, 0.01)
}

/// Upper bound on the probability that `trials` random colorings all miss a
/// fixed solution.
pub fn miss_probability(k: usize, t: usize, trials: u64) -> f64 {
    (1.0 - 2f64.powi(-((k + t) as i32))).powf(trials as f64)
}

pub fn derandomization_feasible(n: usize, k: usize, t: usize) -> bool {
    let ell = (k + t).min(n);
    n == 0 || binomial(n, ell) << ell <= MAX_VERIFIED_PAIRS
}

pub fn solve_colorcoding(inst: &Instance, mode: Mode) -> Result<Verdict, ColorCodingError> {
    if inst.variant == Variant::ExactK {
        return Err(ColorCodingError::UnsupportedVariant(inst.variant));
    }
    let g = &inst.graph;
    let n = g.n();
    if n == 0 {
        return Ok(Verdict::No);
    }
    let attempt = |c: &Coloring| {
        solve_two_colored(g, c, inst.k, inst.t, inst.variant, inst.terminal)
            .expect("validated instance")
    };
    let found = match mode {
        Mode::Randomized { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials).find_map(|_| attempt(&Coloring::random(n, &mut rng)))
        }
        Mode::Derandomized => {
            let family = cached_universal_family(n, (inst.k + inst.t).min(n))?;
            family.colorings.par_iter().find_map_first(attempt)
        }
    };
    Ok(found.map_or(Verdict::No, Verdict::Yes))
}
