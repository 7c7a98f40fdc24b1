//! Constructive subgroups and distortion probes.
//!
//! The two halves of this module:
//!
//! * Z-wr-Z inside a diagram group: given words `x, y, z` with `xy = x` and
//!   `yz = z` and a nontrivial `(y, y)`-diagram, the pair
//!   `a = ε(x) + Δ + ε(z)`, `b = Γ1 + Γ2` generates a restricted wreath
//!   product of two infinite cyclic groups. [`zwrz_generators`] builds the
//!   pair, [`zwrz_witness_search`] hunts for the words and the diagram, and
//!   [`verify_zwrz`] checks the defining identities to a chosen depth.
//! * Concrete subgroups of the base-`x` group: the direct-square embedding
//!   given by [`ff_embed`], its standard subgroup generators
//!   ([`square_subgroup_generators`]), and bounded distortion profiling
//!   over any backend with decidable equality ([`distortion_profile`]).

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::hash::Hash;

use rand::Rng;

use crate::diagram::{Diagram, DiagramError};
use crate::presentation::{
    words_equal_bounded, Presentation, PresentationError, SearchLimits, Word,
};
use crate::sampling;
use crate::thompson::{NormalForm, ThompsonError};
use crate::wreath::{WreathElement, WreathError};

/// Errors from subgroup construction.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubgroupError {
    #[error("precondition failed: {message}")]
    Precondition { message: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Thompson(#[from] ThompsonError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

fn precondition(message: impl Into<String>) -> SubgroupError {
    SubgroupError::Precondition {
        message: message.into(),
    }
}

/// Builds the standard Z-wr-Z generating pair over `p` from words with
/// `xy = x` and `yz = z` (verified by bounded search), a nontrivial
/// `(y, y)`-diagram `delta`, an `(xy, x)`-diagram `gamma1` and a
/// `(z, yz)`-diagram `gamma2`. Returns the `(xyz, xyz)`-diagrams
/// `(ε(x) + delta + ε(z), gamma1 + gamma2)`.
pub fn zwrz_generators(
    p: &Presentation,
    x: &Word,
    y: &Word,
    z: &Word,
    delta: &Diagram,
    gamma1: &Diagram,
    gamma2: &Diagram,
) -> Result<(Diagram, Diagram), SubgroupError> {
    let limits = SearchLimits::default();
    if !words_equal_bounded(p, &x.concat(y), x, &limits).is_equal() {
        return Err(precondition("xy = x does not hold within search bounds"));
    }
    if !words_equal_bounded(p, &y.concat(z), z, &limits).is_equal() {
        return Err(precondition("yz = z does not hold within search bounds"));
    }
    if delta.reduce().is_trivial() {
        return Err(precondition("delta must be a nontrivial diagram"));
    }
    let boundary_check = |d: &Diagram, top: &Word, bottom: &Word, name: &str| {
        if d.presentation() != p {
            return Err(precondition(format!("{name} is over another presentation")));
        }
        if d.top() != top || d.bottom() != bottom {
            return Err(precondition(format!(
                "{name} must be a ({}, {})-diagram, got ({}, {})",
                p.display_word(top),
                p.display_word(bottom),
                p.display_word(d.top()),
                p.display_word(d.bottom()),
            )));
        }
        Ok(())
    };
    boundary_check(delta, y, y, "delta")?;
    boundary_check(gamma1, &x.concat(y), x, "gamma1")?;
    boundary_check(gamma2, z, &y.concat(z), "gamma2")?;
    let a = Diagram::identity(p, x).sum(delta)?.sum(&Diagram::identity(p, z))?;
    let b = gamma1.sum(gamma2)?;
    Ok((a, b))
}

/// Outcome of [`verify_zwrz`]: which of the wreath-product identities held
/// at the requested depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZwrZReport {
    /// `[a, b]` is not the identity.
    pub base_nontrivial: bool,
    /// Pairs `(i, j)` with `0 ≤ i < j ≤ depth` where `[a^{b^i}, a^{b^j}]`
    /// failed to be the identity.
    pub commuting_failures: Vec<(usize, usize)>,
    pub depth: usize,
    /// Random products `Π (a^{b^i})^{d_i}` with not-all-zero exponents
    /// that were checked for nontriviality, and how many collapsed.
    pub product_samples: usize,
    pub product_failures: usize,
}

impl ZwrZReport {
    pub fn passed(&self) -> bool {
        self.base_nontrivial && self.commuting_failures.is_empty() && self.product_failures == 0
    }
}

impl fmt::Display for ZwrZReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[a, b] != 1: {}",
            if self.base_nontrivial { "pass" } else { "FAIL" }
        )?;
        if self.commuting_failures.is_empty() {
            writeln!(
                f,
                "[a^(b^i), a^(b^j)] = 1 for 0 <= i < j <= {}: pass",
                self.depth
            )?;
        } else {
            writeln!(
                f,
                "[a^(b^i), a^(b^j)] = 1: FAIL at {:?}",
                self.commuting_failures
            )?;
        }
        writeln!(
            f,
            "nontrivial products over a^(b^i): {}/{} pass",
            self.product_samples - self.product_failures,
            self.product_samples
        )?;
        write!(f, "verdict: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Checks the Z-wr-Z identities for spherical diagrams `a, b` on a common
/// base: `[a, b] ≠ ε`, `[a^{b^i}, a^{b^j}] = ε` for `0 ≤ i < j ≤ depth`,
/// and nontriviality of a sample of products `Π (a^{b^i})^{d_i}` with
/// small, not-all-zero exponents (free-basis evidence at this depth only —
/// the report never claims the full isomorphism).
pub fn verify_zwrz(a: &Diagram, b: &Diagram, depth: usize) -> Result<ZwrZReport, SubgroupError> {
    if !a.is_spherical() || !b.is_spherical() || a.top() != b.top() {
        return Err(precondition("a and b must be spherical on a common base"));
    }
    let commutator = |u: &Diagram, v: &Diagram| -> Result<Diagram, DiagramError> {
        Ok(u.group_inv()?
            .group_mul(&v.group_inv()?)?
            .group_mul(u)?
            .group_mul(v)?)
    };
    let base_nontrivial = !commutator(a, b)?.is_trivial();
    // conjugates[i] = a^{b^i}, always kept reduced.
    let mut conjugates = vec![a.reduce()];
    for _ in 0..depth {
        let prev = conjugates.last().unwrap();
        conjugates.push(b.group_inv()?.group_mul(prev)?.group_mul(b)?);
    }
    let mut commuting_failures = Vec::new();
    for i in 0..=depth {
        for j in (i + 1)..=depth {
            if !commutator(&conjugates[i], &conjugates[j])?.is_trivial() {
                commuting_failures.push((i, j));
            }
        }
    }
    let mut rng = sampling::seeded(0x5a5a);
    let product_samples = 8;
    let mut product_failures = 0;
    for _ in 0..product_samples {
        let exponents: Vec<i32> = loop {
            let e: Vec<i32> = (0..=depth).map(|_| rng.gen_range(-2..=2)).collect();
            if e.iter().any(|&d| d != 0) {
                break e;
            }
        };
        let mut product = Diagram::identity(a.presentation(), a.top());
        for (i, &d) in exponents.iter().enumerate() {
            let factor = if d < 0 {
                conjugates[i].group_inv()?
            } else {
                conjugates[i].clone()
            };
            for _ in 0..d.unsigned_abs() {
                product = product.group_mul(&factor)?;
            }
        }
        if product.is_trivial() {
            product_failures += 1;
        }
    }
    Ok(ZwrZReport {
        base_nontrivial,
        commuting_failures,
        depth,
        product_samples,
        product_failures,
    })
}

/// Bounds for [`zwrz_witness_search`].
#[derive(Debug, Clone, Copy)]
pub struct WitnessSearchBounds {
    /// Maximum length of each candidate word `x`, `y`, `z`.
    pub max_triple_len: usize,
    /// Bounds for the word-equality searches.
    pub equality: SearchLimits,
    /// Bounds for the search for a nontrivial `(y, y)`-diagram.
    pub diagram: SearchLimits,
}

impl Default for WitnessSearchBounds {
    fn default() -> WitnessSearchBounds {
        WitnessSearchBounds {
            max_triple_len: 2,
            equality: SearchLimits {
                max_word_len: 12,
                max_visited: 4096,
            },
            diagram: SearchLimits {
                max_word_len: 8,
                max_visited: 4096,
            },
        }
    }
}

/// A certified witness that the base `w` supports the Z-wr-Z construction:
/// words with `xy = x`, `yz = z`, `xz = w` (all verified within bounds)
/// and a nontrivial reduced spherical `(y, y)`-diagram.
#[derive(Debug, Clone)]
pub struct ZwrZWitness {
    pub x: Word,
    pub y: Word,
    pub z: Word,
    pub delta: Diagram,
}

/// Searches for a nontrivial reduced spherical diagram on `base` by
/// breadth-first exploration: the first time two distinct edge paths meet
/// at a word, the loop they close is a candidate; the first candidate that
/// stays nontrivial after reduction wins.
pub fn nontrivial_sphere_search(
    p: &Presentation,
    base: &Word,
    limits: &SearchLimits,
) -> Option<Diagram> {
    use std::collections::VecDeque;
    let mut parent: HashMap<Word, (Word, crate::presentation::Step)> = HashMap::new();
    let mut order = vec![base.clone()];
    let mut queue = VecDeque::from([base.clone()]);
    let path_to = |parent: &HashMap<Word, (Word, crate::presentation::Step)>,
                   target: &Word|
     -> Vec<crate::presentation::Step> {
        let mut steps = Vec::new();
        let mut at = target.clone();
        while let Some((prev, s)) = parent.get(&at) {
            steps.push(*s);
            at = prev.clone();
        }
        steps.reverse();
        steps
    };
    while let Some(w) = queue.pop_front() {
        for step in p.applicable_steps(&w) {
            let next = p.apply_step(&w, &step).expect("enumerated step applies");
            if next.len() > limits.max_word_len {
                continue;
            }
            if parent.contains_key(&next) || next == *base {
                // Two ways to reach `next`: close the loop and test it.
                let mut steps = path_to(&parent, &w);
                steps.push(step);
                for s in path_to(&parent, &next).into_iter().rev() {
                    steps.push(s.flipped());
                }
                let d = Diagram::from_derivation(
                    p,
                    &crate::presentation::Derivation {
                        start: base.clone(),
                        steps,
                    },
                )
                .expect("loop derivation replays")
                .reduce();
                if !d.is_trivial() {
                    return Some(d);
                }
                continue;
            }
            if order.len() >= limits.max_visited {
                return None;
            }
            parent.insert(next.clone(), (w.clone(), step));
            order.push(next.clone());
            queue.push_back(next.clone());
        }
    }
    None
}

/// Bounded search for a Z-wr-Z witness over base `w`: enumerates word
/// triples up to the length bound, certifies `xy = x`, `yz = z`, `xz = w`
/// by bounded equality search, and looks for a nontrivial reduced
/// spherical `(y, y)`-diagram. `None` is inconclusive — a witness may
/// exist beyond the bounds.
pub fn zwrz_witness_search(
    p: &Presentation,
    w: &Word,
    bounds: &WitnessSearchBounds,
) -> Option<ZwrZWitness> {
    let mut candidates = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..bounds.max_triple_len {
        let mut next = Vec::new();
        for word in &layer {
            for l in 0..p.letter_count() {
                let mut v = word.0.clone();
                v.push(l as u32);
                next.push(Word(v));
            }
        }
        candidates.extend(next.iter().cloned());
        layer = next;
    }
    let nonempty: Vec<&Word> = candidates.iter().filter(|c| !c.is_empty()).collect();
    for x in &nonempty {
        for z in &nonempty {
            if !words_equal_bounded(p, &x.concat(z), w, &bounds.equality).is_equal() {
                continue;
            }
            for y in &nonempty {
                if !words_equal_bounded(p, &x.concat(y), x, &bounds.equality).is_equal() {
                    continue;
                }
                if !words_equal_bounded(p, &y.concat(z), z, &bounds.equality).is_equal() {
                    continue;
                }
                if let Some(delta) = nontrivial_sphere_search(p, y, &bounds.diagram) {
                    return Some(ZwrZWitness {
                        x: (*x).clone(),
                        y: (*y).clone(),
                        z: (*z).clone(),
                        delta,
                    });
                }
            }
        }
    }
    None
}

/// Which factor of the direct square a generator lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn side_images(side: Side) -> (NormalForm, NormalForm) {
    let parse = |t: &str| NormalForm::parse(t).expect("fixed image parses");
    match side {
        Side::Left => (parse("x1 x2 x1^-2"), parse("x1^2 x2 x1^-3")),
        Side::Right => (parse("x2 x3 x2^-2"), parse("x2^2 x3 x2^-3")),
    }
}

/// Embeds the base-`x` group into itself as the `side` factor of a direct
/// square: generator images are `x0 ↦ x1x2x1^-2`, `x1 ↦ x1^2x2x1^-3` on
/// the left and `x0 ↦ x2x3x2^-2`, `x1 ↦ x2^2x3x2^-3` on the right, with
/// higher generators expanded through `x_{k+1} = x_k^{x0}`. Images of the
/// two sides commute elementwise.
pub fn ff_embed(g: &NormalForm, side: Side) -> NormalForm {
    let (im0, im1) = side_images(side);
    let mut image_cache: Vec<NormalForm> = vec![im0.clone(), im1.clone()];
    let mut image_of = |k: u32| -> NormalForm {
        while image_cache.len() <= k as usize {
            let prev = image_cache.last().unwrap();
            image_cache.push(im0.inv().mul(prev).mul(&im0));
        }
        image_cache[k as usize].clone()
    };
    let mut out = NormalForm::identity();
    for (k, positive) in g.to_letters() {
        let img = image_of(k);
        out = out.mul(&if positive { img } else { img.inv() });
    }
    out
}

/// The standard generators of the square subgroup `(g, g), ([x0, x1], 1)`
/// under [`ff_embed`]: the images of `(x1x2x1^-2, x1x2x1^-2)`,
/// `(x0, x0)` and `([x1x2x1^-2, x0], 1)`, as normal forms.
pub fn square_subgroup_generators() -> [NormalForm; 3] {
    let a = NormalForm::parse("x1 x2 x1^-2").expect("fixed word parses");
    let b = NormalForm::parse("x0").expect("fixed word parses");
    let comm = a.inv().mul(&b.inv()).mul(&a).mul(&b);
    let both = |g: &NormalForm| ff_embed(g, Side::Left).mul(&ff_embed(g, Side::Right));
    [both(&a), both(&b), ff_embed(&comm, Side::Left)]
}

/// Group operations over some element type with decidable equality, the
/// interface the distortion profiler works against.
pub trait GroupOps {
    type Elem: Clone + PartialEq + Eq + Hash;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn describe(&self, a: &Self::Elem) -> String;
}

/// The base-`x` diagram group with elements in normal form.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThompsonOps;

impl GroupOps for ThompsonOps {
    type Elem = NormalForm;
    fn identity(&self) -> NormalForm {
        NormalForm::identity()
    }
    fn mul(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        a.mul(b)
    }
    fn inv(&self, a: &NormalForm) -> NormalForm {
        a.inv()
    }
    fn describe(&self, a: &NormalForm) -> String {
        a.to_string()
    }
}

/// An iterated wreath product at a fixed level.
#[derive(Debug, Clone, Copy)]
pub struct WreathOps {
    pub level: usize,
}

impl GroupOps for WreathOps {
    type Elem = WreathElement;
    fn identity(&self) -> WreathElement {
        WreathElement::identity(self.level)
    }
    fn mul(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        a.mul(b).expect("profiled elements share a level")
    }
    fn inv(&self, a: &WreathElement) -> WreathElement {
        a.inv()
    }
    fn describe(&self, a: &WreathElement) -> String {
        a.to_string()
    }
}

/// A bounded distortion profile: for each `n ≤ n_max`, the largest
/// subgroup length `|g|_X` seen among elements with `|g|_Y ≤ n`.
#[derive(Debug, Clone)]
pub struct DistortionTable {
    pub x_generators: Vec<String>,
    pub y_generators: Vec<String>,
    /// Rows `(n, disto_lower(n), exact)`; `disto_lower` is monotone.
    pub rows: Vec<(usize, u64, bool)>,
}

impl DistortionTable {
    /// CSV with header `n,disto_lower,exact`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,disto_lower,exact\n");
        for &(n, d, exact) in &self.rows {
            let _ = writeln!(out, "{n},{d},{exact}");
        }
        out
    }
}

fn ball<O: GroupOps>(
    ops: &O,
    generators: &[O::Elem],
    radius: usize,
    max_size: usize,
) -> (HashMap<O::Elem, usize>, bool) {
    let mut lengths = HashMap::from([(ops.identity(), 0usize)]);
    let mut frontier = vec![ops.identity()];
    let mut closed = false;
    let mut directed: Vec<O::Elem> = Vec::new();
    for g in generators {
        directed.push(g.clone());
        directed.push(ops.inv(g));
    }
    for r in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &directed {
                let h = ops.mul(g, s);
                if lengths.len() >= max_size {
                    return (lengths, false);
                }
                if !lengths.contains_key(&h) {
                    lengths.insert(h.clone(), r);
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            closed = true;
            break;
        }
        frontier = next;
    }
    // The ball is the whole subgroup only if growth stopped early.
    (lengths, closed)
}

/// Profiles the distortion of `⟨X⟩` inside `⟨Y⟩`: enumerates the `Y`-ball
/// to radius `n_max` and the `X`-ball to radius `m_max` (both with
/// canonical-form deduplication), then reports for each `n` the largest
/// `|g|_X` among elements of the `Y`-ball of radius `n` that were found in
/// the `X`-ball. A row is exact when every such element was resolved —
/// either found in the `X`-ball or, if the `X`-enumeration closed up,
/// provably outside the subgroup; otherwise it is a lower bound.
pub fn distortion_profile<O: GroupOps>(
    ops: &O,
    x_generators: &[O::Elem],
    y_generators: &[O::Elem],
    n_max: usize,
    m_max: usize,
    max_ball: usize,
) -> DistortionTable {
    let (y_ball, _) = ball(ops, y_generators, n_max, max_ball);
    let (x_ball, x_closed) = ball(ops, x_generators, m_max, max_ball);
    let mut rows = Vec::new();
    let mut best = 0u64;
    let mut all_resolved = true;
    for n in 1..=n_max {
        for (g, &ly) in &y_ball {
            if ly != n {
                continue;
            }
            match x_ball.get(g) {
                Some(&lx) => best = best.max(lx as u64),
                None if x_closed => {}
                None => all_resolved = false,
            }
        }
        rows.push((n, best, all_resolved));
    }
    DistortionTable {
        x_generators: x_generators.iter().map(|g| ops.describe(g)).collect(),
        y_generators: y_generators.iter().map(|g| ops.describe(g)).collect(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thompson::{self, nf_to_diagram};
    use crate::wreath;

    fn nf(text: &str) -> NormalForm {
        NormalForm::parse(text).unwrap()
    }

    fn square_presentation() -> Presentation {
        Presentation::parse("idempotent", "x | x x = x").unwrap()
    }

    #[test]
    fn witness_search_finds_idempotent_data() {
        let p = square_presentation();
        let w = p.parse_word("x").unwrap();
        let witness = zwrz_witness_search(&p, &w, &WitnessSearchBounds::default()).unwrap();
        assert_eq!(p.display_word(&witness.x), "x");
        assert_eq!(p.display_word(&witness.y), "x");
        assert_eq!(p.display_word(&witness.z), "x");
        assert!(witness.delta.is_reduced());
        assert!(!witness.delta.is_trivial());
        assert!(witness.delta.is_spherical());
        assert_eq!(witness.delta.top(), &witness.y);
        // The smallest nontrivial reduced spherical diagram here has four
        // cells: any two-cell sphere is a dipole.
        assert_eq!(witness.delta.cells(), 4);
    }

    #[test]
    fn witness_search_rejects_hopeless_bases() {
        let free = Presentation::parse("free", "a b |").unwrap();
        let w = free.parse_word("a b").unwrap();
        assert!(zwrz_witness_search(&free, &w, &WitnessSearchBounds::default()).is_none());

        let comm = Presentation::parse("comm", "a b | a b = b a").unwrap();
        let w = comm.parse_word("a b").unwrap();
        assert!(zwrz_witness_search(&comm, &w, &WitnessSearchBounds::default()).is_none());
    }

    #[test]
    fn generator_construction_and_verification() {
        let p = square_presentation();
        let x = p.parse_word("x").unwrap();
        let witness = zwrz_witness_search(&p, &x, &WitnessSearchBounds::default()).unwrap();
        let gamma1 = Diagram::one_cell(&p, 0, true);
        let gamma2 = Diagram::one_cell(&p, 0, false);
        let (a, b) =
            zwrz_generators(&p, &x, &x, &x, &witness.delta, &gamma1, &gamma2).unwrap();
        let base = p.parse_word("x x x").unwrap();
        assert_eq!(a.top(), &base);
        assert_eq!(a.bottom(), &base);
        assert_eq!(b.top(), &base);
        assert_eq!(b.bottom(), &base);
        let report = verify_zwrz(&a, &b, 4).unwrap();
        assert!(report.passed(), "report:\n{report}");
        assert!(report.to_string().contains("verdict: pass"));

        // a = b fails immediately.
        let degenerate = verify_zwrz(&a, &a, 2).unwrap();
        assert!(!degenerate.base_nontrivial);
        assert!(!degenerate.passed());

        // Precondition failures.
        let trivial = Diagram::identity(&p, &x);
        assert!(matches!(
            zwrz_generators(&p, &x, &x, &x, &trivial, &gamma1, &gamma2),
            Err(SubgroupError::Precondition { .. })
        ));
        assert!(matches!(
            zwrz_generators(&p, &x, &x, &x, &witness.delta, &gamma2, &gamma1),
            Err(SubgroupError::Precondition { .. })
        ));
        let free = Presentation::parse("free", "a b |").unwrap();
        let aw = free.parse_word("a").unwrap();
        let bw = free.parse_word("b").unwrap();
        let e = Diagram::identity(&free, &aw);
        assert!(matches!(
            zwrz_generators(&free, &aw, &bw, &aw, &e, &e, &e),
            Err(SubgroupError::Precondition { .. })
        ));
    }

    #[test]
    fn thompson_pair_passes_zwrz_checks() {
        // a = x1 x2 x1^-2 and b = x0 generate a Z-wr-Z inside the
        // base-x group.
        let a = nf_to_diagram(&nf("x1 x2 x1^-2"), 1).unwrap();
        let b = nf_to_diagram(&nf("x0"), 1).unwrap();
        let report = verify_zwrz(&a, &b, 4).unwrap();
        assert!(report.passed(), "report:\n{report}");
    }

    #[test]
    fn embedding_respects_defining_relations() {
        // x_{j+1} = x_j^{x0} for j >= 1 must survive the embedding.
        for side in [Side::Left, Side::Right] {
            for j in 1..4u32 {
                let lhs = ff_embed(&NormalForm::generator(j + 1), side);
                let conj = NormalForm::generator(0)
                    .inv()
                    .mul(&NormalForm::generator(j))
                    .mul(&NormalForm::generator(0));
                assert_eq!(lhs, ff_embed(&conj, side));
            }
        }
        assert_eq!(ff_embed(&nf("x0"), Side::Left), nf("x1 x2 x1^-2"));
        assert_eq!(ff_embed(&nf("x1"), Side::Left), nf("x1^2 x2 x1^-3"));
        assert_eq!(ff_embed(&nf("x0"), Side::Right), nf("x2 x3 x2^-2"));
        assert_eq!(ff_embed(&nf("x1"), Side::Right), nf("x2^2 x3 x2^-3"));
        assert_eq!(ff_embed(&NormalForm::identity(), Side::Left), NormalForm::identity());
        assert_eq!(ff_embed(&NormalForm::identity(), Side::Right), NormalForm::identity());
        // Each side is a homomorphism.
        for (g, _) in thompson::ball(2) {
            for (h, _) in thompson::ball(2) {
                for side in [Side::Left, Side::Right] {
                    assert_eq!(
                        ff_embed(&g.mul(&h), side),
                        ff_embed(&g, side).mul(&ff_embed(&h, side))
                    );
                }
            }
        }
    }

    #[test]
    fn side_images_commute() {
        for (g, _) in thompson::ball(3) {
            for (h, _) in thompson::ball(3) {
                let left = ff_embed(&g, Side::Left);
                let right = ff_embed(&h, Side::Right);
                assert_eq!(
                    left.mul(&right),
                    right.mul(&left),
                    "images of {g} and {h} fail to commute"
                );
            }
        }
    }

    #[test]
    fn square_subgroup_generator_goldens() {
        let gens = square_subgroup_generators();
        assert_eq!(
            gens[0].to_string(),
            "x1^2 x2^2 x6^2 x7^2 x8^-1 x7^-1 x6^-2 x3^-1 x2^-1 x1^-2"
        );
        assert_eq!(gens[1].to_string(), "x1 x2 x4 x5 x4^-2 x1^-2");
        assert_eq!(
            gens[2].to_string(),
            "x1^3 x2^2 x5 x6 x5^-2 x3^-1 x2^-1 x1^-3"
        );
    }

    #[test]
    fn wreath_identities_transfer_to_thompson_images() {
        // The map a ↦ x1x2x1^-2, b ↦ x0 preserves the identities checked
        // in the wreath backend.
        let a = nf("x1 x2 x1^-2");
        let b = nf("x0");
        let conj = |g: &NormalForm, h: &NormalForm| h.inv().mul(g).mul(h);
        let comm = |g: &NormalForm, h: &NormalForm| g.inv().mul(&h.inv()).mul(g).mul(h);
        assert!(!comm(&a, &b).is_identity());
        let mut b_pow = NormalForm::identity();
        let mut conjugates = Vec::new();
        for _ in 0..=4 {
            conjugates.push(conj(&a, &b_pow));
            b_pow = b_pow.mul(&b);
        }
        for i in 0..conjugates.len() {
            for j in (i + 1)..conjugates.len() {
                assert!(comm(&conjugates[i], &conjugates[j]).is_identity());
            }
        }
        // One identity double-checked at the diagram level.
        let d = nf_to_diagram(&comm(&conjugates[0], &conjugates[2]), 1).unwrap();
        assert!(d.reduce().is_trivial());
        // The commutator word [a^n, b^n] has length 4n over {a, b} and its
        // wreath image is the standard deep element.
        for n in 1..=6i64 {
            let g_n = comm(
                &std::iter::repeat(&a).take(n as usize).fold(NormalForm::identity(), |acc, g| acc.mul(g)),
                &std::iter::repeat(&b).take(n as usize).fold(NormalForm::identity(), |acc, g| acc.mul(g)),
            );
            assert!(!g_n.is_identity());
            assert_eq!(wreath::relator_cost_zwrz(&wreath::g_k_n(2, n).unwrap()).unwrap(), (n * n) as u64);
        }
    }

    #[test]
    fn identity_embedding_profile_is_linear() {
        let ops = ThompsonOps;
        let gens = [nf("x0"), nf("x1")];
        let table = distortion_profile(&ops, &gens, &gens, 4, 4, 100_000);
        for (i, &(n, d, exact)) in table.rows.iter().enumerate() {
            assert_eq!(n, i + 1);
            assert_eq!(d, n as u64, "identity embedding is undistorted");
            assert!(exact);
        }
        let csv = table.to_csv();
        assert!(csv.starts_with("n,disto_lower,exact\n1,1,true\n"));
    }

    #[test]
    fn cyclic_subgroup_profile_is_linear() {
        let ops = ThompsonOps;
        let x = [nf("x0")];
        let y = [nf("x0"), nf("x1")];
        let table = distortion_profile(&ops, &x, &y, 6, 8, 200_000);
        for &(n, d, exact) in &table.rows {
            assert_eq!(d, n as u64, "cyclic subgroup grows linearly");
            // x1 is never resolved as outside the cyclic subgroup, so the
            // rows stay honest lower bounds.
            assert!(!exact);
        }
    }

    #[test]
    fn wreath_backend_profile() {
        let ops = WreathOps { level: 2 };
        let a = WreathElement::generator(2, 1).unwrap();
        let b = WreathElement::generator(2, 2).unwrap();
        let gens = [a.clone(), b.clone()];
        let table = distortion_profile(&ops, &gens, &gens, 3, 3, 100_000);
        for &(n, d, exact) in &table.rows {
            assert_eq!(d, n as u64);
            assert!(exact);
        }
        // |[a^n, b^n]| <= 4n over {a, b}: the 4n-letter word evaluates to
        // the deep wreath element.
        for n in 1..=6i64 {
            let mut word = Vec::new();
            word.extend(std::iter::repeat((1usize, true)).take(n as usize));
            word.extend(std::iter::repeat((2usize, true)).take(n as usize));
            word.extend(std::iter::repeat((1usize, false)).take(n as usize));
            word.extend(std::iter::repeat((2usize, false)).take(n as usize));
            assert_eq!(word.len(), 4 * n as usize);
            assert_eq!(
                wreath::eval_word(2, &word).unwrap(),
                wreath::g_k_n(2, n).unwrap()
            );
        }
    }

    #[test]
    fn sphere_search_respects_bounds() {
        let p = square_presentation();
        let x = p.parse_word("x").unwrap();
        let tight = SearchLimits {
            max_word_len: 1,
            max_visited: 10,
        };
        assert!(nontrivial_sphere_search(&p, &x, &tight).is_none());
        let free = Presentation::parse("free", "a |").unwrap();
        let a = free.parse_word("a").unwrap();
        assert!(nontrivial_sphere_search(&free, &a, &SearchLimits::default()).is_none());
    }
}
