//! The cell-counting homomorphism into the free abelian group on
//! `M × R × M`, where `M` is the monoid presented by the rewriting system
//! and `R` its relation set.
//!
//! Every cell of a spherical diagram contributes `±(ℓ, u=v, r)`: the sign
//! of its orientation, the monoid values of the words left and right of the
//! cell, and its relation. The resulting map `ρ` is a homomorphism from the
//! diagram group whose kernel is exactly the derived subgroup, which makes
//! derived-subgroup membership (and membership in coset-diagonal subgroups
//! of a direct square) computable.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::diagram::{Diagram, DiagramError, LabelMorphism};
use crate::presentation::{Presentation, Word};
use crate::thompson::{self, NormalForm};
use crate::wreath::WreathElement;

/// Errors from the cell-counting operations.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("diagram is not spherical")]
    NotSpherical,
    #[error("input is over presentation `{found}`, expected `{expected}`")]
    PresentationMismatch { expected: String, found: String },
    #[error("wreath-product inputs must live at level 2, got level {level}")]
    WrongLevel { level: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A canonical-form function for the monoid presented by a rewriting
/// system: it must be constant on equivalence classes of words.
///
/// The monoid values of cell contexts must be exact, so [`rho`] requires an
/// oracle rather than falling back to bounded word search.
#[derive(Clone)]
pub struct MonoidOracle {
    p: Presentation,
    canon: Arc<dyn Fn(&Word) -> Word + Send + Sync>,
}

impl MonoidOracle {
    pub fn new(
        p: Presentation,
        canon: impl Fn(&Word) -> Word + Send + Sync + 'static,
    ) -> MonoidOracle {
        MonoidOracle {
            p,
            canon: Arc::new(canon),
        }
    }

    /// The built-in oracle for `⟨x | x = xx⟩`, whose monoid has exactly the
    /// two elements `1` and `x`: every nonempty word maps to `x`.
    pub fn thompson() -> MonoidOracle {
        MonoidOracle::new(thompson::presentation(), |w: &Word| {
            if w.is_empty() {
                Word::empty()
            } else {
                Word(vec![0])
            }
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn canonical(&self, w: &Word) -> Word {
        (self.canon)(w)
    }

    fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.0.iter()
                .map(|&l| self.p.letter_name(l))
                .collect::<Vec<_>>()
                .concat()
        }
    }
}

/// An element of the free abelian group on basis triples
/// `(monoid element, relation, monoid element)`, kept as its finite
/// support. Triples are stored in rendered form so values print and sort
/// bit-stably.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbelianVector {
    terms: BTreeMap<(String, String, String), i64>,
}

impl AbelianVector {
    pub fn zero() -> AbelianVector {
        AbelianVector::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, triple: (String, String, String), delta: i64) {
        let entry = self.terms.entry(triple.clone()).or_insert(0);
        *entry += delta;
        if *entry == 0 {
            self.terms.remove(&triple);
        }
    }

    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> AbelianVector {
        AbelianVector {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Support triples with their coefficients, sorted lexicographically.
    pub fn terms(&self) -> impl Iterator<Item = (&(String, String, String), i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    /// Coefficient of a basis triple given as rendered strings.
    pub fn coefficient(&self, left: &str, relation: &str, right: &str) -> i64 {
        self.terms
            .get(&(left.to_string(), relation.to_string(), right.to_string()))
            .copied()
            .unwrap_or(0)
    }
}

impl fmt::Display for AbelianVector {
    /// Signed sum of basis triples sorted lexicographically, e.g.
    /// `+ (1, x=xx, x) - (x, x=xx, 1)`; the zero vector prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, rel, r), &v)| {
                let sign = if v < 0 { '-' } else { '+' };
                if v.abs() == 1 {
                    format!("{sign} ({l}, {rel}, {r})")
                } else {
                    format!("{sign} {} ({l}, {rel}, {r})", v.abs())
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// The cell-counting homomorphism: each derivation step of the spherical
/// diagram `d` contributes `δ·(ℓ(prefix), relation, r(suffix))` where `δ`
/// is `+1` for a forward cell and `−1` for a backward one and `ℓ, r` are
/// the oracle's canonical monoid values of the context words.
pub fn rho(d: &Diagram, oracle: &MonoidOracle) -> Result<AbelianVector, AbelianError> {
    if d.presentation() != oracle.presentation() {
        return Err(AbelianError::PresentationMismatch {
            expected: oracle.presentation().name().to_string(),
            found: d.presentation().name().to_string(),
        });
    }
    if !d.is_spherical() {
        return Err(AbelianError::NotSpherical);
    }
    let p = d.presentation();
    let derivation = d.derivation();
    let words = p.replay(&derivation).expect("stored derivation replays");
    let mut out = AbelianVector::zero();
    for (t, step) in derivation.steps.iter().enumerate() {
        let w = &words[t];
        let (from, _) = p.step_sides(step);
        let prefix = w.slice(0, step.offset);
        let suffix = w.slice(step.offset + from.len(), w.len());
        let (u, v) = &p.relations()[step.relation];
        let triple = (
            oracle.render(&oracle.canonical(&prefix)),
            format!("{}={}", oracle.render(u), oracle.render(v)),
            oracle.render(&oracle.canonical(&suffix)),
        );
        out.add_term(triple, if step.forward { 1 } else { -1 });
    }
    Ok(out)
}

/// Whether a spherical diagram over `⟨x | x = xx⟩` lies in the derived
/// subgroup (the kernel of [`rho`] under the built-in oracle).
pub fn in_derived_subgroup_diagram(d: &Diagram) -> Result<bool, AbelianError> {
    Ok(rho(d, &MonoidOracle::thompson())?.is_zero())
}

/// Whether a normal form lies in the derived subgroup.
pub fn in_derived_subgroup(f: &NormalForm) -> bool {
    let d = thompson::nf_to_diagram(f, 1).expect("base width 1 is valid");
    in_derived_subgroup_diagram(&d).expect("constructed diagram is spherical")
}

/// The presentation `⟨x, a_i, b_i (0 ≤ i ≤ bound) | x = xx, a_i = a_{i+1}x,
/// b_i = xb_{i+1}⟩` whose diagram group with base `a0 b0` maps onto the
/// derived subgroup of the base-`x` group under [`relabel_to_thompson`].
/// Letters are materialized up to the index bound.
pub fn derived_subgroup_presentation(bound: usize) -> Presentation {
    let mut text = String::from("x");
    for i in 0..=bound {
        text.push_str(&format!(" a{i}"));
    }
    for i in 0..=bound {
        text.push_str(&format!(" b{i}"));
    }
    text.push_str(" | x = x x");
    for i in 0..bound {
        text.push_str(&format!(" , a{i} = a{} x", i + 1));
    }
    for i in 0..bound {
        text.push_str(&format!(" , b{i} = x b{}", i + 1));
    }
    Presentation::parse("q_t26", &text).expect("generated presentation is well-formed")
}

/// The base word `a0 b0` of [`derived_subgroup_presentation`].
pub fn derived_subgroup_base(p: &Presentation) -> Word {
    p.parse_word("a0 b0").expect("base letters exist")
}

/// Relabels a diagram over [`derived_subgroup_presentation`] to one over
/// `⟨x | x = xx⟩` by sending every letter to `x` (each relation there has a
/// one-letter and a two-letter side, so each cell maps to a single cell).
/// The image of a reduced diagram is reduced, and the image of a spherical
/// diagram with base `a0 b0` lies in the derived subgroup.
pub fn relabel_to_thompson(d: &Diagram) -> Result<Diagram, AbelianError> {
    let source = d.presentation();
    if source.name() != "q_t26" {
        return Err(AbelianError::PresentationMismatch {
            expected: "q_t26".to_string(),
            found: source.name().to_string(),
        });
    }
    let target = thompson::presentation();
    let x = Word(vec![0]);
    let one_cell = Diagram::one_cell(&target, 0, true);
    let morphism = LabelMorphism::new(
        source,
        &target,
        vec![x; source.letter_count()],
        vec![one_cell; source.relations().len()],
    )?;
    Ok(morphism.apply(d)?)
}

/// Inputs for coset-diagonal membership: the subgroup of `G × G` generated
/// by the diagonal together with `(r, 1)` for the listed relator, where
/// `(g, h)` is a member iff `g` and `h` agree modulo the normal closure of
/// the relator.
#[derive(Debug, Clone)]
pub enum MikhailovaInput {
    /// `G = ⟨x|x=xx⟩` group, relator `[x0, x1]`; the closure is the derived
    /// subgroup, so membership is `ρ(g·h^{-1}) = 0`.
    Thompson { g: NormalForm, h: NormalForm },
    /// `G = Z wr Z`, relator `[a, b]`; the closure is the sum-zero base
    /// subgroup, so membership compares the exponent sums of `a` and of `b`.
    ZWrZ { g: WreathElement, h: WreathElement },
}

/// Membership in the Mikhailova-style subgroup of `G × G`.
pub fn mikhailova_membership(input: &MikhailovaInput) -> Result<bool, AbelianError> {
    match input {
        MikhailovaInput::Thompson { g, h } => Ok(in_derived_subgroup(&g.mul(&h.inv()))),
        MikhailovaInput::ZWrZ { g, h } => {
            for e in [g, h] {
                if e.level() != 2 {
                    return Err(AbelianError::WrongLevel { level: e.level() });
                }
            }
            Ok(g.fiber_exponent_sum() == h.fiber_exponent_sum()
                && g.top_exponent() == h.top_exponent())
        }
    }
}
