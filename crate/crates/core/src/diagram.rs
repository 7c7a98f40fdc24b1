//! Semigroup diagrams as canonical derivations.
//!
//! A diagram over a presentation is stored as its top word plus a derivation
//! (a list of rewriting steps). Two derivations describe the same plane
//! diagram exactly when one can be turned into the other by swapping
//! consecutive steps that apply to disjoint parts of the word, so each
//! diagram keeps its step list in a canonical order: repeatedly emit, among
//! the remaining steps that can commute to the front, the one that arrives
//! with the smallest offset. All diagram operations preserve this normal
//! form, and structural equality on `Diagram` is diagram equality.

use std::fmt;

use thiserror::Error;

use crate::presentation::{Derivation, Presentation, PresentationError, Step, Word};

#[derive(Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("presentations differ")]
    PresentationMismatch,
    #[error("boundary mismatch: expected `{expected}`, found `{found}`")]
    BoundaryMismatch { expected: String, found: String },
    #[error("diagram is not spherical")]
    NotSpherical,
    #[error(transparent)]
    Derivation(#[from] PresentationError),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid label morphism: {0}")]
    Morphism(String),
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, DiagramError> {
    Err(DiagramError::Parse {
        line,
        message: message.into(),
    })
}

/// Lengths `(old, new)` of the words a step removes and inserts.
fn side_lens(p: &Presentation, s: &Step) -> (usize, usize) {
    let (old, new) = p.step_sides(s);
    (old.len(), new.len())
}

/// Tries to swap the consecutive steps `s1` then `s2`.
///
/// Returns the same two cells in the opposite order `(s2', s1')`, or `None`
/// if their word regions overlap (then the order is part of the diagram).
fn swap_pair(p: &Presentation, s1: &Step, s2: &Step) -> Option<(Step, Step)> {
    let (a1, b1) = side_lens(p, s1);
    let (a2, b2) = side_lens(p, s2);
    if s2.offset >= s1.offset + b1 {
        // s2 lies entirely to the right of the material written by s1.
        let offset = s2.offset + a1 - b1;
        Some((Step { offset, ..*s2 }, *s1))
    } else if s2.offset + a2 <= s1.offset {
        // s2 lies entirely to the left of the region rewritten by s1.
        let offset = s1.offset + b2 - a2;
        Some((*s2, Step { offset, ..*s1 }))
    } else {
        None
    }
}

/// Offset with which `steps[k]` would arrive at position `lo` after
/// commuting past `steps[lo..k]`, or `None` if it cannot.
fn arrival_offset(p: &Presentation, steps: &[Step], lo: usize, k: usize) -> Option<Step> {
    let mut moved = steps[k];
    for j in (lo..k).rev() {
        moved = swap_pair(p, &steps[j], &moved)?.0;
    }
    Some(moved)
}

/// Moves `steps[k]` to position `lo`, updating the steps it passes.
fn carry_to(p: &Presentation, steps: &mut Vec<Step>, lo: usize, k: usize) -> Step {
    let mut moved = steps.remove(k);
    for j in (lo..k).rev() {
        let (m, passed) = swap_pair(p, &steps[j], &moved).expect("carry_to: steps must commute");
        moved = m;
        steps[j] = passed;
    }
    moved
}

fn reorder_greedy(p: &Presentation, steps: &[Step], rightmost: bool) -> Vec<Step> {
    let mut rem = steps.to_vec();
    let mut out = Vec::with_capacity(rem.len());
    while !rem.is_empty() {
        let mut best: Option<(usize, usize)> = None;
        for k in 0..rem.len() {
            if let Some(front) = arrival_offset(p, &rem, 0, k) {
                let better = best.map_or(true, |(o, _)| {
                    if rightmost {
                        front.offset > o
                    } else {
                        front.offset < o
                    }
                });
                if better {
                    best = Some((front.offset, k));
                }
            }
        }
        let (_, k) = best.expect("front step always movable");
        out.push(carry_to(p, &mut rem, 0, k));
    }
    out
}

fn canonicalize_steps(p: &Presentation, steps: &[Step]) -> Vec<Step> {
    reorder_greedy(p, steps, false)
}

/// A diagram over a semigroup presentation, kept in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Diagram {
    p: Presentation,
    top: Word,
    bottom: Word,
    steps: Vec<Step>,
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Diagram {
    /// The trivial diagram `ε(w)`: no cells, top and bottom both `w`.
    pub fn identity(p: &Presentation, w: &Word) -> Diagram {
        Diagram {
            p: p.clone(),
            top: w.clone(),
            bottom: w.clone(),
            steps: Vec::new(),
        }
    }

    /// Builds a diagram from a derivation, validating every step.
    pub fn from_derivation(p: &Presentation, d: &Derivation) -> Result<Diagram, DiagramError> {
        let words = p.replay(d)?;
        Ok(Diagram {
            p: p.clone(),
            top: d.start.clone(),
            bottom: words.last().unwrap().clone(),
            steps: canonicalize_steps(p, &d.steps),
        })
    }

    /// The one-cell diagram of a relation, oriented by `forward`.
    pub fn one_cell(p: &Presentation, relation: usize, forward: bool) -> Diagram {
        let step = Step {
            offset: 0,
            relation,
            forward,
        };
        let (old, new) = p.step_sides(&step);
        Diagram {
            p: p.clone(),
            top: old.clone(),
            bottom: new.clone(),
            steps: vec![step],
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn top(&self) -> &Word {
        &self.top
    }

    pub fn bottom(&self) -> &Word {
        &self.bottom
    }

    /// Steps in canonical order.
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn cells(&self) -> usize {
        self.steps.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_spherical(&self) -> bool {
        self.top == self.bottom
    }

    /// The derivation this diagram canonically stores.
    pub fn derivation(&self) -> Derivation {
        Derivation {
            start: self.top.clone(),
            steps: self.steps.clone(),
        }
    }

    /// Key identifying the diagram within a fixed presentation, for use in
    /// maps and sets.
    pub fn key(&self) -> (Word, Vec<Step>) {
        (self.top.clone(), self.steps.clone())
    }

    /// An equivalent derivation ordered greedily from the right: at each
    /// stage, among the remaining steps that commute to the front, the one
    /// arriving with the largest offset is applied first.
    pub fn rightmost_derivation(&self) -> Derivation {
        Derivation {
            start: self.top.clone(),
            steps: reorder_greedy(&self.p, &self.steps, true),
        }
    }

    /// Tries to factor the diagram as `d = d_fwd ∘ d_back` by commuting every
    /// forward step ahead of every backward step. Returns `None` when some
    /// backward step cannot be moved past a later forward step.
    pub fn split_forward_backward(&self) -> Option<(Diagram, Diagram)> {
        let mut steps = self.steps.clone();
        // Bubble sort on direction; each exchange needs a valid interchange.
        loop {
            let mut swapped = false;
            for i in 0..steps.len().saturating_sub(1) {
                if !steps[i].forward && steps[i + 1].forward {
                    let (s2, s1) = swap_pair(&self.p, &steps[i], &steps[i + 1])?;
                    steps[i] = s2;
                    steps[i + 1] = s1;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let cut = steps.iter().position(|s| !s.forward).unwrap_or(steps.len());
        let fwd = Derivation {
            start: self.top.clone(),
            steps: steps[..cut].to_vec(),
        };
        let fwd = Diagram::from_derivation(&self.p, &fwd).expect("reordered prefix is valid");
        let back = Derivation {
            start: fwd.bottom().clone(),
            steps: steps[cut..].to_vec(),
        };
        let back = Diagram::from_derivation(&self.p, &back).expect("reordered suffix is valid");
        Some((fwd, back))
    }

    fn check_same_presentation(&self, other: &Diagram) -> Result<(), DiagramError> {
        if self.p != other.p {
            return Err(DiagramError::PresentationMismatch);
        }
        Ok(())
    }

    /// Vertical composition: `self` on top of `other`.
    pub fn compose(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        self.check_same_presentation(other)?;
        if self.bottom != other.top {
            return Err(DiagramError::BoundaryMismatch {
                expected: self.p.display_word(&self.bottom),
                found: self.p.display_word(&other.top),
            });
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(Diagram {
            p: self.p.clone(),
            top: self.top.clone(),
            bottom: other.bottom.clone(),
            steps: canonicalize_steps(&self.p, &steps),
        })
    }

    /// Horizontal composition: `self` to the left of `other`.
    pub fn sum(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        self.check_same_presentation(other)?;
        let shift = self.bottom.len();
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().map(|s| Step {
            offset: s.offset + shift,
            ..*s
        }));
        Ok(Diagram {
            p: self.p.clone(),
            top: self.top.concat(&other.top),
            bottom: self.bottom.concat(&other.bottom),
            steps: canonicalize_steps(&self.p, &steps),
        })
    }

    /// Mirror image over the horizontal axis: swaps top and bottom.
    pub fn inverse(&self) -> Diagram {
        let steps: Vec<Step> = self.steps.iter().rev().map(|s| s.flipped()).collect();
        Diagram {
            p: self.p.clone(),
            top: self.bottom.clone(),
            bottom: self.top.clone(),
            steps: canonicalize_steps(&self.p, &steps),
        }
    }

    /// All dipoles, as pairs `(i, j)` of step indices: step `j` commutes back
    /// to just after step `i` and cancels it there.
    pub fn dipoles(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.steps.len() {
            for j in i + 1..self.steps.len() {
                if let Some(m) = arrival_offset(&self.p, &self.steps, i + 1, j) {
                    if m.offset == self.steps[i].offset
                        && m.relation == self.steps[i].relation
                        && m.forward != self.steps[i].forward
                    {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }

    /// The lexicographically least dipole, if any.
    pub fn find_dipole(&self) -> Option<(usize, usize)> {
        for i in 0..self.steps.len() {
            for j in i + 1..self.steps.len() {
                if let Some(m) = arrival_offset(&self.p, &self.steps, i + 1, j) {
                    if m.offset == self.steps[i].offset
                        && m.relation == self.steps[i].relation
                        && m.forward != self.steps[i].forward
                    {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    /// Cancels the dipole `(i, j)` (as reported by [`Diagram::dipoles`]).
    pub fn remove_dipole(&self, i: usize, j: usize) -> Diagram {
        let mut steps = self.steps.clone();
        let moved = carry_to(&self.p, &mut steps, i + 1, j);
        debug_assert_eq!(moved.offset, steps[i].offset);
        debug_assert_eq!(moved.relation, steps[i].relation);
        debug_assert_ne!(moved.forward, steps[i].forward);
        steps.remove(i);
        Diagram {
            p: self.p.clone(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            steps: canonicalize_steps(&self.p, &steps),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.find_dipole().is_none()
    }

    /// The reduced form: cancels dipoles until none remain. The result does
    /// not depend on the cancellation order.
    pub fn reduce(&self) -> Diagram {
        self.reduce_with(|_| 0)
    }

    /// Reduces, letting `pick` choose which dipole to cancel at each round
    /// (it receives the nonempty dipole list and returns an index into it).
    pub fn reduce_with<F: FnMut(&[(usize, usize)]) -> usize>(&self, mut pick: F) -> Diagram {
        let mut d = self.clone();
        loop {
            let dipoles = d.dipoles();
            if dipoles.is_empty() {
                return d;
            }
            let (i, j) = dipoles[pick(&dipoles)];
            d = d.remove_dipole(i, j);
        }
    }

    /// Product in the diagram group over `(p, base)`. Both diagrams must be
    /// spherical with the same base; the result is reduced.
    pub fn group_mul(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        self.check_same_presentation(other)?;
        if !self.is_spherical() || !other.is_spherical() {
            return Err(DiagramError::NotSpherical);
        }
        if self.top != other.top {
            return Err(DiagramError::BoundaryMismatch {
                expected: self.p.display_word(&self.top),
                found: self.p.display_word(&other.top),
            });
        }
        Ok(self.compose(other)?.reduce())
    }

    /// Inverse in the diagram group (reduced mirror image).
    pub fn group_inv(&self) -> Result<Diagram, DiagramError> {
        if !self.is_spherical() {
            return Err(DiagramError::NotSpherical);
        }
        Ok(self.inverse().reduce())
    }

    /// Splits a spherical diagram into its finest sum of spherical parts.
    ///
    /// A cut position `k` in the base survives the derivation if no step
    /// spans it; it separates spherical parts if it also returns to `k` at
    /// the bottom. The decomposition cuts at every such position.
    pub fn decompose_components(&self) -> Result<SumDecomposition, DiagramError> {
        if !self.is_spherical() {
            return Err(DiagramError::NotSpherical);
        }
        let n = self.top.len();
        let mut seams = Vec::new();
        'seam: for k in 1..n {
            let mut pos = k;
            for s in &self.steps {
                let (a, b) = side_lens(&self.p, s);
                if s.offset + a <= pos {
                    pos = pos + b - a;
                } else if s.offset >= pos {
                    // step lies fully right of the seam
                } else {
                    continue 'seam;
                }
            }
            if pos == k {
                seams.push(k);
            }
        }

        let mut cuts = Vec::with_capacity(seams.len() + 2);
        cuts.push(0);
        cuts.extend_from_slice(&seams);
        cuts.push(n);
        let mut pos: Vec<usize> = cuts.clone();
        let mut part_steps: Vec<Vec<Step>> = vec![Vec::new(); cuts.len() - 1];
        for s in &self.steps {
            let (a, b) = side_lens(&self.p, s);
            let g = (0..pos.len() - 1)
                .find(|&g| pos[g] <= s.offset && s.offset + a <= pos[g + 1])
                .expect("step spans no seam");
            part_steps[g].push(Step {
                offset: s.offset - pos[g],
                ..*s
            });
            for q in pos.iter_mut() {
                if *q >= s.offset + a {
                    *q = *q + b - a;
                }
            }
        }

        let parts = cuts
            .windows(2)
            .zip(part_steps)
            .map(|(w, steps)| {
                let top = self.top.slice(w[0], w[1]);
                Diagram::from_derivation(&self.p, &Derivation { start: top, steps })
                    .expect("component derivation is valid")
            })
            .collect();
        Ok(SumDecomposition { parts, seams })
    }

    /// Number of nontrivial summands in the finest spherical decomposition.
    pub fn comp(&self) -> Result<usize, DiagramError> {
        Ok(self
            .decompose_components()?
            .parts
            .iter()
            .filter(|d| !d.is_trivial())
            .count())
    }

    /// Canonical text form (header plus one line per cell, in canonical
    /// order). Stable byte-for-byte for equal diagrams.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "diagram over {}: {} => {}\n",
            self.p.name(),
            self.p.display_word(&self.top),
            self.p.display_word(&self.bottom)
        );
        let mut w = self.top.clone();
        for s in &self.steps {
            let (old, new) = self.p.step_sides(s);
            let prefix = w.slice(0, s.offset);
            let suffix = w.slice(s.offset + old.len(), w.len());
            out.push_str(&format!(
                "({}, {} -> {}, {})\n",
                self.p.display_word(&prefix),
                self.p.display_word(old),
                self.p.display_word(new),
                self.p.display_word(&suffix)
            ));
            w = self.p.apply_step(&w, s).expect("stored steps are valid");
        }
        out
    }

    /// Parses the format written by [`Diagram::to_text`]. The presentation
    /// name in the header is informational; steps are validated against `p`.
    pub fn parse(p: &Presentation, text: &str) -> Result<Diagram, DiagramError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = match lines.next() {
            Some(x) => x,
            None => return parse_err(1, "empty input"),
        };
        let header = header.trim();
        let rest = match header.strip_prefix("diagram over ") {
            Some(r) => r,
            None => return parse_err(ln + 1, "expected `diagram over <name>: <top> => <bottom>`"),
        };
        let colon = match rest.find(':') {
            Some(i) => i,
            None => return parse_err(ln + 1, "missing `:` in header"),
        };
        let bounds = &rest[colon + 1..];
        let arrow = match bounds.find("=>") {
            Some(i) => i,
            None => return parse_err(ln + 1, "missing `=>` in header"),
        };
        let top = p
            .parse_word(&bounds[..arrow])
            .map_err(|e| DiagramError::Parse {
                line: ln + 1,
                message: e.to_string(),
            })?;
        let bottom = p
            .parse_word(&bounds[arrow + 2..])
            .map_err(|e| DiagramError::Parse {
                line: ln + 1,
                message: e.to_string(),
            })?;

        let mut steps = Vec::new();
        for (ln, line) in lines {
            let line = line.trim();
            let inner = line
                .strip_prefix('(')
                .and_then(|l| l.strip_suffix(')'))
                .ok_or(DiagramError::Parse {
                    line: ln + 1,
                    message: "expected `(prefix, old -> new, suffix)`".into(),
                })?;
            let parts: Vec<&str> = inner.split(", ").collect();
            if parts.len() != 3 {
                return parse_err(ln + 1, "expected three comma-separated fields");
            }
            let arrow = match parts[1].find("->") {
                Some(i) => i,
                None => return parse_err(ln + 1, "missing `->` in step"),
            };
            let parse_word = |s: &str| {
                p.parse_word(s).map_err(|e| DiagramError::Parse {
                    line: ln + 1,
                    message: e.to_string(),
                })
            };
            let prefix = parse_word(parts[0])?;
            let old = parse_word(&parts[1][..arrow])?;
            let new = parse_word(&parts[1][arrow + 2..])?;
            let _suffix = parse_word(parts[2])?;
            let mut found = None;
            for (r, (u, v)) in p.relations().iter().enumerate() {
                if (u, v) == (&old, &new) {
                    found = Some((r, true));
                    break;
                }
                if (v, u) == (&old, &new) {
                    found = Some((r, false));
                    break;
                }
            }
            let (relation, forward) = match found {
                Some(x) => x,
                None => {
                    return parse_err(
                        ln + 1,
                        format!(
                            "`{} -> {}` is not a relation of the presentation",
                            p.display_word(&old),
                            p.display_word(&new)
                        ),
                    )
                }
            };
            steps.push(Step {
                offset: prefix.len(),
                relation,
                forward,
            });
        }
        let d = Diagram::from_derivation(p, &Derivation { start: top, steps })?;
        if d.bottom != bottom {
            return Err(DiagramError::BoundaryMismatch {
                expected: p.display_word(&bottom),
                found: p.display_word(&d.bottom),
            });
        }
        Ok(d)
    }

    /// DOT rendering of the plane graph; one cluster per cell.
    pub fn to_dot(&self) -> String {
        let mut out = String::from(
            "digraph diagram {\n  rankdir=LR;\n  node [shape=circle, label=\"\", width=0.12];\n",
        );
        let mut next_vertex = self.top.len() + 1;
        // path[i] is the vertex id of the i-th point on the current bottom path.
        let mut path: Vec<usize> = (0..=self.top.len()).collect();
        let mut edges: Vec<(usize, usize, String)> = Vec::new();
        for (i, &l) in self.top.0.iter().enumerate() {
            edges.push((path[i], path[i + 1], self.p.letter_name(l).to_string()));
        }
        for (ci, s) in self.steps.iter().enumerate() {
            let (old, new) = self.p.step_sides(s);
            let mut cell_path = vec![path[s.offset]];
            for _ in 1..new.len() {
                cell_path.push(next_vertex);
                next_vertex += 1;
            }
            cell_path.push(path[s.offset + old.len()]);
            for (i, &l) in new.0.iter().enumerate() {
                edges.push((
                    cell_path[i],
                    cell_path[i + 1],
                    self.p.letter_name(l).to_string(),
                ));
            }
            out.push_str(&format!(
                "  subgraph cluster_cell{} {{ label=\"{} = {}\"; style=dashed;",
                ci,
                self.p.display_word(old),
                self.p.display_word(new)
            ));
            for v in &cell_path[1..cell_path.len() - 1] {
                out.push_str(&format!(" v{v};"));
            }
            out.push_str(" }\n");
            path.splice(s.offset..=s.offset + old.len(), cell_path);
        }
        for (a, b, l) in edges {
            out.push_str(&format!("  v{a} -> v{b} [label=\"{l}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Result of [`Diagram::decompose_components`].
#[derive(Clone, Debug)]
pub struct SumDecomposition {
    /// Spherical parts, left to right. Their sum is the original diagram.
    pub parts: Vec<Diagram>,
    /// Cut positions in the base word (strictly between 0 and its length).
    pub seams: Vec<usize>,
}

/// A labelling homomorphism between presentations: letters map to nonempty
/// words and each relation maps to a diagram with the matching boundary.
pub struct LabelMorphism {
    source: Presentation,
    target: Presentation,
    letter_map: Vec<Word>,
    relation_map: Vec<Diagram>,
}

impl LabelMorphism {
    pub fn new(
        source: &Presentation,
        target: &Presentation,
        letter_map: Vec<Word>,
        relation_map: Vec<Diagram>,
    ) -> Result<LabelMorphism, DiagramError> {
        if letter_map.len() != source.letter_count() {
            return Err(DiagramError::Morphism(format!(
                "expected {} letter images, got {}",
                source.letter_count(),
                letter_map.len()
            )));
        }
        if letter_map.iter().any(|w| w.is_empty()) {
            return Err(DiagramError::Morphism("letter image is empty".into()));
        }
        if relation_map.len() != source.relations().len() {
            return Err(DiagramError::Morphism(format!(
                "expected {} relation images, got {}",
                source.relations().len(),
                relation_map.len()
            )));
        }
        let m = LabelMorphism {
            source: source.clone(),
            target: target.clone(),
            letter_map,
            relation_map,
        };
        for (i, (u, v)) in source.relations().iter().enumerate() {
            let d = &m.relation_map[i];
            if d.presentation() != target {
                return Err(DiagramError::Morphism(format!(
                    "relation image {i} is over a different presentation"
                )));
            }
            if d.top() != &m.apply_word(u) || d.bottom() != &m.apply_word(v) {
                return Err(DiagramError::Morphism(format!(
                    "relation image {i} has boundary ({}, {}), expected ({}, {})",
                    target.display_word(d.top()),
                    target.display_word(d.bottom()),
                    target.display_word(&m.apply_word(u)),
                    target.display_word(&m.apply_word(v)),
                )));
            }
        }
        Ok(m)
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &l in &w.0 {
            out.extend_from_slice(&self.letter_map[l as usize].0);
        }
        Word(out)
    }

    /// Applies the morphism to a diagram: relabels the boundary and replaces
    /// every cell by the image diagram of its relation.
    pub fn apply(&self, d: &Diagram) -> Result<Diagram, DiagramError> {
        if d.presentation() != &self.source {
            return Err(DiagramError::PresentationMismatch);
        }
        let inverses: Vec<Diagram> = self.relation_map.iter().map(|d| d.inverse()).collect();
        let mut steps = Vec::new();
        let mut w = d.top().clone();
        for s in d.steps() {
            let shift: usize = w.0[..s.offset]
                .iter()
                .map(|&l| self.letter_map[l as usize].len())
                .sum();
            let block = if s.forward {
                &self.relation_map[s.relation]
            } else {
                &inverses[s.relation]
            };
            steps.extend(block.steps().iter().map(|bs| Step {
                offset: bs.offset + shift,
                ..*bs
            }));
            w = self.source.apply_step(&w, s)?;
        }
        Diagram::from_derivation(
            &self.target,
            &Derivation {
                start: self.apply_word(d.top()),
                steps,
            },
        )
    }
}
