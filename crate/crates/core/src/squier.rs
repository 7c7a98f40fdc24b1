//! The Squier complex of a rewriting system: words as vertices, relation
//! applications as edges, disjoint application pairs as square 2-cells.
//!
//! The component of a base word is built breadth-first within explicit
//! bounds, together with a spanning tree and a presentation of the
//! fundamental group (one generator per non-tree edge, one relator per
//! 2-cell). Paths in the complex convert to diagrams and back: homotopic
//! paths yield equal diagrams, which is what makes the fundamental group
//! isomorphic to the diagram group of the component's base.
//!
//! Also here: the combined presentation that attaches a family of groups
//! to the letters of a scaffold presentation (each attached group is the
//! diagram group of its own presentation, glued in with one fresh letter),
//! and ready-made scaffolds for the standard constructions — direct and
//! free products, the iterated power, wreath-with-Z, and the sandwich
//! scaffold used for subnormal embeddings.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::diagram::{Diagram, DiagramError};
use crate::presentation::{
    Derivation, Presentation, PresentationError, SearchLimits, Step, Word,
};

/// Errors from complex construction and path conversion.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum SquierError {
    #[error("path breaks at position {index}: {message}")]
    BrokenPath { index: usize, message: String },
    #[error("invalid parameter: {message}")]
    InvalidParameter { message: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A positive edge: the forward application of one relation in one
/// position, recorded as the context around the replaced occurrence.
/// Its source is `prefix · left · suffix` and its target
/// `prefix · right · suffix`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosEdge {
    pub prefix: Word,
    pub relation: usize,
    pub suffix: Word,
}

/// A square 2-cell: two relation applications at disjoint positions of
/// the same word, `left · l1 · mid · l2 · right`. Its boundary consists of
/// the four edges obtained by applying the two relations in either order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoCell {
    pub left: Word,
    pub rel1: usize,
    pub mid: Word,
    pub rel2: usize,
    pub right: Word,
}

/// One component of the Squier complex, built within [`SearchLimits`].
#[derive(Debug, Clone)]
pub struct SquierComplex {
    p: Presentation,
    base: Word,
    vertices: Vec<Word>,
    vertex_index: HashMap<Word, usize>,
    pos_edges: Vec<PosEdge>,
    edge_ends: Vec<(usize, usize)>,
    two_cells: Vec<TwoCell>,
    truncated: bool,
}

/// Builds the component of `base` breadth-first, admitting vertices while
/// their length stays within `max_word_len` and fewer than `max_visited`
/// words have been seen; edges and 2-cells are placed only between admitted
/// vertices. `truncated` is false only when the search closed up strictly
/// inside the bounds, so every vertex, edge and 2-cell of the full
/// component is present.
pub fn build_component(p: &Presentation, base: &Word, limits: SearchLimits) -> SquierComplex {
    assert!(!base.is_empty(), "base word must be nonempty");
    assert!(limits.max_visited > 0, "vertex bound must be positive");
    let mut vertices = vec![base.clone()];
    let mut vertex_index = HashMap::from([(base.clone(), 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    while let Some(vi) = queue.pop_front() {
        let word = vertices[vi].clone();
        for step in p.applicable_steps(&word) {
            let next = p.apply_step(&word, &step).expect("enumerated step applies");
            if vertex_index.contains_key(&next) {
                continue;
            }
            if next.len() > limits.max_word_len || vertices.len() >= limits.max_visited {
                truncated = true;
                continue;
            }
            vertex_index.insert(next.clone(), vertices.len());
            queue.push_back(vertices.len());
            vertices.push(next);
        }
    }

    let mut pos_edges = Vec::new();
    let mut edge_ends = Vec::new();
    let mut two_cells = Vec::new();
    for (vi, word) in vertices.iter().enumerate() {
        let forward: Vec<Step> = p
            .applicable_steps(word)
            .into_iter()
            .filter(|s| s.forward)
            .collect();
        for step in &forward {
            let target = p.apply_step(word, step).expect("enumerated step applies");
            if let Some(&ti) = vertex_index.get(&target) {
                let (l, _) = p.step_sides(step);
                pos_edges.push(PosEdge {
                    prefix: word.slice(0, step.offset),
                    relation: step.relation,
                    suffix: word.slice(step.offset + l.len(), word.len()),
                });
                edge_ends.push((vi, ti));
            }
        }
        for s1 in &forward {
            let l1 = p.step_sides(s1).0.len();
            for s2 in &forward {
                if s2.offset < s1.offset + l1 {
                    continue;
                }
                let l2 = p.step_sides(s2).0.len();
                let corners = [
                    p.apply_step(word, s1).expect("step applies"),
                    p.apply_step(word, s2).expect("step applies"),
                ];
                let far = p
                    .apply_step(&corners[0], &Step {
                        // s2 shifted by the length change of s1's application
                        offset: s2.offset + p.step_sides(s1).1.len() - l1,
                        ..*s2
                    })
                    .expect("disjoint step still applies");
                if corners.iter().all(|c| vertex_index.contains_key(c))
                    && vertex_index.contains_key(&far)
                {
                    two_cells.push(TwoCell {
                        left: word.slice(0, s1.offset),
                        rel1: s1.relation,
                        mid: word.slice(s1.offset + l1, s2.offset),
                        rel2: s2.relation,
                        right: word.slice(s2.offset + l2, word.len()),
                    });
                }
            }
        }
    }

    SquierComplex {
        p: p.clone(),
        base: base.clone(),
        vertices,
        vertex_index,
        pos_edges,
        edge_ends,
        two_cells,
        truncated,
    }
}

impl SquierComplex {
    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    /// Vertices in breadth-first discovery order; the base is first.
    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn pos_edges(&self) -> &[PosEdge] {
        &self.pos_edges
    }

    /// `(source, target)` vertex indices of each positive edge.
    pub fn edge_ends(&self, edge: usize) -> (usize, usize) {
        self.edge_ends[edge]
    }

    pub fn two_cells(&self) -> &[TwoCell] {
        &self.two_cells
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn edge_lookup(&self) -> HashMap<&PosEdge, usize> {
        self.pos_edges.iter().zip(0..).collect()
    }

    /// A breadth-first spanning tree rooted at the base, as a sorted list
    /// of edge indices. Ties are broken by edge enumeration order, so the
    /// result is deterministic.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut adjacency = vec![Vec::new(); self.vertices.len()];
        for (ei, &(s, t)) in self.edge_ends.iter().enumerate() {
            adjacency[s].push((ei, t));
            adjacency[t].push((ei, s));
        }
        for list in &mut adjacency {
            list.sort();
        }
        let mut visited = vec![false; self.vertices.len()];
        visited[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut tree = Vec::new();
        while let Some(vi) = queue.pop_front() {
            for &(ei, other) in &adjacency[vi] {
                if !visited[other] {
                    visited[other] = true;
                    tree.push(ei);
                    queue.push_back(other);
                }
            }
        }
        debug_assert!(visited.iter().all(|&v| v), "component is connected");
        tree.sort_unstable();
        tree
    }

    /// The two boundary paths of a 2-cell, from the corner where both
    /// relations are un-applied to the corner where both are applied: one
    /// path applies the left-hand relation first, the other the right-hand
    /// one. Each is a list of `(edge index, forward)` pairs.
    pub fn two_cell_boundaries(&self, cell: usize) -> (Vec<(usize, bool)>, Vec<(usize, bool)>) {
        let c = &self.two_cells[cell];
        let (l1, r1) = &self.p.relations()[c.rel1];
        let (l2, r2) = &self.p.relations()[c.rel2];
        let lookup = self.edge_lookup();
        let find = |prefix: Word, relation: usize, suffix: Word| -> usize {
            *lookup
                .get(&PosEdge {
                    prefix,
                    relation,
                    suffix,
                })
                .expect("2-cell boundary edge exists")
        };
        let v = |parts: &[&Word]| -> Word {
            let mut w = Word::empty();
            for p in parts {
                w = w.concat(p);
            }
            w
        };
        let first_then_second = vec![
            (
                find(c.left.clone(), c.rel1, v(&[&c.mid, l2, &c.right])),
                true,
            ),
            (
                find(v(&[&c.left, r1, &c.mid]), c.rel2, c.right.clone()),
                true,
            ),
        ];
        let second_then_first = vec![
            (
                find(v(&[&c.left, l1, &c.mid]), c.rel2, c.right.clone()),
                true,
            ),
            (
                find(c.left.clone(), c.rel1, v(&[&c.mid, r2, &c.right])),
                true,
            ),
        ];
        (first_then_second, second_then_first)
    }

    /// Converts a path of directed edges starting at `start` into the
    /// diagram of the corresponding derivation. Homotopic paths produce
    /// equal diagrams.
    pub fn path_to_diagram(
        &self,
        start: &Word,
        path: &[(usize, bool)],
    ) -> Result<Diagram, SquierError> {
        if !self.vertex_index.contains_key(start) {
            return Err(SquierError::BrokenPath {
                index: 0,
                message: "start word is not a vertex".to_string(),
            });
        }
        let mut word = start.clone();
        let mut steps = Vec::with_capacity(path.len());
        for (i, &(ei, forward)) in path.iter().enumerate() {
            let edge = self.pos_edges.get(ei).ok_or_else(|| SquierError::BrokenPath {
                index: i,
                message: format!("edge index {ei} out of range"),
            })?;
            let step = Step {
                offset: edge.prefix.len(),
                relation: edge.relation,
                forward,
            };
            let (from, _) = self.p.step_sides(&step);
            let source = edge.prefix.concat(from).concat(&edge.suffix);
            if word != source {
                return Err(SquierError::BrokenPath {
                    index: i,
                    message: format!(
                        "edge starts at `{}` but the path is at `{}`",
                        self.p.display_word(&source),
                        self.p.display_word(&word)
                    ),
                });
            }
            word = self.p.apply_step(&word, &step).expect("source checked");
            steps.push(step);
        }
        Ok(Diagram::from_derivation(
            &self.p,
            &Derivation {
                start: start.clone(),
                steps,
            },
        )?)
    }

    /// The fundamental group of the component, presented with one
    /// generator per non-tree edge and one relator per 2-cell (its
    /// boundary word with tree edges deleted). With `tietze` set, trivial
    /// and duplicate generators are eliminated.
    pub fn pi1_presentation(&self, tietze: bool) -> GroupPresentationOut {
        let tree: HashSet<usize> = self.spanning_tree().into_iter().collect();
        let mut gen_of_edge: HashMap<usize, usize> = HashMap::new();
        let mut generators = Vec::new();
        for ei in 0..self.pos_edges.len() {
            if !tree.contains(&ei) {
                gen_of_edge.insert(ei, generators.len());
                generators.push((format!("g{}", generators.len()), self.edge_label(ei)));
            }
        }
        let mut relators = Vec::new();
        for ci in 0..self.two_cells.len() {
            let (first, second) = self.two_cell_boundaries(ci);
            let mut boundary = first;
            boundary.extend(second.iter().rev().map(|&(e, f)| (e, !f)));
            let mut loop_word = Vec::new();
            for (ei, fwd) in boundary {
                if let Some(&g) = gen_of_edge.get(&ei) {
                    loop_word.push((g, fwd));
                }
            }
            let reduced = free_reduce(&loop_word);
            if !reduced.is_empty() {
                relators.push(reduced);
            }
        }
        let mut out = GroupPresentationOut {
            generators,
            relators,
            tietze_reduced: false,
        };
        if tietze {
            out.tietze_pass();
        }
        out
    }

    /// Renders an edge as `(prefix, left -> right, suffix)` with `1` for
    /// empty context words.
    pub fn edge_label(&self, edge: usize) -> String {
        let e = &self.pos_edges[edge];
        let (l, r) = &self.p.relations()[e.relation];
        format!(
            "({}, {} -> {}, {})",
            self.p.display_word(&e.prefix),
            self.p.display_word(l),
            self.p.display_word(r),
            self.p.display_word(&e.suffix)
        )
    }

    /// Renders a 2-cell as `(left, l1 -> r1, mid, l2 -> r2, right)`.
    pub fn two_cell_label(&self, cell: usize) -> String {
        let c = &self.two_cells[cell];
        let (l1, r1) = &self.p.relations()[c.rel1];
        let (l2, r2) = &self.p.relations()[c.rel2];
        format!(
            "({}, {} -> {}, {}, {} -> {}, {})",
            self.p.display_word(&c.left),
            self.p.display_word(l1),
            self.p.display_word(r1),
            self.p.display_word(&c.mid),
            self.p.display_word(l2),
            self.p.display_word(r2),
            self.p.display_word(&c.right)
        )
    }

    /// JSON-like dump with sorted vertex, edge and 2-cell lists.
    pub fn to_text(&self) -> String {
        let mut vs: Vec<String> = self
            .vertices
            .iter()
            .map(|w| self.p.display_word(w))
            .collect();
        vs.sort();
        let mut es: Vec<String> = (0..self.pos_edges.len()).map(|i| self.edge_label(i)).collect();
        es.sort();
        let mut cs: Vec<String> = (0..self.two_cells.len())
            .map(|i| self.two_cell_label(i))
            .collect();
        cs.sort();
        let quote_list = |items: &[String]| {
            items
                .iter()
                .map(|s| format!("\"{s}\""))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"presentation\": \"{}\",", self.p.to_text());
        let _ = writeln!(out, "  \"base\": \"{}\",", self.p.display_word(&self.base));
        let _ = writeln!(out, "  \"truncated\": {},", self.truncated);
        let _ = writeln!(out, "  \"vertices\": [{}],", quote_list(&vs));
        let _ = writeln!(out, "  \"edges\": [{}],", quote_list(&es));
        let _ = writeln!(out, "  \"two_cells\": [{}]", quote_list(&cs));
        out.push('}');
        out
    }

    /// DOT rendering of the 1-skeleton; edges point from source to target
    /// and are labeled by their relation application.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph squier {\n");
        for (vi, w) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{} [label=\"{}\"];", vi, self.p.display_word(w));
        }
        for (ei, &(s, t)) in self.edge_ends.iter().enumerate() {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", s, t, self.edge_label(ei));
        }
        out.push('}');
        out
    }
}

/// A presentation of the fundamental group of a component: generators are
/// the named non-tree edges, relators are words over them (with `true`
/// marking a positive letter).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentationOut {
    generators: Vec<(String, String)>,
    relators: Vec<Vec<(usize, bool)>>,
    tietze_reduced: bool,
}

fn free_reduce(word: &[(usize, bool)]) -> Vec<(usize, bool)> {
    let mut out: Vec<(usize, bool)> = Vec::with_capacity(word.len());
    for &(g, s) in word {
        if out.last() == Some(&(g, !s)) {
            out.pop();
        } else {
            out.push((g, s));
        }
    }
    out
}

impl GroupPresentationOut {
    /// Generator names with the edges they stand for.
    pub fn generators(&self) -> &[(String, String)] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<(usize, bool)>] {
        &self.relators
    }

    pub fn tietze_reduced(&self) -> bool {
        self.tietze_reduced
    }

    /// `Some(rank)` when there are no relators, so the group is free on
    /// the generators.
    pub fn free_rank(&self) -> Option<usize> {
        if self.relators.is_empty() {
            Some(self.generators.len())
        } else {
            None
        }
    }

    pub fn is_trivial_group(&self) -> bool {
        self.free_rank() == Some(0)
    }

    pub fn relator_rendered(&self, i: usize) -> String {
        self.relators[i]
            .iter()
            .map(|&(g, s)| {
                let name = &self.generators[g].0;
                if s {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "generators ({}):", self.generators.len());
        for (name, edge) in &self.generators {
            let _ = writeln!(out, "  {name} = {edge}");
        }
        let _ = writeln!(out, "relators ({}):", self.relators.len());
        for i in 0..self.relators.len() {
            let _ = writeln!(out, "  {} = 1", self.relator_rendered(i));
        }
        let _ = write!(
            out,
            "tietze_reduced: {}",
            if self.tietze_reduced { "true" } else { "false" }
        );
        out
    }

    /// Eliminates generators forced trivial (a length-1 relator) or equal
    /// to another generator or its inverse (a length-2 relator on distinct
    /// generators), substituting and repeating to a fixpoint. Longer
    /// relators are left untouched.
    fn tietze_pass(&mut self) {
        let n = self.generators.len();
        let mut alive = vec![true; n];
        loop {
            self.relators = self
                .relators
                .iter()
                .map(|r| free_reduce(r))
                .filter(|r| !r.is_empty())
                .collect();
            let mut action = None;
            for (ri, r) in self.relators.iter().enumerate() {
                if r.len() == 1 {
                    action = Some((ri, r[0].0, None));
                    break;
                }
                if r.len() == 2 && r[0].0 != r[1].0 {
                    let (g, a) = r[0];
                    let (h, b) = r[1];
                    // g^a h^b = 1 forces kill = keep^(-ab); the sign flips
                    // exactly when a and b agree.
                    let (kill, keep) = if g > h { (g, h) } else { (h, g) };
                    action = Some((ri, kill, Some((keep, a == b))));
                    break;
                }
            }
            let Some((ri, kill, replacement)) = action else {
                break;
            };
            self.relators.remove(ri);
            alive[kill] = false;
            for r in &mut self.relators {
                let mut next = Vec::with_capacity(r.len());
                for &(g, s) in r.iter() {
                    if g != kill {
                        next.push((g, s));
                    } else if let Some((keep, flip)) = replacement {
                        next.push((keep, s != flip));
                    }
                }
                *r = next;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut survivors = Vec::new();
        for (i, gen) in self.generators.iter().enumerate() {
            if alive[i] {
                remap[i] = survivors.len();
                survivors.push(gen.clone());
            }
        }
        self.generators = survivors;
        for r in &mut self.relators {
            for (g, _) in r.iter_mut() {
                *g = remap[*g];
            }
        }
        self.tietze_reduced = true;
    }
}

/// Attaches a family of groups to letters of a scaffold presentation: each
/// entry `(letter, p_x, w_x)` contributes one fresh letter `a`, the
/// relation `letter = a w_x a`, and all relations of `p_x`. The diagram
/// group of the result (over the scaffold's base) is the corresponding
/// combination of the attached diagram groups. Alphabets are renamed
/// automatically on clashes; the scaffold's letters always keep their
/// names, so its base word stays valid.
pub fn diagram_product_presentation(
    q: &Presentation,
    family: &[(String, Presentation, Word)],
) -> Result<Presentation, SquierError> {
    let mut letters: Vec<String> = (0..q.letter_count())
        .map(|l| q.letter_name(l as u32).to_string())
        .collect();
    let mut used: HashSet<String> = letters.iter().cloned().collect();
    let fresh = |candidate: String, used: &mut HashSet<String>| -> String {
        if used.insert(candidate.clone()) {
            return candidate;
        }
        for k in 2.. {
            let alt = format!("{candidate}{k}");
            if used.insert(alt.clone()) {
                return alt;
            }
        }
        unreachable!()
    };
    let mut relation_texts: Vec<String> = q
        .relations()
        .iter()
        .map(|(u, v)| format!("{} = {}", q.display_word(u), q.display_word(v)))
        .collect();
    let mut seen_letters = HashSet::new();
    for (x, px, wx) in family {
        if q.letter(x).is_none() {
            return Err(SquierError::InvalidParameter {
                message: format!("`{x}` is not a letter of the scaffold"),
            });
        }
        if !seen_letters.insert(x.clone()) {
            return Err(SquierError::InvalidParameter {
                message: format!("letter `{x}` attached twice"),
            });
        }
        let a_name = fresh(
            if family.len() == 1 {
                "a".to_string()
            } else {
                format!("a{x}")
            },
            &mut used,
        );
        letters.push(a_name.clone());
        let renames: Vec<String> = (0..px.letter_count())
            .map(|l| fresh(px.letter_name(l as u32).to_string(), &mut used))
            .collect();
        letters.extend(renames.iter().cloned());
        let render = |w: &Word| -> String {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.0.iter()
                    .map(|&l| renames[l as usize].clone())
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        };
        relation_texts.push(format!("{x} = {a_name} {} {a_name}", render(wx)));
        for (u, v) in px.relations() {
            relation_texts.push(format!("{} = {}", render(u), render(v)));
        }
    }
    let text = format!("{} | {}", letters.join(" "), relation_texts.join(" , "));
    Ok(Presentation::parse("diagram_product", &text)?)
}

/// Ready-made scaffold presentations, each returned with its base word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuilderKind {
    /// `⟨x1 … xn | ∅⟩` with base `x1 … xn`: attaching groups to the
    /// letters yields their direct product.
    DirectProduct(usize),
    /// `⟨x, x1 … xn | x = xi⟩` with base `x`: attaching groups to the
    /// `xi` yields their free product.
    FreeProduct(usize),
    /// `⟨x, y, z | x = xy, z = yz⟩` with base `xz`: attaching a group to
    /// `y` yields the restricted-support combination used below.
    Bullet,
    /// `⟨x, y | x = xy⟩` with base `x`: attaching a group to `y` yields a
    /// countable direct power.
    DirectPower,
    /// Same scaffold as [`BuilderKind::Bullet`]; attaching `Z` to `y`
    /// yields the wreath product with `Z`.
    WreathWithZ,
    /// The sandwich scaffold `⟨x, y, p, q, r, yb, z | x = xyp, z = r yb z,
    /// pyq = q yb r⟩` with base `x y q yb z`, used for subnormal
    /// embeddings of attached groups.
    BigO,
}

/// Instantiates a named scaffold.
pub fn named_builder(kind: BuilderKind) -> Result<(Presentation, Word), SquierError> {
    let parse = |name: &str, text: &str, base: &str| -> Result<(Presentation, Word), SquierError> {
        let p = Presentation::parse(name, text)?;
        let w = p.parse_word(base)?;
        Ok((p, w))
    };
    match kind {
        BuilderKind::DirectProduct(n) => {
            if n == 0 {
                return Err(SquierError::InvalidParameter {
                    message: "direct product needs at least one factor".to_string(),
                });
            }
            let letters: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let text = format!("{} |", letters.join(" "));
            parse(&format!("direct_product_{n}"), &text, &letters.join(" "))
        }
        BuilderKind::FreeProduct(n) => {
            if n == 0 {
                return Err(SquierError::InvalidParameter {
                    message: "free product needs at least one factor".to_string(),
                });
            }
            let letters: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let rels: Vec<String> = letters.iter().map(|l| format!("x = {l}")).collect();
            let text = format!("x {} | {}", letters.join(" "), rels.join(" , "));
            parse(&format!("free_product_{n}"), &text, "x")
        }
        BuilderKind::Bullet => parse("bullet", "x y z | x = x y , z = y z", "x z"),
        BuilderKind::DirectPower => parse("direct_power", "x y | x = x y", "x"),
        BuilderKind::WreathWithZ => parse("wreath_z", "x y z | x = x y , z = y z", "x z"),
        BuilderKind::BigO => parse(
            "big_o",
            "x y p q r yb z | x = x y p , z = r yb z , p y q = q yb r",
            "x y q yb z",
        ),
    }
}
