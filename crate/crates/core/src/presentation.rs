//! Semigroup presentations `⟨Σ | R⟩` and rewriting of positive words.
//!
//! Letters are interned: a [`Word`] stores indices into the alphabet of the
//! presentation it was parsed against. Relations are unordered pairs `(u, v)`
//! of nonempty words with `u ≠ v`; a rewriting step replaces one occurrence of
//! `u` by `v` (forward) or `v` by `u` (backward).

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of a letter in the alphabet of a [`Presentation`].
pub type Letter = u32;

/// A positive word: a finite sequence of alphabet letters.
///
/// Words are meaningful only relative to a presentation; use
/// [`Presentation::parse_word`] and [`Presentation::display_word`] to convert
/// to and from text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// True if `pattern` occurs at `offset`.
    pub fn matches_at(&self, offset: usize, pattern: &Word) -> bool {
        offset + pattern.len() <= self.len() && self.0[offset..offset + pattern.len()] == pattern.0
    }

    /// Replaces the range `[offset, offset + old.len())` (which must equal
    /// `old`) by `new`.
    pub fn splice(&self, offset: usize, old: &Word, new: &Word) -> Word {
        debug_assert!(self.matches_at(offset, old));
        let mut v = Vec::with_capacity(self.len() - old.len() + new.len());
        v.extend_from_slice(&self.0[..offset]);
        v.extend_from_slice(&new.0);
        v.extend_from_slice(&self.0[offset + old.len()..]);
        Word(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.0)
    }
}

/// One rewriting step: apply relation `relation` at letter position `offset`.
///
/// A forward step replaces the left side of the relation by the right side;
/// a backward step goes the other way.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Step {
    pub offset: usize,
    pub relation: usize,
    pub forward: bool,
}

impl Step {
    pub fn flipped(self) -> Step {
        Step {
            forward: !self.forward,
            ..self
        }
    }
}

/// A start word together with a sequence of steps applying to it in order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub start: Word,
    pub steps: Vec<Step>,
}

#[derive(Debug, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("relation {index} has equal sides")]
    EqualSides { index: usize },
    #[error("relation {index} has an empty side")]
    EmptySide { index: usize },
    #[error("step {index} not applicable: {reason}")]
    BadStep { index: usize, reason: String },
}

fn parse_err<T>(position: usize, message: impl Into<String>) -> Result<T, PresentationError> {
    Err(PresentationError::Parse {
        position,
        message: message.into(),
    })
}

struct PresentationData {
    name: String,
    letters: Vec<String>,
    index: HashMap<String, Letter>,
    relations: Vec<(Word, Word)>,
}

/// A finite semigroup presentation. Cheap to clone (shared internally).
///
/// Equality compares the alphabet and the relation list, not the name.
#[derive(Clone)]
pub struct Presentation(Arc<PresentationData>);

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.letters == other.0.letters && self.0.relations == other.0.relations)
    }
}

impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({})", self.to_text())
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Presentation {
    /// Builds a presentation from named letters and relations given as letter
    /// index sequences. Intended for programmatic construction; text input
    /// goes through [`Presentation::parse`].
    pub fn build(
        name: &str,
        letters: Vec<String>,
        relations: Vec<(Word, Word)>,
    ) -> Result<Presentation, PresentationError> {
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if index.insert(l.clone(), i as Letter).is_some() {
                return parse_err(0, format!("duplicate letter `{l}`"));
            }
        }
        for (i, (u, v)) in relations.iter().enumerate() {
            if u.is_empty() || v.is_empty() {
                return Err(PresentationError::EmptySide { index: i });
            }
            if u == v {
                return Err(PresentationError::EqualSides { index: i });
            }
            for letter in u.0.iter().chain(&v.0) {
                assert!(
                    (*letter as usize) < letters.len(),
                    "relation letter out of range"
                );
            }
        }
        Ok(Presentation(Arc::new(PresentationData {
            name: name.to_string(),
            letters,
            index,
            relations,
        })))
    }

    /// Parses the text grammar `letters | u = v , u = v , ...`.
    ///
    /// Letters are identifiers (`[A-Za-z_][A-Za-z0-9_]*`) separated by
    /// whitespace; words are letter sequences; the relation list may be empty.
    pub fn parse(name: &str, text: &str) -> Result<Presentation, PresentationError> {
        let bar = match text.find('|') {
            Some(i) => i,
            None => return parse_err(text.len(), "expected `|` between alphabet and relations"),
        };
        let mut letters: Vec<String> = Vec::new();
        let mut index: HashMap<String, Letter> = HashMap::new();
        for (pos, tok) in tokenize(&text[..bar]) {
            check_ident(&tok, pos)?;
            match index.entry(tok.clone()) {
                Entry::Occupied(_) => return parse_err(pos, format!("duplicate letter `{tok}`")),
                Entry::Vacant(e) => {
                    e.insert(letters.len() as Letter);
                    letters.push(tok);
                }
            }
        }

        let rel_text = &text[bar + 1..];
        let mut relations = Vec::new();
        if !rel_text.trim().is_empty() {
            let mut cursor = bar + 1;
            for part in rel_text.split(',') {
                let eq = match part.find('=') {
                    Some(i) => i,
                    None => return parse_err(cursor, "expected `=` in relation"),
                };
                let lhs = parse_word_in(&part[..eq], cursor, &index)?;
                let rhs = parse_word_in(&part[eq + 1..], cursor + eq + 1, &index)?;
                let at = relations.len();
                if lhs.is_empty() || rhs.is_empty() {
                    return Err(PresentationError::EmptySide { index: at });
                }
                if lhs == rhs {
                    return Err(PresentationError::EqualSides { index: at });
                }
                relations.push((lhs, rhs));
                cursor += part.len() + 1;
            }
        }
        Ok(Presentation(Arc::new(PresentationData {
            name: name.to_string(),
            letters,
            index,
            relations,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Same presentation under a different display name.
    pub fn renamed(&self, name: &str) -> Presentation {
        Presentation(Arc::new(PresentationData {
            name: name.to_string(),
            letters: self.0.letters.clone(),
            index: self.0.index.clone(),
            relations: self.0.relations.clone(),
        }))
    }

    pub fn letter_count(&self) -> usize {
        self.0.letters.len()
    }

    pub fn letter_name(&self, l: Letter) -> &str {
        &self.0.letters[l as usize]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.0.index.get(name).copied()
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.0.relations
    }

    /// Parses a space-separated word over this alphabet. The single token `1`
    /// (or an empty string) denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        let toks: Vec<(usize, String)> = tokenize(text).collect();
        if toks.len() == 1 && toks[0].1 == "1" {
            return Ok(Word::empty());
        }
        let mut w = Vec::with_capacity(toks.len());
        for (pos, tok) in toks {
            match self.letter(&tok) {
                Some(l) => w.push(l),
                None => return parse_err(pos, format!("unknown letter `{tok}`")),
            }
        }
        Ok(Word(w))
    }

    /// Renders a word; the empty word renders as `1`.
    pub fn display_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The presentation in the same grammar accepted by [`Presentation::parse`].
    pub fn to_text(&self) -> String {
        let letters = self.0.letters.join(" ");
        let rels = self
            .0
            .relations
            .iter()
            .map(|(u, v)| format!("{} = {}", self.display_word(u), self.display_word(v)))
            .collect::<Vec<_>>()
            .join(" , ");
        if rels.is_empty() {
            format!("{letters} |")
        } else {
            format!("{letters} | {rels}")
        }
    }

    /// The sides of `step.relation` in application order: `(old, new)`.
    pub fn step_sides(&self, step: &Step) -> (&Word, &Word) {
        let (u, v) = &self.0.relations[step.relation];
        if step.forward {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// Applies one rewriting step to a word.
    pub fn apply_step(&self, w: &Word, step: &Step) -> Result<Word, PresentationError> {
        if step.relation >= self.0.relations.len() {
            return Err(PresentationError::BadStep {
                index: 0,
                reason: format!("relation index {} out of range", step.relation),
            });
        }
        let (old, new) = self.step_sides(step);
        if !w.matches_at(step.offset, old) {
            return Err(PresentationError::BadStep {
                index: 0,
                reason: format!(
                    "`{}` does not occur in `{}` at offset {}",
                    self.display_word(old),
                    self.display_word(w),
                    step.offset
                ),
            });
        }
        Ok(w.splice(step.offset, old, new))
    }

    /// Replays a derivation, returning every intermediate word (including the
    /// start word); fails on the first inapplicable step.
    pub fn replay(&self, d: &Derivation) -> Result<Vec<Word>, PresentationError> {
        let mut words = Vec::with_capacity(d.steps.len() + 1);
        words.push(d.start.clone());
        for (i, s) in d.steps.iter().enumerate() {
            let next = self
                .apply_step(words.last().unwrap(), s)
                .map_err(|e| match e {
                    PresentationError::BadStep { reason, .. } => {
                        PresentationError::BadStep { index: i, reason }
                    }
                    other => other,
                })?;
            words.push(next);
        }
        Ok(words)
    }

    /// All steps applicable to `w`, in deterministic order: offset ascending,
    /// relation index ascending, forward before backward.
    pub fn applicable_steps(&self, w: &Word) -> Vec<Step> {
        let mut out = Vec::new();
        for offset in 0..=w.len() {
            for (relation, (u, v)) in self.0.relations.iter().enumerate() {
                if w.matches_at(offset, u) {
                    out.push(Step {
                        offset,
                        relation,
                        forward: true,
                    });
                }
                if w.matches_at(offset, v) {
                    out.push(Step {
                        offset,
                        relation,
                        forward: false,
                    });
                }
            }
        }
        out
    }
}

fn tokenize(text: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    let mut pos = 0usize;
    let bytes = text.as_bytes();
    std::iter::from_fn(move || {
        while pos < bytes.len() && (bytes[pos] as char).is_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            return None;
        }
        let start = pos;
        while pos < bytes.len() && !(bytes[pos] as char).is_whitespace() {
            pos += 1;
        }
        Some((start, text[start..pos].to_string()))
    })
}

fn check_ident(tok: &str, pos: usize) -> Result<(), PresentationError> {
    let mut chars = tok.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => {}
        _ => return parse_err(pos, format!("invalid letter name `{tok}`")),
    }
    if !chars.all(is_ident_char) {
        return parse_err(pos, format!("invalid letter name `{tok}`"));
    }
    Ok(())
}

fn parse_word_in(
    text: &str,
    base_pos: usize,
    index: &HashMap<String, Letter>,
) -> Result<Word, PresentationError> {
    let mut w = Vec::new();
    for (pos, tok) in tokenize(text) {
        match index.get(&tok) {
            Some(&l) => w.push(l),
            None => return parse_err(base_pos + pos, format!("unknown letter `{tok}`")),
        }
    }
    Ok(Word(w))
}

/// Resource limits for breadth-first word searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Words longer than this are not explored.
    pub max_word_len: usize,
    /// At most this many distinct words are visited.
    pub max_visited: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_word_len: 64,
            max_visited: 100_000,
        }
    }
}

/// Outcome of a bounded equality search between two positive words.
#[derive(Clone, Debug)]
pub enum EqualityVerdict {
    /// The words are equal; the derivation rewrites the first into the second
    /// and is shortest among all derivations (breadth-first witness).
    Equal(Derivation),
    /// The whole equivalence class fits within the limits and does not
    /// contain the second word.
    NotEqualWithinBound,
    /// The search was truncated by a limit before reaching a conclusion.
    BoundExceeded,
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal(_))
    }
}

/// Decides `w1 = w2` in the semigroup by breadth-first search from `w1`.
///
/// Exploration order is deterministic (see
/// [`Presentation::applicable_steps`]), so the witness derivation is stable
/// across runs.
pub fn words_equal_bounded(
    p: &Presentation,
    w1: &Word,
    w2: &Word,
    limits: &SearchLimits,
) -> EqualityVerdict {
    if w1 == w2 {
        return EqualityVerdict::Equal(Derivation {
            start: w1.clone(),
            steps: Vec::new(),
        });
    }
    let mut truncated = false;
    let mut parent: HashMap<Word, (Word, Step)> = HashMap::new();
    let mut seen: HashMap<Word, ()> = HashMap::new();
    seen.insert(w1.clone(), ());
    let mut queue = VecDeque::new();
    queue.push_back(w1.clone());
    while let Some(w) = queue.pop_front() {
        for step in p.applicable_steps(&w) {
            let next = p.apply_step(&w, &step).expect("applicable step");
            if next.len() > limits.max_word_len {
                truncated = true;
                continue;
            }
            if seen.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), (w.clone(), step));
            if &next == w2 {
                let mut steps = Vec::new();
                let mut cur = next;
                while let Some((prev, s)) = parent.get(&cur) {
                    steps.push(*s);
                    cur = prev.clone();
                }
                steps.reverse();
                return EqualityVerdict::Equal(Derivation {
                    start: w1.clone(),
                    steps,
                });
            }
            if seen.len() >= limits.max_visited {
                return EqualityVerdict::BoundExceeded;
            }
            seen.insert(next.clone(), ());
            queue.push_back(next);
        }
    }
    if truncated {
        EqualityVerdict::BoundExceeded
    } else {
        EqualityVerdict::NotEqualWithinBound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> SearchLimits {
        SearchLimits {
            max_word_len: 12,
            max_visited: 10_000,
        }
    }

    #[test]
    fn parse_roundtrip() {
        let p = Presentation::parse("p", "a b c | a b = b a , a a = c").unwrap();
        assert_eq!(p.letter_count(), 3);
        assert_eq!(p.relations().len(), 2);
        assert_eq!(p.to_text(), "a b c | a b = b a , a a = c");
        let again = Presentation::parse("q", &p.to_text()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn parse_empty_relation_list() {
        let p = Presentation::parse("p", "x y |").unwrap();
        assert!(p.relations().is_empty());
        assert_eq!(p.to_text(), "x y |");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Presentation::parse("p", "x x | ").is_err());
        assert!(Presentation::parse("p", "x | x = x").is_err());
        assert!(Presentation::parse("p", "x | x =").is_err());
        assert!(Presentation::parse("p", "x | x = y").is_err());
        assert!(Presentation::parse("p", "x y").is_err());
        assert!(Presentation::parse("p", "2x | ").is_err());
    }

    #[test]
    fn word_parse_and_display() {
        let p = Presentation::parse("p", "x y | x = x y").unwrap();
        let w = p.parse_word("x y x").unwrap();
        assert_eq!(p.display_word(&w), "x y x");
        assert_eq!(p.parse_word("1").unwrap(), Word::empty());
        assert_eq!(p.display_word(&Word::empty()), "1");
        assert!(p.parse_word("z").is_err());
    }

    #[test]
    fn apply_step_both_directions() {
        let p = Presentation::parse("p", "x | x = x x").unwrap();
        let w = p.parse_word("x x").unwrap();
        let fwd = Step {
            offset: 1,
            relation: 0,
            forward: true,
        };
        let grown = p.apply_step(&w, &fwd).unwrap();
        assert_eq!(p.display_word(&grown), "x x x");
        let back = Step {
            offset: 0,
            relation: 0,
            forward: false,
        };
        let shrunk = p.apply_step(&grown, &back).unwrap();
        assert_eq!(p.display_word(&shrunk), "x x");
        assert!(p
            .apply_step(
                &w,
                &Step {
                    offset: 2,
                    relation: 0,
                    forward: false
                }
            )
            .is_err());
    }

    #[test]
    fn applicable_steps_order() {
        let p = Presentation::parse("p", "x | x = x x").unwrap();
        let w = p.parse_word("x x").unwrap();
        let steps = p.applicable_steps(&w);
        // offset 0: forward (x), backward (xx); offset 1: forward (x).
        assert_eq!(
            steps,
            vec![
                Step {
                    offset: 0,
                    relation: 0,
                    forward: true
                },
                Step {
                    offset: 0,
                    relation: 0,
                    forward: false
                },
                Step {
                    offset: 1,
                    relation: 0,
                    forward: true
                },
            ]
        );
    }

    #[test]
    fn equality_positive_case_with_witness() {
        let p = Presentation::parse("p", "a b | a b = b a").unwrap();
        let w1 = p.parse_word("a b a").unwrap();
        let w2 = p.parse_word("b a a").unwrap();
        match words_equal_bounded(&p, &w1, &w2, &limits()) {
            EqualityVerdict::Equal(d) => {
                let words = p.replay(&d).unwrap();
                assert_eq!(words.first().unwrap(), &w1);
                assert_eq!(words.last().unwrap(), &w2);
                assert_eq!(d.steps.len(), 1);
            }
            other => panic!("expected Equal, got {other:?}"),
        }
    }

    #[test]
    fn equality_negative_within_bound() {
        // Length-preserving relations keep the class finite, so exhaustion is
        // a definite answer.
        let p = Presentation::parse("p", "a b | a b = b a").unwrap();
        let w1 = p.parse_word("a b").unwrap();
        let w2 = p.parse_word("a b b").unwrap();
        assert!(matches!(
            words_equal_bounded(&p, &w1, &w2, &limits()),
            EqualityVerdict::NotEqualWithinBound
        ));
    }

    #[test]
    fn equality_bound_exceeded_when_class_infinite() {
        let p = Presentation::parse("p", "x | x = x x").unwrap();
        let w1 = p.parse_word("x").unwrap();
        let w2 = p.parse_word("x x x x x x x x x x x x x").unwrap();
        assert!(matches!(
            words_equal_bounded(
                &p,
                &w1,
                &w2,
                &SearchLimits {
                    max_word_len: 6,
                    max_visited: 10_000
                }
            ),
            EqualityVerdict::BoundExceeded
        ));
    }

    #[test]
    fn equality_in_thompson_presentation() {
        let p = Presentation::parse("p", "x | x = x x").unwrap();
        let w1 = p.parse_word("x").unwrap();
        let w2 = p.parse_word("x x x x").unwrap();
        match words_equal_bounded(&p, &w1, &w2, &limits()) {
            EqualityVerdict::Equal(d) => assert_eq!(d.steps.len(), 3),
            other => panic!("expected Equal, got {other:?}"),
        }
    }
}
