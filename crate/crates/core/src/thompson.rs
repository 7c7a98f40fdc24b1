//! Normal forms for the group of the presentation `⟨x | x = xx⟩`.
//!
//! Spherical diagrams over this presentation with base `x^k` form a group
//! generated by elements `x0, x1, x2, …` subject to `x_i^{-1} x_j x_i =
//! x_{j+1}` for `i < j`; only `x0` and `x1` are needed to generate. Every
//! element has a unique normal form
//!
//! ```text
//! x_{i1}^{s1} … x_{im}^{sm} · x_{jn}^{-tn} … x_{j1}^{-t1}
//! ```
//!
//! with `i1 < … < im`, `j1 < … < jn`, all exponents positive, and the side
//! condition: whenever `x_i` occurs in both the positive and the negative
//! part, `x_{i+1}` occurs in one of them. [`NormalForm`] maintains this shape
//! under multiplication; [`nf_to_diagram`] and [`diagram_to_nf`] convert
//! between normal forms and reduced spherical diagrams over any base `x^k`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::diagram::{Diagram, DiagramError};
use crate::presentation::{Derivation, Presentation, Step, Word};

/// Errors from normal-form parsing and diagram conversion.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ThompsonError {
    /// A token could not be read as `x<index>` with an optional `^<exponent>`.
    #[error("token {position}: {message}")]
    Parse { position: usize, message: String },
    /// Base width `k = 0` does not name a word `x^k`.
    #[error("base width must be at least 1")]
    BadBase,
    /// The diagram is not over `⟨x | x = xx⟩`.
    #[error("diagram is not over the x = xx presentation")]
    WrongPresentation,
    /// The diagram does not have equal top and bottom.
    #[error("diagram is not spherical")]
    NotSpherical,
    /// An underlying diagram operation failed.
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The one-letter, one-relation presentation `⟨x | x = xx⟩`.
pub fn presentation() -> Presentation {
    static CELL: OnceLock<Presentation> = OnceLock::new();
    CELL.get_or_init(|| {
        Presentation::parse("thompson", "x | x = x x").expect("fixed presentation parses")
    })
    .clone()
}

/// A group element in normal form.
///
/// `pos` and `neg` hold `(index, exponent)` blocks with strictly increasing
/// indices and positive exponents; the element is the product of the positive
/// blocks in order times the inverses of the negative blocks in reverse
/// order. The identity has both lists empty and prints as `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NormalForm {
    pos: Vec<(u32, u32)>,
    neg: Vec<(u32, u32)>,
}

impl NormalForm {
    /// The identity element.
    pub fn identity() -> NormalForm {
        NormalForm::default()
    }

    /// The generator `x_i`.
    pub fn generator(index: u32) -> NormalForm {
        NormalForm {
            pos: vec![(index, 1)],
            neg: vec![],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    /// Positive-part blocks `(index, exponent)` in printed order.
    pub fn pos_blocks(&self) -> &[(u32, u32)] {
        &self.pos
    }

    /// Negative-part blocks `(index, exponent)`; printed in reverse order
    /// with negated exponents.
    pub fn neg_blocks(&self) -> &[(u32, u32)] {
        &self.neg
    }

    /// Builds the product of the given letters, left to right. Each letter is
    /// `(index, positive)` standing for `x_index` or its inverse.
    pub fn from_letters<I: IntoIterator<Item = (u32, bool)>>(letters: I) -> NormalForm {
        let mut out = NormalForm::identity();
        for (index, positive) in letters {
            out.push_letter(index, positive);
        }
        out
    }

    /// The letters of the normal form as written, left to right.
    pub fn to_letters(&self) -> Vec<(u32, bool)> {
        let mut out = Vec::new();
        for &(i, s) in &self.pos {
            out.extend(std::iter::repeat((i, true)).take(s as usize));
        }
        for &(j, t) in self.neg.iter().rev() {
            out.extend(std::iter::repeat((j, false)).take(t as usize));
        }
        out
    }

    /// Number of letters in the normal form as written.
    pub fn letter_len(&self) -> usize {
        let mass = |blocks: &[(u32, u32)]| blocks.iter().map(|&(_, e)| e as usize).sum::<usize>();
        mass(&self.pos) + mass(&self.neg)
    }

    /// Group product `self · other` (apply `self` first).
    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (index, positive) in other.to_letters() {
            out.push_letter(index, positive);
        }
        out
    }

    /// Group inverse.
    pub fn inv(&self) -> NormalForm {
        NormalForm {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    /// Multiplies by a single generator or inverse generator on the right,
    /// restoring the normal form.
    fn push_letter(&mut self, index: u32, positive: bool) {
        if positive {
            self.push_positive(index);
        } else {
            self.push_negative(index);
        }
        self.contract();
    }

    /// Appends `x_k^{-1}`. The letter moves left through the printed negative
    /// part (stored front to back): passing a block of smaller index bumps
    /// its own index by that block's exponent (`x_i^{-1} x_j^{-1} =
    /// x_{j+1}^{-1} x_i^{-1}` for `i < j`), an equal index merges, a larger
    /// index stops it. If it crosses the whole negative part it may cancel
    /// against the last positive block.
    fn push_negative(&mut self, index: u32) {
        let mut k = index;
        for i in 0..self.neg.len() {
            let (a, t) = self.neg[i];
            if a < k {
                k += t;
            } else if a == k {
                self.neg[i].1 += 1;
                return;
            } else {
                self.neg.insert(i, (k, 1));
                return;
            }
        }
        if let Some(last) = self.pos.last_mut() {
            if last.0 == k {
                if last.1 == 1 {
                    self.pos.pop();
                } else {
                    last.1 -= 1;
                }
                return;
            }
        }
        self.neg.push((k, 1));
    }

    /// Appends `x_k`. The letter moves left through the printed negative
    /// part: an equal index cancels one inverse letter, a smaller index bumps
    /// the mover (`x_i^{-1} x_j = x_{j+1} x_i^{-1}` for `i < j`), a larger
    /// index shifts that block and every later one up by one (`x_j^{-1} x_i =
    /// x_i x_{j+1}^{-1}` for `i < j`) while the mover crosses. It then enters
    /// the positive part from the right, shifting larger-index blocks up by
    /// one until it merges or settles.
    fn push_positive(&mut self, index: u32) {
        let mut k = index;
        let mut i = 0;
        while i < self.neg.len() {
            let (a, t) = self.neg[i];
            if a == k {
                if t == 1 {
                    self.neg.remove(i);
                } else {
                    self.neg[i].1 -= 1;
                }
                return;
            } else if a < k {
                k += t;
                i += 1;
            } else {
                for block in self.neg[i..].iter_mut() {
                    block.0 += 1;
                }
                break;
            }
        }
        let mut m = self.pos.len();
        while m > 0 {
            let (b, _) = self.pos[m - 1];
            if b > k {
                self.pos[m - 1].0 += 1;
                m -= 1;
            } else if b == k {
                self.pos[m - 1].1 += 1;
                return;
            } else {
                break;
            }
        }
        self.pos.insert(m, (k, 1));
    }

    /// Enforces the side condition: while some index `i` occurs in both parts
    /// with `i + 1` occurring in neither, cancel one `x_i` against one
    /// `x_i^{-1}` (everything strictly between them has index ≥ i + 2 and
    /// shifts down by one: `x_i x_m x_i^{-1} = x_{m-1}`).
    fn contract(&mut self) {
        loop {
            let mut hit = None;
            for &(i, _) in &self.pos {
                if Self::find(&self.neg, i).is_ok()
                    && Self::find(&self.pos, i + 1).is_err()
                    && Self::find(&self.neg, i + 1).is_err()
                {
                    hit = Some(i);
                    break;
                }
            }
            let Some(i) = hit else { break };
            Self::shrink_at(&mut self.pos, i);
            Self::shrink_at(&mut self.neg, i);
        }
    }

    fn find(blocks: &[(u32, u32)], index: u32) -> Result<usize, usize> {
        blocks.binary_search_by_key(&index, |b| b.0)
    }

    fn shrink_at(blocks: &mut Vec<(u32, u32)>, index: u32) {
        let at = Self::find(blocks, index).expect("block present");
        if blocks[at].1 == 1 {
            blocks.remove(at);
        } else {
            blocks[at].1 -= 1;
        }
        for b in blocks.iter_mut() {
            if b.0 > index {
                b.0 -= 1;
            }
        }
    }

    /// Parses a whitespace-separated product of `x<index>` tokens with
    /// optional `^<exponent>` (exponents may be negative); `1` or an empty
    /// string is the identity. The input need not be in normal form.
    pub fn parse(text: &str) -> Result<NormalForm, ThompsonError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() || tokens == ["1"] {
            return Ok(NormalForm::identity());
        }
        let mut letters = Vec::new();
        for (position, tok) in tokens.iter().enumerate() {
            let err = |message: &str| ThompsonError::Parse {
                position,
                message: format!("{message} in `{tok}`"),
            };
            let rest = tok
                .strip_prefix('x')
                .ok_or_else(|| err("expected a generator like x0 or x2^-1"))?;
            let (index_str, exp_str) = match rest.split_once('^') {
                Some((a, b)) => (a, Some(b)),
                None => (rest, None),
            };
            let index: u32 = index_str.parse().map_err(|_| err("bad generator index"))?;
            let exponent: i64 = match exp_str {
                Some(e) => e.parse().map_err(|_| err("bad exponent"))?,
                None => 1,
            };
            let positive = exponent > 0;
            letters.extend(std::iter::repeat((index, positive)).take(exponent.unsigned_abs() as usize));
        }
        Ok(NormalForm::from_letters(letters))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        for &(i, s) in &self.pos {
            if s == 1 {
                parts.push(format!("x{i}"));
            } else {
                parts.push(format!("x{i}^{s}"));
            }
        }
        for &(j, t) in self.neg.iter().rev() {
            parts.push(format!("x{j}^-{t}"));
        }
        f.write_str(&parts.join(" "))
    }
}

fn fwd(offset: usize) -> Step {
    Step {
        offset,
        relation: 0,
        forward: true,
    }
}

fn back(offset: usize) -> Step {
    Step {
        offset,
        relation: 0,
        forward: false,
    }
}

/// The `(x^a, x^b)`-diagram that regroups one power of `x` into another by a
/// left comb: splits and merges always happen at the first letter. All
/// cross-base identifications use this diagram; under it the generator `x_i`
/// keeps its two-cell shape at every base `x^k` with `k ≥ i + 2`.
/// `base_change(a, b)` composed with `base_change(b, a)` reduces to the
/// trivial diagram.
pub fn base_change(a: usize, b: usize) -> Result<Diagram, ThompsonError> {
    if a == 0 || b == 0 {
        return Err(ThompsonError::BadBase);
    }
    let p = presentation();
    let steps = if b >= a {
        vec![fwd(0); b - a]
    } else {
        vec![back(0); a - b]
    };
    let derivation = Derivation {
        start: Word(vec![0; a]),
        steps,
    };
    Ok(Diagram::from_derivation(&p, &derivation)?)
}

/// The reduced spherical diagram of the generator `x_i` with base `x^k`.
///
/// With base `x`, the top half grows a left comb of `i + 1` cells and then
/// splits the second letter (the one cell not touching the left boundary,
/// which is what makes the element `x_i` rather than the identity); the
/// bottom half is a plain left comb of `i + 2` cells. Other bases are
/// reached by conjugating with [`base_change`].
pub fn generator_diagram(index: u32, k: usize) -> Result<Diagram, ThompsonError> {
    if k == 0 {
        return Err(ThompsonError::BadBase);
    }
    let p = presentation();
    let i = index as usize;
    let from_x = |steps: Vec<Step>| {
        Diagram::from_derivation(
            &p,
            &Derivation {
                start: Word(vec![0]),
                steps,
            },
        )
    };
    let mut split = vec![fwd(0); i + 1];
    split.push(fwd(1));
    let top = from_x(split)?;
    let comb = from_x(vec![fwd(0); i + 2])?;
    let d1 = top.compose(&comb.inverse())?.reduce();
    if k == 1 {
        return Ok(d1);
    }
    let psi = base_change(1, k)?;
    Ok(psi.inverse().compose(&d1)?.compose(&psi)?.reduce())
}

/// The reduced spherical diagram with base `x^k` representing `f`.
pub fn nf_to_diagram(f: &NormalForm, k: usize) -> Result<Diagram, ThompsonError> {
    if k == 0 {
        return Err(ThompsonError::BadBase);
    }
    let p = presentation();
    let mut acc = Diagram::identity(&p, &Word(vec![0; k]));
    let mut cache: HashMap<u32, Diagram> = HashMap::new();
    for (index, positive) in f.to_letters() {
        let g = match cache.get(&index) {
            Some(g) => g.clone(),
            None => {
                let g = generator_diagram(index, k)?;
                cache.insert(index, g.clone());
                g
            }
        };
        acc = if positive {
            acc.group_mul(&g)?
        } else {
            acc.group_mul(&g.group_inv()?)?
        };
    }
    Ok(acc)
}

/// Reads the positive element of a forward-only diagram with base `x` by
/// enumerating cells rightmost first: a cell applied to `x^n` at offset `o`
/// contributes nothing when `o = 0` and the generator `x_{n-o-1}` otherwise.
fn positive_part(d: &Diagram) -> NormalForm {
    let p = presentation();
    let derivation = d.rightmost_derivation();
    let words = p.replay(&derivation).expect("reordered derivation replays");
    let mut acc = NormalForm::identity();
    for (t, step) in derivation.steps.iter().enumerate() {
        debug_assert!(step.forward);
        if step.offset > 0 {
            let r = words[t].len() - step.offset - 1;
            acc = acc.mul(&NormalForm::generator(r as u32));
        }
    }
    acc
}

/// The normal form of a spherical diagram over `⟨x | x = xx⟩` (any base
/// `x^k`). Inverse to [`nf_to_diagram`] up to reduction.
pub fn diagram_to_nf(d: &Diagram) -> Result<NormalForm, ThompsonError> {
    let p = presentation();
    if *d.presentation() != p {
        return Err(ThompsonError::WrongPresentation);
    }
    if !d.is_spherical() {
        return Err(ThompsonError::NotSpherical);
    }
    let k = d.top().len();
    if k == 0 {
        return Err(ThompsonError::BadBase);
    }
    let based = if k == 1 {
        d.reduce()
    } else {
        let psi = base_change(k, 1)?;
        psi.inverse().compose(d)?.compose(&psi)?.reduce()
    };
    let (fwd_half, back_half) = based
        .split_forward_backward()
        .expect("a reduced spherical diagram factors through its middle word");
    let positive = positive_part(&fwd_half);
    let negative = positive_part(&back_half.inverse());
    Ok(positive.mul(&negative.inv()))
}

/// Number of cells of the reduced diagram of `f` with base `x^k`.
pub fn cell_count(f: &NormalForm, k: usize) -> Result<usize, ThompsonError> {
    Ok(nf_to_diagram(f, k)?.cells())
}

/// Breadth-first ball of the given radius in the generators `x0, x1` and
/// their inverses. Returns `(element, distance)` pairs in discovery order,
/// starting from the identity.
pub fn ball(radius: usize) -> Vec<(NormalForm, usize)> {
    let x0 = NormalForm::generator(0);
    let x1 = NormalForm::generator(1);
    let gens = [x0.clone(), x0.inv(), x1.clone(), x1.inv()];
    let mut dist: HashMap<NormalForm, usize> = HashMap::new();
    let mut order = vec![NormalForm::identity()];
    dist.insert(NormalForm::identity(), 0);
    let mut head = 0;
    while head < order.len() {
        let g = order[head].clone();
        head += 1;
        let dg = dist[&g];
        if dg == radius {
            continue;
        }
        for s in &gens {
            let h = g.mul(s);
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), dg + 1);
                order.push(h);
            }
        }
    }
    order
        .into_iter()
        .map(|g| {
            let d = dist[&g];
            (g, d)
        })
        .collect()
}
