//! Piecewise-linear representation of the `⟨x | x = xx⟩` diagram group.
//!
//! Elements act on `[0, 1]` (or on `[0, ∞)` after [`to_halfline`]) as
//! increasing piecewise-linear bijections with dyadic breakpoints and
//! power-of-two slopes, with functions applied left to right: `t · (fg) =
//! (t · f) · g`, so [`DyadicPL::compose`]`(f, g)` applies `f` first. All
//! arithmetic is exact ([`Dyadic`]); nothing is ever rounded.
//!
//! The module also provides the embeddings `Φ_k` of the unit-interval group
//! into the half-line group as maps supported on `[k, k+1]`, and a certified
//! search ([`wreath_witness`]) that exhibits a wreath-product witness for a
//! non-commuting pair: a word `w` in the pair that translates the support
//! window of `h0 = [f, g]` completely off itself, together with the checked
//! commutations `[h0^{w^i}, h0^{w^j}] = 1`.

use std::fmt;

use crate::diagram::Diagram;
use crate::dyadic::Dyadic;
use crate::presentation::Word;
use crate::thompson::{self, NormalForm, ThompsonError};

/// Errors from constructing, evaluating, or parsing piecewise-linear maps.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum PlError {
    #[error("invalid piecewise-linear data: {message}")]
    Invalid { message: String },
    #[error("argument outside the domain")]
    OutOfDomain,
    #[error("entry {position}: {message}")]
    Parse { position: usize, message: String },
    #[error(transparent)]
    Thompson(#[from] ThompsonError),
}

fn invalid(message: impl Into<String>) -> PlError {
    PlError::Invalid {
        message: message.into(),
    }
}

/// Slope of the segment `(b0, v0) – (b1, v1)` as a power-of-two exponent.
fn slope_exp(b0: &Dyadic, v0: &Dyadic, b1: &Dyadic, v1: &Dyadic) -> Option<i64> {
    (&(v1 - v0)).ratio_pow2(&(b1 - b0))
}

/// An increasing piecewise-linear bijection of `[0, 1]` with dyadic
/// breakpoints and power-of-two slopes.
///
/// Kept canonical: breakpoints are strictly increasing from 0 to 1, values
/// likewise, and no interior breakpoint has equal slopes on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicPL {
    breaks: Vec<Dyadic>,
    vals: Vec<Dyadic>,
}

impl DyadicPL {
    /// Validates breakpoint/value lists and normalizes (merging collinear
    /// segments).
    pub fn new(breaks: Vec<Dyadic>, vals: Vec<Dyadic>) -> Result<DyadicPL, PlError> {
        if breaks.len() != vals.len() || breaks.len() < 2 {
            return Err(invalid("need equally many breakpoints and values, at least two"));
        }
        for (list, name) in [(&breaks, "breakpoints"), (&vals, "values")] {
            if list[0] != Dyadic::zero() || *list.last().unwrap() != Dyadic::one() {
                return Err(invalid(format!("{name} must run from 0 to 1")));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("{name} must be strictly increasing")));
            }
        }
        for i in 0..breaks.len() - 1 {
            if slope_exp(&breaks[i], &vals[i], &breaks[i + 1], &vals[i + 1]).is_none() {
                return Err(invalid(format!("slope on segment {i} is not a power of two")));
            }
        }
        let (breaks, vals) = merge_collinear(breaks, vals);
        Ok(DyadicPL { breaks, vals })
    }

    pub fn identity() -> DyadicPL {
        DyadicPL {
            breaks: vec![Dyadic::zero(), Dyadic::one()],
            vals: vec![Dyadic::zero(), Dyadic::one()],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == DyadicPL::identity()
    }

    pub fn breakpoints(&self) -> &[Dyadic] {
        &self.breaks
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.vals
    }

    /// Evaluates at `t ∈ [0, 1]`.
    pub fn eval(&self, t: &Dyadic) -> Result<Dyadic, PlError> {
        if *t < Dyadic::zero() || *t > Dyadic::one() {
            return Err(PlError::OutOfDomain);
        }
        Ok(eval_segments(&self.breaks, &self.vals, t))
    }

    /// `self` followed by `other` (left-to-right application).
    pub fn compose(&self, other: &DyadicPL) -> DyadicPL {
        let inv = self.inverse();
        let mut cuts = self.breaks.clone();
        cuts.extend(other.breaks.iter().map(|b| inv.eval(b).unwrap()));
        cuts.sort();
        cuts.dedup();
        let vals = cuts
            .iter()
            .map(|t| other.eval(&self.eval(t).unwrap()).unwrap())
            .collect();
        DyadicPL::new(cuts, vals).expect("composite of valid maps is valid")
    }

    pub fn inverse(&self) -> DyadicPL {
        DyadicPL {
            breaks: self.vals.clone(),
            vals: self.breaks.clone(),
        }
    }

    /// Maximal open intervals on which the map moves points.
    ///
    /// Endpoints are exact dyadics. A fixed point interior to a segment is a
    /// boundary between two such intervals when it is dyadic; an isolated
    /// non-dyadic fixed point cannot be represented and is absorbed into a
    /// single reported interval.
    pub fn support(&self) -> Vec<(Dyadic, Dyadic)> {
        let cuts = support_cuts(&self.breaks, &self.vals);
        let moved = |t: &Dyadic| eval_segments(&self.breaks, &self.vals, t) != *t;
        let mut out: Vec<(Dyadic, Dyadic)> = Vec::new();
        for i in 0..cuts.len() - 1 {
            let mid = Dyadic::midpoint(&cuts[i], &cuts[i + 1]);
            if !moved(&mid) {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.1 == cuts[i] && moved(&cuts[i]) {
                    last.1 = cuts[i + 1].clone();
                    continue;
                }
            }
            out.push((cuts[i].clone(), cuts[i + 1].clone()));
        }
        out
    }

    /// CSV of the graph sampled at `t = i / 2^level`, with exact decimal
    /// coordinates, for external plotting.
    pub fn sample_csv(&self, level: u32) -> String {
        let mut out = String::from("t,value\n");
        let n: u64 = 1 << level.min(20);
        for i in 0..=n {
            let t = Dyadic::new(i as i64, level.min(20));
            let v = self.eval(&t).unwrap();
            out.push_str(&format!(
                "{},{}\n",
                t.to_decimal_string(),
                v.to_decimal_string()
            ));
        }
        out
    }

    /// Parses the [`fmt::Display`] format: semicolon-separated
    /// `breakpoint:value` pairs of dyadic literals, e.g. `0:0; 1/2^2:1/2^1; 1:1`.
    pub fn parse(text: &str) -> Result<DyadicPL, PlError> {
        let (breaks, vals) = parse_pairs(text, None)?;
        DyadicPL::new(breaks, vals)
    }
}

impl fmt::Display for DyadicPL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .breaks
            .iter()
            .zip(&self.vals)
            .map(|(b, v)| format!("{b}:{v}"))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// An increasing piecewise-linear bijection of `[0, ∞)` with dyadic data;
/// beyond the last breakpoint the map is the translation `t ↦ t + c` where
/// `c = last value − last breakpoint` (so the slope at infinity is 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalflinePL {
    breaks: Vec<Dyadic>,
    vals: Vec<Dyadic>,
}

impl HalflinePL {
    pub fn new(breaks: Vec<Dyadic>, vals: Vec<Dyadic>) -> Result<HalflinePL, PlError> {
        if breaks.is_empty() || breaks.len() != vals.len() {
            return Err(invalid("need equally many breakpoints and values, at least one"));
        }
        if breaks[0] != Dyadic::zero() || vals[0] != Dyadic::zero() {
            return Err(invalid("a half-line map fixes 0"));
        }
        for list in [&breaks, &vals] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("breakpoints and values must be strictly increasing"));
            }
        }
        for i in 0..breaks.len() - 1 {
            if slope_exp(&breaks[i], &vals[i], &breaks[i + 1], &vals[i + 1]).is_none() {
                return Err(invalid(format!("slope on segment {i} is not a power of two")));
            }
        }
        let (mut breaks, mut vals) = merge_collinear(breaks, vals);
        // Drop a final breakpoint whose incoming slope already matches the
        // slope-one tail.
        while breaks.len() >= 2 {
            let l = breaks.len() - 1;
            if slope_exp(&breaks[l - 1], &vals[l - 1], &breaks[l], &vals[l]) == Some(0) {
                breaks.pop();
                vals.pop();
            } else {
                break;
            }
        }
        Ok(HalflinePL { breaks, vals })
    }

    pub fn identity() -> HalflinePL {
        HalflinePL {
            breaks: vec![Dyadic::zero()],
            vals: vec![Dyadic::zero()],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.len() == 1
    }

    pub fn breakpoints(&self) -> &[Dyadic] {
        &self.breaks
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.vals
    }

    /// The constant `c` of the eventual translation `t ↦ t + c`.
    pub fn tail_offset(&self) -> Dyadic {
        self.vals.last().unwrap() - self.breaks.last().unwrap()
    }

    /// Evaluates at `t ≥ 0`.
    pub fn eval(&self, t: &Dyadic) -> Result<Dyadic, PlError> {
        if *t < Dyadic::zero() {
            return Err(PlError::OutOfDomain);
        }
        if *t >= *self.breaks.last().unwrap() {
            return Ok(&(t - self.breaks.last().unwrap()) + self.vals.last().unwrap());
        }
        Ok(eval_segments(&self.breaks, &self.vals, t))
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &HalflinePL) -> HalflinePL {
        let inv = self.inverse();
        let mut cuts = self.breaks.clone();
        cuts.extend(other.breaks.iter().map(|b| inv.eval(b).unwrap()));
        cuts.sort();
        cuts.dedup();
        let vals: Vec<Dyadic> = cuts
            .iter()
            .map(|t| other.eval(&self.eval(t).unwrap()).unwrap())
            .collect();
        HalflinePL::new(cuts, vals).expect("composite of valid maps is valid")
    }

    pub fn inverse(&self) -> HalflinePL {
        HalflinePL {
            breaks: self.vals.clone(),
            vals: self.breaks.clone(),
        }
    }

    /// Maximal open intervals where the map moves points; `None` as an upper
    /// endpoint means the interval is unbounded (nonzero tail translation).
    /// The same caveat about non-dyadic isolated fixed points applies as for
    /// [`DyadicPL::support`].
    pub fn support(&self) -> Vec<(Dyadic, Option<Dyadic>)> {
        let mut cuts = support_cuts(&self.breaks, &self.vals);
        let last = self.breaks.last().unwrap().clone();
        if *cuts.last().unwrap() < last {
            cuts.push(last.clone());
        }
        let moved = |t: &Dyadic| self.eval(t).unwrap() != *t;
        let mut out: Vec<(Dyadic, Option<Dyadic>)> = Vec::new();
        for i in 0..cuts.len() - 1 {
            let mid = Dyadic::midpoint(&cuts[i], &cuts[i + 1]);
            if !moved(&mid) {
                continue;
            }
            if let Some(open) = out.last_mut() {
                if open.1.as_ref() == Some(&cuts[i]) && moved(&cuts[i]) {
                    open.1 = Some(cuts[i + 1].clone());
                    continue;
                }
            }
            out.push((cuts[i].clone(), Some(cuts[i + 1].clone())));
        }
        // Tail piece.
        if !self.tail_offset().is_zero() {
            match out.last_mut() {
                Some(open) if open.1.as_ref() == Some(&last) && moved(&last) => open.1 = None,
                _ => out.push((last, None)),
            }
        }
        out
    }

    /// Parses the [`fmt::Display`] format: `breakpoint:value` pairs followed
    /// by the tail offset, e.g. `0:0; 1:2; +1`.
    pub fn parse(text: &str) -> Result<HalflinePL, PlError> {
        let mut tail = None;
        let (breaks, vals) = parse_pairs(text, Some(&mut tail))?;
        let map = HalflinePL::new(breaks, vals)?;
        if let Some(t) = tail {
            if map.tail_offset() != t {
                return Err(invalid(format!(
                    "declared tail offset {t} does not match the segment data (expected {})",
                    map.tail_offset()
                )));
            }
        }
        Ok(map)
    }
}

impl fmt::Display for HalflinePL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .breaks
            .iter()
            .zip(&self.vals)
            .map(|(b, v)| format!("{b}:{v}"))
            .collect();
        let c = self.tail_offset();
        parts.push(if c.is_negative() {
            format!("{c}")
        } else {
            format!("+{c}")
        });
        f.write_str(&parts.join("; "))
    }
}

fn parse_pairs(
    text: &str,
    mut tail: Option<&mut Option<Dyadic>>,
) -> Result<(Vec<Dyadic>, Vec<Dyadic>), PlError> {
    let mut breaks = Vec::new();
    let mut vals = Vec::new();
    for (position, raw) in text.split(';').enumerate() {
        let entry = raw.trim();
        let err = |message: String| PlError::Parse { position, message };
        if entry.is_empty() {
            return Err(err("empty entry".into()));
        }
        if let Some(slot) = tail.as_deref_mut() {
            if entry.starts_with('+') || (entry.starts_with('-') && !entry.contains(':')) {
                let lit = entry.strip_prefix('+').unwrap_or(entry);
                let c = lit
                    .parse()
                    .map_err(|e| err(format!("bad tail offset: {e}")))?;
                if slot.replace(c).is_some() {
                    return Err(err("tail offset given twice".into()));
                }
                continue;
            }
        }
        let (b, v) = entry
            .split_once(':')
            .ok_or_else(|| err("expected `breakpoint:value`".into()))?;
        breaks.push(b.trim().parse().map_err(|e| err(format!("{e}")))?);
        vals.push(v.trim().parse().map_err(|e| err(format!("{e}")))?);
    }
    Ok((breaks, vals))
}

/// Piecewise evaluation over breakpoint/value lists (t within range).
fn eval_segments(breaks: &[Dyadic], vals: &[Dyadic], t: &Dyadic) -> Dyadic {
    let i = match breaks.binary_search(t) {
        Ok(i) => return vals[i].clone(),
        Err(i) => i - 1,
    };
    let e = slope_exp(&breaks[i], &vals[i], &breaks[i + 1], &vals[i + 1])
        .expect("canonical maps have power-of-two slopes");
    &vals[i] + &(t - &breaks[i]).times_pow2(e)
}

/// Removes interior breakpoints with equal slopes on both sides.
fn merge_collinear(breaks: Vec<Dyadic>, vals: Vec<Dyadic>) -> (Vec<Dyadic>, Vec<Dyadic>) {
    let mut out_b: Vec<Dyadic> = Vec::with_capacity(breaks.len());
    let mut out_v: Vec<Dyadic> = Vec::with_capacity(vals.len());
    for (b, v) in breaks.into_iter().zip(vals) {
        while out_b.len() >= 2 {
            let l = out_b.len();
            let s1 = slope_exp(&out_b[l - 2], &out_v[l - 2], &out_b[l - 1], &out_v[l - 1]);
            let s2 = slope_exp(&out_b[l - 1], &out_v[l - 1], &b, &v);
            if s1 == s2 && s1.is_some() {
                out_b.pop();
                out_v.pop();
            } else {
                break;
            }
        }
        out_b.push(b);
        out_v.push(v);
    }
    (out_b, out_v)
}

/// Breakpoints plus all dyadic fixed points interior to non-identity
/// segments, sorted: between consecutive cuts the map either fixes every
/// point or moves every dyadic one.
fn support_cuts(breaks: &[Dyadic], vals: &[Dyadic]) -> Vec<Dyadic> {
    let mut cuts = breaks.to_vec();
    for i in 0..breaks.len() - 1 {
        let e = slope_exp(&breaks[i], &vals[i], &breaks[i + 1], &vals[i + 1]).unwrap();
        if e == 0 {
            continue;
        }
        // Solve v_i + (t − b_i)·2^e = t.  With m = |e|:
        //   e > 0:  t·(2^e − 1) = b_i·2^e − v_i
        //   e < 0:  t·(1 − 2^m)  = b_i − v_i·2^m   (both sides scaled by 2^m)
        let (numer, denom) = if e > 0 {
            (
                &breaks[i].times_pow2(e) - &vals[i],
                (num_bigint::BigInt::from(1) << (e as usize)) - 1,
            )
        } else {
            (
                &breaks[i] - &vals[i].times_pow2(-e),
                num_bigint::BigInt::from(1) - (num_bigint::BigInt::from(1) << ((-e) as usize)),
            )
        };
        let (q, r) = num_integer::Integer::div_rem(numer.numerator(), &denom);
        if !num_traits::Zero::is_zero(&r) {
            continue; // non-dyadic fixed point; cannot cut exactly
        }
        let t = Dyadic::new(q, numer.denominator_exp());
        if t > breaks[i] && t < breaks[i + 1] {
            cuts.push(t);
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts
}

/// Builds the unit-interval map of a normal form.
///
/// The top half of the reduced base-`x` diagram encodes the domain
/// partition of `[0, 1]` (each cell halves one interval), the bottom half
/// the image partition; the map sends the i-th domain interval affinely
/// onto the i-th image interval. This orientation is the one that makes
/// `pl_from_nf` a homomorphism for left-to-right application (reading a
/// product diagram from top to bottom applies the factors in order); the
/// mirror-image choice would be an anti-homomorphism. Concretely `x0` is
/// `t/2` on `[0, 1/2]`, so its half-line conjugate is the inverse of the
/// translation-generator [`x0_halfline`].
pub fn pl_from_nf(f: &NormalForm) -> DyadicPL {
    let d = thompson::nf_to_diagram(f, 1).expect("base width 1 is valid");
    pl_from_diagram(&d).expect("diagrams of normal forms are well-formed")
}

/// The unit-interval map of any spherical diagram over `⟨x | x = xx⟩`.
pub fn pl_from_diagram(d: &Diagram) -> Result<DyadicPL, PlError> {
    let p = thompson::presentation();
    if *d.presentation() != p {
        return Err(ThompsonError::WrongPresentation.into());
    }
    if !d.is_spherical() {
        return Err(ThompsonError::NotSpherical.into());
    }
    let k = d.top().len();
    if k == 0 {
        return Err(ThompsonError::BadBase.into());
    }
    let based = if k == 1 {
        d.reduce()
    } else {
        let psi = thompson::base_change(k, 1)?;
        psi.inverse()
            .compose(d)
            .map_err(ThompsonError::from)?
            .compose(&psi)
            .map_err(ThompsonError::from)?
            .reduce()
    };
    let (fwd_half, back_half) = based
        .split_forward_backward()
        .expect("a reduced spherical diagram factors through its middle word");
    let domain = halving_partition(&fwd_half);
    let image = halving_partition(&back_half.inverse());
    Ok(DyadicPL::new(domain, image).expect("halving partitions give power-of-two slopes"))
}

/// Replays a forward-only diagram with base `x` as successive halvings of
/// `[0, 1]`; returns the full cut list including 0 and 1.
fn halving_partition(d: &Diagram) -> Vec<Dyadic> {
    debug_assert_eq!(d.top(), &Word(vec![0]));
    let mut cuts = vec![Dyadic::zero(), Dyadic::one()];
    for step in &d.derivation().steps {
        debug_assert!(step.forward);
        let mid = Dyadic::midpoint(&cuts[step.offset], &cuts[step.offset + 1]);
        cuts.insert(step.offset + 1, mid);
    }
    cuts
}

/// The level `n` with `1 − 2^{−n} ≤ u < 1 − 2^{−n−1}`, for `u ∈ [0, 1)`.
fn level_of(u: &Dyadic) -> u32 {
    let mut x = &Dyadic::one() - u;
    debug_assert!(x > Dyadic::zero());
    let half = Dyadic::new(1, 1);
    let mut n = 0;
    while x <= half {
        x = x.times_pow2(1);
        n += 1;
    }
    n
}

/// Inverse of the gluing map `h: [0, ∞) → [0, 1)`,
/// `h(n + u) = 1 − 2^{−n} + u · 2^{−n−1}` for `u ∈ [0, 1)`.
fn h_inv(u: &Dyadic) -> Dyadic {
    let n = level_of(u);
    let base = &Dyadic::one() - &Dyadic::one().times_pow2(-i64::from(n));
    &Dyadic::from(i64::from(n)) + &(u - &base).times_pow2(i64::from(n) + 1)
}

/// Conjugates a unit-interval map to the half line along `h`; this is an
/// isomorphism onto the maps with slope 1 at infinity and integral tail
/// offset behaviour, sending `x0` to [`x0_halfline`].
pub fn to_halfline(f: &DyadicPL) -> HalflinePL {
    let interior = &f.breakpoints()[..f.breakpoints().len() - 1];
    let mut cuts: Vec<Dyadic> = interior.to_vec();
    let n_star = level_of(cuts.last().unwrap());
    for n in 0..=i64::from(n_star) + 1 {
        cuts.push(&Dyadic::one() - &Dyadic::one().times_pow2(-n));
    }
    cuts.sort();
    cuts.dedup();
    let breaks: Vec<Dyadic> = cuts.iter().map(h_inv).collect();
    let vals: Vec<Dyadic> = cuts.iter().map(|u| h_inv(&f.eval(u).unwrap())).collect();
    HalflinePL::new(breaks, vals).expect("conjugate of a valid map is valid")
}

/// The half-line map `t ↦ 2t` on `[0, 1]`, `t ↦ t + 1` for `t ≥ 1`.
/// Conjugation by it shifts each `Φ_k` onto `Φ_{k+1}`.
pub fn x0_halfline() -> HalflinePL {
    HalflinePL::new(
        vec![Dyadic::zero(), Dyadic::one()],
        vec![Dyadic::zero(), Dyadic::from(2)],
    )
    .expect("fixed map is valid")
}

/// The embedding `Φ_k` (`k ≥ 1`): rescales a unit-interval map affinely into
/// `[k, k + 1]` and extends by the identity elsewhere on the half line.
pub fn phi_k_embed(f: &DyadicPL, k: u32) -> Result<HalflinePL, PlError> {
    if k == 0 {
        return Err(invalid("the embedding parameter k must be at least 1"));
    }
    let shift = Dyadic::from(i64::from(k));
    let mut breaks = vec![Dyadic::zero()];
    let mut vals = vec![Dyadic::zero()];
    for (b, v) in f.breakpoints().iter().zip(f.values()) {
        breaks.push(&shift + b);
        vals.push(&shift + v);
    }
    HalflinePL::new(breaks, vals)
}

/// Interface the wreath-witness search needs from a piecewise-linear group.
pub trait PlMap: Clone + PartialEq {
    /// `self` followed by `other`.
    fn compose_map(&self, other: &Self) -> Self;
    fn inverse_map(&self) -> Self;
    fn is_identity_map(&self) -> bool;
    /// Evaluation at a point of the domain.
    fn eval_at(&self, t: &Dyadic) -> Dyadic;
    /// Support components `(lo, hi)`, `hi = None` meaning unbounded.
    fn support_components(&self) -> Vec<(Dyadic, Option<Dyadic>)>;
}

impl PlMap for DyadicPL {
    fn compose_map(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn inverse_map(&self) -> Self {
        self.inverse()
    }
    fn is_identity_map(&self) -> bool {
        self.is_identity()
    }
    fn eval_at(&self, t: &Dyadic) -> Dyadic {
        self.eval(t).expect("point inside the unit interval")
    }
    fn support_components(&self) -> Vec<(Dyadic, Option<Dyadic>)> {
        self.support()
            .into_iter()
            .map(|(a, b)| (a, Some(b)))
            .collect()
    }
}

impl PlMap for HalflinePL {
    fn compose_map(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn inverse_map(&self) -> Self {
        self.inverse()
    }
    fn is_identity_map(&self) -> bool {
        self.is_identity()
    }
    fn eval_at(&self, t: &Dyadic) -> Dyadic {
        self.eval(t).expect("point on the half line")
    }
    fn support_components(&self) -> Vec<(Dyadic, Option<Dyadic>)> {
        self.support()
    }
}

/// Bounds for [`wreath_witness`].
#[derive(Debug, Clone)]
pub struct WitnessBounds {
    /// Longest word in `f, g` and inverses tried as translator.
    pub max_word_len: usize,
    /// Conjugates `h0^{w^i}` for `0 ≤ i ≤ check_depth` are pairwise checked.
    pub check_depth: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        WitnessBounds {
            max_word_len: 6,
            check_depth: 4,
        }
    }
}

/// A verified wreath-product witness for a pair `(f, g)`.
#[derive(Debug, Clone)]
pub struct WitnessCertificate<M> {
    /// The commutator `[f, g] = f^{-1} g^{-1} f g`, not the identity.
    pub h0: M,
    /// Translator word: letters `(0, false) = f`, `(0, true) = f^{-1}`,
    /// `(1, false) = g`, `(1, true) = g^{-1}`, applied left to right.
    pub word: Vec<(usize, bool)>,
    /// Dyadic hull `[c0, d0]` of the support of `h0` within the chosen
    /// component of `supp f ∪ supp g`.
    pub window: (Dyadic, Dyadic),
    /// Image of `c0` under the translator (strictly beyond `d0`).
    pub moved_to: Dyadic,
    /// Depth to which `[h0^{w^i}, h0^{w^j}] = 1` was verified.
    pub checked_depth: usize,
    /// Human-readable account of the certificate.
    pub report: String,
}

/// Outcome of the bounded wreath-witness search.
#[derive(Debug, Clone)]
pub enum WitnessOutcome<M> {
    /// `⟨f, g⟩` contains the expected wreath structure; certificate attached.
    Certificate(WitnessCertificate<M>),
    /// `[f, g]` is the identity.
    CommutingInput,
    /// Bounds exhausted without a verified translator.
    NotFound,
}

/// Renders a witness word, e.g. `f g^-1 f`.
pub fn render_witness_word(word: &[(usize, bool)]) -> String {
    word.iter()
        .map(|&(gen, inv)| {
            let name = if gen == 0 { "f" } else { "g" };
            if inv {
                format!("{name}^-1")
            } else {
                name.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn commutator<M: PlMap>(a: &M, b: &M) -> M {
    a.inverse_map()
        .compose_map(&b.inverse_map())
        .compose_map(a)
        .compose_map(b)
}

/// Merges interval lists into the components of their union (open intervals;
/// touching at a single excluded point does not merge).
fn union_components(
    mut intervals: Vec<(Dyadic, Option<Dyadic>)>,
) -> Vec<(Dyadic, Option<Dyadic>)> {
    intervals.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Dyadic, Option<Dyadic>)> = Vec::new();
    for (lo, hi) in intervals {
        if let Some(last) = out.last_mut() {
            let overlaps = match &last.1 {
                None => true,
                Some(end) => lo < *end,
            };
            if overlaps {
                last.1 = match (last.1.take(), hi) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn intersects(a: &(Dyadic, Option<Dyadic>), b: &(Dyadic, Option<Dyadic>)) -> bool {
    let lo = a.0.clone().max(b.0.clone());
    match (&a.1, &b.1) {
        (None, None) => true,
        (Some(x), None) | (None, Some(x)) => lo < *x,
        (Some(x), Some(y)) => lo < x.clone().min(y.clone()),
    }
}

/// Searches for a wreath-product witness inside `⟨f, g⟩`.
///
/// If `h0 = [f, g]` is not the identity, let `J` be the leftmost component
/// of `supp f ∪ supp g` meeting `supp h0` and `[c0, d0]` the dyadic hull of
/// `supp h0 ∩ J`. Freely reduced words `w` over `f, f^{-1}, g, g^{-1}` are
/// tried in length-then-lex order (`f < f^{-1} < g < g^{-1}`); a candidate
/// with `(c0)w > d0` is accepted once the commutations `[h0^{w^i}, h0^{w^j}]
/// = 1` hold for all `0 ≤ i < j ≤ check_depth`, certifying that the
/// conjugates generate the base of a wreath product. Candidates failing
/// verification are skipped and the search continues.
pub fn wreath_witness<M: PlMap>(f: &M, g: &M, bounds: &WitnessBounds) -> WitnessOutcome<M> {
    let h0 = commutator(f, g);
    if h0.is_identity_map() {
        return WitnessOutcome::CommutingInput;
    }
    let mut joint = f.support_components();
    joint.extend(g.support_components());
    let components = union_components(joint);
    let h0_supp = h0.support_components();
    let j = components
        .iter()
        .find(|j| h0_supp.iter().any(|s| intersects(j, s)))
        .expect("the commutator moves points only where f or g does")
        .clone();
    let inside: Vec<&(Dyadic, Option<Dyadic>)> = h0_supp
        .iter()
        .filter(|s| intersects(&j, s))
        .collect();
    let c0 = inside.iter().map(|s| s.0.clone()).min().unwrap();
    let d0 = inside
        .iter()
        .map(|s| {
            s.1.clone()
                .expect("a commutator has bounded support (its tail translation cancels)")
        })
        .max()
        .unwrap();

    let letters: [M; 4] = [f.clone(), f.inverse_map(), g.clone(), g.inverse_map()];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=bounds.max_word_len {
        let mut next = Vec::new();
        for w in &words {
            for l in 0..4 {
                if let Some(&last) = w.last() {
                    if last ^ 1 == l {
                        continue; // not freely reduced
                    }
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        words = next;
        let _ = len;
        for w in &words {
            let mut map = letters[w[0]].clone();
            for &l in &w[1..] {
                map = map.compose_map(&letters[l]);
            }
            let moved = map.eval_at(&c0);
            if moved <= d0 {
                continue;
            }
            // Verify the pairwise commutations of the conjugates.
            let mut conjugates = vec![h0.clone()];
            for _ in 1..=bounds.check_depth {
                let prev = conjugates.last().unwrap();
                let next = map
                    .inverse_map()
                    .compose_map(prev)
                    .compose_map(&map);
                conjugates.push(next);
            }
            let mut ok = true;
            'pairs: for i in 0..conjugates.len() {
                for jj in i + 1..conjugates.len() {
                    if !commutator(&conjugates[i], &conjugates[jj]).is_identity_map() {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if !ok {
                continue;
            }
            let word: Vec<(usize, bool)> = w.iter().map(|&l| (l / 2, l % 2 == 1)).collect();
            let pairs = bounds.check_depth * (bounds.check_depth + 1) / 2;
            let report = format!(
                "h0 = [f, g] is nontrivial; support window [{c0}, {d0}]; \
                 translator `{}` moves {c0} to {moved} (> {d0}); verified {pairs} \
                 commutations [h0^(w^i), h0^(w^j)] = 1 for 0 <= i < j <= {}",
                render_witness_word(&word),
                bounds.check_depth
            );
            return WitnessOutcome::Certificate(WitnessCertificate {
                h0,
                word,
                window: (c0, d0),
                moved_to: moved,
                checked_depth: bounds.check_depth,
                report,
            });
        }
    }
    WitnessOutcome::NotFound
}
