//! Iterated wreath products of infinite cyclic groups.
//!
//! `H_0 = 1`, `H_{k+1} = H_k wr ⟨a_{k+1}⟩`. An element of `H_k` is a
//! finitely supported map `Z → H_{k−1}` (the fibers) together with an
//! integer exponent of the top generator `a_k`. Multiplication is
//! `(f, m)·(g, n) = (ℓ ↦ f(ℓ)·g(ℓ+m), m+n)`, which makes conjugation by
//! `a_k` shift the level-`k` fibers upward under the convention
//! `x^g = g^{-1} x g` used throughout this crate: `(a_1)^{a_2}` at level 2
//! places the `a_1` in fiber `+1`.
//!
//! The module provides the basic elements `a_i^{a_{i+1}^{t_1} ⋯ a_{i+r}^{t_r}}`,
//! the iterated commutators `g_k(n) = [a_1^n, …, a_k^n]`, the counting
//! homomorphism `φ_k` on the normal closure of `a_1`, and the exact relator
//! cost of base elements of `Z wr Z` in the conjugate basis of `[a, b]`.

use std::collections::BTreeMap;
use std::fmt;

/// Errors from wreath-tower operations.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum WreathError {
    #[error("elements live at different levels ({left} vs {right})")]
    LevelMismatch { left: usize, right: usize },
    #[error("index out of range: {message}")]
    OutOfRange { message: String },
    #[error("element is not in the normal closure of the bottom generator at level {level}")]
    NotInBottomClosure { level: usize },
    #[error("element is not in the normal closure of [a, b] (top exponent {top}, fiber sum {fiber_sum})")]
    NotInCommutatorClosure { top: i64, fiber_sum: i64 },
}

fn out_of_range(message: impl Into<String>) -> WreathError {
    WreathError::OutOfRange {
        message: message.into(),
    }
}

/// An element of the iterated wreath product `H_level`.
///
/// Level 0 is the trivial group. For `level ≥ 1` the fibers map integers to
/// non-identity elements of `H_{level−1}` (level 1 therefore has no fibers)
/// and `top` is the exponent of the top generator `a_level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    level: usize,
    fibers: BTreeMap<i64, WreathElement>,
    top: i64,
}

impl WreathElement {
    pub fn identity(level: usize) -> WreathElement {
        WreathElement {
            level,
            fibers: BTreeMap::new(),
            top: 0,
        }
    }

    /// The generator `a_index` (`1 ≤ index ≤ level`) as an element of
    /// `H_level`.
    pub fn generator(level: usize, index: usize) -> Result<WreathElement, WreathError> {
        if index == 0 || index > level {
            return Err(out_of_range(format!(
                "generator index {index} at level {level}"
            )));
        }
        let mut e = WreathElement {
            level: index,
            fibers: BTreeMap::new(),
            top: 1,
        };
        while e.level < level {
            e = e.lift();
        }
        Ok(e)
    }

    /// Embeds `self` into the next level as the fiber at 0.
    pub fn lift(&self) -> WreathElement {
        let mut fibers = BTreeMap::new();
        if !self.is_identity() {
            fibers.insert(0, self.clone());
        }
        WreathElement {
            level: self.level + 1,
            fibers,
            top: 0,
        }
    }

    /// Embeds `self` into `H_level` for any `level ≥ self.level()`.
    pub fn at_level(&self, level: usize) -> Result<WreathElement, WreathError> {
        if level < self.level {
            return Err(out_of_range(format!(
                "cannot lower level {} to {level}",
                self.level
            )));
        }
        let mut e = self.clone();
        while e.level < level {
            e = e.lift();
        }
        Ok(e)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn top_exponent(&self) -> i64 {
        self.top
    }

    pub fn fibers(&self) -> &BTreeMap<i64, WreathElement> {
        &self.fibers
    }

    pub fn is_identity(&self) -> bool {
        self.top == 0 && self.fibers.is_empty()
    }

    pub fn mul(&self, other: &WreathElement) -> Result<WreathElement, WreathError> {
        if self.level != other.level {
            return Err(WreathError::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        let mut fibers = self.fibers.clone();
        for (pos, val) in &other.fibers {
            let dest = pos - self.top;
            match fibers.remove(&dest) {
                Some(existing) => {
                    let prod = existing.mul(val)?;
                    if !prod.is_identity() {
                        fibers.insert(dest, prod);
                    }
                }
                None => {
                    fibers.insert(dest, val.clone());
                }
            }
        }
        Ok(WreathElement {
            level: self.level,
            fibers,
            top: self.top + other.top,
        })
    }

    pub fn inv(&self) -> WreathElement {
        let fibers = self
            .fibers
            .iter()
            .map(|(pos, val)| (pos + self.top, val.inv()))
            .collect();
        WreathElement {
            level: self.level,
            fibers,
            top: -self.top,
        }
    }

    /// `self^g = g^{-1}·self·g`.
    pub fn conjugate(&self, g: &WreathElement) -> Result<WreathElement, WreathError> {
        g.inv().mul(self)?.mul(g)
    }

    pub fn pow(&self, n: i64) -> WreathElement {
        if n < 0 {
            return self.inv().pow(-n);
        }
        let mut acc = WreathElement::identity(self.level);
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("equal levels");
            }
            base = base.mul(&base).expect("equal levels");
            n >>= 1;
        }
        acc
    }

    /// Sum of the top exponents of the level-1 fibers; the `a`-coordinate of
    /// the abelianization of `Z wr Z` (the `b`-coordinate is
    /// [`top_exponent`](Self::top_exponent)).
    pub fn fiber_exponent_sum(&self) -> i64 {
        if self.level <= 1 {
            return self.top;
        }
        self.fibers.values().map(|v| v.fiber_exponent_sum()).sum()
    }
}

impl fmt::Display for WreathElement {
    /// Nested fiber terms sorted by index, then the top power, e.g.
    /// `(0: a1^-1) (1: a1) a2^2`; the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = self
            .fibers
            .iter()
            .map(|(pos, val)| format!("({pos}: {val})"))
            .collect();
        if self.top != 0 {
            let name = format!("a{}", self.level);
            parts.push(if self.top == 1 {
                name
            } else {
                format!("{name}^{}", self.top)
            });
        }
        f.write_str(&parts.join(" "))
    }
}

/// The basic element `a_index^{a_{index+1}^{t_1} ⋯ a_{index+r}^{t_r}}` of
/// `H_level`: an `a_index` sitting in fiber `t_1` at level `index+1`, fiber
/// `t_2` at level `index+2`, …, fiber 0 above `index + r`.
pub fn basic(
    level: usize,
    index: usize,
    ts: &[i64],
) -> Result<WreathElement, WreathError> {
    if index == 0 || index > level {
        return Err(out_of_range(format!(
            "generator index {index} at level {level}"
        )));
    }
    if ts.len() > level - index {
        return Err(out_of_range(format!(
            "{} conjugating exponents but only {} levels above a{index}",
            ts.len(),
            level - index
        )));
    }
    let mut e = WreathElement {
        level: index,
        fibers: BTreeMap::new(),
        top: 1,
    };
    for &t in ts {
        let mut fibers = BTreeMap::new();
        fibers.insert(t, e.clone());
        e = WreathElement {
            level: e.level + 1,
            fibers,
            top: 0,
        };
    }
    e.at_level(level)
}

/// `[a, b] = a^{-1} b^{-1} a b`.
pub fn commutator(a: &WreathElement, b: &WreathElement) -> Result<WreathElement, WreathError> {
    a.inv().mul(&b.inv())?.mul(a)?.mul(b)
}

/// The left-normalized commutator `g_k(n) = [a_1^n, a_2^n, …, a_k^n]` of
/// `H_k`, defined by `g_1(n) = a_1^n`, `g_{k+1}(n) = [g_k(n), a_{k+1}^n]`.
pub fn g_k_n(k: usize, n: i64) -> Result<WreathElement, WreathError> {
    if k == 0 {
        return Err(out_of_range("k must be at least 1".to_string()));
    }
    let mut e = WreathElement::generator(1, 1)?.pow(n);
    for next in 2..=k {
        let a_next = WreathElement::generator(next, next)?.pow(n);
        e = commutator(&e.at_level(next)?, &a_next)?;
    }
    Ok(e)
}

/// An explicit word for [`g_k_n`] over the generators, as pairs
/// `(generator index, inverted)`. Its length is exactly
/// `(3·2^{k−1} − 2)·|n|`, the bound used to compare against the relator
/// cost.
pub fn g_k_word(k: usize, n: i64) -> Vec<(usize, bool)> {
    let block = |index: usize, e: i64| -> Vec<(usize, bool)> {
        (0..e.unsigned_abs()).map(|_| (index, e < 0)).collect()
    };
    let mut word = block(1, n);
    for next in 2..=k {
        // [w, a^n] = w^{-1} a^{-n} w a^n
        let mut out: Vec<(usize, bool)> = word
            .iter()
            .rev()
            .map(|&(i, inv)| (i, !inv))
            .collect();
        out.extend(block(next, -n));
        out.extend(word.iter().copied());
        out.extend(block(next, n));
        word = out;
    }
    word
}

/// Evaluates a generator word at a level: the product of `a_index^{±1}`.
pub fn eval_word(level: usize, word: &[(usize, bool)]) -> Result<WreathElement, WreathError> {
    let mut acc = WreathElement::identity(level);
    for &(index, inverted) in word {
        let g = WreathElement::generator(level, index)?;
        acc = acc.mul(&if inverted { g.inv() } else { g })?;
    }
    Ok(acc)
}

/// The counting homomorphism `φ_k` on the normal closure `M_k` of `a_1` in
/// `H_k`: `φ_1(a_1^t) = t` and `φ_k(x) = Σ_ℓ ℓ·φ_{k−1}(fiber ℓ)`, so the
/// free generator `a_1^{a_2^{s_2} ⋯ a_k^{s_k}}` maps to `s_2 ⋯ s_k`.
///
/// Errors unless `x ∈ M_k` (top exponent 0 at every level above 1).
pub fn phi_k(x: &WreathElement) -> Result<i64, WreathError> {
    if x.level <= 1 {
        return Ok(x.top);
    }
    if x.top != 0 {
        return Err(WreathError::NotInBottomClosure { level: x.level });
    }
    let mut sum = 0i64;
    for (pos, val) in &x.fibers {
        sum += pos * phi_k(val)?;
    }
    Ok(sum)
}

/// Convenience constructor for `Z wr Z` (level-2) elements from the fiber
/// exponents of `a` and the exponent of `b`.
pub fn zwrz_element(fibers: &[(i64, i64)], top: i64) -> WreathElement {
    let mut acc = WreathElement::identity(2);
    for &(pos, exp) in fibers {
        let term = basic(2, 1, &[pos]).expect("valid basic element").pow(exp);
        acc = acc.mul(&term).expect("equal levels");
    }
    let b = WreathElement::generator(2, 2).expect("valid generator");
    acc.mul(&b.pow(top)).expect("equal levels")
}

/// Exact cost of a base element of `Z wr Z` in conjugates of `[a, b]`.
///
/// The conjugates `c_i = (a^{b^i})^{-1}·a^{b^{i+1}}` freely generate the
/// sum-zero sublattice of the base; an element with fiber exponents `e_j`
/// expands with coefficients `d_j = −Σ_{t ≤ j} e_t`, and the minimal number
/// of `c_i^{±1}` factors is `Σ_j |d_j|`. Errors unless the element is in
/// the normal closure of `[a, b]` (top exponent 0, fiber exponents summing
/// to 0).
pub fn relator_cost_zwrz(g: &WreathElement) -> Result<u64, WreathError> {
    if g.level() != 2 {
        return Err(out_of_range(format!(
            "relator cost is defined at level 2, got level {}",
            g.level()
        )));
    }
    let fiber_sum = g.fiber_exponent_sum();
    if g.top_exponent() != 0 || fiber_sum != 0 {
        return Err(WreathError::NotInCommutatorClosure {
            top: g.top_exponent(),
            fiber_sum,
        });
    }
    // The coefficient d_j is constant between consecutive supported fibers,
    // and zero outside the support hull (the exponents sum to zero).
    let mut cost = 0u64;
    let mut partial = 0i64;
    let positions: Vec<i64> = g.fibers().keys().copied().collect();
    for (w, &pos) in positions.iter().enumerate() {
        partial += g.fibers()[&pos].top_exponent();
        if let Some(&next) = positions.get(w + 1) {
            cost += partial.unsigned_abs() * (next - pos) as u64;
        }
    }
    debug_assert_eq!(partial, 0);
    Ok(cost)
}
