//! Deterministic random generators for derivations, diagrams, and normal
//! forms, shared by tests and benchmarks. Everything is seeded; the same
//! seed always produces the same objects.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use crate::diagram::Diagram;
use crate::presentation::{Derivation, Presentation, Step, Word};
use crate::thompson::NormalForm;

/// A seeded generator (ChaCha-based so streams are portable across
/// platforms and releases).
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random derivation of `len` steps from `start` (fewer if the word ever
/// has no applicable step, which cannot happen when some relation side has
/// length 1).
pub fn random_derivation(
    p: &Presentation,
    start: &Word,
    len: usize,
    rng: &mut impl Rng,
) -> Derivation {
    let mut steps = Vec::with_capacity(len);
    let mut w = start.clone();
    for _ in 0..len {
        let choices = p.applicable_steps(&w);
        let Some(&s) = choices.as_slice().choose(rng) else {
            break;
        };
        w = p.apply_step(&w, &s).expect("chosen step applies");
        steps.push(s);
    }
    Derivation {
        start: start.clone(),
        steps,
    }
}

/// A random `(start, ·)`-diagram with `len` cells.
pub fn random_diagram(
    p: &Presentation,
    start: &Word,
    len: usize,
    rng: &mut impl Rng,
) -> Diagram {
    let d = random_derivation(p, start, len, rng);
    Diagram::from_derivation(p, &d).expect("random derivation is valid")
}

/// A random spherical `(base, base)`-diagram: a random walk of `out_len`
/// steps followed by a breadth-first path back to the base. Returns `None`
/// if no return path exists within `search_bound` visited words.
pub fn random_sphere(
    p: &Presentation,
    base: &Word,
    out_len: usize,
    search_bound: usize,
    rng: &mut impl Rng,
) -> Option<Diagram> {
    let out = random_derivation(p, base, out_len, rng);
    let words = p.replay(&out).expect("walk replays");
    let mut steps = out.steps;
    let reached = words.last().unwrap().clone();

    // BFS from the reached word back to the base.
    let mut parents: HashMap<Word, (Word, Step)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([reached.clone()]);
    let mut seen = std::collections::HashSet::from([reached.clone()]);
    let mut found = reached == *base;
    while let Some(w) = queue.pop_front() {
        if found || seen.len() > search_bound {
            break;
        }
        for s in p.applicable_steps(&w) {
            let next = p.apply_step(&w, &s).expect("applicable step applies");
            if seen.insert(next.clone()) {
                parents.insert(next.clone(), (w.clone(), s));
                if next == *base {
                    found = true;
                    break;
                }
                queue.push_back(next);
            }
        }
    }
    if !found {
        return None;
    }
    let mut back = Vec::new();
    let mut cursor = base.clone();
    while cursor != reached {
        let (prev, step) = parents.get(&cursor).expect("traced path exists");
        back.push(*step);
        cursor = prev.clone();
    }
    back.reverse();
    steps.extend(back);
    Some(
        Diagram::from_derivation(
            p,
            &Derivation {
                start: base.clone(),
                steps,
            },
        )
        .expect("closed walk is a valid derivation"),
    )
}

/// A random product of `len` letters `x_i^{±1}` with `i < index_bound`.
pub fn random_normal_form(len: usize, index_bound: u32, rng: &mut impl Rng) -> NormalForm {
    let mut acc = NormalForm::identity();
    for _ in 0..len {
        let g = NormalForm::generator(rng.gen_range(0..index_bound));
        acc = acc.mul(&if rng.gen_bool(0.5) { g.inv() } else { g });
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thompson;

    #[test]
    fn determinism_and_shapes() {
        let p = thompson::presentation();
        let base = p.parse_word("x x").unwrap();
        let mut r1 = seeded(7);
        let mut r2 = seeded(7);
        let d1 = random_diagram(&p, &base, 12, &mut r1);
        let d2 = random_diagram(&p, &base, 12, &mut r2);
        assert_eq!(d1, d2);
        assert_eq!(d1.cells(), 12);
        assert_eq!(d1.top(), &base);
    }

    #[test]
    fn spheres_close_up() {
        let p = thompson::presentation();
        let base = p.parse_word("x").unwrap();
        let mut rng = seeded(11);
        for _ in 0..10 {
            let d = random_sphere(&p, &base, 6, 4000, &mut rng).expect("sphere found");
            assert!(d.is_spherical());
            assert_eq!(d.top(), &base);
        }
    }

    #[test]
    fn normal_form_sampler() {
        let mut rng = seeded(3);
        let f = random_normal_form(12, 3, &mut rng);
        let g = random_normal_form(12, 3, &mut rng);
        assert!(f.mul(&f.inv()).is_identity());
        assert_eq!(f.mul(&g).inv(), g.inv().mul(&f.inv()));
    }
}
