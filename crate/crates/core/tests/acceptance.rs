//! End-to-end acceptance checks, one verdict line per criterion.
//!
//! Runs without the libtest harness so the lines stream directly to the
//! terminal during `cargo test`. Every criterion states its sample sizes
//! and tolerances in its verdict line; the process exits nonzero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use diagram_groups::abelian::{self, MonoidOracle};
use diagram_groups::diagram::Diagram;
use diagram_groups::pl::{self, DyadicPL};
use diagram_groups::presentation::{Presentation, SearchLimits, Word};
use diagram_groups::sampling;
use diagram_groups::squier::{self, BuilderKind};
use diagram_groups::subgroup::{self, Side, ThompsonOps};
use diagram_groups::thompson::{self, NormalForm};
use diagram_groups::wreath::{self, WreathElement};
use rand::Rng;

fn main() {
    let criteria: Vec<(&str, fn() -> String)> = vec![
        ("01 unique reduced form", c01_unique_reduced_form),
        ("02 group axioms and interchange", c02_group_axioms_and_interchange),
        ("03 representation coherence", c03_representation_coherence),
        ("04 cell-count bounds", c04_cell_count_bounds),
        ("05 abelianization kernel", c05_abelianization_kernel),
        ("06 fundamental-group goldens", c06_fundamental_group_goldens),
        ("07 combined-presentation goldens", c07_combined_presentation_goldens),
        ("08 wreath certificates", c08_wreath_certificates),
        ("09 tower quantities", c09_tower_quantities),
        ("10 cyclic-subgroup distortion", c10_cyclic_subgroup_distortion),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let clock = Instant::now();
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(details) => {
                println!(
                    "criterion {name}: PASS ({details}; {:.1}s)",
                    clock.elapsed().as_secs_f64()
                );
            }
            Err(payload) => {
                failures += 1;
                let message = payload
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| payload.downcast_ref::<&str>().copied())
                    .unwrap_or("panic without message");
                println!("criterion {name}: FAIL ({message})");
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}

/// Dipole elimination reaches the same reduced form no matter the order:
/// 500 random diagrams (at most 30 cells) over 5 random small
/// presentations, 10 random removal orders each, byte-identical output.
fn c01_unique_reduced_form() -> String {
    let mut rng = sampling::seeded(0xC1);
    let letters = ["a", "b", "c"];
    let mut presentations = Vec::new();
    while presentations.len() < 5 {
        let n_letters = rng.gen_range(2..=3);
        let alphabet = &letters[..n_letters];
        let mut rels = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let side = |rng: &mut rand_chacha::ChaCha8Rng| -> String {
                let len = rng.gen_range(1..=3);
                (0..len)
                    .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            rels.push(format!("{} = {}", side(&mut rng), side(&mut rng)));
        }
        let text = format!("{} | {}", alphabet.join(" "), rels.join(" , "));
        if let Ok(p) = Presentation::parse(&format!("rand{}", presentations.len()), &text) {
            presentations.push(p);
        }
    }

    let mut diagrams = 0;
    let mut with_dipoles = 0;
    for p in &presentations {
        for _ in 0..100 {
            let start_len = rng.gen_range(1..=4);
            let start = Word(
                (0..start_len)
                    .map(|_| rng.gen_range(0..p.letter_count() as u32))
                    .collect(),
            );
            let cells = rng.gen_range(0..=30);
            let d = sampling::random_diagram(p, &start, cells, &mut rng);
            if !d.dipoles().is_empty() {
                with_dipoles += 1;
            }
            let canonical = d.reduce().to_text();
            for _ in 0..10 {
                let shuffled = d.reduce_with(|dipoles| rng.gen_range(0..dipoles.len()));
                assert_eq!(
                    shuffled.to_text(),
                    canonical,
                    "removal order changed the reduced form of {}",
                    d.to_text()
                );
            }
            diagrams += 1;
        }
    }
    assert!(
        with_dipoles >= 100,
        "sampler too weak: only {with_dipoles} diagrams had a dipole"
    );
    format!(
        "{diagrams} diagrams over 5 presentations x 10 elimination orders, \
         byte-identical reduced text ({with_dipoles} had dipoles); tolerance: exact"
    )
}

/// Composition is a group operation on spherical diagrams and interacts
/// with the sum by the interchange law, on 200 random composable tuples.
fn c02_group_axioms_and_interchange() -> String {
    let p = thompson::presentation();
    let mut rng = sampling::seeded(0xC2);
    let bases: Vec<Word> = ["x", "x x", "x x x"]
        .iter()
        .map(|t| p.parse_word(t).unwrap())
        .collect();
    let mut checked = 0;
    while checked < 200 {
        let u = bases[rng.gen_range(0..bases.len())].clone();
        let v = bases[rng.gen_range(0..bases.len())].clone();
        let sphere = |base: &Word, rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.gen_range(0..=5);
            sampling::random_sphere(&p, base, len, 3000, rng)
        };
        let (Some(d1), Some(d3), Some(d5)) = (
            sphere(&u, &mut rng),
            sphere(&u, &mut rng),
            sphere(&u, &mut rng),
        ) else {
            continue;
        };
        let (Some(d2), Some(d4)) = (sphere(&v, &mut rng), sphere(&v, &mut rng)) else {
            continue;
        };

        // Associativity holds on the nose in the canonical form.
        assert_eq!(
            d1.compose(&d3).unwrap().compose(&d5).unwrap(),
            d1.compose(&d3.compose(&d5).unwrap()).unwrap()
        );
        // Identity element.
        let eps = Diagram::identity(&p, &u);
        assert_eq!(eps.compose(&d1).unwrap(), d1);
        assert_eq!(d1.compose(&eps).unwrap(), d1);
        // Inverses cancel after reduction.
        assert!(d1.compose(&d1.inverse()).unwrap().reduce().is_trivial());
        assert!(d1.inverse().compose(&d1).unwrap().reduce().is_trivial());
        // Interchange law.
        let lhs = d1.sum(&d2).unwrap().compose(&d3.sum(&d4).unwrap()).unwrap();
        let rhs = d1.compose(&d3).unwrap().sum(&d2.compose(&d4).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "interchange law failed");
        checked += 1;
    }
    format!(
        "{checked} random spherical tuples on bases of width 1-3: associativity, \
         identity, inverses, interchange; tolerance: zero failures"
    )
}

/// Words of length at most 4 in the two standard generators induce the
/// same equivalence relation in all three element representations, and the
/// defining conjugation rule holds in each.
fn c03_representation_coherence() -> String {
    let p = thompson::presentation();
    let base = p.parse_word("x").unwrap();

    // Generator images in each representation, with inverses.
    let nf_gen: Vec<NormalForm> = (0u32..2).map(NormalForm::generator).collect();
    let d_gen: Vec<Diagram> = (0u32..2)
        .map(|i| thompson::generator_diagram(i, 1).unwrap())
        .collect();
    let pl_gen: Vec<DyadicPL> = nf_gen.iter().map(pl::pl_from_nf).collect();

    // All words of length <= 4 over {x0, x0^-1, x1, x1^-1}.
    let alphabet: Vec<(usize, bool)> = vec![(0, false), (0, true), (1, false), (1, true)];
    let mut words: Vec<Vec<(usize, bool)>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<(usize, bool)>> = vec![Vec::new()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &alphabet {
                let mut longer = w.clone();
                longer.push(g);
                next.push(longer);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    assert_eq!(words.len(), 341);

    let elements: Vec<(NormalForm, Diagram, DyadicPL)> = words
        .iter()
        .map(|w| {
            let mut nf = NormalForm::identity();
            let mut d = Diagram::identity(&p, &base);
            let mut m = DyadicPL::identity();
            for &(i, inverted) in w {
                if inverted {
                    nf = nf.mul(&nf_gen[i].inv());
                    d = d.compose(&d_gen[i].inverse()).unwrap();
                    m = m.compose(&pl_gen[i].inverse());
                } else {
                    nf = nf.mul(&nf_gen[i]);
                    d = d.compose(&d_gen[i]).unwrap();
                    m = m.compose(&pl_gen[i]);
                }
            }
            (nf, d.reduce(), m)
        })
        .collect();

    let mut pairs = 0usize;
    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            let nf_eq = elements[i].0 == elements[j].0;
            let d_eq = elements[i].1 == elements[j].1;
            let pl_eq = elements[i].2 == elements[j].2;
            assert_eq!(nf_eq, d_eq, "normal form vs diagram on pair ({i}, {j})");
            assert_eq!(nf_eq, pl_eq, "normal form vs PL map on pair ({i}, {j})");
            pairs += 1;
        }
    }

    // x_j conjugated by x_i equals x_{j+1} for 0 <= i < j <= 5, three ways.
    let mut rules = 0;
    for i in 0..5u32 {
        for j in (i + 1)..=5 {
            let (xi, xj) = (NormalForm::generator(i), NormalForm::generator(j));
            let conj = xi.inv().mul(&xj).mul(&xi);
            assert_eq!(conj, NormalForm::generator(j + 1), "normal form rule ({i},{j})");

            let di = thompson::generator_diagram(i, 1).unwrap();
            let dj = thompson::generator_diagram(j, 1).unwrap();
            let d_conj = di.inverse().compose(&dj).unwrap().compose(&di).unwrap();
            assert_eq!(
                d_conj.reduce(),
                thompson::generator_diagram(j + 1, 1).unwrap().reduce(),
                "diagram rule ({i},{j})"
            );

            let (mi, mj) = (pl::pl_from_nf(&xi), pl::pl_from_nf(&xj));
            let m_conj = mi.inverse().compose(&mj).compose(&mi);
            assert_eq!(
                m_conj,
                pl::pl_from_nf(&NormalForm::generator(j + 1)),
                "PL rule ({i},{j})"
            );
            rules += 1;
        }
    }
    format!(
        "341 words, {pairs} pairs agree across normal form/diagram/PL; \
         {rules} conjugation rules hold in all three; tolerance: exact"
    )
}

/// Cell counts of the width-3 diagram representation are within the stated
/// linear bounds of word length, and nearby widths differ by at most the
/// conjugation overhead.
fn c04_cell_count_bounds() -> String {
    let ball6 = thompson::ball(6);
    for (g, len) in &ball6 {
        let c3 = thompson::cell_count(g, 3).unwrap();
        assert!(
            *len <= 3 * c3,
            "lower bound failed at {g}: |g| = {len}, cells = {c3}"
        );
        assert!(
            c3 <= 2 * len,
            "upper bound failed at {g}: |g| = {len}, cells = {c3}"
        );
    }
    let ball4 = thompson::ball(4);
    for (g, _) in &ball4 {
        let c3 = thompson::cell_count(g, 3).unwrap() as i64;
        for k in 1..=6usize {
            let ck = thompson::cell_count(g, k).unwrap() as i64;
            let slack = 2 * (k as i64 - 3).abs();
            assert!(
                (ck - c3).abs() <= slack,
                "width step failed at {g}: width {k} has {ck} cells, width 3 has {c3}"
            );
        }
    }
    format!(
        "|g|/3 <= cells_3(g) <= 2|g| on all {} elements of the radius-6 ball; \
         |cells_k - cells_3| <= 2|k-3| for k = 1..6 on the radius-4 ball ({} elements); \
         tolerance: exact",
        ball6.len(),
        ball4.len()
    )
}

/// The abelianization vanishes exactly on elements acting with slope 1 at
/// both endpoints, and the letter-collapsing relabeling lands in its
/// kernel while preserving reducedness.
fn c05_abelianization_kernel() -> String {
    let ball5 = thompson::ball(5);
    for (g, _) in &ball5 {
        let map = pl::pl_from_nf(g);
        let breaks = map.breakpoints();
        let vals = map.values();
        let at_zero = vals[1].ratio_pow2(&breaks[1]) == Some(0);
        let n = breaks.len();
        let left = &breaks[n - 1] - &breaks[n - 2];
        let right = &vals[n - 1] - &vals[n - 2];
        let at_one = right.ratio_pow2(&left) == Some(0);
        assert_eq!(
            abelian::in_derived_subgroup(g),
            at_zero && at_one,
            "kernel test disagrees with endpoint slopes at {g}"
        );
    }

    let q = abelian::derived_subgroup_presentation(16);
    let base = abelian::derived_subgroup_base(&q);
    let oracle = MonoidOracle::thompson();
    let mut rng = sampling::seeded(0xC5);
    let mut spheres = 0;
    let mut nontrivial = 0;
    while spheres < 100 {
        let out_len = rng.gen_range(1..=8);
        let Some(d) = sampling::random_sphere(&q, &base, out_len, 4000, &mut rng) else {
            continue;
        };
        let d = d.reduce();
        let image = abelian::relabel_to_thompson(&d).unwrap();
        assert!(image.is_reduced(), "relabeling must preserve reducedness");
        assert_eq!(image.cells(), d.cells(), "relabeling must preserve cells");
        assert!(
            abelian::rho(&image, &oracle).unwrap().is_zero(),
            "relabeled sphere has nonzero abelianization"
        );
        if !d.is_trivial() {
            nontrivial += 1;
        }
        spheres += 1;
    }
    assert!(
        nontrivial >= 20,
        "sampler too weak: only {nontrivial} nontrivial spheres"
    );
    format!(
        "kernel = slope-1-at-both-endpoints on all {} elements of the radius-5 ball; \
         100 random spheres over the two-family presentation ({nontrivial} nontrivial) \
         relabel to reduced kernel elements; tolerance: exact",
        ball5.len()
    )
}

/// Fundamental groups of the bounded rewriting complexes match the known
/// answers, and every emitted square's two boundary paths give equal
/// diagrams.
fn c06_fundamental_group_goldens() -> String {
    // Iterated-power scaffold: a path graph; trivial fundamental group.
    let (p8, base8) = squier::named_builder(BuilderKind::DirectPower).unwrap();
    let k8 = squier::build_component(
        &p8,
        &base8,
        SearchLimits {
            max_word_len: 11,
            max_visited: 10_000,
        },
    );
    assert_eq!(k8.vertices().len(), 11, "expected the 11-vertex path");
    assert!(k8.two_cells().is_empty());
    assert!(k8.pi1_presentation(false).generators().is_empty());
    assert!(k8.pi1_presentation(true).is_trivial_group());

    // Wreath scaffold: free of rank 1 at every truncation depth 1..=8.
    let (pw, basew) = squier::named_builder(BuilderKind::WreathWithZ).unwrap();
    for depth in 1..=8usize {
        let k = squier::build_component(
            &pw,
            &basew,
            SearchLimits {
                max_word_len: depth + 2,
                max_visited: 10_000,
            },
        );
        let out = k.pi1_presentation(true);
        assert!(out.relators().is_empty(), "depth {depth} left relators");
        assert_eq!(
            out.free_rank(),
            Some(1),
            "depth {depth} is not free of rank 1"
        );
    }

    // No relations: a single vertex.
    let pair = Presentation::parse("pair", "x y |").unwrap();
    let kp = squier::build_component(
        &pair,
        &pair.parse_word("x y").unwrap(),
        SearchLimits::default(),
    );
    assert_eq!(kp.vertices().len(), 1);
    assert!(kp.pos_edges().is_empty());
    assert!(!kp.truncated());
    assert!(kp.pi1_presentation(true).is_trivial_group());

    // Every 2-cell's two boundary paths give equal diagrams.
    let mut cells_checked = 0;
    let t = thompson::presentation();
    let kt = squier::build_component(
        &t,
        &t.parse_word("x x").unwrap(),
        SearchLimits {
            max_word_len: 6,
            max_visited: 10_000,
        },
    );
    let kw = squier::build_component(
        &pw,
        &basew,
        SearchLimits {
            max_word_len: 10,
            max_visited: 10_000,
        },
    );
    for k in [&kt, &kw] {
        for (i, cell) in k.two_cells().iter().enumerate() {
            let (l1, _) = &k.presentation().relations()[cell.rel1];
            let (l2, _) = &k.presentation().relations()[cell.rel2];
            let corner = cell
                .left
                .concat(l1)
                .concat(&cell.mid)
                .concat(l2)
                .concat(&cell.right);
            let (first, second) = k.two_cell_boundaries(i);
            let d1 = k.path_to_diagram(&corner, &first).unwrap();
            let d2 = k.path_to_diagram(&corner, &second).unwrap();
            assert_eq!(d1, d2, "boundary paths of 2-cell {i} differ");
            cells_checked += 1;
        }
    }
    assert!(cells_checked > 0, "no 2-cells were emitted");
    format!(
        "path scaffold trivial, wreath scaffold free of rank 1 at depths 1-8, \
         relation-free base a single vertex; {cells_checked} square boundaries \
         give equal diagrams; tolerance: exact"
    )
}

/// The combined-presentation builder reproduces the quoted outputs
/// verbatim.
fn c07_combined_presentation_goldens() -> String {
    // The quoted input writes the scaffold relations long side first.
    let q = Presentation::parse("wreath_z", "x y z | x y = x , y z = z").unwrap();
    let base = q.parse_word("x z").unwrap();
    let fiber = Presentation::parse("fiber", "u | u u = u").unwrap();
    let fiber_base = fiber.parse_word("u").unwrap();
    let family = vec![("y".to_string(), fiber, fiber_base)];
    let combined = squier::diagram_product_presentation(&q, &family).unwrap();
    assert_eq!(
        combined.to_text(),
        "x y z a u | x y = x , y z = z , y = a u a , u u = u"
    );
    // The scaffold base survives letter-for-letter in the output.
    assert_eq!(combined.parse_word("x z").unwrap().len(), 2);
    assert_eq!(q.display_word(&base), "x z");

    let (big, big_base) = squier::named_builder(BuilderKind::BigO).unwrap();
    assert_eq!(
        big.to_text(),
        "x y p q r yb z | x = x y p , z = r yb z , p y q = q yb r"
    );
    assert_eq!(big.display_word(&big_base), "x y q yb z");
    "wreath-scaffold attachment and sandwich scaffold reproduce the quoted \
     presentations byte-for-byte; tolerance: exact"
        .to_string()
}

/// The wreath-product certificates pass at depth 4 for both constructions,
/// and the two one-sided embeddings have commuting images.
fn c08_wreath_certificates() -> String {
    // Direct construction over the one-relation presentation.
    let p = thompson::presentation();
    let x = p.parse_word("x").unwrap();
    let delta = subgroup::nontrivial_sphere_search(&p, &x, &SearchLimits::default())
        .expect("nontrivial sphere exists");
    let gamma1 = Diagram::one_cell(&p, 0, false);
    let gamma2 = Diagram::one_cell(&p, 0, true);
    let (a, b) = subgroup::zwrz_generators(&p, &x, &x, &x, &delta, &gamma1, &gamma2).unwrap();
    let report = subgroup::verify_zwrz(&a, &b, 4).unwrap();
    assert!(report.passed(), "direct construction failed:\n{report}");

    // The explicit normal-form pair.
    let a_nf = NormalForm::parse("x1 x2 x1^-2").unwrap();
    let b_nf = NormalForm::parse("x0").unwrap();
    let ad = thompson::nf_to_diagram(&a_nf, 1).unwrap();
    let bd = thompson::nf_to_diagram(&b_nf, 1).unwrap();
    let report = subgroup::verify_zwrz(&ad, &bd, 4).unwrap();
    assert!(report.passed(), "normal-form pair failed:\n{report}");

    // Images of the two one-sided embeddings commute pairwise on the
    // radius-3 ball.
    let ball3 = thompson::ball(3);
    let lefts: Vec<NormalForm> = ball3
        .iter()
        .map(|(g, _)| subgroup::ff_embed(g, Side::Left))
        .collect();
    let rights: Vec<NormalForm> = ball3
        .iter()
        .map(|(g, _)| subgroup::ff_embed(g, Side::Right))
        .collect();
    let mut pairs = 0;
    for l in &lefts {
        for r in &rights {
            assert_eq!(l.mul(r), r.mul(l), "images failed to commute");
            pairs += 1;
        }
    }
    format!(
        "depth-4 certificates pass for the diagram construction and the \
         normal-form pair; {pairs} embedded pairs commute on the radius-3 ball; \
         tolerance: exact"
    )
}

/// The counting homomorphism takes the predicted values on the tower
/// elements, is conjugation-invariant, and the relator-cost and
/// word-length formulas hold.
fn c09_tower_quantities() -> String {
    for k in 1..=4usize {
        for n in 1..=5i64 {
            let g = wreath::g_k_n(k, n).unwrap();
            assert_eq!(
                wreath::phi_k(&g).unwrap(),
                n.pow(k as u32),
                "phi_{k} value at n = {n}"
            );
        }
    }

    let mut rng = sampling::seeded(0xC9);
    for k in 1..=3usize {
        let g = wreath::g_k_n(k, 1).unwrap();
        for _ in 0..50 {
            let word: Vec<(usize, bool)> = (0..8)
                .map(|_| (rng.gen_range(1..=k), rng.gen_bool(0.5)))
                .collect();
            let h = wreath::eval_word(k, &word).unwrap();
            let conj = g.conjugate(&h).unwrap();
            assert_eq!(
                wreath::phi_k(&conj).unwrap(),
                1,
                "phi_{k} not conjugation-invariant"
            );
        }
    }

    let a = WreathElement::generator(2, 1).unwrap();
    let b = WreathElement::generator(2, 2).unwrap();
    for n in 1..=6i64 {
        let g = wreath::commutator(&a.pow(n), &b.pow(n)).unwrap();
        assert_eq!(
            wreath::relator_cost_zwrz(&g).unwrap(),
            (n * n) as u64,
            "relator cost at n = {n}"
        );
    }

    for d in 1..=4usize {
        for n in 1..=5i64 {
            let word = wreath::g_k_word(d, n);
            let bound = (3 * (1usize << (d - 1)) - 2) * n as usize;
            assert!(
                word.len() <= bound,
                "word for level {d}, n = {n} has length {} > {bound}",
                word.len()
            );
            assert_eq!(
                wreath::eval_word(d, &word).unwrap(),
                wreath::g_k_n(d, n).unwrap(),
                "word does not evaluate to the tower element"
            );
        }
    }
    "phi_k(g_k(n)) = n^k for k <= 4, n <= 5; conjugation-invariance on 150 \
     random conjugators; relator cost n^2 for n <= 6; word length within \
     (3*2^(d-1) - 2)n for d <= 4; tolerance: exact"
        .to_string()
}

/// The cyclic subgroup generated by the first generator is undistorted at
/// desk scale: its profile is exactly linear for n <= 6.
fn c10_cyclic_subgroup_distortion() -> String {
    let ops = ThompsonOps;
    let x = vec![NormalForm::generator(0)];
    let y = vec![NormalForm::generator(0), NormalForm::generator(1)];
    let table = subgroup::distortion_profile(&ops, &x, &y, 6, 8, 100_000);
    for (i, &(n, d, _)) in table.rows.iter().enumerate() {
        assert_eq!(n, i + 1);
        assert_eq!(d, n as u64, "profile is nonlinear at n = {n}: disto = {d}");
    }
    assert_eq!(table.rows.len(), 6);
    "distortion lower-bound profile of the cyclic subgroup is exactly n for \
     n <= 6 (ambient ball radius 6, subgroup ball radius 8); tolerance: exact"
        .to_string()
}
