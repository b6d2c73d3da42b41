use ddg_core::algebra::{ddg_spectrum, p_rank, srg_spectrum, Eigenvalue};
use ddg_core::construct::{
    class_count, expected_params, BijectionFamily, Construction, ConstructionSpec, Expected, Selector,
};
use ddg_core::designs::{affine_geometry_design, verify_affine};
use ddg_core::gf::FiniteField;
use ddg_core::graph::{fixture_graph, verify_ddg, verify_srg, Graph, Partition, FIXTURE_NAMES};
use ddg_core::iso::canonical_form;
use ddg_core::latin::{cayley_table, derived_square, load_fixture, Square};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn selector_for(which: Construction, q: usize, d: u32) -> &'static str {
    match (which, q, d) {
        (Construction::One, 2, 2) | (Construction::Two, 2, 2) => "c3",
        (Construction::Two, 3, 2) => "c4",
        (Construction::One, 3, 2) | (Construction::Three, 2, 2) | (Construction::Four, 2, 2) => "klein",
        (Construction::Three, 3, 2) => "c5",
        (Construction::One, 2, 3) | (Construction::Two, 2, 3) => "ls7_1",
        (Construction::Three, 2, 3) | (Construction::Four, 2, 3) => "abelian8_c2xc2xc2",
        _ => unreachable!("no selector for {which} at ({q}, {d})"),
    }
}

fn random_perm(len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}

/// A construction at `(q, d)` with random numberings, bijections and, for
/// construction 2, a random deleted row and mask.
fn random_spec(which: Construction, q: usize, d: u32, seed: u64) -> ConstructionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = class_count(q, d);
    let source = load_fixture(selector_for(which, q, d)).unwrap();
    let selector = if which == Construction::Two {
        let h = (seed as usize) % source.side();
        let mask = (0..source.side() - 1).map(|_| rand::Rng::random::<bool>(&mut rng)).collect();
        Selector::Derived { source, h, mask }
    } else {
        Selector::Square(source)
    };
    let mut spec = ConstructionSpec::standard(which, q, d, selector).unwrap();
    let designs = spec.designs.len();
    for i in 0..designs {
        let numbering = random_perm(m, &mut rng);
        spec.renumber(i, &numbering).unwrap();
    }
    spec.bijections = BijectionFamily::random(designs, q, &mut rng);
    spec
}

fn certified(which: Construction, g: &Graph) -> (u64, u64, u64, u64, u64, u64) {
    match which {
        Construction::Three | Construction::Four if verify_srg(g).is_ok() => verify_srg(g).unwrap().as_ddg().tuple(),
        _ => verify_ddg(g, None).unwrap().params.tuple(),
    }
}

fn check_construction(which: Construction, q: usize, d: u32, seed: u64) {
    let g = random_spec(which, q, d, seed).build().unwrap();
    let expected = expected_params(which, q as u64, d).unwrap();
    assert_eq!(certified(which, &g), expected.as_ddg().tuple(), "{which} at ({q}, {d}), seed {seed}");
    if let Expected::Srg(p) = expected {
        assert_eq!(verify_srg(&g).unwrap(), p);
    }
}

fn relabel(g: &Graph, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g.permuted(&random_perm(g.order(), &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn small_constructions_keep_parameters_under_any_numbering_and_bijections(seed in any::<u64>(), pick in 0usize..7) {
        let (which, q, d) = [
            (Construction::One, 2, 2),
            (Construction::One, 3, 2),
            (Construction::Two, 2, 2),
            (Construction::Two, 3, 2),
            (Construction::Three, 2, 2),
            (Construction::Three, 3, 2),
            (Construction::Four, 2, 2),
        ][pick];
        check_construction(which, q, d, seed);
    }

    #[test]
    fn derived_squares_stay_symmetric(factor in 2usize..9, h in 0usize..8, bits in any::<u8>()) {
        let source = cayley_table(&[factor]).unwrap();
        let h = h % factor;
        let mask: Vec<bool> = (0..factor - 1).map(|i| bits >> i & 1 == 1).collect();
        let derived = derived_square(&source, h, &mask).unwrap();
        prop_assert!(derived.is_symmetric());
        prop_assert_eq!(derived.side(), factor - 1);
        prop_assert_eq!(derived.symbol_count(), factor);
        for i in 0..factor - 1 {
            let row: Vec<u32> = (0..factor - 1).filter(|&j| j != i).map(|j| derived.get(i, j)).collect();
            let mut sorted = row.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), row.len());
        }
    }

    #[test]
    fn p_rank_ignores_relabelling(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let g = random_spec(Construction::One, 3, 2, seed).build().unwrap();
        prop_assert_eq!(p_rank(&g, p).unwrap(), p_rank(&relabel(&g, seed ^ 1), p).unwrap());
    }

    #[test]
    fn canonical_form_ignores_relabelling(seed in any::<u64>(), pick in 0usize..6) {
        let g = fixture_graph(FIXTURE_NAMES[pick]).unwrap();
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&relabel(&g, seed)).unwrap());
    }

    #[test]
    fn discovered_partition_follows_relabelling(seed in any::<u64>()) {
        let g = random_spec(Construction::One, 2, 2, seed).build().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = random_perm(g.order(), &mut rng);
        let h = g.permuted(&perm);
        let cert = verify_ddg(&h, None).unwrap();
        let origin = g.origin().unwrap();
        let mut moved = vec![0u32; g.order()];
        for (x, &y) in perm.iter().enumerate() {
            moved[y] = origin[x];
        }
        prop_assert_eq!(cert.partition, Partition::from_labels(&moved));
    }

    #[test]
    fn constant_diagonal_cayley_tables_pass_construction_four(seed in any::<u64>()) {
        let spec = {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = ConstructionSpec::standard(Construction::Four, 2, 2, Selector::Square(load_fixture("klein").unwrap())).unwrap();
            s.bijections = BijectionFamily::random(4, 2, &mut rng);
            s
        };
        let g = spec.build().unwrap();
        prop_assert_eq!(verify_srg(&g).unwrap().tuple(), (16, 10, 6, 6));
    }

    #[test]
    fn field_axioms_hold_for_random_triples(pick in 0usize..14, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49][pick];
        let f = FiniteField::new(q).unwrap();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn larger_constructions_keep_parameters(seed in any::<u64>(), pick in 0usize..4) {
        let (which, q, d) = [
            (Construction::One, 2, 3),
            (Construction::Two, 2, 3),
            (Construction::Three, 2, 3),
            (Construction::Four, 2, 3),
        ][pick];
        check_construction(which, q, d, seed);
    }
}

/// Multiplicities of `±sqrt(s)` in a spectrum, merged when `s = 0`.
fn pair_total(spectrum: &ddg_core::algebra::Spectrum, s: i64) -> u64 {
    let plus = Eigenvalue::sqrt(s as u64, false);
    let minus = Eigenvalue::sqrt(s as u64, true);
    if plus == minus {
        spectrum.multiplicity(plus)
    } else {
        spectrum.multiplicity(plus) + spectrum.multiplicity(minus)
    }
}

#[test]
fn predicted_spectra_satisfy_the_sum_rules() {
    for which in [Construction::One, Construction::Two, Construction::Three, Construction::Four] {
        for (q, d) in [(2u64, 2u32), (3, 2), (2, 3), (4, 2), (5, 2), (3, 3), (2, 4)] {
            let expected = expected_params(which, q, d).unwrap();
            let p = expected.as_ddg();
            assert!(p.satisfies_counting_identity(), "{which} {q} {d}");
            let odd_side = which == Construction::Four && (class_count(q as usize, d) + 1) % 2 == 1;
            if odd_side {
                // every symbol sits on the diagonal of an odd symmetric Latin square
                let Expected::Srg(s) = expected else { panic!("construction 4 is strongly regular") };
                assert!(srg_spectrum(&s).is_err(), "{which} {q} {d}");
                continue;
            }
            let candidates = match expected {
                Expected::Srg(s) => vec![srg_spectrum(&s).unwrap()],
                Expected::Ddg(_) => ddg_spectrum(&p).unwrap(),
            };
            assert!(!candidates.is_empty());
            for s in &candidates {
                assert_eq!(s.total(), p.v, "{which} {q} {d} {s}");
                assert!(s.trace_is_zero(), "{which} {q} {d} {s}");
                assert_eq!(s.multiplicity(Eigenvalue::integer(p.k as i64)), 1);
                let (f, g) = (p.theta_f_squared(), p.theta_g_squared());
                if p.m > 1 && f != g && f > 0 && g > 0 {
                    assert_eq!(pair_total(s, f), p.m * (p.n - 1), "{which} {q} {d} {s}");
                    assert_eq!(pair_total(s, g), p.m - 1, "{which} {q} {d} {s}");
                }
            }
        }
    }
}

#[test]
fn every_generated_affine_geometry_satisfies_the_axioms() {
    for (q, d) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2), (8, 2), (9, 2)] {
        let field = FiniteField::new(q).unwrap();
        let design = affine_geometry_design(&field, d).unwrap();
        let params = verify_affine(&design).unwrap();
        assert_eq!(params.m as usize, class_count(q as usize, d));
    }
}

#[test]
fn field_tables_are_exhaustively_valid_up_to_sixteen() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = FiniteField::new(q).unwrap();
        for a in 0..q {
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}

#[test]
fn fixture_squares_round_trip_through_text() {
    for name in ddg_core::latin::FIXTURE_SQUARES {
        let s = load_fixture(name).unwrap();
        assert_eq!(Square::from_text(&s.to_text()).unwrap(), s, "{name}");
    }
}
