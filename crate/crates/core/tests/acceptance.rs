//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Every check is exact. Wall-clock budgets are pinned per criterion and are
//! part of the pass condition. Criteria listed in [`UNATTAINABLE`] require a
//! parameter tuple that no graph can have; they are run as stated, reported
//! as FAIL, and only make the run exit non-zero if they unexpectedly pass.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ddg_core::algebra::{
    certify_spectrum, ddg_spectrum, hadamard_to_srg, p_rank, polynomial_nullity, srg_spectrum, srg_to_hadamard,
    Eigenvalue, HadamardMatrix, Spectrum,
};
use ddg_core::construct::{Construction, ConstructionSpec, Selector};
use ddg_core::designs::{affine_geometry_design, hadamard_3_design, verify_affine};
use ddg_core::gf::{prime_power, FiniteField};
use ddg_core::graph::{
    fixture_graph, intersection_array, verify_ddg, verify_srg, DdgParams, Graph, FIXTURE_NAMES,
};
use ddg_core::iso::{are_isomorphic, canonical_form, classify};
use ddg_core::latin::load_fixture;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose required tuple `(56,28,14,12,7,8)` fails the walk-count
/// identity `k² = k + λ1(n−1) + λ2(v−n)`.
const UNATTAINABLE: &[u32] = &[1, 8];

const SEED: u64 = 0x5eed_0d06;

const REQUIRED_C1: [(u64, u32, &str, (u64, u64, u64, u64, u64, u64)); 3] = [
    (2, 2, "c3", (12, 6, 2, 3, 3, 4)),
    (3, 2, "c4", (36, 24, 15, 16, 4, 9)),
    (2, 3, "ls7_1", (56, 28, 14, 12, 7, 8)),
];

const REQUIRED_C2: [(u64, u32, &str, (u64, u64, u64, u64, u64, u64)); 3] = [
    (2, 2, "c3", (8, 4, 0, 2, 4, 2)),
    (3, 2, "c4", (27, 18, 9, 12, 9, 3)),
    (2, 3, "ls7_1", (48, 24, 8, 12, 12, 4)),
];

const REQUIRED_SRG: [(Construction, u64, u32, &str, (u64, u64, u64, u64)); 5] = [
    (Construction::Three, 2, 2, "klein", (16, 6, 2, 2)),
    (Construction::Three, 2, 3, "abelian8_c8", (64, 28, 12, 12)),
    (Construction::Four, 2, 2, "klein", (16, 10, 6, 6)),
    (Construction::Four, 2, 3, "abelian8_c2xc2xc2", (64, 36, 20, 20)),
    (Construction::Four, 3, 3, "c14", (378, 261, 180, 180)),
];

const ABELIAN8: [&str; 3] = ["abelian8_c8", "abelian8_c4xc2", "abelian8_c2xc2xc2"];
const LS7: [&str; 7] = ["ls7_1", "ls7_2", "ls7_3", "ls7_4", "ls7_5", "ls7_6", "ls7_7"];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn square_spec(which: Construction, q: u64, d: u32, latin: &str) -> ConstructionSpec {
    let square = load_fixture(latin).unwrap_or_else(|e| panic!("fixture {latin}: {e}"));
    ConstructionSpec::standard(which, q as usize, d, Selector::Square(square)).expect("standard spec")
}

fn c1(q: u64, d: u32, latin: &str) -> Graph {
    square_spec(Construction::One, q, d, latin).build().expect("construction 1")
}

fn c2(q: u64, d: u32, latin: &str, h: usize, mask: Vec<bool>) -> Graph {
    let source = load_fixture(latin).unwrap_or_else(|e| panic!("fixture {latin}: {e}"));
    ConstructionSpec::standard(Construction::Two, q as usize, d, Selector::Derived { source, h, mask })
        .and_then(|s| s.build())
        .expect("construction 2")
}

fn c2_default(q: u64, d: u32, latin: &str) -> Graph {
    let side = load_fixture(latin).unwrap().side();
    c2(q, d, latin, side - 1, vec![false; side - 1])
}

fn srg_graph(which: Construction, q: u64, d: u32, latin: &str) -> Graph {
    square_spec(which, q, d, latin).build().expect("SRG construction")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() < budget_s
}

fn criterion_1() -> Outcome {
    let mut pass = true;
    let mut parts = vec![];
    for (q, d, latin, required) in REQUIRED_C1 {
        let (cert, t) = timed(|| verify_ddg(&c1(q, d, latin), None));
        let got = cert.as_ref().map(|c| c.params.tuple());
        let ok = got.as_ref() == Ok(&required) && within(t, 1.0);
        pass &= ok;
        let got = got.map(|t| format!("{t:?}")).unwrap_or_else(|e| e.to_string());
        let note = if DdgParams::new(required.0, required.1, required.2, required.3, required.4, required.5)
            .satisfies_counting_identity()
        {
            ""
        } else {
            " (required tuple violates the walk-count identity)"
        };
        parts.push(format!("q={q},d={d}: {got} vs {required:?}{note} {:.1} ms", t.as_secs_f64() * 1e3));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut parts = vec![];
    for (q, d, latin, required) in REQUIRED_C2 {
        let (cert, t) = timed(|| verify_ddg(&c2_default(q, d, latin), None));
        let (ok, got) = match cert {
            Ok(c) => {
                let n = c.params.n;
                let sized = n == q.pow(d - 1) && n != q.pow(d);
                (c.params.tuple() == required && sized, format!("{:?}, class size {n}", c.params.tuple()))
            }
            Err(e) => (false, e.to_string()),
        };
        pass &= ok && within(t, 1.0);
        parts.push(format!("q={q},d={d}: {got} {:.1} ms", t.as_secs_f64() * 1e3));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let (result, t) = timed(|| {
        let a = canonical_form(&c1(2, 2, "c3")).unwrap() == canonical_form(&fixture_graph("octahedron_line").unwrap()).unwrap();
        let b = canonical_form(&c2_default(2, 2, "c3")).unwrap()
            == canonical_form(&fixture_graph("k4_cartesian_k2").unwrap()).unwrap();
        (a, b)
    });
    Outcome::new(
        result.0 && result.1 && within(t, 1.0),
        format!("C1 ≅ L(octahedron): {}; C2 ≅ K4□K2: {}; {:.1} ms", result.0, result.1, t.as_secs_f64() * 1e3),
    )
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = vec![];
    for (which, q, d, latin, required) in REQUIRED_SRG {
        let (got, t) = timed(|| verify_srg(&srg_graph(which, q, d, latin)).map(|p| p.tuple()));
        let budget = if q == 3 { 60.0 } else { 1.0 };
        pass &= got.as_ref() == Ok(&required) && within(t, budget);
        let shown = got.map(|t| format!("{t:?}")).unwrap_or_else(|e| e.to_string());
        parts.push(format!("C{which} q={q},d={d}: {shown} {:.1} ms", t.as_secs_f64() * 1e3));
    }
    Outcome::new(pass, parts.join("; "))
}

/// Sum of multiplicities of `±√s`.
fn pair_total(s: &Spectrum, sq: i64) -> u64 {
    let (plus, minus) = (Eigenvalue::sqrt(sq as u64, false), Eigenvalue::sqrt(sq as u64, true));
    s.multiplicity(plus) + if plus == minus { 0 } else { s.multiplicity(minus) }
}

fn spectrum_check(g: &Graph, srg: bool) -> Result<String, String> {
    if srg {
        let p = verify_srg(g).map_err(|e| e.to_string())?;
        let s = certify_spectrum(g, &[srg_spectrum(&p).map_err(|e| e.to_string())?]).map_err(|e| e.to_string())?;
        return Ok(format!("{}: {s}", g.order()));
    }
    let p = verify_ddg(g, None).map_err(|e| e.to_string())?.params;
    let s = certify_spectrum(g, &ddg_spectrum(&p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let (f, gg) = (p.theta_f_squared(), p.theta_g_squared());
    if f != gg {
        if pair_total(&s, f) != p.m * (p.n - 1) || pair_total(&s, gg) != p.m - 1 {
            return Err(format!("{}: sum rules fail for {s}", g.order()));
        }
        for (sq, want) in [(f, p.m * (p.n - 1)), (gg, p.m - 1)] {
            let nullity = polynomial_nullity(g, -sq, 0, 1) as u64;
            if nullity != want {
                return Err(format!("{}: nullity of A²−{sq}I is {nullity}, expected {want}", g.order()));
            }
        }
    }
    Ok(format!("{}: {s}", g.order()))
}

fn criterion_5() -> Outcome {
    let (results, t) = timed(|| {
        let mut out = vec![];
        for (q, d, latin, _) in REQUIRED_C1 {
            out.push(spectrum_check(&c1(q, d, latin), false));
        }
        for (q, d, latin, _) in REQUIRED_C2 {
            out.push(spectrum_check(&c2_default(q, d, latin), false));
        }
        for (which, q, d, latin, _) in REQUIRED_SRG {
            out.push(spectrum_check(&srg_graph(which, q, d, latin), true));
        }
        out
    });
    let pass = results.iter().all(Result::is_ok) && within(t, 120.0);
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let detail = if failures.is_empty() {
        format!("{} graphs, all multiplicities exact; {:.1} ms", results.len(), t.as_secs_f64() * 1e3)
    } else {
        format!("{failures:?}")
    };
    Outcome::new(pass, detail)
}

fn criterion_6() -> Outcome {
    let (result, t) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut masks: Vec<u32> = (0..64).collect();
        masks.shuffle(&mut rng);
        let tuples: Vec<_> = masks[..8]
            .iter()
            .map(|&bits| {
                let mask = (0..6).map(|i| bits >> i & 1 == 1).collect();
                verify_ddg(&c2(2, 3, "ls7_1", 6, mask), None).map(|c| c.params.tuple())
            })
            .collect();
        (masks[..8].to_vec(), tuples)
    });
    let (masks, tuples) = result;
    let first = tuples[0].clone();
    let same = first.is_ok() && tuples.iter().all(|t| *t == first);
    let required = Ok((48, 24, 8, 12, 12, 4));
    Outcome::new(
        same && first == required && within(t, 10.0),
        format!("masks {masks:?} at h=7 all give {first:?}; {:.1} ms", t.as_secs_f64() * 1e3),
    )
}

fn criterion_7() -> Outcome {
    let (result, t) = timed(|| {
        let twos: Vec<usize> =
            ABELIAN8.iter().map(|l| p_rank(&srg_graph(Construction::Three, 2, 3, l), 2).unwrap()).collect();
        let three = p_rank(&srg_graph(Construction::Four, 3, 3, "c14"), 3).unwrap();
        (twos, three)
    });
    let (twos, three) = result;
    let pass = twos.iter().all(|r| [8, 10, 12, 14].contains(r)) && [65, 66].contains(&three) && within(t, 120.0);
    Outcome::new(pass, format!("2-ranks {twos:?}, 3-rank {three}; {:.1} ms", t.as_secs_f64() * 1e3))
}

fn criterion_8() -> Outcome {
    let (result, t) = timed(|| {
        let graphs: Vec<Graph> = LS7.iter().map(|l| c1(2, 3, l)).collect();
        let tuples: Vec<_> = graphs.iter().map(|g| verify_ddg(g, None).map(|c| c.params.tuple())).collect();
        (classify(&graphs).unwrap().len(), tuples)
    });
    let (classes, tuples) = result;
    let required = (56, 28, 14, 12, 7, 8);
    let certified = tuples.iter().all(|t| t.as_ref() == Ok(&required));
    let mut seen: Vec<String> = tuples.iter().map(|t| format!("{t:?}")).collect();
    seen.dedup();
    Outcome::new(
        classes == 5 && certified && within(t, 60.0),
        format!(
            "{classes} classes; all certify as {required:?}: {certified} (observed {}); {:.1} ms",
            seen.join(", "),
            t.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_9() -> Outcome {
    let (ia, t) = timed(|| intersection_array(&c2_default(3, 2, "c4").complement()));
    let shown = ia.as_ref().map(ToString::to_string).unwrap_or_else(|e| e.to_string());
    let pass = ia.is_ok_and(|a| a.b == [8, 6, 1] && a.c == [1, 3, 8]) && within(t, 5.0);
    Outcome::new(pass, format!("{shown}; {:.1} ms", t.as_secs_f64() * 1e3))
}

fn criterion_10() -> Outcome {
    let (results, t) = timed(|| {
        ABELIAN8
            .iter()
            .map(|l| {
                let g = srg_graph(Construction::Three, 2, 3, l).stripped();
                let (h, sign) = srg_to_hadamard(&g).map_err(|e| e.to_string())?;
                let ok = h.order() == 64
                    && h.is_hadamard()
                    && h.is_symmetric()
                    && h.constant_diagonal().is_some()
                    && h.regular_sum().is_some();
                let back = hadamard_to_srg(&h, sign).map_err(|e| e.to_string())?;
                Ok::<bool, String>(ok && back == g)
            })
            .collect::<Vec<_>>()
    });
    let pass = results.iter().all(|r| r == &Ok(true)) && within(t, 5.0);
    Outcome::new(pass, format!("{results:?}; {:.1} ms", t.as_secs_f64() * 1e3))
}

fn relabelled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let mut perm: Vec<usize> = (0..g.order()).collect();
    perm.shuffle(rng);
    g.permuted(&perm)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n);
    for x in 0..n {
        for y in x + 1..n {
            if rng.random_bool(0.5) {
                g.add_edge(x, y);
            }
        }
    }
    g
}

fn toggled(g: &Graph, x: usize, y: usize) -> Graph {
    let n = g.order();
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w)));
    Graph::from_edges(n, pairs.filter(|&(u, w)| g.has_edge(u, w) != ((u, w) == (x.min(y), x.max(y)))))
}

fn field_axioms(q: u32) -> bool {
    let Ok(f) = FiniteField::new(q) else { return false };
    (0..q).all(|a| {
        (a == 0 || f.inv(a).is_ok_and(|i| f.mul(a, i) == 1))
            && f.add(a, f.neg(a)) == 0
            && f.add(a, 0) == a
            && f.mul(a, 1) == a
            && (0..q).all(|b| {
                f.add(a, b) == f.add(b, a)
                    && f.mul(a, b) == f.mul(b, a)
                    && (0..q).all(|c| {
                        f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                            && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                            && f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                    })
            })
    })
}

fn criterion_11() -> Outcome {
    let (parts, t) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut parts: Vec<(String, bool)> = vec![];

        let mut corpus: Vec<(String, Graph)> =
            FIXTURE_NAMES.iter().map(|n| (n.to_string(), fixture_graph(n).unwrap())).collect();
        for (q, d, latin, _) in REQUIRED_C1 {
            corpus.push((format!("C1 {latin}"), c1(q, d, latin)));
        }
        for (q, d, latin, _) in REQUIRED_C2 {
            corpus.push((format!("C2 {latin}"), c2_default(q, d, latin)));
        }
        for (which, q, d, latin, _) in REQUIRED_SRG.iter().filter(|s| s.1 == 2) {
            corpus.push((format!("C{which} {latin}"), srg_graph(*which, *q, *d, latin)));
        }
        let mut failures = 0;
        for (_, g) in &corpus {
            let form = canonical_form(g).unwrap();
            failures += (0..100).filter(|_| canonical_form(&relabelled(g, &mut rng)).unwrap() != form).count();
        }
        parts.push((format!("canonical form: {} graphs x 100 relabelings, {failures} failures", corpus.len()), failures == 0));

        let mut rank_ok = true;
        for (_, g) in corpus.iter().filter(|(_, g)| g.order() >= 12) {
            for p in [2, 3, 5] {
                let r = p_rank(g, p).unwrap();
                rank_ok &= (0..5).all(|_| p_rank(&relabelled(g, &mut rng), p).unwrap() == r);
            }
        }
        let big = srg_graph(Construction::Four, 3, 3, "c14");
        let r3 = p_rank(&big, 3).unwrap();
        rank_ok &= (0..2).all(|_| p_rank(&relabelled(&big, &mut rng), 3).unwrap() == r3);
        parts.push(("p-rank relabel invariance".into(), rank_ok));

        let mut disagreements = 0;
        let mut trials = 0;
        for n in 1..=8usize {
            let perms = permutations(n);
            let rounds = if n == 8 { 25 } else { 60 };
            for _ in 0..rounds {
                let a = random_graph(n, &mut rng);
                let mut b = relabelled(&a, &mut rng);
                if rng.random_bool(0.5) && n >= 2 {
                    let x = rng.random_range(0..n);
                    let y = (x + rng.random_range(1..n)) % n;
                    b = toggled(&b, x, y);
                }
                let brute = perms.iter().any(|p| a.permuted(p) == b);
                disagreements += (are_isomorphic(&a, &b).unwrap() != brute) as usize;
                trials += 1;
            }
        }
        parts.push((format!("isomorphism vs brute force: {trials} pairs, {disagreements} disagreements"), disagreements == 0));

        let orders: Vec<u32> = (2..=16).filter(|&q| prime_power(q).is_some()).collect();
        let fields_ok = orders.iter().all(|&q| field_axioms(q));
        parts.push((format!("field axioms for q in {orders:?}"), fields_ok));

        let mut designs_ok = true;
        let mut count = 0;
        for (q, d) in [(2u32, 2u32), (3, 2), (2, 3), (3, 3), (4, 2), (5, 2), (2, 4)] {
            let design = affine_geometry_design(&FiniteField::new(q).unwrap(), d).unwrap();
            designs_ok &= verify_affine(&design).is_ok();
            count += 1;
        }
        for k in 2..=5 {
            designs_ok &= hadamard_3_design(&HadamardMatrix::sylvester(k)).and_then(|d| verify_affine(&d)).is_ok();
            count += 1;
        }
        parts.push((format!("affine axioms for {count} designs"), designs_ok));
        parts
    });
    let pass = parts.iter().all(|(_, ok)| *ok) && within(t, 120.0);
    let detail: Vec<String> = parts.iter().map(|(s, ok)| format!("{s} [{}]", if *ok { "ok" } else { "FAIL" })).collect();
    Outcome::new(pass, format!("{}; {:.1} ms", detail.join("; "), t.as_secs_f64() * 1e3))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "construction 1 parameters", criterion_1),
        (2, "construction 2 parameters", criterion_2),
        (3, "uniqueness isomorphisms", criterion_3),
        (4, "SRG degenerations", criterion_4),
        (5, "spectrum multiplicities", criterion_5),
        (6, "construction 2 mask family", criterion_6),
        (7, "p-ranks", criterion_7),
        (8, "isomorphism classification", criterion_8),
        (9, "distance-regular complement", criterion_9),
        (10, "Hadamard correspondence", criterion_10),
        (11, "property suites", criterion_11),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let outcome = run();
        let known = UNATTAINABLE.contains(&id);
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        let note = match (outcome.pass, known) {
            (false, true) => " [unattainable as stated]",
            (true, true) => " [marked unattainable but passed]",
            _ => "",
        };
        if outcome.pass == known {
            unexpected += 1;
        }
        println!("{tag} {id:>2} {name}: {}{note}", outcome.detail);
    }
    if unexpected == 0 {
        println!("acceptance: all criteria behaved as recorded");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} criteria deviated from the recorded outcome");
        ExitCode::FAILURE
    }
}
