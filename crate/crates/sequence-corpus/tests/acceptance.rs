//! End-to-end acceptance suite. Each test prints one labeled pass line;
//! a failure anywhere fails the corresponding test.

use diagonal_automata::analysis::{
    attained_outputs, digit_stats, equivalent_from, finitely_attained, output_frequencies,
    verify_period, Finiteness, PeriodVerdict,
};
use diagonal_automata::christol::{ore_form, AlgebraicSeriesSpec};
use diagonal_automata::dfao::State;
use diagonal_automata::lucas::{lucas_check, prime_power_lucas_binomial, LucasOutcome};
use diagonal_automata::modarith::{ModulusSpec, Residue};
use diagonal_automata::{Dfao, EngineOptions, ModPoly, Variant};
use num_rational::BigRational;
use sequence_corpus::build::{build_for, BuildMeta, Route};
use sequence_corpus::document::AutomatonDocument;
use sequence_corpus::fixtures::{find, Fixture, FIXTURES};
use sequence_corpus::oracle;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn m(p: u64, a: u32) -> ModulusSpec {
    ModulusSpec::new(p, a).unwrap()
}

/// Builds are shared across criteria; they are deterministic, so caching is
/// purely a speedup.
fn build(name: &str, p: u64, a: u32) -> (Dfao<Residue>, BuildMeta) {
    static CACHE: OnceLock<Mutex<HashMap<(String, u64, u32), (Dfao<Residue>, BuildMeta)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(name.to_string(), p, a)) {
        return hit.clone();
    }
    let f = find(name).unwrap();
    let built = build_for(f, m(p, a), &EngineOptions::default())
        .unwrap_or_else(|e| panic!("build {name} mod {p}^{a}: {e}"));
    cache
        .lock()
        .unwrap()
        .insert((name.to_string(), p, a), built.clone());
    built
}

fn check_fixture_against_oracle(f: &'static Fixture, p: u64, a: u32, count: u64) {
    let (d, meta) = build(f.name, p, a);
    if f.blocks() == 1 {
        let oracle = f.oracle_terms(meta.modulus, count as usize).unwrap();
        for n in 0..count {
            let got = if n < meta.n0 {
                meta.initial_terms[n as usize]
            } else {
                d.run(&[n]).unwrap()
            };
            assert_eq!(
                got, oracle[n as usize],
                "{} mod {p}^{a} at n={n}",
                f.name
            );
        }
    } else {
        let side = 32u64;
        let rows = oracle::pascal_rows(2 * side as usize, meta.modulus);
        for n in 0..side {
            for k in 0..side {
                assert_eq!(
                    d.run(&[n, k]).unwrap(),
                    oracle::binomial(&rows, n, k),
                    "{} mod {p}^{a} at ({n},{k})",
                    f.name
                );
            }
        }
    }
}

#[test]
fn criterion_01_every_fixture_matches_its_oracle() {
    for f in FIXTURES {
        let mut moduli: Vec<(u64, u32)> = vec![];
        for p in [2u64, 3, 5] {
            for a in [1u32, 2] {
                moduli.push((p, a));
            }
        }
        // fixture-specific extensions
        match f.name {
            "catalan" => moduli.extend([(2, 4), (2, 5)]),
            "motzkin" => moduli.extend([(2, 3)]),
            "a029759" => moduli.extend([(2, 3), (2, 4)]),
            "a032351" => moduli.extend([(2, 3)]),
            "apery-zeta3" => moduli.extend([(7, 1), (2, 3), (2, 4)]),
            _ => {}
        }
        for (p, a) in moduli {
            // constructions that do not cover this modulus
            let halved = matches!(f.name, "a029759" | "a032351");
            if halved && (p != 2 || a < 2) {
                continue;
            }
            if f.name == "central-trinomial" && p == 2 && a >= 2 {
                // covered by criterion 8 / build tests as a precondition failure
                continue;
            }
            check_fixture_against_oracle(f, p, a, 512);
        }
    }
    println!("PASS criterion 1: all fixtures match brute-force oracles (n < 512)");
}

/// A hand-built automaton recognizing `n` whose base-2 digits are all 1
/// (n = 2^k − 1), with output 1 on those inputs and 0 elsewhere.
fn all_ones_indicator() -> Dfao<Residue> {
    let states = vec![
        State { output: 1, next: vec![2, 1] }, // initial: empty word (n = 0)
        State { output: 1, next: vec![2, 1] }, // all digits so far are 1
        State { output: 0, next: vec![2, 2] }, // some digit was 0
    ];
    Dfao::new(2, 1, states, 0).unwrap()
}

#[test]
fn criterion_02_catalan_state_counts_and_forbidden_residues() {
    let (d2, _) = build("catalan", 2, 1);
    assert_eq!(d2.num_states(), 4);
    // C(n) is odd exactly when n = 2^k − 1, i.e. the automaton mod 2 agrees
    // with the all-ones-digits indicator for n ≥ 1.
    assert!(equivalent_from(&d2, &all_ones_indicator(), 1).unwrap());

    let (d4, _) = build("catalan", 2, 2);
    assert_eq!(d4.num_states(), 6);
    let r4 = attained_outputs(&d4, &(0..4).collect::<Vec<_>>());
    assert_eq!(r4.forbidden, vec![3]);

    let (d16, _) = build("catalan", 2, 4);
    let r16 = attained_outputs(&d16, &(0..16).collect::<Vec<_>>());
    assert!(r16.forbidden.contains(&9), "forbidden mod 16: {:?}", r16.forbidden);

    let (d32, _) = build("catalan", 2, 5);
    let r32 = attained_outputs(&d32, &(0..32).collect::<Vec<_>>());
    for v in [17, 21, 26] {
        assert!(r32.forbidden.contains(&v), "forbidden mod 32: {:?}", r32.forbidden);
    }
    println!("PASS criterion 2: Catalan state counts (4, 6) and forbidden residues 3/9/{{17,21,26}}");
}

#[test]
fn criterion_03_catalan_residues_attained_finitely_often() {
    // Label 1 mod 8: C(n) ≡ 1 only at n ∈ {0, 1}. The automaton covers
    // n ≥ 1; n = 0 comes from the metadata's true leading term.
    let (d8, meta8) = build("catalan", 2, 3);
    let fin = finitely_attained(&d8, &[1]).unwrap();
    let mut indices = match &fin.per_label[0].1 {
        Finiteness::Finite(ns) => ns.clone(),
        Finiteness::Infinite => panic!("label 1 mod 8 should be attained finitely often"),
    };
    assert_eq!(meta8.initial_terms, vec![1]); // C(0) ≡ 1 mod 8
    indices.insert(0, 0);
    assert_eq!(indices, vec![0, 1]);

    // Labels 5 and 10 mod 16 are attained only at indices below 6.
    let (d16, _) = build("catalan", 2, 4);
    let fin16 = finitely_attained(&d16, &[5, 10]).unwrap();
    for (label, f) in &fin16.per_label {
        match f {
            Finiteness::Finite(ns) => {
                assert!(!ns.is_empty(), "label {label} is attained somewhere");
                assert!(ns.iter().all(|&n| n < 6), "label {label}: {ns:?}");
            }
            Finiteness::Infinite => panic!("label {label} mod 16 should be finite"),
        }
    }
    println!("PASS criterion 3: Catalan labels 1 mod 8 at {{0,1}}; 5, 10 mod 16 only below 6");
}

#[test]
fn criterion_04_motzkin_state_counts_and_forbidden_zero() {
    let f = find("motzkin").unwrap();
    let standard = build("motzkin", 2, 3).0;
    assert_eq!(standard.num_states(), 51);
    let (post, _) = build_for(
        f,
        m(2, 3),
        &EngineOptions {
            variant: Variant::PostCartier,
            ..EngineOptions::default()
        },
    )
    .unwrap();
    assert_eq!(post.num_states(), 28);
    assert_eq!(standard.equivalent(&post).unwrap(), None);
    let r8 = attained_outputs(&standard, &(0..8).collect::<Vec<_>>());
    assert!(r8.forbidden.contains(&0), "M(n) ≢ 0 mod 8 for n ≥ 1");

    let d25 = build("motzkin", 5, 2).0;
    assert_eq!(d25.num_states(), 144);
    let r25 = attained_outputs(&d25, &(0..25).collect::<Vec<_>>());
    assert!(r25.forbidden.contains(&0), "M(n) ≢ 0 mod 25 for n ≥ 1");
    println!("PASS criterion 4: Motzkin 51/28 states mod 8, 144 states mod 25, forbidden 0");
}

#[test]
#[ignore = "stretch goal: ~2000+ state build, several minutes"]
fn criterion_05_stretch_motzkin_mod_169() {
    let d = build("motzkin", 13, 2).0;
    assert_eq!(d.num_states(), 2125);
    println!("PASS criterion 5 (stretch): Motzkin mod 169 has 2125 states");
}

#[test]
fn criterion_06_motzkin_frequencies_and_valuation_densities() {
    let d2 = build("motzkin", 2, 1).0;
    let freq = output_frequencies(&d2, &[0, 1]);
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(
        freq.frequencies,
        vec![(0, r(1, 3)), (1, r(2, 3))]
    );

    // 2-adic valuation densities from the mod-4 classes: exactly 1/6 of
    // indices have valuation exactly 1, and 1/6 have valuation ≥ 2.
    let d4 = build("motzkin", 2, 2).0;
    let val = d4.relabel(|&o| match o {
        0 => 2u64,       // divisible by 4: valuation ≥ 2
        2 => 1,          // ≡ 2 mod 4: valuation exactly 1
        _ => 0,
    });
    let vfreq = output_frequencies(&val, &[0, 1, 2]);
    assert_eq!(
        vfreq.frequencies,
        vec![(0, r(2, 3)), (1, r(1, 6)), (2, r(1, 6))]
    );
    println!("PASS criterion 6: Motzkin mod 2 frequencies 1/3, 2/3; valuation densities 1/6, 1/6");
}

#[test]
fn criterion_07_apery_periodicity_and_digit_formulas() {
    // mod 8: period 2 from the start, values 1 and 5.
    let (d8, _) = build("apery-zeta3", 2, 3);
    assert_eq!(
        verify_period(&d8, 2).unwrap(),
        PeriodVerdict::Periodic { threshold: 0 }
    );
    assert_eq!(d8.run(&[0]).unwrap(), 1);
    assert_eq!(d8.run(&[1]).unwrap(), 5);

    // mod 16: A(n) = 4β(n) + 1 where β counts binary runs; and no eventual
    // period m ≤ 64 exists.
    let (d16, _) = build("apery-zeta3", 2, 4);
    for n in 0..1u64 << 16 {
        let (_, beta) = digit_stats(n, 2);
        let want = (4 * beta.unwrap() + 1) % 16;
        assert_eq!(d16.run(&[n]).unwrap(), want, "A({n}) mod 16");
    }
    for period in 1..=64u64 {
        match verify_period(&d16, period).unwrap() {
            PeriodVerdict::NotPeriodic { counterexample, .. } => {
                let a = d16.run(&[counterexample]).unwrap();
                let b = d16.run(&[counterexample + period]).unwrap();
                assert_ne!(a, b);
            }
            PeriodVerdict::Periodic { .. } => panic!("mod 16 must not be eventually periodic"),
        }
    }

    // mod 9: A(n) = 5^{e_1(n)} where e_1 counts ternary digit 1.
    let (d9, _) = build("apery-zeta3", 3, 2);
    let m9 = m(3, 2);
    for n in 0..3u64.pow(10) {
        let (counts, _) = digit_stats(n, 3);
        assert_eq!(d9.run(&[n]).unwrap(), m9.pow(5, counts[1]), "A({n}) mod 9");
    }

    // mod 7: A(n) = 5^{e_1 + e_5 − e_2 − e_3 − e_4} over base-7 digit counts.
    let (d7, _) = build("apery-zeta3", 7, 1);
    let m7 = m(7, 1);
    let inv5 = m7.inverse(5).unwrap();
    for n in 0..7u64.pow(6) {
        let (c, _) = digit_stats(n, 7);
        let want = m7.mul(m7.pow(5, c[1] + c[5]), m7.pow(inv5, c[2] + c[3] + c[4]));
        assert_eq!(d7.run(&[n]).unwrap(), want, "A({n}) mod 7");
    }

    // mod 25: with no base-5 digit in {1,3}, A(n) = (−2)^{e_2}; two or more
    // digits in {1,3} force A(n) ≡ 0.
    let (d25, _) = build("apery-zeta3", 5, 2);
    let m25 = m(5, 2);
    for n in 0..5u64.pow(7) {
        let (c, _) = digit_stats(n, 5);
        let odd_digits = c[1] + c[3];
        if odd_digits == 0 {
            assert_eq!(
                d25.run(&[n]).unwrap(),
                m25.pow(23, c[2]),
                "A({n}) mod 25 on {{1,3}}-free digits"
            );
        } else if odd_digits >= 2 {
            assert_eq!(d25.run(&[n]).unwrap(), 0, "25 | A({n})");
        }
    }
    println!("PASS criterion 7: Apéry periodicity (mod 8, mod 16) and digit formulas (mod 9, 7, 16, 25)");
}

#[test]
fn criterion_08_algebraic_route_and_ore_forms() {
    // Central trinomial coefficients are odd: single-state automaton.
    let (d, meta) = build("central-trinomial", 2, 1);
    assert_eq!(meta.route, Route::AlgebraicDirect);
    assert_eq!(d.num_states(), 1);
    assert_eq!(*d.output(0), 1);

    let uni = |coeffs: &[i64]| {
        ModPoly::from_terms(
            m(2, 1),
            1,
            coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], c)),
        )
    };

    // Ore form of the trinomial curve mod 2 is (x+1)·y² + y.
    let f = find("central-trinomial").unwrap();
    let curve = sequence_corpus::parser::parse_mod_poly(
        match f.construction {
            sequence_corpus::fixtures::Construction::Curve { curve, .. } => curve,
            _ => unreachable!(),
        },
        2,
        m(2, 1),
    )
    .unwrap();
    let prefix = f.oracle_terms(m(2, 1), 64).unwrap();
    let spec = AlgebraicSeriesSpec::new(curve, prefix).unwrap();
    let form = ore_form(&spec).unwrap();
    assert_eq!(form.height(), 1);
    assert_eq!(form.coefficient(0), &uni(&[1])); // y
    assert_eq!(form.coefficient(1), &uni(&[1, 1])); // (x+1) y²

    // Ore form of (x+1)^16 y^8 + (x+1)^10 y^2 + x^4 over F_2 is
    // (x+1)^11 y^8 + x²(x+1)³ y^4 + (x+1)^5 y^2 + x² y.
    let xp1 = uni(&[1, 1]);
    let octic = {
        // lift univariate coefficients into (x, y)
        let lift = |u: &ModPoly| {
            ModPoly::from_terms(
                m(2, 1),
                2,
                u.terms().map(|(e, c)| (vec![e[0], 0], c as i64)),
            )
        };
        lift(&xp1.pow(16))
            .mul(&ModPoly::from_terms(m(2, 1), 2, [(vec![0u32, 8], 1i64)]))
            .add(
                &lift(&xp1.pow(10))
                    .mul(&ModPoly::from_terms(m(2, 1), 2, [(vec![0u32, 2], 1i64)])),
            )
            .add(&ModPoly::from_terms(m(2, 1), 2, [(vec![4u32, 0], 1i64)]))
    };
    // prefix of the unique power-series root y: its square v = y² is the
    // fixed point of v ← (x⁴ + (x+1)^16 v⁴) / (x+1)^10, and over F_2 the
    // root is read off from v's even-index coefficients.
    let t = 128usize;
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; t];
        for i in 0..t {
            if a[i] == 0 {
                continue;
            }
            for j in 0..t - i {
                if b[j] != 0 {
                    out[i + j] ^= 1;
                }
            }
        }
        out
    };
    let series_of = |p: &ModPoly| {
        let mut v = vec![0u64; t];
        for (e, c) in p.terms() {
            if (e[0] as usize) < t {
                v[e[0] as usize] = c;
            }
        }
        v
    };
    let a16 = series_of(&xp1.pow(16));
    let b10 = series_of(&xp1.pow(10));
    // inverse of (x+1)^10 mod x^t over F_2
    let mut binv = vec![0u64; t];
    binv[0] = 1;
    for k in 1..t {
        let mut acc = 0u64;
        for j in 1..=k {
            acc ^= b10[j] & binv[k - j];
        }
        binv[k] = acc; // leading coefficient is 1, negation is identity
    }
    let mut v = vec![0u64; t];
    for _ in 0..t {
        let v2 = mul(&v, &v);
        let v4 = mul(&v2, &v2);
        let mut num = mul(&v4, &a16);
        num[4] ^= 1;
        v = mul(&num, &binv);
    }
    let root: Vec<u64> = (0..t / 2).map(|i| v[2 * i]).collect();
    let spec8 = AlgebraicSeriesSpec::new(octic, root).unwrap();
    let form8 = ore_form(&spec8).unwrap();
    assert_eq!(form8.height(), 3);
    assert_eq!(form8.coefficient(0), &uni(&[0, 0, 1])); // x² y
    assert_eq!(form8.coefficient(1), &xp1.pow(5)); // (x+1)^5 y²
    assert_eq!(form8.coefficient(2), &uni(&[0, 0, 1]).mul(&xp1.pow(3))); // x²(x+1)³ y⁴
    assert_eq!(form8.coefficient(3), &xp1.pow(11)); // (x+1)^11 y^8
    println!("PASS criterion 8: single-state trinomial automaton mod 2; both Ore forms match");
}

#[test]
fn criterion_09_digit_product_structure() {
    // Binomial coefficients: full Lucas structure, equivalent to the
    // two-block engine automaton.
    for p in [2u64, 3, 5, 7] {
        let spec = find("binomial").unwrap().lucas_spec(p).unwrap();
        let table = match lucas_check(&spec).unwrap() {
            LucasOutcome::Table(t) => t,
            LucasOutcome::Failure { .. } => panic!("binomial mod {p} must have a Lucas product"),
        };
        let engine = build("binomial", p, 1).0;
        assert_eq!(
            table.automaton().equivalent(&engine).unwrap(),
            None,
            "binomial mod {p}"
        );
    }

    // Central trinomial coefficients with square root exponent.
    for p in [3u64, 5, 7, 11, 13] {
        let spec = find("central-trinomial").unwrap().lucas_spec(p).unwrap();
        let table = match lucas_check(&spec).unwrap() {
            LucasOutcome::Table(t) => t,
            LucasOutcome::Failure { .. } => panic!("trinomial mod {p} must have a Lucas product"),
        };
        let engine = build("central-trinomial", p, 1).0;
        assert!(
            equivalent_from(&table.automaton(), &engine, 1).unwrap(),
            "trinomial mod {p}"
        );
    }

    // Apéry numbers: product structure and no zero entries for the primes
    // that never divide A(n).
    for p in [2u64, 3, 5, 7, 13] {
        let spec = find("apery-zeta3").unwrap().lucas_spec(p).unwrap();
        let table = match lucas_check(&spec).unwrap() {
            LucasOutcome::Table(t) => t,
            LucasOutcome::Failure { .. } => panic!("Apéry mod {p} must have a Lucas product"),
        };
        if p != 13 {
            let engine = build("apery-zeta3", p, 1).0;
            assert_eq!(
                table.automaton().equivalent(&engine).unwrap(),
                None,
                "Apéry mod {p}"
            );
        }
        if [2, 3, 7, 13].contains(&p) {
            for digit in 0..p {
                assert_ne!(table.entry(&[digit]), 0, "A(n) ≢ 0 mod {p}");
            }
        }
    }
    println!("PASS criterion 9: Lucas products for binomial/trinomial/Apéry match engine automata");
}

#[test]
fn criterion_10_prime_power_binomial_formula() {
    for (p, a) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)] {
        let spec = m(p, a);
        let rows = oracle::pascal_rows(161, spec);
        for n in 0..81u64 {
            for k in 0..81u64 {
                assert_eq!(
                    prime_power_lucas_binomial(n, k, spec),
                    oracle::binomial(&rows, n, k),
                    "C({n},{k}) mod {p}^{a}"
                );
            }
        }
    }
    println!("PASS criterion 10: generalized Lucas formula matches Pascal for n, m < 81");
}

#[test]
fn criterion_11_pattern_avoidance_forbidden_residues() {
    let forbidden = |name: &str, p: u64, a: u32| {
        let (d, _) = build(name, p, a);
        attained_outputs(&d, &(0..m(p, a).modulus()).collect::<Vec<_>>()).forbidden
    };
    assert!(forbidden("a109033", 2, 2).contains(&3));
    let f8 = forbidden("a109033", 2, 3);
    assert!(f8.contains(&4) && f8.contains(&5), "{f8:?}");
    assert!(forbidden("a159771", 2, 2).contains(&3));
    assert!(forbidden("a159771", 2, 4).contains(&13));
    let f16 = forbidden("a029759", 2, 4);
    assert!(f16.contains(&10) && f16.contains(&14), "{f16:?}");
    assert!(forbidden("a032351", 2, 3).contains(&2));
    println!("PASS criterion 11: pattern-avoidance forbidden residues (mod 4/8/16) all hold");
}

#[test]
fn criterion_12_determinism_and_round_trip() {
    for f in FIXTURES {
        let (p, a) = match f.name {
            "a029759" | "a032351" => (2, 3),
            "central-trinomial" => (3, 1),
            _ => (2, 2),
        };
        let opts = EngineOptions::default();
        let (d1, meta1) = build_for(f, m(p, a), &opts).unwrap();
        let (d2, meta2) = build_for(f, m(p, a), &opts).unwrap();
        let j1 = AutomatonDocument::from_automaton(&d1, &meta1).to_json();
        let j2 = AutomatonDocument::from_automaton(&d2, &meta2).to_json();
        assert_eq!(j1, j2, "{}: repeated builds must serialize identically", f.name);
        let back = AutomatonDocument::from_json(&j1)
            .unwrap()
            .to_automaton()
            .unwrap();
        assert_eq!(d1.equivalent(&back).unwrap(), None, "{}", f.name);
    }
    println!("PASS criterion 12: builds are deterministic and JSON round-trips preserve behavior");
}
