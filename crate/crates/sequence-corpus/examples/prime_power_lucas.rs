//! Binomial coefficients mod p^α from base-p digits alone.
//!
//! A closed-form extension of the classical digit-by-digit binomial
//! congruence to prime powers: C(n, m) mod p^α is computed from the digit
//! expansions of m and n−m without ever forming the full integer.

use diagonal_automata::lucas::prime_power_lucas_binomial;
use diagonal_automata::ModulusSpec;
use sequence_corpus::oracle::{binomial, pascal_rows};

fn main() {
    for (p, alpha) in [(2u64, 3u32), (3, 2), (5, 2)] {
        let modulus = ModulusSpec::new(p, alpha).unwrap();
        println!("C(n, m) mod {}:", modulus.modulus());
        for n in [10u64, 50, 100] {
            let row: Vec<u64> = (0..=5)
                .map(|m| prime_power_lucas_binomial(n, m, modulus))
                .collect();
            println!("  n = {n}, m = 0..5: {row:?}");
        }
    }

    // Cross-check the digit formula against an exactly computed Pascal triangle.
    let modulus = ModulusSpec::new(3, 2).unwrap();
    let rows = pascal_rows(41, modulus);
    for n in 0..41u64 {
        for m in 0..=n {
            assert_eq!(
                prime_power_lucas_binomial(n, m, modulus),
                binomial(&rows, n, m)
            );
        }
    }
    println!("digit formula agrees with Pascal's triangle mod 9 for all n < 41");
}
