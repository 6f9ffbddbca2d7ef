//! Digit-product (Lucas-style) congruences.
//!
//! A sequence has the Lucas property mod p when a(n) factors as a product
//! of per-digit contributions c(d) over the base-p digits d of n.  The
//! check is algebraic — q(x)^{(p−1)/s} must reduce to a single monomial
//! per digit block — and succeeds or fails with an explicit witness.

use diagonal_automata::lucas::{lucas_check, LucasOutcome};
use sequence_corpus::fixtures::find;

fn main() {
    // Central trinomial coefficients: T(n) ≡ ∏ c(d_i) (mod p) for p ≡ 1 (mod 2).
    let fixture = find("central-trinomial").unwrap();
    for p in [3u64, 7, 13] {
        let spec = fixture.lucas_spec(p).unwrap();
        match lucas_check(&spec).unwrap() {
            LucasOutcome::Table(table) => {
                let row: Vec<u64> = (0..p).map(|d| table.entry(&[d])).collect();
                println!("central-trinomial mod {p}: Lucas table c(0..{}) = {row:?}", p - 1);
                let sample: Vec<u64> = (0..10).map(|n| table.eval(&[n])).collect();
                println!("  T(0..9) mod {p} via digit products: {sample:?}");
            }
            LucasOutcome::Failure { digits, .. } => {
                println!("central-trinomial mod {p}: no Lucas factorization (digits {digits:?})");
            }
        }
    }

    // Apéry numbers: the per-digit table never contains 0 for some primes,
    // which immediately proves a(n) is never divisible by p.
    let apery = find("apery-zeta3").unwrap();
    for p in [2u64, 3, 7, 13] {
        let spec = apery.lucas_spec(p).unwrap();
        if let LucasOutcome::Table(table) = lucas_check(&spec).unwrap() {
            let row: Vec<u64> = (0..p).map(|d| table.entry(&[d])).collect();
            let zero_free = row.iter().all(|&c| c != 0);
            println!(
                "apery-zeta3 mod {p}: table {row:?}{}",
                if zero_free {
                    " — no zero entry, so p never divides an Apéry number"
                } else {
                    ""
                }
            );
        }
    }
}
