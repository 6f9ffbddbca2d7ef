//! Decide eventual periodicity of a sequence mod p^α.
//!
//! The Apéry numbers alternate 1, 5 mod 8, but mod 16 they track the
//! number of runs in the binary expansion of n — provably not eventually
//! periodic, with a pumpable witness.

use diagonal_automata::analysis::{verify_period, PeriodVerdict};
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;

fn main() {
    let fixture = find("apery-zeta3").unwrap();

    let m8 = ModulusSpec::new(2, 3).unwrap();
    let (d8, _) = build_for(fixture, m8, &EngineOptions::default()).unwrap();
    match verify_period(&d8, 2).unwrap() {
        PeriodVerdict::Periodic { threshold } => println!(
            "mod 8: periodic with period 2 from n = {threshold} (values {}, {})",
            d8.run(&[0]).unwrap(),
            d8.run(&[1]).unwrap()
        ),
        PeriodVerdict::NotPeriodic { .. } => unreachable!(),
    }

    let m16 = ModulusSpec::new(2, 4).unwrap();
    let (d16, _) = build_for(fixture, m16, &EngineOptions::default()).unwrap();
    for period in [2u64, 6, 16, 64] {
        match verify_period(&d16, period).unwrap() {
            PeriodVerdict::Periodic { threshold } => {
                println!("mod 16: periodic with period {period} from n = {threshold}")
            }
            PeriodVerdict::NotPeriodic { counterexample, .. } => println!(
                "mod 16: period {period} fails at n = {counterexample}: A(n) = {}, A(n+{period}) = {}",
                d16.run(&[counterexample]).unwrap(),
                d16.run(&[counterexample + period]).unwrap()
            ),
        }
    }
}
