//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use tdlab::FieldDescriptor;

fn report(number: usize, name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS {number} {name}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL {number} {name}: {why}");
            false
        }
    }
}

fn main() {
    let timed = |field| {
        let start = Instant::now();
        let outcome = fuzz_corpus(field, 2024, FUZZ_TRIALS);
        (outcome, start.elapsed())
    };
    let corpora = [timed(FieldDescriptor::Rational), timed(FieldDescriptor::Prime { modulus: P })];

    let results = [
        report(1, "x1_golden", criterion_x1_golden),
        report(2, "fuzz_suite", || criterion_fuzz(&corpora)),
        report(3, "bracket_properties", criterion_brackets),
        report(4, "standard_orderings", criterion_orderings),
        report(5, "isomorphism_suite", || criterion_isomorphism(&[&corpora[0].0, &corpora[1].0])),
        report(6, "negative_instances", criterion_negatives),
        report(7, "determinism", criterion_determinism),
    ];
    if results.iter().any(|ok| !ok) {
        std::process::exit(1);
    }
}
