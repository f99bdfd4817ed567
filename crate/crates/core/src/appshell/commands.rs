//! The analyses behind each CLI command, generic over the field.

use rand::RngCore;

use super::document::AnySystem;
use super::generate::{conjugate, random_invertible};
use super::reportdoc::{orbit_doc, ParameterArrayDoc, ReportDocument};
use crate::conjlab::conjecture_suite;
use crate::d4orbit::{apply_relative_validated, orbit_report, D4Element};
use crate::formlab::{form_suite, isomorphism_test, IsoVerdict};
use crate::polys::eta_expansion_check;
use crate::report::Report;
use crate::scalars::Field;
use crate::splitparam::split_suite;
use crate::tdcore::{enumerate_standard_orderings, validate, TdSystem, ValidateOptions, Validated, ORDERING_D_MAX};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Params,
    Orbit,
    Form,
    Conjectures { depth: usize },
}

/// Validation, then the requested analysis when validation succeeded.
fn validated_or_report<F: Field>(sys: &TdSystem<F>, options: ValidateOptions) -> (Report, Option<Validated<F>>) {
    let validation = validate(sys, options);
    let ok = !validation.report.has_fail();
    (validation.report, validation.validated.filter(|_| ok))
}

pub fn run_command<F: Field>(sys: &TdSystem<F>, command: Command, options: ValidateOptions) -> ReportDocument {
    let f = &sys.field;
    let (mut report, validated) = validated_or_report(sys, options);
    if command == Command::Verify {
        return ReportDocument::new(report);
    }
    let Some(v) = validated else {
        report.skip("analysis", "validation failed");
        return ReportDocument::new(report);
    };
    let mut doc = ReportDocument::new(Report::new());
    match command {
        Command::Verify => unreachable!("handled above"),
        Command::Params => {
            let (r, analysis) = split_suite(&v);
            report.extend(r);
            match eta_expansion_check(f, &sys.thetas, &sys.thetas_star) {
                Ok(r) => report.extend(r),
                Err(e) => report.fail("eta_expansion", e.to_string()),
            }
            doc.parameter_array = analysis.map(|a| ParameterArrayDoc::new(f, &a.array));
        }
        Command::Orbit => {
            let orbit = orbit_report(&v, options);
            doc.orbit = Some(orbit_doc(f, &orbit));
            report.extend(orbit.report);
        }
        Command::Form => {
            let (r, form) = form_suite(&v, options);
            report.extend(r);
            doc.gram = form.map(|g| g.gram.to_text());
        }
        Command::Conjectures { depth } => report.extend(conjecture_suite(&v, depth)),
    }
    doc.checks = report.checks;
    doc
}

pub fn run_any(sys: &AnySystem, command: Command, options: ValidateOptions) -> ReportDocument {
    match sys {
        AnySystem::Rational(s) => run_command(s, command, options),
        AnySystem::Prime(s) => run_command(s, command, options),
    }
}

/// Conjugated copies must be isomorphic through a verified `γ`; the `⇓`
/// relative must not be (for `d ≥ 1`); verdicts must agree with
/// parameter-array equality.
pub fn isomorphism_suite<F: Field>(
    v: &Validated<F>,
    copies: usize,
    rng: &mut impl RngCore,
    options: ValidateOptions,
) -> Report {
    let sys = &v.system;
    let mut report = Report::new();
    let mut conj_ok = true;
    let mut disagreement: Option<String> = None;
    let mut note = |iso: &crate::formlab::Isomorphism<F>, label: &str| {
        if iso.disagrees() && disagreement.is_none() {
            disagreement = Some(format!(
                "{label}: parameter arrays equal = {:?}, isomorphic = {}",
                iso.arrays_equal,
                iso.is_isomorphic()
            ));
        }
    };
    for _ in 0..copies {
        let p = random_invertible(&sys.field, sys.n(), rng);
        let copy = conjugate(sys, &p);
        let Some(cv) = validate(&copy, options).validated else {
            conj_ok = false;
            continue;
        };
        match isomorphism_test(v, &cv) {
            Ok(iso) => {
                conj_ok &= iso.is_isomorphic() && !iso.report.has_fail();
                note(&iso, "conjugate");
            }
            Err(_) => conj_ok = false,
        }
    }
    report.check("isomorphic_conjugates", conj_ok, || "a conjugated copy was not recognized".into());
    if sys.d() >= 1 {
        let rel = apply_relative_validated(v, D4Element::DDOWN);
        match isomorphism_test(v, &rel) {
            Ok(iso) => {
                report.check("reversed_not_isomorphic", matches!(iso.verdict, IsoVerdict::NotIsomorphic(_)), || {
                    "system is isomorphic to its reversal".into()
                });
                note(&iso, "reversed");
            }
            Err(e) => report.fail("reversed_not_isomorphic", e.to_string()),
        }
    }
    match disagreement {
        None => report.pass("isomorphism_conjecture"),
        Some(w) => report.fail("isomorphism_conjecture", format!("counterexample candidate: {w}")),
    }
    report
}

/// Exactly the stored order and its reversal are standard, for both
/// operators.
pub fn ordering_check<F: Field>(v: &Validated<F>) -> Report {
    let mut report = Report::new();
    let d = v.system.d();
    if d > ORDERING_D_MAX {
        report.skip("standard_orderings", format!("d > {ORDERING_D_MAX}"));
        return report;
    }
    match enumerate_standard_orderings(v) {
        Ok(ord) => {
            let forward: Vec<usize> = (0..=d).collect();
            let backward: Vec<usize> = (0..=d).rev().collect();
            let mut expected = vec![forward, backward];
            expected.sort();
            expected.dedup();
            let mut a = ord.a.clone();
            let mut a_star = ord.a_star.clone();
            a.sort();
            a_star.sort();
            report.check("standard_orderings", a == expected && a_star == expected, || {
                format!("A: {:?}, A*: {:?}", ord.a, ord.a_star)
            });
        }
        Err(e) => report.fail("standard_orderings", e.to_string()),
    }
    report
}

/// Every analysis applied to one accepted instance.
pub fn full_suite<F: Field>(
    v: &Validated<F>,
    options: ValidateOptions,
    depth: usize,
    rng: &mut impl RngCore,
) -> Report {
    let sys = &v.system;
    let mut report = Report::new();
    report.extend(split_suite(v).0);
    match eta_expansion_check(&sys.field, &sys.thetas, &sys.thetas_star) {
        Ok(r) => report.extend(r),
        Err(e) => report.fail("eta_expansion", e.to_string()),
    }
    report.extend(orbit_report(v, options).report);
    report.extend(form_suite(v, options).0);
    report.extend(conjecture_suite(v, depth));
    report.extend(isomorphism_suite(v, 2, rng, options));
    report.extend(ordering_check(v));
    report
}
