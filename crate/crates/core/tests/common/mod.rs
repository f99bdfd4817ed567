//! Shared fixtures and the checks behind the acceptance run. Each
//! `criterion_*` function returns a one-line summary or the reason it failed.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use tdlab::appshell::commands::isomorphism_suite;
use tdlab::appshell::document::{AnySystem, SystemDocument};
use tdlab::appshell::fuzz::{run_fuzz, FuzzOutcome};
use tdlab::appshell::generate::{gen_leonard_split, leonard_phis, random_candidate, RunConfig};
use tdlab::conjlab::{corner_algebra_checks, generate_subalgebras};
use tdlab::d4orbit::{bracket, orbit_report, D4Element, QData, QValue};
use tdlab::formlab::{invariant_form, AntiMap};
use tdlab::matrices::{Matrix, Subspace};
use tdlab::report::Status;
use tdlab::splitparam::{split_decomposition, split_sequence, split_suite};
use tdlab::tdcore::{enumerate_standard_orderings, validate, TdSystem, ValidateOptions, Validated};
use tdlab::{Field, FieldDescriptor, PrimeField, QSystem, QValidated, Rationals};

pub type Outcome = std::result::Result<String, String>;

pub const P: u64 = 10007;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load_rational(name: &str) -> QSystem {
    let doc = SystemDocument::load(&fixture(name)).expect("fixture loads");
    match doc.to_any().expect("fixture parses") {
        AnySystem::Rational(s) => s,
        AnySystem::Prime(_) => panic!("{name} is not a rational fixture"),
    }
}

pub fn tdlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tdlab")).args(args).output().expect("binary runs")
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn qm(rows: &[&[i64]]) -> Matrix<Rationals> {
    Matrix::from_i64(&Rationals, rows)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn all_pass(report: &tdlab::report::Report, ids: &[&str]) -> Result<(), String> {
    for id in ids {
        match report.get(id) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => return Err(format!("{id}: {} {:?}", c.status, c.witness)),
            None => return Err(format!("{id}: missing")),
        }
    }
    Ok(())
}

/// `dim span(W ∪ MW) = dim W` for both operators, computed from scratch.
pub fn witness_is_invariant<F: Field>(sys: &TdSystem<F>, w: &Subspace<F>) -> bool {
    let f = &sys.field;
    let basis = w.basis_vectors();
    if basis.is_empty() || basis.len() >= sys.n() {
        return false;
    }
    let dim = |vs: &[Vec<F::Elem>]| Matrix::from_rows(f, vs.to_vec()).expect("rectangular").rank();
    [&sys.a, &sys.a_star].iter().all(|m| {
        let mut vs = basis.clone();
        vs.extend(basis.iter().map(|v| m.mat_vec(v)));
        dim(&vs) == basis.len()
    })
}

// X1: d = 1 over the rationals.

pub fn x1_validated() -> QValidated {
    let sys = load_rational("x1.json");
    let v = validate(&sys, ValidateOptions::default());
    assert!(!v.report.has_fail(), "{:?}", v.report.failures());
    v.validated.expect("x1 validates")
}

pub fn criterion_x1_golden() -> Outcome {
    let start = Instant::now();
    let sys = load_rational("x1.json");
    let validation = validate(&sys, ValidateOptions::default());
    ensure(validation.overall() == Status::Pass, || format!("validation {:?}", validation.report.failures()))?;
    let v = validation.validated.ok_or("no validated system")?;
    ensure(v.shape.rho == vec![1, 1], || format!("shape {:?}", v.shape.rho))?;
    ensure(v.is_sharp(), || "not sharp".into())?;

    // E_0 = A and E_1 = I − A because A is idempotent with eigenvalues 1, 0.
    let id = Matrix::identity(&Rationals, 2);
    ensure(v.e.mats[0] == sys.a && v.e.mats[1] == &id - &sys.a, || "idempotents of A".into())?;
    ensure(v.e_star.mats[0] == sys.a_star, || "idempotents of A*".into())?;

    let (report, analysis) = split_suite(&v);
    ensure(!report.has_fail(), || format!("split suite {:?}", report.failures()))?;
    let analysis = analysis.ok_or("no split analysis")?;
    let ones = vec![q(1), q(1)];
    let pa = &analysis.array;
    ensure(pa.thetas == vec![q(1), q(0)] && pa.thetas_star == vec![q(1), q(0)], || "eigenvalues".into())?;
    ensure(pa.zetas == ones, || format!("zeta {:?}", pa.zetas))?;
    let decomp = split_decomposition(&v).map_err(|e| e.to_string())?;
    ensure(split_sequence(&v, &decomp).map_err(|e| e.to_string())? == ones, || "updown zeta".into())?;
    for (k, formula) in analysis.traces.formulas.iter().enumerate() {
        ensure(*formula == ones, || format!("trace formula {k} gives {formula:?}"))?;
    }
    all_pass(&report, &["zeta_d_closed_form", "zeta_d_closed_form_dual", "zeta_equals_zeta_star"])?;

    // tr(E_i E*_j) from the closed forms of the idempotents.
    let es = [sys.a_star.clone(), &id - &sys.a_star];
    let ee = [sys.a.clone(), &id - &sys.a];
    let expected: Vec<Vec<BigRational>> = (0..2).map(|i| (0..2).map(|j| (&ee[i] * &es[j]).trace()).collect()).collect();
    ensure(expected == vec![vec![q(2), q(-1)], vec![q(-1), q(2)]], || "hand trace table".into())?;
    ensure(analysis.problems.trace_table == expected, || format!("trace table {:?}", analysis.problems.trace_table))?;

    let orbit = orbit_report(&v, ValidateOptions::default());
    ensure(!orbit.report.has_fail(), || format!("orbit {:?}", orbit.report.failures()))?;
    let ddown = orbit.zetas(D4Element::DDOWN).ok_or("no zeta for the reversed relative")?;
    ensure(ddown == [q(1), q(2)], || format!("reversed zeta {ddown:?}"))?;
    all_pass(&orbit.report, &["last_term_equal_weighted_sum", "last_term_equal_zeta_d"])?;

    let form = invariant_form(&v).map_err(|e| e.to_string())?;
    let g = qm(&[&[1, 1], &[1, -1]]);
    ensure(form.gram == g && form.solution_dim == 1, || format!("form {} dim {}", form.gram, form.solution_dim))?;
    ensure(&g * &sys.a == &sys.a.transpose() * &g, || "GA != AᵀG".into())?;
    ensure(&g * &sys.a_star == &sys.a_star.transpose() * &g, || "GA* != A*ᵀG".into())?;
    ensure(g.det() == q(-2), || "det G".into())?;
    let anti = AntiMap::new(g).map_err(|e| e.to_string())?;
    ensure(anti.apply(&sys.a) == sys.a && anti.apply(&sys.a_star) == sys.a_star, || "anti-automorphism".into())?;

    let algebras = generate_subalgebras(&v);
    let (corner_report, corner) = corner_algebra_checks(&v, &algebras, 3);
    ensure(!corner_report.has_fail(), || format!("corner {:?}", corner_report.failures()))?;
    ensure(corner.dim() == 1, || format!("corner dimension {}", corner.dim()))?;

    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("all golden values match in {elapsed:?}"))
}

// Fuzz corpus.

/// Ids the fuzz run must report as passing on every instance.
pub const FUZZ_REQUIRED: &[&str] = &[
    "accepted_instances",
    "tridiagonal",
    "tridiagonal_star",
    "irreducible",
    "sharp",
    "split_decomposition",
    "parameter_array",
    "parameter_array_star",
    "bijections",
    "trace_nonzero",
    "vanishing_mixed_tau",
    "vanishing_mixed_tau_star",
    "factor_theta_product",
    "factor_theta_star_product",
    "zeta_equals_zeta_star",
    "zeta_trace_tau",
    "zeta_trace_tau_star",
    "zeta_trace_ratio",
    "zeta_trace_ratio_star",
    "zeta_d_closed_form",
    "zeta_d_closed_form_dual",
    "last_term_equal_zeta_d",
    "last_term_equal_weighted_sum",
    "relation_down_forward",
    "relation_down_inverse",
    "relation_ddown_forward",
    "relation_ddown_inverse",
    "relation_both_from_down_forward",
    "relation_both_from_down_inverse",
    "relation_both_from_ddown_forward",
    "relation_both_from_ddown_inverse",
    "eta_expansion",
    "eta_expansion_star",
    "bracket_expansion",
    "bracket_expansion_star",
    "form_solution_dim",
    "form_symmetric",
    "form_nondegenerate",
    "orthogonality",
    "orthogonality_star",
    "dual_parameter_array",
    "pa_distinct",
    "pa_zeta",
    "pa_beta",
    "corner_EDE_commute",
    "corner_generated",
    "corner_commutative",
    "corner_dimension",
    "corner_field",
    "isomorphism_conjecture",
];

pub const FUZZ_TRIALS: usize = 200;

pub fn fuzz_corpus(field: FieldDescriptor, seed: u64, trials: usize) -> FuzzOutcome {
    let mut config = RunConfig::new(seed, trials, 5, field);
    config.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    run_fuzz(&config).expect("valid configuration")
}

pub fn check_fuzz(outcome: &FuzzOutcome) -> Result<String, String> {
    let r = &outcome.report;
    ensure(outcome.accepted() == outcome.trials.len(), || format!("{} accepted", outcome.accepted()))?;
    let bad: Vec<String> = r
        .checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| format!("{} {} {:?}", c.id, c.status, c.witness))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    for id in FUZZ_REQUIRED {
        ensure(r.checks.iter().any(|c| c.id == *id), || format!("{id} never ran"))?;
    }
    ensure(outcome.counterexamples.is_empty(), || "counterexamples recorded".into())?;
    let trials = r.trials.as_ref().ok_or("no trial summaries")?;
    for d in 1..=5 {
        ensure(trials.iter().any(|t| t.d == d), || format!("no instance with d = {d}"))?;
    }
    ensure(trials.iter().all(|t| (t.d >= 3) == (t.strategy == "geometric")), || {
        "geometric eigenvalues not used exactly for d >= 3".into()
    })?;
    Ok(format!("{} instances", outcome.accepted()))
}

pub fn criterion_fuzz(corpora: &[(FuzzOutcome, Duration)]) -> Outcome {
    let mut parts = Vec::new();
    let mut total = Duration::ZERO;
    for (outcome, elapsed) in corpora {
        let summary = check_fuzz(outcome)?;
        let field = outcome
            .report
            .config
            .as_ref()
            .and_then(|c| serde_json::from_value::<FieldDescriptor>(c["field"].clone()).ok())
            .map_or("?".into(), |f| f.to_string());
        parts.push(format!("{field}: {summary}"));
        total += *elapsed;
    }
    let count: usize = corpora.iter().map(|(o, _)| o.accepted()).sum();
    ensure(count >= 200, || format!("only {count} instances"))?;
    ensure(total < Duration::from_secs(300), || format!("took {total:?}"))?;
    Ok(format!("{} in {total:?}", parts.join(", ")))
}

// Brackets.

/// `[r,s,t]_q` straight from the product formula, over the rationals.
pub fn bracket_oracle_q(r: usize, s: usize, t: usize, q: &BigRational) -> BigRational {
    let poch = |k: usize| {
        let mut acc = BigRational::one();
        let mut p = BigRational::one();
        for _ in 0..k {
            p *= q;
            acc *= BigRational::one() - &p;
        }
        acc
    };
    if r == 0 || s == 0 || t == 0 {
        return BigRational::one();
    }
    poch(r + s) * poch(r + t) * poch(s + t) / (poch(r) * poch(s) * poch(t) * poch(r + s + t))
}

/// The same over GF(p), with inverses by Fermat.
pub fn bracket_oracle_p(r: usize, s: usize, t: usize, q: u64, p: u64) -> u64 {
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    };
    let poch = |k: usize| (1..=k as u64).fold(1, |acc, j| mul(acc, (1 + p - pow(q, j)) % p));
    if r == 0 || s == 0 || t == 0 {
        return 1;
    }
    let num = mul(mul(poch(r + s), poch(r + t)), poch(s + t));
    let den = mul(mul(mul(poch(r), poch(s)), poch(t)), poch(r + s + t));
    mul(num, pow(den, p - 2))
}

fn generic<F: Field>(q: F::Elem) -> QData<F> {
    QData { beta: None, q: QValue::Generic(q), note: String::new() }
}

const MAX_ARG: usize = 6;

fn permutations(r: usize, s: usize, t: usize) -> [(usize, usize, usize); 6] {
    [(r, s, t), (r, t, s), (s, r, t), (s, t, r), (t, r, s), (t, s, r)]
}

/// Symmetry, `q ↔ q⁻¹` invariance and agreement with `oracle` for every
/// `r, s, t ≤ 6`.
fn bracket_sweep<F: Field>(
    field: &F,
    q: &F::Elem,
    oracle: impl Fn(usize, usize, usize) -> F::Elem,
) -> Result<(), String> {
    let qd = generic::<F>(q.clone());
    let inv = generic::<F>(field.inv(q).ok_or("q = 0")?);
    for r in 0..=MAX_ARG {
        for s in 0..=MAX_ARG {
            for t in 0..=MAX_ARG {
                let value = bracket(field, r, s, t, &qd).map_err(|e| format!("[{r},{s},{t}]: {e}"))?;
                ensure(value == oracle(r, s, t), || format!("[{r},{s},{t}] differs from the product formula"))?;
                for (a, b, c) in permutations(r, s, t) {
                    let other = bracket(field, a, b, c, &qd).map_err(|e| e.to_string())?;
                    ensure(other == value, || format!("[{r},{s},{t}] is not symmetric"))?;
                }
                let flipped = bracket(field, r, s, t, &inv).map_err(|e| e.to_string())?;
                ensure(flipped == value, || format!("[{r},{s},{t}] changes under q -> 1/q"))?;
            }
        }
    }
    Ok(())
}

pub const BRACKET_SAMPLES: usize = 50;

/// Seeded `q` away from roots of unity of order up to `3·6`, where the
/// Pochhammer ratio is undefined.
pub fn sample_qs_rational(seed: u64) -> Vec<BigRational> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < BRACKET_SAMPLES {
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=9);
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        if !x.is_zero() && x != q(1) && x != q(-1) {
            out.push(x);
        }
    }
    out
}

pub fn sample_qs_prime(seed: u64, p: u64) -> Vec<u64> {
    let f = PrimeField::new(p).expect("prime");
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < BRACKET_SAMPLES {
        let x = rng.gen_range(2..p);
        if (1..=(3 * MAX_ARG) as u64).all(|k| f.pow(&x, k) != 1) {
            out.push(x);
        }
    }
    out
}

pub fn criterion_brackets() -> Outcome {
    let f = Rationals;
    for x in sample_qs_rational(31) {
        bracket_sweep(&f, &x, |r, s, t| bracket_oracle_q(r, s, t, &x))?;
    }
    let g = PrimeField::new(P).map_err(|e| e.to_string())?;
    for x in sample_qs_prime(37, P) {
        bracket_sweep(&g, &x, |r, s, t| bracket_oracle_p(r, s, t, x, P))?;
    }
    let nine_sevenths = BigRational::new(BigInt::from(9), BigInt::from(7));
    let v = bracket(&f, 1, 1, 1, &generic::<Rationals>(q(2))).map_err(|e| e.to_string())?;
    ensure(v == nine_sevenths, || format!("[1,1,1] at q = 2 is {v}"))?;
    let none = QData::<Rationals>::undetermined("no q");
    for (r, s, t) in [(0, 0, 0), (0, 3, 4), (5, 0, 2), (6, 6, 0)] {
        ensure(bracket(&f, r, s, t, &none).ok() == Some(q(1)), || format!("[{r},{s},{t}] without q"))?;
    }
    Ok(format!("{} values of q per field, r, s, t <= {MAX_ARG}", BRACKET_SAMPLES))
}

// Seeded validated instances.

pub fn random_validated<F: Field>(field: &F, d: usize, rng: &mut SplitMix64) -> Validated<F> {
    loop {
        let Some(c) = random_candidate(field, d, rng) else {
            continue;
        };
        let v = validate(&c.system, ValidateOptions::default());
        if v.report.has_fail() {
            continue;
        }
        if let Some(v) = v.validated {
            return v;
        }
    }
}

fn orderings_ok<F: Field>(v: &Validated<F>) -> Result<(), String> {
    let k = v.system.d() + 1;
    let forward: Vec<usize> = (0..k).collect();
    let backward: Vec<usize> = (0..k).rev().collect();
    let o = enumerate_standard_orderings(v).map_err(|e| e.to_string())?;
    for (name, list) in [("A", &o.a), ("A*", &o.a_star)] {
        ensure(list.len() == 2 && list.contains(&forward) && list.contains(&backward), || {
            format!("{name} has standard orderings {list:?}")
        })?;
    }
    Ok(())
}

pub fn criterion_orderings() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(41);
    let g = PrimeField::new(P).map_err(|e| e.to_string())?;
    for k in 0..20 {
        let d = 2 + k % 2;
        if k < 10 {
            orderings_ok(&random_validated(&Rationals, d, &mut rng))?;
        } else {
            orderings_ok(&random_validated(&g, d, &mut rng))?;
        }
    }
    Ok("20 instances with exactly 2 orderings for A and for A*".into())
}

const ISO_IDS: [&str; 3] = ["isomorphic_conjugates", "reversed_not_isomorphic", "isomorphism_conjecture"];

pub fn criterion_isomorphism(corpora: &[&FuzzOutcome]) -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(43);
    let g = PrimeField::new(P).map_err(|e| e.to_string())?;
    for k in 0..10 {
        let d = 1 + k % 3;
        let v = random_validated(&Rationals, d, &mut rng);
        all_pass(&isomorphism_suite(&v, 10, &mut rng, ValidateOptions::default()), &ISO_IDS)
            .map_err(|e| format!("rational instance {k}: {e}"))?;
        let v = random_validated(&g, d + 1, &mut rng);
        all_pass(&isomorphism_suite(&v, 10, &mut rng, ValidateOptions::default()), &ISO_IDS)
            .map_err(|e| format!("GF({P}) instance {k}: {e}"))?;
    }
    let mut corpus = 0;
    for outcome in corpora {
        all_pass(&tdlab::report::Report { checks: outcome.report.checks.clone() }, &ISO_IDS)?;
        corpus += outcome.accepted();
    }
    Ok(format!("20 instances x 10 conjugates; no disagreements on {corpus} fuzz instances"))
}

// Negative instances.

fn expect_reducible<F: Field>(sys: &TdSystem<F>, label: &str) -> Result<(), String> {
    let v = validate(sys, ValidateOptions::default());
    ensure(v.report.status_of("irreducible") == Some(Status::Fail), || format!("{label}: not rejected"))?;
    let w = v.witness.as_ref().ok_or_else(|| format!("{label}: no witness"))?;
    ensure(witness_is_invariant(sys, w), || format!("{label}: witness is not invariant"))
}

/// Leonard data with `θ_i = 2^i`, `θ*_i = 5·2^i + 1` and the free parameter
/// chosen so that `φ_1 = 0`.
pub fn phi_zero_system<F: Field>(field: &F, d: usize) -> TdSystem<F> {
    let two = field.from_i64(2);
    let thetas: Vec<F::Elem> = (0..=d as u64).map(|i| field.pow(&two, i)).collect();
    let thetas_star: Vec<F::Elem> =
        thetas.iter().map(|t| field.add(&field.mul(&field.from_i64(5), t), &field.one())).collect();
    let free = field.neg(&field.mul(&field.sub(&thetas_star[1], &thetas_star[0]), &field.sub(&thetas[0], &thetas[d])));
    let phis = leonard_phis(field, &thetas, &thetas_star, &free).expect("distinct eigenvalues");
    assert!(field.is_zero(&phis[0]));
    let (sys, validation, _) =
        gen_leonard_split(field, &thetas, &thetas_star, &phis, ValidateOptions::default()).expect("well-formed data");
    assert!(validation.report.has_fail());
    sys
}

pub fn criterion_negatives() -> Outcome {
    expect_reducible(&load_rational("diag_reducible.json"), "diag/diag")?;
    let f = Rationals;
    let diag3 = TdSystem::new(
        &f,
        Matrix::diagonal(&f, &[q(0), q(1), q(2)]),
        Matrix::diagonal(&f, &[q(5), q(7), q(9)]),
        vec![q(0), q(1), q(2)],
        vec![q(5), q(7), q(9)],
    )
    .map_err(|e| e.to_string())?;
    expect_reducible(&diag3, "diag/diag d=2")?;
    for d in 1..=3 {
        expect_reducible(&phi_zero_system(&Rationals, d), &format!("phi_1 = 0, d = {d}"))?;
        let g = PrimeField::new(P).map_err(|e| e.to_string())?;
        expect_reducible(&phi_zero_system(&g, d), &format!("phi_1 = 0 over GF({P}), d = {d}"))?;
    }
    Ok("8 reducible instances rejected with invariant witnesses".into())
}

pub fn criterion_determinism() -> Outcome {
    let args = ["fuzz", "--trials", "25", "--seed", "7"];
    let a = tdlab(&args);
    let b = tdlab(&args);
    ensure(a.status.code() == Some(0), || {
        format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr))
    })?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}
