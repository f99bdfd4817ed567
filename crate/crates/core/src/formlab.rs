//! Invariant bilinear forms, the anti-automorphism they induce, dual
//! systems, and isomorphism testing between systems.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::matrices::{intertwiner_space, Matrix};
use crate::report::{Report, Status};
use crate::scalars::Field;
use crate::splitparam::{parameter_array, ParameterArray};
use crate::tdcore::{validate, IdempotentFamily, TdSystem, ValidateOptions, Validated};

/// `⟨u, v⟩ = uᵀ G v`.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm<F: Field> {
    pub gram: Matrix<F>,
    /// Dimension of `{G : GA = AᵀG, GA* = A*ᵀG}`.
    pub solution_dim: usize,
}

/// Solutions of the compatibility equations, normalized so the first
/// nonzero entry (row-major) is 1. The returned report records the
/// dimension, symmetry and nondegeneracy checks individually.
pub fn invariant_form_report<F: Field>(v: &Validated<F>) -> (Report, Option<BilinearForm<F>>) {
    let sys = &v.system;
    let f = &sys.field;
    let n = sys.n();
    let mut report = Report::new();
    let space = intertwiner_space(&sys.a, &sys.a_star, &sys.a.transpose(), &sys.a_star.transpose())
        .expect("matrices of one system share field and size");
    let solution_dim = space.dim();
    if solution_dim == 0 {
        report.fail("form_solution_dim", "no nonzero compatible form (counterexample candidate)");
        report.skip("form_symmetric", "no form");
        report.skip("form_nondegenerate", "no form");
        return (report, None);
    }
    report.check("form_solution_dim", solution_dim == 1, || {
        format!("solution space has dimension {solution_dim} (counterexample candidate)")
    });
    // Rows of the basis are in rref, so the leading entry is already 1.
    let first = space.basis_vectors().remove(0);
    let gram = Matrix::from_vec(f, n, n, first).expect("n² entries");
    report.check("form_symmetric", gram == gram.transpose(), || format!("G = {:?}", gram.to_text()));
    let det = gram.det();
    report.check("form_nondegenerate", !f.is_zero(&det), || "det G = 0".into());
    (report, Some(BilinearForm { gram, solution_dim }))
}

/// The form, or an error naming the first failed property.
pub fn invariant_form<F: Field>(v: &Validated<F>) -> Result<BilinearForm<F>> {
    let (report, form) = invariant_form_report(v);
    if let Some(c) = report.checks.iter().find(|c| c.status == Status::Fail) {
        return Err(Error::identity(&c.id, c.witness.clone().unwrap_or_default()));
    }
    Ok(form.expect("form present when no check failed"))
}

fn column_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let vecs = m.column_space().basis_vectors();
    Matrix::from_columns(m.field(), m.rows(), &vecs)
}

fn family_checks<F: Field>(report: &mut Report, suffix: &str, g: &Matrix<F>, fam: &IdempotentFamily<F>) {
    let f = g.field();
    let k = fam.len();
    let bad = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && !(&(&fam.mats[i].transpose() * g) * &fam.mats[j]).is_zero());
    report.check(format!("orthogonality{suffix}"), bad.is_none(), || {
        let (i, j) = bad.expect("failure has a pair");
        format!("eigenspaces {i} and {j} are not orthogonal")
    });
    let degenerate = (0..k).find(|&i| {
        let b = column_basis(&fam.mats[i]);
        f.is_zero(&(&(&b.transpose() * g) * &b).det())
    });
    report.check(format!("restriction_nondegenerate{suffix}"), degenerate.is_none(), || {
        format!("restriction to eigenspace {} is degenerate", degenerate.expect("failure has an index"))
    });
}

/// Orthogonality of distinct eigenspaces of `A` and of `A*`, and
/// nondegeneracy of the form on each.
pub fn form_checks<F: Field>(form: &BilinearForm<F>, v: &Validated<F>) -> Report {
    let mut report = Report::new();
    family_checks(&mut report, "", &form.gram, &v.e);
    family_checks(&mut report, "_star", &form.gram, &v.e_star);
    report
}

/// `X ↦ R⁻¹ Xᵀ R`.
#[derive(Clone, Debug)]
pub struct AntiMap<F: Field> {
    pub conjugator: Matrix<F>,
    inverse: Matrix<F>,
}

impl<F: Field> AntiMap<F> {
    pub fn new(conjugator: Matrix<F>) -> Result<Self> {
        let inverse = conjugator.inverse().ok_or_else(|| Error::InvalidInput("conjugator is singular".into()))?;
        Ok(AntiMap { conjugator, inverse })
    }

    pub fn apply(&self, x: &Matrix<F>) -> Matrix<F> {
        &(&self.inverse * &x.transpose()) * &self.conjugator
    }
}

/// Seed of the fixed sample used to test the anti-automorphism.
const SAMPLE_SEED: u64 = 0x5eed_a471;
const RANDOM_SAMPLES: usize = 6;

fn sample_matrices<F: Field>(v: &Validated<F>) -> Vec<Matrix<F>> {
    let sys = &v.system;
    let f = &sys.field;
    let mut base = vec![Matrix::identity(f, sys.n()), sys.a.clone(), sys.a_star.clone()];
    base.extend(v.e.mats.iter().cloned());
    base.extend(v.e_star.mats.iter().cloned());
    let mut rng = SplitMix64::seed_from_u64(SAMPLE_SEED);
    let mut out = base.clone();
    for _ in 0..RANDOM_SAMPLES {
        let mut x = Matrix::zeros(f, sys.n(), sys.n());
        for _ in 0..3 {
            let word = (0..rng.gen_range(1..=3))
                .fold(Matrix::identity(f, sys.n()), |acc, _| &acc * &base[rng.gen_range(0..base.len())]);
            x = &x + &word.scale(&f.from_i64(rng.gen_range(-3..=3)));
        }
        out.push(x);
    }
    out
}

/// The anti-automorphism with conjugator `G`, checked on a fixed sample.
pub fn anti_automorphism<F: Field>(form: &BilinearForm<F>, v: &Validated<F>) -> (Report, Option<AntiMap<F>>) {
    let mut report = Report::new();
    let map = match AntiMap::new(form.gram.clone()) {
        Ok(m) => m,
        Err(e) => {
            report.fail("anti_automorphism", e.to_string());
            return (report, None);
        }
    };
    let sys = &v.system;
    report.check("anti_fixes_A", map.apply(&sys.a) == sys.a, || "A† != A".into());
    report.check("anti_fixes_Astar", map.apply(&sys.a_star) == sys.a_star, || "A*† != A*".into());
    let sample = sample_matrices(v);
    let images: Vec<Matrix<F>> = sample.iter().map(|x| map.apply(x)).collect();
    let bad = sample.iter().zip(&images).position(|(x, y)| map.apply(y) != *x);
    report.check("anti_involution", bad.is_none(), || format!("sample {bad:?}"));
    let bad = sample.iter().zip(&images).position(|(x, y)| y.trace() != x.trace());
    report.check("anti_trace", bad.is_none(), || format!("sample {bad:?}"));
    // products of idempotents are mostly zero, so pairs skip them
    let words: Vec<usize> = (0..3).chain(sample.len() - RANDOM_SAMPLES..sample.len()).collect();
    let bad = words.iter().find_map(|&i| {
        words.iter().find(|&&j| map.apply(&(&sample[i] * &sample[j])) != &images[j] * &images[i]).map(|&j| (i, j))
    });
    report.check("anti_multiplicative", bad.is_none(), || format!("sample pair {bad:?}"));
    (report, Some(map))
}

/// `(Aᵀ, A*ᵀ)` with the same eigenvalue sequences.
pub fn dual_system<F: Field>(sys: &TdSystem<F>) -> TdSystem<F> {
    TdSystem { a: sys.a.transpose(), a_star: sys.a_star.transpose(), ..sys.clone() }
}

/// Validate the dual and compare shape and parameter array.
pub fn dual_checks<F: Field>(v: &Validated<F>, options: ValidateOptions) -> Report {
    let mut report = Report::new();
    let dual = validate(&dual_system(&v.system), options);
    let Some(dv) = dual.validated.filter(|_| !dual.report.has_fail()) else {
        report.fail("dual_valid", dual.report.failures().join("; "));
        return report;
    };
    report.pass("dual_valid");
    report.check("dual_shape", dv.shape == v.shape, || format!("{:?} vs {:?}", dv.shape.rho, v.shape.rho));
    if v.is_sharp() {
        let ours = parameter_array(v);
        let theirs = parameter_array(&dv);
        match (ours, theirs) {
            (Ok(a), Ok(b)) => {
                report.check("dual_parameter_array", a == b, || {
                    format!("{:?} vs {:?}", a.to_text(&v.system.field), b.to_text(&v.system.field))
                });
            }
            (Err(e), _) | (_, Err(e)) => report.fail("dual_parameter_array", e.to_string()),
        }
    } else {
        report.skip("dual_parameter_array", "system is not sharp");
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsoVerdict<F: Field> {
    Isomorphic(Matrix<F>),
    NotIsomorphic(String),
}

#[derive(Clone, Debug)]
pub struct Isomorphism<F: Field> {
    pub verdict: IsoVerdict<F>,
    /// Checks on the witness `γ`.
    pub report: Report,
    /// Whether the parameter arrays agree, when both systems are sharp.
    pub arrays_equal: Option<bool>,
}

impl<F: Field> Isomorphism<F> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self.verdict, IsoVerdict::Isomorphic(_))
    }

    /// Equal parameter arrays but not isomorphic, or the reverse.
    pub fn disagrees(&self) -> bool {
        self.arrays_equal.is_some_and(|eq| eq != self.is_isomorphic())
    }
}

fn arrays<F: Field>(v: &Validated<F>) -> Option<ParameterArray<F>> {
    v.is_sharp().then(|| parameter_array(v).ok()).flatten()
}

/// Decide whether `γA = Bγ`, `γA* = B*γ` has an invertible solution.
pub fn isomorphism_test<F: Field>(v1: &Validated<F>, v2: &Validated<F>) -> Result<Isomorphism<F>> {
    let (s1, s2) = (&v1.system, &v2.system);
    if s1.field != s2.field {
        return Err(Error::FieldMismatch(s1.field.descriptor(), s2.field.descriptor()));
    }
    if s1.n() != s2.n() {
        return Err(Error::ShapeMismatch(format!("dimensions {} and {}", s1.n(), s2.n())));
    }
    let arrays_equal = match (arrays(v1), arrays(v2)) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let mut report = Report::new();
    let done = |verdict, report| Ok(Isomorphism { verdict, report, arrays_equal });
    if s1.thetas != s2.thetas || s1.thetas_star != s2.thetas_star {
        return done(IsoVerdict::NotIsomorphic("eigenvalue sequences differ".into()), report);
    }
    let space = intertwiner_space(&s1.a, &s1.a_star, &s2.a, &s2.a_star)?;
    if space.is_zero() {
        return done(IsoVerdict::NotIsomorphic("no nonzero intertwiner".into()), report);
    }
    let n = s1.n();
    let gamma = Matrix::from_vec(&s1.field, n, n, space.basis_vectors().remove(0)).expect("n² entries");
    report.check("gamma_invertible", gamma.inverse().is_some(), || "intertwiner is singular".into());
    let intertwines = &gamma * &s1.a == &s2.a * &gamma && &gamma * &s1.a_star == &s2.a_star * &gamma;
    report.check("gamma_intertwines", intertwines, || "γA != Bγ or γA* != B*γ".into());
    let idem = (0..v1.e.len()).all(|i| &gamma * &v1.e.mats[i] == &v2.e.mats[i] * &gamma)
        && (0..v1.e_star.len()).all(|i| &gamma * &v1.e_star.mats[i] == &v2.e_star.mats[i] * &gamma);
    report.check("gamma_idempotents", idem, || "γE_i != F_iγ".into());
    done(IsoVerdict::Isomorphic(gamma), report)
}

/// Everything this module checks for one system.
pub fn form_suite<F: Field>(v: &Validated<F>, options: ValidateOptions) -> (Report, Option<BilinearForm<F>>) {
    let mut report = Report::new();
    if !v.is_sharp() {
        report.skip("form_solution_dim", "system is not sharp");
        report.extend(dual_checks(v, options));
        return (report, None);
    }
    let (r, form) = invariant_form_report(v);
    let usable = !r.has_fail();
    report.extend(r);
    if let (Some(form), true) = (&form, usable) {
        report.extend(form_checks(form, v));
        report.extend(anti_automorphism(form, v).0);
    }
    report.extend(dual_checks(v, options));
    (report, form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::d4orbit::{apply_relative, D4Element};
    use crate::scalars::{PrimeField, Rationals};

    fn x1() -> Validated<Rationals> {
        let f = Rationals;
        let s = TdSystem::new(
            &f,
            Matrix::from_i64(&f, &[&[1, 0], &[1, 0]]),
            Matrix::from_i64(&f, &[&[1, 1], &[0, 0]]),
            vec![f.from_i64(1), f.zero()],
            vec![f.from_i64(1), f.zero()],
        )
        .unwrap();
        validate(&s, ValidateOptions::default()).validated.unwrap()
    }

    fn conjugate(v: &Validated<Rationals>, p: &Matrix<Rationals>) -> Validated<Rationals> {
        let pi = p.inverse().unwrap();
        let sys = TdSystem { a: &(p * &v.system.a) * &pi, a_star: &(p * &v.system.a_star) * &pi, ..v.system.clone() };
        validate(&sys, ValidateOptions::default()).validated.unwrap()
    }

    #[test]
    fn x1_form() {
        let f = Rationals;
        let v = x1();
        let form = invariant_form(&v).unwrap();
        assert_eq!(form.gram, Matrix::from_i64(&f, &[&[1, 1], &[1, -1]]));
        assert_eq!(form.solution_dim, 1);
        assert_eq!(form.gram.det(), f.from_i64(-2));
        let r = form_checks(&form, &v);
        assert_eq!(r.overall(), Status::Pass);
        let (r, map) = anti_automorphism(&form, &v);
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.failures());
        let map = map.unwrap();
        let (a, b) = (&v.system.a, &v.system.a_star);
        assert_eq!(map.apply(&(a * b)), b * a);
        assert_eq!(map.apply(&Matrix::identity(&f, 2)), Matrix::identity(&f, 2));
        let (r, _) = form_suite(&v, ValidateOptions::default());
        assert_eq!(r.overall(), Status::Pass, "{:?}", r.failures());
    }

    #[test]
    fn singleton_form_and_dual() {
        let f = PrimeField::new(13).unwrap();
        let sys =
            TdSystem::new(&f, Matrix::from_i64(&f, &[&[5]]), Matrix::from_i64(&f, &[&[7]]), vec![5], vec![7]).unwrap();
        let v = validate(&sys, ValidateOptions::default()).validated.unwrap();
        assert_eq!(invariant_form(&v).unwrap().gram, Matrix::identity(&f, 1));
        assert_eq!(dual_system(&sys), sys);
    }

    #[test]
    fn x1_dual() {
        let v = x1();
        let dual = dual_system(&v.system);
        assert_eq!(dual.a, v.system.a.transpose());
        assert_eq!(dual_system(&dual), v.system);
        assert_eq!(dual_checks(&v, ValidateOptions::default()).overall(), Status::Pass);
    }

    #[test]
    fn x1_isomorphisms() {
        let f = Rationals;
        let v = x1();
        let same = isomorphism_test(&v, &v).unwrap();
        assert_eq!(same.verdict, IsoVerdict::Isomorphic(Matrix::identity(&f, 2)));
        assert!(!same.disagrees());
        let p = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        let w = conjugate(&v, &p);
        let iso = isomorphism_test(&v, &w).unwrap();
        assert_eq!(iso.verdict, IsoVerdict::Isomorphic(p));
        assert_eq!(iso.report.overall(), Status::Pass);
        let rel = apply_relative(&v.system, D4Element::DDOWN);
        let rv = validate(&rel, ValidateOptions::default()).validated.unwrap();
        let not = isomorphism_test(&v, &rv).unwrap();
        assert!(!not.is_isomorphic());
        assert!(!not.disagrees());
    }

    #[test]
    fn isomorphism_errors() {
        let v = x1();
        let f = Rationals;
        let sys = TdSystem::new(
            &f,
            Matrix::from_i64(&f, &[&[5]]),
            Matrix::from_i64(&f, &[&[7]]),
            vec![f.from_i64(5)],
            vec![f.from_i64(7)],
        )
        .unwrap();
        let w = validate(&sys, ValidateOptions::default()).validated.unwrap();
        assert!(matches!(isomorphism_test(&v, &w), Err(Error::ShapeMismatch(_))));
    }
}
