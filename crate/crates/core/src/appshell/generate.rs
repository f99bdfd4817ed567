//! Instance generators: the bidiagonal Leonard construction and the seeded
//! random stream used by the fuzzer.
//!
//! Seeds: trial `k` of a run with root seed `s` uses the `(k+1)`-th output
//! of SplitMix64 started from state `s` (increment `0x9e3779b97f4a7c15`,
//! then the standard xor-shift-multiply finalizer). Each trial then draws
//! from its own SplitMix64 stream, so trials are independent of scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrices::Matrix;
use crate::polys::check_distinct;
use crate::report::Report;
use crate::scalars::{Field, FieldDescriptor};
use crate::splitparam::parameter_array;
use crate::tdcore::{validate, IrreducibilityStrategy, TdSystem, ValidateOptions, Validation};

/// Candidates drawn per trial before giving up.
pub const MAX_ATTEMPTS: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: usize,
    pub d_max: usize,
    pub field: FieldDescriptor,
    pub strategy: IrreducibilityStrategy,
    /// Worker threads; has no effect on the output.
    pub jobs: usize,
    pub chain_depth: usize,
}

impl RunConfig {
    pub fn new(seed: u64, trials: usize, d_max: usize, field: FieldDescriptor) -> Self {
        RunConfig {
            seed,
            trials,
            d_max,
            field,
            strategy: IrreducibilityStrategy::Auto,
            jobs: 1,
            chain_depth: crate::conjlab::DEFAULT_CHAIN_DEPTH,
        }
    }

    pub fn check(&self) -> Result<()> {
        self.field.validated()?;
        if !(1..=8).contains(&self.d_max) {
            return Err(Error::InvalidInput(format!("d-max must be in 1..=8, got {}", self.d_max)));
        }
        if self.chain_depth == 0 {
            return Err(Error::InvalidInput("chain depth must be positive".into()));
        }
        if self.field.characteristic() == 2 {
            return Err(Error::InvalidInput("the generator needs more than two field elements".into()));
        }
        Ok(())
    }

    /// Everything that determines the report; `jobs` is left out.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "d_max": self.d_max,
            "field": self.field,
            "irreducibility": self.strategy.name(),
            "chain_depth": self.chain_depth,
        })
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of trial `index` under root seed `root`.
pub fn split_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(root: u64, index: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(split_seed(root, index))
}

/// `A` lower bidiagonal with diagonal `θ` and subdiagonal 1, `A*` upper
/// bidiagonal with diagonal `θ*` and superdiagonal `φ`.
pub fn leonard_split_system<F: Field>(
    field: &F,
    thetas: &[F::Elem],
    thetas_star: &[F::Elem],
    phis: &[F::Elem],
) -> Result<TdSystem<F>> {
    if thetas.is_empty() || thetas.len() != thetas_star.len() || phis.len() + 1 != thetas.len() {
        return Err(Error::ShapeMismatch(format!(
            "theta, theta_star, phi have lengths {}, {}, {}",
            thetas.len(),
            thetas_star.len(),
            phis.len()
        )));
    }
    check_distinct::<F>(thetas)?;
    check_distinct::<F>(thetas_star)?;
    let n = thetas.len();
    let a = Matrix::from_fn(field, n, n, |i, j| {
        if i == j {
            thetas[i].clone()
        } else if i == j + 1 {
            field.one()
        } else {
            field.zero()
        }
    });
    let a_star = Matrix::from_fn(field, n, n, |i, j| {
        if i == j {
            thetas_star[i].clone()
        } else if j == i + 1 {
            phis[i].clone()
        } else {
            field.zero()
        }
    });
    TdSystem::new(field, a, a_star, thetas.to_vec(), thetas_star.to_vec())
}

/// `ζ_i = φ_1 ⋯ φ_i`.
pub fn cumulative_products<F: Field>(field: &F, phis: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![field.one()];
    for p in phis {
        let next = field.mul(out.last().expect("nonempty"), p);
        out.push(next);
    }
    out
}

/// Build, validate, and compare the split sequence with the cumulative
/// products of `φ`. Rejected candidates come back with their reports.
pub fn gen_leonard_split<F: Field>(
    field: &F,
    thetas: &[F::Elem],
    thetas_star: &[F::Elem],
    phis: &[F::Elem],
    options: ValidateOptions,
) -> Result<(TdSystem<F>, Validation<F>, Report)> {
    let sys = leonard_split_system(field, thetas, thetas_star, phis)?;
    let validation = validate(&sys, options);
    let mut report = validation.report.clone();
    match validation.sharp() {
        Some(v) if !validation.report.has_fail() => match parameter_array(v) {
            Ok(pa) => {
                let expected = cumulative_products(field, phis);
                report.check("generator_split_sequence", pa.zetas == expected, || {
                    let show = |v: &[F::Elem]| v.iter().map(|x| field.format(x)).collect::<Vec<_>>().join(",");
                    format!("({}) vs ({})", show(&pa.zetas), show(&expected))
                });
            }
            Err(e) => report.fail("generator_split_sequence", e.to_string()),
        },
        _ => report.skip("generator_split_sequence", "candidate rejected"),
    }
    Ok((sys, validation, report))
}

/// `φ_i = ϕ_1 Σ_{h<i} (θ_h − θ_{d−h})/(θ_0 − θ_d) + (θ*_i − θ*_0)(θ_{i−1} − θ_d)`,
/// the first sequence of a Leonard system with second sequence starting
/// at `ϕ_1`.
pub fn leonard_phis<F: Field>(
    field: &F,
    thetas: &[F::Elem],
    thetas_star: &[F::Elem],
    phi1: &F::Elem,
) -> Result<Vec<F::Elem>> {
    check_distinct::<F>(thetas)?;
    if thetas.is_empty() || thetas.len() != thetas_star.len() {
        return Err(Error::ShapeMismatch("eigenvalue sequences differ in length".into()));
    }
    let d = thetas.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let spread = field.sub(&thetas[0], &thetas[d]);
    let mut partial = field.zero();
    let phis = (1..=d)
        .map(|i| {
            let term = field.div(&field.sub(&thetas[i - 1], &thetas[d - i + 1]), &spread).expect("distinct");
            partial = field.add(&partial, &term);
            let tail = field.mul(&field.sub(&thetas_star[i], &thetas_star[0]), &field.sub(&thetas[i - 1], &thetas[d]));
            field.add(&field.mul(phi1, &partial), &tail)
        })
        .collect();
    Ok(phis)
}

fn random_scalar<F: Field>(field: &F, rng: &mut impl RngCore) -> F::Elem {
    match field.order() {
        Some(p) => field.element(rng.gen_range(0..p)).expect("residue"),
        None => field.from_i64(rng.gen_range(-12..=12)),
    }
}

fn random_nonzero<F: Field>(field: &F, rng: &mut impl RngCore) -> F::Elem {
    loop {
        let x = random_scalar(field, rng);
        if !field.is_zero(&x) {
            return x;
        }
    }
}

fn random_distinct<F: Field>(field: &F, len: usize, rng: &mut impl RngCore) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> = Vec::with_capacity(len);
    while out.len() < len {
        let x = random_scalar(field, rng);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A ratio `q` with `q^j ≠ 1` for `1 ≤ j ≤ d`; small fractions over ℚ.
fn random_q<F: Field>(field: &F, d: usize, rng: &mut impl RngCore) -> F::Elem {
    loop {
        let q = match field.order() {
            Some(_) => random_nonzero(field, rng),
            None => {
                let num = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
                field.from_ratio(num, rng.gen_range(1..=3)).expect("nonzero denominator")
            }
        };
        if (1..=d).all(|j| !field.is_one(&field.pow(&q, j as u64))) {
            return q;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenStrategy {
    /// Random distinct eigenvalues; used for `d ≤ 2`.
    Distinct,
    /// `θ_i = c q^i`, `θ*_i = c* q^i`; used for `d ≥ 3`.
    Geometric,
}

impl GenStrategy {
    pub fn for_diameter(d: usize) -> Self {
        if d <= 2 {
            GenStrategy::Distinct
        } else {
            GenStrategy::Geometric
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GenStrategy::Distinct => "distinct",
            GenStrategy::Geometric => "geometric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Candidate<F: Field> {
    /// The bidiagonal system before the change of basis.
    pub split_form: TdSystem<F>,
    /// The system in a random basis.
    pub system: TdSystem<F>,
    pub phis: Vec<F::Elem>,
}

/// Unit upper triangular with small random entries.
pub fn random_unipotent<F: Field>(field: &F, n: usize, rng: &mut impl RngCore) -> Matrix<F> {
    let mut m = Matrix::identity(field, n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, field.from_i64(rng.gen_range(-2..=2)));
        }
    }
    m
}

/// Random invertible matrix: a product of a unipotent upper and a
/// transposed unipotent factor with a random nonzero diagonal.
pub fn random_invertible<F: Field>(field: &F, n: usize, rng: &mut impl RngCore) -> Matrix<F> {
    let u = random_unipotent(field, n, rng);
    let l = random_unipotent(field, n, rng).transpose();
    let diag: Vec<F::Elem> = (0..n).map(|_| random_nonzero(field, rng)).collect();
    &(&u * &Matrix::diagonal(field, &diag)) * &l
}

/// `P X P⁻¹` applied to both operators.
pub fn conjugate<F: Field>(sys: &TdSystem<F>, p: &Matrix<F>) -> TdSystem<F> {
    let pi = p.inverse().expect("invertible change of basis");
    TdSystem { a: &(p * &sys.a) * &pi, a_star: &(p * &sys.a_star) * &pi, ..sys.clone() }
}

/// One candidate of diameter `d`, or `None` when the draw produced a zero
/// `φ_i`.
pub fn random_candidate<F: Field>(field: &F, d: usize, rng: &mut impl RngCore) -> Option<Candidate<F>> {
    let (thetas, thetas_star) = match GenStrategy::for_diameter(d) {
        GenStrategy::Distinct => (random_distinct(field, d + 1, rng), random_distinct(field, d + 1, rng)),
        GenStrategy::Geometric => {
            let q = random_q(field, d, rng);
            let c = random_nonzero(field, rng);
            let c_star = random_nonzero(field, rng);
            let geo = |c: &F::Elem| (0..=d).map(|i| field.mul(c, &field.pow(&q, i as u64))).collect::<Vec<_>>();
            (geo(&c), geo(&c_star))
        }
    };
    let phi1 = random_nonzero(field, rng);
    let phis = leonard_phis(field, &thetas, &thetas_star, &phi1).ok()?;
    if phis.iter().any(|p| field.is_zero(p)) {
        return None;
    }
    let split_form = leonard_split_system(field, &thetas, &thetas_star, &phis).ok()?;
    let p = random_unipotent(field, d + 1, rng);
    let system = conjugate(&split_form, &p);
    Some(Candidate { split_form, system, phis })
}
