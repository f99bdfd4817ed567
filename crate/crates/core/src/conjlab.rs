//! Subalgebras generated by `A` and `A*`, the corner algebra `E*_0 T E*_0`,
//! and screening of candidate parameter arrays.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::d4orbit::beta_ratios;
use crate::error::{Error, Result};
use crate::matrices::{algebra_closure, matrix_span, unital_closure, Matrix, Subspace};
use crate::polys::Poly;
use crate::report::{Report, Status};
use crate::scalars::{Field, Rationals};
use crate::splitparam::{eta_weighted_sum, parameter_array};
use crate::tdcore::{Validated, EXHAUSTIVE_LIMIT};

/// Default number of chain levels checked; level `k` covers two lines.
pub const DEFAULT_CHAIN_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraLabel {
    D,
    DStar,
    T,
    Corner,
}

/// A subalgebra of `End(V)` with its identity element.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis<F: Field> {
    pub label: AlgebraLabel,
    pub space: Subspace<F>,
    pub unit: Matrix<F>,
    pub n: usize,
}

impl<F: Field> SubalgebraBasis<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<Matrix<F>> {
        self.space.as_matrices(self.n)
    }
}

#[derive(Clone, Debug)]
pub struct Subalgebras<F: Field> {
    pub d: SubalgebraBasis<F>,
    pub d_star: SubalgebraBasis<F>,
    pub t: SubalgebraBasis<F>,
}

fn powers_span<F: Field>(m: &Matrix<F>, d: usize) -> Subspace<F> {
    let n = m.rows();
    let mut powers = vec![Matrix::identity(m.field(), n)];
    for k in 1..=d {
        let next = &powers[k - 1] * m;
        powers.push(next);
    }
    matrix_span(m.field(), n, n, &powers)
}

/// `D = span{A^k}`, `D* = span{A*^k}` (`k ≤ d`) and the algebra `T`
/// generated by both.
pub fn generate_subalgebras<F: Field>(v: &Validated<F>) -> Subalgebras<F> {
    let sys = &v.system;
    let (f, n, d) = (&sys.field, sys.n(), sys.d());
    let unit = Matrix::identity(f, n);
    let mk = |label, space| SubalgebraBasis { label, space, unit: unit.clone(), n };
    Subalgebras {
        d: mk(AlgebraLabel::D, powers_span(&sys.a, d)),
        d_star: mk(AlgebraLabel::DStar, powers_span(&sys.a_star, d)),
        t: mk(AlgebraLabel::T, algebra_closure(f, n, &[sys.a.clone(), sys.a_star.clone()])),
    }
}

/// Basis of `span{xy : x ∈ left, y ∈ right}`.
fn product_basis<F: Field>(field: &F, n: usize, left: &[Matrix<F>], right: &[Matrix<F>]) -> Vec<Matrix<F>> {
    let prods: Vec<Matrix<F>> = left.iter().flat_map(|x| right.iter().map(move |y| x * y)).collect();
    matrix_span(field, n, n, &prods).as_matrices(n)
}

fn span_of<F: Field>(field: &F, n: usize, mats: &[Matrix<F>]) -> Subspace<F> {
    matrix_span(field, n, n, mats)
}

fn first_noncommuting<F: Field>(basis: &[Matrix<F>]) -> Option<(usize, usize)> {
    (0..basis.len())
        .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
        .find(|&(i, j)| &basis[i] * &basis[j] != &basis[j] * &basis[i])
}

/// Line `m ≥ 1` of the chain: `E*_0 D D* D … E` with `m+1` alternating
/// factors against `E*_0 D E*_0 D … E*_0 E`, where `E` is `E_0` for odd
/// `m` and `E*_0` for even `m`.
fn chain_line<F: Field>(
    field: &F,
    n: usize,
    m: usize,
    d: &[Matrix<F>],
    d_star: &[Matrix<F>],
    e0: &Matrix<F>,
    es0: &Matrix<F>,
) -> (Subspace<F>, Subspace<F>) {
    let tail = if m % 2 == 1 { e0 } else { es0 };
    let mut lhs = vec![es0.clone()];
    for k in 0..=m {
        lhs = product_basis(field, n, &lhs, if k % 2 == 0 { d } else { d_star });
    }
    let lhs = product_basis(field, n, &lhs, std::slice::from_ref(tail));
    let mut rhs = vec![es0.clone()];
    for _ in 0..m / 2 + 1 {
        rhs = product_basis(field, n, &rhs, d);
        rhs = product_basis(field, n, &rhs, std::slice::from_ref(es0));
    }
    if m % 2 == 1 {
        rhs = product_basis(field, n, &rhs, std::slice::from_ref(e0));
    }
    (span_of(field, n, &lhs), span_of(field, n, &rhs))
}

/// Checks on `E*_0 T E*_0`: commutativity of `E*_0 D E*_0`, the chain
/// equalities for lines `1..=2·depth`, generation by `E*_0 D E*_0`, and
/// commutativity of the whole corner.
pub fn corner_algebra_checks<F: Field>(
    v: &Validated<F>,
    algebras: &Subalgebras<F>,
    depth: usize,
) -> (Report, SubalgebraBasis<F>) {
    let sys = &v.system;
    let (f, n) = (&sys.field, sys.n());
    let es0 = v.e_star.mats[0].clone();
    let e0 = v.e.mats[0].clone();
    let mut report = Report::new();
    let sandwich = |alg: &SubalgebraBasis<F>| {
        let mats: Vec<Matrix<F>> = alg.basis().iter().map(|x| &(&es0 * x) * &es0).collect();
        span_of(f, n, &mats)
    };
    let corner_space = sandwich(&algebras.t);
    let ede = sandwich(&algebras.d);
    let ede_basis = ede.as_matrices(n);
    let bad = first_noncommuting(&ede_basis);
    report.check("corner_EDE_commute", bad.is_none(), || format!("basis elements {bad:?} do not commute"));

    let d_basis = algebras.d.basis();
    let ds_basis = algebras.d_star.basis();
    for m in 1..=2 * depth {
        let (lhs, rhs) = chain_line(f, n, m, &d_basis, &ds_basis, &e0, &es0);
        let ok = lhs.contains(&rhs) && rhs.contains(&lhs);
        report.check(format!("corner_chain_{m}"), ok, || format!("dimensions {} and {}", lhs.dim(), rhs.dim()));
    }

    let generated = unital_closure(f, n, es0.clone(), &ede_basis);
    let ok = generated.contains(&corner_space) && corner_space.contains(&generated);
    report.check("corner_generated", ok, || {
        format!("generated dimension {} vs corner dimension {}", generated.dim(), corner_space.dim())
    });
    let corner_basis = corner_space.as_matrices(n);
    let bad = first_noncommuting(&corner_basis);
    report.check("corner_commutative", bad.is_none(), || format!("basis elements {bad:?} do not commute"));
    let corner = SubalgebraBasis { label: AlgebraLabel::Corner, space: corner_space, unit: es0, n };
    (report, corner)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldVerdict {
    Field,
    NotField(String),
    Inconclusive(String),
}

enum RootSearch<F: Field> {
    Found(F::Elem),
    NoRoot,
    Unknown,
}

/// Bound on the absolute values of the end coefficients for the rational
/// root test.
const RATIONAL_ROOT_BOUND: i128 = 1_000_000_000_000;

fn divisors(m: i128) -> Vec<i128> {
    let m = m.abs();
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= m {
        if m % k == 0 {
            out.push(k);
            out.push(m / k);
        }
        k += 1;
    }
    out
}

fn rational_root(coeffs: &[BigRational]) -> Option<RootSearch<Rationals>> {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
    if ints[0].is_zero() {
        return Some(RootSearch::Found(BigRational::zero()));
    }
    let (c0, ck) = (ints[0].to_i128()?, ints.last()?.to_i128()?);
    if c0.abs() > RATIONAL_ROOT_BOUND || ck.abs() > RATIONAL_ROOT_BOUND {
        return None;
    }
    let poly = Poly::from_coeffs(&Rationals, coeffs.to_vec());
    for a in divisors(c0) {
        for b in divisors(ck) {
            for sign in [1, -1] {
                let r = BigRational::new(BigInt::from(sign * a), BigInt::from(b));
                if poly.eval(&r).is_zero() {
                    return Some(RootSearch::Found(r));
                }
            }
        }
    }
    Some(RootSearch::NoRoot)
}

fn find_root<F: Field>(p: &Poly<F>) -> RootSearch<F> {
    let f = p.field();
    if f.characteristic() == 0 {
        let coeffs: Option<Vec<BigRational>> = p.coeffs().iter().map(|c| Rationals.parse(&f.format(c)).ok()).collect();
        return match coeffs.and_then(|c| rational_root(&c)) {
            Some(RootSearch::Found(r)) => match f.parse(&Rationals.format(&r)) {
                Ok(x) => RootSearch::Found(x),
                Err(_) => RootSearch::Unknown,
            },
            Some(RootSearch::NoRoot) => RootSearch::NoRoot,
            _ => RootSearch::Unknown,
        };
    }
    match f.order() {
        Some(q) if q <= EXHAUSTIVE_LIMIT => (0..q)
            .filter_map(|k| f.element(k))
            .find(|x| f.is_zero(&p.eval(x)))
            .map_or(RootSearch::NoRoot, RootSearch::Found),
        _ => RootSearch::Unknown,
    }
}

/// Minimal polynomial of `g` inside an algebra with identity `unit`.
fn minimal_polynomial<F: Field>(g: &Matrix<F>, unit: &Matrix<F>, max_degree: usize) -> Poly<F> {
    let f = g.field();
    let mut powers = vec![unit.clone()];
    loop {
        let k = powers.len();
        let next = &powers[k - 1] * g;
        let cols: Vec<Vec<F::Elem>> = powers.iter().map(Matrix::vectorize).collect();
        let basis = Matrix::from_columns(f, next.rows() * next.cols(), &cols);
        let target = next.vectorize();
        // Solve Σ c_j g^j = g^k through the kernel of [powers | −g^k].
        let aug = basis.hstack(&Matrix::from_columns(f, target.len(), &[target.iter().map(|x| f.neg(x)).collect()]));
        let kernel = aug.kernel();
        if let Some(sol) = kernel.basis_vectors().into_iter().find(|v| !f.is_zero(&v[k])) {
            let scale = f.inv(&sol[k]).expect("nonzero");
            let mut coeffs: Vec<F::Elem> = sol[..k].iter().map(|x| f.neg(&f.mul(x, &scale))).collect();
            coeffs.push(f.one());
            return Poly::from_coeffs(f, coeffs);
        }
        assert!(k <= max_degree, "minimal polynomial degree exceeds the algebra dimension");
        powers.push(next);
    }
}

fn invertible_in<F: Field>(x: &Matrix<F>, basis: &[Matrix<F>]) -> bool {
    let prods: Vec<Matrix<F>> = basis.iter().map(|b| x * b).collect();
    matrix_span(x.field(), x.rows(), x.cols(), &prods).dim() == basis.len()
}

/// Whether the corner is a field with identity `E*_0`.
pub fn field_check<F: Field>(corner: &SubalgebraBasis<F>, a: &Matrix<F>) -> FieldVerdict {
    let basis = corner.basis();
    let unit = &corner.unit;
    let f = unit.field();
    if let Some((i, j)) = first_noncommuting(&basis) {
        return FieldVerdict::NotField(format!("basis elements {i} and {j} do not commute"));
    }
    if basis.iter().any(|b| &(unit * b) != b || &(b * unit) != b) {
        return FieldVerdict::NotField("E*_0 is not the identity of the corner".into());
    }
    let dim = basis.len();
    if dim == 1 {
        return FieldVerdict::Field;
    }
    if let Some(p) = f.order() {
        let total = (p as u128).checked_pow(dim as u32);
        if total.is_some_and(|t| t <= EXHAUSTIVE_LIMIT as u128) {
            let total = total.expect("checked") as u64;
            for code in 1..total {
                let mut c = code;
                let mut x = Matrix::zeros(f, corner.n, corner.n);
                for b in &basis {
                    let coef = f.element(c % p).expect("residue");
                    c /= p;
                    x = &x + &b.scale(&coef);
                }
                if !invertible_in(&x, &basis) {
                    return FieldVerdict::NotField(format!("zero divisor {:?}", x.to_text()));
                }
            }
            return FieldVerdict::Field;
        }
    }
    let g = &(unit * a) * unit;
    let m = minimal_polynomial(&g, unit, dim);
    let deg = m.degree().expect("nonzero");
    if m.gcd(&m.derivative()).degree() != Some(0) {
        return FieldVerdict::NotField("E*_0 A E*_0 has a repeated factor in its minimal polynomial".into());
    }
    match find_root(&m) {
        RootSearch::Found(r) if deg >= 2 => {
            FieldVerdict::NotField(format!("E*_0 A E*_0 - {} E*_0 is a zero divisor", f.format(&r)))
        }
        RootSearch::NoRoot if deg == dim && deg <= 3 => FieldVerdict::Field,
        _ if deg < dim => {
            FieldVerdict::Inconclusive(format!("E*_0 A E*_0 generates only a subalgebra of dimension {deg} < {dim}"))
        }
        _ => FieldVerdict::Inconclusive(format!("irreducibility of a degree {deg} minimal polynomial not decided")),
    }
}

/// Clauses of the existence criterion for a candidate parameter array:
/// distinct eigenvalues, the conditions on `ζ`, and the common ratio.
pub fn pa_conditions<F: Field>(
    field: &F,
    thetas: &[F::Elem],
    thetas_star: &[F::Elem],
    zetas: &[F::Elem],
) -> Result<Report> {
    if thetas.is_empty() || thetas.len() != thetas_star.len() || thetas.len() != zetas.len() {
        return Err(Error::ShapeMismatch(format!(
            "sequences of lengths {}, {}, {}",
            thetas.len(),
            thetas_star.len(),
            zetas.len()
        )));
    }
    let mut report = Report::new();
    let distinct = |s: &[F::Elem]| (0..s.len()).all(|i| (i + 1..s.len()).all(|j| s[i] != s[j]));
    let ok_i = distinct(thetas) && distinct(thetas_star);
    report.check("pa_distinct", ok_i, || "repeated eigenvalue".into());
    let d = thetas.len() - 1;
    if !field.is_one(&zetas[0]) {
        report.fail("pa_zeta", "zeta_0 != 1");
    } else if field.is_zero(&zetas[d]) {
        report.fail("pa_zeta", "zeta_d = 0");
    } else if !ok_i {
        report.skip("pa_zeta", "weighted sum needs distinct eigenvalues");
    } else {
        let sum = eta_weighted_sum(field, thetas, thetas_star, zetas)?;
        report.check("pa_zeta", !field.is_zero(&sum), || "weighted sum vanishes".into());
    }
    if d <= 2 {
        report.push("pa_beta", Status::Pass, Some("vacuous for d <= 2".into()));
    } else if !ok_i {
        report.skip("pa_beta", "ratios need distinct eigenvalues");
    } else {
        let all: Vec<F::Elem> = beta_ratios(field, thetas).into_iter().chain(beta_ratios(field, thetas_star)).collect();
        let ok = all.iter().all(|b| *b == all[0]);
        report.check("pa_beta", ok, || {
            format!("ratios {}", all.iter().map(|b| field.format(b)).collect::<Vec<_>>().join(", "))
        });
    }
    Ok(report)
}

/// Subalgebra dimensions, corner checks, the field verdict, and the
/// criterion on the system's own parameter array.
pub fn conjecture_suite<F: Field>(v: &Validated<F>, depth: usize) -> Report {
    let sys = &v.system;
    let (n, d) = (sys.n(), sys.d());
    let mut report = Report::new();
    let algebras = generate_subalgebras(v);
    for (id, alg) in [("subalgebra_D", &algebras.d), ("subalgebra_Dstar", &algebras.d_star)] {
        report.check(id, alg.dim() == d + 1, || format!("dimension {} instead of {}", alg.dim(), d + 1));
    }
    report.push("subalgebra_T", Status::Pass, Some(format!("dimension {} of {}", algebras.t.dim(), n * n)));
    let (r, corner) = corner_algebra_checks(v, &algebras, depth);
    report.extend(r);
    let rank = v.e_star.mats[0].rank();
    report.check("corner_dimension", corner.dim() == rank, || {
        format!("dimension {} but rank E*_0 = {rank}", corner.dim())
    });
    match field_check(&corner, &sys.a) {
        FieldVerdict::Field => report.pass("corner_field"),
        FieldVerdict::NotField(w) => report.fail("corner_field", w),
        FieldVerdict::Inconclusive(w) => report.inconclusive("corner_field", w),
    }
    if v.is_sharp() {
        match parameter_array(v).and_then(|pa| pa_conditions(&sys.field, &pa.thetas, &pa.thetas_star, &pa.zetas)) {
            Ok(r) => report.extend(r),
            Err(e) => report.fail("pa_conditions", e.to_string()),
        }
    } else {
        report.skip("pa_conditions", "system is not sharp");
    }
    report
}
