//! Tridiagonal systems and their validation.
//!
//! A [`TdSystem`] is a pair of square matrices together with candidate
//! eigenvalue orderings. [`validate`] runs the full pipeline: eigenvalue
//! distinctness, diagonalizability, tridiagonality of the idempotent
//! products, irreducibility, shape and sharpness.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrices::{algebra_closure, EchelonBuilder, Matrix, Subspace};
use crate::polys::check_distinct;
use crate::report::{Report, Status};
use crate::scalars::Field;

/// Upper bound on `p^n` for the exhaustive line search.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Matrices `A`, `A*` with eigenvalue sequences `θ_0..θ_d`, `θ*_0..θ*_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TdSystem<F: Field> {
    pub field: F,
    pub a: Matrix<F>,
    pub a_star: Matrix<F>,
    pub thetas: Vec<F::Elem>,
    pub thetas_star: Vec<F::Elem>,
    pub q_hint: Option<F::Elem>,
    /// Caller's note when irreducibility is to be trusted rather than checked.
    pub assume_irreducible: Option<String>,
}

impl<F: Field> TdSystem<F> {
    /// Checks only the structural shape of the data.
    pub fn new(
        field: &F,
        a: Matrix<F>,
        a_star: Matrix<F>,
        thetas: Vec<F::Elem>,
        thetas_star: Vec<F::Elem>,
    ) -> Result<Self> {
        for m in [&a, &a_star] {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.descriptor(), m.field().descriptor()));
            }
        }
        let n = a.rows();
        if n == 0 || !a.is_square() || a_star.rows() != n || a_star.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "A is {}x{}, A* is {}x{}",
                a.rows(),
                a.cols(),
                a_star.rows(),
                a_star.cols()
            )));
        }
        if thetas.is_empty() || thetas.len() != thetas_star.len() {
            return Err(Error::ShapeMismatch(format!(
                "eigenvalue sequences of lengths {} and {}",
                thetas.len(),
                thetas_star.len()
            )));
        }
        Ok(TdSystem { field: field.clone(), a, a_star, thetas, thetas_star, q_hint: None, assume_irreducible: None })
    }

    pub fn with_q_hint(mut self, q: Option<F::Elem>) -> Self {
        self.q_hint = q;
        self
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// The diameter; the two sequences always have the same length.
    pub fn d(&self) -> usize {
        self.thetas.len() - 1
    }

    /// The system with `(A, θ)` and `(A*, θ*)` exchanged.
    pub fn swapped(&self) -> Self {
        TdSystem {
            a: self.a_star.clone(),
            a_star: self.a.clone(),
            thetas: self.thetas_star.clone(),
            thetas_star: self.thetas.clone(),
            ..self.clone()
        }
    }
}

/// Primitive idempotents `E_0..E_d` of one operator.
#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentFamily<F: Field> {
    pub mats: Vec<Matrix<F>>,
    pub eigenvalues: Vec<F::Elem>,
}

impl<F: Field> IdempotentFamily<F> {
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.mats.iter().map(Matrix::rank).collect()
    }

    pub fn reversed(&self) -> Self {
        IdempotentFamily {
            mats: self.mats.iter().rev().cloned().collect(),
            eigenvalues: self.eigenvalues.iter().rev().cloned().collect(),
        }
    }
}

/// `E_i = Π_{j≠i} (M − θ_j I)/(θ_i − θ_j)`, after checking that the
/// eigenspaces of the listed values exhaust the space.
pub fn primitive_idempotents<F: Field>(m: &Matrix<F>, thetas: &[F::Elem]) -> Result<IdempotentFamily<F>> {
    check_distinct::<F>(thetas)?;
    if !m.is_square() {
        return Err(Error::ShapeMismatch("operator is not square".into()));
    }
    let f = m.field();
    let n = m.rows();
    let shifted: Vec<Matrix<F>> = thetas.iter().map(|t| m.shift(t)).collect();
    let dims: Vec<usize> = shifted.iter().map(|s| n - s.rank()).collect();
    if let Some(i) = dims.iter().position(|&k| k == 0) {
        return Err(Error::NotDiagonalizable(format!("{} (position {i}) is not an eigenvalue", f.format(&thetas[i]))));
    }
    let total: usize = dims.iter().sum();
    if total != n {
        return Err(Error::NotDiagonalizable(format!("eigenspaces have total dimension {total}, expected {n}")));
    }
    let mut mats = Vec::with_capacity(thetas.len());
    for (i, ti) in thetas.iter().enumerate() {
        let mut e = Matrix::identity(f, n);
        let mut denom = f.one();
        for (j, tj) in thetas.iter().enumerate() {
            if i != j {
                e = &e * &shifted[j];
                denom = f.mul(&denom, &f.sub(ti, tj));
            }
        }
        mats.push(e.scale(&f.inv(&denom).expect("distinct eigenvalues")));
    }
    let fam = IdempotentFamily { mats, eigenvalues: thetas.to_vec() };
    check_idempotent_family(m, &fam, &dims)?;
    Ok(fam)
}

fn check_idempotent_family<F: Field>(m: &Matrix<F>, fam: &IdempotentFamily<F>, dims: &[usize]) -> Result<()> {
    let f = m.field();
    let n = m.rows();
    let sum = fam.mats.iter().fold(Matrix::zeros(f, n, n), |acc, e| &acc + e);
    if sum != Matrix::identity(f, n) {
        return Err(Error::identity("idempotent_sum", format!("sum of E_i is {sum}")));
    }
    for (i, ei) in fam.mats.iter().enumerate() {
        if (m * ei) != ei.scale(&fam.eigenvalues[i]) {
            return Err(Error::identity("idempotent_eigen", format!("A E_{i} != theta_{i} E_{i}")));
        }
        if ei.rank() != dims[i] {
            return Err(Error::identity("idempotent_rank", format!("rank E_{i} != {}", dims[i])));
        }
        for (j, ej) in fam.mats.iter().enumerate() {
            let p = ei * ej;
            let ok = if i == j { &p == ei } else { p.is_zero() };
            if !ok {
                return Err(Error::identity("idempotent_orthogonal", format!("E_{i} E_{j}")));
            }
        }
    }
    Ok(())
}

/// Pairs `(i, j)` with `|i − j| > 1` and `E_i M E_j ≠ 0`.
pub fn tridiagonal_violations<F: Field>(e: &IdempotentFamily<F>, m: &Matrix<F>) -> Vec<(usize, usize)> {
    let d = e.len();
    let left: Vec<Matrix<F>> = e.mats.iter().map(|ei| ei * m).collect();
    (0..d)
        .cartesian_product(0..d)
        .filter(|&(i, j)| i.abs_diff(j) > 1)
        .filter(|&(i, j)| !(&left[i] * &e.mats[j]).is_zero())
        .collect()
}

/// `E_i A* E_j = 0` and `E*_i A E*_j = 0` whenever `|i − j| > 1`.
pub fn check_tridiagonal<F: Field>(sys: &TdSystem<F>, e: &IdempotentFamily<F>, e_star: &IdempotentFamily<F>) -> Report {
    let mut report = Report::new();
    for (id, fam, m) in [("tridiagonal", e, &sys.a_star), ("tridiagonal_star", e_star, &sys.a)] {
        let bad = tridiagonal_violations(fam, m);
        report.check(id, bad.is_empty(), || {
            let (i, j) = bad[0];
            format!("nonzero idempotent product at ({i}, {j})")
        });
    }
    report
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum IrreducibilityStrategy {
    /// Eigenline subsets when every eigenspace is a line, else Burnside, then
    /// exhaustive search over small prime fields, else inconclusive.
    #[default]
    Auto,
    Burnside,
    EigenSubset,
    ExhaustiveGfp,
    Assume,
}

impl IrreducibilityStrategy {
    pub fn name(self) -> &'static str {
        match self {
            IrreducibilityStrategy::Auto => "auto",
            IrreducibilityStrategy::Burnside => "burnside",
            IrreducibilityStrategy::EigenSubset => "eigen_subset",
            IrreducibilityStrategy::ExhaustiveGfp => "exhaustive_gfp",
            IrreducibilityStrategy::Assume => "assume",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Irreducibility<F: Field> {
    Irreducible {
        method: &'static str,
    },
    /// A common invariant subspace `0 ≠ W ≠ V`.
    Reducible(Subspace<F>),
    Inconclusive(String),
}

/// Whether `W` is a proper nonzero subspace invariant under `A` and `A*`.
pub fn is_reducing_witness<F: Field>(sys: &TdSystem<F>, w: &Subspace<F>) -> bool {
    w.ambient() == sys.n() && w.dim() > 0 && w.dim() < sys.n() && w.is_invariant(&sys.a) && w.is_invariant(&sys.a_star)
}

fn burnside<F: Field>(sys: &TdSystem<F>) -> bool {
    let n = sys.n();
    algebra_closure(&sys.field, n, &[sys.a.clone(), sys.a_star.clone()]).dim() == n * n
}

/// Every `A`-invariant subspace is a sum of eigenspaces when all of them are
/// lines, so testing each subset is complete.
fn eigen_subset<F: Field>(sys: &TdSystem<F>, e: &IdempotentFamily<F>) -> Option<Subspace<F>> {
    let spaces: Vec<Subspace<F>> = e.mats.iter().map(Matrix::column_space).collect();
    let k = spaces.len();
    (1u64..(1 << k) - 1).find_map(|mask| {
        let w = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Subspace::zero(&sys.field, sys.n()), |acc, i| acc.sum(&spaces[i]));
        w.is_invariant(&sys.a_star).then_some(w)
    })
}

/// Smallest subspace containing `v` that is invariant under `gens`.
pub fn cyclic_closure<F: Field>(field: &F, v: &[F::Elem], gens: &[&Matrix<F>]) -> Subspace<F> {
    let mut builder = EchelonBuilder::new(field, v.len());
    let mut queue = std::collections::VecDeque::new();
    if builder.insert(v) {
        queue.push_back(v.to_vec());
    }
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mat_vec(&x);
            if builder.insert(&y) {
                queue.push_back(y);
            }
        }
    }
    builder.to_subspace()
}

/// Exhaustive search over all lines of `GF(p)^n`: any invariant subspace
/// contains the cyclic closure of each of its lines.
fn exhaustive<F: Field>(sys: &TdSystem<F>) -> Result<Option<Subspace<F>>> {
    let f = &sys.field;
    let n = sys.n();
    let p = f.order().ok_or_else(|| Error::Unsupported("exhaustive search needs a finite field".into()))?;
    let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > EXHAUSTIVE_LIMIT as u128 {
        return Err(Error::Unsupported(format!("exhaustive search over {p}^{n} vectors exceeds {EXHAUSTIVE_LIMIT}")));
    }
    let gens = [&sys.a, &sys.a_star];
    for lead in 0..n {
        let free = n - lead - 1;
        for index in 0..p.pow(free as u32) {
            let mut v = vec![f.zero(); n];
            v[lead] = f.one();
            let mut rest = index;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = f.element(rest % p).expect("finite field element");
                rest /= p;
            }
            let w = cyclic_closure(f, &v, &gens);
            if w.dim() < n {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Decide irreducibility with the requested strategy. Reducibility
/// witnesses are re-verified before they are returned.
pub fn check_irreducible<F: Field>(
    sys: &TdSystem<F>,
    e: &IdempotentFamily<F>,
    strategy: IrreducibilityStrategy,
) -> Result<Irreducibility<F>> {
    use IrreducibilityStrategy::*;
    let leonard_shape = || e.mats.iter().all(|m| m.rank() == 1);
    let small_prime =
        || sys.field.order().and_then(|p| p.checked_pow(sys.n() as u32)).is_some_and(|t| t <= EXHAUSTIVE_LIMIT);
    let verdict = match strategy {
        Assume => Irreducibility::Irreducible { method: "assume" },
        Burnside => {
            if burnside(sys) {
                Irreducibility::Irreducible { method: "burnside" }
            } else {
                Irreducibility::Inconclusive("generated algebra is smaller than End(V)".into())
            }
        }
        EigenSubset => {
            if !leonard_shape() {
                return Err(Error::Unsupported("eigenline subsets need every eigenspace of A to be a line".into()));
            }
            match eigen_subset(sys, e) {
                Some(w) => Irreducibility::Reducible(w),
                None => Irreducibility::Irreducible { method: "eigen_subset" },
            }
        }
        ExhaustiveGfp => match exhaustive(sys)? {
            Some(w) => Irreducibility::Reducible(w),
            None => Irreducibility::Irreducible { method: "exhaustive_gfp" },
        },
        Auto => {
            if leonard_shape() {
                return check_irreducible(sys, e, EigenSubset);
            } else if burnside(sys) {
                Irreducibility::Irreducible { method: "burnside" }
            } else if small_prime() {
                return check_irreducible(sys, e, ExhaustiveGfp);
            } else {
                Irreducibility::Inconclusive(
                    "generated algebra is smaller than End(V) and no complete test applies".into(),
                )
            }
        }
    };
    if let Irreducibility::Reducible(w) = &verdict {
        if !is_reducing_witness(sys, w) {
            return Err(Error::identity("reducing_witness", format!("{w:?} is not invariant")));
        }
    }
    Ok(verdict)
}

/// Eigenspace dimensions `ρ_0..ρ_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub rho: Vec<usize>,
}

impl Shape {
    pub fn is_sharp(&self) -> bool {
        check_sharp(self)
    }

    pub fn is_leonard(&self) -> bool {
        self.rho.iter().all(|&r| r == 1)
    }
}

pub fn check_sharp(shape: &Shape) -> bool {
    shape.rho.first() == Some(&1)
}

/// `ρ_i = rank E_i = rank E*_i`, checked symmetric and unimodal.
pub fn compute_shape<F: Field>(n: usize, e: &IdempotentFamily<F>, e_star: &IdempotentFamily<F>) -> Result<Shape> {
    let rho = e.ranks();
    let rho_star = e_star.ranks();
    if let Some(i) = (0..rho.len()).find(|&i| rho[i] != rho_star[i]) {
        return Err(Error::RankMismatch { index: i, rank: rho[i], rank_star: rho_star[i] });
    }
    let d = rho.len() - 1;
    if (0..=d).any(|i| rho[i] != rho[d - i]) {
        return Err(Error::identity("shape_symmetric", format!("{rho:?}")));
    }
    if (1..=d / 2).any(|i| rho[i - 1] > rho[i]) {
        return Err(Error::identity("shape_unimodal", format!("{rho:?}")));
    }
    if rho.iter().sum::<usize>() != n {
        return Err(Error::identity("shape_sum", format!("{rho:?} does not sum to {n}")));
    }
    Ok(Shape { rho })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    pub strategy: IrreducibilityStrategy,
}

/// A system that passed validation, with its idempotents and shape.
#[derive(Clone, Debug)]
pub struct Validated<F: Field> {
    pub system: TdSystem<F>,
    pub e: IdempotentFamily<F>,
    pub e_star: IdempotentFamily<F>,
    pub shape: Shape,
}

impl<F: Field> Validated<F> {
    pub fn is_sharp(&self) -> bool {
        self.shape.is_sharp()
    }

    /// The same data with the roles of `A` and `A*` exchanged. Idempotents
    /// are reused, so no revalidation is needed.
    pub fn swapped(&self) -> Self {
        Validated {
            system: self.system.swapped(),
            e: self.e_star.clone(),
            e_star: self.e.clone(),
            shape: self.shape.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Validation<F: Field> {
    pub report: Report,
    /// Common invariant subspace when irreducibility fails.
    pub witness: Option<Subspace<F>>,
    /// Present unless a check before the sharpness test failed.
    pub validated: Option<Validated<F>>,
}

impl<F: Field> Validation<F> {
    pub fn overall(&self) -> Status {
        self.report.overall()
    }

    /// The validated system if it is also sharp.
    pub fn sharp(&self) -> Option<&Validated<F>> {
        self.validated.as_ref().filter(|v| v.is_sharp())
    }
}

pub const VALIDATION_CHECKS: [&str; 10] = [
    "eigenvalues_distinct",
    "dimension_bound",
    "diagonalizable_A",
    "diagonalizable_Astar",
    "tridiagonal",
    "tridiagonal_star",
    "irreducible",
    "shape",
    "sharp",
    "shape_leonard",
];

fn skip_rest(report: &mut Report, from: &str) {
    let start = VALIDATION_CHECKS.iter().position(|c| *c == from).expect("known check");
    for id in &VALIDATION_CHECKS[start..] {
        if report.status_of(id).is_none() {
            report.skip(*id, "prerequisite failed");
        }
    }
}

fn format_subspace<F: Field>(w: &Subspace<F>) -> String {
    let f = w.field();
    let vectors: Vec<String> =
        w.basis_vectors().iter().map(|v| format!("({})", v.iter().map(|x| f.format(x)).join(","))).collect();
    format!("span{{{}}}", vectors.join(", "))
}

/// Run the validation pipeline. Mathematical failures are report entries;
/// only the structural checks of [`TdSystem::new`] produce errors.
pub fn validate<F: Field>(sys: &TdSystem<F>, options: ValidateOptions) -> Validation<F> {
    let mut report = Report::new();
    let out = |report: Report, witness, validated| Validation { report, witness, validated };

    let distinct = check_distinct::<F>(&sys.thetas).and_then(|_| check_distinct::<F>(&sys.thetas_star));
    if !report.record("eigenvalues_distinct", &distinct) {
        skip_rest(&mut report, "dimension_bound");
        return out(report, None, None);
    }
    let (n, d) = (sys.n(), sys.d());
    if !report.check("dimension_bound", d < n, || format!("d + 1 = {} exceeds n = {n}", d + 1)) {
        skip_rest(&mut report, "diagonalizable_A");
        return out(report, None, None);
    }
    let e = primitive_idempotents(&sys.a, &sys.thetas);
    let e_star = primitive_idempotents(&sys.a_star, &sys.thetas_star);
    report.record("diagonalizable_A", &e);
    report.record("diagonalizable_Astar", &e_star);
    let (Ok(e), Ok(e_star)) = (e, e_star) else {
        skip_rest(&mut report, "tridiagonal");
        return out(report, None, None);
    };

    let tri = check_tridiagonal(sys, &e, &e_star);
    let tri_failed = tri.has_fail();
    report.extend(tri);
    if tri_failed {
        skip_rest(&mut report, "irreducible");
        return out(report, None, None);
    }

    let strategy = match options.strategy {
        IrreducibilityStrategy::Auto if sys.assume_irreducible.is_some() => IrreducibilityStrategy::Assume,
        s => s,
    };
    let mut witness = None;
    match check_irreducible(sys, &e, strategy) {
        Ok(Irreducibility::Irreducible { method }) => {
            let note = match (&sys.assume_irreducible, method) {
                (Some(note), "assume") => format!("method: assume ({note})"),
                _ => format!("method: {method}"),
            };
            report.push("irreducible", Status::Pass, Some(note));
        }
        Ok(Irreducibility::Reducible(w)) => {
            report.fail("irreducible", format!("invariant subspace {}", format_subspace(&w)));
            witness = Some(w);
        }
        Ok(Irreducibility::Inconclusive(why)) => report.inconclusive("irreducible", why),
        Err(err) => report.inconclusive("irreducible", err.to_string()),
    }
    if witness.is_some() {
        skip_rest(&mut report, "shape");
        return out(report, witness, None);
    }

    let shape = match compute_shape(n, &e, &e_star) {
        Ok(shape) => shape,
        Err(err) => {
            report.fail("shape", err.to_string());
            skip_rest(&mut report, "sharp");
            return out(report, None, None);
        }
    };
    report.push("shape", Status::Pass, Some(format!("{:?}", shape.rho)));
    report.check("sharp", shape.is_sharp(), || format!("rho_0 = {}", shape.rho[0]));
    // Higher shapes are valid, so no entry is recorded for them.
    if shape.is_leonard() {
        report.pass("shape_leonard");
    }
    let validated = Validated { system: sys.clone(), e, e_star, shape };
    out(report, None, Some(validated))
}

/// Maximum diameter for ordering enumeration.
pub const ORDERING_D_MAX: usize = 4;

/// Orderings of each eigenvalue sequence (as index permutations into the
/// stored sequence) that satisfy the tridiagonality condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardOrderings {
    pub a: Vec<Vec<usize>>,
    pub a_star: Vec<Vec<usize>>,
}

fn standard_for<F: Field>(e: &IdempotentFamily<F>, other: &Matrix<F>) -> Vec<Vec<usize>> {
    let k = e.len();
    let nonzero: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            let left = &e.mats[i] * other;
            (0..k).map(|j| !(&left * &e.mats[j]).is_zero()).collect()
        })
        .collect();
    (0..k)
        .permutations(k)
        .filter(|perm| (0..k).cartesian_product(0..k).all(|(i, j)| i.abs_diff(j) <= 1 || !nonzero[perm[i]][perm[j]]))
        .collect()
}

pub fn enumerate_standard_orderings<F: Field>(v: &Validated<F>) -> Result<StandardOrderings> {
    let d = v.system.d();
    if d > ORDERING_D_MAX {
        return Err(Error::Unsupported(format!("ordering enumeration needs d <= {ORDERING_D_MAX}, got {d}")));
    }
    Ok(StandardOrderings { a: standard_for(&v.e, &v.system.a_star), a_star: standard_for(&v.e_star, &v.system.a) })
}
