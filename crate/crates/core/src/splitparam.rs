//! Split decomposition, split sequence and parameter array of a sharp
//! system, together with the trace and operator identities they satisfy.

use crate::error::{Error, Result};
use crate::matrices::{product, Matrix, Subspace};
use crate::polys::{charpoly, Poly, TauEtaFamily};
use crate::report::Report;
use crate::scalars::Field;
use crate::tdcore::Validated;

/// `V = U_0 ⊕ … ⊕ U_d` with the projections `F_i` onto each summand.
#[derive(Clone, Debug)]
pub struct SplitDecomposition<F: Field> {
    pub u: Vec<Subspace<F>>,
    pub f: Vec<Matrix<F>>,
}

/// `(θ_i; θ*_i; ζ_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterArray<F: Field> {
    pub thetas: Vec<F::Elem>,
    pub thetas_star: Vec<F::Elem>,
    pub zetas: Vec<F::Elem>,
}

impl<F: Field> ParameterArray<F> {
    pub fn to_text(&self, field: &F) -> [Vec<String>; 3] {
        let fmt = |v: &[F::Elem]| v.iter().map(|x| field.format(x)).collect();
        [fmt(&self.thetas), fmt(&self.thetas_star), fmt(&self.zetas)]
    }
}

fn eigenspaces<F: Field>(mats: &[Matrix<F>]) -> Vec<Subspace<F>> {
    mats.iter().map(Matrix::column_space).collect()
}

fn sum_range<F: Field>(field: &F, n: usize, spaces: &[Subspace<F>]) -> Subspace<F> {
    spaces.iter().fold(Subspace::zero(field, n), |acc, s| acc.sum(s))
}

fn fail(id: &str, detail: impl Into<String>) -> Error {
    Error::identity(id, detail)
}

/// `U_i = (E*_0V + … + E*_iV) ∩ (E_iV + … + E_dV)`, with every structural
/// property of the decomposition asserted.
pub fn split_decomposition<F: Field>(v: &Validated<F>) -> Result<SplitDecomposition<F>> {
    let sys = &v.system;
    let field = &sys.field;
    let (n, d) = (sys.n(), sys.d());
    let ev = eigenspaces(&v.e.mats);
    let esv = eigenspaces(&v.e_star.mats);
    let u: Vec<Subspace<F>> =
        (0..=d).map(|i| sum_range(field, n, &esv[..=i]).intersect(&sum_range(field, n, &ev[i..]))).collect();

    let dims: Vec<usize> = u.iter().map(Subspace::dim).collect();
    if dims != v.shape.rho {
        return Err(fail("split_dimensions", format!("dim U_i = {dims:?}, shape {:?}", v.shape.rho)));
    }
    if sum_range(field, n, &u).dim() != n || dims.iter().sum::<usize>() != n {
        return Err(fail("split_direct_sum", "the U_i do not form a direct sum equal to V"));
    }
    for i in 0..=d {
        if sum_range(field, n, &u[..=i]) != sum_range(field, n, &esv[..=i]) {
            return Err(fail("split_lower_sums", format!("U_0 + ... + U_{i}")));
        }
        if sum_range(field, n, &u[i..]) != sum_range(field, n, &ev[i..]) {
            return Err(fail("split_upper_sums", format!("U_{i} + ... + U_d")));
        }
        let raised = u[i].image(&sys.a.shift(&sys.thetas[i]));
        let target = u.get(i + 1).cloned().unwrap_or_else(|| Subspace::zero(field, n));
        if !target.contains(&raised) {
            return Err(fail("split_raising", format!("(A - theta_{i} I) U_{i}")));
        }
        let lowered = u[i].image(&sys.a_star.shift(&sys.thetas_star[i]));
        let target = match i {
            0 => Subspace::zero(field, n),
            _ => u[i - 1].clone(),
        };
        if !target.contains(&lowered) {
            return Err(fail("split_lowering", format!("(A* - theta*_{i} I) U_{i}")));
        }
    }

    // Columns of P are the bases of U_0, …, U_d in order; F_i = P D_i P⁻¹.
    let columns: Vec<Vec<F::Elem>> = u.iter().flat_map(Subspace::basis_vectors).collect();
    let p = Matrix::from_columns(field, n, &columns);
    let p_inv = p.inverse().ok_or_else(|| fail("split_direct_sum", "basis matrix is singular"))?;
    let mut offset = 0;
    let mut projections = Vec::with_capacity(d + 1);
    for ui in &u {
        let k = ui.dim();
        let selector = Matrix::from_fn(field, n, n, |r, c| {
            if r == c && (offset..offset + k).contains(&r) {
                field.one()
            } else {
                field.zero()
            }
        });
        projections.push(&(&p * &selector) * &p_inv);
        offset += k;
    }
    let total = projections.iter().fold(Matrix::zeros(field, n, n), |acc, m| &acc + m);
    if total != Matrix::identity(field, n) {
        return Err(fail("split_projections", "sum of F_i is not I"));
    }
    for (i, fi) in projections.iter().enumerate() {
        for (j, fj) in projections.iter().enumerate() {
            let prod = fi * fj;
            let ok = if i == j { &prod == fi } else { prod.is_zero() };
            if !ok {
                return Err(fail("split_projections", format!("F_{i} F_{j}")));
            }
        }
        if fi.column_space() != u[i] {
            return Err(fail("split_projections", format!("F_{i} V != U_{i}")));
        }
    }
    Ok(SplitDecomposition { u, f: projections })
}

/// `(A* − θ*_1)…(A* − θ*_i)(A − θ_{i−1})…(A − θ_0)`.
pub fn updown_operator<F: Field>(v: &Validated<F>, i: usize) -> Matrix<F> {
    let sys = &v.system;
    let n = sys.n();
    let up = product(&sys.field, n, sys.thetas[..i].iter().map(|t| sys.a.shift(t)).collect::<Vec<_>>().iter());
    let down =
        product(&sys.field, n, sys.thetas_star[1..=i].iter().map(|t| sys.a_star.shift(t)).collect::<Vec<_>>().iter());
    &down * &up
}

/// The scalar by which each operator above acts on the line `U_0`; the
/// image of a spanning vector must be parallel to it.
pub fn split_sequence<F: Field>(v: &Validated<F>, decomp: &SplitDecomposition<F>) -> Result<Vec<F::Elem>> {
    if !v.is_sharp() {
        return Err(Error::NotSharp(v.shape.rho[0]));
    }
    let f = &v.system.field;
    let u0 = decomp.u[0].basis_vectors().remove(0);
    let pivot = u0.iter().position(|x| !f.is_zero(x)).expect("nonzero basis vector");
    let mut zetas = Vec::with_capacity(v.system.d() + 1);
    for i in 0..=v.system.d() {
        let image = updown_operator(v, i).mat_vec(&u0);
        let zeta = f.div(&image[pivot], &u0[pivot]).expect("pivot is nonzero");
        let parallel = image.iter().zip(&u0).all(|(x, y)| *x == f.mul(&zeta, y));
        if !parallel {
            return Err(fail("split_sequence", format!("operator {i} does not act on U_0 as a scalar")));
        }
        zetas.push(zeta);
    }
    if !f.is_one(&zetas[0]) {
        return Err(fail("split_sequence", "zeta_0 != 1"));
    }
    Ok(zetas)
}

/// `Σ_i η_{d−i}(θ_0) η*_{d−i}(θ*_0) ζ_i`.
pub fn eta_weighted_sum<F: Field>(
    field: &F,
    thetas: &[F::Elem],
    thetas_star: &[F::Elem],
    zetas: &[F::Elem],
) -> Result<F::Elem> {
    let fam = TauEtaFamily::new(field, thetas)?;
    let fam_star = TauEtaFamily::new(field, thetas_star)?;
    let d = fam.d();
    Ok((0..=d).fold(field.zero(), |acc, i| {
        let w = field.mul(&fam.eta(d - i).eval(&thetas[0]), &fam_star.eta(d - i).eval(&thetas_star[0]));
        field.add(&acc, &field.mul(&w, &zetas[i]))
    }))
}

/// Parameter array with its defining invariants asserted.
pub fn parameter_array<F: Field>(v: &Validated<F>) -> Result<ParameterArray<F>> {
    if !v.is_sharp() {
        return Err(Error::NotSharp(v.shape.rho[0]));
    }
    let decomp = split_decomposition(v)?;
    let zetas = split_sequence(v, &decomp)?;
    let sys = &v.system;
    let f = &sys.field;
    if f.is_zero(zetas.last().expect("d + 1 entries")) {
        return Err(fail("parameter_array", "zeta_d = 0"));
    }
    if f.is_zero(&eta_weighted_sum(f, &sys.thetas, &sys.thetas_star, &zetas)?) {
        return Err(fail("parameter_array", "eta-weighted sum of zetas is 0"));
    }
    Ok(ParameterArray { thetas: sys.thetas.clone(), thetas_star: sys.thetas_star.clone(), zetas })
}

/// Matrices reused across the identity checks.
struct Workspace<'a, F: Field> {
    v: &'a Validated<F>,
    fam: TauEtaFamily<F>,
    fam_star: TauEtaFamily<F>,
    /// `τ_i(A)`
    tau_a: Vec<Matrix<F>>,
    /// `τ*_i(A*)`
    tau_star: Vec<Matrix<F>>,
}

impl<'a, F: Field> Workspace<'a, F> {
    fn new(v: &'a Validated<F>) -> Result<Self> {
        let sys = &v.system;
        let fam = TauEtaFamily::new(&sys.field, &sys.thetas)?;
        let fam_star = TauEtaFamily::new(&sys.field, &sys.thetas_star)?;
        let tau_a = (0..=sys.d()).map(|i| fam.tau(i).eval_at_matrix(&sys.a)).collect();
        let tau_star = (0..=sys.d()).map(|i| fam_star.tau(i).eval_at_matrix(&sys.a_star)).collect();
        Ok(Workspace { v, fam, fam_star, tau_a, tau_star })
    }

    fn field(&self) -> &F {
        &self.v.system.field
    }

    /// `(x_0 − x_1)(x_0 − x_2)…(x_0 − x_i)`
    fn head_product(&self, xs: &[F::Elem], i: usize) -> F::Elem {
        let f = self.field();
        xs[1..=i].iter().fold(f.one(), |acc, x| f.mul(&acc, &f.sub(&xs[0], x)))
    }

    fn e0(&self) -> &Matrix<F> {
        &self.v.e.mats[0]
    }

    fn es0(&self) -> &Matrix<F> {
        &self.v.e_star.mats[0]
    }
}

fn trace_of<F: Field>(mats: &[&Matrix<F>]) -> F::Elem {
    let n = mats[0].rows();
    product(mats[0].field(), n, mats.iter().copied()).trace()
}

/// `tr(E_0E*_0)`, `tr(E_0E*_d)`, `tr(E_dE*_0)`, `tr(E_dE*_d)` are nonzero.
pub fn trace_nonzero_check<F: Field>(v: &Validated<F>) -> Report {
    let mut report = Report::new();
    let f = &v.system.field;
    let d = v.system.d();
    let pairs = [(0, 0), (0, d), (d, 0), (d, d)];
    let zero: Vec<(usize, usize)> =
        pairs.into_iter().filter(|&(i, j)| f.is_zero(&trace_of(&[&v.e.mats[i], &v.e_star.mats[j]]))).collect();
    report.check("trace_nonzero", zero.is_empty(), || format!("tr(E_i E*_j) = 0 at {zero:?}"));
    report
}

/// The four trace formulas for each `ζ_i`, in the order: `τ(A)` trace,
/// `τ*(A*)` trace, normalized trace through `E_0 … E*_0`, normalized trace
/// through `E*_0 … E_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceZetas<F: Field> {
    pub formulas: [Vec<F::Elem>; 4],
}

pub const TRACE_ZETA_IDS: [&str; 4] =
    ["zeta_trace_tau", "zeta_trace_tau_star", "zeta_trace_ratio", "zeta_trace_ratio_star"];

pub fn trace_zeta<F: Field>(v: &Validated<F>, zetas: &[F::Elem]) -> Result<(TraceZetas<F>, Report)> {
    let ws = Workspace::new(v)?;
    let f = ws.field();
    let sys = &v.system;
    let d = sys.d();
    let t00 = trace_of(&[ws.e0(), ws.es0()]);
    let inv = f.inv(&t00).ok_or_else(|| Error::InvalidInput("tr(E_0 E*_0) = 0".into()))?;
    let mut formulas: [Vec<F::Elem>; 4] = Default::default();
    for i in 0..=d {
        formulas[0].push(f.mul(&ws.head_product(&sys.thetas_star, i), &trace_of(&[&ws.tau_a[i], ws.es0()])));
        formulas[1].push(f.mul(&ws.head_product(&sys.thetas, i), &trace_of(&[&ws.tau_star[i], ws.e0()])));
        formulas[2].push(f.mul(&trace_of(&[ws.e0(), &ws.tau_star[i], &ws.tau_a[i], ws.es0()]), &inv));
        // tr(E*_0 E_0) = tr(E_0 E*_0)
        formulas[3].push(f.mul(&trace_of(&[ws.es0(), &ws.tau_a[i], &ws.tau_star[i], ws.e0()]), &inv));
    }
    let mut report = Report::new();
    for (id, values) in TRACE_ZETA_IDS.iter().zip(&formulas) {
        report.check(*id, values == zetas, || {
            let i = (0..=d).find(|&i| values[i] != zetas[i]).unwrap_or(0);
            format!("i = {i}: {} vs {}", f.format(&values[i]), f.format(&zetas[i]))
        });
    }
    Ok((TraceZetas { formulas }, report))
}

/// Vanishing products, the factorization identities, the operator
/// identities on `E*_0V`/`E_0V`, and `ζ = ζ*`.
pub fn vanishing_check<F: Field>(v: &Validated<F>, zetas: &[F::Elem], zetas_star: &[F::Elem]) -> Result<Report> {
    let ws = Workspace::new(v)?;
    let f = ws.field();
    let sys = &v.system;
    let n = sys.n();
    let d = sys.d();
    let (e0, es0) = (ws.e0(), ws.es0());
    let mut report = Report::new();

    let mut bad = None;
    let mut bad_star = None;
    for i in 0..=d {
        for j in (0..=d).filter(|&j| j != i) {
            if bad.is_none() && !product(f, n, [e0, &ws.tau_star[i], &ws.tau_a[j], es0]).is_zero() {
                bad = Some((i, j));
            }
            if bad_star.is_none() && !product(f, n, [es0, &ws.tau_a[i], &ws.tau_star[j], e0]).is_zero() {
                bad_star = Some((i, j));
            }
        }
    }
    report.check("vanishing_mixed_tau", bad.is_none(), || format!("(i, j) = {bad:?}"));
    report.check("vanishing_mixed_tau_star", bad_star.is_none(), || format!("(i, j) = {bad_star:?}"));

    let e0es0 = e0 * es0;
    let es0e0 = es0 * e0;
    let mut firsts = [None; 8];
    for i in 0..=d {
        let pt = ws.head_product(&sys.thetas, i);
        let pts = ws.head_product(&sys.thetas_star, i);
        let lhs = product(f, n, [e0, &ws.tau_star[i], &ws.tau_a[i], es0]);
        let lhs_star = product(f, n, [es0, &ws.tau_a[i], &ws.tau_star[i], e0]);
        let tests = [
            lhs == product(f, n, [e0, &ws.tau_star[i], e0, es0]).scale(&pt),
            lhs == product(f, n, [e0, es0, &ws.tau_a[i], es0]).scale(&pts),
            lhs_star == product(f, n, [es0, &ws.tau_a[i], es0, e0]).scale(&pts),
            lhs_star == product(f, n, [es0, e0, &ws.tau_star[i], e0]).scale(&pt),
            lhs == e0es0.scale(&zetas[i]),
            lhs_star == es0e0.scale(&zetas[i]),
            {
                let lower = product(
                    f,
                    n,
                    sys.thetas_star[1..=i].iter().map(|t| sys.a_star.shift(t)).collect::<Vec<_>>().iter(),
                );
                product(f, n, [&lower, &ws.tau_a[i], es0]) == es0.scale(&zetas[i])
            },
            {
                let raise = product(f, n, sys.thetas[1..=i].iter().map(|t| sys.a.shift(t)).collect::<Vec<_>>().iter());
                product(f, n, [&raise, &ws.tau_star[i], e0]) == e0.scale(&zetas[i])
            },
        ];
        for (slot, ok) in firsts.iter_mut().zip(tests) {
            if !ok && slot.is_none() {
                *slot = Some(i);
            }
        }
    }
    let ids = [
        "factor_theta_product",
        "factor_theta_star_product",
        "factor_theta_star_product_dual",
        "factor_theta_product_dual",
        "zeta_times_E0_Es0",
        "zeta_times_Es0_E0",
        "aux_operator_on_Es0",
        "aux_operator_on_E0",
    ];
    for (id, first) in ids.iter().zip(firsts) {
        report.check(*id, first.is_none(), || format!("fails at i = {}", first.unwrap_or(0)));
    }
    report.check("zeta_equals_zeta_star", zetas == zetas_star, || {
        let show = |z: &[F::Elem]| z.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(",");
        format!("({}) vs ({})", show(zetas), show(zetas_star))
    });
    Ok(report)
}

/// The eight maps between `E_0V, E_dV, E*_0V, E*_dV` given by the
/// idempotents are bijective.
pub fn bijection_check<F: Field>(v: &Validated<F>) -> Report {
    let d = v.system.d();
    let (e, es) = (&v.e.mats, &v.e_star.mats);
    let maps = [
        ("Es0_to_E0", &es[0], &e[0]),
        ("Es0_to_Ed", &es[0], &e[d]),
        ("Esd_to_E0", &es[d], &e[0]),
        ("Esd_to_Ed", &es[d], &e[d]),
        ("E0_to_Es0", &e[0], &es[0]),
        ("E0_to_Esd", &e[0], &es[d]),
        ("Ed_to_Es0", &e[d], &es[0]),
        ("Ed_to_Esd", &e[d], &es[d]),
    ];
    let mut report = Report::new();
    let bad: Vec<&str> = maps
        .iter()
        .filter(|(_, source, target)| {
            let src = source.column_space();
            let tgt = target.column_space();
            src.dim() != tgt.dim() || src.image(target).dim() != src.dim()
        })
        .map(|(name, _, _)| *name)
        .collect();
    report.check("bijections", bad.is_empty(), || format!("not bijective: {}", bad.join(", ")));
    report
}

/// `ζ_d = η*_d(θ*_0) τ_d(θ_d) tr(E_dE*_0) = η_d(θ_0) τ*_d(θ*_d) tr(E*_dE_0)`.
pub fn zeta_d_closed_form<F: Field>(v: &Validated<F>, zetas: &[F::Elem]) -> Result<Report> {
    let ws = Workspace::new(v)?;
    let f = ws.field();
    let sys = &v.system;
    let d = sys.d();
    let left = f.mul(
        &f.mul(&ws.fam_star.eta(d).eval(&sys.thetas_star[0]), &ws.fam.tau(d).eval(&sys.thetas[d])),
        &trace_of(&[&v.e.mats[d], ws.es0()]),
    );
    let right = f.mul(
        &f.mul(&ws.fam.eta(d).eval(&sys.thetas[0]), &ws.fam_star.tau(d).eval(&sys.thetas_star[d])),
        &trace_of(&[&v.e_star.mats[d], ws.e0()]),
    );
    let mut report = Report::new();
    for (id, value) in [("zeta_d_closed_form", left), ("zeta_d_closed_form_dual", right)] {
        report.check(id, value == zetas[d], || format!("{} vs zeta_d = {}", f.format(&value), f.format(&zetas[d])));
    }
    Ok(report)
}

/// Instance values for the open questions on the split decomposition.
#[derive(Clone, Debug)]
pub struct Problems<F: Field> {
    /// For `0 ≤ i ≤ d/2`: the restriction to `U_i` (in its canonical basis)
    /// and its characteristic polynomial.
    pub restrictions: Vec<(Matrix<F>, Poly<F>)>,
    /// `tr(E_i E*_j)` for all `i, j`.
    pub trace_table: Vec<Vec<F::Elem>>,
    pub projections: Vec<Matrix<F>>,
}

/// `(A* − θ*_{i+1})…(A* − θ*_{d−i})(A − θ_{d−i−1})…(A − θ_i)`.
pub fn restriction_operator<F: Field>(v: &Validated<F>, i: usize) -> Matrix<F> {
    let sys = &v.system;
    let d = sys.d();
    let n = sys.n();
    let ups: Vec<Matrix<F>> = sys.thetas[i..d - i].iter().map(|t| sys.a.shift(t)).collect();
    let downs: Vec<Matrix<F>> = sys.thetas_star[i + 1..=d - i].iter().map(|t| sys.a_star.shift(t)).collect();
    &product(&sys.field, n, downs.iter()) * &product(&sys.field, n, ups.iter())
}

pub fn problems_report<F: Field>(v: &Validated<F>, decomp: &SplitDecomposition<F>) -> Result<(Problems<F>, Report)> {
    let sys = &v.system;
    let f = &sys.field;
    let d = sys.d();
    let mut report = Report::new();
    let mut restrictions = Vec::new();
    let mut singular = Vec::new();
    for i in 0..=d / 2 {
        let op = restriction_operator(v, i);
        let ui = &decomp.u[i];
        let columns: Vec<Vec<F::Elem>> = ui
            .basis_vectors()
            .iter()
            .map(|b| {
                ui.coordinates(&op.mat_vec(b))
                    .ok_or_else(|| fail("restriction_invariant", format!("U_{i} is not invariant")))
            })
            .collect::<Result<_>>()?;
        let m = Matrix::from_columns(f, ui.dim(), &columns);
        if f.is_zero(&m.det()) {
            singular.push(i);
        }
        let cp = charpoly(&m);
        restrictions.push((m, cp));
    }
    report.check("restriction_invertible", singular.is_empty(), || format!("singular on U_i for i in {singular:?}"));
    let trace_table = v.e.mats.iter().map(|ei| v.e_star.mats.iter().map(|ej| trace_of(&[ei, ej])).collect()).collect();
    Ok((Problems { restrictions, trace_table, projections: decomp.f.clone() }, report))
}

/// Everything computed for a sharp validated system by this module.
#[derive(Clone, Debug)]
pub struct SplitAnalysis<F: Field> {
    pub decomposition: SplitDecomposition<F>,
    pub array: ParameterArray<F>,
    pub zetas_star: Vec<F::Elem>,
    pub traces: TraceZetas<F>,
    pub problems: Problems<F>,
}

/// Run every check of this module. Errors from the constructions are
/// recorded as failures, so the report is always returned.
pub fn split_suite<F: Field>(v: &Validated<F>) -> (Report, Option<SplitAnalysis<F>>) {
    let mut report = Report::new();
    if !v.is_sharp() {
        report.skip("split_decomposition", "system is not sharp");
        return (report, None);
    }
    let decomposition = match split_decomposition(v) {
        Ok(dec) => {
            report.pass("split_decomposition");
            dec
        }
        Err(e) => {
            report.fail("split_decomposition", e.to_string());
            return (report, None);
        }
    };
    let array = parameter_array(v);
    let zetas_star = parameter_array(&v.swapped());
    report.record("parameter_array", &array);
    report.record("parameter_array_star", &zetas_star);
    let (Ok(array), Ok(star)) = (array, zetas_star) else {
        return (report, None);
    };
    let zetas = &array.zetas;
    report.extend(trace_nonzero_check(v));
    report.extend(bijection_check(v));
    let traces = trace_zeta(v, zetas);
    let vanish = vanishing_check(v, zetas, &star.zetas);
    let closed = zeta_d_closed_form(v, zetas);
    let problems = problems_report(v, &decomposition);
    let mut out = |r: Result<Report>, id: &str| match r {
        Ok(r) => report.extend(r),
        Err(e) => report.fail(id, e.to_string()),
    };
    let traces = match traces {
        Ok((t, r)) => {
            out(Ok(r), "");
            Some(t)
        }
        Err(e) => {
            out(Err(e), "zeta_trace");
            None
        }
    };
    out(vanish, "vanishing");
    out(closed, "zeta_d_closed_form");
    let problems = match problems {
        Ok((p, r)) => {
            out(Ok(r), "");
            Some(p)
        }
        Err(e) => {
            out(Err(e), "restriction_invertible");
            None
        }
    };
    let analysis = match (traces, problems) {
        (Some(traces), Some(problems)) => {
            Some(SplitAnalysis { decomposition, array, zetas_star: star.zetas, traces, problems })
        }
        _ => None,
    };
    (report, analysis)
}
