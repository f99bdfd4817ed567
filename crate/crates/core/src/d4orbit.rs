//! The eight relatives of a system under the dihedral group `D4`, the
//! scalar `q`, the bracket `[r,s,t]_q`, and the relations between split
//! sequences of relatives.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polys::{Poly, TauEtaFamily};
use crate::report::{Report, Status};
use crate::scalars::Field;
use crate::splitparam::{eta_weighted_sum, parameter_array, ParameterArray};
use crate::tdcore::{validate, Shape, TdSystem, ValidateOptions, Validated};

/// An element of `D4`, stored as the effect on a system: reverse the
/// ordering of the `A*` idempotents (`↓`), reverse that of the `A`
/// idempotents (`⇓`), then swap the two operators (`*`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct D4Element {
    rev_star: bool,
    rev: bool,
    swap: bool,
}

impl D4Element {
    pub const IDENTITY: D4Element = D4Element::new(false, false, false);
    pub const DOWN: D4Element = D4Element::new(true, false, false);
    pub const DDOWN: D4Element = D4Element::new(false, true, false);
    pub const STAR: D4Element = D4Element::new(false, false, true);

    const fn new(rev_star: bool, rev: bool, swap: bool) -> Self {
        D4Element { rev_star, rev, swap }
    }

    /// All eight elements in the order of the relatives table.
    pub fn all() -> [D4Element; 8] {
        let mut out = [Self::IDENTITY; 8];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = D4Element::new(k & 1 == 1, k & 2 == 2, k & 4 == 4);
        }
        out
    }

    /// `gh`, where `Φ^{gh} = (Φ^g)^h`.
    pub fn compose(self, h: D4Element) -> D4Element {
        let (hr, hs) = if self.swap { (h.rev_star, h.rev) } else { (h.rev, h.rev_star) };
        D4Element { rev: self.rev ^ hr, rev_star: self.rev_star ^ hs, swap: self.swap ^ h.swap }
    }

    pub fn inverse(self) -> D4Element {
        D4Element::all().into_iter().find(|g| self.compose(*g) == Self::IDENTITY).expect("group element has an inverse")
    }

    /// Canonical word `↓^a ⇓^b *^c`, with `1` for the identity.
    pub fn name(self) -> String {
        let mut s = String::new();
        if self.rev_star {
            s.push('↓');
        }
        if self.rev {
            s.push('⇓');
        }
        if self.swap {
            s.push('*');
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    pub fn swaps(self) -> bool {
        self.swap
    }
}

impl fmt::Display for D4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for D4Element {
    type Err = Error;

    /// Any word over `*`, `↓`, `⇓` (or `1`), read left to right.
    fn from_str(s: &str) -> Result<Self> {
        s.chars().try_fold(Self::IDENTITY, |acc, c| {
            let g = match c {
                '1' => Self::IDENTITY,
                '↓' => Self::DOWN,
                '⇓' => Self::DDOWN,
                '*' => Self::STAR,
                _ => return Err(Error::InvalidInput(format!("bad D4 word {s:?}"))),
            };
            Ok(acc.compose(g))
        })
    }
}

/// The relative `Φ^g` of a system.
pub fn apply_relative<F: Field>(sys: &TdSystem<F>, g: D4Element) -> TdSystem<F> {
    let mut out = sys.clone();
    if g.rev {
        out.thetas.reverse();
    }
    if g.rev_star {
        out.thetas_star.reverse();
    }
    if g.swap {
        out = out.swapped();
    }
    out
}

/// The relative of validated data, reusing the idempotents.
pub fn apply_relative_validated<F: Field>(v: &Validated<F>, g: D4Element) -> Validated<F> {
    let mut out = Validated {
        system: apply_relative(&v.system, g),
        e: if g.rev { v.e.reversed() } else { v.e.clone() },
        e_star: if g.rev_star { v.e_star.reversed() } else { v.e_star.clone() },
        shape: v.shape.clone(),
    };
    if g.swap {
        std::mem::swap(&mut out.e, &mut out.e_star);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue<F: Field> {
    Generic(F::Elem),
    One,
    MinusOne,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QData<F: Field> {
    /// Common value of the eigenvalue ratios; absent for `d ≤ 2`.
    pub beta: Option<F::Elem>,
    pub q: QValue<F>,
    pub note: String,
}

impl<F: Field> QData<F> {
    pub fn undetermined(note: impl Into<String>) -> Self {
        QData { beta: None, q: QValue::Undetermined, note: note.into() }
    }

    pub fn describe(&self, field: &F) -> String {
        match &self.q {
            QValue::Generic(q) => format!("q = {}", field.format(q)),
            QValue::One => "q = 1".into(),
            QValue::MinusOne => "q = -1".into(),
            QValue::Undetermined => "q undetermined".into(),
        }
    }
}

/// `(θ_{i−2} − θ_{i+1}) / (θ_{i−1} − θ_i)` for `2 ≤ i ≤ d−1`.
pub fn beta_ratios<F: Field>(field: &F, thetas: &[F::Elem]) -> Vec<F::Elem> {
    let d = thetas.len().saturating_sub(1);
    (2..d)
        .map(|i| {
            field
                .div(&field.sub(&thetas[i - 2], &thetas[i + 1]), &field.sub(&thetas[i - 1], &thetas[i]))
                .expect("distinct eigenvalues")
        })
        .collect()
}

/// Order for picking one of `q`, `q⁻¹`: shorter text first, then text.
fn text_key<F: Field>(field: &F, x: &F::Elem) -> (usize, String) {
    let t = field.format(x);
    (t.len(), t)
}

fn classify<F: Field>(field: &F, q: F::Elem, beta: Option<F::Elem>, note: String) -> Result<QData<F>> {
    let value = if field.is_zero(&q) {
        return Err(Error::InvalidInput("q = 0".into()));
    } else if field.is_one(&q) {
        QValue::One
    } else if q == field.neg(&field.one()) {
        QValue::MinusOne
    } else {
        QValue::Generic(q)
    };
    Ok(QData { beta, q: value, note })
}

/// Roots of `x² − (β−1)x + 1` in the field.
fn quadratic_roots<F: Field>(field: &F, beta: &F::Elem) -> Vec<F::Elem> {
    let b = field.sub(beta, &field.one());
    let two = field.from_i64(2);
    if field.is_zero(&two) {
        // Characteristic 2: the prime field is {0, 1}.
        return (0..2)
            .filter_map(|k| field.element(k))
            .filter(|x| {
                let v = field.add(&field.sub(&field.mul(x, x), &field.mul(&b, x)), &field.one());
                field.is_zero(&v)
            })
            .collect();
    }
    let disc = field.sub(&field.mul(&b, &b), &field.from_i64(4));
    let Some(s) = field.sqrt(&disc) else {
        return Vec::new();
    };
    let half = field.inv(&two).expect("odd characteristic");
    let mut roots = vec![field.mul(&field.add(&b, &s), &half), field.mul(&field.sub(&b, &s), &half)];
    roots.dedup();
    roots
}

/// `β` from the eigenvalue ratios and `q` from `q + q⁻¹ + 1 = β`.
pub fn q_extract<F: Field>(sys: &TdSystem<F>) -> Result<QData<F>> {
    let f = &sys.field;
    let ratios = beta_ratios(f, &sys.thetas);
    let ratios_star = beta_ratios(f, &sys.thetas_star);
    let Some(beta) = ratios.first().cloned() else {
        return match &sys.q_hint {
            Some(q) => classify(f, q.clone(), None, "q taken from the supplied hint".into()),
            None => Ok(QData::undetermined("d <= 2: no eigenvalue ratio determines q")),
        };
    };
    if let Some(bad) = ratios.iter().chain(&ratios_star).find(|r| **r != beta) {
        return Err(Error::identity("beta_ratios", format!("ratios {} and {} differ", f.format(&beta), f.format(bad))));
    }
    let roots = quadratic_roots(f, &beta);
    if let Some(q) = &sys.q_hint {
        if !roots.contains(q) {
            return Err(Error::InvalidInput(format!(
                "q hint {} does not satisfy q + 1/q + 1 = {}",
                f.format(q),
                f.format(&beta)
            )));
        }
        return classify(f, q.clone(), Some(beta), "q taken from the supplied hint".into());
    }
    match roots.iter().min_by_key(|r| text_key(f, r)) {
        None => Ok(QData { beta: Some(beta), q: QValue::Undetermined, note: "q is not in the field".into() }),
        Some(q) => {
            let others: Vec<String> = roots.iter().filter(|r| *r != q).map(|r| f.format(r)).collect();
            let note = if others.is_empty() {
                "double root".to_string()
            } else {
                format!("chose {} over {}", f.format(q), others.join(", "))
            };
            classify(f, q.clone(), Some(beta), note)
        }
    }
}

/// `(q;q)_k = (1−q)(1−q²)…(1−q^k)`.
pub fn q_pochhammer<F: Field>(field: &F, q: &F::Elem, k: usize) -> F::Elem {
    let mut acc = field.one();
    let mut power = field.one();
    for _ in 0..k {
        power = field.mul(&power, q);
        acc = field.mul(&acc, &field.sub(&field.one(), &power));
    }
    acc
}

fn factorial<F: Field>(field: &F, k: usize) -> F::Elem {
    (1..=k).fold(field.one(), |acc, j| field.mul(&acc, &field.from_i64(j as i64)))
}

/// `[r,s,t]_q`. Brackets with a zero argument are 1 without consulting `q`;
/// `q = 1` uses the factorial limit of the Pochhammer ratio.
pub fn bracket<F: Field>(field: &F, r: usize, s: usize, t: usize, qd: &QData<F>) -> Result<F::Elem> {
    if r.min(s).min(t) == 0 {
        return Ok(field.one());
    }
    let total = r + s + t;
    let ratio = |g: &dyn Fn(usize) -> F::Elem| -> Result<F::Elem> {
        let num = field.mul(&field.mul(&g(r + s), &g(r + t)), &g(s + t));
        let den = field.mul(&field.mul(&field.mul(&g(r), &g(s)), &g(t)), &g(total));
        field
            .div(&num, &den)
            .ok_or_else(|| Error::Unsupported(format!("bracket [{r},{s},{t}] has a vanishing denominator")))
    };
    match &qd.q {
        QValue::Generic(q) => ratio(&|k| q_pochhammer(field, q, k)),
        QValue::One => {
            let p = field.characteristic();
            if p != 0 && p as usize <= total {
                return Err(Error::Unsupported(format!("q = 1 bracket needs characteristic above {total}")));
            }
            ratio(&|k| factorial(field, k))
        }
        QValue::MinusOne => Err(Error::Unsupported("bracket at q = -1".into())),
        QValue::Undetermined => {
            Err(Error::Unsupported(format!("bracket [{r},{s},{t}] needs q, which is undetermined")))
        }
    }
}

fn bracket_table<F: Field>(field: &F, d: usize, qd: &QData<F>) -> Result<Vec<Vec<F::Elem>>> {
    (0..=d).map(|i| (0..=i).map(|h| bracket(field, h, i - h, d - i, qd)).collect()).collect()
}

/// `η_i = Σ_h [h, i−h, d−i]_q η_{i−h}(θ_0) τ_h` for both sequences.
pub fn bracket_expansion_check<F: Field>(sys: &TdSystem<F>, qd: &QData<F>) -> Result<Report> {
    let f = &sys.field;
    let d = sys.d();
    let mut report = Report::new();
    let table = match bracket_table(f, d, qd) {
        Ok(t) => t,
        Err(e) => {
            report.skip("bracket_expansion", e.to_string());
            report.skip("bracket_expansion_star", e.to_string());
            return Ok(report);
        }
    };
    for (id, seq) in [("bracket_expansion", &sys.thetas), ("bracket_expansion_star", &sys.thetas_star)] {
        let fam = TauEtaFamily::new(f, seq)?;
        let bad = (0..=d).find(|&i| {
            let rhs = (0..=i).fold(Poly::zero(f), |acc, h| {
                let c = f.mul(&table[i][h], &fam.eta(i - h).eval(&seq[0]));
                acc.add(&fam.tau(h).scale(&c))
            });
            &rhs != fam.eta(i)
        });
        let limit_note = matches!(qd.q, QValue::One).then(|| "q = 1 limit bracket".to_string());
        match bad {
            None => report.push(id, Status::Pass, limit_note),
            Some(i) => report.fail(id, format!("fails at i = {i}")),
        }
    }
    Ok(report)
}

/// One relation between split sequences of two relatives:
/// `target_i / D_i = Σ_h [h, i−h, d−i] w_{i−h} source_h / D_h`, where
/// `D_i = (x_0 − x_1)…(x_0 − x_i)`.
fn relation_image<F: Field>(
    field: &F,
    brackets: &[Vec<F::Elem>],
    denom_seq: &[F::Elem],
    weights: &[F::Elem],
    source: &[F::Elem],
) -> Vec<F::Elem> {
    let d = source.len() - 1;
    let denoms: Vec<F::Elem> = (0..=d)
        .map(|i| denom_seq[1..=i].iter().fold(field.one(), |acc, x| field.mul(&acc, &field.sub(&denom_seq[0], x))))
        .collect();
    (0..=d)
        .map(|i| {
            let sum = (0..=i).fold(field.zero(), |acc, h| {
                let term = field.mul(&field.mul(&brackets[i][h], &weights[i - h]), &source[h]);
                let term = field.div(&term, &denoms[h]).expect("distinct eigenvalues");
                field.add(&acc, &term)
            });
            field.mul(&sum, &denoms[i])
        })
        .collect()
}

/// Split sequences of all eight relatives, computed on revalidated systems.
#[derive(Clone, Debug)]
pub struct OrbitMember<F: Field> {
    pub element: D4Element,
    pub array: Option<ParameterArray<F>>,
    pub shape: Option<Shape>,
}

#[derive(Clone, Debug)]
pub struct Orbit<F: Field> {
    pub members: Vec<OrbitMember<F>>,
    pub qdata: Option<QData<F>>,
    pub report: Report,
}

impl<F: Field> Orbit<F> {
    pub fn zetas(&self, g: D4Element) -> Option<&[F::Elem]> {
        self.members.iter().find(|m| m.element == g).and_then(|m| m.array.as_ref()).map(|a| a.zetas.as_slice())
    }
}

fn show<F: Field>(field: &F, v: &[F::Elem]) -> String {
    format!("({})", v.iter().map(|x| field.format(x)).collect::<Vec<_>>().join(","))
}

/// Relations among the split sequences of the relatives of a sharp system.
pub fn zeta_relations_check<F: Field>(
    v: &Validated<F>,
    zeta_of: &dyn Fn(D4Element) -> Option<Vec<F::Elem>>,
    qd: Option<&QData<F>>,
) -> Report {
    let sys = &v.system;
    let f = &sys.field;
    let d = sys.d();
    let mut report = Report::new();
    let by_name = |w: &str| zeta_of(w.parse().expect("valid word"));
    let (Some(z), Some(z_dn), Some(z_ddn), Some(z_both)) = (by_name("1"), by_name("↓"), by_name("⇓"), by_name("↓⇓"))
    else {
        report.fail("relative_split_sequences", "a relative has no split sequence");
        return report;
    };

    for word in ["1", "↓", "⇓", "↓⇓"] {
        let g: D4Element = word.parse().expect("valid word");
        let a = zeta_of(g);
        let b = zeta_of(g.compose(D4Element::STAR));
        report.check(format!("same_split_sequence_{}", g.name()), a == b, || {
            format!(
                "{} has {:?}, its *-relative {:?}",
                g,
                a.as_ref().map(|x| show(f, x)),
                b.as_ref().map(|x| show(f, x))
            )
        });
    }

    let last = |w: &str| zeta_of(w.parse().expect("valid word")).map(|z| z[d].clone());
    let ok_i = ["1", "*", "↓⇓", "↓⇓*"].iter().all(|w| last(w).as_ref() == Some(&z[d]));
    report.check("last_term_equal_zeta_d", ok_i, || "last terms differ from zeta_d".into());
    match eta_weighted_sum(f, &sys.thetas, &sys.thetas_star, &z) {
        Ok(sum) => {
            let ok = ["↓", "⇓", "↓*", "⇓*"].iter().all(|w| last(w).as_ref() == Some(&sum));
            report.check("last_term_equal_weighted_sum", ok, || format!("expected {}", f.format(&sum)));
        }
        Err(e) => report.fail("last_term_equal_weighted_sum", e.to_string()),
    }

    let Some(qd) = qd else {
        report.skip("relations", "q could not be extracted");
        return report;
    };
    let brackets = match bracket_table(f, d, qd) {
        Ok(b) => b,
        Err(e) => {
            for id in ["relation_down", "relation_ddown", "relation_both_from_down", "relation_both_from_ddown"] {
                report.skip(id, e.to_string());
            }
            return report;
        }
    };
    let fam = TauEtaFamily::new(f, &sys.thetas).expect("validated eigenvalues");
    let fam_star = TauEtaFamily::new(f, &sys.thetas_star).expect("validated eigenvalues");
    let eta_w: Vec<F::Elem> = (0..=d).map(|m| fam.eta(m).eval(&sys.thetas[0])).collect();
    let tau_w: Vec<F::Elem> = (0..=d).map(|m| fam.tau(m).eval(&sys.thetas[d])).collect();
    let eta_star_w: Vec<F::Elem> = (0..=d).map(|m| fam_star.eta(m).eval(&sys.thetas_star[0])).collect();
    let tau_star_w: Vec<F::Elem> = (0..=d).map(|m| fam_star.tau(m).eval(&sys.thetas_star[d])).collect();
    let rev = |s: &[F::Elem]| s.iter().rev().cloned().collect::<Vec<_>>();
    let theta_rev = rev(&sys.thetas);
    let theta_star_rev = rev(&sys.thetas_star);

    // (id, denominators, forward weights, inverse weights, source, target)
    let parts: [(&str, &[F::Elem], &[F::Elem], &[F::Elem], &[F::Elem], &[F::Elem]); 4] = [
        ("relation_down", &sys.thetas, &eta_star_w, &tau_star_w, &z, &z_dn),
        ("relation_ddown", &sys.thetas_star, &eta_w, &tau_w, &z, &z_ddn),
        ("relation_both_from_down", &theta_star_rev, &eta_w, &tau_w, &z_dn, &z_both),
        ("relation_both_from_ddown", &theta_rev, &eta_star_w, &tau_star_w, &z_ddn, &z_both),
    ];
    for (id, denoms, fwd, inv, source, target) in parts {
        let forward = relation_image(f, &brackets, denoms, fwd, source);
        report.check(format!("{id}_forward"), forward == target, || {
            format!("predicted {} vs {}", show(f, &forward), show(f, target))
        });
        let backward = relation_image(f, &brackets, denoms, inv, target);
        report.check(format!("{id}_inverse"), backward == source, || {
            format!("predicted {} vs {}", show(f, &backward), show(f, source))
        });
        let round = relation_image(f, &brackets, denoms, inv, &forward);
        report.check(format!("{id}_roundtrip"), round == source, || {
            format!("{} vs {}", show(f, &round), show(f, source))
        });
    }
    // At i = d every bracket has a zero argument, so the ⇓ relation must
    // reproduce the weighted-sum formula for the last term.
    let at_d = relation_image(f, &brackets, &sys.thetas_star, &eta_w, &z)[d].clone();
    let sum = eta_weighted_sum(f, &sys.thetas, &sys.thetas_star, &z).expect("validated eigenvalues");
    report.check("relation_ddown_last_term", at_d == sum, || format!("{} vs {}", f.format(&at_d), f.format(&sum)));
    report
}

/// Parameter arrays and shapes of all relatives, revalidated from scratch,
/// plus the split-sequence relations.
pub fn orbit_report<F: Field>(v: &Validated<F>, options: ValidateOptions) -> Orbit<F> {
    let sys = &v.system;
    let mut report = Report::new();
    let mut members = Vec::with_capacity(8);
    for g in D4Element::all() {
        let rel = apply_relative(sys, g);
        let val = validate(&rel, options);
        let (array, shape) = match &val.validated {
            Some(rv) => (parameter_array(rv).ok(), Some(rv.shape.clone())),
            None => (None, None),
        };
        report.check(format!("relative_valid_{}", g.name()), val.validated.is_some() && !val.report.has_fail(), || {
            val.report.failures().join("; ")
        });
        members.push(OrbitMember { element: g, array, shape });
    }
    let shapes_equal = members.iter().all(|m| m.shape.as_ref() == Some(&v.shape));
    report.check("relative_shapes_equal", shapes_equal, || "shapes differ across the orbit".into());
    let sharp = members.iter().all(|m| m.array.is_some());
    report.check("relatives_sharp", sharp, || "some relative is not sharp".into());

    let qdata = match q_extract(sys) {
        Ok(qd) => {
            report.push("q_extract", Status::Pass, Some(format!("{}; {}", qd.describe(&sys.field), qd.note)));
            Some(qd)
        }
        Err(e) => {
            report.fail("q_extract", e.to_string());
            None
        }
    };
    if let Some(qd) = &qdata {
        match bracket_expansion_check(sys, qd) {
            Ok(r) => report.extend(r),
            Err(e) => report.fail("bracket_expansion", e.to_string()),
        }
    }
    let lookup =
        |g: D4Element| members.iter().find(|m| m.element == g).and_then(|m| m.array.as_ref()).map(|a| a.zetas.clone());
    report.extend(zeta_relations_check(v, &lookup, qdata.as_ref()));
    Orbit { members, qdata, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::Matrix;
    use crate::scalars::{PrimeField, Rationals};
    use proptest::prelude::*;

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

    fn q_of(v: &[i64]) -> Vec<num_rational::BigRational> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    fn el(w: &str) -> D4Element {
        w.parse().unwrap()
    }

    #[test]
    fn group_relations() {
        assert_eq!(el("↓").compose(el("↓")), D4Element::IDENTITY);
        assert_eq!(el("⇓⇓"), D4Element::IDENTITY);
        assert_eq!(el("**"), D4Element::IDENTITY);
        assert_eq!(el("⇓").compose(el("*")), el("*↓"));
        assert_eq!(el("↓*"), el("*⇓"));
        assert_eq!(el("↓⇓"), el("⇓↓"));
        assert_eq!(el("*").compose(el("*")).compose(el("↓")), el("↓"));
        let names: Vec<String> = D4Element::all().iter().map(|g| g.name()).collect();
        assert_eq!(names, ["1", "↓", "⇓", "↓⇓", "*", "↓*", "⇓*", "↓⇓*"]);
    }

    #[test]
    fn composition_is_a_group_table() {
        let all = D4Element::all();
        for g in all {
            let row: std::collections::HashSet<_> = all.iter().map(|h| g.compose(*h)).collect();
            assert_eq!(row.len(), 8);
            for h in all {
                for k in all {
                    assert_eq!(g.compose(h).compose(k), g.compose(h.compose(k)));
                }
            }
        }
        // not abelian
        assert_ne!(el("↓").compose(el("*")), el("*").compose(el("↓")));
    }

    #[test]
    fn composition_matches_data_level_application() {
        let v = x1();
        for g in D4Element::all() {
            for h in D4Element::all() {
                let twice = apply_relative(&apply_relative(&v.system, g), h);
                assert_eq!(twice, apply_relative(&v.system, g.compose(h)));
                let twice = apply_relative_validated(&apply_relative_validated(&v, g), h);
                let once = apply_relative_validated(&v, g.compose(h));
                assert_eq!((twice.e, twice.e_star), (once.e, once.e_star));
            }
        }
    }

    #[test]
    fn x1_relatives() {
        let v = x1();
        let back = apply_relative(&apply_relative(&v.system, D4Element::DOWN), D4Element::DOWN);
        assert_eq!(back, v.system);
        let dd = apply_relative(&v.system, D4Element::DDOWN);
        assert_eq!((dd.thetas, dd.thetas_star), (q_of(&[0, 1]), q_of(&[1, 0])));
        let orbit = orbit_report(&v, ValidateOptions::default());
        assert_eq!(orbit.report.overall(), Status::Pass, "{:?}", orbit.report.failures());
        for m in &orbit.members {
            assert_eq!(m.shape.as_ref().unwrap().rho, vec![1, 1]);
        }
        assert_eq!(orbit.zetas(el("1")).unwrap(), &q_of(&[1, 1])[..]);
        assert_eq!(orbit.zetas(el("*")).unwrap(), &q_of(&[1, 1])[..]);
        assert_eq!(orbit.zetas(el("⇓")).unwrap(), &q_of(&[1, 2])[..]);
        assert_eq!(orbit.zetas(el("↓")).unwrap(), &q_of(&[1, 2])[..]);
        assert_eq!(orbit.zetas(el("↓⇓")).unwrap()[1], Rationals.one());
        let dn = orbit.members.iter().find(|m| m.element == el("↓")).unwrap();
        let arr = dn.array.as_ref().unwrap();
        assert_eq!((arr.thetas.clone(), arr.thetas_star.clone()), (q_of(&[1, 0]), q_of(&[0, 1])));
    }

    #[test]
    fn q_extraction() {
        let f = Rationals;
        let sys = |th: &[i64]| {
            let n = th.len();
            TdSystem::new(&f, Matrix::identity(&f, n), Matrix::identity(&f, n), q_of(th), q_of(th)).unwrap()
        };
        let qd = q_extract(&sys(&[1, 2, 4, 8])).unwrap();
        assert_eq!(qd.beta, Some(f.from_ratio(7, 2).unwrap()));
        assert_eq!(qd.q, QValue::Generic(f.from_i64(2)));
        let qd = q_extract(&sys(&[0, 1, 2, 3])).unwrap();
        assert_eq!((qd.beta, qd.q), (Some(f.from_i64(3)), QValue::One));
        assert_eq!(q_extract(&sys(&[1, 0])).unwrap().q, QValue::Undetermined);
        // θ_i = (−1)^i i has q = −1 and β = −1
        let qd = q_extract(&sys(&[0, -1, 2, -3])).unwrap();
        assert_eq!((qd.beta, qd.q), (Some(f.from_i64(-1)), QValue::MinusOne));
        assert!(q_extract(&sys(&[0, 1, 2, 4, 5])).is_err());
    }

    #[test]
    fn bracket_values() {
        let f = Rationals;
        let q2 = QData { beta: None, q: QValue::Generic(f.from_i64(2)), note: String::new() };
        let qh = QData { beta: None, q: QValue::Generic(f.from_ratio(1, 2).unwrap()), note: String::new() };
        let nine_sevenths = f.from_ratio(9, 7).unwrap();
        assert_eq!(bracket(&f, 1, 1, 1, &q2).unwrap(), nine_sevenths);
        assert_eq!(bracket(&f, 1, 1, 1, &qh).unwrap(), nine_sevenths);
        // direct Pochhammer values at q = 2
        assert_eq!(q_pochhammer(&f, &f.from_i64(2), 1), f.from_i64(-1));
        assert_eq!(q_pochhammer(&f, &f.from_i64(2), 2), f.from_i64(3));
        assert_eq!(q_pochhammer(&f, &f.from_i64(2), 3), f.from_i64(-21));
        let none = QData::<Rationals>::undetermined("");
        assert_eq!(bracket(&f, 3, 2, 0, &none).unwrap(), f.one());
        assert!(bracket(&f, 1, 1, 1, &none).is_err());
        let m1 = QData::<Rationals> { beta: None, q: QValue::MinusOne, note: String::new() };
        assert!(bracket(&f, 1, 1, 1, &m1).is_err());
        let one = QData::<Rationals> { beta: None, q: QValue::One, note: String::new() };
        // 2!2!2!/(1!1!1!3!) = 8/6
        assert_eq!(bracket(&f, 1, 1, 1, &one).unwrap(), f.from_ratio(4, 3).unwrap());
        let g2 = PrimeField::new(2).unwrap();
        let one2 = QData::<PrimeField> { beta: None, q: QValue::One, note: String::new() };
        assert!(bracket(&g2, 1, 1, 1, &one2).is_err());
    }

    #[test]
    fn expansion_examples() {
        let f = Rationals;
        let sys = TdSystem::new(
            &f,
            Matrix::identity(&f, 4),
            Matrix::identity(&f, 4),
            q_of(&[1, 2, 4, 8]),
            q_of(&[1, 2, 4, 8]),
        )
        .unwrap();
        let qd = q_extract(&sys).unwrap();
        let r = bracket_expansion_check(&sys, &qd).unwrap();
        assert_eq!(r.overall(), Status::Pass);
        let sys2 =
            TdSystem::new(&f, Matrix::identity(&f, 3), Matrix::identity(&f, 3), q_of(&[0, 1, 5]), q_of(&[2, 3, 9]))
                .unwrap();
        let r = bracket_expansion_check(&sys2, &QData::undetermined("")).unwrap();
        assert_eq!(r.status_of("bracket_expansion"), Some(Status::Pass));
    }

    proptest! {
        #[test]
        fn bracket_symmetric_and_inverse_invariant(qv in 2u64..10006, r in 0usize..7, s in 0usize..7, t in 0usize..7) {
            let f = PrimeField::new(10007).unwrap();
            let q = qv;
            let qi = f.inv(&q).unwrap();
            let admissible = (1..=r + s + t).all(|k| !f.is_one(&f.pow(&q, k as u64)));
            prop_assume!(admissible);
            let mk = |x: u64| QData::<PrimeField> { beta: None, q: QValue::Generic(x), note: String::new() };
            let b = bracket(&f, r, s, t, &mk(q)).unwrap();
            prop_assert_eq!(&b, &bracket(&f, r, s, t, &mk(qi)).unwrap());
            for (a, bb, c) in [(s, r, t), (t, s, r), (r, t, s), (s, t, r), (t, r, s)] {
                prop_assert_eq!(&b, &bracket(&f, a, bb, c, &mk(q)).unwrap());
            }
        }
    }
}
