//! Univariate polynomials and the τ/η families built from an eigenvalue
//! sequence.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrices::Matrix;
use crate::report::Report;
use crate::scalars::Field;

/// A polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(k, c)| {
                let c = self.field.format(c);
                match k {
                    0 => c,
                    1 => format!("({c})x"),
                    _ => format!("({c})x^{k}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> Poly<F> {
    pub fn from_coeffs(field: &F, coeffs: Vec<F::Elem>) -> Self {
        let mut p = Poly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: &F) -> Self {
        Self::from_coeffs(field, Vec::new())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// `λ − c`.
    pub fn linear(field: &F, c: &F::Elem) -> Self {
        Self::from_coeffs(field, vec![field.neg(c), field.one()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots<'a>(field: &F, roots: impl IntoIterator<Item = &'a F::Elem>) -> Self
    where
        F::Elem: 'a,
    {
        roots.into_iter().fold(Self::one(field), |acc, r| acc.mul(&Self::linear(field, r)))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f.add(&self.coeff(k), &other.coeff(k))).collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f.sub(&self.coeff(k), &other.coeff(k))).collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(f, coeffs)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Horner evaluation at a square matrix; the constant term contributes
    /// a multiple of the identity.
    pub fn eval_at_matrix(&self, m: &Matrix<F>) -> Matrix<F> {
        assert!(m.is_square(), "polynomial evaluated at a non-square matrix");
        let f = &self.field;
        let n = m.rows();
        let id = Matrix::identity(f, n);
        self.coeffs.iter().rev().fold(Matrix::zeros(f, n, n), |acc, c| &(&acc * m) + &id.scale(c))
    }

    /// Division with remainder; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let f = &self.field;
        let dd = divisor.degree()?;
        let lead_inv = f.inv(divisor.leading()?)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = f.mul(rem.last().expect("nonempty"), &lead_inv);
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, dc));
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|x| f.is_zero(x)) {
                rem.pop();
            }
        }
        Some((Self::from_coeffs(f, quot), Self::from_coeffs(f, rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(c) => self.scale(&self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| f.mul(c, &f.from_i64(k as i64))).collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn to_text(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| self.field.format(c)).collect()
    }
}

/// Characteristic polynomial `det(λI − M)`, by similarity to upper
/// Hessenberg form and the standard determinant recurrence.
pub fn charpoly<F: Field>(m: &Matrix<F>) -> Poly<F> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let f = m.field().clone();
    let n = m.rows();
    let mut h = m.clone();
    // Reduce to upper Hessenberg form by similarity.
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !f.is_zero(h.get(i, c))) else {
            continue;
        };
        if p != c + 1 {
            for j in 0..n {
                let (x, y) = (h.get(p, j).clone(), h.get(c + 1, j).clone());
                h.set(p, j, y);
                h.set(c + 1, j, x);
            }
            for i in 0..n {
                let (x, y) = (h.get(i, p).clone(), h.get(i, c + 1).clone());
                h.set(i, p, y);
                h.set(i, c + 1, x);
            }
        }
        let inv = f.inv(h.get(c + 1, c)).expect("pivot is nonzero");
        for i in c + 2..n {
            let factor = f.mul(h.get(i, c), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(i, j), &f.mul(&factor, h.get(c + 1, j)));
                h.set(i, j, v);
            }
            for k in 0..n {
                let v = f.add(h.get(k, c + 1), &f.mul(&factor, h.get(k, i)));
                h.set(k, c + 1, v);
            }
        }
    }
    // p_k = det of the leading k×k block of λI − H.
    let mut polys: Vec<Poly<F>> = vec![Poly::one(&f)];
    for k in 1..=n {
        let mut pk = Poly::linear(&f, h.get(k - 1, k - 1)).mul(&polys[k - 1]);
        let mut prod = f.one();
        for i in (1..k).rev() {
            prod = f.mul(&prod, h.get(i, i - 1));
            let term = polys[i - 1].scale(&f.mul(&prod, h.get(i - 1, k - 1)));
            pk = pk.sub(&term);
        }
        polys.push(pk);
    }
    polys.pop().expect("at least the constant polynomial")
}

/// Which end of the eigenvalue sequence a family consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// `τ_i = (λ−θ_0)…(λ−θ_{i−1})`
    Tau,
    /// `η_i = (λ−θ_d)…(λ−θ_{d−i+1})`
    Eta,
}

pub fn check_distinct<F: Field>(thetas: &[F::Elem]) -> Result<()> {
    for i in 0..thetas.len() {
        for j in i + 1..thetas.len() {
            if thetas[i] == thetas[j] {
                return Err(Error::RepeatedEigenvalue(i, j));
            }
        }
    }
    Ok(())
}

pub fn build_tau_eta<F: Field>(field: &F, thetas: &[F::Elem], i: usize, which: Which) -> Result<Poly<F>> {
    check_distinct::<F>(thetas)?;
    let d = thetas.len().saturating_sub(1);
    if thetas.is_empty() || i > d {
        return Err(Error::OutOfRange { index: i, max: d });
    }
    Ok(match which {
        Which::Tau => Poly::from_roots(field, &thetas[..i]),
        Which::Eta => Poly::from_roots(field, thetas[d + 1 - i..].iter().rev()),
    })
}

/// All of `τ_0..τ_d` and `η_0..η_d` for one eigenvalue sequence.
#[derive(Clone, Debug)]
pub struct TauEtaFamily<F: Field> {
    field: F,
    thetas: Vec<F::Elem>,
    tau: Vec<Poly<F>>,
    eta: Vec<Poly<F>>,
}

impl<F: Field> TauEtaFamily<F> {
    pub fn new(field: &F, thetas: &[F::Elem]) -> Result<Self> {
        check_distinct::<F>(thetas)?;
        if thetas.is_empty() {
            return Err(Error::InvalidInput("empty eigenvalue sequence".into()));
        }
        let d = thetas.len() - 1;
        let mut tau = vec![Poly::one(field)];
        let mut eta = vec![Poly::one(field)];
        for i in 1..=d {
            tau.push(tau[i - 1].mul(&Poly::linear(field, &thetas[i - 1])));
            eta.push(eta[i - 1].mul(&Poly::linear(field, &thetas[d + 1 - i])));
        }
        Ok(TauEtaFamily { field: field.clone(), thetas: thetas.to_vec(), tau, eta })
    }

    pub fn d(&self) -> usize {
        self.thetas.len() - 1
    }

    pub fn thetas(&self) -> &[F::Elem] {
        &self.thetas
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn tau(&self, i: usize) -> &Poly<F> {
        &self.tau[i]
    }

    pub fn eta(&self, i: usize) -> &Poly<F> {
        &self.eta[i]
    }
}

/// `η_d = Σ_i η_{d−i}(θ_0) τ_i` as a polynomial identity, or the first
/// differing coefficient.
pub fn eta_expansion_identity<F: Field>(fam: &TauEtaFamily<F>) -> std::result::Result<(), String> {
    let f = fam.field();
    let d = fam.d();
    let theta0 = &fam.thetas()[0];
    let rhs = (0..=d).fold(Poly::zero(f), |acc, i| acc.add(&fam.tau(i).scale(&fam.eta(d - i).eval(theta0))));
    let lhs = fam.eta(d);
    if *lhs == rhs {
        return Ok(());
    }
    let k = (0..=d).find(|&k| lhs.coeff(k) != rhs.coeff(k)).unwrap_or(0);
    Err(format!("coefficient of x^{k}: {} vs {}", f.format(&lhs.coeff(k)), f.format(&rhs.coeff(k))))
}

/// Both expansions `η_d = Σ η_{d−i}(θ_0)τ_i` and the starred counterpart.
pub fn eta_expansion_check<F: Field>(field: &F, thetas: &[F::Elem], thetas_star: &[F::Elem]) -> Result<Report> {
    let mut report = Report::new();
    for (id, seq) in [("eta_expansion", thetas), ("eta_expansion_star", thetas_star)] {
        let fam = TauEtaFamily::new(field, seq)?;
        match eta_expansion_identity(&fam) {
            Ok(()) => report.pass(id),
            Err(w) => report.fail(id, w),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::scalars::{PrimeField, Rationals};
    use num_rational::BigRational;
    use proptest::prelude::*;

    type QP = Poly<Rationals>;

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    fn qp(c: &[i64]) -> QP {
        Poly::from_coeffs(&Rationals, c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(qp(&[-1, 1]).mul(&qp(&[1, 1])), qp(&[-1, 0, 1]));
        assert_eq!(qp(&[-1, 0, 1]).eval(&q(2)), q(3));
        let p = qp(&[3, 0, 5]);
        assert_eq!(p.add(&QP::zero(&Rationals)), p);
        assert_eq!(QP::zero(&Rationals).degree(), None);
    }

    #[test]
    fn tau_eta_examples() {
        let th = [q(1), q(0)];
        assert_eq!(build_tau_eta(&Rationals, &th, 0, Which::Tau).unwrap(), qp(&[1]));
        assert_eq!(build_tau_eta(&Rationals, &th, 1, Which::Tau).unwrap(), qp(&[-1, 1]));
        assert_eq!(build_tau_eta(&Rationals, &th, 1, Which::Eta).unwrap(), qp(&[0, 1]));
        assert!(matches!(build_tau_eta(&Rationals, &th, 2, Which::Tau), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            build_tau_eta(&Rationals, &[q(1), q(1)], 0, Which::Tau),
            Err(Error::RepeatedEigenvalue(0, 1))
        ));
    }

    #[test]
    fn matrix_evaluation() {
        let f = Rationals;
        let m = Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]);
        assert_eq!(qp(&[0, 0, 1]).eval_at_matrix(&m), &m * &m);
        assert_eq!(qp(&[1]).eval_at_matrix(&m), Matrix::identity(&f, 2));
        let a = Matrix::from_i64(&f, &[&[1, 0], &[1, 0]]);
        let tau1 = build_tau_eta(&f, &[q(1), q(0)], 1, Which::Tau).unwrap();
        assert_eq!(tau1.eval_at_matrix(&a), Matrix::from_i64(&f, &[&[0, 0], &[1, -1]]));
    }

    #[test]
    fn eta_expansion_examples() {
        let f = Rationals;
        let r = eta_expansion_check(&f, &[q(1), q(0)], &[q(1), q(0)]).unwrap();
        assert_eq!(r.overall(), Status::Pass);
        let r = eta_expansion_check(&f, &[q(5)], &[q(7)]).unwrap();
        assert_eq!(r.overall(), Status::Pass);
        let th: Vec<_> = (0..5).map(|i| q(1 << i)).collect();
        let fam = TauEtaFamily::new(&f, &th).unwrap();
        // oracle: expand η_4 directly as a product and compare with the sum
        let direct = qp(&[-16, 1]).mul(&qp(&[-8, 1])).mul(&qp(&[-4, 1])).mul(&qp(&[-2, 1]));
        assert_eq!(fam.eta(4), &direct);
        assert!(eta_expansion_identity(&fam).is_ok());
    }

    #[test]
    fn charpoly_matches_products() {
        let f = Rationals;
        let m = Matrix::from_i64(&f, &[&[2, 1, 0], &[0, 3, 0], &[1, 0, 5]]);
        let cp = charpoly(&m);
        assert_eq!(cp, qp(&[-2, 1]).mul(&qp(&[-3, 1])).mul(&qp(&[-5, 1])));
        assert!(cp.eval_at_matrix(&m).is_zero());
        let gf = PrimeField::new(7).unwrap();
        let z = Matrix::from_i64(&gf, &[&[0, 1, 0], &[0, 0, 1], &[1, 2, 3]]);
        let cp = charpoly(&z);
        assert!(cp.is_monic() && cp.eval_at_matrix(&z).is_zero());
    }

    #[test]
    fn gcd_and_derivative() {
        let a = qp(&[-1, 0, 1]);
        let b = qp(&[-1, 1]).mul(&qp(&[-2, 1]));
        assert_eq!(a.gcd(&b), qp(&[-1, 1]));
        assert_eq!(a.derivative(), qp(&[0, 2]));
        let (quo, rem) = a.div_rem(&qp(&[-1, 1])).unwrap();
        assert_eq!((quo, rem), (qp(&[1, 1]), QP::zero(&Rationals)));
    }

    fn distinct_thetas() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::hash_set(-20i64..20, 1..7).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn tau_eta_vanishing_pattern(th in distinct_thetas()) {
            let f = PrimeField::new(10007).unwrap();
            let th: Vec<u64> = th.iter().map(|&v| f.from_i64(v)).collect();
            let fam = TauEtaFamily::new(&f, &th).unwrap();
            let d = fam.d();
            for i in 0..=d {
                prop_assert!(fam.tau(i).is_monic() && fam.tau(i).degree() == Some(i));
                for (j, t) in th.iter().enumerate() {
                    prop_assert_eq!(f.is_zero(&fam.tau(i).eval(t)), j < i);
                    prop_assert_eq!(f.is_zero(&fam.eta(i).eval(t)), j + i > d);
                }
            }
            prop_assert!(eta_expansion_identity(&fam).is_ok());
        }
    }
}
