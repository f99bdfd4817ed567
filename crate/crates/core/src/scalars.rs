//! Exact scalar fields.
//!
//! Everything numeric in the crate is generic over [`Field`], a context
//! object that owns the arithmetic for its element type. Two fields are
//! provided: [`Rationals`] (arbitrary precision, elements are
//! [`BigRational`]) and [`PrimeField`] (residues modulo a runtime prime).
//!
//! The dynamic [`Scalar`] / [`FieldDescriptor`] pair is the interchange
//! form used by documents and the CLI, where the field is only known at
//! runtime.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field with exact arithmetic.
///
/// Implementations are cheap to clone (`Rationals` is zero-sized,
/// `PrimeField` carries its modulus). Elements always have a unique
/// canonical representation, so `==` on elements is field equality.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn descriptor(&self) -> FieldDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;

    /// Parse interchange text into a canonical element.
    fn parse(&self, text: &str) -> Result<Self::Elem>;
    /// Canonical interchange text.
    fn format(&self, a: &Self::Elem) -> String;

    /// Some square root of `a`, if one exists in the field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// The `index`-th element in a fixed enumeration; only finite fields
    /// enumerate.
    fn element(&self, index: u64) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn from_ratio(&self, num: i64, den: i64) -> Option<Self::Elem> {
        self.div(&self.from_i64(num), &self.from_i64(den))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a − b·c`.
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    /// `Σ a_i b_i`.
    fn dot<'a, I>(&self, pairs: I) -> Self::Elem
    where
        I: IntoIterator<Item = (&'a Self::Elem, &'a Self::Elem)>,
        Self::Elem: 'a,
    {
        pairs.into_iter().fold(self.zero(), |acc, (a, b)| self.add(&acc, &self.mul(a, b)))
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// Runtime description of a field, as it appears in documents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rational,
    Prime { modulus: u64 },
}

impl FieldDescriptor {
    /// Check the modulus of a prime descriptor.
    pub fn validated(self) -> Result<Self> {
        if let FieldDescriptor::Prime { modulus } = self {
            if !is_prime(modulus) {
                return Err(Error::NotPrime(modulus));
            }
        }
        Ok(self)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rational => 0,
            FieldDescriptor::Prime { modulus } => *modulus,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "rational"),
            FieldDescriptor::Prime { modulus } => write!(f, "p={modulus}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    /// Accepts `rational` / `Q` or `p=<prime>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rational") || s == "Q" {
            return Ok(FieldDescriptor::Rational);
        }
        let modulus = s
            .strip_prefix("p=")
            .and_then(|m| m.parse::<u64>().ok())
            .ok_or_else(|| Error::InvalidInput(format!("unknown field {s:?}")))?;
        FieldDescriptor::Prime { modulus }.validated()
    }
}

/// Primality by trial division up to the square root.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let limit = p.sqrt();
    (3..=limit).step_by(2).all(|k| !p.is_multiple_of(k))
}

// ---------------------------------------------------------------------------
// Rationals

/// The field ℚ with arbitrary-precision elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

fn parse_digits(text: &str, original: &str) -> Result<BigInt> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MalformedScalar { text: original.to_string(), reason: "expected decimal digits" });
    }
    Ok(BigInt::from_str(text).expect("validated digits"))
}

fn parse_signed_integer(text: &str) -> Result<BigInt> {
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let v = parse_digits(digits, text)?;
    Ok(if negative { -v } else { v })
}

impl Field for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    // The two fused operations below reduce once at the end instead of
    // after every product and sum, which dominates the cost otherwise.

    fn sub_mul(&self, a: &BigRational, b: &BigRational, c: &BigRational) -> BigRational {
        if b.is_zero() || c.is_zero() {
            return a.clone();
        }
        if a.is_integer() && b.is_integer() && c.is_integer() {
            return BigRational::from_integer(a.numer() - b.numer() * c.numer());
        }
        let den = b.denom() * c.denom();
        let num = a.numer() * &den - b.numer() * c.numer() * a.denom();
        BigRational::new(num, a.denom() * den)
    }

    fn dot<'a, I>(&self, pairs: I) -> BigRational
    where
        I: IntoIterator<Item = (&'a BigRational, &'a BigRational)>,
    {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let n = a.numer() * b.numer();
            let d = a.denom() * b.denom();
            if d == den {
                num += n;
            } else if d.is_one() {
                num += n * &den;
            } else {
                let g = den.gcd(&d);
                num = num * (&d / &g) + n * (&den / &g);
                den = den / g * d;
            }
        }
        BigRational::new(num, den)
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn parse(&self, text: &str) -> Result<BigRational> {
        match text.split_once('/') {
            None => Ok(BigRational::from_integer(parse_signed_integer(text)?)),
            Some((num, den)) => {
                let num = parse_signed_integer(num)?;
                let den = parse_digits(den, text)?;
                if den.is_zero() {
                    return Err(Error::ZeroDenominator(text.to_string()));
                }
                Ok(BigRational::new(num, den))
            }
        }
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = a.numer().sqrt();
        let d = a.denom().sqrt();
        if &(&n * &n) == a.numer() && &(&d * &d) == a.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn element(&self, _index: u64) -> Option<BigRational> {
        None
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// GF(p) for a prime `p`, residues stored in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime { modulus: self.p }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let egcd = (*a as i128).extended_gcd(&(self.p as i128));
        debug_assert_eq!(egcd.gcd, 1);
        Some(self.reduce_i128(egcd.x))
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> Option<u64> {
        Some(self.p)
    }

    fn parse(&self, text: &str) -> Result<u64> {
        if text.contains('/') {
            return Err(Error::MalformedScalar { text: text.to_string(), reason: "prime-field scalars are integers" });
        }
        let v = parse_signed_integer(text)?;
        let r = v.mod_floor(&BigInt::from(self.p));
        Ok(r.to_u64().expect("residue fits in u64"))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn sqrt(&self, a: &u64) -> Option<u64> {
        tonelli_shanks(*a, self.p)
    }

    fn element(&self, index: u64) -> Option<u64> {
        (index < self.p).then_some(index)
    }
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1).expect("a non-residue exists for odd p");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

// ---------------------------------------------------------------------------
// Dynamic scalars

/// A field element tagged with its field, for interchange.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

/// The operations of [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Mul,
    Neg,
    Inv,
    Eq,
}

/// Result of [`scalar_arith`]: `eq` yields a boolean, everything else a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarValue {
    Scalar(Scalar),
    Bool(bool),
}

impl Scalar {
    pub fn parse(text: &str, field: FieldDescriptor) -> Result<Scalar> {
        match field.validated()? {
            FieldDescriptor::Rational => Ok(Scalar::Rational(Rationals.parse(text)?)),
            FieldDescriptor::Prime { modulus } => {
                let f = PrimeField { p: modulus };
                Ok(Scalar::Prime { value: f.parse(text)?, modulus })
            }
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Rational,
            Scalar::Prime { modulus, .. } => FieldDescriptor::Prime { modulus: *modulus },
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: PrimeField { p: *modulus }.add(a, b), modulus: *modulus }
            }
            _ => unreachable!("fields checked"),
        })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: PrimeField { p: *modulus }.mul(a, b), modulus: *modulus }
            }
            _ => unreachable!("fields checked"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => {
                Scalar::Prime { value: PrimeField { p: *modulus }.neg(value), modulus: *modulus }
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(a) => Rationals.inv(a).map(Scalar::Rational),
            Scalar::Prime { value, modulus } => {
                PrimeField { p: *modulus }.inv(value).map(|value| Scalar::Prime { value, modulus: *modulus })
            }
        }
        .ok_or(Error::DivisionByZero)
    }

    pub fn field_eq(&self, other: &Scalar) -> Result<bool> {
        self.same_field(other)?;
        Ok(self == other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{a}"),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Dispatch one scalar operation. Unary operations ignore `b`.
pub fn scalar_arith(op: ScalarOp, a: &Scalar, b: Option<&Scalar>) -> Result<ScalarValue> {
    let rhs = || b.ok_or_else(|| Error::InvalidInput(format!("{op:?} needs two operands")));
    Ok(match op {
        ScalarOp::Add => ScalarValue::Scalar(a.add(rhs()?)?),
        ScalarOp::Mul => ScalarValue::Scalar(a.mul(rhs()?)?),
        ScalarOp::Neg => ScalarValue::Scalar(a.neg()),
        ScalarOp::Inv => ScalarValue::Scalar(a.inv()?),
        ScalarOp::Eq => ScalarValue::Bool(a.field_eq(rhs()?)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(text: &str) -> Scalar {
        Scalar::parse(text, FieldDescriptor::Rational).unwrap()
    }

    fn gf13(text: &str) -> Scalar {
        Scalar::parse(text, FieldDescriptor::Prime { modulus: 13 }).unwrap()
    }

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(gf13("-3").to_string(), "10");
        assert_eq!(q("0/5"), q("0"));
        assert_eq!(q("0/5").to_string(), "0");
        assert_eq!(q("-4/6").to_string(), "-2/3");
        assert_eq!(gf13("100").to_string(), "9");
    }

    #[test]
    fn parse_rejects_malformed() {
        let rat = FieldDescriptor::Rational;
        assert!(matches!(Scalar::parse("1/0", rat), Err(Error::ZeroDenominator(_))));
        for bad in ["", "-", "1.5", "+3", "1/-2", "a", "1/", "/2", " 1"] {
            assert!(Scalar::parse(bad, rat).is_err(), "{bad:?} accepted");
        }
        let gf = FieldDescriptor::Prime { modulus: 13 };
        assert!(Scalar::parse("1/2", gf).is_err());
        assert!(matches!(Scalar::parse("1", FieldDescriptor::Prime { modulus: 12 }), Err(Error::NotPrime(12))));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(scalar_arith(ScalarOp::Add, &q("1/2"), Some(&q("1/3"))).unwrap(), ScalarValue::Scalar(q("5/6")));
        // exhaustive residue search for the inverse of 5 mod 13
        let by_search = (1..13u64).find(|x| (5 * x) % 13 == 1).unwrap();
        assert_eq!(by_search, 8);
        assert_eq!(gf13("5").inv().unwrap(), gf13("8"));
        assert_eq!(q("0").inv(), Err(Error::DivisionByZero));
        assert!(matches!(q("1").add(&gf13("1")), Err(Error::FieldMismatch(..))));
        assert_eq!(scalar_arith(ScalarOp::Eq, &gf13("14"), Some(&gf13("1"))).unwrap(), ScalarValue::Bool(true));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(10007));
    }

    #[test]
    fn square_roots() {
        for p in [2u64, 3, 5, 13, 17, 10007] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p.min(200) {
                let is_square = (0..p).any(|x| (x * x) % p == a);
                match f.sqrt(&a) {
                    Some(r) => assert_eq!(f.mul(&r, &r), a),
                    None => assert!(!is_square, "missed root of {a} mod {p}"),
                }
            }
        }
        let qf = Rationals;
        assert_eq!(qf.sqrt(&qf.parse("9/4").unwrap()), Some(qf.parse("3/2").unwrap()));
        assert_eq!(qf.sqrt(&qf.parse("2").unwrap()), None);
        assert_eq!(qf.sqrt(&qf.parse("-1").unwrap()), None);
    }

    fn small_rational() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| q(&format!("{n}/{d}")))
    }

    fn residue() -> impl Strategy<Value = Scalar> {
        (0u64..10007).prop_map(|v| Scalar::Prime { value: v, modulus: 10007 })
    }

    fn check_axioms(a: &Scalar, b: &Scalar, c: &Scalar) {
        assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
        assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        assert_eq!(a.add(b).unwrap().add(c).unwrap(), a.add(&b.add(c).unwrap()).unwrap());
        assert_eq!(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
        assert_eq!(a.mul(&b.add(c).unwrap()).unwrap(), a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rational_field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            check_axioms(&a, &b, &c);
        }

        #[test]
        fn prime_field_axioms(a in residue(), b in residue(), c in residue()) {
            check_axioms(&a, &b, &c);
        }

        #[test]
        fn parse_format_roundtrip(a in small_rational(), r in residue()) {
            prop_assert_eq!(q(&a.to_string()), a.clone());
            let back = Scalar::parse(&r.to_string(), r.field()).unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn inverse_is_involution(a in small_rational(), r in residue()) {
            for x in [a, r] {
                if let Ok(xi) = x.inv() {
                    prop_assert_eq!(xi.inv().unwrap(), x.clone());
                    let one = Scalar::parse("1", x.field()).unwrap();
                    prop_assert_eq!(x.mul(&xi).unwrap(), one);
                }
            }
        }
    }
}
