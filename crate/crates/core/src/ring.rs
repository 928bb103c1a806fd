//! Exact truncated polynomial algebra over the rationals.
//!
//! A [`Ring`] is a polynomial ring in named degree-one generators, truncated
//! above a fixed complex degree. [`GradedElement`]s are sparse maps from
//! [`Monomial`]s to [`Rational`] coefficients, kept in canonical form: no
//! zero coefficients, no terms above the truncation degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number; always normalized with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Generalized binomial coefficient `n(n-1)...(n-m+1)/m!` as an integer.
pub fn binom_int(n: i64, m: i64) -> Result<BigInt> {
    if m < 0 {
        return Err(Error::Argument(format!("binomial lower index {m} is negative")));
    }
    if n >= 0 && n < m {
        return Ok(BigInt::zero());
    }
    // Falling product divided incrementally stays integral at every step.
    let mut acc = BigInt::one();
    for i in 0..m {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// Generalized binomial coefficient with the convention under which the
/// binomial theorem holds for every integer exponent.
pub fn binom(n: i64, m: i64) -> Result<Rational> {
    binom_int(n, m).map(Rational::from_integer)
}

/// A polynomial ring in named degree-one generators, truncated above
/// `truncation`. Rings compare structurally, including their label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    label: String,
    generators: Vec<String>,
    truncation: u32,
}

impl Ring {
    /// Generators are sorted lexicographically; duplicates are rejected.
    pub fn new<I, S>(label: impl Into<String>, generators: I, truncation: u32) -> Result<Arc<Ring>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut generators: Vec<String> = generators.into_iter().map(Into::into).collect();
        generators.sort();
        if let Some(w) = generators.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Argument(format!("duplicate generator `{}`", w[0])));
        }
        Ok(Arc::new(Ring {
            label: label.into(),
            generators,
            truncation,
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.binary_search_by(|g| g.as_str().cmp(name)).ok()
    }
}

/// Exponent vector aligned with the generator list of a [`Ring`].
///
/// Ordering is graded: lower total degree first, then lexicographically
/// larger exponent vectors first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn unit(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Truncated polynomial over [`Rational`] tied to a [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedElement {
    pub fn zero(ring: &Arc<Ring>) -> GradedElement {
        GradedElement {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> GradedElement {
        GradedElement::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> GradedElement {
        GradedElement::from_terms(ring, [(Monomial::unit(ring.generators.len()), c)])
    }

    pub fn generator(ring: &Arc<Ring>, name: &str) -> Result<GradedElement> {
        GradedElement::monomial(ring, &[(name, 1)], Rational::one())
    }

    /// `coef * prod(name^exp)`.
    pub fn monomial(ring: &Arc<Ring>, powers: &[(&str, u32)], coef: Rational) -> Result<GradedElement> {
        let mut exps = vec![0; ring.generators.len()];
        for &(name, e) in powers {
            let i = ring.generator_index(name).ok_or_else(|| Error::UnknownGenerator {
                name: name.to_string(),
                space: ring.label.clone(),
            })?;
            exps[i] += e;
        }
        Ok(GradedElement::from_terms(ring, [(Monomial::new(exps), coef)]))
    }

    /// Builds a canonical element, summing duplicates and dropping zero or
    /// over-truncation terms.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> GradedElement
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = GradedElement::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), ring.generators.len(), "monomial arity mismatch");
            out.accumulate(m, c);
        }
        out.prune();
        out
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if m.degree() > self.ring.truncation || c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_insert_with(Rational::zero) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn truncation(&self) -> u32 {
        self.ring.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `prod(name^exp)`.
    pub fn coefficient_of(&self, powers: &[(&str, u32)]) -> Result<Rational> {
        let mut exps = vec![0; self.ring.generators.len()];
        for &(name, e) in powers {
            let i = self.ring.generator_index(name).ok_or_else(|| Error::UnknownGenerator {
                name: name.to_string(),
                space: self.ring.label.clone(),
            })?;
            exps[i] += e;
        }
        Ok(self.coefficient(&Monomial::new(exps)))
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::unit(self.ring.generators.len()))
    }

    /// True when every term has total degree `deg` (the zero element counts).
    pub fn is_homogeneous(&self, deg: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == deg)
    }

    fn check_compatible(&self, other: &GradedElement) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::Incompatible {
                left: self.ring.label.clone(),
                right: other.ring.label.clone(),
            })
        }
    }

    pub fn checked_add(&self, other: &GradedElement) -> Result<GradedElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out.prune();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &GradedElement) -> Result<GradedElement> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &GradedElement) -> Result<GradedElement> {
        self.check_compatible(other)?;
        let trunc = self.ring.truncation;
        let mut out = GradedElement::zero(&self.ring);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > trunc {
                    continue;
                }
                out.accumulate(ma.product(mb), ca * cb);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> GradedElement {
        if c.is_zero() {
            return GradedElement::zero(&self.ring);
        }
        GradedElement {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Homogeneous component of degree `k`.
    pub fn degree_part(&self, k: u32) -> Result<GradedElement> {
        if k > self.ring.truncation {
            return Err(Error::Argument(format!(
                "degree {k} exceeds truncation {} of {}",
                self.ring.truncation, self.ring.label
            )));
        }
        Ok(GradedElement {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Element without its constant term.
    fn augmentation(&self) -> GradedElement {
        let mut out = self.clone();
        out.terms.remove(&Monomial::unit(self.ring.generators.len()));
        out
    }

    pub fn inverse(&self) -> Result<GradedElement> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonInvertible(format!(
                "constant term of `{self}` is zero"
            )));
        }
        let c_inv = c.recip();
        // u = c(1 + m), so u^{-1} = c^{-1} * sum (-m)^k; m is nilpotent.
        let neg_m = -self.augmentation().scale(&c_inv);
        let mut sum = GradedElement::one(&self.ring);
        let mut power = GradedElement::one(&self.ring);
        loop {
            power = &power * &neg_m;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&c_inv))
    }

    pub fn pow_int(&self, n: i64) -> Result<GradedElement> {
        if n < 0 {
            return self.inverse()?.pow_int(-n);
        }
        let mut result = GradedElement::one(&self.ring);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// `sum u^k / k!`; `u` must lie in the augmentation ideal.
    pub fn exp(&self) -> Result<GradedElement> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain(format!(
                "exp needs a zero constant term, got `{self}`"
            )));
        }
        let mut sum = GradedElement::one(&self.ring);
        let mut term = GradedElement::one(&self.ring);
        for k in 1u32.. {
            term = (&term * self).scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum)
    }

    /// Re-expresses this element in `target`, mapping each generator name
    /// through `rename`.
    pub fn transport<F>(&self, target: &Arc<Ring>, rename: F) -> Result<GradedElement>
    where
        F: Fn(&str) -> String,
    {
        let index: Vec<usize> = self
            .ring
            .generators
            .iter()
            .map(|g| {
                let name = rename(g);
                target.generator_index(&name).ok_or(Error::UnknownGenerator {
                    name,
                    space: target.label.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let n = target.generators.len();
        Ok(GradedElement::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut exps = vec![0; n];
                for (i, &e) in m.exps.iter().enumerate() {
                    exps[index[i]] += e;
                }
                (Monomial::new(exps), c.clone())
            }),
        ))
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, &e) in self.ring.generators.iter().zip(&m.exps) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            if e == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical text form: graded monomial order, `coef * gen^e * ...`, with a
/// unit coefficient omitted and rationals printed as `n/d`.
impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs} * ")?;
                }
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands belong to different rings; use the
        /// `checked_*` method for a fallible version.
        impl $trait<&GradedElement> for &GradedElement {
            type Output = GradedElement;
            fn $method(self, rhs: &GradedElement) -> GradedElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }

        impl $trait<GradedElement> for GradedElement {
            type Output = GradedElement;
            fn $method(self, rhs: GradedElement) -> GradedElement {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&GradedElement> for GradedElement {
            type Output = GradedElement;
            fn $method(self, rhs: &GradedElement) -> GradedElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn cd_ring(d: u32) -> Arc<Ring> {
        Ring::new("Cd", ["x", "theta"], d).unwrap()
    }

    fn x(r: &Arc<Ring>) -> GradedElement {
        GradedElement::generator(r, "x").unwrap()
    }

    fn theta(r: &Arc<Ring>) -> GradedElement {
        GradedElement::generator(r, "theta").unwrap()
    }

    fn one(r: &Arc<Ring>) -> GradedElement {
        GradedElement::one(r)
    }

    #[test]
    fn binom_conventions() {
        assert_eq!(binom(-1, 3).unwrap(), rat(-1));
        assert_eq!(binom(4, 0).unwrap(), rat(1));
        // (-3)(-4)/2
        assert_eq!(binom(-3, 2).unwrap(), rat((-3 * -4) / 2));
        assert_eq!(binom(2, 5).unwrap(), rat(0));
        assert_eq!(binom(0, 0).unwrap(), rat(1));
        assert!(matches!(binom(3, -1), Err(Error::Argument(_))));
    }

    #[test]
    fn binom_is_exact_for_large_arguments() {
        let b = binom_int(200, 100).unwrap();
        let expect = factorial(200) / (factorial(100) * factorial(100));
        assert_eq!(b, expect);
        assert_eq!(factorial(0), BigInt::one());
    }

    #[test]
    fn add_examples() {
        let r = cd_ring(3);
        let two_x = x(&r).scale(&rat(2));
        assert_eq!((&one(&r) + &x(&r)) + (-one(&r) + x(&r)), two_x);
        assert_eq!(&two_x + &GradedElement::zero(&r), two_x);
        assert_eq!((&x(&r) + &theta(&r)) + (&x(&r) - &theta(&r)), two_x);
    }

    #[test]
    fn mul_examples() {
        let r = cd_ring(3);
        let lhs = (&one(&r) + &x(&r)) * (&one(&r) - &x(&r));
        assert_eq!(lhs, &one(&r) - &(&x(&r) * &x(&r)));

        let xd = x(&r).pow_int(3).unwrap();
        assert!((&xd * &x(&r)).is_zero());

        let p = (&one(&r) + &theta(&r)) * (&one(&r) + &x(&r));
        assert_eq!(p.to_string(), "1 + theta + x + theta * x");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = cd_ring(3);
        let b = Ring::new("Jac", ["theta"], 3).unwrap();
        let err = one(&a).checked_add(&one(&b)).unwrap_err();
        assert!(matches!(err, Error::Incompatible { .. }));
        assert!(one(&a).checked_mul(&one(&b)).is_err());
    }

    #[test]
    fn pow_int_examples() {
        let r = Ring::new("P", ["h"], 4).unwrap();
        let h = GradedElement::generator(&r, "h").unwrap();
        let u = (&one(&r) + &h).pow_int(-3).unwrap();
        assert_eq!(u.coefficient_of(&[("h", 2)]).unwrap(), rat(6));
        assert!(u.pow_int(0).unwrap().is_one());

        // exponent d+1-g with g = d+1
        let c = cd_ring(4);
        let v = (&one(&c) + &x(&c)).pow_int(0).unwrap();
        assert!(v.is_one());

        let err = h.pow_int(-1).unwrap_err();
        assert!(matches!(err, Error::NonInvertible(_)));
    }

    #[test]
    fn inverse_examples() {
        let r = cd_ring(4);
        let inv = (&one(&r) + &x(&r)).inverse().unwrap();
        for k in 0..=4u32 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coefficient_of(&[("x", k)]).unwrap(), rat(sign));
        }
        assert!(one(&r).inverse().unwrap().is_one());
        assert!(x(&r).inverse().is_err());
    }

    #[test]
    fn inverse_of_exp_is_exp_of_negation() {
        let j = Ring::new("Jac", ["theta"], 6).unwrap();
        let t = GradedElement::generator(&j, "theta").unwrap();
        let e_minus = t.scale(&rat(-2)).exp().unwrap();
        // oracle: sum (2 theta)^k / k! written out coefficientwise
        let oracle = GradedElement::from_terms(
            &j,
            (0..=6u32).map(|k| {
                (
                    Monomial::new(vec![k]),
                    Rational::new(BigInt::from(2).pow(k), factorial(k)),
                )
            }),
        );
        assert_eq!(e_minus.inverse().unwrap(), oracle);
    }

    #[test]
    fn exp_examples() {
        let j = Ring::new("Jac(3)", ["theta"], 3).unwrap();
        assert!(GradedElement::zero(&j).exp().unwrap().is_one());
        let e = GradedElement::generator(&j, "theta").unwrap().scale(&rat(2)).exp().unwrap();
        assert_eq!(e.coefficient_of(&[("theta", 3)]).unwrap(), Rational::new(8.into(), 6.into()));

        let r = cd_ring(5);
        assert!((x(&r).exp().unwrap() * (-x(&r)).exp().unwrap()).is_one());
        assert!(matches!(one(&r).exp(), Err(Error::Domain(_))));
    }

    #[test]
    fn degree_part_examples() {
        let r = cd_ring(3);
        let u = &(&one(&r) + &x(&r).scale(&rat(2))) + &x(&r).pow_int(2).unwrap().scale(&rat(3));
        assert_eq!(u.degree_part(1).unwrap(), x(&r).scale(&rat(2)));
        assert_eq!(u.degree_part(0).unwrap(), one(&r));
        assert!(u.degree_part(4).is_err());

        let j = Ring::new("Jac(4)", ["theta"], 4).unwrap();
        let e = GradedElement::generator(&j, "theta").unwrap().scale(&rat(2)).exp().unwrap();
        let top = e.degree_part(4).unwrap();
        assert_eq!(
            top.coefficient_of(&[("theta", 4)]).unwrap(),
            Rational::new(16.into(), 24.into())
        );
    }

    #[test]
    fn display_is_canonical() {
        let r = cd_ring(2);
        let u = &x(&r).scale(&Rational::new((-1).into(), 2.into())) + &(&theta(&r) * &theta(&r));
        assert_eq!(u.to_string(), "-1/2 * x + theta^2");
        assert_eq!(GradedElement::zero(&r).to_string(), "0");
    }

    #[test]
    fn duplicate_generators_rejected() {
        assert!(Ring::new("bad", ["x", "x"], 2).is_err());
    }
}
