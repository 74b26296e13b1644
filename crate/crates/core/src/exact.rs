//! Exact rational arithmetic and sparse graded multivariate polynomials.
//!
//! Every class the engine manipulates (Chern classes, ψ-classes, boundary
//! divisors, hyperplane classes) is a [`GradedPoly`]: a sparse map from
//! exponent vectors to [`Rational`] coefficients over a fixed, named list of
//! generators, each with a positive degree. Products are truncated eagerly
//! above the polynomial's truncation degree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Ordered list of named generators with their degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generators {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl Generators {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Arc<Self> {
        let (names, degrees): (Vec<String>, Vec<u32>) =
            gens.into_iter().map(|(n, d)| (n.into(), d)).unzip();
        assert!(degrees.iter().all(|&d| d > 0), "generator degrees must be positive");
        Arc::new(Generators { names, degrees })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }
}

/// Exponent vector tagged with its weighted degree.
///
/// The derived ordering compares the degree first and then the exponents
/// lexicographically, which is the canonical graded-lex term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(gens: &Generators, exps: Vec<u32>) -> Self {
        debug_assert_eq!(exps.len(), gens.len());
        Monomial { degree: gens.weighted_degree(&exps), exps }
    }

    pub fn one(gens: &Generators) -> Self {
        Monomial { degree: 0, exps: vec![0; gens.len()] }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// True when `other` divides `self`.
    pub fn divisible_by(&self, other: &[u32]) -> bool {
        self.exps.iter().zip(other).all(|(a, b)| a >= b)
    }
}

/// Sparse polynomial over exact rationals with graded generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    gens: Arc<Generators>,
    truncation: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero(gens: &Arc<Generators>, truncation: u32) -> Self {
        GradedPoly { gens: Arc::clone(gens), truncation, terms: BTreeMap::new() }
    }

    pub fn one(gens: &Arc<Generators>, truncation: u32) -> Self {
        Self::constant(gens, truncation, Rational::one())
    }

    pub fn constant(gens: &Arc<Generators>, truncation: u32, c: Rational) -> Self {
        let mut p = Self::zero(gens, truncation);
        p.add_term(Monomial::one(gens), c);
        p
    }

    /// The generator named `name`, or an error if the list has no such entry.
    pub fn var(gens: &Arc<Generators>, truncation: u32, name: &str) -> Result<Self, AlgebraError> {
        let idx = gens
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(Self::var_index(gens, truncation, idx))
    }

    pub fn var_index(gens: &Arc<Generators>, truncation: u32, idx: usize) -> Self {
        let mut exps = vec![0; gens.len()];
        exps[idx] = 1;
        Self::monomial(gens, truncation, exps, Rational::one())
    }

    pub fn monomial(gens: &Arc<Generators>, truncation: u32, exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(gens, truncation);
        p.add_term(Monomial::new(gens, exps), c);
        p
    }

    pub fn generators(&self) -> &Arc<Generators> {
        &self.gens
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        let m = Monomial::new(&self.gens, exps.to_vec());
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(&self.gens)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest weighted degree carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Adds `c * m`, dropping the term if it cancels or exceeds the truncation.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree > self.truncation {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        if !Arc::ptr_eq(&self.gens, &other.gens) && self.gens != other.gens {
            return Err(AlgebraError::GeneratorMismatch {
                left: self.gens.names().to_vec(),
                right: other.gens.names().to_vec(),
            });
        }
        if self.truncation != other.truncation {
            return Err(AlgebraError::TruncationMismatch(self.truncation, other.truncation));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.gens, self.truncation);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.gens, self.truncation);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree + m2.degree > self.truncation {
                    // terms are sorted by degree, so the rest of this row is too big
                    break;
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.gens, self.truncation);
        for _ in 0..k {
            acc = acc.mul(self).expect("same generators");
        }
        acc
    }

    /// Multiplicative inverse of a polynomial whose constant term is 1, up to truncation.
    ///
    /// Writes `a = 1 - x` with `x` having no constant term and sums the
    /// geometric series `1 + x + x^2 + ...`, which terminates because every
    /// power of `x` raises the minimum degree.
    pub fn inverse_unit(&self) -> Result<Self, AlgebraError> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(AlgebraError::NotAUnit(c0));
        }
        let one = Self::one(&self.gens, self.truncation);
        let x = one.sub(self)?;
        let mut out = one.clone();
        let mut power = one;
        for _ in 0..self.truncation {
            power = power.mul(&x)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// `self^k` for possibly negative `k`; negative powers need a unit constant term.
    pub fn pow_signed(&self, k: i64) -> Result<Self, AlgebraError> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inverse_unit()?.pow(k.unsigned_abs() as u32))
        }
    }

    /// Part of weighted degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.gens, self.truncation);
        out.terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        out
    }

    /// Drops every term of degree above `t` and lowers the truncation to `t`.
    pub fn truncate(&self, t: u32) -> Self {
        let mut out = Self::zero(&self.gens, t);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Retains only the terms for which `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        let mut out = Self::zero(&self.gens, self.truncation);
        out.terms = self
            .terms
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        out
    }

    /// Ring homomorphism sending generator `i` to `images[i]`.
    ///
    /// All images must share a generator list and truncation; the result
    /// lives there. Powers of each image are cached so large substitutions
    /// (e.g. pullbacks with dozens of boundary terms) stay cheap.
    pub fn substitute(&self, images: &[GradedPoly]) -> Result<GradedPoly, AlgebraError> {
        if images.len() != self.gens.len() {
            return Err(AlgebraError::ArityMismatch { expected: self.gens.len(), got: images.len() });
        }
        let target = match images.first() {
            Some(first) => first,
            None => {
                return Err(AlgebraError::ArityMismatch { expected: 0, got: 0 });
            }
        };
        for img in images {
            target.check_compatible(img)?;
        }
        let mut powers: Vec<Vec<GradedPoly>> =
            vec![vec![GradedPoly::one(target.generators(), target.truncation)]; images.len()];
        let mut out = GradedPoly::zero(target.generators(), target.truncation);
        for (m, c) in &self.terms {
            let mut prod = GradedPoly::constant(target.generators(), target.truncation, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty").mul(&images[i])?;
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][e as usize])?;
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }
}

impl GradedPoly {
    fn write_terms<'a>(
        &self,
        f: &mut impl fmt::Write,
        terms: impl Iterator<Item = (&'a Monomial, &'a Rational)>,
    ) -> fmt::Result {
        let mut first = true;
        for (m, c) in terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let factors: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = &self.gens.names[i];
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }

    /// Like `Display`, with the highest terms first.
    pub fn to_string_descending(&self) -> String {
        let mut out = String::new();
        self.write_terms(&mut out, self.terms.iter().rev()).expect("writing to a String");
        out
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f, self.terms.iter())
    }
}
