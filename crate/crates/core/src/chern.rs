//! Virtual bundles and their Chern classes.
//!
//! A [`KClass`] is an integer combination of line bundles (given by their
//! first Chern class) and opaque bundles (given by rank and total Chern
//! class). Total Chern classes are multiplicative over the combination,
//! with negative multiplicities handled by exact series inversion.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chowring::{make_family_ring, RingSpec};
use crate::error::AlgebraError;
use crate::exact::{rat, GradedPoly, Generators, Monomial, Rational};

/// Labels of the five degree-4 monomials, in coefficient order.
pub const MONOMIAL_LABELS: [&str; 5] = ["v1^4", "v1^2*v2", "v1*v3", "v2^2", "v4"];

#[derive(Clone, Debug, PartialEq)]
pub struct LineAtom {
    pub class: GradedPoly,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleAtom {
    pub name: String,
    pub rank: u32,
    pub total_chern: GradedPoly,
}

impl BundleAtom {
    pub fn new(name: impl Into<String>, rank: u32, total_chern: GradedPoly) -> Result<Self, AlgebraError> {
        let c0 = total_chern.constant_term();
        if !c0.is_one() {
            return Err(AlgebraError::NotAUnit(c0));
        }
        Ok(BundleAtom { name: name.into(), rank, total_chern })
    }

    /// `c_i` of the bundle, as a homogeneous polynomial.
    pub fn chern_class(&self, i: u32) -> GradedPoly {
        self.total_chern.homogeneous(i)
    }

    /// The dual bundle: `c_i ↦ (-1)^i c_i`.
    pub fn dual(&self) -> BundleAtom {
        BundleAtom { name: format!("{}^v", self.name), rank: self.rank, total_chern: alternate_signs(&self.total_chern) }
    }
}

fn alternate_signs(p: &GradedPoly) -> GradedPoly {
    let mut out = GradedPoly::zero(p.generators(), p.truncation());
    for (m, c) in p.terms() {
        let c = if m.degree() % 2 == 1 { -c.clone() } else { c.clone() };
        out.add_term(m.clone(), c);
    }
    out
}

fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || n < k {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Twists a rank-r bundle by a line bundle with first Chern class `line`:
/// `c_k(B ⊗ L) = Σ_{i ≤ k} C(r-i, k-i) c_i(B) c_1(L)^{k-i}`.
pub fn tensor_line(b: &BundleAtom, line: &GradedPoly) -> Result<BundleAtom, AlgebraError> {
    if !line.is_zero() && (line.max_degree() != 1 || !line.constant_term().is_zero()) {
        return Err(AlgebraError::NotADivisor(line.max_degree()));
    }
    let r = b.rank as i64;
    let mut total = GradedPoly::zero(b.total_chern.generators(), b.total_chern.truncation());
    let line_powers: Vec<GradedPoly> = (0..=r as u32).map(|j| line.pow(j)).collect();
    for k in 0..=r {
        for i in 0..=k {
            let coeff = binomial(r - i, k - i);
            if coeff.is_zero() {
                continue;
            }
            let term = b.chern_class(i as u32).mul(&line_powers[(k - i) as usize])?.scale(&coeff);
            total = total.add(&term)?;
        }
    }
    let name = if line.is_zero() { b.name.clone() } else { format!("{} (x) O({line})", b.name) };
    BundleAtom::new(name, b.rank, total)
}

/// Element of the Grothendieck group: Σ m_j [L_j] + Σ n_k [B_k].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KClass {
    lines: Vec<LineAtom>,
    bundles: Vec<(BundleAtom, i64)>,
}

impl KClass {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `multiplicity` copies of the line bundle with first Chern class `class`.
    pub fn with_line(mut self, class: GradedPoly, multiplicity: i64) -> Self {
        self.lines.push(LineAtom { class, multiplicity });
        self
    }

    pub fn with_bundle(mut self, atom: BundleAtom, multiplicity: i64) -> Self {
        self.bundles.push((atom, multiplicity));
        self
    }

    pub fn lines(&self) -> &[LineAtom] {
        &self.lines
    }

    pub fn bundles(&self) -> &[(BundleAtom, i64)] {
        &self.bundles
    }

    pub fn virtual_rank(&self) -> i64 {
        self.lines.iter().map(|l| l.multiplicity).sum::<i64>()
            + self.bundles.iter().map(|(b, m)| b.rank as i64 * m).sum::<i64>()
    }

    pub fn add(&self, other: &KClass) -> KClass {
        let mut out = self.clone();
        out.lines.extend(other.lines.iter().cloned());
        out.bundles.extend(other.bundles.iter().cloned());
        out
    }

    pub fn neg(&self) -> KClass {
        KClass {
            lines: self.lines.iter().map(|l| LineAtom { class: l.class.clone(), multiplicity: -l.multiplicity }).collect(),
            bundles: self.bundles.iter().map(|(b, m)| (b.clone(), -m)).collect(),
        }
    }

    pub fn dual(&self) -> KClass {
        KClass {
            lines: self.lines.iter().map(|l| LineAtom { class: l.class.neg(), multiplicity: l.multiplicity }).collect(),
            bundles: self.bundles.iter().map(|(b, m)| (b.dual(), *m)).collect(),
        }
    }

    /// Tensors every atom by the line bundle with first Chern class `line`.
    pub fn twist(&self, line: &GradedPoly) -> Result<KClass, AlgebraError> {
        let mut lines = Vec::with_capacity(self.lines.len());
        for l in &self.lines {
            lines.push(LineAtom { class: l.class.add(line)?, multiplicity: l.multiplicity });
        }
        let mut bundles = Vec::with_capacity(self.bundles.len());
        for (b, m) in &self.bundles {
            bundles.push((tensor_line(b, line)?, *m));
        }
        Ok(KClass { lines, bundles })
    }

    /// Total Chern class in `ring`, via the Whitney formula.
    pub fn total_chern(&self, ring: &RingSpec) -> Result<GradedPoly, AlgebraError> {
        let mut total = ring.one();
        for l in &self.lines {
            let factor = ring.one().add(&l.class)?;
            total = ring.mul(&total, &factor.pow_signed(l.multiplicity)?)?;
        }
        for (b, m) in &self.bundles {
            total = ring.mul(&total, &b.total_chern.pow_signed(*m)?)?;
        }
        ring.normalize(&total)
    }

    /// The five integrals ∫ v1^4, ∫ v1^2 v2, ∫ v1 v3, ∫ v2^2, ∫ v4 over `ring`.
    pub fn chern_vector(&self, ring: &RingSpec) -> Result<ChernVector, AlgebraError> {
        let rank = self.virtual_rank();
        if rank != 4 {
            return Err(AlgebraError::RankMismatch(rank));
        }
        let total = self.total_chern(ring)?;
        let v: Vec<GradedPoly> = (0..=4).map(|i| total.homogeneous(i)).collect();
        let monomials = degree_four_monomials(ring, &v[1], &v[2], &v[3], &v[4])?;
        let mut out: [Rational; 5] = Default::default();
        for (slot, m) in out.iter_mut().zip(&monomials) {
            *slot = ring.integrate(m)?;
        }
        Ok(ChernVector(out))
    }
}

/// v1^4, v1^2 v2, v1 v3, v2^2, v4, each normalized in `ring`.
pub fn degree_four_monomials(
    ring: &RingSpec,
    v1: &GradedPoly,
    v2: &GradedPoly,
    v3: &GradedPoly,
    v4: &GradedPoly,
) -> Result<[GradedPoly; 5], AlgebraError> {
    let v1sq = ring.mul(v1, v1)?;
    Ok([
        ring.mul(&v1sq, &v1sq)?,
        ring.mul(&v1sq, v2)?,
        ring.mul(v1, v3)?,
        ring.mul(v2, v2)?,
        ring.normalize(v4)?,
    ])
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(i64, String)> = Vec::new();
        for l in &self.lines {
            let atom = if l.class.is_zero() { "[O]".to_string() } else { format!("[O({})]", l.class) };
            parts.push((l.multiplicity, atom));
        }
        for (b, m) in &self.bundles {
            parts.push((*m, format!("[{}]", b.name)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, atom)) in parts.iter().enumerate() {
            let sign = if *m < 0 { "-" } else { "+" };
            let abs = m.unsigned_abs();
            if k == 0 {
                if *m < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if abs == 1 {
                write!(f, "{atom}")?;
            } else {
                write!(f, "{abs}{atom}")?;
            }
        }
        Ok(())
    }
}

/// (∫ v1^4, ∫ v1^2 v2, ∫ v1 v3, ∫ v2^2, ∫ v4).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChernVector(pub [Rational; 5]);

impl ChernVector {
    pub fn from_ints(v: [i64; 5]) -> Self {
        ChernVector(v.map(rat))
    }

    pub fn entries(&self) -> &[Rational; 5] {
        &self.0
    }

    pub fn dot(&self, coeffs: &[Rational; 5]) -> Rational {
        self.0.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }

    /// True when the vectors span the same line (both nonzero).
    pub fn is_proportional_to(&self, other: &ChernVector) -> bool {
        let zero_a = self.0.iter().all(Zero::is_zero);
        let zero_b = other.0.iter().all(Zero::is_zero);
        if zero_a || zero_b {
            return false;
        }
        (0..5).all(|i| (0..5).all(|j| &self.0[i] * &other.0[j] == &self.0[j] * &other.0[i]))
    }
}

impl fmt::Display for ChernVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Weights of `(⊕ χ(w_i)) ⊗ χ(-Σ w_i) ⊗ χ(w)`: `w_i - Σ w_j + w`.
pub fn pushforward_weights(variable_weights: [i64; 4], form_weight: i64) -> [i64; 4] {
    let sum: i64 = variable_weights.iter().sum();
    variable_weights.map(|w| w - sum + form_weight)
}

/// The section bundle of an isotrivial family over BG_m, as line atoms in the q-ring.
pub fn weights_to_kclass(ring: &RingSpec, variable_weights: [i64; 4], form_weight: i64) -> Result<KClass, AlgebraError> {
    let q = ring.var("q")?;
    Ok(pushforward_weights(variable_weights, form_weight)
        .iter()
        .fold(KClass::new(), |k, &w| k.with_line(q.scale(&rat(w)), 1)))
}

/// Chern-monomial values, in units of q^4, for an isotrivial G_m family.
pub fn weights_to_chern_vector(variable_weights: [i64; 4], form_weight: i64) -> Result<ChernVector, AlgebraError> {
    let ring = make_family_ring("BGm")?;
    weights_to_kclass(&ring, variable_weights, form_weight)?.chern_vector(&ring)
}

// Symmetric functions in four formal roots.

pub fn root_generators() -> Arc<Generators> {
    Generators::new([("x1", 1), ("x2", 1), ("x3", 1), ("x4", 1)])
}

pub fn elementary_generators() -> Arc<Generators> {
    Generators::new([("e1", 1), ("e2", 2), ("e3", 3), ("e4", 4)])
}

/// e_1..e_4 of the given four classes.
pub fn elementary_symmetric(roots: &[GradedPoly; 4]) -> Result<[GradedPoly; 4], AlgebraError> {
    // coefficients of Π (1 + t·x_i), read off degree by degree in t
    let (g, t) = (roots[0].generators(), roots[0].truncation());
    let mut e: Vec<GradedPoly> = vec![GradedPoly::one(g, t)];
    e.extend((0..4).map(|_| GradedPoly::zero(g, t)));
    for x in roots {
        for k in (1..=4).rev() {
            e[k] = e[k].add(&e[k - 1].mul(x)?)?;
        }
    }
    Ok([e[1].clone(), e[2].clone(), e[3].clone(), e[4].clone()])
}

fn is_symmetric(p: &GradedPoly) -> bool {
    p.terms().all(|(m, c)| {
        (0..3).all(|i| {
            let mut swapped = m.exps().to_vec();
            swapped.swap(i, i + 1);
            &p.coeff(&swapped) == c
        })
    })
}

/// Re-expands a polynomial in e_1..e_4 in the formal roots.
pub fn expand_elementary(p: &GradedPoly, truncation: u32) -> Result<GradedPoly, AlgebraError> {
    let g = root_generators();
    let roots = [0, 1, 2, 3].map(|i| GradedPoly::var_index(&g, truncation, i));
    let e = elementary_symmetric(&roots)?;
    p.substitute(&e)
}

/// Writes a symmetric polynomial in x1..x4 in the e-basis by repeatedly
/// cancelling the lex-leading term with a matching e-monomial.
pub fn symmetric_reduce(p: &GradedPoly) -> Result<GradedPoly, AlgebraError> {
    if p.generators().len() != 4 || p.generators().degrees().iter().any(|&d| d != 1) {
        return Err(AlgebraError::GeneratorMismatch {
            left: root_generators().names().to_vec(),
            right: p.generators().names().to_vec(),
        });
    }
    if !is_symmetric(p) {
        return Err(AlgebraError::NotSymmetric);
    }
    let t = p.truncation();
    let eg = elementary_generators();
    let roots = [0, 1, 2, 3].map(|i| GradedPoly::var_index(p.generators(), t, i));
    let e = elementary_symmetric(&roots)?;
    let mut rest = p.clone();
    let mut out = GradedPoly::zero(&eg, t);
    while let Some((lead, c)) = rest.terms().max_by(|a, b| a.0.exps().cmp(b.0.exps())).map(|(m, c)| (m.clone(), c.clone())) {
        let a = lead.exps();
        let e_exps = vec![a[0] - a[1], a[1] - a[2], a[2] - a[3], a[3]];
        let mut in_roots = GradedPoly::constant(p.generators(), t, c.clone());
        for (k, &ek) in e_exps.iter().enumerate() {
            in_roots = in_roots.mul(&e[k].pow(ek))?;
        }
        rest = rest.sub(&in_roots)?;
        out.add_term(Monomial::new(&eg, e_exps), c);
    }
    Ok(out)
}
