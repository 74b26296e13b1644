//! Intersection numbers of ψ-classes and boundary divisors on M̄_{0,n}.
//!
//! Classes are [`GradedPoly`]s over the generators `psi(L)` (one per
//! marking) and `delta{...}` (one per boundary divisor, keyed by the side
//! that does not contain the last marking `inf`). Integration restricts to
//! a boundary divisor δ_T ≅ M̄_{0,|T|+1} × M̄_{0,|T^c|+1} and recurses until
//! only ψ-classes remain, where the multinomial formula applies.
//!
//! The module also carries the reduction map from M̄_{0,7} to the Hassett
//! space with weights (1-ε, ε, ε, ε, ε, ε, 1-3ε), used to integrate classes
//! on that space by pulling them back.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chowring::Integrator;
use crate::error::{AlgebraError, M0nError};
use crate::exact::{rat, GradedPoly, Generators, Rational};

pub const MIN_N: usize = 4;
pub const MAX_N: usize = 8;

/// M̄_{0,n} with markings labelled `0, 1, ..., n-2, inf`, plus its class generators.
#[derive(Clone, Debug)]
pub struct M0nSpace {
    n: usize,
    labels: Vec<String>,
    gens: Arc<Generators>,
    /// canonical boundary masks, in generator order after the n ψ-classes
    boundaries: Vec<u32>,
}

impl M0nSpace {
    pub fn new(n: usize) -> Result<Self, M0nError> {
        if !(MIN_N..=MAX_N).contains(&n) {
            return Err(M0nError::UnsupportedN(n));
        }
        let mut labels: Vec<String> = (0..n - 1).map(|i| i.to_string()).collect();
        labels.push("inf".to_string());

        let last = 1u32 << (n - 1);
        let mut boundaries: Vec<u32> = (0u32..last)
            .filter(|m| (2..=n as u32 - 2).contains(&m.count_ones()))
            .collect();
        boundaries.sort_by_key(|&m| (m.count_ones(), mask_members(m)));

        let mut names: Vec<(String, u32)> = labels.iter().map(|l| (format!("psi({l})"), 1)).collect();
        for &m in &boundaries {
            names.push((boundary_name(&labels, m), 1));
        }
        Ok(M0nSpace { n, labels, gens: Generators::new(names), boundaries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.n as u32 - 3
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &Arc<Generators> {
        &self.gens
    }

    pub fn marking(&self, label: &str) -> Result<usize, M0nError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| M0nError::UnknownMarking(label.to_string()))
    }

    fn full_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    /// The representative of δ_T = δ_{T^c} not containing `inf`.
    pub fn canonical_mask(&self, mask: u32) -> u32 {
        if mask & (1 << (self.n - 1)) != 0 {
            self.full_mask() & !mask
        } else {
            mask
        }
    }

    pub fn zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.gens, self.dim())
    }

    pub fn one(&self) -> GradedPoly {
        GradedPoly::one(&self.gens, self.dim())
    }

    pub fn psi(&self, marking: usize) -> GradedPoly {
        GradedPoly::var_index(&self.gens, self.dim(), marking)
    }

    /// δ_T for a set of marking indices; either side of the node may be given.
    pub fn delta(&self, markings: &[usize]) -> Result<GradedPoly, M0nError> {
        let mut mask = 0u32;
        for &i in markings {
            if i >= self.n {
                return Err(M0nError::UnknownMarking(i.to_string()));
            }
            if mask & (1 << i) != 0 {
                return Err(M0nError::RepeatedMarking);
            }
            mask |= 1 << i;
        }
        self.delta_mask(mask)
    }

    pub fn delta_mask(&self, mask: u32) -> Result<GradedPoly, M0nError> {
        let size = mask.count_ones() as usize;
        if size < 2 || size > self.n - 2 {
            return Err(M0nError::MalformedBoundary(
                mask_members(mask).iter().map(|&i| self.labels[i].clone()).collect(),
            ));
        }
        let c = self.canonical_mask(mask);
        let pos = self.boundaries.iter().position(|&b| b == c).expect("all canonical masks listed");
        Ok(GradedPoly::var_index(&self.gens, self.dim(), self.n + pos))
    }

    pub fn delta_labels(&self, labels: &[&str]) -> Result<GradedPoly, M0nError> {
        let idx = labels.iter().map(|l| self.marking(l)).collect::<Result<Vec<_>, _>>()?;
        self.delta(&idx)
    }

    fn check_space(&self, e: &GradedPoly) -> Result<(), M0nError> {
        if **e.generators() != *self.gens {
            return Err(AlgebraError::GeneratorMismatch {
                left: self.gens.names().to_vec(),
                right: e.generators().names().to_vec(),
            }
            .into());
        }
        Ok(())
    }

    fn to_mono(&self, exps: &[u32]) -> Mono {
        let psi = exps[..self.n].iter().map(|&e| e as u8).collect();
        let deltas = exps[self.n..]
            .iter()
            .zip(&self.boundaries)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &m)| (m, e as u8))
            .collect();
        Mono::new(self.n as u8, psi, deltas)
    }
}

fn mask_members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn boundary_name(labels: &[String], mask: u32) -> String {
    let members: Vec<&str> = mask_members(mask).into_iter().map(|i| labels[i].as_str()).collect();
    format!("delta{{{}}}", members.join(","))
}

/// A monomial in ψ-classes and boundary divisors on M̄_{0,n}, markings `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Mono {
    n: u8,
    psi: Vec<u8>,
    /// (canonical mask, exponent), sorted by mask
    deltas: Vec<(u32, u8)>,
}

impl Mono {
    fn new(n: u8, psi: Vec<u8>, mut deltas: Vec<(u32, u8)>) -> Self {
        let full = (1u32 << n) - 1;
        let top = 1u32 << (n - 1);
        for d in deltas.iter_mut() {
            if d.0 & top != 0 {
                d.0 = full & !d.0;
            }
        }
        deltas.sort_unstable();
        let mut merged: Vec<(u32, u8)> = Vec::with_capacity(deltas.len());
        for (m, e) in deltas {
            match merged.last_mut() {
                Some(last) if last.0 == m => last.1 += e,
                _ => merged.push((m, e)),
            }
        }
        Mono { n, psi, deltas: merged }
    }

    fn degree(&self) -> u32 {
        self.psi.iter().map(|&e| e as u32).sum::<u32>() + self.deltas.iter().map(|d| d.1 as u32).sum::<u32>()
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// ∫ ψ_1^{a_1}···ψ_n^{a_n} over M̄_{0,n} = (n-3)! / ∏ a_i!  when Σ a_i = n - 3.
pub fn multinomial_psi_integral(exps: &[u32]) -> Rational {
    let n = exps.len() as u32;
    if n < 3 || exps.iter().sum::<u32>() != n - 3 {
        return Rational::zero();
    }
    let denom = exps.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
    Rational::new(factorial(n - 3), denom)
}

/// Integrates tautological monomials by boundary restriction, memoizing sub-integrals.
///
/// The memo table belongs to the instance and is guarded by a mutex, so
/// one evaluator may be shared across threads.
#[derive(Debug, Default)]
pub struct TautEvaluator {
    memo: Mutex<HashMap<Mono, Rational>>,
}

impl TautEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cache_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    /// Exact ∫ over M̄_{0,n} of `e`; terms not of degree n-3 contribute nothing.
    pub fn integrate(&self, space: &M0nSpace, e: &GradedPoly) -> Result<Rational, M0nError> {
        space.check_space(e)?;
        let mut total = Rational::zero();
        for (m, c) in e.terms() {
            if m.degree() != space.dim() {
                continue;
            }
            let v = self.eval(&space.to_mono(m.exps()));
            total += c * v;
        }
        Ok(total)
    }

    fn eval(&self, m: &Mono) -> Rational {
        let n = m.n as u32;
        if m.degree() != n - 3 {
            return Rational::zero();
        }
        if n == 3 {
            return Rational::one();
        }
        if m.deltas.is_empty() {
            let exps: Vec<u32> = m.psi.iter().map(|&e| e as u32).collect();
            return multinomial_psi_integral(&exps);
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(m) {
            return v.clone();
        }
        let v = self.restrict_and_split(m);
        self.memo.lock().expect("memo lock").insert(m.clone(), v.clone());
        v
    }

    fn restrict_and_split(&self, m: &Mono) -> Rational {
        let n = m.n as usize;
        let full = (1u32 << n) - 1;
        let (t, k) = m.deltas[0];
        let tc = full & !t;

        // local indices: side A holds T then its node, side B holds T^c then its node
        let a_marks = mask_members(t);
        let b_marks = mask_members(tc);
        let n_a = a_marks.len() + 1;
        let n_b = b_marks.len() + 1;
        let mut local = vec![(false, 0usize); n];
        for (j, &i) in a_marks.iter().enumerate() {
            local[i] = (true, j);
        }
        for (j, &i) in b_marks.iter().enumerate() {
            local[i] = (false, j);
        }
        let map_mask = |s: u32| -> u32 {
            mask_members(s).into_iter().fold(0u32, |acc, i| acc | (1 << local[i].1))
        };

        let mut psi_a = vec![0u8; n_a];
        let mut psi_b = vec![0u8; n_b];
        for (i, &e) in m.psi.iter().enumerate() {
            let (on_a, j) = local[i];
            if on_a {
                psi_a[j] += e;
            } else {
                psi_b[j] += e;
            }
        }

        let mut deltas_a = Vec::new();
        let mut deltas_b = Vec::new();
        for &(s, e) in &m.deltas[1..] {
            let sc = full & !s;
            if s & !t == 0 {
                deltas_a.push((map_mask(s), e));
            } else if s & t == 0 {
                deltas_b.push((map_mask(s), e));
            } else if sc & t == 0 {
                deltas_b.push((map_mask(sc), e));
            } else if sc & !t == 0 {
                deltas_a.push((map_mask(sc), e));
            } else {
                // crossing divisors are disjoint
                return Rational::zero();
            }
        }

        let base_a = Mono::new(n_a as u8, psi_a, deltas_a);
        let base_b = Mono::new(n_b as u8, psi_b, deltas_b);
        let dim_a = n_a as i64 - 3;
        let need_a = dim_a - base_a.degree() as i64;

        // remaining copies of δ_T restrict to the normal bundle -ψ_• - ψ_⋆
        let r = (k - 1) as i64;
        if need_a < 0 || need_a > r {
            return Rational::zero();
        }
        let j = need_a as u32;
        let mut a = base_a;
        let mut b = base_b;
        a.psi[n_a - 1] += j as u8;
        b.psi[n_b - 1] += (r as u32 - j) as u8;
        let ia = self.eval(&a);
        if ia.is_zero() {
            return ia;
        }
        let ib = self.eval(&b);
        let sign = if r % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        Rational::from_integer(sign * binomial(r as u32, j)) * ia * ib
    }
}

/// Keel's expression ψ_i = Σ δ_T over T ∋ i with j, k ∉ T.
pub fn keel_psi_expansion(space: &M0nSpace, i: usize, j: usize, k: usize) -> Result<GradedPoly, M0nError> {
    let n = space.n();
    if i == j || j == k || i == k {
        return Err(M0nError::RepeatedMarking);
    }
    if i >= n || j >= n || k >= n {
        return Err(M0nError::UnknownMarking(i.max(j).max(k).to_string()));
    }
    let mut out = space.zero();
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if mask & (1 << i) == 0 || mask & (1 << j) != 0 || mask & (1 << k) != 0 {
            continue;
        }
        if size < 2 || size > n - 2 {
            continue;
        }
        out = out.add(&space.delta_mask(mask)?)?;
    }
    Ok(out)
}

// Hassett reduction for the weight vector (1-ε, ε, ε, ε, ε, ε, 1-3ε).

pub const HASSETT_PSI_0: &str = "psi_hat(0)";
pub const HASSETT_PSI_INF: &str = "psi_hat(inf)";
pub const HASSETT_DELTA_0: &str = "Delta_hat_0";

/// Marking weight `constant + eps·ε` for infinitesimal ε > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight {
    pub constant: i64,
    pub eps: i64,
}

/// Weights of the markings `0, 1, ..., 5, inf` on the B3 base.
pub fn b3_weights() -> [Weight; 7] {
    let light = Weight { constant: 0, eps: 1 };
    [
        Weight { constant: 1, eps: -1 },
        light,
        light,
        light,
        light,
        light,
        Weight { constant: 1, eps: -3 },
    ]
}

/// Sets T ∋ `marking`, |T| ≥ 2, whose total weight is at most 1, i.e. the
/// boundary divisors δ_T that the reduction map contracts and that meet
/// the section of `marking` on the light side.
pub fn contracted_sets_containing(weights: &[Weight], marking: usize) -> Vec<u32> {
    let n = weights.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask & (1 << marking) == 0 || mask.count_ones() < 2 || mask.count_ones() as usize > n - 2 {
            continue;
        }
        let (c, e) = mask_members(mask)
            .into_iter()
            .fold((0i64, 0i64), |(c, e), i| (c + weights[i].constant, e + weights[i].eps));
        // total ≤ 1 with ε infinitesimal: constant < 1, or constant = 1 and ε-part ≤ 0
        if c < 1 || (c == 1 && e <= 0) {
            out.push(mask);
        }
    }
    out
}

/// ζ^* ψ̂_i = ψ_i − Σ δ_T over contracted T ∋ i.
pub fn hassett_psi_pullback(space: &M0nSpace, weights: &[Weight], marking: usize) -> Result<GradedPoly, M0nError> {
    let mut out = space.psi(marking);
    for mask in contracted_sets_containing(weights, marking) {
        out = out.sub(&space.delta_mask(mask)?)?;
    }
    Ok(out)
}

/// ζ^* Δ̂_0 = Σ_{i=1}^{5} δ_{0,i}.
pub fn hassett_delta0_pullback(space: &M0nSpace) -> Result<GradedPoly, M0nError> {
    let mut out = space.zero();
    for i in 1..=5 {
        out = out.add(&space.delta(&[0, i])?)?;
    }
    Ok(out)
}

/// Pulls a polynomial in `psi_hat(0)`, `psi_hat(inf)`, `Delta_hat_0` back to M̄_{0,7}.
pub fn hassett_pullback(space: &M0nSpace, e: &GradedPoly) -> Result<GradedPoly, M0nError> {
    if space.n() != 7 {
        return Err(M0nError::UnsupportedN(space.n()));
    }
    let weights = b3_weights();
    let images = e
        .generators()
        .names()
        .iter()
        .map(|name| match name.as_str() {
            HASSETT_PSI_0 => hassett_psi_pullback(space, &weights, 0),
            HASSETT_PSI_INF => hassett_psi_pullback(space, &weights, 6),
            HASSETT_DELTA_0 => hassett_delta0_pullback(space),
            other => Err(AlgebraError::UnknownGenerator(other.to_string()).into()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let images: Vec<GradedPoly> = images.into_iter().map(|p| p.truncate(e.truncation().min(space.dim()))).collect();
    Ok(e.substitute(&images)?)
}

/// Generator names and exponents of a top-degree monomial on the Hassett space.
type MonomialKey = (Vec<String>, Vec<u32>);

/// Integration on the Hassett space by pullback to M̄_{0,7}.
#[derive(Debug)]
pub struct HassettIntegrator {
    space: M0nSpace,
    evaluator: Arc<TautEvaluator>,
    monomials: Mutex<HashMap<MonomialKey, Rational>>,
}

impl HassettIntegrator {
    pub fn new() -> Self {
        HassettIntegrator {
            space: M0nSpace::new(7).expect("n = 7 supported"),
            evaluator: Arc::new(TautEvaluator::new()),
            monomials: Mutex::new(HashMap::new()),
        }
    }

    fn monomial_value(&self, p: &GradedPoly, exps: &[u32]) -> Result<Rational, M0nError> {
        let key = (p.generators().names().to_vec(), exps.to_vec());
        if let Some(v) = self.monomials.lock().expect("monomial lock").get(&key) {
            return Ok(v.clone());
        }
        let m = GradedPoly::monomial(p.generators(), p.truncation(), exps.to_vec(), rat(1));
        let pulled = hassett_pullback(&self.space, &m)?;
        let v = self.evaluator.integrate(&self.space, &pulled)?;
        self.monomials.lock().expect("monomial lock").insert(key, v.clone());
        Ok(v)
    }
}

impl Default for HassettIntegrator {
    fn default() -> Self {
        Self::new()
    }
}

impl Integrator for HassettIntegrator {
    fn describe(&self) -> String {
        "pullback along M0,7 -> Hassett(1-e, e^5, 1-3e), then boundary recursion on M0,7".to_string()
    }

    fn integrate(&self, p: &GradedPoly) -> Result<Rational, AlgebraError> {
        let top = p.homogeneous(self.space.dim());
        let mut total = rat(0);
        for (m, c) in top.terms() {
            let v = self.monomial_value(&top, m.exps()).map_err(|e| AlgebraError::Integration(e.to_string()))?;
            total += c * v;
        }
        Ok(total)
    }
}
