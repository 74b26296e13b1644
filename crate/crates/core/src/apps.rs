//! Consequences of the orbit class: degrees on two further bases and the
//! rewrite of the class in the Chern classes of the standard representation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chern::{elementary_symmetric, root_generators, symmetric_reduce, KClass};
use crate::chowring::{make_family_ring, RingSpec};
use crate::error::{AlgebraError, FamilyError};
use crate::exact::{rat, GradedPoly, Generators, Monomial, Rational};
use crate::families::{family_catalog, relation};
use crate::solver::{solve_exact, OrbitClassVector};

pub const TARGET_NAMES: [&str; 2] = ["p19-orbit-degree", "p4dual-threefold-sections"];

/// Coefficients of the class `v1^2 v2 - v1 v3 + 9 v4`.
pub fn normalized_class() -> [Rational; 5] {
    [0, 1, -1, 0, 9].map(rat)
}

#[derive(Clone, Debug)]
pub struct EvaluationTarget {
    pub name: String,
    pub ring: RingSpec,
    pub vclass: KClass,
    pub expected_degree: Rational,
    pub provenance: String,
}

/// Solves the full catalog system.
pub fn orbit_class() -> Result<OrbitClassVector, FamilyError> {
    let relations = family_catalog()?.iter().map(relation).collect::<Result<Vec<_>, _>>()?;
    Ok(solve_exact(&relations)?.solution)
}

/// ∫ Σ a_m · m(v1, .., v4) over the target's base.
pub fn evaluate_degree(t: &EvaluationTarget, coeffs: &OrbitClassVector) -> Result<Rational, FamilyError> {
    Ok(t.vclass.chern_vector(&t.ring)?.dot(coeffs.entries()))
}

/// Section bundle of the universal hyperplane section of a cubic threefold.
///
/// With ω^{-1} = O(1, -1) on the universal section, pushing forward gives
/// (Sym^1 of the rank-5 space minus the equation line) twisted by O(-h),
/// which is 5[O(-h)] - [O(-2h)].
pub fn derive_p4dual_class() -> Result<KClass, AlgebraError> {
    let ring = make_family_ring("P4dual")?;
    let h = ring.var("h")?;
    KClass::new().with_line(ring.zero(), 5).with_line(h.neg(), -1).twist(&h.neg())
}

fn p19_target() -> Result<EvaluationTarget, AlgebraError> {
    let ring = make_family_ring("P19")?;
    let h = ring.var("h")?;
    let vclass = KClass::new().with_line(h.neg(), 4);
    Ok(EvaluationTarget {
        name: "p19-orbit-degree".into(),
        ring,
        vclass,
        expected_degree: rat(96120),
        provenance: "cited constant: degree of the orbit closure of a general cubic surface in P^19".into(),
    })
}

fn p4dual_target() -> Result<EvaluationTarget, AlgebraError> {
    Ok(EvaluationTarget {
        name: "p4dual-threefold-sections".into(),
        ring: make_family_ring("P4dual")?,
        vclass: derive_p4dual_class()?,
        expected_degree: rat(42120),
        provenance: "cited constant: hyperplane sections of a general cubic threefold isomorphic to a fixed general cubic surface".into(),
    })
}

/// The two application targets followed by one target per catalog family.
pub fn targets() -> Result<Vec<EvaluationTarget>, FamilyError> {
    let mut out = vec![p19_target()?, p4dual_target()?];
    for f in family_catalog()? {
        out.push(EvaluationTarget {
            name: f.name.to_string(),
            vclass: f.kclass()?,
            ring: f.ring.clone(),
            expected_degree: f.rhs_degree.clone(),
            provenance: f.provenance.to_string(),
        });
    }
    Ok(out)
}

pub fn target(name: &str) -> Result<EvaluationTarget, FamilyError> {
    targets()?.into_iter().find(|t| t.name == name).ok_or_else(|| FamilyError::Unknown(name.to_string()))
}

pub fn v_generators() -> Arc<Generators> {
    Generators::new([("v1", 1), ("v2", 2), ("v3", 3), ("v4", 4)])
}

pub fn c_generators() -> Arc<Generators> {
    Generators::new([("c1", 1), ("c2", 2), ("c3", 3), ("c4", 4)])
}

/// Σ a_m · m(v) as a polynomial in v1..v4.
pub fn orbit_polynomial(coeffs: &[Rational; 5]) -> GradedPoly {
    let g = v_generators();
    let exps: [[u32; 4]; 5] = [[4, 0, 0, 0], [2, 1, 0, 0], [1, 0, 1, 0], [0, 2, 0, 0], [0, 0, 0, 1]];
    let mut p = GradedPoly::zero(&g, 4);
    for (e, c) in exps.iter().zip(coeffs) {
        p.add_term(Monomial::new(&g, e.to_vec()), c.clone());
    }
    p
}

/// v_k = e_k(e1 - x_1, .., e1 - x_4), the Chern classes of V^∨ ⊗ det V in formal roots of V.
pub fn shifted_root_images() -> Result<[GradedPoly; 4], AlgebraError> {
    let g = root_generators();
    let x: Vec<GradedPoly> = (0..4).map(|i| GradedPoly::var_index(&g, 4, i)).collect();
    let e1 = x.iter().try_fold(GradedPoly::zero(&g, 4), |acc, xi| acc.add(xi))?;
    let y = [0, 1, 2, 3].map(|i| e1.sub(&x[i]).expect("same ring"));
    elementary_symmetric(&y)
}

/// Rewrites a polynomial in v1..v4 in terms of c1..c4.
pub fn change_of_variables_of(vpoly: &GradedPoly) -> Result<GradedPoly, AlgebraError> {
    if **vpoly.generators() != *v_generators() {
        return Err(AlgebraError::GeneratorMismatch {
            left: v_generators().names().to_vec(),
            right: vpoly.generators().names().to_vec(),
        });
    }
    let in_roots = vpoly.truncate(4).substitute(&shifted_root_images()?)?;
    let in_e = symmetric_reduce(&in_roots)?;
    let cg = c_generators();
    let mut out = GradedPoly::zero(&cg, 4);
    for (m, c) in in_e.terms() {
        out.add_term(Monomial::new(&cg, m.exps().to_vec()), c.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    /// gcd of the orbit-class coefficients
    pub content: Rational,
    /// orbit class divided by its content, in c1..c4
    pub normalized: GradedPoly,
    /// the full orbit class in c1..c4
    pub full: GradedPoly,
}

fn content(coeffs: &[Rational; 5]) -> Rational {
    let g = coeffs.iter().filter(|c| c.is_integer()).fold(BigInt::zero(), |acc, c| acc.gcd(&c.to_integer()));
    if g.is_zero() || coeffs.iter().any(|c| !c.is_integer()) {
        Rational::one()
    } else {
        Rational::from_integer(g.abs())
    }
}

/// The orbit class in c1..c4, both as solved and divided by its content.
pub fn change_of_variables() -> Result<CoordinateChange, FamilyError> {
    let coeffs = orbit_class()?;
    let k = content(coeffs.entries());
    let normalized: [Rational; 5] = coeffs.entries().clone().map(|c| c / &k);
    Ok(CoordinateChange {
        normalized: change_of_variables_of(&orbit_polynomial(&normalized))?,
        full: change_of_variables_of(&orbit_polynomial(coeffs.entries()))?,
        content: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::expand_elementary;

    fn cpoly(terms: &[([u32; 4], i64)]) -> GradedPoly {
        let g = c_generators();
        let mut p = GradedPoly::zero(&g, 4);
        for (e, c) in terms {
            p.add_term(Monomial::new(&g, e.to_vec()), rat(*c));
        }
        p
    }

    fn vvar(i: usize) -> GradedPoly {
        GradedPoly::var_index(&v_generators(), 4, i)
    }

    #[test]
    fn v1_and_v4_in_c() {
        assert_eq!(change_of_variables_of(&vvar(0)).unwrap(), cpoly(&[([1, 0, 0, 0], 3)]));
        let expected = cpoly(&[([2, 1, 0, 0], 1), ([1, 0, 1, 0], -1), ([0, 0, 0, 1], 1)]);
        assert_eq!(change_of_variables_of(&vvar(3)).unwrap(), expected);
    }

    #[test]
    fn normalized_class_in_c() {
        let got = change_of_variables_of(&orbit_polynomial(&normalized_class())).unwrap();
        let expected = cpoly(&[([4, 0, 0, 0], 24), ([2, 1, 0, 0], 12), ([1, 0, 1, 0], -6), ([0, 0, 0, 1], 9)]);
        assert_eq!(got, expected);
        assert_eq!(got.to_string_descending(), "24*c1^4 + 12*c1^2*c2 - 6*c1*c3 + 9*c4");
    }

    #[test]
    fn re_expansion_matches_root_substitution() {
        let v = orbit_polynomial(&normalized_class());
        let c = change_of_variables_of(&v).unwrap();
        let eg = crate::chern::elementary_generators();
        let mut as_e = GradedPoly::zero(&eg, 4);
        for (m, k) in c.terms() {
            as_e.add_term(Monomial::new(&eg, m.exps().to_vec()), k.clone());
        }
        let lhs = expand_elementary(&as_e, 4).unwrap();
        let rhs = v.substitute(&shifted_root_images().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn wrong_ring_rejected() {
        assert!(change_of_variables_of(&cpoly(&[([1, 0, 0, 0], 1)])).is_err());
    }

    #[test]
    fn p4dual_class_and_v_classes() {
        let k = derive_p4dual_class().unwrap();
        assert_eq!(k.virtual_rank(), 4);
        assert_eq!(k.to_string(), "5[O(-h)] - [O(-2*h)]");
        let ring = make_family_ring("P4dual").unwrap();
        let h = ring.var("h").unwrap();
        let c = k.total_chern(&ring).unwrap();
        let expected: Vec<GradedPoly> = [-3, 4, -2, 1].iter().enumerate().map(|(i, &a)| h.pow(i as u32 + 1).scale(&rat(a))).collect();
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(&c.homogeneous(i as u32 + 1), e);
        }
    }

    #[test]
    fn target_lookup() {
        let t = target("p19-orbit-degree").unwrap();
        assert_eq!(t.expected_degree, rat(96120));
        assert!(matches!(target("nope"), Err(FamilyError::Unknown(_))));
        assert_eq!(targets().unwrap().len(), 10);
    }

    #[test]
    fn degrees_from_fixed_class() {
        let coeffs = OrbitClassVector([0, 1080, -1080, 0, 9720].map(rat));
        assert_eq!(evaluate_degree(&p19_target().unwrap(), &coeffs).unwrap(), rat(96120));
        assert_eq!(evaluate_degree(&p4dual_target().unwrap(), &coeffs).unwrap(), rat(42120));
    }

    #[test]
    fn content_of_vectors() {
        assert_eq!(content(&[0, 1080, -1080, 0, 9720].map(rat)), rat(1080));
        assert_eq!(content(&[0; 5].map(rat)), rat(1));
    }
}
