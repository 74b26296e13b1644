//! The eight test families. Each one contributes a row of the linear
//! system: the Chern-monomial integrals of its section bundle and the
//! degree of its map to moduli.

use num_traits::{Signed, Zero};

use crate::chern::{tensor_line, weights_to_chern_vector, weights_to_kclass, BundleAtom, ChernVector, KClass};
use crate::chowring::{make_family_ring, RingSpec};
use crate::error::FamilyError;
use crate::exact::{rat, Rational};
use crate::m0n::{HASSETT_DELTA_0, HASSETT_PSI_INF};

pub const FAMILY_NAMES: [&str; 8] =
    ["b1-conic", "b2-m07", "b3-hassett", "b4-hilb2", "iso-3a2", "iso-a3-2a1", "iso-a4-a1", "iso-d4"];

/// Degree of the marked moduli space over the moduli of cubic surfaces: 72 · 6!.
pub const MARKED_COVER_DEGREE: i64 = 72 * 720;

#[derive(Clone, Debug)]
pub enum VectorSource {
    Bundle(KClass),
    /// A cubic form fixed by a G_m acting on x0..x3 with the given weights.
    Isotrivial { variable_weights: [i64; 4], form_monomials: Vec<[u32; 4]> },
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub name: &'static str,
    pub description: &'static str,
    pub ring: RingSpec,
    pub source: VectorSource,
    pub rhs_degree: Rational,
    pub provenance: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyRelation {
    pub vector: ChernVector,
    pub rhs: Rational,
}

impl FamilyRelation {
    /// `vector · coeffs - rhs`.
    pub fn residual(&self, coeffs: &[Rational; 5]) -> Rational {
        self.vector.dot(coeffs) - &self.rhs
    }

    /// Nonnegative, and a multiple of 1080 whenever nonzero.
    pub fn rhs_is_admissible(&self) -> bool {
        !self.rhs.is_negative() && self.rhs.is_integer() && (self.rhs.to_integer() % 1080u32).is_zero()
    }
}

/// The common weight of a set of cubic monomials under x_i ↦ t^{w_i} x_i.
pub fn check_weight_invariance(variable_weights: [i64; 4], form_monomials: &[[u32; 4]]) -> Result<i64, FamilyError> {
    if form_monomials.is_empty() {
        return Err(FamilyError::EmptyForm);
    }
    let mut weights = Vec::with_capacity(form_monomials.len());
    for m in form_monomials {
        if m.iter().sum::<u32>() != 3 {
            return Err(FamilyError::NotCubic(m.to_vec()));
        }
        weights.push(m.iter().zip(&variable_weights).map(|(&e, &w)| e as i64 * w).sum::<i64>());
    }
    if weights.iter().any(|&w| w != weights[0]) {
        return Err(FamilyError::WeightMismatch(weights));
    }
    Ok(weights[0])
}

impl FamilySpec {
    /// The section bundle as a K-class on the family's base ring.
    pub fn kclass(&self) -> Result<KClass, FamilyError> {
        match &self.source {
            VectorSource::Bundle(k) => Ok(k.clone()),
            VectorSource::Isotrivial { variable_weights, form_monomials } => {
                let w = check_weight_invariance(*variable_weights, form_monomials)?;
                Ok(weights_to_kclass(&self.ring, *variable_weights, w)?)
            }
        }
    }

    pub fn is_isotrivial(&self) -> bool {
        matches!(self.source, VectorSource::Isotrivial { .. })
    }
}

pub fn relation(f: &FamilySpec) -> Result<FamilyRelation, FamilyError> {
    let vector = match &f.source {
        VectorSource::Bundle(k) => k.chern_vector(&f.ring)?,
        VectorSource::Isotrivial { variable_weights, form_monomials } => {
            let w = check_weight_invariance(*variable_weights, form_monomials)?;
            weights_to_chern_vector(*variable_weights, w)?
        }
    };
    Ok(FamilyRelation { vector, rhs: f.rhs_degree.clone() })
}

fn b1() -> Result<FamilySpec, FamilyError> {
    let ring = make_family_ring("B1")?;
    let h = ring.var("h")?;
    // 0 -> O^2 -> V -> O(-1)^2 -> 0
    let v = KClass::new().with_line(ring.zero(), 2).with_line(h.neg(), 2);
    Ok(FamilySpec {
        name: "b1-conic",
        description: "five points on a fixed conic cut by a moving hyperplane of quintic binary forms, base P^4",
        ring,
        source: VectorSource::Bundle(v),
        rhs_degree: rat(4320),
        provenance: "cited constant: 72 * 6! / 5! * 10 (ten configurations per orbit of the conic stabiliser)",
    })
}

fn b2() -> Result<FamilySpec, FamilyError> {
    let ring = make_family_ring("B2")?;
    let psi = ring.var("psi(inf)")?;
    let v = [-3, 1, -1, -2].iter().fold(KClass::new(), |k, &a| k.with_line(psi.scale(&rat(a)), 1));
    Ok(FamilySpec {
        name: "b2-m07",
        description: "seven points moving on a conic, blowing up five of them and the pole of the other two, base M0,7",
        ring,
        source: VectorSource::Bundle(v),
        rhs_degree: rat(2 * MARKED_COVER_DEGREE),
        provenance: "cited constant: 2 * 72 * 6! (two orderings of the polar pair)",
    })
}

fn b3() -> Result<FamilySpec, FamilyError> {
    let ring = make_family_ring("B3")?;
    let psi = ring.var(HASSETT_PSI_INF)?;
    let delta = ring.var(HASSETT_DELTA_0)?;
    let mut v = KClass::new().with_line(psi.neg(), 1).with_line(psi.scale(&rat(4)), -1);
    for a in 2..=5 {
        v = v.with_line(psi.scale(&rat(a)).sub(&delta)?, 1);
    }
    Ok(FamilySpec {
        name: "b3-hassett",
        description: "five points on a cuspidal cubic plus its flex, base the Hassett space with weights (1-e, e^5, 1-3e)",
        ring,
        source: VectorSource::Bundle(v),
        rhs_degree: rat(20 * MARKED_COVER_DEGREE),
        provenance: "cited constant: 20 * 72 * 6! (20 cuspidal cubics through five points flexed at a sixth)",
    })
}

fn b4() -> Result<FamilySpec, FamilyError> {
    let ring = make_family_ring("B4")?;
    let u1 = ring.var("u1")?;
    let u2 = ring.var("u2")?;
    let e = ring.var("E")?;
    let u = BundleAtom::new("U", 2, ring.one().add(&u1)?.add(&u2)?)?;
    let u_twisted = tensor_line(&u, &e.neg())?;
    let v = KClass::new()
        .with_line(e.clone(), 1)
        .with_line(ring.zero(), 3)
        .with_line(e.neg(), 2)
        .with_bundle(u_twisted, -1);
    Ok(FamilySpec {
        name: "b4-hilb2",
        description: "four fixed and two moving points, base a blow-up of the Hilbert square of a quintic del Pezzo",
        ring,
        source: VectorSource::Bundle(v),
        rhs_degree: rat(36 * 720),
        provenance: "cited constant: 36 * 6! (half of 72 * 6!, the two moving points are unordered)",
    })
}

fn iso(
    name: &'static str,
    description: &'static str,
    variable_weights: [i64; 4],
    form_monomials: Vec<[u32; 4]>,
) -> Result<FamilySpec, FamilyError> {
    Ok(FamilySpec {
        name,
        description,
        ring: make_family_ring("BGm")?,
        source: VectorSource::Isotrivial { variable_weights, form_monomials },
        rhs_degree: rat(0),
        provenance: "the orbit class pulls back to zero on an isotrivial family whose fiber is not in the orbit closure",
    })
}

pub fn family_catalog() -> Result<Vec<FamilySpec>, FamilyError> {
    Ok(vec![
        b1()?,
        b2()?,
        b3()?,
        b4()?,
        // x0 x1 x3 = x2^3; any weights (a, b, 0, -a-b) work, this row uses a = b = 1
        iso("iso-3a2", "x0*x1*x3 = x2^3 (3A2)", [1, 1, 0, -2], vec![[1, 1, 0, 1], [0, 0, 3, 0]])?,
        iso(
            "iso-a3-2a1",
            "x3*(x0*x2 - x1^2) = x0*x1^2 (A3 + 2A1)",
            [-3, 1, 5, -3],
            vec![[1, 0, 1, 1], [0, 2, 0, 1], [1, 2, 0, 0]],
        )?,
        iso(
            "iso-a4-a1",
            "x3*(x0*x2 - x1^2) = x0^2*x1 (A4 + A1)",
            [1, -1, -3, 3],
            vec![[1, 0, 1, 1], [0, 2, 0, 1], [2, 1, 0, 0]],
        )?,
        iso("iso-d4", "x3*x0^2 = x1^3 + x2^3 (D4)", [5, 1, 1, -7], vec![[2, 0, 0, 1], [0, 3, 0, 0], [0, 0, 3, 0]])?,
    ])
}

pub fn family(name: &str) -> Result<FamilySpec, FamilyError> {
    family_catalog()?.into_iter().find(|f| f.name == name).ok_or_else(|| FamilyError::Unknown(name.to_string()))
}
