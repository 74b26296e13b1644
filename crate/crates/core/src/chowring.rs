//! Graded ring presentations with monomial vanishing rules and a
//! top-degree integration functional, one per test-family base.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::exact::{rat, GradedPoly, Generators, Monomial, Rational};
use crate::m0n::{HassettIntegrator, HASSETT_DELTA_0, HASSETT_PSI_INF};

/// Degree functional that cannot be expressed as a finite table.
pub trait Integrator: Send + Sync + fmt::Debug {
    fn describe(&self) -> String;
    fn integrate(&self, p: &GradedPoly) -> Result<Rational, AlgebraError>;
}

#[derive(Clone, Debug)]
pub enum Integration {
    /// Values of top-degree monomials; absent monomials integrate to zero.
    Table(BTreeMap<Vec<u32>, Rational>),
    Delegated(Arc<dyn Integrator>),
}

#[derive(Clone, Debug)]
pub struct RingSpec {
    name: String,
    generators: Arc<Generators>,
    vanishing: Vec<Vec<u32>>,
    top_degree: u32,
    integration: Integration,
}

/// Names accepted by [`make_family_ring`].
pub const RING_NAMES: [&str; 7] = ["B1", "B2", "B3", "B4", "BGm", "P19", "P4dual"];

impl RingSpec {
    pub fn new(
        name: impl Into<String>,
        generators: Arc<Generators>,
        vanishing: Vec<Vec<u32>>,
        top_degree: u32,
        integration: Integration,
    ) -> Self {
        RingSpec { name: name.into(), generators, vanishing, top_degree, integration }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &Arc<Generators> {
        &self.generators
    }

    pub fn vanishing(&self) -> &[Vec<u32>] {
        &self.vanishing
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn integration(&self) -> &Integration {
        &self.integration
    }

    pub fn zero(&self) -> GradedPoly {
        GradedPoly::zero(&self.generators, self.top_degree)
    }

    pub fn one(&self) -> GradedPoly {
        GradedPoly::one(&self.generators, self.top_degree)
    }

    pub fn var(&self, name: &str) -> Result<GradedPoly, AlgebraError> {
        GradedPoly::var(&self.generators, self.top_degree, name)
    }

    pub fn owns(&self, p: &GradedPoly) -> bool {
        **p.generators() == *self.generators && p.truncation() == self.top_degree
    }

    fn check(&self, p: &GradedPoly) -> Result<(), AlgebraError> {
        if **p.generators() != *self.generators {
            return Err(AlgebraError::GeneratorMismatch {
                left: self.generators.names().to_vec(),
                right: p.generators().names().to_vec(),
            });
        }
        Ok(())
    }

    fn vanishes(&self, m: &Monomial) -> bool {
        m.degree() > self.top_degree || self.vanishing.iter().any(|v| m.divisible_by(v))
    }

    /// Removes terms divisible by a vanishing monomial or above the top degree.
    pub fn normalize(&self, p: &GradedPoly) -> Result<GradedPoly, AlgebraError> {
        self.check(p)?;
        Ok(p.filter_terms(|m| !self.vanishes(m)).truncate(self.top_degree))
    }

    pub fn mul(&self, a: &GradedPoly, b: &GradedPoly) -> Result<GradedPoly, AlgebraError> {
        self.normalize(&a.mul(b)?)
    }

    /// The degree functional on top-degree classes.
    pub fn integrate(&self, p: &GradedPoly) -> Result<Rational, AlgebraError> {
        let p = self.normalize(p)?;
        match &self.integration {
            Integration::Table(table) => {
                let mut total = Rational::zero();
                for (m, c) in p.terms() {
                    if m.degree() != self.top_degree {
                        continue;
                    }
                    if let Some(v) = table.get(m.exps()) {
                        total += c * v;
                    }
                }
                Ok(total)
            }
            Integration::Delegated(integrator) => integrator.integrate(&p.homogeneous(self.top_degree)),
        }
    }

    /// Structural checks: table keys are top-degree and survive the vanishing rules.
    pub fn validate(&self) -> Result<(), String> {
        if let Integration::Table(table) = &self.integration {
            for key in table.keys() {
                let m = Monomial::new(&self.generators, key.clone());
                if m.degree() != self.top_degree {
                    return Err(format!("{}: table key {key:?} has degree {}", self.name, m.degree()));
                }
                if self.vanishes(&m) {
                    return Err(format!("{}: table key {key:?} is killed by a vanishing rule", self.name));
                }
            }
        }
        for v in &self.vanishing {
            if v.len() != self.generators.len() {
                return Err(format!("{}: vanishing monomial {v:?} has wrong arity", self.name));
            }
        }
        Ok(())
    }
}

fn table(entries: &[(&[u32], i64)]) -> Integration {
    Integration::Table(entries.iter().map(|(k, v)| (k.to_vec(), rat(*v))).collect())
}

/// Presentation of the base ring for a catalog name.
pub fn make_family_ring(name: &str) -> Result<RingSpec, AlgebraError> {
    let h_ring = |name: &str| {
        RingSpec::new(name, Generators::new([("h", 1)]), vec![vec![5]], 4, table(&[(&[4], 1)]))
    };
    let ring = match name {
        // P^4
        "B1" => h_ring("B1"),
        "B2" => RingSpec::new("B2", Generators::new([("psi(inf)", 1)]), vec![], 4, table(&[(&[4], 1)])),
        "B3" => RingSpec::new(
            "B3",
            Generators::new([(HASSETT_PSI_INF, 1), (HASSETT_DELTA_0, 1)]),
            vec![],
            4,
            Integration::Delegated(Arc::new(HassettIntegrator::new())),
        ),
        // blow-up of the Hilbert square of a quintic del Pezzo; u_i·E = 0
        "B4" => RingSpec::new(
            "B4",
            Generators::new([("u1", 1), ("u2", 2), ("E", 1)]),
            vec![vec![1, 0, 1], vec![0, 1, 1]],
            4,
            table(&[(&[4, 0, 0], 36), (&[2, 1, 0], 15), (&[0, 2, 0], 10), (&[0, 0, 4], -30)]),
        ),
        // the q^4 coefficient of A^4(BG_m) = Z·q^4
        "BGm" => RingSpec::new("BGm", Generators::new([("q", 1)]), vec![], 4, table(&[(&[4], 1)])),
        // codimension-4 classes on P^19, paired against a complementary linear space
        "P19" => RingSpec::new("P19", Generators::new([("h", 1)]), vec![], 4, table(&[(&[4], 1)])),
        "P4dual" => h_ring("P4dual"),
        other => return Err(AlgebraError::UnknownRing(other.to_string())),
    };
    Ok(ring)
}
