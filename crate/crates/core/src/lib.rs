//! Exact equivariant intersection theory for the orbit class of a general
//! cubic surface: graded rings, Chern calculus, tautological integrals on
//! M̄_{0,n}, test-family relations and an exact linear solver.

pub mod apps;
pub mod chern;
pub mod chowring;
pub mod error;
pub mod exact;
pub mod expr;
pub mod families;
pub mod m0n;
pub mod solver;

pub use apps::{change_of_variables, derive_p4dual_class, evaluate_degree, orbit_class, target, targets, EvaluationTarget};
pub use chern::{ChernVector, KClass};
pub use chowring::{make_family_ring, RingSpec};
pub use error::{AlgebraError, FamilyError, M0nError, ParseError, SolveError};
pub use exact::{rat, ratio, rational_to_pq, GradedPoly, Generators, Rational};
pub use expr::parse_taut_expr;
pub use families::{family, family_catalog, relation, FamilyRelation, FamilySpec, FAMILY_NAMES};
pub use m0n::{M0nSpace, TautEvaluator};
pub use solver::{solve_exact, OrbitClassVector, Solution};
