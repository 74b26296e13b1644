use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("generator lists differ: {left:?} vs {right:?}")]
    GeneratorMismatch { left: Vec<String>, right: Vec<String> },
    #[error("truncation degrees differ: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("constant term is {0}, expected 1")]
    NotAUnit(Rational),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("substitution needs {expected} images, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("virtual rank is {0}, expected 4")]
    RankMismatch(i64),
    #[error("polynomial is not symmetric in the formal roots")]
    NotSymmetric,
    #[error("class of degree {0} where a divisor class (degree 1) was expected")]
    NotADivisor(u32),
    #[error("integration failed: {0}")]
    Integration(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum M0nError {
    #[error("n = {0} is outside the supported range 4..=8")]
    UnsupportedN(usize),
    #[error("boundary set {0:?} must have between 2 and n-2 markings")]
    MalformedBoundary(Vec<String>),
    #[error("unknown marking `{0}`")]
    UnknownMarking(String),
    #[error("markings must be distinct")]
    RepeatedMarking,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no relations given")]
    Empty,
    #[error("row {row} has {got} coefficients, expected {expected}")]
    Shape { row: usize, expected: usize, got: usize },
    #[error("system is underdetermined: rank {rank}, null space of dimension {nullity}")]
    Underdetermined { rank: usize, nullity: usize },
    #[error("system is inconsistent at row(s) {rows:?}")]
    Inconsistent { rows: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("form monomials have differing weights {0:?}")]
    WeightMismatch(Vec<i64>),
    #[error("no form monomials given")]
    EmptyForm,
    #[error("form monomial {0:?} is not a cubic in four variables")]
    NotCubic(Vec<u32>),
    #[error("unknown family or target `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}
