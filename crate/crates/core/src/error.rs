use thiserror::Error;

/// Problems with a user-supplied instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("permutation is empty")]
    EmptyPermutation,
    #[error("permutation {entries:?} is not a bijection of [{}]", entries.len())]
    NotABijection { entries: Vec<usize> },
    #[error("n = {n} is too small: a nontrivial flag needs n >= 2")]
    TooSmall { n: usize },
    #[error("flag shape a is empty")]
    EmptyShape,
    #[error("flag shape a = {a:?} is not strictly increasing inside (0, {n})")]
    BadShape { n: usize, a: Vec<usize> },
    #[error("degree vector has length {got} but the shape a has length {expected}")]
    DegreeLength { expected: usize, got: usize },
    #[error("field `{field}`: permutation has size {got}, expected n = {expected}")]
    SizeMismatch { field: &'static str, expected: usize, got: usize },
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("degree lift not found / not unique: {solutions} solutions for a = {a:?}, d = {d:?}")]
    LiftNotUnique { a: Vec<usize>, d: Vec<u32>, solutions: usize },
}

/// Failures of the exact-algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("Groebner budget exhausted after {reductions} pair reductions")]
    BudgetExhausted { reductions: usize },
    #[error("parameter `{0}` has no assigned value")]
    UnassignedParameter(String),
    #[error("system still contains parameters; specialize it first")]
    ParametersRemain,
    #[error("coefficient {0} is not representable in the target field")]
    BadCoefficient(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Failures of the split enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("instance too large: {count} degree splits exceed the cap of {cap}")]
    TooManySplits { count: u128, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Split(#[from] SplitError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
