use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("point {0} lies outside the triangle")]
    OutsideTriangle(String),
    #[error("point {0} is a vertex of the triangle")]
    IsVertex(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid stability parameter: {0}")]
    InvalidTheta(String),
    #[error("stability parameter is not certified generic: subset {subset:?} has zero weight")]
    NonGeneric { subset: Vec<usize> },
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),
    #[error("resolution is not dominated by the maximal resolution (ray {0} has positive discrepancy)")]
    NotDominated(String),
    #[error("{0} does not lie in the lattice")]
    NotInLattice(String),
    #[error("no stable support is a limit along {0} (direction on a fan ray or wall)")]
    NoFeasibleSupport(String),
    #[error("{count} stable supports are limits along {direction}")]
    MultipleFeasibleSupports { direction: String, count: usize },
    #[error("moduli cones do not tile the quadrant: {0}")]
    Tiling(String),
    #[error("group of order {order} is too large for exhaustive enumeration (limit {limit})")]
    TooLarge { order: usize, limit: usize },
    #[error("retry budget of {0} draws exhausted")]
    BudgetExhausted(usize),
    #[error("malformed triangulation: {0}")]
    MalformedTriangulation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
