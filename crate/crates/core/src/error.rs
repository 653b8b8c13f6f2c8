use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible density target {target} (must be < 1/12)")]
    InfeasibleTarget { target: f64 },
    #[error("antipodal endpoints have no unique geodesic")]
    AntipodalInput,
    #[error("caps {0} and {1} are not provably disjoint")]
    Overlap(usize, usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("origin is not strictly interior to the hull")]
    Polarity,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    AdjacencyViolation(usize, usize),
    #[error("vertex {1} unreachable from {0} in the restricted subgraph")]
    Unreachable(usize, usize),
    #[error("points {0} and {1} do not form a hull edge")]
    NonEdge(usize, usize),
    #[error("curve resolution too coarse: {0}")]
    Resolution(String),
    #[error("no point at chordal distance >= 1 from the anchor")]
    NoAntipode,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
