use thiserror::Error;

/// Errors shared by graph construction, the walk oracles, and the simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node id {id} out of range for {n} nodes")]
    OutOfRange { id: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("subset must be nonempty and proper")]
    EmptyOrFullSubset,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is bipartite; the simple walk does not converge (use the lazy walk)")]
    BipartiteWithoutLazy,
    #[error("step cap {0} exceeded")]
    ExceededCap(u64),
    #[error("graph is not regular")]
    NotRegular,
    #[error("fixed-point overflow: {0}")]
    Overflow(String),
    #[error("edge-list parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
