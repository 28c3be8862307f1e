use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error(
        "bandwidth violation in round {round}: edge {from}->{to} carried {words} words (limit {limit})"
    )]
    Bandwidth {
        round: usize,
        from: usize,
        to: usize,
        words: usize,
        limit: usize,
    },

    #[error("step budget violation in round {round}: node {node} used {steps} steps (cap {cap})")]
    Budget {
        round: usize,
        node: usize,
        steps: u64,
        cap: u64,
    },

    #[error("node {from} addressed non-neighbor {to} in round {round}")]
    NotNeighbor { round: usize, from: usize, to: usize },

    #[error("no termination after {rounds} rounds")]
    Timeout { rounds: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors raised by the simulator when a program breaks the
    /// resource contract (bandwidth, step budget, addressing) or times out.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Error::Bandwidth { .. }
                | Error::Budget { .. }
                | Error::NotNeighbor { .. }
                | Error::Timeout { .. }
        )
    }
}
