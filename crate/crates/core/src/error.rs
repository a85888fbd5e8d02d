use thiserror::Error;

/// Witness returned with an infeasibility verdict: the concrete piece of the
/// instance that cannot be handled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Two point indices that no available object discriminates.
    Pair(usize, usize),
    /// A point index covered by no available object.
    Point(usize),
    /// A gap index with no interval endpoint in it.
    Gap(usize),
    /// An object index that cannot be hit/stabbed by any candidate.
    Object(usize),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Pair(i, j) => write!(f, "point pair ({i}, {j})"),
            Witness::Point(i) => write!(f, "point {i}"),
            Witness::Gap(g) => write!(f, "gap {g}"),
            Witness::Object(o) => write!(f, "object {o}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("infeasible: {witness}{}", detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default())]
    Infeasible {
        witness: Witness,
        detail: Option<String>,
    },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn infeasible(witness: Witness) -> Self {
        Error::Infeasible {
            witness,
            detail: None,
        }
    }

    pub fn infeasible_with(witness: Witness, detail: impl Into<String>) -> Self {
        Error::Infeasible {
            witness,
            detail: Some(detail.into()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
