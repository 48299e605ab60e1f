use thiserror::Error;

/// Errors raised by the numeric, enumeration and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the certified domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("certified tail bound needs {required} terms, budget is {budget}")]
    TermBudget { required: u64, budget: u64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: u64, residual: f64 },

    #[error("power route and direct iteration disagree on the root: {power_route} vs {direct_route}")]
    RouteMismatch { power_route: f64, direct_route: f64 },

    #[error("enumeration cap exceeded: n = {n}, cap = {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("infeasible edge count: {f_edges} > binomial({n}, {r})")]
    InfeasibleEdgeCount { n: usize, r: usize, f_edges: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
