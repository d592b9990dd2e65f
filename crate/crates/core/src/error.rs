use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("monomial of Heisenberg weight {weight} exceeds declared order {declared}")]
    OrderViolation { weight: u32, declared: u32 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("undeclared coefficient `{0}`")]
    Undeclared(String),

    #[error("unbound coefficient `{0}`: no field supplied on the mesh")]
    Unbound(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("codomain truncation degree {have} is too small, need at least {need}")]
    Truncation { need: usize, have: usize },

    #[error("degenerate model operator: {0}")]
    Degenerate(String),

    #[error("model operator degenerate at {} node(s): {}", .nodes.len(), format_nodes(.nodes))]
    DegenerateNodes { nodes: Vec<usize> },

    #[error("a(P) did not stabilize at {} node(s) (worst residual {worst:.3e}): {}", .nodes.len(), format_nodes(.nodes))]
    NotStabilized { nodes: Vec<usize>, worst: f64 },

    #[error("index estimates did not stabilize: {0}")]
    ScheduleNotStabilized(String),

    #[error("singular matrix at node {node} (condition number {cond:.3e})")]
    SingularNode { node: usize, cond: f64 },

    #[error("cocycle is not norm-continuous: max ‖Δa‖/h = {0:.3e}")]
    Discontinuous(f64),

    #[error("form degree error: {0}")]
    Degree(String),

    #[error("form is not closed: |d·| = {0:.3e}")]
    NotClosed(f64),

    #[error("sign calibration failed: raw value {0} is not within tolerance of ±1")]
    Calibration(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_nodes(nodes: &[usize]) -> String {
    const SHOWN: usize = 16;
    let mut s = nodes
        .iter()
        .take(SHOWN)
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    if nodes.len() > SHOWN {
        s.push_str(&format!(", … ({} more)", nodes.len() - SHOWN));
    }
    s
}
