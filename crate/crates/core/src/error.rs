use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("{func} is undefined at {arg}")]
    EvalDomain { func: &'static str, arg: f64 },
    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("axis is not unit (norm {0})")]
    NonUnitAxis(f64),
    #[error("metric is not positive definite")]
    SingularMetric,
    #[error("frame is singular (det {0:e})")]
    SingularFrame(f64),
    #[error("point lies outside the chart")]
    OutsideChart,
    #[error("connection is not metric compatible (residual {0:e})")]
    NotMetricCompatible(f64),
    #[error("plane is degenerate")]
    DegeneratePlane,

    #[error("tangent vectors are dependent")]
    DegenerateParameterization,
    #[error("stencil leaves the domain")]
    StencilOutsideDomain,
    #[error("chart is not isothermal (E={e}, F={f}, G={g})")]
    NotIsothermal { e: f64, f: f64, g: f64 },
    #[error("isothermal chart is negatively oriented")]
    NegativeChart,
    #[error("ambient is not given by a frame")]
    NotWeitzenboeck,
    #[error("gauge axis deviates from the normal by {0:e}")]
    AxisNotNormal(f64),
    #[error("surface is not closed")]
    NotClosed,
    #[error("curvature data was not requested for this point")]
    MissingSecondOrder,
}
