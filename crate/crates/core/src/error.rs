use core::fmt;

/// Failures raised by the field kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Geometry that cannot define a boundary, grid or primitive.
    DegenerateInput(&'static str),
    /// The evaluation point lies on (or numerically on) a boundary segment
    /// or on the line through one.
    ApexOnBoundaryLine { loop_index: usize, vertex: usize },
    /// Numerator and denominator of the triangle formula both vanish.
    DegenerateTriangle,
    /// The field gradient is below the configured floor.
    StationaryGradient,
    /// The six-point quadratic stencil is (numerically) singular.
    SingularStencil,
    /// The classic solid angle needs exactly one loop with unit current.
    NotClassicEligible,
}

impl Error {
    pub(crate) fn at(self, loop_index: usize, vertex: usize) -> Self {
        match self {
            Error::ApexOnBoundaryLine { .. } => Error::ApexOnBoundaryLine { loop_index, vertex },
            other => other,
        }
    }

    pub(crate) fn in_loop(self, loop_index: usize) -> Self {
        match self {
            Error::ApexOnBoundaryLine { vertex, .. } => Error::ApexOnBoundaryLine { loop_index, vertex },
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateInput(why) => write!(f, "degenerate input: {why}"),
            Error::ApexOnBoundaryLine { loop_index, vertex } => write!(
                f,
                "evaluation point lies on the boundary (loop {loop_index}, vertex {vertex})"
            ),
            Error::DegenerateTriangle => f.write_str("degenerate triangle for solid-angle evaluation"),
            Error::StationaryGradient => f.write_str("field gradient below the stationary floor"),
            Error::SingularStencil => f.write_str("quadratic stencil is singular"),
            Error::NotClassicEligible => {
                f.write_str("classic solid angle requires a single loop with current 1")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
