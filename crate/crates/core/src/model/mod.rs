//! The three duopoly maps: a gradient-adjusting firm 1 facing a rational (GR),
//! boundedly rational (GB) or LMA (GL) firm 2, numerically and symbolically.

mod numeric;
pub mod symbolic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use numeric::{
    best_response_r2, best_response_r2_bisect, best_response_r2_closed, dg1_dx1, dg1_dx2,
    dq_gr, dr2_dx1, equilibrium, f2, g1, gr_reduced_step, jacobian, lma_response_s2,
    lma_response_s2_with, price, profits, step, step_model,
};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("undefined price: aggregate output {0} is not positive")]
    UndefinedPrice(f64),
    #[error("parameter {name} must be positive and finite, got {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("best response needs x1 > 0, got {0}")]
    NonPositiveOutput(f64),
    #[error("orbit left the domain at ({}, {})", .0.x1, .0.x2)]
    LeftDomain(State),
    #[error("degenerate denominator in derivative")]
    DegenerateDerivative,
    #[error("the Jacobian is only defined here for the two-dimensional maps GB and GL")]
    NotTwoDimensional,
}

/// Cost coefficients of the two firms and the gradient adjustment speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub c1: f64,
    pub c2: f64,
    pub delta: f64,
}

impl Params {
    pub fn new(c1: f64, c2: f64, delta: f64) -> Result<Self, ModelError> {
        for (name, value) in [("c1", c1), ("c2", c2), ("delta", delta)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::InvalidParam { name, value });
            }
        }
        Ok(Params { c1, c2, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub x1: f64,
    pub x2: f64,
}

impl State {
    pub const fn new(x1: f64, x2: f64) -> Self {
        State { x1, x2 }
    }

    pub fn max_norm(&self) -> f64 {
        self.x1.abs().max(self.x2.abs())
    }

    pub fn dist_max(&self, other: &State) -> f64 {
        (self.x1 - other.x1).abs().max((self.x2 - other.x2).abs())
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Gr,
    Gb,
    Gl,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Gr, ModelKind::Gb, ModelKind::Gl];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Gr => "GR",
            ModelKind::Gb => "GB",
            ModelKind::Gl => "GL",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gr" => Ok(ModelKind::Gr),
            "gb" => Ok(ModelKind::Gb),
            "gl" => Ok(ModelKind::Gl),
            _ => Err(format!("unknown model '{s}' (expected gr, gb or gl)")),
        }
    }
}

/// Which argument order the LMA update uses.
///
/// `Derived` is `x2' = (2 x2 + x1) / (2 (1 + c2 S^2))`, the rule obtained from the
/// firm's first-order condition; its fixed point is the Nash equilibrium and its
/// Jacobian underlies every GL stability certificate. `PrintedOrder` swaps the two
/// outputs, `x2' = (2 x1 + x2) / (2 (1 + c2 S^2))`, which is the map whose orbits
/// show the GL simulation windows (period 4 at 2.3, period 14 at 2.369339).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LmaReading {
    #[default]
    Derived,
    PrintedOrder,
}

impl FromStr for LmaReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "derived" => Ok(LmaReading::Derived),
            "printed" | "printed-order" => Ok(LmaReading::PrintedOrder),
            _ => Err(format!("unknown LMA reading '{s}' (expected derived or printed)")),
        }
    }
}

/// A map to iterate: the model plus, for GL, the argument order of the LMA rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    pub kind: ModelKind,
    pub lma: LmaReading,
}

impl Model {
    pub const fn new(kind: ModelKind) -> Self {
        Model {
            kind,
            lma: LmaReading::Derived,
        }
    }

    pub const fn with_reading(kind: ModelKind, lma: LmaReading) -> Self {
        Model { kind, lma }
    }
}

impl From<ModelKind> for Model {
    fn from(kind: ModelKind) -> Self {
        Model::new(kind)
    }
}

/// The unique positive Nash equilibrium with its residuals in `G1 = 0` and `F2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub x1_star: f64,
    pub x2_star: f64,
    pub residuals: (f64, f64),
}

impl Equilibrium {
    pub fn state(&self) -> State {
        State::new(self.x1_star, self.x2_star)
    }
}
