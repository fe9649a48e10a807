//! Versioned JSON reports. The timestamp lives in `metadata`, outside the data, so two
//! runs of the same command differ only there.

use duopoly_core::dynamics::{LyapunovEstimate, PhasePortrait, ScanResult};
use duopoly_core::model::{Equilibrium, ModelKind, Params, State};
use duopoly_core::stability::{IdentityVerdict, InclusionReport, StabilityReport, TableReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: CommandEcho,
    pub payload: Payload,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub subcommand: String,
    /// Arguments after config expansion, program name excluded.
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub generated_at: u64,
}

impl Metadata {
    pub fn now() -> Self {
        let from_env = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok());
        let generated_at = from_env.unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Metadata { generated_at }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Equilibrium(EquilibriumPayload),
    Stability(Vec<StabilityPoint>),
    StabilitySection(SectionPayload),
    Identities(IdentitiesPayload),
    Tables(TablesPayload),
    Scan(ScanPayload),
    Flip(FlipPayload),
    Lyapunov(LyapunovPayload),
    Phase(PhasePayload),
    Regions(InclusionReport),
    LinearCost(LinearCostPayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPayload {
    pub c1: f64,
    pub c2: f64,
    pub equilibrium: Equilibrium,
    pub price: f64,
    pub profits: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityPoint {
    /// Name of the governing polynomial, e.g. `R_GR`.
    pub polynomial: String,
    pub value: f64,
    pub report: StabilityReport,
}

/// Sign grid of governing polynomials over a plane; `stable[m][k]` for model `m` and
/// cell `k` (first axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionPayload {
    pub models: Vec<ModelKind>,
    pub axes: (String, String),
    pub fixed: Option<f64>,
    pub p1: (f64, f64, usize),
    pub p2: (f64, f64, usize),
    pub stable: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitiesPayload {
    pub verdicts: Vec<IdentityVerdict>,
    pub all_required_matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesPayload {
    pub tables: Vec<TableReport>,
    pub rows: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPayload {
    /// Period-doubling transitions `k -> 2k` seen along a 1-D scan.
    pub transitions: Vec<Transition>,
    /// `(token, cell count)` for every verdict that occurs, in first-seen order.
    pub histogram: Vec<(String, usize)>,
    pub result: ScanResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipPayload {
    pub model: ModelKind,
    pub c1: f64,
    pub c2: f64,
    pub bracket: (f64, f64),
    pub delta: f64,
    /// Governing polynomial at `delta` relative to the sum of its term magnitudes.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovPayload {
    pub params: Params,
    pub x1_0: f64,
    pub burn_in: usize,
    pub estimate: LyapunovEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePayload {
    pub params: Params,
    pub x0: State,
    pub burn_in: usize,
    pub portrait: PhasePortrait,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearCostPayload {
    pub params: Params,
    pub gr_stable: bool,
    pub gb_stable: bool,
}

impl ReportDocument {
    pub fn new(subcommand: &str, args: Vec<String>, payload: Payload) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: CommandEcho {
                subcommand: subcommand.to_string(),
                args,
            },
            payload,
            metadata: Metadata::now(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports contain only finite numbers");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
