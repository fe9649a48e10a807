//! Stability certificates: the transcribed stability polynomials, the Jury test,
//! resultant re-derivations, sample-point tables and region comparisons.

mod identities;
mod jury;
mod polys;
mod regions;
mod tables;

pub use identities::{operand, strip_known_factors, verify_resultant_identities, IdentityVerdict, Operand};
pub use jury::{
    certificate_verdict, classify, jury_test, numeric_stability, Bifurcation, JuryResult, StabilityReport,
    Verdict, MARGINAL_BAND,
};
pub use polys::{
    eval_exact, eval_stability_poly, exact, sign_at, ScaledValue, Sign, StabilityPolynomials, StabilityValue,
};
pub use regions::{linear_cost_conditions, region_inclusion, Axis, FixtureWitness, GridSpec, InclusionReport};
pub use tables::{reproduce_tables, table_points, RowReport, TableReport};
