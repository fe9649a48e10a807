use serde::{Deserialize, Serialize};

use super::polys::{eval_stability_poly, ScaledValue};
use crate::model::{self, ModelError, ModelKind, Params};

/// Values within this distance of zero are treated as lying on a bifurcation surface.
pub const MARGINAL_BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

/// Bifurcation associated with the binding stability condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bifurcation {
    Fold,
    Flip,
    NeimarkSacker,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JuryResult {
    pub cd1: f64,
    pub cd2: f64,
    pub cd3: f64,
    pub verdict: Verdict,
    /// The condition with the smallest value: the one that fails first.
    pub binding: Bifurcation,
}

fn verdict_from_margins(margins: &[f64]) -> Verdict {
    if margins.iter().any(|m| m.abs() <= MARGINAL_BAND) && margins.iter().all(|&m| m > -MARGINAL_BAND) {
        Verdict::Marginal
    } else if margins.iter().all(|&m| m > 0.0) {
        Verdict::Stable
    } else {
        Verdict::Unstable
    }
}

/// Jury conditions `CP(1) > 0`, `CP(-1) > 0`, `1 - det J > 0` for a 2x2 matrix.
pub fn jury_test(j: &[[f64; 2]; 2]) -> JuryResult {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let cd1 = 1.0 - tr + det;
    let cd2 = 1.0 + tr + det;
    let cd3 = 1.0 - det;
    let tags = [
        (cd1, Bifurcation::Fold),
        (cd2, Bifurcation::Flip),
        (cd3, Bifurcation::NeimarkSacker),
    ];
    let binding = tags
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|t| t.1)
        .expect("three conditions");
    JuryResult {
        cd1,
        cd2,
        cd3,
        verdict: verdict_from_margins(&[cd1, cd2, cd3]),
        binding,
    }
}

/// Joint verdict of the polynomial certificate and the numeric test at the equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub model: ModelKind,
    pub params: Params,
    pub certificate: ScaledValue,
    /// `R_GL^2` for GL, reported for reference only.
    pub secondary: Option<ScaledValue>,
    pub certificate_verdict: Verdict,
    /// `(1 - DQ, 1 + DQ)` for GR, `(CD1, CD2, CD3)` for GB and GL.
    pub margins: Vec<f64>,
    pub numeric_verdict: Verdict,
    pub binding: Bifurcation,
    pub agreement: bool,
}

/// Certificate verdict from a scaled polynomial value.
pub fn certificate_verdict(v: &ScaledValue) -> Verdict {
    let r = v.relative();
    if r.abs() <= MARGINAL_BAND {
        Verdict::Marginal
    } else if r < 0.0 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    }
}

/// Numeric margins and verdict at the equilibrium: `|DQ| < 1` for GR, Jury for GB/GL.
pub fn numeric_stability(kind: ModelKind, p: &Params) -> Result<(Vec<f64>, Verdict, Bifurcation), ModelError> {
    let eq = model::equilibrium(p.c1, p.c2)?.state();
    match kind {
        ModelKind::Gr => {
            let dq = model::dq_gr(p, &eq)?;
            let margins = vec![1.0 - dq, 1.0 + dq];
            let binding = if dq < 0.0 { Bifurcation::Flip } else { Bifurcation::Fold };
            let verdict = verdict_from_margins(&margins);
            Ok((margins, verdict, binding))
        }
        _ => {
            let j = model::jacobian(kind.into(), p, &eq)?;
            let r = jury_test(&j);
            Ok((vec![r.cd1, r.cd2, r.cd3], r.verdict, r.binding))
        }
    }
}

pub fn classify(kind: ModelKind, p: &Params) -> Result<StabilityReport, ModelError> {
    let values = eval_stability_poly(kind, p);
    let certificate_verdict = certificate_verdict(&values.governing);
    let (margins, numeric_verdict, binding) = numeric_stability(kind, p)?;
    let agreement = certificate_verdict == numeric_verdict
        || certificate_verdict == Verdict::Marginal
        || numeric_verdict == Verdict::Marginal;
    Ok(StabilityReport {
        model: kind,
        params: *p,
        certificate: values.governing,
        secondary: values.secondary,
        certificate_verdict,
        margins,
        numeric_verdict,
        binding,
        agreement,
    })
}
