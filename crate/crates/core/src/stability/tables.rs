//! The published sample points and their recorded signs and verdicts.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::jury::{numeric_stability, Verdict};
use super::polys::{eval_exact, Sign, StabilityPolynomials};
use crate::model::{ModelKind, Params};
use crate::sym::rational_to_f64;

type Point = (&'static str, &'static str, &'static str);

// (point, stable, sign of R_GR)
const SAMPLE_GR: [(Point, bool, char); 6] = [
    (("1", "1/2", "1"), true, '-'),
    (("1", "1/2", "2"), false, '+'),
    (("1", "2", "1"), true, '-'),
    (("1", "2", "2"), false, '+'),
    (("1", "10", "1"), true, '-'),
    (("1", "10", "2"), false, '+'),
];

// (point, stable, sign of R_GL^1, sign of R_GL^2)
const SAMPLE_GL: [(Point, bool, char, char); 27] = [
    (("1", "1/8", "1/2"), true, '-', '-'),
    (("1", "1/8", "1"), true, '-', '+'),
    (("1", "1/8", "3"), false, '+', '+'),
    (("1", "1/4", "1/2"), true, '-', '-'),
    (("1", "1/4", "1"), true, '-', '+'),
    (("1", "1/4", "2"), false, '+', '+'),
    (("1", "9/32", "1/2"), true, '-', '-'),
    (("1", "9/32", "1"), true, '-', '+'),
    (("1", "9/32", "2"), false, '+', '+'),
    (("1", "1/2", "1"), true, '-', '-'),
    (("1", "1/2", "3/2"), true, '-', '+'),
    (("1", "1/2", "2"), false, '+', '+'),
    (("1", "2", "1"), true, '-', '-'),
    (("1", "2", "3/2"), false, '+', '-'),
    (("1", "2", "3"), false, '+', '+'),
    (("1", "5", "1"), true, '-', '-'),
    (("1", "5", "2"), false, '+', '-'),
    (("1", "5", "5"), false, '+', '+'),
    (("1", "10", "1"), true, '-', '-'),
    (("1", "10", "2"), false, '+', '-'),
    (("1", "10", "22"), false, '+', '+'),
    (("1", "13", "1"), true, '-', '-'),
    (("1", "13", "2"), false, '+', '-'),
    (("1", "13", "223"), false, '+', '+'),
    (("1", "21", "1"), true, '-', '-'),
    (("1", "21", "2"), false, '+', '-'),
    (("1", "21", "13"), false, '+', '+'),
];

// (point, R_GR < 0, R_GB < 0)
const GR_GB: [(Point, bool, bool); 16] = [
    (("1/2", "1/2", "125/256"), true, true),
    (("1/2", "1/2", "141/128"), true, true),
    (("1/2", "1/2", "189/128"), true, true),
    (("1/2", "193/256", "115/64"), true, true),
    (("1/2", "477/64", "115/64"), false, true),
    (("1/2", "1779/128", "115/64"), true, true),
    (("1/2", "85/256", "495/256"), true, true),
    (("1/2", "173/256", "495/256"), false, true),
    (("1/2", "539/256", "495/256"), false, false),
    (("1/2", "4347/256", "495/256"), false, true),
    (("1/2", "495/16", "495/256"), true, true),
    (("1/2", "15/256", "5/2"), true, true),
    (("1/2", "275/2048", "5/2"), false, true),
    (("1/2", "4967/512", "5/2"), false, false),
    (("1/2", "24401/256", "5/2"), false, true),
    (("1/2", "22001/128", "5/2"), true, true),
];

// (point, R_GL^1 < 0, R_GB < 0)
const GL_GB: [(Point, bool, bool); 27] = [
    (("1/2", "15/2048", "689/256"), true, true),
    (("1/2", "15/2048", "759/128"), false, true),
    (("1/2", "15/2048", "893/128"), false, false),
    (("1/2", "393/16384", "499/256"), true, true),
    (("1/2", "393/16384", "1053/256"), false, true),
    (("1/2", "393/16384", "309/64"), false, false),
    (("1/2", "265/4096", "3/2"), true, true),
    (("1/2", "265/4096", "197/64"), false, true),
    (("1/2", "265/4096", "117/32"), false, false),
    (("1/2", "611/2048", "1105/1024"), true, true),
    (("1/2", "611/2048", "2213/1024"), false, true),
    (("1/2", "611/2048", "341/128"), false, false),
    (("1/2", "5/2", "239/256"), true, true),
    (("1/2", "5/2", "481/256"), false, true),
    (("1/2", "5/2", "153/64"), false, false),
    (("1/2", "1907/256", "133/128"), true, true),
    (("1/2", "1907/256", "537/256"), false, true),
    (("1/2", "1907/256", "335/128"), false, false),
    (("1/2", "1585/128", "145/128"), true, true),
    (("1/2", "1585/128", "73/32"), false, true),
    (("1/2", "1585/128", "179/64"), false, false),
    (("1/2", "4013/256", "303/256"), true, true),
    (("1/2", "4013/256", "611/256"), false, true),
    (("1/2", "4013/256", "93/32"), false, false),
    (("1/2", "2239/128", "155/128"), true, true),
    (("1/2", "2239/128", "39/16"), false, true),
    (("1/2", "2239/128", "189/64"), false, false),
];

// (point, R_GR < 0, R_GL^1 < 0)
const GR_GL: [(Point, bool, bool); 16] = [
    (("1/2", "1/2", "117/256"), true, true),
    (("1/2", "1/2", "137/128"), true, true),
    (("1/2", "1/2", "189/128"), true, true),
    (("1/2", "199/256", "459/256"), true, true),
    (("1/2", "929/128", "459/256"), false, true),
    (("1/2", "1723/128", "459/256"), true, true),
    (("1/2", "43/128", "247/128"), true, true),
    (("1/2", "175/256", "247/128"), false, true),
    (("1/2", "595/256", "247/128"), false, false),
    (("1/2", "4331/256", "247/128"), false, true),
    (("1/2", "3889/128", "247/128"), true, true),
    (("1/2", "15/256", "5/2"), true, true),
    (("1/2", "265/2048", "5/2"), false, true),
    (("1/2", "10485/1024", "5/2"), false, false),
    (("1/2", "6135/64", "5/2"), false, true),
    (("1/2", "22001/128", "5/2"), true, true),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    /// `(c1, c2, delta)` as exact fractions.
    pub point: [String; 3],
    /// Recorded entries in column order, e.g. `["yes", "-"]` or `["false", "true"]`.
    pub expected: Vec<String>,
    pub computed: Vec<String>,
    /// Exact values of the polynomials involved, as `name = p/q`.
    pub values: Vec<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    /// Keyed by content: `sample-gr`, `sample-gl`, `gr-gb`, `gl-gb`, `gr-gl`.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowReport> {
        self.rows.iter().filter(|r| !r.ok)
    }
}

/// Fixture points of every table in order, keyed by table name; used as strictness
/// witnesses and for reporting.
pub fn table_points(name: &str) -> Vec<[BigRational; 3]> {
    let pts: Vec<Point> = match name {
        "sample-gr" => SAMPLE_GR.iter().map(|r| r.0).collect(),
        "sample-gl" => SAMPLE_GL.iter().map(|r| r.0).collect(),
        "gr-gb" => GR_GB.iter().map(|r| r.0).collect(),
        "gl-gb" => GL_GB.iter().map(|r| r.0).collect(),
        "gr-gl" => GR_GL.iter().map(|r| r.0).collect(),
        _ => Vec::new(),
    };
    pts.iter().map(parse_point).collect()
}

fn q(s: &str) -> BigRational {
    s.parse().expect("fixture fraction")
}

fn parse_point(p: &Point) -> [BigRational; 3] {
    [q(p.0), q(p.1), q(p.2)]
}

fn point_strings(p: &Point) -> [String; 3] {
    [p.0.to_string(), p.1.to_string(), p.2.to_string()]
}

struct Evaluated {
    values: Vec<String>,
    signs: Vec<Sign>,
}

fn evaluate(point: &[BigRational; 3], polys: &[(&str, ModelKind, bool)]) -> Evaluated {
    let s = StabilityPolynomials::get();
    let mut values = Vec::new();
    let mut signs = Vec::new();
    for &(name, kind, secondary) in polys {
        let poly = if secondary { &s.r_gl2 } else { s.governing(kind) };
        let v = eval_exact(poly, &point[0], &point[1], &point[2]);
        signs.push(Sign::of_rational(&v));
        values.push(format!("{name} = {v}"));
    }
    Evaluated { values, signs }
}

fn numeric_verdict(kind: ModelKind, point: &[BigRational; 3]) -> String {
    let p = Params::new(
        rational_to_f64(&point[0]),
        rational_to_f64(&point[1]),
        rational_to_f64(&point[2]),
    )
    .expect("positive fixture parameters");
    match numeric_stability(kind, &p) {
        Ok((_, Verdict::Stable, _)) => "yes".into(),
        Ok((_, Verdict::Unstable, _)) => "no".into(),
        Ok((_, Verdict::Marginal, _)) => "marginal".into(),
        Err(e) => format!("error: {e}"),
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn negative(s: Sign) -> String {
    (s == Sign::Negative).to_string()
}

fn sample_gr() -> TableReport {
    let rows = SAMPLE_GR
        .iter()
        .map(|(pt, stable, sign)| {
            let point = parse_point(pt);
            let e = evaluate(&point, &[("R_GR", ModelKind::Gr, false)]);
            let computed = vec![numeric_verdict(ModelKind::Gr, &point), e.signs[0].symbol().to_string()];
            let expected = vec![yes_no(*stable), sign.to_string()];
            RowReport {
                point: point_strings(pt),
                ok: computed == expected,
                expected,
                computed,
                values: e.values,
            }
        })
        .collect();
    TableReport {
        name: "sample-gr".into(),
        columns: vec!["stable".into(), "R_GR".into()],
        rows,
    }
}

fn sample_gl() -> TableReport {
    let rows = SAMPLE_GL
        .iter()
        .map(|(pt, stable, s1, s2)| {
            let point = parse_point(pt);
            let e = evaluate(
                &point,
                &[("R_GL1", ModelKind::Gl, false), ("R_GL2", ModelKind::Gl, true)],
            );
            let computed = vec![
                numeric_verdict(ModelKind::Gl, &point),
                e.signs[0].symbol().to_string(),
                e.signs[1].symbol().to_string(),
            ];
            let expected = vec![yes_no(*stable), s1.to_string(), s2.to_string()];
            RowReport {
                point: point_strings(pt),
                ok: computed == expected,
                expected,
                computed,
                values: e.values,
            }
        })
        .collect();
    TableReport {
        name: "sample-gl".into(),
        columns: vec!["stable".into(), "R_GL1".into(), "R_GL2".into()],
        rows,
    }
}

fn comparison(name: &str, rows: &[(Point, bool, bool)], a: (&str, ModelKind), b: (&str, ModelKind)) -> TableReport {
    let rows = rows
        .iter()
        .map(|(pt, ea, eb)| {
            let point = parse_point(pt);
            let e = evaluate(&point, &[(a.0, a.1, false), (b.0, b.1, false)]);
            let computed = vec![negative(e.signs[0]), negative(e.signs[1])];
            let expected = vec![ea.to_string(), eb.to_string()];
            RowReport {
                point: point_strings(pt),
                ok: computed == expected,
                expected,
                computed,
                values: e.values,
            }
        })
        .collect();
    TableReport {
        name: name.into(),
        columns: vec![format!("{}<0", a.0), format!("{}<0", b.0)],
        rows,
    }
}

/// Re-evaluates every published sample point: exact polynomial signs, plus the numeric
/// stability verdict for the two tables that record one.
pub fn reproduce_tables() -> Vec<TableReport> {
    vec![
        sample_gr(),
        sample_gl(),
        comparison("gr-gb", &GR_GB, ("R_GR", ModelKind::Gr), ("R_GB", ModelKind::Gb)),
        comparison("gl-gb", &GL_GB, ("R_GL1", ModelKind::Gl), ("R_GB", ModelKind::Gb)),
        comparison("gr-gl", &GR_GL, ("R_GR", ModelKind::Gr), ("R_GL1", ModelKind::Gl)),
    ]
}
