//! Deterministic SVG rendering: the same input always gives the same bytes.

use std::fmt::Write;

use duopoly_core::dynamics::{PeriodKind, ScanResult, ScanSpec};
use duopoly_core::model::State;

use crate::args::Coordinate;
use crate::report::SectionPayload;

/// Colors for periods 1, 2, ..., cycling after 21; black is reserved for aperiodic orbits.
pub const PALETTE: [&str; 21] = [
    "#0067a5", "#be0032", "#f3c300", "#008856", "#875692", "#f38400", "#a1caf1", "#c2b280", "#848482", "#e68fac", "#f99379",
    "#604e97", "#f6a600", "#b3446c", "#dcd300", "#882d17", "#8db600", "#654522", "#e25822", "#2b3d26", "#1f9e89",
];
pub const APERIODIC: &str = "#000000";
const DIVERGED_FILL: &str = "url(#diverged)";

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

pub fn period_fill(kind: PeriodKind) -> &'static str {
    match kind {
        PeriodKind::Period(k) => PALETTE[(k - 1) % PALETTE.len()],
        PeriodKind::Aperiodic => APERIODIC,
        PeriodKind::Diverged => DIVERGED_FILL,
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    plot_w: f64,
    legend: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), legend: f64) -> Self {
        Frame {
            x: widen(x),
            y: widen(y),
            plot_w: W - LEFT - RIGHT - legend,
            legend,
        }
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * self.plot_w
    }

    fn py(&self, v: f64) -> f64 {
        TOP + (self.y.1 - v) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = 0.05 * lo.abs().max(1.0);
        (lo - pad, hi + pad)
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn header(s: &mut String, title: &str) {
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    s.push_str(r##"<defs><pattern id="diverged" width="6" height="6" patternUnits="userSpaceOnUse"><rect width="6" height="6" fill="#ffffff"/><path d="M0,6 L6,0" stroke="#999999" stroke-width="1"/></pattern></defs>"##);
    s.push('\n');
    let _ = writeln!(s, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##);
}

fn axes(s: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (LEFT, LEFT + f.plot_w, TOP, H - BOTTOM);
    let _ = writeln!(s, r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000"/>"##, x1 - x0, y1 - y0);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = f.x.0 + t * (f.x.1 - f.x.0);
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{y1:.2}" x2="{px:.2}" y2="{:.2}" stroke="#000000"/>"##, y1 + 4.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#, y1 + 16.0, tick(xv));
        let _ = writeln!(s, r##"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="#000000"/>"##, x0 - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#, x0 - 6.0, py + 4.0, tick(yv));
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn legend(s: &mut String, f: &Frame, entries: &[(String, String)]) {
    let x = W - RIGHT - f.legend + 12.0;
    for (i, (fill, label)) in entries.iter().enumerate() {
        let y = TOP + 4.0 + 16.0 * i as f64;
        let _ = writeln!(s, r##"<rect x="{x:.2}" y="{y:.2}" width="10" height="10" fill="{fill}" stroke="#000000" stroke-width="0.5"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#, x + 15.0, y + 9.0, escape(label));
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Bifurcation diagram: attractor samples against delta.
pub fn scan1d(r: &ScanResult, coord: Coordinate) -> String {
    let title = match &r.spec {
        ScanSpec::OneD(sp) => format!("{} bifurcation diagram, c1 = {}, c2 = {}", sp.model.kind, sp.c1, sp.c2),
        ScanSpec::TwoD(_) => "bifurcation diagram".to_string(),
    };
    let (xr, _) = axis_ranges(r);
    type Series = (&'static str, fn(&State) -> f64);
    let series: Vec<Series> = match coord {
        Coordinate::X1 => vec![("#000000", |s| s.x1)],
        Coordinate::X2 => vec![("#000000", |s| s.x2)],
        Coordinate::Both => vec![("#d62728", |s| s.x1), ("#1f4fd6", |s| s.x2)],
    };
    let y = bounds(r.cells.iter().flat_map(|c| c.samples.iter()).flat_map(|s| series.iter().map(move |(_, g)| g(s))));
    let y = if y.0.is_finite() { y } else { (0.0, 1.0) };
    let legend_w = if coord == Coordinate::Both { 70.0 } else { 0.0 };
    let f = Frame::new(xr, y, legend_w);
    let mut s = String::new();
    header(&mut s, &title);
    for (color, g) in &series {
        let _ = writeln!(s, r#"<g fill="{color}">"#);
        for c in &r.cells {
            for p in &c.samples {
                let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="1" height="1"/>"#, f.px(c.p1) - 0.5, f.py(g(p)) - 0.5);
            }
        }
        s.push_str("</g>\n");
    }
    let ylabel = match coord {
        Coordinate::X1 => "x1",
        Coordinate::X2 => "x2",
        Coordinate::Both => "x1, x2",
    };
    axes(&mut s, &f, "delta", ylabel);
    if coord == Coordinate::Both {
        legend(&mut s, &f, &[("#d62728".into(), "x1".into()), ("#1f4fd6".into(), "x2".into())]);
    }
    s.push_str("</svg>\n");
    s
}

fn axis_ranges(r: &ScanResult) -> ((f64, f64), (f64, f64)) {
    match &r.spec {
        ScanSpec::OneD(sp) => ((sp.delta.lo, sp.delta.hi), (0.0, 1.0)),
        ScanSpec::TwoD(sp) => ((sp.p1.lo, sp.p1.hi), (sp.p2.lo, sp.p2.hi)),
    }
}

/// Draws a row-major grid, merging horizontal runs of equal fill into one rectangle.
fn raster(s: &mut String, f: &Frame, n1: usize, n2: usize, fill: impl Fn(usize) -> String) {
    let cw = f.plot_w / n1 as f64;
    let ch = (H - TOP - BOTTOM) / n2 as f64;
    for j in 0..n2 {
        let y = H - BOTTOM - (j + 1) as f64 * ch;
        let mut i = 0;
        while i < n1 {
            let color = fill(j * n1 + i);
            let start = i;
            while i < n1 && fill(j * n1 + i) == color {
                i += 1;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
                LEFT + start as f64 * cw,
                (i - start) as f64 * cw + 0.05,
                ch + 0.05
            );
        }
    }
}

/// Period map with a legend of the verdicts present.
pub fn scan2d(r: &ScanResult) -> String {
    let ScanSpec::TwoD(sp) = &r.spec else {
        return scan1d(r, Coordinate::X1);
    };
    let (xr, yr) = axis_ranges(r);
    let f = Frame::new(xr, yr, 110.0);
    let (a1, a2) = sp.plane.axis_names();
    let mut s = String::new();
    header(&mut s, &format!("{} period map", sp.model.kind));
    raster(&mut s, &f, sp.p1.n, sp.p2.n, |k| period_fill(r.cells[k].verdict.kind).to_string());
    axes(&mut s, &f, a1, a2);
    let mut periods: Vec<usize> = r.cells.iter().filter_map(|c| c.verdict.period()).collect();
    periods.sort_unstable();
    periods.dedup();
    let mut entries: Vec<(String, String)> = periods.iter().map(|&k| (period_fill(PeriodKind::Period(k)).to_string(), format!("period {k}"))).collect();
    if r.cells.iter().any(|c| c.verdict.kind == PeriodKind::Aperiodic) {
        entries.push((APERIODIC.into(), format!("> {} or none", sp.p_max)));
    }
    if r.cells.iter().any(|c| c.verdict.kind == PeriodKind::Diverged) {
        entries.push((DIVERGED_FILL.into(), "diverged".into()));
    }
    legend(&mut s, &f, &entries);
    s.push_str("</svg>\n");
    s
}

const SHADES: [&str; 4] = ["#ffffff", "#c8c8c8", "#969696", "#646464"];

/// Stability cross-section; cells are shaded by how many of the models are stable.
pub fn section(p: &SectionPayload) -> String {
    let f = Frame::new((p.p1.0, p.p1.1), (p.p2.0, p.p2.1), 130.0);
    let names: Vec<&str> = p.models.iter().map(|m| m.name()).collect();
    let mut s = String::new();
    let fixed = match p.fixed {
        Some(d) => format!(", delta = {d}"),
        None => ", c2 = c1".to_string(),
    };
    header(&mut s, &format!("stability region of {}{fixed}", names.join(", ")));
    let count = |k: usize| p.stable.iter().filter(|m| m[k]).count();
    let single = p.models.len() == 1;
    let shade = |n: usize| if single && n == 1 { SHADES[2] } else { SHADES[n.min(3)] };
    raster(&mut s, &f, p.p1.2, p.p2.2, |k| shade(count(k)).to_string());
    axes(&mut s, &f, &p.axes.0, &p.axes.1);
    let entries: Vec<(String, String)> = if single {
        vec![(shade(1).into(), "stable".into()), (shade(0).into(), "unstable".into())]
    } else {
        (0..=p.models.len()).rev().map(|n| (shade(n).to_string(), format!("stable for {n} of {}", p.models.len()))).collect()
    };
    legend(&mut s, &f, &entries);
    s.push_str("</svg>\n");
    s
}

/// Phase portrait: one marker per distinct point.
pub fn portrait(points: &[State], title: &str) -> String {
    let x = bounds(points.iter().map(|p| p.x1));
    let y = bounds(points.iter().map(|p| p.x2));
    let f = Frame::new(x, y, 0.0);
    let mut s = String::new();
    header(&mut s, title);
    let mut seen: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    s.push_str("<g fill=\"#1f4fd6\">\n");
    for p in points {
        let (cx, cy) = (f.px(p.x1), f.py(p.x2));
        let key = ((cx * 4.0).round() as i64, (cy * 4.0).round() as i64);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="1.5"/>"#);
    }
    s.push_str("</g>\n");
    axes(&mut s, &f, "x1", "x2");
    s.push_str("</svg>\n");
    s
}
