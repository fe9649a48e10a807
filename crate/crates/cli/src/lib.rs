//! Command-line surface of the duopoly toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or I/O error, 3 verification mismatch
//! (the artifact is still written).

pub mod args;
pub mod config;
pub mod csv_io;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use rayon::prelude::*;

use duopoly_core::dynamics::{
    find_flip_delta, flip_residual, lyapunov_gr_with, phase_portrait, scan_1d, scan_2d, CellAxis, Plane, Scan1dSpec,
    Scan2dSpec, ScanResult,
};
use duopoly_core::model::{self, Model, ModelKind, Params};
use duopoly_core::stability::{
    classify, linear_cost_conditions, region_inclusion, reproduce_tables, sign_at, verify_resultant_identities, Axis, GridSpec, Sign,
    StabilityPolynomials,
};

use args::{Cli, Command, Format, OutputArgs, PlaneArg};
use report::*;

/// Caps the number of scan worker threads.
pub const WORKERS_ENV: &str = "DUOPOLY_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// A rendered artifact plus, when a check failed, the reason.
struct Outcome {
    bytes: String,
    mismatch: Option<String>,
}

impl Outcome {
    fn ok(bytes: String) -> Self {
        Outcome { bytes, mismatch: None }
    }
}

/// Parses `argv` (program name first) after config expansion, without running anything.
pub fn parse(argv: Vec<OsString>) -> Result<(Cli, Vec<String>), clap::Error> {
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    Cli::try_parse_from(argv).map(|c| (c, echo))
}

pub fn run(argv: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let argv = match config::expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return e.exit_code();
        }
    };
    let (cli, echo) = match parse(argv) {
        Ok(p) => p,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    if let Err(e) = configure_workers() {
        let _ = writeln!(stderr, "{e}");
        return e.exit_code();
    }
    match execute(&cli.command, echo) {
        Ok((outcome, out)) => {
            if let Err(e) = emit(&outcome.bytes, out.output.as_deref(), stdout) {
                let _ = writeln!(stderr, "{e}");
                return e.exit_code();
            }
            match outcome.mismatch {
                Some(m) => {
                    let _ = writeln!(stderr, "verification mismatch: {m}");
                    3
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = match v.trim().parse() {
        Ok(n) if n >= 1 => n,
        _ => return Err(CliError::Usage(format!("{WORKERS_ENV}='{v}' must be a positive integer"))),
    };
    // a pool that is already built (repeated calls in one process) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(bytes: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Domain(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(bytes.as_bytes()).map_err(|e| CliError::Domain(format!("cannot write to standard output: {e}"))),
    }
}

fn require_format(out: &OutputArgs, allowed: &[Format], cmd: &str) -> Result<(), CliError> {
    if allowed.contains(&out.format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{cmd} cannot write {:?} output", out.format).to_lowercase()))
    }
}

fn json(cmd: &str, echo: Vec<String>, payload: Payload) -> String {
    ReportDocument::new(cmd, echo, payload).to_json()
}

pub fn polynomial_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Gr => "R_GR",
        ModelKind::Gb => "R_GB",
        ModelKind::Gl => "R_GL1",
    }
}

fn execute(cmd: &Command, echo: Vec<String>) -> Result<(Outcome, OutputArgs), CliError> {
    let name = cmd.name();
    let only_json = [Format::Json];
    let all = [Format::Json, Format::Csv, Format::Svg];
    match cmd {
        Command::Equilibrium(a) => {
            require_format(&a.out, &only_json, name)?;
            let eq = model::equilibrium(a.c1, a.c2).map_err(domain)?;
            let st = eq.state();
            let price = model::price(st.x1 + st.x2).map_err(domain)?;
            let profits = model::profits(&st, &Params::new(a.c1, a.c2, 1.0).map_err(domain)?).map_err(domain)?;
            let payload = Payload::Equilibrium(EquilibriumPayload { c1: a.c1, c2: a.c2, equilibrium: eq, price, profits });
            Ok((Outcome::ok(json(name, echo, payload)), a.out.clone()))
        }
        Command::Stability(a) => match a.plane {
            None => {
                require_format(&a.out, &only_json, name)?;
                let (Some(c1), Some(c2), Some(d)) = (a.c1, a.c2, a.delta) else {
                    return Err(CliError::Usage("stability at a point needs --c1, --c2 and --delta".into()));
                };
                let p = Params::new(c1, c2, d).map_err(domain)?;
                let mut points = Vec::new();
                for &kind in &a.model {
                    let report = classify(kind, &p).map_err(domain)?;
                    points.push(StabilityPoint { polynomial: polynomial_name(kind).into(), value: report.certificate.value, report });
                }
                let disagree: Vec<String> = points.iter().filter(|s| !s.report.agreement).map(|s| s.report.model.to_string()).collect();
                let mismatch = (!disagree.is_empty()).then(|| format!("certificate and eigenvalue verdicts disagree for {}", disagree.join(", ")));
                Ok((Outcome { bytes: json(name, echo, Payload::Stability(points)), mismatch }, a.out.clone()))
            }
            Some(plane) => {
                require_format(&a.out, &[Format::Json, Format::Svg], name)?;
                let section = stability_section(a, plane)?;
                let bytes = match a.out.format {
                    Format::Svg => svg::section(&section),
                    _ => json(name, echo, Payload::StabilitySection(section)),
                };
                Ok((Outcome::ok(bytes), a.out.clone()))
            }
        },
        Command::VerifyIdentities(a) => {
            require_format(&a.out, &only_json, name)?;
            let kinds = if a.model.is_empty() { ModelKind::ALL.to_vec() } else { a.model.clone() };
            let mut verdicts = Vec::new();
            for k in kinds {
                verdicts.extend(verify_resultant_identities(k).map_err(domain)?);
            }
            let failed: Vec<String> = verdicts.iter().filter(|v| v.required && !v.matched).map(|v| format!("{} {}", v.model, v.name)).collect();
            let payload = Payload::Identities(IdentitiesPayload { verdicts, all_required_matched: failed.is_empty() });
            let mismatch = (!failed.is_empty()).then(|| format!("unmatched: {}", failed.join("; ")));
            Ok((Outcome { bytes: json(name, echo, payload), mismatch }, a.out.clone()))
        }
        Command::Tables(a) => {
            require_format(&a.out, &only_json, name)?;
            let tables = reproduce_tables();
            let rows = tables.iter().map(|t| t.rows.len()).sum();
            let failures = tables.iter().map(|t| t.failures().count()).sum();
            let mismatch = (failures > 0).then(|| format!("{failures} of {rows} rows differ"));
            let payload = Payload::Tables(TablesPayload { tables, rows, failures });
            Ok((Outcome { bytes: json(name, echo, payload), mismatch }, a.out.clone()))
        }
        Command::Scan1d(a) => {
            require_format(&a.out, &all, name)?;
            let axis = CellAxis::new(a.delta_range.0, a.delta_range.1, a.resolution).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut spec = Scan1dSpec::new(Model::with_reading(a.dynamics.model, a.dynamics.lma), a.c1, a.c2, axis);
            spec.x0 = a.dynamics.x0;
            spec.burn_in = a.dynamics.burn_in;
            spec.keep = a.detect.keep;
            spec.p_max = a.detect.p_max;
            spec.tol = a.detect.tol;
            spec.samples_per_cell = a.samples;
            let r = scan_1d(&spec).map_err(domain)?;
            let bytes = match a.out.format {
                Format::Csv => csv_string(|w| csv_io::write_scan1d(w, &csv_io::scan1d_rows(&r)))?,
                Format::Svg => svg::scan1d(&r, a.coordinate),
                Format::Json => json(name, echo, Payload::Scan(scan_payload(r, spec.p_max))),
            };
            Ok((Outcome::ok(bytes), a.out.clone()))
        }
        Command::Scan2d(a) => {
            require_format(&a.out, &all, name)?;
            let plane = plane_of(a.plane, a.delta)?;
            let (n1, n2) = a.resolution;
            let p1 = CellAxis::new(a.p1_range.0, a.p1_range.1, n1).map_err(|e| CliError::Usage(e.to_string()))?;
            let p2 = CellAxis::new(a.p2_range.0, a.p2_range.1, n2).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut spec = Scan2dSpec::new(Model::with_reading(a.dynamics.model, a.dynamics.lma), plane, p1, p2, a.dynamics.x0);
            spec.burn_in = a.dynamics.burn_in;
            spec.keep = a.detect.keep;
            spec.p_max = a.detect.p_max;
            spec.tol = a.detect.tol;
            let r = scan_2d(&spec).map_err(domain)?;
            let bytes = match a.out.format {
                Format::Csv => csv_string(|w| csv_io::write_scan2d(w, &csv_io::scan2d_rows(&r)))?,
                Format::Svg => svg::scan2d(&r),
                Format::Json => json(name, echo, Payload::Scan(scan_payload(r, spec.p_max))),
            };
            Ok((Outcome::ok(bytes), a.out.clone()))
        }
        Command::Flip(a) => {
            require_format(&a.out, &only_json, name)?;
            let delta = find_flip_delta(a.model, a.c1, a.c2, a.bracket).map_err(domain)?;
            let residual = flip_residual(a.model, a.c1, a.c2, delta).map_err(domain)?;
            let payload = Payload::Flip(FlipPayload { model: a.model, c1: a.c1, c2: a.c2, bracket: a.bracket, delta, residual });
            Ok((Outcome::ok(json(name, echo, payload)), a.out.clone()))
        }
        Command::Lyapunov(a) => {
            require_format(&a.out, &only_json, name)?;
            let p = Params::new(a.c1, a.c2, a.delta).map_err(domain)?;
            let estimate = lyapunov_gr_with(&p, a.x1, a.burn_in, a.keep).map_err(domain)?;
            let payload = Payload::Lyapunov(LyapunovPayload { params: p, x1_0: a.x1, burn_in: a.burn_in, estimate });
            Ok((Outcome::ok(json(name, echo, payload)), a.out.clone()))
        }
        Command::Phase(a) => {
            require_format(&a.out, &all, name)?;
            let p = Params::new(a.c1, a.c2, a.delta).map_err(domain)?;
            let m = Model::with_reading(a.dynamics.model, a.dynamics.lma);
            let portrait = phase_portrait(m, &p, a.dynamics.x0, a.dynamics.burn_in, a.keep, a.gap).map_err(domain)?;
            let bytes = match a.out.format {
                Format::Csv => csv_string(|w| csv_io::write_orbit(w, &csv_io::orbit_rows(&portrait.points, a.dynamics.burn_in + 1)))?,
                Format::Svg => {
                    let title = format!("{} phase portrait, delta = {}, {} pieces", m.kind, a.delta, portrait.pieces);
                    svg::portrait(&portrait.points, &title)
                }
                Format::Json => {
                    json(name, echo, Payload::Phase(PhasePayload { params: p, x0: a.dynamics.x0, burn_in: a.dynamics.burn_in, portrait }))
                }
            };
            Ok((Outcome::ok(bytes), a.out.clone()))
        }
        Command::CompareRegions(a) => {
            require_format(&a.out, &only_json, name)?;
            let (n1, n2, n3) = a.grid;
            let grid = GridSpec {
                c1: Axis { lo: 0.0, hi: a.c1_max, n: n1 },
                c2: Axis { lo: 0.0, hi: a.c2_max, n: n2 },
                delta: Axis { lo: 0.0, hi: a.delta_max, n: n3 },
            };
            let r = region_inclusion(a.subset, a.superset, &grid);
            let mismatch = (!r.counterexamples.is_empty())
                .then(|| format!("{} grid points are stable for {} but not for {}", r.counterexamples.len(), a.subset, a.superset));
            Ok((Outcome { bytes: json(name, echo, Payload::Regions(r)), mismatch }, a.out.clone()))
        }
        Command::LinearCost(a) => {
            require_format(&a.out, &only_json, name)?;
            let params = Params::new(a.c1, a.c2, a.delta).map_err(domain)?;
            let (gr_stable, gb_stable) = linear_cost_conditions(a.c1, a.c2, a.delta);
            let payload = Payload::LinearCost(LinearCostPayload { params, gr_stable, gb_stable });
            Ok((Outcome::ok(json(name, echo, payload)), a.out.clone()))
        }
    }
}

fn plane_of(arg: PlaneArg, delta: Option<f64>) -> Result<Plane, CliError> {
    match (arg, delta) {
        (PlaneArg::C1Delta, None) => Ok(Plane::C1DeltaTied),
        (PlaneArg::C1Delta, Some(_)) => Err(CliError::Usage("--delta is an axis of the c1-delta plane; drop it".into())),
        (PlaneArg::C1C2, Some(d)) => Ok(Plane::C1C2 { delta: d }),
        (PlaneArg::C1C2, None) => Err(CliError::Usage("the c1-c2 plane needs --delta".into())),
    }
}

fn stability_section(a: &args::StabilityArgs, plane: PlaneArg) -> Result<SectionPayload, CliError> {
    let plane = plane_of(plane, a.delta)?;
    let (Some(r1), Some(r2)) = (a.p1_range, a.p2_range) else {
        return Err(CliError::Usage("a cross-section needs --p1-range and --p2-range".into()));
    };
    let (n1, n2) = a.resolution;
    let ax1 = CellAxis::new(r1.0, r1.1, n1).map_err(|e| CliError::Usage(e.to_string()))?;
    let ax2 = CellAxis::new(r2.0, r2.1, n2).map_err(|e| CliError::Usage(e.to_string()))?;
    let polys = StabilityPolynomials::get();
    let stable = a
        .model
        .iter()
        .map(|&kind| {
            let poly = polys.governing(kind);
            (0..n1 * n2)
                .into_par_iter()
                .map(|k| {
                    let (u, v) = (ax1.center(k % n1), ax2.center(k / n1));
                    let (c1, c2, d) = match plane {
                        Plane::C1DeltaTied => (u, u, v),
                        Plane::C1C2 { delta } => (u, v, delta),
                    };
                    sign_at(poly, c1, c2, d) == Sign::Negative
                })
                .collect()
        })
        .collect();
    let (x, y) = plane.axis_names();
    Ok(SectionPayload {
        models: a.model.clone(),
        axes: (x.into(), y.into()),
        fixed: match plane {
            Plane::C1DeltaTied => None,
            Plane::C1C2 { delta } => Some(delta),
        },
        p1: (r1.0, r1.1, n1),
        p2: (r2.0, r2.1, n2),
        stable,
    })
}

fn scan_payload(result: ScanResult, p_max: usize) -> ScanPayload {
    let mut histogram: Vec<(String, usize)> = Vec::new();
    for c in &result.cells {
        let t = c.verdict.token();
        match histogram.iter_mut().find(|(k, _)| *k == t) {
            Some(e) => e.1 += 1,
            None => histogram.push((t, 1)),
        }
    }
    let mut transitions = Vec::new();
    if result.cells.iter().all(|c| c.p2.is_none()) {
        let mut k = 1;
        while 2 * k <= p_max {
            if let Some(at) = result.transition(k, 2 * k) {
                transitions.push(Transition { from: k, to: 2 * k, at });
            }
            k *= 2;
        }
    }
    ScanPayload { transitions, histogram, result }
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> Result<(), csv_io::CsvError>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(domain)?;
    String::from_utf8(buf).map_err(domain)
}
