use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use duopoly_cli::csv_io::{self, read_orbit, read_scan1d, read_scan2d};
use duopoly_cli::report::{Payload, ReportDocument};
use duopoly_core::dynamics::{scan_1d, scan_2d, CellAxis, Plane, Scan1dSpec, Scan2dSpec};
use duopoly_core::model::{self, ModelKind, State};
use duopoly_core::stability::Verdict;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_duopoly"));
    c.env_remove("DUOPOLY_WORKERS").env_remove("SOURCE_DATE_EPOCH");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn doc(o: &Output) -> ReportDocument {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    ReportDocument::from_json(&stdout(o)).expect("report parses")
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Start tags and end tags nest properly.
fn balanced_xml(s: &str) -> bool {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = s;
    while let Some(i) = rest.find('<') {
        let Some(j) = rest[i..].find('>') else { return false };
        let tag = &rest[i + 1..i + j];
        rest = &rest[i + j + 1..];
        if let Some(name) = tag.strip_prefix('/') {
            if stack.pop().as_deref() != Some(name.trim()) {
                return false;
            }
        } else if !tag.ends_with('/') {
            stack.push(tag.split_whitespace().next().unwrap_or("").to_string());
        }
    }
    stack.is_empty()
}

#[test]
fn stability_point_reports_the_certificate_value() {
    let d = doc(&run(&["stability", "--model", "gr", "--c1", "1", "--c2", "0.5", "--delta", "1"]));
    assert_eq!(d.command.subcommand, "stability");
    let Payload::Stability(points) = &d.payload else { panic!("wrong payload") };
    assert_eq!(points.len(), 1);
    assert_eq!(points[0].polynomial, "R_GR");
    assert_eq!(points[0].value, -88.25);
    assert_eq!(points[0].report.certificate_verdict, Verdict::Stable);
    assert_eq!(points[0].report.numeric_verdict, Verdict::Stable);
    assert!(stdout(&run(&["stability", "--model", "gr", "--c1", "1", "--c2", "0.5", "--delta", "1"])).contains("\"certificate_verdict\": \"stable\""));
}

#[test]
fn reports_round_trip() {
    for args in [
        vec!["stability", "--model", "gr,gl,gb", "--c1", "0.5", "--c2", "1", "--delta", "2"],
        vec!["equilibrium", "--c1", "0.3", "--c2", "0.7"],
        vec!["flip", "--model", "gl", "--c1", "0.5", "--c2", "1", "--bracket", "1:3"],
        vec!["scan1d", "--model", "gr", "--c1", "0.5", "--c2", "1", "--delta-range", "1.6:2.5", "--resolution", "12", "--samples", "3"],
    ] {
        let d = doc(&run(&args));
        assert_eq!(ReportDocument::from_json(&d.to_json()).unwrap(), d);
    }
}

#[test]
fn usage_errors_exit_1() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["bogus"],
        vec![],
        vec!["stability", "--model", "gr", "--c1", "1", "--c2", "0.5", "--delta", "1", "--frobnicate"],
        vec!["stability", "--model", "xx", "--c1", "1", "--c2", "0.5", "--delta", "1"],
        vec!["equilibrium", "--c1=abc", "--c2", "1"],
        vec!["equilibrium", "--c1=-1", "--c2", "1"],
        vec!["equilibrium", "--c1", "0", "--c2", "1"],
        vec!["equilibrium", "--c1", "1", "--c2", "1", "--format", "svg"],
        vec!["stability", "--model", "gr", "--c1", "1"],
        vec!["scan1d", "--model", "gr", "--c1", "1", "--c2", "1", "--delta-range", "2:1"],
        vec!["scan1d", "--model", "gr", "--c1", "1", "--c2", "1", "--delta-range", "1:2", "--resolution", "1"],
        vec!["scan2d", "--model", "gl", "--plane", "c1-c2", "--p1-range", "1:2", "--p2-range", "1:2"],
        vec!["phase", "--model", "gl", "--c1", "1", "--c2", "1", "--delta", "1", "--x0", "0.5"],
        vec!["compare-regions", "--grid", "4x4"],
        vec!["tables", "--config", "/nonexistent/duopoly.conf"],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
        assert!(stdout(&o).is_empty());
    }
    let o = run(&["bogus"]);
    assert!(stderr(&o).contains("Usage"));
    let o = bin().env("DUOPOLY_WORKERS", "zero").args(["tables"]).output().unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn help_and_version_exit_0() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    for sub in [
        "equilibrium", "stability", "verify-identities", "tables", "scan1d", "scan2d", "flip", "lyapunov", "phase", "compare-regions", "linear-cost",
    ] {
        assert!(stdout(&o).contains(sub), "{sub} missing from help");
        assert_eq!(code(&run(&[sub, "--help"])), 0);
    }
    assert!(stdout(&run(&["--version"])).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn domain_errors_exit_2() {
    let o = run(&["flip", "--model", "gr", "--c1", "0.5", "--c2", "1", "--bracket", "0.01:0.1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no root bracketed"));
    let o = run(&["phase", "--model", "gr", "--c1", "0.5", "--c2", "1", "--delta", "50"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let o = run(&["lyapunov", "--c1", "0.5", "--c2", "1", "--delta", "50"]);
    assert_eq!(code(&o), 2);
    let o = run(&["tables", "--output", "/nonexistent-dir/tables.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn failed_inclusion_exits_3_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("regions.json");
    let o = run(&["compare-regions", "--subset", "gb", "--superset", "gr", "--grid", "10x10x10", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("verification mismatch"));
    let d = ReportDocument::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let Payload::Regions(r) = d.payload else { panic!("wrong payload") };
    assert!(!r.counterexamples.is_empty());

    let d = doc(&run(&["compare-regions", "--subset", "gr", "--superset", "gl", "--grid", "10x10x10"]));
    let Payload::Regions(r) = d.payload else { panic!("wrong payload") };
    assert!(r.counterexamples.is_empty() && r.points == 1000);
}

#[test]
fn tables_and_identities_reproduce() {
    let d = doc(&run(&["tables"]));
    let Payload::Tables(t) = d.payload else { panic!("wrong payload") };
    assert_eq!((t.rows, t.failures), (92, 0));
    let d = doc(&run(&["verify-identities", "--model", "gr"]));
    let Payload::Identities(v) = d.payload else { panic!("wrong payload") };
    assert!(v.all_required_matched);
    assert_eq!(v.verdicts.iter().filter(|x| x.matched).count(), v.verdicts.len());
}

#[test]
fn small_commands_agree_with_the_library() {
    let d = doc(&run(&["equilibrium", "--c1", "0.5", "--c2", "1"]));
    let Payload::Equilibrium(e) = d.payload else { panic!("wrong payload") };
    assert_eq!(e.equilibrium, model::equilibrium(0.5, 1.0).unwrap());
    assert!((e.price - 1.0 / (e.equilibrium.x1_star + e.equilibrium.x2_star)).abs() < 1e-15);

    // R_GR = 8 d^4 - 24 d^2 - 12.25 at (0.5, 1)
    let root = ((24.0 + (576.0f64 + 392.0).sqrt()) / 16.0).sqrt();
    let d = doc(&run(&["flip", "--model", "gr", "--c1", "0.5", "--c2", "1"]));
    let Payload::Flip(f) = d.payload else { panic!("wrong payload") };
    assert!((f.delta - root).abs() < 1e-8, "{} vs {root}", f.delta);

    let lyap = |d: &str| {
        let r = doc(&run(&["lyapunov", "--c1", "0.5", "--c2", "1", "--delta", d]));
        let Payload::Lyapunov(l) = r.payload else { panic!("wrong payload") };
        l.estimate.exponent
    };
    assert!(lyap("1.5") < 0.0 && lyap("2.0") < 0.0 && lyap("2.49") > 0.0);

    let d = doc(&run(&["linear-cost", "--c1", "1", "--c2", "1", "--delta", "1"]));
    let Payload::LinearCost(l) = d.payload else { panic!("wrong payload") };
    assert!(l.gr_stable && l.gb_stable);
    let d = doc(&run(&["linear-cost", "--c1", "1", "--c2", "1", "--delta", "3"]));
    let Payload::LinearCost(l) = d.payload else { panic!("wrong payload") };
    assert!(!l.gr_stable && l.gb_stable);
}

#[test]
fn scan1d_csv_matches_the_library() {
    let o = run(&[
        "scan1d", "--model", "gr", "--c1", "0.5", "--c2", "1", "--delta-range", "1.6:2.5", "--resolution", "30", "--samples", "8", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("delta,x1_sample,x2_sample,period\n"));
    let rows = read_scan1d(o.stdout.as_slice()).unwrap();
    let mut spec = Scan1dSpec::new(ModelKind::Gr, 0.5, 1.0, CellAxis::new(1.6, 2.5, 30).unwrap());
    spec.samples_per_cell = 8;
    assert_eq!(rows, csv_io::scan1d_rows(&scan_1d(&spec).unwrap()));
    assert_eq!(rows.len(), 240);
    assert_eq!(rows[0].period, "1");
}

#[test]
fn scan2d_outputs_parse() {
    let base = [
        "scan2d", "--model", "gl", "--plane", "c1-c2", "--delta", "1", "--p1-range", "1.4:3.4", "--p2-range", "4:6", "--resolution", "6x5", "--x0",
        "0.2,0.2",
    ];
    let o = run(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(code(&o), 0);
    let rows = read_scan2d(o.stdout.as_slice()).unwrap();
    let mut spec = Scan2dSpec::new(
        ModelKind::Gl,
        Plane::C1C2 { delta: 1.0 },
        CellAxis::new(1.4, 3.4, 6).unwrap(),
        CellAxis::new(4.0, 6.0, 5).unwrap(),
        State::new(0.2, 0.2),
    );
    spec.burn_in = 5000;
    assert_eq!(rows, csv_io::scan2d_rows(&scan_2d(&spec).unwrap()));
    assert_eq!(rows.len(), 30);

    let svg = stdout(&run(&[&base[..], &["--format", "svg"]].concat()));
    assert!(svg.starts_with("<svg") && balanced_xml(&svg));
    assert!(svg.contains("period 1"));

    let d = doc(&run(&base));
    let Payload::Scan(s) = d.payload else { panic!("wrong payload") };
    assert_eq!(s.result.cells.len(), 30);
    assert_eq!(s.histogram.iter().map(|h| h.1).sum::<usize>(), 30);
}

#[test]
fn scan1d_transitions_are_reported() {
    let d = doc(&run(&["scan1d", "--model", "gr", "--c1", "0.5", "--c2", "1", "--delta-range", "1.6:2.5", "--resolution", "450", "--samples", "1"]));
    let Payload::Scan(s) = d.payload else { panic!("wrong payload") };
    let at = |from| s.transitions.iter().find(|t| t.from == from).map(|t| t.at).unwrap();
    assert!((at(1) - 1.856).abs() < 0.005);
    assert!((at(2) - 2.227).abs() < 0.005);
    assert!((at(4) - 2.296).abs() < 0.005);
}

#[test]
fn phase_outputs_parse() {
    let args = ["phase", "--model", "gl", "--lma", "printed", "--c1", "0.5", "--c2", "1", "--delta", "2.3", "--keep", "400"];
    let d = doc(&run(&args));
    let Payload::Phase(p) = d.payload else { panic!("wrong payload") };
    assert_eq!(p.portrait.distinct, 4);
    let o = run(&[&args[..], &["--format", "csv"]].concat());
    let rows = read_orbit(o.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 400);
    assert_eq!(rows[0].step, 5001);
    assert_eq!(rows.iter().map(|r| r.point).collect::<Vec<_>>(), p.portrait.points);

    let svg = stdout(&run(&["phase", "--model", "gr", "--c1", "0.5", "--c2", "1", "--delta", "1", "--keep", "50", "--format", "svg"]));
    assert!(balanced_xml(&svg));
    assert_eq!(svg.matches("<circle").count(), 1);
}

#[test]
fn stability_sections_render() {
    let args = ["stability", "--model", "gr,gl,gb", "--plane", "c1-c2", "--delta", "1", "--p1-range", "0:10", "--p2-range", "0:10", "--resolution", "20"];
    let d = doc(&run(&args));
    let Payload::StabilitySection(s) = d.payload else { panic!("wrong payload") };
    let count = |m: usize| s.stable[m].iter().filter(|&&b| b).count();
    // nested regions: GR inside GL inside GB
    assert!(0 < count(0) && count(0) <= count(1) && count(1) <= count(2) && count(2) < 400);
    for k in 0..400 {
        assert!(!s.stable[0][k] || s.stable[1][k]);
        assert!(!s.stable[1][k] || s.stable[2][k]);
    }
    let svg = stdout(&run(&[&args[..], &["--format", "svg"]].concat()));
    assert!(balanced_xml(&svg) && svg.contains("stable for 3 of 3"));
}

#[test]
fn config_supplies_flags_and_the_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("eq.conf");
    std::fs::write(&cfg, "# equilibrium\ncommand = equilibrium\nc1 = 0.5\nc2 = 2\n").unwrap();
    let d = doc(&run(&["--config", cfg.to_str().unwrap()]));
    let Payload::Equilibrium(e) = d.payload else { panic!("wrong payload") };
    assert_eq!((e.c1, e.c2), (0.5, 2.0));
    let d = doc(&run(&["equilibrium", "--c1", "3", "--config", cfg.to_str().unwrap()]));
    let Payload::Equilibrium(e) = d.payload else { panic!("wrong payload") };
    assert_eq!((e.c1, e.c2), (3.0, 2.0));

    std::fs::write(&cfg, "command = equilibrium\nc1 = 0.5\nwidth = 3\n").unwrap();
    assert_eq!(code(&run(&["--config", cfg.to_str().unwrap(), "--c2", "1"])), 1);
    std::fs::write(&cfg, "c1 0.5\n").unwrap();
    assert_eq!(code(&run(&["equilibrium", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn shipped_configs_parse() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("conf") {
            continue;
        }
        let argv = vec!["duopoly".into(), "--config".into(), path.clone().into_os_string()];
        let expanded = duopoly_cli::config::expand_config(argv).unwrap();
        let (cli, _) = duopoly_cli::parse(expanded).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!cli.command.name().is_empty());
        n += 1;
    }
    assert!(n >= 9);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_worker_counts() {
    let args = [
        "scan2d", "--model", "gr", "--plane", "c1-delta", "--p1-range", "1:2", "--p2-range", "1:3", "--resolution", "8", "--x0", "0.1,0.1",
    ];
    let with = |workers: &str, fmt: &str| {
        bin().env("DUOPOLY_WORKERS", workers).env("SOURCE_DATE_EPOCH", "1700000000").args(args).args(["--format", fmt]).output().unwrap().stdout
    };
    for fmt in ["svg", "csv", "json"] {
        let a = with("1", fmt);
        assert!(!a.is_empty());
        assert_eq!(a, with("4", fmt), "{fmt}");
        assert_eq!(a, with("4", fmt), "{fmt}");
    }
    // without a fixed epoch only the metadata block may differ
    let mut a = doc(&run(&args));
    let b = doc(&run(&args));
    a.metadata = b.metadata.clone();
    assert_eq!(a, b);
}
