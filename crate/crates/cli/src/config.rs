//! `key = value` configuration files. Each line becomes `--key=value` and is spliced in
//! front of the command-line flags, so later (command-line) occurrences win.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

/// Parsed configuration: an optional `command` entry plus flag arguments in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub command: Option<String>,
    pub flags: Vec<String>,
}

pub fn parse_config(text: &str) -> Result<Config, String> {
    let mut cfg = Config::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value, got '{line}'", n + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key.starts_with('-') {
            return Err(format!("line {}: bad key '{key}'", n + 1));
        }
        match key.as_str() {
            "command" => cfg.command = Some(value.to_string()),
            "config" => return Err(format!("line {}: configs cannot include other configs", n + 1)),
            _ => cfg.flags.push(format!("--{key}={value}")),
        }
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Removes `--config PATH` / `--config=PATH` from `argv` and splices the file's flags in
/// right after the subcommand name.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let p = it.next().ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            path = Some(p);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let cfg = load_config(Path::new(&path))?;
    // first token after the program name that is not a flag
    let sub = rest.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|i| i + 1);
    let at = match (sub, &cfg.command) {
        (Some(i), _) => i + 1,
        (None, Some(cmd)) => {
            let i = rest.len().min(1);
            rest.insert(i, OsString::from(cmd));
            i + 1
        }
        (None, None) => return Err(CliError::Usage("no subcommand given on the command line or in the config".into())),
    };
    let tail = rest.split_off(at);
    rest.extend(cfg.flags.into_iter().map(OsString::from));
    rest.extend(tail);
    Ok(rest)
}
