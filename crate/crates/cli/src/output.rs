use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::{Format, Options};

/// A non-success outcome and its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Verification ran and a check failed (exit 1).
    Verification(String),
    /// Unreadable or invalid input, bad arguments (exit 2).
    Input(String),
    /// Two independent computations disagree (exit 3).
    Mismatch(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<cuntzwalk::Error> for Failure {
    fn from(e: cuntzwalk::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn load_walk(path: &Path) -> Result<cuntzwalk::LabeledWalk, Failure> {
    cuntzwalk::LabeledWalk::from_json(&read(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<cuntzwalk::SpectralSystem, Failure> {
    cuntzwalk::SpectralSystem::from_json(&read(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn format(opts: &Options, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = opts.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::input(format!(
            "format {f:?} is not available for this command"
        )))
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

pub fn emit(opts: &Options, text: &str) -> Result<(), Failure> {
    match &opts.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::input(e.to_string()))
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Maps `-0.0` to `0.0` for CSV output.
pub fn clean(x: f64) -> f64 {
    x + 0.0
}
