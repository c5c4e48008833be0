use std::fmt::Write as _;
use std::path::Path;

use cuntzwalk::spectral::{
    format_point, AssumptionReport, ParsevalRow, SystemDocument, DEFAULT_FRAME_DEPTH,
};
use cuntzwalk::{
    export_min_set_walk, find_min_sets, frame_frequencies, verify_parseval, MinSet, SpectralSystem,
};
use serde::Serialize;

use crate::output::{self, clean, emit, json, Failure};
use crate::{Format, Options, SpectralCommand};

const ASSUMPTION_TOL: f64 = 1e-10;
const BESSEL_TOL: f64 = 1e-6;

pub fn run(o: &Options, cmd: SpectralCommand) -> Result<(), Failure> {
    match cmd {
        SpectralCommand::Check { system } => check(o, &system),
        SpectralCommand::Minsets { system } => minsets(o, &system),
        SpectralCommand::Walk { system, set } => walk(o, &system, set),
        SpectralCommand::Frame { system } => frame(o, &system),
        SpectralCommand::Parseval {
            system,
            points,
            terms,
        } => parseval(o, &system, &points, terms),
    }
}

#[derive(Serialize)]
struct CheckReport {
    system: SystemDocument,
    assumptions: AssumptionReport,
}

fn check(o: &Options, path: &Path) -> Result<(), Failure> {
    output::format(o, Format::Json, &[Format::Json])?;
    let sys = output::load_system(path)?;
    let assumptions = sys.check_assumptions(o.tol.unwrap_or(ASSUMPTION_TOL));
    emit(
        o,
        &json(&CheckReport {
            system: sys.to_document(),
            assumptions,
        }),
    )?;
    if !assumptions.passed {
        return Err(Failure::Verification("standing assumptions fail".into()));
    }
    Ok(())
}

/// Loads a system and refuses it with exit code 1 when the assumptions fail.
fn load_checked(o: &Options, path: &Path) -> Result<SpectralSystem, Failure> {
    let sys = output::load_system(path)?;
    let report = sys.check_assumptions(o.tol.unwrap_or(ASSUMPTION_TOL));
    if !report.passed {
        return Err(Failure::Verification(format!(
            "standing assumptions fail: {report:?}"
        )));
    }
    Ok(sys)
}

#[derive(Serialize)]
struct SetEntry {
    points: Vec<String>,
    anchor: String,
    /// `transitions[p][k]`: image of `points[p]` under label `L[k]`.
    transitions: Vec<Vec<Option<String>>>,
}

fn set_entry(m: &MinSet) -> SetEntry {
    SetEntry {
        points: m.points.iter().map(|&t| format_point(t)).collect(),
        anchor: format_point(m.anchor()),
        transitions: m
            .transitions
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t.map(|k| format_point(m.points[k])))
                    .collect()
            })
            .collect(),
    }
}

fn minsets(o: &Options, path: &Path) -> Result<(), Failure> {
    output::format(o, Format::Json, &[Format::Json])?;
    let sys = load_checked(o, path)?;
    let sets = find_min_sets(&sys)?;
    #[derive(Serialize)]
    struct Out {
        labels: Vec<i64>,
        sets: Vec<SetEntry>,
    }
    emit(
        o,
        &json(&Out {
            labels: sys.frequencies().to_vec(),
            sets: sets.iter().map(set_entry).collect(),
        }),
    )
}

fn walk(o: &Options, path: &Path, set: usize) -> Result<(), Failure> {
    output::format(o, Format::Json, &[Format::Json])?;
    let sys = load_checked(o, path)?;
    let sets = find_min_sets(&sys)?;
    let m = sets
        .get(set)
        .ok_or_else(|| Failure::input(format!("no minimal set {set}; there are {}", sets.len())))?;
    let mut text = export_min_set_walk(&sys, m)?.to_json();
    text.push('\n');
    emit(o, &text)
}

#[derive(Serialize)]
struct FrameEntry {
    min_set: usize,
    word: Vec<i64>,
    frequency: String,
    coefficient: [f64; 2],
}

fn frame(o: &Options, path: &Path) -> Result<(), Failure> {
    let fmt = output::format(o, Format::Csv, &[Format::Json, Format::Csv])?;
    let sys = load_checked(o, path)?;
    let sets = find_min_sets(&sys)?;
    let frame = frame_frequencies(&sys, &sets, o.depth.unwrap_or(DEFAULT_FRAME_DEPTH))?;
    let text = match fmt {
        Format::Csv => {
            let mut s = String::from("frequency,coeff_re,coeff_im\n");
            for e in &frame {
                writeln!(
                    s,
                    "{},{},{}",
                    format_point(e.frequency),
                    clean(e.coefficient.re),
                    clean(e.coefficient.im)
                )
                .unwrap();
            }
            s
        }
        Format::Json => json(
            &frame
                .iter()
                .map(|e| FrameEntry {
                    min_set: e.min_set,
                    word: e.word.iter().map(|&k| sys.frequencies()[k]).collect(),
                    frequency: format_point(e.frequency),
                    coefficient: [e.coefficient.re, e.coefficient.im],
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(o, &text)
}

fn parseval(o: &Options, path: &Path, points: &[f64], terms: usize) -> Result<(), Failure> {
    let fmt = output::format(o, Format::Csv, &[Format::Json, Format::Csv])?;
    if let Some(t) = points.iter().find(|t| !t.is_finite()) {
        return Err(Failure::input(format!("point {t} is not finite")));
    }
    let sys = load_checked(o, path)?;
    let sets = find_min_sets(&sys)?;
    let rows: Vec<ParsevalRow> = verify_parseval(
        &sys,
        &sets,
        points,
        o.depth.unwrap_or(DEFAULT_FRAME_DEPTH),
        terms,
    )?;
    let text = match fmt {
        Format::Csv => {
            let mut s = String::from("point,depth,partial_sum\n");
            for r in &rows {
                for (d, p) in r.partial.iter().enumerate() {
                    writeln!(s, "{},{d},{p}", r.point).unwrap();
                }
            }
            s
        }
        Format::Json => json(&rows),
    };
    emit(o, &text)?;
    let bound = 1.0 + o.tol.unwrap_or(BESSEL_TOL);
    if let Some(r) = rows.iter().find(|r| r.partial.iter().any(|&p| p > bound)) {
        return Err(Failure::Verification(format!(
            "partial sums at {} exceed 1",
            r.point
        )));
    }
    Ok(())
}
