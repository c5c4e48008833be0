use std::fmt::Write as _;
use std::path::Path;

use cuntzwalk::fixtures;
use cuntzwalk::intertwiners::{dense_rows, BasisDocument, BasisElement};
use cuntzwalk::intertwiners::{
    span_distance, ITERATIVE_TOL, MAX_ITERATIONS, ORACLE_LIMIT, ORACLE_TOL,
};
use cuntzwalk::linalg::{max_abs_diff, CMatrix, C64};
use cuntzwalk::product::{irreducibility, Irreducibility, ReportDocument};
use cuntzwalk::{
    build_dilation, commutant_product, fixed_point_oracle, intertwiner_basis, CuntzReport,
    IntertwinerSpace, LabeledWalk, ProductGraph, SpectralSystem,
};
use serde::Serialize;

use crate::output::{self, clean, emit, json, Failure};
use crate::{Format, Options};

const DEFAULT_DEPTH: usize = 3;
const DEFAULT_NMAX: usize = 60;
const DILATION_TOL: f64 = 1e-10;
const SPAN_TOL: f64 = 1e-8;

#[derive(Serialize)]
struct WalkSummary {
    vertices: Vec<String>,
    labels: Vec<String>,
    irreducibility: Irreducibility,
}

impl WalkSummary {
    fn of(w: &LabeledWalk) -> Self {
        Self {
            vertices: w.vertices().to_vec(),
            labels: w.labels().to_vec(),
            irreducibility: irreducibility(w),
        }
    }
}

#[derive(Serialize)]
struct DecayRow {
    n: usize,
    max_first_passage: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    left: WalkSummary,
    right: WalkSummary,
    num_minimal_sets: usize,
    num_balanced: usize,
    minimal_sets: ReportDocument,
    first_passage: Vec<DecayRow>,
}

fn decay_table(
    pg: &ProductGraph,
    report: &cuntzwalk::MinimalSetReport,
    nmax: usize,
) -> Vec<DecayRow> {
    let mut worst = vec![0.0f64; nmax + 1];
    for node in 0..pg.num_nodes() {
        for (w, p) in worst.iter_mut().zip(pg.first_passage(report, node, nmax)) {
            *w = w.max(p);
        }
    }
    worst
        .into_iter()
        .enumerate()
        .map(|(n, max_first_passage)| DecayRow {
            n,
            max_first_passage,
        })
        .collect()
}

pub fn analyze(o: &Options, walk: &Path, walk2: Option<&Path>) -> Result<(), Failure> {
    let fmt = output::format(o, Format::Json, &[Format::Json, Format::Csv])?;
    let a = output::load_walk(walk)?;
    let b = match walk2 {
        Some(p) => output::load_walk(p)?,
        None => a.clone(),
    };
    let pg = ProductGraph::new(&a, &b)?;
    let report = pg.analyze();
    let decay = decay_table(&pg, &report, o.nmax.unwrap_or(DEFAULT_NMAX));
    let text = match fmt {
        Format::Csv => {
            let mut s = String::from("n,max_first_passage\n");
            for r in &decay {
                writeln!(s, "{},{}", r.n, r.max_first_passage).unwrap();
            }
            s
        }
        Format::Json => json(&AnalyzeReport {
            left: WalkSummary::of(&a),
            right: WalkSummary::of(&b),
            num_minimal_sets: report.sets.len(),
            num_balanced: report.num_balanced(),
            minimal_sets: report.to_document(&pg),
            first_passage: decay,
        }),
    };
    emit(o, &text)
}

#[derive(Serialize)]
struct DilateReport {
    vertices: Vec<String>,
    labels: Vec<String>,
    tolerance: f64,
    stored_dimension: usize,
    relations: CuntzReport,
    cyclicity_rank: usize,
    cyclic: bool,
}

#[derive(Serialize)]
struct IndexEntry {
    index: usize,
    vertex: String,
    word: Vec<usize>,
}

#[derive(Serialize)]
struct IndexMap {
    depth: usize,
    labels: Vec<String>,
    files: Vec<String>,
    rows: usize,
    columns: usize,
    basis: Vec<IndexEntry>,
}

pub fn dilate(o: &Options, walk: &Path, dump: Option<&Path>) -> Result<(), Failure> {
    output::format(o, Format::Json, &[Format::Json])?;
    let w = output::load_walk(walk)?;
    let depth = o.depth.unwrap_or(DEFAULT_DEPTH);
    let tol = o.tol.unwrap_or(DILATION_TOL);
    let d = build_dilation(&w, depth)?;
    let relations = d.verify_cuntz(tol);
    let rank = d.cyclicity_rank(depth)?;
    let space = d.space();
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
        let mut files = Vec::new();
        for l in 0..w.num_labels() {
            let name = format!("S_{l}.csv");
            let mut s = String::from("row,col,re,im\n");
            for (r, c, z) in d.triplets(l) {
                writeln!(s, "{r},{c},{},{}", clean(z.re), clean(z.im)).unwrap();
            }
            output::write_file(&dir.join(&name), &s)?;
            files.push(name);
        }
        let index = IndexMap {
            depth,
            labels: w.labels().to_vec(),
            files,
            rows: space.stored_dim(),
            columns: space.dim(depth),
            basis: (0..space.stored_dim())
                .map(|k| {
                    let (v, word) = space.basis(k);
                    IndexEntry {
                        index: k,
                        vertex: w.vertex_id(v).to_string(),
                        word: word.digits().to_vec(),
                    }
                })
                .collect(),
        };
        output::write_file(&dir.join("index.json"), &json(&index))?;
    }
    let cyclic = rank == relations.dimension;
    emit(
        o,
        &json(&DilateReport {
            vertices: w.vertices().to_vec(),
            labels: w.labels().to_vec(),
            tolerance: tol,
            stored_dimension: space.stored_dim(),
            relations,
            cyclicity_rank: rank,
            cyclic,
        }),
    )?;
    if !relations.passed {
        return Err(Failure::Verification(format!(
            "Cuntz relations fail at tolerance {tol:e}"
        )));
    }
    if !cyclic {
        return Err(Failure::Verification(format!(
            "cyclic rank {rank} of {}",
            relations.dimension
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleSummary {
    dimension: usize,
    span_distance: Option<f64>,
}

#[derive(Serialize)]
struct IntertwineReport {
    #[serde(flatten)]
    basis: BasisDocument,
    sigma_residual: f64,
    oracle: Option<OracleSummary>,
}

#[derive(Serialize)]
struct MismatchDump {
    structured: BasisDocument,
    oracle: BasisDocument,
}

fn oracle_fits(a: &LabeledWalk, b: &LabeledWalk) -> bool {
    a.num_vertices() * b.num_vertices() <= ORACLE_LIMIT
}

fn basis_csv(space: &IntertwinerSpace) -> String {
    let mut s = String::from("element,row,col,re,im\n");
    for (k, t) in space.basis.iter().enumerate() {
        for c in 0..t.ncols() {
            for r in 0..t.nrows() {
                let z = t[(r, c)];
                if z != C64::new(0.0, 0.0) {
                    writeln!(s, "{k},{r},{c},{},{}", clean(z.re), clean(z.im)).unwrap();
                }
            }
        }
    }
    s
}

pub fn intertwine(
    o: &Options,
    walk: &Path,
    walk2: &Path,
    inject_fault: bool,
) -> Result<(), Failure> {
    let fmt = output::format(o, Format::Json, &[Format::Json, Format::Csv])?;
    let a = output::load_walk(walk)?;
    let b = output::load_walk(walk2)?;
    let tol = o.tol.unwrap_or(SPAN_TOL);
    let mut space = intertwiner_basis(&a, &b)?;
    if inject_fault {
        if space.basis.pop().is_some() {
            space.representatives.pop();
        } else {
            space.basis.push(CMatrix::from_element(
                b.num_vertices(),
                a.num_vertices(),
                C64::new(1.0, 0.0),
            ));
            space.representatives.push((0, 0));
        }
    }
    let sigma_residual = space.sigma_residual()?;
    let mut oracle_summary = None;
    let mut mismatch = None;
    if oracle_fits(&a, &b) {
        let oracle = fixed_point_oracle(&a, &b, ORACLE_TOL, ORACLE_LIMIT)?;
        let dist = span_distance(&space.vectors(), &oracle.vectors);
        let agree = oracle.dimension() == space.dimension() && dist <= tol;
        if !agree {
            let oracle_doc = BasisDocument {
                source_vertices: a.vertices().to_vec(),
                target_vertices: b.vertices().to_vec(),
                dimension: oracle.dimension(),
                basis: oracle
                    .matrices()
                    .iter()
                    .map(|t| BasisElement {
                        representative: None,
                        entries: dense_rows(t),
                    })
                    .collect(),
            };
            mismatch = Some((
                MismatchDump {
                    structured: space.to_document(),
                    oracle: oracle_doc,
                },
                format!(
                    "structured dimension {} and oracle dimension {} (span distance {dist:e})",
                    space.dimension(),
                    oracle.dimension()
                ),
            ));
        }
        oracle_summary = Some(OracleSummary {
            dimension: oracle.dimension(),
            span_distance: dist.is_finite().then_some(dist),
        });
    }
    if let Some((dump, why)) = mismatch {
        emit(o, &json(&dump))?;
        return Err(Failure::Mismatch(format!("cross-check failed: {why}")));
    }
    let text = match fmt {
        Format::Csv => basis_csv(&space),
        Format::Json => json(&IntertwineReport {
            basis: space.to_document(),
            sigma_residual,
            oracle: oracle_summary,
        }),
    };
    emit(o, &text)?;
    if sigma_residual > tol {
        return Err(Failure::Verification(format!(
            "fixed-point residual {sigma_residual:e}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ProductEntry {
    left: usize,
    right: usize,
    coordinates: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct CommutantReport {
    #[serde(flatten)]
    basis: BasisDocument,
    products: Vec<ProductEntry>,
    max_product_residual: f64,
}

pub fn commutant(o: &Options, walk: &Path) -> Result<(), Failure> {
    output::format(o, Format::Json, &[Format::Json])?;
    let w = output::load_walk(walk)?;
    let tol = o.tol.unwrap_or(SPAN_TOL);
    let space = intertwiner_basis(&w, &w)?;
    let mut products = Vec::new();
    let mut worst: f64 = 0.0;
    for (x, tx) in space.basis.iter().enumerate() {
        for (y, ty) in space.basis.iter().enumerate() {
            let p = commutant_product(&w, tx, ty, ITERATIVE_TOL, MAX_ITERATIONS)?;
            // each basis element is 1 at its own representative and 0 at the others
            let coords: Vec<C64> = space
                .representatives
                .iter()
                .map(|&(i, ip)| p[(ip, i)])
                .collect();
            let mut rebuilt = CMatrix::zeros(p.nrows(), p.ncols());
            for (c, t) in coords.iter().zip(&space.basis) {
                rebuilt += t * *c;
            }
            worst = worst.max(max_abs_diff(&rebuilt, &p));
            products.push(ProductEntry {
                left: x,
                right: y,
                coordinates: coords.iter().map(|z| [z.re, z.im]).collect(),
            });
        }
    }
    emit(
        o,
        &json(&CommutantReport {
            basis: space.to_document(),
            products,
            max_product_residual: worst,
        }),
    )?;
    if worst > tol {
        return Err(Failure::Verification(format!(
            "product leaves the span: residual {worst:e}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyAllReport {
    passed: bool,
    checks: Vec<Check>,
}

pub fn verify_all(o: &Options) -> Result<(), Failure> {
    output::format(o, Format::Json, &[Format::Json])?;
    let depth = o.depth.unwrap_or(DEFAULT_DEPTH);
    let nmax = o.nmax.unwrap_or(DEFAULT_NMAX);
    let tol = o.tol.unwrap_or(DILATION_TOL);
    let mut checks = Vec::new();
    let mut mismatch = false;
    let all = fixtures::all();
    for (name, w) in &all {
        let d = build_dilation(w, depth)?;
        let r = d.verify_cuntz(tol);
        let rank = d.cyclicity_rank(depth)?;
        checks.push(Check {
            name: format!("dilation {name}"),
            passed: r.passed && rank == r.dimension,
            detail: format!(
                "depth {depth}: isometry {:.1e}, completeness {:.1e}, compression {:.1e}, rank {rank}/{}",
                r.isometry, r.completeness, r.compression, r.dimension
            ),
        });
        let pg = ProductGraph::new(w, w)?;
        let report = pg.analyze();
        let tail = decay_table(&pg, &report, nmax)[nmax].max_first_passage;
        checks.push(Check {
            name: format!("first passage {name}"),
            passed: tail < 1e-3,
            detail: format!("max P at n = {nmax}: {tail:.2e}"),
        });
    }
    for (a_name, a) in &all {
        for (b_name, b) in &all {
            if !a.same_alphabet(b) {
                continue;
            }
            let s = intertwiner_basis(a, b)?;
            let oracle = fixed_point_oracle(a, b, ORACLE_TOL, ORACLE_LIMIT)?;
            let dist = span_distance(&s.vectors(), &oracle.vectors);
            let ok = s.dimension() == oracle.dimension() && dist <= SPAN_TOL;
            mismatch |= !ok;
            checks.push(Check {
                name: format!("intertwiners {a_name} -> {b_name}"),
                passed: ok,
                detail: format!(
                    "dimension {} (oracle {}), span distance {dist:.1e}",
                    s.dimension(),
                    oracle.dimension()
                ),
            });
        }
    }
    for (name, sys, points) in [
        (
            "quarter cantor",
            SpectralSystem::uniform(4, vec![0, 2], vec![0, 1])?,
            vec![1.0 / 3.0, 0.7, 2.5],
        ),
        (
            "lebesgue",
            SpectralSystem::uniform(2, vec![0, 1], vec![0, 1])?,
            vec![0.25],
        ),
    ] {
        let sets = cuntzwalk::find_min_sets(&sys)?;
        let rows = cuntzwalk::verify_parseval(
            &sys,
            &sets,
            &points,
            10,
            cuntzwalk::spectral::DEFAULT_MU_TERMS,
        )?;
        let lowest = rows
            .iter()
            .map(|r| r.partial[10])
            .fold(f64::INFINITY, f64::min);
        let highest = rows
            .iter()
            .flat_map(|r| r.partial.iter().copied())
            .fold(0.0, f64::max);
        checks.push(Check {
            name: format!("parseval {name}"),
            passed: lowest >= 0.99 && highest <= 1.0 + 1e-6,
            detail: format!(
                "{} minimal sets, depth-10 sums in [{lowest:.6}, {highest:.8}]",
                sets.len()
            ),
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    emit(o, &json(&VerifyAllReport { passed, checks }))?;
    if mismatch {
        Err(Failure::Mismatch(
            "structured basis and oracle disagree".into(),
        ))
    } else if !passed {
        Err(Failure::Verification("some checks failed".into()))
    } else {
        Ok(())
    }
}
