use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qcurv::barriers::build_pair;
use qcurv::explorer::{
    classify_full, csv_header, csv_row, sweep_range, ShotOutcome, SweepPlan,
};
use qcurv::poly::{analyze_q0, non_coercive_example, parse, Integrability};
use qcurv::verify::{run_suite, VerifyOptions};
use qcurv::{defaults, IntegratorConfig, ShotSpec};
use serde::Serialize;

/// Points classified between two appends to the sweep files.
const SWEEP_CHUNK: usize = 32;

pub fn out_dir(flag: Option<PathBuf>, config: Option<PathBuf>) -> PathBuf {
    flag.or(config)
        .or_else(|| std::env::var_os(defaults::OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Value keeps object keys in a BTreeMap
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_sorted_json(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema_version: u32,
    outcome: &'a ShotOutcome,
    trajectory: qcurv::ivp::TrajectoryReport,
    barriers: Option<BarrierPair>,
}

#[derive(Serialize)]
struct BarrierPair {
    upper: qcurv::barriers::Barrier,
    lower: qcurv::barriers::Barrier,
}

pub fn solve(spec: &ShotSpec, cfg: &IntegratorConfig, dir: &Path) -> Result<ShotOutcome> {
    let run = classify_full(spec, cfg)?;
    let traj = &run.trajectory;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let barriers = build_pair(spec).ok().map(|(upper, lower)| BarrierPair { upper, lower });
    let report = SolveReport {
        schema_version: defaults::SCHEMA_VERSION,
        outcome: &run.outcome,
        trajectory: traj.report(),
        barriers,
    };
    write_json(&dir.join("solve.json"), &report)?;

    let m = spec.m();
    let mut w = csv::Writer::from_path(dir.join("solve_profile.csv"))?;
    let mut header = vec!["r".to_string(), "u".to_string(), "du".to_string()];
    for j in 1..m {
        header.push(format!("lap{j}_u"));
        header.push(format!("dlap{j}_u"));
    }
    if let Some(b) = &report.barriers {
        header.push(format!("w_plus_{:?}", b.upper.kind).to_lowercase());
        header.push(format!("w_minus_{:?}", b.lower.kind).to_lowercase());
    }
    w.write_record(&header)?;
    for (r, y) in traj.nodes.iter().zip(&traj.states) {
        let mut row: Vec<String> = std::iter::once(*r).chain(y.iter().copied()).map(|x| format!("{x}")).collect();
        if let Some(b) = &report.barriers {
            row.push(format!("{}", b.upper.eval(*r)));
            row.push(format!("{}", b.lower.eval(*r)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(run.outcome)
}

/// Complete rows already present in `csv_path`; trims a torn last line.
fn existing_rows(csv_path: &Path, header: &[String]) -> Result<usize> {
    let text = fs::read_to_string(csv_path)?;
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    if complete.len() != text.len() {
        fs::write(csv_path, complete)?;
    }
    let mut lines = complete.lines();
    match lines.next() {
        None => return Ok(0),
        Some(h) if h.split(',').map(str::to_string).collect::<Vec<_>>() == header => {}
        Some(_) => bail!("{} has a different header; refusing to resume", csv_path.display()),
    }
    Ok(lines.count())
}

fn truncate_lines(path: &Path, keep: usize) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let f = BufReader::new(File::open(path)?);
    let mut kept = String::new();
    for line in f.lines().take(keep) {
        let line = line?;
        kept.push_str(&line);
        kept.push('\n');
    }
    fs::write(path, kept)?;
    Ok(())
}

#[derive(Serialize)]
struct SweepLine<'a> {
    index: usize,
    outcome: &'a ShotOutcome,
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub computed: usize,
    pub labels: BTreeMap<String, usize>,
    /// Sampled α midpoints of FiniteVolume rows; evidence only.
    pub alpha_empirical: Option<(f64, f64)>,
    /// Fitted degree of p → count.
    pub degrees: BTreeMap<String, usize>,
}

pub fn sweep(plan: &SweepPlan, jobs: usize, resume: bool, dir: &Path) -> Result<SweepSummary> {
    plan.validate()?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_path = dir.join("sweep.csv");
    let jsonl_path = dir.join("sweep.jsonl");
    let header = csv_header(plan.m as usize);

    let start = if resume && csv_path.exists() {
        let done = existing_rows(&csv_path, &header)?;
        truncate_lines(&jsonl_path, done)?;
        done
    } else {
        let mut w = csv::Writer::from_path(&csv_path)?;
        w.write_record(&header)?;
        w.flush()?;
        File::create(&jsonl_path)?;
        0
    };

    let total = plan.len();
    let mut all = Vec::new();
    let mut k = start;
    while k < total {
        let end = (k + SWEEP_CHUNK).min(total);
        let chunk = sweep_range(plan, k..end, jobs)?;
        let file = OpenOptions::new().append(true).open(&csv_path)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        let mut jl = OpenOptions::new().append(true).open(&jsonl_path)?;
        for (i, o) in chunk.iter().enumerate() {
            w.write_record(csv_row(o))?;
            let line = serde_json::to_string(&serde_json::to_value(SweepLine { index: k + i, outcome: o })?)?;
            writeln!(jl, "{line}")?;
        }
        w.flush()?;
        all.extend(chunk);
        k = end;
    }

    let col = |name: &str| header.iter().position(|h| h == name).expect("known column");
    let (status, lo, hi, deg) = (col("status"), col("alpha_lo"), col("alpha_hi"), col("deg_p"));
    let mut labels = BTreeMap::new();
    let mut degrees = BTreeMap::new();
    let mut alpha_empirical: Option<(f64, f64)> = None;
    let mut rows = 0;
    for rec in csv::Reader::from_path(&csv_path)?.records() {
        let rec = rec?;
        rows += 1;
        *labels.entry(rec[status].to_string()).or_insert(0) += 1;
        if !rec[deg].is_empty() {
            *degrees.entry(rec[deg].to_string()).or_insert(0) += 1;
        }
        if let (Ok(l), Ok(h)) = (rec[lo].parse::<f64>(), rec[hi].parse::<f64>()) {
            let mid = 0.5 * (l + h);
            alpha_empirical = Some(match alpha_empirical {
                None => (mid, mid),
                Some((a, b)) => (a.min(mid), b.max(mid)),
            });
        }
    }
    Ok(SweepSummary { rows, computed: all.len(), labels, alpha_empirical, degrees })
}

pub fn verify(filter: Option<String>, perturb_gamma: f64) -> (Vec<String>, bool) {
    let res = run_suite(&VerifyOptions { filter, gamma_perturbation: perturb_gamma });
    let mut lines = Vec::new();
    let mut ok = true;
    for r in &res {
        ok &= r.pass;
        lines.push(format!(
            "{} {:<22} value={:.6e} tol={:.0e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.value,
            r.tol
        ));
    }
    let failed = res.iter().filter(|r| !r.pass).count();
    lines.push(format!("{} checks, {} failed", res.len(), failed));
    (lines, ok && !res.is_empty())
}

#[derive(Serialize)]
struct ExampleInfo {
    witness: Vec<f64>,
    closed_form_volume: f64,
    relative_error: Option<f64>,
}

pub fn polyzero(text: Option<&str>, n: Option<usize>, m: usize, example: bool) -> Result<String> {
    let (poly, info) = if example {
        let ex = non_coercive_example(m)?;
        (ex.poly.clone(), Some(ex))
    } else {
        let text = text.context("a polynomial or --example-noncoercive is required")?;
        let n = n.unwrap_or(2 * m);
        (parse(text, Some(n)).map_err(anyhow::Error::from)?, None)
    };
    let hint = info.as_ref().map(|e| e.witness.clone());
    let report = analyze_q0(&poly, m, hint.as_deref())?;
    let example = info.map(|ex| {
        let exact = ex.closed_form_volume();
        let relative_error = match report.integrability {
            Integrability::Integrable { value, .. } => Some((value - exact).abs() / exact),
            _ => None,
        };
        ExampleInfo { witness: ex.witness, closed_form_volume: exact, relative_error }
    });
    to_sorted_json(&serde_json::json!({
        "schema_version": defaults::SCHEMA_VERSION,
        "report": report,
        "example": example,
    }))
}
