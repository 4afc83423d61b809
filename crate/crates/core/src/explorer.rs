//! Classification of single shots and deterministic parameter sweeps.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barriers::{build_pair, verify_sandwich, SandwichReport};
use crate::constants::Dim;
use crate::defaults;
use crate::error::{Error, Result};
use crate::ivp::{integrate, IntegratorConfig, Status, Trajectory};
use crate::potential::{
    decompose_p, geometric_grid, laplacian_limits, slope_estimate, Decomposition, LaplacianLimits,
    Potential, SlopeEstimate,
};
use crate::radial::ShotSpec;
use crate::volume::{
    alpha_total, default_grid, divergence_check, tail_bound, AlphaTotal, RadialDensity, TailBound, Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    FiniteVolume,
    InfiniteVolume,
    BlowUp,
    Inconclusive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::FiniteVolume => "FiniteVolume",
            Label::InfiniteVolume => "InfiniteVolume",
            Label::BlowUp => "BlowUp",
            Label::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotOutcome {
    pub spec: ShotSpec,
    pub label: Label,
    pub status: Status,
    pub r_end: f64,
    /// Present only for FiniteVolume.
    pub alpha: Option<AlphaTotal>,
    /// Whether the α interval rests on a barrier-certified tail.
    pub certified: bool,
    pub verdict: Option<Verdict>,
    pub sandwich: Option<SandwichReport>,
    pub limits: Option<LaplacianLimits>,
    pub decomposition: Option<Decomposition>,
    pub slope: Option<SlopeEstimate>,
    /// (max u, radius where it occurs).
    pub max_u: (f64, f64),
    pub error: Option<String>,
}

impl ShotOutcome {
    /// (alpha_lo, alpha_hi) for FiniteVolume rows.
    pub fn alpha_bounds(&self) -> Option<(f64, f64)> {
        self.alpha.map(|a| a.bounds())
    }

    fn failed(spec: ShotSpec, err: &Error) -> Self {
        ShotOutcome {
            spec,
            label: Label::Inconclusive,
            status: Status::StepUnderflow { r: 0.0, cause: crate::ivp::UnderflowCause::StepSize },
            r_end: 0.0,
            alpha: None,
            certified: false,
            verdict: None,
            sandwich: None,
            limits: None,
            decomposition: None,
            slope: None,
            max_u: (f64::NAN, f64::NAN),
            error: Some(err.to_string()),
        }
    }
}

/// Everything a single classification produced, including the trajectory.
pub struct Classified {
    pub outcome: ShotOutcome,
    pub trajectory: Trajectory,
}

/// integrate → barriers → volume → potential, and a label.
///
/// FiniteVolume needs either a barrier-certified tail or a converged Cauchy
/// test; InfiniteVolume needs increments that do not decay; a run that stops
/// early with decaying increments is BlowUp; anything else is Inconclusive.
pub fn classify(spec: &ShotSpec, cfg: &IntegratorConfig) -> Result<ShotOutcome> {
    Ok(classify_full(spec, cfg)?.outcome)
}

pub fn classify_full(spec: &ShotSpec, cfg: &IntegratorConfig) -> Result<Classified> {
    let traj = integrate(spec, cfg)?;
    let outcome = assess(&traj)?;
    Ok(Classified { outcome, trajectory: traj })
}

fn assess(traj: &Trajectory) -> Result<ShotOutcome> {
    let spec = traj.spec.clone();
    let dens = RadialDensity::from_trajectory(traj);
    let r_end = traj.r_end();
    let mut out = ShotOutcome {
        spec: spec.clone(),
        label: Label::Inconclusive,
        status: traj.status,
        r_end,
        alpha: None,
        certified: false,
        verdict: None,
        sandwich: None,
        limits: None,
        decomposition: None,
        slope: None,
        max_u: traj.max_u(),
        error: None,
    };

    let verdict = divergence_check(&dens, &default_grid(traj), defaults::CONVERGENCE_TOL)?;
    out.verdict = Some(verdict);

    if !traj.reached_rmax() {
        out.label = match (traj.status, verdict) {
            (_, Verdict::Diverging { increments_decaying: false, .. }) => Label::InfiniteVolume,
            (Status::BlowUp { .. }, _) => Label::BlowUp,
            _ => Label::Inconclusive,
        };
        return Ok(out);
    }

    let mut certificate = None;
    if let Ok((upper, lower)) = build_pair(&spec) {
        let sw = verify_sandwich(traj, &upper, &lower, defaults::SANDWICH_TOL);
        if sw.pass {
            certificate = upper.quadratic_bound(r_end);
        }
        out.sandwich = Some(sw);
    }

    out.label = match (certificate, verdict) {
        (Some(_), _) | (None, Verdict::ConvergedTo { .. }) => Label::FiniteVolume,
        (None, Verdict::Diverging { increments_decaying: false, .. }) => Label::InfiniteVolume,
        (None, Verdict::Diverging { .. }) => Label::Inconclusive,
    };
    out.limits = laplacian_limits(traj).ok();
    if out.label != Label::FiniteVolume {
        return Ok(out);
    }

    let total = alpha_total(&dens, r_end, certificate)?;
    out.certified = matches!(total, AlphaTotal::Interval { .. });
    out.alpha = Some(match (total, verdict) {
        (AlphaTotal::Unknown { lo, r }, Verdict::ConvergedTo { last_increment, .. }) => {
            // uncertified: the last doubling increment stands in for the tail
            AlphaTotal::Interval { lo, hi: lo + last_increment.max(0.0), r }
        }
        (t, _) => t,
    });

    let tail_mass = certificate.and_then(|(d, c)| match tail_bound(&dens, r_end, d, c) {
        TailBound::Bound { value } => Some(value / dens.ratio()),
        TailBound::Unknown => None,
    });
    let pot = Potential::new(&dens, tail_mass);
    let r1 = (r_end * defaults::DECOMPOSE_WINDOW_FRACTION).max(traj.r_start());
    let samples = pot.sample_geometric(r1, r_end, defaults::DECOMPOSE_SAMPLES)?;
    out.decomposition = decompose_p(traj, &samples, true).ok();
    let slope_samples = pot.sample_geometric((r_end / 64.0).max(traj.r_start()), r_end, 32)?;
    out.slope = slope_estimate(&slope_samples).ok();
    Ok(out)
}

/// Values taken by one α_j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisGrid {
    List(Vec<f64>),
    Range { start: f64, end: f64, count: usize },
}

impl AxisGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AxisGrid::List(v) => v.clone(),
            AxisGrid::Range { start, end, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                _ => (0..*count)
                    .map(|k| start + (end - start) * k as f64 / (*count - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub m: u32,
    #[serde(rename = "Q")]
    pub q: f64,
    /// One grid per α_j, j = 0..m-1.
    pub alpha: Vec<AxisGrid>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<Dim> {
        let dim = Dim::new(self.m)?;
        if self.alpha.len() != dim.m() {
            return Err(Error::AlphaLength { expected: dim.m(), got: self.alpha.len() });
        }
        if self.alpha.iter().any(|g| g.values().is_empty()) {
            return Err(Error::EmptyGrid("every alpha axis needs at least one value".into()));
        }
        self.integrator.validate()?;
        Ok(dim)
    }

    pub fn len(&self) -> usize {
        self.alpha.iter().map(|g| g.values().len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `index`, last axis fastest.
    pub fn point(&self, index: usize) -> Result<ShotSpec> {
        let dim = self.validate()?;
        let axes: Vec<Vec<f64>> = self.alpha.iter().map(|g| g.values()).collect();
        let mut rem = index;
        let mut alpha = vec![0.0; axes.len()];
        for (j, ax) in axes.iter().enumerate().rev() {
            alpha[j] = ax[rem % ax.len()];
            rem /= ax.len();
        }
        if rem != 0 {
            return Err(Error::Precondition(format!("grid index {index} out of range")));
        }
        ShotSpec::new(dim, self.q, alpha)
    }
}

/// Classify every grid point with index in `range`, on `jobs` worker threads.
///
/// Failures are recorded per point; results come back in index order.
pub fn sweep_range(plan: &SweepPlan, range: std::ops::Range<usize>, jobs: usize) -> Result<Vec<ShotOutcome>> {
    plan.validate()?;
    let total = plan.len();
    let range = range.start.min(total)..range.end.min(total);
    let run = |i: usize| -> ShotOutcome {
        let spec = match plan.point(i) {
            Ok(s) => s,
            Err(e) => {
                let dim = Dim::new(plan.m).expect("validated");
                return ShotOutcome::failed(
                    ShotSpec { dim, q: plan.q, alpha: vec![f64::NAN; dim.m()] },
                    &e,
                );
            }
        };
        classify(&spec, &plan.integrator).unwrap_or_else(|e| ShotOutcome::failed(spec, &e))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(pool.install(|| range.into_par_iter().map(run).collect()))
}

pub fn sweep(plan: &SweepPlan, jobs: usize) -> Result<Vec<ShotOutcome>> {
    sweep_range(plan, 0..plan.len(), jobs)
}

/// Column names of the sweep CSV for a given m.
pub fn csv_header(m: usize) -> Vec<String> {
    let mut h = vec!["m".to_string(), "Q".to_string()];
    h.extend((0..m).map(|j| format!("alpha_{j}")));
    for c in ["status", "alpha_lo", "alpha_hi", "j", "a", "deg_p", "p_lead", "max_u", "r_max"] {
        h.push(c.to_string());
    }
    h
}

fn num(x: f64) -> String {
    // `{}` on f64 is locale-free and round-trips
    format!("{x}")
}

/// One CSV row; missing values are empty cells.
pub fn csv_row(o: &ShotOutcome) -> Vec<String> {
    let mut row = vec![o.spec.dim.m().to_string(), num(o.spec.q)];
    row.extend(o.spec.alpha.iter().map(|&a| num(a)));
    row.push(o.label.as_str().to_string());
    let (lo, hi) = o
        .alpha_bounds()
        .map(|(l, h)| (num(l), num(h)))
        .unwrap_or_default();
    row.push(lo);
    row.push(hi);
    let lim = o.limits.as_ref();
    row.push(lim.and_then(|l| l.j).map(|j| j.to_string()).unwrap_or_default());
    row.push(lim.and_then(|l| l.a).map(num).unwrap_or_default());
    let dec = o.decomposition.as_ref();
    row.push(dec.map(|d| d.degree.to_string()).unwrap_or_default());
    row.push(dec.map(|d| num(d.leading)).unwrap_or_default());
    row.push(num(o.max_u.0));
    row.push(num(o.r_end));
    row
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRange {
    /// Always "empirical": this is sampled evidence only.
    pub kind: &'static str,
    pub m: usize,
    #[serde(rename = "Q")]
    pub q: f64,
    pub samples: usize,
    pub finite: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    /// (lo, hi, count) bins over [min, max].
    pub histogram: Vec<(f64, f64, usize)>,
}

/// Summary of the α values reached by the FiniteVolume outcomes (midpoints).
pub fn alpha_range(outcomes: &[ShotOutcome], bins: usize) -> AlphaRange {
    let vals: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.label == Label::FiniteVolume)
        .filter_map(|o| o.alpha.map(|a| a.midpoint()))
        .collect();
    let (m, q) = outcomes.first().map(|o| (o.spec.m(), o.spec.q)).unwrap_or((0, f64::NAN));
    let min = vals.iter().copied().reduce(f64::min);
    let max = vals.iter().copied().reduce(f64::max);
    let histogram = match (min, max) {
        (Some(lo), Some(hi)) if hi > lo && bins > 1 => {
            let w = (hi - lo) / bins as f64;
            let mut counts = vec![0usize; bins];
            for v in &vals {
                let k = (((v - lo) / w) as usize).min(bins - 1);
                counts[k] += 1;
            }
            counts
                .into_iter()
                .enumerate()
                .map(|(k, c)| (lo + w * k as f64, lo + w * (k + 1) as f64, c))
                .collect()
        }
        (Some(lo), Some(hi)) => vec![(lo, hi, vals.len())],
        _ => Vec::new(),
    };
    AlphaRange { kind: "empirical", m, q, samples: outcomes.len(), finite: vals.len(), min, max, histogram }
}

/// Sweep `plan` and summarise the attainable α values.
pub fn alpha_range_sweep(plan: &SweepPlan, jobs: usize, bins: usize) -> Result<AlphaRange> {
    if plan.q == 0.0 {
        return Err(Error::Precondition("alpha range needs Q ≠ 0".into()));
    }
    Ok(alpha_range(&sweep(plan, jobs)?, bins))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    /// even degree → count
    pub histogram: BTreeMap<usize, usize>,
    /// Indices of outcomes whose fitted degree is 2m - 2.
    pub top_degree: Vec<usize>,
}

pub fn degree_report(outcomes: &[ShotOutcome]) -> DegreeReport {
    let mut histogram = BTreeMap::new();
    let mut top_degree = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        if o.label != Label::FiniteVolume {
            continue;
        }
        if let Some(d) = &o.decomposition {
            *histogram.entry(d.degree).or_insert(0) += 1;
            if d.degree + 2 == 2 * o.spec.m() {
                top_degree.push(i);
            }
        }
    }
    DegreeReport { histogram, top_degree }
}

/// Radii where the fitted slope of v is taken; exposed for reports.
pub fn slope_grid(r_start: f64, r_end: f64) -> Vec<f64> {
    geometric_grid((r_end / 64.0).max(r_start), r_end, 32)
}
