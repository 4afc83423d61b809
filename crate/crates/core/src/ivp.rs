//! Dormand–Prince 8(5,3) integration of the radial system with 7th-order
//! dense output.
//!
//! Step control follows Hairer's DOP853; the Butcher tableau lives at the end
//! of this file.

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::radial::{rhs_into, taylor_poly, taylor_start, EvenPoly, RadialState, ShotSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub r_max: f64,
    pub u_max: f64,
    pub h0: f64,
    pub max_steps: usize,
    /// Radius of the Taylor start.
    pub start_radius: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: defaults::RTOL,
            atol: defaults::ATOL,
            r_max: defaults::R_MAX,
            u_max: defaults::U_MAX,
            h0: defaults::H0,
            max_steps: defaults::MAX_STEPS,
            start_radius: defaults::START_RADIUS,
        }
    }
}

impl IntegratorConfig {
    pub fn with_r_max(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_tol(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidConfig(s.to_string()));
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return bad("rtol and atol must be positive");
        }
        if !(self.h0 > 0.0) || !(self.start_radius > 0.0) {
            return bad("h0 and start_radius must be positive");
        }
        if !(self.r_max > self.h0) || !(self.r_max > self.start_radius) || !self.r_max.is_finite() {
            return bad("r_max must be finite and exceed h0 and start_radius");
        }
        if self.u_max.is_nan() {
            return bad("u_max is NaN");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnderflowCause {
    StepSize,
    MaxSteps,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    ReachedRmax,
    BlowUp { r: f64 },
    StepUnderflow { r: f64, cause: UnderflowCause },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::ReachedRmax => "ReachedRmax",
            Status::BlowUp { .. } => "BlowUp",
            Status::StepUnderflow { .. } => "StepUnderflow",
        }
    }
}

/// Interpolation data of one accepted step [nodes[i], nodes[i+1]].
#[derive(Debug, Clone)]
struct DenseStep {
    h: f64,
    cont: [Vec<f64>; 8],
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub spec: ShotSpec,
    pub cfg: IntegratorConfig,
    pub nodes: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub status: Status,
    pub rejected: usize,
    dense: Vec<DenseStep>,
    taylor: Option<EvenPoly>,
}

/// JSON form of a trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub spec: ShotSpec,
    pub config: IntegratorConfig,
    pub status: Status,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub r: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn r_start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_end(&self) -> f64 {
        *self.nodes.last().expect("trajectory has nodes")
    }

    pub fn reached_rmax(&self) -> bool {
        self.status == Status::ReachedRmax
    }

    /// Dense-output state at r ∈ [r_start, r_end].
    pub fn eval(&self, r: f64) -> Result<RadialState> {
        let i = self.locate(r)?;
        let y = (0..self.spec.n()).map(|k| self.interp(i, r, k)).collect();
        Ok(RadialState { r, y })
    }

    /// One entry of the dense-output state, without allocating.
    pub fn component(&self, r: f64, k: usize) -> Result<f64> {
        let i = self.locate(r)?;
        Ok(self.interp(i, r, k))
    }

    /// Index i with nodes[i] <= r < nodes[i+1] (or the last node).
    fn locate(&self, r: f64) -> Result<usize> {
        let (lo, hi) = (self.r_start(), self.r_end());
        if !(r >= lo && r <= hi) {
            return Err(Error::OutOfCoverage { r, lo, hi });
        }
        Ok(self.nodes.partition_point(|&x| x <= r) - 1)
    }

    fn interp(&self, i: usize, r: f64, k: usize) -> f64 {
        if self.nodes[i] == r || i + 1 == self.nodes.len() {
            return self.states[i][k];
        }
        let d = &self.dense[i];
        let s = (r - self.nodes[i]) / d.h;
        let s1 = 1.0 - s;
        let c = &d.cont;
        let conpar = c[4][k] + s * (c[5][k] + s1 * (c[6][k] + s * c[7][k]));
        c[0][k] + s * (c[1][k] + s1 * (c[2][k] + s * (c[3][k] + s1 * conpar)))
    }

    /// u(r) on [0, r_end], using the Taylor polynomial below the start radius.
    pub fn u_at(&self, r: f64) -> Result<f64> {
        if r < self.r_start() {
            if let Some(p) = &self.taylor {
                if r >= 0.0 {
                    return Ok(p.eval(r));
                }
            }
        }
        self.component(r, 0)
    }

    /// Lower end of the interval on which `u_at` is defined.
    pub fn u_coverage_start(&self) -> f64 {
        if self.taylor.is_some() {
            0.0
        } else {
            self.r_start()
        }
    }

    /// Largest u over the stored nodes (and r = 0 when the Taylor start is used).
    pub fn max_u(&self) -> (f64, f64) {
        let mut best = (f64::NEG_INFINITY, f64::NAN);
        if self.taylor.is_some() {
            best = (self.spec.alpha[0], 0.0);
        }
        for (r, y) in self.nodes.iter().zip(&self.states) {
            if y[0] > best.0 {
                best = (y[0], *r);
            }
        }
        best
    }

    pub fn report(&self) -> TrajectoryReport {
        TrajectoryReport {
            spec: self.spec.clone(),
            config: self.cfg,
            status: self.status,
            accepted_steps: self.nodes.len() - 1,
            rejected_steps: self.rejected,
            r: self.nodes.clone(),
            y: self.states.clone(),
        }
    }
}

/// Shoot from the Taylor start at `cfg.start_radius` towards `cfg.r_max`.
pub fn integrate(spec: &ShotSpec, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let start = taylor_start(spec, cfg.start_radius)?;
    let mut t = integrate_from(spec, start, cfg)?;
    t.taylor = Some(taylor_poly(spec));
    Ok(t)
}

/// Integrate from an arbitrary state (e.g. a restart) to `cfg.r_max`.
pub fn integrate_from(spec: &ShotSpec, start: RadialState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if !(start.r > 0.0) {
        return Err(Error::NonPositiveRadius(start.r));
    }
    if start.y.len() != spec.n() {
        return Err(Error::InvalidConfig(format!(
            "state has {} entries, expected {}",
            start.y.len(),
            spec.n()
        )));
    }
    if !(cfg.r_max > start.r) {
        return Err(Error::InvalidConfig("r_max must exceed the start radius".into()));
    }
    let mut solver = Dop853::new(spec, cfg);
    let (status, nodes, states, dense, rejected) = solver.run(start);
    Ok(Trajectory {
        spec: spec.clone(),
        cfg: *cfg,
        nodes,
        states,
        status,
        rejected,
        dense,
        taylor: None,
    })
}

struct Dop853<'a> {
    m: usize,
    q: f64,
    cfg: &'a IntegratorConfig,
    k: [Vec<f64>; 10],
    y1: Vec<f64>,
}

const SAFE: f64 = 0.9;
const FACC1: f64 = 3.0; // 1/fac1, fac1 = 0.333
const FACC2: f64 = 1.0 / 6.0; // 1/fac2, fac2 = 6
const EXPO1: f64 = 1.0 / 8.0;

type RunOutput = (Status, Vec<f64>, Vec<Vec<f64>>, Vec<DenseStep>, usize);

impl<'a> Dop853<'a> {
    fn new(spec: &ShotSpec, cfg: &'a IntegratorConfig) -> Self {
        let n = spec.n();
        Dop853 {
            m: spec.m(),
            q: spec.signed_q(),
            cfg,
            k: std::array::from_fn(|_| vec![0.0; n]),
            y1: vec![0.0; n],
        }
    }

    fn f(&self, r: f64, y: &[f64], out: &mut [f64]) -> bool {
        rhs_into(self.m, self.q, r, y, out)
    }

    /// y1 = y + h Σ a_i k_{idx_i}; then out = f(r, y1).
    fn stage(&mut self, r: f64, y: &[f64], h: f64, terms: &[(f64, usize)], out: usize) -> bool {
        for i in 0..y.len() {
            let mut acc = 0.0;
            for &(a, j) in terms {
                acc += a * self.k[j][i];
            }
            self.y1[i] = y[i] + h * acc;
        }
        let mut tmp = std::mem::take(&mut self.k[out]);
        let ok = self.f(r, &self.y1, &mut tmp);
        self.k[out] = tmp;
        ok
    }

    fn run(&mut self, start: RadialState) -> RunOutput {
        let n = start.y.len();
        let cfg = self.cfg;
        let posneg = 1.0;
        let uround = f64::EPSILON;
        let mut x = start.r;
        let mut y = start.y;
        let mut nodes = vec![x];
        let mut states = vec![y.clone()];
        let mut dense = Vec::new();
        let mut nstep = 0usize;
        let mut rejected = 0usize;
        let mut reject = false;
        let mut last = false;
        let mut u_peak = y[0];

        if y[0] > cfg.u_max {
            return (Status::BlowUp { r: x }, nodes, states, dense, 0);
        }
        {
            let mut k0 = std::mem::take(&mut self.k[0]);
            let ok = self.f(x, &y, &mut k0);
            self.k[0] = k0;
            if !ok {
                return (Status::BlowUp { r: x }, nodes, states, dense, 0);
            }
        }
        let mut h = cfg.h0.min(cfg.r_max - x);
        let mut ynew = vec![0.0; n];
        let mut cont: [Vec<f64>; 8] = std::array::from_fn(|_| vec![0.0; n]);

        loop {
            if nstep >= cfg.max_steps {
                return (
                    Status::StepUnderflow { r: x, cause: UnderflowCause::MaxSteps },
                    nodes,
                    states,
                    dense,
                    rejected,
                );
            }
            if 0.1 * h.abs() <= (x.abs() * uround).abs() || h.abs() < 16.0 * uround * x.abs() {
                let rising = y[1] > 0.0 && y[0] >= u_peak;
                let status = if rising {
                    Status::BlowUp { r: x }
                } else {
                    Status::StepUnderflow { r: x, cause: UnderflowCause::StepSize }
                };
                return (status, nodes, states, dense, rejected);
            }
            if (x + 1.01 * h - cfg.r_max) * posneg > 0.0 {
                h = cfg.r_max - x;
                last = true;
            }
            nstep += 1;

            let ok = self.stages(x, &y, h);
            let mut err = f64::INFINITY;
            if ok {
                // 8th-order solution into ynew, k[3] holds the weighted sum
                for i in 0..n {
                    let s = B1 * self.k[0][i]
                        + B6 * self.k[5][i]
                        + B7 * self.k[6][i]
                        + B8 * self.k[7][i]
                        + B9 * self.k[8][i]
                        + B10 * self.k[9][i]
                        + B11 * self.k[1][i]
                        + B12 * self.k[2][i];
                    self.k[3][i] = s;
                    ynew[i] = y[i] + h * s;
                }
                if ynew.iter().all(|v| v.is_finite()) {
                    let mut e1 = 0.0;
                    let mut e2 = 0.0;
                    for i in 0..n {
                        let sk = cfg.atol + cfg.rtol * y[i].abs().max(ynew[i].abs());
                        let erri = self.k[3][i]
                            - BHH1 * self.k[0][i]
                            - BHH2 * self.k[8][i]
                            - BHH3 * self.k[2][i];
                        e2 += (erri / sk).powi(2);
                        let erri = ER1 * self.k[0][i]
                            + ER6 * self.k[5][i]
                            + ER7 * self.k[6][i]
                            + ER8 * self.k[7][i]
                            + ER9 * self.k[8][i]
                            + ER10 * self.k[9][i]
                            + ER11 * self.k[1][i]
                            + ER12 * self.k[2][i];
                        e1 += (erri / sk).powi(2);
                    }
                    let mut deno = e1 + 0.01 * e2;
                    if deno <= 0.0 {
                        deno = 1.0;
                    }
                    err = h.abs() * e1 * (1.0 / (n as f64 * deno)).sqrt();
                }
            }

            if !err.is_finite() {
                // non-finite stage: shrink hard and retry
                rejected += 1;
                reject = true;
                last = false;
                h /= 4.0;
                continue;
            }

            let fac11 = err.powf(EXPO1);
            let fac = (fac11 / SAFE).clamp(FACC2, FACC1);
            let mut hnew = h / fac;

            if err <= 1.0 {
                // accepted: new derivative at x+h
                let xph = x + h;
                let mut knew = vec![0.0; n];
                if !self.f(xph, &ynew, &mut knew) {
                    rejected += 1;
                    reject = true;
                    last = false;
                    h /= 4.0;
                    continue;
                }
                // dense output
                for i in 0..n {
                    let ydiff = ynew[i] - y[i];
                    let bspl = h * self.k[0][i] - ydiff;
                    cont[0][i] = y[i];
                    cont[1][i] = ydiff;
                    cont[2][i] = bspl;
                    cont[3][i] = ydiff - h * knew[i] - bspl;
                    let k = &self.k;
                    cont[4][i] = D41 * k[0][i]
                        + D46 * k[5][i]
                        + D47 * k[6][i]
                        + D48 * k[7][i]
                        + D49 * k[8][i]
                        + D410 * k[9][i]
                        + D411 * k[1][i]
                        + D412 * k[2][i];
                    cont[5][i] = D51 * k[0][i]
                        + D56 * k[5][i]
                        + D57 * k[6][i]
                        + D58 * k[7][i]
                        + D59 * k[8][i]
                        + D510 * k[9][i]
                        + D511 * k[1][i]
                        + D512 * k[2][i];
                    cont[6][i] = D61 * k[0][i]
                        + D66 * k[5][i]
                        + D67 * k[6][i]
                        + D68 * k[7][i]
                        + D69 * k[8][i]
                        + D610 * k[9][i]
                        + D611 * k[1][i]
                        + D612 * k[2][i];
                    cont[7][i] = D71 * k[0][i]
                        + D76 * k[5][i]
                        + D77 * k[6][i]
                        + D78 * k[7][i]
                        + D79 * k[8][i]
                        + D710 * k[9][i]
                        + D711 * k[1][i]
                        + D712 * k[2][i];
                }
                self.k[3].copy_from_slice(&knew);
                let extra_ok = self.dense_stages(x, &y, h);
                if !extra_ok {
                    rejected += 1;
                    reject = true;
                    last = false;
                    h /= 4.0;
                    continue;
                }
                for i in 0..n {
                    let k = &self.k;
                    cont[4][i] = h * (cont[4][i] + D413 * k[3][i] + D414 * k[9][i] + D415 * k[1][i] + D416 * k[2][i]);
                    cont[5][i] = h * (cont[5][i] + D513 * k[3][i] + D514 * k[9][i] + D515 * k[1][i] + D516 * k[2][i]);
                    cont[6][i] = h * (cont[6][i] + D613 * k[3][i] + D614 * k[9][i] + D615 * k[1][i] + D616 * k[2][i]);
                    cont[7][i] = h * (cont[7][i] + D713 * k[3][i] + D714 * k[9][i] + D715 * k[1][i] + D716 * k[2][i]);
                }

                self.k[0].copy_from_slice(&knew);
                std::mem::swap(&mut y, &mut ynew);
                x = if last { cfg.r_max } else { xph };
                nodes.push(x);
                states.push(y.clone());
                dense.push(DenseStep { h, cont: cont.clone() });
                u_peak = u_peak.max(y[0]);

                if y[0] > cfg.u_max {
                    return (Status::BlowUp { r: x }, nodes, states, dense, rejected);
                }
                if last {
                    return (Status::ReachedRmax, nodes, states, dense, rejected);
                }
                if reject {
                    hnew = posneg * hnew.abs().min(h.abs());
                }
                reject = false;
                h = hnew;
            } else {
                hnew = h / FACC1.min(fac11 / SAFE);
                reject = true;
                last = false;
                rejected += 1;
                h = hnew;
            }
        }
    }

    /// Stages 2..12 of the step from (x, y) with size h; k[0] holds f(x, y).
    fn stages(&mut self, x: f64, y: &[f64], h: f64) -> bool {
        self.stage(x + C2 * h, y, h, &[(A21, 0)], 1)
            && self.stage(x + C3 * h, y, h, &[(A31, 0), (A32, 1)], 2)
            && self.stage(x + C4 * h, y, h, &[(A41, 0), (A43, 2)], 3)
            && self.stage(x + C5 * h, y, h, &[(A51, 0), (A53, 2), (A54, 3)], 4)
            && self.stage(x + C6 * h, y, h, &[(A61, 0), (A64, 3), (A65, 4)], 5)
            && self.stage(x + C7 * h, y, h, &[(A71, 0), (A74, 3), (A75, 4), (A76, 5)], 6)
            && self.stage(x + C8 * h, y, h, &[(A81, 0), (A84, 3), (A85, 4), (A86, 5), (A87, 6)], 7)
            && self.stage(
                x + C9 * h,
                y,
                h,
                &[(A91, 0), (A94, 3), (A95, 4), (A96, 5), (A97, 6), (A98, 7)],
                8,
            )
            && self.stage(
                x + C10 * h,
                y,
                h,
                &[(A101, 0), (A104, 3), (A105, 4), (A106, 5), (A107, 6), (A108, 7), (A109, 8)],
                9,
            )
            && self.stage(
                x + C11 * h,
                y,
                h,
                &[
                    (A111, 0),
                    (A114, 3),
                    (A115, 4),
                    (A116, 5),
                    (A117, 6),
                    (A118, 7),
                    (A119, 8),
                    (A1110, 9),
                ],
                1,
            )
            && self.stage(
                x + h,
                y,
                h,
                &[
                    (A121, 0),
                    (A124, 3),
                    (A125, 4),
                    (A126, 5),
                    (A127, 6),
                    (A128, 7),
                    (A129, 8),
                    (A1210, 9),
                    (A1211, 1),
                ],
                2,
            )
    }

    /// The three extra stages of the dense output; k[3] holds f(x+h, y_new).
    fn dense_stages(&mut self, x: f64, y: &[f64], h: f64) -> bool {
        self.stage(
            x + C14 * h,
            y,
            h,
            &[
                (A141, 0),
                (A147, 6),
                (A148, 7),
                (A149, 8),
                (A1410, 9),
                (A1411, 1),
                (A1412, 2),
                (A1413, 3),
            ],
            9,
        ) && self.stage(
            x + C15 * h,
            y,
            h,
            &[
                (A151, 0),
                (A156, 5),
                (A157, 6),
                (A158, 7),
                (A1511, 1),
                (A1512, 2),
                (A1513, 3),
                (A1514, 9),
            ],
            1,
        ) && {
            self.stage(
                x + C16 * h,
                y,
                h,
                &[
                    (A161, 0),
                    (A166, 5),
                    (A167, 6),
                    (A168, 7),
                    (A169, 8),
                    (A1613, 3),
                    (A1614, 9),
                    (A1615, 1),
                ],
                2,
            )
        }
    }
}


const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;
const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;
const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;
const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;
const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;
const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;