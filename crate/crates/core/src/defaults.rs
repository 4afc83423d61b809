//! Every default used by the library and the CLI, in one place.
//!
//! | Quantity                               | Default   | Used by                    |
//! |----------------------------------------|-----------|----------------------------|
//! | Taylor start radius                    | 1e-3      | `radial::taylor_start`     |
//! | Integrator relative tolerance          | 1e-10     | `ivp::IntegratorConfig`    |
//! | Integrator absolute tolerance          | 1e-12     | `ivp::IntegratorConfig`    |
//! | Integration end radius                 | 50        | `ivp::IntegratorConfig`    |
//! | Upward blow-up threshold on `u`        | 50        | `ivp::IntegratorConfig`    |
//! | Initial step                           | 1e-3      | `ivp::IntegratorConfig`    |
//! | Maximum accepted+rejected steps        | 10^7      | `ivp::IntegratorConfig`    |
//! | Sandwich margin tolerance              | 1e-8      | `barriers::verify_sandwich`|
//! | Barrier safety factor                  | 2         | `barriers`                 |
//! | Barrier certification grid             | [0, 1e3]  | `barriers`                 |
//! | Volume quadrature relative tolerance   | 1e-10     | `volume`                   |
//! | Convergence: last doubling increment   | 1e-6 · α  | `volume::divergence_check` |
//! | Decomposition window                   | [r/10, r] | `potential::decompose_p`   |
//! | Leading-form samples per variable      | 10^4      | `poly::leading_form_sign`  |

pub const START_RADIUS: f64 = 1e-3;
pub const RTOL: f64 = 1e-10;
pub const ATOL: f64 = 1e-12;
pub const R_MAX: f64 = 50.0;
pub const U_MAX: f64 = 50.0;
pub const H0: f64 = 1e-3;
pub const MAX_STEPS: usize = 10_000_000;

pub const SANDWICH_TOL: f64 = 1e-8;
pub const BARRIER_SAFETY: f64 = 2.0;
pub const BARRIER_GRID_MAX: f64 = 1e3;
pub const BARRIER_GRID_POINTS: usize = 4001;

pub const VOLUME_RTOL: f64 = 1e-10;
pub const CONVERGENCE_TOL: f64 = 1e-6;

pub const DECOMPOSE_WINDOW_FRACTION: f64 = 0.1;
pub const DECOMPOSE_SAMPLES: usize = 64;
pub const LIMIT_SAMPLES: usize = 64;

pub const LEADING_FORM_SAMPLES_PER_VAR: usize = 10_000;
pub const LEADING_FORM_TOL: f64 = 1e-9;

/// Environment variable naming the default CLI output directory.
pub const OUT_DIR_ENV: &str = "QCURV_OUT_DIR";

/// Version stamped into every JSON/CSV artifact.
pub const SCHEMA_VERSION: u32 = 1;
