//! Radial solutions of (-Δ)^m u = Q e^{2mu} on R^{2m}: shooting, barriers,
//! conformal volume, the logarithmic potential and the Q = 0 polynomial case.

pub mod barriers;
pub mod closed_form;
pub mod constants;
pub mod defaults;
pub mod error;
pub mod explorer;
pub mod ivp;
pub mod poly;
pub mod potential;
pub mod quad;
pub mod radial;
pub mod verify;
pub mod volume;

pub use constants::{Constants, Dim};
pub use error::{Error, Result};
pub use ivp::{integrate, IntegratorConfig, Status, Trajectory};
pub use radial::{RadialState, ShotSpec};
