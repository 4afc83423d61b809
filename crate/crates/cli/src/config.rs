use std::fmt;
use std::path::{Path, PathBuf};

use qcurv::explorer::{AxisGrid, SweepPlan};
use qcurv::{defaults, Dim, IntegratorConfig, ShotSpec};
use serde::Deserialize;
use serde_path_to_error::{Path as SerdePath, Segment};

/// Versioned run configuration, TOML or JSON.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub shot: Option<ShotSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotSection {
    pub m: u32,
    #[serde(rename = "Q")]
    pub q: f64,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub m: u32,
    #[serde(rename = "Q")]
    pub q: f64,
    pub alpha: Vec<AxisGrid>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

/// A config problem located by a JSON pointer.
#[derive(Debug)]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "invalid config at {at}: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

pub fn json_pointer(path: &SerdePath) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape(variant))),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn at(pointer: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError { pointer: pointer.to_string(), message: message.to_string() }
}

impl RunConfig {
    pub fn from_value(value: serde_json::Value) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let pointer = json_pointer(e.path());
            at(&pointer, e.into_inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_str(text: &str, json: bool) -> Result<Self, ConfigError> {
        let value: serde_json::Value = if json {
            serde_json::from_str(text).map_err(|e| at("", e))?
        } else {
            let t: toml::Value = toml::from_str(text).map_err(|e| at("", e.message()))?;
            serde_json::to_value(t).map_err(|e| at("", e))?
        };
        Self::from_value(value)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
        let json = path.extension().is_some_and(|e| e == "json");
        Ok(Self::from_str(&text, json)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != defaults::SCHEMA_VERSION {
            return Err(at(
                "/schema_version",
                format!("unsupported schema version {}, expected {}", self.schema_version, defaults::SCHEMA_VERSION),
            ));
        }
        self.integrator.validate().map_err(|e| at("/integrator", e))?;
        if let Some(s) = &self.shot {
            s.to_spec().map_err(|(p, e)| at(&format!("/shot{p}"), e))?;
        }
        if let Some(s) = &self.sweep {
            s.to_plan(self.integrator).map_err(|(p, e)| at(&format!("/sweep{p}"), e))?;
        }
        Ok(())
    }
}

impl ShotSection {
    pub fn to_spec(&self) -> Result<ShotSpec, (&'static str, qcurv::Error)> {
        let dim = Dim::new(self.m).map_err(|e| ("/m", e))?;
        ShotSpec::new(dim, self.q, self.alpha.clone()).map_err(|e| ("/alpha", e))
    }
}

impl SweepSection {
    pub fn to_plan(&self, integrator: IntegratorConfig) -> Result<SweepPlan, (&'static str, qcurv::Error)> {
        let plan = SweepPlan { m: self.m, q: self.q, alpha: self.alpha.clone(), integrator };
        match plan.validate() {
            Ok(_) => Ok(plan),
            Err(e @ qcurv::Error::InvalidDim(_)) => Err(("/m", e)),
            Err(e @ qcurv::Error::InvalidConfig(_)) => Err(("", e)),
            Err(e) => Err(("/alpha", e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_points_at_it() {
        let text = r#"
schema_version = 1
[integrator]
rtol = 1e-9
r_maxx = 10.0
"#;
        let e = RunConfig::from_str(text, false).unwrap_err();
        assert_eq!(e.pointer, "/integrator/r_maxx");
    }

    #[test]
    fn nested_type_error_pointer() {
        let text = r#"{"schema_version": 1, "sweep": {"m": 2, "Q": -6, "alpha": [[0.0], [-1.0, "x"]]}}"#;
        let e = RunConfig::from_str(text, true).unwrap_err();
        assert!(e.pointer.starts_with("/sweep/alpha/1"), "{}", e.pointer);
    }

    #[test]
    fn semantic_errors_located() {
        let e = RunConfig::from_str("schema_version = 2", false).unwrap_err();
        assert_eq!(e.pointer, "/schema_version");
        let e = RunConfig::from_str("schema_version = 1\n[shot]\nm = 2\nQ = -6\nalpha = [0.0]", false).unwrap_err();
        assert_eq!(e.pointer, "/shot/alpha");
        let e = RunConfig::from_str("schema_version = 1\n[integrator]\nrtol = -1.0", false).unwrap_err();
        assert_eq!(e.pointer, "/integrator");
    }

    #[test]
    fn toml_and_json_agree() {
        let t = RunConfig::from_str("schema_version = 1\n[shot]\nm = 2\nQ = -6.0\nalpha = [0.0, -1.0]", false).unwrap();
        let j = RunConfig::from_str(r#"{"schema_version":1,"shot":{"m":2,"Q":-6.0,"alpha":[0.0,-1.0]}}"#, true).unwrap();
        assert_eq!(t.shot.unwrap().to_spec().unwrap(), j.shot.unwrap().to_spec().unwrap());
    }

    #[test]
    fn pointer_escaping() {
        assert_eq!(escape("a/b~c"), "a~1b~0c");
    }
}
