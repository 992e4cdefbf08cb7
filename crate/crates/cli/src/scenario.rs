//! JSON scenario files: `{protocol, params, seed, output}`.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::args::{BalanceSweepParams, BbpsswParams, DistillParams, Format, SendParams, TeleportParams};
use crate::error::{CliError, CliResult};
use crate::run::Job;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioProtocol {
    Teleport,
    Send,
    Bbpssw,
    DistillReport,
    BalanceSweep,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub protocol: ScenarioProtocol,
    #[serde(default = "empty_params")]
    pub params: Value,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Format,
}

fn empty_params() -> Value {
    Value::Object(Default::default())
}

pub fn load(path: &Path) -> CliResult<ScenarioSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn params<T: for<'de> Deserialize<'de>>(v: &Value) -> CliResult<T> {
    if !v.is_object() {
        return Err(CliError::Input("`params` must be a JSON object".into()));
    }
    Ok(serde_json::from_value(v.clone())?)
}

fn resolve(base: &Path, p: Option<PathBuf>) -> Option<PathBuf> {
    p.map(|p| if p.is_relative() { base.join(p) } else { p })
}

impl ScenarioSpec {
    /// Validates `params` against the protocol and builds the job. Relative
    /// state paths are taken relative to `base`.
    pub fn job(&self, base: &Path) -> CliResult<Job> {
        Ok(match self.protocol {
            ScenarioProtocol::Teleport => Job::Teleport(params::<TeleportParams>(&self.params)?),
            ScenarioProtocol::Send => Job::Send(params::<SendParams>(&self.params)?),
            ScenarioProtocol::Bbpssw => Job::Bbpssw(params::<BbpsswParams>(&self.params)?),
            ScenarioProtocol::DistillReport => {
                let mut p = params::<DistillParams>(&self.params)?;
                p.state = resolve(base, p.state);
                Job::Distill(p)
            }
            ScenarioProtocol::BalanceSweep => Job::BalanceSweep(params::<BalanceSweepParams>(&self.params)?),
        })
    }
}
