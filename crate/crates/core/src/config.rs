//! TOML configuration files and the run manifest.
//!
//! Every file is parsed with unknown keys rejected and then validated before
//! any work starts; errors name the file and the offending key.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::detect::DecodeParams;
use crate::pipeline::PipelineConfig;
use crate::simworld::ScenarioConfig;
use crate::tracker::TrackerConfig;
use crate::{Error, Result};

/// What `simulate` runs. Relative paths resolve against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub scenario: PathBuf,
    /// Defaults to [`TrackerConfig::default`] when absent.
    pub tracker: Option<PathBuf>,
    /// Defaults to the optimized profile when absent.
    pub pipeline: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
}

fn read_text(path: &Path) -> Result<String> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(Error::Config(format!("{}: file not found", path.display())))
        }
        Err(e) => Err(Error::Io(e)),
    }
}

pub fn parse_toml<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(format!("{origin}: {}", e.to_string().trim_end())))
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_toml(&read_text(path)?, &path.display().to_string())
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let c: ScenarioConfig = load(path)?;
    c.validate()?;
    Ok(c)
}

pub fn load_tracker(path: &Path) -> Result<TrackerConfig> {
    let c: TrackerConfig = load(path)?;
    c.validate()?;
    Ok(c)
}

pub fn load_pipeline(path: &Path) -> Result<PipelineConfig> {
    let c: PipelineConfig = load(path)?;
    c.validate()?;
    Ok(c)
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let mut m: RunManifest = load(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut m.scenario);
        resolve(&mut m.output_dir);
        if let Some(p) = m.tracker.as_mut() {
            resolve(p);
        }
        if let Some(p) = m.pipeline.as_mut() {
            resolve(p);
        }
        Ok(m)
    }
}

/// One head of a `decode` job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeadSpec {
    pub path: PathBuf,
    pub anchors: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecodeJob {
    pub params: DecodeParams,
    pub heads: Vec<HeadSpec>,
}

impl DecodeJob {
    pub fn load(path: &Path) -> Result<Self> {
        let mut job: DecodeJob = load(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for h in &mut job.heads {
            if h.path.is_relative() {
                h.path = base.join(&h.path);
            }
        }
        Ok(job)
    }
}
