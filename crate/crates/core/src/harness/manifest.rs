use serde::{Deserialize, Serialize};

use super::report::Timing;

/// Everything needed to repeat a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub version: String,
    pub wall_seconds: f64,
    pub shard_seconds: Vec<f64>,
    pub environment: String,
}

impl RunManifest {
    /// With `reproducible` set, timings and host details are left out so that
    /// repeated runs give identical bytes.
    pub fn new(command_line: Vec<String>, config: serde_json::Value, timing: &Timing, reproducible: bool) -> Self {
        let (wall_seconds, shard_seconds, environment) = if reproducible {
            (0.0, Vec::new(), "reproducible".to_string())
        } else {
            (
                timing.wall_seconds,
                timing.shard_seconds.clone(),
                format!("{}-{} threads={}", std::env::consts::OS, std::env::consts::ARCH, rayon::current_num_threads()),
            )
        };
        RunManifest {
            command_line,
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_seconds,
            shard_seconds,
            environment,
        }
    }
}
