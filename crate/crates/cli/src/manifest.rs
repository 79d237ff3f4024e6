use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Record of one CLI run, written next to its first output as `<output>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Option<String>,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<String>,
    pub tool_version: &'static str,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, config: Option<&Path>) -> Self {
        RunManifest {
            command: command.to_string(),
            config: config.map(|p| p.display().to_string()),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serialisable parameter"));
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        output.with_file_name(name)
    }
}
