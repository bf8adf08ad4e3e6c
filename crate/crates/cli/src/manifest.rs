use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Record of one run, enough to repeat it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command flags and the global output flags, as `--key value` pairs.
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// `hedgehog <command> --key value ...`; `"true"` values become bare switches.
    pub fn argv(&self) -> Vec<String> {
        let mut argv = vec!["hedgehog".to_string(), self.command.clone()];
        for (k, v) in &self.parameters {
            argv.push(format!("--{k}"));
            if v != "true" {
                argv.push(v.clone());
            }
        }
        argv
    }
}

/// `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argv_from_parameters() {
        let m = RunManifest {
            command: "reproduce".into(),
            parameters: BTreeMap::from([
                ("quick".to_string(), "true".to_string()),
                ("seed".to_string(), "4".to_string()),
            ]),
            tool_version: "0.1.0".into(),
            seed: Some(4),
            outputs: vec!["r.txt".into()],
        };
        assert_eq!(
            m.argv(),
            ["hedgehog", "reproduce", "--quick", "--seed", "4"]
        );
        assert_eq!(
            manifest_path(Path::new("a/b.csv")),
            PathBuf::from("a/b.csv.manifest.json")
        );
    }
}
