//! Effective configuration: flags over the `--config` file over defaults.

use std::path::{Path, PathBuf};

use bmst::io::Format;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::Failure;

/// Options shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Common {
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; `null` uses one per core.
    pub workers: Option<usize>,
    pub format: Format,
}

impl Default for Common {
    fn default() -> Self {
        Common {
            seed: 0,
            out: PathBuf::from("out"),
            workers: None,
            format: Format::Csv,
        }
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// Merges `defaults`, the optional JSON config file and the flags that were
/// given. Flags arrive serialized; nulls and `false` mean "not given".
/// Config keys unknown to the subcommand are ignored so one file can serve
/// several subcommands.
pub fn resolve<C: Serialize + DeserializeOwned>(defaults: C, flags: Value, config: Option<&Path>) -> Result<C, Failure> {
    let mut merged = object(serde_json::to_value(defaults).map_err(Failure::internal)?);
    if let Some(path) = config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("invalid config {}: {e}", path.display())))?;
        let Value::Object(file) = file else {
            return Err(Failure::usage(format!("config {} must hold a JSON object", path.display())));
        };
        for (k, v) in file {
            if merged.contains_key(&k) {
                merged.insert(k, v);
            }
        }
    }
    for (k, v) in object(flags) {
        if !(v.is_null() || v == Value::Bool(false)) {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Failure::usage(format!("invalid configuration: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    #[serde(default)]
    struct Demo {
        a: u32,
        b: f64,
        flag: bool,
        #[serde(flatten)]
        common: Common,
    }

    impl Default for Demo {
        fn default() -> Self {
            Demo { a: 1, b: 2.0, flag: false, common: Common::default() }
        }
    }

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"a": 5, "b": 7.5, "flag": true, "unknown": 1, "seed": 9}"#).unwrap();
        let d: Demo = resolve(Demo::default(), json!({"a": 3, "b": null, "flag": false}), Some(&path)).unwrap();
        assert_eq!(d.a, 3);
        assert_eq!(d.b, 7.5);
        assert!(d.flag);
        assert_eq!(d.common.seed, 9);
        let d: Demo = resolve(Demo::default(), json!({}), None).unwrap();
        assert_eq!(d, Demo::default());
    }

    #[test]
    fn bad_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, "[1, 2]").unwrap();
        assert!(resolve(Demo::default(), json!({}), Some(&path)).is_err());
        std::fs::write(&path, r#"{"a": "x"}"#).unwrap();
        assert!(resolve(Demo::default(), json!({}), Some(&path)).is_err());
        assert!(resolve(Demo::default(), json!({}), Some(&dir.path().join("missing.json"))).is_err());
    }
}
