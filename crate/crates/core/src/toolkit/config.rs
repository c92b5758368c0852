//! Optional JSON configuration: sweep bounds, worker count, data
//! directory. Command-line flags always override configuration values.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ToolkitError;

/// Contents of a configuration file. Every field is optional; absent
/// fields fall back to built-in defaults (after CLI flags have had their
/// say).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub max_n: Option<u32>,
    pub max_r: Option<u32>,
    pub max_x: Option<u32>,
    /// Worker-thread count for parallel enumeration.
    pub jobs: Option<usize>,
    /// Directory holding reference b-files and the default cache.
    pub data_dir: Option<String>,
}

impl Config {
    /// Reads a configuration file. The file must exist and parse; callers
    /// that treat configuration as optional should not call this for a
    /// path they have not been given.
    pub fn load(path: &Path) -> Result<Self, ToolkitError> {
        let text = fs::read_to_string(path).map_err(|source| ToolkitError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ToolkitError::Malformed {
            path: path.to_owned(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_partial_configs_parse() {
        let full: Config = serde_json::from_str(
            r#"{"max_n": 8, "max_r": 4, "max_x": 10, "jobs": 2, "data_dir": "elsewhere"}"#,
        )
        .unwrap();
        assert_eq!(full.max_n, Some(8));
        assert_eq!(full.jobs, Some(2));
        assert_eq!(full.data_dir.as_deref(), Some("elsewhere"));
        let partial: Config = serde_json::from_str(r#"{"max_n": 9}"#).unwrap();
        assert_eq!(partial.max_n, Some(9));
        assert_eq!(partial.max_r, None);
        let empty: Config = serde_json::from_str("{}").unwrap();
        assert_eq!(empty, Config::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"max_m": 3}"#).is_err());
    }

    #[test]
    fn load_reports_missing_and_malformed_files() {
        let missing = Config::load(Path::new("/no/such/config.json")).unwrap_err();
        assert!(missing.to_string().contains("/no/such/config.json"));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, "max_n: 8").unwrap();
        assert!(matches!(
            Config::load(&path),
            Err(ToolkitError::Malformed { .. })
        ));
    }

    #[test]
    fn roundtrips_through_serialization() {
        let config = Config {
            max_n: Some(7),
            max_r: None,
            max_x: Some(6),
            jobs: Some(4),
            data_dir: None,
        };
        let text = serde_json::to_string(&config).unwrap();
        assert_eq!(serde_json::from_str::<Config>(&text).unwrap(), config);
    }
}
