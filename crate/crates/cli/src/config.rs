//! TOML configuration for `verify`.
//!
//! ```toml
//! version = 1
//! suite = "couple"
//! seed = 7
//! format = "json-lines"
//! output = "report.jsonl"
//!
//! [counts]
//! reiteration = 200
//!
//! [tolerances]
//! identity = 1e-12
//!
//! [atlas]
//! centers = [0.0, 3.141592653589793]
//! line_points = 8192
//! ```

use std::path::{Path, PathBuf};

use hilbert_interp::charts::AtlasConfig;
use hilbert_interp::verify::{Counts, Suite, Tolerances};
use serde::Deserialize;

use crate::report::Format;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: u32,
    pub suite: Option<Suite>,
    pub seed: Option<u64>,
    pub timings: Option<bool>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub counts: Option<Counts>,
    pub tolerances: Option<Tolerances>,
    pub atlas: Option<AtlasConfig>,
}

/// Parses configuration text; `origin` names the source in messages.
pub fn parse_config(text: &str, origin: &str) -> Result<ConfigFile, String> {
    if text.trim().is_empty() {
        return Err(format!(
            "{origin}:1: empty configuration; expected at least `version = {CONFIG_VERSION}`"
        ));
    }
    let cfg: ConfigFile = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(1);
        format!("{origin}:{line}: {}", e.message())
    })?;
    if cfg.version != CONFIG_VERSION {
        let line = text
            .lines()
            .position(|l| l.trim_start().starts_with("version"))
            .map_or(1, |i| i + 1);
        return Err(format!(
            "{origin}:{line}: unsupported config version {}, expected {CONFIG_VERSION}",
            cfg.version
        ));
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_rejected() {
        let err = parse_config("  \n", "cfg.toml").unwrap_err();
        assert!(err.starts_with("cfg.toml:1:"), "{err}");
    }

    #[test]
    fn version_is_required() {
        let err = parse_config("seed = 3\n", "c").unwrap_err();
        assert!(err.contains("version"), "{err}");
        let err = parse_config("\nversion = 2\n", "c").unwrap_err();
        assert!(err.starts_with("c:2:"), "{err}");
    }

    #[test]
    fn unknown_keys_report_their_line() {
        let err = parse_config("version = 1\nsuite = \"couple\"\nbogus = 1\n", "c").unwrap_err();
        assert!(err.starts_with("c:3:"), "{err}");
    }

    #[test]
    fn partial_tables_keep_defaults() {
        let cfg = parse_config(
            "version = 1\nsuite = \"charts\"\n[counts]\nkt = 7\n[atlas]\nline_points = 4096\n",
            "c",
        )
        .unwrap();
        assert_eq!(cfg.suite, Some(Suite::Charts));
        let counts = cfg.counts.unwrap();
        assert_eq!(counts.kt, 7);
        assert_eq!(counts.reiteration, Counts::default().reiteration);
        assert_eq!(cfg.atlas.unwrap().line_points, 4096);
    }
}
