use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{EngineConfig, EngineError};

/// Environment variable naming the profile file.
pub const PROFILE_ENV: &str = "SCANBOARD_PROFILE";
const DEFAULT_PROFILE_FILE: &str = "scanboard-profile.json";

pub fn default_profile_path() -> PathBuf {
    std::env::var_os(PROFILE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_PROFILE_FILE))
}

/// Writes the profile by replacing the whole file: the JSON goes to a
/// sibling temp file which is then renamed over `path`.
pub fn save_profile(config: &EngineConfig, path: &Path) -> Result<(), EngineError> {
    let mut text = serde_json::to_string_pretty(config).expect("config serializes");
    text.push('\n');
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let mut file = fs::File::create(&tmp)?;
    file.write_all(text.as_bytes())?;
    file.sync_all()?;
    drop(file);
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_profile(path: &Path) -> Result<EngineConfig, EngineError> {
    let text = fs::read_to_string(path)?;
    let config: EngineConfig =
        serde_json::from_str(&text).map_err(EngineError::MalformedProfile)?;
    config.validate()?;
    Ok(config)
}
