//! Surface-model resolution for `--surface`: an existing file path wins,
//! then `FANOFORGE_PRESET_DIR/<name>.json`, then the built-in presets
//! (`p2`, `ample-k`, `raynaud`).

use std::path::Path;

use fanoforge_core::{EngineError, Result, SurfaceModel};

pub const PRESET_DIR_ENV: &str = "FANOFORGE_PRESET_DIR";

/// `p_hint` parameterizes the built-in `raynaud` preset (defaults to 3
/// when the invoking command has no characteristic of its own).
pub fn resolve_surface(arg: &str, ks2: Option<i64>, p_hint: Option<u64>) -> Result<SurfaceModel> {
    let path = Path::new(arg);
    if path.is_file() {
        let src = std::fs::read_to_string(path)
            .map_err(|e| EngineError::invalid(format!("reading {arg}: {e}")))?;
        return SurfaceModel::from_json(&src, ks2);
    }
    if let Ok(dir) = std::env::var(PRESET_DIR_ENV) {
        let candidate = Path::new(&dir).join(format!("{arg}.json"));
        if candidate.is_file() {
            let src = std::fs::read_to_string(&candidate).map_err(|e| {
                EngineError::invalid(format!("reading {}: {e}", candidate.display()))
            })?;
            return SurfaceModel::from_json(&src, ks2);
        }
    }
    match arg {
        "p2" => {
            if ks2.is_some() {
                return Err(EngineError::invalid(
                    "the p2 preset has fixed invariants; --ks2 does not apply",
                ));
            }
            Ok(SurfaceModel::p2())
        }
        "ample-k" | "ample-K" => {
            let ks2 = ks2.ok_or_else(|| {
                EngineError::invalid("the ample-K preset requires --ks2")
            })?;
            SurfaceModel::ample_k(ks2)
        }
        "raynaud" => {
            let ks2 = ks2.ok_or_else(|| {
                EngineError::invalid("the raynaud preset requires --ks2")
            })?;
            SurfaceModel::raynaud(ks2, p_hint.unwrap_or(3))
        }
        other => Err(EngineError::invalid(format!(
            "unknown surface `{other}`: not a file, not in {PRESET_DIR_ENV}, \
             and not one of the built-ins p2 | ample-k | raynaud"
        ))),
    }
}
