//! Location of the scenario files the acceptance report runs on.

use std::path::PathBuf;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/configs")
        .join(format!("{name}.toml"))
}
