//! CSV emission. Every output file carries a one-line `#` header with the
//! tool version, a hash of the experiment config, and the master seed, so
//! results stay traceable to the exact inputs.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct OutputMeta {
    pub config_sha256: String,
    pub master_seed: u64,
}

impl OutputMeta {
    pub fn new(config_text: &str, master_seed: u64) -> Self {
        let digest = Sha256::digest(config_text.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        Self {
            config_sha256: hex,
            master_seed,
        }
    }

    pub fn header_line(&self) -> String {
        format!(
            "# lab v{} config_sha256={} master_seed={}",
            TOOL_VERSION, self.config_sha256, self.master_seed
        )
    }
}

/// Writes a CSV file with the meta header, a column-name row, and the
/// prepared data rows.
pub fn write_csv<P: AsRef<Path>>(
    path: P,
    meta: &OutputMeta,
    columns: &[&str],
    rows: impl IntoIterator<Item = String>,
) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating output directory {}", parent.display()))?;
    }
    let mut file = fs::File::create(path)
        .with_context(|| format!("creating output file {}", path.display()))?;
    writeln!(file, "{}", meta.header_line())?;
    writeln!(file, "{}", columns.join(","))?;
    for row in rows {
        writeln!(file, "{row}")?;
    }
    Ok(())
}
