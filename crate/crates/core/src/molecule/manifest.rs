use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One record of `fixtures/manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub molecule: String,
    pub geometry_angstrom: f64,
    pub basis: String,
    pub n_qubits: usize,
    pub hf_energy: f64,
    pub fci_energy: f64,
    /// File name relative to the manifest's directory.
    pub fcidump: String,
}

impl FixtureEntry {
    /// `<molecule>_<geometry>` as used in fixture file names.
    pub fn name(&self) -> String {
        self.fcidump.trim_end_matches(".fcidump").to_string()
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<FixtureEntry>> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Manifest(e.to_string()))
}
