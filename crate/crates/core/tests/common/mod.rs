#![allow(dead_code)]

use std::path::PathBuf;

use ceo_adapt::molecule::{MolecularSystem, Ordering};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.fcidump"))
}

pub fn system(name: &str) -> MolecularSystem {
    MolecularSystem::from_fcidump(fixture(name), Ordering::Interleaved).expect("fixture loads")
}
