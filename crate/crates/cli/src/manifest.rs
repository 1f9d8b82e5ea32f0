use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zecmac::zec::Caps;

use crate::io::write_json;
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRef {
    pub path: String,
    pub sha256: String,
}

/// Everything that determines a command's outputs, plus a timestamp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub configs: Vec<ConfigRef>,
    /// Remaining command-line options, as given.
    pub options: BTreeMap<String, String>,
    pub caps: Option<Caps>,
    pub seeds: Vec<u64>,
    pub out: String,
    pub version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` when set.
    pub timestamp: u64,
}

/// `manifest.json` as written to disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub hash: String,
    pub manifest: RunManifest,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.trim().parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, out: &Path) -> Self {
        Self {
            command: command.into(),
            configs: Vec::new(),
            options: BTreeMap::new(),
            caps: None,
            seeds: Vec::new(),
            out: out.display().to_string(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: timestamp(),
        }
    }

    /// Records a config file together with the digest of its contents.
    pub fn add_config(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.configs.push(ConfigRef {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.insert(key.into(), value.to_string());
    }

    /// Hash of the manifest with the timestamp left out, as 16 hex digits.
    pub fn hash(&self) -> String {
        let mut m = self.clone();
        m.timestamp = 0;
        let bytes = serde_json::to_vec(&m).expect("manifest serializes");
        sha256_hex(&bytes)[..16].to_owned()
    }

    /// Creates the output directory and writes `manifest.json` into it.
    pub fn write(&self, dir: &Path) -> Result<String, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        let hash = self.hash();
        write_json(
            &dir.join(MANIFEST_FILE),
            &ManifestFile {
                hash: hash.clone(),
                manifest: self.clone(),
            },
        )?;
        Ok(hash)
    }
}
