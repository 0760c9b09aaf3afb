//! Optional on-disk cache of result envelopes, enabled by `OKBODY_CACHE_DIR`.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::envelope::ResultEnvelope;
use crate::job::JobSpec;

pub const CACHE_ENV: &str = "OKBODY_CACHE_DIR";

fn entry(job: &JobSpec, input_digest: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let key = format!("{}|{}|{}", env!("CARGO_PKG_VERSION"), input_digest, job.canonical_parameters());
    let name = hex::encode(Sha256::digest(key.as_bytes()));
    Some(PathBuf::from(dir).join(format!("{name}.json")))
}

pub fn load(job: &JobSpec, input_digest: &str) -> Option<ResultEnvelope> {
    let text = std::fs::read_to_string(entry(job, input_digest)?).ok()?;
    serde_json::from_str(&text).ok()
}

/// Failures to write the cache are ignored; the result is still returned.
pub fn store(job: &JobSpec, envelope: &ResultEnvelope) {
    let Some(path) = entry(job, &envelope.input_digest) else {
        return;
    };
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    let _ = std::fs::write(path, envelope.to_json());
}
