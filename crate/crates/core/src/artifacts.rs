//! Artifact persistence helpers shared by the file formats: atomic
//! writes and SHA-256 content digests used for provenance tracking.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::Result;

/// Writes via a temp file in the same directory, then renames, so partial
/// writes never corrupt an artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = path.to_path_buf();
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "artifact".into());
    tmp.set_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Hex SHA-256 of a byte slice.
pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex(&h.finalize())
}

/// Hex SHA-256 of a file's contents.
pub fn digest_file(path: &Path) -> Result<String> {
    Ok(digest_bytes(&std::fs::read(path)?))
}

/// Hex SHA-256 of an f64 slice viewed as little-endian bytes.
pub fn digest_f64s(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    hex(&h.finalize())
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        use std::fmt::Write;
        let _ = write!(s, "{b:02x}");
    }
    s
}
