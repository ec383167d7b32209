//! File formats: alist and MatrixMarket matrices, code-spec documents, and
//! atomic file writes.

mod alist;
mod mtx;
mod spec;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use alist::{export_alist, import_alist, parse_alist, write_alist};
pub use mtx::{export_matrixmarket, write_matrixmarket};
pub use spec::{load_spec, parse_spec, parse_spec_unchecked, save_spec, serialize_spec, spec_hash, LocalCodeDoc, SpecDoc};

use crate::error::Result;

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

/// Adds the path to an I/O error message.
pub(crate) fn with_path(path: &Path, e: std::io::Error) -> std::io::Error {
    std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

pub fn read_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    Ok(fs::read_to_string(path).map_err(|e| with_path(path, e))?)
}

/// Writes `bytes` to a sibling temporary file, syncs it and renames it over
/// `path`. Missing parent directories are created.
pub fn atomic_write(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let tmp = temp_path(path);
    let result = (|| {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result.map_err(|e| with_path(path, e))?)
}
