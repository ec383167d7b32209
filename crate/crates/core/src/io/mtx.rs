//! MatrixMarket `coordinate integer general` output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::gf2::BitMatrix;

pub fn write_matrixmarket(m: &BitMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate integer general\n");
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), m.count_ones());
    for r in 0..m.rows() {
        for c in m.row_support(r) {
            let _ = writeln!(out, "{} {} 1", r + 1, c + 1);
        }
    }
    out
}

pub fn export_matrixmarket(m: &BitMatrix, path: impl AsRef<Path>) -> Result<()> {
    super::atomic_write(path, write_matrixmarket(m).as_bytes())
}
