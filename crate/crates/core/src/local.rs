//! Local codes and the intersection codes that control the base-code parameters.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::distance::{min_weight_exhaustive, Distance};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Echelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `[2,1,2]` repetition code.
    Rep2,
    /// `[6,3,3]` shortened Hamming code.
    Ham6,
    /// `[8,4,4]` extended Hamming code.
    Ham8,
    Custom,
}

impl Family {
    pub fn length(self) -> Option<usize> {
        match self {
            Family::Rep2 => Some(2),
            Family::Ham6 => Some(6),
            Family::Ham8 => Some(8),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Rep2 => "rep2",
            Family::Ham6 => "ham6",
            Family::Ham8 => "ham8",
            Family::Custom => "custom",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rep2" => Ok(Family::Rep2),
            "ham6" => Ok(Family::Ham6),
            "ham8" => Ok(Family::Ham8),
            "custom" => Ok(Family::Custom),
            other => Err(Error::input(format!("unknown local-code family {other:?}"))),
        }
    }
}

/// A binary code `C = ker H` with generator matrix `G` (rows span `C`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCode {
    family: Family,
    h: BitMatrix,
    g: BitMatrix,
    /// Column permutation applied to the canonical matrices; `None` for custom codes.
    perm: Option<Vec<usize>>,
}

fn canonical_matrices(family: Family) -> Result<(BitMatrix, BitMatrix)> {
    let (h, g): (&[&str], &[&str]) = match family {
        Family::Rep2 => (&["11"], &["11"]),
        Family::Ham6 => (&["100011", "010101", "001110"], &["011100", "101010", "110001"]),
        Family::Ham8 => (
            &["10000111", "01001011", "00101101", "00011110"],
            &["01111000", "10110100", "11010010", "11100001"],
        ),
        Family::Custom => return Err(Error::input("custom codes have no canonical form")),
    };
    Ok((BitMatrix::from_bit_strings(h)?, BitMatrix::from_bit_strings(g)?))
}

impl LocalCode {
    pub fn canonical(family: Family) -> Result<Self> {
        let (h, g) = canonical_matrices(family)?;
        let n = h.cols();
        Ok(Self {
            family,
            h,
            g,
            perm: Some((0..n).collect()),
        })
    }

    /// The canonical code with column `c` moved to `perm[c]`.
    pub fn permuted(family: Family, perm: &[usize]) -> Result<Self> {
        let (h, g) = canonical_matrices(family)?;
        Ok(Self {
            family,
            h: h.apply_column_permutation(perm)?,
            g: g.apply_column_permutation(perm)?,
            perm: Some(perm.to_vec()),
        })
    }

    /// A user-supplied code. Requires `H Gᵀ = 0` and `rowspace(G) = ker(H)`.
    pub fn custom(h: BitMatrix, g: BitMatrix) -> Result<Self> {
        if h.cols() != g.cols() {
            return Err(Error::dim(format!(
                "custom code: H has {} columns but G has {}",
                h.cols(),
                g.cols()
            )));
        }
        let code = Self {
            family: Family::Custom,
            h,
            g,
            perm: None,
        };
        code.validate()?;
        Ok(code)
    }

    /// Builds a custom code without checking `H Gᵀ = 0`; used to model
    /// corrupted inputs that `validate` must reject.
    pub fn custom_unchecked(h: BitMatrix, g: BitMatrix) -> Self {
        Self {
            family: Family::Custom,
            h,
            g,
            perm: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h.cols() != self.g.cols() {
            return Err(Error::Integrity("local code: H and G have different lengths".into()));
        }
        if !self.h.multiply(&self.g.transpose())?.is_zero() {
            return Err(Error::Integrity("local code: H·Gᵀ ≠ 0".into()));
        }
        if self.h.rank() + self.g.rank() != self.n() {
            return Err(Error::Integrity("local code: rowspace(G) ≠ ker(H)".into()));
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn g(&self) -> &BitMatrix {
        &self.g
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    pub fn dimension(&self) -> usize {
        self.g.rank()
    }

    pub fn distance(&self) -> Distance {
        min_weight_exhaustive(&self.g)
    }

    pub fn dual_distance(&self) -> Distance {
        min_weight_exhaustive(&self.h)
    }

    /// Two codes are equal when their generator row spaces agree.
    pub fn same_code(&self, other: &LocalCode) -> bool {
        self.n() == other.n() && self.g.rref().matrix == other.g.rref().matrix
    }
}

fn distinct_uncached(family: Family) -> Result<Vec<LocalCode>> {
    let n = family
        .length()
        .ok_or_else(|| Error::input("custom codes have no permutation orbit"))?;
    let mut seen: std::collections::BTreeMap<String, LocalCode> = Default::default();
    for perm in (0..n).permutations(n) {
        let code = LocalCode::permuted(family, &perm)?;
        let key = code.g.rref().matrix.to_string();
        // lexicographic permutation order: the first one seen is the representative
        seen.entry(key).or_insert(code);
    }
    Ok(seen.into_values().collect())
}

/// Distinct codes in the column-permutation orbit of a canonical family, one
/// representative each, ordered by the RREF of the generator matrix.
pub fn distinct_permuted_codes(family: Family) -> Result<&'static [LocalCode]> {
    static REP2: OnceLock<Vec<LocalCode>> = OnceLock::new();
    static HAM6: OnceLock<Vec<LocalCode>> = OnceLock::new();
    static HAM8: OnceLock<Vec<LocalCode>> = OnceLock::new();
    let cell = match family {
        Family::Rep2 => &REP2,
        Family::Ham6 => &HAM6,
        Family::Ham8 => &HAM8,
        Family::Custom => return Err(Error::input("custom codes have no permutation orbit")),
    };
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let codes = distinct_uncached(family)?;
    Ok(cell.get_or_init(|| codes))
}

/// Dimensions, distances and pivot bases of `C01 = C0 ∩ C1` and
/// `C01⊥ = C0⊥ ∩ C1⊥` (the intersection of the duals, not the dual of `C01`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionData {
    pub n: usize,
    pub k01: usize,
    pub k01_perp: usize,
    pub d01: Distance,
    pub d01_perp: Distance,
    pub basis: Echelon,
    pub perp_basis: Echelon,
}

pub fn intersection_data(c0: &LocalCode, c1: &LocalCode) -> Result<IntersectionData> {
    if c0.n() != c1.n() {
        return Err(Error::dim(format!(
            "local codes of lengths {} and {} cannot be intersected",
            c0.n(),
            c1.n()
        )));
    }
    let basis = c0.g.intersect_row_spaces(&c1.g)?.rref();
    let perp_basis = c0.h.intersect_row_spaces(&c1.h)?.rref();
    Ok(IntersectionData {
        n: c0.n(),
        k01: basis.rank(),
        k01_perp: perp_basis.rank(),
        d01: min_weight_exhaustive(&basis.matrix),
        d01_perp: min_weight_exhaustive(&perp_basis.matrix),
        basis,
        perp_basis,
    })
}

/// Lower bound on the generator weight of the quantum code,
/// `max(d0⊥ d0', d1⊥ d1', d0 d1'⊥, d1 d0'⊥)`. A product with an infinite
/// factor belongs to an empty generator block and contributes nothing.
pub fn generator_weight_bound(c0: &LocalCode, c1: &LocalCode, c0p: &LocalCode, c1p: &LocalCode) -> usize {
    let product = |a: Distance, b: Distance| match (a, b) {
        (Distance::Finite(x), Distance::Finite(y)) => x * y,
        _ => 0,
    };
    [
        product(c0.dual_distance(), c0p.distance()),
        product(c1.dual_distance(), c1p.distance()),
        product(c0.distance(), c1p.dual_distance()),
        product(c1.distance(), c0p.dual_distance()),
    ]
    .into_iter()
    .max()
    .unwrap_or(0)
}
