//! Base and lifted quantum Tanner codes.
//!
//! Qubits of the lifted code are triples `(i, j, g)` with `i < n_A`,
//! `j < n_B` and `g` a group element, stored at column
//! `((i * n_B) + j) * |G| + g`. The base code is the case `|G| = 1`.

use std::fmt;

use crate::distance::Distance;
use crate::error::{Error, Result};
use crate::gf2::{ones, BitMatrix};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::local::{intersection_data, Family, IntersectionData, LocalCode};

/// Column layout of a code on the `n_A × n_B` grid with a fiber of size `group_order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QubitLayout {
    pub n_a: usize,
    pub n_b: usize,
    pub group_order: usize,
}

impl QubitLayout {
    pub fn n(&self) -> usize {
        self.n_a * self.n_b * self.group_order
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, g: usize) -> usize {
        (i * self.n_b + j) * self.group_order + g
    }

    pub fn coords(&self, column: usize) -> (usize, usize, usize) {
        let g = column % self.group_order;
        let cell = column / self.group_order;
        (cell / self.n_b, cell % self.n_b, g)
    }

    pub const CONVENTION: &'static str = "column = ((i * n_B) + j) * |G| + g";
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Base,
    Lifted(Box<CodeSpec>),
    Imported,
}

/// A CSS code given by its X and Z check matrices.
#[derive(Clone, Debug)]
pub struct CssCode {
    hx: BitMatrix,
    hz: BitMatrix,
    layout: Option<QubitLayout>,
    provenance: Provenance,
}

impl CssCode {
    /// Wraps a pair of check matrices without checking orthogonality.
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::dim(format!(
                "Hx has {} columns but Hz has {}",
                hx.cols(),
                hz.cols()
            )));
        }
        Ok(Self {
            hx,
            hz,
            layout: None,
            provenance: Provenance::Imported,
        })
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn layout(&self) -> Option<QubitLayout> {
        self.layout
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_css_valid(&self) -> bool {
        self.hx
            .multiply(&self.hz.transpose())
            .map(|p| p.is_zero())
            .unwrap_or(false)
    }

    pub fn check_orthogonality(&self) -> Result<()> {
        if self.is_css_valid() {
            Ok(())
        } else {
            Err(Error::Integrity("Hx·Hzᵀ ≠ 0: the check matrices do not commute".into()))
        }
    }

    /// `k = n − rk(Hx) − rk(Hz)`, after re-checking orthogonality.
    pub fn dimension(&self) -> Result<usize> {
        self.check_orthogonality()?;
        Ok(self.n() - self.hx.rank() - self.hz.rank())
    }
}

/// Everything needed to rebuild one lifted code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub group: GroupDescriptor,
    /// Element indices `a_1..a_{n_A}`.
    pub a: Vec<usize>,
    /// Element indices `b_1..b_{n_B}`.
    pub b: Vec<usize>,
    pub c0: LocalCode,
    pub c1: LocalCode,
    pub c0p: LocalCode,
    pub c1p: LocalCode,
    pub comment: Option<String>,
}

impl CodeSpec {
    pub fn n_a(&self) -> usize {
        self.a.len()
    }

    pub fn n_b(&self) -> usize {
        self.b.len()
    }

    /// Checks lengths and element ranges; returns the materialized group.
    pub fn validate(&self) -> Result<FiniteGroup> {
        let group = self.group.build()?;
        self.validate_with(&group)?;
        Ok(group)
    }

    pub fn validate_with(&self, group: &FiniteGroup) -> Result<()> {
        for (name, code, len) in [
            ("c0", &self.c0, self.a.len()),
            ("c1", &self.c1, self.a.len()),
            ("c0p", &self.c0p, self.b.len()),
            ("c1p", &self.c1p, self.b.len()),
        ] {
            if code.n() != len {
                return Err(Error::input(format!(
                    "local code {name} has length {} but its multiset has {len} elements",
                    code.n()
                )));
            }
        }
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::input("multisets A and B must be nonempty"));
        }
        for (name, set) in [("A", &self.a), ("B", &self.b)] {
            if let Some(&x) = set.iter().find(|&&x| x >= group.order()) {
                return Err(Error::input(format!(
                    "multiset {name} contains element {x}, outside a group of order {}",
                    group.order()
                )));
            }
        }
        Ok(())
    }

    pub fn layout(&self, group_order: usize) -> QubitLayout {
        QubitLayout {
            n_a: self.a.len(),
            n_b: self.b.len(),
            group_order,
        }
    }

    /// Single-line canonical identity used for deduplication and resume.
    pub fn key(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        format!(
            "{};A={};B={};c0={};c1={};c0p={};c1p={}",
            self.group,
            join(&self.a),
            join(&self.b),
            local_key(&self.c0),
            local_key(&self.c1),
            local_key(&self.c0p),
            local_key(&self.c1p)
        )
    }
}

fn local_key(code: &LocalCode) -> String {
    match (code.family(), code.permutation()) {
        (Family::Custom, _) | (_, None) => {
            let rows = |m: &BitMatrix| m.row_iter().map(|r| r.to_string()).collect::<Vec<_>>().join("/");
            format!("custom[{}|{}]", rows(code.h()), rows(code.g()))
        }
        (family, Some(p)) if p.iter().enumerate().all(|(i, &x)| i == x) => family.to_string(),
        (family, Some(p)) => {
            let p: Vec<String> = p.iter().map(usize::to_string).collect();
            format!("{family}[{}]", p.join(","))
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

fn check_lengths(c0: &LocalCode, c1: &LocalCode, c0p: &LocalCode, c1p: &LocalCode) -> Result<()> {
    if c0.n() != c1.n() || c0p.n() != c1p.n() {
        return Err(Error::dim(format!(
            "local code lengths disagree: C0 {}, C1 {}, C0' {}, C1' {}",
            c0.n(),
            c1.n(),
            c0p.n(),
            c1p.n()
        )));
    }
    Ok(())
}

/// `Hx = [H0⊗G0'; H1⊗G1']`, `Hz = [G0⊗H1'; G1⊗H0']` on the `n_A × n_B` grid.
pub fn build_base(c0: &LocalCode, c1: &LocalCode, c0p: &LocalCode, c1p: &LocalCode) -> Result<CssCode> {
    check_lengths(c0, c1, c0p, c1p)?;
    let hx = BitMatrix::stack_vertical(&[&c0.h().kron(c0p.g()), &c1.h().kron(c1p.g())])?;
    let hz = BitMatrix::stack_vertical(&[&c0.g().kron(c1p.h()), &c1.g().kron(c0p.h())])?;
    Ok(CssCode {
        hx,
        hz,
        layout: Some(QubitLayout {
            n_a: c0.n(),
            n_b: c0p.n(),
            group_order: 1,
        }),
        provenance: Provenance::Base,
    })
}

/// Closed-form base-code parameters from the intersection codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseParams {
    pub k: usize,
    /// Distance of the base code; infinite when `k = 0`.
    pub d: Distance,
    pub a_side: IntersectionData,
    pub b_side: IntersectionData,
}

impl BaseParams {
    /// Number of logical qubits carried by the `C01 ⊗ C01'` pivot family.
    pub fn primary_pairs(&self) -> usize {
        self.a_side.k01 * self.b_side.k01
    }

    /// Number of logical qubits carried by the `C01⊥ ⊗ C01'⊥` family.
    pub fn perp_pairs(&self) -> usize {
        self.a_side.k01_perp * self.b_side.k01_perp
    }

    /// `min(d01, d01', d01⊥, d01'⊥)` over all four intersection codes.
    pub fn four_way_min(&self) -> Distance {
        [self.a_side.d01, self.b_side.d01, self.a_side.d01_perp, self.b_side.d01_perp]
            .into_iter()
            .min()
            .unwrap()
    }
}

/// `k = k01 k01' + k01⊥ k01'⊥`, and the distance as the minimum over the
/// intersection codes that carry logical operators.
///
/// Each family of logicals contributes the distances of its own two
/// intersection codes. When both families are present this is
/// `min(d01, d01', d01⊥, d01'⊥)`; when only one is present the other pair of
/// distances does not bound anything.
pub fn base_params_lemma(c0: &LocalCode, c1: &LocalCode, c0p: &LocalCode, c1p: &LocalCode) -> Result<BaseParams> {
    check_lengths(c0, c1, c0p, c1p)?;
    let a_side = intersection_data(c0, c1)?;
    let b_side = intersection_data(c0p, c1p)?;
    let primary = a_side.k01 * b_side.k01;
    let perp = a_side.k01_perp * b_side.k01_perp;
    let mut d = Distance::Infinite;
    if primary > 0 {
        d = d.min(a_side.d01).min(b_side.d01);
    }
    if perp > 0 {
        d = d.min(a_side.d01_perp).min(b_side.d01_perp);
    }
    Ok(BaseParams {
        k: primary + perp,
        d,
        a_side,
        b_side,
    })
}

/// Copies a base block into a lifted block: base row `r` becomes rows
/// `r|G| + g`, and base column `(i, j)` becomes `(i, j, target(i, j, g))`.
/// This is `(M ⊗ I_|G|)` followed by a column permutation.
fn lift_block(
    base: &BitMatrix,
    layout: QubitLayout,
    target: impl Fn(usize, usize, usize) -> usize,
) -> BitMatrix {
    let order = layout.group_order;
    let mut out = BitMatrix::zeros(base.rows() * order, layout.n());
    for r in 0..base.rows() {
        let cells: Vec<(usize, usize)> = ones(base.row_words(r))
            .map(|c| (c / layout.n_b, c % layout.n_b))
            .collect();
        for g in 0..order {
            for &(i, j) in &cells {
                out.set(r * order + g, layout.index(i, j, target(i, j, g)), true);
            }
        }
    }
    out
}

/// The lifted code
/// `Hx = [H0⊗G0'⊗I; (H1⊗G1'⊗I) L_A R_B]`, `Hz = [(G0⊗H1'⊗I) R_B; (G1⊗H0'⊗I) L_A]`
/// where `L_A : (i,j,g) ↦ (i,j,a_i g)` and `R_B : (i,j,g) ↦ (i,j,g b_j⁻¹)`.
pub fn build_lifted(spec: &CodeSpec) -> Result<CssCode> {
    let group = spec.validate()?;
    build_lifted_in(spec, &group)
}

/// As [`build_lifted`] with the group already materialized.
pub fn build_lifted_in(spec: &CodeSpec, group: &FiniteGroup) -> Result<CssCode> {
    spec.validate_with(group)?;
    let layout = spec.layout(group.order());
    let binv: Vec<usize> = spec.b.iter().map(|&b| group.inverse(b)).collect();
    let a = &spec.a;

    let x0 = lift_block(&spec.c0.h().kron(spec.c0p.g()), layout, |_, _, g| g);
    let x1 = lift_block(&spec.c1.h().kron(spec.c1p.g()), layout, |i, j, g| {
        group.mul(group.mul(a[i], g), binv[j])
    });
    let z0 = lift_block(&spec.c0.g().kron(spec.c1p.h()), layout, |_, j, g| group.mul(g, binv[j]));
    let z1 = lift_block(&spec.c1.g().kron(spec.c0p.h()), layout, |i, _, g| group.mul(a[i], g));

    Ok(CssCode {
        hx: BitMatrix::stack_vertical(&[&x0, &x1])?,
        hz: BitMatrix::stack_vertical(&[&z0, &z1])?,
        layout: Some(layout),
        provenance: Provenance::Lifted(Box::new(spec.clone())),
    })
}

/// Exact dimension of a CSS code.
pub fn dimension(code: &CssCode) -> Result<usize> {
    code.dimension()
}

fn is_repetition(code: &LocalCode) -> bool {
    code.n() == 2 && code.same_code(&LocalCode::canonical(Family::Rep2).expect("rep2 is canonical"))
}

/// Whether the right-degree-2 repetition setting with a transitive
/// `b1⁻¹ b2` applies to this spec.
pub fn theorem1_eligible(spec: &CodeSpec, group: &FiniteGroup) -> Result<()> {
    if spec.b.len() != 2 {
        return Err(Error::Precondition(format!("|B| = {}, need 2", spec.b.len())));
    }
    if !is_repetition(&spec.c0p) || !is_repetition(&spec.c1p) {
        return Err(Error::Precondition("B-side local codes are not both the repetition code".into()));
    }
    let step = group.mul(group.inverse(spec.b[0]), spec.b[1]);
    if !group.is_right_transitive(step) {
        return Err(Error::Precondition(format!(
            "right multiplication by b1⁻¹b2 = {} is not transitive",
            group.label(step)
        )));
    }
    Ok(())
}

/// `k = k01 + k01⊥` for eligible specs, without building the code.
pub fn theorem1_dimension(spec: &CodeSpec) -> Result<usize> {
    let group = spec.validate()?;
    theorem1_dimension_in(spec, &group)
}

pub fn theorem1_dimension_in(spec: &CodeSpec, group: &FiniteGroup) -> Result<usize> {
    spec.validate_with(group)?;
    theorem1_eligible(spec, group)?;
    let data = intersection_data(&spec.c0, &spec.c1)?;
    Ok(data.k01 + data.k01_perp)
}

/// Parity-check matrices of the four classical Tanner codes living in single slices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMatrices {
    /// `[H0⊗I; (H1⊗I) L_A]` on `n_A |G|` bits. Kernel vectors give Z-type candidates.
    pub a_checks: BitMatrix,
    /// `[G0⊗I; (G1⊗I) L_A]`. Kernel vectors give X-type candidates.
    pub a_generators: BitMatrix,
    /// `[G0'⊗I; (G1'⊗I) R_B]` on `n_B |G|` bits. Kernel vectors give Z-type candidates.
    pub b_generators: BitMatrix,
    /// `[H0'⊗I; (H1'⊗I) R_B]`. Kernel vectors give X-type candidates.
    pub b_checks: BitMatrix,
}

impl SliceMatrices {
    pub fn all(&self) -> [&BitMatrix; 4] {
        [&self.a_checks, &self.a_generators, &self.b_generators, &self.b_checks]
    }
}

pub fn slice_check_matrices(spec: &CodeSpec) -> Result<SliceMatrices> {
    let group = spec.validate()?;
    slice_check_matrices_in(spec, &group)
}

pub fn slice_check_matrices_in(spec: &CodeSpec, group: &FiniteGroup) -> Result<SliceMatrices> {
    spec.validate_with(group)?;
    let order = group.order();
    // A slice is the layout with n_B = 1, B slice with n_A = 1.
    let a_layout = QubitLayout {
        n_a: spec.n_a(),
        n_b: 1,
        group_order: order,
    };
    let b_layout = QubitLayout {
        n_a: 1,
        n_b: spec.n_b(),
        group_order: order,
    };
    let a = &spec.a;
    let binv: Vec<usize> = spec.b.iter().map(|&b| group.inverse(b)).collect();
    let a_pair = |top: &BitMatrix, bottom: &BitMatrix| -> Result<BitMatrix> {
        BitMatrix::stack_vertical(&[
            &lift_block(top, a_layout, |_, _, g| g),
            &lift_block(bottom, a_layout, |i, _, g| group.mul(a[i], g)),
        ])
    };
    let b_pair = |top: &BitMatrix, bottom: &BitMatrix| -> Result<BitMatrix> {
        BitMatrix::stack_vertical(&[
            &lift_block(top, b_layout, |_, _, g| g),
            &lift_block(bottom, b_layout, |_, j, g| group.mul(g, binv[j])),
        ])
    };
    Ok(SliceMatrices {
        a_checks: a_pair(spec.c0.h(), spec.c1.h())?,
        a_generators: a_pair(spec.c0.g(), spec.c1.g())?,
        b_generators: b_pair(spec.c0p.g(), spec.c1p.g())?,
        b_checks: b_pair(spec.c0p.h(), spec.c1p.h())?,
    })
}
