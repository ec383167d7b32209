//! Explicit logical operators.
//!
//! The base code has a symplectic basis built from pivot bases of the
//! intersection codes; every operator in it lives on one row or one column
//! of the `n_A × n_B` grid. For odd `|G|` with no change in dimension, base
//! logicals repeated over the fiber stay logical in the lift. Slice codewords
//! give further candidates that may or may not be trivial.

use crate::code::{build_base, build_lifted_in, slice_check_matrices_in, CodeSpec, CssCode};
use crate::distance::Side;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, Echelon};
use crate::local::{intersection_data, LocalCode};

/// Which half of the base-code basis a pair belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicalFamily {
    /// `X = e_{i_p} ⊗ v_q`, `Z = u_p ⊗ e_{j_q}` from `C01` and `C01'`.
    Primary,
    /// `X = u⊥_r ⊗ e_{j⊥_s}`, `Z = e_{i⊥_r} ⊗ v⊥_s` from `C01⊥` and `C01'⊥`.
    Perp,
}

/// A single grid row (fixed `i`) or column (fixed `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridLine {
    Row(usize),
    Column(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalPair {
    pub x: BitVec,
    pub z: BitVec,
    pub family: LogicalFamily,
    /// Index into the A-side basis (`p` or `r`).
    pub a_index: usize,
    /// Index into the B-side basis (`q` or `s`).
    pub b_index: usize,
    pub x_line: GridLine,
    pub z_line: GridLine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalBasis {
    pub n: usize,
    pub pairs: Vec<LogicalPair>,
}

impl LogicalBasis {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn x_ops(&self) -> impl Iterator<Item = &BitVec> {
        self.pairs.iter().map(|p| &p.x)
    }

    pub fn z_ops(&self) -> impl Iterator<Item = &BitVec> {
        self.pairs.iter().map(|p| &p.z)
    }

    /// `P[s][t] = ⟨x_s, z_t⟩`.
    pub fn pairing_matrix(&self) -> BitMatrix {
        let k = self.pairs.len();
        let mut m = BitMatrix::zeros(k, k);
        for (s, ps) in self.pairs.iter().enumerate() {
            for (t, pt) in self.pairs.iter().enumerate() {
                if ps.x.dot(&pt.z) {
                    m.set(s, t, true);
                }
            }
        }
        m
    }
}

fn unit(len: usize, i: usize) -> BitVec {
    let mut v = BitVec::zeros(len);
    v.set(i, true);
    v
}

/// `u ⊗ w` on the grid, with the B index varying fastest.
fn tensor(u: &BitVec, w: &BitVec) -> BitVec {
    let n_b = w.len();
    let mut out = BitVec::zeros(u.len() * n_b);
    for i in u.support() {
        for j in w.support() {
            out.set(i * n_b + j, true);
        }
    }
    out
}

fn basis_rows(e: &Echelon) -> Vec<(usize, BitVec)> {
    e.pivots.iter().copied().zip(e.matrix.row_iter()).collect()
}

/// Symplectic logical basis of the base code from RREF pivot bases.
pub fn base_logical_basis(c0: &LocalCode, c1: &LocalCode, c0p: &LocalCode, c1p: &LocalCode) -> Result<LogicalBasis> {
    let a = intersection_data(c0, c1)?;
    let b = intersection_data(c0p, c1p)?;
    let (n_a, n_b) = (a.n, b.n);
    let mut pairs = Vec::new();
    for (p, (ip, u)) in basis_rows(&a.basis).into_iter().enumerate() {
        for (q, (jq, v)) in basis_rows(&b.basis).into_iter().enumerate() {
            pairs.push(LogicalPair {
                x: tensor(&unit(n_a, ip), &v),
                z: tensor(&u, &unit(n_b, jq)),
                family: LogicalFamily::Primary,
                a_index: p,
                b_index: q,
                x_line: GridLine::Row(ip),
                z_line: GridLine::Column(jq),
            });
        }
    }
    for (r, (ir, u)) in basis_rows(&a.perp_basis).into_iter().enumerate() {
        for (s, (js, v)) in basis_rows(&b.perp_basis).into_iter().enumerate() {
            pairs.push(LogicalPair {
                x: tensor(&u, &unit(n_b, js)),
                z: tensor(&unit(n_a, ir), &v),
                family: LogicalFamily::Perp,
                a_index: r,
                b_index: s,
                x_line: GridLine::Column(js),
                z_line: GridLine::Row(ir),
            });
        }
    }
    Ok(LogicalBasis { n: n_a * n_b, pairs })
}

/// Cached echelon forms of a code's check matrices for repeated queries.
pub struct LogicalOracle<'a> {
    code: &'a CssCode,
    hx_rref: Echelon,
    hz_rref: Echelon,
}

impl<'a> LogicalOracle<'a> {
    pub fn new(code: &'a CssCode) -> Self {
        Self {
            code,
            hx_rref: code.hx().rref(),
            hz_rref: code.hz().rref(),
        }
    }

    /// Z side: `v ∈ ker(Hx)` and `v ∉ rowspace(Hz)`; X side symmetric.
    pub fn is_nontrivial(&self, v: &BitVec, side: Side) -> Result<bool> {
        let (checks, stabilizers) = match side {
            Side::Z => (self.code.hx(), &self.hz_rref),
            Side::X => (self.code.hz(), &self.hx_rref),
        };
        Ok(checks.mul_vec(v)?.is_zero() && !stabilizers.contains(v)?)
    }

    pub fn in_kernel(&self, v: &BitVec, side: Side) -> Result<bool> {
        let checks = match side {
            Side::Z => self.code.hx(),
            Side::X => self.code.hz(),
        };
        Ok(checks.mul_vec(v)?.is_zero())
    }
}

pub fn is_nontrivial_logical(code: &CssCode, v: &BitVec, side: Side) -> Result<bool> {
    LogicalOracle::new(code).is_nontrivial(v, side)
}

/// Expands each base logical `w` to `w ⊗ 1_G`. Requires odd `|G|` and equal
/// base and lifted dimensions; the result is checked for kernel membership
/// and an identity pairing matrix before it is returned.
pub fn replicate_base_logicals(base: &LogicalBasis, spec: &CodeSpec) -> Result<LogicalBasis> {
    let group = spec.validate()?;
    let order = group.order();
    if order % 2 == 0 {
        return Err(Error::Precondition(format!("|G| = {order} is even")));
    }
    let lifted = build_lifted_in(spec, &group)?;
    let base_code = build_base(&spec.c0, &spec.c1, &spec.c0p, &spec.c1p)?;
    let (k_base, k_lift) = (base_code.dimension()?, lifted.dimension()?);
    if k_base != k_lift {
        return Err(Error::Precondition(format!(
            "lifted dimension {k_lift} differs from base dimension {k_base}"
        )));
    }
    if base.n != base_code.n() || base.len() != k_base {
        return Err(Error::input("logical basis does not belong to this spec's base code"));
    }
    let expand = |w: &BitVec| {
        let mut out = BitVec::zeros(w.len() * order);
        for c in w.support() {
            for g in 0..order {
                out.set(c * order + g, true);
            }
        }
        out
    };
    let pairs: Vec<LogicalPair> = base
        .pairs
        .iter()
        .map(|p| LogicalPair {
            x: expand(&p.x),
            z: expand(&p.z),
            ..p.clone()
        })
        .collect();
    let out = LogicalBasis {
        n: lifted.n(),
        pairs,
    };
    let oracle = LogicalOracle::new(&lifted);
    for p in &out.pairs {
        if !oracle.in_kernel(&p.x, Side::X)? || !oracle.in_kernel(&p.z, Side::Z)? {
            return Err(Error::Integrity("replicated logical left the kernel".into()));
        }
    }
    if out.pairing_matrix() != BitMatrix::identity(out.len()) {
        return Err(Error::Integrity("replicated logicals are not symplectically paired".into()));
    }
    Ok(out)
}

/// The four slice codes, named by which local-code matrices they stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SliceKind {
    /// `[H0⊗I; (H1⊗I)L_A]`; codewords placed in column `j*` are Z-type.
    ACheck,
    /// `[G0⊗I; (G1⊗I)L_A]`; codewords placed in column `j*` are X-type.
    AGenerator,
    /// `[G0'⊗I; (G1'⊗I)R_B]`; codewords placed in row `i*` are Z-type.
    BGenerator,
    /// `[H0'⊗I; (H1'⊗I)R_B]`; codewords placed in row `i*` are X-type.
    BCheck,
}

impl SliceKind {
    pub fn side(self) -> Side {
        match self {
            SliceKind::ACheck | SliceKind::BGenerator => Side::Z,
            SliceKind::AGenerator | SliceKind::BCheck => Side::X,
        }
    }
}

/// Embeds a slice-code codeword into the lifted code. A-slice codewords are
/// indexed `i|G| + g` and land at `(i, index, g)`; B-slice codewords are
/// indexed `j|G| + g` and land at `(index, j, g)`.
pub fn slice_logical(spec: &CodeSpec, kind: SliceKind, index: usize, codeword: &BitVec) -> Result<(BitVec, Side)> {
    let group = spec.validate()?;
    let slices = slice_check_matrices_in(spec, &group)?;
    let matrix = match kind {
        SliceKind::ACheck => &slices.a_checks,
        SliceKind::AGenerator => &slices.a_generators,
        SliceKind::BGenerator => &slices.b_generators,
        SliceKind::BCheck => &slices.b_checks,
    };
    if !matrix.mul_vec(codeword)?.is_zero() {
        return Err(Error::input("vector is not a codeword of the slice code"));
    }
    let layout = spec.layout(group.order());
    let order = group.order();
    let a_side = matches!(kind, SliceKind::ACheck | SliceKind::AGenerator);
    let fixed_range = if a_side { layout.n_b } else { layout.n_a };
    if index >= fixed_range {
        return Err(Error::input(format!("slice index {index} out of range {fixed_range}")));
    }
    let mut out = BitVec::zeros(layout.n());
    for c in codeword.support() {
        let (line, g) = (c / order, c % order);
        let col = if a_side {
            layout.index(line, index, g)
        } else {
            layout.index(index, line, g)
        };
        out.set(col, true);
    }
    Ok((out, kind.side()))
}
