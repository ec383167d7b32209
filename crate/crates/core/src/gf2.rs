//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words. Column `c` of a row lives in word
//! `c / 64` at bit `c % 64`, so the packed layout is identical on every
//! platform. Bits past the last column of a row are always zero.

use std::fmt;

use crate::error::{Error, Result};

pub const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Iterates the indices of set bits in a packed word slice.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * WORD_BITS + bit)
        })
    })
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn parity_of_and(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

/// A packed bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(Error::dim(format!("index {i} out of range for length {len}")));
            }
            v.set(i, true);
        }
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if !len.is_multiple_of(WORD_BITS) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD_BITS)) - 1;
            }
        }
        Self { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        popcount(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        ones(&self.words).collect()
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        xor_into(&mut self.words, &other.words);
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        parity_of_and(&self.words, &other.words)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl std::str::FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVec::zeros(s.chars().count());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::parse_at(i, format!("unexpected character {other:?} in bit string")))
                }
            }
        }
        Ok(v)
    }
}

/// Dense GF(2) matrix with word-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// The nonzero rows of the RREF; row `r` has its leading one at `pivots[r]`.
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `words` against the pivot rows in place. The result is zero
    /// exactly when the input lies in the row space.
    pub(crate) fn reduce_words(&self, words: &mut [u64]) {
        for (r, &p) in self.pivots.iter().enumerate() {
            if words[p / WORD_BITS] >> (p % WORD_BITS) & 1 == 1 {
                xor_into(words, self.matrix.row_words(r));
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.matrix.cols {
            return Err(Error::dim(format!(
                "vector of length {} tested against row space of width {}",
                v.len(),
                self.matrix.cols
            )));
        }
        let mut words = v.words.clone();
        self.reduce_words(&mut words);
        Ok(words.iter().all(|&w| w == 0))
    }

    /// Canonical kernel basis: one vector per free column, in increasing order
    /// of that column.
    pub fn kernel_basis(&self) -> BitMatrix {
        let cols = self.matrix.cols;
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = BitMatrix::zeros(free.len(), cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (r, &p) in self.pivots.iter().enumerate() {
                if self.matrix.get(r, f) {
                    out.set(k, p, true);
                }
            }
        }
        out
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors that all have length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::dim(format!("row {r} has length {}, expected {cols}", v.len())));
            }
            m.row_words_mut(r).copy_from_slice(&v.words);
        }
        Ok(m)
    }

    /// Parses rows written as strings of `0` and `1`.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| s.as_ref().parse::<BitVec>())
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitVec::len);
        Self::from_rows(cols, &parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        popcount(self.row_words(r))
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        ones(self.row_words(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        popcount(&self.data)
    }

    fn xor_row_within(&mut self, dst: usize, src: usize, from_word: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (d0, s0) = (dst * s, src * s);
        for w in from_word..s {
            let v = self.data[s0 + w];
            self.data[d0 + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.data.swap(a * s + w, b * s + w);
        }
    }

    /// Reduced row-echelon form. Pivots are chosen at the leftmost available
    /// column and the topmost candidate row, so the output is canonical.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let word = c / WORD_BITS;
            let mask = 1u64 << (c % WORD_BITS);
            let Some(p) = (rank..m.rows).find(|&r| m.data[r * m.stride + word] & mask != 0) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in 0..m.rows {
                if r != rank && m.data[r * m.stride + word] & mask != 0 {
                    m.xor_row_within(r, rank, word);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        m.rows = rank;
        m.data.truncate(rank * m.stride);
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; rows above the pivot never need clearing.
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let word = c / WORD_BITS;
            let mask = 1u64 << (c % WORD_BITS);
            let Some(p) = (rank..m.rows).find(|&r| m.data[r * m.stride + word] & mask != 0) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in rank + 1..m.rows {
                if m.data[r * m.stride + word] & mask != 0 {
                    m.xor_row_within(r, rank, word);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of `{v : M v^T = 0}`, one row per free column of the RREF.
    pub fn kernel_basis(&self) -> BitMatrix {
        self.rref().kernel_basis()
    }

    pub fn row_space_contains(&self, v: &BitVec) -> Result<bool> {
        self.rref().contains(v)
    }

    /// `M v^T` as a vector of length `rows`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::dim(format!(
                "matrix with {} columns applied to vector of length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if parity_of_and(self.row_words(r), &v.words) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in ones(self.row_words(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let (lo, hi) = (r * out.stride, (r + 1) * out.stride);
            for t in ones(self.row_words(r)) {
                xor_into(&mut out.data[lo..hi], other.row_words(t));
            }
        }
        Ok(out)
    }

    /// Kronecker product. Output column `i * other.cols + j` pairs column `i`
    /// of `self` with column `j` of `other`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ra in 0..self.rows {
            let a_support: Vec<usize> = ones(self.row_words(ra)).collect();
            for rb in 0..other.rows {
                let row = ra * other.rows + rb;
                for &ca in &a_support {
                    for cb in ones(other.row_words(rb)) {
                        out.set(row, ca * other.cols + cb, true);
                    }
                }
            }
        }
        out
    }

    pub fn stack_vertical(parts: &[&BitMatrix]) -> Result<BitMatrix> {
        let Some(first) = parts.first() else {
            return Ok(BitMatrix::zeros(0, 0));
        };
        let cols = first.cols;
        if let Some(bad) = parts.iter().find(|m| m.cols != cols) {
            return Err(Error::dim(format!(
                "cannot stack matrices with {} and {} columns",
                cols, bad.cols
            )));
        }
        let mut out = BitMatrix::zeros(0, cols);
        for m in parts {
            out.data.extend_from_slice(&m.data);
            out.rows += m.rows;
        }
        Ok(out)
    }

    /// Moves column `c` to position `perm[c]`.
    pub fn apply_column_permutation(&self, perm: &[usize]) -> Result<BitMatrix> {
        check_permutation(perm, self.cols)?;
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in ones(self.row_words(r)) {
                out.set(r, perm[c], true);
            }
        }
        Ok(out)
    }

    /// Basis (in RREF) of `rowspace(self) ∩ rowspace(other)`.
    pub fn intersect_row_spaces(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::dim(format!(
                "row spaces of width {} and {} cannot be intersected",
                self.cols, other.cols
            )));
        }
        // v is in rowspace(M) iff v is orthogonal to ker(M).
        let ka = self.kernel_basis();
        let kb = other.kernel_basis();
        let dual = BitMatrix::stack_vertical(&[&ka, &kb])?;
        Ok(dual.kernel_basis().rref().matrix)
    }

    /// All `2^rank` elements of the row space, starting from zero, in Gray-code order.
    pub fn row_space_elements(&self) -> Vec<BitVec> {
        let basis = self.rref().matrix;
        let k = basis.rows;
        assert!(k < 32, "row space too large to enumerate");
        let mut cur = BitVec::zeros(self.cols);
        let mut out = Vec::with_capacity(1 << k);
        out.push(cur.clone());
        for step in 1u64..(1u64 << k) {
            let flip = step.trailing_zeros() as usize;
            xor_into(&mut cur.words, basis.row_words(flip));
            out.push(cur.clone());
        }
        out
    }
}

/// Incrementally built echelon basis. Each stored row is reduced against all
/// earlier rows and is keyed by its lowest set bit.
#[derive(Clone, Debug)]
pub(crate) struct XorBasis {
    len: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl XorBasis {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            len,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub(crate) fn reduce(&self, words: &mut [u64]) {
        for (&p, row) in self.pivots.iter().zip(&self.rows) {
            if words[p / WORD_BITS] >> (p % WORD_BITS) & 1 == 1 {
                xor_into(words, row);
            }
        }
    }

    /// Adds `words` to the basis; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, words: &[u64]) -> bool {
        debug_assert_eq!(words.len(), words_for(self.len));
        let mut v = words.to_vec();
        self.reduce(&mut v);
        let lead = ones(&v).next();
        match lead {
            Some(p) => {
                self.pivots.push(p);
                self.rows.push(v);
                true
            }
            None => false,
        }
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::dim(format!("permutation of length {} applied to {n} columns", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::input(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_strings(rows).unwrap()
    }

    fn ham6_h() -> BitMatrix {
        m(&["100011", "010101", "001110"])
    }

    fn ham6_g() -> BitMatrix {
        m(&["011100", "101010", "110001"])
    }

    fn ham8_h() -> BitMatrix {
        m(&["10000111", "01001011", "00101101", "00011110"])
    }

    fn ham8_g() -> BitMatrix {
        m(&["01111000", "10110100", "11010010", "11100001"])
    }

    /// Rank by enumerating the row space: rank = log2 |span|.
    fn rank_by_span(a: &BitMatrix) -> usize {
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << a.rows()) {
            let mut v = BitVec::zeros(a.cols());
            for r in 0..a.rows() {
                if mask >> r & 1 == 1 {
                    v.xor_assign(&a.row(r));
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ham6_h().rank(), 3);
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
        let stack = BitMatrix::stack_vertical(&[&ham8_h(), &ham8_g()]).unwrap();
        // The extended Hamming code is self-dual: H and G span the same space.
        assert_eq!(rank_by_span(&stack), 4);
        assert_eq!(stack.rank(), 4);
        let mixed = BitMatrix::stack_vertical(&[&ham6_h(), &ham6_g()]).unwrap();
        assert_eq!(mixed.rank(), rank_by_span(&mixed));
    }

    #[test]
    fn rref_examples() {
        let e = BitMatrix::identity(3).rref();
        assert_eq!(e.matrix, BitMatrix::identity(3));
        assert_eq!(e.pivots, vec![0, 1, 2]);

        let e = m(&["11"]).rref();
        assert_eq!(e.matrix, m(&["11"]));
        assert_eq!(e.pivots, vec![0]);

        let e = m(&["110", "011", "101"]).rref();
        assert_eq!(e.matrix, m(&["101", "011"]));
        assert_eq!(e.pivots, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m(&["11"]).kernel_basis(), m(&["11"]));
        let k = BitMatrix::identity(5).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (0, 5));

        let k = ham6_h().kernel_basis();
        assert_eq!(k.rows(), 3);
        let g = ham6_g();
        for v in k.row_iter() {
            assert!(g.row_space_contains(&v).unwrap());
        }
        for v in g.row_iter() {
            assert!(k.row_space_contains(&v).unwrap());
        }
    }

    #[test]
    fn row_space_membership() {
        let a = m(&["110", "011"]);
        assert!(a.row_space_contains(&"101".parse().unwrap()).unwrap());
        assert!(!a.row_space_contains(&"100".parse().unwrap()).unwrap());
        assert!(a.row_space_contains(&BitVec::zeros(3)).unwrap());
        assert!(a.row_space_contains(&BitVec::zeros(4)).is_err());
    }

    #[test]
    fn kron_examples() {
        assert_eq!(BitMatrix::identity(2).kron(&BitMatrix::identity(3)), BitMatrix::identity(6));
        assert_eq!(m(&["11"]).kron(&m(&["11"])), m(&["1111"]));
        let k = ham6_h().kron(&m(&["11"]));
        // direct expansion: every bit of H is duplicated in place
        let expected: Vec<String> = ["100011", "010101", "001110"]
            .iter()
            .map(|row| row.chars().flat_map(|c| [c, c]).collect())
            .collect();
        assert_eq!(k, BitMatrix::from_bit_strings(&expected).unwrap());
        assert_eq!((k.rows(), k.cols()), (3, 12));
    }

    #[test]
    fn intersection_examples() {
        let g = ham6_g();
        let i = g.intersect_row_spaces(&g).unwrap();
        assert_eq!(i, g.rref().matrix);

        let i = m(&["10"]).intersect_row_spaces(&m(&["01"])).unwrap();
        assert_eq!((i.rows(), i.cols()), (0, 2));

        let shift: Vec<usize> = (0..6).map(|c| (c + 1) % 6).collect();
        let shifted = g.apply_column_permutation(&shift).unwrap();
        let expected = g.rank() + shifted.rank()
            - BitMatrix::stack_vertical(&[&g, &shifted]).unwrap().rank();
        let i = g.intersect_row_spaces(&shifted).unwrap();
        assert_eq!(i.rows(), expected);
        for v in i.row_iter() {
            assert!(g.row_space_contains(&v).unwrap());
            assert!(shifted.row_space_contains(&v).unwrap());
        }
        assert!(m(&["10"]).intersect_row_spaces(&m(&["100"])).is_err());
    }

    #[test]
    fn plumbing_examples() {
        let prod = ham6_h().multiply(&ham6_g().transpose()).unwrap();
        assert_eq!(prod, BitMatrix::zeros(3, 3));
        assert_eq!(
            BitMatrix::identity(3).apply_column_permutation(&[0, 1, 2]).unwrap(),
            BitMatrix::identity(3)
        );
        let s = BitMatrix::stack_vertical(&[&BitMatrix::zeros(2, 4), &BitMatrix::zeros(3, 4)]).unwrap();
        assert_eq!((s.rows(), s.cols()), (5, 4));
        assert!(BitMatrix::stack_vertical(&[&BitMatrix::zeros(2, 4), &BitMatrix::zeros(1, 3)]).is_err());
        assert!(ham6_h().multiply(&ham6_g()).is_err());
        assert!(BitMatrix::identity(3).apply_column_permutation(&[0, 0, 1]).is_err());
    }

    #[test]
    fn column_permutation_moves_columns() {
        let a = m(&["100", "010"]);
        let p = a.apply_column_permutation(&[2, 0, 1]).unwrap();
        assert_eq!(p, m(&["001", "100"]));
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let n = 150;
        let mut a = BitMatrix::zeros(3, n);
        a.set(0, 3, true);
        a.set(0, 140, true);
        a.set(1, 64, true);
        a.set(1, 140, true);
        a.set(2, 3, true);
        a.set(2, 64, true);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.kernel_basis().rows(), n - 2);
        assert_eq!(a.transpose().transpose(), a);
    }
}
