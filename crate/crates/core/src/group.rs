//! Finite groups stored as multiplication tables, and their regular actions.
//!
//! Elements are indices `0..order`. Every constructor fixes a canonical
//! labelling, since element indices are part of a serialized code spec.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Axioms are re-checked in full up to this order; larger tables only get the
/// Latin-square, identity and inverse checks.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

/// A permutation of `0..n`, stored as the image of each point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        crate::gf2::check_permutation(&images, images.len())?;
        Ok(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Map composition `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    /// Permutation matrix with `P[x][p(x)] = 1`.
    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.len(), self.len());
        for (x, &y) in self.0.iter().enumerate() {
            m.set(x, y, true);
        }
        m
    }

    /// Length of the cycle through `start`.
    pub fn cycle_length(&self, start: usize) -> usize {
        let mut len = 1;
        let mut x = self.0[start];
        while x != start {
            x = self.0[x];
            len += 1;
        }
        len
    }
}

/// Choice of homomorphism `C4 → Aut(C4)` for the semidirect product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// The trivial action; the result is `C4 × C4`.
    Trivial,
    /// The generator acts by inversion, `b a b⁻¹ = a⁻¹`.
    Inversion,
}

impl FiniteGroup {
    /// Builds and validates a group from a raw multiplication table.
    /// `table[a][b]` is the index of `a·b`.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::input("group table is empty"));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::input(format!("row {a} of group table has {} entries, expected {order}", row.len())));
            }
            mul.extend_from_slice(row);
        }
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(l) => return Err(Error::input(format!("{} labels supplied for a group of order {order}", l.len()))),
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        Self::validated(order, mul, labels)
    }

    fn validated(order: usize, mul: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if mul.iter().any(|&x| x >= order) {
            return Err(Error::input("group table entry out of range"));
        }
        for a in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for b in 0..order {
                if std::mem::replace(&mut row_seen[mul[a * order + b]], true)
                    || std::mem::replace(&mut col_seen[mul[b * order + a]], true)
                {
                    return Err(Error::input(format!("group table is not a Latin square (element {a})")));
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::input("group table has no identity element"))?;
        let mut inverse = vec![0; order];
        for (a, inv) in inverse.iter_mut().enumerate() {
            // Latin square guarantees exactly one right inverse.
            let b = (0..order).find(|&b| mul[a * order + b] == identity).unwrap();
            if mul[b * order + a] != identity {
                return Err(Error::input(format!("element {a} has no two-sided inverse")));
            }
            *inv = b;
        }
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul[a * order + b];
                    for c in 0..order {
                        if mul[ab * order + c] != mul[a * order + mul[b * order + c]] {
                            return Err(Error::input(format!("multiplication is not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        Ok(Self {
            order,
            mul,
            identity,
            inverse,
            labels,
        })
    }

    /// Additive cyclic group `Z/m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("cyclic group order must be at least 1"));
        }
        let mul = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        let labels = (0..m).map(|i| i.to_string()).collect();
        Self::validated(m, mul, labels)
    }

    /// Componentwise product; `(g, h)` has index `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, n) = (g.order, h.order);
        let order = m * n;
        let mut mul = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let (x1, x2) = (x / n, x % n);
                let (y1, y2) = (y / n, y % n);
                mul[x * order + y] = g.mul(x1, y1) * n + h.mul(x2, y2);
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", g.labels[x / n], h.labels[x % n]))
            .collect();
        Self::validated(order, mul, labels).expect("product of groups is a group")
    }

    /// Quaternion group. Index `2u + s` is the unit `u ∈ {1, i, j, k}` with
    /// sign `s` (0 for +, 1 for −); index 0 is `+1`.
    pub fn quaternion8() -> Self {
        // unit products as (unit, sign) with 0=1, 1=i, 2=j, 3=k
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let mut mul = vec![0; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (u, s) = UNIT[x / 2][y / 2];
                mul[x * 8 + y] = 2 * u + (s ^ (x % 2) ^ (y % 2));
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::validated(8, mul, labels).expect("quaternion table is a group")
    }

    /// `C4 ⋊ C4 = ⟨a, b⟩` with `a⁴ = b⁴ = 1`. Element `a^x b^y` has index `4x + y`.
    pub fn semidirect_c4_c4(twist: Twist) -> Self {
        let mut mul = vec![0; 256];
        for p in 0..16 {
            for q in 0..16 {
                let (x1, y1) = (p / 4, p % 4);
                let (x2, y2) = (q / 4, q % 4);
                // b^y a^x = a^(±x) b^y
                let moved = match twist {
                    Twist::Inversion if y1 % 2 == 1 => (4 - x2) % 4,
                    _ => x2,
                };
                mul[p * 16 + q] = ((x1 + moved) % 4) * 4 + (y1 + y2) % 4;
            }
        }
        let labels = (0..16).map(|p| format!("({},{})", p / 4, p % 4)).collect();
        Self::validated(16, mul, labels).expect("semidirect table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Finds an element by its label, falling back to a plain index.
    pub fn element(&self, label: &str) -> Result<usize> {
        let label = label.trim();
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Ok(i);
        }
        match label.parse::<usize>() {
            Ok(i) if i < self.order => Ok(i),
            _ => Err(Error::input(format!("no group element labelled {label:?}"))),
        }
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `λ_a : g ↦ a·g`.
    pub fn left_regular_perm(&self, a: usize) -> Permutation {
        Permutation((0..self.order).map(|g| self.mul(a, g)).collect())
    }

    /// `ρ_b : g ↦ g·b⁻¹`.
    pub fn right_regular_perm(&self, b: usize) -> Permutation {
        let binv = self.inverse(b);
        Permutation((0..self.order).map(|g| self.mul(g, binv)).collect())
    }

    /// Whether `g ↦ g·x` is a single cycle through all of the group.
    pub fn is_right_transitive(&self, x: usize) -> bool {
        let step = Permutation((0..self.order).map(|g| self.mul(g, x)).collect());
        step.cycle_length(self.identity) == self.order
    }

    /// Closure of a set of elements under multiplication.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !std::mem::replace(&mut inside[y], true) {
                    queue.push_back(y);
                }
            }
        }
        inside
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = self.generated_subgroup(&gens);
        // Try high-order elements first so that fewer generators are needed.
        let mut candidates: Vec<usize> = (0..self.order).collect();
        candidates.sort_by_key(|&x| std::cmp::Reverse(self.element_order(x)));
        for x in candidates {
            if !inside[x] {
                gens.push(x);
                inside = self.generated_subgroup(&gens);
            }
        }
        gens
    }

    /// All automorphisms, each as the image of every element. Returns `None`
    /// when the group is too large for the brute-force generator search.
    pub fn automorphisms(&self) -> Option<Vec<Vec<usize>>> {
        if self.order > 64 {
            return None;
        }
        let gens = self.greedy_generators();
        let choices: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let ord = self.element_order(g);
                (0..self.order).filter(|&x| self.element_order(x) == ord).collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.extend_to_automorphism(&gens, &images) {
                out.push(map);
            }
            // odometer over the candidate images
            let mut pos = 0;
            loop {
                if pos == pick.len() {
                    out.sort();
                    return Some(out);
                }
                pick[pos] += 1;
                if pick[pos] < choices[pos].len() {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
        }
    }

    fn extend_to_automorphism(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        const UNSET: usize = usize::MAX;
        let mut map = vec![UNSET; self.order];
        map[self.identity] = self.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = self.mul(map[x], img);
                if map[y] == UNSET {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut hit = vec![false; self.order];
        for &v in &map {
            if v == UNSET || std::mem::replace(&mut hit[v], true) {
                return None;
            }
        }
        for a in 0..self.order {
            for b in 0..self.order {
                if map[self.mul(a, b)] != self.mul(map[a], map[b]) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("labels", &self.labels)
            .finish()
    }
}

/// Serializable description of a group, e.g. `product(cyclic(6), cyclic(2))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Cyclic(usize),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    Quaternion8,
    SemidirectC4C4(Twist),
    Table(Vec<Vec<usize>>),
}

impl GroupDescriptor {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupDescriptor::Cyclic(m) => FiniteGroup::cyclic(*m),
            GroupDescriptor::Product(a, b) => Ok(FiniteGroup::direct_product(&a.build()?, &b.build()?)),
            GroupDescriptor::Quaternion8 => Ok(FiniteGroup::quaternion8()),
            GroupDescriptor::SemidirectC4C4(t) => Ok(FiniteGroup::semidirect_c4_c4(*t)),
            GroupDescriptor::Table(rows) => FiniteGroup::from_table(rows, None),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(m) => write!(f, "cyclic({m})"),
            GroupDescriptor::Product(a, b) => write!(f, "product({a}, {b})"),
            GroupDescriptor::Quaternion8 => write!(f, "quaternion8"),
            GroupDescriptor::SemidirectC4C4(Twist::Inversion) => write!(f, "semidirect_c4_c4(nontrivial)"),
            GroupDescriptor::SemidirectC4C4(Twist::Trivial) => write!(f, "semidirect_c4_c4(trivial)"),
            GroupDescriptor::Table(rows) => {
                write!(f, "table(")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                    write!(f, "{}", cells.join(" "))?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = DescriptorParser { src: s, pos: 0 };
        let d = p.descriptor()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::parse_at(p.pos, format!("trailing input {:?}", &s[p.pos..])));
        }
        Ok(d)
    }
}

struct DescriptorParser<'a> {
    src: &'a str,
    pos: usize,
}

impl DescriptorParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse_at(self.pos, format!("expected {ch:?}")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let at = self.pos;
        let word = self.ident().to_string();
        word.parse()
            .map_err(|_| Error::parse_at(at, format!("expected a number, found {word:?}")))
    }

    fn descriptor(&mut self) -> Result<GroupDescriptor> {
        let at = self.pos;
        let name = self.ident().to_ascii_lowercase();
        match name.as_str() {
            "cyclic" => {
                self.expect('(')?;
                let m = self.number()?;
                self.expect(')')?;
                Ok(GroupDescriptor::Cyclic(m))
            }
            "product" => {
                self.expect('(')?;
                let a = self.descriptor()?;
                self.expect(',')?;
                let b = self.descriptor()?;
                self.expect(')')?;
                Ok(GroupDescriptor::Product(Box::new(a), Box::new(b)))
            }
            "quaternion8" => Ok(GroupDescriptor::Quaternion8),
            "semidirect_c4_c4" => {
                self.expect('(')?;
                let t_at = self.pos;
                let twist = match self.ident() {
                    "nontrivial" => Twist::Inversion,
                    "trivial" => Twist::Trivial,
                    other => {
                        return Err(Error::parse_at(t_at, format!("unknown twist {other:?}, expected nontrivial or trivial")))
                    }
                };
                self.expect(')')?;
                Ok(GroupDescriptor::SemidirectC4C4(twist))
            }
            "table" => {
                self.expect('(')?;
                let close = self.src[self.pos..]
                    .find(')')
                    .ok_or_else(|| Error::parse_at(self.pos, "unterminated table"))?;
                let body = &self.src[self.pos..self.pos + close];
                let rows = body
                    .split(';')
                    .map(|row| {
                        row.split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|t| !t.is_empty())
                            .map(|t| {
                                t.parse::<usize>()
                                    .map_err(|_| Error::parse_at(self.pos, format!("bad table entry {t:?}")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.pos += close + 1;
                Ok(GroupDescriptor::Table(rows))
            }
            other => Err(Error::parse_at(at, format!("unknown group family {other:?}"))),
        }
    }
}
