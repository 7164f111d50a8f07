//! Prime fields, row vectors and reduced row-echelon subspaces.
//!
//! Over GF(2) rows are packed 64 entries to a word and every elimination step
//! is a word-wise XOR. Other primes store one byte per entry.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),
}

/// The prime field GF(p), with p < 256.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
}

impl Default for Field {
    fn default() -> Self {
        Field::GF2
    }
}

impl TryFrom<u32> for Field {
    type Error = FieldError;
    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

impl Field {
    pub const GF2: Field = Field { p: 2 };

    pub fn new(p: u32) -> Result<Field, FieldError> {
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if prime && p < 256 {
            Ok(Field { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn is_binary(self) -> bool {
        self.p == 2
    }

    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        let mut result = 1u32;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Store {
    Bits(Vec<u64>),
    Bytes(Vec<u8>),
}

/// A vector over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    len: usize,
    store: Store,
}

impl PartialOrd for Row {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Row {
    /// Lexicographic on the entry sequence.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then_with(|| (0..self.len).map(|i| self.get(i)).cmp((0..other.len).map(|i| other.get(i))))
    }
}

impl Row {
    pub fn zero(field: Field, len: usize) -> Row {
        let store = if field.is_binary() { Store::Bits(vec![0; len.div_ceil(64)]) } else { Store::Bytes(vec![0; len]) };
        Row { len, store }
    }

    pub fn unit(field: Field, len: usize, i: usize) -> Row {
        let mut r = Row::zero(field, len);
        r.set(i, 1);
        r
    }

    pub fn from_entries(field: Field, entries: &[u32]) -> Row {
        let mut r = Row::zero(field, entries.len());
        for (i, &e) in entries.iter().enumerate() {
            r.set(i, e % field.p());
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u32 {
        match &self.store {
            Store::Bits(w) => ((w[i / 64] >> (i % 64)) & 1) as u32,
            Store::Bytes(b) => b[i] as u32,
        }
    }

    pub fn set(&mut self, i: usize, v: u32) {
        match &mut self.store {
            Store::Bits(w) => {
                if v & 1 == 1 {
                    w[i / 64] |= 1 << (i % 64);
                } else {
                    w[i / 64] &= !(1 << (i % 64));
                }
            }
            Store::Bytes(b) => b[i] = v as u8,
        }
    }

    pub fn entries(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Bits(w) => w.iter().all(|&x| x == 0),
            Store::Bytes(b) => b.iter().all(|&x| x == 0),
        }
    }

    /// Index of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        match &self.store {
            Store::Bits(w) => w.iter().enumerate().find(|(_, &x)| x != 0).map(|(k, &x)| k * 64 + x.trailing_zeros() as usize),
            Store::Bytes(b) => b.iter().position(|&x| x != 0),
        }
    }

    /// Nonzero entries as (index, value).
    pub fn support(&self) -> Vec<(usize, u32)> {
        match &self.store {
            Store::Bits(w) => {
                let mut out = Vec::new();
                for (k, &word) in w.iter().enumerate() {
                    let mut x = word;
                    while x != 0 {
                        let t = x.trailing_zeros() as usize;
                        out.push((k * 64 + t, 1));
                        x &= x - 1;
                    }
                }
                out
            }
            Store::Bytes(b) => b.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x as u32)).collect(),
        }
    }

    /// self += a * x
    pub fn axpy(&mut self, field: Field, a: u32, x: &Row) {
        debug_assert_eq!(self.len, x.len);
        if a.is_multiple_of(field.p()) {
            return;
        }
        match (&mut self.store, &x.store) {
            (Store::Bits(w), Store::Bits(xw)) => {
                for (d, s) in w.iter_mut().zip(xw) {
                    *d ^= *s;
                }
            }
            (Store::Bytes(b), Store::Bytes(xb)) => {
                let p = field.p();
                for (d, &s) in b.iter_mut().zip(xb) {
                    if s != 0 {
                        *d = ((*d as u32 + a * s as u32) % p) as u8;
                    }
                }
            }
            _ => panic!("mixed row representations"),
        }
    }

    pub fn scale(&mut self, field: Field, a: u32) {
        if let Store::Bytes(b) = &mut self.store {
            for d in b.iter_mut() {
                *d = field.mul(*d as u32, a) as u8;
            }
        } else if a.is_multiple_of(2) {
            if let Store::Bits(w) = &mut self.store {
                w.iter_mut().for_each(|x| *x = 0);
            }
        }
    }

    /// The concatenation `self ++ other`.
    pub fn concat(&self, field: Field, other: &Row) -> Row {
        let mut r = Row::zero(field, self.len + other.len);
        for (i, v) in self.support() {
            r.set(i, v);
        }
        for (i, v) in other.support() {
            r.set(self.len + i, v);
        }
        r
    }

    /// Entries `range` as a new row.
    pub fn slice(&self, field: Field, from: usize, to: usize) -> Row {
        let mut r = Row::zero(field, to - from);
        for (i, v) in self.support() {
            if i >= from && i < to {
                r.set(i - from, v);
            }
        }
        r
    }
}

/// A dense matrix stored by rows. With the row-vector convention, `x * A` is the
/// sum of `x[i] * A.rows[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub cols: usize,
    pub rows: Vec<Row>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { cols, rows: vec![Row::zero(field, cols); rows] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        Matrix { cols: n, rows: (0..n).map(|i| Row::unit(field, n, i)).collect() }
    }

    pub fn from_entries(field: Field, cols: usize, entries: &[Vec<u32>]) -> Matrix {
        Matrix { cols, rows: entries.iter().map(|r| Row::from_entries(field, r)).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn entries(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(Row::entries).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i].get(j)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Row::is_zero)
    }

    pub fn vec_mul(&self, field: Field, x: &Row) -> Row {
        let mut out = Row::zero(field, self.cols);
        for (i, a) in x.support() {
            out.axpy(field, a, &self.rows[i]);
        }
        out
    }

    pub fn mul(&self, field: Field, other: &Matrix) -> Matrix {
        Matrix { cols: other.cols, rows: self.rows.iter().map(|r| other.vec_mul(field, r)).collect() }
    }

    pub fn rank(&self, field: Field) -> usize {
        Subspace::span(field, self.cols, self.rows.iter().cloned()).dim()
    }
}

/// A subspace of GF(p)^n held as a fully reduced row-echelon basis. Two equal
/// subspaces have identical bases, so derived equality and hashing are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, rows: (0..ambient).map(|i| Row::unit(field, ambient, i)).collect(), pivots: (0..ambient).collect() }
    }

    pub fn span(field: Field, ambient: usize, vecs: impl IntoIterator<Item = Row>) -> Subspace {
        let mut s = Subspace::zero(field, ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that carry no pivot; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    /// Reduces `v` modulo the subspace; the result vanishes on every pivot column.
    pub fn reduce(&self, v: &mut Row) {
        let f = self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let a = v.get(p);
            if a != 0 {
                v.axpy(f, f.neg(a), row);
            }
        }
    }

    pub fn contains(&self, v: &Row) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the span. Returns false when it was already inside.
    pub fn insert(&mut self, mut v: Row) -> bool {
        let f = self.field;
        self.reduce(&mut v);
        let Some(p) = v.leading() else { return false };
        let lead = v.get(p);
        if lead != 1 {
            v.scale(f, f.inv(lead));
        }
        for row in &mut self.rows {
            let a = row.get(p);
            if a != 0 {
                row.axpy(f, f.neg(a), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coefficients of `v` with respect to the echelon basis. `v` must lie in the span.
    pub fn coords(&self, v: &Row) -> Vec<u32> {
        self.pivots.iter().map(|&p| v.get(p)).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> Row {
        let mut out = Row::zero(self.field, self.ambient);
        for (row, &a) in self.rows.iter().zip(coeffs) {
            out.axpy(self.field, a, row);
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut s = big.clone();
        for r in &small.rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains(r))
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let f = self.field;
        let n = self.ambient;
        let mut z = Subspace::zero(f, 2 * n);
        for r in &self.rows {
            z.insert(r.concat(f, r));
        }
        for r in &other.rows {
            z.insert(r.concat(f, &Row::zero(f, n)));
        }
        let mut out = Subspace::zero(f, n);
        for (row, &p) in z.rows.iter().zip(&z.pivots) {
            if p >= n {
                out.insert(row.slice(f, n, 2 * n));
            }
        }
        out
    }

    /// Whether the intersection with `other` is nonzero, by a dimension count.
    pub fn meets(&self, other: &Subspace) -> bool {
        self.sum(other).dim() < self.dim() + other.dim()
    }

    /// Every vector of the span, in a fixed order. Only for small dimensions.
    pub fn elements(&self) -> Vec<Row> {
        let p = self.field.p() as usize;
        let total = p.pow(self.dim() as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u32; self.dim()];
        for _ in 0..total {
            out.push(self.combine(&coeffs));
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < self.field.p() {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

/// Solution set of an affine system over GF(p).
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: Row,
    pub kernel: Vec<Row>,
}

/// Accumulates equations `a . x = b` in `unknowns` variables.
///
/// Each equation is stored as the row `(a | b)`; elimination keeps at most
/// `unknowns + 1` rows however many equations arrive.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    unknowns: usize,
    eqs: Subspace,
}

impl LinearSystem {
    pub fn new(field: Field, unknowns: usize) -> LinearSystem {
        LinearSystem { unknowns, eqs: Subspace::zero(field, unknowns + 1) }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    /// Adds an equation given as the row `(a | b)` of length `unknowns + 1`.
    pub fn push(&mut self, eq: Row) {
        self.eqs.insert(eq);
    }

    pub fn solve(&self) -> Option<AffineSolution> {
        let f = self.eqs.field;
        let n = self.unknowns;
        if self.eqs.pivots.last() == Some(&n) {
            return None;
        }
        let mut particular = Row::zero(f, n);
        for (row, &p) in self.eqs.rows.iter().zip(&self.eqs.pivots) {
            particular.set(p, row.get(n));
        }
        let mut kernel = Vec::new();
        for j in self.eqs.free_columns() {
            if j == n {
                continue;
            }
            let mut k = Row::unit(f, n, j);
            for (row, &p) in self.eqs.rows.iter().zip(&self.eqs.pivots) {
                let a = row.get(j);
                if a != 0 {
                    k.set(p, f.neg(a));
                }
            }
            kernel.push(k);
        }
        Some(AffineSolution { particular, kernel })
    }
}
