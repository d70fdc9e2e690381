//! Exact rank machinery: fields, sparse vectors, and a fully reduced echelon
//! basis that supports membership queries and incremental insertion.
//!
//! Matrices of side `N` are vectorized row-major, position `x * N + y`, and
//! the same convention is used for the whole computation.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `2^61 - 1`.
pub const DEFAULT_PRIME_1: u64 = 2_305_843_009_213_693_951;
/// The largest prime below `2^61 - 1`.
pub const DEFAULT_PRIME_2: u64 = 2_305_843_009_213_693_921;

/// A field whose elements are handled through a (possibly stateful) context.
pub trait Field: Clone + Send + Sync + Debug {
    type Elem: Clone + PartialEq + Send + Sync + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn from_i64(&self, v: i64) -> Self::Elem {
        let m = self.from_u64(v.unsigned_abs());
        if v < 0 {
            self.sub(&self.zero(), &m)
        } else {
            m
        }
    }

    /// Modulus for prime fields, `None` in characteristic zero.
    fn modulus(&self) -> Option<u64> {
        None
    }
}

/// `F_p` for a prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn modulus(&self) -> Option<u64> {
        Some(self.p)
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_u64(&self, v: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A sparse vector: strictly increasing positions with nonzero values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVec<E> {
    entries: Vec<(u32, E)>,
}

impl<E: Clone> SparseVec<E> {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    /// Builds from entries that are already sorted, distinct and nonzero.
    pub fn from_sorted(entries: Vec<(u32, E)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self { entries }
    }

    /// The 0/1 vector with ones at `positions` (any order, duplicates ignored).
    pub fn indicator<F: Field<Elem = E>>(field: &F, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut pos: Vec<u32> = positions.into_iter().map(|p| p as u32).collect();
        pos.sort_unstable();
        pos.dedup();
        Self { entries: pos.into_iter().map(|p| (p, field.one())).collect() }
    }

    pub fn entries(&self) -> &[(u32, E)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<u32> {
        self.entries.first().map(|e| e.0)
    }

    pub fn get(&self, pos: u32) -> Option<&E> {
        self.entries.binary_search_by_key(&pos, |e| e.0).ok().map(|i| &self.entries[i].1)
    }
}

impl<E: Clone> Default for SparseVec<E> {
    fn default() -> Self {
        Self::new()
    }
}

/// Sums `(position, value)` terms, dropping zeros, into a sparse vector.
fn collect_terms<F: Field>(field: &F, mut terms: Vec<(u32, F::Elem)>) -> SparseVec<F::Elem> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(u32, F::Elem)> = Vec::with_capacity(terms.len());
    for (p, v) in terms {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 = field.add(&last.1, &v),
            _ => {
                if let Some(last) = out.last() {
                    if field.is_zero(&last.1) {
                        out.pop();
                    }
                }
                out.push((p, v));
            }
        }
    }
    if out.last().is_some_and(|l| field.is_zero(&l.1)) {
        out.pop();
    }
    SparseVec { entries: out }
}

/// Product of two `side x side` matrices given as vectorized sparse vectors.
pub fn mat_mul<F: Field>(
    field: &F,
    side: usize,
    left: &SparseVec<F::Elem>,
    right: &SparseVec<F::Elem>,
) -> SparseVec<F::Elem> {
    let right_rows = row_offsets(side, right);
    let mut acc: Vec<Option<F::Elem>> = vec![None; side];
    let mut touched: Vec<u32> = Vec::new();
    let mut out = Vec::new();
    let entries = left.entries();
    let mut start = 0;
    while start < entries.len() {
        let x = entries[start].0 as usize / side;
        let mut end = start;
        while end < entries.len() && entries[end].0 as usize / side == x {
            end += 1;
        }
        for (pos, lv) in &entries[start..end] {
            let z = *pos as usize % side;
            for (rpos, rv) in &right.entries()[right_rows[z]..right_rows[z + 1]] {
                let y = *rpos as usize % side;
                let term = field.mul(lv, rv);
                match &mut acc[y] {
                    Some(a) => *a = field.add(a, &term),
                    slot @ None => {
                        *slot = Some(term);
                        touched.push(y as u32);
                    }
                }
            }
        }
        touched.sort_unstable();
        for &y in &touched {
            let v = acc[y as usize].take().expect("touched slot holds a value");
            if !field.is_zero(&v) {
                out.push(((x * side) as u32 + y, v));
            }
        }
        touched.clear();
        start = end;
    }
    SparseVec { entries: out }
}

fn row_offsets<E>(side: usize, m: &SparseVec<E>) -> Vec<usize> {
    let mut offsets = vec![0usize; side + 1];
    for (pos, _) in &m.entries {
        offsets[*pos as usize / side + 1] += 1;
    }
    for i in 0..side {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

/// Transpose of a vectorized `side x side` matrix.
pub fn transpose<E: Clone>(side: usize, m: &SparseVec<E>) -> SparseVec<E> {
    let mut entries: Vec<(u32, E)> = m
        .entries
        .iter()
        .map(|(p, v)| {
            let (x, y) = (*p as usize / side, *p as usize % side);
            ((y * side + x) as u32, v.clone())
        })
        .collect();
    entries.sort_unstable_by_key(|e| e.0);
    SparseVec { entries }
}

/// A dense vector over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldVector {
    pub modulus: u64,
    pub entries: Vec<u64>,
}

impl PrimeFieldVector {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Self {
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Self { modulus, entries }
    }

    pub fn zeros(modulus: u64, len: usize) -> Self {
        Self { modulus, entries: vec![0; len] }
    }

    pub fn unit(modulus: u64, len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(modulus, len);
        v.entries[pos] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn to_sparse(&self) -> SparseVec<u64> {
        SparseVec {
            entries: self.entries.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i as u32, v)).collect(),
        }
    }

    fn from_sparse(modulus: u64, len: usize, v: &SparseVec<u64>) -> Self {
        let mut out = Self::zeros(modulus, len);
        for &(p, x) in v.entries() {
            out.entries[p as usize] = x;
        }
        out
    }
}

/// A fully reduced row echelon basis over `F`.
///
/// Every stored row has leading coefficient one at its pivot, which is also
/// its first nonzero position, and every other row is zero at that pivot.
#[derive(Debug, Clone)]
pub struct EchelonBasis<F: Field> {
    field: F,
    len: usize,
    rows: Vec<SparseVec<F::Elem>>,
    /// Row index for each position that is a pivot, `u32::MAX` otherwise.
    pivot_row: Vec<u32>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, len: usize) -> Self {
        Self { field, len, rows: Vec::new(), pivot_row: vec![u32::MAX; len] }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().map(|r| r.leading().expect("stored rows are nonzero"))
    }

    /// `v` minus its projection onto the span along the pivot coordinates;
    /// zero iff `v` lies in the span.
    pub fn reduce_sparse(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut terms: Vec<(u32, F::Elem)> = v.entries.clone();
        let mut hit = false;
        for (p, c) in &v.entries {
            let r = self.pivot_row[*p as usize];
            if r == u32::MAX {
                continue;
            }
            hit = true;
            for (q, x) in &self.rows[r as usize].entries {
                terms.push((*q, f.sub(&f.zero(), &f.mul(c, x))));
            }
        }
        if !hit {
            return v.clone();
        }
        collect_terms(f, terms)
    }

    /// Inserts `v` if it is independent of the current rows; returns whether
    /// the rank grew.
    pub fn insert_sparse(&mut self, v: &SparseVec<F::Elem>) -> bool {
        let w = self.reduce_sparse(v);
        self.insert_reduced(w)
    }

    /// Inserts a vector that is already reduced against this basis.
    pub fn insert_reduced(&mut self, w: SparseVec<F::Elem>) -> bool {
        let f = self.field.clone();
        let Some(pivot) = w.leading() else {
            return false;
        };
        debug_assert!(w.entries.iter().all(|(p, _)| self.pivot_row[*p as usize] == u32::MAX));
        let scale = f.inv(&w.entries[0].1);
        let w = SparseVec { entries: w.entries.into_iter().map(|(p, x)| (p, f.mul(&x, &scale))).collect() };
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(pivot).cloned() {
                let mut terms = std::mem::take(&mut row.entries);
                terms.extend(w.entries.iter().map(|(q, x)| (*q, f.sub(&f.zero(), &f.mul(&c, x)))));
                *row = collect_terms(&f, terms);
            }
        }
        self.pivot_row[pivot as usize] = self.rows.len() as u32;
        self.rows.push(w);
        true
    }

    pub fn contains(&self, v: &SparseVec<F::Elem>) -> bool {
        self.reduce_sparse(v).is_zero()
    }

    /// Checks the reduced-echelon invariants.
    pub fn check_invariants(&self) -> bool {
        let f = &self.field;
        self.rows.iter().enumerate().all(|(i, row)| {
            let Some(&(pivot, ref lead)) = row.entries.first() else {
                return false;
            };
            *lead == f.one()
                && self.pivot_row[pivot as usize] == i as u32
                && self.rows.iter().enumerate().all(|(j, other)| j == i || other.get(pivot).is_none())
        })
    }
}

impl EchelonBasis<PrimeField> {
    fn check_vector(&self, v: &PrimeFieldVector) -> Result<()> {
        if v.modulus != self.field.p() {
            return Err(Error::ModulusMismatch { expected: self.field.p(), found: v.modulus });
        }
        if v.len() != self.len {
            return Err(Error::LengthMismatch { expected: self.len, found: v.len() });
        }
        Ok(())
    }

    pub fn reduce(&self, v: &PrimeFieldVector) -> Result<PrimeFieldVector> {
        self.check_vector(v)?;
        let w = self.reduce_sparse(&v.to_sparse());
        Ok(PrimeFieldVector::from_sparse(v.modulus, self.len, &w))
    }

    pub fn insert(&mut self, v: &PrimeFieldVector) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.insert_sparse(&v.to_sparse()))
    }
}

/// Rank of a list of sparse vectors over `field`.
pub fn rank_of<F: Field>(field: F, len: usize, vectors: &[SparseVec<F::Elem>]) -> usize {
    let mut basis = EchelonBasis::new(field, len);
    for v in vectors {
        basis.insert_sparse(v);
    }
    basis.rank()
}
