//! Exact arithmetic and linear algebra over the prime field Z_p.
//!
//! Vectors and matrices store reduced residues as `u32` and carry their
//! modulus; every binary operation checks that moduli agree. Indices handed
//! to users (supports, row numbers) are 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_modulus(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u64))
    }
}

/// An element of Z_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    p: u32,
}

impl FieldElem {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        check_modulus(p)?;
        Ok(Self::reduced(value, p))
    }

    pub(crate) fn reduced(value: i64, p: u32) -> Self {
        FieldElem { value: value.rem_euclid(p as i64) as u32, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        Some(FieldElem { value: pow_mod(self.value, self.p - 2, self.p), p: self.p })
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64 % p;
    let mut b = base as u64 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u32
}

fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FieldElem { value: add_mod(self.value, rhs.value, self.p), p: self.p }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FieldElem { value: sub_mod(self.value, rhs.value, self.p), p: self.p }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FieldElem { value: mul_mod(self.value, rhs.value, self.p), p: self.p }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> Self {
        FieldElem { value: sub_mod(0, self.value, self.p), p: self.p }
    }
}

/// A vector over Z_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZpVector {
    p: u32,
    entries: Vec<u32>,
}

impl ZpVector {
    /// Builds a vector, reducing every entry mod `p`.
    pub fn new(p: u32, entries: &[i64]) -> Result<Self> {
        check_modulus(p)?;
        Ok(Self::from_reduced(p, entries.iter().map(|&e| e.rem_euclid(p as i64) as u32).collect()))
    }

    pub(crate) fn from_reduced(p: u32, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < p));
        ZpVector { p, entries }
    }

    pub fn zeros(p: u32, n: usize) -> Self {
        ZpVector { p, entries: vec![0; n] }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at 0-based position `k`.
    pub fn get(&self, k: usize) -> u32 {
        self.entries[k]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn elem(&self, k: usize) -> FieldElem {
        FieldElem { value: self.entries[k], p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &ZpVector) -> Result<()> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} mod {} and length {} mod {}",
                self.len(),
                self.p,
                other.len(),
                other.p
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ZpVector) -> Result<ZpVector> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, add_mod))
    }

    pub fn try_sub(&self, other: &ZpVector) -> Result<ZpVector> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, sub_mod))
    }

    fn zip_with(&self, other: &ZpVector, f: fn(u32, u32, u32) -> u32) -> ZpVector {
        ZpVector {
            p: self.p,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b, self.p)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> ZpVector {
        ZpVector { p: self.p, entries: self.entries.iter().map(|&a| mul_mod(a, c, self.p)).collect() }
    }

    pub fn dot(&self, other: &ZpVector) -> Result<u32> {
        self.check_compatible(other)?;
        Ok(dot_slices(&self.entries, &other.entries, self.p))
    }

    /// Copy of `self` with every coordinate outside `keep` (1-based) zeroed.
    pub fn restricted_to(&self, keep: &BTreeSet<usize>) -> ZpVector {
        ZpVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(k, &e)| if keep.contains(&(k + 1)) { e } else { 0 })
                .collect(),
        }
    }
}

pub(crate) fn dot_slices(a: &[u32], b: &[u32], p: u32) -> u32 {
    let p64 = p as u64;
    a.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + x as u64 * y as u64) % p64) as u32
}

impl fmt::Display for ZpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Support of `v`: the 1-based indices of its nonzero entries.
pub fn support(v: &ZpVector) -> BTreeSet<usize> {
    v.entries.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, _)| k + 1).collect()
}

/// A dense row-major matrix over Z_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ZpMatrix {
    /// Builds a matrix from rows, reducing entries mod `p`. Ragged input is
    /// rejected.
    pub fn new(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        check_modulus(p)?;
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row {} has {} entries, expected {}", i + 1, r.len(), cols)));
        }
        let data = rows.iter().flatten().map(|&e| e.rem_euclid(p as i64) as u32).collect();
        Ok(ZpMatrix { p, rows: rows.len(), cols, data })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    /// Row at 0-based index `r`.
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> ZpVector {
        ZpVector::from_reduced(self.p, self.row(r).to_vec())
    }

    pub fn mul_vec(&self, x: &ZpVector) -> Result<ZpVector> {
        if x.p != self.p || x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix mod {} times vector of length {} mod {}",
                self.rows,
                self.cols,
                self.p,
                x.len(),
                x.p
            )));
        }
        Ok(ZpVector::from_reduced(
            self.p,
            (0..self.rows).map(|r| dot_slices(self.row(r), &x.entries, self.p)).collect(),
        ))
    }

    /// Rank via row reduction.
    pub fn rank(&self) -> usize {
        let zero = ZpVector::zeros(self.p, self.rows);
        rref(self, &zero).pivots.len()
    }
}

/// `particular + span(basis)`: the solutions of a consistent system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutionSet {
    pub particular: ZpVector,
    pub basis: Vec<ZpVector>,
}

impl AffineSolutionSet {
    pub fn ambient_dim(&self) -> usize {
        self.particular.len()
    }

    pub fn modulus(&self) -> u32 {
        self.particular.p
    }

    /// Number of members, `p^|basis|`, saturating.
    pub fn cardinality(&self) -> u128 {
        (self.modulus() as u128).checked_pow(self.basis.len() as u32).unwrap_or(u128::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Consistent { set: AffineSolutionSet, rank: usize },
    Inconsistent { rank: usize },
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent { .. })
    }

    pub fn affine_set(&self) -> Option<&AffineSolutionSet> {
        match self {
            Solution::Consistent { set, .. } => Some(set),
            Solution::Inconsistent { .. } => None,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Solution::Consistent { rank, .. } | Solution::Inconsistent { rank } => *rank,
        }
    }
}

struct Rref {
    /// Augmented matrix rows, each of length `cols + 1`.
    rows: Vec<Vec<u32>>,
    /// Pivot column per nonzero row, ascending.
    pivots: Vec<usize>,
}

fn rref(a: &ZpMatrix, b: &ZpVector) -> Rref {
    let p = a.p;
    let n = a.cols;
    let mut rows: Vec<Vec<u32>> = (0..a.rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b.entries[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..n {
        let Some(found) = (lead..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(lead, found);
        let inv = FieldElem { value: rows[lead][col], p }.inverse().expect("nonzero pivot");
        for e in rows[lead].iter_mut() {
            *e = mul_mod(*e, inv.value, p);
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for c in col..=n {
                row[c] = sub_mod(row[c], mul_mod(factor, pivot_row[c], p), p);
            }
        }
        pivots.push(col);
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    Rref { rows, pivots }
}

/// Solves `A x = b` exactly by reduced row echelon form.
///
/// Pivot columns are chosen left to right, so the particular solution (free
/// variables set to zero) and the kernel basis (one vector per free column,
/// in ascending column order) are reproducible.
pub fn gauss_solve(a: &ZpMatrix, b: &ZpVector) -> Result<Solution> {
    if a.p != b.p || a.rows != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix mod {} with right-hand side of length {} mod {}",
            a.rows,
            a.cols,
            a.p,
            b.len(),
            b.p
        )));
    }
    let p = a.p;
    let n = a.cols;
    let Rref { rows, pivots } = rref(a, b);
    let rank = pivots.len();
    if rows[rank..].iter().any(|row| row[n] != 0) {
        return Ok(Solution::Inconsistent { rank });
    }

    let mut particular = vec![0u32; n];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = rows[r][n];
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u32; n];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, rows[r][fc], p);
            }
            ZpVector::from_reduced(p, v)
        })
        .collect();
    Ok(Solution::Consistent {
        set: AffineSolutionSet { particular: ZpVector::from_reduced(p, particular), basis },
        rank,
    })
}

/// Lists every member of `set`, ordered lexicographically by coefficient
/// tuple (the first basis vector's coefficient is most significant).
pub fn enumerate_affine(set: &AffineSolutionSet, cap: u64) -> Result<Vec<ZpVector>> {
    let count = set.cardinality();
    if count > cap as u128 {
        return Err(Error::EnumerationTooLarge { requested: count, cap });
    }
    let p = set.modulus();
    let k = set.basis.len();
    let mut coeffs = vec![0u32; k];
    let mut out = Vec::with_capacity(count as usize);
    loop {
        let mut v = set.particular.clone();
        for (c, b) in coeffs.iter().zip(&set.basis) {
            if *c != 0 {
                v = v.zip_with(&b.scale(*c), add_mod);
            }
        }
        out.push(v);
        // odometer, last coefficient fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}
