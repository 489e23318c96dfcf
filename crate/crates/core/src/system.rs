//! Linear constraint systems `A x = b` over Z_p: row supports `V_i`, row
//! solution sets `S_i`, and compatibility of row solutions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::zp::{self, gauss_solve, is_prime, AffineSolutionSet, Solution, ZpMatrix, ZpVector};

/// The on-disk system format: `{ "p": int, "A": [[int]], "b": [int] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub p: u64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

impl SystemFile {
    /// Parses the JSON form. Ragged `A` is a parse error, not a validation
    /// failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)?;
        if let Some(first) = file.a.first() {
            if let Some(i) = file.a.iter().position(|r| r.len() != first.len()) {
                return Err(Error::Parse(format!(
                    "ragged matrix: row {} has {} entries, row 1 has {}",
                    i + 1,
                    file.a[i].len(),
                    first.len()
                )));
            }
        }
        Ok(file)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = String::from("{\n");
        s.push_str(&format!("  \"p\": {},\n  \"A\": [\n", self.p));
        for (i, row) in self.a.iter().enumerate() {
            let sep = if i + 1 < self.a.len() { "," } else { "" };
            s.push_str(&format!("    {}{}\n", serde_json::to_string(row).unwrap(), sep));
        }
        s.push_str(&format!("  ],\n  \"b\": {}\n}}\n", serde_json::to_string(&self.b).unwrap()));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationItem {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub items: Vec<ValidationItem>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|it| it.status != CheckStatus::Fail)
    }

    pub fn item(&self, name: &str) -> Option<&ValidationItem> {
        self.items.iter().find(|it| it.name == name)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ValidationItem> {
        self.items.iter().filter(|it| it.status == CheckStatus::Warn)
    }
}

/// Structural and semantic checks on a raw system file. Never errors; the
/// verdicts are carried in the report.
pub fn validate_system(file: &SystemFile) -> ValidationReport {
    let mut items = Vec::new();
    let prime = is_prime(file.p) && file.p <= u32::MAX as u64;
    items.push(ValidationItem {
        name: "modulus-prime",
        status: if prime { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: if prime { format!("p = {} is prime", file.p) } else { format!("modulus {} is not prime", file.p) },
    });

    let m = file.a.len();
    let n = file.a.first().map_or(0, Vec::len);
    let ragged = file.a.iter().any(|r| r.len() != n);
    let shape_problem = if m == 0 || n == 0 {
        Some(format!("A must have at least one row and one column (got {m}x{n})"))
    } else if ragged {
        Some("A has rows of different lengths".to_string())
    } else if file.b.len() != m {
        Some(format!("b has length {} but A has {} rows; b must have one entry per row", file.b.len(), m))
    } else {
        None
    };
    items.push(ValidationItem {
        name: "shape",
        status: if shape_problem.is_some() { CheckStatus::Fail } else { CheckStatus::Pass },
        detail: shape_problem.clone().unwrap_or_else(|| format!("A is {m}x{n}, b has length {m}")),
    });

    if !prime || shape_problem.is_some() {
        return ValidationReport { items };
    }
    let sys = LinearSystem::from_file(file).expect("checked above");

    let empty_rows: Vec<usize> = (1..=m).filter(|&i| sys.row_is_zero(i) && sys.b.get(i - 1) != 0).collect();
    items.push(ValidationItem {
        name: "zero-rows",
        status: if empty_rows.is_empty() { CheckStatus::Pass } else { CheckStatus::Warn },
        detail: if empty_rows.is_empty() {
            "every zero row has b_i = 0".to_string()
        } else {
            format!(
                "rows {:?} are zero with b_i != 0: S_i is empty and the game algebra is the zero algebra",
                empty_rows
            )
        },
    });

    let mut dups = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if sys.a.row(i) == sys.a.row(j) {
                dups.push((i + 1, j + 1));
            }
        }
    }
    items.push(ValidationItem {
        name: "duplicate-rows",
        status: if dups.is_empty() { CheckStatus::Pass } else { CheckStatus::Warn },
        detail: if dups.is_empty() {
            "no repeated rows".to_string()
        } else {
            format!("identical rows of A: {:?}", dups)
        },
    });

    let consistent = sys.solve().is_consistent();
    items.push(ValidationItem {
        name: "classical-solvability",
        status: if consistent { CheckStatus::Pass } else { CheckStatus::Warn },
        detail: if consistent {
            "system is consistent".to_string()
        } else {
            "system inconsistent (no classical solution)".to_string()
        },
    });
    ValidationReport { items }
}

/// The system `A x = b` with `A` an m x n matrix over Z_p and `b` of
/// length m.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    a: ZpMatrix,
    b: ZpVector,
}

/// Per-row data: the support `V_i` and the restricted solutions `S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowData {
    /// 1-based row index.
    pub index: usize,
    pub support: BTreeSet<usize>,
    /// Full-length vectors, zero outside `support`, in enumeration order.
    pub solutions: Vec<ZpVector>,
}

impl LinearSystem {
    pub fn new(p: u32, a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        let a = ZpMatrix::new(p, a)?;
        let b = ZpVector::new(p, b)?;
        Self::from_parts(a, b)
    }

    pub fn from_parts(a: ZpMatrix, b: ZpVector) -> Result<Self> {
        if a.modulus() != b.modulus() {
            return Err(Error::DimensionMismatch("moduli of A and b differ".into()));
        }
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch(format!("b has length {} but A has {} rows", b.len(), a.rows())));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::DimensionMismatch("A must be nonempty".into()));
        }
        Ok(LinearSystem { a, b })
    }

    pub fn from_file(file: &SystemFile) -> Result<Self> {
        let p = u32::try_from(file.p).map_err(|_| Error::NotPrime(file.p))?;
        Self::new(p, &file.a, &file.b)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&SystemFile::from_json(text)?)
    }

    pub fn to_file(&self) -> SystemFile {
        SystemFile {
            p: self.p() as u64,
            a: (0..self.m()).map(|r| self.a.row(r).iter().map(|&e| e as i64).collect()).collect(),
            b: self.b.entries().iter().map(|&e| e as i64).collect(),
        }
    }

    /// SHA-256 of the canonical (reduced) compact JSON form.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(&self.to_file()).expect("serializable");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn p(&self) -> u32 {
        self.a.modulus()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &ZpMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &ZpVector {
        &self.b
    }

    /// Coefficient `A_{i,j}` for 1-based `i`, `j`.
    pub fn coeff(&self, i: usize, j: usize) -> u32 {
        self.a.get(i - 1, j - 1)
    }

    /// `b_i` for 1-based `i`.
    pub fn rhs_entry(&self, i: usize) -> u32 {
        self.b.get(i - 1)
    }

    /// The same matrix with `b = 0`.
    pub fn homogeneous(&self) -> LinearSystem {
        LinearSystem { a: self.a.clone(), b: ZpVector::zeros(self.p(), self.m()) }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b.is_zero()
    }

    pub fn solve(&self) -> Solution {
        gauss_solve(&self.a, &self.b).expect("shapes checked at construction")
    }

    pub fn is_solution(&self, x: &ZpVector) -> bool {
        x.modulus() == self.p() && x.len() == self.n() && self.a.mul_vec(x).map(|ax| ax == self.b).unwrap_or(false)
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.m() {
            return Err(Error::RowOutOfRange { row: i, rows: self.m() });
        }
        Ok(())
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.a.row(i - 1).iter().all(|&e| e == 0)
    }

    /// `V_i`: the support of row `i`.
    pub fn row_support(&self, i: usize) -> Result<BTreeSet<usize>> {
        self.check_row(i)?;
        Ok(zp::support(&self.a.row_vector(i - 1)))
    }

    /// `S_i` as an affine set in Z_p^n, or `None` for a zero row with
    /// `b_i != 0`.
    pub fn row_affine_set(&self, i: usize) -> Result<Option<AffineSolutionSet>> {
        let support: Vec<usize> = self.row_support(i)?.into_iter().collect();
        let p = self.p();
        let n = self.n();
        let bi = self.rhs_entry(i);
        let Some((&lead, free)) = support.split_first() else {
            return Ok((bi == 0).then(|| AffineSolutionSet { particular: ZpVector::zeros(p, n), basis: vec![] }));
        };
        // Pivot on the lowest support column; each other support column is free.
        let lead_inv =
            zp::FieldElem::reduced(self.coeff(i, lead) as i64, p).inverse().expect("support entry is nonzero").value();
        let mul = |a: u32, b: u32| ((a as u64 * b as u64) % p as u64) as u32;
        let mut particular = vec![0u32; n];
        particular[lead - 1] = mul(bi, lead_inv);
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u32; n];
                v[f - 1] = 1;
                v[lead - 1] = (p - mul(self.coeff(i, f), lead_inv)) % p;
                ZpVector::from_reduced(p, v)
            })
            .collect();
        Ok(Some(AffineSolutionSet { particular: ZpVector::from_reduced(p, particular), basis }))
    }

    /// `S_i`: every `x` with `row_i . x = b_i` and `supp(x)` inside `V_i`,
    /// in coefficient-lexicographic enumeration order.
    pub fn row_solutions(&self, i: usize, cap: u64) -> Result<Vec<ZpVector>> {
        match self.row_affine_set(i)? {
            Some(set) => zp::enumerate_affine(&set, cap),
            None => Ok(vec![]),
        }
    }

    /// `V_i` and `S_i` for every row.
    pub fn rows(&self, cap: u64) -> Result<Vec<RowData>> {
        (1..=self.m())
            .map(|i| Ok(RowData { index: i, support: self.row_support(i)?, solutions: self.row_solutions(i, cap)? }))
            .collect()
    }

    /// Whether `x` lies in `S_i`.
    pub fn in_row_solutions(&self, i: usize, x: &ZpVector) -> Result<bool> {
        self.check_row(i)?;
        if x.modulus() != self.p() || x.len() != self.n() {
            return Ok(false);
        }
        let row = self.a.row(i - 1);
        let inside = x.entries().iter().zip(row).all(|(&xv, &a)| xv == 0 || a != 0);
        Ok(inside && zp::dot_slices(row, x.entries(), self.p()) == self.rhs_entry(i))
    }

    /// Compatibility of `x` in `S_i` and `y` in `S_j`: agreement on every
    /// shared support coordinate.
    pub fn compatible(&self, i: usize, j: usize, x: &ZpVector, y: &ZpVector) -> Result<bool> {
        if !self.in_row_solutions(i, x)? {
            return Err(Error::NotASolution(format!("{x} is not in S_{i}")));
        }
        if !self.in_row_solutions(j, y)? {
            return Err(Error::NotASolution(format!("{y} is not in S_{j}")));
        }
        Ok(self.agree_on_shared(i, j, x, y))
    }

    /// The compatibility predicate without membership checks.
    pub(crate) fn agree_on_shared(&self, i: usize, j: usize, x: &ZpVector, y: &ZpVector) -> bool {
        let ri = self.a.row(i - 1);
        let rj = self.a.row(j - 1);
        (0..self.n()).all(|k| ri[k] == 0 || rj[k] == 0 || x.get(k) == y.get(k))
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m() {
            writeln!(f, "{:?} | {}", self.a.row(i), self.b.get(i))?;
        }
        Ok(())
    }
}
