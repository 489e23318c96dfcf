//! Finite-dimensional representations of the solution group: generator
//! images, their JSON form, and the built-in sources.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::report::OMEGA_CONVENTION;
use crate::system::LinearSystem;
use crate::zp::ZpVector;

/// Images of `g_1..g_n` and `J` as `dim x dim` matrices.
///
/// `j_identified` asserts that `J` acts as `omega * I`, i.e. that the
/// representation factors through the quotient by `J - omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T> {
    p: u32,
    dim: usize,
    generators: Vec<Matrix<T>>,
    j: Matrix<T>,
    j_identified: bool,
}

impl<T: Scalar> Representation<T> {
    /// Assembles a representation, checking only that dimensions agree.
    pub fn new(p: u32, generators: Vec<Matrix<T>>, j: Matrix<T>, j_identified: bool) -> Result<Self> {
        let dim = j.dim();
        if let Some(k) = generators.iter().position(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "image of g{} has dimension {}, J has dimension {}",
                k + 1,
                generators[k].dim(),
                dim
            )));
        }
        Ok(Representation { p, dim, generators, j, j_identified })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of `g` generators.
    pub fn n(&self) -> usize {
        self.generators.len()
    }

    /// Image of `g_j`, 1-based.
    pub fn g(&self, j: usize) -> &Matrix<T> {
        &self.generators[j - 1]
    }

    pub fn j_image(&self) -> &Matrix<T> {
        &self.j
    }

    pub fn j_identified(&self) -> bool {
        self.j_identified
    }

    pub fn identity(&self) -> Matrix<T> {
        Matrix::identity(self.dim, self.p)
    }

    /// `omega^k * I`.
    pub fn omega_power(&self, k: i64) -> Matrix<T> {
        Matrix::scalar(self.dim, T::root_power(self.p, k), self.p)
    }

    /// `||U U* - I||_F` for every generator, labelled.
    pub fn unitarity_residuals(&self) -> Vec<(String, f64)> {
        let id = self.identity();
        self.generators
            .iter()
            .enumerate()
            .map(|(k, g)| (format!("g{}", k + 1), g))
            .chain(std::iter::once(("J".to_string(), &self.j)))
            .map(|(name, g)| (name, g.mul(&g.adjoint()).distance(&id)))
            .collect()
    }

    /// `||J - omega I||_F`.
    pub fn j_residual(&self) -> f64 {
        self.j.distance(&self.omega_power(1))
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        for (generator, residual) in self.unitarity_residuals() {
            if residual.is_nan() || residual > tol {
                return Err(Error::UnitarityViolation { generator, residual });
            }
        }
        Ok(())
    }

    pub fn to_complex(&self) -> Representation<Complex64> {
        Representation {
            p: self.p,
            dim: self.dim,
            generators: self.generators.iter().map(Matrix::to_complex).collect(),
            j: self.j.to_complex(),
            j_identified: self.j_identified,
        }
    }

    /// Replaces the image of `g_j` (1-based).
    pub fn with_generator(mut self, j: usize, image: Matrix<T>) -> Self {
        self.generators[j - 1] = image;
        self
    }
}

impl Representation<Complex64> {
    /// `U X U*` applied to every image.
    pub fn conjugated(&self, u: &Matrix<Complex64>) -> Self {
        let ua = u.adjoint();
        let conj = |m: &Matrix<Complex64>| u.mul(m).mul(&ua);
        Representation {
            p: self.p,
            dim: self.dim,
            generators: self.generators.iter().map(conj).collect(),
            j: conj(&self.j),
            j_identified: self.j_identified,
        }
    }
}

/// The one-dimensional representation of a classical solution:
/// `g_j -> omega^{x_j}`, `J -> omega`.
pub fn scalar_rep_from_solution<T: Scalar>(sys: &LinearSystem, xstar: &ZpVector) -> Result<Representation<T>> {
    if !sys.is_solution(xstar) {
        return Err(Error::NotASolution(format!("{xstar} does not solve the system")));
    }
    let p = sys.p();
    let generators = xstar.entries().iter().map(|&x| Matrix::scalar(1, T::root_power(p, x as i64), p)).collect();
    Representation::new(p, generators, Matrix::scalar(1, T::root_power(p, 1), p), true)
}

fn pauli(name: char) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match name {
        'I' => [[l, o], [o, l]],
        'X' => [[o, l], [l, o]],
        'Y' => [[o, -i], [i, o]],
        'Z' => [[l, o], [o, -l]],
        _ => unreachable!("not a Pauli label"),
    }
}

/// Kronecker product of two single-qubit Paulis, e.g. `"XZ"` for `X (x) Z`.
pub fn two_qubit_pauli(label: &str) -> Matrix<Complex64> {
    let mut chars = label.chars();
    let a = pauli(chars.next().expect("two labels"));
    let b = pauli(chars.next().expect("two labels"));
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in rows.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            *entry = a[r / 2][c / 2] * b[r % 2][c % 2];
        }
    }
    Matrix::from_rows(rows, 2).expect("square")
}

/// Pauli labels of the magic-square operators, grid row by grid row.
pub const PAULI_MAGIC_SQUARE: [&str; 9] = ["XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY"];

/// The two-qubit operator solution of the magic square.
///
/// Every grid row and the first two grid columns multiply to `I`; the third
/// column multiplies to `-I`, matching `b = (0,0,0,0,0,1)`. `J -> -I`.
pub fn pauli_magic_square_rep() -> Representation<Complex64> {
    let generators = PAULI_MAGIC_SQUARE.iter().map(|l| two_qubit_pauli(l)).collect();
    let minus_i = Matrix::scalar(4, Complex64::new(-1.0, 0.0), 2);
    Representation::new(2, generators, minus_i, true).expect("uniform dimension")
}

type JsonMatrix = Vec<Vec<[f64; 2]>>;

/// The representation file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub p: u32,
    pub dim: usize,
    pub omega_convention: String,
    pub generators: BTreeMap<String, JsonMatrix>,
}

fn matrix_to_json(m: &Matrix<Complex64>) -> JsonMatrix {
    m.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn matrix_from_json(name: &str, rows: &JsonMatrix, dim: usize, p: u32) -> Result<Matrix<Complex64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("matrix {name} is not {dim}x{dim}")));
    }
    let rows = rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
    Matrix::from_rows(rows, p).ok_or_else(|| Error::Parse(format!("matrix {name} is not square")))
}

pub fn rep_to_file(rep: &Representation<Complex64>) -> RepFile {
    let mut generators = BTreeMap::new();
    for j in 1..=rep.n() {
        generators.insert(format!("g{j}"), matrix_to_json(rep.g(j)));
    }
    generators.insert("J".to_string(), matrix_to_json(rep.j_image()));
    RepFile { p: rep.p(), dim: rep.dim(), omega_convention: OMEGA_CONVENTION.to_string(), generators }
}

pub fn rep_to_json(rep: &Representation<Complex64>) -> String {
    let mut s = serde_json::to_string_pretty(&rep_to_file(rep)).expect("serializable");
    s.push('\n');
    s
}

/// Outcome of loading a representation file.
#[derive(Debug, Clone)]
pub struct LoadedRep {
    pub rep: Representation<Complex64>,
    pub warnings: Vec<String>,
}

/// Parses and validates a representation file.
///
/// Every generator image must be unitary within `tol`. When `require_quotient`
/// is set, `J` must equal `omega I` within `tol`; otherwise a mismatch is
/// downgraded to a warning and the result is marked not `j_identified`.
pub fn load_representation(text: &str, tol: f64, require_quotient: bool) -> Result<LoadedRep> {
    let file: RepFile = serde_json::from_str(text)?;
    if file.omega_convention != OMEGA_CONVENTION {
        return Err(Error::Parse(format!(
            "unsupported omega convention `{}`; expected `{}`",
            file.omega_convention, OMEGA_CONVENTION
        )));
    }
    if !crate::zp::is_prime(file.p as u64) {
        return Err(Error::NotPrime(file.p as u64));
    }
    let j = file.generators.get("J").ok_or_else(|| Error::Parse("missing generator J".into()))?;
    let j = matrix_from_json("J", j, file.dim, file.p)?;
    let n = file.generators.len() - 1;
    let mut gens = Vec::with_capacity(n);
    for k in 1..=n {
        let name = format!("g{k}");
        let m = file.generators.get(&name).ok_or_else(|| Error::Parse(format!("missing generator {name}")))?;
        gens.push(matrix_from_json(&name, m, file.dim, file.p)?);
    }
    let rep = Representation::new(file.p, gens, j, true)?;
    rep.check_unitary(tol)?;
    let residual = rep.j_residual();
    let mut warnings = Vec::new();
    let rep = if residual <= tol {
        rep
    } else if require_quotient {
        return Err(Error::JNotIdentified { residual });
    } else {
        warnings.push(format!("J is not omega*I (residual {residual:e}); quotient not applied"));
        Representation { j_identified: false, ..rep }
    };
    Ok(LoadedRep { rep, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{magic_square, one_eq, p3_demo};
    use crate::star::scalar::Cyclotomic;

    #[test]
    fn scalar_rep_values() {
        let sys = one_eq();
        let x = ZpVector::new(2, &[1, 1]).unwrap();
        let rep: Representation<Cyclotomic> = scalar_rep_from_solution(&sys, &x).unwrap();
        let minus_one = Matrix::scalar(1, Cyclotomic::root_power(2, 1), 2);
        assert_eq!(rep.g(1), &minus_one);
        assert_eq!(rep.g(1).mul(rep.g(2)), Matrix::identity(1, 2));
        assert_eq!(rep.j_image(), &minus_one);

        let sys = p3_demo();
        let x = ZpVector::new(3, &[1, 0, 0]).unwrap();
        let rep: Representation<Cyclotomic> = scalar_rep_from_solution(&sys, &x).unwrap();
        // g1^1 g2^2 = omega = J
        assert_eq!(rep.g(1).mul(&rep.g(2).pow(2)), *rep.j_image());

        let bad = ZpVector::new(2, &[1, 0]).unwrap();
        assert!(matches!(scalar_rep_from_solution::<Cyclotomic>(&one_eq(), &bad), Err(Error::NotASolution(_))));
    }

    #[test]
    fn pauli_generators_are_involutions() {
        let rep = pauli_magic_square_rep();
        let id = rep.identity();
        for j in 1..=9 {
            assert_eq!(rep.g(j).mul(rep.g(j)), id, "g{j}");
        }
        assert_eq!(rep.j_residual(), 0.0);
        // third column multiplies to -I = J
        let col3 = rep.g(3).mul(rep.g(6)).mul(rep.g(9));
        assert!(col3.distance(rep.j_image()) <= 1e-12);
        assert!(rep.check_unitary(1e-12).is_ok());
        let _ = magic_square();
    }

    #[test]
    fn json_round_trip_is_bit_identical() {
        let rep = pauli_magic_square_rep();
        let text = rep_to_json(&rep);
        let back = load_representation(&text, 1e-9, true).unwrap();
        assert_eq!(back.rep, rep);
        assert!(back.warnings.is_empty());
    }

    #[test]
    fn non_square_is_parse_error() {
        let text = r#"{"p":2,"dim":2,"omega_convention":"exp(2*pi*i/p)",
            "generators":{"g1":[[[1,0],[0,0]]],"J":[[[-1,0],[0,0]],[[0,0],[-1,0]]]}}"#;
        assert!(matches!(load_representation(text, 1e-9, true), Err(Error::Parse(_))));
    }

    #[test]
    fn j_identity_not_identified() {
        let text = r#"{"p":2,"dim":1,"omega_convention":"exp(2*pi*i/p)",
            "generators":{"g1":[[[1,0]]],"J":[[[1,0]]]}}"#;
        assert!(matches!(load_representation(text, 1e-9, true), Err(Error::JNotIdentified { .. })));
        let loaded = load_representation(text, 1e-9, false).unwrap();
        assert!(!loaded.rep.j_identified());
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn non_unitary_rejected() {
        let text = r#"{"p":2,"dim":1,"omega_convention":"exp(2*pi*i/p)",
            "generators":{"g1":[[[1.01,0]]],"J":[[[-1,0]]]}}"#;
        assert!(matches!(load_representation(text, 1e-9, true), Err(Error::UnitarityViolation { .. })));
    }
}
