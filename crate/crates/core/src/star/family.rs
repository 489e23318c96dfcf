//! Projection families of the syncLCS game algebra built from solution
//! group representations (`psi`), and the way back to generators (`phi`).

use std::collections::HashMap;

use super::matrix::Matrix;
use super::rep::Representation;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::report::ResidualCheck;
use crate::system::LinearSystem;
use crate::zp::ZpVector;

/// `f_j(s) = (1/p) sum_t (omega^{-s} g_j)^t`, the spectral projection of
/// `g_j` onto eigenvalue `omega^s`.
pub fn f_projection<T: Scalar>(rep: &Representation<T>, j: usize, s: u32) -> Matrix<T> {
    spectral_projection(rep.g(j), rep.p(), s)
}

fn spectral_projection<T: Scalar>(g: &Matrix<T>, p: u32, s: u32) -> Matrix<T> {
    let base = g.scale(&T::root_power(p, -(s as i64)));
    let mut term = Matrix::identity(g.dim(), p);
    let mut acc = term.clone();
    for _ in 1..p {
        term = term.mul(&base);
        acc = acc.add(&term);
    }
    acc.div_p()
}

/// Largest `||[g_j, g_l]||_F` over pairs in `V_i`, with the worst pair.
fn row_commutator<T: Scalar>(rep: &Representation<T>, support: &[usize]) -> (f64, Option<(usize, usize)>) {
    let mut worst = (0.0, None);
    for (a, &j) in support.iter().enumerate() {
        for &l in &support[a + 1..] {
            let r = rep.g(j).mul(rep.g(l)).distance(&rep.g(l).mul(rep.g(j)));
            if worst.1.is_none() || r > worst.0 {
                worst = (r, Some((j, l)));
            }
        }
    }
    worst
}

fn check_row_commutation<T: Scalar>(rep: &Representation<T>, support: &[usize], tol: f64) -> Result<()> {
    match row_commutator(rep, support) {
        (r, Some((j, l))) if r.is_nan() || r > tol => Err(Error::NonCommutingFactors { j, l, residual: r }),
        _ => Ok(()),
    }
}

fn check_shape<T>(rep: &Representation<T>, sys: &LinearSystem) -> Result<()>
where
    T: Scalar,
{
    if rep.n() != sys.n() || rep.p() != sys.p() {
        return Err(Error::DimensionMismatch(format!(
            "representation has {} generators over p={}, system has {} variables over p={}",
            rep.n(),
            rep.p(),
            sys.n(),
            sys.p()
        )));
    }
    Ok(())
}

/// `psi(a_{i,x}) = prod_{j in V_i} f_j(x_j)`, factors in ascending `j`.
pub fn psi_image<T: Scalar>(
    rep: &Representation<T>,
    sys: &LinearSystem,
    i: usize,
    x: &ZpVector,
    tol: f64,
) -> Result<Matrix<T>> {
    check_shape(rep, sys)?;
    if !sys.in_row_solutions(i, x)? {
        return Err(Error::NotASolution(format!("{x} is not in S_{i}")));
    }
    let support: Vec<usize> = sys.row_support(i)?.into_iter().collect();
    check_row_commutation(rep, &support, tol)?;
    Ok(psi_product(rep, &support, x))
}

fn psi_product<T: Scalar>(rep: &Representation<T>, support: &[usize], x: &ZpVector) -> Matrix<T> {
    support.iter().fold(rep.identity(), |acc, &j| acc.mul(&f_projection(rep, j, x.get(j - 1))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRow<T> {
    /// 1-based row index.
    pub index: usize,
    pub support: Vec<usize>,
    pub solutions: Vec<ZpVector>,
    pub images: Vec<Matrix<T>>,
}

/// Matrices `E_{i,x}` for every row `i` and `x` in `S_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionFamily<T> {
    system: LinearSystem,
    dim: usize,
    rows: Vec<FamilyRow<T>>,
    lookup: HashMap<(usize, ZpVector), usize>,
}

impl<T: Scalar> ProjectionFamily<T> {
    /// Assembles a family from explicit images, one list per row in the
    /// enumeration order of `S_i`.
    pub fn from_images(sys: &LinearSystem, dim: usize, images: Vec<Vec<Matrix<T>>>, cap: u64) -> Result<Self> {
        let rows = sys.rows(cap)?;
        if images.len() != rows.len() {
            return Err(Error::DimensionMismatch(format!("{} rows of images for {} rows", images.len(), rows.len())));
        }
        let mut out = Vec::with_capacity(rows.len());
        let mut lookup = HashMap::new();
        for (row, imgs) in rows.into_iter().zip(images) {
            if imgs.len() != row.solutions.len() || imgs.iter().any(|m| m.dim() != dim) {
                return Err(Error::DimensionMismatch(format!(
                    "row {} needs {} images of dimension {dim}",
                    row.index,
                    row.solutions.len()
                )));
            }
            for (k, x) in row.solutions.iter().enumerate() {
                lookup.insert((row.index, x.clone()), k);
            }
            out.push(FamilyRow {
                index: row.index,
                support: row.support.into_iter().collect(),
                solutions: row.solutions,
                images: imgs,
            });
        }
        Ok(ProjectionFamily { system: sys.clone(), dim, rows: out, lookup })
    }

    /// The `psi` family of `rep`, without running the invariant checks.
    /// Intra-row commutation is still enforced.
    pub fn from_representation(rep: &Representation<T>, sys: &LinearSystem, cap: u64, tol: f64) -> Result<Self> {
        check_shape(rep, sys)?;
        if !rep.j_identified() {
            return Err(Error::JNotIdentified { residual: rep.j_residual() });
        }
        let mut images = Vec::with_capacity(sys.m());
        for row in sys.rows(cap)? {
            let support: Vec<usize> = row.support.iter().copied().collect();
            check_row_commutation(rep, &support, tol)?;
            images.push(row.solutions.iter().map(|x| psi_product(rep, &support, x)).collect());
        }
        Self::from_images(sys, rep.dim(), images, cap)
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.system.p()
    }

    pub fn rows(&self) -> &[FamilyRow<T>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &FamilyRow<T> {
        &self.rows[i - 1]
    }

    /// `E_{i,x}`, or `None` when `x` is not in `S_i`.
    pub fn get(&self, i: usize, x: &ZpVector) -> Option<&Matrix<T>> {
        let k = *self.lookup.get(&(i, x.clone()))?;
        Some(&self.rows[i - 1].images[k])
    }

    /// Replaces the `k`-th image of row `i`.
    pub fn with_image(mut self, i: usize, k: usize, image: Matrix<T>) -> Self {
        self.rows[i - 1].images[k] = image;
        self
    }

    pub fn identity(&self) -> Matrix<T> {
        Matrix::identity(self.dim, self.p())
    }

    fn entries(&self) -> impl Iterator<Item = (usize, &ZpVector, &Matrix<T>)> {
        self.rows.iter().flat_map(|r| r.solutions.iter().zip(&r.images).map(move |(x, m)| (r.index, x, m)))
    }

    /// Idempotency, self-adjointness, orthogonality of incompatible pairs
    /// and the per-row resolution of identity, in that order.
    pub fn invariant_checks(&self, tol: f64) -> Vec<ResidualCheck> {
        let mut idem = ResidualCheck::new("family/idempotent", tol);
        let mut adj = ResidualCheck::new("family/self-adjoint", tol);
        for (i, x, e) in self.entries() {
            idem.record(e.mul(e).distance(e), || format!("E({i},{x})"));
            adj.record(e.adjoint().distance(e), || format!("E({i},{x})"));
        }
        let mut orth = ResidualCheck::new("family/orthogonal-incompatible", tol);
        for (i, x, e) in self.entries() {
            for (k, y, f) in self.entries() {
                if self.system.agree_on_shared(i, k, x, y) {
                    continue;
                }
                orth.record(e.mul(f).frobenius_norm(), || format!("E({i},{x}) E({k},{y})"));
            }
        }
        let mut sum = ResidualCheck::new("family/row-sum-identity", tol);
        let id = self.identity();
        for r in &self.rows {
            let total = r.images.iter().fold(Matrix::zeros(self.dim, self.p()), |acc, m| acc.add(m));
            sum.record(total.distance(&id), || format!("row {}", r.index));
        }
        vec![idem, adj, orth, sum]
    }
}

/// The `psi` family of `rep` with every invariant verified; the first
/// failing check is returned as [`Error::InvariantViolation`].
pub fn build_projection_family<T: Scalar>(
    rep: &Representation<T>,
    sys: &LinearSystem,
    cap: u64,
    tol: f64,
) -> Result<ProjectionFamily<T>> {
    let fam = ProjectionFamily::from_representation(rep, sys, cap, tol)?;
    if let Some(bad) = fam.invariant_checks(tol).into_iter().find(|c| !c.passed()) {
        return Err(Error::InvariantViolation { check: bad.name, residual: bad.max_residual });
    }
    Ok(fam)
}

/// `sum_{x in S_i} omega^{x_j} E_{i,x}` for one row `i` containing `j`.
fn phi_from_row<T: Scalar>(fam: &ProjectionFamily<T>, i: usize, j: usize) -> Matrix<T> {
    let p = fam.p();
    let r = fam.row(i);
    r.solutions
        .iter()
        .zip(&r.images)
        .fold(Matrix::zeros(fam.dim, p), |acc, (x, e)| acc.add(&e.scale(&T::root_power(p, x.get(j - 1) as i64))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiImage<T> {
    pub image: Matrix<T>,
    /// The lowest row containing the variable, used for `image`.
    pub row: usize,
    /// Largest distance to the same sum taken over another row.
    pub discrepancy: f64,
}

/// `phi(g_j)` from the lowest row containing `j`, with the cross-row
/// discrepancy.
pub fn phi_image<T: Scalar>(fam: &ProjectionFamily<T>, j: usize) -> Result<PhiImage<T>> {
    let mut containing = fam.rows.iter().filter(|r| r.support.contains(&j)).map(|r| r.index);
    let Some(row) = containing.next() else {
        return Err(Error::VariableUnused(j));
    };
    let image = phi_from_row(fam, row, j);
    let discrepancy = containing.map(|k| phi_from_row(fam, k, j).distance(&image)).fold(0.0, f64::max);
    Ok(PhiImage { image, row, discrepancy })
}

/// `P_{i,j}(t) = sum_{x in S_i, x_j = t} E_{i,x}`.
pub fn p_block<T: Scalar>(fam: &ProjectionFamily<T>, i: usize, j: usize, t: u32) -> Matrix<T> {
    let r = fam.row(i);
    r.solutions
        .iter()
        .zip(&r.images)
        .filter(|(x, _)| x.get(j - 1) == t)
        .fold(Matrix::zeros(fam.dim, fam.p()), |acc, (_, e)| acc.add(e))
}

/// Well-definedness of `phi`: cross-row discrepancy of `phi(g_j)` and
/// agreement of `P_{i,j}(t)` across rows, for every used variable.
pub fn phi_checks<T: Scalar>(fam: &ProjectionFamily<T>, tol: f64) -> Vec<ResidualCheck> {
    let mut disc = ResidualCheck::new("phi/cross-row-discrepancy", tol);
    let mut blocks = ResidualCheck::new("phi/p-block-consistency", tol);
    for j in 1..=fam.system.n() {
        let Ok(phi) = phi_image(fam, j) else { continue };
        disc.record(phi.discrepancy, || format!("g{j}"));
        let rows: Vec<usize> = fam.rows.iter().filter(|r| r.support.contains(&j)).map(|r| r.index).collect();
        for t in 0..fam.p() {
            let first = p_block(fam, rows[0], j, t);
            for &k in &rows[1..] {
                blocks.record(p_block(fam, k, j, t).distance(&first), || {
                    format!("P({},{j})({t}) vs P({k},{j})({t})", rows[0])
                });
            }
        }
    }
    vec![disc, blocks]
}

/// Spectral facts about each `f_j`: idempotent, self-adjoint, orthogonal
/// in `s`, summing to `I`, reconstructing `g_j`, and `g_j f_j(s) =
/// omega^s f_j(s)`.
pub fn spectral_checks<T: Scalar>(rep: &Representation<T>, tol: f64) -> Vec<ResidualCheck> {
    let p = rep.p();
    let id = rep.identity();
    let names = ["idempotent", "self-adjoint", "orthogonal", "sum-identity", "g-reconstruction", "commutation-shift"];
    let mut checks: Vec<ResidualCheck> = names.iter().map(|n| ResidualCheck::new(format!("f/{n}"), tol)).collect();
    for j in 1..=rep.n() {
        let g = rep.g(j);
        let fs: Vec<Matrix<T>> = (0..p).map(|s| f_projection(rep, j, s)).collect();
        let mut total = Matrix::zeros(rep.dim(), p);
        let mut recon = Matrix::zeros(rep.dim(), p);
        for (s, f) in fs.iter().enumerate() {
            let w = T::root_power(p, s as i64);
            checks[0].record(f.mul(f).distance(f), || format!("f_{j}({s})"));
            checks[1].record(f.adjoint().distance(f), || format!("f_{j}({s})"));
            for (t, h) in fs.iter().enumerate().skip(s + 1) {
                checks[2].record(f.mul(h).frobenius_norm(), || format!("f_{j}({s}) f_{j}({t})"));
            }
            checks[5].record(g.mul(f).distance(&f.scale(&w)), || format!("f_{j}({s})"));
            total = total.add(f);
            recon = recon.add(&f.scale(&w));
        }
        checks[3].record(total.distance(&id), || format!("g{j}"));
        checks[4].record(recon.distance(g), || format!("g{j}"));
    }
    checks
}

/// Round trips between the group algebra and the game algebra.
///
/// `psi-phi`: `sum_x omega^{x_l} E_{i,x} = g_l` for every row `i` containing
/// `l`. `phi-psi`: `prod_{j in V_i} f_j(y_j)`, with `f_j` formed from
/// `phi(g_j)`, equals `E_{i,y}`.
pub fn round_trip_checks<T: Scalar>(
    rep: &Representation<T>,
    fam: &ProjectionFamily<T>,
    tol: f64,
) -> Vec<ResidualCheck> {
    let p = fam.p();
    let mut psi_phi = ResidualCheck::new("round-trip/psi-phi", tol);
    for r in &fam.rows {
        for &l in &r.support {
            psi_phi.record(phi_from_row(fam, r.index, l).distance(rep.g(l)), || format!("g{l} via row {}", r.index));
        }
    }
    let phis: Vec<Option<Matrix<T>>> = (1..=fam.system.n()).map(|j| phi_image(fam, j).ok().map(|f| f.image)).collect();
    let mut phi_psi = ResidualCheck::new("round-trip/phi-psi", tol);
    for r in &fam.rows {
        for (y, e) in r.solutions.iter().zip(&r.images) {
            let back = r.support.iter().fold(fam.identity(), |acc, &j| {
                let g = phis[j - 1].as_ref().expect("variable in a row support");
                acc.mul(&spectral_projection(g, p, y.get(j - 1)))
            });
            phi_psi.record(back.distance(e), || format!("a({},{y})", r.index));
        }
    }
    vec![psi_phi, phi_psi]
}

/// Builds the `psi` family of `rep` and checks both round trips.
pub fn check_mutual_inverse<T: Scalar>(
    rep: &Representation<T>,
    sys: &LinearSystem,
    cap: u64,
    tol: f64,
) -> Result<Vec<ResidualCheck>> {
    let fam = ProjectionFamily::from_representation(rep, sys, cap, tol)?;
    Ok(round_trip_checks(rep, &fam, tol))
}
