//! Iso-game generators `E_{(i,x),(j,y)} = delta_ij a_{i,x+y}` built from a
//! syncLCS projection family, and their relation checks.

use rayon::prelude::*;

use super::family::ProjectionFamily;
use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::graph::GameGraph;
use crate::report::ResidualCheck;

/// `E` indexed by `V(G) x V(H)`; `None` marks an exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoFamily<T> {
    g_len: usize,
    h_len: usize,
    dim: usize,
    p: u32,
    entries: Vec<Option<Matrix<T>>>,
}

impl<T: Scalar> IsoFamily<T> {
    pub fn g_len(&self) -> usize {
        self.g_len
    }

    pub fn h_len(&self) -> usize {
        self.h_len
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, g: usize, h: usize) -> Option<&Matrix<T>> {
        self.entries[g * self.h_len + h].as_ref()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    fn zero(&self) -> Matrix<T> {
        Matrix::zeros(self.dim, self.p)
    }
}

/// `E_{(i,x),(j,y)}` for `(i,x)` in `G = G_{A,b}` and `(j,y)` in
/// `H = G_{A,0}`: `fam(i, x+y)` when `i = j`, zero otherwise.
pub fn iso_generator_images<T: Scalar>(
    fam: &ProjectionFamily<T>,
    g: &GameGraph,
    h: &GameGraph,
) -> Result<IsoFamily<T>> {
    let mut entries = Vec::with_capacity(g.len() * h.len());
    for v in g.vertices() {
        for w in h.vertices() {
            if v.row != w.row {
                entries.push(None);
                continue;
            }
            let sum = v.x.try_add(&w.x)?;
            let e = fam
                .get(v.row, &sum)
                .ok_or_else(|| Error::NotASolution(format!("{sum} is not in S_{} of the family's system", v.row)))?;
            entries.push(Some(e.clone()));
        }
    }
    Ok(IsoFamily { g_len: g.len(), h_len: h.len(), dim: fam.dim(), p: fam.p(), entries })
}

/// Sums over `G`-vertices and over `H`-vertices, cross-row zeros, and the
/// reconstruction `sum_k E_{(i,x),(k,0)} = fam(i,x)`.
pub fn iso_sum_checks<T: Scalar>(
    e: &IsoFamily<T>,
    fam: &ProjectionFamily<T>,
    g: &GameGraph,
    h: &GameGraph,
    tol: f64,
) -> Vec<ResidualCheck> {
    let id = Matrix::identity(e.dim, e.p);
    let mut cols = ResidualCheck::new("iso/sum-over-G", tol);
    for b in 0..e.h_len {
        let total = (0..e.g_len).filter_map(|a| e.get(a, b)).fold(e.zero(), |acc, m| acc.add(m));
        cols.record(total.distance(&id), || format!("H:{}", h.vertex(b).label()));
    }
    let mut rows = ResidualCheck::new("iso/sum-over-H", tol);
    for a in 0..e.g_len {
        let total = (0..e.h_len).filter_map(|b| e.get(a, b)).fold(e.zero(), |acc, m| acc.add(m));
        rows.record(total.distance(&id), || format!("G:{}", g.vertex(a).label()));
    }
    let mut cross = ResidualCheck::new("iso/cross-row-zero", tol);
    for a in 0..e.g_len {
        for b in 0..e.h_len {
            if g.vertex(a).row != h.vertex(b).row {
                let r = e.get(a, b).map_or(0.0, Matrix::frobenius_norm);
                cross.record(r, || format!("G:{} H:{}", g.vertex(a).label(), h.vertex(b).label()));
            }
        }
    }
    let mut psi = ResidualCheck::new("iso/psi-reconstruction", tol);
    for (a, v) in g.vertices().iter().enumerate() {
        let total = h
            .vertices()
            .iter()
            .enumerate()
            .filter(|(_, w)| w.x.is_zero())
            .filter_map(|(b, _)| e.get(a, b))
            .fold(e.zero(), |acc, m| acc.add(m));
        let target = fam.get(v.row, &v.x).cloned().unwrap_or_else(|| e.zero());
        psi.record(total.distance(&target), || format!("G:{}", v.label()));
    }
    vec![cols, rows, cross, psi]
}

/// Result of [`check_iso_relations`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsoRelationReport {
    pub checks: Vec<ResidualCheck>,
    /// Generators that are exactly zero and drop out of every product.
    pub vanishing: usize,
    /// Losing quadruples whose product was computed.
    pub products: u64,
}

/// For every pair of generators on which the Iso rule loses, checks
/// `||E_{v,x} E_{w,y}|| <= tol`; also idempotency and self-adjointness.
///
/// Rule inputs are pairs `(v, x)` with `v` in `G` and `x` in `H` (and the
/// mirrored orientation, which yields the same generator), so a product is
/// required to vanish iff `rel_G(v, w) != rel_H(x, y)`. Exactly-zero
/// generators are skipped since their products vanish identically.
pub fn check_iso_relations<T: Scalar>(e: &IsoFamily<T>, g: &GameGraph, h: &GameGraph, tol: f64) -> IsoRelationReport {
    let nonzero: Vec<(usize, usize, &Matrix<T>)> = (0..e.g_len)
        .flat_map(|a| (0..e.h_len).map(move |b| (a, b)))
        .filter_map(|(a, b)| e.get(a, b).map(|m| (a, b, m)))
        .collect();
    let label = |a: usize, b: usize| format!("({},{})", g.vertex(a).label(), h.vertex(b).label());

    let mut idem = ResidualCheck::new("iso/idempotent", tol);
    let mut adj = ResidualCheck::new("iso/self-adjoint", tol);
    for &(a, b, m) in &nonzero {
        idem.record(m.mul(m).distance(m), || label(a, b));
        adj.record(m.adjoint().distance(m), || label(a, b));
    }

    let partial: Vec<(ResidualCheck, u64)> = nonzero
        .par_iter()
        .map(|&(a, b, m)| {
            let mut c = ResidualCheck::new("iso/rule-orthogonality", tol);
            let mut n = 0;
            for &(a2, b2, m2) in &nonzero {
                if g.relation(a, a2) == h.relation(b, b2) {
                    continue;
                }
                n += 1;
                c.record(m.mul(m2).frobenius_norm(), || format!("{} {}", label(a, b), label(a2, b2)));
            }
            (c, n)
        })
        .collect();
    let mut orth = ResidualCheck::new("iso/rule-orthogonality", tol);
    let mut products = 0;
    for (c, n) in partial {
        orth.merge(c);
        products += n;
    }
    IsoRelationReport { checks: vec![idem, adj, orth], vanishing: e.entries.len() - nonzero.len(), products }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{magic_square, one_eq};
    use crate::graph::build_game_graph;
    use crate::star::family::build_projection_family;
    use crate::star::rep::{pauli_magic_square_rep, scalar_rep_from_solution, Representation};
    use crate::star::scalar::Cyclotomic;
    use crate::zp::ZpVector;

    const CAP: u64 = 1 << 16;

    #[test]
    fn k2_scalar_exact() {
        let sys = one_eq();
        let xs = ZpVector::new(2, &[1, 1]).unwrap();
        let rep: Representation<Cyclotomic> = scalar_rep_from_solution(&sys, &xs).unwrap();
        let fam = build_projection_family(&rep, &sys, CAP, 0.0).unwrap();
        let g = build_game_graph(&sys, false, CAP).unwrap();
        let h = build_game_graph(&sys, true, CAP).unwrap();
        let e = iso_generator_images(&fam, &g, &h).unwrap();
        assert!(iso_sum_checks(&e, &fam, &g, &h, 0.0).iter().all(|c| c.max_residual == 0.0));
        let rel = check_iso_relations(&e, &g, &h, 0.0);
        assert!(rel.checks.iter().all(|c| c.max_residual == 0.0));
        assert!(rel.products > 0);
    }

    #[test]
    fn pauli_magic_square() {
        let sys = magic_square();
        let fam = build_projection_family(&pauli_magic_square_rep(), &sys, CAP, 1e-9).unwrap();
        let g = build_game_graph(&sys, false, CAP).unwrap();
        let h = build_game_graph(&sys, true, CAP).unwrap();
        let e = iso_generator_images(&fam, &g, &h).unwrap();
        assert_eq!(e.nonzero_count(), 6 * 16);
        assert!(iso_sum_checks(&e, &fam, &g, &h, 1e-9).iter().all(ResidualCheck::passed));
        let rel = check_iso_relations(&e, &g, &h, 1e-9);
        assert!(rel.checks.iter().all(ResidualCheck::passed), "{:?}", rel.checks);
        assert_eq!(rel.vanishing, 24 * 24 - 96);
    }
}
