//! The solution group of a linear system as a finite presentation, and
//! residual checks of its relations on a representation.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::ResidualCheck;
use crate::star::{Matrix, Representation, Scalar};
use crate::system::LinearSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `g_j`, 1-based.
    G(usize),
    J,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::G(j) => write!(f, "g{j}"),
            Generator::J => write!(f, "J"),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A group word: generators with signed exponents, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Word(pub Vec<(Generator, i64)>);

impl Word {
    /// Merges adjacent powers of one generator and drops zero exponents.
    pub fn normalized(&self) -> Word {
        let mut out: Vec<(Generator, i64)> = Vec::with_capacity(self.0.len());
        for &(g, e) in &self.0 {
            match out.last_mut() {
                Some((h, f)) if *h == g => *f += e,
                _ => out.push((g, e)),
            }
            if out.last().is_some_and(|&(_, f)| f == 0) {
                out.pop();
            }
        }
        Word(out)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.0.iter().map(|&(g, _)| g)
    }

    /// Evaluates the word on `rep`; negative powers use the adjoint.
    pub fn evaluate<T: Scalar>(&self, rep: &Representation<T>) -> Matrix<T> {
        let mut acc = rep.identity();
        for &(g, e) in &self.0 {
            let image = match g {
                Generator::G(j) => rep.g(j),
                Generator::J => rep.j_image(),
            };
            let base = if e < 0 { image.adjoint() } else { image.clone() };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&base);
            }
        }
        acc
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationFamily {
    #[serde(rename = "order-g")]
    OrderG,
    #[serde(rename = "order-J")]
    OrderJ,
    #[serde(rename = "central-J")]
    CentralJ,
    #[serde(rename = "row-commutation")]
    RowCommutation,
    #[serde(rename = "row-product")]
    RowProduct,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 5] = [
        RelationFamily::OrderG,
        RelationFamily::OrderJ,
        RelationFamily::CentralJ,
        RelationFamily::RowCommutation,
        RelationFamily::RowProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::OrderG => "order-g",
            RelationFamily::OrderJ => "order-J",
            RelationFamily::CentralJ => "central-J",
            RelationFamily::RowCommutation => "row-commutation",
            RelationFamily::RowProduct => "row-product",
        }
    }
}

/// A relator `w = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub family: RelationFamily,
    /// Row producing the relation (row products), or the lowest row whose
    /// support contains the commuting pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    pub word: Word,
}

impl Relation {
    /// Relator text: commutators as `[a,b]`, everything else as a word.
    pub fn text(&self) -> String {
        match (self.family, self.word.0.as_slice()) {
            (RelationFamily::CentralJ | RelationFamily::RowCommutation, [(a, 1), (b, 1), ..]) => {
                format!("[{a},{b}]")
            }
            _ => self.word.to_string(),
        }
    }
}

fn commutator(a: Generator, b: Generator) -> Word {
    Word(vec![(a, 1), (b, 1), (a, -1), (b, -1)])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub n: usize,
    pub p: u32,
    pub relations: Vec<Relation>,
}

/// The presentation with generators `g_1..g_n, J` and the relations
/// `g_j^p`, `J^p`, `[g_j, J]`, `[g_j, g_l]` for `j < l` sharing a row
/// support (each pair once), and `prod_j g_j^{A_ij} J^{-b_i}` per row
/// (ascending `j`, zero exponents omitted).
pub fn build_presentation(sys: &LinearSystem) -> GroupPresentation {
    let n = sys.n();
    let p = sys.p();
    let mut relations = Vec::new();
    for j in 1..=n {
        relations.push(Relation {
            family: RelationFamily::OrderG,
            row: None,
            word: Word(vec![(Generator::G(j), p as i64)]),
        });
    }
    relations.push(Relation { family: RelationFamily::OrderJ, row: None, word: Word(vec![(Generator::J, p as i64)]) });
    for j in 1..=n {
        relations.push(Relation {
            family: RelationFamily::CentralJ,
            row: None,
            word: commutator(Generator::G(j), Generator::J),
        });
    }
    let mut seen = BTreeSet::new();
    for i in 1..=sys.m() {
        let support: Vec<usize> = sys.row_support(i).expect("row in range").into_iter().collect();
        for (a, &j) in support.iter().enumerate() {
            for &l in &support[a + 1..] {
                if seen.insert((j, l)) {
                    relations.push(Relation {
                        family: RelationFamily::RowCommutation,
                        row: Some(i),
                        word: commutator(Generator::G(j), Generator::G(l)),
                    });
                }
            }
        }
    }
    for i in 1..=sys.m() {
        let mut word: Vec<(Generator, i64)> =
            (1..=n).filter(|&j| sys.coeff(i, j) != 0).map(|j| (Generator::G(j), sys.coeff(i, j) as i64)).collect();
        let bi = sys.rhs_entry(i);
        if bi != 0 {
            word.push((Generator::J, -(bi as i64)));
        }
        relations.push(Relation { family: RelationFamily::RowProduct, row: Some(i), word: Word(word) });
    }
    GroupPresentation { n, p, relations }
}

impl GroupPresentation {
    pub fn count(&self, family: RelationFamily) -> usize {
        self.relations.iter().filter(|r| r.family == family).count()
    }

    /// One relator per line.
    pub fn relators_text(&self) -> String {
        let mut s = String::new();
        for r in &self.relations {
            s.push_str(&r.text());
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut gens: Vec<String> = (1..=self.n).map(|j| format!("g{j}")).collect();
        gens.push("J".into());
        let relations: Vec<_> = self
            .relations
            .iter()
            .map(|r| {
                serde_json::json!({
                    "family": r.family.name(),
                    "row": r.row,
                    "word": r.word.0.iter().map(|(g, e)| serde_json::json!([g.to_string(), e])).collect::<Vec<_>>(),
                    "text": r.text(),
                })
            })
            .collect();
        serde_json::json!({ "p": self.p, "generators": gens, "relations": relations })
    }
}

/// Residual of one relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResidual {
    pub family: RelationFamily,
    pub text: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub tolerance: f64,
    pub relations: Vec<RelationResidual>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// One aggregated check per relation family, in family order.
    pub fn by_family(&self) -> Vec<ResidualCheck> {
        RelationFamily::ALL
            .iter()
            .map(|&fam| {
                let mut c = ResidualCheck::new(format!("relations/{}", fam.name()), self.tolerance);
                for r in self.relations.iter().filter(|r| r.family == fam) {
                    c.record(r.residual, || r.text.clone());
                }
                c
            })
            .collect()
    }
}

/// `||eval(w) - I||_F` for every relator `w`.
pub fn relation_residuals<T: Scalar>(
    rep: &Representation<T>,
    pres: &GroupPresentation,
    tol: f64,
) -> Result<RelationReport> {
    if rep.n() != pres.n {
        return Err(Error::DimensionMismatch(format!(
            "representation has {} generators, presentation has {}",
            rep.n(),
            pres.n
        )));
    }
    if rep.p() != pres.p {
        return Err(Error::DimensionMismatch(format!(
            "representation is over p = {}, presentation over p = {}",
            rep.p(),
            pres.p
        )));
    }
    let id = rep.identity();
    let relations = pres
        .relations
        .iter()
        .map(|r| {
            let residual = r.word.evaluate(rep).distance(&id);
            RelationResidual { family: r.family, text: r.text(), residual, passed: residual <= tol }
        })
        .collect();
    Ok(RelationReport { tolerance: tol, relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{magic_square, one_eq};
    use crate::star::{pauli_magic_square_rep, scalar_rep_from_solution, Cyclotomic};
    use crate::zp::ZpVector;
    use num_complex::Complex64;

    #[test]
    fn one_row_presentation() {
        let sys = LinearSystem::new(2, &[vec![1, 1]], &[1]).unwrap();
        let pres = build_presentation(&sys);
        assert_eq!(pres.relations.len(), 7);
        assert_eq!(pres.relators_text(), "g1^2\ng2^2\nJ^2\n[g1,J]\n[g2,J]\n[g1,g2]\ng1 g2 J^-1\n");
    }

    #[test]
    fn magic_square_counts() {
        let pres = build_presentation(&magic_square());
        assert_eq!(pres.count(RelationFamily::OrderG), 9);
        assert_eq!(pres.count(RelationFamily::OrderJ), 1);
        assert_eq!(pres.count(RelationFamily::CentralJ), 9);
        assert_eq!(pres.count(RelationFamily::RowCommutation), 18);
        assert_eq!(pres.count(RelationFamily::RowProduct), 6);
        assert_eq!(pres.relations.len(), 43);
    }

    #[test]
    fn commutation_pairs_deduplicated() {
        let sys = LinearSystem::new(3, &[vec![1, 1, 0], vec![2, 1, 0], vec![0, 1, 1]], &[0, 0, 0]).unwrap();
        let pres = build_presentation(&sys);
        assert_eq!(pres.count(RelationFamily::RowCommutation), 2);
    }

    #[test]
    fn zero_row_gives_empty_word() {
        let sys = LinearSystem::new(2, &[vec![0, 0], vec![1, 0]], &[0, 1]).unwrap();
        let pres = build_presentation(&sys);
        let row1 = pres.relations.iter().find(|r| r.family == RelationFamily::RowProduct && r.row == Some(1)).unwrap();
        assert!(row1.word.is_empty());
        assert_eq!(row1.text(), "1");
    }

    #[test]
    fn word_normalization() {
        let w = Word(vec![(Generator::G(1), 1), (Generator::G(1), -1), (Generator::J, 2), (Generator::J, 1)]);
        assert_eq!(w.normalized(), Word(vec![(Generator::J, 3)]));
    }

    #[test]
    fn scalar_residuals_are_exactly_zero() {
        let sys = one_eq();
        let x = ZpVector::new(2, &[1, 1]).unwrap();
        let rep: Representation<Cyclotomic> = scalar_rep_from_solution(&sys, &x).unwrap();
        let report = relation_residuals(&rep, &build_presentation(&sys), 0.0).unwrap();
        assert!(report.passed());
        assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn pauli_residuals() {
        let rep = pauli_magic_square_rep();
        let report = relation_residuals(&rep, &build_presentation(&magic_square()), 1e-12).unwrap();
        assert_eq!(report.relations.len(), 43);
        assert!(report.passed(), "{:?}", report.relations.iter().find(|r| !r.passed));
    }

    #[test]
    fn perturbed_generator_fails_order_relation() {
        let rep = pauli_magic_square_rep();
        let scaled = rep.g(1).scale(&Complex64::new(1.01, 0.0));
        let rep = rep.with_generator(1, scaled);
        let report = relation_residuals(&rep, &build_presentation(&magic_square()), 1e-9).unwrap();
        let first = report.relations.iter().find(|r| !r.passed).unwrap();
        assert_eq!(first.family, RelationFamily::OrderG);
        assert_eq!(first.text, "g1^2");
        assert!(first.residual > 1e-9);
    }

    #[test]
    fn generator_count_mismatch() {
        let rep = pauli_magic_square_rep();
        assert!(relation_residuals(&rep, &build_presentation(&one_eq()), 1e-9).is_err());
    }
}
