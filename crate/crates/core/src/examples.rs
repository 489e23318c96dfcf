//! Built-in example systems.

use crate::error::{Error, Result};
use crate::system::LinearSystem;

pub const EXAMPLE_NAMES: [&str; 3] = ["magic-square", "one-eq", "p3-demo"];

/// The Mermin-Peres magic square over Z_2.
///
/// Variables x1..x9 fill a 3x3 grid row by row. Equations 1-3 are the grid
/// rows and 4-6 the grid columns; every line has parity 0 except the third
/// column, which has parity 1.
pub fn magic_square() -> LinearSystem {
    let mut a = Vec::with_capacity(6);
    for r in 0..3 {
        let mut row = vec![0i64; 9];
        for c in 0..3 {
            row[3 * r + c] = 1;
        }
        a.push(row);
    }
    for c in 0..3 {
        let mut row = vec![0i64; 9];
        for r in 0..3 {
            row[3 * r + c] = 1;
        }
        a.push(row);
    }
    LinearSystem::new(2, &a, &[0, 0, 0, 0, 0, 1]).expect("valid built-in")
}

/// `x1 + x2 = 0` over Z_2.
pub fn one_eq() -> LinearSystem {
    LinearSystem::new(2, &[vec![1, 1]], &[0]).expect("valid built-in")
}

/// `x1 + 2 x2 = 1` over Z_3 with an unused third variable.
pub fn p3_demo() -> LinearSystem {
    LinearSystem::new(3, &[vec![1, 2, 0]], &[1]).expect("valid built-in")
}

pub fn builtin(name: &str) -> Result<LinearSystem> {
    match name {
        "magic-square" => Ok(magic_square()),
        "one-eq" => Ok(one_eq()),
        "p3-demo" => Ok(p3_demo()),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::validate_system;

    #[test]
    fn builtins_validate() {
        for name in EXAMPLE_NAMES {
            let sys = builtin(name).unwrap();
            assert!(validate_system(&sys.to_file()).passed(), "{name}");
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn magic_square_layout() {
        let ms = magic_square();
        assert_eq!((ms.m(), ms.n(), ms.p()), (6, 9, 2));
        for i in 1..=6 {
            assert_eq!(ms.row_support(i).unwrap().len(), 3);
        }
        assert_eq!(ms.rhs().entries(), &[0, 0, 0, 0, 0, 1]);
    }
}
