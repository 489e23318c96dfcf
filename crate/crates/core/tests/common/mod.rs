//! Brute-force oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use synclcs::graph::GameGraph;
use synclcs::star::Matrix;
use synclcs::LinearSystem;

pub const CAP: u64 = 1 << 20;

/// Every vector of Z_p^n, last coordinate fastest.
pub fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |t| {
                    let mut w = v.clone();
                    w.push(t);
                    w
                })
            })
            .collect();
    }
    out
}

fn dot(a: &[u32], x: &[u32], p: u32) -> u32 {
    (a.iter().zip(x).map(|(&a, &x)| a as u64 * x as u64).sum::<u64>() % p as u64) as u32
}

/// Consistency of `A x = b` by trying every `x`.
pub fn brute_consistent(sys: &LinearSystem) -> bool {
    brute_solution(sys).is_some()
}

pub fn brute_solution(sys: &LinearSystem) -> Option<Vec<u32>> {
    let p = sys.p();
    all_vectors(p, sys.n())
        .into_iter()
        .find(|x| (0..sys.m()).all(|i| dot(sys.matrix().row(i), x, p) == sys.rhs().get(i)))
}

/// `S_i` by enumerating Z_p^{|V_i|} and embedding.
pub fn brute_row_solutions(sys: &LinearSystem, i: usize) -> Vec<Vec<u32>> {
    let p = sys.p();
    let support: Vec<usize> = sys.row_support(i).unwrap().into_iter().collect();
    let row = sys.matrix().row(i - 1);
    all_vectors(p, support.len())
        .into_iter()
        .map(|local| {
            let mut x = vec![0u32; sys.n()];
            for (k, &j) in support.iter().enumerate() {
                x[j - 1] = local[k];
            }
            x
        })
        .filter(|x| dot(row, x, p) == sys.rhs_entry(i))
        .collect()
}

/// A perfect deterministic syncLCS strategy by trying every tuple
/// `(x_1, .., x_m)` in `S_1 x .. x S_m`.
pub fn brute_perfect_strategy(sys: &LinearSystem) -> bool {
    let rows: Vec<Vec<Vec<u32>>> = (1..=sys.m()).map(|i| brute_row_solutions(sys, i)).collect();
    let supports: Vec<Vec<usize>> = (1..=sys.m()).map(|i| sys.row_support(i).unwrap().into_iter().collect()).collect();
    fn extend(rows: &[Vec<Vec<u32>>], supports: &[Vec<usize>], chosen: &mut Vec<Vec<u32>>) -> bool {
        let k = chosen.len();
        if k == rows.len() {
            return true;
        }
        for x in &rows[k] {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, y)| supports[k].iter().filter(|v| supports[j].contains(v)).all(|&v| x[v - 1] == y[v - 1]));
            if ok {
                chosen.push(x.clone());
                if extend(rows, supports, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    extend(&rows, &supports, &mut Vec::new())
}

/// Graph isomorphism by trying every permutation; only for tiny graphs.
pub fn brute_isomorphic(g: &GameGraph, h: &GameGraph) -> bool {
    let n = g.len();
    assert!(n <= 9, "brute-force isomorphism is factorial");
    if h.len() != n {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|a| (0..n).all(|b| g.adjacent(a, b) == h.adjacent(perm[a], perm[b]))) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A random system over `p` with `1 <= m, n <= max_dim`. Roughly half of
/// the right-hand sides are forced consistent by taking `b = A x0`.
pub fn random_system(rng: &mut ChaCha8Rng, p: u32, max_dim: usize) -> LinearSystem {
    let m = rng.gen_range(1..=max_dim);
    let n = rng.gen_range(1..=max_dim);
    let density = rng.gen_range(0.3..0.9);
    let a: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..p) as i64 } else { 0 }).collect())
        .collect();
    let b: Vec<i64> = if rng.gen_bool(0.5) {
        let x0: Vec<i64> = (0..n).map(|_| rng.gen_range(0..p) as i64).collect();
        a.iter().map(|row| row.iter().zip(&x0).map(|(r, x)| r * x).sum::<i64>()).collect()
    } else {
        (0..m).map(|_| rng.gen_range(0..p) as i64).collect()
    };
    LinearSystem::new(p, &a, &b).unwrap()
}

/// A Haar-ish random unitary: Gram-Schmidt on complex Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize, p: u32) -> Matrix<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let rows = (0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect();
    Matrix::from_rows(rows, p).unwrap()
}
