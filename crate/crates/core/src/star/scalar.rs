//! Matrix entry types: floating complex numbers and exact elements of the
//! cyclotomic ring `Z[1/p][omega]`, `omega = exp(2 pi i / p)`.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Entry type for [`super::Matrix`].
///
/// `p` is the prime fixing `omega`; for floating entries it only selects the
/// root of unity.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero(p: u32) -> Self;

    /// `omega^k`, with `omega = exp(2 pi i / p)`.
    fn root_power(p: u32, k: i64) -> Self;

    fn one(p: u32) -> Self {
        Self::root_power(p, 0)
    }

    /// `self / p`.
    fn div_p(&self, p: u32) -> Self;

    fn conj(&self) -> Self;

    fn is_zero(&self) -> bool;

    fn to_complex(&self) -> Complex64;

    /// `|self|^2`, exactly `0.0` when `self` is zero.
    fn abs_sqr(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_complex().norm_sqr()
        }
    }
}

/// `exp(2 pi i k / p)` with the axis-aligned values exact.
pub fn root_of_unity(p: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(p as i64) as u64;
    let p = p as u64;
    if (4 * k).is_multiple_of(p) {
        return match (4 * k / p) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * k as f64 / p as f64;
    Complex64::new(theta.cos(), theta.sin())
}

impl Scalar for Complex64 {
    fn zero(_p: u32) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn root_power(p: u32, k: i64) -> Self {
        root_of_unity(p, k)
    }

    fn div_p(&self, p: u32) -> Self {
        self / p as f64
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// An exact element `(sum_k c_k omega^k) / p^e` of `Z[1/p][omega]`.
///
/// Canonical form: coefficients over `1, omega, .., omega^(p-2)` (the
/// relation `1 + omega + .. + omega^(p-1) = 0` eliminates `omega^(p-1)`)
/// with the smallest exponent `e`. Since that basis is a Z-basis of
/// `Z[omega]`, structural equality is equality of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: u32,
    scale: u32,
    coeffs: Vec<i128>,
}

impl Cyclotomic {
    fn from_full(p: u32, scale: u32, mut full: Vec<i128>) -> Self {
        debug_assert_eq!(full.len(), p as usize);
        let top = full[p as usize - 1];
        for c in full.iter_mut() {
            *c -= top;
        }
        full.pop();
        let mut out = Cyclotomic { p, scale, coeffs: full };
        out.reduce_scale();
        out
    }

    fn reduce_scale(&mut self) {
        let p = self.p as i128;
        if self.coeffs.iter().all(|&c| c == 0) {
            self.scale = 0;
            return;
        }
        while self.scale > 0 && self.coeffs.iter().all(|&c| c % p == 0) {
            for c in self.coeffs.iter_mut() {
                *c /= p;
            }
            self.scale -= 1;
        }
    }

    /// Coefficients over `1, omega, .., omega^(p-1)` scaled to `p^scale`.
    fn full_at(&self, scale: u32) -> Vec<i128> {
        let factor = (self.p as i128).checked_pow(scale - self.scale).expect("cyclotomic scale overflow");
        let mut full: Vec<i128> =
            self.coeffs.iter().map(|&c| c.checked_mul(factor).expect("cyclotomic coefficient overflow")).collect();
        full.push(0);
        full
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Whether the value is real and rational, returned as `num / p^e`.
    pub fn as_rational(&self) -> Option<(i128, u32)> {
        self.coeffs[1..].iter().all(|&c| c == 0).then(|| (self.coeffs[0], self.scale))
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "cyclotomic elements over different roots of unity");
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let scale = self.scale.max(rhs.scale);
        let a = self.full_at(scale);
        let b = rhs.full_at(scale);
        let sum = a.iter().zip(&b).map(|(x, y)| x.checked_add(*y).expect("overflow")).collect();
        Cyclotomic::from_full(self.p, scale, sum)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Self {
        self.check_same_field(&rhs);
        let p = self.p as usize;
        let mut full = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).expect("cyclotomic coefficient overflow");
                full[(i + j) % p] += term;
            }
        }
        Cyclotomic::from_full(self.p, self.scale + rhs.scale, full)
    }
}

impl Scalar for Cyclotomic {
    fn zero(p: u32) -> Self {
        Cyclotomic { p, scale: 0, coeffs: vec![0; p as usize - 1] }
    }

    fn root_power(p: u32, k: i64) -> Self {
        let mut full = vec![0i128; p as usize];
        full[k.rem_euclid(p as i64) as usize] = 1;
        Cyclotomic::from_full(p, 0, full)
    }

    fn div_p(&self, _p: u32) -> Self {
        let mut out = self.clone();
        out.scale += 1;
        out.reduce_scale();
        out
    }

    fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut full = vec![0i128; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            full[(p - k) % p] = c;
        }
        Cyclotomic::from_full(self.p, self.scale, full)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn to_complex(&self) -> Complex64 {
        let denom = (self.p as f64).powi(self.scale as i32);
        self.coeffs.iter().enumerate().map(|(k, &c)| root_of_unity(self.p, k as i64) * c as f64).sum::<Complex64>()
            / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_sum_to_zero_exactly() {
        for p in [2u32, 3, 5, 7] {
            let sum = (0..p as i64).map(|k| Cyclotomic::root_power(p, k)).fold(Cyclotomic::zero(p), |a, b| a + b);
            assert!(sum.is_zero(), "p = {p}");
            let w = Cyclotomic::root_power(p, 1);
            let mut acc = Cyclotomic::one(p);
            for _ in 0..p {
                acc = acc * w.clone();
            }
            assert_eq!(acc, Cyclotomic::one(p));
        }
    }

    #[test]
    fn conjugate_is_inverse_on_roots() {
        for p in [2u32, 3, 5] {
            for k in 0..p as i64 {
                let w = Cyclotomic::root_power(p, k);
                assert_eq!(w.clone() * w.conj(), Cyclotomic::one(p));
                assert_eq!(w.conj(), Cyclotomic::root_power(p, -k));
            }
        }
    }

    #[test]
    fn division_by_p_cancels() {
        let p = 3;
        let third = Cyclotomic::one(p).div_p(p);
        let sum = third.clone() + third.clone() + third;
        assert_eq!(sum, Cyclotomic::one(p));
        assert_eq!(Cyclotomic::zero(p).div_p(p), Cyclotomic::zero(p));
    }

    #[test]
    fn complex_values() {
        let w = Cyclotomic::root_power(3, 1).to_complex();
        assert!((w - root_of_unity(3, 1)).norm() < 1e-15);
        assert_eq!(root_of_unity(2, 1), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(4, 3), Complex64::new(0.0, -1.0));
        let half = Cyclotomic::one(2).div_p(2);
        assert_eq!(half.to_complex(), Complex64::new(0.5, 0.0));
        assert_eq!(half.as_rational(), Some((1, 1)));
    }

    #[test]
    fn exact_zero_norm() {
        let z = Cyclotomic::root_power(5, 2) - Cyclotomic::root_power(5, 2);
        assert_eq!(z.abs_sqr(), 0.0);
    }
}
