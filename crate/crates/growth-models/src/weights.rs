//! Exact affine weights. Marchal and alpha-gamma dynamics assign every graph
//! element a weight of the form p + q*x + r*y with integer coefficients,
//! where (x, y) are the model parameters (alpha and gamma, or delta). Keeping
//! the coefficients as integers makes weight-accounting identities testable
//! as exact equalities over runs of any length.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// p + q*x + r*y with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct AffWeight {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl AffWeight {
    pub const ZERO: AffWeight = AffWeight { p: 0, q: 0, r: 0 };

    pub const fn new(p: i64, q: i64, r: i64) -> Self {
        Self { p, q, r }
    }

    /// A pure constant.
    pub const fn units(p: i64) -> Self {
        Self { p, q: 0, r: 0 }
    }

    /// Numeric value at parameters (x, y).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.p as f64 + self.q as f64 * x + self.r as f64 * y
    }
}

impl Add for AffWeight {
    type Output = AffWeight;
    fn add(self, rhs: AffWeight) -> AffWeight {
        AffWeight::new(self.p + rhs.p, self.q + rhs.q, self.r + rhs.r)
    }
}

impl AddAssign for AffWeight {
    fn add_assign(&mut self, rhs: AffWeight) {
        *self = *self + rhs;
    }
}

impl Sub for AffWeight {
    type Output = AffWeight;
    fn sub(self, rhs: AffWeight) -> AffWeight {
        AffWeight::new(self.p - rhs.p, self.q - rhs.q, self.r - rhs.r)
    }
}

impl SubAssign for AffWeight {
    fn sub_assign(&mut self, rhs: AffWeight) {
        *self = *self - rhs;
    }
}

impl Neg for AffWeight {
    type Output = AffWeight;
    fn neg(self) -> AffWeight {
        AffWeight::new(-self.p, -self.q, -self.r)
    }
}

impl Mul<i64> for AffWeight {
    type Output = AffWeight;
    fn mul(self, rhs: i64) -> AffWeight {
        AffWeight::new(self.p * rhs, self.q * rhs, self.r * rhs)
    }
}

impl Sum for AffWeight {
    fn sum<I: Iterator<Item = AffWeight>>(iter: I) -> AffWeight {
        iter.fold(AffWeight::ZERO, |acc, w| acc + w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_coefficientwise() {
        let a = AffWeight::new(1, -1, 0);
        let b = AffWeight::new(0, 2, 3);
        assert_eq!(a + b, AffWeight::new(1, 1, 3));
        assert_eq!(a - b, AffWeight::new(1, -3, -3));
        assert_eq!(a * 3, AffWeight::new(3, -3, 0));
        assert_eq!(-(a), AffWeight::new(-1, 1, 0));
        let total: AffWeight = [a, b, a].into_iter().sum();
        assert_eq!(total, AffWeight::new(2, 0, 3));
    }

    #[test]
    fn eval_substitutes_both_symbols() {
        let w = AffWeight::new(2, -1, 3);
        assert_eq!(w.eval(0.5, 0.25), 2.0 - 0.5 + 0.75);
        assert_eq!(AffWeight::ZERO.eval(9.0, 9.0), 0.0);
    }
}
