//! Dense univariate polynomials over an exact ring (integers for
//! characteristic polynomials, Hilbert-series numerators).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, Signed};

/// Coefficients stored lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Clone + Num + Signed> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From coefficients listed highest degree first.
    pub fn from_descending(coeffs: Vec<R>) -> Self {
        Self::new(coeffs.into_iter().rev().collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `a·t + b`
    pub fn linear(a: R, b: R) -> Self {
        Self::new(vec![b, a])
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        let mut v = vec![R::zero(); degree];
        v.push(c);
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn ascending(&self) -> &[R] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<R> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn leading_coeff(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|v| v.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `self(inner(t))`
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Exact division by a monic polynomial; `None` if the remainder is
    /// nonzero or the divisor is not monic.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        let d = divisor.degree()?;
        if !divisor.leading_coeff().is_one() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return rem.iter().all(|c| c.is_zero()).then(Self::zero);
        }
        let mut quot = vec![R::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let c = rem[i + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        rem.iter().all(|c| c.is_zero()).then(|| Self::new(quot))
    }
}

impl<'a, R: Clone + Num + Signed> Add<&'a UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn add(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, R: Clone + Num + Signed> Sub<&'a UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn sub(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, R: Clone + Num + Signed> Mul<&'a UniPoly<R>> for &'a UniPoly<R> {
    type Output = UniPoly<R>;
    fn mul(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<R: Clone + Num + Signed> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<R: Clone + Num + Signed + fmt::Display> UniPoly<R> {
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (deg, c)) in self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mono = match deg {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{deg}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

impl<R: Clone + Num + Signed + fmt::Display> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type U = UniPoly<BigInt>;

    fn u(desc: &[i64]) -> U {
        U::from_descending(desc.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn shift_by_composition() {
        // (t - 1)^2 at t -> t - 2 is (t - 3)^2
        let p = u(&[1, -2, 1]);
        let shifted = p.compose(&U::linear(1.into(), (-2).into()));
        assert_eq!(shifted, u(&[1, -6, 9]));
    }

    #[test]
    fn exact_division_by_square_of_linear() {
        let d = u(&[1, -2, 1]);
        let p = &d * &u(&[3, 0, 1]);
        assert_eq!(p.div_exact_monic(&d), Some(u(&[3, 0, 1])));
        assert_eq!(u(&[1, 0, 1]).div_exact_monic(&d), None);
    }

    #[test]
    fn display_format() {
        assert_eq!(u(&[1, -4, 6, -3]).to_string(), "t^3 - 4*t^2 + 6*t - 3");
        assert_eq!(u(&[-1, 0]).to_string(), "-t");
        assert_eq!(U::zero().to_string(), "0");
    }
}
