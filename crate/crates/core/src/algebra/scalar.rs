//! Scalar traits shared by the polynomial and linear-algebra layers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// Exact field of coefficients.
///
/// Every operation in this crate decides identities by comparing with zero,
/// so implementors must have exact equality. Floating point types are not
/// implementors for that reason.
pub trait Scalar:
    Clone + Eq + Ord + Hash + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer fits in scalar")
    }

    /// Rescales a sparse row by a nonzero constant into a canonical
    /// representative of its line. The default makes the leading entry one.
    fn normalize_row(row: &mut [(usize, Self)]) {
        if let Some((_, lead)) = row.first() {
            let lead = lead.clone();
            if !lead.is_one() {
                for (_, v) in row.iter_mut() {
                    *v = v.clone() / lead.clone();
                }
            }
        }
    }

    /// `Some(z)` when the value is an integer.
    fn as_integer(&self) -> Option<BigInt>;
}

fn primitive_integer_row<T>(row: &mut [(usize, Ratio<T>)])
where
    T: Clone + Integer + Signed,
{
    if row.is_empty() {
        return;
    }
    let mut den_lcm = T::one();
    for (_, v) in row.iter() {
        den_lcm = den_lcm.lcm(v.denom());
    }
    let mut num_gcd = T::zero();
    for (_, v) in row.iter() {
        let scaled = v.numer().clone() * (den_lcm.clone() / v.denom().clone());
        num_gcd = num_gcd.gcd(&scaled);
    }
    if row[0].1.is_negative() {
        num_gcd = -num_gcd;
    }
    let factor = Ratio::new(den_lcm, num_gcd);
    for (_, v) in row.iter_mut() {
        *v = v.clone() * factor.clone();
    }
}

impl Scalar for BigRational {
    fn normalize_row(row: &mut [(usize, Self)]) {
        primitive_integer_row(row);
    }

    fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }
}

impl Scalar for Ratio<i64> {
    fn normalize_row(row: &mut [(usize, Self)]) {
        primitive_integer_row(row);
    }

    fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| BigInt::from(*self.numer()))
    }
}

impl Scalar for Ratio<i128> {
    fn normalize_row(row: &mut [(usize, Self)]) {
        primitive_integer_row(row);
    }

    fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| BigInt::from(*self.numer()))
    }
}

/// Converts a scalar to `BigRational`, used when printing or serializing.
pub fn to_big_rational<C: Scalar>(value: &C) -> BigRational {
    // Display of every implementor is `n` or `n/d`.
    let text = value.to_string();
    match text.split_once('/') {
        Some((n, d)) => BigRational::new(n.trim().parse().unwrap(), d.trim().parse().unwrap()),
        None => BigRational::from_integer(text.trim().parse().unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_rows_become_primitive_integers() {
        let mut row = vec![(0, q(-1, 2)), (3, q(3, 4)), (5, q(1, 1))];
        BigRational::normalize_row(&mut row);
        assert_eq!(row, vec![(0, q(2, 1)), (3, q(-3, 1)), (5, q(-4, 1))]);
    }

    #[test]
    fn small_ratio_rows_normalize_like_big_ones() {
        let mut row = vec![(1, Ratio::new(6i64, 1)), (2, Ratio::new(-4, 1))];
        Ratio::<i64>::normalize_row(&mut row);
        assert_eq!(row, vec![(1, Ratio::new(3, 1)), (2, Ratio::new(-2, 1))]);
    }

    #[test]
    fn conversion_round_trips_through_text() {
        assert_eq!(to_big_rational(&Ratio::new(-7i64, 3)), q(-7, 3));
        assert_eq!(to_big_rational(&q(5, 1)), q(5, 1));
    }
}
