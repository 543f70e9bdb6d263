use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, MultiPoly};
use super::scalar::Scalar;

/// Primitive integer linear form whose first nonzero coefficient is positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LinearForm(Vec<i64>);

impl LinearForm {
    /// Normalizes `coeffs` and returns the form together with the integer
    /// `c` such that `coeffs = c · form`. `None` for the zero vector.
    pub fn new(coeffs: Vec<i64>) -> Option<(LinearForm, i64)> {
        let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return None;
        }
        let lead = coeffs.iter().copied().find(|&c| c != 0).unwrap();
        let c = if lead < 0 { -g } else { g };
        Some((LinearForm(coeffs.into_iter().map(|v| v / c).collect()), c))
    }

    pub fn coordinate(nvars: usize, i: usize) -> LinearForm {
        let mut v = vec![0; nvars];
        v[i] = 1;
        LinearForm(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Index of the first nonzero coefficient.
    pub fn pivot(&self) -> usize {
        self.0.iter().position(|&c| c != 0).expect("normalized forms are nonzero")
    }

    pub fn to_poly<C: Scalar>(&self) -> MultiPoly<C> {
        let n = self.0.len();
        MultiPoly::from_terms(n, self.0.iter().enumerate().map(|(i, &c)| (Monomial::var(n, i), C::from_int(c))))
    }

    /// Evaluates the form as a derivation target: `δ(α) = Σ a_i f_i`.
    pub fn pair<C: Scalar>(&self, coeffs: &[MultiPoly<C>]) -> MultiPoly<C> {
        assert_eq!(coeffs.len(), self.0.len());
        let mut acc = MultiPoly::zero(coeffs[0].nvars());
        for (&a, f) in self.0.iter().zip(coeffs) {
            if a != 0 {
                acc = &acc + &f.scale(&C::from_int(a));
            }
        }
        acc
    }
}

impl TryFrom<Vec<i64>> for LinearForm {
    type Error = String;
    fn try_from(v: Vec<i64>) -> Result<Self, String> {
        match LinearForm::new(v) {
            Some((f, _)) => Ok(f),
            None => Err("zero linear form".into()),
        }
    }
}

impl From<LinearForm> for Vec<i64> {
    fn from(f: LinearForm) -> Vec<i64> {
        f.0
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly::<num_rational::BigRational>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_makes_primitive_with_positive_lead() {
        let (f, c) = LinearForm::new(vec![2, 4]).unwrap();
        assert_eq!(f.coeffs(), &[1, 2]);
        assert_eq!(c, 2);
        let (g, c) = LinearForm::new(vec![0, -3, 6]).unwrap();
        assert_eq!(g.coeffs(), &[0, 1, -2]);
        assert_eq!(c, -3);
        assert_eq!(g.pivot(), 1);
        assert!(LinearForm::new(vec![0, 0]).is_none());
    }

    #[test]
    fn opposite_forms_coincide() {
        assert_eq!(LinearForm::new(vec![1, 0]).unwrap().0, LinearForm::new(vec![-1, 0]).unwrap().0);
    }

    #[test]
    fn displays_as_polynomial() {
        assert_eq!(LinearForm::new(vec![1, -1]).unwrap().0.to_string(), "x - y");
    }
}
