//! Rational functions whose denominators are products of linear forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::linear_form::LinearForm;
use super::poly::MultiPoly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `scalar · numerator / ∏ α^e` in canonical form: the numerator is monic
/// (or zero) and no denominator form divides it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredRationalFunction<C> {
    numerator: MultiPoly<C>,
    denominator: BTreeMap<LinearForm, u32>,
    scalar: C,
}

impl<C: Scalar> FactoredRationalFunction<C> {
    pub fn zero(nvars: usize) -> Self {
        FactoredRationalFunction { numerator: MultiPoly::zero(nvars), denominator: BTreeMap::new(), scalar: C::zero() }
    }

    pub fn from_poly(p: MultiPoly<C>) -> Self {
        Self::new(p, BTreeMap::new())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    /// Builds and normalizes `numerator / ∏ denominator`.
    pub fn new(numerator: MultiPoly<C>, denominator: BTreeMap<LinearForm, u32>) -> Self {
        Self::from_parts(numerator, denominator, C::one())
    }

    pub fn from_parts(numerator: MultiPoly<C>, denominator: BTreeMap<LinearForm, u32>, scalar: C) -> Self {
        let n = numerator.nvars();
        for f in denominator.keys() {
            assert_eq!(f.nvars(), n, "denominator form arity mismatch");
        }
        if numerator.is_zero() || scalar.is_zero() {
            return Self::zero(n);
        }
        let (lc, monic) = numerator.monic();
        let mut f = FactoredRationalFunction { numerator: monic, denominator, scalar: scalar * lc };
        f.cancel();
        f
    }

    /// `p / q` where `q` must split into `forms` up to a constant.
    pub fn from_quotient(p: MultiPoly<C>, q: &MultiPoly<C>, forms: &[LinearForm]) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Algebra("division by zero polynomial".into()));
        }
        let mut rest = q.clone();
        let mut den = BTreeMap::new();
        for f in forms {
            let e = rest.multiplicity_of(f);
            if e > 0 {
                rest = rest.div_linear_power(f, e).unwrap();
                den.insert(f.clone(), e);
            }
        }
        let c = rest
            .constant_value()
            .ok_or_else(|| Error::Algebra(format!("denominator factor `{rest}` is not a product of the given linear forms")))?;
        Ok(Self::from_parts(p, den, C::one() / c))
    }

    fn cancel(&mut self) {
        let forms: Vec<LinearForm> = self.denominator.keys().cloned().collect();
        for f in forms {
            let e = self.denominator[&f];
            let mut k = 0;
            while k < e {
                match self.numerator.div_linear(&f) {
                    Some(q) => {
                        self.numerator = q;
                        k += 1;
                    }
                    None => break,
                }
            }
            if k == e {
                self.denominator.remove(&f);
            } else if k > 0 {
                self.denominator.insert(f, e - k);
            }
        }
        self.denominator.retain(|_, e| *e > 0);
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Monic numerator; the value is `scalar() · numerator() / denominator`.
    pub fn numerator(&self) -> &MultiPoly<C> {
        &self.numerator
    }

    pub fn scalar(&self) -> &C {
        &self.scalar
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.denominator
    }

    /// `scalar · numerator` as a polynomial.
    pub fn scaled_numerator(&self) -> MultiPoly<C> {
        self.numerator.scale(&self.scalar)
    }

    pub fn denominator_poly(&self) -> MultiPoly<C> {
        let mut acc = MultiPoly::one(self.nvars());
        for (f, &e) in &self.denominator {
            acc = &acc * &f.to_poly::<C>().pow(e);
        }
        acc
    }

    pub fn denominator_degree(&self) -> u32 {
        self.denominator.values().sum()
    }

    /// Exponent of `form` in the reduced denominator.
    pub fn pole_order(&self, form: &LinearForm) -> u32 {
        self.denominator.get(form).copied().unwrap_or(0)
    }

    pub fn to_poly(&self) -> Option<MultiPoly<C>> {
        self.denominator.is_empty().then(|| self.scaled_numerator())
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_empty()
    }

    /// Numerator degree minus denominator degree, when the numerator is
    /// homogeneous. `None` for zero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        self.numerator.homogeneous_degree().map(|d| d as i64 - self.denominator_degree() as i64)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        FactoredRationalFunction {
            numerator: self.numerator.clone(),
            denominator: self.denominator.clone(),
            scalar: self.scalar.clone() * c.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly<C>) -> Self {
        Self::from_parts(&self.numerator * p, self.denominator.clone(), self.scalar.clone())
    }

    /// Multiplies by `form^e`.
    pub fn mul_linear_power(&self, form: &LinearForm, e: u32) -> Self {
        let mut den = self.denominator.clone();
        let mut left = e;
        if let Some(d) = den.get_mut(form) {
            let k = (*d).min(left);
            *d -= k;
            left -= k;
        }
        den.retain(|_, d| *d > 0);
        Self::from_parts(&self.numerator * &form.to_poly::<C>().pow(left), den, self.scalar.clone())
    }

    /// Divides by `form^e`.
    pub fn div_linear_power(&self, form: &LinearForm, e: u32) -> Self {
        let mut den = self.denominator.clone();
        *den.entry(form.clone()).or_insert(0) += e;
        Self::from_parts(self.numerator.clone(), den, self.scalar.clone())
    }

    /// Partial derivative along variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        // d/dx_i (N / ∏ α^e) = (N' L − N Σ e_α a_{α,i} L/α) / (∏ α^e · L)
        // with L = ∏ α the radical of the denominator.
        let n = self.nvars();
        let forms: Vec<(&LinearForm, u32)> = self.denominator.iter().map(|(f, &e)| (f, e)).collect();
        let radical = forms.iter().fold(MultiPoly::one(n), |acc, (f, _)| &acc * &f.to_poly::<C>());
        let mut num = &self.numerator.partial(i) * &radical;
        for (idx, (f, e)) in forms.iter().enumerate() {
            let a = f.coeffs()[i];
            if a == 0 {
                continue;
            }
            let others = forms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .fold(MultiPoly::one(n), |acc, (_, (g, _))| &acc * &g.to_poly::<C>());
            let term = (&self.numerator * &others).scale(&C::from_int(a * *e as i64));
            num = &num - &term;
        }
        let den = self.denominator.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        Self::from_parts(num, den, self.scalar.clone())
    }

    pub fn eval(&self, point: &[C]) -> Option<C> {
        let d = self.denominator_poly().eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.scaled_numerator().eval(point) / d)
    }

    fn common_denominator(&self, other: &Self) -> BTreeMap<LinearForm, u32> {
        let mut den = self.denominator.clone();
        for (f, &e) in &other.denominator {
            let slot = den.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        den
    }

    fn lift_numerator(&self, den: &BTreeMap<LinearForm, u32>) -> MultiPoly<C> {
        let mut num = self.scaled_numerator();
        for (f, &e) in den {
            let missing = e - self.pole_order(f);
            if missing > 0 {
                num = &num * &f.to_poly::<C>().pow(missing);
            }
        }
        num
    }
}

impl<'a, C: Scalar> Add<&'a FactoredRationalFunction<C>> for &'a FactoredRationalFunction<C> {
    type Output = FactoredRationalFunction<C>;
    fn add(self, rhs: &FactoredRationalFunction<C>) -> FactoredRationalFunction<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let den = self.common_denominator(rhs);
        let num = &self.lift_numerator(&den) + &rhs.lift_numerator(&den);
        FactoredRationalFunction::new(num, den)
    }
}

impl<C: Scalar> Neg for &FactoredRationalFunction<C> {
    type Output = FactoredRationalFunction<C>;
    fn neg(self) -> FactoredRationalFunction<C> {
        self.scale(&-C::one())
    }
}

impl<'a, C: Scalar> Sub<&'a FactoredRationalFunction<C>> for &'a FactoredRationalFunction<C> {
    type Output = FactoredRationalFunction<C>;
    fn sub(self, rhs: &FactoredRationalFunction<C>) -> FactoredRationalFunction<C> {
        self + &(-rhs)
    }
}

impl<'a, C: Scalar> Mul<&'a FactoredRationalFunction<C>> for &'a FactoredRationalFunction<C> {
    type Output = FactoredRationalFunction<C>;
    fn mul(self, rhs: &FactoredRationalFunction<C>) -> FactoredRationalFunction<C> {
        if self.is_zero() || rhs.is_zero() {
            return FactoredRationalFunction::zero(self.nvars());
        }
        let mut den = self.denominator.clone();
        for (f, &e) in &rhs.denominator {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        FactoredRationalFunction::from_parts(
            &self.numerator * &rhs.numerator,
            den,
            self.scalar.clone() * rhs.scalar.clone(),
        )
    }
}

impl<C: Scalar> fmt::Display for FactoredRationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.scaled_numerator();
        if self.denominator.is_empty() {
            return write!(f, "{num}");
        }
        let den: Vec<String> = self
            .denominator
            .iter()
            .map(|(form, &e)| if e == 1 { format!("({form})") } else { format!("({form})^{e}") })
            .collect();
        write!(f, "({num})/({})", den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = MultiPoly<BigRational>;
    type F = FactoredRationalFunction<BigRational>;

    fn p(s: &str) -> P {
        parse_poly(s, 2).unwrap()
    }

    fn lf(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec()).unwrap().0
    }

    fn den(items: &[(&[i64], u32)]) -> BTreeMap<LinearForm, u32> {
        items.iter().map(|(c, e)| (lf(c), *e)).collect()
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let f = F::new(p("x^2 - y^2"), den(&[(&[1, -1], 1)]));
        assert_eq!(f, F::from_poly(p("x + y")));
        let z = F::new(P::zero(2), den(&[(&[1, 0], 3)]));
        assert_eq!(z, F::zero(2));
        let g = F::new(p("x^2*y"), den(&[(&[1, 0], 2), (&[1, 1], 1)]));
        assert_eq!(g.numerator(), &p("y"));
        assert_eq!(g.denominator(), &den(&[(&[1, 1], 1)]));
    }

    #[test]
    fn sum_of_partial_fractions() {
        // 1/(x - y) - 1/(x + y) = 2y/(x^2 - y^2)
        let a = F::new(p("1"), den(&[(&[1, -1], 1)]));
        let b = F::new(p("1"), den(&[(&[1, 1], 1)]));
        let expected = F::new(p("2*y"), den(&[(&[1, -1], 1), (&[1, 1], 1)]));
        assert_eq!(&a - &b, expected);
        assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn derivative_of_reciprocal() {
        let f = F::new(p("1"), den(&[(&[1, 0], 1)]));
        let expected = F::new(p("-1"), den(&[(&[1, 0], 2)]));
        assert_eq!(f.partial(0), expected);
        assert!(f.partial(1).is_zero());
    }

    #[test]
    fn quotient_by_product_of_forms() {
        let forms = [lf(&[1, 0]), lf(&[0, 1]), lf(&[1, -1]), lf(&[1, 1])];
        let q = p("4*x^3*y - 4*x*y^3");
        let f = F::from_quotient(p("2*x"), &q, &forms).unwrap();
        assert_eq!(f.pole_order(&forms[0]), 0);
        assert_eq!(f.denominator_degree(), 3);
        assert_eq!(f.homogeneous_degree(), Some(-3));
        assert!(F::from_quotient(p("1"), &p("x^2 + y^2"), &forms).is_err());
    }

    #[test]
    fn linear_power_multiplication_clears_poles() {
        let f = F::new(p("y"), den(&[(&[1, 0], 3)]));
        assert_eq!(f.mul_linear_power(&lf(&[1, 0]), 2).pole_order(&lf(&[1, 0])), 1);
        assert!(f.mul_linear_power(&lf(&[1, 0]), 3).is_polynomial());
        assert_eq!(f.mul_linear_power(&lf(&[1, 0]), 4).to_poly(), Some(p("x*y")));
    }

    fn arb_frf() -> impl Strategy<Value = F> {
        let forms = [lf(&[1, 0]), lf(&[0, 1]), lf(&[1, -1]), lf(&[1, 1])];
        (
            proptest::collection::vec(((0u32..3, 0u32..3), -3i64..4), 0..4),
            proptest::collection::vec(0u32..3, 4),
        )
            .prop_map(move |(ts, es)| {
                let num = P::from_terms(
                    2,
                    ts.into_iter().map(|((a, b), c)| (crate::algebra::Monomial::new(vec![a, b]), BigRational::from_integer(c.into()))),
                );
                let d = forms.iter().cloned().zip(es).filter(|(_, e)| *e > 0).collect();
                F::new(num, d)
            })
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent_and_value_preserving(f in arb_frf()) {
            let again = F::from_parts(f.numerator().clone(), f.denominator().clone(), f.scalar().clone());
            prop_assert_eq!(&again, &f);
            // Cross-multiplication against the unreduced form 2f·x / (2x).
            let g = F::new(f.scaled_numerator().mul_monomial(&crate::algebra::Monomial::new(vec![1, 0]), &BigRational::from_integer(2.into())),
                f.denominator().iter().map(|(k, v)| (k.clone(), *v)).chain([(lf(&[1, 0]), 1)]).fold(BTreeMap::new(), |mut m, (k, v)| { *m.entry(k).or_insert(0) += v; m }))
                .scale(&BigRational::new(1.into(), 2.into()));
            prop_assert_eq!(&f.scaled_numerator() * &g.denominator_poly(), &g.scaled_numerator() * &f.denominator_poly());
            for form in f.denominator().keys() {
                prop_assert!(f.numerator().div_linear(form).is_none());
            }
        }

        #[test]
        fn field_operations_are_consistent(a in arb_frf(), b in arb_frf()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
            let lhs = (&a * &b).partial(1);
            let rhs = &(&a.partial(1) * &b) + &(&a * &b.partial(1));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
