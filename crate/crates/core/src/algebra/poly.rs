//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::linear_form::LinearForm;
use super::scalar::Scalar;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exps: impl Into<Box<[u32]>>) -> Self {
        Monomial(exps.into())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables, in
/// descending graded-lex order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::term(Monomial::var(nvars, i), C::one())
    }

    pub fn term(monomial: Monomial, c: C) -> Self {
        let nvars = monomial.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(monomial, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// `Some(d)` if every term has degree `d`. The zero polynomial is not
    /// assigned a degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn constant_value(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.mul(mono), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c.clone() * C::from_int(e as i64));
        }
        out
    }

    /// Substitutes `x_i ↦ images[i]`.
    pub fn compose(&self, images: &[MultiPoly<C>]) -> MultiPoly<C> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MultiPoly<C>>> = images.iter().map(|p| vec![MultiPoly::one(p.nvars), p.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Exact quotient by a linear form, or `None` if it does not divide.
    pub fn div_linear(&self, form: &LinearForm) -> Option<Self> {
        assert_eq!(form.nvars(), self.nvars, "form arity mismatch");
        if self.is_zero() {
            return Some(self.clone());
        }
        // Synthetic division in the pivot variable j with coefficients in the
        // remaining variables: p = Σ p_e x_j^e, form = a x_j + r.
        let j = form.pivot();
        let a = C::from_int(form.coeffs()[j]);
        let mut rest = Self::zero(self.nvars);
        for (i, &c) in form.coeffs().iter().enumerate() {
            if i != j && c != 0 {
                rest.add_term(Monomial::var(self.nvars, i), C::from_int(c));
            }
        }
        let top = self.terms.keys().map(|m| m.0[j]).max().unwrap() as usize;
        let mut layers: Vec<Self> = vec![Self::zero(self.nvars); top + 1];
        for (m, c) in &self.terms {
            let e = m.0[j] as usize;
            let mut exps = m.0.clone();
            exps[j] = 0;
            layers[e].add_term(Monomial(exps), c.clone());
        }
        if top == 0 {
            return None;
        }
        let inv_a = C::one() / a;
        let mut q_layers: Vec<Self> = vec![Self::zero(self.nvars); top];
        q_layers[top - 1] = layers[top].scale(&inv_a);
        for e in (1..top).rev() {
            let reduced = &layers[e] - &(&rest * &q_layers[e]);
            q_layers[e - 1] = reduced.scale(&inv_a);
        }
        if layers[0] != &rest * &q_layers[0] {
            return None;
        }
        let mut q = Self::zero(self.nvars);
        for (e, layer) in q_layers.into_iter().enumerate() {
            for (m, c) in layer.terms {
                let mut exps = m.0;
                exps[j] += e as u32;
                q.terms.insert(Monomial(exps), c);
            }
        }
        Some(q)
    }

    /// Returns `q` with `self = form^k · q` when that division is exact.
    pub fn div_linear_power(&self, form: &LinearForm, k: u32) -> Option<Self> {
        let mut q = self.clone();
        for _ in 0..k {
            q = q.div_linear(form)?;
        }
        Some(q)
    }

    /// Largest `e` with `form^e | self`; `u32::MAX` for the zero polynomial.
    pub fn multiplicity_of(&self, form: &LinearForm) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let mut e = 0;
        let mut q = self.clone();
        while let Some(next) = q.div_linear(form) {
            q = next;
            e += 1;
        }
        e
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> (C, Self) {
        match self.leading_coeff() {
            None => (C::zero(), self.clone()),
            Some(lc) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&(C::one() / lc)))
            }
        }
    }

    /// Coefficients against a list of monomials, zero for missing ones.
    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Vec<C> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coefficient_vector(nvars: usize, basis: &[Monomial], coeffs: &[C]) -> Self {
        Self::from_terms(nvars, basis.iter().cloned().zip(coeffs.iter().cloned()))
    }
}

impl<'a, C: Scalar> Add<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Scalar> Sub<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Scalar> Mul<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(v) => *v = v.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly { nvars: self.nvars, terms: acc }
    }
}

impl<C: Scalar> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Scalar> $tr<MultiPoly<C>> for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, C: Scalar> $tr<&'a MultiPoly<C>> for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

/// Variable names used for printing: `x, y, z, w` up to four variables,
/// `x1, …, xn` beyond.
pub fn variable_names(nvars: usize) -> Vec<String> {
    if nvars <= 4 {
        ["x", "y", "z", "w"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl<C: Scalar> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = variable_names(self.nvars);
        for (idx, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (name, &e) in names.iter().zip(m.exps()) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = MultiPoly<BigRational>;

    fn p(s: &str, n: usize) -> P {
        parse_poly(s, n).unwrap()
    }

    fn form(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec()).unwrap().0
    }

    #[test]
    fn display_uses_descending_grlex() {
        let q = p("-4*x*y^3 + 4*x^3*y", 2);
        assert_eq!(q.to_string(), "4*x^3*y - 4*x*y^3");
        assert_eq!(P::zero(3).to_string(), "0");
        assert_eq!(p("3/2 - y", 2).to_string(), "-y + 3/2");
    }

    #[test]
    fn division_by_linear_forms() {
        let q = p("x^2 - y^2", 2);
        assert_eq!(q.div_linear_power(&form(&[1, -1]), 1), Some(p("x + y", 2)));
        assert_eq!(q.div_linear_power(&form(&[1, 0]), 1), None);
        let target = &p("2*x - y", 2).pow(2) * &p("x + y", 2);
        assert_eq!(target.div_linear_power(&form(&[2, -1]), 2), Some(p("x + y", 2)));
        assert_eq!(target.div_linear_power(&form(&[2, -1]), 3), None);
    }

    #[test]
    fn multiplicity_counts_linear_factor() {
        let q = &p("x", 3).pow(3) * &p("y + z", 3);
        assert_eq!(q.multiplicity_of(&form(&[1, 0, 0])), 3);
        assert_eq!(q.multiplicity_of(&form(&[0, 1, 1])), 1);
        assert_eq!(q.multiplicity_of(&form(&[0, 1, 0])), 0);
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(2, 0).len(), 1);
        let ms = monomials_of_degree(2, 2);
        assert_eq!(ms[0].exps(), &[2, 0]);
        assert_eq!(ms[2].exps(), &[0, 2]);
    }

    #[test]
    fn compose_linear_change() {
        let q = p("x*y", 2);
        let images = [p("x + y", 2), p("x - y", 2)];
        assert_eq!(q.compose(&images), p("x^2 - y^2", 2));
    }

    fn small_poly(nvars: usize) -> impl Strategy<Value = P> {
        proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), -3i64..4), 0..5).prop_map(move |ts| {
            P::from_terms(
                nvars,
                ts.into_iter().map(|(e, c)| (Monomial::new(e), BigRational::from_integer(c.into()))),
            )
        })
    }

    fn nonzero_form(nvars: usize) -> impl Strategy<Value = LinearForm> {
        proptest::collection::vec(-3i64..4, nvars)
            .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
            .prop_map(|v| LinearForm::new(v).unwrap().0)
    }

    proptest! {
        #[test]
        fn division_undoes_multiplication(q in small_poly(3), a in nonzero_form(3), k in 1u32..4) {
            let prod = &q * &a.to_poly::<BigRational>().pow(k);
            prop_assert_eq!(prod.div_linear_power(&a, k), Some(q));
        }

        #[test]
        fn ring_axioms_hold(a in small_poly(2), b in small_poly(2), c in small_poly(2)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn derivative_obeys_product_rule(a in small_poly(2), b in small_poly(2)) {
            let lhs = (&a * &b).partial(0);
            let rhs = &(&a.partial(0) * &b) + &(&a * &b.partial(0));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
