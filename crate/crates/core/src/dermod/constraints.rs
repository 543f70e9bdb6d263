//! Graded pieces of `D(A,m)` and `Ω¹(A,m)` as kernels of exact linear
//! systems.
//!
//! Divisibility of a polynomial `g` by `α^e` is tested in coordinates where
//! `α` is a variable: with `j` the pivot of `α`, put `y_j = α(x)` and
//! `y_i = x_i` otherwise. Then `α^e | g` iff every monomial of `g(x(y))`
//! whose `y_j`-exponent is below `e` has coefficient zero.

use std::collections::BTreeMap;


use super::{rational, Derivation, LogForm1};
use crate::algebra::{monomials_of_degree, Echelon, LinearForm, Monomial};
use crate::arrangement::{defining_poly, Arrangement, Multiplicity};
use crate::{Poly, Rational};

/// Images of all degree-`d` monomials under `x ↦ x(y)` for one form.
struct Substitution {
    pivot: usize,
    images: Vec<Poly>,
}

impl Substitution {
    fn new(form: &LinearForm, basis: &[Monomial]) -> Self {
        let n = form.nvars();
        let j = form.pivot();
        let a = form.coeffs();
        let aj = rational(a[j]);
        // x_j = (y_j - Σ_{i≠j} a_i y_i) / a_j
        let mut xj = Poly::var(n, j).scale(&(Rational::from_integer(1.into()) / aj.clone()));
        for (i, &ai) in a.iter().enumerate() {
            if i != j && ai != 0 {
                xj = &xj - &Poly::var(n, i).scale(&(rational(ai) / aj.clone()));
            }
        }
        let top = basis.iter().map(|m| m.exps()[j]).max().unwrap_or(0);
        let mut powers = vec![Poly::one(n)];
        for e in 1..=top as usize {
            let next = &powers[e - 1] * &xj;
            powers.push(next);
        }
        let images = basis
            .iter()
            .map(|m| {
                let mut rest = m.exps().to_vec();
                rest[j] = 0;
                powers[m.exps()[j] as usize].mul_monomial(&Monomial::new(rest), &Rational::from_integer(1.into()))
            })
            .collect();
        Substitution { pivot: j, images }
    }
}

/// Unknowns are the coefficients of `ℓ` polynomials over `basis`, indexed
/// `i · |basis| + k`.
struct System<'a> {
    basis: &'a [Monomial],
    echelon: Echelon<Rational>,
}

impl<'a> System<'a> {
    fn new(nvars: usize, basis: &'a [Monomial]) -> Self {
        System { basis, echelon: Echelon::new(nvars * basis.len()) }
    }

    /// Adds the conditions `α^e | Σ_i w_i p_i`.
    fn require_divisible(&mut self, sub: &Substitution, e: u32, weights: &[(usize, Rational)]) {
        if e == 0 {
            return;
        }
        let nb = self.basis.len();
        let mut rows: BTreeMap<&Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
        for (i, w) in weights {
            for (k, image) in sub.images.iter().enumerate() {
                for (mono, c) in image.terms() {
                    if mono.exps()[sub.pivot] < e {
                        rows.entry(mono).or_default().push((i * nb + k, w.clone() * c.clone()));
                    }
                }
            }
        }
        for (_, row) in rows {
            self.echelon.insert(row);
        }
    }

    fn kernel_dim(&self) -> usize {
        self.echelon.cols() - self.echelon.rank()
    }

    fn kernel_polys(&self, nvars: usize) -> Vec<Vec<Poly>> {
        let nb = self.basis.len();
        self.echelon
            .kernel_basis()
            .into_iter()
            .map(|v| (0..nvars).map(|i| Poly::from_coefficient_vector(nvars, self.basis, &v[i * nb..(i + 1) * nb])).collect())
            .collect()
    }
}

fn derivation_system<'a>(arr: &Arrangement, m: &Multiplicity, basis: &'a [Monomial]) -> System<'a> {
    let n = arr.ambient_dim();
    let mut sys = System::new(n, basis);
    for (form, &e) in arr.forms().zip(m.values()) {
        if e == 0 {
            continue;
        }
        let sub = Substitution::new(form, basis);
        let weights: Vec<(usize, Rational)> =
            form.coeffs().iter().enumerate().filter(|(_, a)| **a != 0).map(|(i, &a)| (i, rational(a))).collect();
        sys.require_divisible(&sub, e, &weights);
    }
    sys
}

fn form_system<'a>(arr: &Arrangement, m: &Multiplicity, basis: &'a [Monomial]) -> System<'a> {
    let n = arr.ambient_dim();
    let mut sys = System::new(n, basis);
    for (form, &e) in arr.forms().zip(m.values()) {
        if e == 0 {
            continue;
        }
        let sub = Substitution::new(form, basis);
        let a = form.coeffs();
        let j0 = form.pivot();
        // Pairs (j0, j) generate all conditions a_i p_j - a_j p_i since a_{j0} ≠ 0.
        for j in (0..n).filter(|&j| j != j0) {
            let mut weights = vec![(j, rational(a[j0]))];
            if a[j] != 0 {
                weights.push((j0, rational(-a[j])));
            }
            sys.require_divisible(&sub, e, &weights);
        }
    }
    sys
}

/// `dim D(A,m)_d`
pub fn derivation_space_dim(arr: &Arrangement, m: &Multiplicity, d: u32) -> usize {
    let basis = monomials_of_degree(arr.ambient_dim(), d);
    derivation_system(arr, m, &basis).kernel_dim()
}

/// A vector-space basis of `D(A,m)_d`.
pub fn derivation_space(arr: &Arrangement, m: &Multiplicity, d: u32) -> Vec<Derivation> {
    let n = arr.ambient_dim();
    let basis = monomials_of_degree(n, d);
    derivation_system(arr, m, &basis)
        .kernel_polys(n)
        .into_iter()
        .map(|coeffs| Derivation::new(coeffs).expect("homogeneous by construction"))
        .collect()
}

/// `dim {g ∈ S_d : α_H^{m(H)} | g for all H}`, the degree-`d` piece of the
/// coefficient module of top-degree derivations.
pub fn divisible_space_dim(arr: &Arrangement, m: &Multiplicity, d: u32) -> usize {
    let basis = monomials_of_degree(arr.ambient_dim(), d);
    let mut sys = System::new(1, &basis);
    for (form, &e) in arr.forms().zip(m.values()) {
        if e > 0 {
            let sub = Substitution::new(form, &basis);
            sys.require_divisible(&sub, e, &[(0, rational(1))]);
        }
    }
    sys.kernel_dim()
}

/// Numerator degree `d + |m|` of forms of degree `d`, if nonnegative.
fn numerator_degree(m: &Multiplicity, d: i64) -> Option<u32> {
    u32::try_from(d + m.total() as i64).ok()
}

/// `dim Ω¹(A,m)_d`, where a form `(1/Q(A,m)) Σ p_i dx_i` has degree
/// `deg p_i − |m|`.
pub fn form_space_dim(arr: &Arrangement, m: &Multiplicity, d: i64) -> usize {
    let Some(nd) = numerator_degree(m, d) else { return 0 };
    let basis = monomials_of_degree(arr.ambient_dim(), nd);
    form_system(arr, m, &basis).kernel_dim()
}

/// A vector-space basis of `Ω¹(A,m)_d`.
pub fn form_space(arr: &Arrangement, m: &Multiplicity, d: i64) -> Vec<LogForm1> {
    let Some(nd) = numerator_degree(m, d) else { return Vec::new() };
    let n = arr.ambient_dim();
    let basis = monomials_of_degree(n, nd);
    let q = defining_poly(arr, m);
    let forms: Vec<LinearForm> = arr.forms().cloned().collect();
    form_system(arr, m, &basis)
        .kernel_polys(n)
        .into_iter()
        .filter(|ps| ps.iter().any(|p| !p.is_zero()))
        .map(|ps| LogForm1::from_quotient(ps, &q, &forms).expect("Q splits into arrangement forms"))
        .collect()
}
