//! Logarithmic derivations and forms of a multiarrangement.
//!
//! `D(A,m)` is made of polynomial vector fields `δ = Σ f_i ∂_i` with
//! `α_H^{m(H)} | δ(α_H)`; `Ω¹(A,m)` of rational one-forms with poles bounded
//! by `Q(A,m)` such that `dα_H ∧ ω` has no pole along `H`.

mod constraints;
mod exponents;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{poly_det, LinearForm};
use crate::arrangement::{defining_poly, Arrangement, Multiplicity};
use crate::error::{Error, Result};
use crate::{Poly, Rational, RationalFunction};

pub use constraints::{derivation_space, derivation_space_dim, divisible_space_dim, form_space, form_space_dim};
pub use exponents::{
    detect_exponents, detect_free_basis, hilbert_function, DetectOptions, FreeBasis, FreenessReport, Side,
};

/// Polynomial vector field `Σ f_i ∂_i` with homogeneous coefficients of one
/// common degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    coeffs: Vec<Poly>,
}

impl Derivation {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        let n = coeffs.len();
        if coeffs.iter().any(|f| f.nvars() != n) {
            return Err(Error::Input("derivation needs one coefficient per variable".into()));
        }
        let mut degrees = coeffs.iter().filter(|f| !f.is_zero()).map(|f| f.homogeneous_degree());
        if let Some(first) = degrees.next() {
            if first.is_none() || degrees.any(|d| d != first) {
                return Err(Error::Input("derivation coefficients must be homogeneous of one degree".into()));
            }
        }
        Ok(Derivation { coeffs })
    }

    /// `∂_i`
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![Poly::zero(nvars); nvars];
        coeffs[i] = Poly::one(nvars);
        Derivation { coeffs }
    }

    /// `E = Σ x_i ∂_i`
    pub fn euler(nvars: usize) -> Self {
        Derivation { coeffs: (0..nvars).map(|i| Poly::var(nvars, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|f| f.is_zero())
    }

    /// Common coefficient degree; `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.iter().find(|f| !f.is_zero()).and_then(|f| f.homogeneous_degree())
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Poly::zero(self.nvars()), |acc, (i, c)| &acc + &(c * &f.partial(i)))
    }

    /// `δ(α) = Σ a_i f_i`
    pub fn apply_form(&self, form: &LinearForm) -> Poly {
        form.pair(&self.coeffs)
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<Self> {
        Derivation::new(self.coeffs.iter().map(|c| c * p).collect())
    }

    /// `Σ c_j δ_j` for derivations of one degree.
    pub fn combination(fields: &[&Derivation], weights: &[Rational]) -> Result<Self> {
        let n = fields.first().map(|f| f.nvars()).unwrap_or(0);
        let mut coeffs = vec![Poly::zero(n); n];
        for (f, w) in fields.iter().zip(weights) {
            for (acc, c) in coeffs.iter_mut().zip(&f.coeffs) {
                *acc = &*acc + &c.scale(w);
            }
        }
        Derivation::new(coeffs)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::algebra::variable_names(self.nvars());
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(&names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({c})*d{v}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Rational one-form `Σ g_i dx_i` whose nonzero coefficients share a degree
/// (numerator degree minus denominator degree).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogForm1 {
    coeffs: Vec<RationalFunction>,
}

impl LogForm1 {
    pub fn new(coeffs: Vec<RationalFunction>) -> Result<Self> {
        let n = coeffs.len();
        if coeffs.iter().any(|g| g.nvars() != n) {
            return Err(Error::Input("form needs one coefficient per variable".into()));
        }
        let mut degrees = coeffs.iter().filter(|g| !g.is_zero()).map(|g| g.homogeneous_degree());
        if let Some(first) = degrees.next() {
            if first.is_none() || degrees.any(|d| d != first) {
                return Err(Error::Input("form coefficients must be homogeneous of one degree".into()));
            }
        }
        Ok(LogForm1 { coeffs })
    }

    /// `dx_i`
    pub fn dx(nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![RationalFunction::zero(nvars); nvars];
        coeffs[i] = RationalFunction::constant(nvars, Rational::one());
        LogForm1 { coeffs }
    }

    /// `df = Σ ∂_i f dx_i`
    pub fn differential(f: &Poly) -> Self {
        let n = f.nvars();
        LogForm1 { coeffs: (0..n).map(|i| RationalFunction::from_poly(f.partial(i))).collect() }
    }

    /// `(1/q) Σ p_i dx_i` where `q` splits into `forms`.
    pub fn from_quotient(numerators: Vec<Poly>, q: &Poly, forms: &[LinearForm]) -> Result<Self> {
        let coeffs = numerators
            .into_iter()
            .map(|p| RationalFunction::from_quotient(p, q, forms))
            .collect::<Result<Vec<_>>>()?;
        LogForm1::new(coeffs)
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|g| g.is_zero())
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.iter().find(|g| !g.is_zero()).and_then(|g| g.homogeneous_degree())
    }

    /// Largest exponent of `form` among the coefficient denominators.
    pub fn pole_order(&self, form: &LinearForm) -> u32 {
        self.coeffs.iter().map(|g| g.pole_order(form)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LogForm1 { coeffs: self.coeffs.iter().map(|g| g.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<Self> {
        LogForm1::new(self.coeffs.iter().map(|g| g.mul_poly(p)).collect())
    }

    pub fn mul_function(&self, f: &RationalFunction) -> Result<Self> {
        LogForm1::new(self.coeffs.iter().map(|g| g * f).collect())
    }

    pub fn mul_linear_power(&self, form: &LinearForm, e: u32) -> Self {
        LogForm1 { coeffs: self.coeffs.iter().map(|g| g.mul_linear_power(form, e)).collect() }
    }

    pub fn add(&self, other: &LogForm1) -> Result<Self> {
        LogForm1::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    /// Coefficients of `dα ∧ ω` on `dx_i ∧ dx_j`, `i < j`.
    pub fn wedge_linear(&self, form: &LinearForm) -> BTreeMap<(usize, usize), RationalFunction> {
        let a = form.coeffs();
        let n = self.nvars();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.coeffs[j].scale(&Rational::from_integer(a[i].into()));
                let rhs = self.coeffs[i].scale(&Rational::from_integer(a[j].into()));
                let c = &lhs - &rhs;
                if !c.is_zero() {
                    out.insert((i, j), c);
                }
            }
        }
        out
    }

    /// `Q·ω` as polynomial coefficients, if `Q·ω` has no poles.
    pub fn times_poly_coefficients(&self, q: &Poly) -> Option<Vec<Poly>> {
        self.coeffs.iter().map(|g| g.mul_poly(q).to_poly()).collect()
    }
}

impl fmt::Display for LogForm1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::algebra::variable_names(self.nvars());
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(&names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({c})*d{v}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Multiset of exponents, kept sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct ExponentSet(Vec<u32>);

impl ExponentSet {
    pub fn new(mut values: Vec<u32>) -> Self {
        values.sort_unstable();
        ExponentSet(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `δ ∈ D(A,m)`
pub fn derivation_in_module(arr: &Arrangement, m: &Multiplicity, delta: &Derivation) -> bool {
    arr.forms().zip(m.values()).all(|(form, &e)| {
        let image = delta.apply_form(form);
        image.is_zero() || image.div_linear_power(form, e).is_some()
    })
}

/// `ω ∈ Ω¹(A,m)`: `Q(A,m)·ω` is polynomial and `dα_H ∧ ω` is regular along
/// every `H`.
pub fn form_in_module(arr: &Arrangement, m: &Multiplicity, omega: &LogForm1) -> bool {
    let q = defining_poly(arr, m);
    if omega.times_poly_coefficients(&q).is_none() {
        return false;
    }
    arr.forms().all(|form| omega.wedge_linear(form).values().all(|c| c.pole_order(form) == 0))
}

/// Outcome of a Saito determinant test.
#[derive(Clone, Debug)]
pub struct SaitoCertificate {
    pub holds: bool,
    /// `c` with `det = c·Q(A,m)` (derivations) or `det = c/Q(A,m)` (forms).
    pub constant: Option<Rational>,
    pub determinant: String,
    pub failures: Vec<String>,
}

impl SaitoCertificate {
    fn failed(determinant: String, failures: Vec<String>) -> Self {
        SaitoCertificate { holds: false, constant: None, determinant, failures }
    }
}

/// `Some(c)` when `p = c·q` with `c ≠ 0`.
fn constant_ratio(p: &Poly, q: &Poly) -> Option<Rational> {
    let (pm, pl) = p.leading_term()?;
    let (qm, ql) = q.leading_term()?;
    if pm != qm {
        return None;
    }
    let c = pl.clone() / ql.clone();
    (&q.scale(&c) == p).then_some(c)
}

/// Saito's criterion for `ℓ` derivations: membership plus
/// `det(f_ij) = c·Q(A,m)` with `c ≠ 0`.
pub fn saito_check(arr: &Arrangement, m: &Multiplicity, thetas: &[Derivation]) -> SaitoCertificate {
    let n = arr.ambient_dim();
    if thetas.len() != n || thetas.iter().any(|t| t.nvars() != n) {
        return SaitoCertificate::failed(String::new(), vec![format!("expected {n} derivations in {n} variables")]);
    }
    let failures: Vec<String> = thetas
        .iter()
        .enumerate()
        .filter(|(_, t)| !derivation_in_module(arr, m, t))
        .map(|(i, _)| format!("derivation {i} is not in D(A,m)"))
        .collect();
    let rows: Vec<Vec<Poly>> = thetas.iter().map(|t| t.coeffs.clone()).collect();
    let det = poly_det(&rows);
    if !failures.is_empty() {
        return SaitoCertificate::failed(det.to_string(), failures);
    }
    let q = defining_poly(arr, m);
    match constant_ratio(&det, &q) {
        Some(c) => SaitoCertificate { holds: true, constant: Some(c), determinant: det.to_string(), failures },
        None => SaitoCertificate::failed(det.to_string(), vec!["determinant is not a nonzero multiple of Q(A,m)".into()]),
    }
}

/// Dual criterion: membership in `Ω¹(A,m)` plus `det(g_ij) = c/Q(A,m)`.
pub fn saito_check_forms(arr: &Arrangement, m: &Multiplicity, omegas: &[LogForm1]) -> SaitoCertificate {
    let n = arr.ambient_dim();
    if omegas.len() != n || omegas.iter().any(|w| w.nvars() != n) {
        return SaitoCertificate::failed(String::new(), vec![format!("expected {n} forms in {n} variables")]);
    }
    let failures: Vec<String> = omegas
        .iter()
        .enumerate()
        .filter(|(_, w)| !form_in_module(arr, m, w))
        .map(|(i, _)| format!("form {i} is not in Omega^1(A,m)"))
        .collect();
    if !failures.is_empty() {
        return SaitoCertificate::failed(String::new(), failures);
    }
    // det(g) = det(Q·g) / Q^ℓ, so the test is det(Q·g) = c·Q^{ℓ-1}.
    let q = defining_poly(arr, m);
    let rows: Vec<Vec<Poly>> = omegas.iter().map(|w| w.times_poly_coefficients(&q).expect("membership checked")).collect();
    let det = poly_det(&rows);
    let target = q.pow(n.saturating_sub(1) as u32);
    let forms: Vec<LinearForm> = arr.forms().cloned().collect();
    let shown = RationalFunction::from_quotient(det.clone(), &q.pow(n as u32), &forms)
        .map(|f| f.to_string())
        .unwrap_or_default();
    match constant_ratio(&det, &target) {
        Some(c) => SaitoCertificate { holds: true, constant: Some(c), determinant: shown, failures },
        None => SaitoCertificate::failed(shown, vec!["determinant is not a nonzero multiple of 1/Q(A,m)".into()]),
    }
}

/// `⟨δ, ω⟩ = Σ f_i g_i`
pub fn pairing(delta: &Derivation, omega: &LogForm1) -> Result<RationalFunction> {
    if delta.nvars() != omega.nvars() {
        return Err(Error::Input("pairing needs matching dimensions".into()));
    }
    let n = delta.nvars();
    Ok(delta
        .coeffs
        .iter()
        .zip(&omega.coeffs)
        .fold(RationalFunction::zero(n), |acc, (f, g)| &acc + &g.mul_poly(f)))
}

/// Matrix `⟨θ_i, ω_j⟩` and its determinant, which must be a polynomial.
pub fn pairing_matrix(thetas: &[Derivation], omegas: &[LogForm1]) -> Result<(Vec<Vec<Poly>>, Poly)> {
    let mut rows = Vec::with_capacity(thetas.len());
    for t in thetas {
        let mut row = Vec::with_capacity(omegas.len());
        for w in omegas {
            let v = pairing(t, w)?;
            row.push(v.to_poly().ok_or_else(|| Error::Internal(format!("pairing {v} is not a polynomial")))?);
        }
        rows.push(row);
    }
    let det = poly_det(&rows);
    Ok((rows, det))
}

pub(crate) fn rational(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::arrangement::{build_coxeter, Family};

    fn p(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    fn b2_basis_forms() -> Vec<LogForm1> {
        let q = p("x^2 - y^2");
        let forms: Vec<LinearForm> = build_coxeter(Family::B, 2).unwrap().forms().cloned().collect();
        let w1 = LogForm1::from_quotient(vec![p("x"), p("-y")], &q, &forms).unwrap();
        let w2 = LogForm1::from_quotient(vec![p("-y"), p("x")], &(&q * &p("x*y")), &forms).unwrap();
        vec![w1, w2]
    }

    #[test]
    fn b2_classical_basis_certifies_with_minus_one() {
        let arr = build_coxeter(Family::B, 2).unwrap();
        let m = Multiplicity::constant(4, 1);
        let t2 = Derivation::new(vec![p("x^3"), p("y^3")]).unwrap();
        let cert = saito_check(&arr, &m, &[Derivation::euler(2), t2]);
        assert!(cert.holds, "{:?}", cert.failures);
        assert_eq!(cert.constant, Some(rational(-1)));
    }

    #[test]
    fn partials_certify_empty_multiplicity() {
        let arr = build_coxeter(Family::A, 3).unwrap();
        let m = Multiplicity::constant(arr.len(), 0);
        let ds: Vec<Derivation> = (0..3).map(|i| Derivation::partial(3, i)).collect();
        assert_eq!(saito_check(&arr, &m, &ds).constant, Some(rational(1)));
        let dx: Vec<LogForm1> = (0..3).map(|i| LogForm1::dx(3, i)).collect();
        assert_eq!(saito_check_forms(&arr, &m, &dx).constant, Some(rational(1)));
    }

    #[test]
    fn dependent_fields_fail() {
        let arr = build_coxeter(Family::B, 2).unwrap();
        let m = Multiplicity::constant(4, 1);
        let e = Derivation::euler(2);
        let xe = e.mul_poly(&p("x")).unwrap();
        assert!(!saito_check(&arr, &m, &[e, xe]).holds);
        assert!(!saito_check_forms(&arr, &m, &[LogForm1::dx(2, 0), LogForm1::dx(2, 0)]).holds);
    }

    #[test]
    fn b2_form_basis_has_determinant_one_over_q() {
        let arr = build_coxeter(Family::B, 2).unwrap();
        let m = Multiplicity::constant(4, 1);
        let cert = saito_check_forms(&arr, &m, &b2_basis_forms());
        assert!(cert.holds, "{:?}", cert.failures);
        assert_eq!(cert.constant, Some(rational(1)));
    }

    #[test]
    fn pairings() {
        let dx = LogForm1::dx(2, 0);
        assert_eq!(pairing(&Derivation::partial(2, 0), &dx).unwrap().to_poly(), Some(Poly::one(2)));
        assert!(pairing(&Derivation::partial(2, 1), &dx).unwrap().is_zero());
        let w1 = &b2_basis_forms()[0];
        assert_eq!(pairing(&Derivation::euler(2), w1).unwrap().to_poly(), Some(Poly::one(2)));
    }

    #[test]
    fn euler_membership_needs_multiplicity_at_most_one() {
        let arr = build_coxeter(Family::B, 2).unwrap();
        let e = Derivation::euler(2);
        for values in [[0, 1, 1, 0], [1, 1, 1, 1], [2, 0, 0, 0], [1, 1, 2, 1]] {
            let m = Multiplicity::new(values.to_vec());
            assert_eq!(derivation_in_module(&arr, &m, &e), m.max() <= 1, "{m}");
        }
    }

    #[test]
    fn inhomogeneous_coefficients_are_rejected() {
        assert!(Derivation::new(vec![p("x"), p("x^2")]).is_err());
        assert!(Derivation::new(vec![p("x + x^2"), p("0")]).is_err());
    }
}
