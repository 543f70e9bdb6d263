//! Rank-two invariant charts, the primitive derivation and the connection
//! `∇` acting on logarithmic forms.
//!
//! With basic invariants `P₁` (quadratic) and `P₂` (degree `h`), the primitive
//! derivation is `D = ∂/∂P₂`, obtained by inverting the Jacobian of
//! `(P₁, P₂)`. `∇_δ` differentiates the coefficients of a form in the fixed
//! linear coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;


use crate::algebra::{parse_poly, LinearForm};
use crate::arrangement::{build_coxeter, Arrangement, CoxeterSpec, Family, Multiplicity};
use crate::dermod::{derivation_in_module, form_in_module, saito_check_forms, Derivation, LogForm1, SaitoCertificate};
use crate::error::{Error, Result};
use crate::{Poly, RationalFunction};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ChartType {
    A2,
    B2,
}

impl FromStr for ChartType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A2" => Ok(ChartType::A2),
            "B2" => Ok(ChartType::B2),
            _ => Err(Error::Unsupported(format!("no invariant chart for `{s}` (available: A2, B2)"))),
        }
    }
}

impl fmt::Display for ChartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChartType::A2 => "A2",
            ChartType::B2 => "B2",
        })
    }
}

/// Coordinates, arrangement and basic invariants of a rank-two reflection
/// group.
#[derive(Clone, Debug)]
pub struct InvariantChart {
    pub kind: ChartType,
    pub arrangement: Arrangement,
    pub p1: Poly,
    pub p2: Poly,
    pub coxeter_number: u32,
}

/// B2 in `(x, y)`; A2 in coordinates `(u, v)` of the plane `x₁+x₂+x₃ = 0`
/// via `x = (u, v − u, −v)`, where `P₁` is the restricted sum of squares and
/// `P₂ = x₁x₂x₃`.
pub fn invariant_chart(kind: ChartType) -> InvariantChart {
    let parse = |s: &str| parse_poly(s, 2).expect("chart invariant parses");
    match kind {
        ChartType::B2 => InvariantChart {
            kind,
            arrangement: build_coxeter(Family::B, 2).expect("B2 builds"),
            p1: parse("x^2 + y^2"),
            p2: parse("x^2*y^2"),
            coxeter_number: 4,
        },
        ChartType::A2 => {
            let spec = CoxeterSpec::new(Family::A, 2).expect("A2 spec");
            let arrangement = Arrangement::from_int_forms(2, &[vec![2, -1], vec![-1, 2], vec![1, 1]])
                .expect("A2 chart forms")
                .with_coxeter(spec);
            InvariantChart { kind, arrangement, p1: parse("2*u^2 - 2*u*v + 2*v^2"), p2: parse("u^2*v - u*v^2"), coxeter_number: 3 }
        }
    }
}

impl InvariantChart {
    pub fn forms(&self) -> Vec<LinearForm> {
        self.arrangement.forms().cloned().collect()
    }

    /// Rows `(∂P_i/∂x, ∂P_i/∂y)`.
    pub fn jacobian(&self) -> [[Poly; 2]; 2] {
        [[self.p1.partial(0), self.p1.partial(1)], [self.p2.partial(0), self.p2.partial(1)]]
    }

    pub fn jacobian_det(&self) -> Poly {
        let [[a, b], [c, d]] = self.jacobian();
        &(&a * &d) - &(&b * &c)
    }

    /// `∂/∂P₁` and `∂/∂P₂` from the inverse Jacobian.
    pub fn invariant_partials(&self) -> Result<[RationalVectorField; 2]> {
        let [[a, b], [c, d]] = self.jacobian();
        let det = self.jacobian_det();
        if det.is_zero() {
            return Err(Error::Internal(format!("{} chart has a singular Jacobian", self.kind)));
        }
        let forms = self.forms();
        let q = |p: Poly| {
            RationalFunction::from_quotient(p, &det, &forms)
                .map_err(|e| Error::Internal(format!("Jacobian determinant does not split into the chart forms: {e}")))
        };
        // ∂/∂P_i = Σ_j (J⁻¹)_{ji} ∂_j with J⁻¹ = adj(J)/det
        let dp1 = RationalVectorField::new(vec![q(d)?, q(-&c)?])?;
        let dp2 = RationalVectorField::new(vec![q(-&b)?, q(a)?])?;
        Ok([dp1, dp2])
    }

    /// `dP₁`
    pub fn dp1(&self) -> LogForm1 {
        LogForm1::differential(&self.p1)
    }
}

/// `Σ g_i ∂_i` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVectorField {
    coeffs: Vec<RationalFunction>,
}

impl RationalVectorField {
    pub fn new(coeffs: Vec<RationalFunction>) -> Result<Self> {
        let n = coeffs.len();
        if coeffs.iter().any(|g| g.nvars() != n) {
            return Err(Error::Input("vector field needs one coefficient per variable".into()));
        }
        Ok(RationalVectorField { coeffs })
    }

    pub fn partial(nvars: usize, i: usize) -> Self {
        RationalVectorField::from(&Derivation::partial(nvars, i))
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    /// `δ(f)`
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .fold(RationalFunction::zero(self.nvars()), |acc, (i, g)| &acc + &(g * &f.partial(i)))
    }

    pub fn apply_poly(&self, f: &Poly) -> RationalFunction {
        self.apply(&RationalFunction::from_poly(f.clone()))
    }

    /// `f·δ`
    pub fn mul_function(&self, f: &RationalFunction) -> Self {
        RationalVectorField { coeffs: self.coeffs.iter().map(|g| g * f).collect() }
    }
}

impl From<&Derivation> for RationalVectorField {
    fn from(d: &Derivation) -> Self {
        RationalVectorField { coeffs: d.coeffs().iter().map(|f| RationalFunction::from_poly(f.clone())).collect() }
    }
}

impl fmt::Display for RationalVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::algebra::variable_names(self.nvars());
        let parts: Vec<String> =
            self.coeffs.iter().zip(&names).filter(|(c, _)| !c.is_zero()).map(|(c, v)| format!("({c})*d/d{v}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The primitive derivation `D = ∂/∂P₂`.
pub fn primitive_derivation(chart: &InvariantChart) -> Result<RationalVectorField> {
    let [_, d] = chart.invariant_partials()?;
    Ok(d)
}

/// `∇_δ ω`: `δ` applied to every coefficient.
pub fn nabla(delta: &RationalVectorField, omega: &LogForm1) -> Result<LogForm1> {
    if delta.nvars() != omega.nvars() {
        return Err(Error::Input("vector field and form live in different dimensions".into()));
    }
    LogForm1::new(omega.coeffs().iter().map(|g| delta.apply(g)).collect())
}

/// `∇_δ` on a two-form given by its coefficients on `dx_i ∧ dx_j`.
pub fn nabla_two_form(
    delta: &RationalVectorField,
    omega: &BTreeMap<(usize, usize), RationalFunction>,
) -> BTreeMap<(usize, usize), RationalFunction> {
    omega.iter().map(|(&ij, g)| (ij, delta.apply(g))).filter(|(_, g)| !g.is_zero()).collect()
}

fn check_arrangement_poles(chart: &InvariantChart, omega: &LogForm1) -> Result<()> {
    for g in omega.coeffs() {
        if let Some(f) = g.denominator().keys().find(|f| chart.arrangement.position(f).is_none()) {
            return Err(Error::Internal(format!("pole along {f}, which is not a hyperplane of {}", chart.kind)));
        }
    }
    Ok(())
}

/// `∇_D^k dP₁`
pub fn nabla_d_power(chart: &InvariantChart, k: u32) -> Result<LogForm1> {
    let d = primitive_derivation(chart)?;
    let mut omega = chart.dp1();
    for _ in 0..k {
        omega = nabla(&d, &omega)?;
        check_arrangement_poles(chart, &omega)?;
    }
    Ok(omega)
}

/// Exponent of `α_H` in the reduced denominators of `ω`.
pub fn pole_order(omega: &LogForm1, form: &LinearForm) -> u32 {
    omega.pole_order(form)
}

/// `α^e·ω` is regular along `α = 0` while `α^{e−1}·ω` is not.
pub fn has_exact_pole_order(omega: &LogForm1, form: &LinearForm, e: u32) -> bool {
    let regular = omega.mul_linear_power(form, e).pole_order(form) == 0;
    let still_pole = e > 0 && omega.mul_linear_power(form, e - 1).pole_order(form) > 0;
    regular && (still_pole || (e == 0 && !omega.is_zero()))
}

/// Per-hyperplane pole orders of `∇_D^k dP₁` and whether each is exactly
/// `2k − 1`.
#[derive(Clone, Debug)]
pub struct PoleReport {
    pub k: u32,
    pub orders: Vec<(LinearForm, u32, bool)>,
    pub degree: Option<i64>,
}

impl PoleReport {
    pub fn exact(&self) -> bool {
        self.orders.iter().all(|(_, _, ok)| *ok)
    }
}

pub fn pole_report(chart: &InvariantChart, k: u32) -> Result<PoleReport> {
    let omega = nabla_d_power(chart, k)?;
    let expected = (2 * k).saturating_sub(1);
    let orders = chart
        .forms()
        .into_iter()
        .map(|f| {
            let order = pole_order(&omega, &f);
            let ok = if k == 0 { order == 0 } else { has_exact_pole_order(&omega, &f, expected) };
            (f, order, ok)
        })
        .collect();
    Ok(PoleReport { k, orders, degree: omega.degree() })
}

/// Basis of `Ω¹(A, m̄)` for constant `m̄ = 2k` or `2k + 1`: the images of
/// `∇_D^k dP₁` under `∇_{∂_i}` (even) or `∇_{∂/∂P_i}` (odd), certified by the
/// dual Saito criterion.
pub fn terao_basis(chart: &InvariantChart, mbar: u32) -> Result<(Vec<LogForm1>, SaitoCertificate)> {
    let k = mbar / 2;
    let base = nabla_d_power(chart, k)?;
    let fields: Vec<RationalVectorField> = if mbar.is_multiple_of(2) {
        (0..2).map(|i| RationalVectorField::partial(2, i)).collect()
    } else {
        chart.invariant_partials()?.into()
    };
    let basis = fields.iter().map(|f| nabla(f, &base)).collect::<Result<Vec<_>>>()?;
    let m = Multiplicity::constant(chart.arrangement.len(), mbar);
    let cert = saito_check_forms(&chart.arrangement, &m, &basis);
    if !cert.holds {
        return Err(Error::Internal(format!(
            "{} basis for constant multiplicity {mbar} failed certification: {:?}",
            chart.kind, cert.failures
        )));
    }
    Ok((basis, cert))
}

/// `Φ_k(δ) = ∇_δ ∇_D^k dP₁`, which lies in `Ω¹(A, 2k − m)` and has degree
/// `deg δ − kh`.
pub fn phi_k(chart: &InvariantChart, delta: &Derivation, m: &Multiplicity, k: u32) -> Result<LogForm1> {
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    m.check_aligned(&chart.arrangement)?;
    if !m.is_zero_one() {
        return Err(Error::Input(format!("multiplicity {m} is not {{0,1}}-valued")));
    }
    if !derivation_in_module(&chart.arrangement, m, delta) {
        return Err(Error::Input(format!("{delta} is not in D(A,m) for m = {m}")));
    }
    let base = nabla_d_power(chart, k)?;
    let omega = nabla(&RationalVectorField::from(delta), &base)?;
    let target = m.subtracted_from(2 * k).expect("2k >= 1 >= m");
    if !form_in_module(&chart.arrangement, &target, &omega) {
        return Err(Error::Internal(format!("image of {delta} is not in the form module of {target}")));
    }
    if let (Some(dd), Some(dw)) = (delta.degree(), omega.degree()) {
        let expected = dd as i64 - (k * chart.coxeter_number) as i64;
        if dw != expected {
            return Err(Error::Internal(format!("image has degree {dw}, expected {expected}")));
        }
    }
    if omega.is_zero() != delta.is_zero() {
        return Err(Error::Internal(format!("image of nonzero {delta} vanished")));
    }
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    fn rf(num: &str, den: &str, chart: &InvariantChart) -> RationalFunction {
        RationalFunction::from_quotient(p(num), &p(den), &chart.forms()).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn jacobians_are_multiples_of_q() {
        let b2 = invariant_chart(ChartType::B2);
        assert_eq!(b2.jacobian_det(), p("4*x^3*y - 4*x*y^3"));
        let a2 = invariant_chart(ChartType::A2);
        let expected = &(&p("2*u - v") * &p("2*v - u")) * &p("u + v");
        assert_eq!(a2.jacobian_det(), expected.scale(&int(-2)));
        for chart in [a2, b2] {
            assert_eq!(chart.p1.homogeneous_degree(), Some(2));
            assert_eq!(chart.p2.homogeneous_degree(), Some(chart.coxeter_number));
        }
    }

    #[test]
    fn primitive_derivation_kills_p1_and_normalizes_p2() {
        for kind in [ChartType::A2, ChartType::B2] {
            let chart = invariant_chart(kind);
            let [d1, d2] = chart.invariant_partials().unwrap();
            let one = RationalFunction::constant(2, int(1));
            assert_eq!(d1.apply_poly(&chart.p1), one);
            assert!(d1.apply_poly(&chart.p2).is_zero());
            assert!(d2.apply_poly(&chart.p1).is_zero());
            assert_eq!(d2.apply_poly(&chart.p2), one);
        }
    }

    #[test]
    fn b2_explicit_fields_and_forms() {
        let chart = invariant_chart(ChartType::B2);
        let d = primitive_derivation(&chart).unwrap();
        let den = "2*x^3*y - 2*x*y^3";
        assert_eq!(d.coeffs(), [rf("-y", den, &chart), rf("x", den, &chart)]);
        let w = nabla_d_power(&chart, 1).unwrap();
        let expected =
            LogForm1::new(vec![rf("-y", "x^3*y - x*y^3", &chart), rf("x", "x^3*y - x*y^3", &chart)]).unwrap();
        assert_eq!(w, expected);
        let [dp1, _] = chart.invariant_partials().unwrap();
        assert_eq!(dp1.coeffs(), [rf("x", "2*x^2 - 2*y^2", &chart), rf("-y", "2*x^2 - 2*y^2", &chart)]);
    }

    #[test]
    fn nabla_of_coordinate_form() {
        let w = LogForm1::new(vec![RationalFunction::zero(2), RationalFunction::from_poly(p("x"))]).unwrap();
        let out = nabla(&RationalVectorField::partial(2, 0), &w).unwrap();
        assert_eq!(out, LogForm1::dx(2, 1));
    }

    #[test]
    fn pole_orders_of_iterates() {
        for kind in [ChartType::A2, ChartType::B2] {
            let chart = invariant_chart(kind);
            let h = chart.coxeter_number as i64;
            let r0 = pole_report(&chart, 0).unwrap();
            assert!(r0.exact());
            for k in 1..=3 {
                let r = pole_report(&chart, k).unwrap();
                assert!(r.exact(), "{kind} k={k}: {:?}", r.orders);
                assert!(r.orders.iter().all(|(_, o, _)| *o == 2 * k - 1));
                assert_eq!(r.degree, Some(1 - k as i64 * h));
            }
        }
    }

    #[test]
    fn b2_odd_basis_for_simple_arrangement() {
        let chart = invariant_chart(ChartType::B2);
        let (basis, cert) = terao_basis(&chart, 1).unwrap();
        assert_eq!(cert.constant, Some(int(1)));
        assert_eq!(basis[0], LogForm1::new(vec![rf("x", "x^2 - y^2", &chart), rf("-y", "x^2 - y^2", &chart)]).unwrap());
    }

    #[test]
    fn terao_bases_certify() {
        for kind in [ChartType::A2, ChartType::B2] {
            let chart = invariant_chart(kind);
            for mbar in 0..=3 {
                assert!(terao_basis(&chart, mbar).is_ok(), "{kind} {mbar}");
            }
        }
    }

    #[test]
    fn phi_degree_bookkeeping() {
        let chart = invariant_chart(ChartType::B2);
        let m = Multiplicity::indicator(4, 0);
        let w = phi_k(&chart, &Derivation::partial(2, 1), &m, 1).unwrap();
        assert_eq!(w.degree(), Some(-4));
        let e = Derivation::euler(2);
        let w = phi_k(&chart, &e, &Multiplicity::constant(4, 1), 1).unwrap();
        assert_eq!(w.degree(), Some(-3));
        assert!(phi_k(&chart, &Derivation::partial(2, 0), &m, 1).is_err());
    }

    // Random homogeneous data on the B2 chart: numerators of a fixed degree
    // over a common product of hyperplane forms.
    fn homogeneous_poly(deg: u32, coeffs: &[i64]) -> Poly {
        let monos = crate::algebra::monomials_of_degree(2, deg);
        Poly::from_coefficient_vector(2, &monos, &coeffs.iter().take(monos.len()).map(|&c| int(c)).collect::<Vec<_>>())
    }

    fn denominator(chart: &InvariantChart, exps: &[u32]) -> BTreeMap<LinearForm, u32> {
        chart.forms().into_iter().zip(exps).filter(|(_, e)| **e > 0).map(|(f, e)| (f, *e)).collect()
    }

    fn function_strategy() -> impl Strategy<Value = RationalFunction> {
        (0u32..3, proptest::collection::vec(-3i64..=3, 4), proptest::collection::vec(0u32..3, 4)).prop_map(|(d, c, e)| {
            let chart = invariant_chart(ChartType::B2);
            RationalFunction::new(homogeneous_poly(d, &c), denominator(&chart, &e))
        })
    }

    fn form_strategy() -> impl Strategy<Value = LogForm1> {
        (0u32..3, proptest::collection::vec(-3i64..=3, 8), proptest::collection::vec(0u32..3, 4)).prop_map(|(d, c, e)| {
            let chart = invariant_chart(ChartType::B2);
            let den = denominator(&chart, &e);
            let coeffs = (0..2).map(|i| RationalFunction::new(homogeneous_poly(d, &c[4 * i..]), den.clone())).collect();
            LogForm1::new(coeffs).unwrap()
        })
    }

    fn field_strategy() -> impl Strategy<Value = RationalVectorField> {
        (0u32..3, proptest::collection::vec(-3i64..=3, 8), proptest::collection::vec(0u32..2, 4)).prop_map(|(d, c, e)| {
            let chart = invariant_chart(ChartType::B2);
            let den = denominator(&chart, &e);
            let coeffs = (0..2).map(|i| RationalFunction::new(homogeneous_poly(d, &c[4 * i..]), den.clone())).collect();
            RationalVectorField::new(coeffs).unwrap()
        })
    }

    /// `δ(N/Den) = (δN·Den − N·δDen)/Den²` using polynomial arithmetic only.
    fn quotient_rule(delta: &RationalVectorField, f: &RationalFunction) -> RationalFunction {
        let n = f.scaled_numerator();
        let den = f.denominator_poly();
        let dn = delta.apply_poly(&n);
        let dden = delta.apply_poly(&den);
        let top = &dn.mul_poly(&den) - &dden.mul_poly(&n);
        let mut sq = f.denominator().clone();
        sq.values_mut().for_each(|e| *e *= 2);
        &top * &RationalFunction::new(Poly::one(2), sq)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn nabla_on_functions_is_the_derivation(delta in field_strategy(), f in function_strategy()) {
            prop_assert_eq!(delta.apply(&f), quotient_rule(&delta, &f));
        }

        #[test]
        fn nabla_is_linear_over_functions_in_the_field(delta in field_strategy(), f in function_strategy(), w in form_strategy()) {
            let lhs = nabla(&delta.mul_function(&f), &w).unwrap();
            let rhs = nabla(&delta, &w).unwrap().mul_function(&f).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn leibniz_rule(delta in field_strategy(), f in function_strategy(), w in form_strategy()) {
            let lhs = nabla(&delta, &w.mul_function(&f).unwrap()).unwrap();
            let rhs = nabla(&delta, &w).unwrap().mul_function(&f).unwrap().add(&w.mul_function(&delta.apply(&f)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn nabla_commutes_with_wedging_a_linear_form(delta in field_strategy(), w in form_strategy(), a in -3i64..=3, b in -3i64..=3) {
            prop_assume!(a != 0 || b != 0);
            let (form, _) = LinearForm::new(vec![a, b]).unwrap();
            let lhs = nabla_two_form(&delta, &w.wedge_linear(&form));
            let rhs = nabla(&delta, &w).unwrap().wedge_linear(&form);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
