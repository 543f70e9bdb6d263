//! Named verification suites with per-case witnesses.
//!
//! Cases inside a suite run in parallel; reports keep the declared case
//! order.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{build_coxeter, build_coxeter_with, Arrangement, Family, Multiplicity, Realization};
use crate::dermod::{detect_free_basis, pairing_matrix, DetectOptions, Derivation, ExponentSet, FreeBasis};
use crate::error::{Error, Result};
use crate::lattice::{char_poly, product_of_linear_factors};
use crate::multichar::{
    char_poly_from_decomposition, decompose_quasi_constant, multi_char_poly, rank2_char_poly_oracle, shift_scan,
};
use crate::primitive::{invariant_chart, phi_k, pole_report, terao_basis, ChartType, InvariantChart};
use crate::{IntPoly, Integer};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Suite {
    /// Four generic planes inside A3 and their shifted multiplicities.
    FourPlanes,
    /// Lattice polynomial against classical exponents.
    LatticeExponents,
    /// Shift formula against the rank-two Hilbert series oracle.
    ShiftVsOracle,
    /// Exponents of `2 ± m` from those of `m`.
    ExponentShift,
    /// Pole orders of `∇_D^k dP₁`.
    PoleOrders,
    /// Bases of `Ω¹` for constant multiplicities.
    ConstantFormBases,
    /// `Φ_k` carries bases of `D(A,m)` to bases of `Ω¹(A, 2k − m)`.
    Transport,
    /// Nondegenerate pairing and exponent reflection.
    DualityPairing,
    /// Both decompositions of an odd constant multiplicity.
    OddConstant,
    /// Report-only shift scan for arbitrary rank-two multiplicities.
    ShiftScan,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::FourPlanes,
        Suite::LatticeExponents,
        Suite::ShiftVsOracle,
        Suite::ExponentShift,
        Suite::PoleOrders,
        Suite::ConstantFormBases,
        Suite::Transport,
        Suite::DualityPairing,
        Suite::OddConstant,
        Suite::ShiftScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FourPlanes => "example18",
            Suite::LatticeExponents => "solomon-terao",
            Suite::ShiftVsOracle => "theorem15-rank2",
            Suite::ExponentShift => "corollary12",
            Suite::PoleOrders => "lemma8",
            Suite::ConstantFormBases => "theorem6",
            Suite::Transport => "theorem10",
            Suite::DualityPairing => "duality-pairing",
            Suite::OddConstant => "odd-constant",
            Suite::ShiftScan => "conjecture19",
        }
    }

    /// Informational suites never fail on a mathematical difference.
    pub fn informational(self) -> bool {
        self == Suite::ShiftScan
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            Error::Input(format!("unknown suite `{s}` (available: {})", names.join(", ")))
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub case: String,
    pub status: Status,
    pub witness: Value,
}

impl Case {
    fn new(case: impl Into<String>, ok: bool, witness: Value) -> Self {
        Case { case: case.into(), status: if ok { Status::Pass } else { Status::Fail }, witness }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub informational: bool,
    pub status: Status,
    pub cases: Vec<Case>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerificationReport {
    fn new(suite: Suite, cases: Vec<Case>) -> Self {
        let ok = cases.iter().all(Case::passed);
        VerificationReport {
            suite: suite.name().into(),
            informational: suite.informational(),
            status: if ok { Status::Pass } else { Status::Fail },
            cases,
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed_ms = Some(elapsed.as_millis());
        self
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
}

impl VerifyOptions {
    fn detect(&self) -> DetectOptions {
        DetectOptions { seed: self.seed, ..DetectOptions::default() }
    }
}

/// Integer coefficients, highest degree first, as JSON numbers.
pub fn poly_json(p: &IntPoly) -> Value {
    Value::Array(
        p.descending()
            .iter()
            .map(|c| c.to_i64().map_or_else(|| Value::String(c.to_string()), Value::from))
            .collect(),
    )
}

fn exps_json(e: &ExponentSet) -> Value {
    json!(e.values())
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport> {
    let cases = match suite {
        Suite::FourPlanes => four_plane_example()?,
        Suite::LatticeExponents => lattice_against_exponents()?,
        Suite::ShiftVsOracle => shift_formula_against_oracle()?,
        Suite::ExponentShift => exponent_shifts(opts)?,
        Suite::PoleOrders => primitive_pole_orders()?,
        Suite::ConstantFormBases => constant_multiplicity_bases()?,
        Suite::Transport => basis_transport(opts)?,
        Suite::DualityPairing => duality_pairing(opts)?,
        Suite::OddConstant => odd_constant_decompositions()?,
        Suite::ShiftScan => rank2_shift_scan()?,
    };
    Ok(VerificationReport::new(suite, cases))
}

/// `m⁻¹(1) = {x, y, z, x+y+z}` in the simple-root coordinates of A3.
pub fn four_plane_setup() -> Result<(Arrangement, Multiplicity)> {
    let arr = build_coxeter_with(Family::A, 3, Realization::SimpleRoots)?;
    let m = Multiplicity::new(vec![1, 1, 1, 0, 0, 1]);
    Ok((arr, m))
}

fn four_plane_example() -> Result<Vec<Case>> {
    let (arr, m) = four_plane_setup()?;
    let mut cases = Vec::new();
    let base = crate::multichar::zero_one_char_poly(&arr, &m)?;
    let expected = IntPoly::from_descending([1, -4, 6, -3].map(Integer::from).to_vec());
    cases.push(Case::new("chi(A,m) for m = {x,y,z,x+y+z}", base == expected, json!({ "chi": poly_json(&base) })));
    for k in 1..=2u32 {
        let s = 4 * k as i64;
        for (sign, mt, c2, c0) in [("plus", m.plus_constant(2 * k), -4, -3), ("minus", m.subtracted_from(2 * k).unwrap(), 4, 3)] {
            // (t - 4k)^3 + c2 (t - 4k)^2 + 6 (t - 4k) + c0
            let u = IntPoly::linear(Integer::one(), Integer::from(-s));
            let target = &(&(&u.pow(3) + &u.pow(2).scale(&Integer::from(c2))) + &u.scale(&Integer::from(6)))
                + &IntPoly::constant(Integer::from(c0));
            let got = multi_char_poly(&arr, &mt)?.poly;
            cases.push(Case::new(
                format!("k={k} {sign}"),
                got == target,
                json!({ "multiplicity": mt.values(), "chi": poly_json(&got), "expected": poly_json(&target) }),
            ));
        }
    }
    Ok(cases)
}

const LATTICE_TYPES: [(Family, usize); 6] =
    [(Family::A, 2), (Family::A, 3), (Family::A, 4), (Family::B, 2), (Family::B, 3), (Family::D, 4)];

fn lattice_against_exponents() -> Result<Vec<Case>> {
    let mut cases: Vec<Case> = LATTICE_TYPES
        .par_iter()
        .map(|&(family, rank)| -> Result<Case> {
            let arr = build_coxeter(family, rank)?;
            let spec = arr.coxeter().expect("built with type");
            let chi = char_poly(&arr);
            let roots: Vec<i64> = spec.exponents.iter().map(|&e| e as i64).collect();
            let prod = product_of_linear_factors(&roots);
            Ok(Case::new(
                format!("{family}{rank} lattice"),
                chi == prod,
                json!({ "chi": poly_json(&chi), "exponents": spec.exponents }),
            ))
        })
        .collect::<Result<_>>()?;
    for family in [Family::A, Family::B] {
        let arr = build_coxeter(family, 2)?;
        let oracle = rank2_char_poly_oracle(&arr, &Multiplicity::constant(arr.len(), 1))?.poly;
        let chi = char_poly(&arr);
        cases.push(Case::new(
            format!("{family}2 oracle m=1"),
            oracle == chi,
            json!({ "oracle": poly_json(&oracle), "lattice": poly_json(&chi) }),
        ));
    }
    Ok(cases)
}

fn shift_formula_against_oracle() -> Result<Vec<Case>> {
    let mut specs = Vec::new();
    for family in [Family::A, Family::B] {
        let arr = build_coxeter(family, 2)?;
        for m in Multiplicity::all_zero_one(arr.len()) {
            for k in 1..=2u32 {
                specs.push((arr.clone(), m.plus_constant(2 * k), format!("{family}2 2*{k}+{m}")));
                specs.push((arr.clone(), m.subtracted_from(2 * k).unwrap(), format!("{family}2 2*{k}-{m}")));
            }
        }
    }
    specs
        .par_iter()
        .map(|(arr, mt, name)| {
            let oracle = rank2_char_poly_oracle(arr, mt)?.poly;
            let formula = multi_char_poly(arr, mt)?.poly;
            Ok(Case::new(
                name.clone(),
                oracle == formula,
                json!({ "multiplicity": mt.values(), "oracle": poly_json(&oracle), "formula": poly_json(&formula) }),
            ))
        })
        .collect()
}

/// Free {0,1}-multiplicities used for the exponent shift checks.
pub fn shift_cases() -> Result<Vec<(Arrangement, String, Multiplicity)>> {
    let mut out = Vec::new();
    let a2 = build_coxeter(Family::A, 2)?;
    for m in Multiplicity::all_zero_one(a2.len()) {
        out.push((a2.clone(), "A2".to_string(), m));
    }
    let b2 = build_coxeter(Family::B, 2)?;
    for m in Multiplicity::all_zero_one(b2.len()) {
        out.push((b2.clone(), "B2".to_string(), m));
    }
    let a3 = build_coxeter(Family::A, 3)?;
    for mask in [
        [0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, 1, 1],
        [1, 1, 1, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [1, 1, 0, 1, 0, 0],
        [1, 1, 1, 1, 1, 0],
    ] {
        out.push((a3.clone(), "A3".to_string(), Multiplicity::new(mask.to_vec())));
    }
    let b3 = build_coxeter(Family::B, 3)?;
    for mask in [
        [0, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 1, 1, 1, 1],
        [1, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 0, 0],
    ] {
        out.push((b3.clone(), "B3".to_string(), Multiplicity::new(mask.to_vec())));
    }
    Ok(out)
}

/// Exponents of `(A, 2 + m)` and `(A, 2 − m)` against `h ± e′`.
#[derive(Clone, Debug)]
pub struct ShiftOutcome {
    pub base: Option<ExponentSet>,
    pub plus: Option<ExponentSet>,
    pub minus: Option<ExponentSet>,
    pub expected_plus: Option<ExponentSet>,
    pub expected_minus: Option<ExponentSet>,
}

impl ShiftOutcome {
    pub fn holds(&self) -> bool {
        self.base.is_some() && self.plus == self.expected_plus && self.minus == self.expected_minus
    }
}

pub fn exponent_shift(arr: &Arrangement, m: &Multiplicity, k: u32, opts: &DetectOptions) -> Result<ShiftOutcome> {
    let h = arr.coxeter().ok_or_else(|| Error::Input("Coxeter type required".into()))?.coxeter_number;
    let kh = k * h;
    let base = detect_free_basis(arr, m, opts).free.map(|f| f.exponents);
    let plus = detect_free_basis(arr, &m.plus_constant(2 * k), opts).free.map(|f| f.exponents);
    let minus = m.subtracted_from(2 * k).and_then(|mm| detect_free_basis(arr, &mm, opts).free.map(|f| f.exponents));
    let expected_plus = base.as_ref().map(|b| ExponentSet::new(b.values().iter().map(|e| kh + e).collect()));
    let expected_minus = base
        .as_ref()
        .and_then(|b| b.values().iter().map(|e| kh.checked_sub(*e)).collect::<Option<Vec<_>>>())
        .map(ExponentSet::new);
    Ok(ShiftOutcome { base, plus, minus, expected_plus, expected_minus })
}

fn show(e: &Option<ExponentSet>) -> Value {
    e.as_ref().map_or(Value::Null, exps_json)
}

fn exponent_shifts(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let detect = opts.detect();
    shift_cases()?
        .par_iter()
        .map(|(arr, name, m)| {
            let out = exponent_shift(arr, m, 1, &detect)?;
            Ok(Case::new(
                format!("{name} m={m}"),
                out.holds(),
                json!({
                    "base": show(&out.base),
                    "plus": show(&out.plus),
                    "minus": show(&out.minus),
                    "expected_plus": show(&out.expected_plus),
                    "expected_minus": show(&out.expected_minus),
                }),
            ))
        })
        .collect()
}

const CHARTS: [ChartType; 2] = [ChartType::A2, ChartType::B2];

fn primitive_pole_orders() -> Result<Vec<Case>> {
    let specs: Vec<(ChartType, u32)> = CHARTS.iter().flat_map(|&c| (1..=3).map(move |k| (c, k))).collect();
    specs
        .par_iter()
        .map(|&(kind, k)| {
            let chart = invariant_chart(kind);
            let report = pole_report(&chart, k)?;
            let orders: Vec<Value> =
                report.orders.iter().map(|(f, o, ok)| json!({ "form": f.to_string(), "order": o, "exact": ok })).collect();
            let expected_degree = 1 - (k * chart.coxeter_number) as i64;
            let found: Vec<u32> = report.orders.iter().map(|(_, o, _)| *o).collect();
            Ok(Case::new(
                format!("{kind} k={k}: pole orders {found:?}"),
                report.exact() && report.degree == Some(expected_degree),
                json!({ "expected_order": 2 * k - 1, "orders": orders, "degree": report.degree }),
            ))
        })
        .collect()
}

fn constant_multiplicity_bases() -> Result<Vec<Case>> {
    let specs: Vec<(ChartType, u32)> = CHARTS.iter().flat_map(|&c| (1..=5).map(move |m| (c, m))).collect();
    specs
        .par_iter()
        .map(|&(kind, mbar)| {
            let chart = invariant_chart(kind);
            let case = format!("{kind} m={mbar}");
            Ok(match terao_basis(&chart, mbar) {
                Ok((basis, cert)) => Case::new(
                    case,
                    cert.holds,
                    json!({
                        "constant": cert.constant.map(|c| c.to_string()),
                        "degrees": basis.iter().map(|w| w.degree()).collect::<Vec<_>>(),
                    }),
                ),
                Err(Error::Internal(msg)) => Case::new(case, false, json!({ "error": msg })),
                Err(e) => return Err(e),
            })
        })
        .collect()
}

/// Multiplicities on B2 used for the transport checks: zero, the line
/// `x = 0`, and all ones.
pub fn transport_cases() -> Vec<(String, Multiplicity)> {
    vec![
        ("m=0".into(), Multiplicity::constant(4, 0)),
        ("m=[x]".into(), Multiplicity::indicator(4, 0)),
        ("m=1".into(), Multiplicity::constant(4, 1)),
    ]
}

fn certified_basis(arr: &Arrangement, m: &Multiplicity, opts: &DetectOptions) -> Result<FreeBasis> {
    detect_free_basis(arr, m, opts)
        .free
        .ok_or_else(|| Error::Internal(format!("D(A,{m}) was not certified free")))
}

/// Images of a certified basis of `D(A,m)` under `Φ_k`.
pub fn transported_basis(
    chart: &InvariantChart,
    m: &Multiplicity,
    k: u32,
    opts: &DetectOptions,
) -> Result<(FreeBasis, Vec<crate::dermod::LogForm1>, crate::dermod::SaitoCertificate)> {
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    let basis = certified_basis(&chart.arrangement, m, opts)?;
    let images = basis.basis.iter().map(|d| phi_k(chart, d, m, k)).collect::<Result<Vec<_>>>()?;
    let target = m.subtracted_from(2 * k).ok_or_else(|| Error::Input(format!("{m} exceeds 2k")))?;
    let cert = crate::dermod::saito_check_forms(&chart.arrangement, &target, &images);
    Ok((basis, images, cert))
}

fn transport_specs() -> Vec<(String, Multiplicity, u32)> {
    transport_cases().into_iter().flat_map(|(n, m)| (1..=2).map(move |k| (n.clone(), m.clone(), k))).collect()
}

fn basis_transport(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let detect = opts.detect();
    let chart = invariant_chart(ChartType::B2);
    transport_specs()
        .par_iter()
        .map(|(name, m, k)| {
            let (basis, images, cert) = transported_basis(&chart, m, *k, &detect)?;
            let h = chart.coxeter_number as i64;
            let degrees_ok = basis
                .basis
                .iter()
                .zip(&images)
                .all(|(d, w)| d.degree().map(|x| x as i64 - *k as i64 * h) == w.degree());
            Ok(Case::new(
                format!("B2 {name} k={k}"),
                cert.holds && degrees_ok,
                json!({
                    "exponents": exps_json(&basis.exponents),
                    "image_degrees": images.iter().map(|w| w.degree()).collect::<Vec<_>>(),
                    "constant": cert.constant.map(|c| c.to_string()),
                }),
            ))
        })
        .collect()
}

fn duality_pairing(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let detect = opts.detect();
    let chart = invariant_chart(ChartType::B2);
    let arr = chart.arrangement.clone();
    let h = chart.coxeter_number;
    transport_specs()
        .par_iter()
        .map(|(name, m, k)| {
            let (base, images, _) = transported_basis(&chart, m, *k, &detect)?;
            let minus = m.subtracted_from(2 * k).expect("2k >= 2");
            let dual = certified_basis(&arr, &minus, &detect)?;
            let (_, det) = pairing_matrix(&dual.basis, &images)?;
            let det_const = det.constant_value().filter(|c| !num_traits::Zero::is_zero(c));
            let e = base.exponents.values();
            let reflected = ExponentSet::new(e.iter().map(|x| k * h - x).collect());
            let raised = ExponentSet::new(e.iter().map(|x| k * h + x).collect());
            let plus = certified_basis(&arr, &m.plus_constant(2 * k), &detect)?;
            let mut image_degrees: Vec<i64> = images.iter().filter_map(|w| w.degree()).collect();
            image_degrees.sort_unstable();
            let mut expected_image: Vec<i64> = reflected.values().iter().map(|&x| -(x as i64)).collect();
            expected_image.sort_unstable();
            let ok = det_const.is_some()
                && dual.exponents == reflected
                && plus.exponents == raised
                && image_degrees == expected_image;
            Ok(Case::new(
                format!("B2 {name} k={k}"),
                ok,
                json!({
                    "pairing_det": det.to_string(),
                    "minus_exponents": exps_json(&dual.exponents),
                    "plus_exponents": exps_json(&plus.exponents),
                    "base_exponents": exps_json(&base.exponents),
                    "image_degrees": image_degrees,
                }),
            ))
        })
        .collect()
}

fn odd_constant_decompositions() -> Result<Vec<Case>> {
    let specs: Vec<(Family, usize, u32)> =
        LATTICE_TYPES.iter().flat_map(|&(f, r)| [1u32, 3, 5].map(move |v| (f, r, v))).collect();
    specs
        .par_iter()
        .map(|&(family, rank, value)| {
            let arr = build_coxeter(family, rank)?;
            let mt = Multiplicity::constant(arr.len(), value);
            let dec = decompose_quasi_constant(&mt)?;
            let alt = dec.alternate.as_ref().ok_or_else(|| Error::Internal("odd constant without alternate".into()))?;
            let canonical = char_poly_from_decomposition(&arr, &dec)?;
            let alternate = char_poly_from_decomposition(&arr, alt)?;
            let mut ok = canonical == alternate;
            if value == 1 {
                ok &= canonical == char_poly(&arr);
            }
            Ok(Case::new(
                format!("{family}{rank} m={value}"),
                ok,
                json!({ "canonical": poly_json(&canonical), "alternate": poly_json(&alternate) }),
            ))
        })
        .collect()
}

fn rank2_shift_scan() -> Result<Vec<Case>> {
    let a2 = build_coxeter(Family::A, 2)?;
    let b2 = build_coxeter(Family::B, 2)?;
    let specs = vec![
        ("A2 m=1", a2.clone(), Multiplicity::constant(3, 1)),
        ("A2 m=0", a2.clone(), Multiplicity::constant(3, 0)),
        ("A2 m=(2,1,0)", a2, Multiplicity::new(vec![2, 1, 0])),
        ("B2 m=(3,1,1,1)", b2.clone(), Multiplicity::new(vec![3, 1, 1, 1])),
        ("B2 m=(3,0,1,2)", b2, Multiplicity::new(vec![3, 0, 1, 2])),
    ];
    specs
        .par_iter()
        .map(|(name, arr, m)| {
            let report = shift_scan(arr, m, 2)?;
            Ok(Case::new(*name, report.all_equal(), serde_json::to_value(&report)?))
        })
        .collect()
}

/// Runs a list of derivations through Saito on `(A,m)`; used by callers
/// that build bases by hand.
pub fn saito_summary(arr: &Arrangement, m: &Multiplicity, thetas: &[Derivation]) -> Value {
    let cert = crate::dermod::saito_check(arr, m, thetas);
    json!({
        "holds": cert.holds,
        "constant": cert.constant.map(|c| c.to_string()),
        "determinant": cert.determinant,
        "failures": cert.failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("theorem99".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass() {
        for s in [Suite::FourPlanes, Suite::OddConstant, Suite::PoleOrders] {
            let r = run_suite(s, &VerifyOptions::default()).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.cases.iter().filter(|c| !c.passed()).collect::<Vec<_>>());
        }
    }
}
