//! Characteristic polynomials of multiarrangements.
//!
//! For a quasi-constant multiplicity `m̃ = 2k ± m` with `m` a {0,1}-valued
//! multiplicity on a Coxeter arrangement of rank `ℓ` and Coxeter number `h`,
//!
//! ```text
//! χ((A, 2k + m), t) = χ((A, m), t − kh)
//! χ((A, 2k − m), t) = (−1)^ℓ χ((A, m), kh − t)
//! ```
//!
//! and `χ((A, m), t)` is the combinatorial polynomial of the subarrangement
//! `m⁻¹(1)`. In rank two the polynomial is also computed directly from the
//! Hilbert series of the modules `D^p(A,m)`, for any multiplicity.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arrangement::{Arrangement, Multiplicity};
use crate::dermod::{detect_free_basis, divisible_space_dim, DetectOptions};
use crate::error::{Error, Result};
use crate::lattice::char_poly;
use crate::{IntPoly, Integer};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

/// `m̃ = 2k + m` or `m̃ = 2k − m` with `m` valued in {0,1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QCDecomp {
    pub k: u32,
    pub m: Multiplicity,
    pub sign: Sign,
    pub canonical: bool,
    /// The second decomposition of an odd constant multiplicity.
    pub alternate: Option<Box<QCDecomp>>,
}

impl QCDecomp {
    pub fn reconstruct(&self) -> Multiplicity {
        let values = self
            .m
            .values()
            .iter()
            .map(|&v| match self.sign {
                Sign::Plus => 2 * self.k + v,
                Sign::Minus => 2 * self.k - v,
            })
            .collect();
        Multiplicity::new(values)
    }
}

/// Splits a quasi-constant multiplicity (values within one of each other).
pub fn decompose_quasi_constant(mt: &Multiplicity) -> Result<QCDecomp> {
    if mt.is_empty() {
        return Ok(QCDecomp { k: 0, m: mt.clone(), sign: Sign::Plus, canonical: true, alternate: None });
    }
    let (lo, hi) = (mt.min(), mt.max());
    if hi - lo >= 2 {
        return Err(Error::NotQuasiConstant(hi - lo));
    }
    let n = mt.len();
    if lo % 2 == 0 {
        let m = Multiplicity::new(mt.values().iter().map(|v| v - lo).collect());
        return Ok(QCDecomp { k: lo / 2, m, sign: Sign::Plus, canonical: true, alternate: None });
    }
    if hi == lo + 1 {
        let m = Multiplicity::new(mt.values().iter().map(|v| hi - v).collect());
        return Ok(QCDecomp { k: hi / 2, m, sign: Sign::Minus, canonical: true, alternate: None });
    }
    let ones = Multiplicity::constant(n, 1);
    let alternate = QCDecomp { k: lo.div_ceil(2), m: ones.clone(), sign: Sign::Minus, canonical: false, alternate: None };
    Ok(QCDecomp { k: (lo - 1) / 2, m: ones, sign: Sign::Plus, canonical: true, alternate: Some(Box::new(alternate)) })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Shift of the {0,1} polynomial by `kh`.
    ShiftFormula,
    /// Hilbert series of `D^p(A,m)` in rank two.
    Rank2Oracle,
}

/// Monic integer polynomial of degree `ℓ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiCharPoly {
    pub poly: IntPoly,
    pub provenance: Provenance,
}

impl MultiCharPoly {
    /// Integer coefficients, highest degree first.
    pub fn coefficients(&self) -> Vec<Integer> {
        self.poly.descending()
    }
}

impl fmt::Display for MultiCharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `χ((A, m), t)` for {0,1}-valued `m`.
pub fn zero_one_char_poly(arr: &Arrangement, m: &Multiplicity) -> Result<IntPoly> {
    m.check_aligned(arr)?;
    if !m.is_zero_one() {
        return Err(Error::Input(format!("multiplicity {m} is not {{0,1}}-valued")));
    }
    Ok(char_poly(&arr.subarrangement(&m.support())))
}

/// Applies the shift formula for one decomposition.
pub fn char_poly_from_decomposition(arr: &Arrangement, dec: &QCDecomp) -> Result<IntPoly> {
    let spec = arr
        .coxeter()
        .ok_or_else(|| Error::Input("arrangement carries no Coxeter type, so h is unknown".into()))?;
    let base = zero_one_char_poly(arr, &dec.m)?;
    let kh = Integer::from(dec.k) * Integer::from(spec.coxeter_number);
    let poly = match dec.sign {
        Sign::Plus => base.compose(&IntPoly::linear(Integer::one(), -kh)),
        Sign::Minus => {
            let reflected = base.compose(&IntPoly::linear(-Integer::one(), kh));
            if arr.ambient_dim() % 2 == 1 {
                -&reflected
            } else {
                reflected
            }
        }
    };
    Ok(poly)
}

/// `χ((A, m̃), t)` for a quasi-constant `m̃` on a Coxeter arrangement.
pub fn multi_char_poly(arr: &Arrangement, mt: &Multiplicity) -> Result<MultiCharPoly> {
    mt.check_aligned(arr)?;
    let dec = decompose_quasi_constant(mt)?;
    let poly = char_poly_from_decomposition(arr, &dec)?;
    Ok(MultiCharPoly { poly, provenance: Provenance::ShiftFormula })
}

/// `(1 − q)^2 Σ_{d ≤ top} dims(d) q^d`, truncated at degree `top`, with a
/// check that the last `2` coefficients vanish.
fn hilbert_numerator(dims: &[usize]) -> Result<IntPoly> {
    let series = IntPoly::new(dims.iter().map(|&v| Integer::from(v)).collect());
    let one_minus_q = IntPoly::linear(-Integer::one(), Integer::one());
    let full = &series * &one_minus_q.pow(2);
    let top = dims.len();
    let truncated: Vec<Integer> = (0..top).map(|i| full.coeff(i)).collect();
    if truncated.iter().rev().take(2).any(|c| !c.is_zero()) {
        return Err(Error::Internal("Hilbert series numerator did not stabilize".into()));
    }
    Ok(IntPoly::new(truncated))
}

/// Binomial coefficient as an integer.
fn choose(n: u32, k: u32) -> Integer {
    (0..k).fold(Integer::one(), |acc, i| acc * Integer::from(n - i) / Integer::from(i + 1))
}

/// `χ((A,m),t) = (−1)^2 ψ(A,m; t, 1)` with
/// `ψ = Σ_p H(D^p(A,m), q)(t(q−1) − 1)^p` for a rank-two arrangement and any
/// multiplicity.
///
/// Uses Ziegler's theorem that rank-two multiarrangements are free; the
/// exponents of `D¹` are certified by Saito's criterion before use. `D²` is
/// `Q(A,m)·S·∂₁∧∂₂` and its Hilbert function is counted directly.
pub fn rank2_char_poly_oracle(arr: &Arrangement, m: &Multiplicity) -> Result<MultiCharPoly> {
    if arr.ambient_dim() != 2 {
        return Err(Error::Input(format!("rank-two oracle needs ambient dimension 2, got {}", arr.ambient_dim())));
    }
    m.check_aligned(arr)?;
    let report = detect_free_basis(arr, m, &DetectOptions::default());
    let free = report.free.ok_or_else(|| {
        Error::Internal(format!(
            "rank-two multiarrangement not certified free: {}",
            report.diagnostic.unwrap_or_default()
        ))
    })?;
    let total = m.total();
    let numerators = [
        IntPoly::one(),
        free.exponents.values().iter().fold(IntPoly::zero(), |acc, &e| &acc + &IntPoly::monomial(Integer::one(), e as usize)),
        hilbert_numerator(&(0..=total + 2).map(|d| divisible_space_dim(arr, m, d)).collect::<Vec<_>>())?,
    ];
    let q_minus_one = IntPoly::linear(Integer::one(), -Integer::one());
    let denominator = q_minus_one.pow(2);
    let mut chi = Vec::with_capacity(3);
    for j in 0..=2u32 {
        let mut coeff = IntPoly::zero();
        for (p, n_p) in numerators.iter().enumerate().skip(j as usize) {
            let p = p as u32;
            let sign = if (p - j).is_multiple_of(2) { Integer::one() } else { -Integer::one() };
            let term = (n_p * &q_minus_one.pow(j)).scale(&(choose(p, j) * sign));
            coeff = &coeff + &term;
        }
        let reduced = coeff.div_exact_monic(&denominator).ok_or_else(|| {
            Error::Internal(format!("coefficient of t^{j} is not a polynomial in q; grading mismatch"))
        })?;
        chi.push(reduced.eval(&Integer::one()));
    }
    Ok(MultiCharPoly { poly: IntPoly::new(chi), provenance: Provenance::Rank2Oracle })
}

/// One row of a shift scan: `χ((A, m + 2k + 2), t)` against
/// `χ((A, m + 2k), t − h)`.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftScanRow {
    pub k: u32,
    pub equal: bool,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftScanReport {
    pub multiplicity: Vec<u32>,
    pub coxeter_number: u32,
    pub rows: Vec<ShiftScanRow>,
}

impl ShiftScanReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Compares `χ((A, m + 2k + 2), t)` with `χ((A, m + 2k), t − h)` for
/// `k = 0..=k_max` using the rank-two oracle. Reports only.
pub fn shift_scan(arr: &Arrangement, m: &Multiplicity, k_max: u32) -> Result<ShiftScanReport> {
    let h = arr
        .coxeter()
        .ok_or_else(|| Error::Input("arrangement carries no Coxeter type, so h is unknown".into()))?
        .coxeter_number;
    if k_max == 0 {
        return Err(Error::Input("k_max must be positive".into()));
    }
    let shift = IntPoly::linear(Integer::one(), -Integer::from(h));
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let lhs = rank2_char_poly_oracle(arr, &m.plus_constant(2 * k + 2))?.poly;
        let rhs = rank2_char_poly_oracle(arr, &m.plus_constant(2 * k))?.poly.compose(&shift);
        let show = |p: &IntPoly| p.descending().iter().map(|c| c.to_string()).collect();
        rows.push(ShiftScanRow { k, equal: lhs == rhs, lhs: show(&lhs), rhs: show(&rhs) });
    }
    Ok(ShiftScanReport { multiplicity: m.values().to_vec(), coxeter_number: h, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_coxeter, build_coxeter_with, Family, Realization};
    use crate::lattice::product_of_linear_factors;
    use proptest::prelude::*;

    fn ip(desc: &[i64]) -> IntPoly {
        IntPoly::from_descending(desc.iter().map(|&v| Integer::from(v)).collect())
    }

    #[test]
    fn decompositions() {
        let d = decompose_quasi_constant(&Multiplicity::constant(4, 2)).unwrap();
        assert_eq!((d.k, d.sign, d.m.total()), (1, Sign::Plus, 0));
        let d = decompose_quasi_constant(&Multiplicity::new(vec![2, 3, 3, 2])).unwrap();
        assert_eq!((d.k, d.sign), (1, Sign::Plus));
        assert_eq!(d.m.values(), [0, 1, 1, 0]);
        let d = decompose_quasi_constant(&Multiplicity::new(vec![3, 4, 4, 3])).unwrap();
        assert_eq!((d.k, d.sign), (2, Sign::Minus));
        assert_eq!(d.m.values(), [1, 0, 0, 1]);
        let d = decompose_quasi_constant(&Multiplicity::constant(3, 3)).unwrap();
        assert_eq!((d.k, d.sign, d.m.total()), (1, Sign::Plus, 3));
        let alt = d.alternate.as_ref().unwrap();
        assert_eq!((alt.k, alt.sign, alt.m.total()), (2, Sign::Minus, 3));
        assert!(matches!(
            decompose_quasi_constant(&Multiplicity::new(vec![1, 3])),
            Err(Error::NotQuasiConstant(2))
        ));
    }

    #[test]
    fn four_generic_planes_shifted() {
        let a3 = build_coxeter_with(Family::A, 3, Realization::SimpleRoots).unwrap();
        let m = Multiplicity::new(vec![1, 1, 1, 0, 0, 1]);
        assert_eq!(zero_one_char_poly(&a3, &m).unwrap(), ip(&[1, -4, 6, -3]));
        for k in 1..=2 {
            let s = IntPoly::linear(Integer::one(), Integer::from(-4 * k as i64));
            let base_plus = ip(&[1, -4, 6, -3]).compose(&s);
            let base_minus = ip(&[1, 4, 6, 3]).compose(&s);
            let plus = m.plus_constant(2 * k);
            let minus = m.subtracted_from(2 * k).unwrap();
            assert_eq!(multi_char_poly(&a3, &plus).unwrap().poly, base_plus);
            assert_eq!(multi_char_poly(&a3, &minus).unwrap().poly, base_minus);
        }
    }

    #[test]
    fn zero_multiplicity_gives_power_of_t() {
        for (family, rank) in [(Family::A, 3), (Family::B, 3), (Family::D, 4)] {
            let arr = build_coxeter(family, rank).unwrap();
            let p = multi_char_poly(&arr, &Multiplicity::constant(arr.len(), 0)).unwrap();
            assert_eq!(p.poly, IntPoly::monomial(Integer::one(), rank));
        }
    }

    #[test]
    fn oracle_small_cases() {
        let a2 = build_coxeter(Family::A, 2).unwrap();
        assert_eq!(rank2_char_poly_oracle(&a2, &Multiplicity::constant(3, 1)).unwrap().poly, ip(&[1, -3, 2]));
        let b2 = build_coxeter(Family::B, 2).unwrap();
        assert_eq!(rank2_char_poly_oracle(&b2, &Multiplicity::constant(4, 2)).unwrap().poly, product_of_linear_factors(&[4, 4]));
        assert_eq!(rank2_char_poly_oracle(&b2, &Multiplicity::constant(4, 0)).unwrap().poly, ip(&[1, 0, 0]));
        assert!(rank2_char_poly_oracle(&build_coxeter(Family::A, 3).unwrap(), &Multiplicity::constant(6, 1)).is_err());
    }

    #[test]
    fn shift_scan_on_simple_a2() {
        let a2 = build_coxeter(Family::A, 2).unwrap();
        let report = shift_scan(&a2, &Multiplicity::constant(3, 1), 2).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.all_equal());
    }

    #[test]
    fn missing_coxeter_type_is_an_error() {
        let arr = Arrangement::from_int_forms(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(multi_char_poly(&arr, &Multiplicity::constant(2, 2)).is_err());
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs(base in 0u32..6, offs in proptest::collection::vec(0u32..2, 1..12)) {
            let mt = Multiplicity::new(offs.iter().map(|o| base + o).collect());
            let d = decompose_quasi_constant(&mt).unwrap();
            prop_assert_eq!(d.reconstruct(), mt.clone());
            prop_assert!(d.m.is_zero_one());
            prop_assert!(d.sign == Sign::Plus || d.k >= 1);
            if let Some(alt) = &d.alternate {
                prop_assert_eq!(alt.reconstruct(), mt.clone());
            }
            prop_assert_eq!(d.alternate.is_some(), mt.min() == mt.max() && mt.min() % 2 == 1);
        }
    }
}
