//! Central hyperplane arrangements, multiplicities, and rational
//! realizations of the Coxeter arrangements of types A, B and D.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::LinearForm;
use crate::error::{Error, Result};
use crate::Poly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hyperplane {
    normal: LinearForm,
}

impl Hyperplane {
    pub fn new(normal: LinearForm) -> Self {
        Hyperplane { normal }
    }

    pub fn normal(&self) -> &LinearForm {
        &self.normal
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::D => "D",
        };
        write!(f, "{s}")
    }
}

/// Irreducible Coxeter type with its numerical data.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoxeterSpec {
    pub family: Family,
    pub rank: usize,
    pub coxeter_number: u32,
    /// Classical exponents, ascending.
    pub exponents: Vec<u32>,
}

impl CoxeterSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let (min, label) = match family {
            Family::A => (1, "A requires rank >= 1"),
            Family::B => (2, "B requires rank >= 2"),
            Family::D => (4, "D requires rank >= 4"),
        };
        if rank < min {
            return Err(Error::Unsupported(format!("{family}{rank}: {label}")));
        }
        let l = rank as u32;
        let (h, mut exps): (u32, Vec<u32>) = match family {
            Family::A => (l + 1, (1..=l).collect()),
            Family::B => (2 * l, (1..=l).map(|i| 2 * i - 1).collect()),
            Family::D => (2 * l - 2, (1..l).map(|i| 2 * i - 1).chain([l - 1]).collect()),
        };
        exps.sort_unstable();
        Ok(CoxeterSpec { family, rank, coxeter_number: h, exponents: exps })
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }
}

/// A Coxeter type name such as `A3` or `B2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CoxeterType {
    pub family: Family,
    pub rank: usize,
}

impl FromStr for CoxeterType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('D') => Family::D,
            _ => return Err(Error::Unsupported(format!("unsupported family in `{s}` (supported: A, B, D)"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Unsupported(format!("cannot read rank in `{s}`")))?;
        CoxeterSpec::new(family, rank)?;
        Ok(CoxeterType { family, rank })
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Which coordinates to use for a type-A arrangement.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Realization {
    /// Forms `y_i` and `y_i - y_j`.
    #[default]
    Standard,
    /// Positive roots written in simple roots: `x_i + x_{i+1} + … + x_j`.
    SimpleRoots,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrangement {
    ambient_dim: usize,
    hyperplanes: Vec<Hyperplane>,
    coxeter: Option<CoxeterSpec>,
}

impl Arrangement {
    pub fn new(ambient_dim: usize, forms: Vec<LinearForm>) -> Result<Self> {
        let mut seen = HashSet::new();
        for f in &forms {
            if f.nvars() != ambient_dim {
                return Err(Error::Arrangement(format!("form {:?} has length {}, expected {ambient_dim}", f.coeffs(), f.nvars())));
            }
            if !seen.insert(f.clone()) {
                return Err(Error::Arrangement(format!("duplicate hyperplane {:?} after normalization", f.coeffs())));
            }
        }
        Ok(Arrangement { ambient_dim, hyperplanes: forms.into_iter().map(Hyperplane::new).collect(), coxeter: None })
    }

    /// Normalizes integer coefficient vectors and builds the arrangement.
    pub fn from_int_forms(ambient_dim: usize, forms: &[Vec<i64>]) -> Result<Self> {
        let forms = forms
            .iter()
            .map(|v| LinearForm::new(v.clone()).map(|(f, _)| f).ok_or_else(|| Error::Arrangement("zero linear form".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_dim, forms)
    }

    pub fn with_coxeter(mut self, spec: CoxeterSpec) -> Self {
        self.coxeter = Some(spec);
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.hyperplanes.iter().map(|h| &h.normal)
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.hyperplanes[i].normal
    }

    pub fn position(&self, form: &LinearForm) -> Option<usize> {
        self.hyperplanes.iter().position(|h| &h.normal == form)
    }

    pub fn coxeter(&self) -> Option<&CoxeterSpec> {
        self.coxeter.as_ref()
    }

    /// The hyperplanes selected by `mask`, keeping order; no Coxeter data.
    pub fn subarrangement(&self, mask: &[bool]) -> Arrangement {
        assert_eq!(mask.len(), self.len());
        Arrangement {
            ambient_dim: self.ambient_dim,
            hyperplanes: self.hyperplanes.iter().zip(mask).filter(|(_, &k)| k).map(|(h, _)| h.clone()).collect(),
            coxeter: None,
        }
    }

    /// Rank of the span of the normals.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self.forms().map(|f| f.coeffs().to_vec()).collect();
        if rows.is_empty() {
            return 0;
        }
        crate::RatMatrix::from_int_rows(&rows).rank()
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.ambient_dim
    }
}

pub fn build_coxeter(family: Family, rank: usize) -> Result<Arrangement> {
    build_coxeter_with(family, rank, Realization::Standard)
}

pub fn build_coxeter_with(family: Family, rank: usize, realization: Realization) -> Result<Arrangement> {
    let spec = CoxeterSpec::new(family, rank)?;
    let l = rank;
    let unit = |i: usize| {
        let mut v = vec![0i64; l];
        v[i] = 1;
        v
    };
    let pair = |i: usize, j: usize, s: i64| {
        let mut v = vec![0i64; l];
        v[i] = 1;
        v[j] = s;
        v
    };
    let mut forms: Vec<Vec<i64>> = Vec::new();
    match (family, realization) {
        (Family::A, Realization::Standard) => {
            forms.extend((0..l).map(unit));
            for i in 0..l {
                for j in i + 1..l {
                    forms.push(pair(i, j, -1));
                }
            }
        }
        (Family::A, Realization::SimpleRoots) => {
            for len in 1..=l {
                for start in 0..=l - len {
                    let mut v = vec![0i64; l];
                    v[start..start + len].iter_mut().for_each(|c| *c = 1);
                    forms.push(v);
                }
            }
        }
        (Family::B, Realization::Standard) => {
            forms.extend((0..l).map(unit));
            for i in 0..l {
                for j in i + 1..l {
                    forms.push(pair(i, j, -1));
                    forms.push(pair(i, j, 1));
                }
            }
        }
        (Family::D, Realization::Standard) => {
            for i in 0..l {
                for j in i + 1..l {
                    forms.push(pair(i, j, -1));
                    forms.push(pair(i, j, 1));
                }
            }
        }
        (f, Realization::SimpleRoots) => {
            return Err(Error::Unsupported(format!("simple-root coordinates are only provided for type A, not {f}")));
        }
    }
    Ok(Arrangement::from_int_forms(l, &forms)?.with_coxeter(spec))
}

pub fn build_coxeter_type(t: CoxeterType) -> Result<Arrangement> {
    build_coxeter(t.family, t.rank)
}

/// Nonnegative integer multiplicity, positional with the arrangement.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiplicity(Vec<u32>);

impl Multiplicity {
    pub fn new(values: Vec<u32>) -> Self {
        Multiplicity(values)
    }

    pub fn constant(len: usize, value: u32) -> Self {
        Multiplicity(vec![value; len])
    }

    /// The multiplicity that is one on hyperplane `i` and zero elsewhere.
    pub fn indicator(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        Multiplicity(v)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Multiplicity(mask.iter().map(|&b| b as u32).collect())
    }

    /// All `{0,1}`-valued multiplicities on `len` hyperplanes, in binary
    /// counting order with hyperplane 0 as the lowest bit.
    pub fn all_zero_one(len: usize) -> Vec<Multiplicity> {
        (0u64..1 << len).map(|bits| Multiplicity((0..len).map(|i| ((bits >> i) & 1) as u32).collect())).collect()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> u32 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    pub fn is_zero_one(&self) -> bool {
        self.0.iter().all(|&v| v <= 1)
    }

    pub fn support(&self) -> Vec<bool> {
        self.0.iter().map(|&v| v > 0).collect()
    }

    /// `c + self`, pointwise.
    pub fn plus_constant(&self, c: u32) -> Self {
        Multiplicity(self.0.iter().map(|v| v + c).collect())
    }

    /// `c - self`, pointwise; `None` if some value exceeds `c`.
    pub fn subtracted_from(&self, c: u32) -> Option<Self> {
        self.0.iter().map(|&v| c.checked_sub(v)).collect::<Option<Vec<_>>>().map(Multiplicity)
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Multiplicity) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn check_aligned(&self, arr: &Arrangement) -> Result<()> {
        if self.len() != arr.len() {
            return Err(Error::Input(format!("multiplicity has {} entries but the arrangement has {} hyperplanes", self.len(), arr.len())));
        }
        Ok(())
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `Q(A, m) = ∏ α_H^{m(H)}`.
pub fn defining_poly(arr: &Arrangement, m: &Multiplicity) -> Poly {
    assert_eq!(m.len(), arr.len(), "multiplicity not aligned with arrangement");
    arr.forms()
        .zip(m.values())
        .filter(|(_, &e)| e > 0)
        .fold(Poly::one(arr.ambient_dim()), |acc, (f, &e)| &acc * &f.to_poly().pow(e))
}

#[derive(Serialize, Deserialize, Debug)]
struct HyperplaneEntry {
    form: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicity: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug)]
struct ArrangementFile {
    ambient_dim: usize,
    hyperplanes: Vec<HyperplaneEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coxeter_type: Option<String>,
}

/// Parses the JSON arrangement format. The multiplicity is returned when at
/// least one entry carries a `multiplicity` key; missing keys default to 1.
pub fn arrangement_from_json(text: &str) -> Result<(Arrangement, Option<Multiplicity>)> {
    let file: ArrangementFile = serde_json::from_str(text)?;
    let mut forms = Vec::with_capacity(file.hyperplanes.len());
    let mut mult = Vec::with_capacity(file.hyperplanes.len());
    let mut has_mult = false;
    for (i, h) in file.hyperplanes.iter().enumerate() {
        if h.form.len() != file.ambient_dim {
            return Err(Error::Arrangement(format!(
                "hyperplane {i} has {} coefficients, expected {}",
                h.form.len(),
                file.ambient_dim
            )));
        }
        let (f, _) = LinearForm::new(h.form.clone()).ok_or_else(|| Error::Arrangement(format!("hyperplane {i} has a zero form")))?;
        forms.push(f);
        match h.multiplicity {
            Some(v) if v < 0 => return Err(Error::Arrangement(format!("hyperplane {i} has negative multiplicity {v}"))),
            Some(v) => {
                has_mult = true;
                mult.push(u32::try_from(v).map_err(|_| Error::Arrangement(format!("multiplicity {v} too large")))?);
            }
            None => mult.push(1),
        }
    }
    let mut arr = Arrangement::new(file.ambient_dim, forms)?;
    if let Some(t) = file.coxeter_type {
        let t: CoxeterType = t.parse()?;
        let spec = CoxeterSpec::new(t.family, t.rank)?;
        if spec.rank != arr.ambient_dim() || build_coxeter_type(t)?.len() != arr.len() {
            return Err(Error::Arrangement(format!("arrangement does not have the shape of {t}")));
        }
        arr = arr.with_coxeter(spec);
    }
    Ok((arr, has_mult.then_some(Multiplicity(mult))))
}

pub fn arrangement_to_json(arr: &Arrangement, m: Option<&Multiplicity>) -> String {
    let file = ArrangementFile {
        ambient_dim: arr.ambient_dim(),
        hyperplanes: arr
            .forms()
            .enumerate()
            .map(|(i, f)| HyperplaneEntry { form: f.coeffs().to_vec(), multiplicity: m.map(|m| m.get(i) as i64) })
            .collect(),
        coxeter_type: arr.coxeter().map(|c| c.name()),
    };
    serde_json::to_string_pretty(&file).expect("arrangement serializes")
}

pub fn load_arrangement(path: impl AsRef<Path>) -> Result<(Arrangement, Option<Multiplicity>)> {
    arrangement_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_arrangement(path: impl AsRef<Path>, arr: &Arrangement, m: Option<&Multiplicity>) -> Result<()> {
    std::fs::write(path, arrangement_to_json(arr, m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn small_builds() {
        let a3 = build_coxeter(Family::A, 3).unwrap();
        assert_eq!(a3.len(), 6);
        assert_eq!(a3.coxeter().unwrap().coxeter_number, 4);
        let a2 = build_coxeter(Family::A, 2).unwrap();
        assert_eq!((a2.len(), a2.coxeter().unwrap().coxeter_number), (3, 3));
        let b2 = build_coxeter(Family::B, 2).unwrap();
        let forms: Vec<String> = b2.forms().map(|f| f.to_string()).collect();
        assert_eq!(forms, ["x", "y", "x - y", "x + y"]);
        assert_eq!(b2.coxeter().unwrap().coxeter_number, 4);
    }

    #[test]
    fn hyperplane_counts_and_exponent_duality() {
        for rank in 1usize..=5 {
            for (family, count) in [
                (Family::A, rank * (rank + 1) / 2),
                (Family::B, rank * rank),
                (Family::D, rank * rank.saturating_sub(1)),
            ] {
                let Ok(arr) = build_coxeter(family, rank) else {
                    assert!(matches!(family, Family::B if rank < 2) || matches!(family, Family::D if rank < 4));
                    continue;
                };
                assert_eq!(arr.len(), count, "{family}{rank}");
                assert!(arr.is_essential());
                let spec = arr.coxeter().unwrap();
                let e = &spec.exponents;
                for i in 0..rank {
                    assert_eq!(e[i] + e[rank - 1 - i], spec.coxeter_number, "{family}{rank}");
                }
                assert_eq!(e.iter().sum::<u32>() as usize, count);
            }
        }
    }

    #[test]
    fn unsupported_builds_name_the_constraint() {
        let err = build_coxeter(Family::D, 3).unwrap_err().to_string();
        assert!(err.contains("rank >= 4"), "{err}");
        assert!(build_coxeter(Family::B, 1).is_err());
        assert!("H3".parse::<CoxeterType>().unwrap_err().to_string().contains("unsupported family"));
        assert_eq!("b3".parse::<CoxeterType>().unwrap(), CoxeterType { family: Family::B, rank: 3 });
    }

    #[test]
    fn simple_root_realization_matches_path_form() {
        let a3 = build_coxeter_with(Family::A, 3, Realization::SimpleRoots).unwrap();
        let forms: Vec<String> = a3.forms().map(|f| f.to_string()).collect();
        assert_eq!(forms, ["x", "y", "z", "x + y", "y + z", "x + y + z"]);
        assert!(build_coxeter_with(Family::B, 2, Realization::SimpleRoots).is_err());
    }

    #[test]
    fn defining_polynomials() {
        let b2 = build_coxeter(Family::B, 2).unwrap();
        assert_eq!(defining_poly(&b2, &Multiplicity::constant(4, 1)), parse_poly("x^3*y - x*y^3", 2).unwrap());
        assert_eq!(defining_poly(&b2, &Multiplicity::constant(4, 0)), Poly::one(2));
        let a3 = build_coxeter_with(Family::A, 3, Realization::SimpleRoots).unwrap();
        let m = Multiplicity::new(vec![1, 1, 1, 0, 0, 1]);
        let q = defining_poly(&a3, &m);
        assert_eq!(q, parse_poly::<crate::Rational>("x*y*z", 3).unwrap() * parse_poly("x + y + z", 3).unwrap());
        let m = Multiplicity::new(vec![2, 0, 1, 3]);
        assert_eq!(defining_poly(&b2, &m).degree(), Some(m.total()));
    }

    #[test]
    fn json_round_trip() {
        let b2 = build_coxeter(Family::B, 2).unwrap();
        let m = Multiplicity::new(vec![1, 2, 0, 3]);
        let text = arrangement_to_json(&b2, Some(&m));
        let (back, mult) = arrangement_from_json(&text).unwrap();
        assert_eq!(back, b2);
        assert_eq!(mult, Some(m));
        let (plain, none) = arrangement_from_json(&arrangement_to_json(&b2, None)).unwrap();
        assert_eq!(plain, b2);
        assert_eq!(none, None);
    }

    #[test]
    fn json_normalizes_and_rejects() {
        let (a, _) = arrangement_from_json(r#"{"ambient_dim": 2, "hyperplanes": [{"form": [2, 4]}]}"#).unwrap();
        assert_eq!(a.form(0).coeffs(), &[1, 2]);
        let dup = arrangement_from_json(r#"{"ambient_dim": 2, "hyperplanes": [{"form": [1, 0]}, {"form": [-1, 0]}]}"#);
        assert!(dup.unwrap_err().to_string().contains("duplicate"));
        let dim = arrangement_from_json(r#"{"ambient_dim": 3, "hyperplanes": [{"form": [1, 0]}]}"#);
        assert!(dim.is_err());
        let neg = arrangement_from_json(r#"{"ambient_dim": 2, "hyperplanes": [{"form": [1, 0], "multiplicity": -1}]}"#);
        assert!(neg.unwrap_err().to_string().contains("negative"));
        assert!(arrangement_from_json("{not json").is_err());
    }

    #[test]
    fn multiplicity_arithmetic() {
        let m = Multiplicity::new(vec![0, 1, 1]);
        assert_eq!(m.plus_constant(2).values(), &[2, 3, 3]);
        assert_eq!(m.subtracted_from(2).unwrap().values(), &[2, 1, 1]);
        assert!(Multiplicity::new(vec![3]).subtracted_from(2).is_none());
        assert_eq!(Multiplicity::all_zero_one(3).len(), 8);
    }
}
