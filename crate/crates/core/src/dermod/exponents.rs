//! Hilbert functions and certified exponent detection.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::constraints::{derivation_space, derivation_space_dim, form_space_dim};
use super::{rational, saito_check, Derivation, ExponentSet};
use crate::arrangement::{Arrangement, Multiplicity};
use crate::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Derivation,
    Form,
}

/// Dimensions of the graded pieces: degrees `0..=d_max` on the derivation
/// side, `−|m|..=d_max` on the form side.
pub fn hilbert_function(arr: &Arrangement, m: &Multiplicity, side: Side, d_max: i64) -> BTreeMap<i64, usize> {
    let lo = match side {
        Side::Derivation => 0,
        Side::Form => -(m.total() as i64),
    };
    (lo..=d_max)
        .into_par_iter()
        .map(|d| {
            let dim = match side {
                Side::Derivation => derivation_space_dim(arr, m, d as u32),
                Side::Form => form_space_dim(arr, m, d),
            };
            (d, dim)
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct DetectOptions {
    pub seed: u64,
    pub max_retries: u32,
    /// Caps the fitting degree below `|m|`.
    pub max_degree: Option<u32>,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { seed: 0, max_retries: 8, max_degree: None }
    }
}

/// A Saito-certified homogeneous basis of `D(A,m)`.
#[derive(Clone, Debug)]
pub struct FreeBasis {
    pub exponents: ExponentSet,
    pub basis: Vec<Derivation>,
    /// `det = constant · Q(A,m)`
    pub constant: Rational,
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    pub hilbert: BTreeMap<u32, usize>,
    pub free: Option<FreeBasis>,
    pub diagnostic: Option<String>,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension at degree `d` of the free module with generators in `degrees`.
fn free_dim(nvars: usize, degrees: &[u32], d: u32) -> u64 {
    let l = nvars as u64;
    degrees.iter().filter(|&&g| g <= d).map(|&g| binomial((d - g) as u64 + l - 1, l - 1)).sum()
}

fn not_free(hilbert: BTreeMap<u32, usize>, why: String) -> FreenessReport {
    FreenessReport { hilbert, free: None, diagnostic: Some(why) }
}

/// Fits generator degrees to the Hilbert function up to degree `|m|` and
/// certifies a basis by Saito's criterion. Candidates at each generator
/// degree are seeded random integer combinations of a kernel basis.
pub fn detect_free_basis(arr: &Arrangement, m: &Multiplicity, opts: &DetectOptions) -> FreenessReport {
    let n = arr.ambient_dim();
    let mut hilbert = BTreeMap::new();
    if m.len() != arr.len() {
        return not_free(hilbert, format!("multiplicity has {} entries for {} hyperplanes", m.len(), arr.len()));
    }
    if !arr.is_essential() {
        return not_free(hilbert, "arrangement is not essential; exponent fitting assumes essential input".into());
    }
    let cutoff = opts.max_degree.map_or(m.total(), |c| c.min(m.total()));
    let mut degrees: Vec<u32> = Vec::new();
    let mut d = 0;
    while degrees.len() < n {
        if d > cutoff {
            return not_free(hilbert, format!("Hilbert function up to degree {cutoff} fits no free pattern"));
        }
        let dim = derivation_space_dim(arr, m, d);
        hilbert.insert(d, dim);
        let expected = free_dim(n, &degrees, d);
        if (dim as u64) < expected {
            return not_free(hilbert, format!("dimension {dim} at degree {d} is below the free count {expected}"));
        }
        degrees.extend(std::iter::repeat_n(d, (dim as u64 - expected) as usize));
        d += 1;
    }
    if degrees.len() > n {
        return not_free(hilbert, format!("{} generators found in rank {n}", degrees.len()));
    }
    if degrees.iter().sum::<u32>() != m.total() {
        return not_free(hilbert, format!("fitted degrees {degrees:?} do not sum to |m| = {}", m.total()));
    }
    let mut distinct: Vec<u32> = degrees.clone();
    distinct.dedup();
    let pieces: Vec<(u32, Vec<Derivation>)> =
        distinct.par_iter().map(|&g| (g, derivation_space(arr, m, g))).collect();
    for attempt in 0..opts.max_retries.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(attempt as u64));
        let mut basis = Vec::with_capacity(n);
        for (g, space) in &pieces {
            let count = degrees.iter().filter(|&&e| e == *g).count();
            let refs: Vec<&Derivation> = space.iter().collect();
            for _ in 0..count {
                let weights: Vec<Rational> = (0..refs.len()).map(|_| rational(rng.gen_range(-9..=9))).collect();
                match Derivation::combination(&refs, &weights) {
                    Ok(t) => basis.push(t),
                    Err(_) => return not_free(hilbert, "kernel vectors of mixed degree".into()),
                }
            }
        }
        let cert = saito_check(arr, m, &basis);
        if let (true, Some(c)) = (cert.holds, cert.constant) {
            let free = FreeBasis { exponents: ExponentSet::new(degrees), basis, constant: c };
            return FreenessReport { hilbert, free: Some(free), diagnostic: None };
        }
    }
    not_free(hilbert, format!("Saito certification failed after {} attempts", opts.max_retries.max(1)))
}

/// Certified exponents of `(A,m)`, or `None` if not certified free.
pub fn detect_exponents(arr: &Arrangement, m: &Multiplicity) -> Option<ExponentSet> {
    detect_free_basis(arr, m, &DetectOptions::default()).free.map(|f| f.exponents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_coxeter, build_coxeter_with, Family, Realization};

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(free_dim(2, &[1, 2], 3), 5);
    }

    #[test]
    fn a2_simple_exponents_and_hilbert_function() {
        let a2 = build_coxeter(Family::A, 2).unwrap();
        let m = Multiplicity::constant(3, 1);
        assert_eq!(detect_exponents(&a2, &m), Some(ExponentSet::new(vec![1, 2])));
        let h = hilbert_function(&a2, &m, Side::Derivation, 3);
        assert_eq!(h.into_iter().collect::<Vec<_>>(), [(0, 0), (1, 1), (2, 3), (3, 5)]);
    }

    #[test]
    fn b2_doubled_multiplicity() {
        let b2 = build_coxeter(Family::B, 2).unwrap();
        let m = Multiplicity::constant(4, 2);
        assert_eq!(detect_exponents(&b2, &m), Some(ExponentSet::new(vec![4, 4])));
        let h = hilbert_function(&b2, &m, Side::Derivation, 5);
        assert!(h.range(..4).all(|(_, &v)| v == 0));
        assert_eq!(h[&4], 2);
    }

    #[test]
    fn four_generic_planes_are_not_free() {
        let a3 = build_coxeter_with(Family::A, 3, Realization::SimpleRoots).unwrap();
        let m = Multiplicity::new(vec![1, 1, 1, 0, 0, 1]);
        let report = detect_free_basis(&a3, &m, &DetectOptions::default());
        assert!(report.free.is_none());
        assert!(report.diagnostic.is_some());
    }

    #[test]
    fn non_essential_input_is_refused() {
        let b2 = build_coxeter(Family::B, 2).unwrap();
        let m = Multiplicity::new(vec![1, 0, 0, 0]);
        let sub = b2.subarrangement(&[true, false, false, false]);
        let report = detect_free_basis(&sub, &Multiplicity::constant(1, 1), &DetectOptions::default());
        assert!(report.free.is_none());
        // the same line inside the full arrangement is fine: exponents (0, 1)
        assert_eq!(detect_exponents(&b2, &m), Some(ExponentSet::new(vec![0, 1])));
    }
}
