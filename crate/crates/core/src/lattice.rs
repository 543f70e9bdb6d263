//! Intersection lattice, Möbius function and characteristic polynomial.
//!
//! A flat is stored by the reduced row echelon basis of the span of the
//! normals of the hyperplanes containing it. Flats are generated level by
//! level: every codimension `k + 1` flat is the span of a codimension `k`
//! flat and one more normal.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{LinearForm, Scalar};
use crate::arrangement::Arrangement;
use crate::{IntPoly, Integer, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Flat {
    echelon: Vec<Vec<Rational>>,
    hyperplanes: Vec<usize>,
}

impl Flat {
    pub fn codim(&self) -> usize {
        self.echelon.len()
    }

    /// Canonical reduced echelon basis of the normal space.
    pub fn echelon(&self) -> &[Vec<Rational>] {
        &self.echelon
    }

    /// Indices of the hyperplanes containing this flat, ascending.
    pub fn hyperplanes(&self) -> &[usize] {
        &self.hyperplanes
    }

    /// Echelon rows scaled to primitive integer vectors.
    pub fn integer_echelon(&self) -> Vec<Vec<Integer>> {
        self.echelon
            .iter()
            .map(|row| {
                let mut sparse: Vec<(usize, Rational)> = row.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                Rational::normalize_row(&mut sparse);
                let mut out = vec![Integer::zero(); row.len()];
                for (i, v) in sparse {
                    out[i] = v.as_integer().expect("primitive rows are integral");
                }
                out
            })
            .collect()
    }

    /// `self <= other` in the lattice order (reverse inclusion of subspaces).
    pub fn le(&self, other: &Flat) -> bool {
        is_subset(&self.hyperplanes, &other.hyperplanes)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn form_row(f: &LinearForm) -> Vec<Rational> {
    f.coeffs().iter().map(|&c| Rational::from_int(c)).collect()
}

/// Reduces `v` against a reduced echelon basis; returns the remainder.
fn reduce(echelon: &[Vec<Rational>], mut v: Vec<Rational>) -> Vec<Rational> {
    for row in echelon {
        let p = row.iter().position(|x| !x.is_zero()).unwrap();
        if !v[p].is_zero() {
            let f = v[p].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                *vi = vi.clone() - f.clone() * ri.clone();
            }
        }
    }
    v
}

/// Adds `v` to a reduced echelon basis, keeping it reduced and sorted by
/// pivot. `v` must be independent of the basis.
fn extend_echelon(echelon: &[Vec<Rational>], v: Vec<Rational>) -> Vec<Vec<Rational>> {
    let mut v = reduce(echelon, v);
    let p = v.iter().position(|x| !x.is_zero()).expect("independent vector");
    let lead = v[p].clone();
    for x in v.iter_mut() {
        *x = x.clone() / lead.clone();
    }
    let mut out: Vec<Vec<Rational>> = echelon
        .iter()
        .map(|row| {
            if row[p].is_zero() {
                row.clone()
            } else {
                let f = row[p].clone();
                row.iter().zip(&v).map(|(a, b)| a.clone() - f.clone() * b.clone()).collect()
            }
        })
        .collect();
    out.push(v);
    out.sort_by_key(|row| row.iter().position(|x| !x.is_zero()).unwrap());
    out
}

fn in_span(echelon: &[Vec<Rational>], v: Vec<Rational>) -> bool {
    reduce(echelon, v).iter().all(|x| x.is_zero())
}

#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    ambient_dim: usize,
    /// Flats ordered by codimension, then by generation order.
    flats: Vec<Flat>,
    mobius: Vec<i64>,
}

pub fn intersection_lattice(arr: &Arrangement) -> IntersectionLattice {
    let n = arr.ambient_dim();
    let rows: Vec<Vec<Rational>> = arr.forms().map(form_row).collect();
    let bottom = Flat { echelon: Vec::new(), hyperplanes: Vec::new() };
    let mut flats = vec![bottom];
    let mut level_start = 0;
    loop {
        let level_end = flats.len();
        let mut seen: HashSet<Vec<Vec<Rational>>> = HashSet::new();
        let mut next = Vec::new();
        for flat in &flats[level_start..level_end] {
            for (h, row) in rows.iter().enumerate() {
                if flat.hyperplanes.binary_search(&h).is_ok() {
                    continue;
                }
                let echelon = extend_echelon(&flat.echelon, row.clone());
                if seen.contains(&echelon) {
                    continue;
                }
                let hyperplanes: Vec<usize> =
                    (0..rows.len()).filter(|&j| in_span(&echelon, rows[j].clone())).collect();
                seen.insert(echelon.clone());
                next.push(Flat { echelon, hyperplanes });
            }
        }
        if next.is_empty() {
            break;
        }
        level_start = level_end;
        flats.extend(next);
    }
    let mobius = mobius_values(&flats);
    IntersectionLattice { ambient_dim: n, flats, mobius }
}

fn mobius_values(flats: &[Flat]) -> Vec<i64> {
    let mut mu = Vec::with_capacity(flats.len());
    for (i, x) in flats.iter().enumerate() {
        if i == 0 {
            mu.push(1);
            continue;
        }
        let s: i64 = flats[..i]
            .iter()
            .zip(&mu)
            .filter(|(y, _)| y.codim() < x.codim() && y.le(x))
            .map(|(_, m)| *m)
            .sum();
        mu.push(-s);
    }
    mu
}

impl IntersectionLattice {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn mobius(&self) -> &[i64] {
        &self.mobius
    }

    pub fn mobius_of(&self, flat: &Flat) -> Option<i64> {
        self.flats.iter().position(|f| f == flat).map(|i| self.mobius[i])
    }

    /// Number of flats of each codimension, starting at 0.
    pub fn codim_profile(&self) -> Vec<usize> {
        let top = self.flats.iter().map(|f| f.codim()).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for f in &self.flats {
            out[f.codim()] += 1;
        }
        out
    }

    pub fn flats_of_codim(&self, k: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.codim() == k)
    }

    pub fn bottom(&self) -> &Flat {
        &self.flats[0]
    }

    /// The center: the flat containing every other flat's hyperplanes.
    pub fn top(&self) -> &Flat {
        self.flats.last().unwrap()
    }

    /// `χ(A, t) = Σ_X μ(X) t^{dim X}` with `dim X` in the ambient space.
    pub fn char_poly(&self) -> IntPoly {
        let mut coeffs = vec![Integer::zero(); self.ambient_dim + 1];
        for (f, &m) in self.flats.iter().zip(&self.mobius) {
            let d = self.ambient_dim - f.codim();
            coeffs[d] += Integer::from(m);
        }
        IntPoly::new(coeffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct FlatJson {
            codim: usize,
            echelon: Vec<Vec<String>>,
            hyperplanes: Vec<usize>,
            mobius: i64,
        }
        let flats: Vec<FlatJson> = self
            .flats
            .iter()
            .zip(&self.mobius)
            .map(|(f, &m)| FlatJson {
                codim: f.codim(),
                echelon: f.integer_echelon().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(),
                hyperplanes: f.hyperplanes.clone(),
                mobius: m,
            })
            .collect();
        serde_json::json!({ "ambient_dim": self.ambient_dim, "flats": flats })
    }
}

pub fn mobius(lattice: &IntersectionLattice) -> Vec<(Flat, i64)> {
    lattice.flats.iter().cloned().zip(lattice.mobius.iter().copied()).collect()
}

pub fn char_poly(arr: &Arrangement) -> IntPoly {
    intersection_lattice(arr).char_poly()
}

/// `∏ (t - e_i)`.
pub fn product_of_linear_factors(roots: &[i64]) -> IntPoly {
    roots
        .iter()
        .fold(IntPoly::one(), |acc, &e| &acc * &IntPoly::linear(Integer::one(), Integer::from(-e)))
}

/// Whitney sign check `(-1)^{codim X} μ(X) > 0` for every flat.
pub fn whitney_signs_hold(lattice: &IntersectionLattice) -> bool {
    lattice.flats.iter().zip(&lattice.mobius).all(|(f, &m)| {
        let signed = if f.codim() % 2 == 0 { m } else { -m };
        Integer::from(signed).is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_coxeter, build_coxeter_with, Family, Realization};

    fn int_poly(desc: &[i64]) -> IntPoly {
        IntPoly::from_descending(desc.iter().map(|&v| Integer::from(v)).collect())
    }

    #[test]
    fn empty_arrangement() {
        let arr = Arrangement::new(3, vec![]).unwrap();
        let l = intersection_lattice(&arr);
        assert_eq!(l.len(), 1);
        assert_eq!(l.char_poly(), int_poly(&[1, 0, 0, 0]));
    }

    #[test]
    fn single_hyperplane_mobius() {
        let arr = Arrangement::from_int_forms(2, &[vec![1, 1]]).unwrap();
        let l = intersection_lattice(&arr);
        assert_eq!(l.mobius(), &[1, -1]);
    }

    #[test]
    fn a2_lattice() {
        let l = intersection_lattice(&build_coxeter(Family::A, 2).unwrap());
        assert_eq!(l.codim_profile(), vec![1, 3, 1]);
        assert_eq!(l.mobius_of(l.top()), Some(2));
        assert_eq!(l.char_poly(), int_poly(&[1, -3, 2]));
    }

    #[test]
    fn a3_lattice() {
        let l = intersection_lattice(&build_coxeter(Family::A, 3).unwrap());
        assert_eq!(l.codim_profile(), vec![1, 6, 7, 1]);
        assert_eq!(l.mobius_of(l.top()), Some(-6));
        assert_eq!(l.char_poly(), product_of_linear_factors(&[1, 2, 3]));
        assert!(whitney_signs_hold(&l));
    }

    #[test]
    fn generic_four_planes() {
        let a3 = build_coxeter_with(Family::A, 3, Realization::SimpleRoots).unwrap();
        let sub = a3.subarrangement(&[true, true, true, false, false, true]);
        assert_eq!(char_poly(&sub), int_poly(&[1, -4, 6, -3]));
    }

    #[test]
    fn non_essential_subarrangement_uses_ambient_dimension() {
        let b2 = build_coxeter(Family::B, 2).unwrap();
        let sub = b2.subarrangement(&[true, false, false, false]);
        assert_eq!(char_poly(&sub), int_poly(&[1, -1, 0]));
    }

    #[test]
    fn echelon_is_canonical() {
        // Two generating orders for the same plane.
        let arr = Arrangement::from_int_forms(3, &[vec![1, 1, 0], vec![1, -1, 0], vec![1, 0, 0]]).unwrap();
        let l = intersection_lattice(&arr);
        assert_eq!(l.codim_profile(), vec![1, 3, 1]);
        assert_eq!(l.top().hyperplanes(), &[0, 1, 2]);
        assert_eq!(l.top().integer_echelon(), vec![vec![Integer::from(1), 0.into(), 0.into()], vec![0.into(), 1.into(), 0.into()]]);
    }
}
