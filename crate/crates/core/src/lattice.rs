//! Finitely generated subgroups of coefficient vectors in `Z^(D+1)`,
//! kept in row-style Hermite normal form.
//!
//! The HNF is canonical: two generating sets of the same subgroup reduce
//! to identical bases, so lattice equality is vector equality and
//! membership is a back-substitution pass.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::IntPoly;

pub(crate) fn pivot_low(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

fn pivot_high(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn negate(v: &mut [BigInt]) {
    for c in v {
        *c = -std::mem::take(c);
    }
}

fn sub_scaled(v: &mut [BigInt], q: &BigInt, row: &[BigInt]) {
    if q.is_zero() {
        return;
    }
    for (a, b) in v.iter_mut().zip(row) {
        if !b.is_zero() {
            *a -= q * b;
        }
    }
}

/// Inserts `v` into an echelon basis indexed by pivot column. The pivot
/// orientation (lowest or highest nonzero coordinate) is a parameter so
/// the same routine serves canonical HNF and degree-window restriction.
pub(crate) fn echelon_insert(
    slots: &mut [Option<Vec<BigInt>>],
    mut v: Vec<BigInt>,
    pivot: fn(&[BigInt]) -> Option<usize>,
) {
    while let Some(p) = pivot(&v) {
        match slots[p].take() {
            None => {
                if v[p].is_negative() {
                    negate(&mut v);
                }
                slots[p] = Some(v);
                return;
            }
            Some(r) => {
                let (q, rem) = v[p].div_rem(&r[p]);
                if rem.is_zero() {
                    sub_scaled(&mut v, &q, &r);
                    slots[p] = Some(r);
                } else {
                    // combine to the gcd at the pivot, spill the rest
                    let e = r[p].extended_gcd(&v[p]);
                    let mut combined = vec![BigInt::zero(); v.len()];
                    for i in 0..v.len() {
                        combined[i] = &e.x * &r[i] + &e.y * &v[i];
                    }
                    let cr = &r[p] / &e.gcd;
                    let cv = &v[p] / &e.gcd;
                    let mut spill = vec![BigInt::zero(); v.len()];
                    for i in 0..v.len() {
                        spill[i] = &cr * &v[i] - &cv * &r[i];
                    }
                    debug_assert!(spill[p].is_zero());
                    slots[p] = Some(combined);
                    v = spill;
                }
            }
        }
    }
}

/// Reduces entries above every pivot into `[0, pivot)`. Keeping slot
/// entries reduced is what stops intermediate coefficient growth during
/// long insertion runs.
pub(crate) fn reduce_above(slots: &mut [Option<Vec<BigInt>>]) {
    for p in 0..slots.len() {
        let Some(row) = slots[p].take() else { continue };
        for earlier in slots[..p].iter_mut().flatten() {
            let q = earlier[p].div_floor(&row[p]);
            sub_scaled(earlier, &q, &row);
        }
        slots[p] = Some(row);
    }
}

/// Membership in the span of an echelon slot array (reduction above the
/// pivots is not required for back-substitution).
pub(crate) fn echelon_contains(slots: &[Option<Vec<BigInt>>], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in slots.iter().flatten() {
        let p = pivot_low(row).unwrap();
        if v[p].is_zero() {
            continue;
        }
        let (q, rem) = v[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return false;
        }
        sub_scaled(&mut v, &q, row);
    }
    v.iter().all(Zero::is_zero)
}

fn echelonize(
    dims: usize,
    rows: impl IntoIterator<Item = Vec<BigInt>>,
    pivot: fn(&[BigInt]) -> Option<usize>,
) -> Vec<Vec<BigInt>> {
    let mut slots: Vec<Option<Vec<BigInt>>> = vec![None; dims];
    for row in rows {
        assert_eq!(row.len(), dims);
        echelon_insert(&mut slots, row, pivot);
    }
    slots.into_iter().flatten().collect()
}

/// A subgroup of `Z^(degree_cap + 1)` spanned by coefficient vectors of
/// polynomials of degree at most `degree_cap`. Rows are in canonical HNF:
/// echelon by lowest nonzero index, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffLattice {
    degree_cap: usize,
    rows: Vec<Vec<BigInt>>,
}

impl CoeffLattice {
    pub fn empty(degree_cap: usize) -> Self {
        CoeffLattice { degree_cap, rows: Vec::new() }
    }

    /// Canonical HNF of the row span of `rows`.
    pub fn from_rows(degree_cap: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let mut rows = echelonize(degree_cap + 1, rows, pivot_low);
        // rows come out sorted by pivot; reduce entries above each pivot
        for j in 0..rows.len() {
            let (before, rest) = rows.split_at_mut(j);
            let row = &rest[0];
            let p = pivot_low(row).unwrap();
            for earlier in before {
                let q = earlier[p].div_floor(&row[p]);
                sub_scaled(earlier, &q, row);
            }
        }
        CoeffLattice { degree_cap, rows }
    }

    pub fn from_polys(degree_cap: usize, polys: &[IntPoly]) -> Self {
        let rows = polys
            .iter()
            .filter(|p| p.degree().map_or(false, |d| d <= degree_cap))
            .map(|p| p.coeff_vec(degree_cap))
            .collect();
        CoeffLattice::from_rows(degree_cap, rows)
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row_polys(&self) -> Vec<IntPoly> {
        self.rows.iter().map(|r| IntPoly::from_coeff_vec(r)).collect()
    }

    /// Extends the span by `extra` rows; returns true when the lattice grew.
    pub fn insert_all(&mut self, extra: Vec<Vec<BigInt>>) -> bool {
        if extra.is_empty() {
            return false;
        }
        let mut rows = self.rows.clone();
        rows.extend(extra);
        let next = CoeffLattice::from_rows(self.degree_cap, rows);
        let changed = next != *self;
        *self = next;
        changed
    }

    /// Membership of a coefficient vector, by back-substitution along the
    /// echelon rows.
    pub fn contains_vec(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.degree_cap + 1);
        let mut v = v.to_vec();
        for row in &self.rows {
            let p = pivot_low(row).unwrap();
            if v[p].is_zero() {
                continue;
            }
            let (q, rem) = v[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return false;
            }
            sub_scaled(&mut v, &q, row);
        }
        v.iter().all(Zero::is_zero)
    }

    /// Membership of a polynomial; degrees over the cap are rejected.
    pub fn contains(&self, p: &IntPoly) -> bool {
        assert!(
            p.degree().map_or(true, |d| d <= self.degree_cap),
            "degree of {p} exceeds lattice cap {}",
            self.degree_cap
        );
        self.contains_vec(&p.coeff_vec(self.degree_cap))
    }

    /// True when every element of `self` lies in `other`. Requires
    /// `other.degree_cap >= self.degree_cap`.
    pub fn subset_of(&self, other: &CoeffLattice) -> bool {
        assert!(other.degree_cap >= self.degree_cap);
        self.rows.iter().all(|r| {
            let mut padded = r.clone();
            padded.resize(other.degree_cap + 1, BigInt::zero());
            other.contains_vec(&padded)
        })
    }

    /// The sublattice of vectors supported on indices `0..=cap`, i.e.
    /// the intersection with the lower-degree coordinate subspace. Found
    /// by echelonizing with the pivot at the highest index: rows whose
    /// top index fits the window span exactly that intersection.
    pub fn restrict(&self, cap: usize) -> CoeffLattice {
        if cap >= self.degree_cap {
            return self.clone();
        }
        let high = echelonize(self.degree_cap + 1, self.rows.clone(), pivot_high);
        let rows = high
            .into_iter()
            .filter(|r| pivot_high(r).map_or(true, |p| p <= cap))
            .map(|mut r| {
                r.truncate(cap + 1);
                r
            })
            .collect();
        CoeffLattice::from_rows(cap, rows)
    }
}

/// Dump format: header `HNF D=<cap> rows=<r>`, then one row per line as
/// space-separated integers `c_0 .. c_D`.
impl fmt::Display for CoeffLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HNF D={} rows={}", self.degree_cap, self.rows.len())?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
            .collect()
    }

    #[test]
    fn already_reduced_is_fixed() {
        let l = CoeffLattice::from_rows(1, big(&[&[2, 0], &[0, 3]]));
        assert_eq!(l.rows(), &big(&[&[2, 0], &[0, 3]])[..]);
    }

    #[test]
    fn dependent_row_dropped() {
        let l = CoeffLattice::from_rows(1, big(&[&[2, 0], &[4, 0]]));
        assert_eq!(l.rows(), &big(&[&[2, 0]])[..]);
    }

    #[test]
    fn hand_reduction() {
        let l = CoeffLattice::from_rows(1, big(&[&[1, 1], &[1, -1]]));
        assert_eq!(l.rows(), &big(&[&[1, 1], &[0, 2]])[..]);
    }

    #[test]
    fn canonical_under_permutation_and_mixing() {
        let a = CoeffLattice::from_rows(2, big(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]));
        let b = CoeffLattice::from_rows(2, big(&[&[1, 5, 9], &[2, 6, 5], &[3, 1, 4]]));
        // row sums and differences generate the same subgroup
        let c = CoeffLattice::from_rows(
            2,
            big(&[&[4, 6, 13], &[1, 5, 9], &[2, 6, 5], &[5, 7, 9]]),
        );
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn membership() {
        let l = CoeffLattice::from_rows(2, big(&[&[2, 0, 0], &[0, 1, 1]]));
        assert!(l.contains_vec(&big(&[&[4, 3, 3]])[0]));
        assert!(!l.contains_vec(&big(&[&[1, 0, 0]])[0]));
        assert!(!l.contains_vec(&big(&[&[0, 1, 0]])[0]));
        assert!(l.contains(&IntPoly::zero()));
    }

    #[test]
    fn restriction_keeps_low_degree_content() {
        // span {x + 1, 2} in Z^2: restricting to constants leaves {2}
        let l = CoeffLattice::from_rows(1, big(&[&[1, 1], &[1, -1]]));
        let r = l.restrict(0);
        assert_eq!(r.rows(), &big(&[&[2]])[..]);
    }

    #[test]
    fn dump_format() {
        let l = CoeffLattice::from_rows(1, big(&[&[1, 1], &[0, 2]]));
        assert_eq!(l.to_string(), "HNF D=1 rows=2\n1 1\n0 2\n");
    }
}
