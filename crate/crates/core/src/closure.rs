//! Bounded brute-force saturation of a generated subnearring, as an
//! integer coefficient lattice.
//!
//! The engine closes a generator set `F` under addition, subtraction, and
//! left composition by generators. A set containing `F` that is closed
//! under exactly these operations is already the generated subnearring
//! `<F>`: every element of the closure lies in `<F>` by construction, and
//! the closure is stable under the operations that define `<F>`. Left
//! composition by arbitrary elements is therefore never needed, which is
//! what makes bounded enumeration feasible.
//!
//! The lattice is computed on a working degree window larger than the
//! requested cap, then restricted: the short constructions that generate
//! low-degree elements routinely pass through intermediate degrees above
//! the target (the degree of `f ∘ g` is the product of the degrees).
//! Everything the engine emits is a genuine element of `<F>` (soundness);
//! completeness within the window is empirical per configuration.

use std::collections::HashSet;
use std::error::Error;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::lattice;
use crate::lattice::CoeffLattice;
use crate::predicates::{predicate_conditions, GeneratorBasis};
use crate::IntPoly;

/// Enumeration bounds for the saturation engine. The defaults mirror the
/// sizes that appear in hand constructions: right arguments are sums of
/// at most `combo_width` basis vectors with coefficients up to
/// `coeff_cap` in absolute value.
#[derive(Clone, Debug)]
pub struct ClosureConfig {
    /// Degree window of the result lattice.
    pub degree_cap: usize,
    /// Degree window used while saturating; defaults to
    /// `2 * degree_cap + 4`. The hand constructions need the headroom:
    /// reaching x^13 over {x^2, x^3} passes through degree 27.
    pub working_degree: Option<usize>,
    pub coeff_cap: i64,
    pub combo_width: usize,
    pub max_rounds: usize,
}

impl ClosureConfig {
    pub fn new(degree_cap: usize) -> Self {
        ClosureConfig {
            degree_cap,
            working_degree: None,
            coeff_cap: 3,
            combo_width: 3,
            max_rounds: 16,
        }
    }

    pub fn working_degree(&self) -> usize {
        self.working_degree
            .unwrap_or(2 * self.degree_cap + 4)
            .max(self.degree_cap)
    }
}

#[derive(Clone, Debug)]
pub enum ClosureError {
    /// No generator fits the degree window.
    Infeasible(String),
}

impl fmt::Display for ClosureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureError::Infeasible(msg) => write!(f, "infeasible config: {msg}"),
        }
    }
}

impl Error for ClosureError {}

fn vec_hash(v: &[BigInt]) -> u64 {
    // fixed-key hasher: candidate caching must not vary between runs
    let mut h = std::collections::hash_map::DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

/// Depth-first enumeration of sums of at most `width` distinct rows
/// with nonzero coefficients bounded by `cap`, streamed to `visit`. The
/// first coefficient is kept positive: `q` and `-q` carry the same
/// lattice content under composition.
fn walk_combos<F: FnMut(&IntPoly)>(
    rows: &[IntPoly],
    from: usize,
    partial: &IntPoly,
    picks: usize,
    cap: i64,
    width: usize,
    visit: &mut F,
) {
    if picks > 0 {
        visit(partial);
    }
    if picks == width {
        return;
    }
    for i in from..rows.len() {
        let low = if picks == 0 { 1 } else { -cap };
        for lambda in low..=cap {
            if lambda == 0 {
                continue;
            }
            let next = partial + &rows[i].scale(&BigInt::from(lambda));
            walk_combos(rows, i + 1, &next, picks + 1, cap, width, visit);
        }
    }
}

/// Closes `generators` under `+`, `-`, and left composition by
/// generators, within the configured degree window, and returns the HNF
/// lattice of everything found with degree at most `config.degree_cap`.
///
/// The result is always a sublattice of the true `<F>` intersected with
/// the degree window; reaching the whole intersection depends on the
/// enumeration caps. Right arguments are enumerated as bounded integer
/// combinations of the current basis rows; each round works against a
/// snapshot of the basis and new finds are inserted into a live echelon,
/// so the fixpoint test is just "did any candidate fall outside the
/// span".
pub fn saturate(
    generators: &[IntPoly],
    config: &ClosureConfig,
) -> Result<CoeffLattice, ClosureError> {
    let work = config.working_degree();
    if config.coeff_cap < 1 {
        return Err(ClosureError::Infeasible("coeff_cap must be >= 1".into()));
    }
    for g in generators {
        if g.degree().map_or(false, |d| d > work) {
            return Err(ClosureError::Infeasible(format!(
                "generator {g} exceeds the working degree {work}"
            )));
        }
    }
    let mut slots: Vec<Option<Vec<BigInt>>> = vec![None; work + 1];
    for g in generators {
        if !g.is_zero() {
            lattice::echelon_insert(&mut slots, g.coeff_vec(work), lattice::pivot_low);
        }
    }
    // constants compose to themselves and the identity composes to the
    // argument; neither ever adds content
    let composers: Vec<&IntPoly> = generators
        .iter()
        .filter(|g| g.degree().map_or(false, |d| d >= 1) && **g != IntPoly::x())
        .collect();
    let finish = |slots: Vec<Option<Vec<BigInt>>>| {
        let rows: Vec<Vec<BigInt>> = slots.into_iter().flatten().collect();
        CoeffLattice::from_rows(work, rows).restrict(config.degree_cap)
    };
    if composers.is_empty() {
        return Ok(finish(slots));
    }
    let max_q_deg = composers
        .iter()
        .map(|g| work / g.degree().unwrap())
        .max()
        .unwrap();

    let mut expanded: HashSet<u64> = HashSet::new();
    for _ in 0..config.max_rounds {
        let rows: Vec<IntPoly> = slots
            .iter()
            .flatten()
            .map(|r| IntPoly::from_coeff_vec(r))
            .filter(|p| p.degree().map_or(false, |d| d <= max_q_deg))
            .collect();
        let mut changed = false;
        walk_combos(
            &rows,
            0,
            &IntPoly::zero(),
            0,
            config.coeff_cap,
            config.combo_width,
            &mut |q| {
                if !expanded.insert(vec_hash(q.coeffs())) {
                    return;
                }
                let qdeg = q.degree().unwrap_or(0).max(1);
                for g in &composers {
                    if g.degree().unwrap() * qdeg > work {
                        continue;
                    }
                    let r = g.compose(q);
                    if r.is_zero() {
                        continue;
                    }
                    let v = r.coeff_vec(work);
                    if !lattice::echelon_contains(&slots, &v) {
                        lattice::echelon_insert(&mut slots, v, lattice::pivot_low);
                        lattice::reduce_above(&mut slots);
                        changed = true;
                    }
                }
            },
        );
        if !changed {
            break;
        }
    }
    Ok(finish(slots))
}

/// Splits the lattice along a parity constraint: keeps exactly the
/// vectors whose coefficient sum over `indices` is even (an index-2
/// sublattice when the constraint is not already satisfied).
fn restrict_parity(lat: &CoeffLattice, indices: &[usize]) -> CoeffLattice {
    let phi = |row: &[BigInt]| -> bool {
        let s: BigInt = indices.iter().map(|&i| row[i].clone()).sum();
        s.is_odd()
    };
    let rows = lat.rows();
    let odd: Vec<usize> = (0..rows.len()).filter(|&i| phi(&rows[i])).collect();
    let Some(&first) = odd.first() else {
        return lat.clone();
    };
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if i == first {
            out.push(row.iter().map(|c| c * 2).collect());
        } else if odd.contains(&i) {
            out.push(
                row.iter()
                    .zip(&rows[first])
                    .map(|(a, b)| a - b)
                    .collect(),
            );
        } else {
            out.push(row.clone());
        }
    }
    CoeffLattice::from_rows(lat.degree_cap(), out)
}

/// The lattice of coefficient vectors satisfying the membership
/// characterization of `basis`, up to `degree_cap`: a diagonal
/// divisibility lattice intersected with the kernel of each parity-sum
/// constraint.
pub fn predicate_lattice(basis: GeneratorBasis, degree_cap: usize) -> CoeffLattice {
    let cond = predicate_conditions(basis, degree_cap);
    let mut divisor: Vec<Option<BigInt>> = vec![Some(BigInt::from(1)); degree_cap + 1];
    for &i in &cond.forced_zero {
        divisor[i] = None;
    }
    for (i, d) in &cond.divisibility {
        divisor[*i] = Some(d.clone());
    }
    let rows: Vec<Vec<BigInt>> = divisor
        .iter()
        .enumerate()
        .filter_map(|(i, d)| {
            d.as_ref().map(|d| {
                let mut row = vec![BigInt::zero(); degree_cap + 1];
                row[i] = d.clone();
                row
            })
        })
        .collect();
    let mut lat = CoeffLattice::from_rows(degree_cap, rows);
    for ps in &cond.parity_sums {
        lat = restrict_parity(&lat, &ps.indices);
    }
    lat
}

/// Differential comparison of the saturation oracle against the
/// characterization for one basis.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub basis: GeneratorBasis,
    pub degree_cap: usize,
    /// Saturated lattice is contained in the predicate lattice. A
    /// violation here falsifies the necessity direction of the
    /// characterization, or the implementation.
    pub sound: bool,
    pub equal: bool,
    /// Basis vectors the predicate allows but saturation did not reach;
    /// candidates for larger caps or witness search.
    pub missing: Vec<IntPoly>,
    /// Saturated basis vectors rejected by the predicate.
    pub extra: Vec<IntPoly>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.sound
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "compare basis={} D={}: saturate {} predicate",
            self.basis,
            self.degree_cap,
            if self.equal {
                "=="
            } else if self.sound {
                "<"
            } else {
                "!<"
            }
        )?;
        for p in &self.extra {
            writeln!(f, "  EXTRA {p} (in saturation, rejected by predicate)")?;
        }
        for p in &self.missing {
            writeln!(f, "  MISSING {p} (allowed by predicate, not reached)")?;
        }
        let verdict = if !self.sound {
            "FAIL"
        } else if self.equal {
            "PASS (equal)"
        } else {
            "PASS (contained, not equal)"
        };
        write!(f, "RESULT compare {verdict}")
    }
}

pub fn compare_closure_vs_predicate(
    basis: GeneratorBasis,
    config: &ClosureConfig,
) -> Result<CompareReport, ClosureError> {
    let saturated = saturate(&basis.generators(), config)?;
    let predicted = predicate_lattice(basis, config.degree_cap);
    let extra: Vec<IntPoly> = saturated
        .row_polys()
        .into_iter()
        .filter(|p| !predicted.contains(p))
        .collect();
    let missing: Vec<IntPoly> = predicted
        .row_polys()
        .into_iter()
        .filter(|p| !saturated.contains(p))
        .collect();
    Ok(CompareReport {
        basis,
        degree_cap: config.degree_cap,
        sound: extra.is_empty(),
        equal: extra.is_empty() && missing.is_empty(),
        missing,
        extra,
    })
}

/// Checks that every element of the saturated lattice has an even
/// coefficient at `target_exponent`. Checking the basis rows suffices:
/// parity of a fixed coefficient is additive.
#[derive(Clone, Debug)]
pub struct ParityReport {
    pub target_exponent: usize,
    pub rank: usize,
    pub violations: Vec<IntPoly>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ParityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "parity check at exponent {}: {} basis vectors",
            self.target_exponent, self.rank
        )?;
        for p in &self.violations {
            writeln!(f, "  ODD {p}")?;
        }
        write!(
            f,
            "RESULT parity {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

pub fn parity_coefficient_check(
    generators: &[IntPoly],
    target_exponent: usize,
    config: &ClosureConfig,
) -> Result<ParityReport, ClosureError> {
    assert!(target_exponent <= config.degree_cap);
    let lat = saturate(generators, config)?;
    let violations = lat
        .row_polys()
        .into_iter()
        .filter(|p| p.coeff(target_exponent).is_odd())
        .collect();
    Ok(ParityReport {
        target_exponent,
        rank: lat.rank(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    fn b(one: u8, x: u8, x2: u8, x3: u8) -> GeneratorBasis {
        GeneratorBasis::new(one != 0, x != 0, x2 != 0, x3 != 0)
    }

    #[test]
    fn square_generator_window_eight() {
        let lat = saturate(&[p("x^2")], &ClosureConfig::new(8)).unwrap();
        let rows = lat.row_polys();
        assert_eq!(rows, vec![p("x^2"), p("x^4"), p("2x^6"), p("x^8")]);
        assert!(lat.contains(&p("2x^6")));
        assert!(!lat.contains(&p("x^6")));
    }

    #[test]
    fn square_cube_window_five() {
        let lat = saturate(&[p("x^2"), p("x^3")], &ClosureConfig::new(5)).unwrap();
        assert!(lat.contains(&p("2x^5")));
        assert!(!lat.contains(&p("x^5")));
        assert!(lat.contains(&IntPoly::zero()));
    }

    #[test]
    fn oversized_generator_leaves_window_empty() {
        let lat = saturate(&[p("x^16")], &ClosureConfig::new(15)).unwrap();
        assert!(lat.is_empty());
    }

    #[test]
    fn generator_beyond_working_degree_is_infeasible() {
        let mut cfg = ClosureConfig::new(4);
        cfg.working_degree = Some(4);
        assert!(matches!(
            saturate(&[p("x^16")], &cfg),
            Err(ClosureError::Infeasible(_))
        ));
    }

    #[test]
    fn empty_generator_set() {
        let lat = saturate(&[], &ClosureConfig::new(8)).unwrap();
        assert!(lat.is_empty());
    }

    #[test]
    fn saturation_is_order_independent() {
        let a = saturate(&[p("x^2"), p("x^3")], &ClosureConfig::new(7)).unwrap();
        let b = saturate(&[p("x^3"), p("x^2")], &ClosureConfig::new(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_monotonicity() {
        let mut small = ClosureConfig::new(10);
        small.coeff_cap = 1;
        small.combo_width = 2;
        let large = ClosureConfig::new(10);
        let gens = [p("x^2"), p("x^3")];
        let a = saturate(&gens, &small).unwrap();
        let b = saturate(&gens, &large).unwrap();
        assert!(a.subset_of(&b));
    }

    #[test]
    fn predicate_lattice_mixed_row() {
        let lat = predicate_lattice(b(0, 0, 1, 1), 5);
        assert_eq!(lat.row_polys(), vec![p("x^2"), p("x^3"), p("x^4"), p("2x^5")]);
    }

    #[test]
    fn predicate_lattice_full_ring() {
        let lat = predicate_lattice(b(1, 1, 1, 1), 3);
        assert_eq!(lat.rank(), 4);
        assert!(lat.contains(&p("x^3+x^2+x+1")));
    }

    #[test]
    fn predicate_lattice_cubic_parity() {
        let lat = predicate_lattice(b(0, 0, 0, 1), 15);
        assert_eq!(lat.row_polys(), vec![p("x^3"), p("x^9"), p("6x^15")]);
    }

    #[test]
    fn compare_square_row() {
        let report =
            compare_closure_vs_predicate(b(0, 0, 1, 0), &ClosureConfig::new(16)).unwrap();
        assert!(report.sound, "soundness broken: {report}");
        assert!(report.equal, "equality missed: {report}");
    }

    #[test]
    fn compare_empty_basis() {
        let report = compare_closure_vs_predicate(b(0, 0, 0, 0), &ClosureConfig::new(6)).unwrap();
        assert!(report.equal);
    }

    #[test]
    fn parity_check_degree_gap() {
        let report =
            parity_coefficient_check(&[p("x^6")], 2, &ClosureConfig::new(12)).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn parity_check_square_generator() {
        // e.g. x^2 o (x^2 + x^4) = x^4 + 2x^6 + x^8: the x^6 coefficient stays even
        let report =
            parity_coefficient_check(&[p("x^2")], 6, &ClosureConfig::new(16)).unwrap();
        assert!(report.passed());
    }
}
