//! Named check suites over the whole library: separation fixtures,
//! oracle-vs-predicate comparisons, saturation fixtures, lemma sweeps,
//! pullback laws, witness round-trips, algebraic properties, and the
//! descending chain. Both the CLI `check` subcommand and the acceptance
//! test target run these.

use std::fmt;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::closure::{
    compare_closure_vs_predicate, parity_coefficient_check, predicate_lattice, saturate,
    ClosureConfig,
};
use crate::numtheory::{check_lemma_31, check_lemma_32, standard_sets};
use crate::predicates::{member, GeneratorBasis};
use crate::witness::{
    builtin_derivations, eval_term, lift_witness, search_witness, verify_derivation, Environment,
    SearchBounds,
};
use crate::IntPoly;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} ({})",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

fn p(s: &str) -> IntPoly {
    s.parse().unwrap()
}

/// member(<x^2>, 2x^10) but not x^10, and the introductory derivation
/// term evaluates to exactly 2x^10.
pub fn check_separation() -> Vec<CheckOutcome> {
    let basis = GeneratorBasis::new(false, false, true, false);
    let yes = member(basis, &p("2x^10")).member;
    let no = member(basis, &p("x^10")).member;
    let fixture = builtin_derivations()
        .into_iter()
        .find(|d| d.name == "sec1-2x10")
        .unwrap();
    let evals = eval_term(&fixture.term, &fixture.environment)
        .is_ok_and(|v| v == p("2x^10"));
    vec![
        CheckOutcome::new("separation-member-2x10", yes, "member(<x2>, 2x^10)"),
        CheckOutcome::new("separation-nonmember-x10", !no, "!member(<x2>, x^10)"),
        CheckOutcome::new("separation-term-evaluates", evals, "sec1-2x10 = 2x^10"),
    ]
}

/// Saturation reaches lattice equality with the predicate for every
/// basis whose characterization window fits the stated caps: the
/// x^2-family at D=16, the x^3-involving family at D=13, the degenerate
/// rows at D=8.
pub fn check_compare_equalities() -> Vec<CheckOutcome> {
    let groups: [(&[GeneratorBasis], usize); 3] = [
        (
            &[
                GeneratorBasis::new(false, false, true, false),
                GeneratorBasis::new(true, false, true, false),
                GeneratorBasis::new(false, true, true, false),
                GeneratorBasis::new(true, true, true, false),
            ],
            16,
        ),
        (
            &[
                GeneratorBasis::new(false, false, true, true),
                GeneratorBasis::new(true, false, true, true),
                GeneratorBasis::new(false, true, true, true),
                GeneratorBasis::new(true, true, true, true),
            ],
            13,
        ),
        (
            &[
                GeneratorBasis::new(false, false, false, false),
                GeneratorBasis::new(true, false, false, false),
                GeneratorBasis::new(false, true, false, false),
                GeneratorBasis::new(true, true, false, false),
            ],
            8,
        ),
    ];
    let runs: Vec<(GeneratorBasis, usize)> = groups
        .iter()
        .flat_map(|(bases, cap)| bases.iter().map(move |&b| (b, *cap)))
        .collect();
    // runs are independent; saturation itself is serial and deterministic
    runs.par_iter()
        .map(|&(basis, cap)| {
            let report =
                compare_closure_vs_predicate(basis, &ClosureConfig::new(cap)).unwrap();
            CheckOutcome::new(
                format!("compare-equal-{basis}-D{cap}"),
                report.equal,
                format!(
                    "sound={} equal={} missing={}",
                    report.sound,
                    report.equal,
                    report.missing.len()
                ),
            )
        })
        .collect()
}

/// Saturation output is contained in the predicate lattice for all 16
/// bases at D=24. Containment is cap-independent (everything the engine
/// emits is a derived element), so reduced enumeration caps are used.
pub fn check_compare_containment() -> Vec<CheckOutcome> {
    GeneratorBasis::all()
        .into_par_iter()
        .map(|basis| {
            let mut cfg = ClosureConfig::new(24);
            cfg.coeff_cap = 2;
            cfg.combo_width = 2;
            cfg.max_rounds = 4;
            let report = compare_closure_vs_predicate(basis, &cfg).unwrap();
            CheckOutcome::new(
                format!("compare-contain-{basis}-D24"),
                report.sound,
                format!("extra={}", report.extra.len()),
            )
        })
        .collect()
}

/// The nonzero generator list for <x^3> up to degree 75.
pub fn x3_fixture_list() -> Vec<IntPoly> {
    [
        "x^3",
        "x^9",
        "6x^15",
        "3x^15+3x^21",
        "x^27",
        "6x^33",
        "3x^15+3x^39",
        "3x^15+3x^33+3x^45",
        "3x^33+9x^51",
        "3x^33+3x^57",
        "3x^15+3x^33+3x^63",
        "3x^15+9x^69",
        "3x^33+9x^75",
    ]
    .iter()
    .map(|s| p(s))
    .collect()
}

/// Every list element satisfies the <x^3> membership predicate, spans
/// the predicate lattice at D=75, and is reached by saturation with
/// escalated caps.
pub fn check_x3_fixtures() -> Vec<CheckOutcome> {
    let basis = GeneratorBasis::new(false, false, false, true);
    let list = x3_fixture_list();
    let mut out = Vec::new();
    for q in &list {
        out.push(CheckOutcome::new(
            format!("x3-member-{q}"),
            member(basis, q).member,
            "predicate membership",
        ));
    }
    let predicted = predicate_lattice(basis, 75);
    let spanned = crate::lattice::CoeffLattice::from_polys(75, &list);
    out.push(CheckOutcome::new(
        "x3-list-spans-predicate",
        spanned == predicted,
        format!("list rank {} vs predicate rank {}", spanned.rank(), predicted.rank()),
    ));
    // the derivations pass through degree 189 (x^3 composed onto
    // arguments near degree 63), so the window must reach 3 * 75 + 9
    let mut cfg = ClosureConfig::new(75);
    cfg.working_degree = Some(234);
    cfg.coeff_cap = 4;
    cfg.combo_width = 4;
    let saturated = saturate(&[p("x^3")], &cfg).unwrap();
    for q in &list {
        out.push(CheckOutcome::new(
            format!("x3-saturate-{q}"),
            saturated.contains(q),
            "reached by saturation",
        ));
    }
    out
}

/// Parity obstruction behind the descending-chain argument: dropping
/// the j-th of the generators x^2, x^6, x^14, x^30, ... leaves a
/// subnearring in which the coefficient of x^(2^(j+1)-2) is always even.
pub fn check_theorem_41(j: u32, degree_cap: usize) -> CheckOutcome {
    assert!(j >= 1);
    let target = 2usize.pow(j + 1) - 2;
    assert!(target <= degree_cap);
    let gens: Vec<IntPoly> = (1..)
        .map(|i: u32| 2usize.pow(i + 1) - 2)
        .take_while(|&d| d <= degree_cap)
        .enumerate()
        .filter(|(idx, _)| *idx as u32 + 1 != j)
        .map(|(_, d)| IntPoly::monomial(BigInt::from(1), d))
        .collect();
    let report =
        parity_coefficient_check(&gens, target, &ClosureConfig::new(degree_cap)).unwrap();
    CheckOutcome::new(
        format!("theorem-4.1-j{j}-D{degree_cap}"),
        report.passed(),
        format!("rank={} odd={}", report.rank, report.violations.len()),
    )
}

/// Exhaustive sweeps of the two multinomial divisibility lemmas over
/// fixed finite boxes, plus the mod-24 and mod-72 index translations.
pub fn check_lemma_sweeps() -> Vec<CheckOutcome> {
    let mut applicable = 0usize;
    let mut violated = 0usize;
    // p = 2, s <= 2, parts over {0..6}^n for n <= 3, all pivot indices
    for s in 0..=2u32 {
        for n in 1..=3usize {
            let mut parts = vec![0u64; n];
            loop {
                for j in 0..n {
                    let c = check_lemma_31(2, s, &parts, j);
                    if c.applies() {
                        applicable += 1;
                    }
                    if c.is_violated() {
                        violated += 1;
                    }
                }
                let mut i = 0;
                while i < n && parts[i] == 6 {
                    parts[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                parts[i] += 1;
            }
        }
    }
    let l31 = CheckOutcome::new(
        "lemma-3.1-sweep",
        violated == 0 && applicable > 0,
        format!("{applicable} applicable, {violated} violations"),
    );

    let mut applicable = 0usize;
    let mut violated = 0usize;
    // m <= 3, n <= 3, entries <= 8
    for m in 0..=3u32 {
        for n in 1..=3usize {
            let mut entries = vec![0u64; 2 * n];
            loop {
                let (ls, ks) = entries.split_at(n);
                let c = check_lemma_32(ls, ks, m);
                if c.applies() {
                    applicable += 1;
                }
                if c.is_violated() {
                    violated += 1;
                }
                let mut i = 0;
                while i < 2 * n && entries[i] == 8 {
                    entries[i] = 0;
                    i += 1;
                }
                if i == 2 * n {
                    break;
                }
                entries[i] += 1;
            }
        }
    }
    let l32 = CheckOutcome::new(
        "lemma-3.2-sweep",
        violated == 0 && applicable > 0,
        format!("{applicable} applicable, {violated} violations"),
    );

    // index translations used by the cubic-row parity sets
    let sets = standard_sets();
    let calc24 = (0..10_000u64).filter(|k| k % 6 == 3).all(|k| {
        (3 * k % 24 == 21) == (k % 24 == 15) && (3 * k % 24 == 15) == (k % 24 == 21)
    });
    let calc72 = (0..10_000u64)
        .filter(|k| k % 6 == 3)
        .all(|k| sets.b.contains(3 * k) == [15, 21, 39, 45, 63, 69].contains(&(k % 72)));
    vec![
        l31,
        l32,
        CheckOutcome::new("lemma-calc24", calc24, "3k mod 24 translation"),
        CheckOutcome::new("lemma-calc72", calc72, "3k mod 72 translation"),
    ]
}

fn random_poly(rng: &mut StdRng, max_deg: usize, coeff_bound: i64) -> IntPoly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<BigInt> = (0..=deg)
        .map(|_| BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound)))
        .collect();
    IntPoly::new(coeffs)
}

/// A random element of the predicate lattice of `basis` (a guaranteed
/// member), as a small combination of its basis rows.
fn random_member(rng: &mut StdRng, basis: GeneratorBasis, cap: usize) -> IntPoly {
    let rows = predicate_lattice(basis, cap).row_polys();
    let mut acc = IntPoly::zero();
    for row in &rows {
        if rng.gen_bool(0.3) {
            let c = BigInt::from(rng.gen_range(-3i64..=3));
            acc = &acc + &row.scale(&c);
        }
    }
    acc
}

/// The pullback laws: membership in the basis containing x is
/// equivalent to membership of the substituted polynomial in the basis
/// without x. Half the sample is drawn from the left predicate lattice
/// so both truth values are exercised.
pub fn check_pullback(cases: usize, seed: u64) -> Vec<CheckOutcome> {
    let pairs: [(GeneratorBasis, GeneratorBasis, IntPoly); 4] = [
        (
            GeneratorBasis::new(false, true, true, false),
            GeneratorBasis::new(false, false, true, false),
            p("x^2"),
        ),
        (
            GeneratorBasis::new(true, true, true, false),
            GeneratorBasis::new(true, false, true, false),
            p("x^2"),
        ),
        (
            GeneratorBasis::new(false, true, false, true),
            GeneratorBasis::new(false, false, false, true),
            p("x^3"),
        ),
        (
            GeneratorBasis::new(true, true, false, true),
            GeneratorBasis::new(true, false, false, true),
            p("x^3"),
        ),
    ];
    let mut rng = StdRng::seed_from_u64(seed);
    pairs
        .into_iter()
        .map(|(with_x, without_x, subst)| {
            let mut bad = 0usize;
            let mut positives = 0usize;
            for i in 0..cases {
                let q = if i % 2 == 0 {
                    random_poly(&mut rng, 10, 20)
                } else {
                    random_member(&mut rng, with_x, 10)
                };
                let lhs = member(with_x, &q).member;
                let rhs = member(without_x, &q.compose(&subst)).member;
                if lhs != rhs {
                    bad += 1;
                }
                if lhs {
                    positives += 1;
                }
            }
            CheckOutcome::new(
                format!("pullback-{with_x}-{without_x}"),
                bad == 0 && positives > 0,
                format!("{cases} cases, {positives} members, {bad} discrepancies"),
            )
        })
        .collect()
}

/// Builtin derivations all verify; the lifting map round-trips on the
/// fixtures it applies to; bounded search re-derives a certificate for
/// every predicate basis row of <x^2,x^3> up to D=13.
pub fn check_witnesses() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for d in builtin_derivations() {
        out.push(CheckOutcome::new(
            format!("witness-verify-{}", d.name),
            verify_derivation(&d),
            d.claimed_value.to_string(),
        ));
        // the lift law needs g0 cancellable and the rest constants
        if d.environment.generators.len() == 1 {
            let a = &d.environment.generators[0];
            let ok = lift_witness(&d.term).is_ok_and(|lifted| {
                let env = Environment::with_identity(d.environment.generators.clone());
                eval_term(&lifted, &env).is_ok_and(|v| v.compose(a) == d.claimed_value)
            });
            out.push(CheckOutcome::new(
                format!("witness-lift-{}", d.name),
                ok,
                "eval(R(t)) . a = eval(t)",
            ));
        }
    }
    let gens = [p("x^2"), p("x^3")];
    let env = Environment::new(gens.to_vec());
    let basis = GeneratorBasis::new(false, false, true, true);
    for row in predicate_lattice(basis, 13).row_polys() {
        let found = search_witness(&row, &gens, SearchBounds::default());
        let ok = found
            .as_ref()
            .is_some_and(|t| eval_term(t, &env).is_ok_and(|v| v == row));
        out.push(CheckOutcome::new(
            format!("witness-search-{row}"),
            ok,
            "search + verify over {x^2, x^3}",
        ));
    }
    out
}

/// Randomized nearring axioms: associativity, right distributivity,
/// right cancellation for degree >= 1, constant absorption, plus the
/// fixed left-distributivity failure witness.
pub fn check_properties(cases: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut assoc = 0usize;
    let mut rdist = 0usize;
    let mut cancel = 0usize;
    let mut absorb = 0usize;
    for _ in 0..cases {
        let a = random_poly(&mut rng, 4, 9);
        let b = random_poly(&mut rng, 4, 9);
        let c = random_poly(&mut rng, 4, 9);
        if a.compose(&b).compose(&c) != a.compose(&b.compose(&c)) {
            assoc += 1;
        }
        if (&a + &b).compose(&c) != &a.compose(&c) + &b.compose(&c) {
            rdist += 1;
        }
        // cancellation, contrapositive form: p != q with deg(a') >= 1
        // must keep p . a' != q . a'
        let mut shift = c.clone();
        if shift.degree().map_or(true, |d| d < 1) {
            shift = &c + &p("x^5");
        }
        if a != b && a.compose(&shift) == b.compose(&shift) {
            cancel += 1;
        }
        let k = IntPoly::constant(BigInt::from(rng.gen_range(-9i64..=9)));
        if k.compose(&a) != k {
            absorb += 1;
        }
    }
    let witness_holds = {
        let px = p("x^2");
        let q = p("x");
        px.compose(&(&q + &q)) != &px.compose(&q) + &px.compose(&q)
    };
    vec![
        CheckOutcome::new("prop-associativity", assoc == 0, format!("{cases} cases, {assoc} bad")),
        CheckOutcome::new(
            "prop-right-distributivity",
            rdist == 0,
            format!("{cases} cases, {rdist} bad"),
        ),
        CheckOutcome::new(
            "prop-right-cancellation",
            cancel == 0,
            format!("{cases} cases, {cancel} bad"),
        ),
        CheckOutcome::new(
            "prop-left-distributivity-fails",
            witness_holds,
            "x^2 . (x + x) = 4x^2 != 2x^2",
        ),
        CheckOutcome::new(
            "prop-constant-absorption",
            absorb == 0,
            format!("{cases} cases, {absorb} bad"),
        ),
    ]
}

/// The first step of the strictly descending chain: <x^16> sits inside
/// <x^4> without x^4, since x^4 . x^4 = x^16.
pub fn check_chain() -> Vec<CheckOutcome> {
    let step = p("x^4").compose(&p("x^4")) == p("x^16");
    let inner = saturate(&[p("x^16")], &ClosureConfig::new(64)).unwrap();
    let outer = saturate(&[p("x^4")], &ClosureConfig::new(64)).unwrap();
    vec![
        CheckOutcome::new("chain-compose", step, "x^4 . x^4 = x^16"),
        CheckOutcome::new(
            "chain-containment",
            inner.subset_of(&outer),
            format!("ranks {} <= {}", inner.rank(), outer.rank()),
        ),
        CheckOutcome::new("chain-strict", !inner.contains(&p("x^4")), "x^4 not in <x^16>"),
    ]
}

/// The complete acceptance suite.
pub fn check_all() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.extend(check_separation());
    out.extend(check_compare_equalities());
    out.extend(check_compare_containment());
    out.extend(check_x3_fixtures());
    for j in 1..=3 {
        out.push(check_theorem_41(j, 30));
    }
    out.extend(check_lemma_sweeps());
    out.extend(check_pullback(1000, 7));
    out.extend(check_witnesses());
    out.extend(check_properties(10_000, 11));
    out.extend(check_chain());
    out
}
