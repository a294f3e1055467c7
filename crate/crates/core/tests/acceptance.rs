//! Acceptance gate: one test per criterion, each printing a PASS/FAIL
//! line per item (visible with `--nocapture` or on failure).

use nearring::checks::{self, CheckOutcome};

fn assert_all(outcomes: &[CheckOutcome]) {
    for o in outcomes {
        println!("{o}");
    }
    let failed: Vec<&CheckOutcome> = outcomes.iter().filter(|o| !o.passed).collect();
    assert!(failed.is_empty(), "failed items: {failed:?}");
}

#[test]
fn criterion_1_separation_fixture() {
    assert_all(&checks::check_separation());
}

#[test]
fn criterion_2_predicate_oracle_equality() {
    assert_all(&checks::check_compare_equalities());
}

#[test]
fn criterion_2_containment_all_bases() {
    assert_all(&checks::check_compare_containment());
}

#[test]
fn criterion_3_x3_fixture_list() {
    assert_all(&checks::check_x3_fixtures());
}

#[test]
fn criterion_4_theorem_41_desk_scale() {
    let outcomes: Vec<CheckOutcome> =
        (1..=3).map(|j| checks::check_theorem_41(j, 30)).collect();
    assert_all(&outcomes);
}

#[test]
fn criterion_5_lemma_sweeps() {
    assert_all(&checks::check_lemma_sweeps());
}

#[test]
fn criterion_6_pullback_laws() {
    assert_all(&checks::check_pullback(1000, 7));
}

#[test]
fn criterion_7_witness_suite() {
    assert_all(&checks::check_witnesses());
}

#[test]
fn criterion_8_algebraic_properties() {
    assert_all(&checks::check_properties(10_000, 11));
}

#[test]
fn criterion_9_descending_chain() {
    assert_all(&checks::check_chain());
}
