//! Curated romanizations. Expected readings in `data/translit_cases.tsv`
//! are written out by hand from standard Mandarin and Cantonese
//! pronunciations, spelled in the bundled conventions: Wade-Giles without
//! apostrophes or umlauts, Cantonese in Hong Kong style respelled from
//! Jyutping.

#[path = "support/translit_cases.rs"]
mod translit_cases;

use mcua_core::Transliterator;
use translit_cases::{case_failures, cases, invariant_failures, reorder_failures};

fn assert_none(wrong: Vec<String>) {
    assert!(wrong.is_empty(), "{} mismatches:\n{}", wrong.len(), wrong.join("\n"));
}

#[test]
fn at_least_two_hundred_curated_cases() {
    assert!(cases().len() >= 200, "{}", cases().len());
}

#[test]
fn curated_cases_match() {
    assert_none(case_failures(&Transliterator::bundled()));
}

#[test]
fn family_detection_and_reordering() {
    assert_none(reorder_failures(&Transliterator::bundled()));
}

#[test]
fn simplification_and_coverage_invariants() {
    assert_none(invariant_failures(&Transliterator::bundled()));
}
