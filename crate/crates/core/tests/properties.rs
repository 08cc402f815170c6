//! Randomized exact-arithmetic invariants, one test per suite.

mod common;

const INSTANCES: usize = 1000;

#[test]
fn determinant_identity_holds() {
    common::determinant_identity_suite(INSTANCES);
}

#[test]
fn convergents_approximate_within_reciprocal_denominators() {
    common::convergent_distance_suite(INSTANCES);
}

#[test]
fn denominators_grow_geometrically() {
    common::denominator_growth_suite(INSTANCES);
}

#[test]
fn first_disagreement_separates_values() {
    common::disagreement_gap_suite(INSTANCES);
}

#[test]
fn later_disagreement_means_closer_value() {
    common::proximity_suite(INSTANCES);
}

#[test]
fn window_agreement_fixes_the_two_sided_quantity() {
    common::mirror_invariance_suite(INSTANCES);
}

#[test]
fn insertions_keep_the_normalized_ratio_above_the_floor() {
    common::insertion_floor_suite(INSTANCES);
}
