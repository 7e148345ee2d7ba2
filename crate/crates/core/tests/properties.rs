//! Randomized structural properties of the exact-algebra layer, 200
//! instances each.

mod common;

const CASES: u32 = 200;

#[test]
fn adjoint_involution_and_product_reversal() {
    common::check_adjoint_involution(CASES).unwrap();
}

#[test]
fn divisibility_round_trip_and_anti_diagonal_criterion() {
    common::check_divisibility_round_trip(CASES).unwrap();
}

#[test]
fn factorizations_reassemble_their_input() {
    common::check_factorization_soundness(CASES).unwrap();
}

#[test]
fn signature_is_invariant_under_congruence() {
    common::check_sylvester_stability(CASES).unwrap();
}

#[test]
fn degree_two_reciprocity_conditions_match_general_test() {
    common::check_degree2_reciprocity_equivalence(CASES).unwrap();
}
