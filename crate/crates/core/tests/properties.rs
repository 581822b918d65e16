mod common;

use common::invariants::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn hnf_canonical_form(input in hnf_input()) {
        hnf_is_canonical(input)?;
    }

    #[test]
    fn primitive_scaling(input in primitive_input()) {
        primitive_is_idempotent(input)?;
    }

    #[test]
    fn maximal_fan_unimodular(action in cyclic()) {
        maximal_fan_is_unimodular(action)?;
    }

    #[test]
    fn minimal_rays_in_maximal_fan(action in cyclic()) {
        minimal_within_maximal(action)?;
    }

    #[test]
    fn lift_projects_back(action in cyclic()) {
        lift_then_project(action)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn seeded_sampling(input in sampling_input()) {
        sampling_is_deterministic(input)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn moduli_fan_tiling(input in seeded()) {
        moduli_cones_tile(input)?;
    }

    #[test]
    fn containing_triangulation_area(input in resolution_pick()) {
        triangle_count_is_order(input)?;
    }
}
