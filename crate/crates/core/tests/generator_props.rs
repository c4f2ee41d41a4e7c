mod common;

use asyncdyn_core::{StateVector, UpdateMask};
use common::*;
use proptest::prelude::*;

fn arb_masks(n: usize, max: usize) -> impl Strategy<Value = Vec<UpdateMask>> {
    prop::collection::vec(
        (0..1u32 << n).prop_map(move |b| UpdateMask::new(n, b).unwrap()),
        0..=max,
    )
}

fn arb_case() -> impl Strategy<
    Value = (
        asyncdyn_core::GeneratorFunction,
        StateVector,
        Vec<UpdateMask>,
        Vec<UpdateMask>,
    ),
> {
    (1usize..=6).prop_flat_map(|n| (arb_phi(n), arb_state(n), arb_masks(n, 6), arb_masks(n, 6)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn masked_update_flips_exactly_enabled_masked_coordinates((phi, mu, masks, _) in arb_case()) {
        let unstable = phi.unstable_set(mu).unwrap();
        for nu in masks {
            let next = phi.apply_mask(mu, nu).unwrap();
            for i in 1..=phi.n() {
                let flipped = next.get(i) != mu.get(i);
                prop_assert_eq!(flipped, nu.get(i) && unstable.contains(i));
            }
        }
    }

    #[test]
    fn all_ones_mask_is_synchronous_step((phi, mu, _, _) in arb_case()) {
        let all = UpdateMask::ones(phi.n()).unwrap();
        prop_assert_eq!(phi.apply_mask(mu, all).unwrap(), phi.evaluate(mu).unwrap());
    }

    #[test]
    fn fixed_points_never_move((phi, _, masks, _) in arb_case()) {
        for fp in phi.fixed_points().iter() {
            prop_assert_eq!(phi.iterate(fp, &masks).unwrap(), fp);
            prop_assert!(phi.unstable_set(fp).unwrap().is_empty());
        }
    }

    #[test]
    fn iteration_composes((phi, mu, s1, s2) in arb_case()) {
        let joined: Vec<UpdateMask> = s1.iter().chain(&s2).copied().collect();
        let staged = phi.iterate(phi.iterate(mu, &s1).unwrap(), &s2).unwrap();
        prop_assert_eq!(phi.iterate(mu, &joined).unwrap(), staged);
    }

    #[test]
    fn fixed_points_are_exactly_the_stable_states((phi, _, _, _) in arb_case()) {
        for mu in phi.states() {
            prop_assert_eq!(phi.fixed_points().contains(mu), phi.evaluate(mu).unwrap() == mu);
        }
    }
}
