//! Inputs for the criterion benchmarks in `benches/`.

use asyncdyn_core::{GeneratorFunction, StateSet};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A generator function with uniformly random images, reproducible from `seed`.
pub fn random_generator(n: usize, seed: u64) -> GeneratorFunction {
    let mut rng = StdRng::seed_from_u64(seed);
    let table = (0..1u32 << n)
        .map(|_| rng.random_range(0..1u32 << n))
        .collect();
    GeneratorFunction::from_table(n, table).expect("dimension within the default cap")
}

/// A random subset holding about half of the states, never empty.
pub fn random_subset(n: usize, seed: u64) -> StateSet {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut set = StateSet::empty(n).expect("dimension within the default cap");
    for mu in StateSet::full(n).expect("same dimension").iter() {
        if rng.random_bool(0.5) {
            set.insert(mu).expect("same dimension");
        }
    }
    if set.is_empty() {
        set = StateSet::full(n).expect("same dimension");
    }
    set
}
