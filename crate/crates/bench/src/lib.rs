//! Shared fixtures for the benchmarks.

use carnot_core::lie::{GradedLieAlgebra, SparseVec};
use carnot_core::rat::int;
use std::collections::BTreeMap;

/// The 6-dimensional step-3 algebra `N_{6,2,6}` used as a mid-size fixture.
pub fn n626() -> GradedLieAlgebra {
    let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    table.insert((0, 1), vec![(3, int(1))]);
    table.insert((0, 2), vec![(4, int(1))]);
    table.insert((0, 3), vec![(5, int(1))]);
    table.insert((2, 4), vec![(5, int(1))]);
    GradedLieAlgebra::new(
        vec![3, 2, 1],
        (1..=6).map(|i| format!("X{i}")).collect(),
        table,
    )
    .expect("N_{6,2,6} table")
}
