//! Shared fixtures for the integration tests.

use carnot_core::lie::{GradedLieAlgebra, SparseVec};
use carnot_core::rat::int;
use std::collections::BTreeMap;

/// The 6-dimensional step-3 algebra with brackets
/// `[X1,X2]=X4, [X1,X3]=X5, [X1,X4]=[X3,X5]=X6` and layers (3, 2, 1).
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
    .expect("N_{6,2,6} table is valid")
}

/// The 7-dimensional trimmed step-3 quotient of two Engel algebras by the
/// difference of their centers.
pub fn quotient_137a() -> GradedLieAlgebra {
    let e = carnot_core::engel::make_engel(1);
    let p = GradedLieAlgebra::product(&e, &e);
    let z1 = p.basis_index("Z.1").unwrap();
    let z2 = p.basis_index("Z.2").unwrap();
    let mut v = carnot_core::linalg::vec_zero(p.dim());
    v[z1] = int(1);
    v[z2] = int(-1);
    let ideal = p.ideal_generated(&[v]).unwrap();
    p.quotient(&ideal).unwrap().0
}
