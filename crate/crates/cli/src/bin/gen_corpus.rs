//! Writes the bundled corpus of presentation files, the expected-verdict
//! sidecar, and the product-quotient certificate for the 7-dimensional
//! double-Engel quotient. Run from the workspace root:
//!
//! ```text
//! cargo run -p carnot-cli --bin gen-corpus -- corpus
//! ```

use anyhow::Result;
use carnot_core::engel::make_engel;
use carnot_core::hall::free_nilpotent;
use carnot_core::lie::{heisenberg, GradedLieAlgebra, SparseVec};
use carnot_core::linalg::{unit_vec, vec_zero};
use carnot_core::presentation::PresentationFile;
use carnot_core::rat::int;
use carnot_core::semigen::wire::product_quotient_to_wire;
use carnot_core::semigen::ProductQuotientData;
use std::collections::BTreeMap;
use std::path::Path;

fn n626() -> GradedLieAlgebra {
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

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn emit(dir: &Path, name: &str, g: &GradedLieAlgebra) -> Result<()> {
    let p = PresentationFile::from_algebra(name, g);
    write(dir, &format!("{name}.json"), &(p.to_json() + "\n"))
}

fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "corpus".to_string());
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir)?;

    for n in 1..=4 {
        emit(dir, &format!("engel{n}"), &make_engel(n))?;
    }
    emit(dir, "heisenberg", &heisenberg())?;
    emit(dir, "n626", &n626())?;
    emit(dir, "free23", &free_nilpotent(2, 3).algebra)?;
    emit(dir, "free33", &free_nilpotent(3, 3).algebra)?;

    let e1 = make_engel(1);
    let product = GradedLieAlgebra::product(&e1, &e1);
    emit(dir, "engel1xengel1", &product)?;

    // the 7-dimensional trimmed quotient and its diamond certificate
    let z1 = product.basis_index("Z.1").unwrap();
    let z2 = product.basis_index("Z.2").unwrap();
    let mut v = vec_zero(product.dim());
    v[z1] = int(1);
    v[z2] = int(-1);
    let ideal = product.ideal_generated(&[v.clone()]).unwrap();
    let (q, _) = product.quotient(&ideal).unwrap();
    emit(dir, "137a", &q)?;
    let data = ProductQuotientData {
        factors: vec![
            PresentationFile::from_algebra("engel1", &e1),
            PresentationFile::from_algebra("engel1", &e1),
        ],
        ideal: vec![v],
        iso: (0..q.dim()).map(|i| unit_vec(q.dim(), i)).collect(),
    };
    let wire = product_quotient_to_wire(&data);
    write(
        dir,
        "137a.diamond.json",
        &(serde_json::to_string_pretty(&wire)? + "\n"),
    )?;

    // a forged step-4 table: Jacobi forces [e1,e5] = [e2,e4], violated here
    let bad = serde_json::json!({
        "schema": 1,
        "name": "bad-jacobi",
        "layers": [2, 1, 2, 1],
        "basis": ["e1", "e2", "e3", "e4", "e5", "e6"],
        "brackets": [
            {"left": "e1", "right": "e2", "result": {"e3": "1"}},
            {"left": "e1", "right": "e3", "result": {"e4": "1"}},
            {"left": "e2", "right": "e3", "result": {"e5": "1"}},
            {"left": "e1", "right": "e5", "result": {"e6": "1"}}
        ]
    });
    write(
        dir,
        "bad-jacobi.json",
        &(serde_json::to_string_pretty(&bad)? + "\n"),
    )?;

    // expected verdicts for the decision pipeline
    let expected = serde_json::json!({
        "schema": 1,
        "verdicts": {
            "engel1": {"decide": "not_semigenerated", "trimmed": true, "star": "NO"},
            "engel2": {"decide": "not_semigenerated", "trimmed": true, "star": "NO"},
            "engel3": {"decide": "not_semigenerated", "trimmed": true, "star": "NO"},
            "engel4": {"decide": "not_semigenerated", "trimmed": true, "star": "NO"},
            "engel1xengel1": {"decide": "not_semigenerated", "trimmed": false},
            "137a": {"decide": "semigenerated", "trimmed": true, "star": "NO", "diamond": "YES"},
            "n626": {"decide": "semigenerated", "trimmed": true, "star": "NO", "diamond": "NO"},
            "heisenberg": {"decide": "semigenerated", "trimmed": true, "star": "YES", "diamond": "YES"},
            "free23": {"decide": "not_semigenerated", "trimmed": false, "star": "NO"},
            "free33": {"decide": "not_semigenerated", "trimmed": false, "star": "NO"}
        }
    });
    write(
        dir,
        "expected.json",
        &(serde_json::to_string_pretty(&expected)? + "\n"),
    )?;
    Ok(())
}
