//! The type (◊) check.
//!
//! Positive routes: a verified product-quotient construction, step ≤ 2, or
//! type (⋆). Negative route: an abelian hyperplane subalgebra of V1 together
//! with a star refutation (a diamond algebra with a codimension-1 step-≤2
//! subalgebra is of type (⋆)).

use super::star::{check_type_star, StarAnswer, StarReport};
use super::SemigenError;
use crate::lie::GradedLieAlgebra;
use crate::linalg::{solve_system, unit_vec, vec_axpy, vec_is_zero, vec_zero, Subspace};
use crate::presentation::PresentationFile;
use crate::rat::{int, Rat};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Product-quotient data for the constructive diamond route: `g` is claimed
/// isomorphic to `(Π factors) / ideal` via `iso`, and the diamond terms of
/// each factor basis must project into the factor image of the ideal.
#[derive(Clone, Debug)]
pub struct ProductQuotientData {
    pub factors: Vec<PresentationFile>,
    /// Ideal generators in the product's coordinates.
    pub ideal: Vec<Vec<Rat>>,
    /// Rows = images in `g` of the canonical quotient's basis vectors.
    pub iso: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub enum DiamondEvidence {
    StepTwo,
    Star(StarReport),
    ProductQuotient,
}

#[derive(Clone, Debug)]
pub enum DiamondAnswer {
    Yes(DiamondEvidence),
    No {
        hyperplane: Subspace,
        star: StarReport,
    },
    Unknown,
}

#[derive(Clone, Debug)]
pub struct DiamondReport {
    pub answer: DiamondAnswer,
    pub notes: Vec<String>,
}

/// Looks for a codimension-1 abelian subspace of V1: first by the
/// linear-shift method around each excluded coordinate direction, then by
/// seeded random covectors. Returns the hyperplane in ambient coordinates.
pub fn find_abelian_hyperplane(g: &GradedLieAlgebra, seed: u64) -> Option<Subspace> {
    let d1 = g.v1_dim();
    let dim = g.dim();
    if d1 < 2 {
        return None;
    }
    let v1: Vec<usize> = g.layer_range(1).collect();
    // linear-shift method: hyperplane spanned by {e_i + a_i e_c}_{i != c}
    for &c in &v1 {
        let others: Vec<usize> = v1.iter().copied().filter(|&i| i != c).collect();
        let ec = unit_vec(dim, c);
        let m = others.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for p in 0..m {
            let ep = unit_vec(dim, others[p]);
            let bcp = g.bracket(&ec, &ep);
            for q in p + 1..m {
                let eq_ = unit_vec(dim, others[q]);
                let bpq = g.bracket(&ep, &eq_);
                let bcq = g.bracket(&ec, &eq_);
                // [e_p + a_p e_c, e_q + a_q e_c] = bpq + a_q (-bcp)? careful:
                // = bpq + a_q [e_p, e_c] + a_p [e_c, e_q] = bpq - a_q bcp + a_p bcq
                for coord in 0..dim {
                    let mut row = vec_zero(m);
                    row[q] = -bcp[coord].clone();
                    row[p] = bcq[coord].clone();
                    if vec_is_zero(&row) && bpq[coord].is_zero() {
                        continue;
                    }
                    rows.push(row);
                    rhs.push(-bpq[coord].clone());
                }
            }
        }
        if let Some(sol) = solve_system(&rows, &rhs, m) {
            let basis: Vec<Vec<Rat>> = others
                .iter()
                .zip(&sol.particular)
                .map(|(&i, a)| {
                    let mut v = unit_vec(dim, i);
                    vec_axpy(&mut v, a, &ec);
                    v
                })
                .collect();
            return Some(Subspace::from_rows(dim, basis).expect("hyperplane"));
        }
    }
    // randomized covectors
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let lam: Vec<Rat> = (0..d1).map(|_| int(rng.gen_range(-3i64..=3))).collect();
        if vec_is_zero(&lam) {
            continue;
        }
        let kernel = crate::linalg::nullspace(&[lam], d1);
        let basis: Vec<Vec<Rat>> = kernel.iter().map(|k| g.embed_v1(k)).collect();
        let abelian = basis.iter().enumerate().all(|(i, x)| {
            basis
                .iter()
                .skip(i + 1)
                .all(|y| vec_is_zero(&g.bracket(x, y)))
        });
        if abelian {
            return Some(Subspace::from_rows(dim, basis).expect("hyperplane"));
        }
    }
    None
}

/// Verifies the product-quotient construction: the ideal is homogeneous, the
/// diamond terms of every factor basis land in the factor projections of the
/// ideal, and `iso` is a graded Lie isomorphism from the canonical quotient
/// onto `g`.
pub fn verify_product_quotient(
    g: &GradedLieAlgebra,
    data: &ProductQuotientData,
) -> Result<(), String> {
    if data.factors.is_empty() {
        return Err("no factors given".into());
    }
    let factor_algebras: Vec<GradedLieAlgebra> = data
        .factors
        .iter()
        .map(|p| p.to_algebra().map_err(|e| format!("factor: {e}")))
        .collect::<Result<_, _>>()?;
    // fold the product, tracking each factor's index map
    let mut product = factor_algebras[0].clone();
    let mut maps: Vec<Vec<usize>> = vec![(0..product.dim()).collect()];
    for f in &factor_algebras[1..] {
        let (p, m1, m2) = GradedLieAlgebra::product_with_maps(&product, f);
        for m in maps.iter_mut() {
            for idx in m.iter_mut() {
                *idx = m1[*idx];
            }
        }
        maps.push(m2);
        product = p;
    }
    let pdim = product.dim();
    let ideal_space =
        Subspace::from_rows(pdim, data.ideal.clone()).map_err(|e| format!("ideal rows: {e}"))?;
    let ideal = product
        .hom_ideal(&ideal_space)
        .map_err(|e| format!("ideal: {e}"))?;
    // diamond terms of each factor basis project into π_l(ideal)
    for (l, (f, map)) in factor_algebras.iter().zip(&maps).enumerate() {
        // π_l(ideal): image of the ideal in factor coordinates
        let proj_rows: Vec<Vec<Rat>> = ideal
            .subspace
            .basis()
            .iter()
            .map(|v| {
                let mut out = vec_zero(f.dim());
                for (fi, &pi) in map.iter().enumerate() {
                    out[fi] = v[pi].clone();
                }
                out
            })
            .collect();
        let pi_l = Subspace::from_rows(f.dim(), proj_rows).map_err(|e| e.to_string())?;
        let v1: Vec<usize> = f.layer_range(1).collect();
        for &i in &v1 {
            let xi = unit_vec(f.dim(), i);
            for &j in &v1 {
                let xj = unit_vec(f.dim(), j);
                // ad_{Xi}^k Xj ∈ π_l(ideal) for all k ≥ 2
                let mut w = f.bracket(&xi, &xj);
                for _k in 2..=f.step() {
                    w = f.bracket(&xi, &w);
                    if vec_is_zero(&w) {
                        break;
                    }
                    if !pi_l.member(&w).unwrap_or(false) {
                        return Err(format!(
                            "factor {l}: ad^k term of basis pair ({i},{j}) escapes the ideal image"
                        ));
                    }
                    // ad²_{ad^k term}(Xi) ∈ π_l(ideal)
                    let t = f.bracket(&w, &f.bracket(&w, &xi));
                    if !vec_is_zero(&t) && !pi_l.member(&t).unwrap_or(false) {
                        return Err(format!(
                            "factor {l}: second-order diamond term of ({i},{j}) escapes"
                        ));
                    }
                }
            }
        }
    }
    // canonical quotient and the claimed isomorphism onto g
    let (q, _) = product.quotient(&ideal).map_err(|e| e.to_string())?;
    if data.iso.len() != q.dim() {
        return Err(format!(
            "iso has {} rows, quotient has dim {}",
            data.iso.len(),
            q.dim()
        ));
    }
    if q.layer_dims() != g.layer_dims() {
        return Err(format!(
            "layer dims mismatch: quotient {:?} vs algebra {:?}",
            q.layer_dims(),
            g.layer_dims()
        ));
    }
    for row in &data.iso {
        if row.len() != g.dim() {
            return Err("iso rows must have the target dimension".into());
        }
    }
    let span = Subspace::from_rows(g.dim(), data.iso.clone()).map_err(|e| e.to_string())?;
    if span.dim() != g.dim() {
        return Err("iso is singular".into());
    }
    // layer preservation
    for (qi, row) in data.iso.iter().enumerate() {
        let k = q.layer_of(qi);
        if !g.in_layer(row, k) {
            return Err(format!("iso image of quotient basis {qi} leaves layer {k}"));
        }
    }
    // bracket preservation
    for i in 0..q.dim() {
        for j in i + 1..q.dim() {
            let lhs = g.bracket(&data.iso[i], &data.iso[j]);
            let qb = q.basis_bracket(i, j);
            let mut rhs = vec_zero(g.dim());
            for (k, c) in qb.iter().enumerate() {
                if !c.is_zero() {
                    vec_axpy(&mut rhs, c, &data.iso[k]);
                }
            }
            if lhs != rhs {
                return Err(format!("iso does not preserve the bracket of ({i},{j})"));
            }
        }
    }
    Ok(())
}

/// The type (◊) check. `hint`, when present, is verified first; otherwise
/// the check falls back to step ≤ 2, type (⋆), or the abelian-hyperplane
/// refutation. `Unknown` is the honest fallback.
pub fn check_type_diamond(
    g: &GradedLieAlgebra,
    hint: Option<&ProductQuotientData>,
    seed: u64,
) -> Result<DiamondReport, SemigenError> {
    g.require_stratified()?;
    let mut notes = Vec::new();
    if let Some(data) = hint {
        match verify_product_quotient(g, data) {
            Ok(()) => {
                return Ok(DiamondReport {
                    answer: DiamondAnswer::Yes(DiamondEvidence::ProductQuotient),
                    notes,
                })
            }
            Err(e) => notes.push(format!("product-quotient certificate rejected: {e}")),
        }
    }
    if g.step() <= 2 {
        return Ok(DiamondReport {
            answer: DiamondAnswer::Yes(DiamondEvidence::StepTwo),
            notes,
        });
    }
    let star = check_type_star(g);
    match star.answer {
        StarAnswer::Yes => Ok(DiamondReport {
            answer: DiamondAnswer::Yes(DiamondEvidence::Star(star)),
            notes,
        }),
        StarAnswer::No => {
            if let Some(h) = find_abelian_hyperplane(g, seed) {
                notes.push(
                    "abelian hyperplane gives a step-2 subalgebra meeting V1 in codim 1".into(),
                );
                Ok(DiamondReport {
                    answer: DiamondAnswer::No {
                        hyperplane: h,
                        star,
                    },
                    notes,
                })
            } else {
                notes.push("type (⋆) fails but no abelian hyperplane was found".into());
                Ok(DiamondReport {
                    answer: DiamondAnswer::Unknown,
                    notes,
                })
            }
        }
        StarAnswer::Unknown => {
            notes.push("type (⋆) check inconclusive".into());
            Ok(DiamondReport {
                answer: DiamondAnswer::Unknown,
                notes,
            })
        }
    }
}
