//! The type (⋆) check by iterated semidefinite-radical restriction.
//!
//! A stratified algebra is of type (⋆) iff some basis `{X_i}` of V1 has
//! `ad_{X_i}²(V1) = 0` for every i. Each coordinate of each `ad_Y² e_j` is a
//! quadratic form in Y; any Y with `ad_Y²(V1) = 0` must zero all of them.
//! Whenever a form is semidefinite and nonzero on the current subspace, its
//! zero set there equals its radical, so the subspace shrinks exactly. The
//! chain proves `S ⊆ U_final`; a final subspace of dimension < dim V1 rules
//! out any basis inside S.

use crate::lie::GradedLieAlgebra;
use crate::linalg::{unit_vec, vec_zero, QForm, Subspace};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarAnswer {
    /// Every vector of V1 kills all forms; any basis works.
    Yes,
    /// The star set lies in a proper subspace of V1; no basis exists.
    No,
    /// Indefinite forms remain on all of V1.
    Unknown,
}

/// One radical-restriction step: the form is the coordinate `coord` of
/// `ad_Y²(e_j)`, semidefinite and nonzero on `before`, shrinking to `after`.
#[derive(Clone, Debug)]
pub struct StarStep {
    pub j: usize,
    pub coord: usize,
    pub before: Subspace,
    pub after: Subspace,
}

#[derive(Clone, Debug)]
pub struct StarReport {
    pub answer: StarAnswer,
    pub steps: Vec<StarStep>,
    /// Final subspace of V1 (in V1 coordinates) provably containing the
    /// star set.
    pub final_subspace: Subspace,
    /// Forms that are neither zero nor semidefinite on the final subspace.
    pub residual_indefinite: Vec<(usize, usize)>,
    pub notes: Vec<String>,
}

/// Symmetrized Gram matrix of `Y ↦ coefficient coord of ad_Y²(e_j)` in V1
/// coordinates.
pub(crate) fn star_form(g: &GradedLieAlgebra, j: usize, coord: usize) -> QForm {
    let d1 = g.v1_dim();
    let dim = g.dim();
    let ej = unit_vec(dim, j);
    // B[p][q] = coord-component of [e_p, [e_q, e_j]]
    let mut b = vec![vec_zero(d1); d1];
    for q in 0..d1 {
        let inner = g.bracket(&unit_vec(dim, q), &ej);
        for p in 0..d1 {
            let outer = g.bracket(&unit_vec(dim, p), &inner);
            b[p][q] = outer[coord].clone();
        }
    }
    // symmetrize
    let half = crate::rat::rat(1, 2);
    let m: Vec<Vec<Rat>> = (0..d1)
        .map(|p| (0..d1).map(|q| (&b[p][q] + &b[q][p]) * &half).collect())
        .collect();
    QForm::new(m).expect("symmetrized form")
}

/// Runs the radical chain to a fixpoint and classifies the answer.
pub fn check_type_star(g: &GradedLieAlgebra) -> StarReport {
    let d1 = g.v1_dim();
    let dim = g.dim();
    let forms: Vec<(usize, usize, QForm)> = (0..d1)
        .flat_map(|j| (0..dim).map(move |coord| (j, coord)))
        .map(|(j, coord)| (j, coord, star_form(g, j, coord)))
        .filter(|(_, _, q)| !q.is_zero())
        .collect();
    let mut u = Subspace::full(d1);
    let mut steps = Vec::new();
    loop {
        let mut changed = false;
        for (j, coord, q) in &forms {
            if u.is_zero() {
                break;
            }
            let restricted = q.restrict(u.basis()).expect("restriction");
            if restricted.is_zero() {
                continue;
            }
            if restricted.semidefinite_sign().is_some() {
                // zeros on U are exactly the radical; map back to V1 coords
                let rad = restricted.radical();
                let rows: Vec<Vec<Rat>> = rad
                    .basis()
                    .iter()
                    .map(|c| {
                        let mut v = vec_zero(d1);
                        for (k, coeff) in c.iter().enumerate() {
                            crate::linalg::vec_axpy(&mut v, coeff, &u.basis()[k]);
                        }
                        v
                    })
                    .collect();
                let after = Subspace::from_rows(d1, rows).expect("radical subspace");
                steps.push(StarStep {
                    j: *j,
                    coord: *coord,
                    before: u.clone(),
                    after: after.clone(),
                });
                u = after;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let residual: Vec<(usize, usize)> = forms
        .iter()
        .filter(|(_, _, q)| {
            let r = q.restrict(u.basis()).expect("restriction");
            !r.is_zero()
        })
        .map(|(j, c, _)| (*j, *c))
        .collect();
    let answer = if u.dim() < d1 {
        StarAnswer::No
    } else if residual.is_empty() {
        StarAnswer::Yes
    } else {
        StarAnswer::Unknown
    };
    let notes = match answer {
        StarAnswer::No => vec![format!(
            "star set lies in a {}-dimensional subspace of the {}-dimensional V1",
            u.dim(),
            d1
        )],
        StarAnswer::Unknown => vec![format!(
            "{} indefinite form(s) remain on V1",
            residual.len()
        )],
        StarAnswer::Yes => vec![],
    };
    StarReport {
        answer,
        steps,
        final_subspace: u,
        residual_indefinite: residual,
        notes,
    }
}

/// Independent replay of a star No-witness: each step's form must be
/// semidefinite and nonzero on `before`, `after` must be the radical there,
/// and the chain must start at V1 and end below full dimension.
pub fn verify_star_no_witness(g: &GradedLieAlgebra, report: &StarReport) -> bool {
    let d1 = g.v1_dim();
    let mut u = Subspace::full(d1);
    for step in &report.steps {
        if step.before != u {
            return false;
        }
        let q = star_form(g, step.j, step.coord);
        let restricted = match q.restrict(u.basis()) {
            Ok(r) => r,
            Err(_) => return false,
        };
        if restricted.is_zero() || restricted.semidefinite_sign().is_none() {
            return false;
        }
        let rad = restricted.radical();
        let rows: Vec<Vec<Rat>> = rad
            .basis()
            .iter()
            .map(|c| {
                let mut v = vec_zero(d1);
                for (k, coeff) in c.iter().enumerate() {
                    crate::linalg::vec_axpy(&mut v, coeff, &u.basis()[k]);
                }
                v
            })
            .collect();
        let after = match Subspace::from_rows(d1, rows) {
            Ok(s) => s,
            Err(_) => return false,
        };
        if after != step.after {
            return false;
        }
        u = after;
    }
    u == report.final_subspace && u.dim() < d1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::make_engel;

    #[test]
    fn step_two_is_star() {
        let g = crate::lie::heisenberg();
        let r = check_type_star(&g);
        assert_eq!(r.answer, StarAnswer::Yes);
    }

    #[test]
    fn engel_type_is_not_star() {
        // in En^n, ad_Y²(V1) = RZ for nonzero Y in the hyperplane
        let g = make_engel(2);
        let r = check_type_star(&g);
        assert_eq!(r.answer, StarAnswer::No);
        assert!(verify_star_no_witness(&g, &r));
    }

    #[test]
    fn star_form_is_quadratic_evaluation() {
        let g = make_engel(1);
        // ad_Y²(X) = Z for Y the hyperplane generator: form on Z-coordinate
        let q = star_form(&g, 0, 3);
        // q(aX + bY) should be b²
        let v = vec![crate::rat::int(3), crate::rat::int(5)];
        assert_eq!(q.eval(&v), crate::rat::int(25));
    }

    #[test]
    fn abelian_is_star() {
        let g = crate::lie::GradedLieAlgebra::abelian(3, vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        assert_eq!(check_type_star(&g).answer, StarAnswer::Yes);
    }
}
