//! Independent certificate checking.
//!
//! The checker replays every trace step, ideal, and basis with subspace and
//! bracket arithmetic only, and rejects any step whose quoted hypotheses
//! fail. It never calls the procedures that produced the certificate, except
//! that Engel recognition failures in empty-search certificates are
//! re-derived on the replayed quotient.

use super::decide::{boundary_maps_to_hyperplane, diamond_terms};
use super::diamond::verify_product_quotient;
use super::saturate::{RuleId, TraceStep};
use super::{Certificate, Decision, HalfSpace, SemigenError, Subject, Verdict};
use crate::engel::recognize_engel;
use crate::lie::GradedLieAlgebra;
use crate::linalg::{vec_is_zero, Subspace};
use crate::rat::Rat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("decision carries no certificate")]
    MissingCertificate,
    #[error("certificate kind does not match the subject or verdict")]
    KindMismatch,
    #[error("step {index} ({rule}): {reason}")]
    BadTraceStep {
        index: usize,
        rule: RuleId,
        reason: String,
    },
    #[error("replayed edge does not match the certificate")]
    EdgeMismatch,
    #[error("saturation conclusion fails: {0}")]
    BadConclusion(String),
    #[error("diamond basis invalid: {0}")]
    BadBasis(String),
    #[error("diamond term escapes the replayed edge")]
    DiamondTermEscapes,
    #[error("engel quotient certificate invalid: {0}")]
    BadEngelQuotient(String),
    #[error("empty-search certificate invalid: {0}")]
    BadEmptySearch(String),
    #[error("product-quotient certificate invalid: {0}")]
    BadProductQuotient(String),
    #[error("step-two certificate on an algebra of step {0}")]
    NotStepTwo(usize),
    #[error(transparent)]
    Semigen(#[from] SemigenError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

fn replay_trace(
    g: &GradedLieAlgebra,
    start: Subspace,
    trace: &[TraceStep],
) -> Result<Subspace, VerifyError> {
    let mut f = start;
    let v1 = g.layer_subspace(1);
    let bad = |index: usize, rule: RuleId, reason: &str| {
        Err(VerifyError::BadTraceStep {
            index,
            rule,
            reason: reason.to_string(),
        })
    };
    for (index, step) in trace.iter().enumerate() {
        match step.rule {
            RuleId::R1 => {
                let [a, b] = &step.inputs[..] else {
                    return bad(index, step.rule, "R1 needs two inputs");
                };
                if !f.member(a)? || !f.member(b)? {
                    return bad(index, step.rule, "inputs not in the current bound");
                }
                let v = g.bracket(a, b);
                if step.added != vec![v] {
                    return bad(index, step.rule, "added vector is not the bracket");
                }
            }
            RuleId::R2 => {
                let [y, x] = &step.inputs[..] else {
                    return bad(index, step.rule, "R2 needs inputs [y, x]");
                };
                if !f.member(y)? {
                    return bad(index, step.rule, "Y is not in the current bound");
                }
                // X must lie in V1 + F (each such vector or its negative is
                // in the wedge)
                let dom = v1.sum(&f)?;
                if !dom.member(x)? {
                    return bad(index, step.rule, "X is outside V1 + E");
                }
                let ad2 = g.bracket(y, &g.bracket(y, x));
                if !f.member(&ad2)? {
                    return bad(index, step.rule, "ad_Y² X is not in the current bound");
                }
                let v = g.bracket(x, y);
                if step.added != vec![v] {
                    return bad(index, step.rule, "added vector is not [X, Y]");
                }
            }
            RuleId::R3 => {
                let [x, y] = &step.inputs[..] else {
                    return bad(index, step.rule, "R3 needs inputs [x, y]");
                };
                if !v1.member(x)? || !v1.member(y)? {
                    return bad(index, step.rule, "inputs must be horizontal");
                }
                if !vec_is_zero(&g.bracket(x, &g.bracket(x, y)))
                    || !vec_is_zero(&g.bracket(y, &g.bracket(y, x)))
                {
                    return bad(index, step.rule, "second ad-powers do not vanish");
                }
                let v = g.bracket(x, y);
                if step.added != vec![v] {
                    return bad(index, step.rule, "added vector is not [X, Y]");
                }
            }
            RuleId::R4 => {
                let central = g
                    .center()
                    .by_layer
                    .get(1)
                    .cloned()
                    .unwrap_or_else(|| Subspace::zero(g.dim()));
                for v in &step.added {
                    if !central.member(v)? {
                        return bad(index, step.rule, "added vector is not in V2 ∩ Z(g)");
                    }
                }
            }
            RuleId::R5 => {
                if g.step() > 4 {
                    return bad(index, step.rule, "R5 requires step ≤ 4");
                }
                let v2 = g.layer_subspace(2);
                for gen in &step.inputs {
                    if !f.member(gen)? || !v2.member(gen)? {
                        return bad(index, step.rule, "generator is not in V2 ∩ E");
                    }
                }
                let ideal = g
                    .ideal_generated(&step.inputs)
                    .map_err(SemigenError::from)?;
                for v in &step.added {
                    if !ideal.subspace.member(v)? {
                        return bad(index, step.rule, "added vector is not in the ideal");
                    }
                }
            }
        }
        for v in &step.added {
            f = f.add_vector(v)?;
        }
    }
    Ok(f)
}

fn boundary_of(g: &GradedLieAlgebra, subject: &Subject) -> Result<Subspace, VerifyError> {
    match subject {
        Subject::HalfSpace(lam) => {
            let w = HalfSpace::new(lam.clone())?;
            Ok(w.boundary(g)?)
        }
        Subject::Algebra => Err(VerifyError::KindMismatch),
    }
}

/// Verifies the Engel pattern of an adapted basis on the quotient: the
/// claimed vectors must form a basis with `[Y_i, Y_j] = 0`, `T_i = [Y_i, X]`
/// spanning V2, `[X, T_i] = 0`, `[Y_i, T_j] = G_ij Z` with `Z` spanning V3,
/// and `G` symmetric definite.
fn verify_engel_pattern(
    q: &GradedLieAlgebra,
    n: usize,
    adapted: &[Vec<Rat>],
    gram: &[Vec<Rat>],
) -> Result<(), String> {
    if q.layer_dims() != [n + 1, n, 1] {
        return Err(format!(
            "quotient layers {:?} are not (n+1, n, 1)",
            q.layer_dims()
        ));
    }
    if adapted.len() != 2 * (n + 1) {
        return Err("adapted basis has the wrong size".into());
    }
    let span = Subspace::from_rows(q.dim(), adapted.to_vec()).map_err(|e| e.to_string())?;
    if span.dim() != q.dim() {
        return Err("adapted vectors are not a basis".into());
    }
    let x = &adapted[0];
    let ys = &adapted[1..=n];
    let ts = &adapted[n + 1..=2 * n];
    let z = &adapted[2 * n + 1];
    if !q.in_layer(x, 1) || !ys.iter().all(|y| q.in_layer(y, 1)) {
        return Err("X, Y_i must be horizontal".into());
    }
    if !q.in_layer(z, 3) || vec_is_zero(z) {
        return Err("Z must span V3".into());
    }
    for (i, yi) in ys.iter().enumerate() {
        for yj in ys.iter().skip(i + 1) {
            if !vec_is_zero(&q.bracket(yi, yj)) {
                return Err("the Y_i do not commute".into());
            }
        }
        if q.bracket(yi, x) != ts[i] {
            return Err(format!("T_{} is not [Y_{}, X]", i + 1, i + 1));
        }
        if !vec_is_zero(&q.bracket(x, &ts[i])) {
            return Err("[X, V2] does not vanish".into());
        }
    }
    let t_span = Subspace::from_rows(q.dim(), ts.to_vec()).map_err(|e| e.to_string())?;
    if t_span != q.layer_subspace(2) {
        return Err("the T_i do not span V2".into());
    }
    if gram.len() != n || gram.iter().any(|r| r.len() != n) {
        return Err("gram matrix has the wrong shape".into());
    }
    for i in 0..n {
        for j in 0..n {
            let v = q.bracket(&ys[i], &ts[j]);
            let mut expect = crate::linalg::vec_zero(q.dim());
            crate::linalg::vec_axpy(&mut expect, &gram[i][j], z);
            if v != expect {
                return Err(format!("[Y_{}, T_{}] != G_ij Z", i + 1, j + 1));
            }
        }
    }
    let q_form = crate::linalg::QForm::new(gram.to_vec()).map_err(|e| e.to_string())?;
    if !q_form.is_definite() {
        return Err("gram matrix is not definite".into());
    }
    Ok(())
}

/// Replays every trace step / ideal / basis in the decision's certificate
/// and confirms each membership with subspace and bracket arithmetic.
pub fn verify_certificate(g: &GradedLieAlgebra, decision: &Decision) -> Result<(), VerifyError> {
    let cert = decision
        .certificate
        .as_ref()
        .ok_or(VerifyError::MissingCertificate)?;
    match cert {
        Certificate::StepTwo => {
            if decision.verdict != Verdict::Semigenerated {
                return Err(VerifyError::KindMismatch);
            }
            if g.step() > 2 {
                return Err(VerifyError::NotStepTwo(g.step()));
            }
            Ok(())
        }
        Certificate::Saturation {
            trace,
            edge,
            conclusion,
        } => {
            if decision.verdict != Verdict::Semigenerated {
                return Err(VerifyError::KindMismatch);
            }
            let boundary = boundary_of(g, &decision.subject)?;
            let f = replay_trace(g, boundary, trace)?;
            if &f != edge {
                return Err(VerifyError::EdgeMismatch);
            }
            if g.step() > 4 {
                return Err(VerifyError::BadConclusion("step > 4".into()));
            }
            let target = match conclusion {
                super::SaturationConclusion::V3InEdge => g.layer_subspace(3),
                super::SaturationConclusion::V2InEdge => g.layer_subspace(2),
            };
            if !f.contains(&target)? {
                return Err(VerifyError::BadConclusion(
                    "claimed layer is not inside the replayed edge".into(),
                ));
            }
            Ok(())
        }
        Certificate::DiamondBasis { basis, trace, edge } => {
            if decision.verdict != Verdict::Semigenerated {
                return Err(VerifyError::KindMismatch);
            }
            let boundary = boundary_of(g, &decision.subject)?;
            let f = replay_trace(g, boundary, trace)?;
            if &f != edge {
                return Err(VerifyError::EdgeMismatch);
            }
            if basis.len() != g.v1_dim() || !basis.iter().all(|b| g.in_layer(b, 1)) {
                return Err(VerifyError::BadBasis("not a V1 family".into()));
            }
            let span = Subspace::from_rows(g.dim(), basis.clone())?;
            if span.dim() != g.v1_dim() {
                return Err(VerifyError::BadBasis("vectors are dependent".into()));
            }
            for term in diamond_terms(g, basis) {
                if !f.member(&term)? {
                    return Err(VerifyError::DiamondTermEscapes);
                }
            }
            Ok(())
        }
        Certificate::DiamondProductQuotient(data) => {
            if decision.verdict != Verdict::Semigenerated {
                return Err(VerifyError::KindMismatch);
            }
            verify_product_quotient(g, data).map_err(VerifyError::BadProductQuotient)
        }
        Certificate::EngelQuotient(cert) => {
            if decision.verdict != Verdict::NotSemigenerated {
                return Err(VerifyError::KindMismatch);
            }
            let ideal = g
                .hom_ideal(&cert.ideal)
                .map_err(|e| VerifyError::BadEngelQuotient(e.to_string()))?;
            let (q, _) = g.quotient(&ideal).map_err(SemigenError::from)?;
            verify_engel_pattern(&q, cert.n, &cert.adapted_basis, &cert.gram)
                .map_err(VerifyError::BadEngelQuotient)?;
            // the hyperplane must be the span of the claimed Y_i
            let ys = &cert.adapted_basis[1..=cert.n];
            let h = Subspace::from_rows(q.dim(), ys.to_vec())?;
            if h != cert.hyperplane {
                return Err(VerifyError::BadEngelQuotient(
                    "hyperplane is not the span of the Y_i".into(),
                ));
            }
            match &decision.subject {
                Subject::Algebra => Ok(()),
                Subject::HalfSpace(_) => {
                    let boundary = boundary_of(g, &decision.subject)?;
                    if boundary_maps_to_hyperplane(g, &boundary, cert)? {
                        Ok(())
                    } else {
                        Err(VerifyError::BadEngelQuotient(
                            "boundary does not map onto the abelian hyperplane".into(),
                        ))
                    }
                }
            }
        }
        Certificate::EngelSearchEmpty {
            reductions,
            rejection,
        } => {
            if decision.verdict != Verdict::Semigenerated || g.step() != 3 {
                return Err(VerifyError::KindMismatch);
            }
            // replay the forced chain of center reductions
            let mut q = g.clone();
            let mut total = Subspace::zero(g.dim());
            for (i, kernel) in reductions.iter().enumerate() {
                let c = q.center();
                let c12 = c.by_layer[0].sum(&c.by_layer[1])?;
                if c12.is_zero() {
                    return Err(VerifyError::BadEmptySearch(format!(
                        "reduction {i} recorded but center part of V1 ⊕ V2 is zero"
                    )));
                }
                let ideal = q.hom_ideal(&c12).map_err(SemigenError::from)?;
                let (q2, p2) = q.quotient(&ideal).map_err(SemigenError::from)?;
                // cumulative kernel in original coordinates
                let lifted = lift_kernel(g, &total, &p2)?;
                if &lifted != kernel {
                    return Err(VerifyError::BadEmptySearch(format!(
                        "reduction {i} kernel mismatch"
                    )));
                }
                total = lifted;
                q = q2;
            }
            let c = q.center();
            if !c.by_layer[0].is_zero() || !c.by_layer[1].is_zero() {
                return Err(VerifyError::BadEmptySearch(
                    "forced chain incomplete: center still meets V1 ⊕ V2".into(),
                ));
            }
            if q.step() < 3 {
                return Ok(()); // step dropped: no Engel-type quotients at all
            }
            if q.layer_dims()[2] != 1 {
                return Err(VerifyError::BadEmptySearch(format!(
                    "dim V3 = {} leaves free parameters; not a forced chain",
                    q.layer_dims()[2]
                )));
            }
            match recognize_engel(&q) {
                Err(_) => Ok(()),
                Ok(_) => Err(VerifyError::BadEmptySearch(format!(
                    "the forced quotient is Engel-type, contradicting: {rejection}"
                ))),
            }
        }
    }
}

/// Cumulative kernel in the original coordinates after composing a further
/// projection: `{v : p2(project_prev(v)) = 0}` where `project_prev` has
/// kernel `total`.
fn lift_kernel(
    g: &GradedLieAlgebra,
    total: &Subspace,
    p2: &crate::lie::Projection,
) -> Result<Subspace, VerifyError> {
    // Rebuild the canonical projection with kernel `total`, compose with p2,
    // and take the kernel.
    let prev = if total.is_zero() {
        crate::lie::Projection::identity(g.dim())
    } else {
        let ideal = g.hom_ideal(total).map_err(SemigenError::from)?;
        let (_, p) = g.quotient(&ideal).map_err(SemigenError::from)?;
        p
    };
    let composed = p2.compose(&prev);
    Ok(composed.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::make_engel;
    use crate::linalg::unit_vec;
    use crate::rat::int;
    use crate::semigen::{decide_halfspace, decide_semigenerated, DecideOptions};

    #[test]
    fn accepts_produced_certificates() {
        let g = make_engel(1);
        let opts = DecideOptions::default();
        for lam in [vec![int(1), int(0)], vec![int(0), int(1)]] {
            let d = decide_halfspace(&g, &HalfSpace::new(lam).unwrap(), &opts).unwrap();
            verify_certificate(&g, &d).unwrap();
        }
        let d = decide_semigenerated(&g, &opts).unwrap();
        verify_certificate(&g, &d).unwrap();
    }

    #[test]
    fn rejects_forged_r2_step() {
        let g = make_engel(1);
        let opts = DecideOptions::default();
        let w = HalfSpace::new(vec![int(0), int(1)]).unwrap();
        let mut d = decide_halfspace(&g, &w, &opts).unwrap();
        if let Some(Certificate::Saturation { trace, .. }) = d.certificate.as_mut() {
            // forge: claim ad_Y²X ∈ E for Y = Y1 (it is not)
            trace[0].inputs[0] = unit_vec(4, 1);
            trace[0].inputs[1] = unit_vec(4, 0);
        } else {
            panic!("expected saturation certificate");
        }
        assert!(verify_certificate(&g, &d).is_err());
    }

    #[test]
    fn rejects_non_ideal_quotient_cert() {
        let g = make_engel(1);
        let opts = DecideOptions::default();
        let w = HalfSpace::new(vec![int(1), int(0)]).unwrap();
        let mut d = decide_halfspace(&g, &w, &opts).unwrap();
        if let Some(Certificate::EngelQuotient(c)) = d.certificate.as_mut() {
            // span{Y} is not an ideal
            c.ideal = Subspace::span_of(4, &unit_vec(4, 1)).unwrap();
        } else {
            panic!("expected engel quotient certificate");
        }
        assert!(verify_certificate(&g, &d).is_err());
    }
}
