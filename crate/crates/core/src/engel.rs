//! Engel-type algebras: construction, recognition, automorphisms,
//! abnormality of horizontal lines, and the polynomial vector-field
//! realization with exact flows.
//!
//! The n-th Engel-type algebra is the 2(n+1)-dimensional step-3 algebra with
//! basis `X, Y_1..Y_n, T_1..T_n, Z` and nontrivial brackets `[Y_i, X] = T_i`,
//! `[Y_i, T_i] = Z`.

use crate::lie::{GradedLieAlgebra, LieError, SparseVec};
use crate::linalg::{
    nullspace, solve_system, unit_vec, vec_axpy, vec_is_zero, vec_zero, QForm, Subspace,
};
use crate::rat::{int, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngelError {
    #[error("matrix must be {0}×{0}")]
    BadMatrixShape(usize),
    #[error("scalars a, b must be nonzero")]
    ZeroScalar,
    #[error("matrix is singular")]
    Singular,
    #[error("direction must lie in V1")]
    NotHorizontal,
    #[error("abnormality criterion requires step ≤ 3, got {0}")]
    StepTooHigh(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Builds the n-th Engel-type algebra with layers `(n+1, n, 1)` and the
/// basis order `X, Y_1..Y_n, T_1..T_n, Z`.
pub fn make_engel(n: usize) -> GradedLieAlgebra {
    assert!(n >= 1, "Engel-type algebras need n >= 1");
    let dim = 2 * (n + 1);
    let mut names = vec!["X".to_string()];
    names.extend((1..=n).map(|i| format!("Y{i}")));
    names.extend((1..=n).map(|i| format!("T{i}")));
    names.push("Z".to_string());
    let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for i in 1..=n {
        // [X, Y_i] = -T_i  (stored on the ordered pair (0, i))
        table.insert((0, i), vec![(n + i, int(-1))]);
        // [Y_i, T_i] = Z
        table.insert((i, n + i), vec![(dim - 1, int(1))]);
    }
    GradedLieAlgebra::new(vec![n + 1, n, 1], names, table).expect("Engel-type table is valid")
}

/// Adapted data found by the recognizer: an Engel-type structure on an
/// abstract algebra.
#[derive(Clone, Debug)]
pub struct EngelStructure {
    pub n: usize,
    /// The unique horizontal line commuting with V2.
    pub x_line: Subspace,
    /// The abelian complement hyperplane in V1.
    pub abelian_hyperplane: Subspace,
    /// `X, Y_1..Y_n, T_1..T_n, Z` as ambient vectors.
    pub adapted_basis: Vec<Vec<Rat>>,
    /// `G_ij` = coefficient of `[Y_i, [Y_j, X]]` on the V3 generator;
    /// symmetric and definite.
    pub gram: Vec<Vec<Rat>>,
}

/// Why recognition failed; absence of an Engel structure is a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecognizeFailure {
    NotStratified,
    WrongStep(usize),
    WrongLayerDims(Vec<usize>),
    XLineDim(usize),
    AdXKernelDim(usize),
    AdXImageDim(usize),
    NoAbelianComplement,
    AmbiguousComplement,
    GramNotDefinite { pos: usize, neg: usize, zero: usize },
    BracketMismatch(String),
}

impl std::fmt::Display for RecognizeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecognizeFailure::NotStratified => write!(f, "algebra is not stratified"),
            RecognizeFailure::WrongStep(s) => write!(f, "step {s} != 3"),
            RecognizeFailure::WrongLayerDims(d) => {
                write!(f, "layer dims {d:?} are not (n+1, n, 1)")
            }
            RecognizeFailure::XLineDim(d) => {
                write!(f, "the space {{v in V1 : [v, V2] = 0}} has dim {d} != 1")
            }
            RecognizeFailure::AdXKernelDim(d) => {
                write!(f, "kernel of ad_X on V1 has dim {d} != 1")
            }
            RecognizeFailure::AdXImageDim(d) => write!(f, "ad_X(V1) has dim {d} < dim V2"),
            RecognizeFailure::NoAbelianComplement => {
                write!(f, "no shift makes the complement of the X-line abelian")
            }
            RecognizeFailure::AmbiguousComplement => {
                write!(f, "abelian complement shifts are not unique")
            }
            RecognizeFailure::GramNotDefinite { pos, neg, zero } => {
                write!(
                    f,
                    "gram matrix has signature ({pos},{neg},{zero}), not definite"
                )
            }
            RecognizeFailure::BracketMismatch(s) => write!(f, "bracket mismatch: {s}"),
        }
    }
}

/// Decides whether `g` is isomorphic to an Engel-type algebra, and if so
/// returns the adapted structure.
///
/// Steps: (1) layer dims must be `(n+1, n, 1)` in step 3; (2) the line
/// `{v in V1 : [v, V2] = 0}` must be one-dimensional, spanned by `X`;
/// (3) `ad_X : V1 -> V2` must have kernel exactly the X-line and full image;
/// (4) the complement of the X-line admits unique shifts making it abelian;
/// (5) the resulting Gram matrix must be symmetric and definite (either
/// sign; a graded automorphism absorbs a global sign).
pub fn recognize_engel(g: &GradedLieAlgebra) -> Result<EngelStructure, RecognizeFailure> {
    if !g.is_stratified() {
        return Err(RecognizeFailure::NotStratified);
    }
    if g.step() != 3 {
        return Err(RecognizeFailure::WrongStep(g.step()));
    }
    let dims = g.layer_dims();
    let (d1, d2, d3) = (dims[0], dims[1], dims[2]);
    if d3 != 1 || d1 != d2 + 1 || d2 < 1 {
        return Err(RecognizeFailure::WrongLayerDims(dims.to_vec()));
    }
    let n = d2;
    let dim = g.dim();
    let v1: Vec<usize> = g.layer_range(1).collect();
    let v2: Vec<usize> = g.layer_range(2).collect();
    let z_idx = g.layer_range(3).start;

    // (2) X-line: {v in V1 : [v, e_w] = 0 for all w in V2}
    let mut rows = Vec::new();
    for &w in &v2 {
        for c in 0..dim {
            let row: Vec<Rat> = v1
                .iter()
                .map(|&i| g.basis_bracket(i, w)[c].clone())
                .collect();
            if !vec_is_zero(&row) {
                rows.push(row);
            }
        }
    }
    let x_kernel = nullspace(&rows, d1);
    if x_kernel.len() != 1 {
        return Err(RecognizeFailure::XLineDim(x_kernel.len()));
    }
    let x_v1 = x_kernel[0].clone();
    let x_full = g.embed_v1(&x_v1);
    let x_line = Subspace::span_of(dim, &x_full).expect("x line");

    // (3) ad_X on V1: kernel exactly the X-line, image all of V2
    let ad_x_cols: Vec<Vec<Rat>> = v1
        .iter()
        .map(|&i| g.bracket(&x_full, &unit_vec(dim, i)))
        .collect();
    let constraint_rows: Vec<Vec<Rat>> = (0..dim)
        .map(|c| ad_x_cols.iter().map(|col| col[c].clone()).collect())
        .collect();
    let kernel = nullspace(&constraint_rows, d1);
    if kernel.len() != 1 {
        return Err(RecognizeFailure::AdXKernelDim(kernel.len()));
    }
    let image = Subspace::from_rows(dim, ad_x_cols).expect("ad_X image");
    if image.dim() != d2 {
        return Err(RecognizeFailure::AdXImageDim(image.dim()));
    }

    // (4) abelian complement: Y_i = e_{c_i} + a_i X for the non-pivot
    // coordinates c_i of the X-line
    let x_pivot = x_line.pivots()[0];
    let complement: Vec<usize> = v1.iter().copied().filter(|&i| i != x_pivot).collect();
    debug_assert_eq!(complement.len(), n);
    let shifts = if n == 1 {
        // the "hyperplane" is a line; any complement direction works
        vec![Rat::zero()]
    } else {
        // [e_ci + a_i X, e_cj + a_j X] = 0: linear in (a_1..a_n)
        let mut sys_rows: Vec<Vec<Rat>> = Vec::new();
        let mut rhs: Vec<Rat> = Vec::new();
        for p in 0..n {
            let ep = unit_vec(dim, complement[p]);
            let bxp = g.bracket(&x_full, &ep);
            for q in p + 1..n {
                let eq_ = unit_vec(dim, complement[q]);
                let bpq = g.bracket(&ep, &eq_);
                let bxq = g.bracket(&x_full, &eq_);
                // bpq + a_q [e_p, X] + a_p [X, e_q] = 0
                for c in 0..dim {
                    let mut row = vec_zero(n);
                    row[q] = -bxp[c].clone();
                    row[p] = bxq[c].clone();
                    if vec_is_zero(&row) && bpq[c].is_zero() {
                        continue;
                    }
                    sys_rows.push(row);
                    rhs.push(-bpq[c].clone());
                }
            }
        }
        let sol = solve_system(&sys_rows, &rhs, n).ok_or(RecognizeFailure::NoAbelianComplement)?;
        if !sol.kernel.is_empty() {
            return Err(RecognizeFailure::AmbiguousComplement);
        }
        sol.particular
    };
    let ys: Vec<Vec<Rat>> = complement
        .iter()
        .zip(&shifts)
        .map(|(&c, a)| {
            let mut y = unit_vec(dim, c);
            vec_axpy(&mut y, a, &x_full);
            y
        })
        .collect();
    let hyperplane = Subspace::from_rows(dim, ys.clone()).expect("abelian hyperplane");

    // (5) gram matrix on the V3 generator
    let ts: Vec<Vec<Rat>> = ys.iter().map(|y| g.bracket(y, &x_full)).collect();
    let t_span = Subspace::from_rows(dim, ts.clone()).expect("T span");
    if t_span.dim() != n {
        return Err(RecognizeFailure::BracketMismatch(
            "[Y_i, X] do not form a basis of V2".into(),
        ));
    }
    let mut gram = vec![vec_zero(n); n];
    for i in 0..n {
        for j in 0..n {
            let v = g.bracket(&ys[i], &ts[j]);
            for (c, val) in v.iter().enumerate() {
                if !val.is_zero() && c != z_idx {
                    return Err(RecognizeFailure::BracketMismatch(format!(
                        "[Y_{}, [Y_{}, X]] has a component outside V3",
                        i + 1,
                        j + 1
                    )));
                }
            }
            gram[i][j] = v[z_idx].clone();
        }
    }
    let q = match QForm::new(gram.clone()) {
        Ok(q) => q,
        Err(_) => {
            return Err(RecognizeFailure::BracketMismatch(
                "gram matrix is not symmetric".into(),
            ))
        }
    };
    let (pos, neg, zero) = q.signature();
    if zero != 0 || (pos != 0 && neg != 0) {
        return Err(RecognizeFailure::GramNotDefinite { pos, neg, zero });
    }
    if n == 1 && gram[0][0].is_zero() {
        return Err(RecognizeFailure::GramNotDefinite {
            pos: 0,
            neg: 0,
            zero: 1,
        });
    }

    // final sanity: [Y_i, Y_j] = 0 and [X, T_i] = 0
    for i in 0..n {
        for j in i + 1..n {
            if !vec_is_zero(&g.bracket(&ys[i], &ys[j])) {
                return Err(RecognizeFailure::BracketMismatch(
                    "complement is not abelian".into(),
                ));
            }
        }
        if !vec_is_zero(&g.bracket(&x_full, &ts[i])) {
            return Err(RecognizeFailure::BracketMismatch("[X, V2] != 0".into()));
        }
    }

    let mut adapted = vec![x_full];
    adapted.extend(ys);
    adapted.extend(ts);
    adapted.push(unit_vec(dim, z_idx));
    Ok(EngelStructure {
        n,
        x_line,
        abelian_hyperplane: hyperplane,
        adapted_basis: adapted,
        gram,
    })
}

/// Checks whether the V1 map `X ↦ aX, Y ↦ b·A·Y` extends to a Lie algebra
/// automorphism of the n-th Engel-type algebra. The extension to V2 and V3
/// is computed from brackets and checked against the whole table.
pub fn verify_automorphism(
    n: usize,
    a: &Rat,
    b: &Rat,
    matrix: &[Vec<Rat>],
) -> Result<bool, EngelError> {
    if a.is_zero() || b.is_zero() {
        return Err(EngelError::ZeroScalar);
    }
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(EngelError::BadMatrixShape(n));
    }
    let g = make_engel(n);
    let dim = g.dim();
    // invertibility
    let span = Subspace::from_rows(n, matrix.to_vec()).map_err(LieError::from)?;
    if span.dim() != n {
        return Err(EngelError::Singular);
    }
    // images on V1
    let mut phi: Vec<Vec<Rat>> = vec![vec_zero(dim); dim];
    phi[0] = {
        let mut v = vec_zero(dim);
        v[0] = a.clone();
        v
    };
    for i in 1..=n {
        let mut v = vec_zero(dim);
        for j in 1..=n {
            // Y_i ↦ b * sum_j A_ji Y_j  (columns of A give the images)
            v[j] = b * &matrix[j - 1][i - 1];
        }
        phi[i] = v;
    }
    // extend: T_i = [Y_i, X], Z = [Y_1, T_1] / gram — use the defining
    // brackets to push forward
    for i in 1..=n {
        phi[n + i] = g.bracket(&phi[i], &phi[0]);
    }
    let z_img = g.bracket(&phi[1], &phi[n + 1]);
    if vec_is_zero(&z_img) {
        return Ok(false);
    }
    phi[dim - 1] = z_img;
    // the images must form a basis
    let full = Subspace::from_rows(dim, phi.clone()).map_err(LieError::from)?;
    if full.dim() != dim {
        return Ok(false);
    }
    // check all brackets
    for i in 0..dim {
        for j in i + 1..dim {
            let lhs = g.bracket(&phi[i], &phi[j]);
            // phi([e_i, e_j]) by linearity
            let be = g.basis_bracket(i, j);
            let mut rhs = vec_zero(dim);
            for (k, c) in be.iter().enumerate() {
                if !c.is_zero() {
                    vec_axpy(&mut rhs, c, &phi[k]);
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Non-abnormality of the horizontal line through `nu` (step ≤ 3 criterion):
/// both `ad_nu(V1) = V2` and `ad_nu^2(V1) = V3` must hold exactly.
pub fn is_nonabnormal(g: &GradedLieAlgebra, nu: &[Rat]) -> Result<bool, EngelError> {
    g.require_stratified()?;
    if g.step() > 3 {
        return Err(EngelError::StepTooHigh(g.step()));
    }
    if nu.len() != g.dim() {
        return Err(LieError::BadVector {
            expected: g.dim(),
            got: nu.len(),
        }
        .into());
    }
    if !g.in_layer(nu, 1) || vec_is_zero(nu) {
        return Err(EngelError::NotHorizontal);
    }
    let dim = g.dim();
    let v1: Vec<usize> = g.layer_range(1).collect();
    let first: Vec<Vec<Rat>> = v1
        .iter()
        .map(|&i| g.bracket(nu, &unit_vec(dim, i)))
        .collect();
    let image1 = Subspace::from_rows(dim, first.clone()).map_err(LieError::from)?;
    if image1 != g.layer_subspace(2) {
        return Ok(false);
    }
    if g.step() >= 3 {
        let second: Vec<Vec<Rat>> = first.iter().map(|w| g.bracket(nu, w)).collect();
        let image2 = Subspace::from_rows(dim, second).map_err(LieError::from)?;
        if image2 != g.layer_subspace(3) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Coordinate realization and exact flows
// ---------------------------------------------------------------------------
//
// On Q^{2(n+1)} with coordinates (x_1..x_n, x_{n+1}, x_{n+2}..x_{2n+1}, x_{2n+2}):
//   Y_i = ∂_i
//   X   = ∂_{n+1} + Σ_i x_i ∂_{n+1+i} + Σ_i (x_i²/2) ∂_{2(n+1)}
//   T_i = ∂_{n+1+i} + x_i ∂_{2(n+1)}
//   Z   = ∂_{2(n+1)}
//
// The flow of any fixed algebra element is polynomial in time because the
// coordinate dependence is triangular, so each segment integrates in closed
// form.

/// One flow segment: from `start`, follow the realized field of the algebra
/// element `direction` (coefficients in the basis order `X, Y_i, T_i, Z` of
/// `make_engel(n)`) for `time`. Exact.
pub fn flow_segment(n: usize, start: &[Rat], direction: &[Rat], time: &Rat) -> Vec<Rat> {
    let dim = 2 * (n + 1);
    assert_eq!(start.len(), dim);
    assert_eq!(direction.len(), dim);
    let a = &direction[0]; // X coefficient
    let b: Vec<&Rat> = (1..=n).map(|i| &direction[i]).collect(); // Y_i
    let c: Vec<&Rat> = (1..=n).map(|i| &direction[n + i]).collect(); // T_i
    let d = &direction[dim - 1]; // Z
    let t = time;
    let t2 = t * t;
    let t3 = &t2 * t;
    let half = crate::rat::rat(1, 2);
    let third = crate::rat::rat(1, 3);

    let mut out = start.to_vec();
    // y_i' = b_i
    for i in 0..n {
        out[i] = &start[i] + b[i] * t;
    }
    // x' = a
    out[n] = &start[n] + a * t;
    // t_i' = a y_i + c_i with y_i(t) = y_i0 + b_i t
    for i in 0..n {
        out[n + 1 + i] =
            &start[n + 1 + i] + &((a * &start[i] + c[i]) * t) + &(a * b[i] * &t2 * &half);
    }
    // z' = a Σ y_i²/2 + Σ c_i y_i + d
    let mut z = start[dim - 1].clone() + d * t;
    for i in 0..n {
        let y0 = &start[i];
        // ∫ (y0 + b s)² ds = y0² t + y0 b t² + b² t³/3
        let int_sq = y0 * y0 * t + &(y0 * b[i] * &t2) + &(b[i] * b[i] * &t3 * &third);
        z += a * &half * &int_sq;
        // ∫ (y0 + b s) ds = y0 t + b t²/2
        z += c[i] * &(y0 * t + &(b[i] * &t2 * &half));
    }
    out[dim - 1] = z;
    out
}

/// Composes flow segments starting from the origin; returns the endpoint in
/// realization coordinates. This is the group product of the segment
/// exponentials read in the chart of the realization.
pub fn flow_word(n: usize, word: &[(Vec<Rat>, Rat)]) -> Vec<Rat> {
    let mut p = vec_zero(2 * (n + 1));
    for (dir, t) in word {
        p = flow_segment(n, &p, dir, t);
    }
    p
}

/// Chart coordinates of `exp(v)`: unit-time flow from the origin.
pub fn chart_of_exp(n: usize, v: &[Rat]) -> Vec<Rat> {
    flow_segment(n, &vec_zero(2 * (n + 1)), v, &int(1))
}

/// The realized vector fields as symbolic polynomial fields, for
/// cross-checking the commutator relations. Component `c` of field `f` is a
/// polynomial in the coordinates.
pub fn realized_fields(n: usize) -> Vec<Vec<crate::poly::MultiPoly>> {
    use crate::poly::MultiPoly;
    let dim = 2 * (n + 1);
    let mut fields = Vec::with_capacity(dim);
    // order matches make_engel: X, Y_1..Y_n, T_1..T_n, Z
    let mut x_field = vec![MultiPoly::zero(dim); dim];
    x_field[n] = MultiPoly::constant(dim, int(1));
    for i in 0..n {
        x_field[n + 1 + i] = MultiPoly::var(dim, i);
        let sq = MultiPoly::var(dim, i).mul(&MultiPoly::var(dim, i));
        x_field[dim - 1] = x_field[dim - 1].add(&sq.scale(&crate::rat::rat(1, 2)));
    }
    fields.push(x_field);
    for i in 0..n {
        let mut f = vec![MultiPoly::zero(dim); dim];
        f[i] = MultiPoly::constant(dim, int(1));
        fields.push(f);
    }
    for i in 0..n {
        let mut f = vec![MultiPoly::zero(dim); dim];
        f[n + 1 + i] = MultiPoly::constant(dim, int(1));
        f[dim - 1] = MultiPoly::var(dim, i);
        fields.push(f);
    }
    let mut z_field = vec![MultiPoly::zero(dim); dim];
    z_field[dim - 1] = MultiPoly::constant(dim, int(1));
    fields.push(z_field);
    fields
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vf_bracket;
    use crate::rat::rat;

    #[test]
    fn make_engel_dimensions() {
        assert_eq!(make_engel(1).dim(), 4);
        assert_eq!(make_engel(2).layer_dims(), &[3, 2, 1]);
        assert_eq!(make_engel(3).dim(), 8);
    }

    #[test]
    fn recognize_engel_identity() {
        for n in 1..=5 {
            let g = make_engel(n);
            let s = recognize_engel(&g).unwrap();
            assert_eq!(s.n, n);
            // gram = identity
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { int(1) } else { int(0) };
                    assert_eq!(s.gram[i][j], expect, "gram[{i}][{j}] for n={n}");
                }
            }
            assert!(s.x_line.member(&unit_vec(g.dim(), 0)).unwrap());
        }
    }

    #[test]
    fn recognize_rejects_free23_by_layer_dims() {
        let f = crate::hall::free_nilpotent(2, 3);
        let err = recognize_engel(&f.algebra).unwrap_err();
        assert!(matches!(err, RecognizeFailure::WrongLayerDims(_)));
    }

    /// The same bracket pattern as En^n but with a prescribed diagonal Gram
    /// matrix: `[Y_i, T_i] = g_i Z`.
    fn engel_with_gram(signs: &[i64]) -> GradedLieAlgebra {
        let n = signs.len();
        let dim = 2 * (n + 1);
        let mut names = vec!["X".to_string()];
        names.extend((1..=n).map(|i| format!("Y{i}")));
        names.extend((1..=n).map(|i| format!("T{i}")));
        names.push("Z".to_string());
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (i, &s) in (1..=n).zip(signs) {
            table.insert((0, i), vec![(n + i, int(-1))]);
            table.insert((i, n + i), vec![(dim - 1, int(s))]);
        }
        GradedLieAlgebra::new(vec![n + 1, n, 1], names, table).unwrap()
    }

    #[test]
    fn recognizer_rejects_indefinite_gram() {
        // the pseudo-Engel algebra signs (+, -) passes every linear step but
        // is not isomorphic to En^2 over the reals
        let g = engel_with_gram(&[1, -1]);
        match recognize_engel(&g) {
            Err(RecognizeFailure::GramNotDefinite { pos: 1, neg: 1, zero: 0 }) => {}
            other => panic!("expected indefinite-gram rejection, got {other:?}"),
        }
        // the negative-definite variant is accepted (a sign is absorbed by
        // a graded automorphism)
        let g = engel_with_gram(&[-1, -1]);
        let s = recognize_engel(&g).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.gram[0][0], int(-1));
    }

    #[test]
    fn pseudo_engel_is_semigenerated() {
        // trimmed, step 3, no Engel-type quotient: the decision pipeline must
        // conclude semigenerated by exhaustive empty search
        use crate::semigen::{decide_semigenerated, DecideOptions, Verdict};
        let g = engel_with_gram(&[1, -1]);
        assert!(g.is_trimmed().0);
        let d = decide_semigenerated(&g, &DecideOptions::default()).unwrap();
        assert_eq!(d.verdict, Verdict::Semigenerated);
        crate::semigen::verify_certificate(&g, &d).unwrap();
    }

    #[test]
    fn automorphisms() {
        let id = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        assert!(verify_automorphism(2, &int(1), &int(1), &id).unwrap());
        assert!(verify_automorphism(2, &int(1), &int(-1), &id).unwrap());
        assert!(verify_automorphism(2, &int(3), &rat(1, 2), &id).unwrap());
        let stretch = vec![vec![int(2), int(0)], vec![int(0), int(1)]];
        assert!(!verify_automorphism(2, &int(1), &int(1), &stretch).unwrap());
        // rational rotation (3/5, 4/5) is orthogonal
        let rot = vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]];
        assert!(verify_automorphism(2, &int(1), &int(1), &rot).unwrap());
        // a reflection (determinant -1) is orthogonal too
        let swap = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert!(verify_automorphism(2, &int(1), &int(1), &swap).unwrap());
        assert!(verify_automorphism(2, &int(0), &int(1), &id).is_err());
        let singular = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(matches!(
            verify_automorphism(2, &int(1), &int(1), &singular),
            Err(EngelError::Singular)
        ));
    }

    #[test]
    fn abnormality_in_engel2() {
        let g = make_engel(2);
        let dim = g.dim();
        let x = unit_vec(dim, 0);
        let y1 = unit_vec(dim, 1);
        let xy = crate::linalg::vec_add(&x, &y1);
        assert!(!is_nonabnormal(&g, &y1).unwrap());
        assert!(!is_nonabnormal(&g, &x).unwrap());
        assert!(is_nonabnormal(&g, &xy).unwrap());
    }

    #[test]
    fn abnormality_in_heisenberg() {
        let g = crate::lie::heisenberg();
        for v in [
            unit_vec(3, 0),
            unit_vec(3, 1),
            crate::linalg::vec_add(&unit_vec(3, 0), &unit_vec(3, 1)),
        ] {
            assert!(is_nonabnormal(&g, &v).unwrap());
        }
    }

    #[test]
    fn flows_from_origin() {
        // along X for time t: t e_{n+1}, everything else 0
        for n in 1..=3 {
            let dim = 2 * (n + 1);
            let mut x = vec_zero(dim);
            x[0] = int(1);
            let p = flow_word(n, &[(x, rat(7, 3))]);
            for (c, v) in p.iter().enumerate() {
                if c == n {
                    assert_eq!(*v, rat(7, 3));
                } else {
                    assert!(v.is_zero());
                }
            }
            // along Y_1 for time s: s e_1
            let mut y = vec_zero(dim);
            y[1] = int(1);
            let p = flow_word(n, &[(y, int(4))]);
            assert_eq!(p[0], int(4));
            assert!(p[1..].iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn engel_type_cannot_be_prolonged() {
        // for n ≥ 2, no step-4 extension of the En^n table is a Lie algebra:
        // Jacobi forces [X, Z] = 0 and [Y_j, Z] = 0
        for n in 2..=3 {
            let base = make_engel(n);
            let dim = base.dim() + 1; // one candidate V4 generator W
            for nu in 0..=n {
                let mut table = BTreeMap::new();
                for i in 0..base.dim() {
                    for j in i + 1..base.dim() {
                        let v = base.basis_bracket(i, j);
                        let entry: SparseVec = v
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(k, c)| (k, c.clone()))
                            .collect();
                        if !entry.is_empty() {
                            table.insert((i, j), entry);
                        }
                    }
                }
                // [nu, Z] = W for nu ∈ {X, Y_1, .., Y_n}
                table.insert((nu, base.dim() - 1), vec![(dim - 1, int(1))]);
                let mut names: Vec<String> = base.basis_names().iter().cloned().collect();
                names.push("W".into());
                let result = GradedLieAlgebra::new(vec![n + 1, n, 1, 1], names, table);
                assert!(
                    matches!(result, Err(LieError::JacobiViolation(_, _, _, _))),
                    "a prolongation along basis direction {nu} slipped past Jacobi for n={n}"
                );
            }
        }
    }

    #[test]
    fn realized_fields_reproduce_structure_constants() {
        for n in 1..=3 {
            let g = make_engel(n);
            let dim = g.dim();
            let fields = realized_fields(n);
            for i in 0..dim {
                for j in i + 1..dim {
                    let vf = vf_bracket(&fields[i], &fields[j]);
                    let sc = g.basis_bracket(i, j);
                    // expected field: sum_k sc[k] * fields[k]
                    let mut expect = vec![crate::poly::MultiPoly::zero(dim); dim];
                    for (k, c) in sc.iter().enumerate() {
                        if !c.is_zero() {
                            for comp in 0..dim {
                                expect[comp] = expect[comp].add(&fields[k][comp].scale(c));
                            }
                        }
                    }
                    assert_eq!(vf, expect, "bracket of fields {i},{j} for n={n}");
                }
            }
        }
    }
}
