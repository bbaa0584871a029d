//! Exact rational linear algebra: canonical subspaces, membership, quotient
//! coordinates, and quadratic-form signatures.
//!
//! The single canonical form for a subspace is the reduced row echelon form
//! (RREF) of any spanning set; two subspaces are equal iff their stored bases
//! are identical. This makes subspaces hashable and certificates byte-stable.

use crate::rat::Rat;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("complement and ideal do not span the ambient space")]
    NonSpanning,
}

// ---------------------------------------------------------------------------
// Dense rational vectors
// ---------------------------------------------------------------------------

pub fn vec_zero(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn vec_is_zero(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], c: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v += c * w`, in place.
pub fn vec_axpy(v: &mut [Rat], c: &Rat, w: &[Rat]) {
    for (x, y) in v.iter_mut().zip(w) {
        *x += c * y;
    }
}

/// Standard basis vector `e_i`.
pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec_zero(n);
    v[i] = Rat::from_integer(1.into());
    v
}

/// Matrix-vector product where the matrix is given by rows.
pub fn mat_vec(rows: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    rows.iter().map(|r| dot(r, v)).collect()
}

// ---------------------------------------------------------------------------
// RREF and nullspace
// ---------------------------------------------------------------------------

/// Reduces `rows` to fully reduced row echelon form in place.
/// Returns the pivot column of each surviving row; zero rows are removed.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = {
            let lead = rows[rank][col].clone();
            lead.recip()
        };
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let c = -row[col].clone();
                vec_axpy(row, &c, &pivot);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Canonical basis of `{x : rows · x = 0}`, the joint kernel of the given
/// linear functionals. Free variables are enumerated in column order, giving
/// a deterministic (RREF-canonical) kernel basis.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.iter().filter(|r| !vec_is_zero(r)).cloned().collect();
    for r in &m {
        assert_eq!(r.len(), ncols, "nullspace: ragged constraint row");
    }
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec_zero(ncols);
        v[free] = Rat::from_integer(1.into());
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Particular solution plus kernel of the affine system `rows·x = rhs`.
/// Returns `None` when inconsistent. The particular solution sets all free
/// variables to zero.
pub struct LinSolve {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

pub fn solve_system(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<LinSolve> {
    assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None; // pivot in the rhs column
    }
    let mut particular = vec_zero(ncols);
    for (row, &p) in aug.iter().zip(&pivots) {
        particular[p] = row[ncols].clone();
    }
    let constraint_rows: Vec<Vec<Rat>> = aug.iter().map(|r| r[..ncols].to_vec()).collect();
    let kernel = nullspace(&constraint_rows, ncols);
    Some(LinSolve { particular, kernel })
}

// ---------------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------------

/// A linear subspace of `Q^n` in canonical RREF form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rat>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{})", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_rows(
            ambient,
            (0..ambient).map(|i| unit_vec(ambient, i)).collect(),
        )
        .expect("full space")
    }

    /// Canonicalizes the row span of the given vectors. Idempotent and
    /// independent of row order.
    pub fn from_rows(ambient: usize, rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        for r in &rows {
            if r.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    got: r.len(),
                });
            }
        }
        let mut rows = rows;
        rref(&mut rows);
        Ok(Subspace { ambient, rows })
    }

    pub fn span_of(ambient: usize, v: &[Rat]) -> Result<Self, LinalgError> {
        Subspace::from_rows(ambient, vec![v.to_vec()])
    }

    /// The coordinate subspace spanned by `e_start .. e_{start+len-1}`.
    pub fn coordinate_block(ambient: usize, start: usize, len: usize) -> Self {
        Subspace::from_rows(
            ambient,
            (start..start + len).map(|i| unit_vec(ambient, i)).collect(),
        )
        .expect("coordinate block")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .position(|x| !x.is_zero())
                    .expect("nonzero RREF row")
            })
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Residual of `v` after eliminating along the basis.
    /// Zero iff `v` is a member; `v - reduce(v)` always lies in the subspace.
    pub fn reduce(&self, v: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        let mut r = v.to_vec();
        for (row, p) in self.rows.iter().zip(self.pivots()) {
            if !r[p].is_zero() {
                let c = -r[p].clone();
                vec_axpy(&mut r, &c, row);
            }
        }
        Ok(r)
    }

    pub fn member(&self, v: &[Rat]) -> Result<bool, LinalgError> {
        Ok(vec_is_zero(&self.reduce(v)?))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        for r in &other.rows {
            if !self.member(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::from_rows(self.ambient, rows)
    }

    pub fn add_vector(&self, v: &[Rat]) -> Result<Subspace, LinalgError> {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Subspace::from_rows(self.ambient, rows)
    }

    /// Exact intersection via the Zassenhaus block construction.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let mut block: Vec<Vec<Rat>> = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(r.iter().cloned());
            block.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.extend(vec_zero(n));
            block.push(row);
        }
        rref(&mut block);
        let rows = block
            .into_iter()
            .filter(|row| vec_is_zero(&row[..n]))
            .map(|row| row[n..].to_vec())
            .collect();
        Subspace::from_rows(n, rows)
    }

    /// Canonical basis of the annihilator `{f : f(v) = 0 for all v here}`.
    pub fn annihilator(&self) -> Vec<Vec<Rat>> {
        nullspace(&self.rows, self.ambient)
    }
}

/// Coordinates of `v` modulo `ideal` in the given complement basis.
///
/// Requires `complement ∪ ideal basis` to span the ambient space; the result
/// `c` satisfies `v - Σ c_i · complement_i ∈ ideal`.
pub fn quotient_coords(
    v: &[Rat],
    ideal: &Subspace,
    complement: &[Vec<Rat>],
) -> Result<Vec<Rat>, LinalgError> {
    let n = ideal.ambient_dim();
    if v.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    for b in complement {
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
    }
    let k = complement.len();
    if k + ideal.dim() < n {
        return Err(LinalgError::NonSpanning);
    }
    // Solve v = Σ c_i complement_i + Σ d_j ideal_j : unknowns (c, d).
    let unknowns = k + ideal.dim();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|coord| {
            let mut row = Vec::with_capacity(unknowns);
            for b in complement {
                row.push(b[coord].clone());
            }
            for b in ideal.basis() {
                row.push(b[coord].clone());
            }
            row
        })
        .collect();
    let sol = solve_system(&rows, v, unknowns).ok_or(LinalgError::NonSpanning)?;
    Ok(sol.particular[..k].to_vec())
}

// ---------------------------------------------------------------------------
// Quadratic forms
// ---------------------------------------------------------------------------

/// A quadratic form given by a symmetric rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QForm {
    dim: usize,
    matrix: Vec<Vec<Rat>>,
}

impl QForm {
    pub fn new(matrix: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let dim = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(LinalgError::NotSymmetric(i, j));
                }
            }
        }
        Ok(QForm { dim, matrix })
    }

    pub fn zero(dim: usize) -> Self {
        QForm {
            dim,
            matrix: vec![vec_zero(dim); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| vec_is_zero(r))
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.dim);
        dot(&mat_vec(&self.matrix, v), v)
    }

    /// Inertia `(pos, neg, zero)` by exact symmetric (Lagrange) reduction.
    pub fn signature(&self) -> (usize, usize, usize) {
        let mut m = self.matrix.clone();
        let n = self.dim;
        let mut active: Vec<usize> = (0..n).collect();
        let (mut pos, mut neg) = (0usize, 0usize);
        loop {
            let Some(&i) = active.iter().find(|&&i| !m[i][i].is_zero()) else {
                // All active diagonal entries are zero. Find an off-diagonal
                // hyperbolic pair and fold it onto the diagonal.
                let pair = active
                    .iter()
                    .enumerate()
                    .flat_map(|(a, &i)| active[a + 1..].iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| !m[i][j].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        // congruence: row_i += row_j, col_i += col_j makes
                        // m[i][i] = 2 m[i][j] != 0 (the diagonal was zero)
                        for c in 0..n {
                            let v = m[j][c].clone();
                            m[i][c] += v;
                        }
                        for r in 0..n {
                            let v = m[r][j].clone();
                            m[r][i] += v;
                        }
                        continue;
                    }
                }
            };
            if m[i][i] > Rat::zero() {
                pos += 1;
            } else {
                neg += 1;
            }
            let d = m[i][i].clone();
            let others: Vec<usize> = active.iter().copied().filter(|&j| j != i).collect();
            for &j in &others {
                if m[j][i].is_zero() {
                    continue;
                }
                let c = -(&m[j][i] / &d);
                for col in 0..n {
                    let v = &m[i][col] * &c;
                    m[j][col] += v;
                }
                for row in 0..n {
                    let v = &m[row][i] * &c;
                    m[row][j] += v;
                }
            }
            active.retain(|&j| j != i);
        }
        (pos, neg, n - pos - neg)
    }

    /// Kernel of the Gram matrix. For a semidefinite form this is exactly the
    /// zero set of the form.
    pub fn radical(&self) -> Subspace {
        let rows = self.matrix.clone();
        Subspace::from_rows(self.dim, nullspace(&rows, self.dim)).expect("radical")
    }

    /// `Some(+1)` / `Some(-1)` for positive/negative semidefinite (including
    /// the zero form, reported as `Some(1)`), `None` for indefinite.
    pub fn semidefinite_sign(&self) -> Option<i32> {
        let (p, n, _) = self.signature();
        match (p, n) {
            (_, 0) => Some(1),
            (0, _) => Some(-1),
            _ => None,
        }
    }

    pub fn is_definite(&self) -> bool {
        let (p, n, z) = self.signature();
        z == 0 && (p == 0 || n == 0) && self.dim > 0
    }

    /// Pullback along the linear map whose rows are the images of the new
    /// basis vectors: `q'(x) = q(Σ x_i b_i)`.
    pub fn restrict(&self, basis: &[Vec<Rat>]) -> Result<QForm, LinalgError> {
        let k = basis.len();
        for b in basis {
            if b.len() != self.dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.dim,
                    got: b.len(),
                });
            }
        }
        let mut m = vec![vec_zero(k); k];
        for i in 0..k {
            let mbi = mat_vec(&self.matrix, &basis[i]);
            for j in 0..k {
                m[i][j] = dot(&mbi, &basis[j]);
            }
        }
        QForm::new(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn canonicalize_scaling_and_dependence() {
        let s = Subspace::from_rows(2, vec![v(&[2, 0]), v(&[0, 3])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 0]), v(&[0, 1])]);
        let s = Subspace::from_rows(2, vec![v(&[1, 2]), v(&[2, 4])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 2])]);
        let s = Subspace::from_rows(3, vec![]).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.ambient_dim(), 3);
    }

    #[test]
    fn canonicalize_rejects_ragged() {
        assert!(Subspace::from_rows(2, vec![v(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn intersect_and_sum() {
        let a = Subspace::from_rows(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::from_rows(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.basis(), &[v(&[0, 1, 0])]);
        let e1 = Subspace::span_of(3, &v(&[1, 0, 0])).unwrap();
        let e2 = Subspace::span_of(3, &v(&[0, 1, 0])).unwrap();
        let s = e1.sum(&e2).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.member(&v(&[1, 1, 0])).unwrap());
        assert!(!s.member(&v(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn quotient_coordinates() {
        // v = e1 + e3 mod span{e3} in basis {e1, e2} -> (1, 0)
        let ideal = Subspace::span_of(3, &v(&[0, 0, 1])).unwrap();
        let c = quotient_coords(&v(&[1, 0, 1]), &ideal, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(c, v(&[1, 0]));
        // member of the ideal -> zero coordinates
        let c = quotient_coords(&v(&[0, 0, 5]), &ideal, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(c, v(&[0, 0]));
        // v = e2, ideal span{e1 - e2}, complement {e1} -> (1)
        let ideal = Subspace::span_of(2, &v(&[1, -1])).unwrap();
        let c = quotient_coords(&v(&[0, 1]), &ideal, &[v(&[1, 0])]).unwrap();
        assert_eq!(c, v(&[1]));
        // non-spanning data is an error
        let ideal = Subspace::span_of(3, &v(&[0, 0, 1])).unwrap();
        assert!(quotient_coords(&v(&[1, 0, 0]), &ideal, &[v(&[0, 1, 0])]).is_err());
    }

    #[test]
    fn signatures() {
        let q = QForm::new(vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(q.signature(), (2, 0, 0));
        assert!(q.is_definite());
        // the form xy
        let q = QForm::new(vec![vec![int(0), rat(1, 2)], vec![rat(1, 2), int(0)]]).unwrap();
        assert_eq!(q.signature(), (1, 1, 0));
        assert_eq!(q.semidefinite_sign(), None);
        let q = QForm::zero(3);
        assert_eq!(q.signature(), (0, 0, 3));
        assert_eq!(q.radical().dim(), 3);
    }

    #[test]
    fn signature_rejects_asymmetric() {
        assert!(QForm::new(vec![v(&[0, 1]), v(&[0, 0])]).is_err());
    }

    #[test]
    fn semidefinite_radical_is_zero_set() {
        // q(x,y,z) = (x - y)^2, radical = {x = y}
        let q = QForm::new(vec![v(&[1, -1, 0]), v(&[-1, 1, 0]), v(&[0, 0, 0])]).unwrap();
        assert_eq!(q.semidefinite_sign(), Some(1));
        let r = q.radical();
        assert_eq!(r.dim(), 2);
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                for z in -2i64..=2 {
                    let p = v(&[x, y, z]);
                    assert_eq!(q.eval(&p).is_zero(), r.member(&p).unwrap());
                }
            }
        }
    }

    #[test]
    fn solve_system_basics() {
        // x + y = 3, x - y = 1 -> x = 2, y = 1
        let sol = solve_system(&[v(&[1, 1]), v(&[1, -1])], &v(&[3, 1]), 2).unwrap();
        assert_eq!(sol.particular, v(&[2, 1]));
        assert!(sol.kernel.is_empty());
        // inconsistent
        assert!(solve_system(&[v(&[1, 1]), v(&[1, 1])], &v(&[0, 1]), 2).is_none());
    }
}
