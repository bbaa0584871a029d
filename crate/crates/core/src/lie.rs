//! Graded/stratified Lie algebras given by structure constants.
//!
//! An algebra is stored as a layer partition plus a sparse bracket table on
//! ordered basis pairs `(i < j)`; antisymmetry is synthesized. Validation
//! checks the grading and the Jacobi identity on every basis triple and
//! records whether the algebra is stratified (`V_{k+1} = [V_1, V_k]`).
//! Commands that need stratification must ask for it explicitly.

use crate::linalg::{
    mat_vec, nullspace, unit_vec, vec_axpy, vec_is_zero, vec_zero, LinalgError, Subspace,
};
use crate::rat::{format_rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

pub type SparseVec = Vec<(usize, Rat)>;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("layer dims {0:?} do not sum to the basis size {1}")]
    LayerSumMismatch(Vec<usize>, usize),
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("bracket table entry ({0},{1}) out of range or not ordered i<j")]
    BadTableEntry(usize, usize),
    #[error("grading violation: [{0},{1}] leaves its layer")]
    GradingViolation(String, String),
    #[error("Jacobi violation on ({0},{1},{2}); residual {3}")]
    JacobiViolation(String, String, String, String),
    #[error("algebra is not stratified: V_{0} != [V_1, V_{0}-1]")]
    NotStratified(usize),
    #[error("subspace is not an ideal: [{0}, v] leaves it")]
    NotAnIdeal(String),
    #[error("subspace is not homogeneous")]
    NotHomogeneous,
    #[error("vector has wrong length: expected {expected}, got {got}")]
    BadVector { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A validated graded Lie algebra with layers `V_1 ⊕ … ⊕ V_s` realized as
/// consecutive coordinate blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    dim: usize,
    layer_dims: Vec<usize>,
    basis_names: Vec<String>,
    brackets: BTreeMap<(usize, usize), SparseVec>,
    stratified: bool,
}

/// A homogeneous ideal, kept together with its layer decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomIdeal {
    pub subspace: Subspace,
    pub by_layer: Vec<Subspace>,
}

/// The center together with its layer decomposition.
#[derive(Clone, Debug)]
pub struct CenterInfo {
    pub space: Subspace,
    pub by_layer: Vec<Subspace>,
}

/// Linear projection onto a quotient, with the chosen complement columns.
#[derive(Clone, Debug)]
pub struct Projection {
    /// `new_dim × old_dim` matrix rows.
    pub matrix: Vec<Vec<Rat>>,
    /// Original basis indices surviving into the quotient.
    pub complement_cols: Vec<usize>,
}

impl Projection {
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        mat_vec(&self.matrix, v)
    }

    /// Composition `self ∘ earlier`.
    pub fn compose(&self, earlier: &Projection) -> Projection {
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                // row · earlier.matrix
                let mut out = vec_zero(earlier.matrix.first().map(|r| r.len()).unwrap_or(0));
                for (c, coeff) in row.iter().enumerate() {
                    if !coeff.is_zero() {
                        vec_axpy(&mut out, coeff, &earlier.matrix[c]);
                    }
                }
                out
            })
            .collect();
        Projection {
            matrix,
            complement_cols: self
                .complement_cols
                .iter()
                .map(|&c| earlier.complement_cols[c])
                .collect(),
        }
    }

    pub fn identity(dim: usize) -> Projection {
        Projection {
            matrix: (0..dim).map(|i| unit_vec(dim, i)).collect(),
            complement_cols: (0..dim).collect(),
        }
    }

    /// Kernel of the projection as a canonical subspace of the source.
    pub fn kernel(&self) -> Subspace {
        let ncols = self.matrix.first().map(|r| r.len()).unwrap_or(0);
        Subspace::from_rows(ncols, nullspace(&self.matrix, ncols)).expect("projection kernel")
    }
}

fn fmt_vector(g: &GradedLieAlgebra, v: &[Rat]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{}·{}", format_rat(c), g.basis_names[i]))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

impl GradedLieAlgebra {
    /// Validates and constructs an algebra from a bracket table on ordered
    /// pairs. Rejects grading or Jacobi violations with the failing pair or
    /// triple; stratification is recorded as a flag, not a hard error.
    pub fn new(
        layer_dims: Vec<usize>,
        basis_names: Vec<String>,
        brackets: BTreeMap<(usize, usize), SparseVec>,
    ) -> Result<Self, LieError> {
        let dim: usize = layer_dims.iter().sum();
        if basis_names.len() != dim {
            return Err(LieError::LayerSumMismatch(layer_dims, basis_names.len()));
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for n in &basis_names {
                if !seen.insert(n.clone()) {
                    return Err(LieError::DuplicateName(n.clone()));
                }
            }
        }
        let mut brackets = brackets;
        for (&(i, j), entry) in brackets.iter_mut() {
            if i >= j || j >= dim {
                return Err(LieError::BadTableEntry(i, j));
            }
            entry.retain(|(_, c)| !c.is_zero());
            entry.sort_by_key(|&(k, _)| k);
            for &(k, _) in entry.iter() {
                if k >= dim {
                    return Err(LieError::BadTableEntry(i, j));
                }
            }
        }
        brackets.retain(|_, entry| !entry.is_empty());
        let mut g = GradedLieAlgebra {
            dim,
            layer_dims,
            basis_names,
            brackets,
            stratified: false,
        };
        g.check_grading()?;
        g.check_jacobi()?;
        g.stratified = g.compute_stratified()?;
        Ok(g)
    }

    pub fn abelian(dim: usize, names: Vec<String>) -> Result<Self, LieError> {
        GradedLieAlgebra::new(vec![dim], names, BTreeMap::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn step(&self) -> usize {
        self.layer_dims.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn is_stratified(&self) -> bool {
        self.stratified
    }

    pub fn require_stratified(&self) -> Result<(), LieError> {
        if self.stratified {
            Ok(())
        } else {
            let k = (2..=self.step())
                .find(|&k| !self.layer_generated(k))
                .unwrap_or(self.step());
            Err(LieError::NotStratified(k))
        }
    }

    /// 1-based layer of a basis index.
    pub fn layer_of(&self, idx: usize) -> usize {
        let mut acc = 0;
        for (k, d) in self.layer_dims.iter().enumerate() {
            acc += d;
            if idx < acc {
                return k + 1;
            }
        }
        panic!("basis index {idx} out of range");
    }

    /// Coordinate range of layer `k` (1-based).
    pub fn layer_range(&self, k: usize) -> std::ops::Range<usize> {
        let start: usize = self.layer_dims[..k - 1].iter().sum();
        start..start + self.layer_dims[k - 1]
    }

    pub fn layer_subspace(&self, k: usize) -> Subspace {
        if k > self.step() {
            return Subspace::zero(self.dim);
        }
        let r = self.layer_range(k);
        Subspace::coordinate_block(self.dim, r.start, r.end - r.start)
    }

    pub fn v1_dim(&self) -> usize {
        self.layer_dims.first().copied().unwrap_or(0)
    }

    /// Embeds V1 coordinates into an ambient vector.
    pub fn embed_v1(&self, coords: &[Rat]) -> Vec<Rat> {
        assert_eq!(coords.len(), self.v1_dim());
        let mut v = vec_zero(self.dim);
        v[..coords.len()].clone_from_slice(coords);
        v
    }

    /// Layer-`k` component of `v`, kept in ambient coordinates.
    pub fn layer_component(&self, v: &[Rat], k: usize) -> Vec<Rat> {
        let mut out = vec_zero(self.dim);
        if k <= self.step() {
            for i in self.layer_range(k) {
                out[i] = v[i].clone();
            }
        }
        out
    }

    pub fn in_layer(&self, v: &[Rat], k: usize) -> bool {
        v.iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || (k <= self.step() && self.layer_range(k).contains(&i)))
    }

    /// `[e_i, e_j]` as a dense vector, synthesizing antisymmetry.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rat> {
        let mut out = vec_zero(self.dim);
        if i == j {
            return out;
        }
        let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
        if let Some(entry) = self.brackets.get(&(a, b)) {
            for (k, c) in entry {
                out[*k] = if neg { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    /// Bilinear, antisymmetric extension of the table.
    pub fn bracket(&self, v: &[Rat], w: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        assert_eq!(w.len(), self.dim);
        let mut out = vec_zero(self.dim);
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in w.iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                let coeff = a * b;
                let (p, q, neg) = if i < j { (i, j, false) } else { (j, i, true) };
                if let Some(entry) = self.brackets.get(&(p, q)) {
                    for (k, c) in entry {
                        let term = &coeff * c;
                        if neg {
                            out[*k] -= term;
                        } else {
                            out[*k] += term;
                        }
                    }
                }
            }
        }
        out
    }

    /// `ad_v^k (w)`.
    pub fn ad_pow(&self, v: &[Rat], k: usize, w: &[Rat]) -> Vec<Rat> {
        let mut out = w.to_vec();
        for _ in 0..k {
            out = self.bracket(v, &out);
        }
        out
    }

    fn check_grading(&self) -> Result<(), LieError> {
        for (&(i, j), entry) in &self.brackets {
            let target = self.layer_of(i) + self.layer_of(j);
            for &(k, _) in entry {
                if target > self.step() || self.layer_of(k) != target {
                    return Err(LieError::GradingViolation(
                        self.basis_names[i].clone(),
                        self.basis_names[j].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        for i in 0..self.dim {
            let ei = unit_vec(self.dim, i);
            for j in i + 1..self.dim {
                let ej = unit_vec(self.dim, j);
                let bij = self.basis_bracket(i, j);
                for k in j + 1..self.dim {
                    let ek = unit_vec(self.dim, k);
                    let mut res = self.bracket(&ei, &self.basis_bracket(j, k));
                    let t2 = self.bracket(&ej, &self.basis_bracket(k, i));
                    let t3 = self.bracket(&ek, &bij);
                    for ((r, a), b) in res.iter_mut().zip(t2).zip(t3) {
                        *r += a + b;
                    }
                    if !vec_is_zero(&res) {
                        return Err(LieError::JacobiViolation(
                            self.basis_names[i].clone(),
                            self.basis_names[j].clone(),
                            self.basis_names[k].clone(),
                            fmt_vector(self, &res),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn layer_generated(&self, k: usize) -> bool {
        // V_k == [V_1, V_{k-1}]
        let mut rows = Vec::new();
        for a in self.layer_range(1) {
            for b in self.layer_range(k - 1) {
                rows.push(self.basis_bracket(a, b));
            }
        }
        let span = Subspace::from_rows(self.dim, rows).expect("layer span");
        span == self.layer_subspace(k)
    }

    fn compute_stratified(&self) -> Result<bool, LieError> {
        Ok((2..=self.step()).all(|k| self.layer_generated(k)))
    }

    // -- centers, series, ideals ------------------------------------------

    /// Exact center, with its layer decomposition.
    pub fn center(&self) -> CenterInfo {
        // v central iff for every basis e_j and coordinate c:
        //   sum_i v_i * [e_i, e_j]_c = 0
        let mut rows = Vec::new();
        for j in 0..self.dim {
            let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(self.dim);
            for i in 0..self.dim {
                cols.push(self.basis_bracket(i, j));
            }
            for c in 0..self.dim {
                let row: Vec<Rat> = (0..self.dim).map(|i| cols[i][c].clone()).collect();
                if !vec_is_zero(&row) {
                    rows.push(row);
                }
            }
        }
        let space = Subspace::from_rows(self.dim, nullspace(&rows, self.dim)).expect("center");
        let by_layer = (1..=self.step())
            .map(|k| {
                space
                    .intersect(&self.layer_subspace(k))
                    .expect("center layer")
            })
            .collect();
        CenterInfo { space, by_layer }
    }

    /// `g = g^1 ⊇ g^2 ⊇ …` with `g^{k+1} = [g, g^k]`, until it stabilizes at 0.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let prev = series.last().unwrap();
            let mut rows = Vec::new();
            for i in 0..self.dim {
                let ei = unit_vec(self.dim, i);
                for b in prev.basis() {
                    rows.push(self.bracket(&ei, b));
                }
            }
            let next = Subspace::from_rows(self.dim, rows).expect("lcs");
            let done = next.is_zero();
            if &next == prev {
                break;
            }
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// Derived subalgebra `[g, g]`.
    pub fn derived(&self) -> Subspace {
        let mut rows = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                rows.push(self.basis_bracket(i, j));
            }
        }
        Subspace::from_rows(self.dim, rows).expect("derived")
    }

    /// True iff `dim Z(g) = 1`; the witness is the center basis.
    pub fn is_trimmed(&self) -> (bool, CenterInfo) {
        let c = self.center();
        (c.space.dim() == 1, c)
    }

    pub fn is_hom_ideal(&self, s: &Subspace) -> Result<bool, LieError> {
        if s.ambient_dim() != self.dim {
            return Err(LinalgError::AmbientMismatch(s.ambient_dim(), self.dim).into());
        }
        if self.homogeneous_parts(s).is_none() {
            return Ok(false);
        }
        for i in 0..self.dim {
            let ei = unit_vec(self.dim, i);
            for b in s.basis() {
                if !s.member(&self.bracket(&ei, b))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Layer decomposition of a subspace, or `None` when it is not
    /// homogeneous (i.e. not the direct sum of its layer intersections).
    pub fn homogeneous_parts(&self, s: &Subspace) -> Option<Vec<Subspace>> {
        let parts: Vec<Subspace> = (1..=self.step())
            .map(|k| s.intersect(&self.layer_subspace(k)).expect("layer part"))
            .collect();
        let total: usize = parts.iter().map(|p| p.dim()).sum();
        (total == s.dim()).then_some(parts)
    }

    /// Smallest ideal containing the given vectors; must come out homogeneous.
    pub fn ideal_generated(&self, vectors: &[Vec<Rat>]) -> Result<HomIdeal, LieError> {
        let mut s = Subspace::from_rows(self.dim, vectors.to_vec())?;
        loop {
            let mut rows = s.basis().to_vec();
            for i in 0..self.dim {
                let ei = unit_vec(self.dim, i);
                for b in s.basis() {
                    rows.push(self.bracket(&ei, b));
                }
            }
            let next = Subspace::from_rows(self.dim, rows)?;
            if next == s {
                break;
            }
            s = next;
        }
        let by_layer = self.homogeneous_parts(&s).ok_or(LieError::NotHomogeneous)?;
        Ok(HomIdeal {
            subspace: s,
            by_layer,
        })
    }

    /// Wraps an already-computed subspace as a homogeneous ideal, verifying
    /// both properties.
    pub fn hom_ideal(&self, s: &Subspace) -> Result<HomIdeal, LieError> {
        let by_layer = self.homogeneous_parts(s).ok_or(LieError::NotHomogeneous)?;
        for i in 0..self.dim {
            let ei = unit_vec(self.dim, i);
            for b in s.basis() {
                if !s.member(&self.bracket(&ei, b))? {
                    return Err(LieError::NotAnIdeal(self.basis_names[i].clone()));
                }
            }
        }
        Ok(HomIdeal {
            subspace: s.clone(),
            by_layer,
        })
    }

    /// Quotient by a homogeneous ideal. The quotient basis is the set of
    /// non-pivot standard basis vectors of the ideal's RREF, so projections
    /// are reproducible byte-for-byte.
    pub fn quotient(&self, ideal: &HomIdeal) -> Result<(GradedLieAlgebra, Projection), LieError> {
        let pivots: std::collections::BTreeSet<usize> =
            ideal.subspace.pivots().into_iter().collect();
        let complement_cols: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let new_dim = complement_cols.len();
        let col_index: BTreeMap<usize, usize> = complement_cols
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        // project v: eliminate pivot coordinates, read off complement coords
        let project = |v: &[Rat]| -> Result<Vec<Rat>, LieError> {
            let r = ideal.subspace.reduce(v)?;
            Ok(complement_cols.iter().map(|&c| r[c].clone()).collect())
        };
        let matrix: Result<Vec<Vec<Rat>>, LieError> = (0..self.dim)
            .map(|c| project(&unit_vec(self.dim, c)))
            .collect::<Result<Vec<_>, _>>()
            .map(|cols| {
                (0..new_dim)
                    .map(|r| (0..self.dim).map(|c| cols[c][r].clone()).collect())
                    .collect()
            });
        let projection = Projection {
            matrix: matrix?,
            complement_cols: complement_cols.clone(),
        };
        let layer_dims: Vec<usize> = (1..=self.step())
            .map(|k| self.layer_dims[k - 1] - ideal.by_layer[k - 1].dim())
            .collect();
        let mut layer_dims = layer_dims;
        while layer_dims.last() == Some(&0) {
            layer_dims.pop();
        }
        let names: Vec<String> = complement_cols
            .iter()
            .map(|&c| self.basis_names[c].clone())
            .collect();
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (a_new, &a_old) in complement_cols.iter().enumerate() {
            for (b_new, &b_old) in complement_cols.iter().enumerate().skip(a_new + 1) {
                let w = project(&self.basis_bracket(a_old, b_old))?;
                let entry: SparseVec = w
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                if !entry.is_empty() {
                    table.insert((a_new, b_new), entry);
                }
            }
        }
        let q = GradedLieAlgebra::new(layer_dims, names, table)?;
        let _ = col_index;
        Ok((q, projection))
    }

    /// Direct product with cross brackets zero and layerwise-summed dims.
    /// Factor basis names are suffixed with `.1` / `.2`.
    pub fn product(g1: &GradedLieAlgebra, g2: &GradedLieAlgebra) -> GradedLieAlgebra {
        GradedLieAlgebra::product_with_maps(g1, g2).0
    }

    /// As [`GradedLieAlgebra::product`], also returning each factor's
    /// old-index → new-index map.
    pub fn product_with_maps(
        g1: &GradedLieAlgebra,
        g2: &GradedLieAlgebra,
    ) -> (GradedLieAlgebra, Vec<usize>, Vec<usize>) {
        let step = g1.step().max(g2.step());
        let mut layer_dims = Vec::with_capacity(step);
        for k in 1..=step {
            let d1 = g1.layer_dims.get(k - 1).copied().unwrap_or(0);
            let d2 = g2.layer_dims.get(k - 1).copied().unwrap_or(0);
            layer_dims.push(d1 + d2);
        }
        // old index -> new index, layer-major with factor 1 first
        let mut map1 = vec![0usize; g1.dim];
        let mut map2 = vec![0usize; g2.dim];
        let mut names = Vec::new();
        let mut next = 0usize;
        for k in 1..=step {
            if k <= g1.step() {
                for i in g1.layer_range(k) {
                    map1[i] = next;
                    names.push(format!("{}.1", g1.basis_names[i]));
                    next += 1;
                }
            }
            if k <= g2.step() {
                for i in g2.layer_range(k) {
                    map2[i] = next;
                    names.push(format!("{}.2", g2.basis_names[i]));
                    next += 1;
                }
            }
        }
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        let mut insert = |i: usize, j: usize, entry: SparseVec| {
            if entry.is_empty() {
                return;
            }
            if i < j {
                table.insert((i, j), entry);
            } else {
                table.insert((j, i), entry.into_iter().map(|(k, c)| (k, -c)).collect());
            }
        };
        for (&(i, j), entry) in &g1.brackets {
            insert(
                map1[i],
                map1[j],
                entry.iter().map(|(k, c)| (map1[*k], c.clone())).collect(),
            );
        }
        for (&(i, j), entry) in &g2.brackets {
            insert(
                map2[i],
                map2[j],
                entry.iter().map(|(k, c)| (map2[*k], c.clone())).collect(),
            );
        }
        let p = GradedLieAlgebra::new(layer_dims, names, table).expect("product of valid algebras");
        (p, map1, map2)
    }

    /// Smallest bracket-closed subspace containing the span of the vectors.
    pub fn lie_generated(&self, vectors: &[Vec<Rat>]) -> Subspace {
        let mut s = Subspace::from_rows(self.dim, vectors.to_vec()).expect("lie_generated span");
        loop {
            let basis = s.basis().to_vec();
            let mut rows = basis.clone();
            for (a, x) in basis.iter().enumerate() {
                for y in basis.iter().skip(a + 1) {
                    rows.push(self.bracket(x, y));
                }
            }
            let next = Subspace::from_rows(self.dim, rows).expect("lie_generated step");
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Dilation: scales the layer-`i` component by `t^i`.
    pub fn dilate(&self, v: &[Rat], t: &Rat) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec_zero(self.dim);
        let mut power = t.clone();
        for k in 1..=self.step() {
            for i in self.layer_range(k) {
                out[i] = &v[i] * &power;
            }
            power *= t;
        }
        out
    }

    /// Transport of structure along a graded change of basis: `blocks[k]` is
    /// an invertible matrix (rows = new basis vectors in old layer
    /// coordinates) for layer `k+1`. The result is isomorphic to `self`.
    pub fn change_basis(&self, blocks: &[Vec<Vec<Rat>>]) -> Result<GradedLieAlgebra, LieError> {
        assert_eq!(blocks.len(), self.step());
        // assemble P: new basis vector t -> old coordinates
        let mut p_rows: Vec<Vec<Rat>> = Vec::with_capacity(self.dim);
        for (k, block) in blocks.iter().enumerate() {
            let r = self.layer_range(k + 1);
            let d = r.end - r.start;
            if block.len() != d || block.iter().any(|row| row.len() != d) {
                return Err(LieError::BadVector {
                    expected: d,
                    got: block.len(),
                });
            }
            for row in block {
                let mut full = vec_zero(self.dim);
                for (c, val) in row.iter().enumerate() {
                    full[r.start + c] = val.clone();
                }
                p_rows.push(full);
            }
        }
        // invertibility check: the rows must span
        let span = Subspace::from_rows(self.dim, p_rows.clone())?;
        if span.dim() != self.dim {
            return Err(LieError::NotAnIdeal("singular change of basis".into()));
        }
        // new structure constants: [f_i, f_j] = P^{-1} [P f_i, P f_j]
        // where coordinates w.r.t. the new basis solve P^T c = v.
        let coords_in_new = |v: &[Rat]| -> Vec<Rat> {
            // solve sum_t c_t p_rows[t] = v
            let rows: Vec<Vec<Rat>> = (0..self.dim)
                .map(|coord| p_rows.iter().map(|p| p[coord].clone()).collect())
                .collect();
            crate::linalg::solve_system(&rows, v, self.dim)
                .expect("invertible change of basis")
                .particular
        };
        let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let w = self.bracket(&p_rows[i], &p_rows[j]);
                let c = coords_in_new(&w);
                let entry: SparseVec = c
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (k, x.clone()))
                    .collect();
                if !entry.is_empty() {
                    table.insert((i, j), entry);
                }
            }
        }
        GradedLieAlgebra::new(self.layer_dims.clone(), self.basis_names.clone(), table)
    }

    pub fn fmt_vector(&self, v: &[Rat]) -> String {
        fmt_vector(self, v)
    }

    /// Index of a basis name.
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }
}

/// The 3-dimensional Heisenberg algebra: `[X1, X2] = X3`, layers (2, 1).
pub fn heisenberg() -> GradedLieAlgebra {
    let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    table.insert((0, 1), vec![(2, Rat::from_integer(1.into()))]);
    GradedLieAlgebra::new(
        vec![2, 1],
        vec!["X1".into(), "X2".into(), "X3".into()],
        table,
    )
    .expect("Heisenberg table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::make_engel;
    use crate::rat::int;

    fn entry(pairs: &[(usize, i64)]) -> SparseVec {
        pairs.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn engel_table_validates() {
        let g = make_engel(1);
        assert_eq!(g.layer_dims(), &[2, 1, 1]);
        assert!(g.is_stratified());
        // bracket(Y, X) = T, bracket(Y, T) = Z, bracket(X, T) = 0
        let x = unit_vec(4, 0);
        let y = unit_vec(4, 1);
        let t = unit_vec(4, 2);
        assert_eq!(g.bracket(&y, &x), t);
        assert_eq!(g.bracket(&y, &t), unit_vec(4, 3));
        assert!(vec_is_zero(&g.bracket(&x, &t)));
    }

    #[test]
    fn jacobi_violation_reports_triple() {
        // rank-2 step-4 forged table: Jacobi forces [e1,e5] = [e2,e4]
        let mut table = BTreeMap::new();
        table.insert((0, 1), entry(&[(2, 1)]));
        table.insert((0, 2), entry(&[(3, 1)]));
        table.insert((1, 2), entry(&[(4, 1)]));
        table.insert((0, 4), entry(&[(5, 1)]));
        let err = GradedLieAlgebra::new(
            vec![2, 1, 2, 1],
            (1..=6).map(|i| format!("e{i}")).collect(),
            table,
        )
        .unwrap_err();
        match err {
            LieError::JacobiViolation(a, b, c, _) => {
                assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("e1", "e2", "e3"));
            }
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
    }

    #[test]
    fn grading_violation() {
        // layers (2,1) with [e1,e2] = e1: bracket must raise degree
        let mut table = BTreeMap::new();
        table.insert((0, 1), entry(&[(0, 1)]));
        let err = GradedLieAlgebra::new(
            vec![2, 1],
            vec!["e1".into(), "e2".into(), "e3".into()],
            table,
        )
        .unwrap_err();
        assert!(matches!(err, LieError::GradingViolation(_, _)));
    }

    #[test]
    fn centers_and_trimmedness() {
        let g = make_engel(2);
        let c = g.center();
        assert_eq!(c.space.dim(), 1);
        assert!(c.space.member(&unit_vec(6, 5)).unwrap());
        assert_eq!(
            c.by_layer.iter().map(|s| s.dim()).collect::<Vec<_>>(),
            vec![0, 0, 1]
        );
        assert!(g.is_trimmed().0);

        let p = GradedLieAlgebra::product(&make_engel(1), &make_engel(1));
        let (trimmed, c) = p.is_trimmed();
        assert!(!trimmed);
        assert_eq!(c.space.dim(), 2);
    }

    #[test]
    fn derived_subalgebra() {
        let g = make_engel(1);
        let d = g.derived();
        assert_eq!(d.dim(), 2);
        assert!(d.member(&unit_vec(4, 2)).unwrap());
        assert!(d.member(&unit_vec(4, 3)).unwrap());
    }

    #[test]
    fn quotient_of_product_is_137a() {
        let p = GradedLieAlgebra::product(&make_engel(1), &make_engel(1));
        // Z.1 - Z.2 spans a homogeneous ideal
        let z1 = p.basis_index("Z.1").unwrap();
        let z2 = p.basis_index("Z.2").unwrap();
        let mut v = vec_zero(p.dim());
        v[z1] = int(1);
        v[z2] = int(-1);
        let ideal = p.ideal_generated(&[v]).unwrap();
        assert_eq!(ideal.subspace.dim(), 1);
        let (q, proj) = p.quotient(&ideal).unwrap();
        assert_eq!(q.layer_dims(), &[4, 2, 1]);
        assert!(q.is_trimmed().0);
        // the projection maps Z.1 and Z.2 to the same vector
        assert_eq!(proj.apply(&unit_vec(8, z1)), proj.apply(&unit_vec(8, z2)));
    }

    #[test]
    fn quotient_by_derived_is_abelian() {
        let g = make_engel(2);
        let ideal = g.hom_ideal(&g.derived()).unwrap();
        let (q, _) = g.quotient(&ideal).unwrap();
        assert_eq!(q.layer_dims(), &[3]);
        assert!(q.derived().is_zero());
    }

    #[test]
    fn non_ideal_detected() {
        let g = make_engel(1);
        // span{Y} is not an ideal: [Y, X] = T outside
        let y = Subspace::span_of(4, &unit_vec(4, 1)).unwrap();
        assert!(!g.is_hom_ideal(&y).unwrap());
        assert!(g.hom_ideal(&y).is_err());
    }

    #[test]
    fn product_brackets_vanish_across_factors() {
        let p = GradedLieAlgebra::product(&make_engel(1), &make_engel(1));
        let y1 = p.basis_index("Y1.1").unwrap();
        let x2 = p.basis_index("X.2").unwrap();
        assert!(vec_is_zero(&p.bracket(&unit_vec(8, y1), &unit_vec(8, x2))));
        assert_eq!(p.layer_dims(), &[4, 2, 2]);
    }

    #[test]
    fn product_with_zero_dim() {
        let g = make_engel(1);
        let zero = GradedLieAlgebra::abelian(0, vec![]).unwrap();
        let p = GradedLieAlgebra::product(&g, &zero);
        assert_eq!(p.layer_dims(), g.layer_dims());
        assert_eq!(p.dim(), g.dim());
    }

    #[test]
    fn lie_generated_examples() {
        let g = make_engel(2);
        // {X, Y1} generates a 4-dim subalgebra containing Z
        let s = g.lie_generated(&[unit_vec(6, 0), unit_vec(6, 1)]);
        assert_eq!(s.dim(), 4);
        assert!(s.member(&unit_vec(6, 5)).unwrap());
        // {Y1, Y2} is abelian
        let s = g.lie_generated(&[unit_vec(6, 1), unit_vec(6, 2)]);
        assert_eq!(s.dim(), 2);
        // V1 generates everything
        let v1: Vec<Vec<Rat>> = (0..3).map(|i| unit_vec(6, i)).collect();
        assert_eq!(g.lie_generated(&v1).dim(), 6);
    }

    #[test]
    fn lie_generated_keeps_horizontal_part() {
        // for generators inside V1, the V1-part of the generated subalgebra
        // is exactly their span
        let g = make_engel(2);
        let gens = vec![unit_vec(6, 0), unit_vec(6, 1)];
        let s = g.lie_generated(&gens);
        let v1_part = s.intersect(&g.layer_subspace(1)).unwrap();
        let span = Subspace::from_rows(6, gens).unwrap();
        assert_eq!(v1_part, span);
    }

    #[test]
    fn dilation_scales_by_degree() {
        let g = make_engel(1);
        let z = unit_vec(4, 3);
        let d = g.dilate(&z, &int(2));
        assert_eq!(d[3], int(8));
        let v: Vec<Rat> = (0..4).map(|i| int(i as i64 + 1)).collect();
        assert_eq!(g.dilate(&v, &int(1)), v);
    }

    #[test]
    fn dilation_is_bracket_homomorphism() {
        let g = make_engel(2);
        let t = crate::rat::rat(3, 2);
        let v: Vec<Rat> = (0..6).map(|i| int((i as i64 * 7 + 3) % 5 - 2)).collect();
        let w: Vec<Rat> = (0..6).map(|i| int((i as i64 * 3 + 1) % 7 - 3)).collect();
        let lhs = g.bracket(&g.dilate(&v, &t), &g.dilate(&w, &t));
        let rhs = g.dilate(&g.bracket(&v, &w), &t);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ideal_generated_in_v2_starts_at_degree_two() {
        let g = make_engel(2);
        let t1 = unit_vec(6, 3);
        let ideal = g.ideal_generated(&[t1]).unwrap();
        assert_eq!(ideal.by_layer[0].dim(), 0);
        assert!(ideal.by_layer[1].dim() >= 1);
    }

    #[test]
    fn heisenberg_is_stratified_step_two() {
        let g = heisenberg();
        assert!(g.is_stratified());
        assert_eq!(g.step(), 2);
        let c = g.center();
        assert_eq!(c.space.dim(), 1);
    }
}
