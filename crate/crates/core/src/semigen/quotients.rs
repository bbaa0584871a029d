//! Layered search for Engel-type quotients of a stratified algebra.
//!
//! Every Engel-type quotient ideal contains `Z(g) ∩ (V1 ⊕ V2)` (the image of
//! a center stays central, and Engel-type algebras have their center in V3),
//! so the search first quotients those away. After the reductions, an
//! Engel-type quotient ideal meets V3 in a hyperplane:
//!
//! - `dim V3 = 1` forces the zero ideal — recognition decides exhaustively;
//! - `dim V3 = 2` leaves one projective parameter, analyzed as a matrix
//!   pencil: rank drops happen on the real roots of an explicit polynomial,
//!   counted exactly (Sturm), with rational roots recursed exactly;
//! - `dim V3 ≥ 3` falls back to deterministic coordinate cuts plus seeded
//!   rational sampling; hits are re-verified, emptiness is never claimed.
//!
//! Certificates carry the ideal in the original coordinates; the adapted
//! basis and gram are re-derived on the canonical quotient so a checker can
//! replay them with subspace arithmetic only.

use super::SemigenError;
use crate::engel::{recognize_engel, EngelStructure};
use crate::lie::{GradedLieAlgebra, Projection};
use crate::linalg::{nullspace, unit_vec, vec_is_zero, vec_zero, Subspace};
use crate::poly::{count_real_roots, rational_roots, Poly};
use crate::rat::{int, rat, Rat};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    /// Budget for sampled candidates beyond the deterministic ones.
    pub max_samples: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0xC0FFEE,
            max_samples: 64,
        }
    }
}

/// A verified Engel-type quotient: `g / ideal` is isomorphic to the n-th
/// Engel-type algebra, witnessed by an adapted basis on the canonical
/// quotient.
#[derive(Clone, Debug)]
pub struct EngelQuotientCert {
    /// Homogeneous ideal in the original algebra's coordinates.
    pub ideal: Subspace,
    pub n: usize,
    /// Adapted basis `X, Y_i, T_i, Z` in canonical quotient coordinates.
    pub adapted_basis: Vec<Vec<Rat>>,
    pub gram: Vec<Vec<Rat>>,
    /// The abelian hyperplane of the quotient (canonical coordinates).
    pub hyperplane: Subspace,
}

/// The forced reduction chain, recorded when the search never branches:
/// cumulative kernels in the original coordinates, and the final recognition
/// failure when the search came back empty.
#[derive(Clone, Debug)]
pub struct ForcedChain {
    pub kernels: Vec<Subspace>,
    pub rejection: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub certs: Vec<EngelQuotientCert>,
    /// True only when the search provably covered every candidate ideal.
    pub exhaustive: bool,
    /// Present when the search was a single forced chain (no branching).
    pub forced_chain: Option<ForcedChain>,
    pub log: Vec<String>,
}

struct Ctx<'a> {
    g: &'a GradedLieAlgebra,
    opts: &'a SearchOptions,
    rng: ChaCha8Rng,
    budget: usize,
    certs: Vec<EngelQuotientCert>,
    log: Vec<String>,
    branched: bool,
    chain: Vec<Subspace>,
    rejection: Option<String>,
    visited: HashMap<Subspace, bool>,
}

impl<'a> Ctx<'a> {
    fn log(&mut self, line: String) {
        if self.log.last() != Some(&line) {
            self.log.push(line);
        }
    }

    fn push_cert(&mut self, cert: EngelQuotientCert) {
        if !self
            .certs
            .iter()
            .any(|c| c.ideal == cert.ideal && c.n == cert.n)
        {
            self.certs.push(cert);
        }
    }
}

/// Re-derives a certificate on the canonical quotient by the given ideal.
pub fn certify_engel_quotient(
    g: &GradedLieAlgebra,
    kernel: &Subspace,
) -> Result<Option<(EngelQuotientCert, EngelStructure)>, SemigenError> {
    let ideal = match g.hom_ideal(kernel) {
        Ok(i) => i,
        Err(_) => return Ok(None),
    };
    let (q, _) = g.quotient(&ideal)?;
    match recognize_engel(&q) {
        Ok(s) => Ok(Some((
            EngelQuotientCert {
                ideal: kernel.clone(),
                n: s.n,
                adapted_basis: s.adapted_basis.clone(),
                gram: s.gram.clone(),
                hyperplane: s.abelian_hyperplane.clone(),
            },
            s,
        ))),
        Err(_) => Ok(None),
    }
}

fn central_line_ideal(
    q: &GradedLieAlgebra,
    line: &[Rat],
) -> Result<crate::lie::HomIdeal, SemigenError> {
    Ok(q.hom_ideal(&Subspace::span_of(q.dim(), line)?)?)
}

/// Search worker; returns whether this subtree was covered exhaustively.
fn worker(
    ctx: &mut Ctx,
    q: GradedLieAlgebra,
    proj: Projection,
    depth: usize,
    forced: bool,
) -> Result<bool, SemigenError> {
    let mut q = q;
    let mut proj = proj;
    // center reductions: every Engel-quotient ideal contains Z ∩ (V1 ⊕ V2)
    loop {
        if q.step() < 3 {
            if forced {
                ctx.rejection = Some("step dropped below 3 during reductions".into());
            }
            return Ok(true);
        }
        let c = q.center();
        let c12 = c.by_layer[0].sum(&c.by_layer[1])?;
        if c12.is_zero() {
            break;
        }
        let ideal = q.hom_ideal(&c12)?;
        let (q2, p2) = q.quotient(&ideal)?;
        proj = p2.compose(&proj);
        q = q2;
        if forced {
            ctx.chain.push(proj.kernel());
        }
    }
    let kernel = proj.kernel();
    if let Some(&cached) = ctx.visited.get(&kernel) {
        return Ok(cached);
    }
    let d3 = q.layer_dims()[2];
    let exhaustive = if d3 == 1 {
        match recognize_engel(&q) {
            Ok(_) => {
                match certify_engel_quotient(ctx.g, &kernel)? {
                    Some((cert, _)) => ctx.push_cert(cert),
                    None => ctx.log("canonical re-derivation failed unexpectedly".into()),
                }
                true
            }
            Err(reason) => {
                if forced {
                    ctx.rejection = Some(reason.to_string());
                }
                ctx.log(format!(
                    "dim V3 = 1 branch rejected: {reason} (ideal dim {})",
                    kernel.dim()
                ));
                true
            }
        }
    } else if d3 == 2 {
        ctx.branched = true;
        l2_branch(ctx, &q, &proj, depth)?
    } else {
        ctx.branched = true;
        l3_branch(ctx, &q, &proj, depth)?;
        false
    };
    ctx.visited.insert(kernel, exhaustive);
    Ok(exhaustive)
}

/// One projective parameter: candidate lines in V3 are `span{e_b - t e_a}`
/// for rational `t` plus `span{e_a}`. The pencil analysis decides whether
/// the non-enumerated parameters are all rejected.
fn l2_branch(
    ctx: &mut Ctx,
    q: &GradedLieAlgebra,
    proj: &Projection,
    depth: usize,
) -> Result<bool, SemigenError> {
    let analysis = l2_pencil_analysis(q);
    for n in &analysis.notes {
        ctx.log(format!("L2: {n}"));
    }
    let v3 = q.layer_range(3);
    let (a, b) = (v3.start, v3.start + 1);
    let dim = q.dim();
    let mut ts: Vec<Rat> = [
        int(0),
        int(1),
        int(-1),
        int(2),
        int(-2),
        rat(1, 2),
        rat(-1, 2),
        int(3),
        int(-3),
        rat(1, 3),
        rat(-1, 3),
    ]
    .into_iter()
    .collect();
    for r in &analysis.rational_exceptional {
        if !ts.contains(r) {
            ts.push(r.clone());
        }
    }
    let mut required_ok = true;
    // the (1, t) family: kernel of μ = (1, t) is span{e_b - t e_a}
    for t in &ts {
        let mut line = vec_zero(dim);
        line[a] = -t.clone();
        line[b] = int(1);
        let ideal = central_line_ideal(q, &line)?;
        let (q2, p2) = q.quotient(&ideal)?;
        let ex = worker(ctx, q2, p2.compose(proj), depth + 1, false)?;
        if analysis.rational_exceptional.contains(t) && !ex {
            required_ok = false;
        }
    }
    // the point at infinity: kernel of μ = (0, 1) is span{e_a}
    {
        let line = unit_vec(dim, a);
        let ideal = central_line_ideal(q, &line)?;
        let (q2, p2) = q.quotient(&ideal)?;
        let ex = worker(ctx, q2, p2.compose(proj), depth + 1, false)?;
        if !ex {
            required_ok = false;
        }
    }
    Ok(analysis.closed && required_ok)
}

/// `dim V3 ≥ 3`: deterministic coordinate cuts plus seeded sampling.
/// Never exhaustive.
fn l3_branch(
    ctx: &mut Ctx,
    q: &GradedLieAlgebra,
    proj: &Projection,
    depth: usize,
) -> Result<(), SemigenError> {
    if depth > 10 {
        ctx.log("L3: depth limit reached".into());
        return Ok(());
    }
    let dim = q.dim();
    let mut candidates: Vec<Subspace> = Vec::new();
    // (c) coordinate hyperplanes of V3
    let v3: Vec<usize> = q.layer_range(3).collect();
    for &drop in &v3 {
        let rows: Vec<Vec<Rat>> = v3
            .iter()
            .filter(|&&c| c != drop)
            .map(|&c| unit_vec(dim, c))
            .collect();
        candidates.push(Subspace::from_rows(dim, rows)?);
    }
    // (a)/(b) pre-cuts: ideals generated by coordinate vectors of V1 and V2
    let mut precuts: Vec<Vec<Rat>> = Vec::new();
    for i in q.layer_range(1) {
        precuts.push(unit_vec(dim, i));
    }
    for w in q.layer_range(2) {
        precuts.push(unit_vec(dim, w));
    }
    // seeded random V2 generators and V3 functionals
    let d3 = v3.len();
    for _ in 0..4 {
        let mut v = vec_zero(dim);
        for w in q.layer_range(2) {
            v[w] = int(ctx.rng.gen_range(-2i64..=2));
        }
        if !vec_is_zero(&v) {
            precuts.push(v);
        }
        let mut f = vec![Rat::zero(); d3];
        for x in f.iter_mut() {
            *x = int(ctx.rng.gen_range(-2i64..=2));
        }
        if !vec_is_zero(&f) {
            let kernel = nullspace(&[f], d3);
            let rows: Vec<Vec<Rat>> = kernel
                .into_iter()
                .map(|k| {
                    let mut v = vec_zero(dim);
                    for (pos, &c) in v3.iter().enumerate() {
                        v[c] = k[pos].clone();
                    }
                    v
                })
                .collect();
            candidates.push(Subspace::from_rows(dim, rows)?);
        }
    }
    for line in candidates {
        if ctx.budget == 0 {
            ctx.log("L3: sample budget exhausted".into());
            return Ok(());
        }
        ctx.budget -= 1;
        let ideal = q.hom_ideal(&line)?;
        let (q2, p2) = q.quotient(&ideal)?;
        worker(ctx, q2, p2.compose(proj), depth + 1, false)?;
    }
    for v in precuts {
        if ctx.budget == 0 {
            ctx.log("L3: sample budget exhausted".into());
            return Ok(());
        }
        ctx.budget -= 1;
        let ideal = match q.ideal_generated(&[v]) {
            Ok(i) => i,
            Err(_) => continue,
        };
        if ideal.subspace.dim() == dim {
            continue;
        }
        let (q2, p2) = q.quotient(&ideal)?;
        if q2.step() < 3 {
            continue;
        }
        worker(ctx, q2, p2.compose(proj), depth + 1, false)?;
    }
    Ok(())
}

/// Layered search for Engel-type quotients. Emptiness is a proof of absence
/// only when `exhaustive` is true.
pub fn find_engel_quotients(
    g: &GradedLieAlgebra,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SemigenError> {
    g.require_stratified()?;
    if g.step() < 3 {
        return Ok(SearchOutcome {
            certs: vec![],
            exhaustive: true,
            forced_chain: Some(ForcedChain {
                kernels: vec![],
                rejection: Some(format!("step {} < 3 has no Engel-type quotients", g.step())),
            }),
            log: vec![],
        });
    }
    // step > 3: every Engel-type quotient kills V4 ⊕ … ⊕ Vs
    let (start, start_proj) = if g.step() > 3 {
        let mut rows = Vec::new();
        for k in 4..=g.step() {
            rows.extend(g.layer_subspace(k).basis().to_vec());
        }
        let tail = Subspace::from_rows(g.dim(), rows)?;
        let ideal = g.hom_ideal(&tail)?;
        let (q, p) = g.quotient(&ideal)?;
        (q, p)
    } else {
        (g.clone(), Projection::identity(g.dim()))
    };
    let mut ctx = Ctx {
        g,
        opts,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        budget: opts.max_samples,
        certs: vec![],
        log: vec![],
        branched: false,
        chain: if g.step() > 3 {
            vec![start_proj.kernel()]
        } else {
            vec![]
        },
        rejection: None,
        visited: HashMap::new(),
    };
    let _ = ctx.opts;
    let exhaustive = worker(&mut ctx, start, start_proj, 0, true)?;
    let forced_chain = if !ctx.branched {
        Some(ForcedChain {
            kernels: ctx.chain,
            rejection: ctx.rejection,
        })
    } else {
        None
    };
    Ok(SearchOutcome {
        certs: ctx.certs,
        exhaustive,
        forced_chain,
        log: ctx.log,
    })
}

// ---------------------------------------------------------------------------
// Matrix-pencil analysis for the one-parameter case
// ---------------------------------------------------------------------------

struct L2Analysis {
    closed: bool,
    rational_exceptional: Vec<Rat>,
    notes: Vec<String>,
}

/// Entry `μ_t(v)` for the V3 value `v` (ambient): `v_a + t·v_b`.
fn mu_poly(v: &[Rat], a: usize, b: usize) -> Poly {
    Poly::linear(v[a].clone(), v[b].clone())
}

fn poly_mat_eval(m: &[Vec<Poly>], t: &Rat) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|row| row.iter().map(|p| p.eval(t)).collect())
        .collect()
}

fn rank_of(rows: Vec<Vec<Rat>>) -> usize {
    let mut rows = rows;
    crate::linalg::rref(&mut rows);
    rows.len()
}

fn generic_rank(m: &[Vec<Poly>]) -> usize {
    // rank at a point is ≤ the generic rank, with equality away from the
    // roots of the minors-gcd. Minors of degree-≤1 entries have degree ≤
    // min(rows, cols), so that many samples plus one always include a
    // non-exceptional point.
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let needed = rows.min(cols) + 2;
    (0..needed)
        .map(|k| rank_of(poly_mat_eval(m, &int(17 + 6 * k as i64))))
        .max()
        .unwrap_or(0)
}

fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::constant(Rat::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = Poly::zero();
    for (j, cell) in m[0].iter().enumerate() {
        if cell.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = cell.mul(&poly_det(&minor));
        det = if j % 2 == 0 {
            det.add(&term)
        } else {
            det.sub(&term)
        };
    }
    det
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gcd of all r×r minors: its roots are exactly the parameters where the
/// rank drops below r.
fn rank_drop_poly(m: &[Vec<Poly>], r: usize) -> Poly {
    if r == 0 {
        return Poly::constant(Rat::one());
    }
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut g = Poly::zero();
    for rsel in combinations(rows, r) {
        for csel in combinations(cols, r) {
            let sub: Vec<Vec<Poly>> = rsel
                .iter()
                .map(|&ri| csel.iter().map(|&ci| m[ri][ci].clone()).collect())
                .collect();
            let d = poly_det(&sub);
            if !d.is_zero() {
                g = if g.is_zero() { d } else { g.gcd(&d) };
                if g.degree() == 0 {
                    return g; // constant: rank never drops
                }
            }
        }
    }
    g
}

fn exceptional_roots(p: &Poly, notes: &mut Vec<String>, name: &str) -> (Vec<Rat>, bool) {
    if p.is_zero() || p.degree() == 0 {
        return (vec![], false);
    }
    let rational = rational_roots(p);
    let real = count_real_roots(p);
    let irrational = real > rational.len();
    if irrational {
        notes.push(format!(
            "{name}: {real} real exceptional parameter(s), only {} rational",
            rational.len()
        ));
    }
    (rational, irrational)
}

fn l2_pencil_analysis(q: &GradedLieAlgebra) -> L2Analysis {
    let dim = q.dim();
    let v3 = q.layer_range(3);
    let (a, b) = (v3.start, v3.start + 1);
    let v1: Vec<usize> = q.layer_range(1).collect();
    let v2: Vec<usize> = q.layer_range(2).collect();
    let mut notes = Vec::new();

    // c2 pencil: w ∈ V2 with μ_t([e_i, w]) = 0 for all i ∈ V1
    let c2: Vec<Vec<Poly>> = v1
        .iter()
        .map(|&i| {
            v2.iter()
                .map(|&w| mu_poly(&q.basis_bracket(i, w), a, b))
                .collect()
        })
        .collect();
    let c2_rank = generic_rank(&c2);
    let c2_kernel = v2.len() - c2_rank;

    // X-line pencil: ν ∈ V1 with μ_t([ν, e_w]) = 0 for all w ∈ V2
    let xline: Vec<Vec<Poly>> = v2
        .iter()
        .map(|&w| {
            v1.iter()
                .map(|&i| mu_poly(&q.basis_bracket(i, w), a, b))
                .collect()
        })
        .collect();
    let xline_rank = generic_rank(&xline);
    let xline_kernel = v1.len() - xline_rank;

    // c1: ν ∈ V1 with [ν, V1] = 0 (t-free) and μ_t([ν, V2]) = 0
    let mut k0_rows = Vec::new();
    for &i in &v1 {
        for c in 0..dim {
            let row: Vec<Rat> = v1
                .iter()
                .map(|&p| q.basis_bracket(p, i)[c].clone())
                .collect();
            if !vec_is_zero(&row) {
                k0_rows.push(row);
            }
        }
    }
    let k0 = nullspace(&k0_rows, v1.len());
    let (c1_kernel, c1_poly) = if k0.is_empty() {
        (0usize, Poly::constant(Rat::one()))
    } else {
        // restrict the X-line pencil to K0
        let restricted: Vec<Vec<Poly>> = v2
            .iter()
            .map(|&w| {
                k0.iter()
                    .map(|kvec| {
                        let mut acc = Poly::zero();
                        for (pos, &i) in v1.iter().enumerate() {
                            if kvec[pos].is_zero() {
                                continue;
                            }
                            let p = mu_poly(&q.basis_bracket(i, w), a, b).scale(&kvec[pos]);
                            acc = acc.add(&p);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let r = generic_rank(&restricted);
        (k0.len() - r, rank_drop_poly(&restricted, r))
    };

    let c2_poly = rank_drop_poly(&c2, c2_rank);
    let xline_poly = rank_drop_poly(&xline, xline_rank);

    let mut rational_exceptional = Vec::new();
    let mut irrational = false;
    for (p, name) in [
        (&c2_poly, "c2 pencil"),
        (&xline_poly, "X-line pencil"),
        (&c1_poly, "c1 pencil"),
    ] {
        let (roots, irr) = exceptional_roots(p, &mut notes, name);
        for r in roots {
            if !rational_exceptional.contains(&r) {
                rational_exceptional.push(r);
            }
        }
        irrational |= irr;
    }
    // with no reductions at generic t the quotient layers are (d1, d2, 1)
    // uniformly: either those dims already reject, or the X-line must fail
    let dims_reject = v1.len() != v2.len() + 1;
    let closed = c2_kernel == 0
        && c1_kernel == 0
        && (dims_reject || xline_kernel != 1)
        && !irrational;
    notes.push(format!(
        "generic kernels: c2 = {c2_kernel}, c1 = {c1_kernel}, X-line = {xline_kernel};          dims reject = {dims_reject}; closed = {closed}"
    ));
    L2Analysis {
        closed,
        rational_exceptional,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::make_engel;
    use crate::hall::free_nilpotent;

    #[test]
    fn engel_recognizes_itself_exhaustively() {
        let g = make_engel(2);
        let out = find_engel_quotients(&g, &SearchOptions::default()).unwrap();
        assert!(out.exhaustive);
        assert_eq!(out.certs.len(), 1);
        assert_eq!(out.certs[0].n, 2);
        assert!(out.certs[0].ideal.is_zero());
    }

    #[test]
    fn free23_has_engel_quotient() {
        let f = free_nilpotent(2, 3);
        let out = find_engel_quotients(&f.algebra, &SearchOptions::default()).unwrap();
        assert!(!out.certs.is_empty());
        // first cert: ideal = span{[X2,[X1,X2]]} (the t = 0 line), n = 1
        let first = &out.certs[0];
        assert_eq!(first.n, 1);
        assert_eq!(first.ideal.dim(), 1);
        let h2 = unit_vec(f.algebra.dim(), 4);
        assert!(first.ideal.member(&h2).unwrap());
    }

    #[test]
    fn product_of_engels_has_engel_quotient() {
        let p = GradedLieAlgebra::product(&make_engel(1), &make_engel(1));
        let out = find_engel_quotients(&p, &SearchOptions::default()).unwrap();
        assert!(!out.certs.is_empty());
    }

    #[test]
    fn pencils_on_free23() {
        // every line in V3 gives an Engel quotient: analysis must not be
        // fooled into claiming closure with a 1-dim generic X-line kernel
        let f = free_nilpotent(2, 3);
        let analysis = l2_pencil_analysis(&f.algebra);
        assert!(!analysis.closed);
    }
}
