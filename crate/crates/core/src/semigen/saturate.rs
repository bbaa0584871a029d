//! The edge-saturation engine: a monotone, sound lower bound for the edge of
//! the semigroup generated by a horizontal half-space.
//!
//! Starting from `E0 = span(∂W)`, five rules grow the bound:
//!
//! - R1: the edge is a subalgebra — close under brackets;
//! - R2: for `Y` in the bound and `X ∈ V1` with `ad_Y² X` in the bound,
//!   `[X, Y]` joins the bound (each sign of X covers the wedge, and the edge
//!   is symmetric);
//! - R3: for `X, Y ∈ V1` with `ad_X² Y = ad_Y² X = 0`, `[X, Y]` joins;
//! - R4: `V2 ∩ Z(g)` joins;
//! - R5 (step ≤ 4 only): the ideal generated by `V2 ∩ E` joins.
//!
//! Every addition is recorded in a trace step that the certificate checker
//! replays independently.

use super::{HalfSpace, SemigenError};
use crate::lie::GradedLieAlgebra;
use crate::linalg::{nullspace, unit_vec, vec_is_zero, Subspace};
use crate::rat::Rat;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// One recorded rule application. `inputs` carry the hypothesis vectors the
/// checker must re-verify; `added` are the vectors joined to the bound.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub rule: RuleId,
    pub inputs: Vec<Vec<Rat>>,
    pub added: Vec<Vec<Rat>>,
}

/// The computed lower bound `E ⊆ e(Cl(s_W))` with its justification trace.
#[derive(Clone, Debug)]
pub struct EdgeApprox {
    pub e: Subspace,
    pub trace: Vec<TraceStep>,
}

/// Rule configuration. The default enables all rules; removing rules never
/// grows the fixpoint (monotonicity), which the tests exercise.
#[derive(Clone, Debug)]
pub struct SaturateOptions {
    pub rules: BTreeSet<RuleId>,
    /// When set, R2 ranges X over the subspace `V1 + E` rather than `V1`
    /// alone (every such vector or its negative lies in the wedge).
    pub r2_over_cone: bool,
    /// Extra V1 candidates (ambient vectors) for the R3 pair search.
    pub generators: Vec<Vec<Rat>>,
}

impl Default for SaturateOptions {
    fn default() -> Self {
        SaturateOptions {
            rules: [RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5]
                .into_iter()
                .collect(),
            r2_over_cone: false,
            generators: Vec::new(),
        }
    }
}

impl SaturateOptions {
    pub fn with_rules(rules: &[RuleId]) -> Self {
        SaturateOptions {
            rules: rules.iter().copied().collect(),
            ..Default::default()
        }
    }
}

struct Sat<'a> {
    g: &'a GradedLieAlgebra,
    e: Subspace,
    trace: Vec<TraceStep>,
}

impl<'a> Sat<'a> {
    fn add(&mut self, rule: RuleId, inputs: Vec<Vec<Rat>>, v: Vec<Rat>) -> bool {
        if vec_is_zero(&v) || self.e.member(&v).unwrap_or(false) {
            return false;
        }
        self.e = self.e.add_vector(&v).expect("edge growth");
        self.trace.push(TraceStep {
            rule,
            inputs,
            added: vec![v],
        });
        true
    }

    /// R1: bracket closure.
    fn rule1(&mut self) -> bool {
        let mut grew = false;
        loop {
            let basis = self.e.basis().to_vec();
            let mut step = false;
            'outer: for (i, a) in basis.iter().enumerate() {
                for b in basis.iter().skip(i + 1) {
                    let v = self.g.bracket(a, b);
                    if self.add(RuleId::R1, vec![a.clone(), b.clone()], v) {
                        step = true;
                        grew = true;
                        break 'outer;
                    }
                }
            }
            if !step {
                return grew;
            }
        }
    }

    /// R2: worklist over basis vectors Y of E; for each, solve the linear
    /// space of X with `ad_Y² X ∈ E` and add the brackets `[X, Y]`.
    fn rule2(&mut self, over_cone: bool) -> bool {
        let g = self.g;
        let dim = g.dim();
        let mut grew = false;
        loop {
            let mut step = false;
            let basis = self.e.basis().to_vec();
            for y in &basis {
                // domain for X
                let domain: Vec<Vec<Rat>> = if over_cone {
                    let mut rows: Vec<Vec<Rat>> =
                        g.layer_range(1).map(|i| unit_vec(dim, i)).collect();
                    rows.extend(self.e.basis().iter().cloned());
                    Subspace::from_rows(dim, rows)
                        .expect("cone domain")
                        .basis()
                        .to_vec()
                } else {
                    g.layer_range(1).map(|i| unit_vec(dim, i)).collect()
                };
                // membership of ad_Y² x in E is linear in x: impose that the
                // E-residual of ad_Y²(Σ c_k domain_k) vanishes
                let images: Vec<Vec<Rat>> = domain
                    .iter()
                    .map(|x| {
                        self.e
                            .reduce(&g.bracket(y, &g.bracket(y, x)))
                            .expect("reduce")
                    })
                    .collect();
                let constraint_rows: Vec<Vec<Rat>> = (0..dim)
                    .map(|c| images.iter().map(|im| im[c].clone()).collect())
                    .collect();
                let kernel = nullspace(&constraint_rows, domain.len());
                for coeffs in kernel {
                    let mut x = crate::linalg::vec_zero(dim);
                    for (k, c) in coeffs.iter().enumerate() {
                        crate::linalg::vec_axpy(&mut x, c, &domain[k]);
                    }
                    let ad2 = g.bracket(y, &g.bracket(y, &x));
                    debug_assert!(self.e.member(&ad2).unwrap());
                    let v = g.bracket(&x, y);
                    if self.add(RuleId::R2, vec![y.clone(), x], v) {
                        step = true;
                        grew = true;
                    }
                }
                if step {
                    break; // basis changed; restart the worklist
                }
            }
            if !step {
                return grew;
            }
        }
    }

    /// R3: pairs from the candidate list with both second ad-powers zero.
    fn rule3(&mut self, candidates: &[Vec<Rat>]) -> bool {
        let g = self.g;
        let mut grew = false;
        for (i, x) in candidates.iter().enumerate() {
            for y in candidates.iter().skip(i + 1) {
                let ad_x2y = g.bracket(x, &g.bracket(x, y));
                let ad_y2x = g.bracket(y, &g.bracket(y, x));
                if vec_is_zero(&ad_x2y) && vec_is_zero(&ad_y2x) {
                    let v = g.bracket(x, y);
                    if self.add(RuleId::R3, vec![x.clone(), y.clone()], v) {
                        grew = true;
                    }
                }
            }
        }
        grew
    }

    /// R4: central part of V2.
    fn rule4(&mut self) -> bool {
        let g = self.g;
        let central = g.center().by_layer.get(1).cloned();
        let Some(central) = central else { return false };
        let mut grew = false;
        for b in central.basis() {
            if self.add(RuleId::R4, vec![], b.clone()) {
                grew = true;
            }
        }
        grew
    }

    /// R5 (step ≤ 4): ideal generated by `V2 ∩ E`.
    fn rule5(&mut self) -> bool {
        let g = self.g;
        if g.step() > 4 {
            return false;
        }
        let v2e = self.e.intersect(&g.layer_subspace(2)).expect("V2 ∩ E");
        if v2e.is_zero() {
            return false;
        }
        let gens = v2e.basis().to_vec();
        let ideal = g.ideal_generated(&gens).expect("central-layer ideal");
        let mut added = Vec::new();
        let mut e = self.e.clone();
        for b in ideal.subspace.basis() {
            if !e.member(b).unwrap() {
                e = e.add_vector(b).unwrap();
                added.push(b.clone());
            }
        }
        if added.is_empty() {
            return false;
        }
        self.e = e;
        self.trace.push(TraceStep {
            rule: RuleId::R5,
            inputs: gens,
            added,
        });
        true
    }
}

/// Computes the edge lower bound for the half-space `W`, iterating the
/// configured rules to a fixpoint (at most `dim g` strict growth steps).
pub fn saturate_edge(
    g: &GradedLieAlgebra,
    w: &HalfSpace,
    opts: &SaturateOptions,
) -> Result<EdgeApprox, SemigenError> {
    g.require_stratified()?;
    let boundary = w.boundary(g)?;
    let mut sat = Sat {
        g,
        e: boundary,
        trace: Vec::new(),
    };
    // R3 candidates: the standard V1 basis, the star-chain generators, and
    // any configured extras.
    let mut candidates: Vec<Vec<Rat>> = g.layer_range(1).map(|i| unit_vec(g.dim(), i)).collect();
    if opts.rules.contains(&RuleId::R3) {
        let star = super::star::check_type_star(g);
        for row in star.final_subspace.basis() {
            let full = g.embed_v1(row);
            if !candidates.contains(&full) {
                candidates.push(full);
            }
        }
        for extra in &opts.generators {
            if extra.len() == g.dim() && g.in_layer(extra, 1) && !candidates.contains(extra) {
                candidates.push(extra.clone());
            }
        }
    }
    loop {
        let before = sat.e.dim();
        if opts.rules.contains(&RuleId::R1) {
            sat.rule1();
        }
        if opts.rules.contains(&RuleId::R2) {
            sat.rule2(opts.r2_over_cone);
        }
        if opts.rules.contains(&RuleId::R3) {
            sat.rule3(&candidates);
        }
        if opts.rules.contains(&RuleId::R4) {
            sat.rule4();
        }
        if opts.rules.contains(&RuleId::R5) {
            sat.rule5();
        }
        if sat.e.dim() == before {
            break;
        }
    }
    Ok(EdgeApprox {
        e: sat.e,
        trace: sat.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::make_engel;
    use crate::rat::int;

    #[test]
    fn engel_bad_halfspace_stays_put() {
        let g = make_engel(1);
        // λ = X*: ∂W = span{Y}
        let w = HalfSpace::new(vec![int(1), int(0)]).unwrap();
        let edge = saturate_edge(&g, &w, &SaturateOptions::default()).unwrap();
        assert_eq!(edge.e.dim(), 1);
        assert!(edge.trace.is_empty());
    }

    #[test]
    fn engel_good_halfspace_two_r2_steps() {
        let g = make_engel(1);
        // λ = Y*: ∂W = span{X}
        let w = HalfSpace::new(vec![int(0), int(1)]).unwrap();
        let edge = saturate_edge(&g, &w, &SaturateOptions::default()).unwrap();
        assert_eq!(edge.e.dim(), 3);
        assert!(edge.e.member(&unit_vec(4, 2)).unwrap());
        assert!(edge.e.member(&unit_vec(4, 3)).unwrap());
        let rules: Vec<RuleId> = edge.trace.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![RuleId::R2, RuleId::R2]);
    }

    #[test]
    fn heisenberg_center_rule() {
        let g = crate::lie::heisenberg();
        let w = HalfSpace::new(vec![int(1), int(1)]).unwrap();
        let edge = saturate_edge(&g, &w, &SaturateOptions::with_rules(&[RuleId::R4])).unwrap();
        assert!(edge.e.contains(&g.layer_subspace(2)).unwrap());
    }

    #[test]
    fn monotone_in_rules() {
        let g = make_engel(2);
        let w = HalfSpace::new(vec![int(1), int(2), int(-1)]).unwrap();
        let configs: Vec<Vec<RuleId>> = vec![
            vec![RuleId::R1],
            vec![RuleId::R1, RuleId::R2],
            vec![RuleId::R1, RuleId::R2, RuleId::R3],
            vec![RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4],
            vec![RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R5],
        ];
        let mut prev: Option<Subspace> = None;
        for c in configs {
            let edge = saturate_edge(&g, &w, &SaturateOptions::with_rules(&c)).unwrap();
            if let Some(p) = prev {
                assert!(edge.e.contains(&p).unwrap());
            }
            prev = Some(edge.e);
        }
    }
}
