//! Hall bases and free nilpotent Lie algebras.
//!
//! Hall's construction: order the generators first (the distinguished first
//! generator is minimal), then extend degree by degree. `[Y, Z]` is a basis
//! element of degree k iff (i) Y < Z, (ii) deg Y + deg Z = k, and (iii) if
//! Z = [U, V] then Y ≥ U. Arbitrary bracket trees expand into Hall
//! coordinates by recursive Jacobi rewriting; within a fixed total degree the
//! left element strictly increases in the Hall order, so the rewriting
//! terminates.

use crate::lie::{GradedLieAlgebra, SparseVec};
use crate::linalg::Subspace;
use crate::rat::{int, Rat};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// One Hall basis element: a generator or an ordered pair of earlier
/// elements, referenced by their basis positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    pub degree: usize,
    pub tree: HallTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HallTree {
    Gen(usize),
    /// `[left, right]`, indices into the Hall basis vector.
    Pair(usize, usize),
}

/// The complete Hall basis of the free nilpotent algebra of the given rank
/// and step, in order. The basis position is the total-order rank.
pub fn hall_basis(rank: usize, step: usize) -> Vec<HallElement> {
    assert!(rank >= 1 && step >= 1);
    let mut elems: Vec<HallElement> = (0..rank)
        .map(|i| HallElement {
            degree: 1,
            tree: HallTree::Gen(i),
        })
        .collect();
    for degree in 2..=step {
        let upto = elems.len();
        for a in 0..upto {
            for b in a + 1..upto {
                if elems[a].degree + elems[b].degree != degree {
                    continue;
                }
                let ok = match elems[b].tree {
                    HallTree::Gen(_) => true,
                    HallTree::Pair(u, _) => a >= u,
                };
                if ok {
                    elems.push(HallElement {
                        degree,
                        tree: HallTree::Pair(a, b),
                    });
                }
            }
        }
    }
    elems
}

/// Bracket-tree name like `[X1,[X1,X2]]`.
pub fn hall_name(elems: &[HallElement], i: usize) -> String {
    match elems[i].tree {
        HallTree::Gen(g) => format!("X{}", g + 1),
        HallTree::Pair(a, b) => format!("[{},{}]", hall_name(elems, a), hall_name(elems, b)),
    }
}

/// A free nilpotent Lie algebra together with its Hall basis.
#[derive(Clone, Debug)]
pub struct FreeNilpotent {
    pub rank: usize,
    pub step: usize,
    pub algebra: GradedLieAlgebra,
    pub elements: Vec<HallElement>,
}

struct Expander<'a> {
    elems: &'a [HallElement],
    pair_index: HashMap<(usize, usize), usize>,
    step: usize,
    memo: HashMap<(usize, usize), SparseVec>,
}

fn sparse_add(acc: &mut BTreeMap<usize, Rat>, v: &SparseVec, scale: &Rat) {
    for (k, c) in v {
        let entry = acc.entry(*k).or_insert_with(Rat::zero);
        *entry += c * scale;
    }
}

impl<'a> Expander<'a> {
    fn new(elems: &'a [HallElement], step: usize) -> Self {
        let pair_index = elems
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e.tree {
                HallTree::Pair(a, b) => Some(((a, b), i)),
                HallTree::Gen(_) => None,
            })
            .collect();
        Expander {
            elems,
            pair_index,
            step,
            memo: HashMap::new(),
        }
    }

    /// `[h_u, h_v]` in Hall coordinates.
    fn bracket(&mut self, u: usize, v: usize) -> SparseVec {
        if u == v {
            return vec![];
        }
        if self.elems[u].degree + self.elems[v].degree > self.step {
            return vec![];
        }
        if v < u {
            return self
                .bracket(v, u)
                .into_iter()
                .map(|(k, c)| (k, -c))
                .collect();
        }
        if let Some(hit) = self.memo.get(&(u, v)) {
            return hit.clone();
        }
        let result = match self.elems[v].tree {
            HallTree::Gen(_) => {
                // u < v and v is a generator, so u is one too: always Hall
                vec![(self.pair_index[&(u, v)], int(1))]
            }
            HallTree::Pair(x, y) => {
                if u >= x {
                    vec![(self.pair_index[&(u, v)], int(1))]
                } else {
                    // u < x: [u,[x,y]] = [[u,x],y] + [x,[u,y]]
                    let ux = self.bracket(u, x);
                    let uy = self.bracket(u, y);
                    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                    for (w, c) in &ux {
                        let t = self.bracket(*w, y);
                        sparse_add(&mut acc, &t, c);
                    }
                    for (w, c) in &uy {
                        let t = self.bracket(x, *w);
                        sparse_add(&mut acc, &t, c);
                    }
                    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                }
            }
        };
        self.memo.insert((u, v), result.clone());
        result
    }
}

/// Builds the free nilpotent Lie algebra of the given rank and step over the
/// Hall basis; the result passes full Jacobi validation.
pub fn free_nilpotent(rank: usize, step: usize) -> FreeNilpotent {
    let elems = hall_basis(rank, step);
    let mut layer_dims = vec![0usize; step];
    for e in &elems {
        layer_dims[e.degree - 1] += 1;
    }
    let names: Vec<String> = (0..elems.len()).map(|i| hall_name(&elems, i)).collect();
    let mut exp = Expander::new(&elems, step);
    let mut table: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let entry = exp.bracket(i, j);
            if !entry.is_empty() {
                table.insert((i, j), entry);
            }
        }
    }
    let algebra =
        GradedLieAlgebra::new(layer_dims, names, table).expect("free nilpotent algebra validates");
    FreeNilpotent {
        rank,
        step,
        algebra,
        elements: elems,
    }
}

/// Smallest subspace containing `seed` and closed under `ad_x`.
pub fn ad_power_closure(g: &GradedLieAlgebra, x: &[Rat], seed: &Subspace) -> Subspace {
    let mut s = seed.clone();
    loop {
        let mut rows = s.basis().to_vec();
        for b in s.basis() {
            rows.push(g.bracket(x, b));
        }
        let next = Subspace::from_rows(g.dim(), rows).expect("ad power closure");
        if next == s {
            return s;
        }
        s = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::make_engel;
    use crate::linalg::unit_vec;

    #[test]
    fn hall_basis_sizes() {
        let b = hall_basis(2, 3);
        assert_eq!(b.len(), 5);
        let names: Vec<String> = (0..b.len()).map(|i| hall_name(&b, i)).collect();
        assert_eq!(
            names,
            vec!["X1", "X2", "[X1,X2]", "[X1,[X1,X2]]", "[X2,[X1,X2]]"]
        );
        assert_eq!(hall_basis(3, 2).len(), 6);
        assert_eq!(hall_basis(2, 4).len(), 8);
    }

    #[test]
    fn free_nilpotent_builds_and_truncates() {
        let f = free_nilpotent(2, 3);
        assert_eq!(f.algebra.layer_dims(), &[2, 1, 2]);
        // degree-4 brackets vanish
        let dim = f.algebra.dim();
        let h1 = unit_vec(dim, 3); // [X1,[X1,X2]]
        let x1 = unit_vec(dim, 0);
        assert!(crate::linalg::vec_is_zero(&f.algebra.bracket(&h1, &x1)));
    }

    #[test]
    fn free_22_is_heisenberg() {
        let f = free_nilpotent(2, 2);
        assert_eq!(f.algebra.layer_dims(), &[2, 1]);
        let b = f.algebra.basis_bracket(0, 1);
        assert!(!crate::linalg::vec_is_zero(&b));
    }

    #[test]
    fn free_23_center_is_v3() {
        let f = free_nilpotent(2, 3);
        let c = f.algebra.center();
        assert_eq!(c.space.dim(), 2);
        assert_eq!(c.space, f.algebra.layer_subspace(3));
    }

    #[test]
    fn ad_closure_examples() {
        let g = make_engel(1);
        let x = unit_vec(4, 0);
        let seed = Subspace::span_of(4, &unit_vec(4, 1)).unwrap();
        let s = ad_power_closure(&g, &x, &seed);
        // span{Y, T}: ad_X T = 0
        assert_eq!(s.dim(), 2);
        assert!(s.member(&unit_vec(4, 2)).unwrap());
        assert!(!s.member(&unit_vec(4, 3)).unwrap());

        let zero = Subspace::zero(4);
        assert!(ad_power_closure(&g, &x, &zero).is_zero());

        let f = free_nilpotent(2, 3);
        let dim = f.algebra.dim();
        let x1 = unit_vec(dim, 0);
        let seed = Subspace::span_of(dim, &unit_vec(dim, 1)).unwrap();
        let s = ad_power_closure(&f.algebra, &x1, &seed);
        assert_eq!(s.dim(), 3); // X2, [X1,X2], [X1,[X1,X2]]
        assert!(s.member(&unit_vec(dim, 3)).unwrap());
    }
}
