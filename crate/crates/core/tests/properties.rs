//! Property tests for the algebraic invariants: subspace lattice identities,
//! BCH group laws, dilation equivariance, and the exact agreement between
//! BCH products and composed realization flows.

use carnot_core::bch::{bch_product, bch_word};
use carnot_core::engel::{chart_of_exp, flow_word, make_engel};
use carnot_core::linalg::{QForm, Subspace};
use carnot_core::rat::{int, rat, Rat};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn vec_of(len: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(small_rat(), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_idempotent_and_order_free(rows in proptest::collection::vec(vec_of(4), 0..4), perm in any::<u64>()) {
        let s = Subspace::from_rows(4, rows.clone()).unwrap();
        let again = Subspace::from_rows(4, s.basis().to_vec()).unwrap();
        prop_assert_eq!(&s, &again);
        let mut shuffled = rows;
        if shuffled.len() > 1 {
            let k = (perm as usize) % shuffled.len();
            shuffled.rotate_left(k);
        }
        let t = Subspace::from_rows(4, shuffled).unwrap();
        prop_assert_eq!(s, t);
    }

    #[test]
    fn dimension_formula(a in proptest::collection::vec(vec_of(5), 0..4), b in proptest::collection::vec(vec_of(5), 0..4)) {
        let a = Subspace::from_rows(5, a).unwrap();
        let b = Subspace::from_rows(5, b).unwrap();
        let sum = a.sum(&b).unwrap();
        let inter = a.intersect(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), sum.dim() + inter.dim());
        prop_assert!(sum.contains(&a).unwrap() && sum.contains(&b).unwrap());
        prop_assert!(a.contains(&inter).unwrap() && b.contains(&inter).unwrap());
    }

    #[test]
    fn semidefinite_radical_is_zero_set(v in vec_of(3), w in vec_of(3), probe in vec_of(3)) {
        // q(x) = <v,x>² + <w,x>² is positive semidefinite
        let m: Vec<Vec<Rat>> = (0..3).map(|i| (0..3).map(|j| {
            &v[i] * &v[j] + &w[i] * &w[j]
        }).collect()).collect();
        let q = QForm::new(m).unwrap();
        prop_assert_eq!(q.semidefinite_sign(), Some(1));
        let rad = q.radical();
        prop_assert_eq!(q.eval(&probe) == Rat::from_integer(0.into()), rad.member(&probe).unwrap());
    }

    #[test]
    fn bch_associativity_and_inverse(a in vec_of(6), b in vec_of(6), c in vec_of(6)) {
        let g = make_engel(2);
        let ab_c = bch_product(&g, &bch_product(&g, &a, &b).unwrap(), &c).unwrap();
        let a_bc = bch_product(&g, &a, &bch_product(&g, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let inv = carnot_core::linalg::vec_neg(&a);
        prop_assert!(carnot_core::linalg::vec_is_zero(&bch_product(&g, &a, &inv).unwrap()));
    }

    #[test]
    fn bch_dilation_equivariance(a in vec_of(6), b in vec_of(6), t in small_rat()) {
        let g = make_engel(2);
        let lhs = bch_product(&g, &g.dilate(&a, &t), &g.dilate(&b, &t)).unwrap();
        let rhs = g.dilate(&bch_product(&g, &a, &b).unwrap(), &t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn flow_matches_bch(word in proptest::collection::vec((vec_of(4), small_rat()), 1..5)) {
        // in En^1: composing segment flows equals the chart point of the BCH
        // product of the segment logs
        let g = make_engel(1);
        let endpoint = flow_word(1, &word);
        let logs: Vec<Vec<Rat>> = word
            .iter()
            .map(|(dir, t)| carnot_core::linalg::vec_scale(dir, t))
            .collect();
        let total = bch_word(&g, &logs).unwrap();
        prop_assert_eq!(endpoint, chart_of_exp(1, &total));
    }
}

#[test]
fn flow_matches_bch_fixed_words() {
    // log(exp(Y)exp(X)) = X + Y + T/2 + Z/12, cross-checked through the chart
    let g = make_engel(1);
    let mut x = vec![int(0); 4];
    x[0] = int(1);
    let mut y = vec![int(0); 4];
    y[1] = int(1);
    let word = vec![(y.clone(), int(1)), (x.clone(), int(1))];
    let endpoint = flow_word(1, &word);
    let total = bch_word(&g, &[y, x]).unwrap();
    assert_eq!(endpoint, chart_of_exp(1, &total));
    assert_eq!(total[2], rat(1, 2));
    assert_eq!(total[3], rat(1, 12));
}
