use proptest::prelude::*;

use takiff_core::algebra::{casimir, rewrite, straighten, Expression, Generator, Schedule, Straightener};
use takiff_core::ext::casimir_scalar;
use takiff_core::linalg::SparseMatrix;
use takiff_core::module::{check_relations, simple_module, verma, Character, TruncatedModule};
use takiff_core::rational::{fmt_q, parse_q, q, q_frac, Q};
use takiff_core::structure::{multiplicities, DEFAULT_GUARD};
use takiff_core::Weight;

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..=30, 1i64..=8).prop_map(|(n, d)| q_frac(n, d))
}

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![
        (rational(), rational()).prop_map(|(h, hb)| Weight::new(h, hb)),
        (rational()).prop_map(|h| Weight::new(h, q(0))),
        (0i64..=5).prop_map(|n| Weight::ints(n, 0)),
    ]
}

fn generator() -> impl Strategy<Value = Generator> {
    (0usize..6).prop_map(|i| Generator::ALL[i])
}

fn expression(max_terms: usize, max_len: usize) -> impl Strategy<Value = Expression> {
    prop::collection::vec((rational(), prop::collection::vec(generator(), 0..=max_len)), 1..=max_terms)
        .prop_map(|terms| Expression { terms })
}

fn small_matrix() -> impl Strategy<Value = SparseMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-3i64..=3).prop_map(q), c), r)
            .prop_map(|rows| SparseMatrix::from_dense(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rewriting_is_confluent(e in expression(3, 5)) {
        let left = rewrite(&e, Schedule::Leftmost);
        let right = rewrite(&e, Schedule::Rightmost);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(straighten(&e), left);
    }

    #[test]
    fn straightened_product_is_associative(a in expression(2, 3), b in expression(2, 3), c in expression(2, 3)) {
        let mut s = Straightener::new();
        let (a, b, c) = (s.straighten(&a), s.straighten(&b), s.straighten(&c));
        let ab_c = { let ab = s.mul(&a, &b); s.mul(&ab, &c) };
        let a_bc = { let bc = s.mul(&b, &c); s.mul(&a, &bc) };
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn product_matches_concatenation(a in expression(2, 3), b in expression(2, 3)) {
        let mut s = Straightener::new();
        let (sa, sb) = (s.straighten(&a), s.straighten(&b));
        prop_assert_eq!(s.mul(&sa, &sb), straighten(&a.times(&b)));
    }

    #[test]
    fn rationals_round_trip(x in rational()) {
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }

    #[test]
    fn kernel_is_annihilated(m in small_matrix()) {
        let ker = m.kernel();
        prop_assert_eq!(ker.len() + m.rank(), m.ncols());
        for v in &ker {
            prop_assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn verma_modules_satisfy_relations(l in weight(), depth in 1usize..=4) {
        prop_assert!(check_relations(&verma(&l, depth)).passed());
    }

    #[test]
    fn simple_modules_satisfy_relations(l in weight(), depth in 1usize..=5) {
        prop_assert!(check_relations(&simple_module(&l, depth)).passed());
    }

    #[test]
    fn casimir_is_scalar_on_verma(l in weight()) {
        let m = verma(&l, 3);
        let c = casimir();
        let scalar = casimir_scalar(&l);
        for n in 0..=2 {
            let got = m.act_element(&c, n).expect("defined below the cut");
            prop_assert_eq!(got, SparseMatrix::scalar(m.dims()[n], &scalar));
        }
    }

    #[test]
    fn peeling_reconstructs(l in weight()) {
        let ch = verma(&l, 8).character();
        let t = multiplicities(&ch, DEFAULT_GUARD).unwrap();
        prop_assert_eq!(t.reconstruct(), ch.padded()[..=t.trusted_depth].to_vec());
    }

    #[test]
    fn duality_keeps_character(l in weight(), depth in 1usize..=5) {
        for m in [verma(&l, depth), simple_module(&l, depth)] {
            prop_assert_eq!(m.dualize().character(), m.character());
        }
    }

    #[test]
    fn weights_round_trip(l in weight()) {
        let s = serde_json::to_string(&l).unwrap();
        prop_assert_eq!(serde_json::from_str::<Weight>(&s).unwrap(), l);
    }

    #[test]
    fn characters_round_trip(l in weight(), depth in 0usize..=6) {
        let ch = simple_module(&l, depth).character();
        let s = serde_json::to_string(&ch).unwrap();
        prop_assert_eq!(serde_json::from_str::<Character>(&s).unwrap(), ch);
    }

    #[test]
    fn modules_round_trip(l in weight(), depth in 0usize..=4) {
        for m in [verma(&l, depth), simple_module(&l, depth)] {
            let s = serde_json::to_string(&m).unwrap();
            prop_assert_eq!(serde_json::from_str::<TruncatedModule>(&s).unwrap(), m);
        }
    }
}
