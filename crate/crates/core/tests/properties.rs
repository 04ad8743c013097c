use std::sync::{Arc, LazyLock};

use proptest::prelude::*;

use quatinv::equivariant::{Instance, Limits};
use quatinv::exact_quaternions::{left_mult_det, quat_norm, rat, FieldElem, Quat};
use quatinv::finite_groups::{admissible_pairs, build_group, resolve_subgroup};
use quatinv::os_algebra::GradedVector;
use quatinv::primitive_pipeline::{label_form, skew_rank};

static G3: LazyLock<Instance> = LazyLock::new(|| instance("D2", "C2", 3));
static C4: LazyLock<Instance> = LazyLock::new(|| instance("C4", "C2", 3));

fn instance(k: &str, h: &str, n: usize) -> Instance {
    let kg = Arc::new(build_group(k.parse().unwrap()).unwrap());
    let pair = resolve_subgroup(&admissible_pairs(&kg), h).unwrap().clone();
    Instance::new(Arc::new(pair), n, Limits::default()).unwrap()
}

fn order() -> usize {
    G3.group().order() as usize
}

fn hyperplanes() -> usize {
    G3.arrangement().num_hyperplanes()
}

fn field() -> impl Strategy<Value = FieldElem> {
    prop::array::uniform4((-6i64..=6, 1i64..=4)).prop_map(|c| {
        let [a, b, x, y] = c.map(|(n, d)| rat(n, d));
        FieldElem::new(a, b, x, y)
    })
}

fn quat() -> impl Strategy<Value = Quat> {
    (field(), field(), field(), field()).prop_map(|(w, x, y, z)| Quat::new(w, x, y, z))
}

fn vector(inst: &'static Instance, k: usize) -> impl Strategy<Value = GradedVector> {
    let alg = inst.algebra();
    let len = alg.basis().degree(k).len();
    prop::collection::vec(-3i64..=3, len).prop_map(move |cs| {
        cs.iter().enumerate().fold(GradedVector::zero(k), |v, (i, &c)| {
            v.add(&alg.basis_vector(k, i).scale(&rat(c, 1)))
        })
    })
}

fn invariant_under_generators(inst: &Instance, v: &GradedVector) -> bool {
    inst.group().generators().iter().all(|g| inst.act_on_vector(g, v) == *v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quaternion_norm_is_multiplicative(p in quat(), q in quat()) {
        prop_assert_eq!(quat_norm(&(&p * &q)), &quat_norm(&p) * &quat_norm(&q));
    }

    #[test]
    fn quaternion_product_is_associative(p in quat(), q in quat(), r in quat()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn determinant_is_squared_norm(q in quat()) {
        let n = quat_norm(&q);
        prop_assert_eq!(left_mult_det(&q), &n * &n);
    }

    #[test]
    fn element_index_round_trip(idx in 0..order()) {
        let g = G3.group();
        prop_assert_eq!(g.index_of(&g.element(idx)), idx);
    }

    #[test]
    fn hyperplane_action_is_a_left_action(a in 0..order(), b in 0..order()) {
        let g = G3.group();
        let (x, y) = (g.element(a), g.element(b));
        let xy = g.compose(&x, &y);
        for &h in G3.arrangement().labels() {
            prop_assert_eq!(
                g.act_on_hyperplane(&xy, h),
                g.act_on_hyperplane(&x, g.act_on_hyperplane(&y, h))
            );
        }
        prop_assert!(g.compose(&x, &g.inverse(&x)) == g.identity());
    }

    #[test]
    fn hyperplane_perms_are_bijections(a in 0..order()) {
        let mut p = G3.perm_of(&G3.group().element(a));
        p.sort_unstable();
        prop_assert!(p.iter().enumerate().all(|(i, &x)| x as usize == i));
    }

    #[test]
    fn projection_is_idempotent_and_invariant(v in vector(&C4, 2)) {
        let e = C4.epsilon_project(&v);
        prop_assert!(invariant_under_generators(&C4, &e));
        prop_assert_eq!(C4.epsilon_project(&e), e);
    }

    #[test]
    fn derivation_is_linear(u in vector(&G3, 2), v in vector(&G3, 2), c in -4i64..=4) {
        let alg = G3.algebra();
        let lhs = alg.derivation(&u.scale(&rat(c, 1)).add(&v)).unwrap();
        let rhs = alg.derivation(&u).unwrap().scale(&rat(c, 1)).add(&alg.derivation(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_is_graded_leibniz(u in vector(&G3, 1), v in vector(&G3, 2)) {
        let alg = G3.algebra();
        let lhs = alg.derivation(&alg.multiply(&u, &v)).unwrap();
        let rhs = alg
            .multiply(&alg.derivation(&u).unwrap(), &v)
            .sub(&alg.multiply(&u, &alg.derivation(&v).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn straightening_respects_transpositions(a in 0..hyperplanes(), b in 0..hyperplanes(), c in 0..hyperplanes()) {
        prop_assume!(a != b && b != c && a != c);
        let alg = G3.algebra();
        let x = alg.straighten(&[a, b, c]).unwrap();
        let y = alg.straighten(&[b, a, c]).unwrap();
        prop_assert_eq!(x.add(&y), GradedVector::zero(3));
    }

    #[test]
    fn skew_rank_matches_gain_rank(set in prop::collection::btree_set(0..hyperplanes(), 1..6)) {
        let arr = G3.arrangement();
        let k = G3.group().k();
        let set: Vec<usize> = set.into_iter().collect();
        let forms: Vec<_> = set.iter().map(|&i| label_form(k, 3, arr.labels()[i]).unwrap()).collect();
        prop_assert_eq!(skew_rank(&forms), arr.rank_of(&set));
    }
}
