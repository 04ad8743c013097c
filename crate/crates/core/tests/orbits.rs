use std::sync::Arc;

use quatinv::equivariant::{Instance, Limits};
use quatinv::finite_groups::{admissible_pairs, build_group, resolve_subgroup, KHPair};
use quatinv::parabolic_orbits::{closed_form_poincare, orbit_representatives, rank1_orbit_count, PoincarePolynomial};

fn pair(k: &str, h: &str) -> Arc<KHPair> {
    let kg = Arc::new(build_group(k.parse().unwrap()).unwrap());
    Arc::new(resolve_subgroup(&admissible_pairs(&kg), h).unwrap().clone())
}

fn check(k: &str, h: &str, n: usize) {
    let p = pair(k, h);
    let inst = Instance::new(p.clone(), n, Limits::default()).unwrap();
    let orbits = inst.flat_orbits();
    let lat = inst.lattice();
    let mut orbit_of = vec![usize::MAX; lat.flats.len()];
    let group = inst.group();
    for (o, (rep, _)) in orbits.orbits.iter().enumerate() {
        for g in group.iter() {
            orbit_of[lat.position(&group.act_on_flat(&g, rep)).unwrap()] = o;
        }
    }
    let reps = orbit_representatives(&p, n).unwrap();
    let mut hit = vec![false; orbits.orbits.len()];
    for r in &reps {
        let x = r.flat(p.k(), n);
        assert_eq!(x.rank(), r.rank);
        let o = orbit_of[lat.position(&x).expect("representative is a flat")];
        assert!(!hit[o], "{k} {h} {n}: {r:?} repeats an orbit");
        hit[o] = true;
    }
    assert!(hit.iter().all(|&b| b), "{k} {h} {n}: missing orbits");
    assert_eq!(
        orbits.count_by_rank(n),
        {
            let mut c = vec![0; n + 1];
            reps.iter().for_each(|r| c[r.rank] += 1);
            c
        }
    );
}

#[test]
fn representatives_hit_each_orbit_once() {
    for (k, h, n) in [
        ("C2", "C2", 2),
        ("C2", "C2", 3),
        ("C4", "C2", 3),
        ("C4", "C2", 4),
        ("C4", "C4", 3),
        ("C6", "C3", 3),
        ("D2", "C2", 2),
        ("D2", "C2", 3),
        ("D2", "C4a", 3),
        ("D2", "D2", 3),
        ("D4", "C4", 2),
        ("D4", "C4", 3),
        ("D4", "C8", 2),
        ("D3", "C3", 3),
        ("T", "D2", 2),
    ] {
        check(k, h, n);
    }
}

#[test]
fn rank_one_orbits_match_dimension_two() {
    for (k, h) in [("D2", "C2"), ("D2", "D2"), ("D4", "C4"), ("C4", "C2"), ("C4", "C1"), ("C3", "C1"), ("T", "T")] {
        let p = pair(k, h);
        let inst = Instance::new(p.clone(), 2, Limits::default()).unwrap();
        assert_eq!(inst.flat_orbits().count_by_rank(2)[1], rank1_orbit_count(&p), "{k} {h}");
    }
}

#[test]
fn closed_form_without_coordinate_hyperplanes() {
    for (k, n) in [("C1", 3), ("C1", 4), ("C2", 3), ("C2", 4), ("C3", 3), ("C4", 3), ("C6", 3)] {
        let p = pair(k, "C1");
        let inst = Instance::new(p.clone(), n, Limits::default()).unwrap();
        let direct = inst.poincare_direct().unwrap();
        let closed = closed_form_poincare(&p, n).unwrap();
        assert!(closed.same_as(&PoincarePolynomial::new(direct.clone())), "{k} n={n}: {direct:?} vs {:?}", closed.coeffs);
    }
}
