//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the report is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatinv::equivariant::{euler_sum, Instance, Limits};
use quatinv::exact_quaternions::{left_mult_det, quat_norm, rat, FieldElem, Quat, Rational};
use quatinv::finite_groups::{admissible_pairs, build_group, resolve_subgroup, KHPair};
use quatinv::gain_arrangement::build_arrangement;
use quatinv::invariant_bases::verify_basis;
use quatinv::matroid::RankOracle;
use quatinv::os_algebra::{GradedVector, OsAlgebra};
use quatinv::parabolic_orbits::{closed_form_poincare, orbit_representatives};
use quatinv::primitive_pipeline::{full_stack_check, label_form, FormMatroid};

const PAIRS: &[(&str, &str)] = &[
    ("D2", "C2"),
    ("D2", "C4a"),
    ("D2", "C4b"),
    ("D2", "C4c"),
    ("D2", "D2"),
    ("D4", "C4"),
    ("D4", "C8"),
    ("D4", "D4"),
    ("D4", "D2a"),
    ("D4", "D2b"),
    ("T", "D2"),
    ("T", "T"),
    ("C4", "C2"),
    ("C4", "C4"),
];

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn pair(k: &str, h: &str) -> Arc<KHPair> {
    let kg = Arc::new(build_group(k.parse().unwrap()).unwrap());
    Arc::new(resolve_subgroup(&admissible_pairs(&kg), h).unwrap().clone())
}

fn inst(k: &str, h: &str, n: usize) -> Instance {
    Instance::new(pair(k, h), n, Limits::default()).unwrap()
}

fn instances() -> impl Iterator<Item = (String, Instance)> {
    PAIRS
        .iter()
        .flat_map(|&(k, h)| [2, 3].map(move |n| (format!("G_{n}({k},{h})"), inst(k, h, n))))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_vs_direct() -> Outcome {
    let mut count = 0;
    for (name, i) in instances() {
        let direct = i.poincare_direct().map_err(|e| e.to_string())?;
        let closed = closed_form_poincare(i.group().pair(), i.group().n()).map_err(|e| e.to_string())?;
        ensure(closed.trimmed() == &direct[..closed.trimmed().len()] && direct[closed.trimmed().len()..].iter().all(|&c| c == 0), || {
            format!("{name}: direct {direct:?} closed {:?}", closed.coeffs)
        })?;
        count += 1;
    }
    Ok(format!("{count} instances agree"))
}

fn n4_spot_check() -> Outcome {
    let direct = inst("D2", "C2", 4).poincare_direct().map_err(|e| e.to_string())?;
    ensure(direct == [1, 2, 2, 5, 4], || format!("got {direct:?}"))?;
    Ok(format!("G_4(D2,C2) gives {direct:?}"))
}

fn top_degree_n2() -> Outcome {
    let cases = [("D2", "D2", 1), ("T", "T", 1), ("C4", "C4", 1), ("C4", "C2", 2), ("D4", "C4", 4)];
    let mut got = Vec::new();
    for (k, h, want) in cases {
        let d = inst(k, h, 2).invariant_dimension(2).map_err(|e| e.to_string())?;
        ensure(d == want, || format!("G_2({k},{h}): {d} != {want}"))?;
        got.push(d);
    }
    Ok(format!("degree-6 dims {got:?}"))
}

fn euler_gdecomp_orbits() -> Outcome {
    let mut count = 0;
    for (name, i) in instances() {
        let p = i.poincare_direct().map_err(|e| e.to_string())?;
        ensure(euler_sum(&p) == 0, || format!("{name}: alternating sum of {p:?}"))?;
        for k in 0..p.len() {
            let (a, b) = i.gdecomp(k).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{name}: degree {k} gives {a} vs {b}"))?;
        }
        let n = i.group().n();
        let mut want = vec![0; n + 1];
        for r in orbit_representatives(i.group().pair(), n).map_err(|e| e.to_string())? {
            want[r.rank] += 1;
        }
        let got = i.flat_orbits().count_by_rank(n);
        ensure(want == got, || format!("{name}: orbit counts {got:?}, representatives {want:?}"))?;
        count += 1;
    }
    Ok(format!("{count} instances"))
}

fn random_vector(alg: &OsAlgebra, k: usize, rng: &mut ChaCha8Rng) -> GradedVector {
    let mut v = GradedVector::zero(k);
    for i in 0..alg.basis().degree(k).len() {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            v = v.add(&alg.basis_vector(k, i).scale(&rat(c, 1)));
        }
    }
    v
}

fn engine_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (k, h, n) in [("C2", "C2", 3), ("D2", "C2", 2), ("C4", "C1", 3)] {
        let name = format!("G_{n}({k},{h})");
        let i = inst(k, h, n);
        let alg = i.algebra();
        let gens = i.group().generators();
        for _ in 0..10 {
            for d in 1..=alg.rank() {
                let v = random_vector(alg, d, &mut rng);
                let dv = alg.derivation(&v).unwrap();
                if d >= 2 {
                    ensure(alg.derivation(&dv).unwrap().is_zero(), || format!("{name}: d^2 != 0"))?;
                }
                let h = alg.mu_map(&dv).add(&alg.derivation(&alg.mu_map(&v)).unwrap());
                ensure(h == v, || format!("{name}: mu d + d mu != id in degree {d}"))?;
                let g = gens.choose(&mut rng).unwrap();
                ensure(
                    alg.derivation(&i.act_on_vector(g, &v)).unwrap() == i.act_on_vector(g, &dv),
                    || format!("{name}: d is not equivariant"),
                )?;
            }
        }
        let lat = i.lattice();
        let whitney: Vec<usize> = (0..=lat.max_rank()).map(|r| lat.whitney_abs(r) as usize).collect();
        ensure(whitney == alg.dims(), || format!("{name}: dims {:?} vs |mu| sums {whitney:?}", alg.dims()))?;
        let mut order: Vec<usize> = (0..i.arrangement().num_hyperplanes()).collect();
        order.shuffle(&mut rng);
        let shuffled = i.reordered_poincare(&order).unwrap();
        ensure(shuffled == i.poincare_direct().unwrap(), || format!("{name}: order dependence"))?;
    }
    Ok("3 instances".into())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    for (k, n) in [("C2", 2), ("C2", 3), ("D2", 2), ("D2", 3)] {
        let kg = Arc::new(build_group(k.parse().unwrap()).unwrap());
        let arr = build_arrangement(kg.clone(), n, true).unwrap();
        let forms = arr.labels().iter().map(|&l| label_form(&kg, n, l).unwrap()).collect();
        let skew = FormMatroid::new(forms);
        let m = arr.num_hyperplanes();
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for size in 1..=4.min(m) {
            let mut next = Vec::new();
            for s in subsets.iter().filter(|s| s.len() == size - 1) {
                let start = s.last().map_or(0, |&x| x + 1);
                for x in start..m {
                    let mut t = s.clone();
                    t.push(x);
                    next.push(t);
                }
            }
            subsets.extend(next);
        }
        for _ in 0..500 {
            let size = rng.gen_range(1..=m);
            let mut all: Vec<usize> = (0..m).collect();
            all.shuffle(&mut rng);
            subsets.push(all[..size].to_vec());
        }
        for s in &subsets {
            let (a, b) = (arr.rank_of(s), skew.rank(s));
            ensure(a == b, || format!("{k} n={n} subset {s:?}: gain rank {a}, skew rank {b}"))?;
        }
        total += subsets.len();
    }
    Ok(format!("{total} subsets agree"))
}

fn bases() -> Outcome {
    let mut count = 0;
    for (name, i) in instances() {
        let rep = verify_basis(&i).map_err(|e| e.to_string())?;
        ensure(rep.verified(), || {
            let ranks: Vec<(usize, usize)> = rep.degrees.iter().map(|d| (d.rank, d.expected)).collect();
            format!("{name}: (rank, dim) per degree {ranks:?}")
        })?;
        count += 1;
    }
    Ok(format!("{count} instances, all degrees full rank"))
}

fn random_field(rng: &mut ChaCha8Rng) -> FieldElem {
    let mut r = || -> Rational { rat(rng.gen_range(-9..=9), rng.gen_range(1..=6)) };
    FieldElem::new(r(), r(), r(), r())
}

fn positivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in 0..100 {
        let q = Quat::new(random_field(&mut rng), random_field(&mut rng), random_field(&mut rng), random_field(&mut rng));
        let norm = quat_norm(&q);
        ensure(left_mult_det(&q) == &norm * &norm, || format!("sample {t}: {q}"))?;
    }
    let zero = left_mult_det(&Quat::zero());
    ensure(zero.is_zero(), || "det of 0".into())?;
    Ok("100 random quaternions".into())
}

fn full_stack() -> Outcome {
    for (k, h, n) in [("C2", "C2", 2), ("D2", "C2", 3)] {
        let r = full_stack_check(pair(k, h), n, Limits::default()).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{r:?}"))?;
    }
    Ok("G_2(C2,C2) and G_3(D2,C2) agree; primitive data not supplied: SKIPPED".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed form equals direct computation", closed_vs_direct),
        ("n=4 spot check", n4_spot_check),
        ("top degree for n=2", top_degree_n2),
        ("Euler, decomposition and orbit counts", euler_gdecomp_orbits),
        ("engine properties", engine_properties),
        ("gain rank equals skew rank", oracle_equivalence),
        ("invariant bases", bases),
        ("left multiplication determinant", positivity),
        ("matrix pipeline agrees with gain graphs", full_stack),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {title} ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
