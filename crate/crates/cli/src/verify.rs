//! Verification suites run by `quatinv verify`.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use quatinv::equivariant::{euler_sum, Instance, Limits};
use quatinv::invariant_bases::verify_basis;
use quatinv::os_algebra::GradedVector;
use quatinv::parabolic_orbits::{closed_form_poincare, orbit_representatives, rank1_orbit_count, PoincarePolynomial};
use quatinv::primitive_pipeline::{full_stack_check, load_dir, run_pipeline, DEFAULT_GROUP_CAP};
use quatinv::{Error, Result};

use crate::{instance_name, resolve_pair, Output, Suite};

pub const IMPRIMITIVE_PAIRS: &[(&str, &str)] = &[
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

const DIM2_PAIRS: &[(&str, &str)] = &[
    ("D2", "C2"),
    ("D2", "C4a"),
    ("D2", "D2"),
    ("D3", "C3"),
    ("D3", "D3"),
    ("D4", "C4"),
    ("D4", "C8"),
    ("D4", "D2a"),
    ("D4", "D4"),
    ("T", "D2"),
    ("T", "T"),
    ("O", "T"),
    ("O", "O"),
    ("C4", "C2"),
    ("C6", "C3"),
];

const CYCLIC_PAIRS: &[(&str, &str)] = &[
    ("C1", "C1"),
    ("C2", "C1"),
    ("C2", "C2"),
    ("C3", "C1"),
    ("C3", "C3"),
    ("C4", "C1"),
    ("C4", "C2"),
    ("C4", "C4"),
    ("C6", "C1"),
    ("C6", "C2"),
    ("C6", "C3"),
    ("C6", "C6"),
];

const ENGINE_INSTANCES: &[(&str, &str, usize)] = &[("C2", "C2", 3), ("D2", "C2", 2), ("C4", "C1", 3), ("C1", "C1", 4)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub instance: String,
    pub expected: Value,
    pub computed: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

pub struct Report {
    suite: &'static str,
    checks: Vec<Check>,
    timings: bool,
}

impl Report {
    fn record(&mut self, id: &str, instance: &str, f: impl FnOnce() -> Result<(Value, Value, bool)>) {
        let start = Instant::now();
        let (expected, computed, status) = match f() {
            Ok((e, c, ok)) => (e, c, if ok { Status::Pass } else { Status::Fail }),
            Err(e @ Error::SizeGuard { .. }) => (Value::Null, json!(e.to_string()), Status::Skipped),
            Err(e) => (Value::Null, json!(e.to_string()), Status::Fail),
        };
        self.checks.push(Check {
            id: id.into(),
            instance: instance.into(),
            expected,
            computed,
            status,
            seconds: self.timings.then(|| start.elapsed().as_secs_f64()),
        });
    }

    fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn into_output(self) -> Output {
        let failed = self.count(Status::Fail);
        let json = json!({
            "suite": self.suite,
            "passed": self.count(Status::Pass),
            "failed": failed,
            "skipped": self.count(Status::Skipped),
            "checks": self.checks,
        });
        let csv = std::iter::once(
            ["id", "instance", "expected", "computed", "status"].map(String::from).to_vec(),
        )
        .chain(self.checks.iter().map(|c| {
            vec![
                c.id.clone(),
                c.instance.clone(),
                c.expected.to_string(),
                c.computed.to_string(),
                serde_json::to_value(c.status).unwrap().as_str().unwrap().to_string(),
            ]
        }))
        .collect();
        Output { json, csv: Some(csv), ok: failed == 0 }
    }
}

pub fn run_suite(suite: Suite, primitive_dir: Option<&Path>, limits: Limits, timings: bool) -> Report {
    let name = match suite {
        Suite::Imprimitive => "imprimitive",
        Suite::Dim2 => "dim2",
        Suite::Complexcyclic => "complexcyclic",
        Suite::Engine => "engine",
        Suite::Primitive => "primitive",
        Suite::All => "all",
    };
    let mut r = Report { suite: name, checks: Vec::new(), timings };
    let all = suite == Suite::All;
    if all || suite == Suite::Imprimitive {
        imprimitive(&mut r, limits);
    }
    if all || suite == Suite::Dim2 {
        dim2(&mut r, limits);
    }
    if all || suite == Suite::Complexcyclic {
        complex_cyclic(&mut r, limits);
    }
    if all || suite == Suite::Engine {
        engine(&mut r, limits);
    }
    if all || suite == Suite::Primitive {
        primitive(&mut r, primitive_dir, limits);
    }
    r
}

fn build(r: &mut Report, k: &str, h: &str, n: usize, limits: Limits) -> Option<(String, Instance)> {
    let label = format!("G_{n}({k},{h})");
    let built = resolve_pair(k, h).and_then(|p| {
        let name = instance_name(&p, n);
        Instance::new(p, n, limits).map(|i| (name, i))
    });
    match built {
        Ok(x) => Some(x),
        Err(e) => {
            r.record("build", &label, || Err(e));
            None
        }
    }
}

fn closed_vs_direct(r: &mut Report, name: &str, inst: &Instance) {
    r.record("closed-vs-direct", name, || {
        let closed = closed_form_poincare(inst.group().pair(), inst.group().n())?;
        let direct = PoincarePolynomial::new(inst.poincare_direct()?);
        Ok((json!(closed.coeffs), json!(direct.coeffs), closed.same_as(&direct)))
    });
}

fn euler(r: &mut Report, name: &str, inst: &Instance) {
    r.record("euler", name, || {
        let s = euler_sum(&inst.poincare_direct()?);
        Ok((json!(0), json!(s), s == 0))
    });
}

fn imprimitive(r: &mut Report, limits: Limits) {
    for &(k, h) in IMPRIMITIVE_PAIRS {
        for n in [2, 3] {
            let Some((name, inst)) = build(r, k, h, n, limits) else { continue };
            closed_vs_direct(r, &name, &inst);
            euler(r, &name, &inst);
            r.record("gdecomp", &name, || {
                let sides = (0..=inst.algebra().rank()).map(|d| inst.gdecomp(d)).collect::<Result<Vec<_>>>()?;
                let (lhs, rhs): (Vec<usize>, Vec<usize>) = sides.into_iter().unzip();
                Ok((json!(lhs), json!(rhs), lhs == rhs))
            });
            r.record("orbit-representatives", &name, || {
                let reps = orbit_representatives(inst.group().pair(), n)?;
                let mut expected = vec![0; n + 1];
                reps.iter().for_each(|x| expected[x.rank] += 1);
                let computed = inst.flat_orbits().count_by_rank(n);
                Ok((json!(expected), json!(computed), expected == computed))
            });
            if n == 3 {
                r.record("basis", &name, || {
                    let rep = verify_basis(&inst)?;
                    let expected: Vec<usize> = rep.degrees.iter().map(|d| d.expected).collect();
                    let computed: Vec<usize> = rep.degrees.iter().map(|d| d.rank).collect();
                    Ok((json!(expected), json!(computed), rep.verified()))
                });
            }
        }
    }
}

fn dim2(r: &mut Report, limits: Limits) {
    for &(k, h, top) in &[("D2", "D2", 1usize), ("C4", "C2", 2), ("D4", "C4", 4)] {
        let Some((name, inst)) = build(r, k, h, 2, limits) else { continue };
        r.record("top-degree", &name, || {
            let d = inst.invariant_dimension(2)?;
            Ok((json!(top), json!(d), d == top))
        });
    }
    for &(k, h) in DIM2_PAIRS {
        let Some((name, inst)) = build(r, k, h, 2, limits) else { continue };
        r.record("rank1-orbits", &name, || {
            let a = rank1_orbit_count(inst.group().pair());
            let brute = inst.flat_orbits().count_by_rank(2)[1];
            Ok((json!(a), json!(brute), a == brute))
        });
        closed_vs_direct(r, &name, &inst);
        r.record("dim2-basis", &name, || {
            let rep = verify_basis(&inst)?;
            let expected: Vec<usize> = rep.degrees.iter().map(|d| d.expected).collect();
            let computed: Vec<usize> = rep.degrees.iter().map(|d| d.rank).collect();
            Ok((json!(expected), json!(computed), rep.verified()))
        });
    }
}

fn complex_cyclic(r: &mut Report, limits: Limits) {
    for &(k, h) in CYCLIC_PAIRS {
        for n in [2, 3, 4] {
            let Some((name, inst)) = build(r, k, h, n, limits) else { continue };
            closed_vs_direct(r, &name, &inst);
        }
    }
}

fn engine(r: &mut Report, limits: Limits) {
    for &(k, h, n) in ENGINE_INSTANCES {
        let Some((name, inst)) = build(r, k, h, n, limits) else { continue };
        let alg = inst.algebra();
        let basis: Vec<GradedVector> = (1..=alg.rank())
            .flat_map(|d| (0..alg.basis().degree(d).len()).map(move |i| (d, i)))
            .map(|(d, i)| alg.basis_vector(d, i))
            .collect();
        r.record("d-squared", &name, || {
            let mut bad = 0;
            for v in basis.iter().filter(|v| v.degree() >= 2) {
                bad += usize::from(!alg.derivation(&alg.derivation(v)?)?.is_zero());
            }
            Ok((json!(0), json!(bad), bad == 0))
        });
        r.record("mu-homotopy", &name, || {
            let mut bad = usize::from(alg.derivation(&alg.mu_map(&GradedVector::one()))? != GradedVector::one());
            for v in &basis {
                let lhs = alg.mu_map(&alg.derivation(v)?).add(&alg.derivation(&alg.mu_map(v))?);
                bad += usize::from(lhs != *v);
            }
            Ok((json!(0), json!(bad), bad == 0))
        });
        r.record("equivariance", &name, || {
            let mut bad = 0;
            for g in inst.group().generators() {
                for v in &basis {
                    let a = alg.derivation(&inst.act_on_vector(&g, v))?;
                    let b = inst.act_on_vector(&g, &alg.derivation(v)?);
                    bad += usize::from(a != b);
                }
            }
            Ok((json!(0), json!(bad), bad == 0))
        });
        r.record("whitney", &name, || {
            let lat = inst.lattice();
            let whitney: Vec<i64> = (0..=lat.max_rank()).map(|d| lat.whitney_abs(d)).collect();
            let dims: Vec<i64> = alg.dims().iter().map(|&d| d as i64).collect();
            Ok((json!(whitney), json!(dims), whitney == dims))
        });
        euler(r, &name, &inst);
        r.record("order-independence", &name, || {
            let m = inst.arrangement().num_hyperplanes();
            let direct = inst.poincare_direct()?;
            let stride = (5..).find(|&s| num_integer::gcd(s, m) == 1).expect("coprime stride");
            let order: Vec<usize> = (0..m).map(|i| (i * stride + 3) % m).collect();
            let shuffled = inst.reordered_poincare(&order)?;
            Ok((json!(direct), json!(shuffled), direct == shuffled))
        });
    }
}

fn primitive(r: &mut Report, dir: Option<&Path>, limits: Limits) {
    for &(k, h, n) in &[("C2", "C2", 2usize), ("D2", "C2", 3)] {
        let name = format!("G_{n}({k},{h})");
        r.record("full-stack", &name, || {
            let rep = full_stack_check(resolve_pair(k, h)?, n, limits)?;
            let ok = rep.passed();
            Ok((json!(rep.invariant_dims.1), json!(rep), ok))
        });
    }
    let files = match dir {
        Some(d) => match load_dir(d) {
            Ok(f) => f,
            Err(e) => {
                r.record("primitive-data", &d.display().to_string(), || Err(e));
                return;
            }
        },
        None => Vec::new(),
    };
    if files.is_empty() {
        r.checks.push(Check {
            id: "table3".into(),
            instance: "primitive groups".into(),
            expected: Value::Null,
            computed: json!("no generator data supplied"),
            status: Status::Skipped,
            seconds: None,
        });
        return;
    }
    for (path, data) in files {
        r.record("table3", &path.display().to_string(), || {
            let rep = run_pipeline(&data, DEFAULT_GROUP_CAP, limits)?;
            Ok((json!(rep.expected_poincare), json!(rep.invariant_dims), rep.passed()))
        });
    }
}
