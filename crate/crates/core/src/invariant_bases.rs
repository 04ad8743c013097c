//! Explicit bases of the invariant cohomology.
//!
//! Distinguished hyperplanes: `h_1 = ker x_1`, `h_i = ker(x_{i-1} - x_i)`
//! and `h_2^α = ker(x_1 - α x_2)`. Each basis type contributes monomials in
//! these, and the averaged monomials `ε_G · b` are checked to be independent
//! and to span the invariants degree by degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::equivariant::{epsilon_project, Instance, LocalAction};
use crate::error::{Error, Result};
use crate::exact_quaternions::Rational;
use crate::finite_groups::Elem;
use crate::gain_arrangement::HyperplaneLabel;
use crate::os_algebra::GradedVector;
use crate::parabolic_orbits::{rank1_orbit_count, tdi_representatives, top_dimension, BasisType};

/// Label of `h_i` (1-based), or of `h_2^α` when `alpha` is given.
pub fn distinguished(i: usize, alpha: Option<Elem>) -> HyperplaneLabel {
    match (i, alpha) {
        (1, _) => HyperplaneLabel::Coord(0),
        (2, Some(a)) => HyperplaneLabel::Edge { i: 0, j: 1, gain: a },
        _ => HyperplaneLabel::Edge { i: i - 2, j: i - 1, gain: 0 },
    }
}

/// The gains `ξ` used for `h_2^ξ` in a type: several only for the top two
/// flats when the top-degree invariants are not one-dimensional.
fn alphas(inst: &Instance, t: BasisType) -> Vec<Elem> {
    let pair = inst.group().pair();
    let n = inst.group().n();
    let top = matches!(t, BasisType::G(k) if k == n) || matches!(t, BasisType::GA1(k) if k + 1 == n);
    match top_dimension(pair, n) {
        2 if top => {
            let a = pair.quotient_generator().expect("cyclic quotient");
            vec![0, a]
        }
        4 if top => pair.transversal().to_vec(),
        _ => vec![0],
    }
}

/// Monomials (as hyperplane labels) of `B_T`.
pub fn basis_labels(inst: &Instance, t: BasisType) -> Vec<Vec<HyperplaneLabel>> {
    alphas(inst, t)
        .into_iter()
        .map(|a| {
            let idx: Vec<usize> = match t {
                BasisType::G(k) => (1..=k).collect(),
                BasisType::GA1(1) => vec![2],
                BasisType::GA1(k) => (1..k).chain(std::iter::once(k + 1)).collect(),
            };
            idx.into_iter().map(|i| distinguished(i, Some(a))).collect()
        })
        .collect()
}

/// `B_T` as vectors of the OS algebra, before averaging.
pub fn build_basis(inst: &Instance, t: BasisType) -> Result<Vec<GradedVector>> {
    let n = inst.group().n();
    if t.rank() > n || matches!(t, BasisType::GA1(k) if k == 0 || k >= n) {
        return Err(Error::Precondition(format!("type {t} does not occur for n = {n}")));
    }
    let arr = inst.arrangement();
    basis_labels(inst, t)
        .into_iter()
        .map(|labels| {
            let idx = labels
                .into_iter()
                .map(|l| arr.index_of(l))
                .collect::<Result<Vec<_>>>()?;
            inst.algebra().straighten(&idx)
        })
        .collect()
}

/// Rank of a rational matrix by fraction-free elimination.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    integer_rank(&mut m)
}

/// Bareiss elimination; destroys the input.
pub fn integer_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = (&m[rank][c] * &m[r][cc] - &m[r][c] * &m[rank][cc]) / &prev;
                m[r][cc] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].abs();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub types: Vec<String>,
    pub monomials: Vec<Vec<String>>,
    pub rank: usize,
    pub expected: usize,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisReport {
    pub degrees: Vec<DegreeReport>,
}

impl BasisReport {
    pub fn verified(&self) -> bool {
        self.degrees.iter().all(|d| d.verified)
    }
}

fn check_degree(
    inst: &Instance,
    degree: usize,
    types: Vec<String>,
    monomials: Vec<Vec<String>>,
    projected: &[GradedVector],
) -> Result<DegreeReport> {
    let expected = inst.invariant_dimension(degree)?;
    let rows: Vec<Vec<Rational>> = projected.iter().map(|v| inst.algebra().coordinates(v)).collect();
    let rank = rational_rank(&rows);
    Ok(DegreeReport {
        degree,
        types,
        monomials,
        rank,
        expected,
        verified: rank == expected && projected.len() == expected,
    })
}

/// Projects every `B_T` by `ε_G` and checks, per degree, that the stacked
/// coordinates have full rank equal to the invariant dimension.
pub fn verify_basis(inst: &Instance) -> Result<BasisReport> {
    let n = inst.group().n();
    if n == 2 {
        return verify_dim2(inst);
    }
    let pair = inst.group().pair();
    let tdi = tdi_representatives(pair, n)?;
    let mut degrees = Vec::new();
    for degree in 0..=n {
        let mut types = Vec::new();
        let mut monomials = Vec::new();
        let mut projected = Vec::new();
        for rep in tdi.iter().filter(|r| r.rank == degree) {
            types.push(rep.kind.to_string());
            for (labels, v) in basis_labels(inst, rep.kind).into_iter().zip(build_basis(inst, rep.kind)?) {
                monomials.push(labels.iter().map(ToString::to_string).collect());
                projected.push(inst.epsilon_project(&v));
            }
        }
        degrees.push(check_degree(inst, degree, types, monomials, &projected)?);
    }
    Ok(BasisReport { degrees })
}

/// Checks that `ε_{N_G(X_T)} · B_T` spans the top-degree invariants of the
/// localization at `X_T`; returns `(rank, local invariant dimension)`.
pub fn verify_local(inst: &Instance, t: BasisType) -> Result<(usize, usize)> {
    let flat = t.flat(inst.group().k(), inst.group().n());
    let local = LocalAction::new(inst, &flat)?;
    let k = t.rank();
    let arr = inst.arrangement();
    let mut rows = Vec::new();
    for labels in basis_labels(inst, t) {
        let idx = labels
            .into_iter()
            .map(|l| {
                let g = arr.index_of(l)?;
                local.local_index(g).ok_or_else(|| {
                    Error::Precondition(format!("{l} does not contain the flat of {t}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let v = local.algebra.straighten(&idx)?;
        let p = epsilon_project(&local.algebra, &local.perms, &v);
        rows.push(local.algebra.coordinates(&p));
    }
    Ok((rational_rank(&rows), local.invariant_dimension(k)?))
}

/// Orbit representatives `H_1, ..., H_a` of hyperplanes (smallest index in
/// each orbit).
pub fn hyperplane_orbit_reps(inst: &Instance) -> Vec<usize> {
    let m = inst.arrangement().num_hyperplanes();
    let mut seen = vec![false; m];
    let mut reps = Vec::new();
    for h in 0..m {
        if seen[h] {
            continue;
        }
        reps.push(h);
        for p in inst.image_perms() {
            seen[p[h] as usize] = true;
        }
    }
    reps
}

/// The graded basis `{1} ∪ {ε e_{H_i}} ∪ {ε e_{H_1} e_{H_i} : i ≥ 2}` for
/// `n = 2`.
pub fn dim2_basis(inst: &Instance) -> Result<Vec<Vec<GradedVector>>> {
    if inst.group().n() != 2 {
        return Err(Error::Precondition("the rank-two basis needs n = 2".into()));
    }
    let reps = hyperplane_orbit_reps(inst);
    let alg = inst.algebra();
    let deg1 = reps
        .iter()
        .map(|&h| Ok(inst.epsilon_project(&alg.straighten(&[h])?)))
        .collect::<Result<Vec<_>>>()?;
    let deg2 = reps[1..]
        .iter()
        .map(|&h| Ok(inst.epsilon_project(&alg.straighten(&[reps[0], h])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![vec![GradedVector::one()], deg1, deg2])
}

fn verify_dim2(inst: &Instance) -> Result<BasisReport> {
    let reps = hyperplane_orbit_reps(inst);
    let a = reps.len();
    let pair = inst.group().pair();
    if !pair.h_is_trivial() && a != rank1_orbit_count(pair) {
        return Err(Error::Unclassified(format!(
            "found {a} hyperplane orbits, expected {}",
            rank1_orbit_count(pair)
        )));
    }
    let basis = dim2_basis(inst)?;
    let arr = inst.arrangement();
    let name = |h: usize| arr.label(h).to_string();
    let monomials = [
        vec![Vec::new()],
        reps.iter().map(|&h| vec![name(h)]).collect(),
        reps[1..].iter().map(|&h| vec![name(reps[0]), name(h)]).collect(),
    ];
    let mut degrees = Vec::new();
    for (d, (vs, ms)) in basis.iter().zip(monomials).enumerate() {
        degrees.push(check_degree(inst, d, vec![format!("orbit{d}")], ms, vs)?);
    }
    Ok(BasisReport { degrees })
}

/// Whether `v` is fixed by every generator of the group.
pub fn is_invariant(inst: &Instance, v: &GradedVector) -> bool {
    inst.group().generators().iter().all(|g| inst.act_on_vector(g, v) == *v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::Limits;
    use crate::exact_quaternions::rat;
    use crate::finite_groups::{admissible_pairs, build_group, resolve_subgroup};
    use std::sync::Arc;

    fn inst(k: &str, h: &str, n: usize) -> Instance {
        let kg = Arc::new(build_group(k.parse().unwrap()).unwrap());
        let p = Arc::new(resolve_subgroup(&admissible_pairs(&kg), h).unwrap().clone());
        Instance::new(p, n, Limits::default()).unwrap()
    }

    #[test]
    fn ranks() {
        let r = |rows: Vec<Vec<i64>>| {
            rational_rank(&rows.into_iter().map(|r| r.into_iter().map(|x| rat(x, 3)).collect()).collect::<Vec<_>>())
        };
        assert_eq!(r(vec![vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(r(vec![vec![0, 1, 2], vec![1, 0, 1], vec![1, 1, 3]]), 2);
        assert_eq!(r(vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]), 3);
        assert_eq!(r(vec![]), 0);
        let half = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), rat(1, 1)]];
        assert_eq!(rational_rank(&half), 1);
    }

    #[test]
    fn type_monomials() {
        let i = inst("D2", "C2", 4);
        assert_eq!(basis_labels(&i, BasisType::GA1(1)), vec![vec![distinguished(2, None)]]);
        assert_eq!(basis_labels(&i, BasisType::G(4)).len(), 4);
        assert_eq!(basis_labels(&i, BasisType::GA1(3)).len(), 4);
        assert_eq!(
            basis_labels(&i, BasisType::GA1(2)),
            vec![vec![distinguished(1, None), distinguished(3, None)]]
        );
        assert_eq!(build_basis(&i, BasisType::G(0)).unwrap(), vec![GradedVector::one()]);
        assert!(build_basis(&i, BasisType::GA1(4)).is_err());
    }

    #[test]
    fn basis_d2_c2_three() {
        let i = inst("D2", "C2", 3);
        let rep = verify_basis(&i).unwrap();
        assert!(rep.verified());
        let ranks: Vec<usize> = rep.degrees.iter().map(|d| d.rank).collect();
        assert_eq!(ranks, [1, 2, 2, 1]);
        for t in [BasisType::G(2), BasisType::GA1(2), BasisType::G(3)] {
            let v = i.epsilon_project(&build_basis(&i, t).unwrap()[0]);
            assert!(is_invariant(&i, &v));
            let (r, d) = verify_local(&i, t).unwrap();
            assert_eq!((r, d), (1, 1), "{t}");
        }
    }

    #[test]
    fn dim2_profiles() {
        for (k, h, sizes) in [("D2", "D2", [1, 2, 1]), ("C4", "C2", [1, 3, 2]), ("D4", "C4", [1, 5, 4])] {
            let i = inst(k, h, 2);
            let b = dim2_basis(&i).unwrap();
            assert_eq!(b.iter().map(Vec::len).collect::<Vec<_>>(), sizes);
            assert!(verify_basis(&i).unwrap().verified(), "{k} {h}");
        }
    }

    #[test]
    fn boundary_of_top_element() {
        let i = inst("D2", "C2", 3);
        let arr = i.arrangement();
        let idx: Vec<usize> = (1..=3).map(|j| arr.index_of(distinguished(j, Some(0))).unwrap()).collect();
        for drop in 0..idx.len() - 2 {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(p, _)| p != drop).map(|(_, &x)| x).collect();
            let v = i.algebra().straighten(&rest).unwrap();
            assert!(i.epsilon_project(&v).is_zero());
        }
        let b = i.algebra().straighten(&idx).unwrap();
        let d = i.algebra().derivation(&i.epsilon_project(&b)).unwrap();
        let two = i.algebra().straighten(&[idx[0], idx[2]]).unwrap().sub(&i.algebra().straighten(&[idx[0], idx[1]]).unwrap());
        let proj = i.epsilon_project(&two);
        assert!(!proj.is_zero());
        assert!(d == proj || d == proj.scale(&rat(-1, 1)));
    }
}
