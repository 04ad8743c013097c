//! Orlik–Solomon algebra with odd generators `e_H` (cohomological degree 3).
//!
//! Degrees are counted in generators: "degree k" is `H^{3k}`. Since the
//! generators have odd degree they anticommute, exactly as in the complex
//! case.
//!
//! The basis in each degree is the NBC basis for the ground-set order of
//! the oracle. A sorted independent tuple `s_1 < ... < s_k` is NBC iff
//! every suffix `{s_j, ..., s_k}` has `s_j` as the smallest element of its
//! closure. Other tuples are rewritten with the circuit relation
//! `Σ_i (-1)^i e_{C \ a_i} = 0` for the circuit `C = {a_0 < a_1 < ...}`
//! whose minimum `a_0` breaks them; the rewrite replaces some `a_i` by the
//! smaller `a_0`, so iteration terminates.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exact_quaternions::Rational;
use crate::matroid::RankOracle;

pub use crate::matroid::fundamental_circuit;

/// Strictly increasing hyperplane indices.
pub type Monomial = SmallVec<[u16; 6]>;

/// Sparse integer combination of NBC basis elements, sorted by index.
pub type Sparse = Arc<[(u32, i64)]>;

/// Sorts in place, returning the sign of the sorting permutation, or
/// `None` if an index repeats.
pub fn sort_with_sign(t: &mut [u16]) -> Option<i64> {
    let mut sign = 1;
    for a in 1..t.len() {
        let mut b = a;
        while b > 0 && t[b - 1] > t[b] {
            t.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
        if b > 0 && t[b - 1] == t[b] {
            return None;
        }
    }
    Some(sign)
}

/// Exact rational combination of NBC monomials of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVector {
    degree: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedVector {
    pub fn zero(degree: usize) -> Self {
        GradedVector { degree, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        let mut v = GradedVector::zero(0);
        v.terms.insert(Monomial::new(), Rational::one());
        v
    }

    /// Number of generators per monomial; the cohomological degree is three
    /// times this.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u16]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &GradedVector) -> GradedVector {
        assert_eq!(self.degree, other.degree, "adding vectors of different degree");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GradedVector) -> GradedVector {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> GradedVector {
        if s.is_zero() {
            return GradedVector::zero(self.degree);
        }
        GradedVector {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Largest absolute coefficient, for diagnostics.
    pub fn max_abs(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

/// NBC monomials per degree with index maps.
#[derive(Debug, Clone)]
pub struct NbcBasis {
    degrees: Vec<Vec<Monomial>>,
    index: Vec<FxHashMap<Monomial, u32>>,
}

impl NbcBasis {
    pub fn build(oracle: &dyn RankOracle) -> Self {
        let rank = oracle.total_rank();
        let mut degrees = vec![vec![Monomial::new()]];
        for _ in 1..=rank {
            let prev = degrees.last().expect("degree 0 present");
            let mut next = Vec::new();
            let mut set: Vec<usize> = Vec::new();
            for t in prev {
                let bound = t.first().map_or(oracle.len(), |&m| m as usize);
                for s in 0..bound {
                    set.clear();
                    set.push(s);
                    set.extend(t.iter().map(|&x| x as usize));
                    if oracle.closure_min(&set) == Some(s) {
                        let mut m = Monomial::with_capacity(t.len() + 1);
                        m.push(s as u16);
                        m.extend_from_slice(t);
                        next.push(m);
                    }
                }
            }
            next.sort_unstable();
            degrees.push(next);
        }
        let index = degrees
            .iter()
            .map(|d| d.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect())
            .collect();
        NbcBasis { degrees, index }
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degree(&self, k: usize) -> &[Monomial] {
        self.degrees.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(Vec::len).collect()
    }

    pub fn position(&self, m: &[u16]) -> Option<u32> {
        self.index.get(m.len())?.get(m).copied()
    }
}

/// The algebra of one arrangement: rank oracle, NBC basis and a shared
/// memo of straightened tuples.
pub struct OsAlgebra {
    oracle: Arc<dyn RankOracle>,
    basis: NbcBasis,
    memo: RwLock<FxHashMap<Monomial, Sparse>>,
}

impl OsAlgebra {
    pub fn new(oracle: Arc<dyn RankOracle>) -> Result<Self> {
        if oracle.len() > u16::MAX as usize {
            return Err(Error::InvalidInput("too many hyperplanes".into()));
        }
        let basis = NbcBasis::build(oracle.as_ref());
        Ok(OsAlgebra { oracle, basis, memo: RwLock::new(FxHashMap::default()) })
    }

    pub fn oracle(&self) -> &Arc<dyn RankOracle> {
        &self.oracle
    }

    pub fn basis(&self) -> &NbcBasis {
        &self.basis
    }

    pub fn num_generators(&self) -> usize {
        self.oracle.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.dims()
    }

    pub fn memo_size(&self) -> usize {
        self.memo.read().len()
    }

    fn independent(&self, m: &[u16]) -> bool {
        let set: SmallVec<[usize; 8]> = m.iter().map(|&x| x as usize).collect();
        self.oracle.is_independent(&set)
    }

    /// NBC expansion of a strictly increasing tuple.
    pub fn reduce(&self, m: &[u16]) -> Sparse {
        let k = m.len();
        if k > self.rank() {
            return Arc::from([]);
        }
        if let Some(p) = self.basis.position(m) {
            return Arc::from([(p, 1)]);
        }
        if let Some(hit) = self.memo.read().get(m) {
            return hit.clone();
        }
        let result: Sparse = if !self.independent(m) {
            Arc::from([])
        } else {
            self.rewrite(m)
        };
        self.memo.write().insert(Monomial::from_slice(m), result.clone());
        result
    }

    fn rewrite(&self, m: &[u16]) -> Sparse {
        let k = m.len();
        let as_usize: SmallVec<[usize; 8]> = m.iter().map(|&x| x as usize).collect();
        // shortest suffix whose closure has an element below its first entry
        let (j, c) = (0..k)
            .rev()
            .find_map(|j| match self.oracle.closure_min(&as_usize[j..]) {
                Some(c) if c < as_usize[j] => Some((j, c)),
                _ => None,
            })
            .expect("independent non-NBC tuple has a broken circuit");
        let circuit = fundamental_circuit(self.oracle.as_ref(), &as_usize[j..], c)
            .expect("suffix is independent and spans c");
        // circuit sorted with c first; the rest lies in m
        let rest_of_circuit: SmallVec<[u16; 8]> = circuit[1..].iter().map(|&x| x as u16).collect();
        let others: SmallVec<[u16; 8]> =
            m.iter().copied().filter(|x| !rest_of_circuit.contains(x)).collect();
        let mut reorder: SmallVec<[u16; 8]> = rest_of_circuit.clone();
        reorder.extend_from_slice(&others);
        // sign taking m to (C \ c) ++ R: reorder is a permutation of m
        let sign_in = permutation_sign_to_sorted(&reorder);
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        let full: SmallVec<[u16; 8]> = circuit.iter().map(|&x| x as u16).collect();
        for i in 1..full.len() {
            // e_{C \ c} = Σ_{i>=1} (-1)^{i+1} e_{C \ a_i}
            let rel_sign = if i % 2 == 1 { 1 } else { -1 };
            let mut t: SmallVec<[u16; 8]> = full
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != i)
                .map(|(_, &x)| x)
                .collect();
            t.extend_from_slice(&others);
            let Some(s) = sort_with_sign(&mut t) else { continue };
            let coeff = sign_in * rel_sign * s;
            for &(idx, v) in self.reduce(&t).iter() {
                *acc.entry(idx).or_insert(0) += coeff * v;
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect::<Vec<_>>().into()
    }

    /// Sign-sorts an arbitrary tuple and expands it in the NBC basis.
    pub fn reduce_unsorted(&self, t: &mut [u16]) -> Option<(i64, Sparse)> {
        let s = sort_with_sign(t)?;
        Some((s, self.reduce(t)))
    }

    fn accumulate_sparse(&self, degree: usize, coeff: &Rational, sparse: &[(u32, i64)], out: &mut GradedVector) {
        let basis = self.basis.degree(degree);
        for &(idx, v) in sparse {
            out.add_term(basis[idx as usize].clone(), coeff * Rational::from_integer(v.into()));
        }
    }

    pub fn check_indices(&self, t: &[usize]) -> Result<()> {
        match t.iter().find(|&&h| h >= self.num_generators()) {
            Some(&h) => Err(Error::UnknownHyperplane(h)),
            None => Ok(()),
        }
    }

    /// The product `e_{t_1} ... e_{t_k}` in the NBC basis.
    pub fn straighten(&self, t: &[usize]) -> Result<GradedVector> {
        self.check_indices(t)?;
        let mut out = GradedVector::zero(t.len());
        let mut buf: SmallVec<[u16; 8]> = t.iter().map(|&x| x as u16).collect();
        if let Some((s, sparse)) = self.reduce_unsorted(&mut buf) {
            self.accumulate_sparse(t.len(), &Rational::from_integer(s.into()), &sparse, &mut out);
        }
        Ok(out)
    }

    /// Basis vector for NBC monomial number `idx` of degree `k`.
    pub fn basis_vector(&self, k: usize, idx: usize) -> GradedVector {
        let mut v = GradedVector::zero(k);
        v.add_term(self.basis.degree(k)[idx].clone(), Rational::one());
        v
    }

    /// Coordinates in the NBC basis of the vector's degree.
    pub fn coordinates(&self, v: &GradedVector) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.basis.degree(v.degree).len()];
        for (m, c) in v.terms() {
            let p = self.basis.position(m).expect("graded vectors hold NBC monomials");
            out[p as usize] = c.clone();
        }
        out
    }

    /// Builds a vector from a linear combination of arbitrary tuples.
    pub fn combination<'a>(
        &self,
        degree: usize,
        terms: impl IntoIterator<Item = (&'a [u16], Rational)>,
    ) -> Result<GradedVector> {
        let mut out = GradedVector::zero(degree);
        for (t, c) in terms {
            if t.len() != degree {
                return Err(Error::InvalidInput("tuple of wrong degree".into()));
            }
            if let Some(&h) = t.iter().find(|&&h| h as usize >= self.num_generators()) {
                return Err(Error::UnknownHyperplane(h as usize));
            }
            let mut buf: SmallVec<[u16; 8]> = SmallVec::from_slice(t);
            if let Some((s, sparse)) = self.reduce_unsorted(&mut buf) {
                self.accumulate_sparse(degree, &(c * Rational::from_integer(s.into())), &sparse, &mut out);
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, u: &GradedVector, v: &GradedVector) -> GradedVector {
        let degree = u.degree + v.degree;
        let mut out = GradedVector::zero(degree);
        for (a, ca) in u.terms() {
            for (b, cb) in v.terms() {
                let mut t: SmallVec<[u16; 8]> = a.clone().into_iter().collect();
                t.extend_from_slice(b);
                if let Some((s, sparse)) = self.reduce_unsorted(&mut t) {
                    let c = ca * cb * Rational::from_integer(s.into());
                    self.accumulate_sparse(degree, &c, &sparse, &mut out);
                }
            }
        }
        out
    }

    /// `∂(e_1 ... e_k) = Σ (-1)^{i-1} e_1 ... ê_i ... e_k`.
    pub fn derivation(&self, v: &GradedVector) -> Result<GradedVector> {
        if v.degree == 0 {
            return Err(Error::InvalidInput("derivation of a degree-0 element".into()));
        }
        let mut out = GradedVector::zero(v.degree - 1);
        for (m, c) in v.terms() {
            for i in 0..m.len() {
                let t: SmallVec<[u16; 8]> =
                    m.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
                let sign = if i % 2 == 0 { c.clone() } else { -c.clone() };
                self.accumulate_sparse(v.degree - 1, &sign, &self.reduce(&t), &mut out);
            }
        }
        Ok(out)
    }

    /// `μ(x) = (1/|A|) (Σ_H e_H) x`.
    pub fn mu_map(&self, v: &GradedVector) -> GradedVector {
        let total = self.num_generators();
        let mut sum = GradedVector::zero(1);
        for h in 0..total {
            sum.add_term(Monomial::from_slice(&[h as u16]), Rational::one());
        }
        let prod = self.multiply(&sum, v);
        prod.scale(&Rational::new(1.into(), (total as i64).into()))
    }

    /// Applies a permutation of the hyperplanes to a vector.
    pub fn act(&self, perm: &[u16], v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero(v.degree);
        for (m, c) in v.terms() {
            let mut t: SmallVec<[u16; 8]> = m.iter().map(|&x| perm[x as usize]).collect();
            if let Some((s, sparse)) = self.reduce_unsorted(&mut t) {
                let coeff = c * Rational::from_integer(s.into());
                self.accumulate_sparse(v.degree, &coeff, &sparse, &mut out);
            }
        }
        out
    }

    /// Trace of a hyperplane permutation on the degree-`k` component,
    /// read off the diagonal of its action on the NBC basis.
    pub fn trace(&self, k: usize, perm: &[u16]) -> i64 {
        let mut total = 0;
        let mut t: SmallVec<[u16; 8]> = SmallVec::new();
        for (p, m) in self.basis.degree(k).iter().enumerate() {
            t.clear();
            t.extend(m.iter().map(|&x| perm[x as usize]));
            let Some(s) = sort_with_sign(&mut t) else { continue };
            if t.as_slice() == m.as_slice() {
                total += s;
                continue;
            }
            if self.basis.position(&t).is_some() {
                continue;
            }
            let sparse = self.reduce(&t);
            if let Ok(at) = sparse.binary_search_by_key(&(p as u32), |&(i, _)| i) {
                total += s * sparse[at].1;
            }
        }
        total
    }

    /// Dense integer NBC coordinates of `Σ_t count_t · e_t` for
    /// sorted tuples `t` of degree `k`.
    pub fn expand_counts(&self, k: usize, counts: &FxHashMap<Monomial, i64>) -> Vec<i64> {
        let mut out = vec![0i64; self.basis.degree(k).len()];
        let mut keys: Vec<&Monomial> = counts.keys().collect();
        keys.sort_unstable();
        for t in keys {
            let c = counts[t];
            if c == 0 {
                continue;
            }
            for &(idx, v) in self.reduce(t).iter() {
                out[idx as usize] += c * v;
            }
        }
        out
    }
}

/// Sign of the permutation that sorts a duplicate-free tuple.
fn permutation_sign_to_sorted(t: &[u16]) -> i64 {
    let mut inv = 0;
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            if t[a] > t[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_groups::build_group;
    use crate::gain_arrangement::{build_arrangement, Arrangement, HyperplaneLabel, Lattice};

    fn arr(k: &str, n: usize, coords: bool) -> Arc<Arrangement> {
        Arc::new(build_arrangement(Arc::new(build_group(k.parse().unwrap()).unwrap()), n, coords).unwrap())
    }

    fn alg(a: &Arc<Arrangement>) -> OsAlgebra {
        OsAlgebra::new(a.clone()).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn sorting_sign() {
        let mut t = [3u16, 1, 2];
        assert_eq!(sort_with_sign(&mut t), Some(1));
        assert_eq!(t, [1, 2, 3]);
        let mut u = [2u16, 1];
        assert_eq!(sort_with_sign(&mut u), Some(-1));
        assert_eq!(sort_with_sign(&mut [4u16, 2, 4]), None);
    }

    #[test]
    fn nbc_dimensions() {
        assert_eq!(alg(&arr("D2", 2, true)).dims(), vec![1, 10, 9]);
        assert_eq!(alg(&arr("C2", 2, true)).dims(), vec![1, 4, 3]);
        // braid arrangement: Π (1 + i t)
        assert_eq!(alg(&arr("C1", 4, false)).dims(), vec![1, 6, 11, 6]);
        assert_eq!(alg(&arr("C1", 3, false)).dims(), vec![1, 3, 2]);
    }

    #[test]
    fn dims_match_whitney() {
        for (k, n, c) in [("C2", 3, true), ("C3", 3, false), ("D2", 3, true), ("C4", 2, false)] {
            let a = arr(k, n, c);
            let lat = Lattice::new(&a);
            let dims = alg(&a).dims();
            for (d, &v) in dims.iter().enumerate() {
                assert_eq!(v as i64, lat.whitney_abs(d), "{k} n={n} degree {d}");
            }
        }
    }

    #[test]
    fn nbc_matches_broken_circuit_definition() {
        // reject S iff some c outside S is smaller than every other member of
        // the fundamental circuit of S ∪ {c}
        for (k, n, c) in [("C2", 3, true), ("C3", 3, false)] {
            let a = arr(k, n, c);
            let o = alg(&a);
            let m = a.num_hyperplanes();
            for deg in 0..=3usize {
                let mut expect = Vec::new();
                let mut idx: Vec<usize> = (0..deg).collect();
                loop {
                    if a.is_independent(&idx) {
                        let broken = (0..m).filter(|x| !idx.contains(x)).any(|x| {
                            match fundamental_circuit(a.as_ref(), &idx, x) {
                                Ok(circ) => circ.iter().all(|&y| y == x || x < y),
                                Err(_) => false,
                            }
                        });
                        if !broken {
                            expect.push(Monomial::from_iter(idx.iter().map(|&x| x as u16)));
                        }
                    }
                    // next combination
                    let mut p = deg;
                    while p > 0 && idx[p - 1] == m - deg + p - 1 {
                        p -= 1;
                    }
                    if p == 0 {
                        break;
                    }
                    idx[p - 1] += 1;
                    for q in p..deg {
                        idx[q] = idx[q - 1] + 1;
                    }
                }
                assert_eq!(o.basis().degree(deg), expect.as_slice(), "{k} degree {deg}");
            }
        }
    }

    #[test]
    fn circuits_from_spec_examples() {
        let a = arr("C2", 2, true);
        let e = a.index_of(HyperplaneLabel::Edge { i: 0, j: 1, gain: 1 }).unwrap();
        assert_eq!(fundamental_circuit(a.as_ref(), &[0, 1], e).unwrap(), vec![0, 1, e]);
        let b = arr("C1", 3, false);
        assert_eq!(fundamental_circuit(b.as_ref(), &[0, 2], 1).unwrap(), vec![0, 1, 2]);
        let d = arr("C2", 2, false);
        assert!(fundamental_circuit(d.as_ref(), &[0], 1).is_err());
    }

    #[test]
    fn straighten_basics() {
        let a = arr("C1", 3, false);
        let o = alg(&a);
        // circuit {0,1,2}: e1 e2 = e0 e2 - e0 e1
        let v = o.straighten(&[1, 2]).unwrap();
        let expect = o
            .combination(2, [(&[0u16, 2][..], r(1)), (&[0u16, 1][..], r(-1))])
            .unwrap();
        assert_eq!(v, expect);
        assert_eq!(o.straighten(&[1, 0]).unwrap(), o.straighten(&[0, 1]).unwrap().scale(&r(-1)));
        assert!(o.straighten(&[2, 2]).unwrap().is_zero());
        assert!(matches!(o.straighten(&[9]), Err(Error::UnknownHyperplane(9))));
    }

    #[test]
    fn straighten_is_relation_consistent() {
        // ∂ e_C = 0 for every circuit, checked on all triples of C3, n=3
        let a = arr("C3", 3, true);
        let o = alg(&a);
        let m = a.num_hyperplanes();
        for x in 0..m {
            for y in x + 1..m {
                for z in y + 1..m {
                    if a.rank(&[x, y, z]) == 2 && a.is_independent(&[x, y]) && a.is_independent(&[x, z]) && a.is_independent(&[y, z]) {
                        let s = o
                            .combination(
                                2,
                                [
                                    (&[y as u16, z as u16][..], r(1)),
                                    (&[x as u16, z as u16][..], r(-1)),
                                    (&[x as u16, y as u16][..], r(1)),
                                ],
                            )
                            .unwrap();
                        assert!(s.is_zero(), "{x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn products_and_derivation() {
        let a = arr("C2", 3, true);
        let o = alg(&a);
        let e = |h: usize| o.straighten(&[h]).unwrap();
        assert_eq!(o.multiply(&GradedVector::one(), &e(4)), e(4));
        assert!(o.multiply(&e(3), &e(3)).is_zero());
        let uv = o.multiply(&e(2), &e(5));
        let vu = o.multiply(&e(5), &e(2));
        assert!(uv.add(&vu).is_zero());
        assert_eq!(o.derivation(&e(3)).unwrap(), GradedVector::one());
        let two = o.straighten(&[1, 4]).unwrap();
        assert_eq!(o.derivation(&two).unwrap(), e(4).sub(&e(1)));
        assert!(o.derivation(&GradedVector::one()).is_err());
        assert!(o.mu_map(&GradedVector::zero(1)).is_zero());
        let m1 = o.mu_map(&GradedVector::one());
        assert_eq!(m1.len(), a.num_hyperplanes());
        assert_eq!(m1.coefficient(&[0]), Rational::new(1.into(), (a.num_hyperplanes() as i64).into()));
    }

    #[test]
    fn trace_of_identity_is_dimension() {
        let a = arr("D2", 2, true);
        let o = alg(&a);
        let id: Vec<u16> = (0..a.num_hyperplanes() as u16).collect();
        for k in 0..=2 {
            assert_eq!(o.trace(k, &id), o.dims()[k] as i64);
        }
    }
}
