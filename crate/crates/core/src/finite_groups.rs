//! Finite subgroups of the unit quaternions, held abstractly as Cayley
//! tables, and the admissible pairs `[K,K] <= H <| K`.
//!
//! Cyclic and binary dihedral groups come from their presentations:
//!
//! * `C_d = <a | a^d>`, element `a^s` has id `s`;
//! * `D_d = <a, b | a^{2d}, b^2 = a^d, b a b^{-1} = a^{-1}>`, element
//!   `a^s b^t` has id `s + 2d t`.
//!
//! The binary polyhedral groups are generated from exact unit quaternions,
//! with ids in breadth-first discovery order:
//!
//! * `T = <(1+i+j+k)/2, i>`,
//! * `O = <(1+i+j+k)/2, (1+i)/√2>`,
//! * `I = <(1+i+j+k)/2, (φ + φ⁻¹i + j)/2>`.
//!
//! Id 0 is always the identity.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_quaternions::{unit_group_closure, FieldElem, Quat};

/// Group element id.
pub type Elem = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(usize),
    BinaryDihedral(usize),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        match *self {
            GroupSpec::Cyclic(d) => d,
            GroupSpec::BinaryDihedral(d) => 4 * d,
            GroupSpec::BinaryTetrahedral => 24,
            GroupSpec::BinaryOctahedral => 48,
            GroupSpec::BinaryIcosahedral => 120,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GroupSpec::Cyclic(0) => Err(Error::InvalidGroupSpec("C0".into())),
            GroupSpec::BinaryDihedral(d) if d < 2 => {
                Err(Error::InvalidGroupSpec(format!("D{d}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(d) => write!(f, "C{d}"),
            GroupSpec::BinaryDihedral(d) => write!(f, "D{d}"),
            GroupSpec::BinaryTetrahedral => write!(f, "T"),
            GroupSpec::BinaryOctahedral => write!(f, "O"),
            GroupSpec::BinaryIcosahedral => write!(f, "I"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroupSpec(s.to_string());
        let spec = match s {
            "T" => GroupSpec::BinaryTetrahedral,
            "O" => GroupSpec::BinaryOctahedral,
            "I" => GroupSpec::BinaryIcosahedral,
            _ => {
                let (head, digits) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
                let d: usize = digits.parse().map_err(|_| bad())?;
                match head {
                    "C" => GroupSpec::Cyclic(d),
                    "D" => GroupSpec::BinaryDihedral(d),
                    _ => return Err(bad()),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    spec: GroupSpec,
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    realization: Option<Vec<Quat>>,
}

impl FiniteGroup {
    fn from_table(spec: GroupSpec, order: usize, mul: Vec<Elem>, realization: Option<Vec<Quat>>) -> Self {
        let mut inv = vec![0; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mul[a * order + b] == 0)
                .expect("every element has an inverse") as Elem;
        }
        FiniteGroup { spec, order, mul, inv, realization }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    /// Exact unit quaternion for each element id, when the group embeds
    /// into the coefficient field Q(√2, √5).
    pub fn realization(&self) -> Option<&[Quat]> {
        self.realization.as_deref()
    }

    pub fn elem_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Full check of the group axioms on the table.
    pub fn check_axioms(&self) -> bool {
        let n = self.order as Elem;
        if self.mul.iter().any(|&x| x >= n) {
            return false;
        }
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return false;
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return false;
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The table agrees with quaternion multiplication of the realization.
    pub fn check_realization(&self) -> bool {
        let Some(q) = &self.realization else {
            return true;
        };
        let index: HashMap<&Quat, usize> = q.iter().enumerate().map(|(i, x)| (x, i)).collect();
        if index.len() != self.order {
            return false;
        }
        self.elements().all(|a| {
            self.elements().all(|b| {
                let prod = &q[a as usize] * &q[b as usize];
                index.get(&prod) == Some(&(self.mul(a, b) as usize))
            })
        })
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn commutator_subgroup(&self) -> Vec<Elem> {
        let comms: BTreeSet<Elem> = self
            .elements()
            .flat_map(|a| {
                self.elements()
                    .map(move |b| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            })
            .collect();
        self.generated(&comms.into_iter().collect::<Vec<_>>())
    }

    pub fn is_subgroup(&self, set: &[Elem]) -> bool {
        let mut mask = vec![false; self.order];
        for &x in set {
            mask[x as usize] = true;
        }
        mask[0] && set.iter().all(|&a| set.iter().all(|&b| mask[self.mul(a, self.inv(b)) as usize]))
    }

    pub fn is_normal(&self, set: &[Elem]) -> bool {
        let mut mask = vec![false; self.order];
        for &x in set {
            mask[x as usize] = true;
        }
        self.elements().all(|g| {
            set.iter()
                .all(|&h| mask[self.mul(self.mul(g, h), self.inv(g)) as usize])
        })
    }

    /// Isomorphism type of a subgroup, within the catalog of finite
    /// subgroups of the unit quaternions.
    pub fn classify(&self, set: &[Elem]) -> GroupSpec {
        let n = set.len();
        let max_order = set.iter().map(|&x| self.elem_order(x)).max().unwrap_or(1);
        if max_order == n {
            GroupSpec::Cyclic(n)
        } else if n.is_multiple_of(4) && max_order == n / 2 {
            GroupSpec::BinaryDihedral(n / 4)
        } else {
            match n {
                24 => GroupSpec::BinaryTetrahedral,
                48 => GroupSpec::BinaryOctahedral,
                120 => GroupSpec::BinaryIcosahedral,
                _ => panic!("subgroup of order {n} outside the quaternion catalog"),
            }
        }
    }
}

fn cyclic_table(d: usize) -> Vec<Elem> {
    let mut mul = vec![0; d * d];
    for a in 0..d {
        for b in 0..d {
            mul[a * d + b] = ((a + b) % d) as Elem;
        }
    }
    mul
}

fn dihedral_table(d: usize) -> Vec<Elem> {
    let m = 2 * d;
    let n = 2 * m;
    let id = |s: usize, t: usize| (s % m + m * t) as Elem;
    let mut mul = vec![0; n * n];
    for x in 0..n {
        let (s, t) = (x % m, x / m);
        for y in 0..n {
            let (u, v) = (y % m, y / m);
            mul[x * n + y] = match (t, v) {
                (0, _) => id(s + u, v),
                // a^s b a^u = a^{s-u} b
                (_, 0) => id(s + m - u, 1),
                // a^s b a^u b = a^{s-u} b^2 = a^{s-u+d}
                _ => id(s + m - u + d, 0),
            };
        }
    }
    mul
}

/// `cos(π/k) + sin(π/k) i` for the k where it lies in Q(√2, √5).
fn half_turn_root(k: usize) -> Option<Quat> {
    let h = FieldElem::sqrt2().scale(&crate::exact_quaternions::rat(1, 2));
    Some(match k {
        1 => -Quat::one(),
        2 => Quat::i(),
        4 => Quat::new(h.clone(), h, FieldElem::zero(), FieldElem::zero()),
        _ => return None,
    })
}

fn powers(q: &Quat, count: usize) -> Vec<Quat> {
    let mut out = Vec::with_capacity(count);
    let mut x = Quat::one();
    for _ in 0..count {
        out.push(x.clone());
        x = &x * q;
    }
    out
}

fn table_from_quaternions(elems: &[Quat]) -> Vec<Elem> {
    let n = elems.len();
    let index: HashMap<&Quat, Elem> = elems.iter().enumerate().map(|(i, q)| (q, i as Elem)).collect();
    let mut mul = vec![0; n * n];
    for (a, p) in elems.iter().enumerate() {
        for (b, q) in elems.iter().enumerate() {
            mul[a * n + b] = index[&(p * q)];
        }
    }
    mul
}

pub fn binary_polyhedral_generators(spec: GroupSpec) -> Option<Vec<Quat>> {
    let hurwitz = Quat::rational(1, 1, 1, 1, 2);
    let half = crate::exact_quaternions::rat(1, 2);
    match spec {
        GroupSpec::BinaryTetrahedral => Some(vec![hurwitz, Quat::i()]),
        GroupSpec::BinaryOctahedral => Some(vec![hurwitz, half_turn_root(4)?.clone()]),
        GroupSpec::BinaryIcosahedral => {
            let phi = FieldElem::phi();
            let phi_inv = phi.inverse().ok()?;
            let g = Quat::new(phi, phi_inv, FieldElem::one(), FieldElem::zero()).scale(&FieldElem::from_rational(half));
            Some(vec![hurwitz, g])
        }
        _ => None,
    }
}

pub fn build_group(spec: GroupSpec) -> Result<FiniteGroup> {
    spec.validate()?;
    let group = match spec {
        GroupSpec::Cyclic(d) => {
            let realization = match d {
                1 => Some(vec![Quat::one()]),
                2 | 4 | 8 => half_turn_root(d / 2).map(|z| powers(&z, d)),
                _ => None,
            };
            FiniteGroup::from_table(spec, d, cyclic_table(d), realization)
        }
        GroupSpec::BinaryDihedral(d) => {
            let realization = half_turn_root(d).map(|a| {
                let rot = powers(&a, 2 * d);
                let refl: Vec<Quat> = rot.iter().map(|r| r * &Quat::j()).collect();
                rot.into_iter().chain(refl).collect()
            });
            FiniteGroup::from_table(spec, 4 * d, dihedral_table(d), realization)
        }
        _ => {
            let gens = binary_polyhedral_generators(spec).expect("polyhedral generators");
            let elems = unit_group_closure(&gens, 240)?;
            if elems.len() != spec.order() {
                return Err(Error::InvalidGroupSpec(format!(
                    "{spec}: generators give order {}",
                    elems.len()
                )));
            }
            let mul = table_from_quaternions(&elems);
            FiniteGroup::from_table(spec, elems.len(), mul, Some(elems))
        }
    };
    Ok(group)
}

pub fn commutator_subgroup(k: &FiniteGroup) -> Vec<Elem> {
    k.commutator_subgroup()
}

/// An admissible pair `[K,K] <= H <| K` together with the structure of
/// the abelian quotient `K/H`.
#[derive(Debug, Clone)]
pub struct KHPair {
    k: Arc<FiniteGroup>,
    h: Vec<Elem>,
    h_mask: Vec<bool>,
    h_type: GroupSpec,
    token: String,
    coset_of: Vec<u16>,
    coset_reps: Vec<Elem>,
    quotient_mul: Vec<u16>,
    quotient_invariants: Vec<usize>,
}

impl KHPair {
    /// Builds the pair, checking `H` is a normal subgroup containing the
    /// derived subgroup.
    pub fn new(k: Arc<FiniteGroup>, h: &[Elem], token: impl Into<String>) -> Result<Self> {
        let mut h = h.to_vec();
        h.sort_unstable();
        h.dedup();
        if !k.is_subgroup(&h) || !k.is_normal(&h) {
            return Err(Error::InvalidInput("H is not a normal subgroup of K".into()));
        }
        let mut h_mask = vec![false; k.order()];
        for &x in &h {
            h_mask[x as usize] = true;
        }
        if k.commutator_subgroup().iter().any(|&c| !h_mask[c as usize]) {
            return Err(Error::InvalidInput("H does not contain [K,K]".into()));
        }
        // cosets labelled in order of their smallest element id
        let mut coset_of = vec![u16::MAX; k.order()];
        let mut coset_reps = Vec::new();
        for g in k.elements() {
            if coset_of[g as usize] != u16::MAX {
                continue;
            }
            let c = coset_reps.len() as u16;
            coset_reps.push(g);
            for &x in &h {
                coset_of[k.mul(g, x) as usize] = c;
            }
        }
        let q = coset_reps.len();
        let mut quotient_mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                quotient_mul[a * q + b] = coset_of[k.mul(coset_reps[a], coset_reps[b]) as usize];
            }
        }
        let h_type = k.classify(&h);
        let mut pair = KHPair {
            k,
            h,
            h_mask,
            h_type,
            token: token.into(),
            coset_of,
            coset_reps,
            quotient_mul,
            quotient_invariants: Vec::new(),
        };
        pair.quotient_invariants = pair.compute_invariant_factors();
        Ok(pair)
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.k
    }

    pub fn h(&self) -> &[Elem] {
        &self.h
    }

    pub fn h_type(&self) -> GroupSpec {
        self.h_type
    }

    pub fn token(&self) -> &str {
        &self.token
    }

    #[inline]
    pub fn in_h(&self, g: Elem) -> bool {
        self.h_mask[g as usize]
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    #[inline]
    pub fn coset_of(&self, g: Elem) -> usize {
        self.coset_of[g as usize] as usize
    }

    /// Smallest element id of each coset of `H`, identity first.
    pub fn transversal(&self) -> &[Elem] {
        &self.coset_reps
    }

    pub fn h_is_trivial(&self) -> bool {
        self.h.len() == 1
    }

    /// Invariant factors `d_1 | d_2 | ...` of the abelian group `K/H`.
    pub fn quotient_invariants(&self) -> &[usize] {
        &self.quotient_invariants
    }

    fn quotient_order_of(&self, c: usize) -> usize {
        let q = self.index();
        let mut x = c;
        let mut n = 1;
        while x != 0 {
            x = self.quotient_mul[x * q + c] as usize;
            n += 1;
        }
        n
    }

    pub fn quotient_is_cyclic(&self) -> bool {
        self.quotient_invariants.len() <= 1
    }

    /// Element of smallest id whose coset generates `K/H`, if cyclic.
    pub fn quotient_generator(&self) -> Option<Elem> {
        let q = self.index();
        self.k
            .elements()
            .find(|&g| self.quotient_order_of(self.coset_of(g)) == q)
    }

    /// Order of the image of `g` in `K/H`.
    pub fn quotient_order(&self, g: Elem) -> usize {
        self.quotient_order_of(self.coset_of(g))
    }

    fn compute_invariant_factors(&self) -> Vec<usize> {
        let q = self.index();
        if q == 1 {
            return Vec::new();
        }
        let pow = |c: usize, e: usize| {
            let mut x = 0usize;
            for _ in 0..e {
                x = self.quotient_mul[x * q + c] as usize;
            }
            x
        };
        // elementary divisors per prime from counts of p^j-torsion
        let mut elementary: Vec<Vec<usize>> = Vec::new();
        let mut rest = q;
        let mut p = 2;
        while rest > 1 {
            if rest.is_multiple_of(p) {
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
                let mut at_least = Vec::new();
                let mut prev_log = 0;
                let mut pj = p;
                loop {
                    let count = (0..q).filter(|&c| pow(c, pj) == 0).count();
                    let log = (count as f64).log(p as f64).round() as usize;
                    if log == prev_log {
                        break;
                    }
                    at_least.push(log - prev_log);
                    prev_log = log;
                    pj *= p;
                }
                // at_least[j] = number of cyclic factors of order >= p^{j+1}
                let mut exps = Vec::new();
                for j in 0..at_least.len() {
                    let next = at_least.get(j + 1).copied().unwrap_or(0);
                    for _ in 0..at_least[j] - next {
                        exps.push(p.pow(j as u32 + 1));
                    }
                }
                exps.sort_unstable_by(|a, b| b.cmp(a));
                elementary.push(exps);
            }
            p += 1;
        }
        let len = elementary.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<usize> = (0..len)
            .map(|i| elementary.iter().map(|e| e.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        factors
    }
}

/// All subgroups `H` with `[K,K] <= H <| K`, each with a CLI token.
///
/// Ordered by `|H|` then by element set. Tokens are the isomorphism type
/// (`C4`, `D2`, `T`, ...) with a suffix `a`, `b`, ... when several
/// admissible subgroups share a type.
pub fn admissible_pairs(k: &Arc<FiniteGroup>) -> Vec<KHPair> {
    let derived = k.commutator_subgroup();
    let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut frontier = vec![derived];
    while let Some(s) = frontier.pop() {
        if !found.insert(s.clone()) {
            continue;
        }
        let mut mask = vec![false; k.order()];
        for &x in &s {
            mask[x as usize] = true;
        }
        for g in k.elements() {
            if !mask[g as usize] {
                let mut gens = s.clone();
                gens.push(g);
                let t = k.generated(&gens);
                if !found.contains(&t) {
                    frontier.push(t);
                }
            }
        }
    }
    let mut subgroups: Vec<Vec<Elem>> = found.into_iter().collect();
    subgroups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let types: Vec<GroupSpec> = subgroups.iter().map(|s| k.classify(s)).collect();
    let mut seen_count: HashMap<GroupSpec, usize> = HashMap::new();
    subgroups
        .iter()
        .zip(&types)
        .map(|(s, t)| {
            let total = types.iter().filter(|u| *u == t).count();
            let i = seen_count.entry(*t).or_insert(0);
            let token = if total == 1 {
                t.to_string()
            } else {
                format!("{t}{}", (b'a' + *i as u8) as char)
            };
            *i += 1;
            KHPair::new(k.clone(), s, token).expect("enumerated subgroups are admissible")
        })
        .collect()
}

/// Resolves a subgroup token (`C4`, `C4a`, or a list index) against the
/// admissible pairs of `K`.
pub fn resolve_subgroup<'a>(pairs: &'a [KHPair], token: &str) -> Result<&'a KHPair> {
    if let Some(p) = pairs.iter().find(|p| p.token == token) {
        return Ok(p);
    }
    // a lone subgroup of some type also answers to the `a` suffix
    if let Some(base) = token.strip_suffix('a') {
        if let Some(p) = pairs.iter().find(|p| p.token == base) {
            return Ok(p);
        }
    }
    if let Ok(i) = token.parse::<usize>() {
        if let Some(p) = pairs.get(i) {
            return Ok(p);
        }
    }
    Err(Error::UnknownSubgroup {
        token: token.to_string(),
        available: pairs.iter().map(|p| p.token.as_str()).collect::<Vec<_>>().join(", "),
    })
}

pub fn quotient_is_cyclic(pair: &KHPair) -> bool {
    pair.quotient_is_cyclic()
}
