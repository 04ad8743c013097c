//! The group `G_n(K,H) = A_n(K,H) ⋊ S_n` and its action on hyperplanes,
//! flats and cohomology.
//!
//! An element `(d, σ)` acts on `V = H^n` (a right vector space, matrices
//! acting on the left) by `(g x)_{σ(i)} = d_{σ(i)} x_i`. Substituting into
//! `x_i = ζ x_j` gives the image hyperplane
//! `y_{σ(i)} = d_{σ(i)} ζ d_{σ(j)}⁻¹ y_{σ(j)}`, and composition is
//! `(d,σ)(d',σ') = (d · σ(d'), σσ')` with `σ(d')_i = d'_{σ⁻¹(i)}`.
//!
//! Elements are enumerated as `K^{n-1} × H × S_n`: the first `n-1` gains are
//! free and the last is `(k_1 ... k_{n-1})⁻¹ h`, so the product of all gains
//! is `h ∈ H`. Index `= perm_rank · |K|^{n-1}|H| + Σ k_i |K|^i + pos(h) |K|^{n-1}`
//! with permutations ranked lexicographically.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::exact_quaternions::Rational;
use crate::finite_groups::{Elem, FiniteGroup, KHPair};
use crate::gain_arrangement::{build_arrangement, canonicalize, Arrangement, Flat, HyperplaneLabel, Lattice};
use crate::matroid::{RankOracle, Restriction};
use crate::os_algebra::{sort_with_sign, GradedVector, Monomial, OsAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupNElement {
    pub gains: Vec<Elem>,
    /// `perm[i] = σ(i)`.
    pub perm: Vec<u8>,
}

pub fn group_order(pair: &KHPair, n: usize) -> u128 {
    let k = pair.k().order() as u128;
    let h = pair.h().len() as u128;
    let fact: u128 = (1..=n as u128).product();
    k.saturating_pow(n.saturating_sub(1) as u32)
        .saturating_mul(h)
        .saturating_mul(fact)
}

fn small_generating_set(k: &FiniteGroup, set: &[Elem]) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut span = vec![k.identity()];
    for &x in set {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = k.generated(&gens);
        }
    }
    gens
}

fn lehmer_rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

fn lehmer_unrank(mut rank: usize, n: usize) -> Vec<u8> {
    let mut digits = vec![0; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    digits.iter().map(|&d| pool.remove(d)).collect()
}

/// `G_n(K,H)` for an admissible pair.
#[derive(Debug, Clone)]
pub struct ImprimitiveGroup {
    pair: Arc<KHPair>,
    n: usize,
    h_pos: Vec<u32>,
}

impl ImprimitiveGroup {
    pub fn new(pair: Arc<KHPair>, n: usize) -> Result<Self> {
        if n == 0 || n > 12 {
            return Err(Error::InvalidInput(format!("rank n = {n} outside 1..=12")));
        }
        let mut h_pos = vec![u32::MAX; pair.k().order()];
        for (p, &h) in pair.h().iter().enumerate() {
            h_pos[h as usize] = p as u32;
        }
        Ok(ImprimitiveGroup { pair, n, h_pos })
    }

    pub fn pair(&self) -> &Arc<KHPair> {
        &self.pair
    }

    pub fn k(&self) -> &FiniteGroup {
        self.pair.k()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u128 {
        group_order(&self.pair, self.n)
    }

    fn diag_block(&self) -> usize {
        self.k().order().pow(self.n as u32 - 1) * self.pair.h().len()
    }

    pub fn identity(&self) -> GroupNElement {
        GroupNElement { gains: vec![0; self.n], perm: (0..self.n as u8).collect() }
    }

    pub fn contains(&self, g: &GroupNElement) -> bool {
        if g.gains.len() != self.n || g.perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &p in &g.perm {
            if p as usize >= self.n || std::mem::replace(&mut seen[p as usize], true) {
                return false;
            }
        }
        let k = self.k();
        g.gains.iter().all(|&x| (x as usize) < k.order())
            && self.pair.in_h(g.gains.iter().fold(0, |acc, &x| k.mul(acc, x)))
    }

    pub fn compose(&self, a: &GroupNElement, b: &GroupNElement) -> GroupNElement {
        let k = self.k();
        let n = self.n;
        let mut inv_a = vec![0u8; n];
        for (i, &p) in a.perm.iter().enumerate() {
            inv_a[p as usize] = i as u8;
        }
        let gains = (0..n)
            .map(|i| k.mul(a.gains[i], b.gains[inv_a[i] as usize]))
            .collect();
        let perm = (0..n).map(|i| a.perm[b.perm[i] as usize]).collect();
        GroupNElement { gains, perm }
    }

    pub fn inverse(&self, g: &GroupNElement) -> GroupNElement {
        let k = self.k();
        let n = self.n;
        let mut inv = vec![0u8; n];
        for (i, &p) in g.perm.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        let gains = (0..n).map(|j| k.inv(g.gains[g.perm[j] as usize])).collect();
        GroupNElement { gains, perm: inv }
    }

    /// Element with the given enumeration index.
    pub fn element(&self, idx: usize) -> GroupNElement {
        let k = self.k();
        let kk = k.order();
        let block = self.diag_block();
        let perm = lehmer_unrank(idx / block, self.n);
        let mut a = idx % block;
        let mut gains = vec![0; self.n];
        let mut prefix = 0;
        for g in gains.iter_mut().take(self.n - 1) {
            *g = (a % kk) as Elem;
            a /= kk;
            prefix = k.mul(prefix, *g);
        }
        let h = self.pair.h()[a];
        gains[self.n - 1] = k.mul(k.inv(prefix), h);
        GroupNElement { gains, perm }
    }

    pub fn index_of(&self, g: &GroupNElement) -> usize {
        let k = self.k();
        let kk = k.order();
        let mut idx = 0;
        let mut scale = 1;
        let mut prefix = 0;
        for &x in &g.gains[..self.n - 1] {
            idx += x as usize * scale;
            scale *= kk;
            prefix = k.mul(prefix, x);
        }
        let h = k.mul(prefix, g.gains[self.n - 1]);
        idx += self.h_pos[h as usize] as usize * scale;
        lehmer_rank(&g.perm) * self.diag_block() + idx
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupNElement> + '_ {
        (0..self.order() as usize).map(move |i| self.element(i))
    }

    /// Transpositions of adjacent coordinates, `diag(k, k⁻¹, 1, ...)` for
    /// generators `k` of `K`, and `diag(h, 1, ...)` for generators of `H`.
    pub fn generators(&self) -> Vec<GroupNElement> {
        let k = self.k();
        let mut gens = Vec::new();
        let all: Vec<Elem> = k.elements().collect();
        if self.n >= 2 {
            for x in small_generating_set(k, &all) {
                let mut g = self.identity();
                g.gains[0] = x;
                g.gains[1] = k.inv(x);
                gens.push(g);
            }
        }
        for h in small_generating_set(k, self.pair.h()) {
            let mut g = self.identity();
            g.gains[0] = h;
            gens.push(g);
        }
        for i in 0..self.n.saturating_sub(1) {
            let mut g = self.identity();
            g.perm.swap(i, i + 1);
            gens.push(g);
        }
        gens
    }

    pub fn act_on_hyperplane(&self, g: &GroupNElement, label: HyperplaneLabel) -> HyperplaneLabel {
        let k = self.k();
        match label {
            HyperplaneLabel::Coord(i) => HyperplaneLabel::Coord(g.perm[i] as usize),
            HyperplaneLabel::Edge { i, j, gain } => {
                let (si, sj) = (g.perm[i] as usize, g.perm[j] as usize);
                let z = k.mul(k.mul(g.gains[si], gain), k.inv(g.gains[sj]));
                canonicalize(k, si, sj, z).expect("σ is injective")
            }
        }
    }

    pub fn act_on_flat(&self, g: &GroupNElement, flat: &Flat) -> Flat {
        let k = self.k();
        let n = self.n;
        let mut block = vec![None; n];
        let mut gain = vec![0; n];
        for v in 0..n {
            let t = g.perm[v] as usize;
            if let Some(b) = flat.block_of(v) {
                block[t] = Some(b);
                gain[t] = k.mul(g.gains[t], flat.gain(v));
            }
        }
        Flat::from_raw(k, &block, &gain)
    }

    /// Whether `g` fixes every point of the flat.
    pub fn fixes_pointwise(&self, g: &GroupNElement, flat: &Flat) -> bool {
        let k = self.k();
        (0..self.n).all(|v| match flat.block_of(v) {
            None => true,
            Some(b) => {
                let t = g.perm[v] as usize;
                flat.block_of(t) == Some(b) && k.mul(g.gains[t], flat.gain(v)) == flat.gain(t)
            }
        })
    }

    /// Permutation of hyperplane indices induced by `g`.
    pub fn hyperplane_perm(&self, arr: &Arrangement, g: &GroupNElement) -> Vec<u16> {
        arr.labels()
            .iter()
            .map(|&l| {
                arr.index_of(self.act_on_hyperplane(g, l))
                    .expect("the arrangement is G-stable") as u16
            })
            .collect()
    }

    /// Conjugacy classes as `(smallest index, size)`, ordered by index.
    pub fn conjugacy_classes(&self) -> Vec<(usize, usize)> {
        let order = self.order() as usize;
        let gens: Vec<(GroupNElement, GroupNElement)> = self
            .generators()
            .into_iter()
            .map(|s| {
                let inv = self.inverse(&s);
                (s, inv)
            })
            .collect();
        let mut parent: Vec<u32> = (0..order as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for x in 0..order {
            let g = self.element(x);
            for (s, si) in &gens {
                let c = self.compose(&self.compose(s, &g), si);
                let y = self.index_of(&c);
                let (a, b) = (find(&mut parent, x as u32), find(&mut parent, y as u32));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for x in 0..order as u32 {
            *sizes.entry(find(&mut parent, x)).or_insert(0) += 1;
        }
        let mut classes: Vec<(usize, usize)> = sizes.into_iter().map(|(r, s)| (r as usize, s)).collect();
        classes.sort_unstable();
        classes
    }
}

/// Size limits for brute-force computations.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_group_order: u128,
    pub max_hyperplanes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_group_order: 10_000_000, max_hyperplanes: 80 }
    }
}

/// Iterates `G_n(K,H)` after checking its order against `cap`.
pub fn iterate_group(
    pair: Arc<KHPair>,
    n: usize,
    cap: u128,
) -> Result<impl Iterator<Item = GroupNElement>> {
    let g = ImprimitiveGroup::new(pair, n)?;
    let order = g.order();
    if order > cap {
        return Err(Error::SizeGuard { what: "group order".into(), size: order, limit: cap });
    }
    Ok((0..order as usize).map(move |i| g.element(i)))
}

/// Representatives of the `G`-orbits on flats, grouped by rank.
#[derive(Debug, Clone)]
pub struct FlatOrbits {
    /// `(representative, orbit size)`, representative smallest in the
    /// lattice order.
    pub orbits: Vec<(Flat, usize)>,
}

impl FlatOrbits {
    pub fn count_by_rank(&self, max_rank: usize) -> Vec<usize> {
        let mut out = vec![0; max_rank + 1];
        for (f, _) in &self.orbits {
            out[f.rank()] += 1;
        }
        out
    }
}

/// A fully set-up instance: group, arrangement and OS algebra, with the
/// class data needed for character averaging computed on demand.
pub struct Instance {
    group: ImprimitiveGroup,
    arrangement: Arc<Arrangement>,
    algebra: OsAlgebra,
    classes: OnceLock<Vec<(Vec<u16>, usize)>>,
    perms: OnceLock<Vec<Vec<u16>>>,
    lattice: OnceLock<Lattice>,
}

impl Instance {
    pub fn new(pair: Arc<KHPair>, n: usize, limits: Limits) -> Result<Self> {
        let group = ImprimitiveGroup::new(pair.clone(), n)?;
        let order = group.order();
        if order > limits.max_group_order {
            return Err(Error::SizeGuard {
                what: "group order".into(),
                size: order,
                limit: limits.max_group_order,
            });
        }
        let k = pair.k().order();
        let coords = !pair.h_is_trivial();
        let count = if coords { n } else { 0 } + k * n * (n - 1) / 2;
        if count > limits.max_hyperplanes {
            return Err(Error::SizeGuard {
                what: "hyperplanes".into(),
                size: count as u128,
                limit: limits.max_hyperplanes as u128,
            });
        }
        let arrangement = Arc::new(build_arrangement(pair.k().clone(), n, coords)?);
        let algebra = OsAlgebra::new(arrangement.clone())?;
        Ok(Instance {
            group,
            arrangement,
            algebra,
            classes: OnceLock::new(),
            perms: OnceLock::new(),
            lattice: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &ImprimitiveGroup {
        &self.group
    }

    pub fn arrangement(&self) -> &Arc<Arrangement> {
        &self.arrangement
    }

    pub fn algebra(&self) -> &OsAlgebra {
        &self.algebra
    }

    pub fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| Lattice::new(&self.arrangement))
    }

    pub fn perm_of(&self, g: &GroupNElement) -> Vec<u16> {
        self.group.hyperplane_perm(&self.arrangement, g)
    }

    /// Hyperplane permutation of each conjugacy class representative with
    /// the class size.
    pub fn class_perms(&self) -> &[(Vec<u16>, usize)] {
        self.classes.get_or_init(|| {
            self.group
                .conjugacy_classes()
                .into_iter()
                .map(|(rep, size)| (self.perm_of(&self.group.element(rep)), size))
                .collect()
        })
    }

    /// Distinct hyperplane permutations induced by the group, sorted. Every
    /// one is induced by the same number of group elements.
    pub fn image_perms(&self) -> &[Vec<u16>] {
        self.perms.get_or_init(|| {
            let set: FxHashSet<Vec<u16>> = self.group.iter().map(|g| self.perm_of(&g)).collect();
            let mut v: Vec<Vec<u16>> = set.into_iter().collect();
            v.sort_unstable();
            v
        })
    }

    /// `dim H^{3k}(M(A))^G` as `(1/|G|) Σ_g tr(g | H^{3k})`, summed over
    /// conjugacy classes.
    pub fn invariant_dimension(&self, k: usize) -> Result<usize> {
        if k > self.algebra.rank() {
            return Err(Error::Precondition(format!(
                "degree {k} exceeds the rank {}",
                self.algebra.rank()
            )));
        }
        let classes = self.class_perms();
        let traces: Vec<i128> = classes
            .par_iter()
            .map(|(perm, size)| self.algebra.trace(k, perm) as i128 * *size as i128)
            .collect();
        let total: i128 = traces.into_iter().sum();
        exact_quotient(total, self.group.order() as i128)
    }

    pub fn poincare_direct(&self) -> Result<Vec<usize>> {
        (0..=self.algebra.rank()).map(|k| self.invariant_dimension(k)).collect()
    }

    pub fn act_on_vector(&self, g: &GroupNElement, v: &GradedVector) -> GradedVector {
        self.algebra.act(&self.perm_of(g), v)
    }

    /// `ε_G · v` over the whole group.
    pub fn epsilon_project(&self, v: &GradedVector) -> GradedVector {
        epsilon_project(&self.algebra, self.image_perms(), v)
    }

    /// `G`-orbits on all flats, by union-find over the generator action.
    pub fn flat_orbits(&self) -> FlatOrbits {
        let lat = self.lattice();
        let gens = self.group.generators();
        let mut parent: Vec<usize> = (0..lat.flats.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (x, f) in lat.flats.iter().enumerate() {
            for s in &gens {
                let y = lat.position(&self.group.act_on_flat(s, f)).expect("flats map to flats");
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut sizes: FxHashMap<usize, usize> = FxHashMap::default();
        for x in 0..lat.flats.len() {
            *sizes.entry(find(&mut parent, x)).or_insert(0) += 1;
        }
        let mut reps: Vec<(usize, usize)> = sizes.into_iter().collect();
        reps.sort_unstable();
        FlatOrbits { orbits: reps.into_iter().map(|(r, s)| (lat.flats[r].clone(), s)).collect() }
    }

    /// `N_G(X)`: elements mapping the flat to itself.
    pub fn flat_stabilizer(&self, flat: &Flat) -> Result<Vec<GroupNElement>> {
        if !self.arrangement.is_flat(flat) {
            return Err(Error::InvalidInput("not a flat of the arrangement".into()));
        }
        Ok(self.group.iter().filter(|g| self.group.act_on_flat(g, flat) == *flat).collect())
    }

    /// `Z_G(X)`: elements fixing the flat pointwise.
    pub fn pointwise_stabilizer(&self, flat: &Flat) -> Result<Vec<GroupNElement>> {
        if !self.arrangement.is_flat(flat) {
            return Err(Error::InvalidInput("not a flat of the arrangement".into()));
        }
        Ok(self.group.iter().filter(|g| self.group.fixes_pointwise(g, flat)).collect())
    }

    /// `dim H^{3 rk X}(M(A_X))^{N_G(X)}`.
    pub fn local_top_invariants(&self, flat: &Flat) -> Result<usize> {
        let rank = flat.rank();
        let indices = self.arrangement.hyperplanes_of(flat);
        if indices.len() == self.arrangement.num_hyperplanes() {
            return self.invariant_dimension(rank);
        }
        let local = LocalAction::new(self, flat)?;
        local.invariant_dimension(rank)
    }

    /// Invariant dimensions recomputed after renumbering the hyperplanes,
    /// new generator `i` being old hyperplane `order[i]`.
    pub fn reordered_poincare(&self, order: &[usize]) -> Result<Vec<usize>> {
        let m = self.arrangement.num_hyperplanes();
        let mut pos = vec![usize::MAX; m];
        for (i, &h) in order.iter().enumerate() {
            if h >= m || pos[h] != usize::MAX {
                return Err(Error::InvalidInput("order is not a permutation of the hyperplanes".into()));
            }
            pos[h] = i;
        }
        if order.len() != m {
            return Err(Error::InvalidInput("order is not a permutation of the hyperplanes".into()));
        }
        let oracle: Arc<dyn RankOracle> = Arc::new(Restriction::new(self.arrangement.clone(), order.to_vec()));
        let alg = OsAlgebra::new(oracle)?;
        let perms: Vec<Vec<u16>> = self
            .image_perms()
            .iter()
            .map(|p| order.iter().map(|&h| pos[p[h] as usize] as u16).collect())
            .collect();
        (0..=alg.rank()).map(|k| invariant_dimension_of(&alg, &perms, k)).collect()
    }

    /// Whether `Σ_k (-1)^k dim H^{3k}(M(A))^G` vanishes.
    pub fn euler_check(&self) -> Result<bool> {
        Ok(euler_sum(&self.poincare_direct()?) == 0)
    }

    /// Both sides of `dim H^{3k}(M(A))^G = Σ_X dim H^{3k}(M(A_X))^{N_G(X)}`
    /// over orbit representatives of rank-`k` flats.
    pub fn gdecomp(&self, k: usize) -> Result<(usize, usize)> {
        let lhs = self.invariant_dimension(k)?;
        let mut rhs = 0;
        for (f, _) in self.flat_orbits().orbits.iter().filter(|(f, _)| f.rank() == k) {
            rhs += self.local_top_invariants(f)?;
        }
        Ok((lhs, rhs))
    }

    pub fn gdecomp_check(&self, k: usize) -> Result<bool> {
        let (a, b) = self.gdecomp(k)?;
        Ok(a == b)
    }
}

/// The normalizer of a flat acting on the localized algebra.
pub struct LocalAction {
    pub algebra: OsAlgebra,
    /// Global hyperplane index of each local generator.
    pub indices: Vec<usize>,
    /// Distinct local permutations induced by `N_G(X)`.
    pub perms: Vec<Vec<u16>>,
    pub normalizer_order: usize,
}

impl LocalAction {
    pub fn new(inst: &Instance, flat: &Flat) -> Result<Self> {
        let indices = inst.arrangement.hyperplanes_of(flat);
        let mut pos = vec![u16::MAX; inst.arrangement.num_hyperplanes()];
        for (l, &h) in indices.iter().enumerate() {
            pos[h] = l as u16;
        }
        let normalizer = inst.flat_stabilizer(flat)?;
        let set: FxHashSet<Vec<u16>> = normalizer
            .iter()
            .map(|g| {
                let p = inst.perm_of(g);
                indices.iter().map(|&h| pos[p[h] as usize]).collect()
            })
            .collect();
        let mut perms: Vec<Vec<u16>> = set.into_iter().collect();
        perms.sort_unstable();
        let oracle: Arc<dyn RankOracle> =
            Arc::new(Restriction::new(inst.arrangement.clone(), indices.clone()));
        Ok(LocalAction {
            algebra: OsAlgebra::new(oracle)?,
            indices,
            perms,
            normalizer_order: normalizer.len(),
        })
    }

    pub fn invariant_dimension(&self, k: usize) -> Result<usize> {
        invariant_dimension_of(&self.algebra, &self.perms, k)
    }

    /// Local index of a global hyperplane.
    pub fn local_index(&self, h: usize) -> Option<usize> {
        self.indices.iter().position(|&x| x == h)
    }
}

fn exact_quotient(total: i128, order: i128) -> Result<usize> {
    if total < 0 || total % order != 0 {
        return Err(Error::Unclassified(format!(
            "character average {total}/{order} is not a nonnegative integer"
        )));
    }
    Ok((total / order) as usize)
}

/// `⟨χ_k, 1⟩` for the group formed by a list of distinct permutations.
pub fn invariant_dimension_of(alg: &OsAlgebra, perms: &[Vec<u16>], k: usize) -> Result<usize> {
    let traces: Vec<i64> = perms.par_iter().map(|p| alg.trace(k, p)).collect();
    let total: i128 = traces.into_iter().map(i128::from).sum();
    exact_quotient(total, perms.len() as i128)
}

/// Average of `p · v` over a list of permutations forming a group.
pub fn epsilon_project(alg: &OsAlgebra, perms: &[Vec<u16>], v: &GradedVector) -> GradedVector {
    let k = v.degree();
    let mut out = GradedVector::zero(k);
    let denom = Rational::from_integer((perms.len() as i64).into());
    for (m, c) in v.terms() {
        let mut counts: FxHashMap<Monomial, i64> = FxHashMap::default();
        for p in perms {
            let mut t: Monomial = m.iter().map(|&x| p[x as usize]).collect();
            if let Some(s) = sort_with_sign(&mut t) {
                *counts.entry(t).or_insert(0) += s;
            }
        }
        let dense = alg.expand_counts(k, &counts);
        let terms: Vec<(&[u16], Rational)> = alg
            .basis()
            .degree(k)
            .iter()
            .zip(&dense)
            .filter(|(_, &x)| x != 0)
            .map(|(mono, &x)| (mono.as_slice(), c * Rational::from_integer(x.into()) / &denom))
            .collect();
        out = out.add(&alg.combination(k, terms).expect("basis monomials have the right degree"));
    }
    out
}

pub fn euler_sum(coeffs: &[usize]) -> i64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}
